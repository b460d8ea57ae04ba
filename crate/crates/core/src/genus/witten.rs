use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::{Rational, YRational};
use crate::series::{exp_jet, Jet, JetShape, LinearForm, PuiseuxSeries};

/// A power series in t with jet coefficients, truncated below t^{len}.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries {
    shape: Arc<JetShape>,
    coeffs: Vec<Jet>,
}

impl TSeries {
    pub fn one(shape: &Arc<JetShape>, t_order: usize) -> Self {
        let mut coeffs = vec![Jet::zero(shape); t_order];
        if t_order > 0 {
            coeffs[0] = Jet::one(shape);
        }
        TSeries {
            shape: shape.clone(),
            coeffs,
        }
    }

    pub fn t_order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, m: usize) -> &Jet {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Jet] {
        &self.coeffs
    }

    pub fn try_mul(&self, other: &TSeries) -> Result<TSeries> {
        if self.shape != other.shape {
            return Err(Error::Structural("t-series over different jet shapes".into()));
        }
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![Jet::zero(&self.shape); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = coeffs[i + j].try_add(&a.try_mul(b)?)?;
            }
        }
        Ok(TSeries {
            shape: self.shape.clone(),
            coeffs,
        })
    }

    /// Σ_m c_m q^{km} as a jet over q-series truncated at q^{order}.
    pub fn substitute_q_power(&self, k: i64, order: i64) -> Result<Jet> {
        let mut acc = Jet::zero(&self.shape);
        for (m, c) in self.coeffs.iter().enumerate() {
            let e = k * m as i64;
            if e >= order {
                break;
            }
            let q = PuiseuxSeries::monomial(YRational::one(), e, 1, Some(order));
            acc = acc.try_add(&c.scale(&q))?;
        }
        if acc.is_zero() {
            acc = Jet::constant(&self.shape, PuiseuxSeries::zero(1, Some(order)));
        }
        Ok(acc)
    }
}

/// ch S_t(V) = ∏_j (1 − t e^{x_j})^{−1} for the bundle with roots x_j,
/// truncated below t^{t_order}.
pub fn symmetric_power(roots: &[LinearForm], t_order: usize, shape: &Arc<JetShape>) -> Result<TSeries> {
    let mut acc = TSeries::one(shape, t_order);
    for x in roots {
        let coeffs = (0..t_order)
            .map(|m| exp_jet(x, &YRational::from_integer(m as i64), shape))
            .collect::<Result<Vec<_>>>()?;
        acc = acc.try_mul(&TSeries {
            shape: shape.clone(),
            coeffs,
        })?;
    }
    Ok(acc)
}

fn factorial(m: u32) -> BigInt {
    (1..=m as i64).fold(BigInt::from(1), |acc, i| acc * i)
}

fn univariate_from(coeffs: Vec<Rational>) -> Result<Jet> {
    let shape = JetShape::univariate(coeffs.len() as u32 - 1);
    let mut out = Jet::zero(&shape);
    for (m, c) in coeffs.into_iter().enumerate() {
        out = out.try_add(&Jet::monomial(
            &shape,
            vec![m as u32],
            PuiseuxSeries::exact_constant(YRational::from_rational(c)),
        )?)?;
    }
    Ok(out)
}

/// x/(e^{x/2} − e^{−x/2}) to degree d.
pub fn a_hat_series(d: u32) -> Result<Jet> {
    let coeffs = (0..=d)
        .map(|m| {
            if m % 2 == 1 {
                Rational::from_integer(0.into())
            } else {
                Rational::new(1.into(), BigInt::from(2).pow(m) * factorial(m + 1))
            }
        })
        .collect();
    univariate_from(coeffs)?.invert_unit()
}

/// x/(1 − e^{−x}) to degree d.
pub fn todd_series(d: u32) -> Result<Jet> {
    let coeffs = (0..=d)
        .map(|m| {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            Rational::new(sign.into(), factorial(m + 1))
        })
        .collect();
    univariate_from(coeffs)?.invert_unit()
}

/// ∫ ∏_j x_j/(e^{x_j/2} − e^{−x_j/2}).
pub fn a_hat_genus(
    tangent_roots: &[LinearForm],
    integral: &BTreeMap<Vec<u32>, Rational>,
    shape: &Arc<JetShape>,
) -> Result<Rational> {
    let a = a_hat_series(shape.top_degree())?;
    let mut acc = Jet::one(shape);
    for u in tangent_roots {
        acc = acc.try_mul(&a.compose_univariate(u, shape)?)?;
    }
    let v = acc.integrate(integral)?;
    let c = v.coeff(0);
    if c.is_zero() {
        return Ok(Rational::from_integer(0.into()));
    }
    c.as_constant()
        .and_then(|c| c.as_rational().cloned())
        .ok_or_else(|| Error::Structural("Â-genus is not rational".into()))
}

/// ∫ ∏_j x_j/(e^{x_j/2} − e^{−x_j/2}) · ch(⊗_{k≥1} S_{q^k}(T_ℂ − 2d)) to
/// order q^{order}, for tangent roots x_j.
pub fn witten_genus(
    tangent_roots: &[LinearForm],
    integral: &BTreeMap<Vec<u32>, Rational>,
    shape: &Arc<JetShape>,
    order: i64,
) -> Result<PuiseuxSeries> {
    if order < 1 {
        return Err(Error::Domain(format!("q-order must be at least 1, got {order}")));
    }
    let a = a_hat_series(shape.top_degree())?;
    let mut acc = Jet::constant(shape, PuiseuxSeries::one(1, Some(order)));
    for u in tangent_roots {
        acc = acc.try_mul(&a.compose_univariate(u, shape)?)?;
    }
    // T_ℂ = T ⊕ T̄ has roots ±x_j; subtracting the rank multiplies by (1 − t)^{2d}
    let complexified: Vec<LinearForm> = tangent_roots
        .iter()
        .cloned()
        .chain(tangent_roots.iter().map(|u| u.scaled(&Rational::from_integer((-1).into()))))
        .collect();
    let rank = complexified.len();
    for k in 1..order {
        let t_order = ((order - 1) / k + 1) as usize;
        let s = symmetric_power(&complexified, t_order, shape)?;
        let mut correction = TSeries::one(shape, t_order);
        for _ in 0..rank {
            correction = correction.try_mul(&linear_factor(shape, t_order)?)?;
        }
        acc = acc.try_mul(&s.try_mul(&correction)?.substitute_q_power(k, order)?)?;
    }
    acc.integrate(integral)
}

/// 1 − t
fn linear_factor(shape: &Arc<JetShape>, t_order: usize) -> Result<TSeries> {
    let mut out = TSeries::one(shape, t_order);
    if t_order > 1 {
        out.coeffs[1] = Jet::one(shape).neg();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn point() -> (Arc<JetShape>, BTreeMap<Vec<u32>, Rational>) {
        (JetShape::new(Vec::new(), 0), BTreeMap::from([(Vec::new(), rat(1, 1))]))
    }

    #[test]
    fn point_is_one() {
        let (shape, integral) = point();
        let w = witten_genus(&[], &integral, &shape, 4).unwrap();
        assert_eq!(w, PuiseuxSeries::one(1, Some(4)));
    }

    #[test]
    fn zero_bundle() {
        let shape = JetShape::univariate(2);
        let s = symmetric_power(&[], 4, &shape).unwrap();
        assert_eq!(s, TSeries::one(&shape, 4));
    }

    #[test]
    fn trivial_line_is_geometric() {
        let shape = JetShape::univariate(2);
        let s = symmetric_power(&[LinearForm::from_integers(&[0])], 4, &shape).unwrap();
        for m in 0..4 {
            assert_eq!(s.coeff(m), &Jet::one(&shape));
        }
    }

    #[test]
    fn a_hat_expansion() {
        // 1 − x²/24
        let a = a_hat_series(2).unwrap();
        assert_eq!(
            a.extract_coefficient(&[2]).unwrap(),
            PuiseuxSeries::exact_constant(YRational::from_rational(rat(-1, 24)))
        );
        assert!(a.extract_coefficient(&[1]).unwrap().is_zero());
    }

    #[test]
    fn todd_expansion() {
        // 1 + x/2 + x²/12
        let t = todd_series(2).unwrap();
        let c = |i: u32| t.extract_coefficient(&[i]).unwrap().coeff(0);
        assert_eq!(c(1), YRational::from_rational(rat(1, 2)));
        assert_eq!(c(2), YRational::from_rational(rat(1, 12)));
    }

    #[test]
    fn cp2_leading_terms() {
        // stable tangent roots h, h, h: Â = −1/8 and the q¹ term is 3
        let shape = JetShape::new(vec!["h".into()], 2);
        let roots = vec![LinearForm::from_integers(&[1]); 3];
        let integral = BTreeMap::from([(vec![2], rat(1, 1))]);
        let w = witten_genus(&roots, &integral, &shape, 2).unwrap();
        assert_eq!(w.coeff(0), YRational::from_rational(rat(-1, 8)));
        assert_eq!(w.coeff(1), YRational::from_integer(3));
    }

    #[test]
    fn odd_dimension_a_hat_vanishes() {
        let shape = JetShape::univariate(1);
        let integral = BTreeMap::from([(vec![1], rat(1, 1))]);
        let a = a_hat_genus(&[LinearForm::from_integers(&[2])], &integral, &shape).unwrap();
        assert_eq!(a, rat(0, 1));
    }
}
