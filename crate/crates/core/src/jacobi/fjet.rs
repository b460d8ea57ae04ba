use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exactnum::{Cyclotomic, Rational, YRational};
use crate::series::{Jet, JetShape, PuiseuxSeries};

/// f(x + 2πiL/n + 2πiKτ/n) = x^{zero_order} · unit, as a univariate jet in x.
#[derive(Clone, Debug)]
pub struct ShiftedF {
    pub zero_order: u32,
    pub unit: Jet,
}

type Key = (i64, i64, u32, u32, i64);

fn cache() -> &'static Mutex<HashMap<Key, Arc<ShiftedF>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<ShiftedF>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Expansion of f at the torsion shift (L, K)/n to jet degree `degree` and
/// q-order `order` (an integer power of q).
///
/// Uses f = y^{−1/2} P(s)/P(s/y) with P(s) = ∏_{j≥0}(1 − q^j s) ∏_{j≥1}(1 − q^j/s)
/// and s = ζ_n^L q^{K/n} e^x.
pub fn shifted_f(l: i64, k: i64, n: u32, degree: u32, order: i64) -> Result<Arc<ShiftedF>> {
    if n == 0 {
        return Err(Error::Domain("torsion order must be positive".into()));
    }
    if order < 1 {
        return Err(Error::Domain(format!("q-order must be at least 1, got {order}")));
    }
    let key = (l, k, n, degree, order);
    if let Some(hit) = cache().lock().expect("f cache").get(&key) {
        return Ok(hit.clone());
    }
    let computed = Arc::new(expand_shifted_f(l, k, n, degree, order)?);
    let mut guard = cache().lock().expect("f cache");
    Ok(guard.entry(key).or_insert(computed).clone())
}

struct Product {
    zero_order: u32,
    constant: YRational,
    unit: Jet,
}

/// e^{σx} truncated at degree d: coefficients σ^m/m!.
fn exp_coeffs(sigma: i64, d: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(d as usize + 1);
    let mut c = Rational::from_integer(1.into());
    out.push(c.clone());
    for m in 1..=d as i64 {
        c = c * Rational::new(sigma.into(), m.into());
        out.push(c.clone());
    }
    out
}

/// ∏ over the factors of P(c₀ s) with s = ζ_n^L q^{K/n} e^x.
fn expand_p(l: i64, k: i64, n: u32, y_shift: i64, shape: &Arc<JetShape>, prec: i64) -> Result<Product> {
    let ni = n as i64;
    let d = shape.top_degree();
    let mut out = Product {
        zero_order: 0,
        constant: YRational::one(),
        unit: Jet::one(shape),
    };
    // (1 − c q^{e/n} e^{σx}) for the two families of factors
    let mut factors = Vec::new();
    let mut j = 0i64;
    loop {
        let e1 = j * ni + k;
        let e2 = (j + 1) * ni - k;
        if e1 >= prec && e2 >= prec {
            break;
        }
        factors.push((l, y_shift, e1, 1i64));
        factors.push((-l, -y_shift, e2, -1i64));
        j += 1;
    }
    let series = |c: YRational, e: i64| PuiseuxSeries::monomial(c, e, n, Some(prec));
    for (ell, yexp, e, sigma) in factors {
        let c = YRational::monomial(Cyclotomic::root_of_unity(n, ell), yexp, 1);
        let (c, e, sigma) = if e < 0 {
            // 1 − c q^e E = (−c q^e E)(1 − c^{-1} q^{-e} E^{-1}); q^e E cancels in the ratio
            out.constant = &out.constant * &(-&c);
            (c.inv()?, -e, -sigma)
        } else {
            (c, e, sigma)
        };
        if e >= prec {
            continue;
        }
        let coeffs = exp_coeffs(sigma, d);
        let factor = if e == 0 && c.is_one() {
            // 1 − e^{σx} = −σx · Σ_m (σx)^m/(m+1)!
            out.zero_order += 1;
            let mut f = Jet::zero(shape);
            for m in 0..=d {
                let v = Rational::from_integer((-sigma).into())
                    * Rational::from_integer(sigma.pow(m).into())
                    / Rational::from_integer(factorial(m as i64 + 1));
                f = f.try_add(&Jet::monomial(
                    shape,
                    vec![m],
                    PuiseuxSeries::constant(YRational::from_rational(v), n, Some(prec)),
                )?)?;
            }
            f
        } else {
            let mut f = Jet::constant(shape, PuiseuxSeries::one(n, Some(prec)));
            for (m, cm) in coeffs.iter().enumerate() {
                let term = series(&c.scale(&Cyclotomic::from_rational(cm.clone())) * &YRational::from_integer(-1), e);
                f = f.try_add(&Jet::monomial(shape, vec![m as u32], term)?)?;
            }
            f
        };
        out.unit = out.unit.try_mul(&factor)?;
    }
    Ok(out)
}

fn factorial(m: i64) -> num_bigint::BigInt {
    (1..=m).fold(num_bigint::BigInt::from(1), |acc, i| acc * i)
}

fn expand_shifted_f(l: i64, k: i64, n: u32, degree: u32, order: i64) -> Result<ShiftedF> {
    let shape = JetShape::univariate(degree);
    let prec = order * n as i64;
    let num = expand_p(l, k, n, 0, &shape, prec)?;
    let den = expand_p(l, k, n, -1, &shape, prec)?;
    if den.zero_order > 0 {
        return Err(Error::Pole("theta(x - z) vanishes identically".into()));
    }
    let constant = &(&num.constant * &den.constant.inv()?) * &YRational::y_power(-1, 2);
    let unit = num.unit.try_mul(&den.unit.invert_unit()?)?.scale_y(&constant);
    Ok(ShiftedF {
        zero_order: num.zero_order,
        unit,
    })
}

/// Jet of f(x + 2πiℓ/n + 2πi(k/n)τ) in x; a pole error when the shift is a
/// lattice point.
pub fn f_jet(l: i64, k: i64, n: u32, degree: u32, order: i64) -> Result<Jet> {
    let sf = shifted_f(l, k, n, degree, order)?;
    if sf.zero_order > 0 {
        return Err(Error::Pole(format!(
            "f vanishes at the shift ({l}, {k})/{n}; use x/f instead"
        )));
    }
    Ok(sf.unit.clone())
}

/// Jet of 1/f(x + 2πiℓ/n + 2πi(k/n)τ).
pub fn f_jet_inverse(l: i64, k: i64, n: u32, degree: u32, order: i64) -> Result<Jet> {
    f_jet(l, k, n, degree, order)?.invert_unit()
}

/// Jet of x/f(x).
pub fn x_over_f_jet(degree: u32, order: i64) -> Result<Jet> {
    let sf = shifted_f(0, 0, 1, degree, order)?;
    debug_assert_eq!(sf.zero_order, 1);
    sf.unit.invert_unit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::numeric_f_eval;
    use num_complex::Complex64;

    fn y(e: i64, r: u32) -> YRational {
        YRational::y_power(e, r)
    }

    #[test]
    fn x_over_f_leading_term() {
        let j = x_over_f_jet(2, 3).unwrap();
        let c0 = j.extract_coefficient(&[0]).unwrap();
        assert_eq!(c0.coeff(0), &y(-1, 2) - &y(1, 2));
    }

    #[test]
    fn x_over_f_is_not_even() {
        let j = x_over_f_jet(1, 2).unwrap();
        assert!(!j.extract_coefficient(&[1]).unwrap().is_zero());
    }

    #[test]
    fn half_period_value() {
        // s = −1 at q^0: y^{-1/2}·2/(1 + y^{-1}) = 2/(y^{1/2} + y^{-1/2})
        let j = f_jet(1, 0, 2, 1, 2).unwrap();
        let c0 = j.extract_coefficient(&[0]).unwrap().coeff(0);
        let expected = YRational::from_integer(2).div(&(&y(1, 2) + &y(-1, 2))).unwrap();
        assert_eq!(c0, expected);
    }

    #[test]
    fn lattice_point_is_a_pole() {
        assert!(matches!(f_jet(0, 0, 3, 1, 2), Err(Error::Pole(_))));
        assert!(matches!(f_jet(3, 3, 3, 1, 2), Err(Error::Pole(_))));
    }

    #[test]
    fn periodicity() {
        for n in 2..=4u32 {
            let ni = n as i64;
            for l in 0..ni {
                for k in 0..ni {
                    if l == 0 && k == 0 {
                        continue;
                    }
                    let base = f_jet(l, k, n, 2, 3).unwrap();
                    assert_eq!(f_jet(l + ni, k, n, 2, 3).unwrap(), base);
                    let shifted = f_jet(l, k + ni, n, 2, 3).unwrap();
                    let expected = base.scale_y(&y(-1, 1));
                    let p = 3 * ni;
                    for idx in [[0u32], [1], [2]] {
                        let a = shifted.extract_coefficient(&idx).unwrap().truncate(p);
                        let b = expected.extract_coefficient(&idx).unwrap().truncate(p);
                        let bound = a.precision().unwrap().min(b.precision().unwrap());
                        assert_eq!(a.truncate(bound), b.truncate(bound), "n={n} l={l} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn numeric_cross_check() {
        let tau = Complex64::new(0.1, 0.9);
        let z = Complex64::new(0.3, -0.2);
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        for (l, k, n) in [(1, 0, 2), (1, 1, 3), (0, 1, 2), (2, 1, 3)] {
            let j = f_jet(l, k, n, 0, 8).unwrap();
            let sym = j.extract_coefficient(&[0]).unwrap().eval(tau, z);
            let shift = two_pi_i * (l as f64 / n as f64) + two_pi_i * tau * (k as f64 / n as f64);
            let num = numeric_f_eval(tau, shift, z, 40);
            assert!((sym - num).norm() < 1e-8, "{l} {k} {n}: {sym} vs {num}");
        }
    }
}
