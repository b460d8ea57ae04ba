use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::{Rational, YRational};

use super::PuiseuxSeries;

/// Generator names and the nilpotency cutoff shared by a family of jets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JetShape {
    generators: Vec<String>,
    top_degree: u32,
}

impl JetShape {
    pub fn new(generators: Vec<String>, top_degree: u32) -> Arc<Self> {
        Arc::new(JetShape {
            generators,
            top_degree,
        })
    }

    /// One generator called `x`.
    pub fn univariate(top_degree: u32) -> Arc<Self> {
        Self::new(vec!["x".into()], top_degree)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    /// All multi-indices of total degree ≤ top degree, in lexicographic order.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if pos == cur.len() {
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        let mut out = Vec::new();
        rec(0, self.top_degree, &mut vec![0; self.rank()], &mut out);
        out
    }
}

/// A linear form Σ c_i ξ_i + c_0 in the generators of a shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LinearForm {
            coeffs,
            constant: Rational::from_integer(0.into()),
        }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// The i-th generator.
    pub fn generator(rank: usize, i: usize) -> Self {
        let mut c = vec![0; rank];
        c[i] = 1;
        Self::from_integers(&c)
    }

    pub fn is_zero(&self) -> bool {
        self.constant == Rational::from_integer(0.into()) && self.coeffs.iter().all(|c| *c == Rational::from_integer(0.into()))
    }

    pub fn scaled(&self, r: &Rational) -> Self {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
            constant: &self.constant * r,
        }
    }

    pub fn to_jet(&self, shape: &Arc<JetShape>) -> Result<Jet> {
        if self.coeffs.len() != shape.rank() {
            return Err(Error::Structural(format!(
                "linear form has {} coefficients, shape has {} generators",
                self.coeffs.len(),
                shape.rank()
            )));
        }
        let mut out = Jet::zero(shape);
        if self.constant != Rational::from_integer(0.into()) {
            out.insert(vec![0; shape.rank()], PuiseuxSeries::exact_constant(YRational::from_rational(self.constant.clone())));
        }
        if shape.top_degree() == 0 {
            return Ok(out);
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut idx = vec![0; shape.rank()];
            idx[i] = 1;
            out.insert(idx, PuiseuxSeries::exact_constant(YRational::from_rational(c.clone())));
        }
        Ok(out)
    }
}

/// Truncated polynomial in nilpotent generators with Puiseux coefficients.
///
/// Exact zero coefficients are never stored. A coefficient that is zero only
/// up to its precision is kept so the precision is not forgotten.
#[derive(Clone, Debug)]
pub struct Jet {
    shape: Arc<JetShape>,
    terms: BTreeMap<Vec<u32>, PuiseuxSeries>,
}

fn degree(idx: &[u32]) -> u32 {
    idx.iter().sum()
}

impl Jet {
    pub fn zero(shape: &Arc<JetShape>) -> Self {
        Jet {
            shape: shape.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(shape: &Arc<JetShape>, c: PuiseuxSeries) -> Self {
        let mut out = Self::zero(shape);
        out.insert(vec![0; shape.rank()], c);
        out
    }

    pub fn one(shape: &Arc<JetShape>) -> Self {
        Self::constant(shape, PuiseuxSeries::one(1, None))
    }

    /// c · ξ^idx (dropped if above the top degree).
    pub fn monomial(shape: &Arc<JetShape>, idx: Vec<u32>, c: PuiseuxSeries) -> Result<Self> {
        if idx.len() != shape.rank() {
            return Err(Error::Structural("multi-index length differs from generator count".into()));
        }
        let mut out = Self::zero(shape);
        out.insert(idx, c);
        Ok(out)
    }

    pub fn generator(shape: &Arc<JetShape>, i: usize) -> Self {
        LinearForm::generator(shape.rank(), i)
            .to_jet(shape)
            .expect("generator index within the shape")
    }

    fn insert(&mut self, idx: Vec<u32>, c: PuiseuxSeries) {
        if degree(&idx) > self.shape.top_degree || (c.is_exact() && c.is_zero()) {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(x) => *x = &*x + &c,
            None => {
                self.terms.insert(idx.clone(), c);
            }
        }
        if self.terms[&idx].is_exact() && self.terms[&idx].is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn shape(&self) -> &Arc<JetShape> {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &PuiseuxSeries)> {
        self.terms.iter()
    }

    /// The coefficient series of ξ^idx.
    pub fn extract_coefficient(&self, idx: &[u32]) -> Result<PuiseuxSeries> {
        if idx.len() != self.shape.rank() {
            return Err(Error::Structural("multi-index length differs from generator count".into()));
        }
        Ok(self.terms.get(idx).cloned().unwrap_or_else(PuiseuxSeries::exact_zero))
    }

    pub fn degree_zero(&self) -> PuiseuxSeries {
        self.extract_coefficient(&vec![0; self.shape.rank()]).expect("shape-consistent index")
    }

    fn check_shape(&self, other: &Jet) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::Structural(format!(
                "jet shapes differ: {:?}/{} vs {:?}/{}",
                self.shape.generators, self.shape.top_degree, other.shape.generators, other.shape.top_degree
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.insert(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        let d = self.shape.top_degree;
        let mut out = Jet::zero(&self.shape);
        for (ia, ca) in &self.terms {
            let da = degree(ia);
            for (ib, cb) in &other.terms {
                if da + degree(ib) > d {
                    continue;
                }
                let idx: Vec<u32> = ia.iter().zip(ib).map(|(a, b)| a + b).collect();
                out.insert(idx, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Jet {
        Jet {
            shape: self.shape.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &PuiseuxSeries) -> Jet {
        let mut out = Jet::zero(&self.shape);
        for (idx, x) in &self.terms {
            out.insert(idx.clone(), x * c);
        }
        out
    }

    pub fn scale_y(&self, c: &YRational) -> Jet {
        let mut out = Jet::zero(&self.shape);
        for (idx, x) in &self.terms {
            out.insert(idx.clone(), x.scale(c));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&PuiseuxSeries) -> PuiseuxSeries) -> Jet {
        let mut out = Jet::zero(&self.shape);
        for (idx, x) in &self.terms {
            out.insert(idx.clone(), f(x));
        }
        out
    }

    /// Truncates every coefficient at q^{order}.
    pub fn truncate_q(&self, order: i64) -> Jet {
        self.map_coeffs(|c| c.truncate_q(order))
    }

    pub fn pow(&self, e: u32) -> Result<Jet> {
        let mut acc = Jet::one(&self.shape);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse of a jet whose degree-zero part is a unit series:
    /// J₀⁻¹ Σ_k (−R J₀⁻¹)^k with R the nilpotent part.
    pub fn invert_unit(&self) -> Result<Jet> {
        let j0 = self.degree_zero();
        let j0_inv = j0.invert_unit()?;
        let zero_idx = vec![0; self.shape.rank()];
        let mut rest = self.clone();
        rest.terms.remove(&zero_idx);
        let step = rest.scale(&j0_inv).neg();
        let mut acc = Jet::one(&self.shape);
        let mut power = Jet::one(&self.shape);
        for _ in 0..self.shape.top_degree {
            power = power.try_mul(&step)?;
            acc = acc.try_add(&power)?;
        }
        Ok(acc.scale(&j0_inv))
    }

    /// Applies the integration functional: Σ integral[idx]·coeff(idx).
    pub fn integrate(&self, integral: &BTreeMap<Vec<u32>, Rational>) -> Result<PuiseuxSeries> {
        let mut acc = PuiseuxSeries::exact_zero();
        for (idx, w) in integral {
            let c = self.extract_coefficient(idx)?;
            acc = &acc + &c.scale(&YRational::from_rational(w.clone()));
        }
        Ok(acc)
    }

    /// Substitutes the linear form `form` (zero constant term) for the single
    /// generator of the univariate jet `self`, landing in `target`.
    pub fn compose_univariate(&self, form: &LinearForm, target: &Arc<JetShape>) -> Result<Jet> {
        if self.shape.rank() != 1 {
            return Err(Error::Structural("composition needs a univariate jet".into()));
        }
        if form.constant != Rational::from_integer(0.into()) {
            return Err(Error::Domain("composition needs a form with zero constant term".into()));
        }
        let l = form.to_jet(target)?;
        let mut out = Jet::zero(target);
        let mut power = Jet::one(target);
        let top = self.shape.top_degree.min(target.top_degree);
        for k in 0..=top {
            if k > 0 {
                power = power.try_mul(&l)?;
            }
            let c = self.extract_coefficient(&[k])?;
            if c.is_exact() && c.is_zero() {
                continue;
            }
            out = out.try_add(&power.scale(&c))?;
        }
        Ok(out)
    }
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.terms == other.terms
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                writeln!(f)?;
            }
            first = false;
            let mono: Vec<String> = idx
                .iter()
                .zip(&self.shape.generators)
                .filter(|(e, _)| **e > 0)
                .map(|(e, g)| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            write!(f, "[{mono}] {}", c.render_inline())?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Σ_{k ≤ d} (scale·L)^k / k! for a linear form L with zero constant term.
pub fn exp_jet(linear: &LinearForm, scale: &YRational, shape: &Arc<JetShape>) -> Result<Jet> {
    if linear.constant != Rational::from_integer(0.into()) {
        return Err(Error::Domain(
            "exponential of a form with nonzero constant term".into(),
        ));
    }
    let l = linear.to_jet(shape)?.scale_y(scale);
    let mut out = Jet::one(shape);
    let mut power = Jet::one(shape);
    for k in 1..=shape.top_degree {
        power = power
            .try_mul(&l)?
            .scale_y(&YRational::from_rational(Rational::new(1.into(), (k as i64).into())));
        out = out.try_add(&power)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    fn c(r: Rational) -> PuiseuxSeries {
        PuiseuxSeries::exact_constant(YRational::from_rational(r))
    }

    fn shape2(d: u32) -> Arc<JetShape> {
        JetShape::new(vec!["a".into(), "b".into()], d)
    }

    #[test]
    fn geometric_inverse() {
        let s = JetShape::univariate(2);
        let xi = Jet::generator(&s, 0);
        let a = Jet::one(&s).try_add(&xi).unwrap();
        let b = Jet::one(&s).try_sub(&xi).unwrap().try_add(&xi.pow(2).unwrap()).unwrap();
        assert_eq!(a.try_mul(&b).unwrap(), Jet::one(&s));
        assert_eq!(a.invert_unit().unwrap(), b);
    }

    #[test]
    fn extract_mixed_coefficient() {
        let s = shape2(2);
        let a = Jet::generator(&s, 0);
        let b = Jet::generator(&s, 1);
        let j = a
            .try_mul(&b)
            .unwrap()
            .try_add(&a.pow(2).unwrap().scale(&c(rat(3, 1))))
            .unwrap();
        assert_eq!(j.extract_coefficient(&[1, 1]).unwrap(), c(rat(1, 1)));
        assert_eq!(j.extract_coefficient(&[2, 0]).unwrap(), c(rat(3, 1)));
    }

    #[test]
    fn shape_mismatch_is_structural() {
        let a = Jet::one(&shape2(2));
        let b = Jet::one(&JetShape::univariate(2));
        assert!(matches!(a.try_mul(&b), Err(Error::Structural(_))));
    }

    #[test]
    fn exp_examples() {
        let s = JetShape::univariate(3);
        let x = LinearForm::from_integers(&[1]);
        let one = YRational::one();
        let e = exp_jet(&x, &one, &s).unwrap();
        let em = exp_jet(&x, &-one.clone(), &s).unwrap();
        assert_eq!(e.try_mul(&em).unwrap(), Jet::one(&s));

        let half = YRational::from_rational(rat(1, 2));
        let sinh = exp_jet(&x, &half, &s)
            .unwrap()
            .try_sub(&exp_jet(&x, &-half.clone(), &s).unwrap())
            .unwrap();
        let xi = Jet::generator(&s, 0);
        let expected = xi.try_add(&xi.pow(3).unwrap().scale(&c(rat(1, 24)))).unwrap();
        assert_eq!(sinh, expected);

        let s2 = shape2(3);
        let sum = exp_jet(&LinearForm::from_integers(&[1, 1]), &YRational::one(), &s2).unwrap();
        let prod = exp_jet(&LinearForm::from_integers(&[1, 0]), &YRational::one(), &s2)
            .unwrap()
            .try_mul(&exp_jet(&LinearForm::from_integers(&[0, 1]), &YRational::one(), &s2).unwrap())
            .unwrap();
        assert_eq!(sum, prod);
    }

    #[test]
    fn exp_rejects_constant() {
        let mut l = LinearForm::from_integers(&[1]);
        l.constant = rat(1, 1);
        assert!(matches!(exp_jet(&l, &YRational::one(), &JetShape::univariate(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn composition_with_linear_form() {
        // exp(x) composed with a + 2b equals exp(a + 2b)
        let u = exp_jet(&LinearForm::from_integers(&[1]), &YRational::one(), &JetShape::univariate(3)).unwrap();
        let s = shape2(3);
        let l = LinearForm::from_integers(&[1, 2]);
        assert_eq!(u.compose_univariate(&l, &s).unwrap(), exp_jet(&l, &YRational::one(), &s).unwrap());
    }

    fn small_series() -> impl Strategy<Value = PuiseuxSeries> {
        prop::collection::vec(-3i64..=3, 4).prop_map(|cs| {
            PuiseuxSeries::from_terms(1, Some(4), cs.into_iter().enumerate().map(|(i, c)| (i as i64, YRational::from_integer(c))))
        })
    }

    fn small_jet(d: u32) -> impl Strategy<Value = Jet> {
        let shape = shape2(d);
        let n = shape.monomials().len();
        prop::collection::vec(small_series(), n).prop_map(move |cs| {
            let mut j = Jet::zero(&shape);
            for (idx, c) in shape.monomials().into_iter().zip(cs) {
                j.insert(idx, c);
            }
            j
        })
    }

    fn brute_coefficient(a: &Jet, b: &Jet, idx: &[u32]) -> PuiseuxSeries {
        let mut acc = PuiseuxSeries::zero(1, Some(4));
        for ia in a.shape.monomials() {
            if ia.iter().zip(idx).any(|(x, y)| x > y) {
                continue;
            }
            let ib: Vec<u32> = idx.iter().zip(&ia).map(|(y, x)| y - x).collect();
            acc = &acc + &(&a.extract_coefficient(&ia).unwrap() * &b.extract_coefficient(&ib).unwrap());
        }
        acc
    }

    fn normalized(j: &Jet) -> BTreeMap<Vec<u32>, PuiseuxSeries> {
        j.shape
            .monomials()
            .into_iter()
            .map(|i| {
                let c = j.extract_coefficient(&i).unwrap();
                (i, c.truncate(4))
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn product_matches_convolution(a in small_jet(3), b in small_jet(3)) {
            let p = a.try_mul(&b).unwrap();
            for idx in a.shape.monomials() {
                prop_assert_eq!(p.extract_coefficient(&idx).unwrap().truncate(4), brute_coefficient(&a, &b, &idx).truncate(4));
            }
        }

        #[test]
        fn extraction_is_linear(a in small_jet(2), b in small_jet(2)) {
            let s = a.try_add(&b).unwrap();
            for idx in a.shape.monomials() {
                let lhs = s.extract_coefficient(&idx).unwrap().truncate(4);
                let rhs = (&a.extract_coefficient(&idx).unwrap() + &b.extract_coefficient(&idx).unwrap()).truncate(4);
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn double_inverse(a in small_jet(3), c0 in 1i64..=3) {
            let unit = a.try_add(&Jet::constant(&a.shape, PuiseuxSeries::from_terms(1, Some(4), [(0, YRational::from_integer(c0 * 7))]))).unwrap();
            prop_assume!(!unit.degree_zero().coeff(0).is_zero());
            let back = unit.invert_unit().unwrap().invert_unit().unwrap();
            prop_assert_eq!(normalized(&back), normalized(&unit));
            let one = unit.try_mul(&unit.invert_unit().unwrap()).unwrap();
            prop_assert_eq!(normalized(&one), normalized(&Jet::one(&a.shape)));
        }
    }
}
