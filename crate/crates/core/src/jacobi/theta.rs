use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{Rational, YRational};

/// Finite Laurent polynomial in s^{1/2} with `YRational` coefficients.
/// Keys are exponents of s in half-units.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoVarLaurent {
    terms: BTreeMap<i64, YRational>,
}

impl TwoVarLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, YRational)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: i64, c: YRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(YRational::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of s^{e/2}.
    pub fn coeff(&self, half_exp: i64) -> YRational {
        self.terms.get(&half_exp).cloned().unwrap_or_else(YRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &YRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn eval(&self, x: Complex64, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c.eval(z) * (x * (*e as f64 / 2.0)).exp())
            .sum()
    }
}

impl fmt::Display for TwoVarLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("[{}]*s^({e}/2)", c.pretty()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A q-series with `TwoVarLaurent` coefficients. q-exponents are in
/// half-units; everything below q^{prec/2} is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    prec: i64,
    terms: BTreeMap<i64, TwoVarLaurent>,
}

impl ThetaSeries {
    pub fn zero(prec: i64) -> Self {
        ThetaSeries {
            prec,
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, q2: i64, s2: i64, c: YRational) {
        if q2 >= self.prec || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(q2).or_default();
        entry.add_term(s2, c);
        if entry.is_zero() {
            self.terms.remove(&q2);
        }
    }

    pub fn from_terms(prec: i64, terms: impl IntoIterator<Item = (i64, i64, YRational)>) -> Self {
        let mut out = Self::zero(prec);
        for (q2, s2, c) in terms {
            out.add_term(q2, s2, c);
        }
        out
    }

    /// Precision in half-units of q.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Coefficient of q^{e/2}.
    pub fn coeff(&self, half_exp: i64) -> TwoVarLaurent {
        self.terms.get(&half_exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, &YRational)> {
        self.terms
            .iter()
            .flat_map(|(q, l)| l.terms().map(move |(s, c)| (*q, s, c)))
    }

    fn lower_bound(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.prec)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let mut out = Self::zero(prec.min(self.prec));
        out.terms = self.terms.range(..out.prec).map(|(k, v)| (*k, v.clone())).collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = (self.prec + other.lower_bound()).min(other.prec + self.lower_bound());
        let mut out = Self::zero(prec);
        for (qa, sa, ca) in self.terms() {
            for (qb, sb, cb) in other.terms() {
                out.add_term(qa + qb, sa + sb, ca * cb);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|q, s, c| (q, s, -c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.prec.min(other.prec));
        for (q, s, c) in self.terms().chain(other.terms()) {
            out.add_term(q, s, c.clone());
        }
        out
    }

    /// Multiplies by c·q^{q2/2}·s^{s2/2}.
    pub fn mul_monomial(&self, q2: i64, s2: i64, c: &YRational) -> Self {
        let mut out = self.map(|q, s, x| (q + q2, s + s2, x * c));
        out.prec = self.prec + q2;
        out
    }

    fn map(&self, f: impl Fn(i64, i64, &YRational) -> (i64, i64, YRational)) -> Self {
        let mut out = Self::zero(self.prec);
        for (q, s, c) in self.terms() {
            let (q, s, c) = f(q, s, c);
            out.add_term(q, s, c);
        }
        out
    }

    /// s ↦ s^{-1}.
    pub fn invert_s(&self) -> Self {
        self.map(|q, s, c| (q, -s, c.clone()))
    }

    /// s ↦ s/y.
    pub fn divide_s_by_y(&self) -> Self {
        self.map(|q, s, c| (q, s, c * &YRational::y_power(-s, 2)))
    }

    /// x ↦ x + 2πi: s is fixed but s^{1/2} changes sign.
    pub fn ell_shift(&self) -> Self {
        self.map(|q, s, c| (q, s, if s.rem_euclid(2) == 1 { -c } else { c.clone() }))
    }

    /// s ↦ q^k s applied to every stored term. The caller supplies the
    /// precision of the result.
    fn q_shift_terms(&self, k: i64, prec: i64) -> Self {
        let mut out = Self::zero(prec);
        for (q, s, c) in self.terms() {
            out.add_term(q + k * s, s, c.clone());
        }
        out
    }

    /// Numerical value with q = e^{2πiτ}, s = e^x, y = e^z.
    pub fn eval(&self, tau: Complex64, x: Complex64, z: Complex64) -> Complex64 {
        let half_q = Complex64::new(0.0, std::f64::consts::PI) * tau;
        self.terms
            .iter()
            .map(|(q, l)| (half_q * *q as f64).exp() * l.eval(x, z))
            .sum()
    }

    /// First q-exponent (half-units) below `bound` where the two series
    /// differ.
    pub fn first_mismatch(&self, other: &Self, bound: i64) -> Option<i64> {
        let keys: std::collections::BTreeSet<i64> = self
            .terms
            .range(..bound)
            .chain(other.terms.range(..bound))
            .map(|(k, _)| *k)
            .collect();
        keys.into_iter().find(|k| self.coeff(*k) != other.coeff(*k))
    }
}

impl fmt::Display for ThetaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, l) in &self.terms {
            writeln!(f, "q^({q}/2) : {l}")?;
        }
        write!(f, "O(q^({}/2))", self.prec)
    }
}

/// The pair (θ̃(x), θ̃(x−z)) whose ratio is f, with e^{x−z} = s/y.
#[derive(Clone, Debug)]
pub struct FractionPair {
    pub numerator: ThetaSeries,
    pub denominator: ThetaSeries,
}

impl FractionPair {
    pub fn new(order: i64) -> Result<Self> {
        let theta = theta_reduced(order)?;
        Ok(FractionPair {
            denominator: theta.divide_s_by_y(),
            numerator: (*theta).clone(),
        })
    }
}

fn theta_cache() -> &'static Mutex<HashMap<i64, Arc<ThetaSeries>>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<ThetaSeries>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// (s^{1/2} − s^{−1/2}) ∏_{1≤k<N} (1−q^k)(1−q^k s)(1−q^k s^{−1}), truncated at q^N.
pub fn theta_reduced(order: i64) -> Result<Arc<ThetaSeries>> {
    if order < 1 {
        return Err(Error::Domain(format!("theta order must be at least 1, got {order}")));
    }
    if let Some(t) = theta_cache().lock().expect("theta cache").get(&order) {
        return Ok(t.clone());
    }
    let computed = Arc::new(expand_theta(order));
    let mut cache = theta_cache().lock().expect("theta cache");
    Ok(cache.entry(order).or_insert(computed).clone())
}

fn expand_theta(order: i64) -> ThetaSeries {
    // integer coefficients keyed by (q, 2·s-exponent)
    let mut acc: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
    acc.insert((0, 1), BigInt::one());
    acc.insert((0, -1), -BigInt::one());
    for k in 1..order {
        for ds in [0i64, 2, -2] {
            let mut next = acc.clone();
            for ((q, s), c) in &acc {
                if q + k < order {
                    let slot = next.entry((q + k, s + ds)).or_insert_with(BigInt::zero);
                    *slot -= c;
                }
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
        }
    }
    ThetaSeries::from_terms(
        2 * order,
        acc.into_iter().map(|((q, s), c)| {
            (2 * q, s, YRational::from_rational(Rational::from_integer(c)))
        }),
    )
}

/// Largest p with p(p+1)/2 ≤ m: the largest excess of |s-exponent| over 1/2
/// that the product can produce at q^m.
fn s_excess(m: i64) -> i64 {
    let mut p = 0;
    while (p + 1) * (p + 2) / 2 <= m {
        p += 1;
    }
    p
}

/// Precision (half-units) of θ̃(q^k s) when θ̃ is known below q^w, using that
/// a term q^m s^a of θ̃ has |a| ≤ s_excess(m) + 1/2.
fn shifted_precision(w: i64, k: i64) -> i64 {
    if k == 0 {
        return 2 * w;
    }
    let k = k.abs();
    let mut best = 2 * w - k * (2 * s_excess(w) + 1);
    let top = s_excess(w).max(k) + 2;
    for p in 0..=top {
        let t = p * (p + 1) / 2;
        if t >= w {
            best = best.min(2 * t - k * (2 * p + 1));
        }
    }
    best
}

/// θ̃ with s ↦ q^k s, from the expansion of θ̃ to q^w.
pub fn theta_q_shifted(theta: &ThetaSeries, k: i64) -> ThetaSeries {
    let w = theta.precision() / 2;
    theta.q_shift_terms(k, shifted_precision(w, k))
}

/// Outcome of an exact identity check between two q-series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    /// Identity verified for every q-exponent below this (integer) order.
    pub order: i64,
    /// First q-exponent where the sides differ, if any.
    pub first_mismatch: Option<Rational>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_mismatch {
            None => write!(f, "{}: ok below q^{}", self.name, self.order),
            Some(e) => write!(f, "{}: mismatch at q^({})", self.name, e),
        }
    }
}

fn half(e: i64) -> Rational {
    Rational::new(e.into(), 2.into())
}

fn compare(name: &str, lhs: &ThetaSeries, rhs: &ThetaSeries, order: i64) -> Result<CheckOutcome> {
    let bound = lhs.precision().min(rhs.precision());
    if bound < 2 * order {
        return Err(Error::Resource(format!(
            "{name}: sides only known below q^({bound}/2)"
        )));
    }
    Ok(CheckOutcome {
        name: name.into(),
        order,
        first_mismatch: lhs.first_mismatch(rhs, 2 * order).map(half),
    })
}

/// Expands θ̃ far enough that `needed(theta)` is satisfied.
fn with_working_theta<T>(order: i64, mut attempt: impl FnMut(&ThetaSeries) -> Option<T>) -> Result<T> {
    let mut w = order.max(1);
    loop {
        let theta = theta_reduced(w)?;
        if let Some(out) = attempt(&theta) {
            return Ok(out);
        }
        w += order.max(2);
    }
}

/// Checks −q^{1/2} s θ̃(qs) = θ̃(s) on the supplied expansion of θ̃ below
/// q^order; the expansion must reach far enough past `order`.
pub fn check_quasi_periodicity(theta: &ThetaSeries, order: i64) -> Result<CheckOutcome> {
    let lhs = theta_q_shifted(theta, 1).mul_monomial(1, 2, &-YRational::one());
    compare("theta quasi-periodicity", &lhs, theta, order)
}

/// θ̃(x + 2πiτ) = −q^{−1/2} s^{−1} θ̃(x), exact below q^order.
pub fn theta_shift_check(order: i64) -> Result<CheckOutcome> {
    if order < 2 {
        return Err(Error::Domain("theta shift check needs order at least 2".into()));
    }
    with_working_theta(order, |theta| {
        let w = theta.precision() / 2;
        (shifted_precision(w, 1) + 1 >= 2 * order)
            .then(|| check_quasi_periodicity(theta, order))
    })?
}

/// θ̃(x + 2πi) = −θ̃(x): the half-power s^{1/2} changes sign.
pub fn theta_ell_shift_check(order: i64) -> Result<CheckOutcome> {
    let theta = theta_reduced(order)?;
    compare("theta integer period", &theta.ell_shift(), &theta.neg(), order)
}

fn fraction_sides(theta: &ThetaSeries, k: i64) -> (ThetaSeries, ThetaSeries) {
    let num = theta.clone();
    let den = theta.divide_s_by_y();
    let (num_k, den_k) = if k == 0 {
        (num.ell_shift(), den.ell_shift())
    } else {
        let shifted = theta_q_shifted(theta, k);
        (shifted.clone(), shifted.divide_s_by_y())
    };
    let lhs = num_k.mul(&den);
    let rhs = num.mul(&den_k).mul_monomial(0, 0, &YRational::y_power(-k, 1));
    (lhs, rhs)
}

/// f(x + 2πiℓ + 2πikτ) = y^{−k} f(x) by cross-multiplication:
/// Num(q^k s)·Den(s) = y^{−k}·Num(s)·Den(q^k s), exact below q^order.
/// `k = 0` checks the integer period x ↦ x + 2πi.
pub fn f_fraction_check(order: i64, k: i64) -> Result<CheckOutcome> {
    if order < 2 {
        return Err(Error::Domain("fraction check needs order at least 2".into()));
    }
    if k < 0 {
        return Err(Error::Domain("fraction check takes k ≥ 0".into()));
    }
    let name = format!("f quasi-periodicity k={k}");
    with_working_theta(order, |theta| {
        let (lhs, rhs) = fraction_sides(theta, k);
        (lhs.precision().min(rhs.precision()) >= 2 * order).then(|| compare(&name, &lhs, &rhs, order))
    })?
}

/// The k = 1 identity at the shifted point qs, i.e.
/// Num(q²s)·Den(qs) = y^{−1}·Num(qs)·Den(q²s); together with the k = 1 check
/// this composes to the k = 2 identity.
pub fn f_fraction_composition_check(order: i64) -> Result<CheckOutcome> {
    with_working_theta(order, |theta| {
        let t1 = theta_q_shifted(theta, 1);
        let t2 = theta_q_shifted(theta, 2);
        let lhs = t2.mul(&t1.divide_s_by_y());
        let rhs = t1
            .mul(&t2.divide_s_by_y())
            .mul_monomial(0, 0, &YRational::y_power(-1, 1));
        (lhs.precision().min(rhs.precision()) >= 2 * order)
            .then(|| compare("f quasi-periodicity composed", &lhs, &rhs, order))
    })?
}

/// Truncated product θ̃(x) evaluated in floating point.
pub fn numeric_theta_eval(tau: Complex64, x: Complex64, order: i64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau).exp();
    let s = x.exp();
    let mut acc = (x / 2.0).exp() - (-x / 2.0).exp();
    let mut qk = Complex64::new(1.0, 0.0);
    for _ in 1..order {
        qk *= q;
        acc *= (1.0 - qk) * (1.0 - qk * s) * (1.0 - qk / s);
    }
    acc
}

/// f(x) = θ̃(x)/θ̃(x − z) in floating point.
pub fn numeric_f_eval(tau: Complex64, x: Complex64, z: Complex64, order: i64) -> Complex64 {
    numeric_theta_eval(tau, x, order) / numeric_theta_eval(tau, x - z, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yi(n: i64) -> YRational {
        YRational::from_integer(n)
    }

    #[test]
    fn leading_coefficients() {
        let t = theta_reduced(4).unwrap();
        assert_eq!(t.coeff(0), TwoVarLaurent::from_terms([(1, yi(1)), (-1, yi(-1))]));
        // −(s^{1/2} − s^{−1/2})(1 + s + s^{−1}) = −s^{3/2} + s^{−3/2}
        assert_eq!(t.coeff(2), TwoVarLaurent::from_terms([(3, yi(-1)), (-3, yi(1))]));
    }

    #[test]
    fn oddness() {
        for n in 1..8 {
            let t = theta_reduced(n).unwrap();
            assert_eq!(t.invert_s(), t.neg());
        }
    }

    #[test]
    fn closed_form_agreement() {
        // θ̃ = Σ_r (−1)^{r+1} q^{r(r−1)/2} s^{r−1/2}
        let n = 15;
        let t = theta_reduced(n).unwrap();
        let mut expected = ThetaSeries::zero(2 * n);
        for r in -10i64..=10 {
            let sign = if r % 2 == 0 { -1 } else { 1 };
            expected.add_term(r * (r - 1), 2 * r - 1, yi(sign));
        }
        assert_eq!(*t, expected);
    }

    #[test]
    fn shift_identity() {
        assert!(theta_shift_check(12).unwrap().passed());
        assert!(theta_ell_shift_check(6).unwrap().passed());
    }

    #[test]
    fn corrupted_series_fails_at_q0() {
        let t = theta_reduced(24).unwrap();
        let mut bad = (*t).clone();
        bad.add_term(0, 1, yi(1));
        let out = check_quasi_periodicity(&bad, 12).unwrap();
        assert_eq!(out.first_mismatch, Some(Rational::zero()));
    }

    #[test]
    fn fraction_identities() {
        for k in 0..=2 {
            assert!(f_fraction_check(6, k).unwrap().passed(), "k = {k}");
        }
        assert!(f_fraction_composition_check(6).unwrap().passed());
    }

    #[test]
    fn wrong_y_power_is_detected() {
        let t = theta_reduced(12).unwrap();
        let (lhs, rhs) = fraction_sides(&t, 1);
        let wrong = rhs.mul_monomial(0, 0, &YRational::y_power(2, 1));
        assert!(lhs.first_mismatch(&wrong, 8).is_some());
    }

    #[test]
    fn numeric_agreement() {
        let tau = Complex64::new(0.0, 1.0);
        let x = Complex64::new(0.0, 0.3);
        let t = theta_reduced(20).unwrap();
        let sym = t.eval(tau, x, Complex64::new(0.0, 0.0));
        assert!((sym - numeric_theta_eval(tau, x, 20)).norm() < 1e-8);
        assert!(numeric_theta_eval(tau, Complex64::new(0.0, 0.0), 20).norm() < 1e-15);
        let x = Complex64::new(0.2, 0.7);
        assert!((numeric_theta_eval(tau, x, 20) + numeric_theta_eval(tau, -x, 20)).norm() < 1e-12);
    }
}
