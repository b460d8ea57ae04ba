use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::exactnum::{lcm_u32, Cyclotomic, Rational, YRational};
use crate::error::{Error, Result};

/// A truncated series Σ c_e q^{e/D} with `YRational` coefficients.
///
/// Exponents and the truncation are stored as integers in units of `1/D`.
/// `prec = None` marks an exact (finite) series; otherwise every coefficient
/// at an exponent below `prec` is known exactly and nothing at or above it is
/// stored.
#[derive(Clone, Debug)]
pub struct PuiseuxSeries {
    ram: u32,
    prec: Option<i64>,
    terms: BTreeMap<i64, YRational>,
}

impl PuiseuxSeries {
    pub fn zero(ram: u32, prec: Option<i64>) -> Self {
        assert!(ram >= 1, "ramification must be positive");
        PuiseuxSeries {
            ram,
            prec,
            terms: BTreeMap::new(),
        }
    }

    pub fn exact_zero() -> Self {
        Self::zero(1, None)
    }

    pub fn one(ram: u32, prec: Option<i64>) -> Self {
        Self::constant(YRational::one(), ram, prec)
    }

    pub fn constant(c: YRational, ram: u32, prec: Option<i64>) -> Self {
        Self::monomial(c, 0, ram, prec)
    }

    pub fn exact_constant(c: YRational) -> Self {
        Self::constant(c, 1, None)
    }

    /// c · q^{exp/ram}.
    pub fn monomial(c: YRational, exp: i64, ram: u32, prec: Option<i64>) -> Self {
        Self::from_terms(ram, prec, [(exp, c)])
    }

    pub fn from_terms(ram: u32, prec: Option<i64>, terms: impl IntoIterator<Item = (i64, YRational)>) -> Self {
        let mut out = Self::zero(ram, prec);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: i64, c: YRational) {
        if c.is_zero() || self.prec.is_some_and(|p| e >= p) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ramification(&self) -> u32 {
        self.ram
    }

    /// Truncation in units of `1/D`; `None` for exact series.
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    /// Truncation as a rational exponent of q.
    pub fn precision_q(&self) -> Option<Rational> {
        self.prec.map(|p| Rational::new(p.into(), (self.ram as i64).into()))
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least stored exponent (units of `1/D`).
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Coefficient of q^{exp/D}.
    pub fn coeff(&self, exp: i64) -> YRational {
        self.terms.get(&exp).cloned().unwrap_or_else(YRational::zero)
    }

    /// Coefficient of q^{exp} for a rational exponent.
    pub fn coeff_q(&self, exp: &Rational) -> YRational {
        let scaled = exp * Rational::from_integer((self.ram as i64).into());
        if !scaled.is_integer() {
            return YRational::zero();
        }
        let e: i64 = scaled.to_integer().try_into().unwrap_or(i64::MAX);
        self.coeff(e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &YRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Same series with ramification `target`, a multiple of the current one.
    pub fn lift(&self, target: u32) -> Self {
        assert!(target % self.ram == 0, "ramification must divide the target");
        if target == self.ram {
            return self.clone();
        }
        let k = (target / self.ram) as i64;
        PuiseuxSeries {
            ram: target,
            prec: self.prec.map(|p| p * k),
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.ram == other.ram {
            return (self.clone(), other.clone());
        }
        let m = lcm_u32(self.ram, other.ram);
        (self.lift(m), other.lift(m))
    }

    /// Drops everything at or above q^{prec/D} (never raises the precision).
    pub fn truncate(&self, prec: i64) -> Self {
        let p = match self.prec {
            Some(old) => old.min(prec),
            None => prec,
        };
        PuiseuxSeries {
            ram: self.ram,
            prec: Some(p),
            terms: self.terms.range(..p).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Truncation at q^N for an integer N.
    pub fn truncate_q(&self, order: i64) -> Self {
        self.truncate(order * self.ram as i64)
    }

    pub fn scale(&self, c: &YRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.ram, self.prec);
        }
        PuiseuxSeries {
            ram: self.ram,
            prec: self.prec,
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn scale_cyclotomic(&self, c: &Cyclotomic) -> Self {
        self.scale(&YRational::constant(c.clone()))
    }

    /// Multiplies by q^{shift/D}.
    pub fn shift(&self, shift: i64) -> Self {
        PuiseuxSeries {
            ram: self.ram,
            prec: self.prec.map(|p| p + shift),
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Lowest exponent that bounds every term of the series, known or unknown.
    fn lower_bound(&self) -> Option<i64> {
        self.valuation().or(self.prec)
    }

    pub fn invert_unit(&self) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Err(Error::NonUnit("series has no nonzero coefficient".into()));
        };
        if self.prec.is_none() {
            if self.terms.len() == 1 {
                let c = self.terms[&v].inv()?;
                return Ok(Self::monomial(c, -v, self.ram, None));
            }
            return Err(Error::Domain(
                "an exact series with several terms must be truncated before inversion".into(),
            ));
        }
        let p = self.prec.unwrap();
        let len = p - v;
        let u: Vec<YRational> = (0..len).map(|k| self.coeff(v + k)).collect();
        let b0 = u[0].inv()?;
        let unit_lead = b0.is_one();
        let mut b: Vec<YRational> = Vec::with_capacity(len as usize);
        b.push(b0.clone());
        for k in 1..len as usize {
            let mut acc = YRational::zero();
            for i in 1..=k {
                if u[i].is_zero() || b[k - i].is_zero() {
                    continue;
                }
                acc = &acc + &(&u[i] * &b[k - i]);
            }
            let bk = if unit_lead { -acc } else { -(&acc * &b0) };
            b.push(bk);
        }
        Ok(Self::from_terms(
            self.ram,
            Some(p - 2 * v),
            b.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c)),
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ram, None);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The substitution q^{1/D} ↦ ζ_D^{root} q^{1/D}.
    pub fn twist_qroot(&self, root: i64) -> Self {
        PuiseuxSeries {
            ram: self.ram,
            prec: self.prec,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let z = Cyclotomic::root_of_unity(self.ram, root * e);
                    (*e, c * &YRational::constant(z))
                })
                .collect(),
        }
    }

    /// Numerical value at q = e^{2πiτ}, y = e^z.
    pub fn eval(&self, tau: num_complex::Complex64, z: num_complex::Complex64) -> num_complex::Complex64 {
        let two_pi_i_tau = num_complex::Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau;
        self.terms
            .iter()
            .map(|(e, c)| c.eval(z) * (two_pi_i_tau * (*e as f64 / self.ram as f64)).exp())
            .sum()
    }

    /// Applies `f` to every coefficient (zero results are dropped).
    pub fn map_coeffs(&self, f: impl Fn(&YRational) -> YRational) -> Self {
        Self::from_terms(self.ram, self.prec, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// True when both series agree on every exponent below `bound` (units of
    /// the lcm ramification), regardless of their precisions.
    pub fn agrees_below(&self, other: &Self, bound_q: &Rational) -> bool {
        let (a, b) = self.aligned(other);
        let scaled = bound_q * Rational::from_integer((a.ram as i64).into());
        let bound: i64 = scaled.ceil().to_integer().try_into().unwrap_or(i64::MAX);
        let ka: Vec<_> = a.terms.range(..bound).collect();
        let kb: Vec<_> = b.terms.range(..bound).collect();
        ka == kb
    }

    /// Reduces the ramification to the smallest value compatible with the
    /// stored exponents and the precision.
    pub fn compact(&self) -> Self {
        let mut g = self.ram as i64;
        for e in self.terms.keys() {
            g = g.gcd(e);
        }
        if let Some(p) = self.prec {
            g = g.gcd(&p);
        }
        if g <= 1 {
            return self.clone();
        }
        PuiseuxSeries {
            ram: self.ram / g as u32,
            prec: self.prec.map(|p| p / g),
            terms: self.terms.iter().map(|(e, c)| (e / g, c.clone())).collect(),
        }
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl PartialEq for PuiseuxSeries {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.prec == b.prec && a.terms == b.terms
    }
}

impl Eq for PuiseuxSeries {}

impl<'a> Add<&'a PuiseuxSeries> for &'a PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        let (a, b) = self.aligned(rhs);
        let prec = min_opt(a.prec, b.prec);
        let mut out = PuiseuxSeries::zero(a.ram, prec);
        for (e, c) in a.terms.into_iter().chain(b.terms) {
            out.add_term(e, c);
        }
        out
    }
}

impl<'a> Sub<&'a PuiseuxSeries> for &'a PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a PuiseuxSeries> for &'a PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        let (a, b) = self.aligned(rhs);
        let mut prec = min_opt(a.prec, b.prec);
        if let (Some(pa), Some(vb)) = (a.prec, b.lower_bound()) {
            prec = min_opt(prec, Some(pa + vb));
        }
        if let (Some(pb), Some(va)) = (b.prec, a.lower_bound()) {
            prec = min_opt(prec, Some(pb + va));
        }
        if (a.is_exact() && a.is_zero()) || (b.is_exact() && b.is_zero()) {
            return PuiseuxSeries::zero(a.ram, None);
        }
        let mut acc: BTreeMap<i64, YRational> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea + eb;
                if prec.is_some_and(|p| e >= p) {
                    break;
                }
                let t = ca * cb;
                match acc.get_mut(&e) {
                    Some(x) => *x = &*x + &t,
                    None => {
                        acc.insert(e, t);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        PuiseuxSeries {
            ram: a.ram,
            prec,
            terms: acc,
        }
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries {
            ram: self.ram,
            prec: self.prec,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        -&self
    }
}

forward_owned!(PuiseuxSeries, Add, add);
forward_owned!(PuiseuxSeries, Sub, sub);
forward_owned!(PuiseuxSeries, Mul, mul);
