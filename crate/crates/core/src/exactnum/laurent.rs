//! Laurent polynomials in one variable `t` over cyclotomic coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use super::Cyclotomic;
use crate::error::{Error, Result};

/// Σ coeffs[i] t^{low + i}; trimmed so the first and last coefficients are
/// nonzero. The zero polynomial has no coefficients and `low = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<Cyclotomic>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(Cyclotomic::one())
    }

    pub fn monomial(c: Cyclotomic, exp: i64) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<Cyclotomic>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.trim();
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Cyclotomic)>) -> Self {
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![Cyclotomic::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = &*slot + &c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Cyclotomic {
        let i = exp - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Cyclotomic::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn lowest_coeff(&self) -> Option<&Cyclotomic> {
        self.coeffs.first()
    }

    pub fn leading_coeff(&self) -> Option<&Cyclotomic> {
        self.coeffs.last()
    }

    /// Nonzero terms in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Cyclotomic)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn shift(&self, by: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            low: self.low + by,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Substitutes t ↦ t^k for k ≥ 1.
    pub fn inflate(&self, k: i64) -> Self {
        assert!(k >= 1);
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c.clone())))
    }

    /// Substitutes t^k ↦ t; every exponent must be divisible by `k`.
    pub fn deflate(&self, k: i64) -> Self {
        assert!(k >= 1);
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        Self::from_terms(self.terms().map(|(e, c)| {
            debug_assert_eq!(e % k, 0);
            (e / k, c.clone())
        }))
    }

    /// gcd of all exponents carrying nonzero coefficients (0 for the zero polynomial).
    pub fn exponent_gcd(&self) -> i64 {
        self.terms()
            .fold(0i64, |g, (e, _)| num_integer::gcd(g, e))
    }

    /// Division with remainder for ordinary polynomials (`low() >= 0`).
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.low < 0 || divisor.low < 0 {
            return Err(Error::Domain("divrem needs ordinary polynomials".into()));
        }
        let a = self.dense();
        let b = divisor.dense();
        let db = b.len() - 1;
        if a.len() < b.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = b[db].inv()?;
        let mut r = a;
        let mut q = vec![Cyclotomic::zero(); r.len() - db];
        for shift in (0..q.len()).rev() {
            let top = &r[shift + db];
            if top.is_zero() {
                continue;
            }
            let c = top * &lead_inv;
            for (i, bi) in b.iter().enumerate() {
                if !bi.is_zero() {
                    r[shift + i] = &r[shift + i] - &(&c * bi);
                }
            }
            q[shift] = c;
        }
        Ok((Self::from_coeffs(0, q), Self::from_coeffs(0, r)))
    }

    fn dense(&self) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(); self.low.max(0) as usize];
        v.extend(self.coeffs.iter().cloned());
        v
    }

    pub fn make_monic(&self) -> Result<Self> {
        match self.leading_coeff() {
            None => Ok(self.clone()),
            Some(c) => Ok(self.scale(&c.inv()?)),
        }
    }

    /// Monic gcd of two ordinary polynomials.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self> {
        let (mut r0, mut r1) = (a.make_monic()?, b.make_monic()?);
        if r0.high() < r1.high() {
            std::mem::swap(&mut r0, &mut r1);
        }
        while !r1.is_zero() {
            let (_, r) = r0.divrem(&r1)?;
            r0 = std::mem::replace(&mut r1, r.make_monic()?);
        }
        Ok(r0)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.high().max(rhs.high());
        let coeffs = (lo..=hi)
            .map(|e| {
                let a = e - self.low;
                let b = e - rhs.low;
                let ia = (a >= 0 && a < self.coeffs.len() as i64).then(|| &self.coeffs[a as usize]);
                let ib = (b >= 0 && b < rhs.coeffs.len() as i64).then(|| &rhs.coeffs[b as usize]);
                match (ia, ib) {
                    (Some(x), Some(y)) => x + y,
                    (Some(x), None) => x.clone(),
                    (None, Some(y)) => y.clone(),
                    (None, None) => Cyclotomic::zero(),
                }
            })
            .collect();
        LaurentPoly::from_coeffs(lo, coeffs)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![Cyclotomic::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        LaurentPoly::from_coeffs(self.low + rhs.low, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

forward_owned!(LaurentPoly, Add, add);
forward_owned!(LaurentPoly, Sub, sub);
forward_owned!(LaurentPoly, Mul, mul);
