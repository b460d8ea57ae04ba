//! Rational functions in t = y^{1/r} with cyclotomic coefficients.
//!
//! Canonical form: the denominator is an ordinary polynomial in `t` with
//! constant term 1, numerator and denominator are coprime, and `r` is the
//! smallest ramification in which the value can be written. Canonical forms
//! are unique, so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;

use super::{lcm_u32, Cyclotomic, LaurentPoly, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct YRational {
    root: u32,
    num: LaurentPoly,
    den: LaurentPoly,
}

impl YRational {
    pub fn zero() -> Self {
        YRational {
            root: 1,
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Cyclotomic::one())
    }

    pub fn constant(c: Cyclotomic) -> Self {
        YRational {
            root: 1,
            num: LaurentPoly::constant(c),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::constant(Cyclotomic::from_rational(r))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::constant(Cyclotomic::from_integer(n))
    }

    /// c · y^{exp/root}.
    pub fn monomial(c: Cyclotomic, exp: i64, root: u32) -> Self {
        Self::polynomial(root, LaurentPoly::monomial(c, exp))
    }

    /// y^{exp/root}.
    pub fn y_power(exp: i64, root: u32) -> Self {
        Self::monomial(Cyclotomic::one(), exp, root)
    }

    /// A Laurent polynomial in t = y^{1/root}.
    pub fn polynomial(root: u32, num: LaurentPoly) -> Self {
        let mut out = YRational {
            root,
            num,
            den: LaurentPoly::one(),
        };
        out.reduce_root();
        out
    }

    /// num / den in t = y^{1/root}, brought to canonical form.
    pub fn from_parts(root: u32, num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        assert!(root >= 1, "ramification must be positive");
        Self::normalized(root, num, den)
    }

    fn normalized(root: u32, num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let v = den.low();
        let mut den = den.shift(-v);
        let mut num = num.shift(-v);
        if den.len() > 1 {
            let w = num.low();
            let p = num.shift(-w);
            if p.len() > 1 {
                let g = LaurentPoly::gcd(&p, &den)?;
                if g.len() > 1 {
                    let (pq, _) = p.divrem(&g)?;
                    let (dq, _) = den.divrem(&g)?;
                    num = pq.shift(w);
                    den = dq;
                }
            }
        }
        let c = den.lowest_coeff().expect("nonzero denominator").clone();
        if !c.is_one() {
            let ci = c.inv()?;
            num = num.scale(&ci);
            den = den.scale(&ci);
        }
        let mut out = YRational { root, num, den };
        out.reduce_root();
        Ok(out)
    }

    fn reduce_root(&mut self) {
        if self.num.is_zero() {
            self.root = 1;
            self.den = LaurentPoly::one();
            return;
        }
        let g = (self.root as i64)
            .gcd(&self.num.exponent_gcd())
            .gcd(&self.den.exponent_gcd());
        if g > 1 {
            self.root /= g as u32;
            self.num = self.num.deflate(g);
            self.den = self.den.deflate(g);
        }
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. the value is a Laurent polynomial in t.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<&Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        (self.root == 1 && self.den.is_one() && self.num.is_monomial() && self.num.low() == 0)
            .then(|| self.num.lowest_coeff().unwrap())
    }

    /// Same value written with ramification `target` (a multiple of `root`),
    /// without re-normalizing.
    fn lifted(&self, target: u32) -> (LaurentPoly, LaurentPoly) {
        let k = (target / self.root) as i64;
        (self.num.inflate(k), self.den.inflate(k))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        YRational {
            root: self.root,
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::normalized(self.root, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Numerical value at y = e^z, using the principal branch t = e^{z/r}.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let t = (z / self.root as f64).exp();
        let ev = |p: &LaurentPoly| -> Complex64 {
            p.terms().map(|(e, c)| c.to_complex() * t.powi(e as i32)).sum()
        };
        ev(&self.num) / ev(&self.den)
    }

    fn fmt_poly(p: &LaurentPoly, root: u32) -> String {
        let terms: Vec<String> = p
            .terms()
            .map(|(e, c)| {
                if e == 0 {
                    format!("({c})")
                } else {
                    format!("({c})*{}", y_exponent(e, root))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Human-oriented rendering (used by `Display` of series in human mode).
    pub fn pretty(&self) -> String {
        let poly = |p: &LaurentPoly| -> String {
            let terms: Vec<String> = p
                .terms()
                .map(|(e, c)| {
                    let cs = c.to_string();
                    let needs_parens = cs.contains(" + ");
                    match (e, c.is_one(), needs_parens) {
                        (0, _, _) => cs,
                        (_, true, _) => y_exponent(e, self.root),
                        (_, false, true) => format!("({cs})*{}", y_exponent(e, self.root)),
                        (_, false, false) => format!("{cs}*{}", y_exponent(e, self.root)),
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        };
        if self.den.is_one() {
            poly(&self.num)
        } else {
            format!("({}) / ({})", poly(&self.num), poly(&self.den))
        }
    }
}

/// `y^(k/r)` with the fraction reduced.
pub(crate) fn y_exponent(e: i64, root: u32) -> String {
    let g = e.gcd(&(root as i64));
    format!("y^({}/{})", e / g, root as i64 / g)
}

pub(crate) fn parse_y_exponent(s: &str) -> Result<(i64, u32)> {
    let bad = || Error::Parse(format!("bad y exponent {s:?}"));
    let inner = s
        .trim()
        .strip_prefix("y^(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (a, b) = inner.split_once('/').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if b == 0 {
        return Err(bad());
    }
    Ok((a, b))
}

impl PartialEq for YRational {
    fn eq(&self, other: &Self) -> bool {
        if self.root == other.root {
            return self.num == other.num && self.den == other.den;
        }
        let m = lcm_u32(self.root, other.root);
        self.lifted(m) == other.lifted(m)
    }
}

impl Eq for YRational {}

impl<'a> Add<&'a YRational> for &'a YRational {
    type Output = YRational;
    fn add(self, rhs: &YRational) -> YRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let m = lcm_u32(self.root, rhs.root);
        let (an, ad) = self.lifted(m);
        let (bn, bd) = rhs.lifted(m);
        if ad == bd {
            let num = &an + &bn;
            if ad.is_one() {
                return YRational::polynomial(m, num);
            }
            return YRational::normalized(m, num, ad).expect("nonzero denominator");
        }
        let num = &(&an * &bd) + &(&bn * &ad);
        YRational::normalized(m, num, &ad * &bd).expect("nonzero denominator")
    }
}

impl<'a> Sub<&'a YRational> for &'a YRational {
    type Output = YRational;
    fn sub(self, rhs: &YRational) -> YRational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a YRational> for &'a YRational {
    type Output = YRational;
    fn mul(self, rhs: &YRational) -> YRational {
        if self.is_zero() || rhs.is_zero() {
            return YRational::zero();
        }
        let m = lcm_u32(self.root, rhs.root);
        let (an, ad) = self.lifted(m);
        let (bn, bd) = rhs.lifted(m);
        if ad.is_one() && bd.is_one() {
            return YRational::polynomial(m, &an * &bn);
        }
        YRational::normalized(m, &an * &bn, &ad * &bd).expect("nonzero denominator")
    }
}

impl Neg for &YRational {
    type Output = YRational;
    fn neg(self) -> YRational {
        YRational {
            root: self.root,
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for YRational {
    type Output = YRational;
    fn neg(self) -> YRational {
        -&self
    }
}

forward_owned!(YRational, Add, add);
forward_owned!(YRational, Sub, sub);
forward_owned!(YRational, Mul, mul);

impl From<Cyclotomic> for YRational {
    fn from(c: Cyclotomic) -> Self {
        YRational::constant(c)
    }
}

impl fmt::Display for YRational {
    /// Canonical rendering `num / den`, increasing powers of y.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} / {}",
            Self::fmt_poly(&self.num, self.root),
            Self::fmt_poly(&self.den, self.root)
        )
    }
}

pub(crate) fn parse_ypoly(s: &str) -> Result<YRational> {
    let s = s.trim();
    if s == "0" {
        return Ok(YRational::zero());
    }
    let mut acc = YRational::zero();
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
        let coeff: Cyclotomic = body[..close].parse()?;
        let mut after = &body[close + 1..];
        let (e, r) = if let Some(tail) = after.strip_prefix('*') {
            let end = tail.find(')').map(|i| i + 1).unwrap_or(tail.len());
            let parsed = parse_y_exponent(&tail[..end])?;
            after = &tail[end..];
            parsed
        } else {
            (0, 1)
        };
        acc = acc + YRational::monomial(coeff, e, r);
        rest = after.strip_prefix(" + ").unwrap_or(after);
        if !after.is_empty() && !after.starts_with(" + ") {
            return Err(Error::Parse(format!("unexpected text {after:?}")));
        }
    }
    Ok(acc)
}

impl std::str::FromStr for YRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s
            .split_once(" / ")
            .ok_or_else(|| Error::Parse(format!("expected 'num / den' in {s:?}")))?;
        parse_ypoly(n)?.div(&parse_ypoly(d)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn y(e: i64, r: u32) -> YRational {
        YRational::y_power(e, r)
    }

    #[test]
    fn half_power_difference_inverse() {
        let a = &y(1, 2) - &y(-1, 2);
        let prod = &a * &a.inv().unwrap();
        assert!(prod.is_one());
    }

    #[test]
    fn inverse_of_one_minus_y_is_a_fraction() {
        let a = &YRational::one() - &y(1, 1);
        let inv = a.inv().unwrap();
        assert!(!inv.is_polynomial());
        assert_eq!(inv.numerator(), &LaurentPoly::one());
        assert_eq!(
            inv.denominator(),
            &LaurentPoly::from_terms([(0, Cyclotomic::one()), (1, Cyclotomic::from_integer(-1))])
        );
        assert_eq!(YRational::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn polynomial_division_reduces() {
        let num = &YRational::one() - &y(2, 1);
        let den = &YRational::one() - &y(1, 1);
        assert_eq!(num.div(&den).unwrap(), &YRational::one() + &y(1, 1));
    }

    #[test]
    fn root_is_minimal() {
        let a = y(3, 6);
        assert_eq!(a.root(), 2);
        assert_eq!(a, y(1, 2));
        assert_eq!((&y(1, 3) * &y(2, 3)), y(1, 1));
        assert_eq!((&y(1, 3) * &y(2, 3)).root(), 1);
    }

    #[test]
    fn cyclotomic_denominators() {
        let z3 = Cyclotomic::root_of_unity(3, 1);
        let a = &YRational::one() - &YRational::monomial(z3.clone(), -1, 1);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        // canonical: constant term of the denominator is one
        assert!(b.denominator().coeff(0).is_one());
    }

    #[test]
    fn normalize_is_idempotent() {
        let a = (&y(1, 2) + &YRational::from_rational(rat(3, 2)))
            .div(&(&YRational::one() - &y(-3, 2)))
            .unwrap();
        let again = YRational::from_parts(a.root(), a.numerator().clone(), a.denominator().clone()).unwrap();
        assert_eq!(a, again);
        assert_eq!(a.numerator(), again.numerator());
    }

    #[test]
    fn render_and_parse() {
        let a = (&y(1, 2) + &y(-1, 2)).div(&(&YRational::one() + &y(1, 1))).unwrap();
        let s = a.to_string();
        assert_eq!(s.parse::<YRational>().unwrap(), a);
        assert_eq!(y(1, 2).to_string(), "(1)*y^(1/2) / (1)");
    }

    #[test]
    fn numeric_eval() {
        let a = &y(1, 2) + &y(-1, 2);
        let z = Complex64::new(0.3, 0.1);
        let expected = 2.0 * (z / 2.0).cosh();
        assert!((a.eval(z) - expected).norm() < 1e-12);
    }
}
