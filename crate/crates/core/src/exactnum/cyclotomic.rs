//! Elements of the cyclotomic field Q(ζ_m) in the power basis 1, ζ, …, ζ^{φ(m)-1}.
//!
//! Products are reduced modulo the cyclotomic polynomial Φ_m, so two elements
//! of the same conductor are equal exactly when their coefficient vectors are.
//! Conductors congruent to 2 mod 4 are never stored (Q(ζ_2k) = Q(ζ_k) for odd
//! k) and any element with vanishing irrational part is stored with conductor 1.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::qpoly;
use super::rational::{format_rational, parse_rational};
use super::{lcm_u32, Rational};
use crate::error::{Error, Result};

pub fn totient(m: u32) -> u32 {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<i64>> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_int_div(&num, &div);
        }
    }
    let p = Arc::new(num);
    poly_cache().lock().unwrap().insert(m, p.clone());
    p
}

fn exact_int_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    // b is monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for shift in (0..q.len()).rev() {
        let c = r[shift + db];
        q[shift] = c;
        if c != 0 {
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] -= c * bi;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// ζ_m^a with ζ_m = e^{2πi/m}.
    pub fn root_of_unity(m: u32, a: i64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let e = a.rem_euclid(m as i64) as u32;
        if m % 4 == 2 {
            // ζ_m = -ζ_k^{(k+1)/2} with k = m/2 odd.
            let k = m / 2;
            let sign = if e % 2 == 1 { -1 } else { 1 };
            let inner = Self::root_of_unity(k, e as i64 * (k as i64 + 1) / 2);
            return if sign < 0 { -inner } else { inner };
        }
        let mut poly = vec![Rational::zero(); e as usize + 1];
        poly[e as usize] = Rational::one();
        Self::from_poly(m, poly)
    }

    /// Element Σ poly[i] ζ_m^i for arbitrary degree, reduced into canonical form.
    pub fn from_poly(m: u32, poly: Vec<Rational>) -> Self {
        assert!(m >= 1, "conductor must be positive");
        if m % 4 == 2 {
            let mut acc = Self::zero();
            for (i, c) in poly.into_iter().enumerate() {
                if !c.is_zero() {
                    acc = acc + Self::root_of_unity(m, i as i64).scale(&c);
                }
            }
            return acc;
        }
        let mut folded = vec![Rational::zero(); (m as usize).min(poly.len().max(1))];
        for (i, c) in poly.into_iter().enumerate() {
            if !c.is_zero() {
                folded[i % m as usize] += c;
            }
        }
        let coeffs = reduce_mod_phi(m, folded);
        let mut out = Cyclotomic {
            conductor: m,
            coeffs,
        };
        out.canonicalize();
        out
    }

    fn canonicalize(&mut self) {
        if self.conductor != 1 && self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            let c0 = self.coeffs.first().cloned().unwrap_or_else(Rational::zero);
            self.conductor = 1;
            self.coeffs = vec![c0];
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coefficients, of length φ(conductor).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    /// Re-expresses `self` in Q(ζ_target); `conductor` must divide `target`.
    pub fn lift(&self, target: u32) -> Self {
        assert!(
            target % self.conductor == 0,
            "conductor {} does not divide {}",
            self.conductor,
            target
        );
        if target == self.conductor || self.conductor == 1 {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Cyclotomic::from_poly(target, poly)
    }

    /// Coefficient vector of `self` in the power basis of Q(ζ_target), without
    /// canonicalizing the conductor. Stored conductors are 1, odd or divisible
    /// by 4, so lcms of them never fall in the excluded class.
    fn lifted_coeffs(&self, target: u32) -> Vec<Rational> {
        if target == self.conductor {
            return self.coeffs.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        reduce_mod_phi(target, poly)
    }

    fn lifted_pair(&self, other: &Self) -> (u32, Vec<Rational>, Vec<Rational>) {
        let m = lcm_u32(self.conductor, other.conductor);
        (m, self.lifted_coeffs(m), other.lifted_coeffs(m))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(Self::from_rational(self.coeffs[0].recip()));
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.conductor)
            .iter()
            .map(|&c| Rational::from_integer(c.into()))
            .collect();
        let inv = qpoly::inverse_mod(&self.coeffs, &phi).ok_or(Error::DivisionByZero)?;
        Ok(Self::from_poly(self.conductor, inv))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Numerical value with ζ_m = e^{2πi/m}.
    pub fn to_complex(&self) -> Complex64 {
        let m = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), 2.0 * PI * i as f64 / m))
            .sum()
    }
}

fn reduce_mod_phi(m: u32, mut poly: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(m);
    let d = phi.len() - 1;
    qpoly::trim(&mut poly);
    while poly.len() > d {
        let top = poly.len() - 1;
        let c = poly[top].clone();
        let shift = top - d;
        for (i, &pi) in phi.iter().enumerate() {
            if pi != 0 {
                poly[shift + i] -= &c * Rational::from_integer(pi.into());
            }
        }
        poly.pop();
        qpoly::trim(&mut poly);
    }
    poly.resize(d, Rational::zero());
    poly
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.lifted_pair(other);
        a == b
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor == rhs.conductor {
            let mut out = Cyclotomic {
                conductor: self.conductor,
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
            };
            out.canonicalize();
            return out;
        }
        let (m, a, b) = self.lifted_pair(rhs);
        let mut out = Cyclotomic {
            conductor: m,
            coeffs: a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        };
        out.canonicalize();
        out
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.conductor == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (m, a, b) = self.lifted_pair(rhs);
        let prod = qpoly::mul(&a, &b);
        let mut out = Cyclotomic {
            conductor: m,
            coeffs: reduce_mod_phi(m, prod),
        };
        out.canonicalize();
        out
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}


forward_owned!(Cyclotomic, Add, add);
forward_owned!(Cyclotomic, Sub, sub);
forward_owned!(Cyclotomic, Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    /// Polynomial in `z<m>`, increasing exponent, terms joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                terms.push(format_rational(c));
            } else if c.is_one() {
                terms.push(format!("z{}^{}", self.conductor, i));
            } else if (-c).is_one() {
                terms.push(format!("-z{}^{}", self.conductor, i));
            } else {
                terms.push(format!("{}*z{}^{}", format_rational(c), self.conductor, i));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl std::str::FromStr for Cyclotomic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut acc = Cyclotomic::zero();
        for term in s.split(" + ") {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let value = match term.find('z') {
                None => Cyclotomic::from_rational(parse_rational(term)?),
                Some(pos) => {
                    let (coef, root) = term.split_at(pos);
                    let coef = coef.trim_end_matches('*');
                    let c = match coef {
                        "" => Rational::one(),
                        "-" => -Rational::one(),
                        other => parse_rational(other)?,
                    };
                    let (m, e) = root[1..]
                        .split_once('^')
                        .ok_or_else(|| Error::Parse(format!("bad root term {term:?}")))?;
                    let m: u32 = m
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad conductor in {term:?}")))?;
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
                    if m == 0 {
                        return Err(Error::Parse(format!("zero conductor in {term:?}")));
                    }
                    Cyclotomic::root_of_unity(m, e).scale(&c)
                }
            };
            acc = acc + value;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn z(m: u32, a: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(m, a)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(1), 1);
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        assert_eq!(&z(4, 1) * &z(4, 1), Cyclotomic::from_integer(-1));
    }

    #[test]
    fn sum_of_cube_roots_vanishes() {
        let s = Cyclotomic::one() + z(3, 1) + z(3, 2);
        assert!(s.is_zero());
        assert_eq!(s.conductor(), 1);
    }

    #[test]
    fn inverse_of_one_minus_zeta3() {
        let a = Cyclotomic::one() - z(3, 1);
        let prod = a.inv().unwrap() * a;
        assert!(prod.is_one());
        assert_eq!(Cyclotomic::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn conductor_two_mod_four_is_folded() {
        assert_eq!(z(2, 1), Cyclotomic::from_integer(-1));
        let z6 = z(6, 1);
        assert_eq!(z6.conductor(), 3);
        assert_eq!(z6.pow(6).unwrap(), Cyclotomic::one());
        assert_eq!(z6.pow(3).unwrap(), Cyclotomic::from_integer(-1));
        assert_eq!(z6.pow(2).unwrap(), z(3, 1));
    }

    #[test]
    fn mixed_conductors_lift_to_lcm() {
        let a = z(4, 1) * z(3, 1);
        assert_eq!(a.conductor(), 12);
        assert_eq!(a, z(12, 7));
        assert_eq!(z(12, 4), z(3, 1));
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(z(5, 1).to_string(), "z5^1");
        let x = Cyclotomic::from_rational(rat(1, 2)) - z(3, 1).scale(&rat(3, 1));
        assert_eq!(x.to_string(), "1/2 + -3*z3^1");
        assert_eq!(x.to_string().parse::<Cyclotomic>().unwrap(), x);
        assert_eq!("0".parse::<Cyclotomic>().unwrap(), Cyclotomic::zero());
    }

    #[test]
    fn numeric_value() {
        let v = z(4, 1).to_complex();
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    /// Exhaustive field-axiom check on small numerators for conductors up to 7.
    #[test]
    fn field_axioms_small_conductors() {
        for m in [1u32, 3, 4, 5, 7] {
            let d = totient(m) as usize;
            let mut elems = Vec::new();
            // numerators bounded by 3 on a sparse grid of coefficient vectors
            for mask in 0..(7usize.pow(d.min(3) as u32)) {
                let mut v = Vec::new();
                let mut k = mask;
                for _ in 0..d.min(3) {
                    v.push(rat((k % 7) as i64 - 3, 1));
                    k /= 7;
                }
                elems.push(Cyclotomic::from_poly(m, v));
            }
            let sample: Vec<_> = elems.iter().step_by((elems.len() / 12).max(1)).collect();
            for a in &sample {
                if !a.is_zero() {
                    assert!((a.inv().unwrap() * (*a).clone()).is_one());
                }
                for b in &sample {
                    for c in sample.iter().take(4) {
                        assert_eq!(&(*a * *b) * *c, *a * &(*b * *c));
                        assert_eq!(*a * &(*b + *c), &(*a * *b) + &(*a * *c));
                    }
                }
            }
        }
    }

    #[test]
    fn lifting_is_a_ring_embedding() {
        let a = Cyclotomic::from_integer(2) + z(3, 1);
        let b = z(3, 2).scale(&rat(-1, 3)) + Cyclotomic::one();
        for target in [6u32, 12, 15] {
            let la = a.lift(if target == 6 { 3 } else { target });
            let lb = b.lift(if target == 6 { 3 } else { target });
            assert_eq!(&la * &lb, &a * &b);
            assert_eq!(&la + &lb, &a + &b);
        }
    }
}
