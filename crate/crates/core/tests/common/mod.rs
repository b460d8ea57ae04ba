//! Independent oracles shared by the integration tests. Nothing here calls
//! the series or jet machinery of the library.

#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use theta_orbifold::exactnum::YRational;
use theta_orbifold::groups::FiniteGroup;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(m: usize) -> BigInt {
    (1..=m as i64).fold(BigInt::one(), |a, i| a * i)
}

// ---------------------------------------------------------------------------
// cochains by brute force

fn cocycle_ok(g: &FiniteGroup, n: i64, t: &[Vec<i64>]) -> bool {
    let m = g.order();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let v = t[b][c] - t[g.mul(a, b)][c] + t[a][g.mul(b, c)] - t[a][b];
                if v.rem_euclid(n) != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Every ℤ/n-valued 2-cocycle on G, by enumerating all n^{|G|²} tables.
pub fn all_cocycles(g: &FiniteGroup, n: u32) -> Vec<Vec<Vec<i64>>> {
    let m = g.order();
    let cells = m * m;
    let total = (n as u64).pow(cells as u32);
    assert!(total <= 1 << 20, "brute-force space too large");
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut t = vec![vec![0i64; m]; m];
        for cell in 0..cells {
            t[cell / m][cell % m] = (c % n as u64) as i64;
            c /= n as u64;
        }
        if cocycle_ok(g, n as i64, &t) {
            out.push(t);
        }
    }
    out
}

/// Distinct coboundary tables (δc)(g,h) = c(h) − c(gh) + c(g) over all 1-cochains.
pub fn all_coboundaries(g: &FiniteGroup, n: u32) -> HashSet<Vec<Vec<i64>>> {
    let m = g.order();
    let total = (n as u64).pow(m as u32);
    let mut out = HashSet::new();
    for code in 0..total {
        let mut c = code;
        let mut cochain = vec![0i64; m];
        for x in cochain.iter_mut() {
            *x = (c % n as u64) as i64;
            c /= n as u64;
        }
        let t: Vec<Vec<i64>> = (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| (cochain[b] - cochain[g.mul(a, b)] + cochain[a]).rem_euclid(n as i64))
                    .collect()
            })
            .collect();
        out.insert(t);
    }
    out
}

/// |H²(G; ℤ/n)| = |Z²| / |B²| by enumeration.
pub fn h2_order_brute_force(g: &FiniteGroup, n: u32) -> usize {
    let z = all_cocycles(g, n).len();
    let b = all_coboundaries(g, n).len();
    assert_eq!(z % b, 0);
    z / b
}

// ---------------------------------------------------------------------------
// permutation groups

pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn s3_elements() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                if a != b && b != c && a != c {
                    out.push(vec![a, b, c]);
                }
            }
        }
    }
    out
}

pub fn perm_order(p: &[usize]) -> usize {
    let id: Vec<usize> = (0..p.len()).collect();
    let mut x = p.to_vec();
    let mut k = 1;
    while x != id {
        x = compose(p, &x);
        k += 1;
    }
    k
}

// ---------------------------------------------------------------------------
// power series in one variable u over YRational

#[derive(Clone, Debug)]
pub struct USeries(pub Vec<YRational>);

impl USeries {
    pub fn from_rationals(c: Vec<BigRational>) -> Self {
        USeries(c.into_iter().map(YRational::from_rational).collect())
    }

    pub fn mul(&self, o: &USeries) -> USeries {
        let d = self.0.len().min(o.0.len());
        let mut out = vec![YRational::zero(); d];
        for i in 0..d {
            for j in 0..d - i {
                out[i + j] = &out[i + j] + &(&self.0[i] * &o.0[j]);
            }
        }
        USeries(out)
    }

    pub fn scale(&self, c: &YRational) -> USeries {
        USeries(self.0.iter().map(|x| x * c).collect())
    }

    pub fn sub(&self, o: &USeries) -> USeries {
        USeries(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    /// 1/self for a series with constant term 1, by the recursion b_k = −Σ_{i≥1} a_i b_{k−i}.
    pub fn inverse(&self) -> USeries {
        assert!(self.0[0].is_one());
        let d = self.0.len();
        let mut b = vec![YRational::zero(); d];
        b[0] = YRational::one();
        for k in 1..d {
            let mut acc = YRational::zero();
            for i in 1..=k {
                acc = &acc - &(&self.0[i] * &b[k - i]);
            }
            b[k] = acc;
        }
        USeries(b)
    }
}

/// Coefficient of u in 2u·sinh(u − z/2)/sinh(u), with y = e^z.
pub fn cp1_q0_oracle() -> YRational {
    let d = 4;
    let sinh_over_u = USeries::from_rationals(
        (0..d)
            .map(|m| if m % 2 == 0 { BigRational::new(1.into(), factorial(m + 1)) } else { BigRational::zero() })
            .collect(),
    );
    // sinh u and cosh u
    let sinh = USeries::from_rationals(
        (0..d)
            .map(|m| if m % 2 == 1 { BigRational::new(1.into(), factorial(m)) } else { BigRational::zero() })
            .collect(),
    );
    let cosh = USeries::from_rationals(
        (0..d)
            .map(|m| if m % 2 == 0 { BigRational::new(1.into(), factorial(m)) } else { BigRational::zero() })
            .collect(),
    );
    let half = YRational::from_rational(q(1, 2));
    let yh = YRational::y_power(1, 2);
    let yih = YRational::y_power(-1, 2);
    let ch = &(&yh + &yih) * &half;
    let sh = &(&yh - &yih) * &half;
    // sinh(u − z/2) = sinh u cosh(z/2) − cosh u sinh(z/2)
    let shifted = sinh.scale(&ch).sub(&cosh.scale(&sh));
    let two = YRational::from_integer(2);
    let series = shifted.mul(&sinh_over_u.inverse()).scale(&two);
    series.0[1].clone()
}

// ---------------------------------------------------------------------------
// bivariate series in (q, u) over ℚ, for the Witten genus oracle

#[derive(Clone, Debug, PartialEq)]
pub struct QU {
    pub nq: usize,
    pub nu: usize,
    pub c: Vec<Vec<BigRational>>,
}

impl QU {
    pub fn zero(nq: usize, nu: usize) -> Self {
        QU { nq, nu, c: vec![vec![BigRational::zero(); nu]; nq] }
    }

    pub fn one(nq: usize, nu: usize) -> Self {
        let mut z = Self::zero(nq, nu);
        z.c[0][0] = BigRational::one();
        z
    }

    pub fn mul(&self, o: &QU) -> QU {
        let mut out = QU::zero(self.nq, self.nu);
        for a in 0..self.nq {
            for b in 0..self.nu {
                if self.c[a][b].is_zero() {
                    continue;
                }
                for x in 0..self.nq - a {
                    for y in 0..self.nu - b {
                        out.c[a + x][b + y] += &self.c[a][b] * &o.c[x][y];
                    }
                }
            }
        }
        out
    }

    /// Inverse of a series with constant term 1: Σ_m (1 − a)^m.
    pub fn inverse(&self) -> QU {
        assert!(self.c[0][0].is_one());
        let mut r = QU::one(self.nq, self.nu);
        for a in 0..self.nq {
            for b in 0..self.nu {
                r.c[a][b] -= &self.c[a][b];
            }
        }
        let mut acc = QU::one(self.nq, self.nu);
        let mut pow = QU::one(self.nq, self.nu);
        for _ in 0..(self.nq + self.nu) {
            pow = pow.mul(&r);
            for a in 0..self.nq {
                for b in 0..self.nu {
                    acc.c[a][b] += &pow.c[a][b];
                }
            }
        }
        acc
    }
}

/// e^{c u} truncated in u, placed at q^{shift}.
fn exp_qu(c: i64, shift: usize, nq: usize, nu: usize, sign: i64) -> QU {
    let mut out = QU::zero(nq, nu);
    if shift < nq {
        for m in 0..nu {
            out.c[shift][m] = BigRational::new(BigInt::from(c * sign).pow(m as u32), factorial(m));
        }
    }
    out
}

/// Coefficients (q⁰..q^{order−1}) of u^d in
/// ∏_j (c_j u)/(2 sinh(c_j u/2)) · ∏_{k≥1} (1 − q^k)²/((1 − q^k e^{c_j u})(1 − q^k e^{−c_j u})).
pub fn witten_oracle(root_multipliers: &[i64], d: usize, order: usize) -> Vec<BigRational> {
    let (nq, nu) = (order, d + 1);
    let mut acc = QU::one(nq, nu);
    for &c in root_multipliers {
        // (2 sinh(cu/2))/(cu) = Σ_m (cu)^{2m}/(4^m (2m+1)!)
        let mut s = QU::zero(nq, nu);
        for m in (0..nu).step_by(2) {
            s.c[0][m] = BigRational::new(BigInt::from(c).pow(m as u32), BigInt::from(2).pow(m as u32) * factorial(m + 1));
        }
        acc = acc.mul(&s.inverse());
        for k in 1..order {
            let one = QU::one(nq, nu);
            let mut f1 = one.clone();
            let e = exp_qu(c, k, nq, nu, 1);
            let mut f2 = one.clone();
            let ei = exp_qu(c, k, nq, nu, -1);
            for a in 0..nq {
                for b in 0..nu {
                    f1.c[a][b] -= &e.c[a][b];
                    f2.c[a][b] -= &ei.c[a][b];
                }
            }
            let mut lin = one.clone();
            if k < nq {
                lin.c[k][0] -= BigRational::one();
            }
            let denominator = f1.mul(&f2);
            acc = acc.mul(&lin).mul(&lin).mul(&denominator.inverse());
        }
    }
    (0..nq).map(|a| acc.c[a][d].clone()).collect()
}
