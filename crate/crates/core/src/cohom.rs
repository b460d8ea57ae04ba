//! ℤ/n-valued 2-cocycles on finite groups, H²(G; ℤ/n), the antisymmetrization
//! ε(g,h) = ũ(g,h) − ũ(h,g) on commuting pairs, the phases δ = ζ_n^{ε} and
//! the Weil pairing.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactnum::Cyclotomic;
use crate::groups::{CommutingPair, FiniteGroup};

/// A triple (g, h, j) where the cocycle identity fails.
pub type Witness = (usize, usize, usize);

/// First triple violating ũ(h,j) − ũ(gh,j) + ũ(g,hj) − ũ(g,h) = 0 mod n.
pub fn cocycle_violation(group: &FiniteGroup, modulus: u32, table: &[Vec<i64>]) -> Option<Witness> {
    let n = modulus as i64;
    let m = group.order();
    for g in 0..m {
        for h in 0..m {
            let gh = group.mul(g, h);
            for j in 0..m {
                let hj = group.mul(h, j);
                let v = table[h][j] - table[gh][j] + table[g][hj] - table[g][h];
                if v.rem_euclid(n) != 0 {
                    return Some((g, h, j));
                }
            }
        }
    }
    None
}

/// Exhaustive cocycle test; `Err` carries the first violating triple.
pub fn is_cocycle(group: &FiniteGroup, modulus: u32, table: &[Vec<i64>]) -> std::result::Result<(), Witness> {
    match cocycle_violation(group, modulus, table) {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

/// A validated ℤ/n-valued 2-cocycle, indexed by element enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    group: FiniteGroup,
    modulus: u32,
    table: Vec<Vec<i64>>,
}

impl Cocycle2 {
    pub fn new(group: FiniteGroup, modulus: u32, table: Vec<Vec<i64>>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        let m = group.order();
        if table.len() != m || table.iter().any(|r| r.len() != m) {
            return Err(Error::Domain(format!("cocycle table must be {m}×{m}")));
        }
        let n = modulus as i64;
        let table: Vec<Vec<i64>> = table
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.rem_euclid(n)).collect())
            .collect();
        if let Some((g, h, j)) = cocycle_violation(&group, modulus, &table) {
            return Err(Error::Domain(format!(
                "cocycle identity fails at ({}, {}, {})",
                group.label(g),
                group.label(h),
                group.label(j)
            )));
        }
        Ok(Cocycle2 { group, modulus, table })
    }

    pub fn zero(group: FiniteGroup, modulus: u32) -> Self {
        let m = group.order();
        Cocycle2 {
            group,
            modulus,
            table: vec![vec![0; m]; m],
        }
    }

    /// ũ((ℓ₁,k₁),(ℓ₂,k₂)) = ℓ₁k₂ on (ℤ/n)².
    pub fn cup_product(n: u32) -> Result<Self> {
        let group = FiniteGroup::abelian(&[n, n])?;
        let m = group.order();
        let table = (0..m)
            .map(|a| {
                let ca = group.components(a);
                (0..m).map(|b| ca[0] * group.components(b)[1]).collect()
            })
            .collect();
        Self::new(group, n, table)
    }

    /// (δc)(g,h) = c(h) − c(gh) + c(g).
    pub fn coboundary(group: FiniteGroup, modulus: u32, c: &[i64]) -> Result<Self> {
        let m = group.order();
        if c.len() != m {
            return Err(Error::Domain(format!("1-cochain must have {m} entries")));
        }
        let table = (0..m)
            .map(|g| (0..m).map(|h| c[h] - c[group.mul(g, h)] + c[g]).collect())
            .collect();
        Self::new(group, modulus, table)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn table(&self) -> &[Vec<i64>] {
        &self.table
    }

    pub fn value(&self, g: usize, h: usize) -> i64 {
        self.table[g][h]
    }

    /// Image under ℤ/n → ℤ/kn, x ↦ kx.
    pub fn inflate(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("inflation factor must be positive".into()));
        }
        Ok(Cocycle2 {
            group: self.group.clone(),
            modulus: self.modulus * k,
            table: self
                .table
                .iter()
                .map(|r| r.iter().map(|x| x * k as i64).collect())
                .collect(),
        })
    }
}

/// ε on the commuting pairs of a group, valued in ℤ/n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonForm {
    modulus: u32,
    values: BTreeMap<CommutingPair, i64>,
}

impl EpsilonForm {
    /// ε ≡ 0 on every commuting pair.
    pub fn trivial(group: &FiniteGroup, modulus: u32) -> Self {
        Self::from_fn(group, modulus, |_| 0)
    }

    pub fn from_fn(group: &FiniteGroup, modulus: u32, f: impl Fn(CommutingPair) -> i64) -> Self {
        let n = modulus.max(1) as i64;
        EpsilonForm {
            modulus,
            values: group
                .commuting_pairs()
                .into_iter()
                .map(|p| (p, f(p).rem_euclid(n)))
                .collect(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn get(&self, pair: CommutingPair) -> Option<i64> {
        self.values.get(&pair).copied()
    }

    pub fn values(&self) -> impl Iterator<Item = (CommutingPair, i64)> + '_ {
        self.values.iter().map(|(p, v)| (*p, *v))
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(|v| *v == 0)
    }

    /// Multiplies every value by c (mod n).
    pub fn rescaled(&self, c: i64) -> Self {
        let n = self.modulus.max(1) as i64;
        EpsilonForm {
            modulus: self.modulus,
            values: self.values.iter().map(|(p, v)| (*p, (v * c).rem_euclid(n))).collect(),
        }
    }
}

/// ε(g,h) = ũ(g,h) − ũ(h,g) on commuting pairs.
pub fn epsilon(u: &Cocycle2) -> Result<EpsilonForm> {
    if let Some((g, h, j)) = cocycle_violation(&u.group, u.modulus, &u.table) {
        return Err(Error::Domain(format!("not a cocycle at ({g}, {h}, {j})")));
    }
    Ok(EpsilonForm::from_fn(&u.group, u.modulus, |p| u.value(p.g, p.h) - u.value(p.h, p.g)))
}

/// Which primitive n-th root of unity stands for the generator: δ = ζ_n^{c·ε}
/// with c a unit mod n (c = 1 is ζ_n = e^{2πi/n}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootChoice(pub i64);

impl Default for RootChoice {
    fn default() -> Self {
        RootChoice(1)
    }
}

impl RootChoice {
    pub fn check(&self, n: u32) -> Result<()> {
        if n > 1 && self.0.rem_euclid(n as i64).gcd(&(n as i64)) != 1 {
            return Err(Error::Domain(format!("{} is not a unit modulo {n}", self.0)));
        }
        Ok(())
    }
}

/// δ(g,h) = ζ_n^{c·ε(g,h)}.
pub fn delta_phase(e: &EpsilonForm, pair: CommutingPair, root: RootChoice) -> Result<Cyclotomic> {
    root.check(e.modulus)?;
    let v = e
        .get(pair)
        .ok_or_else(|| Error::Domain(format!("({}, {}) is not a commuting pair", pair.g, pair.h)))?;
    Ok(Cyclotomic::root_of_unity(e.modulus.max(1), root.0 * v))
}

/// ζ_n^{ℓ₁k₂ − ℓ₂k₁} for a = (ℓ₁,k₁), b = (ℓ₂,k₂).
pub fn weil_pairing(n: u32, a: (i64, i64), b: (i64, i64), root: RootChoice) -> Result<Cyclotomic> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    root.check(n)?;
    Ok(Cyclotomic::root_of_unity(n, root.0 * (a.0 * b.1 - b.0 * a.1)))
}

/// Invariant factors (each > 1) of H²(G; ℤ/n), in increasing divisibility
/// order; empty for the trivial group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2Group {
    pub invariant_factors: Vec<u64>,
}

impl H2Group {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for H2Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Groups up to this order are accepted by [`h2_compute`].
pub const H2_MAX_ORDER: usize = 16;

/// H²(G; ℤ/n) from the integral bar complex: with H₁, H₂ read off the Smith
/// forms of ∂₂ and ∂₃, H²(G; ℤ/n) ≅ Hom(H₂, ℤ/n) ⊕ Ext(H₁, ℤ/n).
pub fn h2_compute(group: &FiniteGroup, n: u32) -> Result<H2Group> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let m = group.order();
    if m > H2_MAX_ORDER {
        return Err(Error::Resource(format!(
            "group of order {m} exceeds the dense limit {H2_MAX_ORDER}"
        )));
    }
    let idx2 = |a: usize, b: usize| a * m + b;
    // ∂₂[g|h] = [h] − [gh] + [g], as an m × m² matrix
    let mut d2 = vec![vec![0i64; m * m]; m];
    for g in 0..m {
        for h in 0..m {
            let col = idx2(g, h);
            d2[h][col] += 1;
            d2[group.mul(g, h)][col] -= 1;
            d2[g][col] += 1;
        }
    }
    // ∂₃[g|h|j] = [h|j] − [gh|j] + [g|hj] − [g|h], an m² × m³ matrix
    let mut d3 = vec![vec![0i64; m * m * m]; m * m];
    for g in 0..m {
        for h in 0..m {
            for j in 0..m {
                let col = (g * m + h) * m + j;
                d3[idx2(h, j)][col] += 1;
                d3[idx2(group.mul(g, h), j)][col] -= 1;
                d3[idx2(g, group.mul(h, j))][col] += 1;
                d3[idx2(g, h)][col] -= 1;
            }
        }
    }
    let f2 = smith_invariants(d2)?;
    let f3 = smith_invariants(d3)?;
    let rank2 = f2.len();
    let rank3 = f3.len();
    // H₂ = ℤ^{m² − rank ∂₂ − rank ∂₃} ⊕ torsion(∂₃); H₁ = ℤ^{m − rank ∂₂} ⊕ torsion(∂₂),
    // whose free part has no Ext
    let free2 = m * m - rank2 - rank3;
    let nn = n as u64;
    let mut factors: Vec<u64> = Vec::new();
    factors.extend(std::iter::repeat(nn).take(free2));
    factors.extend(f3.iter().map(|d| d.gcd(&nn)));
    factors.extend(f2.iter().map(|d| d.gcd(&nn)));
    Ok(H2Group {
        invariant_factors: normalize_factors(factors),
    })
}

/// Rewrites a list of cyclic orders as invariant factors d₁ | d₂ | ….
fn normalize_factors(orders: Vec<u64>) -> Vec<u64> {
    // split into prime powers, then recombine
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for mut d in orders.into_iter().filter(|&d| d > 1) {
        let mut p = 2;
        while d > 1 {
            if d % p == 0 {
                let mut q = 1;
                while d % p == 0 {
                    d /= p;
                    q *= p;
                }
                by_prime.entry(p).or_default().push(q);
            }
            p += 1;
        }
    }
    let len = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable();
        let offset = len - powers.len();
        for (i, q) in powers.iter().enumerate() {
            out[offset + i] *= q;
        }
    }
    out
}

/// Nonzero invariant factors of an integer matrix (absolute values).
fn smith_invariants(mut a: Vec<Vec<i64>>) -> Result<Vec<u64>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let overflow = || Error::Resource("integer overflow in Smith normal form".into());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize, i64)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.is_none_or(|(_, _, b)| v.abs() < b) {
                    best = Some((i, j, v.abs()));
                    if v.abs() == 1 {
                        break;
                    }
                }
            }
            if best.is_some_and(|(_, _, b)| b == 1) {
                break;
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let v = a[i][t];
                if v == 0 {
                    continue;
                }
                let q = v.div_euclid(p);
                let (top, rest) = a.split_at_mut(i);
                let pivot_row = &top[t];
                for (x, &y) in rest[0].iter_mut().zip(pivot_row.iter()).skip(t) {
                    *x = x.checked_sub(q.checked_mul(y).ok_or_else(overflow)?).ok_or_else(overflow)?;
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let v = a[t][j];
                if v == 0 {
                    continue;
                }
                let q = v.div_euclid(p);
                for row in a.iter_mut().skip(t) {
                    let y = row[t];
                    if y != 0 {
                        row[j] = row[j].checked_sub(q.checked_mul(y).ok_or_else(overflow)?).ok_or_else(overflow)?;
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column t onto the pivot
                let mut best = (t, t, a[t][t].abs());
                for i in t + 1..rows {
                    if a[i][t] != 0 && a[i][t].abs() < best.2 {
                        best = (i, t, a[i][t].abs());
                    }
                }
                for j in t + 1..cols {
                    if a[t][j] != 0 && a[t][j].abs() < best.2 {
                        best = (t, j, a[t][j].abs());
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|&v| v % p != 0));
            match bad {
                Some(i) => {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, &y) in top[t].iter_mut().zip(rest[0].iter()).skip(t) {
                        *x = x.checked_add(y).ok_or_else(overflow)?;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].unsigned_abs());
        t += 1;
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_cup_are_cocycles() {
        let g = FiniteGroup::abelian(&[3, 3]).unwrap();
        assert!(is_cocycle(&g, 3, &vec![vec![0; 9]; 9]).is_ok());
        for n in 1..=4 {
            assert!(Cocycle2::cup_product(n).is_ok());
        }
    }

    #[test]
    fn perturbation_gives_witness() {
        let u = Cocycle2::cup_product(3).unwrap();
        let mut t = u.table().to_vec();
        t[4][5] += 1;
        let w = is_cocycle(u.group(), 3, &t).unwrap_err();
        let g = u.group();
        let (a, b, c) = w;
        let v = t[b][c] - t[g.mul(a, b)][c] + t[a][g.mul(b, c)] - t[a][b];
        assert_ne!(v.rem_euclid(3), 0);
        assert!(Cocycle2::new(g.clone(), 3, t).is_err());
    }

    #[test]
    fn cup_epsilon() {
        for n in 2..=4u32 {
            let u = Cocycle2::cup_product(n).unwrap();
            let e = epsilon(&u).unwrap();
            let g = u.group();
            for (p, v) in e.values() {
                let (a, b) = (g.components(p.g), g.components(p.h));
                assert_eq!(v, (a[0] * b[1] - b[0] * a[1]).rem_euclid(n as i64));
            }
        }
    }

    #[test]
    fn coboundaries_have_trivial_epsilon() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        for bits in 0..16u32 {
            let c: Vec<i64> = (0..4).map(|i| ((bits >> i) & 1) as i64).collect();
            let u = Cocycle2::coboundary(g.clone(), 2, &c).unwrap();
            assert!(epsilon(&u).unwrap().is_trivial());
        }
    }

    #[test]
    fn weil_examples() {
        for n in 2..=6 {
            assert_eq!(
                weil_pairing(n, (1, 0), (0, 1), RootChoice::default()).unwrap(),
                Cyclotomic::root_of_unity(n, 1)
            );
            assert!(weil_pairing(n, (2, 1), (2, 1), RootChoice::default()).unwrap().is_one());
        }
        assert_eq!(
            weil_pairing(5, (1, 0), (0, 1), RootChoice(1)).unwrap().to_string(),
            "z5^1"
        );
        assert!(weil_pairing(4, (1, 0), (0, 1), RootChoice(2)).is_err());
    }

    #[test]
    fn h2_small_cases() {
        assert_eq!(h2_compute(&FiniteGroup::trivial(), 5).unwrap().order(), 1);
        assert_eq!(h2_compute(&FiniteGroup::cyclic(2).unwrap(), 2).unwrap().invariant_factors, vec![2]);
        assert_eq!(h2_compute(&FiniteGroup::cyclic(3).unwrap(), 3).unwrap().invariant_factors, vec![3]);
        assert_eq!(h2_compute(&FiniteGroup::cyclic(4).unwrap(), 6).unwrap().invariant_factors, vec![2]);
        let v4 = h2_compute(&FiniteGroup::abelian(&[2, 2]).unwrap(), 2).unwrap();
        assert_eq!(v4.invariant_factors, vec![2, 2, 2]);
        assert!(matches!(
            h2_compute(&FiniteGroup::cyclic(17).unwrap(), 2),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn factor_normalization() {
        assert_eq!(normalize_factors(vec![2, 3, 4, 1]), vec![2, 12]);
        assert_eq!(normalize_factors(vec![6, 6]), vec![6, 6]);
    }
}
