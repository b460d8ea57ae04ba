//! Finite groups given by cyclic orders or a Cayley table, commuting pairs,
//! and the GL₂(ℤ/n) action on pairs in an abelian group.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// ℤ/n₁ × … × ℤ/n_r; element index is the mixed-radix number of its
    /// components with the first component most significant.
    Abelian(Vec<u32>),
    Table { labels: Vec<String>, mul: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    repr: Repr,
    order: usize,
    identity: usize,
    inverses: Vec<usize>,
}

/// An ordered pair of commuting elements, by element index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CommutingPair {
    pub g: usize,
    pub h: usize,
}

impl CommutingPair {
    pub fn new(g: usize, h: usize) -> Self {
        CommutingPair { g, h }
    }

    pub fn swapped(self) -> Self {
        CommutingPair { g: self.h, h: self.g }
    }
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        Self::abelian(&[]).expect("trivial group")
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::abelian(&[n])
    }

    pub fn abelian(orders: &[u32]) -> Result<Self> {
        if orders.iter().any(|&n| n == 0) {
            return Err(Error::Domain("cyclic factors must have positive order".into()));
        }
        let order = orders.iter().map(|&n| n as usize).product::<usize>();
        let mut g = FiniteGroup {
            repr: Repr::Abelian(orders.to_vec()),
            order,
            identity: 0,
            inverses: Vec::new(),
        };
        g.inverses = (0..order).map(|a| g.inverse_slow(a)).collect();
        Ok(g)
    }

    /// Builds a group from a multiplication table, checking closure,
    /// associativity, identity and inverses exhaustively.
    pub fn from_table(labels: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Domain("a group needs at least one element".into()));
        }
        if mul.len() != n || mul.iter().any(|row| row.len() != n) {
            return Err(Error::Domain(format!("multiplication table must be {n}×{n}")));
        }
        if let Some(bad) = mul.iter().flatten().find(|&&x| x >= n) {
            return Err(Error::Domain(format!("table entry {bad} is not an element index")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| Error::Domain("table has no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or_else(|| Error::Domain(format!("element {} has no inverse", labels[a])))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::Domain(format!(
                            "table is not associative at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            repr: Repr::Table { labels, mul },
            order: n,
            identity,
            inverses,
        })
    }

    /// The symmetric group on three letters as a Cayley table.
    pub fn symmetric3() -> Self {
        let perms = permutations(3);
        Self::from_permutations(&perms)
    }

    /// The dihedral group of order 8 as a Cayley table.
    pub fn dihedral4() -> Self {
        // symmetries of a square acting on its vertices 0..4
        let r = [1usize, 2, 3, 0];
        let s = [0usize, 3, 2, 1];
        let mut elems: Vec<Vec<usize>> = vec![(0..4).collect()];
        let mut frontier = elems.clone();
        while let Some(p) = frontier.pop() {
            for gen in [&r[..], &s[..]] {
                let q = compose(&p, gen);
                if !elems.contains(&q) {
                    elems.push(q.clone());
                    frontier.push(q);
                }
            }
        }
        elems.sort();
        Self::from_permutations(&elems)
    }

    fn from_permutations(perms: &[Vec<usize>]) -> Self {
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| perms.iter().position(|c| *c == compose(a, b)).expect("closed"))
                    .collect()
            })
            .collect();
        Self::from_table(labels, mul).expect("permutation groups satisfy the axioms")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian_presentation(&self) -> bool {
        matches!(self.repr, Repr::Abelian(_))
    }

    pub fn cyclic_orders(&self) -> Option<&[u32]> {
        match &self.repr {
            Repr::Abelian(o) => Some(o),
            Repr::Table { .. } => None,
        }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Cyclic when given as one cyclic factor (or trivial).
    pub fn is_cyclic_presentation(&self) -> bool {
        matches!(&self.repr, Repr::Abelian(o) if o.len() <= 1)
    }

    pub fn label(&self, a: usize) -> String {
        match &self.repr {
            Repr::Abelian(orders) => {
                if orders.is_empty() {
                    return "e".into();
                }
                self.components(a)
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            }
            Repr::Table { labels, .. } => labels[a].clone(),
        }
    }

    /// Components of an element of an abelian presentation.
    pub fn components(&self, mut a: usize) -> Vec<i64> {
        let Repr::Abelian(orders) = &self.repr else {
            panic!("components of a table group");
        };
        let mut out = vec![0; orders.len()];
        for (i, &n) in orders.iter().enumerate().rev() {
            out[i] = (a % n as usize) as i64;
            a /= n as usize;
        }
        out
    }

    /// Element with the given components (reduced modulo the cyclic orders).
    pub fn element(&self, comps: &[i64]) -> Result<usize> {
        let Repr::Abelian(orders) = &self.repr else {
            return Err(Error::Unsupported("component coordinates need an abelian presentation".into()));
        };
        if comps.len() != orders.len() {
            return Err(Error::Domain(format!(
                "expected {} components, got {}",
                orders.len(),
                comps.len()
            )));
        }
        Ok(comps
            .iter()
            .zip(orders)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + c.rem_euclid(n as i64) as usize))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Abelian(_) => {
                let ca = self.components(a);
                let cb = self.components(b);
                let sum: Vec<i64> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
                self.element(&sum).expect("same rank")
            }
            Repr::Table { mul, .. } => mul[a][b],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    fn inverse_slow(&self, a: usize) -> usize {
        let c: Vec<i64> = self.components(a).iter().map(|x| -x).collect();
        self.element(&c).expect("same rank")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        match &self.repr {
            Repr::Abelian(o) => o.iter().fold(1usize, |acc, &n| acc.lcm(&(n as usize))),
            Repr::Table { .. } => (0..self.order).fold(1, |acc, a| acc.lcm(&self.element_order(a))),
        }
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order).filter(|&h| self.commute(g, h)).collect()
    }

    /// All ordered commuting pairs, lexicographic in (g, h).
    pub fn commuting_pairs(&self) -> Vec<CommutingPair> {
        let mut out = Vec::new();
        for g in 0..self.order {
            for h in 0..self.order {
                if self.commute(g, h) {
                    out.push(CommutingPair { g, h });
                }
            }
        }
        out
    }

    /// Commuting pairs whose entries both have p-power order.
    pub fn p_power_pairs(&self, p: u32) -> Result<Vec<CommutingPair>> {
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let is_p_power = |mut k: usize| {
            while k % p as usize == 0 {
                k /= p as usize;
            }
            k == 1
        };
        let ok: Vec<bool> = (0..self.order).map(|a| is_p_power(self.element_order(a))).collect();
        Ok(self
            .commuting_pairs()
            .into_iter()
            .filter(|pr| ok[pr.g] && ok[pr.h])
            .collect())
    }

    /// k·a in additive notation (k may be negative).
    pub fn scalar(&self, k: i64, a: usize) -> Result<usize> {
        let c: Vec<i64> = self.components(a).iter().map(|x| x * k).collect();
        self.element(&c)
    }

    /// (g, h) ↦ (a·g + b·h, c·g + d·h) for M = [[a, b], [c, d]] over ℤ/n,
    /// n the exponent of the (abelian) group.
    pub fn gl2_action(&self, m: [[i64; 2]; 2], pair: CommutingPair) -> Result<CommutingPair> {
        if !self.is_abelian_presentation() {
            return Err(Error::Unsupported("the GL2 action needs an abelian group".into()));
        }
        let n = self.exponent() as i64;
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).rem_euclid(n.max(1));
        if n > 1 && det.gcd(&n) != 1 {
            return Err(Error::Domain(format!("matrix is singular modulo {n}")));
        }
        let g = self.mul(self.scalar(m[0][0], pair.g)?, self.scalar(m[0][1], pair.h)?);
        let h = self.mul(self.scalar(m[1][0], pair.g)?, self.scalar(m[1][1], pair.h)?);
        Ok(CommutingPair { g, h })
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Abelian(o) if o.is_empty() => write!(f, "trivial group"),
            Repr::Abelian(o) => {
                let parts: Vec<String> = o.iter().map(|n| format!("Z/{n}")).collect();
                write!(f, "{}", parts.join(" x "))
            }
            Repr::Table { .. } => write!(f, "group of order {} (table)", self.order),
        }
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a∘b)(i) = a(b(i))
    b.iter().map(|&i| a[i]).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All matrices in GL₂(ℤ/n).
pub fn gl2_matrices(n: i64) -> Vec<[[i64; 2]; 2]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if (a * d - b * c).rem_euclid(n).gcd(&n) == 1 {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}
