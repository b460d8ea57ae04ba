use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::{rat, Rational};
use crate::groups::{CommutingPair, FiniteGroup};
use crate::series::{JetShape, LinearForm};

/// A normal line bundle: its root x_i and character (a_i, b_i) ∈ (ℤ/n)²,
/// with optional explicit integer lifts (A_i, B_i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalLine {
    pub root: LinearForm,
    pub a: i64,
    pub b: i64,
    pub lift: Option<(i64, i64)>,
}

impl NormalLine {
    pub fn new(root: LinearForm, a: i64, b: i64) -> Self {
        NormalLine { root, a, b, lift: None }
    }

    /// The lifts used by default: explicit ones, else least non-negative residues.
    pub fn lifts(&self, n: u32) -> (i64, i64) {
        let n = n as i64;
        self.lift.unwrap_or((self.a.rem_euclid(n), self.b.rem_euclid(n)))
    }
}

/// A connected component of a fixed set together with its normal data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComponent {
    pub name: String,
    pub dim: u32,
    pub generators: Vec<String>,
    pub tangent_roots: Vec<LinearForm>,
    pub normal_lines: Vec<NormalLine>,
    /// Top-degree monomials (exponent vectors) to intersection numbers.
    pub integral: BTreeMap<Vec<u32>, Rational>,
}

impl FixedComponent {
    /// An isolated fixed point whose normal lines carry the given characters.
    pub fn point(name: &str, characters: &[(i64, i64)]) -> Self {
        FixedComponent {
            name: name.into(),
            dim: 0,
            generators: Vec::new(),
            tangent_roots: Vec::new(),
            normal_lines: characters
                .iter()
                .map(|&(a, b)| NormalLine::new(LinearForm::new(Vec::new()), a, b))
                .collect(),
            integral: BTreeMap::from([(Vec::new(), rat(1, 1))]),
        }
    }

    /// CP¹ with hyperplane class h, tangent root 2h and ∫h = 1.
    pub fn cp1() -> Self {
        FixedComponent {
            name: "CP1".into(),
            dim: 1,
            generators: vec!["h".into()],
            tangent_roots: vec![LinearForm::from_integers(&[2])],
            normal_lines: Vec::new(),
            integral: BTreeMap::from([(vec![1], rat(1, 1))]),
        }
    }

    pub fn shape(&self) -> Arc<JetShape> {
        JetShape::new(self.generators.clone(), self.dim)
    }

    /// Checks the component invariants; `path` prefixes error locations.
    pub fn validate(&self, n: u32, path: &str) -> Result<()> {
        let r = self.generators.len();
        if self.tangent_roots.len() != self.dim as usize {
            return Err(Error::input(
                format!("{path}.tangent_roots"),
                format!("expected {} tangent roots (one per complex dimension), found {}", self.dim, self.tangent_roots.len()),
            ));
        }
        for (j, u) in self.tangent_roots.iter().enumerate() {
            if u.coeffs.len() != r {
                return Err(Error::input(
                    format!("{path}.tangent_roots[{j}]"),
                    format!("expected {r} coefficients, found {}", u.coeffs.len()),
                ));
            }
        }
        let ni = n as i64;
        for (i, line) in self.normal_lines.iter().enumerate() {
            let p = format!("{path}.normal_lines[{i}]");
            if line.root.coeffs.len() != r {
                return Err(Error::input(
                    format!("{p}.root"),
                    format!("expected {r} coefficients, found {}", line.root.coeffs.len()),
                ));
            }
            if line.a.rem_euclid(ni) == 0 && line.b.rem_euclid(ni) == 0 {
                return Err(Error::input(
                    p,
                    "pole invariant violated: a normal line must have a nonzero character (a, b) mod n",
                ));
            }
            if let Some((la, lb)) = line.lift {
                if (la - line.a).rem_euclid(ni) != 0 || (lb - line.b).rem_euclid(ni) != 0 {
                    return Err(Error::input(
                        format!("{p}.lift"),
                        format!("lifts ({la}, {lb}) do not reduce to ({}, {}) mod {n}", line.a, line.b),
                    ));
                }
            }
        }
        for idx in self.integral.keys() {
            let key = idx.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            if idx.len() != r {
                return Err(Error::input(
                    format!("{path}.integral[{key:?}]"),
                    format!("exponent vector needs {r} entries"),
                ));
            }
            if idx.iter().sum::<u32>() != self.dim {
                return Err(Error::input(
                    format!("{path}.integral[{key:?}]"),
                    format!("monomial is not of top degree {}", self.dim),
                ));
            }
        }
        Ok(())
    }
}

/// Fixed-point data of a finite abelian group acting on a manifold: the
/// ambient components and, per commuting pair, the components of M^{(g,h)}.
#[derive(Clone, Debug)]
pub struct OrbifoldData {
    group: FiniteGroup,
    n: u32,
    ambient: Vec<FixedComponent>,
    sectors: BTreeMap<CommutingPair, Vec<FixedComponent>>,
}

impl OrbifoldData {
    /// Validates and assembles the data. The sector of the identity pair is
    /// the ambient list and must not be given separately.
    pub fn new(
        group: FiniteGroup,
        ambient: Vec<FixedComponent>,
        sectors: BTreeMap<CommutingPair, Vec<FixedComponent>>,
    ) -> Result<Self> {
        if !group.is_abelian_presentation() {
            return Err(Error::input(
                "group",
                "the elliptic model needs an abelian group given by cyclic orders",
            ));
        }
        let n = group.exponent() as u32;
        let e = group.identity();
        for (i, c) in ambient.iter().enumerate() {
            if !c.normal_lines.is_empty() {
                return Err(Error::input(
                    format!("ambient[{i}].normal_lines"),
                    "ambient components have no normal lines",
                ));
            }
            c.validate(n, &format!("ambient[{i}]"))?;
        }
        for (pair, comps) in &sectors {
            let where_ = format!("sectors[{}|{}]", group.label(pair.g), group.label(pair.h));
            if pair.g == e && pair.h == e {
                return Err(Error::input(where_, "the identity sector is given by the ambient block"));
            }
            if pair.g >= group.order() || pair.h >= group.order() || !group.commute(pair.g, pair.h) {
                return Err(Error::input(where_, "not a commuting pair of the group"));
            }
            for (i, c) in comps.iter().enumerate() {
                c.validate(n, &format!("{where_}.components[{i}]"))?;
            }
        }
        let data = OrbifoldData {
            group,
            n,
            ambient,
            sectors,
        };
        data.check_swap_symmetry()?;
        Ok(data)
    }

    /// sectors(g,h) and sectors(h,g) must agree with a and b exchanged.
    fn check_swap_symmetry(&self) -> Result<()> {
        let ni = self.n as i64;
        let signature = |comps: &[FixedComponent], swap: bool| {
            let mut v: Vec<(String, u32, Vec<(i64, i64)>)> = comps
                .iter()
                .map(|c| {
                    let mut chars: Vec<(i64, i64)> = c
                        .normal_lines
                        .iter()
                        .map(|l| {
                            let (a, b) = (l.a.rem_euclid(ni), l.b.rem_euclid(ni));
                            if swap {
                                (b, a)
                            } else {
                                (a, b)
                            }
                        })
                        .collect();
                    chars.sort_unstable();
                    (c.name.clone(), c.dim, chars)
                })
                .collect();
            v.sort();
            v
        };
        for (pair, comps) in &self.sectors {
            if let Some(other) = self.sectors.get(&pair.swapped()) {
                if signature(comps, false) != signature(other, true) {
                    return Err(Error::input(
                        format!(
                            "sectors[{}|{}]",
                            self.group.label(pair.g),
                            self.group.label(pair.h)
                        ),
                        "sector data is not symmetric under exchanging g and h",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Trivial group acting on the ambient components.
    pub fn non_equivariant(ambient: Vec<FixedComponent>) -> Result<Self> {
        Self::new(FiniteGroup::trivial(), ambient, BTreeMap::new())
    }

    /// ℤ/n rotating CP¹: every non-identity pair fixes the two poles, whose
    /// tangent characters are (g, h) and (−g, −h).
    pub fn cp1_rotation(n: u32) -> Result<Self> {
        let group = FiniteGroup::cyclic(n)?;
        let mut sectors = BTreeMap::new();
        for pair in group.commuting_pairs() {
            if pair.g == 0 && pair.h == 0 {
                continue;
            }
            let (g, h) = (pair.g as i64, pair.h as i64);
            let ni = n as i64;
            sectors.insert(
                pair,
                vec![
                    FixedComponent::point("north", &[(g, h)]),
                    FixedComponent::point("south", &[((-g).rem_euclid(ni), (-h).rem_euclid(ni))]),
                ],
            );
        }
        Self::new(group, vec![FixedComponent::cp1()], sectors)
    }

    /// An abelian group acting trivially on a point.
    pub fn point(group: FiniteGroup) -> Result<Self> {
        let mut sectors = BTreeMap::new();
        for pair in group.commuting_pairs() {
            if pair.g == group.identity() && pair.h == group.identity() {
                continue;
            }
            sectors.insert(pair, vec![FixedComponent::point("pt", &[])]);
        }
        Self::new(group, vec![FixedComponent::point("pt", &[])], sectors)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Exponent of the group: characters live in ℤ/n.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ambient(&self) -> &[FixedComponent] {
        &self.ambient
    }

    /// Components of M^{(g,h)}; an input error when the data has no entry.
    pub fn sector(&self, pair: CommutingPair) -> Result<&[FixedComponent]> {
        if pair.g == self.group.identity() && pair.h == self.group.identity() {
            return Ok(&self.ambient);
        }
        self.sectors.get(&pair).map(|v| v.as_slice()).ok_or_else(|| {
            Error::input(
                format!("sectors[{}|{}]", self.group.label(pair.g), self.group.label(pair.h)),
                "missing sector entry for this commuting pair",
            )
        })
    }

    pub fn sector_count(&self) -> usize {
        self.sectors.len() + 1
    }

    pub fn max_dim(&self) -> u32 {
        self.ambient
            .iter()
            .chain(self.sectors.values().flatten())
            .map(|c| c.dim)
            .max()
            .unwrap_or(0)
    }
}
