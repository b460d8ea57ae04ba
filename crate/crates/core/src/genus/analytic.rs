use rayon::prelude::*;

use super::data::{FixedComponent, OrbifoldData};
use super::sector::sector_integrand;
use crate::error::{Error, Result};
use crate::exactnum::YRational;
use crate::groups::CommutingPair;
use crate::jacobi::{f_jet_inverse, x_over_f_jet};
use crate::series::Jet;

/// Result of comparing the analytic stalk with the sector integrand for one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticOutcome {
    pub pair: CommutingPair,
    /// Stalk integrand at (g,h) equals the sector integrand at (g,−h).
    pub matches: bool,
    /// F unchanged under m̄_j ↦ m̄_j + n.
    pub m_lift_invariant: bool,
    /// F unchanged under ā ↦ ā + (lattice vector).
    pub a_lift_invariant: bool,
}

impl AnalyticOutcome {
    pub fn passed(&self) -> bool {
        self.matches && self.m_lift_invariant && self.a_lift_invariant
    }
}

/// ∏_j u_j/f(u_j) · y^{−k̄Σm̄/n} ∏_i 1/f(x_i + 2πim̄_iℓ̄/n + 2πiτm̄_ik̄/n):
/// the stalk integrand obtained from F with torsion point ā = (ℓ̄, k̄).
pub fn analytic_stalk_integrand(
    comp: &FixedComponent,
    n: u32,
    order: i64,
    abar: (i64, i64),
    mbar: &[i64],
) -> Result<Jet> {
    if mbar.len() != comp.normal_lines.len() {
        return Err(Error::Structural("one character lift per normal line is required".into()));
    }
    let shape = comp.shape();
    let mut acc = Jet::one(&shape);
    if !comp.tangent_roots.is_empty() {
        let xf = x_over_f_jet(comp.dim, order)?;
        for u in &comp.tangent_roots {
            acc = acc.try_mul(&xf.compose_univariate(u, &shape)?)?;
        }
    }
    let (l, k) = abar;
    let mut total_m = 0i64;
    for (line, &m) in comp.normal_lines.iter().zip(mbar) {
        let inv = f_jet_inverse(m * l, m * k, n, comp.dim, order)?;
        acc = acc.try_mul(&inv.compose_univariate(&line.root, &shape)?)?;
        total_m += m;
    }
    Ok(acc.scale_y(&YRational::y_power(-k * total_m, n)))
}

/// The character m ∈ ℤ/n of a line with restriction (a, b) to the pair (ℓ, k).
fn solve_character(l: i64, k: i64, a: i64, b: i64, n: i64) -> Option<i64> {
    (0..n).find(|m| (l * m - a).rem_euclid(n) == 0 && (k * m - b).rem_euclid(n) == 0)
}

/// Checks, for a cyclic group and a pair (g,h) = (ℓ,k), that the stalk
/// integrand built from F equals the sector integrand of (g,−h) component by
/// component, and that F does not depend on the lifts m̄ and ā.
pub fn analytic_compare(data: &OrbifoldData, pair: CommutingPair, order: i64) -> Result<AnalyticOutcome> {
    let group = data.group();
    if !group.is_cyclic_presentation() {
        return Err(Error::Unsupported("the analytic comparison needs a cyclic group".into()));
    }
    let n = data.n();
    let ni = n as i64;
    let (l, k) = (pair.g as i64, pair.h as i64);
    let mirror = CommutingPair::new(pair.g, group.inv(pair.h));
    let here = data.sector(pair)?;
    let there = data.sector(mirror)?;
    if here.len() != there.len() {
        return Err(Error::input(
            format!("sectors[{}|{}]", group.label(mirror.g), group.label(mirror.h)),
            "fixed set differs from that of the pair with h inverted",
        ));
    }
    let mut outcome = AnalyticOutcome {
        pair,
        matches: true,
        m_lift_invariant: true,
        a_lift_invariant: true,
    };
    for comp in here {
        let other = there.iter().find(|c| c.name == comp.name).ok_or_else(|| {
            Error::input(
                format!("sectors[{}|{}]", group.label(mirror.g), group.label(mirror.h)),
                format!("no component named {:?}", comp.name),
            )
        })?;
        let mbar = comp
            .normal_lines
            .iter()
            .enumerate()
            .map(|(i, line)| {
                solve_character(l, k, line.a, line.b, ni).ok_or_else(|| {
                    Error::input(
                        format!("{}.normal_lines[{i}]", comp.name),
                        format!("({}, {}) is not the restriction of a character to the pair", line.a, line.b),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let stalk = analytic_stalk_integrand(comp, n, order, (l, k), &mbar)?;
        let lifts: Vec<_> = other.normal_lines.iter().map(|line| line.lifts(n)).collect();
        let integrand = sector_integrand(other, n, order, &lifts)?;
        outcome.matches &= stalk == integrand;

        let m_variants: Vec<Vec<i64>> = (0..mbar.len())
            .map(|i| {
                let mut v = mbar.clone();
                v[i] += ni;
                v
            })
            .collect();
        let m_ok: Result<Vec<bool>> = m_variants
            .par_iter()
            .map(|v| Ok(analytic_stalk_integrand(comp, n, order, (l, k), v)? == stalk))
            .collect();
        outcome.m_lift_invariant &= m_ok?.into_iter().all(|b| b);

        let shifts = [(ni, 0), (-ni, 0), (0, ni), (0, -ni), (ni, ni)];
        let a_ok: Result<Vec<bool>> = shifts
            .par_iter()
            .map(|&(dl, dk)| Ok(analytic_stalk_integrand(comp, n, order, (l + dl, k + dk), &mbar)? == stalk))
            .collect();
        outcome.a_lift_invariant &= a_ok?.into_iter().all(|b| b);
    }
    Ok(outcome)
}

/// [`analytic_compare`] over every commuting pair.
pub fn analytic_compare_all(data: &OrbifoldData, order: i64) -> Result<Vec<AnalyticOutcome>> {
    data.group()
        .commuting_pairs()
        .into_par_iter()
        .map(|p| analytic_compare(data, p, order))
        .collect()
}
