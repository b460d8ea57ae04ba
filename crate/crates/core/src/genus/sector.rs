use std::collections::BTreeMap;

use rayon::prelude::*;

use super::data::{FixedComponent, OrbifoldData};
use crate::cohom::{delta_phase, EpsilonForm, RootChoice};
use crate::error::{Error, Result};
use crate::exactnum::{Rational, YRational};
use crate::groups::CommutingPair;
use crate::jacobi::{f_jet_inverse, x_over_f_jet};
use crate::series::{Jet, PuiseuxSeries};

/// Values of the genus: Puiseux series in q^{1/n} with YRational coefficients.
pub type GenusValue = PuiseuxSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// (1/|G|) Σ_{gh=hg} Φ_{g,h}
    #[default]
    DivideByOrder,
    /// Σ_{gh=hg} Φ_{g,h}
    Raw,
}

/// The integrand ∏_j u_j/f(u_j) · ∏_i y^{B_i/n}/f(x_i + 2πiA_i/n − 2πiB_iτ/n)
/// as a jet on the component, for explicit lifts (A_i, B_i).
pub fn sector_integrand(comp: &FixedComponent, n: u32, order: i64, lifts: &[(i64, i64)]) -> Result<Jet> {
    if lifts.len() != comp.normal_lines.len() {
        return Err(Error::Structural(format!(
            "{} lifts given for {} normal lines",
            lifts.len(),
            comp.normal_lines.len()
        )));
    }
    let ni = n as i64;
    let shape = comp.shape();
    let mut acc = Jet::one(&shape);
    if !comp.tangent_roots.is_empty() {
        let xf = x_over_f_jet(comp.dim, order)?;
        for u in &comp.tangent_roots {
            acc = acc.try_mul(&xf.compose_univariate(u, &shape)?)?;
        }
    }
    for (line, &(a, b)) in comp.normal_lines.iter().zip(lifts) {
        if (a - line.a).rem_euclid(ni) != 0 || (b - line.b).rem_euclid(ni) != 0 {
            return Err(Error::Domain(format!(
                "lifts ({a}, {b}) do not reduce to ({}, {}) mod {n}",
                line.a, line.b
            )));
        }
        if a.rem_euclid(ni) == 0 && b.rem_euclid(ni) == 0 {
            return Err(Error::Pole(format!(
                "normal line of {} has trivial character",
                comp.name
            )));
        }
        let inv = f_jet_inverse(a, -b, n, comp.dim, order)?;
        acc = acc.try_mul(&inv.compose_univariate(&line.root, &shape)?.scale_y(&YRational::y_power(b, n)))?;
    }
    Ok(acc)
}

/// Φ for one component with explicit lifts.
pub fn sector_value_with_lifts(comp: &FixedComponent, n: u32, order: i64, lifts: &[(i64, i64)]) -> Result<GenusValue> {
    sector_integrand(comp, n, order, lifts)?.integrate(&comp.integral)
}

/// Φ for one component with its default lifts.
pub fn sector_value(comp: &FixedComponent, n: u32, order: i64) -> Result<GenusValue> {
    let lifts: Vec<_> = comp.normal_lines.iter().map(|l| l.lifts(n)).collect();
    sector_value_with_lifts(comp, n, order, &lifts)
}

/// Φ_{g,h}: the sum over the components of M^{(g,h)}.
pub fn sector_sum(data: &OrbifoldData, pair: CommutingPair, order: i64) -> Result<GenusValue> {
    let mut acc = PuiseuxSeries::exact_zero();
    for comp in data.sector(pair)? {
        acc = &acc + &sector_value(comp, data.n(), order)?;
    }
    Ok(acc)
}

/// Φ_{g,h} for every commuting pair, evaluated in parallel.
pub fn all_sectors(data: &OrbifoldData, order: i64) -> Result<BTreeMap<CommutingPair, GenusValue>> {
    let pairs = data.group().commuting_pairs();
    // surface a missing entry before doing any series work
    for &p in &pairs {
        data.sector(p)?;
    }
    pairs
        .into_par_iter()
        .map(|p| sector_sum(data, p, order).map(|v| (p, v)))
        .collect()
}

fn normalize(value: GenusValue, data: &OrbifoldData, normalization: Normalization) -> GenusValue {
    match normalization {
        Normalization::Raw => value,
        Normalization::DivideByOrder => value.scale(&YRational::from_rational(Rational::new(
            1.into(),
            (data.group().order() as i64).into(),
        ))),
    }
}

/// Σ_{gh=hg} Φ_{g,h}, optionally divided by |G|.
pub fn orbifold_genus(data: &OrbifoldData, order: i64, normalization: Normalization) -> Result<GenusValue> {
    let sectors = all_sectors(data, order)?;
    let total = sectors
        .values()
        .fold(PuiseuxSeries::exact_zero(), |acc, v| &acc + v);
    Ok(normalize(total, data, normalization))
}

/// Σ_{gh=hg} δ(g,h)·Φ_{g,h} with δ = ζ^{c·ε}, optionally divided by |G|.
pub fn twisted_genus(
    data: &OrbifoldData,
    e: &EpsilonForm,
    root: RootChoice,
    order: i64,
    normalization: Normalization,
) -> Result<GenusValue> {
    let sectors = all_sectors(data, order)?;
    let mut total = PuiseuxSeries::exact_zero();
    for (pair, value) in &sectors {
        let d = delta_phase(e, *pair, root)?;
        total = &total + &value.scale_cyclotomic(&d);
    }
    Ok(normalize(total, data, normalization))
}

/// A lift change that altered a sector value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftFailure {
    pub pair: CommutingPair,
    pub component: String,
    pub lifts: Vec<(i64, i64)>,
}

/// Recomputes every component of every sector under the lift shifts
/// (A_i, B_i) ↦ (A_i + rn, B_i + r′n), r, r′ ∈ {−1, 1}, applied to each line
/// alone and to all lines together, and compares with the default lifts.
pub fn lift_independence_sweep(data: &OrbifoldData, order: i64) -> Result<Vec<LiftFailure>> {
    lift_independence_sweep_by(data, order, |v| v.clone())
}

/// [`lift_independence_sweep`] with `post` applied to each value computed
/// from shifted lifts before it is compared with the reference.
pub fn lift_independence_sweep_by(
    data: &OrbifoldData,
    order: i64,
    post: impl Fn(&GenusValue) -> GenusValue + Sync,
) -> Result<Vec<LiftFailure>> {
    let n = data.n();
    let ni = n as i64;
    let mut jobs = Vec::new();
    for pair in data.group().commuting_pairs() {
        for comp in data.sector(pair)? {
            if comp.normal_lines.is_empty() {
                continue;
            }
            let base: Vec<(i64, i64)> = comp.normal_lines.iter().map(|l| l.lifts(n)).collect();
            let mut variants = Vec::new();
            for r in [-1i64, 1] {
                for r2 in [-1i64, 1] {
                    for i in 0..base.len() {
                        let mut v = base.clone();
                        v[i] = (v[i].0 + r * ni, v[i].1 + r2 * ni);
                        variants.push(v);
                    }
                    if base.len() > 1 {
                        variants.push(base.iter().map(|&(a, b)| (a + r * ni, b + r2 * ni)).collect());
                    }
                }
            }
            jobs.push((pair, comp, base, variants));
        }
    }
    let failures: Result<Vec<Vec<LiftFailure>>> = jobs
        .into_par_iter()
        .map(|(pair, comp, base, variants)| {
            let reference = sector_value_with_lifts(comp, n, order, &base)?;
            let mut out = Vec::new();
            for v in variants {
                if post(&sector_value_with_lifts(comp, n, order, &v)?) != reference {
                    out.push(LiftFailure {
                        pair,
                        component: comp.name.clone(),
                        lifts: v,
                    });
                }
            }
            Ok(out)
        })
        .collect();
    Ok(failures?.into_iter().flatten().collect())
}
