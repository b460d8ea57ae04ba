use super::data::{FixedComponent, OrbifoldData};
use super::witten::todd_series;
use crate::error::{Error, Result};
use crate::exactnum::{Cyclotomic, YRational};
use crate::groups::CommutingPair;
use crate::series::{exp_jet, Jet};

/// ∫ ∏_j x_j/(1 − e^{−x_j}) · ∏_i 1/(1 − ζ_n^{−a_i} e^{−x_i}) on one component.
pub fn height_one_term(comp: &FixedComponent, n: u32) -> Result<Cyclotomic> {
    let shape = comp.shape();
    let mut acc = Jet::one(&shape);
    if !comp.tangent_roots.is_empty() {
        let td = todd_series(comp.dim)?;
        for u in &comp.tangent_roots {
            acc = acc.try_mul(&td.compose_univariate(u, &shape)?)?;
        }
    }
    let ni = n as i64;
    for line in &comp.normal_lines {
        if line.a.rem_euclid(ni) == 0 {
            return Err(Error::Pole(format!(
                "normal line of {} is invariant under the group element",
                comp.name
            )));
        }
        let e = exp_jet(&line.root, &YRational::from_integer(-1), &shape)?;
        let phase = YRational::constant(-Cyclotomic::root_of_unity(n, -line.a));
        let euler = Jet::one(&shape).try_add(&e.scale_y(&phase))?;
        acc = acc.try_mul(&euler.invert_unit()?)?;
    }
    let v = acc.integrate(&comp.integral)?;
    let c = v.coeff(0);
    if v.terms().any(|(e, _)| e != 0) {
        return Err(Error::Structural("height-one integrand depends on q".into()));
    }
    c.as_constant()
        .cloned()
        .ok_or_else(|| Error::Structural("height-one value is not a constant".into()))
}

/// Φ(M) + Σ_{g ≠ e} ∫_{M^g} ∏ x_j/(1 − e^{−x_j}) / e(𝒱(g)), the sectors being
/// the pairs (g, e) of the data, with characters a_i.
pub fn height_one_genus(data: &OrbifoldData) -> Result<Cyclotomic> {
    let group = data.group();
    let e = group.identity();
    let mut total = Cyclotomic::zero();
    for g in 0..group.order() {
        for comp in data.sector(CommutingPair::new(g, e))? {
            total = &total + &height_one_term(comp, data.n())?;
        }
    }
    Ok(total)
}

/// The terms of [`height_one_genus`] for a single element g, one per component.
pub fn height_one_sector(data: &OrbifoldData, g: usize) -> Result<Vec<Cyclotomic>> {
    let e = data.group().identity();
    data.sector(CommutingPair::new(g, e))?
        .iter()
        .map(|c| height_one_term(c, data.n()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    #[test]
    fn point_counts_elements() {
        for n in 1..=5 {
            let data = OrbifoldData::point(FiniteGroup::cyclic(n).unwrap()).unwrap();
            assert_eq!(height_one_genus(&data).unwrap(), Cyclotomic::from_integer(n as i64));
        }
    }

    #[test]
    fn trivial_group_is_todd() {
        let data = OrbifoldData::non_equivariant(vec![FixedComponent::cp1()]).unwrap();
        assert_eq!(height_one_genus(&data).unwrap(), Cyclotomic::one());
    }

    #[test]
    fn invariant_direction_is_a_pole() {
        let comp = FixedComponent::point("p", &[(0, 1)]);
        assert!(matches!(height_one_term(&comp, 2), Err(Error::Pole(_))));
    }
}
