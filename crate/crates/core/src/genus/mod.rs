//! Fixed-point data and the genera computed from it.

mod analytic;
mod data;
mod height_one;
mod sector;
mod witten;

pub use analytic::{analytic_compare, analytic_compare_all, analytic_stalk_integrand, AnalyticOutcome};
pub use data::{FixedComponent, NormalLine, OrbifoldData};
pub use height_one::{height_one_genus, height_one_sector, height_one_term};
pub use sector::{
    all_sectors, lift_independence_sweep, lift_independence_sweep_by, orbifold_genus, sector_integrand, sector_sum, sector_value,
    sector_value_with_lifts, twisted_genus, GenusValue, LiftFailure, Normalization,
};
pub use witten::{a_hat_genus, a_hat_series, symmetric_power, todd_series, witten_genus, TSeries};
