//! The reduced theta function θ̃ and the genus exponential f(x) = θ̃(x)/θ̃(x − z),
//! as symbolic q-series in s = e^x and as jets at torsion shifts.

mod fjet;
mod theta;

pub use fjet::{f_jet, f_jet_inverse, shifted_f, x_over_f_jet, ShiftedF};
pub use theta::{
    check_quasi_periodicity, f_fraction_check, f_fraction_composition_check, numeric_f_eval,
    numeric_theta_eval, theta_ell_shift_check, theta_q_shifted, theta_reduced, theta_shift_check,
    CheckOutcome, FractionPair, ThetaSeries, TwoVarLaurent,
};
