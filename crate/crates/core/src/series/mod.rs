//! Truncated Puiseux series in q and nilpotent jets over them.

mod jet;
mod puiseux;
mod render;

pub use jet::{exp_jet, Jet, JetShape, LinearForm};
pub use puiseux::PuiseuxSeries;
pub use render::{parse_canonical, render_canonical, render_human};
