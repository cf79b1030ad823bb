//! The subtour-elimination LP, its dual, and the strongly laminar instance
//! built from them.

mod atsp;
mod build;
mod dual;
pub mod simplex;

pub use atsp::{
    cut_value, dual_slacks, is_dual_feasible, separate_subtour, solve_atsp_lp, violated_cuts,
    DualLp, PrimalLp,
};
pub use build::{build_strongly_laminar_instance, LaminarBuild};
pub use dual::{canonicalize, make_strongly_laminar, uncross_dual};
