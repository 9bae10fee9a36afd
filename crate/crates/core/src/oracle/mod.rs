//! Small-instance ground truth: exhaustive optimizers, LP model export and
//! platoon-saving bounds.

mod bounds;
mod brute;
mod milp;

pub use bounds::{theorem1_bounds, BoundPair};
pub use brute::{brute_force_opt, brute_force_vrp, MAX_CUSTOMERS, MAX_FLEET};
pub use milp::{export_milp, parse_lp_counts, MilpCounts};

#[cfg(test)]
mod tests;
