//! Modular vehicle routing: vehicles dock into platoons and split en route,
//! paying a per-arc cost that shrinks per vehicle as the platoon grows.
//!
//! The crate provides the instance model and exact fixed-point costs, the
//! segment DAG / Gantt solution representation with a validator, neighborhood
//! operators, a multi-start tabu search, and small-instance exact tools
//! (exhaustive optimizer, LP model export, platoon-saving bounds).

pub mod cost;
pub mod error;
pub mod instance;
pub mod neighborhood;
pub mod oracle;
pub mod search;
pub mod solution;

pub use cost::{Cost, CostModel, Eta};
pub use error::{Error, Result};
pub use instance::{derive_instance, distance, parse_instance, serialize_instance, DeriveParams, Instance, InstanceSpec, Metric, NodeId, Point, DEPOT};
pub use oracle::{brute_force_opt, brute_force_vrp, export_milp, theorem1_bounds, BoundPair, MilpCounts};
pub use solution::{mv_routes, validate, validate_doc, MvId, MvSet, Segment, Solution, SolutionDoc, ValidationReport, ViolationCode, Visit};
