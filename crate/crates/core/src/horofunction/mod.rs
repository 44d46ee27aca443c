//! Horofunctions `F_ξ`, their evaluators, horoballs and the closed-horoball
//! intersection.

mod data;
mod estimate;
mod eval;
mod grid;
mod horoball;
mod intersection;

pub use data::{HorofunctionData, HorofunctionRecord};
pub use estimate::{estimate_sigma_from_sequence, estimate_sigma_with, EstimateOptions, SigmaDiagnostics, SigmaEstimate};
pub use eval::{
    eval_bisect, eval_bisect_with, eval_opnorm, eval_sequence, evaluating_point, gromov_h, horofunction_operator,
    MembershipGauge, SequenceEstimate,
};
pub use grid::{horoball_grid, GridRow, Slice};
pub use horoball::{horoball, horoball_contains, Horoball};
pub use intersection::{
    closed_intersection_component, in_intersection, verify_closed_intersection, IntersectionCheck, CHECK_RADII,
    FAR_DISTANCE,
};
