//! Self-maps of the ball and their iteration: Earle-Hamilton fixed points,
//! the Wolff construction, orbits, limit-point estimates and Denjoy-Wolff
//! reports.

mod appendix;
mod earle_hamilton;
mod hilbert;
mod orbit;
mod report;
mod selfmap;
mod wolff;

pub use appendix::{
    bidisc_appendix_suite, disc_horofunction, polydisc_horofunction, AppendixReport, AppendixStart, Extremes, Scenario,
    DECAY_INDEX, DECAY_TARGET,
};
pub use earle_hamilton::{earle_hamilton, FixedPoint, FixedPointRecord};
pub use hilbert::{hilbert_alternative, Alternative, HilbertAlternativeReport};
pub use orbit::{cluster_tail, limit_functions, orbit, Cluster, ClusterRecord, OrbitRecord};
pub use report::{
    denjoy_wolff_report, hypothesis_check, truncated_horocentre, Conclusion, DenjoyWolffReport, HypothesisCheck,
    HypothesisStatus, LimitTripotent, ReportOptions, ReportRun, StartReport, A0_RADIUS, ESCAPE, ITERATIONS,
};
pub use selfmap::{clamp_to_ball, DiscMap, Primitive, SelfMap, CLAMP};
pub use wolff::{
    default_schedule, invariance_margin, wolff, FixedPointEvidence, InvarianceMargin, Verdict, WolffData, WolffOptions,
    WolffSummary,
};
