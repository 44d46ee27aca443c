use serde::{Deserialize, Serialize};

use super::orbit::limit_functions;
use super::selfmap::SelfMap;
use super::wolff::{wolff, Verdict, WolffOptions};
use crate::error::{Error, Result};
use crate::kernel::Element;
use crate::tolerance::CLUSTER_TOL;

/// Limit points below this norm count as interior.
const INTERIOR_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    /// Every limit function is the constant `ζ`.
    BoundaryPoint,
    /// Limit functions take values inside the ball.
    Interior,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertAlternativeReport {
    pub alternative: Alternative,
    pub zeta: Option<Vec<[f64; 2]>>,
    /// Largest distance from a tail cluster to `ζ`.
    pub max_distance: Option<f64>,
    /// Largest distance between the limit estimates `f^N(a)` of two starts.
    pub spread: f64,
    pub interior_limits: usize,
    /// An interior limit for a fixed-point-free map, impossible in finite dimension.
    pub violation: bool,
    pub tol: f64,
}

/// Decides between `ℓ(D) ⊂ D` and `ℓ(D) = {ζ}` from orbit tails.
pub fn hilbert_alternative(f: &SelfMap, starts: &[Element], n: usize, opts: &WolffOptions, tol: f64) -> Result<HilbertAlternativeReport> {
    if !f.factor().is_hilbert() {
        return Err(Error::InvalidArgument(format!("the alternative needs a Hilbert ball, got {}", f.factor())));
    }
    let w = wolff(f, opts)?;
    let orbits = limit_functions(f, starts, n, CLUSTER_TOL, opts.exec)?;
    let limits: Vec<&Element> = orbits.iter().filter_map(|o| o.points.last()).collect();
    let spread = limits
        .iter()
        .flat_map(|a| limits.iter().map(move |b| a.dist(b)))
        .fold(0.0, f64::max);
    let interior_limits = orbits
        .iter()
        .filter(|o| o.clusters.iter().any(|c| c.representative.norm() < 1.0 - INTERIOR_MARGIN))
        .count();
    let zeta = w.horofunction().map(|h| h.horocentre().element().clone());
    let max_distance = zeta.as_ref().map(|z| {
        orbits
            .iter()
            .flat_map(|o| o.clusters.iter().map(|c| c.representative.dist(z)))
            .fold(0.0, f64::max)
    });
    let (alternative, violation) = match w.evidence.verdict {
        Verdict::FixedPointFree if interior_limits > 0 => (Alternative::Interior, true),
        Verdict::FixedPointFree if max_distance.is_some_and(|d| d <= tol) => (Alternative::BoundaryPoint, false),
        Verdict::InteriorFixedPoint => (Alternative::Interior, false),
        _ => (Alternative::Indeterminate, false),
    };
    Ok(HilbertAlternativeReport {
        alternative,
        zeta: zeta.as_ref().map(Element::to_pairs),
        max_distance,
        spread,
        interior_limits,
        violation,
        tol,
    })
}
