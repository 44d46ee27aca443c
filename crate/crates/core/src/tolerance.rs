//! Named tolerances.
//!
//! The constants are the defaults. [`Tolerances`] carries the subset that
//! run configurations may override by name.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative residual allowed in triple-product identities.
pub const IDENTITY_REL: f64 = 1e-10;
/// Residual of `{e,e,e} - e` accepted for a tripotent.
pub const TRIPOTENT: f64 = 1e-8;
/// Spectral values closer than this times `‖a‖` are one cluster.
pub const CLUSTER_REL: f64 = 1e-8;
/// Singular values above this count towards a Peirce dimension.
pub const PEIRCE_RANK: f64 = 1e-8;
/// Spectral values at least `1 - UNIT_THRESHOLD` count as 1 on the boundary.
pub const UNIT_THRESHOLD: f64 = 1e-6;
/// Distance under which two defining tripotents name the same component.
pub const COMPONENT_EQ: f64 = 1e-6;
/// `bergman_power` with a negative exponent refuses `‖x‖ ≥ 1 - BALL_MARGIN`.
pub const BALL_MARGIN: f64 = 1e-12;
/// Horofunction coefficients below this are truncated.
pub const SIGMA_FLOOR: f64 = 1e-9;
/// Bisection width for horofunction values.
pub const BISECT_ABS: f64 = 1e-10;
/// Relative fluctuation tolerated in the extrapolated evaluating sequence.
pub const SEQUENCE_FLUCTUATION: f64 = 1e-4;
/// Closed-horoball membership slack.
pub const CLOSURE_TOL: f64 = 1e-6;
/// Kobayashi step at which the Earle-Hamilton iteration stops.
pub const EH_TOL: f64 = 1e-12;
/// Iteration cap for the Earle-Hamilton iteration.
pub const EH_MAX_ITER: usize = 100_000;
/// Intra-cluster diameter for orbit tails.
pub const CLUSTER_TOL: f64 = 1e-3;
/// Tolerance for component capture of limit points.
pub const CAPTURE_TOL: f64 = 1e-3;
/// Allowed `F(f(x)) - F(x)`.
pub const INVARIANCE: f64 = 1e-6;
/// Allowed Kobayashi expansion of a self-map.
pub const SCHWARZ_PICK: f64 = 1e-8;
/// Random starts for the operator-norm ascent.
pub const OPNORM_STARTS: usize = 20;
/// Iterations per start for the operator-norm ascent.
pub const OPNORM_ITERS: usize = 200;

/// Runtime tolerance set, overridable by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub identity_rel: f64,
    pub tripotent: f64,
    pub peirce_rank: f64,
    pub unit_threshold: f64,
    pub component_eq: f64,
    pub sigma_floor: f64,
    pub bisect_abs: f64,
    pub sequence_fluctuation: f64,
    pub closure: f64,
    pub eh_tol: f64,
    pub cluster_tol: f64,
    pub capture: f64,
    pub invariance: f64,
    pub schwarz_pick: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity_rel: IDENTITY_REL,
            tripotent: TRIPOTENT,
            peirce_rank: PEIRCE_RANK,
            unit_threshold: UNIT_THRESHOLD,
            component_eq: COMPONENT_EQ,
            sigma_floor: SIGMA_FLOOR,
            bisect_abs: BISECT_ABS,
            sequence_fluctuation: SEQUENCE_FLUCTUATION,
            closure: CLOSURE_TOL,
            eh_tol: EH_TOL,
            cluster_tol: CLUSTER_TOL,
            capture: CAPTURE_TOL,
            invariance: INVARIANCE,
            schwarz_pick: SCHWARZ_PICK,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 14] = [
        "identity_rel",
        "tripotent",
        "peirce_rank",
        "unit_threshold",
        "component_eq",
        "sigma_floor",
        "bisect_abs",
        "sequence_fluctuation",
        "closure",
        "eh_tol",
        "cluster_tol",
        "capture",
        "invariance",
        "schwarz_pick",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "identity_rel" => &mut self.identity_rel,
            "tripotent" => &mut self.tripotent,
            "peirce_rank" => &mut self.peirce_rank,
            "unit_threshold" => &mut self.unit_threshold,
            "component_eq" => &mut self.component_eq,
            "sigma_floor" => &mut self.sigma_floor,
            "bisect_abs" => &mut self.bisect_abs,
            "sequence_fluctuation" => &mut self.sequence_fluctuation,
            "closure" => &mut self.closure,
            "eh_tol" => &mut self.eh_tol,
            "cluster_tol" => &mut self.cluster_tol,
            "capture" => &mut self.capture,
            "invariance" => &mut self.invariance,
            "schwarz_pick" => &mut self.schwarz_pick,
            _ => return None,
        })
    }

    /// Overrides one tolerance by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Config(format!("tolerance {name} must be positive, got {value}")));
        }
        let slot = self.slot(name).ok_or_else(|| {
            Error::Config(format!(
                "unknown tolerance {name:?}; known: {}",
                Self::NAMES.join(", ")
            ))
        })?;
        *slot = value;
        Ok(())
    }

    /// Parses `NAME=VALUE` and applies it.
    pub fn apply_assignment(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected NAME=VALUE, got {assignment:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad number in {assignment:?}")))?;
        self.set(name.trim(), value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_by_name() {
        let mut t = Tolerances::default();
        t.apply_assignment("cluster_tol=5e-4").unwrap();
        assert_eq!(t.cluster_tol, 5e-4);
        assert!(t.apply_assignment("nope=1").is_err());
        assert!(t.apply_assignment("eh_tol=-1").is_err());
        assert!(t.apply_assignment("eh_tol").is_err());
    }

    #[test]
    fn every_name_is_settable() {
        let mut t = Tolerances::default();
        for name in Tolerances::NAMES {
            t.set(name, 0.5).unwrap();
        }
        assert_eq!(t.schwarz_pick, 0.5);
    }
}
