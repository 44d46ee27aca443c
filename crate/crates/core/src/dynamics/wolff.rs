use serde::{Deserialize, Serialize};

use super::earle_hamilton::{earle_hamilton, FixedPoint, FixedPointRecord};
use super::selfmap::SelfMap;
use crate::error::Result;
use crate::horofunction::{estimate_sigma_with, eval_bisect, EstimateOptions, HorofunctionData, HorofunctionRecord, SigmaDiagnostics, SigmaEstimate};
use crate::kernel::{random_element_with, rng_for, Element};
use crate::par::Execution;
use crate::tolerance::{EH_TOL, INVARIANCE, SIGMA_FLOOR};

/// `‖z_K‖` at least `1 − ESCAPE_MARGIN` counts as escape to the boundary.
pub const ESCAPE_MARGIN: f64 = 1e-3;
/// Largest `‖f(z_K) − z_K‖` accepted as evidence of an interior fixed point.
pub const DISPLACEMENT_TOL: f64 = 1e-3;
/// Norm cap of the invariance samples.
pub const SAMPLE_CAP: f64 = 0.95;
pub const SAMPLES: usize = 500;

/// `β_k = 1 − 2^{−k}`, `k = 3..=14`.
pub fn default_schedule() -> Vec<f64> {
    (3..=14).map(|k| 1.0 - 0.5f64.powi(k)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FixedPointFree,
    InteriorFixedPoint,
    Indeterminate,
}

/// Evidence behind the fixed-point verdict, taken from the last `z_K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointEvidence {
    pub verdict: Verdict,
    pub last_norm: f64,
    /// `‖f(z_K) − z_K‖`.
    pub displacement: f64,
    /// Interior fixed-point estimate when one was found.
    pub point: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceMargin {
    /// `max F(f(x)) − F(x)`.
    pub abs: f64,
    /// `max (F(f(x)) − F(x))/F(x)`.
    pub rel: f64,
    pub samples: usize,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct WolffOptions {
    pub schedule: Vec<f64>,
    pub eh_tol: f64,
    pub sigma_floor: f64,
    pub invariance_tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for WolffOptions {
    fn default() -> Self {
        Self {
            schedule: default_schedule(),
            eh_tol: EH_TOL,
            sigma_floor: SIGMA_FLOOR,
            invariance_tol: INVARIANCE,
            samples: SAMPLES,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

/// Fixed points `z_k` of `β_k f` and the horofunction they define.
#[derive(Debug, Clone)]
pub struct WolffData {
    pub schedule: Vec<f64>,
    pub fixed_points: Vec<FixedPoint>,
    pub evidence: FixedPointEvidence,
    /// Present when `f` is fixed-point free.
    pub estimate: Option<SigmaEstimate>,
    pub invariance: Option<InvarianceMargin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WolffSummary {
    pub fixed_points: Vec<FixedPointRecord>,
    pub evidence: FixedPointEvidence,
    pub zeta: Option<Vec<[f64; 2]>>,
    pub horofunction: Option<HorofunctionRecord>,
    pub sigma_diagnostics: Option<SigmaDiagnostics>,
    pub invariance: Option<InvarianceMargin>,
}

impl WolffData {
    pub fn horofunction(&self) -> Option<&HorofunctionData> {
        self.estimate.as_ref().map(|e| &e.data)
    }

    pub fn zeta(&self) -> Option<&Element> {
        self.estimate.as_ref().map(|e| &e.zeta)
    }

    pub fn max_residual(&self) -> f64 {
        self.fixed_points.iter().map(|z| z.residual).fold(0.0, f64::max)
    }

    pub fn summary(&self) -> WolffSummary {
        WolffSummary {
            fixed_points: self.fixed_points.iter().zip(&self.schedule).map(|(z, b)| z.record(*b)).collect(),
            evidence: self.evidence.clone(),
            zeta: self.zeta().map(Element::to_pairs),
            horofunction: self.horofunction().map(HorofunctionData::record),
            sigma_diagnostics: self.estimate.as_ref().map(|e| e.diagnostics.clone()),
            invariance: self.invariance,
        }
    }
}

/// Wolff construction: `β_k f(z_k) = z_k`, escape test, `σ` estimate and
/// the invariance margin of the resulting horofunction.
pub fn wolff(f: &SelfMap, opts: &WolffOptions) -> Result<WolffData> {
    let schedule = opts.schedule.clone();
    if schedule.is_empty() || schedule.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(crate::Error::InvalidArgument("β schedule must be nonempty and increasing".into()));
    }
    let fixed_points: Vec<FixedPoint> = opts
        .exec
        .map(&schedule, |&b| earle_hamilton(f, b, opts.eh_tol))
        .into_iter()
        .collect::<Result<_>>()?;
    let last = &fixed_points[fixed_points.len() - 1].point;
    let last_norm = last.norm();
    let displacement = f.apply_clamped(last)?.0.dist(last);
    let verdict = if last_norm >= 1.0 - ESCAPE_MARGIN {
        Verdict::FixedPointFree
    } else if displacement <= DISPLACEMENT_TOL {
        Verdict::InteriorFixedPoint
    } else {
        Verdict::Indeterminate
    };
    let evidence = FixedPointEvidence {
        verdict,
        last_norm,
        displacement,
        point: (verdict == Verdict::InteriorFixedPoint).then(|| last.to_pairs()),
    };
    let (estimate, invariance) = if verdict == Verdict::FixedPointFree {
        let z: Vec<Element> = fixed_points.iter().map(|p| p.point.clone()).collect();
        let est = estimate_sigma_with(
            &z,
            EstimateOptions {
                sigma_floor: opts.sigma_floor,
                strict: false,
            },
        )?;
        let margin = invariance_margin(f, &est.data, opts.samples, opts.seed, opts.invariance_tol, opts.exec)?;
        (Some(est), Some(margin))
    } else {
        (None, None)
    };
    Ok(WolffData {
        schedule,
        fixed_points,
        evidence,
        estimate,
        invariance,
    })
}

/// `max F(f(x)) − F(x)` over seeded samples with `‖x‖ ≤ 0.95`.
pub fn invariance_margin(f: &SelfMap, data: &HorofunctionData, samples: usize, seed: u64, tol: f64, exec: Execution) -> Result<InvarianceMargin> {
    let mut rng = rng_for(seed, 0x3a);
    let xs: Vec<Element> = (0..samples).map(|_| random_element_with(f.factor(), SAMPLE_CAP, &mut rng)).collect();
    let diffs: Vec<(f64, f64)> = exec
        .map(&xs, |x| -> Result<(f64, f64)> {
            let fx = eval_bisect(data, x)?;
            let ffx = eval_bisect(data, &f.apply(x)?)?;
            Ok((ffx - fx, (ffx - fx) / fx))
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let abs = diffs.iter().map(|d| d.0).fold(f64::NEG_INFINITY, f64::max);
    let rel = diffs.iter().map(|d| d.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(InvarianceMargin {
        abs,
        rel,
        samples,
        tol,
        passed: samples == 0 || abs <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::selfmap::{DiscMap, Primitive};
    use crate::kernel::Factor;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn affine_disc_wolff_point() {
        let d = Factor::disc();
        let f = SelfMap::new(&d, vec![Primitive::coordwise(&d, vec![DiscMap::Affine { alpha: c(0.5), beta: c(0.5) }]).unwrap()]).unwrap();
        let w = wolff(&f, &WolffOptions { samples: 100, ..Default::default() }).unwrap();
        assert_eq!(w.evidence.verdict, Verdict::FixedPointFree);
        for (z, b) in w.fixed_points.iter().zip(&w.schedule) {
            assert!((z.point.coords()[0] - c(b / (2.0 - b))).norm() < 1e-12);
        }
        assert!((w.zeta().unwrap().coords()[0] - c(1.0)).norm() < 1e-6);
        let h = w.horofunction().unwrap();
        assert_eq!(h.q(), 1);
        let inv = w.invariance.unwrap();
        assert!(inv.passed && inv.abs <= 1e-6, "{inv:?}");
    }

    #[test]
    fn interior_fixed_point_detected() {
        let d = Factor::disc();
        let f = SelfMap::new(&d, vec![Primitive::coordwise(&d, vec![DiscMap::Affine { alpha: c(0.5), beta: c(0.25) }]).unwrap()]).unwrap();
        let w = wolff(&f, &WolffOptions::default()).unwrap();
        assert_eq!(w.evidence.verdict, Verdict::InteriorFixedPoint);
        let p = w.evidence.point.as_ref().unwrap();
        assert!((p[0][0] - 0.5).abs() < 1e-3);
        assert!(w.estimate.is_none());
    }

    #[test]
    fn bidisc_half_contraction() {
        let p = Factor::polydisc(2).unwrap();
        let f = SelfMap::new(&p, vec![Primitive::coordwise(&p, vec![DiscMap::Mobius(c(0.5)), DiscMap::Affine { alpha: c(0.5), beta: c(0.0) }]).unwrap()]).unwrap();
        let w = wolff(&f, &WolffOptions { samples: 50, ..Default::default() }).unwrap();
        let h = w.horofunction().unwrap();
        assert_eq!(h.q(), 1);
        assert!(h.frame()[0].dist(&Element::basis(&p, 0)) < 1e-9);
        assert!(w.zeta().unwrap().dist(&Element::basis(&p, 0)) < 1e-6);
    }

    #[test]
    fn parallel_matches_sequential() {
        let d = Factor::disc();
        let f = SelfMap::new(&d, vec![Primitive::coordwise(&d, vec![DiscMap::Mobius(c(0.5))]).unwrap()]).unwrap();
        let a = wolff(&f, &WolffOptions { samples: 40, exec: Execution::Parallel, ..Default::default() }).unwrap();
        let b = wolff(&f, &WolffOptions { samples: 40, exec: Execution::Sequential, ..Default::default() }).unwrap();
        assert_eq!(a.summary(), b.summary());
    }
}
