use serde::{Deserialize, Serialize};

use super::orbit::{limit_functions, ClusterRecord, OrbitRecord};
use super::selfmap::SelfMap;
use super::wolff::{wolff, FixedPointEvidence, Verdict, WolffData, WolffOptions, WolffSummary};
use crate::boundary::{classify_tripotent, tripotent_part, BoundaryComponent, ComponentRecord};
use crate::error::Result;
use crate::horofunction::{eval_bisect, HorofunctionData};
use crate::kernel::{Element, TripotentFlags};
use crate::par::Execution;
use crate::tolerance::Tolerances;

/// Hororadius of the designated start `a₀ = c_s`.
pub const A0_RADIUS: f64 = 0.5;
/// Default orbit length.
pub const ITERATIONS: usize = 200;
/// Escape threshold for orbit norms.
pub const ESCAPE: f64 = 1e-4;

pub const LIMIT_FUNCTION_GAP: &str = "limit functions are estimated pointwise from orbit tails on finitely many starts, not as locally uniform limits";

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub wolff: WolffOptions,
    pub iterations: usize,
    pub starts: Vec<Element>,
    pub tolerances: Tolerances,
}

impl ReportOptions {
    pub fn new(starts: Vec<Element>, tolerances: Tolerances, seed: u64, exec: Execution) -> ReportOptions {
        ReportOptions {
            wolff: WolffOptions {
                eh_tol: tolerances.eh_tol,
                sigma_floor: tolerances.sigma_floor,
                invariance_tol: tolerances.invariance,
                seed,
                exec,
                ..WolffOptions::default()
            },
            iterations: ITERATIONS,
            starts,
            tolerances,
        }
    }
}

/// Per-start orbit summary with capture results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartReport {
    pub start: Vec<[f64; 2]>,
    pub max_norm: f64,
    pub escaped: bool,
    pub saturated_at: Option<usize>,
    pub stagnation_index: usize,
    pub clusters: Vec<ClusterRecord>,
    pub finite_omega: bool,
    /// Closure membership per cluster representative.
    pub captured_clusters: Vec<bool>,
    /// Closure membership of every tail point.
    pub captured_tail: bool,
    /// Largest of `‖P₂x − c‖`, `‖P₁x‖`, `‖P₀x‖ − 1` over the tail.
    pub worst_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Holds,
    Fails,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitTripotent {
    pub point: Vec<[f64; 2]>,
    pub tripotent: Option<Vec<[f64; 2]>>,
    pub flags: Option<TripotentFlags>,
    pub peirce_dims: Option<[usize; 3]>,
}

/// Classification of the limit points of the designated orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub status: HypothesisStatus,
    pub detail: String,
    pub limits: Vec<LimitTripotent>,
}

impl HypothesisCheck {
    /// `holds`, `fails: …` or `indeterminate: …`.
    pub fn label(&self) -> String {
        match self.status {
            HypothesisStatus::Holds => "holds".into(),
            HypothesisStatus::Fails => format!("fails: {}", self.detail),
            HypothesisStatus::Indeterminate => format!("indeterminate: {}", self.detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub all_captured: Option<bool>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenjoyWolffReport {
    pub factor: String,
    pub fixed_point: FixedPointEvidence,
    pub wolff: WolffSummary,
    pub a0: Option<Vec<[f64; 2]>>,
    pub s0: Option<f64>,
    pub horocentre_component: Option<ComponentRecord>,
    pub predicted_component: Option<ComponentRecord>,
    pub designated: Option<StartReport>,
    pub starts: Vec<StartReport>,
    pub hypothesis: Option<HypothesisCheck>,
    pub conclusion: Conclusion,
    pub iterations: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub gap: String,
}

/// Report together with the in-memory objects it was built from.
#[derive(Debug, Clone)]
pub struct ReportRun {
    pub report: DenjoyWolffReport,
    pub wolff: WolffData,
    pub predicted: Option<BoundaryComponent>,
    pub designated: Option<OrbitRecord>,
    pub orbits: Vec<OrbitRecord>,
}

fn start_report(o: &OrbitRecord, comp: Option<&BoundaryComponent>, capture: f64) -> StartReport {
    let residual = |x: &Element| {
        comp.map_or(f64::NAN, |c| {
            let (r2, r1, r0) = c.residuals(x);
            r2.max(r1).max(r0 - 1.0)
        })
    };
    let worst_residual = o.tail().map(|(_, x)| residual(x)).fold(f64::NEG_INFINITY, f64::max);
    let max_norm = o.max_norm();
    StartReport {
        start: o.start.to_pairs(),
        max_norm,
        escaped: max_norm > 1.0 - ESCAPE,
        saturated_at: o.saturated_at,
        stagnation_index: o.stagnation_index,
        clusters: o.cluster_records(),
        finite_omega: o.finite_omega(),
        captured_clusters: o
            .clusters
            .iter()
            .map(|c| comp.is_some_and(|k| k.closure_contains(&c.representative, capture)))
            .collect(),
        captured_tail: comp.is_some_and(|k| o.tail().all(|(_, x)| k.closure_contains(x, capture))),
        worst_residual,
    }
}

/// `Σ_{σᵢ > s₀} eᵢ`.
pub fn truncated_horocentre(data: &HorofunctionData, s0: f64) -> Element {
    let mut c = Element::zero(data.factor());
    for (e, s) in data.frame().iter().zip(data.sigma()) {
        if *s > s0 {
            c = &c + e;
        }
    }
    c
}

/// Classifies the tripotent parts of the designated orbit's limit points.
pub fn hypothesis_check(o: &OrbitRecord, unit_threshold: f64) -> HypothesisCheck {
    let mut limits = Vec::new();
    let mut status = HypothesisStatus::Holds;
    let mut detail = "every limit tripotent is maximal or structural".to_string();
    if o.clusters.is_empty() {
        return HypothesisCheck {
            status: HypothesisStatus::Indeterminate,
            detail: "empty orbit".into(),
            limits,
        };
    }
    for c in &o.clusters {
        let x = &c.representative;
        let part = tripotent_part(x, unit_threshold);
        let classified = if part.is_zero() { None } else { classify_tripotent(&part).ok() };
        let entry = LimitTripotent {
            point: x.to_pairs(),
            tripotent: (!part.is_zero()).then(|| part.to_pairs()),
            flags: classified.as_ref().map(|t| t.flags()),
            peirce_dims: classified.as_ref().map(|t| t.peirce_dims()),
        };
        limits.push(entry);
        let (next, why) = match classified {
            None if part.is_zero() => (HypothesisStatus::Indeterminate, "limit point inside the ball".to_string()),
            None => (HypothesisStatus::Indeterminate, "tripotent part could not be classified".to_string()),
            Some(t) => {
                let f = t.flags();
                if f.maximal || f.structural {
                    continue;
                } else if f.minimal {
                    (HypothesisStatus::Fails, "minimal non-structural limit tripotent".to_string())
                } else {
                    (HypothesisStatus::Fails, "non-structural limit tripotent".to_string())
                }
            }
        };
        // a failure outranks indeterminacy
        if status != HypothesisStatus::Fails && (next == HypothesisStatus::Fails || status == HypothesisStatus::Holds) {
            status = next;
            detail = why;
        }
    }
    HypothesisCheck { status, detail, limits }
}

fn describe(c: &Element) -> String {
    let parts: Vec<String> = c
        .coords()
        .iter()
        .map(|z| {
            let r = |v: f64| if v.abs() < 5e-7 { 0.0 } else { v };
            if z.im.abs() < 5e-7 {
                format!("{}", (r(z.re) * 1e6).round() / 1e6)
            } else {
                format!("{}{:+}i", (r(z.re) * 1e6).round() / 1e6, (z.im * 1e6).round() / 1e6)
            }
        })
        .collect();
    if parts.len() == 1 {
        format!("{{{}}}", parts[0])
    } else {
        format!("{{({})}}", parts.join(","))
    }
}

/// Wolff construction, orbits of every start and of `a₀ = c_{1/2}`, the
/// predicted component from the truncated horocentre and the capture test.
pub fn denjoy_wolff_report(f: &SelfMap, opts: &ReportOptions) -> Result<ReportRun> {
    let tol = &opts.tolerances;
    let exec = opts.wolff.exec;
    let w = wolff(f, &opts.wolff)?;
    let n = opts.iterations;
    let mut a0 = None;
    let mut s0 = None;
    let mut horocentre = None;
    let mut predicted = None;
    if let Some(data) = w.horofunction() {
        let a = data.centre(A0_RADIUS);
        let s = eval_bisect(data, &a)?;
        horocentre = Some(BoundaryComponent::new(data.horocentre().clone()));
        predicted = Some(BoundaryComponent::new(classify_tripotent(&truncated_horocentre(data, s))?));
        a0 = Some(a);
        s0 = Some(s);
    }
    let mut all: Vec<Element> = opts.starts.clone();
    all.extend(a0.iter().cloned());
    let mut orbits = limit_functions(f, &all, n, tol.cluster_tol, exec)?;
    let designated = a0.as_ref().map(|_| orbits.pop().expect("designated orbit"));
    let comp = predicted.as_ref();
    let starts: Vec<StartReport> = orbits.iter().map(|o| start_report(o, comp, tol.capture)).collect();
    let designated_report = designated.as_ref().map(|o| start_report(o, comp, tol.capture));
    let hypothesis = designated.as_ref().map(|o| hypothesis_check(o, tol.unit_threshold));
    let conclusion = match w.evidence.verdict {
        Verdict::FixedPointFree => {
            let all_captured = starts.iter().chain(designated_report.iter()).all(|s| s.captured_tail && s.captured_clusters.iter().all(|c| *c));
            let c = predicted.as_ref().expect("fixed-point-free runs predict a component");
            Conclusion {
                all_captured: Some(all_captured),
                message: format!(
                    "fixed-point free; component {}; {}",
                    describe(c.tripotent().element()),
                    if all_captured { "all clusters captured" } else { "some limit points escape the predicted closure" }
                ),
            }
        }
        Verdict::InteriorFixedPoint => {
            let p = &w.fixed_points[w.fixed_points.len() - 1].point;
            Conclusion {
                all_captured: None,
                message: format!("fixed point found at {}", describe(p).trim_start_matches('{').trim_end_matches('}')),
            }
        }
        Verdict::Indeterminate => Conclusion {
            all_captured: None,
            message: format!(
                "indeterminate: ‖z_K‖ = {:.6}, ‖f(z_K) − z_K‖ = {:.3e}",
                w.evidence.last_norm, w.evidence.displacement
            ),
        },
    };
    let report = DenjoyWolffReport {
        factor: f.factor().to_string(),
        fixed_point: w.evidence.clone(),
        wolff: w.summary(),
        a0: a0.as_ref().map(Element::to_pairs),
        s0,
        horocentre_component: horocentre.as_ref().map(BoundaryComponent::record),
        predicted_component: predicted.as_ref().map(BoundaryComponent::record),
        designated: designated_report,
        starts,
        hypothesis,
        conclusion,
        iterations: n,
        seed: opts.wolff.seed,
        tolerances: *tol,
        gap: LIMIT_FUNCTION_GAP.into(),
    };
    Ok(ReportRun {
        report,
        wolff: w,
        predicted,
        designated,
        orbits,
    })
}
