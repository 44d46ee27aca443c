use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::orbit::OrbitRecord;
use super::report::{denjoy_wolff_report, DenjoyWolffReport, ReportOptions};
use super::selfmap::SelfMap;
use super::wolff::Verdict;
use crate::error::{Error, Result};
use crate::horofunction::HorofunctionData;
use crate::kernel::Element;

/// Orbit index at which the decay is read off.
pub const DECAY_INDEX: usize = 60;
/// Decay target at [`DECAY_INDEX`].
pub const DECAY_TARGET: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    CaseA,
    CaseB,
    CaseC,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::CaseA, Scenario::CaseB, Scenario::CaseC];

    /// Name of the matching demo.
    pub fn demo_name(self) -> &'static str {
        match self {
            Scenario::CaseA => "bidisc-case-a",
            Scenario::CaseB => "bidisc-case-b",
            Scenario::CaseC => "bidisc-case-c",
        }
    }
}

/// Which moduli of the tail tend to 1; "first" is the coordinate of the leading horocentre tripotent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremes {
    /// Some tail points have both moduli near 1.
    Both,
    /// The first modulus tends to 1 and the second stays away.
    FirstOnly,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixStart {
    pub start: Vec<[f64; 2]>,
    pub extremes: Extremes,
    /// `F_c(f^m(a))` for `m = 0..=N`.
    pub decay: Vec<f64>,
    /// `F_c(f^m(a))` at `m = min(60, N)`.
    pub decay_at_index: f64,
    pub decay_monotone: bool,
    pub captured: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub scenario: Scenario,
    pub fixed_point_found: bool,
    pub first_coordinate: Option<usize>,
    pub starts: Vec<AppendixStart>,
    pub dichotomy_holds: bool,
    pub decay_holds: bool,
    pub capture_holds: bool,
    pub report: DenjoyWolffReport,
}

/// `|1−z|²/(1−|z|²)` as `1/Re((1+z)/(1−z))`; zero at `z = 1`.
pub fn disc_horofunction(z: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    if z == one {
        return 0.0;
    }
    1.0 / ((one + z) / (one - z)).re
}

/// `F_c(x) = maxⱼ σⱼ·|1 − c̄ⱼxⱼ|²/(1 − |xⱼ|²)` over the coordinates of the
/// frame, for a horofunction on a sum of discs.
pub fn polydisc_horofunction(data: &HorofunctionData, x: &Element) -> Result<f64> {
    if !data.factor().is_polydisc() {
        return Err(Error::InvalidArgument(format!("closed form needs a polydisc, got {}", data.factor())));
    }
    let mut f = 0.0f64;
    for (e, s) in data.frame().iter().zip(data.sigma()) {
        let (j, c) = e
            .coords()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("nonempty frame element");
        f = f.max(s * disc_horofunction(c.conj() * x.coords()[j]));
    }
    Ok(f)
}

fn extremes(o: &OrbitRecord, first: usize, tol: f64) -> Extremes {
    let second = 1 - first;
    let near = |x: &Element, j: usize| x.coords()[j].norm() >= 1.0 - tol;
    if o.tail().any(|(_, x)| near(x, 0) && near(x, 1)) {
        Extremes::Both
    } else if o.tail().all(|(_, x)| near(x, first) && !near(x, second)) {
        Extremes::FirstOnly
    } else {
        Extremes::Neither
    }
}

/// Runs a bidisc scenario: dichotomy of the extremes, decay of `F_c` along
/// orbits and capture in the predicted component.
pub fn bidisc_appendix_suite(scenario: Scenario, f: &SelfMap, opts: &ReportOptions) -> Result<AppendixReport> {
    if f.factor().dim() != 2 || !f.factor().is_polydisc() || f.factor().parts().len() != 2 {
        return Err(Error::InvalidArgument(format!("the appendix suite needs the bidisc, got {}", f.factor())));
    }
    let run = denjoy_wolff_report(f, opts)?;
    let fixed_point_found = run.wolff.evidence.verdict == Verdict::InteriorFixedPoint;
    let tol = opts.tolerances.capture;
    let data = run.wolff.horofunction().cloned();
    let first = data.as_ref().map(|h| {
        let e = &h.frame()[0];
        if e.coords()[0].norm() >= e.coords()[1].norm() {
            0
        } else {
            1
        }
    });
    let mut starts = Vec::new();
    for (o, rep) in run.orbits.iter().zip(&run.report.starts) {
        let decay: Vec<f64> = match &data {
            Some(h) => std::iter::once(&o.start)
                .chain(o.points.iter())
                .map(|x| polydisc_horofunction(h, x))
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let idx = DECAY_INDEX.min(decay.len().saturating_sub(1));
        starts.push(AppendixStart {
            start: o.start.to_pairs(),
            extremes: first.map_or(Extremes::Neither, |j| extremes(o, j, tol)),
            decay_at_index: decay.get(idx).copied().unwrap_or(f64::NAN),
            decay_monotone: decay.windows(2).all(|w| w[1] <= w[0] * (1.0 + opts.tolerances.invariance)),
            decay,
            captured: rep.captured_tail && rep.captured_clusters.iter().all(|c| *c),
        });
    }
    let dichotomy_holds = !starts.is_empty() && starts.iter().all(|s| s.extremes != Extremes::Neither);
    let decay_holds = !starts.is_empty() && starts.iter().all(|s| s.decay_at_index <= DECAY_TARGET);
    let capture_holds = !starts.is_empty() && starts.iter().all(|s| s.captured);
    Ok(AppendixReport {
        scenario,
        fixed_point_found,
        first_coordinate: first,
        starts,
        dichotomy_holds,
        decay_holds,
        capture_holds,
        report: run.report,
    })
}
