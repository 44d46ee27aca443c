use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::data::HorofunctionData;
use crate::error::{Error, Result};
use crate::kernel::{spectral_decomposition, Element};
use crate::tolerance::SIGMA_FLOOR;

/// Overlaps below this mark an ambiguous alignment.
const MIN_OVERLAP: f64 = 0.5;
/// Points used by the extrapolation.
const EXTRAPOLATION_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub sigma_floor: f64,
    /// Fail instead of flagging when frames cannot be aligned.
    pub strict: bool,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            sigma_floor: SIGMA_FLOOR,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaDiagnostics {
    /// Smallest normalized overlap used when chaining frames.
    pub min_overlap: f64,
    pub aligned: bool,
    /// Extrapolated ratios for every aligned direction, before truncation.
    pub raw_sigma: Vec<f64>,
    /// Difference between the two highest extrapolation orders, per direction.
    pub sigma_error: Vec<f64>,
    /// Directions dropped by the floor.
    pub truncated: usize,
    pub zeta_error: f64,
    /// Distance between the extrapolated frame and its orthogonalized form.
    pub frame_residual: f64,
    /// Whether `‖z_k‖` increases along the input.
    pub monotone_norms: bool,
}

#[derive(Debug, Clone)]
pub struct SigmaEstimate {
    pub data: HorofunctionData,
    /// Extrapolated limit of the sequence.
    pub zeta: Element,
    pub diagnostics: SigmaDiagnostics,
}

/// Neville extrapolation to `t = 0` of vector samples.
pub(crate) fn neville_at_zero(ts: &[f64], ys: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut p: Vec<Vec<Complex64>> = ys.to_vec();
    let n = ts.len();
    for level in 1..n {
        for i in 0..n - level {
            let j = i + level;
            let (ti, tj) = (ts[i], ts[j]);
            p[i] = p[i]
                .iter()
                .zip(&p[i + 1])
                .map(|(a, b)| (b * ti - a * tj) / (ti - tj))
                .collect();
        }
    }
    p.swap_remove(0)
}

/// Extrapolant from the last `m` samples and the difference to the one from the last `m − 1`.
fn extrapolate(ts: &[f64], ys: &[Vec<Complex64>]) -> (Vec<Complex64>, f64) {
    let n = ts.len();
    let m = EXTRAPOLATION_POINTS.min(n);
    let hi = neville_at_zero(&ts[n - m..], &ys[n - m..]);
    let lo = neville_at_zero(&ts[n - m + 1..], &ys[n - m + 1..]);
    let err = hi.iter().zip(&lo).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    (hi, err)
}

fn normalized_overlap(a: &Element, b: &Element) -> Complex64 {
    let d = a.coord_norm() * b.coord_norm();
    if d == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        a.inner(b) / d
    }
}

/// Frames `e_{k,i}` and values `α_{k,i}` aligned to the frame of the last element.
fn align(z: &[Element]) -> (Vec<Vec<(f64, Element)>>, f64) {
    let last = spectral_decomposition(&z[z.len() - 1]);
    let mut aligned = vec![Vec::new(); z.len()];
    aligned[z.len() - 1] = last.pairs().to_vec();
    let mut min_overlap = 1.0f64;
    for k in (0..z.len() - 1).rev() {
        let reference: Vec<Element> = aligned[k + 1].iter().map(|(_, e)| e.clone()).collect();
        let cand = spectral_decomposition(&z[k]);
        let mut scores: Vec<(f64, usize, usize, Complex64)> = Vec::new();
        for (i, r) in reference.iter().enumerate() {
            for (j, (_, e)) in cand.pairs().iter().enumerate() {
                let o = normalized_overlap(e, r);
                scores.push((o.norm(), i, j, o));
            }
        }
        scores.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut row: Vec<Option<(f64, Element)>> = vec![None; reference.len()];
        let mut used = vec![false; cand.len()];
        for (score, i, j, o) in scores {
            if row[i].is_some() || used[j] {
                continue;
            }
            used[j] = true;
            min_overlap = min_overlap.min(score);
            let (alpha, e) = &cand.pairs()[j];
            let phase = if score > 0.0 { o.conj() / score } else { Complex64::new(1.0, 0.0) };
            row[i] = Some((*alpha, e.scale(phase)));
        }
        aligned[k] = row
            .into_iter()
            .zip(reference)
            .map(|(r, e)| r.unwrap_or((0.0, e)))
            .collect();
    }
    (aligned, min_overlap)
}

/// Frame and coefficients of the horofunction defined by a boundary-convergent sequence.
pub fn estimate_sigma_from_sequence(z: &[Element]) -> Result<SigmaEstimate> {
    estimate_sigma_with(z, EstimateOptions::default())
}

pub fn estimate_sigma_with(z: &[Element], opts: EstimateOptions) -> Result<SigmaEstimate> {
    if z.len() < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 sequence elements, got {}", z.len())));
    }
    let factor = z[0].factor().clone();
    for x in z {
        factor_check(&factor, x)?;
    }
    let norms: Vec<f64> = z.iter().map(Element::norm).collect();
    let monotone_norms = norms.windows(2).all(|w| w[1] > w[0]);
    let (aligned, min_overlap) = align(z);
    let is_aligned = min_overlap >= MIN_OVERLAP;
    if opts.strict && !is_aligned {
        return Err(Error::Unalignable(format!("minimal overlap {min_overlap:.3}")));
    }
    let p = aligned[z.len() - 1].len();
    if p == 0 {
        return Err(Error::InvalidArgument("sequence ends at the origin".into()));
    }
    let ts: Vec<f64> = aligned.iter().map(|row| 1.0 - row[0].0 * row[0].0).collect();
    if ts.windows(2).any(|w| !(w[1] < w[0])) || ts[ts.len() - 1] <= 0.0 {
        return Err(Error::InvalidArgument("1 − ‖z_k‖² must decrease strictly and stay positive".into()));
    }
    let mut raw_sigma = Vec::with_capacity(p);
    let mut sigma_error = Vec::with_capacity(p);
    for i in 0..p {
        let ratios: Vec<Vec<Complex64>> = aligned
            .iter()
            .zip(&ts)
            .map(|(row, t)| {
                let a = row[i].0;
                vec![Complex64::new(t / ((1.0 - a) * (1.0 + a)), 0.0)]
            })
            .collect();
        let (v, err) = if i == 0 { (vec![Complex64::new(1.0, 0.0)], 0.0) } else { extrapolate(&ts, &ratios) };
        raw_sigma.push(v[0].re);
        sigma_error.push(err);
    }
    let keep: Vec<usize> = (0..p).filter(|&i| raw_sigma[i] >= opts.sigma_floor).collect();
    let mut extrapolated = Vec::with_capacity(keep.len());
    for &i in &keep {
        let samples: Vec<Vec<Complex64>> = aligned.iter().map(|row| row[i].1.coords().to_vec()).collect();
        extrapolated.push(Element::new(&factor, extrapolate(&ts, &samples).0)?);
    }
    let (frame, frame_residual) = orthogonalize(&factor, &extrapolated)
        .unwrap_or_else(|| (keep.iter().map(|&i| aligned[z.len() - 1][i].1.clone()).collect(), f64::INFINITY));
    let mut order: Vec<usize> = (0..keep.len()).collect();
    order.sort_by(|&a, &b| raw_sigma[keep[b]].total_cmp(&raw_sigma[keep[a]]).then(a.cmp(&b)));
    let frame_sorted: Vec<Element> = order.iter().map(|&k| frame[k].clone()).collect();
    let sigma_sorted: Vec<f64> = order.iter().map(|&k| raw_sigma[keep[k]].min(1.0)).collect();
    let data = HorofunctionData::new(frame_sorted, sigma_sorted)?;
    let samples: Vec<Vec<Complex64>> = z.iter().map(|x| x.coords().to_vec()).collect();
    let (zeta, zeta_error) = extrapolate(&ts, &samples);
    Ok(SigmaEstimate {
        data,
        zeta: Element::new(&factor, zeta)?,
        diagnostics: SigmaDiagnostics {
            min_overlap,
            aligned: is_aligned,
            raw_sigma,
            sigma_error,
            truncated: p - keep.len(),
            zeta_error,
            frame_residual,
            monotone_norms,
        },
    })
}

fn factor_check(f: &crate::kernel::Factor, x: &Element) -> Result<()> {
    if x.factor() == f {
        Ok(())
    } else {
        Err(Error::FactorMismatch(f.to_string(), x.factor().to_string()))
    }
}

/// Nearest orthogonal minimal frame: the spectral frame of `Σ λᵢ ẽᵢ` with
/// well separated `λᵢ`, matched back in order.
fn orthogonalize(factor: &crate::kernel::Factor, approx: &[Element]) -> Option<(Vec<Element>, f64)> {
    let n = approx.len();
    let mut w = Element::zero(factor);
    for (i, e) in approx.iter().enumerate() {
        w = &w + &e.scale_real(1.0 - i as f64 / (2.0 * n as f64));
    }
    let sd = spectral_decomposition(&w);
    if sd.len() != n {
        return None;
    }
    let frame = sd.frame();
    let residual = frame.iter().zip(approx).map(|(a, b)| a.dist(b)).fold(0.0, f64::max);
    (residual < 0.1).then_some((frame, residual))
}
