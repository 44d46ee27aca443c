use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::element::Element;
use super::factor::{Factor, Kind};
use super::norm::spin_values;
use super::svd::svd;
use crate::tolerance::CLUSTER_REL;

/// Spectral values below this fraction of a part's norm are dropped.
const ZERO_REL: f64 = 1e-13;

/// `a = Σ αᵢ eᵢ` with `α` descending and `eᵢ` orthogonal minimal tripotents.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pairs: Vec<(f64, Element)>,
    cluster_tol: f64,
}

impl SpectralDecomposition {
    pub fn pairs(&self) -> &[(f64, Element)] {
        &self.pairs
    }

    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|(a, _)| *a).collect()
    }

    pub fn frame(&self) -> Vec<Element> {
        self.pairs.iter().map(|(_, e)| e.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Spectral values closer than this are one cluster.
    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn reconstruct(&self, factor: &Factor) -> Element {
        let mut x = Element::zero(factor);
        for (a, e) in &self.pairs {
            x = &x + &e.scale_real(*a);
        }
        x
    }

    /// Clusters of equal spectral values with their summed (unique) tripotents.
    pub fn grouped(&self) -> Vec<(f64, Element)> {
        let mut out: Vec<(f64, Element)> = Vec::new();
        let mut last = f64::NAN;
        for (a, e) in &self.pairs {
            match out.last_mut() {
                Some((_, acc)) if (last - a).abs() <= self.cluster_tol => *acc = &*acc + e,
                _ => out.push((*a, e.clone())),
            }
            last = *a;
        }
        out
    }
}

fn rect_part(rows: usize, cols: usize, a: &[Complex64]) -> Vec<(f64, Vec<Complex64>)> {
    let d = svd(&DMatrix::from_row_slice(rows, cols, a));
    let top = d.values.first().copied().unwrap_or(0.0);
    let mut out = Vec::new();
    for (k, &s) in d.values.iter().enumerate() {
        if s <= ZERO_REL * top {
            continue;
        }
        let mut e = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                e.push(d.u[k][i] * d.v[k][j].conj());
            }
        }
        out.push((s, e));
    }
    out
}

fn hilbert_part(a: &[Complex64]) -> Vec<(f64, Vec<Complex64>)> {
    let n = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 {
        return vec![];
    }
    vec![(n, a.iter().map(|z| z / n).collect())]
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// A self-conjugate vector orthogonal to `r` with Hilbert norm `√2`.
fn self_conjugate_complement(conj: &Option<DMatrix<Complex64>>, r: &[Complex64]) -> Vec<Complex64> {
    let n = r.len();
    let rr = inner(r, r).re;
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for k in 0..n {
        for phase in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let mut b = vec![Complex64::new(0.0, 0.0); n];
            b[k] = phase;
            let bs = Factor::spin_star(conj, &b);
            let s: Vec<Complex64> = b.iter().zip(&bs).map(|(x, y)| (x + y) * 0.5).collect();
            let proj = inner(&s, r) / rr;
            let s: Vec<Complex64> = s.iter().zip(r).map(|(x, y)| x - proj * y).collect();
            let len = inner(&s, &s).re.sqrt();
            if best.as_ref().is_none_or(|(l, _)| len > *l + 1e-12) {
                best = Some((len, s));
            }
        }
    }
    let (len, s) = best.expect("spin factors have dim >= 3");
    let scale = 2f64.sqrt() / len;
    s.iter().map(|z| z * scale).collect()
}

fn spin_part(conj: &Option<DMatrix<Complex64>>, a: &[Complex64]) -> Vec<(f64, Vec<Complex64>)> {
    let (plus, minus) = spin_values(conj, a);
    if plus == 0.0 {
        return vec![];
    }
    if minus <= ZERO_REL * plus {
        return vec![(plus, a.iter().map(|z| z / plus).collect())];
    }
    let astar = Factor::spin_star(conj, a);
    if plus - minus <= CLUSTER_REL * plus {
        // a = λ w with w maximal; split w = u + v along a self-conjugate complement
        let lambda = 0.5 * (plus + minus);
        let w: Vec<Complex64> = a.iter().map(|z| z / lambda).collect();
        let nu = inner(&w, &Factor::spin_star(conj, &w)) / 2.0;
        let mu = (nu / nu.norm()).sqrt();
        let r: Vec<Complex64> = w.iter().map(|z| z * mu.conj()).collect();
        let y = self_conjugate_complement(conj, &r);
        let iy: Vec<Complex64> = y.iter().map(|z| z * mu * Complex64::new(0.0, 1.0)).collect();
        let u = w.iter().zip(&iy).map(|(x, t)| (x + t) * 0.5).collect();
        let v = w.iter().zip(&iy).map(|(x, t)| (x - t) * 0.5).collect();
        return vec![(lambda, u), (lambda, v)];
    }
    let p = inner(a, &astar);
    let mu = p / p.norm();
    let denom = plus * plus - minus * minus;
    let u: Vec<Complex64> = a
        .iter()
        .zip(&astar)
        .map(|(x, xs)| (x * plus - mu * xs * minus) / denom)
        .collect();
    let v = a.iter().zip(&u).map(|(x, e)| (x - e * plus) / minus).collect();
    vec![(plus, u), (minus, v)]
}

fn part_decomposition(part: &Factor, a: &[Complex64]) -> Vec<(f64, Vec<Complex64>)> {
    match part.kind() {
        Kind::Rectangular { rows, cols } => rect_part(*rows, *cols, a),
        Kind::Hilbert { .. } => hilbert_part(a),
        Kind::Spin { conjugation, .. } => spin_part(conjugation, a),
        Kind::DirectSum { .. } => unreachable!("parts are simple"),
    }
}

fn lex_key(e: &Element) -> (usize, Vec<(f64, f64)>) {
    let first = e
        .coords()
        .iter()
        .position(|z| z.norm() > 1e-12)
        .unwrap_or(usize::MAX);
    (first, e.coords().iter().map(|z| (-z.re, -z.im)).collect())
}

fn lex_cmp(a: &Element, b: &Element) -> Ordering {
    let (fa, ca) = lex_key(a);
    let (fb, cb) = lex_key(b);
    fa.cmp(&fb).then_with(|| {
        ca.iter()
            .zip(&cb)
            .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    })
}

/// Spectral decomposition with minimal tripotents.
///
/// Values within `1e-8·‖a‖` of each other form a cluster; inside a cluster the
/// order is lexicographic in the coordinates.
pub fn spectral_decomposition(a: &Element) -> SpectralDecomposition {
    let f = a.factor();
    let mut pairs: Vec<(f64, Element)> = Vec::new();
    for (off, part) in f.parts() {
        for (alpha, local) in part_decomposition(part, &a.coords()[off..off + part.dim()]) {
            let mut coords = vec![Complex64::new(0.0, 0.0); f.dim()];
            coords[off..off + part.dim()].copy_from_slice(&local);
            pairs.push((alpha, Element::from_parts_unchecked(f, coords)));
        }
    }
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(Ordering::Equal));
    let top = pairs.first().map_or(0.0, |p| p.0);
    let cluster_tol = CLUSTER_REL * top;
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end - 1].0 - pairs[end].0 <= cluster_tol {
            end += 1;
        }
        pairs[start..end].sort_by(|x, y| lex_cmp(&x.1, &y.1));
        start = end;
    }
    SpectralDecomposition { pairs, cluster_tol }
}
