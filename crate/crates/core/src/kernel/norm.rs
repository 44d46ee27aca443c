use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::element::Element;
use super::factor::{Factor, Kind};
use super::linop::{complexify, RealLinOp};
use super::random::random_element_with;
use super::spectral::spectral_decomposition;
use super::svd::spectral_norm;
use crate::tolerance::{OPNORM_ITERS, OPNORM_STARTS};

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Spectral values `(λ+, λ−)` of a spin vector.
pub(crate) fn spin_values(conj: &Option<DMatrix<Complex64>>, a: &[Complex64]) -> (f64, f64) {
    let q = inner(a, a).re;
    let astar = Factor::spin_star(conj, a);
    let p = inner(a, &astar).norm();
    // q² − p² by the Lagrange identity, free of cancellation when q ≈ p
    let mut d2 = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            d2 += (a[i] * astar[j] - a[j] * astar[i]).norm_sqr();
        }
    }
    let disc = d2.sqrt();
    let plus = ((q + disc) / 2.0).sqrt();
    // q − disc = p²/(q + disc) avoids cancellation
    let minus = if q > 0.0 { (p * p / (q + disc) / 2.0).sqrt() } else { 0.0 };
    (plus, minus)
}

fn part_norm(part: &Factor, a: &[Complex64]) -> f64 {
    match part.kind() {
        Kind::Rectangular { rows, cols } => {
            spectral_norm(&DMatrix::from_row_slice(*rows, *cols, a))
        }
        Kind::Hilbert { .. } => a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        Kind::Spin { conjugation, .. } => spin_values(conjugation, a).0,
        Kind::DirectSum { .. } => unreachable!("parts are simple"),
    }
}

/// JB*-norm: spectral norm of each simple part, maximum over parts.
pub fn element_norm(a: &Element) -> f64 {
    a.factor()
        .parts()
        .iter()
        .map(|(off, p)| part_norm(p, &a.coords()[*off..off + p.dim()]))
        .fold(0.0, f64::max)
}

/// Operator-norm estimate with respect to the JB*-norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpNorm {
    /// Best value found; a certified lower bound, exact when `exact`.
    pub value: f64,
    /// Upper bound (`√rank · ‖T‖₂` unless exact).
    pub upper: f64,
    pub exact: bool,
}

/// Sum of the spectral tripotents of `w`: the point of the closed unit ball
/// maximizing `Re⟨x, w⟩`.
fn extreme_point(w: &Element) -> Element {
    let sd = spectral_decomposition(w);
    let mut x = Element::zero(w.factor());
    for (_, e) in sd.pairs() {
        x = &x + e;
    }
    x
}

/// Top minimal tripotent of `y`: a norming functional under the coordinate pairing.
fn norming(y: &Element) -> Option<Element> {
    spectral_decomposition(y).pairs().first().map(|(_, e)| e.clone())
}

fn ascent_from(t: &RealLinOp, tt: &RealLinOp, mut x: Element, iters: usize) -> f64 {
    let mut best = 0.0f64;
    for _ in 0..iters {
        let nx = x.norm();
        if nx == 0.0 {
            break;
        }
        let y = t.apply(&x);
        let val = y.norm() / nx;
        let improved = val > best * (1.0 + 1e-15);
        best = best.max(val);
        if !improved && best > 0.0 {
            break;
        }
        let Some(g) = norming(&y) else { break };
        let w = tt.apply(&g);
        if w.is_zero() {
            break;
        }
        x = extreme_point(&w);
    }
    best
}

/// Operator norm with default ascent parameters.
pub fn op_norm(t: &RealLinOp) -> OpNorm {
    op_norm_with(t, OPNORM_STARTS, OPNORM_ITERS, 0x5eed)
}

/// Operator norm of `t` on `(V, ‖·‖)`.
///
/// Hilbert factors use the largest singular value and polydisc factors the
/// maximal row sum; both are exact. Other factors run a dual power ascent over
/// extreme points of the unit ball: from `x`, take a norming tripotent `g` of
/// `Tx`, then the extreme point maximizing `Re⟨x', Tᵀg⟩`. Each step does not
/// decrease `‖Tx‖`.
pub fn op_norm_with(t: &RealLinOp, starts: usize, iters: usize, seed: u64) -> OpNorm {
    let f = t.factor();
    if f.is_hilbert() {
        let v = t.euclidean_norm();
        return OpNorm {
            value: v,
            upper: v,
            exact: true,
        };
    }
    if f.is_polydisc() {
        let m = t.complex_matrix();
        let v = (0..m.nrows())
            .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        return OpNorm {
            value: v,
            upper: v,
            exact: true,
        };
    }
    let tt = t.transpose();
    let svd = t.matrix().clone().svd(false, true);
    let euclid = svd.singular_values.max();
    let upper = euclid * (f.rank() as f64).sqrt();
    if euclid == 0.0 {
        return OpNorm {
            value: 0.0,
            upper: 0.0,
            exact: true,
        };
    }
    let mut best = 0.0f64;
    if let Some(vt) = &svd.v_t {
        let imax = svd.singular_values.imax();
        let top = vt.row(imax).transpose();
        let x0 = Element::from_parts_unchecked(f, complexify(&top));
        best = best.max(ascent_from(t, &tt, extreme_point(&x0), iters));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..starts {
        let r = random_element_with(f, 1.0, &mut rng);
        best = best.max(ascent_from(t, &tt, extreme_point(&r), iters));
    }
    OpNorm {
        value: best,
        upper: upper.max(best),
        exact: false,
    }
}
