//! Complex singular value decomposition by one-sided Jacobi rotations.

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 80;

/// `A = Σ σₖ uₖ vₖᴴ` with `σ` descending; columns of `u` and `v` are the
/// singular vectors of the nonzero values.
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    pub values: Vec<f64>,
    pub u: Vec<Vec<Complex64>>,
    pub v: Vec<Vec<Complex64>>,
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Rotates columns `p, q` by `[c, s; −s, c]` after turning `q` by `e^{−iφ}`.
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, turn: Complex64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let yq = *y * turn;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Hestenes' method: orthogonalize the columns of `A·V` until every pair is
/// orthogonal to working precision.
pub(crate) fn svd(a: &DMatrix<Complex64>) -> Svd {
    let (rows, cols) = a.shape();
    let mut w: Vec<Vec<Complex64>> = (0..cols).map(|j| a.column(j).iter().copied().collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..cols).map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let eps = f64::EPSILON * rows.max(cols) as f64;
    // columns below this are rounding noise of the others
    let floor = (eps * w.iter().map(|c| norm_sqr(c)).sum::<f64>().sqrt()).powi(2);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = norm_sqr(&w[p]);
                let beta = norm_sqr(&w[q]);
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                let g = gamma.norm();
                if g <= eps * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let turn = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s, turn);
                rotate(&mut v, p, q, c, s, turn);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut triples: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = w
        .into_iter()
        .zip(v)
        .filter_map(|(col, vec)| {
            let s2 = norm_sqr(&col);
            (s2 > floor && s2 > 0.0).then(|| {
                let s = s2.sqrt();
                (s, col.iter().map(|z| z / s).collect(), vec)
            })
        })
        .collect();
    triples.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut out = Svd {
        values: Vec::with_capacity(triples.len()),
        u: Vec::with_capacity(triples.len()),
        v: Vec::with_capacity(triples.len()),
    };
    for (s, u, v) in triples {
        out.values.push(s);
        out.u.push(u);
        out.v.push(v);
    }
    out
}

/// Largest singular value.
pub(crate) fn spectral_norm(a: &DMatrix<Complex64>) -> f64 {
    svd(a).values.first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::random::rng_for;
    use rand::Rng;

    fn random(rng: &mut impl Rng, r: usize, c: usize, rank: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::zeros(r, c);
        for _ in 0..rank {
            let u = DMatrix::from_fn(r, 1, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let v = DMatrix::from_fn(c, 1, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            m += &u * v.adjoint();
        }
        m
    }

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check(m: &DMatrix<Complex64>) {
        let (r, c) = m.shape();
        let d = svd(m);
        let mut rec = DMatrix::<Complex64>::zeros(r, c);
        for k in 0..d.values.len() {
            let u = DMatrix::from_column_slice(r, 1, &d.u[k]);
            let v = DMatrix::from_column_slice(c, 1, &d.v[k]);
            rec += &u * v.adjoint() * Complex64::new(d.values[k], 0.0);
        }
        assert!(max_abs(&(rec - m)) <= 1e-13 * (1.0 + max_abs(m)), "{m}");
        assert!(d.values.windows(2).all(|w| w[0] >= w[1]));
        for k in 0..d.values.len() {
            if d.values[k] > 1e-12 {
                for l in 0..k {
                    if d.values[l] > 1e-12 {
                        assert!(dot(&d.u[l], &d.u[k]).norm() < 1e-12);
                    }
                }
            }
            assert!((norm_sqr(&d.v[k]) - 1.0).abs() < 1e-12, "{} {:?}", norm_sqr(&d.v[k]), d.values);
        }
    }

    #[test]
    fn reconstructs_random_and_rank_deficient() {
        let mut rng = rng_for(1, 1);
        for _ in 0..3000 {
            let r = rng.gen_range(1..6);
            let c = rng.gen_range(1..6);
            let k = rng.gen_range(0..=r.min(c));
            check(&random(&mut rng, r, c, k));
        }
    }

    #[test]
    fn clustered_values() {
        let mut rng = rng_for(2, 1);
        for n in 1..6 {
            let q = random(&mut rng, n, n, n).qr().q();
            check(&q);
            let d = svd(&q);
            assert!(d.values.iter().all(|s| (s - 1.0).abs() < 1e-13));
        }
        check(&DMatrix::<Complex64>::identity(3, 4));
    }

    #[test]
    fn agrees_with_known_values() {
        let m = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 4.0),
            Complex64::new(5.0, 0.0),
        ]);
        // AᴴA = [[25, −20i], [20i, 25]] has eigenvalues 45 and 5
        let d = svd(&m);
        assert!((d.values[0] - 45f64.sqrt()).abs() < 1e-14);
        assert!((d.values[1] - 5f64.sqrt()).abs() < 1e-14);
        assert_eq!(spectral_norm(&DMatrix::<Complex64>::zeros(2, 3)), 0.0);
    }
}
