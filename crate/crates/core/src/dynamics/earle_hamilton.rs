use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::selfmap::SelfMap;
use crate::error::{Error, Result};
use crate::kernel::{kobayashi, Element};
use crate::tolerance::EH_MAX_ITER;

/// Iterations without a smaller step after which a tiny step counts as converged.
const STAGNATION_WINDOW: usize = 20;
/// Steps below this may end the iteration by stagnation.
const STAGNATION_STEP: f64 = 1e-9;

/// Fixed point of `βf` with convergence evidence.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub point: Element,
    pub iterations: usize,
    /// Last Kobayashi step.
    pub kappa_step: f64,
    /// `‖βf(z) − z‖`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub beta: f64,
    pub point: Vec<[f64; 2]>,
    pub norm: f64,
    pub iterations: usize,
    pub kappa_step: f64,
    pub residual: f64,
}

impl FixedPoint {
    pub fn record(&self, beta: f64) -> FixedPointRecord {
        FixedPointRecord {
            beta,
            point: self.point.to_pairs(),
            norm: self.point.norm(),
            iterations: self.iterations,
            kappa_step: self.kappa_step,
            residual: self.residual,
        }
    }
}

/// Fixed point of `βf` by iterating `x ↦ βf(x)` from the origin.
///
/// `βf` maps `D` into the ball of radius `β`, so the iteration is a strict
/// Kobayashi contraction. It stops when the step drops below `tol`, when
/// an iterate repeats exactly, or when rounding stalls a step below `1e-9`.
pub fn earle_hamilton(f: &SelfMap, beta: f64, tol: f64) -> Result<FixedPoint> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidArgument(format!("β = {beta} must lie in (0, 1)")));
    }
    let step = |x: &Element| -> Result<Element> { Ok(f.apply_clamped(x)?.0.scale(Complex64::new(beta, 0.0))) };
    let mut x = Element::zero(f.factor());
    let mut best = f64::INFINITY;
    let mut since_best = 0;
    for it in 1..=EH_MAX_ITER {
        let y = step(&x)?;
        let k = kobayashi(&x, &y)?;
        let repeated = y == x;
        if k < best {
            best = k;
            since_best = 0;
        } else {
            since_best += 1;
        }
        x = y;
        if k < tol || repeated || (since_best >= STAGNATION_WINDOW && k < STAGNATION_STEP) {
            let residual = step(&x)?.dist(&x);
            return Ok(FixedPoint {
                point: x,
                iterations: it,
                kappa_step: k,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: EH_MAX_ITER,
        last: Box::new(x),
    })
}
