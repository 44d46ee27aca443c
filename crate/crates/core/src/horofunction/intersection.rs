use rand::Rng;
use serde::{Deserialize, Serialize};

use super::data::HorofunctionData;
use super::horoball::Horoball;
use crate::boundary::BoundaryComponent;
use crate::error::Result;
use crate::kernel::{random_element_with, rng_for, Element};

/// Hororadii at which points of the component closure are tested.
pub const CHECK_RADII: [f64; 3] = [1.0, 0.1, 0.01];
/// Lower bound on the distance of the "far" test points from the closure.
pub const FAR_DISTANCE: f64 = 0.1;

/// `⋂_s H̄(ξ,s) ∩ ∂D`: the closure of the component of the horocentre.
pub fn closed_intersection_component(data: &HorofunctionData) -> BoundaryComponent {
    BoundaryComponent::new(data.horocentre().clone())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionCheck {
    /// Largest gauge over closure points, per radius in [`CHECK_RADII`].
    pub closure_max_gauge: Vec<f64>,
    /// Smallest gauge at `s = 0.01` over points at distance at least [`FAR_DISTANCE`].
    pub far_min_gauge: f64,
    pub samples: usize,
    pub tol: f64,
    pub passed: bool,
}

/// Samples `c + P₀(c)w` and points far from the closure and tests closed
/// membership against the horoballs.
///
/// Distance from the closure is bounded below by `‖P₂(c)x − c‖`, since `P₂(c)`
/// is contractive and fixes the closure at `c`.
pub fn verify_closed_intersection(data: &HorofunctionData, samples: usize, seed: u64, tol: f64) -> Result<IntersectionCheck> {
    let comp = closed_intersection_component(data);
    let c = comp.tripotent().element().clone();
    let factor = data.factor().clone();
    let balls: Vec<Horoball> = CHECK_RADII.iter().map(|&s| Horoball::new(data, s)).collect::<Result<_>>()?;
    let mut rng = rng_for(seed, 0x1e);
    let mut closure_max_gauge = vec![0.0f64; CHECK_RADII.len()];
    let mut far_min_gauge = f64::INFINITY;
    let p2 = comp.tripotent().projection(2);
    for k in 0..samples {
        let w = random_element_with(&factor, 1.0, &mut rng);
        let y = comp.canonical(&w);
        for (m, ball) in closure_max_gauge.iter_mut().zip(&balls) {
            *m = m.max(ball.gauge(&y));
        }
        // alternate between shrinking towards the face and random interior points
        let x = if k % 2 == 0 {
            let delta = rng.gen_range(FAR_DISTANCE..0.5);
            &c.scale_real(1.0 - delta) + &(&y - &c)
        } else {
            random_element_with(&factor, 1.0, &mut rng)
        };
        if (&p2.apply(&x) - &c).norm() >= FAR_DISTANCE {
            far_min_gauge = far_min_gauge.min(balls[2].gauge(&x));
        }
    }
    let passed = closure_max_gauge.iter().all(|g| *g <= 1.0 + tol) && far_min_gauge > 1.0 + tol;
    Ok(IntersectionCheck {
        closure_max_gauge,
        far_min_gauge,
        samples,
        tol,
        passed,
    })
}

/// Whether `x` is a closure point of the horocentre's component up to `tol`.
pub fn in_intersection(data: &HorofunctionData, x: &Element, tol: f64) -> bool {
    closed_intersection_component(data).closure_contains(x, tol)
}
