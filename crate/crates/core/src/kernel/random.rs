use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::element::Element;
use super::factor::Factor;
use super::spectral::spectral_decomposition;

/// Deterministic generator for stream `stream` of `seed`; streams are independent.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Gaussian direction scaled to a norm uniform in `[0, norm_cap]`.
pub fn random_element_with<R: Rng + ?Sized>(factor: &Factor, norm_cap: f64, rng: &mut R) -> Element {
    let coords: Vec<Complex64> = (0..factor.dim())
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let radius: f64 = norm_cap * rng.gen::<f64>();
    let x = Element::from_parts_unchecked(factor, coords);
    let n = x.norm();
    if n == 0.0 || norm_cap <= 0.0 {
        return Element::zero(factor);
    }
    let y = x.scale_real(radius / n);
    // rounding can push the norm a hair past the cap
    let m = y.norm();
    if m > norm_cap {
        y.scale_real(norm_cap / m)
    } else {
        y
    }
}

/// Random element with `‖x‖ ≤ norm_cap`, deterministic in `seed`.
pub fn random_element(factor: &Factor, norm_cap: f64, seed: u64) -> Element {
    random_element_with(factor, norm_cap, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random element of norm exactly `norm` (up to rounding).
pub fn random_element_of_norm<R: Rng + ?Sized>(factor: &Factor, norm: f64, rng: &mut R) -> Element {
    loop {
        let x = random_element_with(factor, 1.0, rng);
        let n = x.norm();
        if n > 1e-3 {
            return x.scale_real(norm / n);
        }
    }
}

/// Minimal frame of a random element: `rank` orthogonal minimal tripotents.
pub fn random_frame<R: Rng + ?Sized>(factor: &Factor, rng: &mut R) -> Vec<Element> {
    loop {
        let x = random_element_of_norm(factor, 1.0, rng);
        let sd = spectral_decomposition(&x);
        if sd.len() == factor.rank() {
            return sd.frame();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cap_gives_zero() {
        let f = Factor::rectangular(2, 2).unwrap();
        assert!(random_element(&f, 0.0, 3).is_zero());
    }

    #[test]
    fn deterministic() {
        let f = Factor::spin(4).unwrap();
        assert_eq!(random_element(&f, 0.9, 11), random_element(&f, 0.9, 11));
        assert_ne!(random_element(&f, 0.9, 11), random_element(&f, 0.9, 12));
        let mut a = rng_for(5, 1);
        let mut b = rng_for(5, 1);
        assert_eq!(random_element_with(&f, 0.5, &mut a), random_element_with(&f, 0.5, &mut b));
    }

    #[test]
    fn respects_cap() {
        let f = Factor::rectangular(2, 3).unwrap();
        let mut rng = rng_for(1, 0);
        let mut max = 0.0f64;
        let mut per_coord = vec![0.0f64; f.dim()];
        for _ in 0..10_000 {
            let x = random_element_with(&f, 0.9, &mut rng);
            max = max.max(x.norm());
            for (m, z) in per_coord.iter_mut().zip(x.coords()) {
                *m = m.max(z.norm());
            }
        }
        assert!(max <= 0.9);
        assert!(max > 0.85);
        assert!(per_coord.iter().all(|&m| m > 0.1));
    }

    #[test]
    fn frames_have_full_rank() {
        let mut rng = rng_for(2, 0);
        for f in [Factor::rectangular(2, 3).unwrap(), Factor::spin(4).unwrap(), Factor::polydisc(3).unwrap()] {
            assert_eq!(random_frame(&f, &mut rng).len(), f.rank());
        }
    }
}
