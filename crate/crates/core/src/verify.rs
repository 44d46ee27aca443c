//! Randomized identity suites over a factor.
//!
//! Every suite draws `trials` independent samples from its own stream of the
//! seed and records the largest residual against its tolerance. Suites that
//! need more structure than the factor has (rank 2, a Hilbert ball, a
//! polydisc) are skipped.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{component_of_boundary_point, BoundaryComponent};
use crate::error::Result;
use crate::kernel::{
    bergman, bergman_power, bergman_via_peirce, box_op, kobayashi, op_norm, quadratic, random_element_of_norm,
    random_element_with, random_frame, rng_for, transvection_apply, triple_product, Element, Factor, JointPeirce,
    Linearity, RealLinOp, Transvection, Tripotent,
};
use crate::par::Execution;
use crate::tolerance::Tolerances;

/// Deviation allowed in `‖exp(it·a□a)‖ = 1`.
pub const HERMITIAN_TOL: f64 = 1e-6;
/// Times at which the Hermitian axiom is sampled.
pub const HERMITIAN_TIMES: [f64; 4] = [-5.0, -1.0, 1.0, 5.0];
/// Tolerance of the orthogonality and transvection-factorization suites.
pub const ORTHOGONAL_TOL: f64 = 1e-9;
/// Tolerance of the Bergman-operator identity for `1 − ‖g₋ᵧ(z)‖²`.
pub const BID_TOL: f64 = 1e-5;
/// Tolerance of `1 − ‖g₋ᵧₘ(z)‖` at the last escape step.
pub const ESCAPE_TOL: f64 = 1e-4;
/// Escape steps `‖yₘ‖ = 1 − 2⁻ᵐ`.
pub const ESCAPE_STEPS: i32 = 24;
/// Norm cap of random points.
const CAP: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// First error raised by a sample, if any.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub factor: String,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

type Run = fn(&Factor, &mut ChaCha8Rng, &Tolerances) -> Result<f64>;

struct Suite {
    name: &'static str,
    tolerance: fn(&Tolerances) -> f64,
    applies: fn(&Factor) -> bool,
    run: Run,
}

fn always(_: &Factor) -> bool {
    true
}

fn rank_two(f: &Factor) -> bool {
    f.rank() >= 2
}

fn hilbert(f: &Factor) -> bool {
    f.is_hilbert()
}

fn polydisc(f: &Factor) -> bool {
    f.is_polydisc()
}

fn rank_one(f: &Factor) -> bool {
    f.rank() == 1
}

const SUITES: &[Suite] = &[
    Suite { name: "triple_identity", tolerance: |t| t.identity_rel, applies: always, run: triple_identity },
    Suite { name: "jp1", tolerance: |t| t.identity_rel, applies: always, run: jp1 },
    Suite { name: "hermitian", tolerance: |_| HERMITIAN_TOL, applies: always, run: hermitian },
    Suite { name: "nonnegative_spectrum", tolerance: |t| t.identity_rel, applies: always, run: nonnegative_spectrum },
    Suite { name: "box_norm", tolerance: |t| t.tripotent, applies: always, run: box_norm },
    Suite { name: "orthogonal_sum", tolerance: |_| ORTHOGONAL_TOL, applies: rank_two, run: orthogonal_sum },
    Suite { name: "transvection_factorization", tolerance: |_| ORTHOGONAL_TOL, applies: rank_two, run: factorization },
    Suite { name: "transvection_inverse", tolerance: |_| ORTHOGONAL_TOL, applies: always, run: inverse },
    Suite { name: "kobayashi_invariance", tolerance: |t| t.schwarz_pick, applies: always, run: kobayashi_invariance },
    Suite { name: "bid", tolerance: |_| BID_TOL, applies: always, run: bid },
    Suite { name: "hh", tolerance: |t| t.identity_rel, applies: hilbert, run: hh },
    Suite { name: "boundary_escape", tolerance: |_| ESCAPE_TOL, applies: always, run: escape },
    Suite { name: "minimal_dichotomy", tolerance: |t| t.tripotent, applies: polydisc, run: dichotomy },
    Suite { name: "polydisc_coordinatewise", tolerance: |t| t.identity_rel, applies: polydisc, run: coordinatewise },
    Suite { name: "peirce", tolerance: |t| t.identity_rel, applies: always, run: peirce },
    Suite { name: "joint_peirce", tolerance: |t| t.identity_rel, applies: always, run: joint_peirce },
    Suite { name: "spectral_bergman", tolerance: |t| t.identity_rel, applies: always, run: spectral_bergman },
    Suite { name: "bergman_power", tolerance: |t| t.identity_rel, applies: always, run: power },
    Suite { name: "rank_one_singletons", tolerance: |t| t.component_eq, applies: rank_one, run: singletons },
    Suite { name: "component_partition", tolerance: |_| 0.0, applies: always, run: partition },
    Suite { name: "disc_in_component", tolerance: |t| t.component_eq, applies: always, run: disc_in_component },
];

/// Names of all suites in run order.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Runs every applicable suite with `trials` samples each.
pub fn verify_factor(factor: &Factor, trials: usize, seed: u64, tol: &Tolerances, exec: Execution) -> VerifyReport {
    let mut checks = Vec::new();
    for (k, suite) in SUITES.iter().enumerate() {
        if !(suite.applies)(factor) {
            continue;
        }
        let results = exec.map_range(trials, |t| {
            let mut rng = rng_for(seed, ((k as u64) << 32) | t as u64);
            (suite.run)(factor, &mut rng, tol)
        });
        let tolerance = (suite.tolerance)(tol);
        let mut max_residual = 0.0f64;
        let mut error = None;
        for r in results {
            match r {
                Ok(v) if v.is_nan() => max_residual = f64::INFINITY,
                Ok(v) => max_residual = max_residual.max(v),
                Err(e) => {
                    max_residual = f64::INFINITY;
                    error.get_or_insert_with(|| e.to_string());
                }
            }
        }
        log::debug!("{}: max residual {max_residual:.3e} (tol {tolerance:.1e})", suite.name);
        checks.push(Check {
            name: suite.name.to_string(),
            samples: trials,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
            error,
        });
    }
    VerifyReport {
        factor: factor.to_string(),
        trials,
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn point(f: &Factor, rng: &mut ChaCha8Rng) -> Element {
    random_element_with(f, CAP, rng)
}

fn phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn coefficient(rng: &mut ChaCha8Rng, cap: f64) -> Complex64 {
    phase(rng) * rng.gen_range(0.0..cap)
}

fn combination(frame: &[Element], coef: &[Complex64]) -> Element {
    let mut x = Element::zero(frame[0].factor());
    for (e, c) in frame.iter().zip(coef) {
        x = &x + &e.scale(*c);
    }
    x
}

/// Nonempty random subset of `0..n` as a mask.
fn subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    loop {
        let mask: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        if mask.iter().any(|m| *m) {
            return mask;
        }
    }
}

fn masked_sum(frame: &[Element], mask: &[bool]) -> Element {
    let mut x = Element::zero(frame[0].factor());
    for (e, _) in frame.iter().zip(mask).filter(|(_, m)| **m) {
        x = &x + e;
    }
    x
}

fn triple_identity(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let [a, b, x, y, z] = std::array::from_fn(|_| random_element_with(f, 2.0, rng));
    let t = |p: &Element, q: &Element, r: &Element| triple_product(p, q, r);
    let lhs = t(&a, &b, &t(&x, &y, &z)?)?;
    let rhs = &(&t(&t(&a, &b, &x)?, &y, &z)? - &t(&x, &t(&b, &a, &y)?, &z)?) + &t(&x, &y, &t(&a, &b, &z)?)?;
    let scale = a.norm() * b.norm() * x.norm() * y.norm() * z.norm();
    Ok(lhs.dist(&rhs) / scale.max(f64::MIN_POSITIVE))
}

fn jp1(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let [x, y, z] = std::array::from_fn(|_| random_element_with(f, 2.0, rng));
    let qx = quadratic(&x);
    let lhs = quadratic(&qx.apply(&y)).apply(&z);
    let rhs = qx.compose(&quadratic(&y)).compose(&qx).apply(&z);
    let scale = x.norm().powi(4) * y.norm().powi(2) * z.norm();
    Ok(lhs.dist(&rhs) / scale.max(f64::MIN_POSITIVE))
}

fn hermitian(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let a = point(f, rng);
    let h = box_op(&a, &a)?.complex_matrix();
    let mut worst = 0.0f64;
    for t in HERMITIAN_TIMES {
        let generator = RealLinOp::from_complex_matrix(f, &(&h * Complex64::new(0.0, t)));
        let u = RealLinOp::from_matrix(f, generator.matrix().exp(), Linearity::Complex);
        let n = op_norm(&u);
        worst = worst.max((n.value - 1.0).abs());
        if !n.exact {
            worst = worst.max(1.0 - n.upper);
        }
    }
    Ok(worst)
}

fn nonnegative_spectrum(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let a = point(f, rng);
    let m = box_op(&a, &a)?.matrix().clone();
    // self-adjoint for the coordinate inner product, so symmetric once realified
    let asymmetry = (&m - m.transpose()).amax();
    let least = m.symmetric_eigenvalues().min();
    Ok(asymmetry.max(-least))
}

fn box_norm(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let a = point(f, rng);
    let n = op_norm(&box_op(&a, &a)?);
    let target = a.norm().powi(2);
    let mut r = (n.value - target).abs();
    if !n.exact {
        r = r.max(target - n.upper);
    }
    Ok(r)
}

/// Orthogonal `a, b` and `c` in the span of `a`'s frame elements.
fn orthogonal_triple(f: &Factor, rng: &mut ChaCha8Rng) -> (Element, Element, Element) {
    let frame = random_frame(f, rng);
    let split = rng.gen_range(1..frame.len());
    let (left, right) = frame.split_at(split);
    let ca: Vec<Complex64> = (0..left.len()).map(|_| coefficient(rng, CAP)).collect();
    let cc: Vec<Complex64> = (0..left.len()).map(|_| coefficient(rng, CAP)).collect();
    let cb: Vec<Complex64> = (0..right.len()).map(|_| coefficient(rng, CAP)).collect();
    (combination(left, &ca), combination(right, &cb), combination(left, &cc))
}

fn orthogonal_sum(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let (a, b, _) = orthogonal_triple(f, rng);
    let ab = box_op(&a, &b)?.max_abs();
    let ba = box_op(&b, &a)?.max_abs();
    let sum = ((&a + &b).norm() - a.norm().max(b.norm())).abs();
    Ok(ab.max(ba).max(sum))
}

fn factorization(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let (a, b, c) = orthogonal_triple(f, rng);
    let x = point(f, rng);
    let composed = transvection_apply(&a, &transvection_apply(&b, &x)?)?;
    let direct = transvection_apply(&(&a + &b), &x)?;
    let shifted = transvection_apply(&a, &(&c + &b))?;
    let split = &transvection_apply(&a, &c)? + &b;
    Ok(composed.dist(&direct).max(shifted.dist(&split)))
}

fn inverse(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let g = Transvection::new(&point(f, rng))?;
    let x = point(f, rng);
    Ok(g.inverse().apply(&g.apply(&x)?)?.dist(&x))
}

fn kobayashi_invariance(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let g = Transvection::new(&point(f, rng))?;
    let x = point(f, rng);
    let y = point(f, rng);
    let before = kobayashi(&x, &y)?;
    let after = kobayashi(&g.apply(&x)?, &g.apply(&y)?)?;
    Ok((after - before).abs() / (1.0 + before))
}

fn bid(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let y = point(f, rng);
    let z = point(f, rng);
    let lhs = 1.0 - transvection_apply(&-&y, &z)?.norm().powi(2);
    let op = bergman_power(&z, -0.5)?
        .compose(&bergman(&z, &y)?)
        .compose(&bergman_power(&y, -0.5)?);
    let n = op_norm(&op);
    if n.exact {
        Ok((lhs - 1.0 / n.value).abs())
    } else {
        Ok((n.value - 1.0 / lhs).max(0.0))
    }
}

fn hh(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let a = point(f, rng);
    let b = point(f, rng);
    let lhs = 1.0 - transvection_apply(&-&b, &a)?.norm().powi(2);
    let rhs = (1.0 - a.norm().powi(2)) * (1.0 - b.norm().powi(2)) / (Complex64::new(1.0, 0.0) - a.inner(&b)).norm_sqr();
    Ok((lhs - rhs).abs())
}

fn escape(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let e = random_element_of_norm(f, 1.0, rng);
    let z = point(f, rng);
    let norms = (1..=ESCAPE_STEPS)
        .map(|m| {
            let y = e.scale_real(1.0 - 2f64.powi(-m));
            Ok(transvection_apply(&-&y, &z)?.norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    // the trend is read once ‖yₘ‖ has passed every ‖z‖ ≤ 0.9
    let drop = norms[7..].windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
    Ok((1.0 - norms[norms.len() - 1]).max(drop))
}

fn dichotomy(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let first = random_frame(f, rng);
    let second = random_frame(f, rng);
    let c = &first[rng.gen_range(0..first.len())];
    let e = &second[rng.gen_range(0..second.len())];
    let ip = c.inner(e);
    let lambda = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    let parallel = c.dist(&e.scale(lambda));
    let orthogonal = box_op(c, e)?.max_abs();
    Ok(parallel.min(orthogonal))
}

fn coordinatewise(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let a = point(f, rng);
    let x = point(f, rng);
    let g = transvection_apply(&a, &x)?;
    Ok(a.coords()
        .iter()
        .zip(x.coords())
        .zip(g.coords())
        .map(|((a, x), g)| ((x + a) / (1.0 + a.conj() * x) - g).norm())
        .fold(0.0, f64::max))
}

fn random_tripotent(f: &Factor, rng: &mut ChaCha8Rng) -> Result<Tripotent> {
    let frame = random_frame(f, rng);
    let mask = subset(rng, frame.len());
    Tripotent::new(masked_sum(&frame, &mask))
}

fn peirce(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let e = random_tripotent(f, rng)?;
    let p = e.projections();
    let id = RealLinOp::identity(f);
    let mut r = p[0].add(&p[1]).add(&p[2]).max_abs_diff(&id);
    for j in 0..3 {
        r = r.max(p[j].compose(&p[j]).max_abs_diff(&p[j]));
        for k in 0..3 {
            if j != k {
                r = r.max(p[j].compose(&p[k]).max_abs());
            }
        }
    }
    Ok(r)
}

fn joint_peirce(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let frame = random_frame(f, rng);
    let jp = JointPeirce::new(f, &frame)?;
    let mut sum = RealLinOp::zero(f);
    let mut r = 0.0f64;
    let ops: Vec<&RealLinOp> = jp.iter().map(|(_, _, p)| p).collect();
    for (i, p) in ops.iter().enumerate() {
        sum.axpy(1.0, p);
        r = r.max(p.compose(p).max_abs_diff(p));
        for q in &ops[i + 1..] {
            r = r.max(p.compose(q).max_abs());
        }
    }
    Ok(r.max(sum.max_abs_diff(&RealLinOp::identity(f))))
}

fn spectral_bergman(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let frame = random_frame(f, rng);
    let lambda: Vec<Complex64> = (0..frame.len()).map(|_| coefficient(rng, CAP)).collect();
    let x = combination(&frame, &lambda);
    Ok(bergman_via_peirce(&frame, &lambda)?.max_abs_diff(&bergman(&x, &x)?))
}

fn power(f: &Factor, rng: &mut ChaCha8Rng, _: &Tolerances) -> Result<f64> {
    let x = point(f, rng);
    let b = bergman(&x, &x)?;
    let half = bergman_power(&x, 0.5)?;
    let inv = bergman_power(&x, -0.5)?;
    let square = half.compose(&half).max_abs_diff(&b);
    let unit = inv.compose(&half).max_abs_diff(&RealLinOp::identity(f));
    Ok(square.max(unit / (1.0 + inv.max_abs())))
}

fn singletons(f: &Factor, rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<f64> {
    let xi = random_element_of_norm(f, 1.0, rng);
    let comp = component_of_boundary_point(&xi)?;
    let p0 = comp.tripotent().projection(0).max_abs();
    let off = comp.tripotent().element().dist(&xi);
    // a rank-one closure is the point itself
    let other = &xi + &random_element_with(f, 0.5, rng);
    let leak = if other.dist(&xi) > tol.component_eq && comp.closure_contains(&other, tol.component_eq) {
        1.0
    } else {
        0.0
    };
    Ok(p0.max(off).max(leak))
}

/// `c + v` with `v ∈ V₀(c)` of norm below `cap`.
fn interior_point(comp: &BoundaryComponent, rng: &mut ChaCha8Rng, cap: f64) -> Element {
    let c = comp.tripotent();
    let w = random_element_with(c.factor(), 1.0, rng);
    let radius = rng.gen_range(0.0..cap);
    if c.peirce_dims()[2] == 0 {
        return c.element().clone();
    }
    let v = c.projection(0).apply(&w);
    let n = v.norm();
    let v = if n > 0.0 { v.scale_real(radius / n) } else { v };
    c.element() + &v
}

fn partition(f: &Factor, rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<f64> {
    let frame = random_frame(f, rng);
    let phases: Vec<Complex64> = (0..frame.len()).map(|_| phase(rng)).collect();
    let frame: Vec<Element> = frame.iter().zip(&phases).map(|(e, p)| e.scale(*p)).collect();
    let m1 = subset(rng, frame.len());
    let m2 = subset(rng, frame.len());
    let c1 = BoundaryComponent::new(Tripotent::new(masked_sum(&frame, &m1))?);
    let c2 = BoundaryComponent::new(Tripotent::new(masked_sum(&frame, &m2))?);
    let same = c1.same(&c2);
    let mut violations = 0usize;
    for _ in 0..8 {
        let x = interior_point(&c1, rng, CAP);
        if !c1.interior_contains(&x, tol.closure) || c2.interior_contains(&x, tol.closure) != same {
            violations += 1;
        }
    }
    if same != (m1 == m2) {
        violations += 1;
    }
    Ok(violations as f64)
}

fn disc_in_component(f: &Factor, rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<f64> {
    let c = BoundaryComponent::new(random_tripotent(f, rng)?);
    let v = interior_point(&c, rng, 1.0);
    let v = &v - c.tripotent().element();
    let mut r = 0.0f64;
    for _ in 0..8 {
        let lambda = coefficient(rng, 0.95);
        let h = c.tripotent().element() + &v.scale(lambda);
        let comp = component_of_boundary_point(&h)?;
        r = r.max(comp.tripotent().element().dist(c.tripotent().element()));
        if !c.closure_contains(&h, tol.closure) {
            r = f64::INFINITY;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors() -> Vec<Factor> {
        vec![
            Factor::polydisc(3).unwrap(),
            Factor::hilbert(3).unwrap(),
            Factor::rectangular(2, 3).unwrap(),
            Factor::spin(4).unwrap(),
            Factor::direct_sum(vec![Factor::disc(), Factor::rectangular(2, 2).unwrap()]).unwrap(),
        ]
    }

    #[test]
    fn all_suites_pass() {
        for f in factors() {
            let r = verify_factor(&f, 12, 7, &Tolerances::default(), Execution::default());
            for c in &r.checks {
                assert!(c.passed, "{f}: {c:?}");
            }
            assert!(r.passed);
        }
    }

    #[test]
    fn applicability() {
        let names = |f: &Factor| -> Vec<String> {
            verify_factor(f, 1, 1, &Tolerances::default(), Execution::Sequential)
                .checks
                .into_iter()
                .map(|c| c.name)
                .collect()
        };
        let disc = names(&Factor::disc());
        assert!(disc.contains(&"hh".to_string()));
        assert!(disc.contains(&"minimal_dichotomy".to_string()));
        assert!(!disc.contains(&"orthogonal_sum".to_string()));
        let rect = names(&Factor::rectangular(2, 2).unwrap());
        assert!(!rect.contains(&"hh".to_string()));
        assert!(rect.contains(&"transvection_factorization".to_string()));
    }

    #[test]
    fn deterministic_and_mode_independent() {
        let f = Factor::spin(3).unwrap();
        let a = verify_factor(&f, 6, 3, &Tolerances::default(), Execution::Sequential);
        let b = verify_factor(&f, 6, 3, &Tolerances::default(), Execution::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn tightened_tolerance_fails() {
        let tol = Tolerances {
            identity_rel: 1e-300,
            ..Tolerances::default()
        };
        let r = verify_factor(&Factor::rectangular(2, 2).unwrap(), 4, 1, &tol, Execution::Sequential);
        assert!(!r.passed);
    }
}
