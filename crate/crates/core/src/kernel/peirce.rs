use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::element::Element;
use super::factor::Factor;
use super::linop::{Linearity, RealLinOp};
use super::spectral::spectral_decomposition;
use super::triple::{box_op, quadratic, triple_unchecked};
use crate::error::{Error, Result};
use crate::tolerance::{BALL_MARGIN, PEIRCE_RANK, TRIPOTENT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripotentFlags {
    pub minimal: bool,
    pub maximal: bool,
    pub structural: bool,
    pub unitary: bool,
}

/// A verified tripotent with its Peirce data.
#[derive(Debug, Clone)]
pub struct Tripotent {
    element: Element,
    flags: TripotentFlags,
    peirce_dims: [usize; 3],
}

/// `‖{e,e,e} − e‖`.
pub fn tripotent_residual(e: &Element) -> f64 {
    (&triple_unchecked(e, e, e) - e).norm()
}

fn check_tripotent(e: &Element, tol: f64) -> Result<()> {
    let residual = tripotent_residual(e);
    let norm = e.norm();
    if residual <= tol && (norm - 1.0).abs() <= tol {
        Ok(())
    } else {
        Err(Error::NotTripotent { residual, norm })
    }
}

/// `P₂ = Q_e²`, `P₁ = 2(e□e − Q_e²)`, `P₀ = B(e,e)`, unchecked.
fn projections(e: &Element) -> [RealLinOp; 3] {
    let q = quadratic(e);
    let p2 = q.compose(&q);
    let ee = RealLinOp::from_fn(e.factor(), Linearity::Complex, |x| triple_unchecked(e, e, x));
    let p1 = ee.sub(&p2).scale(2.0);
    let id = RealLinOp::identity(e.factor());
    // B(e,e) = I − 2 e□e + Q_e² for a tripotent
    let p0 = id.sub(&ee.scale(2.0)).add(&p2);
    [p0, p1, p2]
}

impl Tripotent {
    pub fn new(e: Element) -> Result<Tripotent> {
        Self::with_tol(e, TRIPOTENT, PEIRCE_RANK)
    }

    pub fn with_tol(e: Element, tol: f64, rank_threshold: f64) -> Result<Tripotent> {
        check_tripotent(&e, tol)?;
        let [p0, p1, p2] = projections(&e);
        let d2 = p2.complex_rank(rank_threshold);
        let d1 = p1.complex_rank(rank_threshold);
        let d0 = p0.complex_rank(rank_threshold);
        let maximal = d0 == 0;
        let structural = d1 == 0;
        let flags = TripotentFlags {
            minimal: d2 == 1,
            maximal,
            structural,
            unitary: maximal && structural,
        };
        Ok(Tripotent {
            element: e,
            flags,
            peirce_dims: [d2, d1, d0],
        })
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn flags(&self) -> TripotentFlags {
        self.flags
    }

    /// `(dim V₂, dim V₁, dim V₀)`.
    pub fn peirce_dims(&self) -> [usize; 3] {
        self.peirce_dims
    }

    pub fn factor(&self) -> &Factor {
        self.element.factor()
    }

    /// Peirce projection `P_k(e)`.
    pub fn projection(&self, k: usize) -> RealLinOp {
        let [p0, p1, p2] = projections(&self.element);
        match k {
            0 => p0,
            1 => p1,
            2 => p2,
            _ => panic!("Peirce index {k} not in 0..=2"),
        }
    }

    /// `[P₀, P₁, P₂]`.
    pub fn projections(&self) -> [RealLinOp; 3] {
        projections(&self.element)
    }
}

/// Peirce projection `P_k(e)` for `k ∈ {0,1,2}`.
pub fn peirce_projection(e: &Tripotent, k: usize) -> Result<RealLinOp> {
    if k > 2 {
        return Err(Error::InvalidArgument(format!("Peirce index {k} not in 0..=2")));
    }
    Ok(e.projection(k))
}

/// Joint Peirce projections `P_ij`, `0 ≤ i ≤ j ≤ n`, of an orthogonal frame.
#[derive(Debug, Clone)]
pub struct JointPeirce {
    factor: Factor,
    n: usize,
    ops: Vec<RealLinOp>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // rows 0..i contribute (n+1) + n + … + (n+2−i) entries
    i * (n + 1) - i * (i.saturating_sub(1)) / 2 + (j - i)
}

impl JointPeirce {
    /// Builds the projections; each frame element must be a tripotent and the
    /// frame pairwise orthogonal.
    pub fn new(factor: &Factor, frame: &[Element]) -> Result<JointPeirce> {
        Self::with_tol(factor, frame, TRIPOTENT)
    }

    pub fn with_tol(factor: &Factor, frame: &[Element], tol: f64) -> Result<JointPeirce> {
        for e in frame {
            if e.factor() != factor {
                return Err(Error::FactorMismatch(factor.to_string(), e.factor().to_string()));
            }
            check_tripotent(e, tol)?;
        }
        for i in 0..frame.len() {
            for j in i + 1..frame.len() {
                let residual = triple_unchecked(&frame[i], &frame[i], &frame[j]).norm();
                if residual > tol {
                    return Err(Error::NonOrthogonalFrame { i: i + 1, j: j + 1, residual });
                }
            }
        }
        let n = frame.len();
        let dim = 2 * factor.dim();
        let id = DMatrix::<f64>::identity(dim, dim);
        // S_k^{(m)} for m = 0, 1, 2 by Lagrange interpolation of D_k = 2 e_k□e_k
        let spectral: Vec<[DMatrix<f64>; 3]> = frame
            .iter()
            .map(|e| {
                let d = box_op(e, e).expect("same factor").matrix() * 2.0;
                let d1 = &d - &id;
                let d2 = &d - &id * 2.0;
                let s0 = &d1 * &d2 * 0.5;
                let s1 = &d * &d2 * -1.0;
                let s2 = &d * &d1 * 0.5;
                [s0, s1, s2]
            })
            .collect();
        let mut ops = Vec::with_capacity((n + 1) * (n + 2) / 2);
        for i in 0..=n {
            for j in i..=n {
                let mut m = id.clone();
                for (k, s) in spectral.iter().enumerate() {
                    let mult = usize::from(i == k + 1) + usize::from(j == k + 1);
                    m = &m * &s[mult];
                }
                ops.push(RealLinOp::from_matrix(factor, m, Linearity::Complex));
            }
        }
        Ok(JointPeirce {
            factor: factor.clone(),
            n,
            ops,
        })
    }

    /// Number of frame elements.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factor(&self) -> &Factor {
        &self.factor
    }

    /// `P_ij`; indices are ordered so `get(j, i) == get(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &RealLinOp {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        assert!(j <= self.n, "joint Peirce index out of range");
        &self.ops[pair_index(self.n, i, j)]
    }

    /// All `(i, j, P_ij)` with `i ≤ j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &RealLinOp)> {
        let n = self.n;
        (0..=n).flat_map(move |i| (i..=n).map(move |j| (i, j))).map(|(i, j)| (i, j, self.get(i, j)))
    }

    /// `Σ_{0≤i≤j≤n} c_i c_j P_ij` with `c_0 = 1`.
    pub fn weighted_sum(&self, c: &[f64]) -> RealLinOp {
        assert_eq!(c.len(), self.n);
        let coef = |k: usize| if k == 0 { 1.0 } else { c[k - 1] };
        let mut acc = RealLinOp::zero(&self.factor);
        for (i, j, p) in self.iter() {
            acc.axpy(coef(i) * coef(j), p);
        }
        acc
    }
}

/// `P_ij` of a frame of tripotents.
pub fn joint_peirce_projection(frame: &[Tripotent], i: usize, j: usize) -> Result<RealLinOp> {
    let factor = frame
        .first()
        .map(|t| t.factor().clone())
        .ok_or_else(|| Error::InvalidArgument("empty frame".into()))?;
    if i > j || j > frame.len() {
        return Err(Error::InvalidArgument(format!("need 0 <= i <= j <= {}", frame.len())));
    }
    let elements: Vec<Element> = frame.iter().map(|t| t.element().clone()).collect();
    Ok(JointPeirce::new(&factor, &elements)?.get(i, j).clone())
}

/// `B(x,x) = Σ (1−|λ_i|²)(1−|λ_j|²) P_ij` for `x = Σ λ_i e_i`, `λ₀ = 0`.
pub fn bergman_via_peirce(frame: &[Element], lambda: &[Complex64]) -> Result<RealLinOp> {
    if frame.len() != lambda.len() {
        return Err(Error::InvalidArgument("frame and coefficients differ in length".into()));
    }
    let factor = frame
        .first()
        .map(|e| e.factor().clone())
        .ok_or_else(|| Error::InvalidArgument("empty frame".into()))?;
    if let Some(l) = lambda.iter().find(|l| l.norm() >= 1.0) {
        return Err(Error::OutsideBall { norm: l.norm() });
    }
    let jp = JointPeirce::new(&factor, frame)?;
    let c: Vec<f64> = lambda.iter().map(|l| 1.0 - l.norm_sqr()).collect();
    Ok(jp.weighted_sum(&c))
}

/// `B(x,x)^p` through the spectral decomposition of `x`.
///
/// Negative exponents need `‖x‖ < 1 − 1e-12`.
pub fn bergman_power(x: &Element, exponent: f64) -> Result<RealLinOp> {
    let sd = spectral_decomposition(x);
    let top = sd.values().first().copied().unwrap_or(0.0);
    if exponent < 0.0 && top >= 1.0 - BALL_MARGIN {
        return Err(Error::Singular(format!(
            "B(x,x)^{exponent} needs ‖x‖ < 1 − {BALL_MARGIN:e}, got {top}"
        )));
    }
    if top > 1.0 && exponent.fract() != 0.0 {
        return Err(Error::OutsideBall { norm: top });
    }
    if sd.is_empty() {
        return Ok(RealLinOp::identity(x.factor()));
    }
    let jp = JointPeirce::with_tol(x.factor(), &sd.frame(), 1e-9)?;
    let c: Vec<f64> = sd.values().iter().map(|a| (1.0 - a * a).max(0.0).powf(exponent)).collect();
    Ok(jp.weighted_sum(&c))
}
