use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{op_norm, random_element_with, rng_for, spectral_decomposition, triple_product, Element, Factor, Kind, RealLinOp, Transvection};

/// Largest spectral value kept by [`SelfMap::apply_clamped`].
pub const CLAMP: f64 = 1.0 - f64::EPSILON;

const UNITARY_TOL: f64 = 1e-10;
const AUTOMORPHISM_TOL: f64 = 1e-9;
const AUTOMORPHISM_SAMPLES: usize = 8;

/// One-dimensional self-map of the disc applied to a `Hilbert(1)` part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscMap {
    /// `ψ_b(z) = (z + b)/(1 + b̄z)`, `|b| < 1`.
    Mobius(Complex64),
    /// `αz + β` with `|α| + |β| ≤ 1` (and `|β| < 1` when `α = 0`).
    Affine { alpha: Complex64, beta: Complex64 },
}

impl DiscMap {
    pub fn identity() -> DiscMap {
        DiscMap::Affine {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DiscMap::Mobius(b) if b.norm() < 1.0 => Ok(()),
            DiscMap::Mobius(b) => Err(Error::InvalidMap(format!("Möbius parameter |b| = {} ≥ 1", b.norm()))),
            DiscMap::Affine { alpha, beta } => {
                let bound = alpha.norm() + beta.norm();
                if bound > 1.0 || (alpha.norm() == 0.0 && beta.norm() >= 1.0) {
                    Err(Error::InvalidMap(format!("affine map with |α| + |β| = {bound} leaves the disc")))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        match *self {
            DiscMap::Mobius(b) => (z + b) / (Complex64::new(1.0, 0.0) + b.conj() * z),
            DiscMap::Affine { alpha, beta } => alpha * z + beta,
        }
    }
}

/// A building block that maps the open ball into itself.
#[derive(Debug, Clone)]
pub enum Primitive {
    Transvection(Transvection),
    /// `x ↦ λx`, `|λ| ≤ 1`.
    Scale(Complex64),
    /// Unitary triple automorphism acting on coordinates.
    Isometry(DMatrix<Complex64>),
    /// Per-coordinate disc maps on a sum of discs.
    Coordwise(Vec<DiscMap>),
    /// `x ↦ Lx + v` with `‖L‖ + ‖v‖ ≤ 1`.
    Affine { matrix: DMatrix<Complex64>, offset: Element },
    /// `Σ wᵢ fᵢ(x)` with nonnegative weights summing to 1.
    Convex(Vec<(f64, SelfMap)>),
}

impl Primitive {
    pub fn transvection(a: &Element) -> Result<Primitive> {
        Ok(Primitive::Transvection(Transvection::new(a)?))
    }

    pub fn scale(lambda: Complex64) -> Result<Primitive> {
        if lambda.norm() > 1.0 {
            return Err(Error::InvalidMap(format!("scale |λ| = {} > 1", lambda.norm())));
        }
        Ok(Primitive::Scale(lambda))
    }

    /// Unitary `u` acting on coordinates; checked to be a triple automorphism.
    pub fn isometry(factor: &Factor, u: DMatrix<Complex64>) -> Result<Primitive> {
        let d = factor.dim();
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::InvalidMap(format!("isometry matrix must be {d}x{d}")));
        }
        let defect = (u.adjoint() * &u - DMatrix::<Complex64>::identity(d, d)).camax();
        if defect > UNITARY_TOL {
            return Err(Error::InvalidMap(format!("isometry matrix is not unitary (defect {defect:.2e})")));
        }
        let apply = |x: &Element| Element::from_parts_unchecked(factor, (&u * nalgebra::DVector::from_column_slice(x.coords())).as_slice().to_vec());
        let mut rng = rng_for(0x150, 0);
        for _ in 0..AUTOMORPHISM_SAMPLES {
            let [x, y, z] = [0; 3].map(|_| random_element_with(factor, 1.0, &mut rng));
            let lhs = apply(&triple_product(&x, &y, &z)?);
            let rhs = triple_product(&apply(&x), &apply(&y), &apply(&z))?;
            let r = lhs.dist(&rhs);
            if r > AUTOMORPHISM_TOL {
                return Err(Error::InvalidMap(format!("isometry does not preserve the triple product (residual {r:.2e})")));
            }
        }
        Ok(Primitive::Isometry(u))
    }

    /// `X ↦ L X R` on a rectangular factor with unitary `L`, `R`.
    pub fn rect_isometry(factor: &Factor, left: &DMatrix<Complex64>, right: &DMatrix<Complex64>) -> Result<Primitive> {
        let Kind::Rectangular { rows, cols } = *factor.kind() else {
            return Err(Error::InvalidMap(format!("unitary pair needs a rectangular factor, got {factor}")));
        };
        if left.shape() != (rows, rows) || right.shape() != (cols, cols) {
            return Err(Error::InvalidMap(format!("unitary pair must be {rows}x{rows} and {cols}x{cols}")));
        }
        // row-major vec(LXR) = (L ⊗ Rᵀ) vec(X)
        let u = left.kronecker(&right.transpose());
        Self::isometry(factor, u)
    }

    /// `yᵢ = phaseᵢ · x_{perm[i]}`.
    pub fn permutation(factor: &Factor, perm: &[usize], phases: &[Complex64]) -> Result<Primitive> {
        let d = factor.dim();
        let mut seen = vec![false; d];
        if perm.len() != d || phases.len() != d || perm.iter().any(|&p| p >= d || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidMap(format!("permutation and phases must describe a bijection of {d} coordinates")));
        }
        let mut u = DMatrix::<Complex64>::zeros(d, d);
        for (i, (&p, &ph)) in perm.iter().zip(phases).enumerate() {
            u[(i, p)] = ph;
        }
        Self::isometry(factor, u)
    }

    pub fn coordwise(factor: &Factor, maps: Vec<DiscMap>) -> Result<Primitive> {
        if !factor.is_polydisc() {
            return Err(Error::InvalidMap(format!("coordinatewise maps need a sum of discs, got {factor}")));
        }
        if maps.len() != factor.dim() {
            return Err(Error::InvalidMap(format!("{} coordinate maps for {factor}", maps.len())));
        }
        for m in &maps {
            m.validate()?;
        }
        Ok(Primitive::Coordwise(maps))
    }

    /// `x ↦ Lx + v`; on a polydisc each row needs `Σⱼ|L_ij| + |vᵢ| ≤ 1`, elsewhere `‖L‖ + ‖v‖ ≤ 1`.
    pub fn affine(matrix: DMatrix<Complex64>, offset: Element) -> Result<Primitive> {
        let factor = offset.factor().clone();
        let d = factor.dim();
        if matrix.shape() != (d, d) {
            return Err(Error::InvalidMap(format!("affine matrix must be {d}x{d}")));
        }
        if factor.is_polydisc() {
            for i in 0..d {
                let row: f64 = matrix.row(i).iter().map(|z| z.norm()).sum();
                let v = offset.coords()[i].norm();
                if row + v > 1.0 || (row == 0.0 && v >= 1.0) {
                    return Err(Error::InvalidMap(format!("affine row {i} has bound {} > 1", row + v)));
                }
            }
        } else {
            let n = op_norm(&RealLinOp::from_complex_matrix(&factor, &matrix));
            let bound = if n.exact { n.value } else { n.upper };
            let v = offset.norm();
            if bound + v > 1.0 || (bound == 0.0 && v >= 1.0) {
                return Err(Error::InvalidMap(format!("affine bound ‖L‖ + ‖v‖ = {} > 1", bound + v)));
            }
        }
        Ok(Primitive::Affine { matrix, offset })
    }

    pub fn convex(terms: Vec<(f64, SelfMap)>) -> Result<Primitive> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidMap("empty convex combination".into()));
        };
        let factor = first.factor().clone();
        let mut total = 0.0;
        for (w, m) in &terms {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::InvalidMap(format!("convex weight {w} is negative")));
            }
            if m.factor() != &factor {
                return Err(Error::FactorMismatch(factor.to_string(), m.factor().to_string()));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMap(format!("convex weights sum to {total}")));
        }
        Ok(Primitive::Convex(terms))
    }

    fn factor_ok(&self, factor: &Factor) -> bool {
        match self {
            Primitive::Transvection(t) => t.factor() == factor,
            Primitive::Scale(_) => true,
            Primitive::Isometry(u) => u.nrows() == factor.dim(),
            Primitive::Coordwise(m) => factor.is_polydisc() && m.len() == factor.dim(),
            Primitive::Affine { offset, .. } => offset.factor() == factor,
            Primitive::Convex(terms) => terms.iter().all(|(_, m)| m.factor() == factor),
        }
    }

    fn apply(&self, x: &Element, clamp: bool, saturated: &mut bool) -> Result<Element> {
        let f = x.factor();
        Ok(match self {
            Primitive::Transvection(t) => t.apply(x)?,
            Primitive::Scale(l) => x.scale(*l),
            Primitive::Isometry(u) => {
                let y = u * nalgebra::DVector::from_column_slice(x.coords());
                Element::from_parts_unchecked(f, y.as_slice().to_vec())
            }
            Primitive::Coordwise(maps) => {
                Element::from_parts_unchecked(f, x.coords().iter().zip(maps).map(|(z, m)| m.apply(*z)).collect())
            }
            Primitive::Affine { matrix, offset } => {
                let y = matrix * nalgebra::DVector::from_column_slice(x.coords());
                &Element::from_parts_unchecked(f, y.as_slice().to_vec()) + offset
            }
            Primitive::Convex(terms) => {
                let mut y = Element::zero(f);
                for (w, m) in terms {
                    y = &y + &m.run(x, clamp, saturated)?.scale_real(*w);
                }
                y
            }
        })
    }
}

/// Composition of primitives, applied in pipeline order.
#[derive(Debug, Clone)]
pub struct SelfMap {
    factor: Factor,
    pipeline: Vec<Primitive>,
}

impl SelfMap {
    pub fn identity(factor: &Factor) -> SelfMap {
        SelfMap {
            factor: factor.clone(),
            pipeline: Vec::new(),
        }
    }

    pub fn new(factor: &Factor, pipeline: Vec<Primitive>) -> Result<SelfMap> {
        if let Some(k) = pipeline.iter().position(|p| !p.factor_ok(factor)) {
            return Err(Error::InvalidMap(format!("primitive {k} does not act on {factor}")));
        }
        Ok(SelfMap {
            factor: factor.clone(),
            pipeline,
        })
    }

    /// Appends a primitive applied after the current pipeline.
    pub fn then(mut self, p: Primitive) -> Result<SelfMap> {
        if !p.factor_ok(&self.factor) {
            return Err(Error::InvalidMap(format!("primitive does not act on {}", self.factor)));
        }
        self.pipeline.push(p);
        Ok(self)
    }

    pub fn factor(&self) -> &Factor {
        &self.factor
    }

    pub fn pipeline(&self) -> &[Primitive] {
        &self.pipeline
    }

    /// `f(x)`; fails if `x` or a rounded intermediate leaves the open ball.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        let mut saturated = false;
        self.run(x, false, &mut saturated)
    }

    /// `f(x)` with spectral values clamped to [`CLAMP`] whenever rounding
    /// reaches the sphere; the flag reports whether clamping happened.
    pub fn apply_clamped(&self, x: &Element) -> Result<(Element, bool)> {
        self.check(x)?;
        let mut saturated = false;
        let y = self.run(x, true, &mut saturated)?;
        Ok((y, saturated))
    }

    fn check(&self, x: &Element) -> Result<()> {
        if x.factor() != &self.factor {
            return Err(Error::FactorMismatch(self.factor.to_string(), x.factor().to_string()));
        }
        Ok(())
    }

    fn run(&self, x: &Element, clamp: bool, saturated: &mut bool) -> Result<Element> {
        let mut y = if clamp { clamp_to_ball(x, saturated) } else { x.clone() };
        y.require_in_ball()?;
        for p in &self.pipeline {
            y = p.apply(&y, clamp, saturated)?;
            if clamp {
                y = clamp_to_ball(&y, saturated);
            }
            y.require_in_ball()?;
        }
        Ok(y)
    }
}

/// Pulls spectral values above [`CLAMP`] back to it.
pub fn clamp_to_ball(x: &Element, saturated: &mut bool) -> Element {
    let n = x.norm();
    if n <= CLAMP {
        return x.clone();
    }
    *saturated = true;
    let mut y = Element::zero(x.factor());
    for (alpha, e) in spectral_decomposition(x).pairs() {
        y = &y + &e.scale_real(alpha.min(CLAMP));
    }
    let m = y.norm();
    if m > CLAMP {
        y.scale_real(CLAMP / m)
    } else {
        y
    }
}
