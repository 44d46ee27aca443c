use super::element::Element;
use super::factor::Factor;
use super::linop::{complexify, realify, RealLinOp};
use super::peirce::bergman_power;
use super::triple::box_op;
use crate::error::{Error, Result};

/// Transvection `g_a(x) = a + B(a,a)^{1/2}(I + x□a)⁻¹(x)` with `B(a,a)^{1/2}` cached.
#[derive(Debug, Clone)]
pub struct Transvection {
    a: Element,
    root: RealLinOp,
}

impl Transvection {
    pub fn new(a: &Element) -> Result<Transvection> {
        a.require_in_ball()?;
        Ok(Transvection {
            a: a.clone(),
            root: bergman_power(a, 0.5)?,
        })
    }

    pub fn a(&self) -> &Element {
        &self.a
    }

    pub fn factor(&self) -> &Factor {
        self.a.factor()
    }

    /// `g_a(x)`; needs `‖x‖ < 1`.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.a.check_same_factor(x)?;
        let nx = x.require_in_ball()?;
        self.apply_unchecked(x, nx)
    }

    pub(crate) fn apply_unchecked(&self, x: &Element, nx: f64) -> Result<Element> {
        if self.a.is_zero() {
            return Ok(x.clone());
        }
        let na = self.a.norm();
        if nx * na >= 1.0 {
            return Err(Error::OutsideBall { norm: nx * na });
        }
        let mut m = box_op(x, &self.a)?.matrix().clone();
        for k in 0..m.nrows() {
            m[(k, k)] += 1.0;
        }
        let y = m
            .lu()
            .solve(&realify(x.coords()))
            .ok_or_else(|| Error::Singular("I + x□a".into()))?;
        let y = Element::from_parts_unchecked(x.factor(), complexify(&y));
        Ok(&self.a + &self.root.apply(&y))
    }

    /// `g_{-a}`.
    pub fn inverse(&self) -> Transvection {
        Transvection {
            a: -&self.a,
            root: self.root.clone(),
        }
    }
}

/// `g_a(x)`.
pub fn transvection_apply(a: &Element, x: &Element) -> Result<Element> {
    a.check_same_factor(x)?;
    x.require_in_ball()?;
    Transvection::new(a)?.apply(x)
}

/// `‖g_{-z}(w)‖`, the pseudo-hyperbolic distance.
pub fn pseudo_distance(z: &Element, w: &Element) -> Result<f64> {
    Ok(transvection_apply(&-z, w)?.norm())
}

/// Kobayashi distance `κ(z,w) = atanh‖g_{-z}(w)‖`.
///
/// Returns `∞` when rounding pushes `‖g_{-z}(w)‖` to 1.
pub fn kobayashi(z: &Element, w: &Element) -> Result<f64> {
    let r = pseudo_distance(z, w)?;
    Ok(if r >= 1.0 { f64::INFINITY } else { r.atanh() })
}
