use super::data::HorofunctionData;
use crate::error::{Error, Result};
use crate::kernel::{bergman, op_norm, Element, RealLinOp};

/// Horoball `H(ξ,s) = c_s + B_s^{1/2}(D)`.
#[derive(Debug, Clone)]
pub struct Horoball {
    data: HorofunctionData,
    s: f64,
    centre: Element,
    b: RealLinOp,
    root: RealLinOp,
    inv_root: RealLinOp,
}

impl Horoball {
    pub fn new(data: &HorofunctionData, s: f64) -> Result<Horoball> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!("hororadius {s} must be positive")));
        }
        let p = data.bergman_point(s);
        let sigma = data.sigma();
        // 1 − σⱼ/(σⱼ+s) = s/(σⱼ+s), with λ₀ = 0
        let gap = |k: usize| if k == 0 { 1.0 } else { s / (sigma[k - 1] + s) };
        let power = |e: f64| {
            let c: Vec<f64> = (1..=data.q()).map(|k| gap(k).powf(e)).collect();
            data.joint().weighted_sum(&c)
        };
        Ok(Horoball {
            data: data.clone(),
            s,
            centre: data.centre(s),
            b: bergman(&p, &p)?,
            root: power(0.5),
            inv_root: power(-0.5),
        })
    }

    pub fn data(&self) -> &HorofunctionData {
        &self.data
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `c_s`.
    pub fn centre(&self) -> &Element {
        &self.centre
    }

    /// `B_s`.
    pub fn bergman(&self) -> &RealLinOp {
        &self.b
    }

    /// `B_s^{1/2}`.
    pub fn root(&self) -> &RealLinOp {
        &self.root
    }

    /// `B_s^{-1/2}`.
    pub fn inv_root(&self) -> &RealLinOp {
        &self.inv_root
    }

    /// `‖B_s^{-1/2}(x − c_s)‖`.
    pub fn gauge(&self, x: &Element) -> f64 {
        self.inv_root.apply(&(x - &self.centre)).norm()
    }

    /// Open membership: `‖x‖ < 1` and gauge below 1.
    pub fn contains(&self, x: &Element) -> bool {
        x.norm() < 1.0 && self.gauge(x) < 1.0
    }

    /// Closed membership in `c_s + B_s^{1/2}(D̄)` up to `tol`.
    pub fn closed_contains(&self, x: &Element, tol: f64) -> bool {
        self.gauge(x) <= 1.0 + tol
    }

    /// `c_s + B_s^{1/2}(w)`.
    pub fn point(&self, w: &Element) -> Element {
        &self.centre + &self.root.apply(w)
    }

    /// Radius `s/(1+s)` of the Euclidean ball about `c_s` inside the horoball.
    pub fn inner_radius(&self) -> f64 {
        self.s / (1.0 + self.s)
    }

    /// Radius `‖B_s^{1/2}‖` of a ball about `c_s` containing the horoball.
    pub fn outer_radius(&self) -> f64 {
        let n = op_norm(&self.root);
        if n.exact {
            n.value
        } else {
            n.upper
        }
    }
}

/// `H(ξ,s)`.
pub fn horoball(data: &HorofunctionData, s: f64) -> Result<Horoball> {
    Horoball::new(data, s)
}

pub fn horoball_contains(h: &Horoball, x: &Element) -> bool {
    h.contains(x)
}
