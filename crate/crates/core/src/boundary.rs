//! Tripotent taxonomy and holomorphic boundary components
//! `Γ_c = c + (V₀(c) ∩ D)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{spectral_decomposition, Element, RealLinOp, Tripotent, TripotentFlags};
use crate::tolerance::{COMPONENT_EQ, UNIT_THRESHOLD};

/// Verifies `e` and fills in its flags and Peirce dimensions.
pub fn classify_tripotent(e: &Element) -> Result<Tripotent> {
    Tripotent::new(e.clone())
}

/// Maximal or structural: the extended Shilov boundary.
pub fn in_extended_shilov(e: &Tripotent) -> bool {
    let f = e.flags();
    f.maximal || f.structural
}

/// Sum of the spectral tripotents of `x` with value at least `1 − unit_threshold`.
pub fn tripotent_part(x: &Element, unit_threshold: f64) -> Element {
    let mut c = Element::zero(x.factor());
    for (alpha, e) in spectral_decomposition(x).pairs() {
        if *alpha >= 1.0 - unit_threshold {
            c = &c + e;
        }
    }
    c
}

/// Closure `c + (V₀(c) ∩ D̄)` of a holomorphic boundary component.
#[derive(Debug, Clone)]
pub struct BoundaryComponent {
    c: Tripotent,
    p0: RealLinOp,
    p1: RealLinOp,
    p2: RealLinOp,
}

/// Serialized form of a [`BoundaryComponent`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub tripotent: Vec<[f64; 2]>,
    pub peirce_dims: [usize; 3],
    pub flags: TripotentFlags,
}

impl BoundaryComponent {
    pub fn new(c: Tripotent) -> BoundaryComponent {
        let [p0, p1, p2] = c.projections();
        BoundaryComponent { c, p0, p1, p2 }
    }

    pub fn tripotent(&self) -> &Tripotent {
        &self.c
    }

    /// `c + P₀(c)x`.
    pub fn canonical(&self, x: &Element) -> Element {
        self.c.element() + &self.p0.apply(x)
    }

    /// `(‖P₂(c)x − c‖, ‖P₁(c)x‖, ‖P₀(c)x‖)`.
    pub fn residuals(&self, x: &Element) -> (f64, f64, f64) {
        (
            (&self.p2.apply(x) - self.c.element()).norm(),
            self.p1.apply(x).norm(),
            self.p0.apply(x).norm(),
        )
    }

    /// Membership in `c + (V₀(c) ∩ D̄)` up to `tol`.
    pub fn closure_contains(&self, x: &Element, tol: f64) -> bool {
        let (r2, r1, r0) = self.residuals(x);
        r2 <= tol && r1 <= tol && r0 <= 1.0 + tol
    }

    /// Membership in `c + (V₀(c) ∩ D)` up to `tol`; `‖P₀(c)x‖` must stay
    /// `tol` away from 1.
    pub fn interior_contains(&self, x: &Element, tol: f64) -> bool {
        let (r2, r1, r0) = self.residuals(x);
        r2 <= tol && r1 <= tol && r0 < 1.0 - tol
    }

    /// Equal defining tripotents within `tol`.
    pub fn same_as(&self, other: &BoundaryComponent, tol: f64) -> bool {
        self.c.factor() == other.c.factor() && self.c.element().dist(other.c.element()) <= tol
    }

    /// `same_as` with the default tolerance.
    pub fn same(&self, other: &BoundaryComponent) -> bool {
        self.same_as(other, COMPONENT_EQ)
    }

    pub fn record(&self) -> ComponentRecord {
        ComponentRecord {
            tripotent: self.c.element().to_pairs(),
            peirce_dims: self.c.peirce_dims(),
            flags: self.c.flags(),
        }
    }
}

impl Serialize for BoundaryComponent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(serializer)
    }
}

/// Component whose closure contains the boundary point `ξ`.
pub fn component_of_boundary_point(xi: &Element) -> Result<BoundaryComponent> {
    component_of_boundary_point_with(xi, UNIT_THRESHOLD)
}

pub fn component_of_boundary_point_with(xi: &Element, unit_threshold: f64) -> Result<BoundaryComponent> {
    let n = xi.norm();
    if n < 1.0 - unit_threshold {
        return Err(Error::InvalidArgument(format!("point of norm {n} is inside the ball")));
    }
    let c = tripotent_part(xi, unit_threshold);
    Ok(BoundaryComponent::new(classify_tripotent(&c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Factor;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polydisc_classification() {
        let p = Factor::polydisc(2).unwrap();
        let e = classify_tripotent(&Element::from_real(&p, &[1.0, 0.0]).unwrap()).unwrap();
        let f = e.flags();
        assert!(f.minimal && f.structural && !f.maximal);
        let u = classify_tripotent(&Element::from_real(&p, &[1.0, 1.0]).unwrap()).unwrap();
        assert!(u.flags().unitary);
        assert!(in_extended_shilov(&e) && in_extended_shilov(&u));
    }

    #[test]
    fn spin_minimal_dims() {
        let s = Factor::spin(5).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let e = Element::new(&s, vec![c(r, 0.0), c(0.0, r), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let t = classify_tripotent(&e).unwrap();
        assert_eq!(t.peirce_dims(), [1, 3, 1]);
        assert!(!in_extended_shilov(&t));
    }

    #[test]
    fn rectangular_e11_not_extended_shilov() {
        let f = Factor::rectangular(2, 2).unwrap();
        let t = classify_tripotent(&Element::matrix_unit(&f, 0, 0).unwrap()).unwrap();
        assert_eq!(t.peirce_dims(), [1, 2, 1]);
        assert!(!in_extended_shilov(&t));
    }

    #[test]
    fn component_examples() {
        let p = Factor::polydisc(2).unwrap();
        let comp = component_of_boundary_point(&Element::from_real(&p, &[1.0, 0.5]).unwrap()).unwrap();
        assert_eq!(comp.tripotent().element().coords(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(comp.closure_contains(&Element::from_real(&p, &[1.0, 0.99]).unwrap(), 1e-12));
        assert!(!comp.closure_contains(&Element::from_real(&p, &[0.99, 0.99]).unwrap(), 1e-6));
        assert!(comp.closure_contains(comp.tripotent().element(), 0.0));

        let f = Factor::rectangular(2, 2).unwrap();
        let xi = Element::from_real(&f, &[1.0, 0.0, 0.0, 0.3]).unwrap();
        let comp = component_of_boundary_point(&xi).unwrap();
        assert!(comp.tripotent().element().dist(&Element::matrix_unit(&f, 0, 0).unwrap()) < 1e-14);

        let max = Element::from_real(&p, &[1.0, -1.0]).unwrap();
        let comp = component_of_boundary_point(&max).unwrap();
        assert!(comp.tripotent().flags().maximal);
        assert!(!comp.closure_contains(&Element::from_real(&p, &[1.0, -0.9]).unwrap(), 1e-6));

        assert!(component_of_boundary_point(&Element::from_real(&p, &[0.5, 0.5]).unwrap()).is_err());
    }

    #[test]
    fn spin_component_is_a_disc() {
        let s = Factor::spin(4).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let e = Element::new(&s, vec![c(r, 0.0), c(0.0, r), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let comp = BoundaryComponent::new(classify_tripotent(&e).unwrap());
        let x = &e + &e.star().unwrap().scale_real(0.7);
        assert!(comp.closure_contains(&x, 1e-12));
        assert!(comp.interior_contains(&x, 1e-12));
        assert!((&comp.canonical(&x) - &x).norm() < 1e-14);
    }

    #[test]
    fn record_shape() {
        let p = Factor::polydisc(2).unwrap();
        let comp = component_of_boundary_point(&Element::from_real(&p, &[1.0, 0.2]).unwrap()).unwrap();
        let v = serde_json::to_value(&comp).unwrap();
        assert_eq!(v["peirce_dims"], serde_json::json!([1, 0, 1]));
        assert_eq!(v["tripotent"], serde_json::json!([[1.0, 0.0], [0.0, 0.0]]));
        assert_eq!(v["flags"]["structural"], serde_json::json!(true));
    }
}
