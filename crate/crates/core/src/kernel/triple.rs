use nalgebra::DMatrix;
use num_complex::Complex64;

use super::element::Element;
use super::factor::{Factor, Kind};
use super::linop::{Linearity, RealLinOp};
use crate::error::Result;

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

fn triple_part(part: &Factor, a: &[Complex64], b: &[Complex64], c: &[Complex64], out: &mut [Complex64]) {
    let half = 0.5;
    match part.kind() {
        Kind::Rectangular { rows, cols } => {
            let am = DMatrix::from_row_slice(*rows, *cols, a);
            let bs = DMatrix::from_row_slice(*rows, *cols, b).adjoint();
            let cm = DMatrix::from_row_slice(*rows, *cols, c);
            let m = (&am * &bs * &cm + &cm * &bs * &am) * Complex64::new(half, 0.0);
            for i in 0..*rows {
                for j in 0..*cols {
                    out[i * cols + j] = m[(i, j)];
                }
            }
        }
        Kind::Hilbert { .. } => {
            let ab = inner(a, b);
            let cb = inner(c, b);
            for k in 0..a.len() {
                out[k] = (ab * c[k] + cb * a[k]) * half;
            }
        }
        Kind::Spin { conjugation, .. } => {
            let xy = inner(a, b);
            let zy = inner(c, b);
            let zstar = Factor::spin_star(conjugation, c);
            let x_zs = inner(a, &zstar);
            let ystar = Factor::spin_star(conjugation, b);
            for k in 0..a.len() {
                out[k] = (xy * c[k] + zy * a[k] - x_zs * ystar[k]) * half;
            }
        }
        Kind::DirectSum { .. } => unreachable!("parts are simple"),
    }
}

/// `{a,b,c}` without factor checks.
pub(crate) fn triple_unchecked(a: &Element, b: &Element, c: &Element) -> Element {
    let f = a.factor();
    let mut out = vec![Complex64::new(0.0, 0.0); f.dim()];
    for (off, part) in f.parts() {
        let r = off..off + part.dim();
        triple_part(
            part,
            &a.coords()[r.clone()],
            &b.coords()[r.clone()],
            &c.coords()[r.clone()],
            &mut out[r],
        );
    }
    Element::from_parts_unchecked(f, out)
}

/// Jordan triple product `{a,b,c}`.
pub fn triple_product(a: &Element, b: &Element, c: &Element) -> Result<Element> {
    a.check_same_factor(b)?;
    a.check_same_factor(c)?;
    Ok(triple_unchecked(a, b, c))
}

/// Box operator `a□b: x ↦ {a,b,x}`.
pub fn box_op(a: &Element, b: &Element) -> Result<RealLinOp> {
    a.check_same_factor(b)?;
    Ok(RealLinOp::from_fn(a.factor(), Linearity::Complex, |x| triple_unchecked(a, b, x)))
}

/// Quadratic operator `Q_a: x ↦ {a,x,a}` (conjugate-linear).
pub fn quadratic(a: &Element) -> RealLinOp {
    RealLinOp::from_fn(a.factor(), Linearity::Conjugate, |x| triple_unchecked(a, x, a))
}

/// Bergman operator `B(b,c)x = x − 2{b,c,x} + {b,{c,x,c},b}`.
pub fn bergman(b: &Element, c: &Element) -> Result<RealLinOp> {
    b.check_same_factor(c)?;
    Ok(RealLinOp::from_fn(b.factor(), Linearity::Complex, |x| {
        let bcx = triple_unchecked(b, c, x);
        let qcx = triple_unchecked(c, x, c);
        let qq = triple_unchecked(b, &qcx, b);
        let mut out = x.clone().into_coords();
        for ((o, u), v) in out.iter_mut().zip(bcx.coords()).zip(qq.coords()) {
            *o += v - u * 2.0;
        }
        Element::from_parts_unchecked(x.factor(), out)
    }))
}
