use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::factor::{Factor, Kind};
use super::norm::element_norm;
use crate::error::{Error, Result};

/// A point of a factor's underlying space.
///
/// Rectangular coordinates are row-major.
#[derive(Debug, Clone)]
pub struct Element {
    factor: Factor,
    coords: Vec<Complex64>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.factor == other.factor && self.coords == other.coords
    }
}

impl Element {
    pub fn new(factor: &Factor, coords: Vec<Complex64>) -> Result<Element> {
        if coords.len() != factor.dim() {
            return Err(Error::DimensionMismatch {
                expected: factor.dim(),
                got: coords.len(),
            });
        }
        Ok(Element {
            factor: factor.clone(),
            coords,
        })
    }

    pub fn from_real(factor: &Factor, coords: &[f64]) -> Result<Element> {
        Self::new(factor, coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(factor: &Factor) -> Element {
        Element {
            factor: factor.clone(),
            coords: vec![Complex64::new(0.0, 0.0); factor.dim()],
        }
    }

    /// Coordinate basis vector `k` (for matrices, the unit at row-major index `k`).
    pub fn basis(factor: &Factor, k: usize) -> Element {
        let mut e = Self::zero(factor);
        e.coords[k] = Complex64::new(1.0, 0.0);
        e
    }

    /// Matrix unit `E_ij` of a rectangular factor.
    pub fn matrix_unit(factor: &Factor, i: usize, j: usize) -> Result<Element> {
        match factor.kind() {
            Kind::Rectangular { rows, cols } if i < *rows && j < *cols => Ok(Self::basis(factor, i * cols + j)),
            _ => Err(Error::InvalidArgument(format!("E_{i}{j} not defined on {factor}"))),
        }
    }

    pub(crate) fn from_parts_unchecked(factor: &Factor, coords: Vec<Complex64>) -> Element {
        debug_assert_eq!(coords.len(), factor.dim());
        Element {
            factor: factor.clone(),
            coords,
        }
    }

    pub fn factor(&self) -> &Factor {
        &self.factor
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.coords
    }

    /// JB*-norm.
    pub fn norm(&self) -> f64 {
        element_norm(self)
    }

    /// Euclidean norm of the coordinate vector.
    pub fn coord_norm(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Coordinate inner product `Σ x_i conj(y_i)`.
    pub fn inner(&self, other: &Element) -> Complex64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(x, y)| x * y.conj())
            .sum()
    }

    /// JB*-distance.
    pub fn dist(&self, other: &Element) -> f64 {
        (self - other).norm()
    }

    pub fn scale(&self, s: Complex64) -> Element {
        Element {
            factor: self.factor.clone(),
            coords: self.coords.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Element {
        Element {
            factor: self.factor.clone(),
            coords: self.coords.iter().map(|z| z * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn check_same_factor(&self, other: &Element) -> Result<()> {
        if self.factor == other.factor {
            Ok(())
        } else {
            Err(Error::FactorMismatch(self.factor.to_string(), other.factor.to_string()))
        }
    }

    /// Rectangular elements as a matrix.
    pub fn as_matrix(&self) -> Option<DMatrix<Complex64>> {
        match self.factor.kind() {
            Kind::Rectangular { rows, cols } => Some(DMatrix::from_row_slice(*rows, *cols, &self.coords)),
            _ => None,
        }
    }

    pub fn from_matrix(factor: &Factor, m: &DMatrix<Complex64>) -> Result<Element> {
        match factor.kind() {
            Kind::Rectangular { rows, cols } if m.nrows() == *rows && m.ncols() == *cols => {
                let mut coords = Vec::with_capacity(rows * cols);
                for i in 0..*rows {
                    for j in 0..*cols {
                        coords.push(m[(i, j)]);
                    }
                }
                Ok(Element::from_parts_unchecked(factor, coords))
            }
            _ => Err(Error::InvalidArgument(format!(
                "{}x{} matrix does not fit {factor}",
                m.nrows(),
                m.ncols()
            ))),
        }
    }

    /// Spin conjugate `x*`; `None` outside spin factors.
    pub fn star(&self) -> Option<Element> {
        match self.factor.kind() {
            Kind::Spin { conjugation, .. } => Some(Element {
                factor: self.factor.clone(),
                coords: Factor::spin_star(conjugation, &self.coords),
            }),
            _ => None,
        }
    }

    /// Coordinates as `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coords.iter().map(|z| [z.re, z.im]).collect()
    }

    pub fn from_pairs(factor: &Factor, pairs: &[[f64; 2]]) -> Result<Element> {
        Self::new(factor, pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }

    /// Fails with [`Error::OutsideBall`] unless `‖self‖ < 1`.
    pub fn require_in_ball(&self) -> Result<f64> {
        let n = self.norm();
        if n < 1.0 {
            Ok(n)
        } else {
            Err(Error::OutsideBall { norm: n })
        }
    }

    fn zip_with(&self, other: &Element, f: impl Fn(Complex64, Complex64) -> Complex64) -> Element {
        assert!(
            self.factor == other.factor,
            "element arithmetic across factors {} and {}",
            self.factor,
            other.factor
        );
        Element {
            factor: self.factor.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale_real(-1.0)
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale_real(-1.0)
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        rhs.scale_real(self)
    }
}

impl Mul<&Element> for Complex64 {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}
