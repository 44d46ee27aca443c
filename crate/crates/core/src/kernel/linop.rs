use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::element::Element;
use super::factor::Factor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Linearity {
    Complex,
    Conjugate,
}

impl Linearity {
    fn compose(self, other: Linearity) -> Linearity {
        if self == other {
            Linearity::Complex
        } else {
            Linearity::Conjugate
        }
    }
}

/// Realified coordinates `[Re x; Im x]`.
pub fn realify(x: &[Complex64]) -> DVector<f64> {
    let n = x.len();
    DVector::from_fn(2 * n, |k, _| if k < n { x[k].re } else { x[k - n].im })
}

pub fn complexify(v: &DVector<f64>) -> Vec<Complex64> {
    let n = v.len() / 2;
    (0..n).map(|k| Complex64::new(v[k], v[k + n])).collect()
}

/// Real-linear operator on the realification of a factor, flagged
/// complex-linear or conjugate-linear.
#[derive(Debug, Clone)]
pub struct RealLinOp {
    factor: Factor,
    matrix: DMatrix<f64>,
    linearity: Linearity,
}

impl RealLinOp {
    /// Builds the operator from its action on `e_k` and `i·e_k`.
    pub fn from_fn(factor: &Factor, linearity: Linearity, f: impl Fn(&Element) -> Element) -> RealLinOp {
        let n = factor.dim();
        let mut matrix = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            for (col, unit) in [(k, Complex64::new(1.0, 0.0)), (k + n, Complex64::new(0.0, 1.0))] {
                let mut coords = vec![Complex64::new(0.0, 0.0); n];
                coords[k] = unit;
                let y = f(&Element::from_parts_unchecked(factor, coords));
                matrix.set_column(col, &realify(y.coords()));
            }
        }
        RealLinOp {
            factor: factor.clone(),
            matrix,
            linearity,
        }
    }

    pub fn from_matrix(factor: &Factor, matrix: DMatrix<f64>, linearity: Linearity) -> RealLinOp {
        assert_eq!(matrix.nrows(), 2 * factor.dim());
        assert_eq!(matrix.ncols(), 2 * factor.dim());
        RealLinOp {
            factor: factor.clone(),
            matrix,
            linearity,
        }
    }

    /// Complex-linear operator from an `n × n` complex matrix.
    pub fn from_complex_matrix(factor: &Factor, m: &DMatrix<Complex64>) -> RealLinOp {
        let n = factor.dim();
        assert_eq!((m.nrows(), m.ncols()), (n, n));
        let mut matrix = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                matrix[(i, j)] = z.re;
                matrix[(i, j + n)] = -z.im;
                matrix[(i + n, j)] = z.im;
                matrix[(i + n, j + n)] = z.re;
            }
        }
        RealLinOp {
            factor: factor.clone(),
            matrix,
            linearity: Linearity::Complex,
        }
    }

    pub fn identity(factor: &Factor) -> RealLinOp {
        let n = 2 * factor.dim();
        RealLinOp {
            factor: factor.clone(),
            matrix: DMatrix::identity(n, n),
            linearity: Linearity::Complex,
        }
    }

    pub fn zero(factor: &Factor) -> RealLinOp {
        let n = 2 * factor.dim();
        RealLinOp {
            factor: factor.clone(),
            matrix: DMatrix::zeros(n, n),
            linearity: Linearity::Complex,
        }
    }

    pub fn factor(&self) -> &Factor {
        &self.factor
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn linearity(&self) -> Linearity {
        self.linearity
    }

    pub fn apply(&self, x: &Element) -> Element {
        assert!(self.factor == *x.factor(), "operator applied across factors");
        let y = &self.matrix * realify(x.coords());
        Element::from_parts_unchecked(&self.factor, complexify(&y))
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &RealLinOp) -> RealLinOp {
        RealLinOp {
            factor: self.factor.clone(),
            matrix: &self.matrix * &rhs.matrix,
            linearity: self.linearity.compose(rhs.linearity),
        }
    }

    fn same_linearity(&self, rhs: &RealLinOp) -> Linearity {
        assert_eq!(self.linearity, rhs.linearity, "adding operators of different linearity");
        self.linearity
    }

    pub fn add(&self, rhs: &RealLinOp) -> RealLinOp {
        RealLinOp {
            factor: self.factor.clone(),
            matrix: &self.matrix + &rhs.matrix,
            linearity: self.same_linearity(rhs),
        }
    }

    pub fn sub(&self, rhs: &RealLinOp) -> RealLinOp {
        RealLinOp {
            factor: self.factor.clone(),
            matrix: &self.matrix - &rhs.matrix,
            linearity: self.same_linearity(rhs),
        }
    }

    pub fn scale(&self, s: f64) -> RealLinOp {
        RealLinOp {
            factor: self.factor.clone(),
            matrix: &self.matrix * s,
            linearity: self.linearity,
        }
    }

    /// `self += s·rhs`.
    pub fn axpy(&mut self, s: f64, rhs: &RealLinOp) {
        let _ = self.same_linearity(rhs);
        self.matrix += &rhs.matrix * s;
    }

    /// Adjoint with respect to `Re⟨·,·⟩` on coordinates.
    pub fn transpose(&self) -> RealLinOp {
        RealLinOp {
            factor: self.factor.clone(),
            matrix: self.matrix.transpose(),
            linearity: self.linearity,
        }
    }

    /// Largest absolute entry of the realified matrix.
    pub fn max_abs(&self) -> f64 {
        self.matrix.amax()
    }

    /// Largest absolute entry of `self − rhs`.
    pub fn max_abs_diff(&self, rhs: &RealLinOp) -> f64 {
        (&self.matrix - &rhs.matrix).amax()
    }

    /// Residual of the commutation (or anticommutation) with multiplication by `i`.
    pub fn linearity_defect(&self) -> f64 {
        let n = self.factor.dim();
        let mut j = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for k in 0..n {
            j[(k + n, k)] = 1.0;
            j[(k, k + n)] = -1.0;
        }
        let mj = &self.matrix * &j;
        let jm = &j * &self.matrix;
        match self.linearity {
            Linearity::Complex => (mj - jm).amax(),
            Linearity::Conjugate => (mj + jm).amax(),
        }
    }

    /// Complex matrix `M` with `T x = M x` (complex-linear) or `T x = M x̄` (conjugate-linear).
    pub fn complex_matrix(&self) -> DMatrix<Complex64> {
        let n = self.factor.dim();
        DMatrix::from_fn(n, n, |i, k| Complex64::new(self.matrix[(i, k)], self.matrix[(i + n, k)]))
    }

    /// Numerical complex rank: realified singular values above `threshold`, halved.
    pub fn complex_rank(&self, threshold: f64) -> usize {
        let sv = self.matrix.clone().singular_values();
        sv.iter().filter(|&&s| s > threshold).count() / 2
    }

    /// Largest singular value of the realified matrix (Euclidean operator norm).
    pub fn euclidean_norm(&self) -> f64 {
        self.matrix.clone().singular_values().max()
    }
}
