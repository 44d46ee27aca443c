use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shape of a finite-dimensional JB*-triple.
#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    /// `rows × cols` complex matrices, `{a,b,c} = ½(ab*c + cb*a)`.
    Rectangular { rows: usize, cols: usize },
    /// Spin factor on `C^dim` with conjugation `x* = J x̄` (`J = I` when `None`).
    Spin {
        dim: usize,
        conjugation: Option<DMatrix<Complex64>>,
    },
    /// Hilbert space `C^dim`, `{a,b,c} = ½(⟨a,b⟩c + ⟨c,b⟩a)`.
    Hilbert { dim: usize },
    /// ℓ∞-sum of simple factors.
    DirectSum { parts: Vec<Factor> },
}

#[derive(Debug)]
struct Inner {
    kind: Kind,
    dim: usize,
    rank: usize,
    offsets: Vec<usize>,
}

/// A JB*-triple factor. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Factor(Arc<Inner>);

impl PartialEq for Factor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Factor {
    fn build(kind: Kind) -> Factor {
        let (dim, rank, offsets) = match &kind {
            Kind::Rectangular { rows, cols } => (rows * cols, (*rows).min(*cols), vec![0]),
            Kind::Spin { dim, .. } => (*dim, 2, vec![0]),
            Kind::Hilbert { dim } => (*dim, 1, vec![0]),
            Kind::DirectSum { parts } => {
                let mut offsets = Vec::with_capacity(parts.len());
                let mut dim = 0;
                for p in parts {
                    offsets.push(dim);
                    dim += p.dim();
                }
                (dim, parts.iter().map(Factor::rank).sum(), offsets)
            }
        };
        Factor(Arc::new(Inner {
            kind,
            dim,
            rank,
            offsets,
        }))
    }

    pub fn rectangular(rows: usize, cols: usize) -> Result<Factor> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidFactor(format!("Rect({rows},{cols}) is empty")));
        }
        Ok(Self::build(Kind::Rectangular { rows, cols }))
    }

    pub fn hilbert(dim: usize) -> Result<Factor> {
        if dim == 0 {
            return Err(Error::InvalidFactor("Hilbert(0) is empty".into()));
        }
        Ok(Self::build(Kind::Hilbert { dim }))
    }

    /// The unit disc as a factor.
    pub fn disc() -> Factor {
        Self::build(Kind::Hilbert { dim: 1 })
    }

    pub fn spin(dim: usize) -> Result<Factor> {
        if dim < 3 {
            return Err(Error::InvalidFactor(format!("Spin({dim}) needs dim >= 3")));
        }
        Ok(Self::build(Kind::Spin {
            dim,
            conjugation: None,
        }))
    }

    /// Spin factor whose conjugation is `x ↦ J x̄`; `J` must be unitary with `J J̄ = I`.
    pub fn spin_with_conjugation(dim: usize, j: DMatrix<Complex64>) -> Result<Factor> {
        if dim < 3 {
            return Err(Error::InvalidFactor(format!("Spin({dim}) needs dim >= 3")));
        }
        if j.nrows() != dim || j.ncols() != dim {
            return Err(Error::InvalidFactor("conjugation matrix has wrong shape".into()));
        }
        let id = DMatrix::<Complex64>::identity(dim, dim);
        let unitary = (j.adjoint() * &j - &id).camax();
        let involution = (&j * j.map(|z| z.conj()) - &id).camax();
        if unitary > 1e-10 || involution > 1e-10 {
            return Err(Error::InvalidFactor(format!(
                "conjugation is not an isometric involution (unitarity {unitary:.2e}, involution {involution:.2e})"
            )));
        }
        Ok(Self::build(Kind::Spin {
            dim,
            conjugation: Some(j),
        }))
    }

    /// ℓ∞-sum of `d` discs.
    pub fn polydisc(d: usize) -> Result<Factor> {
        if d == 0 {
            return Err(Error::InvalidFactor("Polydisc(0) is empty".into()));
        }
        Self::direct_sum((0..d).map(|_| Factor::disc()).collect())
    }

    /// ℓ∞-sum; nested sums are flattened.
    pub fn direct_sum(parts: Vec<Factor>) -> Result<Factor> {
        if parts.is_empty() {
            return Err(Error::InvalidFactor("empty direct sum".into()));
        }
        let mut flat = Vec::new();
        for p in parts {
            match &p.0.kind {
                Kind::DirectSum { parts } => flat.extend(parts.iter().cloned()),
                _ => flat.push(p),
            }
        }
        Ok(Self::build(Kind::DirectSum { parts: flat }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// Simple parts with their coordinate offsets; a simple factor is its own part.
    pub fn parts(&self) -> Vec<(usize, &Factor)> {
        match &self.0.kind {
            Kind::DirectSum { parts } => self.0.offsets.iter().copied().zip(parts.iter()).collect(),
            _ => vec![(0, self)],
        }
    }

    /// Hilbert(1) or a sum of Hilbert(1) parts: the operator norm has a closed form.
    pub fn is_polydisc(&self) -> bool {
        self.parts()
            .iter()
            .all(|(_, p)| matches!(p.kind(), Kind::Hilbert { dim: 1 }))
    }

    pub fn is_hilbert(&self) -> bool {
        matches!(self.kind(), Kind::Hilbert { .. })
    }

    /// Abelian factors: every part is one-dimensional.
    pub fn is_abelian(&self) -> bool {
        self.is_polydisc()
    }

    /// Applies the spin conjugation `x ↦ J x̄` to a coordinate slice of a spin part.
    pub(crate) fn spin_star(conjugation: &Option<DMatrix<Complex64>>, x: &[Complex64]) -> Vec<Complex64> {
        match conjugation {
            None => x.iter().map(|z| z.conj()).collect(),
            Some(j) => {
                let n = x.len();
                (0..n)
                    .map(|i| (0..n).map(|k| j[(i, k)] * x[k].conj()).sum())
                    .collect()
            }
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Rectangular { rows, cols } => write!(f, "Rect({rows},{cols})"),
            Kind::Spin { dim, .. } => write!(f, "Spin({dim})"),
            Kind::Hilbert { dim } => write!(f, "Hilbert({dim})"),
            Kind::DirectSum { parts } => {
                if self.is_polydisc() {
                    write!(f, "Polydisc({})", parts.len())
                } else {
                    let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                    write!(f, "Sum[{}]", names.join(", "))
                }
            }
        }
    }
}
