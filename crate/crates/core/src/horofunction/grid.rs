use serde::{Deserialize, Serialize};

use super::data::HorofunctionData;
use super::eval::eval_bisect;
use super::horoball::Horoball;
use crate::error::{Error, Result};
use crate::kernel::Element;
use crate::par::Execution;

/// Affine slice `origin + u·du + v·dv` sampled on a regular grid.
#[derive(Debug, Clone)]
pub struct Slice {
    pub origin: Element,
    pub du: Element,
    pub dv: Element,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub nu: usize,
    pub nv: usize,
}

impl Slice {
    fn coordinate(range: (f64, f64), n: usize, k: usize) -> f64 {
        if n <= 1 {
            range.0
        } else {
            range.0 + (range.1 - range.0) * k as f64 / (n - 1) as f64
        }
    }

    pub fn point(&self, u: f64, v: f64) -> Element {
        &(&self.origin + &self.du.scale_real(u)) + &self.dv.scale_real(v)
    }

    /// Grid coordinates in row-major order (`v` outer, `u` inner).
    pub fn coordinates(&self) -> Vec<(f64, f64)> {
        (0..self.nv)
            .flat_map(|j| (0..self.nu).map(move |i| (i, j)))
            .map(|(i, j)| (Self::coordinate(self.u_range, self.nu, i), Self::coordinate(self.v_range, self.nv, j)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub u: f64,
    pub v: f64,
    /// `F` at the point; `None` outside the open ball.
    pub f: Option<f64>,
    /// Open horoball membership per requested radius.
    pub members: Vec<bool>,
    pub inside_ball: bool,
}

/// Evaluates `F` and horoball membership on a slice grid.
pub fn horoball_grid(data: &HorofunctionData, slice: &Slice, radii: &[f64], exec: Execution) -> Result<Vec<GridRow>> {
    for e in [&slice.origin, &slice.du, &slice.dv] {
        if e.factor() != data.factor() {
            return Err(Error::FactorMismatch(data.factor().to_string(), e.factor().to_string()));
        }
    }
    let balls: Vec<Horoball> = radii.iter().map(|&s| Horoball::new(data, s)).collect::<Result<_>>()?;
    let coords = slice.coordinates();
    let rows = exec.map(&coords, |&(u, v)| {
        let x = slice.point(u, v);
        let inside = x.norm() < 1.0;
        let f = if inside { eval_bisect(data, &x).ok() } else { None };
        GridRow {
            u,
            v,
            f,
            members: balls.iter().map(|b| inside && b.contains(&x)).collect(),
            inside_ball: inside,
        }
    });
    Ok(rows)
}
