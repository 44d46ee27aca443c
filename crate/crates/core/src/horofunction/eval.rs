use serde::{Deserialize, Serialize};

use super::data::HorofunctionData;
use crate::error::{Error, Result};
use crate::kernel::{bergman, bergman_power, op_norm, Element, OpNorm, RealLinOp, Transvection};
use crate::tolerance::{BISECT_ABS, SEQUENCE_FLUCTUATION};

const BISECT_MAX_ITER: usize = 400;
const BRACKET_EXPANSIONS: usize = 200;

/// `s ↦ ‖B_s^{-1/2}(x − c_s)‖` for a fixed `x`.
///
/// With `κ₀ = 1`, `κᵢ = √((σᵢ+s)/s)` this is
/// `‖Σ_{i≤j} κᵢκⱼ P_ij x − Σ (σᵢ/s) eᵢ‖`, so each evaluation is a norm.
pub struct MembershipGauge<'a> {
    data: &'a HorofunctionData,
    pieces: Vec<(usize, usize, Element)>,
}

impl<'a> MembershipGauge<'a> {
    pub fn new(data: &'a HorofunctionData, x: &Element) -> Result<MembershipGauge<'a>> {
        data.frame()[0].check_same_factor(x)?;
        let pieces = data
            .joint()
            .iter()
            .map(|(i, j, p)| (i, j, p.apply(x)))
            .filter(|(_, _, v)| !v.is_zero())
            .collect();
        Ok(MembershipGauge { data, pieces })
    }

    pub fn value(&self, s: f64) -> f64 {
        let sigma = self.data.sigma();
        let kappa = |k: usize| if k == 0 { 1.0 } else { ((sigma[k - 1] + s) / s).sqrt() };
        let mut y = Element::zero(self.data.factor());
        for (i, j, v) in &self.pieces {
            y = &y + &v.scale_real(kappa(*i) * kappa(*j));
        }
        for (e, sig) in self.data.frame().iter().zip(sigma) {
            y = &y - &e.scale_real(sig / s);
        }
        y.norm()
    }
}

/// `F(x) = inf{s : ‖B_s^{-1/2}(x − c_s)‖ ≤ 1}` by bisection.
pub fn eval_bisect(data: &HorofunctionData, x: &Element) -> Result<f64> {
    eval_bisect_with(data, x, BISECT_ABS)
}

/// Bisection down to a bracket of width `tol · min(1, s)`.
pub fn eval_bisect_with(data: &HorofunctionData, x: &Element, tol: f64) -> Result<f64> {
    let n = x.require_in_ball()?;
    let gauge = MembershipGauge::new(data, x)?;
    let member = |s: f64| gauge.value(s) <= 1.0;
    let mut lo = (1.0 - n) / (1.0 + n);
    let mut hi = (1.0 + n) / (1.0 - n);
    let mut tries = 0;
    while !member(hi) {
        hi *= 2.0;
        tries += 1;
        if tries > BRACKET_EXPANSIONS || !hi.is_finite() {
            return Err(Error::Bracket { norm: n });
        }
    }
    tries = 0;
    while member(lo) {
        lo /= 2.0;
        tries += 1;
        if tries > BRACKET_EXPANSIONS || lo == 0.0 {
            return Err(Error::Bracket { norm: n });
        }
    }
    for _ in 0..BISECT_MAX_ITER {
        if hi - lo <= tol * hi.min(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if member(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `½ log F(x)`.
pub fn gromov_h(data: &HorofunctionData, x: &Element) -> Result<f64> {
    Ok(0.5 * eval_bisect(data, x)?.ln())
}

/// Extrapolated evaluating-sequence value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceEstimate {
    pub value: f64,
    /// Difference of the two closest consecutive extrapolants.
    pub error: f64,
    pub converged: bool,
}

/// `y = √(1−t) e₁ + Σ_{i≥2} √(1 − t/σᵢ) eᵢ`; needs `t < σ_q`.
pub fn evaluating_point(data: &HorofunctionData, t: f64) -> Element {
    data.combination(|sig| (1.0 - t / sig).max(0.0).sqrt())
}

/// `lim t/(1 − ‖g_{-x}(y_t)‖²)` along `t = 2^{-k}`, `k = 10..=30`, with
/// two Richardson steps.
pub fn eval_sequence(data: &HorofunctionData, x: &Element) -> Result<SequenceEstimate> {
    x.require_in_ball()?;
    data.frame()[0].check_same_factor(x)?;
    let g = Transvection::new(&-x)?;
    let sigma_q = *data.sigma().last().expect("nonempty frame");
    let k0 = (10..=30).find(|&k| 0.5f64.powi(k) < 0.5 * sigma_q).unwrap_or(30);
    let k_end = 30.max(k0 + 6);
    let ratios: Vec<f64> = (k0..=k_end)
        .map(|k| {
            let t = 0.5f64.powi(k);
            let y = evaluating_point(data, t);
            let n = g.apply(&y).map(|v| v.norm())?;
            Ok(t / ((1.0 - n) * (1.0 + n)))
        })
        .collect::<Result<_>>()?;
    let r1: Vec<f64> = ratios.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
    let r2: Vec<f64> = r1.windows(2).map(|w| (4.0 * w[1] - w[0]) / 3.0).collect();
    let (value, error) = r2
        .windows(2)
        .map(|w| (w[1], (w[1] - w[0]).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((ratios[ratios.len() - 1], f64::INFINITY));
    Ok(SequenceEstimate {
        value,
        error,
        converged: error <= SEQUENCE_FLUCTUATION * value.abs(),
    })
}

/// The operator `B(x,x)^{-1/2} B(x,c) Σ_{1≤i≤j≤q} ρᵢρⱼ P_ij`.
pub fn horofunction_operator(data: &HorofunctionData, x: &Element) -> Result<RealLinOp> {
    let rho = data.rho();
    let mut sum = RealLinOp::zero(data.factor());
    for (i, j, p) in data.joint().iter() {
        if i >= 1 {
            sum.axpy(rho[i - 1] * rho[j - 1], p);
        }
    }
    let left = bergman_power(x, -0.5)?.compose(&bergman(x, data.horocentre().element())?);
    Ok(left.compose(&sum))
}

/// `F(x)` as an operator norm; exact on Hilbert and polydisc factors.
pub fn eval_opnorm(data: &HorofunctionData, x: &Element) -> Result<OpNorm> {
    x.require_in_ball()?;
    Ok(op_norm(&horofunction_operator(data, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Factor;
    use num_complex::Complex64;

    fn disc_data() -> (Factor, HorofunctionData) {
        let d = Factor::disc();
        let h = HorofunctionData::rank_one(Element::from_real(&d, &[1.0]).unwrap()).unwrap();
        (d, h)
    }

    fn disc_closed_form(z: Complex64) -> f64 {
        (Complex64::new(1.0, 0.0) - z).norm_sqr() / (1.0 - z.norm_sqr())
    }

    #[test]
    fn disc_three_ways() {
        let (d, h) = disc_data();
        for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(-0.3, 0.6), Complex64::new(0.9, -0.1)] {
            let x = Element::new(&d, vec![z]).unwrap();
            let exact = disc_closed_form(z);
            let b = eval_bisect(&h, &x).unwrap();
            assert!((b - exact).abs() <= 1e-9 * exact.max(1.0), "bisect {b} vs {exact}");
            let s = eval_sequence(&h, &x).unwrap();
            assert!(s.converged);
            assert!((s.value - exact).abs() <= 1e-8 * (1.0 + exact), "sequence {s:?} vs {exact}");
            let o = eval_opnorm(&h, &x).unwrap();
            assert!(o.exact);
            assert!((o.value - exact).abs() <= 1e-12 * (1.0 + exact));
        }
    }

    #[test]
    fn radial_values() {
        let p = Factor::polydisc(2).unwrap();
        let h = HorofunctionData::new(vec![Element::basis(&p, 0), Element::basis(&p, 1)], vec![1.0, 0.4]).unwrap();
        let xi = Element::from_real(&p, &[1.0, 1.0]).unwrap();
        for t in [0.1, 0.5, 0.9] {
            let f = eval_bisect(&h, &xi.scale_real(t)).unwrap();
            assert!((f - (1.0 - t) / (1.0 + t)).abs() < 1e-9);
        }
        let zero = Element::zero(&p);
        assert!((eval_bisect(&h, &zero).unwrap() - 1.0).abs() < 1e-9);
        assert!(gromov_h(&h, &zero).unwrap().abs() < 1e-9);
    }

    #[test]
    fn bidisc_product_formula() {
        let p = Factor::polydisc(2).unwrap();
        let sigma = 0.3;
        let h = HorofunctionData::new(vec![Element::basis(&p, 0), Element::basis(&p, 1)], vec![1.0, sigma]).unwrap();
        let z = [Complex64::new(0.2, 0.5), Complex64::new(-0.4, 0.1)];
        let x = Element::new(&p, z.to_vec()).unwrap();
        let exact = disc_closed_form(z[0]).max(disc_closed_form(z[1]) * sigma);
        assert!((eval_bisect(&h, &x).unwrap() - exact).abs() < 1e-9);
        let o = eval_opnorm(&h, &x).unwrap();
        assert!((o.value - exact).abs() < 1e-12);
        let s = eval_sequence(&h, &x).unwrap();
        assert!((s.value - exact).abs() < 1e-7 * (1.0 + exact), "{s:?} vs {exact}");
    }

    #[test]
    fn rejects_outside_points() {
        let (d, h) = disc_data();
        let x = Element::from_real(&d, &[1.0]).unwrap();
        assert!(eval_bisect(&h, &x).is_err());
        assert!(eval_sequence(&h, &x).is_err());
    }
}
