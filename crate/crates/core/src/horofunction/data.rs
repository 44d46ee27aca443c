use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Element, Factor, JointPeirce, Tripotent};

/// Serialized form `{"frame": [...], "sigma": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorofunctionRecord {
    pub frame: Vec<Vec<[f64; 2]>>,
    pub sigma: Vec<f64>,
}

#[derive(Debug)]
struct Inner {
    factor: Factor,
    frame: Vec<Element>,
    sigma: Vec<f64>,
    rho: Vec<f64>,
    horocentre: Tripotent,
    joint: JointPeirce,
}

/// Horofunction data: orthogonal minimal tripotents `e₁..e_q`, coefficients
/// `1 = σ₁ ≥ … ≥ σ_q > 0` and the joint Peirce projections of the frame.
///
/// Cheap to clone.
#[derive(Debug, Clone)]
pub struct HorofunctionData(Arc<Inner>);

impl HorofunctionData {
    pub fn new(frame: Vec<Element>, sigma: Vec<f64>) -> Result<HorofunctionData> {
        let bad = |m: String| Err(Error::InvalidHorofunction(m));
        if frame.is_empty() {
            return bad("empty frame".into());
        }
        if frame.len() != sigma.len() {
            return bad(format!("{} frame elements but {} coefficients", frame.len(), sigma.len()));
        }
        if (sigma[0] - 1.0).abs() > 1e-12 {
            return bad(format!("sigma_1 = {} must be 1", sigma[0]));
        }
        for (i, w) in sigma.windows(2).enumerate() {
            if w[1] > w[0] {
                return bad(format!("sigma not descending at index {}", i + 2));
            }
        }
        if let Some(s) = sigma.iter().find(|s| !(**s > 0.0 && **s <= 1.0 + 1e-12)) {
            return bad(format!("sigma value {s} outside (0, 1]"));
        }
        let factor = frame[0].factor().clone();
        for (i, e) in frame.iter().enumerate() {
            let t = Tripotent::new(e.clone())?;
            if !t.flags().minimal {
                return bad(format!("frame element {} is not minimal", i + 1));
            }
        }
        let joint = JointPeirce::new(&factor, &frame)?;
        let mut c = Element::zero(&factor);
        for e in &frame {
            c = &c + e;
        }
        let horocentre = Tripotent::new(c)?;
        let mut sigma = sigma;
        sigma[0] = 1.0;
        for s in sigma.iter_mut() {
            *s = s.min(1.0);
        }
        let rho = sigma.iter().map(|s| s.sqrt()).collect();
        Ok(HorofunctionData(Arc::new(Inner {
            factor,
            frame,
            sigma,
            rho,
            horocentre,
            joint,
        })))
    }

    /// Horofunction with a single minimal tripotent.
    pub fn rank_one(e: Element) -> Result<HorofunctionData> {
        Self::new(vec![e], vec![1.0])
    }

    pub fn from_record(factor: &Factor, record: &HorofunctionRecord) -> Result<HorofunctionData> {
        let frame = record
            .frame
            .iter()
            .map(|p| Element::from_pairs(factor, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, record.sigma.clone())
    }

    pub fn record(&self) -> HorofunctionRecord {
        HorofunctionRecord {
            frame: self.0.frame.iter().map(Element::to_pairs).collect(),
            sigma: self.0.sigma.clone(),
        }
    }

    pub fn factor(&self) -> &Factor {
        &self.0.factor
    }

    pub fn frame(&self) -> &[Element] {
        &self.0.frame
    }

    pub fn sigma(&self) -> &[f64] {
        &self.0.sigma
    }

    /// `ρᵢ = √σᵢ`.
    pub fn rho(&self) -> &[f64] {
        &self.0.rho
    }

    /// Number of frame elements.
    pub fn q(&self) -> usize {
        self.0.frame.len()
    }

    /// `c = Σ eᵢ`.
    pub fn horocentre(&self) -> &Tripotent {
        &self.0.horocentre
    }

    pub fn joint(&self) -> &JointPeirce {
        &self.0.joint
    }

    /// Centre `c_s = Σ σⱼ/(σⱼ+s) eⱼ` of the horoball of radius `s`.
    pub fn centre(&self, s: f64) -> Element {
        self.combination(|sig| sig / (sig + s))
    }

    /// `Σ √(σⱼ/(σⱼ+s)) eⱼ`, the Bergman point of the horoball of radius `s`.
    pub fn bergman_point(&self, s: f64) -> Element {
        self.combination(|sig| (sig / (sig + s)).sqrt())
    }

    pub(crate) fn combination(&self, coef: impl Fn(f64) -> f64) -> Element {
        let mut x = Element::zero(&self.0.factor);
        for (e, sig) in self.0.frame.iter().zip(&self.0.sigma) {
            x = &x + &e.scale_real(coef(*sig));
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let d = Factor::disc();
        let one = Element::from_real(&d, &[1.0]).unwrap();
        let h = HorofunctionData::rank_one(one.clone()).unwrap();
        assert_eq!(h.horocentre().element(), &one);
        assert!(HorofunctionData::new(vec![one.clone()], vec![0.5]).is_err());
        assert!(HorofunctionData::new(vec![one.scale_real(0.5)], vec![1.0]).is_err());

        let f = Factor::rectangular(2, 2).unwrap();
        let e11 = Element::matrix_unit(&f, 0, 0).unwrap();
        let e22 = Element::matrix_unit(&f, 1, 1).unwrap();
        let h = HorofunctionData::new(vec![e11.clone(), e22.clone()], vec![1.0, 0.5]).unwrap();
        assert_eq!(h.q(), 2);
        assert!(h.horocentre().flags().unitary);
        assert!(HorofunctionData::new(vec![e11.clone(), e22.clone()], vec![0.5, 1.0]).is_err());
        assert!(HorofunctionData::new(vec![e11.clone(), e22], vec![1.0, 0.0]).is_err());
        assert!(matches!(
            HorofunctionData::new(vec![e11.clone(), e11], vec![1.0, 1.0]),
            Err(Error::NonOrthogonalFrame { .. })
        ));
        let id = Element::from_real(&f, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(HorofunctionData::rank_one(id).is_err());
    }

    #[test]
    fn centre_and_record() {
        let p = Factor::polydisc(2).unwrap();
        let h = HorofunctionData::new(vec![Element::basis(&p, 0), Element::basis(&p, 1)], vec![1.0, 0.5]).unwrap();
        let c = h.centre(1.0);
        assert!((c.coords()[0].re - 0.5).abs() < 1e-15);
        assert!((c.coords()[1].re - 1.0 / 3.0).abs() < 1e-15);
        let back = HorofunctionData::from_record(&p, &h.record()).unwrap();
        assert_eq!(back.sigma(), h.sigma());
        assert_eq!(back.frame(), h.frame());
    }
}
