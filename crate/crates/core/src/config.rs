//! Structured run configuration (`"schema": "symdom.run/1"`).
//!
//! Elements are arrays of `[re, im]` pairs in coordinate order; matrices are
//! arrays of rows. Unknown keys are rejected everywhere.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{DiscMap, Primitive, SelfMap, ITERATIONS};
use crate::error::{Error, Result};
use crate::horofunction::{HorofunctionData, HorofunctionRecord, Slice};
use crate::kernel::{random_element_with, rng_for, Element, Factor};
use crate::tolerance::Tolerances;

pub const SCHEMA: &str = "symdom.run/1";
/// Random stream used for generated starts.
const STARTS_STREAM: u64 = 0x57a7;

pub type ComplexSpec = [f64; 2];
pub type ElementSpec = Vec<ComplexSpec>;
pub type MatrixSpec = Vec<Vec<ComplexSpec>>;

fn complex(c: ComplexSpec) -> Complex64 {
    Complex64::new(c[0], c[1])
}

fn matrix(rows: &MatrixSpec) -> Result<DMatrix<Complex64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Config("matrix rows have different lengths".into()));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| complex(rows[i][j])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FactorSpec {
    Rect { rows: usize, cols: usize },
    Spin { dim: usize },
    Hilbert { dim: usize },
    Polydisc { d: usize },
    Sum { parts: Vec<FactorSpec> },
}

impl FactorSpec {
    pub fn build(&self) -> Result<Factor> {
        match self {
            FactorSpec::Rect { rows, cols } => Factor::rectangular(*rows, *cols),
            FactorSpec::Spin { dim } => Factor::spin(*dim),
            FactorSpec::Hilbert { dim } => Factor::hilbert(*dim),
            FactorSpec::Polydisc { d } => Factor::polydisc(*d),
            FactorSpec::Sum { parts } => Factor::direct_sum(parts.iter().map(FactorSpec::build).collect::<Result<_>>()?),
        }
    }

    /// Parses a factor given as a JSON object.
    pub fn from_json(s: &str) -> Result<FactorSpec> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("factor spec: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum DiscMapSpec {
    Mobius { b: ComplexSpec },
    Affine { alpha: ComplexSpec, beta: ComplexSpec },
    Scale { lambda: ComplexSpec },
}

impl DiscMapSpec {
    fn build(&self) -> DiscMap {
        match *self {
            DiscMapSpec::Mobius { b } => DiscMap::Mobius(complex(b)),
            DiscMapSpec::Affine { alpha, beta } => DiscMap::Affine {
                alpha: complex(alpha),
                beta: complex(beta),
            },
            DiscMapSpec::Scale { lambda } => DiscMap::Affine {
                alpha: complex(lambda),
                beta: Complex64::new(0.0, 0.0),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexTermSpec {
    pub weight: f64,
    pub pipeline: Vec<PrimitiveSpec>,
}

/// One pipeline step. Isometries take exactly one of `matrix`,
/// `left`/`right` (rectangular factors) or `perm`/`phases`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
pub enum PrimitiveSpec {
    Transvection {
        a: ElementSpec,
    },
    Scale {
        lambda: ComplexSpec,
    },
    Isometry {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<MatrixSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        right: Option<MatrixSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        perm: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phases: Option<ElementSpec>,
    },
    Coordwise {
        parts: Vec<DiscMapSpec>,
    },
    Affine {
        matrix: MatrixSpec,
        offset: ElementSpec,
    },
    Convex {
        terms: Vec<ConvexTermSpec>,
    },
}

impl PrimitiveSpec {
    pub fn build(&self, factor: &Factor) -> Result<Primitive> {
        match self {
            PrimitiveSpec::Transvection { a } => Primitive::transvection(&Element::from_pairs(factor, a)?),
            PrimitiveSpec::Scale { lambda } => Primitive::scale(complex(*lambda)),
            PrimitiveSpec::Isometry {
                matrix: m,
                left,
                right,
                perm,
                phases,
            } => match (m, left, right, perm, phases) {
                (Some(m), None, None, None, None) => Primitive::isometry(factor, matrix(m)?),
                (None, Some(l), Some(r), None, None) => Primitive::rect_isometry(factor, &matrix(l)?, &matrix(r)?),
                (None, None, None, Some(p), Some(ph)) => {
                    Primitive::permutation(factor, p, &ph.iter().map(|c| complex(*c)).collect::<Vec<_>>())
                }
                _ => Err(Error::Config(
                    "isometry needs exactly one of: matrix; left and right; perm and phases".into(),
                )),
            },
            PrimitiveSpec::Coordwise { parts } => Primitive::coordwise(factor, parts.iter().map(DiscMapSpec::build).collect()),
            PrimitiveSpec::Affine { matrix: m, offset } => Primitive::affine(matrix(m)?, Element::from_pairs(factor, offset)?),
            PrimitiveSpec::Convex { terms } => Primitive::convex(
                terms
                    .iter()
                    .map(|t| Ok((t.weight, MapSpec { pipeline: t.pipeline.clone() }.build(factor)?)))
                    .collect::<Result<_>>()?,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub pipeline: Vec<PrimitiveSpec>,
}

impl MapSpec {
    pub fn build(&self, factor: &Factor) -> Result<SelfMap> {
        SelfMap::new(factor, self.pipeline.iter().map(|p| p.build(factor)).collect::<Result<_>>()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub origin: ElementSpec,
    pub du: ElementSpec,
    pub dv: ElementSpec,
    pub u: [f64; 2],
    pub v: [f64; 2],
    pub nu: usize,
    pub nv: usize,
}

impl SliceSpec {
    pub fn build(&self, factor: &Factor) -> Result<Slice> {
        Ok(Slice {
            origin: Element::from_pairs(factor, &self.origin)?,
            du: Element::from_pairs(factor, &self.du)?,
            dv: Element::from_pairs(factor, &self.dv)?,
            u_range: (self.u[0], self.u[1]),
            v_range: (self.v[0], self.v[1]),
            nu: self.nu,
            nv: self.nv,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomStarts {
    pub random: usize,
    pub cap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridStarts {
    pub grid: SliceSpec,
}

/// Orbit starts: an explicit list, seeded random points, or the in-ball points of a slice grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartsSpec {
    List(Vec<ElementSpec>),
    Random(RandomStarts),
    Grid(GridStarts),
}

impl StartsSpec {
    pub fn build(&self, factor: &Factor, seed: u64) -> Result<Vec<Element>> {
        let starts: Vec<Element> = match self {
            StartsSpec::List(list) => list.iter().map(|e| Element::from_pairs(factor, e)).collect::<Result<_>>()?,
            StartsSpec::Random(r) => {
                if !(r.cap >= 0.0 && r.cap < 1.0) {
                    return Err(Error::Config(format!("random start cap {} must lie in [0, 1)", r.cap)));
                }
                let mut rng = rng_for(seed, STARTS_STREAM);
                let mut v = vec![Element::zero(factor)];
                v.extend((1..r.random).map(|_| random_element_with(factor, r.cap, &mut rng)));
                v.truncate(r.random);
                v
            }
            StartsSpec::Grid(g) => {
                let slice = g.grid.build(factor)?;
                slice
                    .coordinates()
                    .into_iter()
                    .map(|(u, v)| slice.point(u, v))
                    .filter(|x| x.norm() < 1.0)
                    .collect()
            }
        };
        if let Some(x) = starts.iter().find(|x| x.norm() >= 1.0) {
            return Err(Error::Config(format!("start of norm {} is outside the ball", x.norm())));
        }
        Ok(starts)
    }
}

impl Default for StartsSpec {
    /// The origin and nine seeded points of norm at most 0.9.
    fn default() -> Self {
        StartsSpec::Random(RandomStarts { random: 10, cap: 0.9 })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_csv: Option<String>,
}

fn default_iterations() -> usize {
    ITERATIONS
}

fn default_samples() -> usize {
    crate::dynamics::WolffOptions::default().samples
}

fn is_default<T: Default + PartialEq>(t: &T) -> bool {
    *t == T::default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub factor: FactorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<StartsSpec>,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "is_default")]
    pub tolerances: Tolerances,
    /// Wolff `β` schedule; the default is `1 − 2^{−k}`, `k = 3..=14`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<f64>>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Explicit horofunction for `horoball`; otherwise it comes from the Wolff construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horofunction: Option<HorofunctionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<SliceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub outputs: OutputsSpec,
}

impl RunConfig {
    pub fn new(factor: FactorSpec) -> RunConfig {
        RunConfig {
            schema: SCHEMA.into(),
            factor,
            map: None,
            starts: None,
            iterations: ITERATIONS,
            seed: 0,
            tolerances: Tolerances::default(),
            schedule: None,
            samples: default_samples(),
            horofunction: None,
            slice: None,
            radii: None,
            outputs: OutputsSpec::default(),
        }
    }

    /// Parses and validates: schema tag, factor, map, starts, horofunction and slice.
    pub fn from_json(s: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configurations serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(Error::Config(format!("schema must be {SCHEMA:?}, got {:?}", self.schema)));
        }
        let factor = self.factor.build()?;
        if self.map.is_some() {
            self.self_map(&factor)?;
        }
        self.starts(&factor)?;
        self.horofunction(&factor)?;
        if let Some(s) = &self.slice {
            s.build(&factor)?;
        }
        if let Some(r) = &self.radii {
            if r.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                return Err(Error::Config("hororadii must be positive".into()));
            }
        }
        if let Some(b) = &self.schedule {
            if b.is_empty() || b.iter().any(|x| !(*x > 0.0 && *x < 1.0)) || b.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::Config("schedule must increase strictly inside (0, 1)".into()));
            }
        }
        Ok(())
    }

    pub fn build_factor(&self) -> Result<Factor> {
        self.factor.build()
    }

    pub fn self_map(&self, factor: &Factor) -> Result<SelfMap> {
        match &self.map {
            Some(m) => m.build(factor),
            None => Err(Error::Config("configuration has no map".into())),
        }
    }

    pub fn starts(&self, factor: &Factor) -> Result<Vec<Element>> {
        self.starts.clone().unwrap_or_default().build(factor, self.seed)
    }

    pub fn horofunction(&self, factor: &Factor) -> Result<Option<HorofunctionData>> {
        self.horofunction
            .as_ref()
            .map(|r| HorofunctionData::from_record(factor, r))
            .transpose()
    }
}
