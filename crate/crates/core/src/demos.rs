//! Named demo scenarios as run configurations.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::config::{ConvexTermSpec, DiscMapSpec, FactorSpec, MapSpec, PrimitiveSpec, RunConfig, SliceSpec};
use crate::error::{Error, Result};

pub const NAMES: [&str; 9] = [
    "disc-hyperbolic",
    "disc-parabolic-like",
    "bidisc-case-a",
    "bidisc-case-b",
    "bidisc-case-c",
    "bidisc-rotation",
    "hilbert3",
    "spin4",
    "rect22",
];

/// Rotation angle of the rotation demos; `1/π` is irrational.
pub const THETA: f64 = 1.0;
/// Second rotation angle of the Hilbert demo.
pub const PHI: f64 = SQRT_2;

#[derive(Debug, Clone)]
pub struct Demo {
    pub name: &'static str,
    pub description: &'static str,
    /// Whether every part of the factor is a disc.
    pub abelian: bool,
    pub config: RunConfig,
}

const ZERO: [f64; 2] = [0.0, 0.0];
const ONE: [f64; 2] = [1.0, 0.0];
const HALF: [f64; 2] = [0.5, 0.0];

fn polar(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

fn mobius_half() -> DiscMapSpec {
    DiscMapSpec::Mobius { b: HALF }
}

fn identity_disc() -> DiscMapSpec {
    DiscMapSpec::Affine { alpha: ONE, beta: ZERO }
}

fn unit(dim: usize, k: usize, value: [f64; 2]) -> Vec<[f64; 2]> {
    let mut v = vec![ZERO; dim];
    v[k] = value;
    v
}

fn slice(dim: usize, second: Vec<[f64; 2]>) -> SliceSpec {
    SliceSpec {
        origin: vec![ZERO; dim],
        du: unit(dim, 0, ONE),
        dv: second,
        u: [-1.0, 1.0],
        v: [-1.0, 1.0],
        nu: 101,
        nv: 101,
    }
}

fn config(factor: FactorSpec, dim: usize, pipeline: Vec<PrimitiveSpec>, second: Vec<[f64; 2]>) -> RunConfig {
    let mut c = RunConfig::new(factor);
    c.map = Some(MapSpec { pipeline });
    c.slice = Some(slice(dim, second));
    c.radii = Some(vec![0.5, 1.0, 2.0]);
    c
}

/// The named scenario, or an error listing the known names.
pub fn demo(name: &str) -> Result<Demo> {
    let bidisc = || FactorSpec::Polydisc { d: 2 };
    let (description, abelian, config) = match name {
        "disc-hyperbolic" => (
            "ψ_{1/2}(z) = (z + 1/2)/(1 + z/2) on the disc",
            true,
            config(
                FactorSpec::Hilbert { dim: 1 },
                1,
                vec![PrimitiveSpec::Transvection { a: vec![HALF] }],
                vec![[0.0, 1.0]],
            ),
        ),
        "disc-parabolic-like" => (
            "z ↦ (z + 1)/2 on the disc",
            true,
            config(
                FactorSpec::Hilbert { dim: 1 },
                1,
                vec![PrimitiveSpec::Coordwise {
                    parts: vec![DiscMapSpec::Affine { alpha: HALF, beta: HALF }],
                }],
                vec![[0.0, 1.0]],
            ),
        ),
        "bidisc-case-a" => (
            "(x, y) ↦ (ψ_{1/2}(x), (1 − x)/4 + y/2); second coordinate attracted to η(x) = (1 − x)/2",
            true,
            config(
                bidisc(),
                2,
                vec![
                    PrimitiveSpec::Affine {
                        matrix: vec![vec![ONE, ZERO], vec![[-0.25, 0.0], HALF]],
                        offset: vec![ZERO, [0.25, 0.0]],
                    },
                    PrimitiveSpec::Coordwise {
                        parts: vec![mobius_half(), identity_disc()],
                    },
                ],
                unit(2, 1, ONE),
            ),
        ),
        "bidisc-case-b" => (
            "(x, y) ↦ (ψ_{1/2}(x), ψ_{1/2}(y))",
            true,
            config(
                bidisc(),
                2,
                vec![PrimitiveSpec::Coordwise {
                    parts: vec![mobius_half(), mobius_half()],
                }],
                unit(2, 1, ONE),
            ),
        ),
        "bidisc-case-c" => (
            "(x, y) ↦ ((x + ψ_{1/2}(y))/2, (x + y)/2)",
            true,
            config(
                bidisc(),
                2,
                vec![PrimitiveSpec::Convex {
                    terms: vec![
                        ConvexTermSpec {
                            weight: 0.5,
                            pipeline: vec![],
                        },
                        ConvexTermSpec {
                            weight: 0.5,
                            pipeline: vec![
                                PrimitiveSpec::Coordwise {
                                    parts: vec![identity_disc(), mobius_half()],
                                },
                                PrimitiveSpec::Isometry {
                                    matrix: None,
                                    left: None,
                                    right: None,
                                    perm: Some(vec![1, 0]),
                                    phases: Some(vec![ONE, ONE]),
                                },
                            ],
                        },
                    ],
                }],
                unit(2, 1, ONE),
            ),
        ),
        "bidisc-rotation" => (
            "(x, y) ↦ (ψ_{1/2}(x), e^{iθ}y) with θ = 1",
            true,
            config(
                bidisc(),
                2,
                vec![PrimitiveSpec::Coordwise {
                    parts: vec![mobius_half(), DiscMapSpec::Scale { lambda: polar(THETA) }],
                }],
                unit(2, 1, ONE),
            ),
        ),
        "hilbert3" => (
            "g_a ∘ U on the Hilbert ball of C³ with a = e₁/2 and U = diag(1, e^{i}, e^{i√2})",
            false,
            config(
                FactorSpec::Hilbert { dim: 3 },
                3,
                vec![
                    PrimitiveSpec::Isometry {
                        matrix: Some(vec![
                            vec![ONE, ZERO, ZERO],
                            vec![ZERO, polar(THETA), ZERO],
                            vec![ZERO, ZERO, polar(PHI)],
                        ]),
                        left: None,
                        right: None,
                        perm: None,
                        phases: None,
                    },
                    PrimitiveSpec::Transvection {
                        a: vec![HALF, ZERO, ZERO],
                    },
                ],
                unit(3, 1, ONE),
            ),
        ),
        "spin4" => (
            "g_a on Spin(4) with a = e₁/√2 of norm 1/2; the limit √2·e₁ is a maximal tripotent",
            false,
            config(
                FactorSpec::Spin { dim: 4 },
                4,
                vec![PrimitiveSpec::Transvection {
                    a: unit(4, 0, [FRAC_1_SQRT_2, 0.0]),
                }],
                unit(4, 1, ONE),
            ),
        ),
        "rect22" => (
            "g_a on 2x2 matrices with a = E₁₁/2; orbits of a₀ converge to the minimal tripotent E₁₁",
            false,
            config(
                FactorSpec::Rect { rows: 2, cols: 2 },
                4,
                vec![PrimitiveSpec::Transvection {
                    a: unit(4, 0, HALF),
                }],
                unit(4, 3, ONE),
            ),
        ),
        _ => {
            return Err(Error::Config(format!("unknown demo {name:?}; known: {}", NAMES.join(", "))));
        }
    };
    let name = NAMES.iter().find(|n| **n == name).expect("known name");
    Ok(Demo {
        name,
        description,
        abelian,
        config,
    })
}
