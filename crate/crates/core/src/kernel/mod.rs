//! Finite-dimensional JB*-triples: factors, elements, the triple product and
//! the operators built from it.

mod element;
mod factor;
mod linop;
mod norm;
mod peirce;
mod random;
mod spectral;
mod svd;
mod transvection;
mod triple;

pub use element::Element;
pub use factor::{Factor, Kind};
pub use linop::{complexify, realify, Linearity, RealLinOp};
pub use norm::{element_norm, op_norm, op_norm_with, OpNorm};
pub use peirce::{
    bergman_power, bergman_via_peirce, joint_peirce_projection, peirce_projection, tripotent_residual, JointPeirce,
    Tripotent, TripotentFlags,
};
pub use random::{random_element, random_element_of_norm, random_element_with, random_frame, rng_for};
pub use spectral::{spectral_decomposition, SpectralDecomposition};
pub use transvection::{kobayashi, pseudo_distance, transvection_apply, Transvection};
pub use triple::{bergman, box_op, quadratic, triple_product};


