//! Injective, projective and plug-in uniform crossnorms on finite-dimensional
//! ℓp tensor products, induced norms of operator tensors, and direction-aware
//! numerical checks of the inequalities relating them.
//!
//! Every computed norm is a [`NormEstimate`] carrying a [`Direction`]: closed
//! forms are `Exact`, sup-type searches give `LowerBound`s and feasible
//! representations give `UpperBound`s.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below are what most callers want.

mod ascent;
pub mod crossnorms;
mod error;
pub mod estimate;
pub mod linalg;
pub mod operator_norms;
pub mod oracle;
pub mod rng;
mod scalar;
pub mod spaces;
pub mod tensor;
pub mod verify;

pub use crossnorms::{
    alpha_norm, alpha_norm_with, dual_injective_pair_value, injective_norm, projective_norm,
    CrossnormTag,
};
pub use error::{Error, Result};
pub use estimate::{Bounds, Budget, Direction, NormEstimate, Witness};
pub use operator_norms::{
    functional_operator_dual_norm, functional_tensor_norm, induced_crossnorm,
    operator_injective_norm, operator_norm, operator_projective_norm, InducedNormSpec,
};
pub use scalar::Scalar;
pub use spaces::{
    dual_exponent, dual_norm, normalize, norming_functional, sample_unit_sphere,
    unit_ball_extreme_points, vector_norm, Exponent, Functional, LpSpace,
};
pub use tensor::{
    apply, assemble, pair, single_tensor, Decomposition, OperatorFunctionalTensor, OperatorSpaces,
    OperatorTensor, Tensor,
};
pub use verify::{CheckRecord, Side, Verdict};

pub type Tensor64 = Tensor<f64>;
pub type Tensor32 = Tensor<f32>;
pub type OperatorTensor64 = OperatorTensor<f64>;
pub type OperatorTensor32 = OperatorTensor<f32>;
pub type NormEstimate64 = NormEstimate<f64>;
pub type NormEstimate32 = NormEstimate<f32>;
