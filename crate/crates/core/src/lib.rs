//! Strong ellipticity checks for fourth-order elasticity tensors.
//!
//! Three independent routes decide or certify `A x² y² > 0` on the unit
//! sphere product:
//!
//! - [`meig`]: M-eigenvalues by shifted power iteration and, for n ≤ 3, a
//!   grid-seeded enumeration of the whole spectrum.
//! - [`pocs`]: alternating projections that search for a sum-of-rank-one
//!   PSD representation, a sufficient certificate.
//! - [`mclass`]: the elasticity M-tensor ladder for tensors with
//!   non-positive off-diagonal entries.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below fix the precision.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index loops mirror the a_ijkl subscripts
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mclass;
pub mod meig;
pub mod pocs;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::{Matrix, SymmetricEigen};
pub use mclass::{check_condition, classify, is_nonsingular_m_matrix, z_pattern, ClassificationReport, ConditionId, Verdict, ZPattern};
pub use meig::{
    enumerate_spectrum, is_irreducible, power_method_max, power_method_min, spectral_radius_nonneg, EnumerateOptions,
    MEigenpair, MSpectrum, PowerOptions,
};
pub use pocs::{extract_certificate, pocs_verify, project_affine, project_psd, PocsOptions, PocsOutcome, PocsStatus, PsdCertificate};
pub use scalar::Scalar;
pub use tensor::{ElasticityTensor, FourthOrder, GeneralTensor4, UnfoldMode, UnfoldedMatrix};

pub type ElasticityTensor64 = ElasticityTensor<f64>;
pub type ElasticityTensor32 = ElasticityTensor<f32>;
pub type GeneralTensor64 = GeneralTensor4<f64>;
pub type GeneralTensor32 = GeneralTensor4<f32>;
pub type MEigenpair64 = MEigenpair<f64>;
pub type MEigenpair32 = MEigenpair<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
