//! Covariant quantum channels on `C^d`: the depolarising and transpose
//! depolarising families, their Choi matrices and invariance structure, and
//! numerical checks of minimal output entropy additivity for `Λ_t ⊗ Λ_t`.

pub mod additivity;
pub mod channel;
pub mod covariance;
pub mod eigen;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod optimize;
pub mod product;
pub mod random;
pub mod simplex;
pub mod spectrum;

pub use channel::{ChannelSpec, ChoiMatrix, Family};
pub use error::{Error, Result};
pub use matrix::{kron, partial_trace, partial_transpose, ComplexMatrix, Subsystem};
pub use simplex::SimplexPoint;
pub use spectrum::{
    more_mixed, von_neumann_entropy, LogBase, MajorizationRelation, MajorizationVerdict, Spectrum,
};
