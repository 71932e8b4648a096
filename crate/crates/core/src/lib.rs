//! Exact computations with affine monoids and their push-outs.

pub mod commands;
pub mod cone;
pub mod document;
pub mod error;
pub mod hilbert;
pub mod intlin;
pub mod logpoint;
pub mod monoid;
pub mod pushout;

pub use error::Error;
pub use hilbert::hilbert_basis;
pub use intlin::{AbelianGroupInvariants, IntegerMatrix};
pub use monoid::{fiber_product_saturated, AffineMonoid, LatticeMap, MembershipCertificate};
pub use pushout::{
    bounded_pushout_oracle, kernel_witnesses, nonqi_extension, pushout_group_invariants,
    quasi_integrality, validate_pushout, FinitePushoutApprox, NonQiExtension, PushoutData,
    PushoutValidation, QuasiIntegralityReport, Verdict,
};
