use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generator {index} of the source does not map into the target monoid")]
    ImageNotInTarget { index: usize },

    #[error("the cone contains a line")]
    NonSalientCone,

    #[error("a ray does not lie in the rational span of the lattice")]
    RayOutsideLattice,

    #[error("the vector does not lie in the groupification")]
    NotInGroupification,

    #[error("the vector already lies in the monoid")]
    AlreadyInMonoid,

    #[error("{0} is not sharp")]
    NotSharp(String),

    #[error("{0} is not saturated")]
    NotSaturated(String),

    #[error("{0} is injective")]
    InjectiveMap(String),

    #[error("{0} is not local")]
    NotLocal(String),

    #[error("the morphisms do not share a source")]
    MismatchedSources,

    #[error("the morphisms do not share a target")]
    MismatchedTargets,

    #[error("neither morphism is strict")]
    NoStrictMorphism,

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}
