use thiserror::Error;

/// Crate-wide error type. Variant names follow the operation contracts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different base fields")]
    FieldMismatch,
    #[error("zero input where a nonzero field element is required")]
    ZeroInput,
    #[error("zero parameter where a nonzero parameter is required")]
    ZeroParameter,
    #[error("zero coefficient in a quadratic form")]
    ZeroCoefficient,
    #[error("the base field is not a quadratic extension")]
    NotAQuadraticExtension,
    #[error("integer factorization exceeded the configured effort: {0}")]
    FactorizationTooHard(String),
    #[error("invalid field descriptor: {0}")]
    InvalidFieldDescriptor(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("elements belong to different parent algebras")]
    ParentMismatch,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("center factorization beyond quadratic minimal polynomials is unsupported")]
    UnsupportedCenterFactorization,
    #[error("division test unsupported at this dimension")]
    UnsupportedDimension,
    #[error("right ideal is not minimal")]
    NotMinimal,
    #[error("algebra is not a central simple superalgebra: {0}")]
    NotCSS(String),
    #[error("algebra is not of odd type")]
    NotOddType,
    #[error("algebra is not split of even type")]
    NotSplitEven,
    #[error("algebra is not an even central simple superalgebra")]
    NotEvenCSS,
    #[error("map is not bijective")]
    NotBijective,
    #[error("map is not a graded automorphism, or is not inner")]
    NotInner,
    #[error("map is not a superantiautomorphism")]
    NotAntiautomorphism,
    #[error("matrix dimensions do not match")]
    DimMismatch,
    #[error("empty matrix shape")]
    EmptyShape,
    #[error("quadratic form too large: {0} generators (cap is 6)")]
    TooLarge(usize),
    #[error("hermitian superform is degenerate")]
    Degenerate,
    #[error("no superantiautomorphism exists")]
    NoSuperantiautomorphism,
    #[error("square invariant is not trivial: class has order > 2")]
    NonSquareInvariant,
    #[error("unsupported field for this operation")]
    UnsupportedField,
    #[error("algebra is not defined over a quadratic extension")]
    NotOverQuadraticExtension,
    #[error("map is not a semilinear superantiautomorphism")]
    NotSemilinearAntiauto,
    #[error("unsupported shape for this operation: {0}")]
    UnsupportedShape(String),
    #[error("unsupported even part for the odd-type second-kind criterion")]
    UnsupportedA0,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
