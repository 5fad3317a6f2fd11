use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("net is not verified: {0}")]
    UnverifiedNet(String),

    #[error("the field Q(zeta_{n}) does not contain the {order}-th roots of unity")]
    MissingRootOfUnity { n: u64, order: u64 },

    #[error("line is a component of the cubic; the chord is undefined")]
    ComponentChord,

    #[error("point is not a regular point of the cubic: {0}")]
    NotRegular(String),

    #[error("zero element is not a flex of the cubic")]
    NotAFlex,

    #[error("coset collision: {0}")]
    CosetCollision(String),

    #[error("subgroup is not closed under the loop operation")]
    SubgroupNotClosed,

    #[error("the Latin square is not isotopic to a group")]
    NotAGroup,

    #[error(
        "a 3-net realizes a finite abelian group only if the group has at most two \
         invariant factors; {0} were requested"
    )]
    TooManyInvariantFactors(usize),

    #[error("additive case {0} has no nontrivial finite subgroup")]
    AdditiveCase(&'static str),

    #[error("flexes do not lie in the session field: {0}")]
    FlexesOutsideField(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
