use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not squarefree")]
    NotSquarefree(i64),

    #[error("gcd({a}, {n}) > 1, symbol is not a unit")]
    NonCoprime { a: i64, n: u64 },

    #[error("invalid modulus {0}: expected an odd integer >= 3")]
    InvalidModulus(u64),

    #[error("{a} is not a quadratic residue mod {p}")]
    NotQuadraticResidue { a: i64, p: u64 },

    #[error("prime {p} is not congruent to {residue} mod {modulus}")]
    BadPrimeClass { p: u64, residue: u64, modulus: u64 },

    #[error("form ({a}, {b}, {c}) is not positive definite")]
    IndefiniteForm { a: i64, b: i64, c: i64 },

    #[error("forms have different discriminants ({0} vs {1})")]
    MismatchedDiscriminant(i64, i64),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("|D| = {d} exceeds the enumeration bound {bound}")]
    EnumerationBoundExceeded { d: u64, bound: u64 },

    #[error("no representation of {p} found within bound {bound}")]
    NoRepresentationInBound { p: u64, bound: u64 },

    #[error("no solution for (p, q) = ({p}, {q}) within bound {bound}")]
    NoSolutionInBound { p: u64, q: u64, bound: u64 },

    #[error("precondition violated: {0}")]
    PrecondViolated(String),

    #[error("prime factor {prime} of {d} is outside the counted congruence classes")]
    HypothesisNotMet { d: u64, prime: u64 },

    #[error("{0} belongs to no family with an exact prediction")]
    UnsupportedFamily(u64),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}
