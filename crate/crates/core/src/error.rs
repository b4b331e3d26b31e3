use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime {0}: need a prime 5 < p < 2^62")]
    InvalidPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot decode field element {0:?}")]
    Decode(String),
    #[error("singular curve")]
    SingularCurve,
    #[error("not supersingular-compatible: {0}")]
    NotSupersingularCompatible(String),
    #[error("2-torsion not rational")]
    TwoTorsionNotRational,
    #[error("{0} is not a root of the 2-division polynomial")]
    NotAKernelPoint(String),
    #[error("degenerate step: {0}")]
    DegenerateStep(String),
    #[error("splitting does not have delta = 0")]
    NotAProductSplitting,
    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),
    #[error("anti-isometry index {0} out of range 1..=6")]
    InvalidAntiIsometry(usize),
    #[error("p = {0} too large for the Hasse-Witt computation; use walk-closure invariance instead")]
    PrimeTooLarge(u64),
    #[error("no default superspecial start for p = {0} (p = 1 mod 4); supply a starting curve")]
    NoDefaultStart(u64),
    #[error("inconsistent witness: {0}")]
    InconsistentWitness(String),
    #[error("path search exceeded max_len = {0}; retry with a larger bound")]
    PathNotFound(usize),
    #[error("parity mismatch (lengths {beta} and {eta}): bottom")]
    Bottom { beta: usize, eta: usize },
    #[error("budget exhausted after {walks} walks and {steps} steps")]
    BudgetExhausted { walks: u64, steps: u64 },
    #[error("census budget exceeded: {0}")]
    CensusBudget(String),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certificate: {0}")]
    Certificate(String),
}
