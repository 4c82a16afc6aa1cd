use thiserror::Error;

/// Crate-wide error type. Variants name the contract that was violated rather
/// than the call site; every fallible operation documents which variants it
/// can produce.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("polynomial is reducible or has wrong degree")]
    ReduciblePolynomial,
    #[error("not a subfield: GF({sub}) inside GF({big})")]
    NotASubfield { sub: u64, big: u64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("element does not belong to the group")]
    ElementNotInGroup,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("matrix does not preserve the form")]
    FormMismatch,
    #[error("matrix is not a similarity of the form")]
    NotASimilarity,
    #[error("map does not stabilize the permutation domain")]
    DomainNotStable,
    #[error("construction requires odd characteristic")]
    EvenCharacteristic,
    #[error("construction requires even characteristic")]
    OddCharacteristic,
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("element does not normalize the group")]
    NotNormalizing,
    #[error("element is not in the underlying set of the table")]
    NotInUnderlyingSet,
    #[error("identity element is not a valid input here")]
    IdentityInput,
    #[error("subgroup is not self-normalizing")]
    NotSelfNormalizing,
    #[error("empty overgroup list")]
    EmptyOvergroupList,
    #[error("bound hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("operation requires a linear (not semilinear) element")]
    NotLinear,
    #[error("search exhausted without finding the required structure")]
    SearchExhausted,
    #[error("order validation failed: expected {expected}, computed {computed}")]
    OrderMismatch { expected: u128, computed: u128 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown specifier: {0}")]
    UnknownSpec(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
