use crate::apfree::ApDescriptor;

/// Unified error type for the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u64, u64),
    #[error("value {value} is not a residue modulo {modulus}")]
    ResidueOutOfRange { value: u64, modulus: u64 },
    #[error("prev_prime requires k >= 2, got {0}")]
    NoPrimeBelow(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {got} is below the minimum {min} for this operation")]
    PrimeTooSmall { got: u64, min: u64 },

    #[error("set member {value} outside ambient range [1, {ambient}]")]
    MemberOutOfRange { value: u64, ambient: u64 },
    #[error("duplicate member {0}")]
    DuplicateMember(u64),
    #[error("AP length must be at least 3, got {0}")]
    ApLengthTooShort(u64),
    #[error("invalid arithmetic progression: {0}")]
    InvalidAp(String),
    #[error("{n} exceeds the supported ceiling {ceiling} for this operation")]
    CeilingExceeded { n: u64, ceiling: u64 },
    #[error("pushforward modulus {m} violates m >= 2n-1 for ambient n = {n}")]
    PushforwardModulusTooSmall { m: u64, n: u64 },
    #[error("{role} must be 3-AP-free but contains the AP starting at {} with difference {}", witness.start, witness.diff)]
    NotApFree {
        role: &'static str,
        witness: ApDescriptor,
    },

    #[error("expected {expected} translate sets, got {got}")]
    SliceCountMismatch { expected: usize, got: usize },
    #[error("mixed moduli in translate sets: {0} vs {1}")]
    MixedModuli(u64, u64),
    #[error("translate {value} is not a residue modulo {modulus}")]
    TranslateOutOfRange { value: u64, modulus: u64 },
    #[error("base-set size m = {m} outside valid range [1, {max}]")]
    BaseSizeOutOfRange { m: u64, max: u64 },
    #[error("base-set ambient {ambient} exceeds the allowed range [1, {max}]")]
    BaseAmbientTooLarge { ambient: u64, max: u64 },
    #[error("strategy not supported here: {0}")]
    UnsupportedStrategy(&'static str),
    #[error(
        "self-check failed: rebuilt set contains the 3-AP (start {}, diff {}); \
         the construction pipeline is unsound for this input",
        witness.start, witness.diff
    )]
    SelfCheckFailed { witness: ApDescriptor },

    #[error("k = {k} outside supported range [{min}, {max}]")]
    KOutOfRange { k: u64, min: u64, max: u64 },
    #[error("trials must be at least 1")]
    NoTrials,

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
