//! Exact and randomized machinery for two-color van der Waerden lower bounds.
//!
//! The crate is organized around one pipeline: build a 3-AP-free base set
//! inside `[⌊p/2⌋]`, transport it into the cyclic factors of
//! `ℤ/(p²−p)ℤ ≅ ℤ/pℤ × ℤ/(p−1)ℤ`, take a union of randomly translated coset
//! slices, and pull the result back to a 3-AP-free subset of `[p²−p]`. Around
//! that sit independent verifiers: exhaustive AP detectors, an exact `r₃`
//! solver, an exact small-case `w(3,k)` search, Monte Carlo estimation of the
//! miss probability `(1−m/(p−1))^m`, and self-contained JSON certificates that
//! can be re-checked without trusting the producer.
//!
//! Modules:
//! - [`arith`] — primality, prime search, the CRT split/combine pair, and the
//!   pinned splitmix64 generator behind every "random" choice.
//! - [`apfree`] — integer and residue sets, AP detectors, ternary digit
//!   families, exact `r₃`, and the modulus-doubling pushforward.
//! - [`construction`] — the product-group construction, probability and
//!   union-bound arithmetic, threshold scans, and Monte Carlo estimation.
//! - [`search`] — coloring validation, unhit-AP enumeration, exact `w(3,k)`,
//!   lower-bound reports, and certificate emission/verification.
//!
//! Probability arithmetic is generic over the floating scalar via [`Real`];
//! the concrete aliases below fix `f64` as the working type.

pub mod apfree;
pub mod arith;
pub mod construction;
mod error;
mod real;
pub mod search;

pub use error::{Error, Result};
pub use real::Real;

pub use apfree::{
    erdos_turan_count, erdos_turan_set, find_3ap_int, find_3ap_mod, find_kap_int,
    freiman_pushforward, r3_exact, zero_one_ternary_set, ApDescriptor, Ambient, IntegerSet,
    ResidueSet, R3_CEILING,
};
pub use arith::{crt_combine, crt_split, is_prime, prev_prime, CrtPair, Modulus, SplitMix64};
pub use construction::{
    build_a, count_kaps, ConstructionRecipe, ProductSet, Strategy, Translates,
};
pub use search::{
    certificate::{
        coloring_certificate, construction_certificate, exact_w_certificate, verify_certificate,
        CertKind, Certificate, Claim, ClaimValue, VerificationReport,
    },
    lower_bound_report, unhit_kaps, validate_coloring, w3k_exact, Coloring, ValidityReport,
    W3kOutcome, REPORT_MAX_K, W3K_MAX_K,
};

/// Default floating scalar for probability evaluation.
pub type Scalar = f64;
/// [`construction::Criteria`] evaluated at the default scalar.
pub type Criteria = construction::Criteria<Scalar>;
/// [`construction::MonteCarlo`] evaluated at the default scalar.
pub type MonteCarlo = construction::MonteCarlo<Scalar>;

/// Convenience wrappers pinning the generic probability operations to `f64`.
pub fn miss_probability(p: u64, m: u64) -> Result<Scalar> {
    construction::miss_probability(p, m)
}

/// See [`construction::union_bound_certifies`].
pub fn union_bound_certifies(p: u64, m: u64) -> Result<Criteria> {
    construction::union_bound_certifies(p, m)
}

/// See [`construction::threshold_scan`].
pub fn threshold_scan(strategy: &Strategy, from: u64, to: u64) -> Result<Vec<Criteria>> {
    construction::threshold_scan(strategy, from, to)
}

/// See [`construction::estimate_miss_probability`].
pub fn estimate_miss_probability(
    p: u64,
    strategy: &Strategy,
    ap: &ApDescriptor,
    trials: u64,
    seed: u64,
) -> Result<MonteCarlo> {
    construction::estimate_miss_probability(p, strategy, ap, trials, seed)
}
