//! The product-group engine: unions of translated coset slices, the
//! randomized pullback to `[p²−p]`, and the probability arithmetic that
//! certifies when the construction beats every p-AP.
//!
//! Everything that claims 3-AP-freeness is re-verified by brute force before
//! it is returned; the algebra is never trusted on its own.

use crate::apfree::{
    erdos_turan_count, erdos_turan_set, find_3ap_int, find_3ap_mod, freiman_pushforward, r3_exact,
    ApDescriptor, Ambient, IntegerSet, ResidueSet,
};
use crate::arith::{crt_combine, is_prime, CrtPair, Modulus, SplitMix64};
use crate::error::{Error, Result};
use crate::real::Real;

/// Subset of the direct product `ℤ/m₁ℤ × ℤ/m₂ℤ`, members sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSet {
    mod1: Modulus,
    mod2: Modulus,
    members: Vec<(u64, u64)>,
}

impl ProductSet {
    pub fn moduli(&self) -> (Modulus, Modulus) {
        (self.mod1, self.mod2)
    }

    pub fn members(&self) -> &[(u64, u64)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Witness 3-AP of `A` with respect to the product group, found by exhaustive
/// enumeration of every `(g, d)` pair with `d ≠ 0`. Intended as an oracle:
/// cost is `|G|²` membership triples.
pub fn find_3ap_product(a: &ProductSet) -> Option<((u64, u64), (u64, u64))> {
    let (m1, m2) = (a.mod1.get(), a.mod2.get());
    let mut grid = vec![false; (m1 * m2) as usize];
    for &(x, y) in &a.members {
        grid[(x * m2 + y) as usize] = true;
    }
    let at = |x: u64, y: u64| grid[((x % m1) * m2 + y % m2) as usize];
    for g1 in 0..m1 {
        for g2 in 0..m2 {
            for d1 in 0..m1 {
                for d2 in 0..m2 {
                    if d1 == 0 && d2 == 0 {
                        continue;
                    }
                    if at(g1, g2)
                        && at(g1 + d1, g2 + d2)
                        && at(g1 + 2 * d1, g2 + 2 * d2)
                    {
                        return Some(((g1, g2), (d1, d2)));
                    }
                }
            }
        }
    }
    None
}

/// Union of coset slices `{(xᵢ, y) : y ∈ Tᵢ}` over the members `x₁ < … < x_m`
/// of `base`, which is 3-AP-free in the product group whenever `base` and
/// every `Tᵢ` are 3-AP-free in their factors. Both preconditions are checked.
pub fn product_union(base: &ResidueSet, slices: &[ResidueSet]) -> Result<ProductSet> {
    let xs = base.members();
    if xs.is_empty() {
        return Err(Error::BaseSizeOutOfRange {
            m: 0,
            max: base.modulus().get() - 1,
        });
    }
    if slices.len() != xs.len() {
        return Err(Error::SliceCountMismatch {
            expected: xs.len(),
            got: slices.len(),
        });
    }
    let mod2 = slices[0].modulus();
    for t in slices {
        if t.modulus() != mod2 {
            return Err(Error::MixedModuli(mod2.get(), t.modulus().get()));
        }
    }
    if let Some(w) = find_3ap_mod(base) {
        return Err(Error::NotApFree {
            role: "product base",
            witness: w,
        });
    }
    for t in slices {
        if let Some(w) = find_3ap_mod(t) {
            return Err(Error::NotApFree {
                role: "translate slice",
                witness: w,
            });
        }
    }
    let mut members = Vec::with_capacity(slices.iter().map(|t| t.len() as usize).sum());
    for (&x, t) in xs.iter().zip(slices) {
        for y in t.members() {
            members.push((x, y));
        }
    }
    Ok(ProductSet {
        mod1: base.modulus(),
        mod2,
        members,
    })
}

/// How the 3-AP-free base set `S ⊆ [⌊p/2⌋]` is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// Maximum 3-AP-free set from the exact branch-and-bound solver.
    ExactR3,
    /// Ternary digits-{1,2} family. Only 3-AP-free up to `N = 6`, so builds
    /// with `p ≥ 15` fail their precondition check; the counting side
    /// ([`threshold_scan`]) works at any scale.
    ErdosTuran,
    /// Caller-supplied set; validated against `[⌊p/2⌋]` and re-checked.
    Provided(IntegerSet),
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::ExactR3 => "exact-r3",
            Strategy::ErdosTuran => "erdos-turan",
            Strategy::Provided(_) => "provided",
        }
    }
}

/// Source of the random coset translates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Translates {
    /// Draw `m` values uniformly from `[0, p−1)` with the pinned generator.
    Seed(u64),
    /// Explicit translate vector, one residue mod `p−1` per base member.
    Explicit(Vec<u64>),
}

/// Everything needed to rebuild a construction deterministically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionRecipe {
    pub p: u64,
    pub strategy: Strategy,
    pub translates: Translates,
}

/// A verified construction: the pulled-back set, its product form, and the
/// inputs that produced it.
#[derive(Debug, Clone)]
pub struct Construction {
    pub recipe: ConstructionRecipe,
    /// The 3-AP-free set `A ⊆ [1, p²−p]`.
    pub set: IntegerSet,
    /// Image of `A` in `ℤ/pℤ × ℤ/(p−1)ℤ`.
    pub product_form: ProductSet,
    /// The resolved base set `S`.
    pub base: IntegerSet,
    /// Translates actually used, one per base member in increasing order.
    pub translates: Vec<u64>,
    /// Result of the final brute-force scan; `true` on every successful build.
    pub verified_ap_free: bool,
}

impl Construction {
    /// `m`, the base-set size; the construction has exactly `m²` elements.
    pub fn base_size(&self) -> u64 {
        self.base.len()
    }
}

fn require_construction_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall { got: p, min: 5 });
    }
    Ok(())
}

/// Resolves the base set for `p` and verifies it is 3-AP-free in `[⌊p/2⌋]`.
fn resolve_base_set(p: u64, strategy: &Strategy) -> Result<IntegerSet> {
    let half = p / 2;
    let base = match strategy {
        Strategy::ExactR3 => r3_exact(half)?.1,
        Strategy::ErdosTuran => erdos_turan_set(half),
        Strategy::Provided(s) => {
            if s.ambient() > half {
                return Err(Error::BaseAmbientTooLarge {
                    ambient: s.ambient(),
                    max: half,
                });
            }
            s.clone()
        }
    };
    if base.is_empty() {
        return Err(Error::BaseSizeOutOfRange { m: 0, max: half });
    }
    if let Some(witness) = find_3ap_int(&base) {
        return Err(Error::NotApFree {
            role: "base set",
            witness,
        });
    }
    Ok(base)
}

/// Builds the random 3-AP-free set `A ⊆ [p²−p]` from a recipe.
///
/// Pipeline: resolve `S`, reduce it into both cyclic factors, translate one
/// slice per base member, union the slices in the product group, and pull the
/// result back through the CRT bijection (residue 0 maps to `p²−p` so that
/// members land in `[1, p²−p]`). The returned set is always re-scanned for
/// 3-APs; a hit aborts the build, since it would mean the algebraic pipeline
/// itself is broken.
pub fn build_a(recipe: &ConstructionRecipe) -> Result<Construction> {
    let p = recipe.p;
    require_construction_prime(p)?;
    let base = resolve_base_set(p, &recipe.strategy)?;
    let m = base.len();

    let mod1 = Modulus::new(p)?;
    let mod2 = Modulus::new(p - 1)?;
    // Odd p ≥ 5 gives p−1 ≥ 2⌊p/2⌋−1, so both reductions are sound.
    let s1 = freiman_pushforward(&base, mod1, false)?;
    let s2 = freiman_pushforward(&base, mod2, false)?;

    let translates: Vec<u64> = match &recipe.translates {
        Translates::Seed(seed) => {
            let mut rng = SplitMix64::new(*seed);
            (0..m).map(|_| rng.uniform_below(p - 1)).collect()
        }
        Translates::Explicit(ts) => {
            if ts.len() as u64 != m {
                return Err(Error::SliceCountMismatch {
                    expected: m as usize,
                    got: ts.len(),
                });
            }
            for &t in ts {
                if t >= p - 1 {
                    return Err(Error::TranslateOutOfRange {
                        value: t,
                        modulus: p - 1,
                    });
                }
            }
            ts.clone()
        }
    };

    let slices: Vec<ResidueSet> = translates.iter().map(|&t| s2.translate(t)).collect();
    let product_form = product_union(&s1, &slices)?;

    let nm = p * (p - 1);
    let mut set = IntegerSet::new(nm);
    for &(a, b) in product_form.members() {
        let r = crt_combine(CrtPair::new(a, b, mod1, mod2)?);
        set.insert(if r == 0 { nm } else { r })?;
    }
    debug_assert_eq!(set.len(), m * m);

    if let Some(witness) = find_3ap_int(&set) {
        return Err(Error::SelfCheckFailed { witness });
    }

    Ok(Construction {
        recipe: recipe.clone(),
        set,
        product_form,
        base,
        translates,
        verified_ap_free: true,
    })
}

fn checked_ambient(p: u64) -> Result<u64> {
    p.checked_mul(p - 1).ok_or(Error::CeilingExceeded {
        n: p,
        ceiling: u32::MAX as u64,
    })
}

fn validate_probability_domain(p: u64, m: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 3 {
        return Err(Error::PrimeTooSmall { got: p, min: 3 });
    }
    if m == 0 || m > p - 1 {
        return Err(Error::BaseSizeOutOfRange { m, max: p - 1 });
    }
    Ok(())
}

/// `ln (1 − m/(p−1))^m`, evaluated in log space. `−∞` when `m = p−1`.
pub fn log_miss_probability<F: Real>(p: u64, m: u64) -> Result<F> {
    validate_probability_domain(p, m)?;
    if m == p - 1 {
        return Ok(F::neg_infinity());
    }
    let ratio = F::from_count(m) / F::from_count(p - 1);
    Ok(F::from_count(m) * (-ratio).ln_1p())
}

/// Probability `(1 − m/(p−1))^m` that a fixed p-AP misses the construction
/// built from a 3-AP-free base of size `m`.
pub fn miss_probability<F: Real>(p: u64, m: u64) -> Result<F> {
    log_miss_probability(p, m).map(F::exp)
}

/// Exact number of k-APs (positive difference) contained in `[1, N]`:
/// `Σ_{d≥1} max(0, N − (k−1)d)`.
pub fn count_kaps(n: u64, k: u64) -> Result<u128> {
    if k < 3 {
        return Err(Error::ApLengthTooShort(k));
    }
    if n < k {
        return Ok(0);
    }
    let d = ((n - 1) / (k - 1)) as u128;
    Ok(n as u128 * d - (k - 1) as u128 * d * (d + 1) / 2)
}

/// Outcome of the union-bound certification at `(p, m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Criteria<F> {
    pub p: u64,
    pub m: u64,
    /// `(1 − m/(p−1))^m ≤ p⁻³`.
    pub paper: bool,
    /// `(1 − m/(p−1))^m · count_kaps(p²−p, p) < 1` — the sharper test.
    pub expectation: bool,
    pub log_miss: F,
    /// `−3 ln p`.
    pub log_threshold: F,
    /// `ln count_kaps(p²−p, p) + log_miss`.
    pub log_expected_unhit: F,
}

/// Evaluates both certification criteria in log space.
///
/// The paper criterion implies the expectation criterion whenever
/// `count_kaps(p²−p, p) ≤ p³`, which holds for every prime (the count equals
/// `p(p−1)²/2`).
pub fn union_bound_certifies<F: Real>(p: u64, m: u64) -> Result<Criteria<F>> {
    let log_miss = log_miss_probability::<F>(p, m)?;
    let three = F::from_count(3);
    let log_threshold = -(three * F::from_count(p).ln());
    let count = count_kaps(checked_ambient(p)?, p)?;
    let log_count = F::from_u128(count)
        .expect("AP count representable as a float")
        .ln();
    let log_expected_unhit = log_miss + log_count;
    Ok(Criteria {
        p,
        m,
        paper: log_miss <= log_threshold,
        expectation: log_expected_unhit < F::zero(),
        log_miss,
        log_threshold,
        log_expected_unhit,
    })
}

/// Evaluates both criteria for each prime in `[max(from, 5), to]`, with `m`
/// computed per the strategy: the exact solver (subject to its ceiling) or
/// the digit-DP count of the ternary family.
pub fn threshold_scan<F: Real>(
    strategy: &Strategy,
    from: u64,
    to: u64,
) -> Result<Vec<Criteria<F>>> {
    if matches!(strategy, Strategy::Provided(_)) {
        return Err(Error::UnsupportedStrategy(
            "threshold scan needs a counting strategy (exact-r3 or erdos-turan)",
        ));
    }
    let mut rows = Vec::new();
    for p in from.max(5)..=to {
        if !is_prime(p) {
            continue;
        }
        let m = match strategy {
            Strategy::ExactR3 => r3_exact(p / 2)?.0,
            Strategy::ErdosTuran => erdos_turan_count(p / 2),
            Strategy::Provided(_) => unreachable!(),
        };
        rows.push(union_bound_certifies(p, m)?);
    }
    Ok(rows)
}

/// Monte Carlo estimate of the miss probability against its analytic value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarlo<F> {
    pub empirical: F,
    pub analytic: F,
    /// Binomial standard error `sqrt(q(1−q)/trials)` at the analytic `q`.
    pub std_error: F,
    pub misses: u64,
    pub trials: u64,
}

/// Samples `trials` independent constructions (trial `i` is seeded with
/// `seed + i` through the pinned generator) and counts how often the given
/// p-AP is missed entirely.
///
/// Each trial only draws the translates and tests the AP against the product
/// form; the expensive pullback is not materialized. The intersection test is
/// exact: a p-AP inside `[p²−p]` meets each base coset in exactly one point.
pub fn estimate_miss_probability<F: Real>(
    p: u64,
    strategy: &Strategy,
    ap: &ApDescriptor,
    trials: u64,
    seed: u64,
) -> Result<MonteCarlo<F>> {
    require_construction_prime(p)?;
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let nm = checked_ambient(p)?;
    if ap.ambient != Ambient::Integers {
        return Err(Error::InvalidAp(
            "expected a progression over the integers".into(),
        ));
    }
    if ap.len != p {
        return Err(Error::InvalidAp(format!(
            "progression length {} must equal p = {p}",
            ap.len
        )));
    }
    if ap.diff == 0 {
        return Err(Error::InvalidAp("difference must be nonzero".into()));
    }
    let last = ap.start as u128 + (p as u128 - 1) * ap.diff as u128;
    if ap.start == 0 || last > nm as u128 {
        return Err(Error::InvalidAp(format!(
            "terms must lie in [1, {nm}], got start {} diff {}",
            ap.start, ap.diff
        )));
    }

    let base = resolve_base_set(p, strategy)?;
    let m = base.len();
    let mod2 = Modulus::new(p - 1)?;
    let s2 = freiman_pushforward(&base, mod2, false)?;

    // A p-AP in [p²−p] has 1 ≤ diff ≤ p−1, so diff is a unit mod p and the
    // AP meets the coset of each base residue x exactly once, at index
    // j = (x − start)·diff⁻¹ mod p. Record that term's residue mod p−1.
    let diff_inv = mod_inverse_prime(ap.diff % p, p);
    let coset_b: Vec<u64> = base
        .members()
        .iter()
        .map(|&x| {
            let j = mul_mod(((x % p) + p - ap.start % p) % p, diff_inv, p);
            let term = ap.start as u128 + j as u128 * ap.diff as u128;
            (term % (p as u128 - 1)) as u64
        })
        .collect();

    let analytic = miss_probability::<F>(p, m)?;
    let pm1 = p - 1;
    let mut misses = 0u64;
    for trial in 0..trials {
        let mut rng = SplitMix64::new(seed.wrapping_add(trial));
        let mut missed = true;
        for &b in &coset_b {
            let t = rng.uniform_below(pm1);
            if s2.contains((b + pm1 - t) % pm1) {
                missed = false;
                // Keep drawing so the translate stream matches build_a.
            }
        }
        if missed {
            misses += 1;
        }
    }

    let trials_f = F::from_count(trials);
    let empirical = F::from_count(misses) / trials_f;
    let std_error = (analytic * (F::one() - analytic) / trials_f).sqrt();
    Ok(MonteCarlo {
        empirical,
        analytic,
        std_error,
        misses,
        trials,
    })
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a⁻¹ mod p` for prime `p` via Fermat.
fn mod_inverse_prime(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}
