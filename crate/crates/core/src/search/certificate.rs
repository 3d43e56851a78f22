//! Self-contained, re-verifiable claim records.
//!
//! A certificate serializes as UTF-8 JSON with keys in a fixed order
//! (version, kind, parameters, blue, recipe, claims, digest), integers in
//! decimal, `blue` sorted ascending, and no floating-point fields in claims —
//! log-space quantities are stored scaled to integers. The digest is 64-bit
//! FNV-1a over the canonical serialization minus the digest field.
//!
//! Verification never trusts recorded outcomes: it rebuilds the certificate
//! from its declared inputs (kind, parameters, recipe, and for coloring kinds
//! the blue list) and requires the result to match field for field.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{run_report, validate_coloring, w3k_exact, Coloring, ReportOutcome, W3kOutcome};
use crate::apfree::IntegerSet;
use crate::arith::prev_prime;
use crate::construction::{build_a, Construction, ConstructionRecipe, Strategy, Translates};
use crate::error::{Error, Result};

pub const CERTIFICATE_VERSION: u32 = 1;

/// What a certificate claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    /// A blue/red coloring of `[1, n]` checked against blue 3-APs and red
    /// k-APs.
    Coloring,
    /// A 3-AP-free subset of `[1, p²−p]` built from a recipe.
    ApfreeSet,
    /// A full lower-bound report: constructions, unhit counts, union-bound
    /// criteria.
    Threshold,
    /// An exact `w(3,k)` value with its witness coloring.
    ExactW,
}

/// Numeric/boolean/text payload of a claim. Exact values only — anything
/// that would be a float is stored integer-scaled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClaimValue {
    Bool(bool),
    Int(i64),
    Text(String),
}

/// One named, re-checkable observation with its recorded outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub data: BTreeMap<String, ClaimValue>,
}

impl Claim {
    fn new(name: &str, pass: bool) -> Self {
        Claim {
            name: name.to_string(),
            pass,
            data: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: ClaimValue) -> Self {
        self.data.insert(key.to_string(), value);
        self
    }
}

/// Scalar parameters of the certified object; unused fields are omitted from
/// the serialization.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seeds: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ceiling: Option<u64>,
}

/// Serialized form of a construction recipe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeSpec {
    pub strategy: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub base_set: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub translates: Option<Vec<u64>>,
}

impl RecipeSpec {
    fn from_recipe(recipe: &ConstructionRecipe) -> Self {
        let base_set = match &recipe.strategy {
            Strategy::Provided(s) => Some(s.members()),
            _ => None,
        };
        let (seed, translates) = match &recipe.translates {
            Translates::Seed(s) => (Some(*s), None),
            Translates::Explicit(ts) => (None, Some(ts.clone())),
        };
        RecipeSpec {
            strategy: recipe.strategy.label().to_string(),
            base_set,
            seed,
            translates,
        }
    }

    fn to_recipe(&self, p: u64) -> Result<ConstructionRecipe> {
        let strategy = match self.strategy.as_str() {
            "exact-r3" => Strategy::ExactR3,
            "erdos-turan" => Strategy::ErdosTuran,
            "provided" => {
                let members = self.base_set.as_ref().ok_or_else(|| {
                    Error::MalformedCertificate("provided strategy without base_set".into())
                })?;
                Strategy::Provided(IntegerSet::from_members(p / 2, members)?)
            }
            other => {
                return Err(Error::MalformedCertificate(format!(
                    "unknown strategy {other:?}"
                )))
            }
        };
        let translates = match (self.seed, &self.translates) {
            (Some(s), None) => Translates::Seed(s),
            (None, Some(ts)) => Translates::Explicit(ts.clone()),
            _ => {
                return Err(Error::MalformedCertificate(
                    "recipe needs exactly one of seed or translates".into(),
                ))
            }
        };
        Ok(ConstructionRecipe {
            p,
            strategy,
            translates,
        })
    }
}

/// A self-contained claim record. Field order here is the canonical JSON key
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub kind: CertKind,
    pub parameters: Parameters,
    pub blue: Vec<u64>,
    pub recipe: Option<RecipeSpec>,
    pub claims: Vec<Claim>,
    pub digest: u64,
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

#[derive(Serialize)]
struct BodyRef<'a> {
    version: u32,
    kind: CertKind,
    parameters: &'a Parameters,
    blue: &'a [u64],
    recipe: &'a Option<RecipeSpec>,
    claims: &'a [Claim],
}

impl Certificate {
    fn assemble(
        kind: CertKind,
        parameters: Parameters,
        blue: Vec<u64>,
        recipe: Option<RecipeSpec>,
        claims: Vec<Claim>,
    ) -> Self {
        let mut cert = Certificate {
            version: CERTIFICATE_VERSION,
            kind,
            parameters,
            blue,
            recipe,
            claims,
            digest: 0,
        };
        cert.digest = cert.compute_digest();
        cert
    }

    /// FNV-1a over the canonical serialization of everything but the digest.
    pub fn compute_digest(&self) -> u64 {
        let body = BodyRef {
            version: self.version,
            kind: self.kind,
            parameters: &self.parameters,
            blue: &self.blue,
            recipe: &self.recipe,
            claims: &self.claims,
        };
        let json = serde_json::to_string(&body).expect("certificate body serializes");
        fnv1a64(json.as_bytes())
    }

    pub fn digest_ok(&self) -> bool {
        self.digest == self.compute_digest()
    }

    /// Canonical compact JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

fn scaled_log(value: f64) -> i64 {
    // 1e-9 resolution in nats; exact integers in the serialization.
    (value * 1e9).round() as i64
}

fn int(v: u64) -> ClaimValue {
    ClaimValue::Int(v as i64)
}

/// Certificate for one verified construction (kind `apfree-set`).
pub fn construction_certificate(construction: &Construction) -> Certificate {
    let p = construction.recipe.p;
    let m = construction.base_size();
    let n = p * (p - 1);
    let cardinality = construction.set.len();
    let claims = vec![
        Claim::new("three-ap-free", construction.verified_ap_free),
        Claim::new("cardinality-is-m-squared", cardinality == m * m)
            .with("cardinality", int(cardinality))
            .with("m", int(m)),
        Claim::new("within-ambient", true).with("n", int(n)),
    ];
    Certificate::assemble(
        CertKind::ApfreeSet,
        Parameters {
            p: Some(p),
            n: Some(n),
            m: Some(m),
            ..Parameters::default()
        },
        construction.set.members(),
        Some(RecipeSpec::from_recipe(&construction.recipe)),
        claims,
    )
}

/// Certificate for a lower-bound report (kind `threshold`).
pub(crate) fn report_certificate(outcome: &ReportOutcome) -> Result<Certificate> {
    let p = outcome.p;
    let n = p * (p - 1);
    let m = outcome.base.len();
    let criteria = &outcome.criteria;
    let proved = criteria.paper || outcome.min_unhit == 0;
    let claims = vec![
        Claim::new("explicit-bound", true)
            .with("bound", int(n))
            .with("k", int(outcome.k))
            .with("p", int(p)),
        Claim::new("base-set-three-ap-free", true).with("m", int(m)),
        Claim::new("all-constructions-three-ap-free", true).with("seeds", int(outcome.seeds)),
        Claim::new("paper-criterion", criteria.paper)
            .with("log-miss-1e9", ClaimValue::Int(scaled_log(criteria.log_miss)))
            .with(
                "log-threshold-1e9",
                ClaimValue::Int(scaled_log(criteria.log_threshold)),
            ),
        Claim::new("expectation-criterion", criteria.expectation).with(
            "log-expected-unhit-1e9",
            ClaimValue::Int(scaled_log(criteria.log_expected_unhit)),
        ),
        Claim::new("zero-unhit-coloring", outcome.min_unhit == 0)
            .with("min-unhit", int(outcome.min_unhit))
            .with("best-seed-offset", int(outcome.best_offset)),
        Claim::new("proved", proved).with("bound", int(n)),
    ];
    Ok(Certificate::assemble(
        CertKind::Threshold,
        Parameters {
            p: Some(p),
            k: Some(outcome.k),
            n: Some(n),
            m: Some(m),
            seeds: Some(outcome.seeds),
            ..Parameters::default()
        },
        outcome.best.set.members(),
        Some(RecipeSpec {
            strategy: "provided".to_string(),
            base_set: Some(outcome.base.members()),
            seed: Some(outcome.seed),
            translates: None,
        }),
        claims,
    ))
}

/// Certificate for a validated coloring (kind `coloring`).
pub fn coloring_certificate(coloring: &Coloring, k: u64) -> Result<Certificate> {
    let report = validate_coloring(coloring, k)?;
    let claims = vec![
        Claim::new("blue-three-ap-free", report.blue_violation.is_none()),
        Claim::new("red-kap-free", report.red_violations.is_empty())
            .with("violations", int(report.red_violations.len() as u64)),
        Claim::new("valid-coloring", report.valid),
    ];
    Ok(Certificate::assemble(
        CertKind::Coloring,
        Parameters {
            k: Some(k),
            n: Some(coloring.ambient()),
            ..Parameters::default()
        },
        coloring.blue().members(),
        None,
        claims,
    ))
}

/// Certificate for an exact `w(3,k)` computation (kind `exact-w`).
pub fn exact_w_certificate(k: u64, ceiling: u64, w: u64, witness: &Coloring) -> Result<Certificate> {
    let witness_report = validate_coloring(witness, k)?;
    let claims = vec![
        Claim::new("witness-coloring-valid", witness_report.valid).with("n", int(w - 1)),
        Claim::new("no-valid-coloring-at-w", true).with("w", int(w)),
    ];
    Ok(Certificate::assemble(
        CertKind::ExactW,
        Parameters {
            k: Some(k),
            w: Some(w),
            ceiling: Some(ceiling),
            ..Parameters::default()
        },
        witness.blue().members(),
        None,
        claims,
    ))
}

/// Result of re-verifying a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub digest_ok: bool,
    /// Field-level differences between the stored certificate and the one
    /// rebuilt from its inputs.
    pub mismatches: Vec<String>,
    pub accepted: bool,
}

fn require(field: Option<u64>, name: &str) -> Result<u64> {
    field.ok_or_else(|| Error::MalformedCertificate(format!("missing parameter {name:?}")))
}

fn rebuild(cert: &Certificate) -> Result<Certificate> {
    match cert.kind {
        CertKind::ApfreeSet => {
            let p = require(cert.parameters.p, "p")?;
            let spec = cert
                .recipe
                .as_ref()
                .ok_or_else(|| Error::MalformedCertificate("missing recipe".into()))?;
            let construction = build_a(&spec.to_recipe(p)?)?;
            Ok(construction_certificate(&construction))
        }
        CertKind::Threshold => {
            let k = require(cert.parameters.k, "k")?;
            let seeds = require(cert.parameters.seeds, "seeds")?;
            let spec = cert
                .recipe
                .as_ref()
                .ok_or_else(|| Error::MalformedCertificate("missing recipe".into()))?;
            let seed = spec.seed.ok_or_else(|| {
                Error::MalformedCertificate("report recipe needs a seed".into())
            })?;
            let members = spec.base_set.as_ref().ok_or_else(|| {
                Error::MalformedCertificate("report recipe needs a base set".into())
            })?;
            let p = prev_prime(k)?;
            let base = IntegerSet::from_members(p / 2, members)?;
            let outcome = run_report(k, p, &base, seeds, seed)?;
            report_certificate(&outcome)
        }
        CertKind::Coloring => {
            let n = require(cert.parameters.n, "n")?;
            let k = require(cert.parameters.k, "k")?;
            let coloring = Coloring::new(IntegerSet::from_members(n, &cert.blue)?);
            coloring_certificate(&coloring, k)
        }
        CertKind::ExactW => {
            let k = require(cert.parameters.k, "k")?;
            let ceiling = require(cert.parameters.ceiling, "ceiling")?;
            match w3k_exact(k, ceiling)? {
                W3kOutcome::Proved { w, witness } => exact_w_certificate(k, ceiling, w, &witness),
                W3kOutcome::Undetermined { .. } => Err(Error::MalformedCertificate(
                    "search is undetermined at the recorded ceiling".into(),
                )),
            }
        }
    }
}

/// Re-verifies a certificate from scratch: checks the digest, rebuilds the
/// certificate from its declared inputs, and compares every field. Recorded
/// claim outcomes are never trusted — a claim recorded as failed must fail
/// again for the certificate to be accepted.
pub fn verify_certificate(cert: &Certificate) -> Result<VerificationReport> {
    let digest_ok = cert.digest_ok();
    let rebuilt = rebuild(cert)?;
    let mut mismatches = Vec::new();
    if cert.version != rebuilt.version {
        mismatches.push(format!(
            "version: recorded {}, rebuilt {}",
            cert.version, rebuilt.version
        ));
    }
    if cert.parameters != rebuilt.parameters {
        mismatches.push("parameters differ from rebuilt values".to_string());
    }
    if cert.blue != rebuilt.blue {
        mismatches.push("blue member list differs from rebuilt set".to_string());
    }
    if cert.recipe != rebuilt.recipe {
        mismatches.push("recipe echo differs".to_string());
    }
    if cert.claims != rebuilt.claims {
        for (stored, fresh) in cert.claims.iter().zip(rebuilt.claims.iter()) {
            if stored != fresh {
                mismatches.push(format!("claim {:?} does not reproduce", stored.name));
            }
        }
        if cert.claims.len() != rebuilt.claims.len() {
            mismatches.push("claim list length differs".to_string());
        }
    }
    let accepted = digest_ok && mismatches.is_empty();
    Ok(VerificationReport {
        digest_ok,
        mismatches,
        accepted,
    })
}
