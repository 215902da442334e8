//! The end-to-end run: constants, bound chain, reduction, search, and a
//! JSON certificate whose digest ignores timings.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linforms::chain::N_FLOOR;
use crate::linforms::{compute_bound_chain, BoundChain, ChainRow};
use crate::realnum::{constants_at, PrecisionPolicy};
use crate::reduction::{run_reduction, ReductionSummary};
use crate::search::{verify_theorem, VerificationReport};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsDigest {
    pub precision_bits: u32,
    pub alpha: String,
    pub delta: String,
    pub log_alpha: String,
    pub log_delta: String,
}

impl ConstantsDigest {
    pub fn at(bits: u32) -> Result<Self> {
        let c = constants_at(bits)?;
        let s = |x: &crate::realnum::CertReal| x.to_sci_string(30);
        Ok(ConstantsDigest {
            precision_bits: bits,
            alpha: s(&c.alpha),
            delta: s(&c.delta),
            log_alpha: s(&c.log_alpha),
            log_delta: s(&c.log_delta),
        })
    }
}

/// A chain row in plain strings, so the certificate reads back.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub key: String,
    pub description: String,
    pub value: String,
    pub first_principles: Option<String>,
    pub reference: Option<String>,
    pub deviation: Option<f64>,
}

impl From<&ChainRow> for BoundRow {
    fn from(r: &ChainRow) -> Self {
        BoundRow {
            key: r.key.clone(),
            description: r.description.clone(),
            value: r.value.to_sci_string(8),
            first_principles: r.first_principles.as_ref().map(|x| x.to_sci_string(8)),
            reference: r.reference.clone(),
            deviation: r.deviation(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub pass: bool,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineCertificate {
    pub version: u32,
    pub precision: PolicyRecord,
    pub constants: ConstantsDigest,
    pub bound_chain: Vec<BoundRow>,
    #[serde(with = "crate::serde_util::bigint")]
    pub absolute_bound: BigInt,
    pub reduction: ReductionSummary,
    pub final_n_bound: u64,
    pub search: VerificationReport,
    pub theorem_check: TheoremCheck,
    /// Seconds per stage; excluded from the digest.
    pub timings: BTreeMap<String, f64>,
    pub digest: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyRecord {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl PipelineCertificate {
    /// SHA-256 of the canonical JSON (sorted keys) without `timings` and `digest`.
    pub fn compute_digest(&self) -> Result<String> {
        let mut v = serde_json::to_value(self).map_err(|e| Error::Domain(e.to_string()))?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timings");
            obj.remove("digest");
        }
        let bytes = serde_json::to_vec(&v).map_err(|e| Error::Domain(e.to_string()))?;
        Ok(hex::encode(Sha256::digest(&bytes)))
    }

    pub fn digest_matches(&self) -> Result<bool> {
        Ok(self.compute_digest()? == self.digest)
    }
}

/// A failure together with the stage it happened in.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub error: Error,
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage {} failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

fn timed<T>(
    timings: &mut BTreeMap<String, f64>,
    stage: &'static str,
    f: impl FnOnce() -> Result<T>,
) -> std::result::Result<T, StageError> {
    let t = Instant::now();
    let out = f().map_err(|error| StageError { stage, error })?;
    timings.insert(stage.to_string(), t.elapsed().as_secs_f64());
    Ok(out)
}

/// Run everything. `policy` governs the reduction campaigns; the chain and
/// the constants digest use their own fixed precisions.
pub fn run_pipeline(policy: PrecisionPolicy) -> std::result::Result<PipelineCertificate, StageError> {
    let mut timings = BTreeMap::new();
    let constants = timed(&mut timings, "constants", || ConstantsDigest::at(policy.start_bits.max(128)))?;
    let chain: BoundChain = timed(&mut timings, "bound", || compute_bound_chain(PrecisionPolicy::default()))?;
    let reduction = timed(&mut timings, "reduction", || run_reduction(&chain, policy))?;
    let n_cutoff = N_FLOOR as u64;
    let search = timed(&mut timings, "search", || verify_theorem(n_cutoff))?;

    let final_n_bound = reduction.final_n_bound;
    let theorem_check = if !search.pass {
        TheoremCheck {
            pass: false,
            reason: format!("search disagrees: missing {:?}, unexpected {:?}", search.missing, search.unexpected),
        }
    } else if final_n_bound > n_cutoff {
        TheoremCheck {
            pass: false,
            reason: format!("reduced bound n < {final_n_bound} exceeds search cutoff {n_cutoff}"),
        }
    } else {
        TheoremCheck {
            pass: true,
            reason: format!(
                "n < {final_n_bound} <= {n_cutoff}; search up to n = {n_cutoff}, m = {} matches",
                search.m_cutoff
            ),
        }
    };

    let mut cert = PipelineCertificate {
        version: CERTIFICATE_VERSION,
        precision: PolicyRecord { start_bits: policy.start_bits, max_bits: policy.max_bits },
        constants,
        bound_chain: chain.rows.iter().map(BoundRow::from).collect(),
        absolute_bound: chain.n_absolute.clone(),
        reduction: reduction.without_entries(),
        final_n_bound,
        search,
        theorem_check,
        timings,
        digest: String::new(),
    };
    cert.digest = cert.compute_digest().map_err(|error| StageError { stage: "certificate", error })?;
    Ok(cert)
}
