//! Exact Padovan and Fibonacci terms, Binet-formula enclosures, and the
//! exponential growth sandwiches.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::realnum::{constants_at, AlgebraicConstants, CertReal, Dyadic, PrecisionPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    /// `P(k+3) = P(k+1) + P(k)`, `P(0) = P(1) = P(2) = 1`.
    Padovan,
    /// `F(k+2) = F(k+1) + F(k)`, `F(0) = 0`, `F(1) = 1`.
    Fibonacci,
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceKind::Padovan => f.write_str("padovan"),
            SequenceKind::Fibonacci => f.write_str("fibonacci"),
        }
    }
}

impl SequenceKind {
    fn seeds(self) -> Vec<BigInt> {
        match self {
            SequenceKind::Padovan => vec![BigInt::one(), BigInt::one(), BigInt::one()],
            SequenceKind::Fibonacci => vec![BigInt::zero(), BigInt::one()],
        }
    }

    fn next_term(self, t: &[BigInt]) -> BigInt {
        let n = t.len();
        match self {
            SequenceKind::Padovan => &t[n - 2] + &t[n - 3],
            SequenceKind::Fibonacci => &t[n - 1] + &t[n - 2],
        }
    }
}

/// Grow-only table of exact terms of one sequence.
#[derive(Clone, Debug)]
pub struct TermCache {
    kind: SequenceKind,
    terms: Vec<BigInt>,
}

impl TermCache {
    pub fn new(kind: SequenceKind) -> Self {
        TermCache { kind, terms: kind.seeds() }
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Extend the table so that index `k` is present.
    pub fn ensure(&mut self, k: usize) {
        while self.terms.len() <= k {
            let t = self.kind.next_term(&self.terms);
            self.terms.push(t);
        }
    }

    pub fn get(&mut self, k: usize) -> &BigInt {
        self.ensure(k);
        &self.terms[k]
    }

    /// Cached terms with index `< len()`.
    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    /// Recompute the first `upto + 1` terms from the seeds and compare.
    pub fn audit(&self, upto: usize) -> bool {
        let mut fresh = TermCache::new(self.kind);
        fresh.ensure(upto);
        let n = (upto + 1).min(self.terms.len());
        fresh.terms[..n] == self.terms[..n]
    }
}

fn shared_cache(kind: SequenceKind) -> &'static RwLock<TermCache> {
    static PADOVAN: OnceLock<RwLock<TermCache>> = OnceLock::new();
    static FIBONACCI: OnceLock<RwLock<TermCache>> = OnceLock::new();
    match kind {
        SequenceKind::Padovan => PADOVAN.get_or_init(|| RwLock::new(TermCache::new(kind))),
        SequenceKind::Fibonacci => FIBONACCI.get_or_init(|| RwLock::new(TermCache::new(kind))),
    }
}

/// Exact term `k` of the sequence.
pub fn term(kind: SequenceKind, k: usize) -> BigInt {
    {
        let cache = shared_cache(kind).read().unwrap_or_else(|e| e.into_inner());
        if k < cache.len() {
            return cache.terms[k].clone();
        }
    }
    let mut cache = shared_cache(kind).write().unwrap_or_else(|e| e.into_inner());
    cache.get(k).clone()
}

/// Exact terms `0..=k_max`.
pub fn terms_upto(kind: SequenceKind, k_max: usize) -> Vec<BigInt> {
    term(kind, k_max);
    let cache = shared_cache(kind).read().unwrap_or_else(|e| e.into_inner());
    cache.terms[..=k_max].to_vec()
}

/// Binet enclosure from precomputed constants.
///
/// Padovan: `a alpha^k + (b beta^k + c gamma^k)`, where the conjugate pair is
/// a real number of modulus at most `2 |b| |beta|^k`.
/// Fibonacci: `(delta^k - eta^k) / sqrt5`.
pub fn binet_enclosure_with(c: &AlgebraicConstants, kind: SequenceKind, k: u64) -> Result<CertReal> {
    match kind {
        SequenceKind::Padovan => {
            let main = &c.a_coeff * &c.alpha.pow(k);
            let tail = (&c.b_c_modulus * &c.beta_gamma_modulus.pow(k)).mul_pow2(1);
            let tail_hi = tail.hi().clone();
            let spread = CertReal::new(tail_hi.neg(), tail_hi, c.precision);
            Ok(&main + &spread)
        }
        SequenceKind::Fibonacci => (&c.delta.pow(k) - &c.eta.pow(k)).checked_div(&c.sqrt5),
    }
}

/// Certified Binet enclosure of term `k`, starting at `precision` bits and
/// escalating until the interval is narrower than 1.
pub fn binet_enclosure(kind: SequenceKind, k: u64, precision: u32) -> Result<CertReal> {
    PrecisionPolicy::starting_at(precision.max(64)).escalate("binet enclosure", |bits| {
        let c = constants_at(bits)?;
        let enc = binet_enclosure_with(&c, kind, k)?;
        Ok((enc.width() < Dyadic::one()).then_some(enc))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthSide {
    Lower,
    Upper,
}

/// A failure of `root^(k-2) <= term(k) <= root^(k-1)` at index `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthViolation {
    pub kind: SequenceKind,
    pub k: usize,
    pub side: GrowthSide,
}

/// Check the growth sandwich for every `k` in `k_min..=k_max` with certified
/// comparisons. Padovan needs `k_min >= 4`, Fibonacci `k_min >= 1`.
pub fn growth_bounds_report(
    kind: SequenceKind,
    k_min: usize,
    k_max: usize,
    policy: PrecisionPolicy,
) -> Result<Vec<GrowthViolation>> {
    let floor = match kind {
        SequenceKind::Padovan => 4,
        SequenceKind::Fibonacci => 1,
    };
    if k_min < floor {
        return Err(crate::Error::InvalidInput(format!(
            "{kind} growth bounds hold from k = {floor}, got k_min = {k_min}"
        )));
    }
    if k_max < k_min {
        return Ok(Vec::new());
    }
    let terms = terms_upto(kind, k_max);
    policy.escalate("growth bounds", |bits| {
        let c = constants_at(bits)?;
        let root = match kind {
            SequenceKind::Padovan => &c.alpha,
            SequenceKind::Fibonacci => &c.delta,
        };
        // powers are taken afresh so that root^0 stays the exact point 1
        // (F(1) = F(2) = 1 sit on the bounds)
        let mut out = Vec::new();
        for (k, t) in terms.iter().enumerate().take(k_max + 1).skip(k_min) {
            let lower = root.powi(k as i64 - 2)?;
            let upper = root.powi(k as i64 - 1)?;
            let exact = CertReal::from_int(t.clone(), bits);
            let low_ok = lower.certainly_le(&exact);
            let low_bad = exact.certainly_lt(&lower);
            let up_ok = exact.certainly_le(&upper);
            let up_bad = upper.certainly_lt(&exact);
            if !(low_ok || low_bad) || !(up_ok || up_bad) {
                return Ok(None);
            }
            if low_bad {
                out.push(GrowthViolation { kind, k, side: GrowthSide::Lower });
            }
            if up_bad {
                out.push(GrowthViolation { kind, k, side: GrowthSide::Upper });
            }
        }
        Ok(Some(out))
    })
}
