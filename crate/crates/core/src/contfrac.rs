//! Certified continued-fraction expansion and exact convergents.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realnum::{constants_at, CertReal, PrecisionPolicy};

/// Quotients at or above this size raise the irrationality-suspicion flag.
pub const SUSPICIOUS_QUOTIENT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialQuotients {
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub quotients: Vec<BigInt>,
    pub source: String,
    /// Fewer quotients than requested: the precision cap was reached.
    pub truncated: bool,
    /// The enclosed value is an exact rational and its expansion ended.
    pub terminated: bool,
    /// Indices of quotients at or above [`SUSPICIOUS_QUOTIENT`].
    pub suspicious: Vec<usize>,
    /// Precision of the enclosure the quotients were read from.
    pub precision_bits: u32,
}

impl PartialQuotients {
    /// Quotients given directly, e.g. for tests and fixtures.
    pub fn from_quotients(source: &str, quotients: Vec<BigInt>) -> Self {
        let suspicious = flag_suspicious(&quotients);
        PartialQuotients {
            quotients,
            source: source.to_string(),
            truncated: false,
            terminated: false,
            suspicious,
            precision_bits: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }
}

fn flag_suspicious(a: &[BigInt]) -> Vec<usize> {
    let limit = BigInt::from(SUSPICIOUS_QUOTIENT);
    a.iter().enumerate().skip(1).filter(|(_, q)| **q >= limit).map(|(i, _)| i).collect()
}

fn floor(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Walk Euclid's algorithm on a rational interval `[lo, hi]`, emitting a
/// quotient only while both endpoints share it. Returns the quotients and
/// whether the walk ended on an exact integer (point input only).
fn euclid_walk(mut lo: BigRational, mut hi: BigRational, count: usize) -> (Vec<BigInt>, bool) {
    let mut out = Vec::new();
    while out.len() < count {
        let a = floor(&lo);
        if a != floor(&hi) {
            break;
        }
        let (flo, fhi) = (&lo - BigRational::from(a.clone()), &hi - BigRational::from(a.clone()));
        out.push(a);
        if fhi.is_zero() {
            // hi is the integer a, so lo = hi: an exact rational has run out
            return (out, true);
        }
        if flo.is_zero() {
            // remainder reaches 1/0; the next quotient is unbounded
            break;
        }
        // x -> 1 / (x - a) reverses the order
        lo = fhi.recip();
        hi = flo.recip();
    }
    (out, false)
}

fn to_rational(x: &crate::realnum::Dyadic) -> BigRational {
    let (n, d) = x.to_ratio();
    BigRational::new(n, d)
}

/// Expand the real enclosed by `source(bits)` into `count` certified
/// quotients, doubling the precision until enough quotients agree.
pub fn expand(
    label: &str,
    source: impl Fn(u32) -> Result<CertReal>,
    count: usize,
    policy: PrecisionPolicy,
) -> Result<PartialQuotients> {
    let mut bits = policy.start_bits;
    loop {
        let x = source(bits)?;
        let (quotients, terminated) = euclid_walk(to_rational(x.lo()), to_rational(x.hi()), count);
        let done = terminated || quotients.len() >= count;
        if done || bits >= policy.max_bits {
            let suspicious = flag_suspicious(&quotients);
            return Ok(PartialQuotients {
                truncated: !done,
                terminated,
                suspicious,
                quotients,
                source: label.to_string(),
                precision_bits: bits,
            });
        }
        bits = (bits * 2).min(policy.max_bits);
    }
}

/// Exact expansion of the rational `num / den` (a point interval).
pub fn expand_rational(num: &BigInt, den: &BigInt, count: usize) -> Result<PartialQuotients> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let x = BigRational::new(num.clone(), den.clone());
    let (quotients, terminated) = euclid_walk(x.clone(), x, count);
    let mut pq = PartialQuotients::from_quotients(&format!("{num}/{den}"), quotients);
    pq.terminated = terminated;
    Ok(pq)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub index: usize,
    #[serde(with = "crate::serde_util::bigint")]
    pub p: BigInt,
    #[serde(with = "crate::serde_util::bigint")]
    pub q: BigInt,
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} {}/{}", self.index, self.p, self.q)
    }
}

/// Exact convergents `p_i / q_i` from the recurrences with seeds
/// `p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1`.
pub fn convergents(pq: &PartialQuotients) -> Vec<Convergent> {
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(pq.quotients.len());
    for (i, a) in pq.quotients.iter().enumerate() {
        let p = a * &p1 + &p2;
        let q = a * &q1 + &q2;
        out.push(Convergent { index: i, p: p.clone(), q: q.clone() });
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
    out
}

/// The convergent of least index whose denominator exceeds `threshold`.
pub fn first_convergent_exceeding(convs: &[Convergent], threshold: &BigInt) -> Result<Convergent> {
    convs
        .iter()
        .find(|c| &c.q > threshold)
        .cloned()
        .ok_or_else(|| Error::NotReached { threshold: threshold.to_string() })
}

/// Index of the convergent equal to `p / q`, if present.
pub fn locate(convs: &[Convergent], p: &BigInt, q: &BigInt) -> Option<usize> {
    convs.iter().position(|c| &c.p == p && &c.q == q)
}

/// The two ratios of logarithms used in the reduction step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tau {
    /// `log delta / log alpha`, used when the linear form is positive.
    DeltaOverAlpha,
    /// `log alpha / log delta`, the reciprocal, for the negative case.
    AlphaOverDelta,
}

impl Tau {
    pub fn name(self) -> &'static str {
        match self {
            Tau::DeltaOverAlpha => "delta-over-alpha",
            Tau::AlphaOverDelta => "alpha-over-delta",
        }
    }

    pub fn enclosure(self, bits: u32) -> Result<CertReal> {
        let c = constants_at(bits)?;
        match self {
            Tau::DeltaOverAlpha => c.log_delta.checked_div(&c.log_alpha),
            Tau::AlphaOverDelta => c.log_alpha.checked_div(&c.log_delta),
        }
    }

    pub fn expand(self, count: usize, policy: PrecisionPolicy) -> Result<PartialQuotients> {
        expand(self.name(), |b| self.enclosure(b), count, policy)
    }

    /// The published convergent used in the reduction for this ratio.
    pub fn reference_convergent(self) -> (BigInt, BigInt) {
        let (p, q) = match self {
            Tau::DeltaOverAlpha => (
                "78093067704223831799032754534503501859635391435517",
                "45634243076387457097046528084208490147594968308975",
            ),
            Tau::AlphaOverDelta => (
                "1000540334879242934726141761162813294034885977722",
                "1712206861451396832387596141129961335575127483549",
            ),
        };
        (p.parse().expect("literal"), q.parse().expect("literal"))
    }

    /// Index the published convergent is labelled with.
    pub const REFERENCE_INDEX: usize = 98;
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tau {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta-over-alpha" => Ok(Tau::DeltaOverAlpha),
            "alpha-over-delta" => Ok(Tau::AlphaOverDelta),
            _ => Err(Error::InvalidInput(format!("unknown tau {s:?}"))),
        }
    }
}

/// Certified `|tau q - p|` for a convergent, as an interval.
pub fn approximation_error(tau: &CertReal, c: &Convergent) -> CertReal {
    let p = tau.precision();
    (tau * &CertReal::from_int(c.q.clone(), p) - CertReal::from_int(c.p.clone(), p)).abs()
}

/// `|p_i q_{i+1} - p_{i+1} q_i|` for every adjacent pair; all ones when sound.
pub fn determinants(convs: &[Convergent]) -> Vec<BigInt> {
    convs.windows(2).map(|w| (&w[0].p * &w[1].q - &w[1].p * &w[0].q).abs()).collect()
}

/// Rough decimal size of a big integer, for reports.
pub fn digits(x: &BigInt) -> usize {
    x.abs().to_string().len()
}
