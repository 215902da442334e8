//! Direct enumeration of `c = P_m - F_n` over finite index boxes.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realnum::{certified_compare, constants_at, CertReal};
use crate::recurrences::{terms_upto, SequenceKind};

/// Smallest indices allowed: `m > 3`, `n > 1`.
pub const M_MIN: u64 = 4;
pub const N_MIN: u64 = 2;

/// The values of `c` with at least two representations.
pub const THEOREM_VALUES: [i64; 35] = [
    -226, -82, -52, -30, -27, -18, -9, -6, -5, -4, -3, -1, 0, 1, 2, 3, 4, 6, 7, 8, 10, 11, 13, 15, 16, 20, 25, 31, 32,
    36, 44, 52, 62, 111, 262,
];

pub type DifferenceMap = BTreeMap<BigInt, Vec<(u64, u64)>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(with = "crate::serde_util::bigint")]
    pub c: BigInt,
    /// Sorted `(m, n)` pairs.
    pub pairs: Vec<(u64, u64)>,
}

impl SolutionRecord {
    /// Pairs as `(m, n), (m, n)`, the way the table prints them.
    pub fn pairs_text(&self) -> String {
        self.pairs.iter().map(|(m, n)| format!("({m}, {n})")).collect::<Vec<_>>().join(", ")
    }
}

fn clamp(r: &RangeInclusive<u64>, min: u64) -> RangeInclusive<u64> {
    (*r.start()).max(min)..=*r.end()
}

/// Every difference over the box, indices below the allowed minimum dropped.
pub fn enumerate(m_range: RangeInclusive<u64>, n_range: RangeInclusive<u64>) -> DifferenceMap {
    let (mr, nr) = (clamp(&m_range, M_MIN), clamp(&n_range, N_MIN));
    if mr.is_empty() || nr.is_empty() {
        return DifferenceMap::new();
    }
    let p = terms_upto(SequenceKind::Padovan, *mr.end() as usize);
    let f = terms_upto(SequenceKind::Fibonacci, *nr.end() as usize);
    let mut map = mr
        .into_par_iter()
        .fold(DifferenceMap::new, |mut acc, m| {
            for n in nr.clone() {
                acc.entry(&p[m as usize] - &f[n as usize]).or_default().push((m, n));
            }
            acc
        })
        .reduce(DifferenceMap::new, |mut a, b| {
            for (c, v) in b {
                a.entry(c).or_default().extend(v);
            }
            a
        });
    for v in map.values_mut() {
        v.sort_unstable();
    }
    map
}

/// Records with at least `min_count` pairs, ascending in `c`.
pub fn multi_represented(map: &DifferenceMap, min_count: usize) -> Vec<SolutionRecord> {
    map.iter()
        .filter(|(_, v)| v.len() >= min_count)
        .map(|(c, v)| SolutionRecord { c: c.clone(), pairs: v.clone() })
        .collect()
}

/// Largest `m` that can pair with `n <= n_max` in a double representation:
/// `alpha^(m-7) <= P_m - P_m1 = F_n - F_n1 <= delta^(n-1)`, so
/// `m <= (n - 1) log delta / log alpha + 7`.
pub fn m_cutoff(n_max: u64) -> Result<u64> {
    let bits = 128;
    let c = constants_at(bits)?;
    let n1 = CertReal::from_int(n_max.saturating_sub(1), bits);
    let bound = &(&n1 * &c.log_delta).checked_div(&c.log_alpha)? + &CertReal::from_int(7, bits);
    u64::try_from(bound.hi().floor()).map_err(|e| Error::Domain(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n_cutoff: u64,
    pub m_cutoff: u64,
    pub records: Vec<SolutionRecord>,
    /// Listed values the search did not produce.
    pub missing: Vec<i64>,
    /// Values the search produced that are not listed.
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub unexpected: Vec<BigInt>,
    pub pass: bool,
}

/// Search the box implied by `n <= n_cutoff` and compare with the listed values.
pub fn verify_theorem(n_cutoff: u64) -> Result<VerificationReport> {
    let m_cut = m_cutoff(n_cutoff)?;
    let records = multi_represented(&enumerate(M_MIN..=m_cut, N_MIN..=n_cutoff), 2);
    let found: Vec<&BigInt> = records.iter().map(|r| &r.c).collect();
    let missing: Vec<i64> = THEOREM_VALUES.iter().copied().filter(|v| !found.contains(&&BigInt::from(*v))).collect();
    let unexpected: Vec<BigInt> =
        found.into_iter().filter(|c| !THEOREM_VALUES.iter().any(|v| &BigInt::from(*v) == *c)).cloned().collect();
    let pass = missing.is_empty() && unexpected.is_empty();
    Ok(VerificationReport { n_cutoff, m_cutoff: m_cut, records, missing, unexpected, pass })
}

/// Both index inequalities for the larger pair `(m, n)` of two
/// representations: `n <= rho (m - 1) + 4` and `m <= (n - 1)/rho + 7`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub m: u64,
    pub n: u64,
    pub n_upper: Option<bool>,
    pub m_upper: Option<bool>,
}

pub fn index_sandwich(record: &SolutionRecord, bits: u32) -> Result<Vec<SandwichCheck>> {
    let c = constants_at(bits)?;
    let rho = c.log_alpha.checked_div(&c.log_delta)?;
    let int = |v: u64| CertReal::from_int(v, bits);
    let holds = |lhs: &CertReal, rhs: &CertReal| certified_compare(lhs, rhs).map(|o| o.is_le());
    record
        .pairs
        .iter()
        .skip(1)
        .map(|&(m, n)| {
            let n_rhs = &(&rho * &int(m - 1)) + &int(4);
            let m_rhs = &int(n - 1).checked_div(&rho)? + &int(7);
            Ok(SandwichCheck { m, n, n_upper: holds(&int(n), &n_rhs), m_upper: holds(&int(m), &m_rhs) })
        })
        .collect()
}
