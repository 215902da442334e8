//! Brute-force check of what a certificate claims: for every multiplier
//! `m <= m_max`, no integer `n` puts `m tau - n + mu` in `(0, A B^(-k_bound))`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::campaigns::CampaignReport;
use super::lemma::{mu_value, tau_for, MuSpec};
use crate::error::{Error, Result};
use crate::linforms::{Base, Campaign, Sign};
use crate::realnum::{constants_at, CertReal};

/// Multipliers checked per certificate.
pub const SCAN_LIMIT: u64 = 10_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub certificates: usize,
    pub multipliers: u64,
    /// `(parameter, m)` where the claim fails.
    pub counterexamples: Vec<(MuSpec, u64)>,
    /// `(parameter, m)` where the working precision could not decide.
    pub undecided: Vec<(MuSpec, u64)>,
}

impl ScanOutcome {
    pub fn clean(&self) -> bool {
        self.counterexamples.is_empty() && self.undecided.is_empty()
    }

    fn merge(mut self, other: ScanOutcome) -> ScanOutcome {
        self.certificates += other.certificates;
        self.multipliers += other.multipliers;
        self.counterexamples.extend(other.counterexamples);
        self.undecided.extend(other.undecided);
        self
    }
}

pub fn mu_for(campaign: Campaign, k: Option<u64>, l: Option<u64>) -> Result<MuSpec> {
    match (campaign, k, l) {
        (Campaign::Gamma, None, None) => Ok(MuSpec::Gamma),
        (Campaign::Gamma1, Some(k), None) => Ok(MuSpec::Gamma1 { k }),
        (Campaign::Gamma2, Some(k), None) => Ok(MuSpec::Gamma2 { k }),
        (Campaign::Gamma3, Some(k), Some(l)) => Ok(MuSpec::Gamma3 { k, l }),
        _ => Err(Error::InvalidInput(format!("{campaign} does not take parameters {k:?}, {l:?}"))),
    }
}

/// Scan one certificate claim at `bits` of working precision.
pub fn scan(
    sign: Sign,
    mu: MuSpec,
    a: &CertReal,
    base: Base,
    k_bound: u64,
    m_max: u64,
    bits: u32,
) -> Result<ScanOutcome> {
    let c = constants_at(bits)?;
    let tau = tau_for(sign).enclosure(bits)?;
    let muv = mu_value(mu, sign, &c)?;
    let b = match base {
        Base::Alpha => &c.alpha,
        Base::Delta => &c.delta,
    };
    let b_pow = b.powi(-i64::try_from(k_bound).map_err(|_| Error::InvalidInput("k_bound too large".into()))?)?;
    let threshold = &a.clone().with_precision(bits) * &b_pow;
    let mut out = ScanOutcome { certificates: 1, ..Default::default() };
    // stepping by tau widens y by one width of tau per step; fine at these sizes
    let mut y = muv;
    for m in 1..=m_max {
        y = &y + &tau;
        let r: BigInt = y.mid().round_half_up();
        let d = &y - &CertReal::from_int(r, bits);
        out.multipliers += 1;
        if threshold.certainly_le(&d) || !d.hi().is_positive() {
            continue;
        }
        if d.is_positive() && d.certainly_lt(&threshold) {
            out.counterexamples.push((mu, m));
        } else {
            out.undecided.push((mu, m));
        }
    }
    Ok(out)
}

/// Scan every `stride`-th entry of a campaign report. `A` is re-read from the
/// report's decimal rendering, which rounds up, so the scan is if anything
/// stricter than the certificate.
pub fn scan_report(report: &CampaignReport, m_max: u64, stride: usize, bits: u32) -> Result<ScanOutcome> {
    if report.entries.is_empty() {
        return Err(Error::InvalidInput(format!("{}: report carries no entries", report.label)));
    }
    let a = CertReal::from_decimal(&report.a, bits)?;
    report
        .entries
        .par_iter()
        .step_by(stride.max(1))
        .map(|e| {
            let mu = mu_for(report.campaign, e.k, e.l)?;
            scan(report.sign, mu, &a, report.base, e.k_bound, m_max, bits)
        })
        .try_reduce(ScanOutcome::default, |x, y| Ok(x.merge(y)))
}
