use serde::{Deserialize, Serialize};

use super::matveev::FormLabel;
use crate::error::{Error, Result};
use crate::realnum::{constants_at, CertReal, PrecisionPolicy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonvanishingReport {
    pub n: u64,
    pub n1: u64,
    pub m: u64,
    pub m1: u64,
    /// `Some(true)`: certified nonzero. `None`: undecided at the cap.
    pub forms: Vec<(FormLabel, Option<bool>)>,
    pub precision_bits: u32,
}

impl NonvanishingReport {
    pub fn all_nonzero(&self) -> bool {
        self.forms.iter().all(|(_, v)| *v == Some(true))
    }
}

fn forms(n: u64, n1: u64, m: u64, m1: u64, prec: u32) -> Result<[CertReal; 4]> {
    let c = constants_at(prec)?;
    let one = CertReal::one(prec);
    let pw = |x: &CertReal, k: i64| x.powi(k);
    let s5a = &c.sqrt5_a;
    let dk = &pw(&c.delta, (n - n1) as i64)? - &one;
    let al = &pw(&c.alpha, (m - m1) as i64)? - &one;
    let lam = (&pw(&c.delta, n as i64)? * &pw(&c.alpha, -(m as i64))?).checked_div(s5a)? - &one;
    let lam1 = (&dk * &(&pw(&c.delta, n1 as i64)? * &pw(&c.alpha, -(m as i64))?)).checked_div(s5a)? - &one;
    let lam2 = (&pw(&c.delta, n as i64)? * &pw(&c.alpha, -(m1 as i64))?).checked_div(&(s5a * &al))? - &one;
    let lam3 = (&dk * &(&pw(&c.delta, n1 as i64)? * &pw(&c.alpha, -(m1 as i64))?)).checked_div(&(s5a * &al))? - &one;
    Ok([lam, lam1, lam2, lam3])
}

/// Certify numerically that the four linear forms do not vanish at the given
/// indices. Needs `n > n1` and `m > m1`.
pub fn nonvanishing_spot_check(
    n: u64,
    n1: u64,
    m: u64,
    m1: u64,
    policy: PrecisionPolicy,
) -> Result<NonvanishingReport> {
    if n <= n1 || m <= m1 {
        return Err(Error::InvalidInput(format!("need n > n1 and m > m1, got ({n}, {n1}, {m}, {m1})")));
    }
    let labels = [FormLabel::Lambda, FormLabel::Lambda1, FormLabel::Lambda2, FormLabel::Lambda3];
    let mut bits = policy.start_bits;
    loop {
        let vals = forms(n, n1, m, m1, bits)?;
        let decided: Vec<Option<bool>> = vals.iter().map(|v| (!v.contains_zero()).then_some(true)).collect();
        if decided.iter().all(Option::is_some) || bits >= policy.max_bits {
            return Ok(NonvanishingReport {
                n,
                n1,
                m,
                m1,
                forms: labels.into_iter().zip(decided).collect(),
                precision_bits: bits,
            });
        }
        bits = (bits * 2).min(policy.max_bits);
    }
}
