//! Constants `A` in the envelopes `|Gamma| < A B^(-gap)` fed to the reduction.
//!
//! Every constant is rederived from the Binet tails; the value used is the
//! larger of the derivation and the published figure, so it is an upper
//! bound either way.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realnum::{constants_at, CertReal};

/// Bound assumed for the sum of the small Binet terms.
pub const TAIL_BOUND: &str = "1.9";
/// Gaps below this are left to the direct search.
pub const MIN_GAP: i64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Campaign {
    Gamma,
    Gamma1,
    Gamma2,
    Gamma3,
}

impl Campaign {
    pub const ALL: [Campaign; 4] = [Campaign::Gamma, Campaign::Gamma1, Campaign::Gamma2, Campaign::Gamma3];

    pub fn name(self) -> &'static str {
        match self {
            Campaign::Gamma => "gamma",
            Campaign::Gamma1 => "gamma1",
            Campaign::Gamma2 => "gamma2",
            Campaign::Gamma3 => "gamma3",
        }
    }

    /// Bases the campaign is run with.
    pub fn bases(self) -> &'static [Base] {
        match self {
            Campaign::Gamma => &[Base::Delta, Base::Alpha],
            Campaign::Gamma1 => &[Base::Alpha],
            Campaign::Gamma2 | Campaign::Gamma3 => &[Base::Delta],
        }
    }
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Campaign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Campaign::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown campaign {s:?}")))
    }
}

/// Sign of the linear form; it decides which ratio of logarithms is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn name(self) -> &'static str {
        match self {
            Sign::Pos => "pos",
            Sign::Neg => "neg",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pos" => Ok(Sign::Pos),
            "neg" => Ok(Sign::Neg),
            _ => Err(Error::InvalidInput(format!("unknown sign {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Alpha,
    Delta,
}

impl Base {
    pub fn name(self) -> &'static str {
        match self {
            Base::Alpha => "alpha",
            Base::Delta => "delta",
        }
    }
}

/// Intermediate constants of the envelope derivations.
#[derive(Clone, Debug)]
pub struct Envelopes {
    pub precision: u32,
    /// Exact supremum of the small Binet terms over `n1, m1 >= 1`.
    pub tail_sup: CertReal,
    pub t: CertReal,
    /// `1/sqrt5 + a + T`
    pub k: CertReal,
    /// `1 + T/(a alpha)`
    pub k1: CertReal,
    /// `(1/sqrt5 + T) delta^4 / (a alpha (1 - 1/alpha))`
    pub k2: CertReal,
    /// `T / (a alpha (1 - 1/alpha))`
    pub k3: CertReal,
}

impl Envelopes {
    pub fn compute(prec: u32) -> Result<Self> {
        let c = constants_at(prec)?;
        let one = CertReal::one(prec);
        let t = CertReal::from_decimal(TAIL_BOUND, prec)?;
        let eta = c.eta.abs();
        let beta = &c.beta_gamma_modulus;
        // |eta|^n/sqrt5 + |eta|^n1/sqrt5 + 2|b|(|beta|^m + |beta|^m1), largest at n1 = m1 = 1, n = m = 2
        let tail_sup =
            (&eta + &eta.square()).checked_div(&c.sqrt5)? + (&c.b_c_modulus * &(beta + &beta.square())).mul_int(2);
        let inv_sqrt5 = c.sqrt5.recip()?;
        let k = &(&inv_sqrt5 + &c.a_coeff) + &t;
        let a_alpha = &c.a_coeff * &c.alpha;
        let k1 = &one + &t.checked_div(&a_alpha)?;
        let shrink = &a_alpha * &(&one - &c.alpha.recip()?);
        let delta4 = c.delta.pow(4);
        let k2 = (&(&inv_sqrt5 + &t) * &delta4).checked_div(&shrink)?;
        let k3 = t.checked_div(&shrink)?;
        Ok(Envelopes { precision: prec, tail_sup, t, k, k1, k2, k3 })
    }

    /// Check the side conditions the envelopes rest on: the tail bound, and
    /// `|Lambda| < 1/2` once the relevant gap is at least [`MIN_GAP`] (so that
    /// `|log(1 + Lambda)| < 2 |Lambda|`).
    pub fn validate(&self) -> Result<()> {
        let p = self.precision;
        let c = constants_at(p)?;
        if !self.tail_sup.certainly_lt(&self.t) {
            return Err(Error::Mismatch(format!("Binet tail {} not below {TAIL_BOUND}", self.tail_sup)));
        }
        let half = CertReal::from_ratio(1, 2, p);
        let d20 = c.delta.powi(-MIN_GAP)?;
        let a20 = c.alpha.powi(-MIN_GAP)?;
        let delta4 = c.delta.pow(4);
        let a_alpha = &c.a_coeff * &c.alpha;
        let checks = [
            ("lambda, delta side", (&self.k * &delta4).checked_div(&a_alpha)? * &d20),
            ("lambda, alpha side", self.k.checked_div(&c.a_coeff)? * &a20),
            ("lambda1", &self.k1 * &a20),
            ("lambda2", &self.k2 * &d20),
            ("lambda3", &self.k3 * &c.delta.powi(4 - 300)?),
        ];
        for (name, v) in checks {
            if !v.certainly_lt(&half) {
                return Err(Error::Mismatch(format!("{name}: envelope {v} not below 1/2")));
            }
        }
        Ok(())
    }
}

/// One `A` constant.
#[derive(Clone, Debug)]
pub struct EnvelopeConstant {
    pub campaign: Campaign,
    pub sign: Sign,
    pub base: Base,
    pub first_principles: CertReal,
    pub reference: Option<&'static str>,
    /// `max(first_principles, reference)` as a point at the upper end.
    pub used: CertReal,
}

/// Published `A` values; the negative-sign forms of the later campaigns
/// were not printed.
pub fn reference_a(campaign: Campaign, sign: Sign, base: Base) -> Option<&'static str> {
    use {Base::*, Campaign::*, Sign::*};
    match (campaign, sign, base) {
        (Gamma, Pos, Delta) => Some("170"),
        (Gamma, Pos, Alpha) => Some("20"),
        (Gamma, Neg, Delta) => Some("98"),
        (Gamma, Neg, Alpha) => Some("12"),
        (Gamma1, Pos, Alpha) => Some("26"),
        (Gamma2, Pos, Delta) => Some("830"),
        (Gamma3, Pos, Delta) => Some("390"),
        _ => None,
    }
}

pub fn envelope(campaign: Campaign, sign: Sign, base: Base, prec: u32) -> Result<EnvelopeConstant> {
    if !campaign.bases().contains(&base) {
        return Err(Error::InvalidInput(format!("{campaign} is not run with base {}", base.name())));
    }
    let c = constants_at(prec)?;
    let e = Envelopes::compute(prec)?;
    let log = match sign {
        Sign::Pos => &c.log_alpha,
        Sign::Neg => &c.log_delta,
    };
    let delta4 = c.delta.pow(4);
    let a_alpha = &c.a_coeff * &c.alpha;
    let num = match (campaign, base) {
        (Campaign::Gamma, Base::Delta) => (&e.k * &delta4).checked_div(&a_alpha)?,
        (Campaign::Gamma, Base::Alpha) => e.k.checked_div(&c.a_coeff)?,
        (Campaign::Gamma1, _) => e.k1.clone(),
        (Campaign::Gamma2, _) => e.k2.clone(),
        (Campaign::Gamma3, _) => &e.k3 * &delta4,
    };
    let fp = num.mul_int(2).checked_div(log)?;
    let reference = reference_a(campaign, sign, base);
    let mut top = fp.hi().clone();
    if let Some(r) = reference {
        top = top.max(CertReal::from_decimal(r, prec)?.hi().clone());
    }
    Ok(EnvelopeConstant { campaign, sign, base, first_principles: fp, reference, used: CertReal::point(top, prec) })
}
