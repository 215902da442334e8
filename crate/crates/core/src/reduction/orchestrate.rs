//! Case analysis tying the campaigns together. The plain form bounds either
//! `n - n1` or `m - m1`; each one-gap form then bounds the other gap; the
//! last form, with both gaps in range, bounds `n` itself.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::campaigns::{run_campaign, CampaignReport, CampaignSpec};
use super::lemma::tau_for;
use crate::contfrac::{convergents, Convergent};
use crate::error::{Error, Result};
use crate::linforms::envelopes::MIN_GAP;
use crate::linforms::{envelope, Base, BoundChain, Campaign, Sign};
use crate::realnum::PrecisionPolicy;

/// Convergent index the first three campaigns start from.
pub const BASE_INDEX: usize = 98;
/// The last campaign starts one convergent deeper.
pub const FINAL_INDEX: usize = 99;
/// Partial quotients expanded per ratio; leaves room for fallbacks.
pub const CONVERGENT_COUNT: usize = 130;

pub struct ReductionContext {
    pub policy: PrecisionPolicy,
    /// The chain's `N`, used only in the `q > 6M` selection rule.
    pub hypothesis_m: BigInt,
    /// Sound bound on the multiplier `n` (or `n1`) for the positive sign.
    pub n_bound: BigInt,
    /// Sound bound on the multiplier `m` (or `m1`) for the negative sign.
    pub m_bound: BigInt,
    pub convergents_pos: Vec<Convergent>,
    pub convergents_neg: Vec<Convergent>,
}

fn expand(sign: Sign) -> Result<Vec<Convergent>> {
    let pq = tau_for(sign).expand(CONVERGENT_COUNT, PrecisionPolicy::starting_at(512))?;
    if pq.len() < CONVERGENT_COUNT {
        return Err(Error::PrecisionExhausted { stage: "continued fraction".into(), bits: pq.precision_bits });
    }
    Ok(convergents(&pq))
}

impl ReductionContext {
    pub fn new(chain: &BoundChain, policy: PrecisionPolicy) -> Result<Self> {
        Ok(ReductionContext {
            policy,
            hypothesis_m: chain.n_absolute.clone(),
            n_bound: chain.n_absolute_strict.clone(),
            m_bound: chain.m_absolute_strict.clone(),
            convergents_pos: expand(Sign::Pos)?,
            convergents_neg: expand(Sign::Neg)?,
        })
    }

    pub fn multiplier_bound(&self, sign: Sign) -> &BigInt {
        match sign {
            Sign::Pos => &self.n_bound,
            Sign::Neg => &self.m_bound,
        }
    }

    pub fn convergents(&self, sign: Sign) -> &[Convergent] {
        match sign {
            Sign::Pos => &self.convergents_pos,
            Sign::Neg => &self.convergents_neg,
        }
    }

    pub fn spec(
        &self,
        campaign: Campaign,
        sign: Sign,
        base: Base,
        k_range: Option<(u64, u64)>,
        l_range: Option<(u64, u64)>,
    ) -> Result<CampaignSpec> {
        let a = envelope(campaign, sign, base, self.policy.start_bits.max(128))?.used;
        Ok(CampaignSpec {
            campaign,
            sign,
            base,
            k_range,
            l_range,
            a,
            hypothesis_m: self.hypothesis_m.clone(),
            m_bound: self.multiplier_bound(sign).clone(),
            base_index: if campaign == Campaign::Gamma3 { FINAL_INDEX } else { BASE_INDEX },
        })
    }

    pub fn run(&self, spec: &CampaignSpec) -> Result<CampaignReport> {
        run_campaign(spec, self.convergents(spec.sign), self.policy)
    }

    /// Both signs of one campaign over the same ranges.
    pub fn run_both(
        &self,
        campaign: Campaign,
        base: Base,
        k: Option<(u64, u64)>,
        l: Option<(u64, u64)>,
    ) -> Result<Vec<CampaignReport>> {
        [Sign::Pos, Sign::Neg].into_iter().map(|s| self.run(&self.spec(campaign, s, base, k, l)?)).collect()
    }
}

/// Gaps are below this: the worst bound, or [`MIN_GAP`] when smaller gaps
/// were never covered by the inequality in the first place.
fn gap_limit(reports: &[CampaignReport]) -> u64 {
    reports.iter().map(|r| r.max_k_bound).max().unwrap_or(0).max(MIN_GAP as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSummary {
    pub precision_bits: u32,
    #[serde(with = "crate::serde_util::bigint")]
    pub hypothesis_m: BigInt,
    #[serde(with = "crate::serde_util::bigint")]
    pub n_multiplier_bound: BigInt,
    #[serde(with = "crate::serde_util::bigint")]
    pub m_multiplier_bound: BigInt,
    pub gamma: Vec<CampaignReport>,
    pub gamma1: Vec<CampaignReport>,
    pub gamma2: Vec<CampaignReport>,
    pub gamma3: Vec<CampaignReport>,
    /// `n - n1` is below this in every case.
    pub n_gap_limit: u64,
    /// `m - m1` is below this in every case.
    pub m_gap_limit: u64,
    /// `n` is below this.
    pub final_n_bound: u64,
}

impl ReductionSummary {
    pub fn reports(&self) -> impl Iterator<Item = &CampaignReport> {
        self.gamma.iter().chain(&self.gamma1).chain(&self.gamma2).chain(&self.gamma3)
    }

    pub fn without_entries(mut self) -> Self {
        for r in [&mut self.gamma, &mut self.gamma1, &mut self.gamma2, &mut self.gamma3] {
            for rep in r.iter_mut() {
                rep.entries.clear();
            }
        }
        self
    }
}

/// Ranges the one-gap campaigns need, from the plain-form reports.
pub struct Stage1 {
    pub gamma: Vec<CampaignReport>,
    /// `n - n1` below this when the delta-side bound applies.
    pub k_delta: u64,
    /// `m - m1` below this when the alpha-side bound applies.
    pub l_alpha: u64,
}

pub fn stage1(ctx: &ReductionContext) -> Result<Stage1> {
    let mut gamma = Vec::new();
    for sign in [Sign::Pos, Sign::Neg] {
        for base in [Base::Delta, Base::Alpha] {
            gamma.push(ctx.run(&ctx.spec(Campaign::Gamma, sign, base, None, None)?)?);
        }
    }
    let side = |b: Base| gamma.iter().filter(|r| r.base == b).cloned().collect::<Vec<_>>();
    let k_delta = gap_limit(&side(Base::Delta));
    let l_alpha = gap_limit(&side(Base::Alpha));
    Ok(Stage1 { gamma, k_delta, l_alpha })
}

pub struct Stage2 {
    pub gamma1: Vec<CampaignReport>,
    pub gamma2: Vec<CampaignReport>,
    pub n_gap_limit: u64,
    pub m_gap_limit: u64,
}

pub fn stage2(ctx: &ReductionContext, s1: &Stage1) -> Result<Stage2> {
    // n - n1 small: the first one-gap form bounds m - m1, and vice versa
    let gamma1 = ctx.run_both(Campaign::Gamma1, Base::Alpha, Some((1, s1.k_delta - 1)), None)?;
    let gamma2 = ctx.run_both(Campaign::Gamma2, Base::Delta, Some((1, s1.l_alpha - 1)), None)?;
    Ok(Stage2 {
        n_gap_limit: s1.k_delta.max(gap_limit(&gamma2)),
        m_gap_limit: s1.l_alpha.max(gap_limit(&gamma1)),
        gamma1,
        gamma2,
    })
}

pub fn run_reduction(chain: &BoundChain, policy: PrecisionPolicy) -> Result<ReductionSummary> {
    let ctx = ReductionContext::new(chain, policy)?;
    let s1 = stage1(&ctx)?;
    let s2 = stage2(&ctx, &s1)?;
    let gamma3 =
        ctx.run_both(Campaign::Gamma3, Base::Delta, Some((1, s2.n_gap_limit - 1)), Some((1, s2.m_gap_limit - 1)))?;
    let final_n_bound = gamma3.iter().map(|r| r.max_k_bound).max().unwrap_or(0);
    Ok(ReductionSummary {
        precision_bits: policy.start_bits,
        hypothesis_m: ctx.hypothesis_m.clone(),
        n_multiplier_bound: ctx.n_bound.clone(),
        m_multiplier_bound: ctx.m_bound.clone(),
        gamma: s1.gamma,
        gamma1: s2.gamma1,
        gamma2: s2.gamma2,
        gamma3,
        n_gap_limit: s2.n_gap_limit,
        m_gap_limit: s2.m_gap_limit,
        final_n_bound,
    })
}
