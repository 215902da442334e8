//! The reduction run over a whole family of `mu`: one parameter for the
//! plain form, `k` for the two one-gap forms, `(k, l)` for the last one.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::lemma::{
    decide_epsilon, epsilon_from, log_alpha_pow_minus_one, log_delta_pow_minus_one, m_tau_distance, mu_scale,
    numerator_from, tau_for, EpsilonSign, MuSpec, ReductionProblem,
};
use crate::contfrac::Convergent;
use crate::error::{Error, Result};
use crate::linforms::{Base, Campaign, Sign};
use crate::realnum::{constants_at, CertReal, Dyadic, PrecisionPolicy};

/// How many convergents past the first admissible one a parameter may fall
/// back to before it counts as unresolved.
pub const FALLBACK_DEPTH: usize = 8;

/// Convergents compared per parameter; the one giving the smallest bound
/// `log(q / eps)` wins.
pub const SELECT_DEPTH: usize = 3;

/// Ceiling on any `k_bound`; reaching it means `eps` was absurdly small.
const LADDER_CAP: usize = 100_000;

#[derive(Clone, Debug)]
pub struct CampaignSpec {
    pub campaign: Campaign,
    pub sign: Sign,
    pub base: Base,
    /// Inclusive `k` range; `None` for the plain form.
    pub k_range: Option<(u64, u64)>,
    /// Inclusive `l` range, last form only.
    pub l_range: Option<(u64, u64)>,
    pub a: CertReal,
    pub hypothesis_m: BigInt,
    pub m_bound: BigInt,
    /// Convergent tried first (if its denominator is large enough).
    pub base_index: usize,
}

impl CampaignSpec {
    pub fn label(&self) -> String {
        let s = match self.sign {
            Sign::Pos => '+',
            Sign::Neg => '-',
        };
        format!("{}{s}/{}", self.campaign, self.base.name())
    }

    pub fn parameters(&self) -> Result<Vec<MuSpec>> {
        let bad = |why: &str| Err(Error::InvalidInput(format!("{}: {why}", self.label())));
        let range = |r: Option<(u64, u64)>| -> Result<std::ops::RangeInclusive<u64>> {
            match r {
                Some((lo, hi)) if lo >= 1 && lo <= hi => Ok(lo..=hi),
                Some((lo, hi)) => {
                    Err(Error::InvalidInput(format!("{}: empty or invalid range {lo}..={hi}", self.label())))
                }
                None => Err(Error::InvalidInput(format!("{}: missing range", self.label()))),
            }
        };
        match self.campaign {
            Campaign::Gamma => {
                if self.k_range.is_some() || self.l_range.is_some() {
                    return bad("the plain form takes no parameters");
                }
                Ok(vec![MuSpec::Gamma])
            }
            Campaign::Gamma1 | Campaign::Gamma2 => {
                if self.l_range.is_some() {
                    return bad("only the last form has an l range");
                }
                let r = range(self.k_range)?;
                Ok(match self.campaign {
                    Campaign::Gamma1 => r.map(|k| MuSpec::Gamma1 { k }).collect(),
                    _ => r.map(|k| MuSpec::Gamma2 { k }).collect(),
                })
            }
            Campaign::Gamma3 => {
                let (rk, rl) = (range(self.k_range)?, range(self.l_range)?);
                Ok(rk.flat_map(|k| rl.clone().map(move |l| MuSpec::Gamma3 { k, l })).collect())
            }
        }
    }

    pub fn problem(&self, mu: MuSpec) -> ReductionProblem {
        ReductionProblem {
            label: format!("{} {mu}", self.label()),
            sign: self.sign,
            mu,
            a: self.a.clone(),
            base: self.base,
            hypothesis_m: self.hypothesis_m.clone(),
            m_bound: self.m_bound.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterResult {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<u64>,
    pub convergent_index: usize,
    /// Lower end of the certified `eps`.
    pub epsilon: String,
    pub precision_bits: u32,
    pub k_bound: u64,
}

/// A parameter where `eps <= 0` at the first admissible convergent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fallback {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<u64>,
    pub from_index: usize,
    pub used_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub label: String,
    pub campaign: Campaign,
    pub sign: Sign,
    pub base: Base,
    /// `A`, upper end.
    pub a: String,
    #[serde(with = "crate::serde_util::bigint")]
    pub hypothesis_m: BigInt,
    #[serde(with = "crate::serde_util::bigint")]
    pub m_bound: BigInt,
    pub base_convergent_index: usize,
    pub k_range: Option<(u64, u64)>,
    pub l_range: Option<(u64, u64)>,
    pub points: usize,
    pub precision_bits: u32,
    pub max_precision_bits: u32,
    pub min_epsilon: String,
    pub min_epsilon_at: MuSpec,
    /// No parameter in range admits a solution with `k >= max_k_bound`.
    pub max_k_bound: u64,
    pub worst_parameter: MuSpec,
    pub fallbacks: Vec<Fallback>,
    /// Parameters where `eps > 0` at the first admissible convergent but a
    /// deeper one gave the smaller bound.
    pub deeper_choices: usize,
    /// SHA-256 over the JSON of `entries`, kept when the entries are dropped.
    pub entries_digest: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub entries: Vec<ParameterResult>,
}

impl CampaignReport {
    pub fn without_entries(mut self) -> Self {
        self.entries.clear();
        self
    }
}

struct Prepared {
    index: usize,
    q: CertReal,
    m_tau: Option<CertReal>,
}

struct PointResult {
    mu: MuSpec,
    index: usize,
    eps: CertReal,
    from_index: usize,
    first_failed: bool,
}

/// Decreasing thresholds `A q B^(-K)`, `K = 1, 2, ...`: the least `K` whose
/// threshold lies below `eps` is the bound `ceil(log(A q / eps) / log B)`.
struct Ladder {
    /// Upper ends of the thresholds.
    steps: Vec<Dyadic>,
}

impl Ladder {
    fn build(a: &CertReal, q: &BigInt, b: &CertReal, floor: &Dyadic) -> Result<Ladder> {
        let p = b.precision();
        let b_inv = b.recip()?;
        let mut t = (a * &CertReal::from_int(q.clone(), p)).checked_div(b)?;
        let mut steps = vec![t.hi().clone()];
        while t.hi() > floor {
            if steps.len() >= LADDER_CAP {
                return Err(Error::Domain(format!("eps {floor:?} too small for a sensible bound")));
            }
            t = &t * &b_inv;
            steps.push(t.hi().clone());
        }
        Ok(Ladder { steps })
    }

    fn k_bound(&self, eps_lo: &Dyadic) -> u64 {
        (self.steps.partition_point(|t| t > eps_lo) + 1) as u64
    }
}

fn lookup(table: &[CertReal], i: u64) -> Option<&CertReal> {
    table.get((i - 1) as usize)
}

/// Run the campaign at `policy.start_bits`, escalating single parameters
/// when their nearest integers are ambiguous.
pub fn run_campaign(spec: &CampaignSpec, convs: &[Convergent], policy: PrecisionPolicy) -> Result<CampaignReport> {
    let params = spec.parameters()?;
    let label = spec.label();
    let bits = policy.start_bits;
    let c = constants_at(bits)?;
    let tau = tau_for(spec.sign).enclosure(bits)?;
    let six_m = &spec.hypothesis_m * 6;
    let start = (spec.base_index..convs.len())
        .find(|&i| convs[i].q > six_m)
        .ok_or_else(|| Error::NotReached { threshold: six_m.to_string() })?;
    let end = (start + FALLBACK_DEPTH + 1).min(convs.len());
    let prepared: Vec<Prepared> = convs[start..end]
        .iter()
        .map(|cv| Prepared {
            index: cv.index,
            q: CertReal::from_int(cv.q.clone(), bits),
            m_tau: m_tau_distance(&tau, &cv.q, &spec.m_bound),
        })
        .collect();

    let log_q: Vec<f64> = convs[start..end].iter().map(|cv| cv.q.to_f64().map_or(f64::INFINITY, f64::ln)).collect();

    let k_max = spec.k_range.map_or(0, |r| r.1);
    let l_max = spec.l_range.map_or(0, |r| r.1);
    let (d_len, g_len) = match spec.campaign {
        Campaign::Gamma => (0, 0),
        Campaign::Gamma1 => (k_max, 0),
        Campaign::Gamma2 => (0, k_max),
        Campaign::Gamma3 => (k_max, l_max),
    };
    let d_table: Vec<CertReal> =
        (1..=d_len).into_par_iter().map(|k| log_delta_pow_minus_one(&c, k)).collect::<Result<_>>()?;
    let g_table: Vec<CertReal> =
        (1..=g_len).into_par_iter().map(|l| log_alpha_pow_minus_one(&c, l)).collect::<Result<_>>()?;
    let scale = mu_scale(&c, spec.sign)?;

    let escalated =
        PrecisionPolicy { start_bits: bits.saturating_mul(2).min(policy.max_bits), max_bits: policy.max_bits };

    let points: Vec<PointResult> = params
        .par_iter()
        .map(|&mu| -> Result<PointResult> {
            let (dk, gl) = match mu {
                MuSpec::Gamma1 { k } => (lookup(&d_table, k), None),
                MuSpec::Gamma2 { k } => (None, lookup(&g_table, k)),
                MuSpec::Gamma3 { k, l } => (lookup(&d_table, k), lookup(&g_table, l)),
                _ => (None, None),
            };
            let mu_val = &numerator_from(mu, &c.log_sqrt5_a, dk, gl) * &scale;
            // best of the first SELECT_DEPTH convergents, then plain fallback
            let mut best: Option<(f64, PointResult)> = None;
            let mut first_failed = false;
            for (j, pr) in prepared.iter().enumerate() {
                if j >= SELECT_DEPTH && best.is_some() {
                    break;
                }
                let decided = match &pr.m_tau {
                    Some(mt) => epsilon_from(&mu_val, &pr.q, mt),
                    None => EpsilonSign::Undecided,
                };
                let decided = match decided {
                    EpsilonSign::Undecided => {
                        if policy.max_bits <= bits {
                            return Err(Error::PrecisionExhausted { stage: "reduction".into(), bits });
                        }
                        decide_epsilon(&spec.problem(mu), &convs[start + j], escalated)?
                    }
                    d => d,
                };
                if j == 0 {
                    first_failed = !matches!(decided, EpsilonSign::Positive(_));
                }
                if let EpsilonSign::Positive(eps) = decided {
                    let score = log_q[j] - eps.lo().to_f64().ln();
                    if best.as_ref().is_none_or(|(s, _)| score < *s) {
                        best = Some((score, PointResult { mu, index: pr.index, eps, from_index: start, first_failed }));
                    }
                }
            }
            if let Some((_, pt)) = best {
                return Ok(pt);
            }
            Err(Error::Reduction {
                label: format!("{label} {mu}"),
                reason: format!("eps not positive for convergents {start}..{end}"),
            })
        })
        .collect::<Result<_>>()?;

    // one ladder per convergent that was used, reaching below the smallest eps there
    let b = match spec.base {
        Base::Alpha => &c.alpha,
        Base::Delta => &c.delta,
    };
    let a_bits = spec.a.clone().with_precision(bits);
    let mut floors: BTreeMap<usize, Dyadic> = BTreeMap::new();
    for pt in &points {
        let f = floors.entry(pt.index).or_insert_with(|| pt.eps.lo().clone());
        if pt.eps.lo() < f {
            *f = pt.eps.lo().clone();
        }
    }
    let ladders: BTreeMap<usize, Ladder> = floors
        .iter()
        .map(|(&i, floor)| Ok((i, Ladder::build(&a_bits, &convs[i].q, b, floor)?)))
        .collect::<Result<_>>()?;

    let entries: Vec<ParameterResult> = points
        .iter()
        .map(|pt| ParameterResult {
            k: pt.mu.k(),
            l: pt.mu.l(),
            convergent_index: pt.index,
            epsilon: pt.eps.lo_sci(6),
            precision_bits: pt.eps.precision(),
            k_bound: ladders[&pt.index].k_bound(pt.eps.lo()),
        })
        .collect();

    let fallbacks = points
        .iter()
        .filter(|pt| pt.first_failed)
        .map(|pt| Fallback { k: pt.mu.k(), l: pt.mu.l(), from_index: pt.from_index, used_index: pt.index })
        .collect();
    let deeper_choices = points.iter().filter(|pt| !pt.first_failed && pt.index != pt.from_index).count();
    let min_pt = points.iter().min_by(|x, y| x.eps.lo().cmp(y.eps.lo())).expect("at least one parameter");
    let worst = entries.iter().zip(&points).max_by_key(|(e, _)| e.k_bound).expect("at least one parameter");
    let json = serde_json::to_vec(&entries).map_err(|e| Error::Domain(e.to_string()))?;

    Ok(CampaignReport {
        label,
        campaign: spec.campaign,
        sign: spec.sign,
        base: spec.base,
        a: spec.a.hi_sci(6),
        hypothesis_m: spec.hypothesis_m.clone(),
        m_bound: spec.m_bound.clone(),
        base_convergent_index: start,
        k_range: spec.k_range,
        l_range: spec.l_range,
        points: points.len(),
        precision_bits: bits,
        max_precision_bits: points.iter().map(|p| p.eps.precision()).max().unwrap_or(bits),
        min_epsilon: min_pt.eps.lo_sci(6),
        min_epsilon_at: min_pt.mu,
        max_k_bound: worst.0.k_bound,
        worst_parameter: worst.1.mu,
        fallbacks,
        deeper_choices,
        entries_digest: hex::encode(Sha256::digest(&json)),
        entries,
    })
}
