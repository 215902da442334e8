//! One application of the Baker-Davenport reduction: given a convergent
//! `p/q` of `tau`, certify `eps = ||mu q|| - M ||tau q|| > 0` and turn it into
//! a bound on `k` in `0 < m tau - n + mu < A B^(-k)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contfrac::{Convergent, Tau};
use crate::error::{Error, Result};
use crate::linforms::{Base, Sign};
use crate::realnum::{constants_at, AlgebraicConstants, CertReal, PrecisionPolicy};

/// Which inhomogeneous term `mu` the problem uses. The positive sign divides
/// the logarithmic numerator by `log alpha`, the negative one by `-log delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum MuSpec {
    /// `mu = 0`, only useful as a degenerate test case.
    Zero,
    /// `-log(sqrt5 a)`
    Gamma,
    /// `log(delta^k - 1) - log(sqrt5 a)`
    Gamma1 { k: u64 },
    /// `-log(sqrt5 a) - log(alpha^k - 1)`
    Gamma2 { k: u64 },
    /// `log(delta^k - 1) - log(sqrt5 a) - log(alpha^l - 1)`
    Gamma3 { k: u64, l: u64 },
}

impl MuSpec {
    pub fn k(self) -> Option<u64> {
        match self {
            MuSpec::Gamma1 { k } | MuSpec::Gamma2 { k } | MuSpec::Gamma3 { k, .. } => Some(k),
            _ => None,
        }
    }

    pub fn l(self) -> Option<u64> {
        match self {
            MuSpec::Gamma3 { l, .. } => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for MuSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuSpec::Zero => f.write_str("zero"),
            MuSpec::Gamma => f.write_str("gamma"),
            MuSpec::Gamma1 { k } => write!(f, "gamma1(k={k})"),
            MuSpec::Gamma2 { k } => write!(f, "gamma2(k={k})"),
            MuSpec::Gamma3 { k, l } => write!(f, "gamma3(k={k}, l={l})"),
        }
    }
}

/// `log(delta^k - 1)`
pub fn log_delta_pow_minus_one(c: &AlgebraicConstants, k: u64) -> Result<CertReal> {
    (&c.delta.pow(k) - &CertReal::one(c.precision)).ln()
}

/// `log(alpha^l - 1)`
pub fn log_alpha_pow_minus_one(c: &AlgebraicConstants, l: u64) -> Result<CertReal> {
    (&c.alpha.pow(l) - &CertReal::one(c.precision)).ln()
}

/// The numerator of `mu` from its logarithmic pieces; `dk` and `gl` are
/// `log(delta^k - 1)` and `log(alpha^l - 1)` where the form needs them.
pub(crate) fn numerator_from(
    spec: MuSpec,
    log_s5a: &CertReal,
    dk: Option<&CertReal>,
    gl: Option<&CertReal>,
) -> CertReal {
    let p = log_s5a.precision();
    let need = |x: Option<&CertReal>| x.cloned().expect("log table entry supplied by caller");
    match spec {
        MuSpec::Zero => CertReal::zero(p),
        MuSpec::Gamma => -log_s5a,
        MuSpec::Gamma1 { .. } => &need(dk) - log_s5a,
        MuSpec::Gamma2 { .. } => &(-log_s5a) - &need(gl),
        MuSpec::Gamma3 { .. } => &(&need(dk) - log_s5a) - &need(gl),
    }
}

/// `1/log alpha` for the positive sign, `-1/log delta` for the negative one.
pub(crate) fn mu_scale(c: &AlgebraicConstants, sign: Sign) -> Result<CertReal> {
    match sign {
        Sign::Pos => c.log_alpha.recip(),
        Sign::Neg => Ok(-&c.log_delta.recip()?),
    }
}

pub fn mu_value(spec: MuSpec, sign: Sign, c: &AlgebraicConstants) -> Result<CertReal> {
    let dk = spec.k().filter(|_| !matches!(spec, MuSpec::Gamma2 { .. }));
    let dk = dk.map(|k| log_delta_pow_minus_one(c, k)).transpose()?;
    let gl = match spec {
        MuSpec::Gamma2 { k } => Some(k),
        MuSpec::Gamma3 { l, .. } => Some(l),
        _ => None,
    };
    let gl = gl.map(|l| log_alpha_pow_minus_one(c, l)).transpose()?;
    let num = numerator_from(spec, &c.log_sqrt5_a, dk.as_ref(), gl.as_ref());
    Ok(&num * &mu_scale(c, sign)?)
}

pub fn tau_for(sign: Sign) -> Tau {
    match sign {
        Sign::Pos => Tau::DeltaOverAlpha,
        Sign::Neg => Tau::AlphaOverDelta,
    }
}

pub fn log_base(c: &AlgebraicConstants, base: Base) -> &CertReal {
    match base {
        Base::Alpha => &c.log_alpha,
        Base::Delta => &c.log_delta,
    }
}

#[derive(Clone, Debug)]
pub struct ReductionProblem {
    pub label: String,
    pub sign: Sign,
    pub mu: MuSpec,
    /// Envelope constant `A`, a positive point.
    pub a: CertReal,
    pub base: Base,
    /// `M` in the hypothesis `q > 6M` used to pick the convergent.
    pub hypothesis_m: BigInt,
    /// Bound on the multiplier of `tau` that `eps` is computed with.
    pub m_bound: BigInt,
}

impl ReductionProblem {
    pub fn tau(&self) -> Tau {
        tau_for(self.sign)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_positive() {
            return Err(Error::InvalidInput(format!("{}: A = {} is not positive", self.label, self.a)));
        }
        if self.hypothesis_m < BigInt::one() || self.m_bound < BigInt::one() {
            return Err(Error::InvalidInput(format!("{}: M must be at least 1", self.label)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub label: String,
    pub sign: Sign,
    pub base: Base,
    pub mu: MuSpec,
    pub convergent_index: usize,
    #[serde(with = "crate::serde_util::bigint")]
    pub q: BigInt,
    /// Lower end of the certified `eps`, rounded down.
    pub epsilon: String,
    pub epsilon_upper: String,
    pub precision_bits: u32,
    /// No solution with `k >= k_bound`.
    pub k_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReductionFailure {
    #[error("denominator {q} does not exceed 6M = {six_m}")]
    DenominatorTooSmall { q: String, six_m: String },
    #[error("eps = {upper} is not positive")]
    EpsilonNonPositive { upper: String },
    #[error("undecided at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("{0}")]
    Numeric(String),
}

impl From<Error> for ReductionFailure {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionExhausted { bits, .. } => ReductionFailure::PrecisionExhausted { bits },
            other => ReductionFailure::Numeric(other.to_string()),
        }
    }
}

/// `||x||` together with its certified value, when the nearest integer is
/// the same for the whole interval.
pub fn nearest_distance(x: &CertReal) -> Option<CertReal> {
    let p = x.precision();
    let r = x.mid().round_half_up();
    let d = (x - &CertReal::from_int(r, p)).abs();
    d.certainly_lt(&CertReal::from_ratio(1, 2, p)).then_some(d)
}

/// What a fixed-precision evaluation of `eps` can say.
#[derive(Clone, Debug)]
pub enum EpsilonSign {
    Positive(CertReal),
    NonPositive(CertReal),
    Undecided,
}

/// `eps` from `mu`, the convergent denominator and a precomputed
/// `M ||tau q||`.
pub fn epsilon_from(mu: &CertReal, q: &CertReal, m_tau_dist: &CertReal) -> EpsilonSign {
    let Some(dm) = nearest_distance(&(mu * q)) else {
        return EpsilonSign::Undecided;
    };
    let eps = &dm - m_tau_dist;
    if eps.is_positive() {
        EpsilonSign::Positive(eps)
    } else if !eps.hi().is_positive() {
        EpsilonSign::NonPositive(eps)
    } else {
        EpsilonSign::Undecided
    }
}

/// `M ||tau q||`, or `None` when the nearest integer to `tau q` is undecided.
pub fn m_tau_distance(tau: &CertReal, q: &BigInt, m: &BigInt) -> Option<CertReal> {
    let p = tau.precision();
    let d = nearest_distance(&(tau * &CertReal::from_int(q.clone(), p)))?;
    Some(&d * &CertReal::from_int(m.clone(), p))
}

/// `ceil(log(A q / eps) / log B)` from the lower end of `eps`, at least 1.
pub fn k_bound_direct(a: &CertReal, q: &BigInt, eps: &CertReal, log_b: &CertReal) -> Result<u64> {
    let p = eps.precision();
    let eps_lo = CertReal::point(eps.lo().clone(), p);
    let x = (a * &CertReal::from_int(q.clone(), p)).checked_div(&eps_lo)?.ln()?.checked_div(log_b)?;
    let k = x.hi().ceil();
    Ok(u64::try_from(k).unwrap_or(0).max(1))
}

/// `eps` for one problem and convergent at one precision; `None` if undecided.
fn evaluate(prob: &ReductionProblem, conv: &Convergent, bits: u32) -> Result<Option<EpsilonSign>> {
    let c = constants_at(bits)?;
    let tau = prob.tau().enclosure(bits)?;
    let Some(mt) = m_tau_distance(&tau, &conv.q, &prob.m_bound) else {
        return Ok(None);
    };
    let mu = mu_value(prob.mu, prob.sign, &c)?;
    let q = CertReal::from_int(conv.q.clone(), bits);
    Ok(match epsilon_from(&mu, &q, &mt) {
        EpsilonSign::Undecided => None,
        decided => Some(decided),
    })
}

/// Escalate until the sign of `eps` is certified. The result is never
/// [`EpsilonSign::Undecided`].
pub(crate) fn decide_epsilon(
    prob: &ReductionProblem,
    conv: &Convergent,
    policy: PrecisionPolicy,
) -> Result<EpsilonSign> {
    policy.escalate("reduction", |bits| evaluate(prob, conv, bits))
}

/// One reduction step with the given convergent, escalating precision until
/// the nearest integers to `tau q` and `mu q` are unambiguous.
pub fn baker_davenport(
    prob: &ReductionProblem,
    conv: &Convergent,
    policy: PrecisionPolicy,
) -> std::result::Result<ReductionCertificate, ReductionFailure> {
    prob.validate()?;
    let six_m = &prob.hypothesis_m * 6;
    if conv.q <= six_m {
        return Err(ReductionFailure::DenominatorTooSmall { q: conv.q.to_string(), six_m: six_m.to_string() });
    }
    let eps = match decide_epsilon(prob, conv, policy)? {
        EpsilonSign::Positive(e) => e,
        EpsilonSign::NonPositive(e) => return Err(ReductionFailure::EpsilonNonPositive { upper: e.hi_sci(6) }),
        EpsilonSign::Undecided => unreachable!("escalation only returns decided signs"),
    };
    let bits = eps.precision();
    let c = constants_at(bits)?;
    let a = prob.a.clone().with_precision(bits);
    let k_bound = k_bound_direct(&a, &conv.q, &eps, log_base(&c, prob.base))?;
    Ok(ReductionCertificate {
        label: prob.label.clone(),
        sign: prob.sign,
        base: prob.base,
        mu: prob.mu,
        convergent_index: conv.index,
        q: conv.q.clone(),
        epsilon: eps.lo_sci(6),
        epsilon_upper: eps.hi_sci(6),
        precision_bits: bits,
        k_bound,
    })
}
