//! The chain of Matveev applications that ends in an absolute bound on `n`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::matveev::{lower_bound_coefficient, matveev_constant, FormLabel, MatveevB, MatveevInstance};
use crate::error::{Error, Result};
use crate::realnum::{certified_compare, constants_at, height_from_minpoly, CertReal, Dyadic, PrecisionPolicy, Round};

/// Working precision of the chain; its numbers are all tame.
pub const CHAIN_BITS: u32 = 192;
/// Degree of `Q(sqrt5, alpha)`.
pub const FIELD_DEGREE: u32 = 6;
/// The chain assumes `n >= 300`, so `1 + log 2n >= 1 + log 600`.
pub const N_FLOOR: i64 = 300;

/// Published values, used as floors for the `A_1` choices (they must stay
/// upper bounds) and for the deviation report.
pub mod reference {
    pub const H_SQRT5_A: &str = "1.204";
    pub const A1_LAMBDA: &str = "7.23";
    pub const LAMBDA: &str = "8.45e13";
    pub const CASE1_H: &str = "4.22e13";
    pub const CASE1_A1: &str = "2.53e14";
    pub const CASE1: &str = "2.96e27";
    pub const CASE2_H_POWER: &str = "9.51e13";
    pub const CASE2_H: &str = "2.82e13";
    pub const CASE2_A1: &str = "1.69e14";
    pub const CASE2: &str = "1.97e27";
    pub const LAMBDA3_H: &str = "2.47e27";
    pub const LAMBDA3_A1: &str = "1.78e28";
    pub const FINAL: &str = "2.08e41";
    pub const N_ABSOLUTE: &str = "2.83e47";
}

/// One line of the chain report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainRow {
    pub key: String,
    pub description: String,
    /// Value carried forward by the chain (upper endpoint is what counts).
    #[serde(serialize_with = "ser_cert", deserialize_with = "de_cert")]
    pub value: CertReal,
    /// Own derivation, when the carried value had to be raised to a published floor.
    #[serde(serialize_with = "ser_cert_opt", deserialize_with = "de_cert_opt", default)]
    pub first_principles: Option<CertReal>,
    pub reference: Option<String>,
}

fn ser_cert<S: serde::Serializer>(x: &CertReal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_sci_string(8))
}

fn de_cert<'de, D: serde::Deserializer<'de>>(_: D) -> std::result::Result<CertReal, D::Error> {
    Err(serde::de::Error::custom("chain rows are output only"))
}

fn ser_cert_opt<S: serde::Serializer>(x: &Option<CertReal>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_sci_string(8)),
        None => s.serialize_none(),
    }
}

fn de_cert_opt<'de, D: serde::Deserializer<'de>>(_: D) -> std::result::Result<Option<CertReal>, D::Error> {
    Err(serde::de::Error::custom("chain rows are output only"))
}

impl ChainRow {
    fn new(key: &str, description: &str, value: CertReal, reference: Option<&str>) -> Self {
        ChainRow {
            key: key.into(),
            description: description.into(),
            value,
            first_principles: None,
            reference: reference.map(Into::into),
        }
    }

    /// `value / reference - 1`, from the interval midpoint.
    pub fn deviation(&self) -> Option<f64> {
        let r: f64 = self.reference.as_ref()?.parse().ok()?;
        Some(self.value.to_f64() / r - 1.0)
    }
}

#[derive(Clone, Debug)]
pub struct BoundChain {
    pub precision: u32,
    pub matveev_c: CertReal,
    pub h_sqrt5_a: CertReal,
    pub lambda_coefficient: CertReal,
    pub case1_coefficient: CertReal,
    pub case2_coefficient: CertReal,
    pub final_coefficient: CertReal,
    /// Least `N` with `n - 4 >= final (1 + log 2n)^3` for all `n >= N`.
    pub n_absolute: BigInt,
    /// Same closing step with the division by `log delta` and the envelope
    /// constant kept: the bound the reduction must actually assume.
    pub n_absolute_strict: BigInt,
    /// Bound on `m` implied by `n_absolute_strict` and `m < (n-1) log delta / log alpha + 7`.
    pub m_absolute_strict: BigInt,
    pub rows: Vec<ChainRow>,
}

impl BoundChain {
    pub fn row(&self, key: &str) -> Option<&ChainRow> {
        self.rows.iter().find(|r| r.key == key)
    }
}

fn dec(s: &str, prec: u32) -> CertReal {
    CertReal::from_decimal(s, prec).expect("decimal literal")
}

/// Raise `fp` to the published floor if needed: an upper bound stays one.
fn at_least(fp: &CertReal, reference: &str) -> CertReal {
    let r = dec(reference, fp.precision());
    CertReal::point(fp.hi().clone().max(r.hi().clone()), fp.precision())
}

/// `(k/2) log delta + log sqrt5 + (log 23)/3 + log 2`, bounding the height of
/// `(delta^k - 1) / (sqrt5 a)`.
pub fn height_bound_gamma1_case1(k: u64, prec: u32) -> Result<CertReal> {
    if k == 0 {
        return Err(Error::InvalidInput("gap n - n1 must be positive".into()));
    }
    let c = constants_at(prec)?;
    let half_k = CertReal::from_int(k, prec).mul_pow2(-1);
    Ok(&(&half_k * &c.log_delta) + &height_constant(prec)?)
}

/// `log sqrt5 + (log 23)/3 + log 2`.
fn height_constant(prec: u32) -> Result<CertReal> {
    let c = constants_at(prec)?;
    let log23_3 = CertReal::from_int(23, prec).ln()?.checked_div(&CertReal::from_int(3, prec))?;
    Ok(c.sqrt5.ln()? + log23_3 + CertReal::from_int(2, prec).ln()?)
}

/// `h(n) = n - offset - coef (1 + log 2n)^e` and its derivative in `n`.
fn gap(n: &BigInt, coef: &CertReal, e: u32, offset: i64, prec: u32) -> Result<(CertReal, CertReal)> {
    let nn = CertReal::from_int(n.clone(), prec);
    let l = &CertReal::one(prec) + &nn.mul_int(2).ln()?;
    let h = &(&nn - &CertReal::from_int(offset, prec)) - &(coef * &l.pow(u64::from(e)));
    let dl = coef * &l.pow(u64::from(e.saturating_sub(1))).mul_int(i64::from(e));
    let d = &CertReal::one(prec) - &dl.checked_div(&nn)?;
    Ok((h, d))
}

fn sign(x: &CertReal) -> Option<Ordering> {
    certified_compare(x, &CertReal::zero(x.precision()))
}

/// Least `N >= 1` such that `n - offset >= coef (1 + log 2n)^e` for every `n >= N`.
///
/// For `e >= 1` the gap `h(n)` is convex on `n >= 2`, so the set where it is
/// negative is an interval; its right end is located by bisection on the
/// increasing branch.
pub fn derive_absolute_bound(coef: &CertReal, e: u32, offset: i64, policy: PrecisionPolicy) -> Result<BigInt> {
    if !coef.is_positive() {
        return Err(Error::InvalidInput(format!("coefficient {coef} is not positive")));
    }
    if e > 3 {
        return Err(Error::InvalidInput(format!("exponent {e} outside 0..=3")));
    }
    policy.escalate("absolute bound", |prec| {
        let coef = coef.clone().with_precision(prec);
        if e == 0 {
            // n >= offset + coef
            let t = &coef + &CertReal::from_int(offset, prec);
            let (lo, hi) = (t.lo().ceil(), t.hi().ceil());
            return Ok((lo == hi).then(|| lo.max(BigInt::one())));
        }
        let eval = |n: &BigInt| gap(n, &coef, e, offset, prec);
        // hi: h(hi) > 0 and h'(hi) > 0, so h > 0 on [hi, inf)
        let mut hi = BigInt::from(offset.max(1) + 1).max(BigInt::from(2));
        loop {
            let (h, d) = eval(&hi)?;
            if sign(&h) == Some(Ordering::Greater) && sign(&d) == Some(Ordering::Greater) {
                break;
            }
            hi *= 2;
            if hi.bits() > 4096 {
                return Err(Error::InvalidInput("absolute bound does not converge".into()));
            }
        }
        // n*: least n >= 2 with h'(n) >= 0 (h' increases)
        let (mut a, mut b) = (BigInt::from(2), hi.clone());
        if sign(&eval(&a)?.1) != Some(Ordering::Greater) {
            while &b - &a > BigInt::one() {
                let mid: BigInt = (&a + &b) >> 1;
                match sign(&eval(&mid)?.1) {
                    Some(Ordering::Greater) | Some(Ordering::Equal) => b = mid,
                    Some(Ordering::Less) => a = mid,
                    None => return Ok(None),
                }
            }
            a = b;
        }
        let n_star = a;
        let h_star = match sign(&eval(&n_star)?.0) {
            Some(o) => o,
            None => return Ok(None),
        };
        if h_star != Ordering::Less {
            // nothing negative at or past n*; look left of it
            let before = &n_star - 1;
            if before >= BigInt::from(2) {
                match sign(&eval(&before)?.0) {
                    Some(Ordering::Less) => return Ok(Some(n_star)),
                    None => return Ok(None),
                    _ => {}
                }
            }
            let one = BigInt::one();
            return match sign(&eval(&one)?.0) {
                Some(Ordering::Less) => Ok(Some(BigInt::from(2))),
                None => Ok(None),
                _ => Ok(Some(one)),
            };
        }
        // h(n*) < 0 < h(hi) on an increasing branch
        let (mut a, mut b) = (n_star, hi);
        while &b - &a > BigInt::one() {
            let mid: BigInt = (&a + &b) >> 1;
            match sign(&eval(&mid)?.0) {
                Some(Ordering::Less) => a = mid,
                Some(_) => b = mid,
                None => return Ok(None),
            }
        }
        Ok(Some(b))
    })
}

fn instance(label: FormLabel, a1: CertReal, prec: u32) -> Result<MatveevInstance> {
    let c = constants_at(prec)?;
    let a2 = c.log_delta.mul_int(3);
    let a3 = c.log_alpha.mul_int(2);
    MatveevInstance::new(label, FIELD_DEGREE, vec![a1, a2, a3], MatveevB::TwoN)
}

/// Run the whole chain at [`CHAIN_BITS`].
pub fn compute_bound_chain(policy: PrecisionPolicy) -> Result<BoundChain> {
    let p = CHAIN_BITS;
    let c = constants_at(p)?;
    let mut rows = Vec::new();
    let l600 = &CertReal::one(p) + &CertReal::from_int(2 * N_FLOOR, p).ln()?;
    let hc = height_constant(p)?;
    let log_s5a = c.log_sqrt5_a.abs();

    let cst = matveev_constant(3, FIELD_DEGREE, p)?;
    rows.push(ChainRow::new("matveev_c", "C(3, 6)", cst.clone(), None));

    let h = height_from_minpoly(&c.minpoly_sqrt5a, p)?;
    rows.push(ChainRow::new(
        "h_sqrt5_a",
        "h(sqrt5 a) from its minimal polynomial",
        h.clone(),
        Some(reference::H_SQRT5_A),
    ));
    let a1_fp = h.mul_int(i64::from(FIELD_DEGREE)).max(&log_s5a);
    let a1 = at_least(&a1_fp, reference::A1_LAMBDA);
    rows.push(with_fp(ChainRow::new("a1_lambda", "A_1 for lambda", a1.clone(), Some(reference::A1_LAMBDA)), a1_fp));

    let lam = lower_bound_coefficient(&instance(FormLabel::Lambda, a1, p)?)?;
    rows.push(ChainRow::new("lambda", "min gap coefficient of (1 + log 2n)", lam.clone(), Some(reference::LAMBDA)));

    // Case 1: (n - n1) log delta < lam (1 + log 2n)
    let h1 = &lam.mul_pow2(-1) + &hc.checked_div(&l600)?;
    rows.push(ChainRow::new("case1_h", "case 1 height of gamma_1", h1.clone(), Some(reference::CASE1_H)));
    let a1_fp = h1.mul_int(6).max(&(&lam + &log_s5a.checked_div(&l600)?));
    let a1 = at_least(&a1_fp, reference::CASE1_A1);
    rows.push(with_fp(ChainRow::new("case1_a1", "case 1 A_1", a1.clone(), Some(reference::CASE1_A1)), a1_fp));
    let case1 = lower_bound_coefficient(&instance(FormLabel::Lambda1, a1, p)?)?;
    rows.push(ChainRow::new("case1", "case 1 coefficient of (1 + log 2n)^2", case1.clone(), Some(reference::CASE1)));

    // Case 2: (m - m1) log alpha < lam (1 + log 2n)
    let log2 = CertReal::from_int(2, p).ln()?;
    let hp = &lam.checked_div(&CertReal::from_int(3, p))? + &log2.checked_div(&l600)?;
    rows.push(ChainRow::new("case2_h_power", "case 2 height of alpha^(m-m1) - 1", hp, Some(reference::CASE2_H_POWER)));
    let h2 = &lam.checked_div(&CertReal::from_int(3, p))? + &hc.checked_div(&l600)?;
    rows.push(ChainRow::new("case2_h", "case 2 height of gamma_1", h2.clone(), Some(reference::CASE2_H)));
    let a1_fp = h2.mul_int(6).max(&(&lam + &(&log_s5a + &log2).checked_div(&l600)?));
    let a1 = at_least(&a1_fp, reference::CASE2_A1);
    rows.push(with_fp(ChainRow::new("case2_a1", "case 2 A_1", a1.clone(), Some(reference::CASE2_A1)), a1_fp));
    let case2 = lower_bound_coefficient(&instance(FormLabel::Lambda2, a1, p)?)?;
    rows.push(ChainRow::new("case2", "case 2 coefficient of (1 + log 2n)^2", case2.clone(), Some(reference::CASE2)));

    // Lambda_3: both gaps below max(case1, case2) (1 + log 2n)^2
    let big = case1.max(&case2);
    let l600sq = l600.square();
    let five_sixths = CertReal::from_ratio(5, 6, p);
    let h3 = &(&big * &five_sixths) + &(&hc + &log2).checked_div(&l600sq)?;
    rows.push(ChainRow::new("lambda3_h", "lambda_3 height of gamma_1", h3.clone(), Some(reference::LAMBDA3_H)));
    let a1_fp = h3.mul_int(6).max(&(&big.mul_int(2) + &(&log_s5a + &log2.mul_int(2)).checked_div(&l600sq)?));
    let a1 = at_least(&a1_fp, reference::LAMBDA3_A1);
    rows.push(with_fp(ChainRow::new("lambda3_a1", "lambda_3 A_1", a1.clone(), Some(reference::LAMBDA3_A1)), a1_fp));
    let fin = lower_bound_coefficient(&instance(FormLabel::Lambda3, a1, p)?)?;
    rows.push(ChainRow::new("final", "closing coefficient of (1 + log 2n)^3", fin.clone(), Some(reference::FINAL)));

    let n_abs = derive_absolute_bound(&upper(&fin), 3, 4, policy)?;
    rows.push(ChainRow::new(
        "n_absolute",
        "least N with n - 4 >= final (1 + log 2n)^3 beyond it",
        CertReal::from_int(n_abs.clone(), p),
        Some(reference::N_ABSOLUTE),
    ));

    // |Lambda_3| < K3 delta^(4-n) and log|Lambda_3| > -fin (1 + log 2n)^3 give
    // (n - 4) log delta < fin (1 + log 2n)^3 + log K3
    let k3 = super::envelopes::Envelopes::compute(p)?.k3;
    let l600cube = &l600sq * &l600;
    let strict = (&fin + &k3.ln()?.abs().checked_div(&l600cube)?).checked_div(&c.log_delta)?;
    let n_strict = derive_absolute_bound(&upper(&strict), 3, 4, policy)?;
    rows.push(ChainRow::new(
        "n_absolute_strict",
        "closing step divided by log delta, envelope constant kept",
        CertReal::from_int(n_strict.clone(), p),
        None,
    ));
    let rho = c.log_alpha.checked_div(&c.log_delta)?;
    let m_strict: BigInt = CertReal::from_int(&n_strict - 1, p).checked_div(&rho)?.hi().floor() + 7;
    rows.push(ChainRow::new(
        "m_absolute_strict",
        "m < (n - 1) log delta / log alpha + 7 at the strict n bound",
        CertReal::from_int(m_strict.clone(), p),
        None,
    ));

    Ok(BoundChain {
        precision: p,
        matveev_c: cst,
        h_sqrt5_a: h,
        lambda_coefficient: lam,
        case1_coefficient: case1,
        case2_coefficient: case2,
        final_coefficient: fin,
        n_absolute: n_abs,
        n_absolute_strict: n_strict,
        m_absolute_strict: m_strict,
        rows,
    })
}

fn with_fp(mut row: ChainRow, fp: CertReal) -> ChainRow {
    row.first_principles = Some(fp);
    row
}

fn upper(x: &CertReal) -> CertReal {
    CertReal::point(x.hi().clone(), x.precision())
}

/// Decimal rendering of a big integer in `d.dddde+XX` form, rounded up.
pub fn sci_upper(n: &BigInt) -> String {
    Dyadic::from_int(n.clone()).to_sci(4, Round::Up)
}

/// Relative gap `x / r - 1` for big integers, as a float.
pub fn relative(x: &BigInt, r: &str) -> Option<f64> {
    let r: f64 = r.parse().ok()?;
    Some(x.to_f64()? / r - 1.0)
}


#[cfg(test)]
mod chain_values {
    use super::*;

    #[test]
    fn rows_near_published_figures() {
        let ch = compute_bound_chain(PrecisionPolicy::default()).unwrap();
        let rel = |x: &CertReal, r: f64| (x.to_f64() / r - 1.0).abs();
        assert!(rel(&ch.matveev_c, 1.4391e13) < 1e-3);
        assert!(rel(&ch.lambda_coefficient, 8.447e13) < 1e-2);
        assert!(rel(&ch.final_coefficient, 2.08e41) < 1e-2);
        assert!(relative(&ch.n_absolute, "2.83e47").unwrap().abs() < 0.05);
        assert!(ch.n_absolute_strict > ch.n_absolute);
        assert!(ch.m_absolute_strict > ch.n_absolute_strict);
    }
}
