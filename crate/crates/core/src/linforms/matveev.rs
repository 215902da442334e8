use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realnum::CertReal;

/// The four linear forms the bound chain goes through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormLabel {
    Lambda,
    Lambda1,
    Lambda2,
    Lambda3,
}

impl FormLabel {
    pub fn name(self) -> &'static str {
        match self {
            FormLabel::Lambda => "lambda",
            FormLabel::Lambda1 => "lambda1",
            FormLabel::Lambda2 => "lambda2",
            FormLabel::Lambda3 => "lambda3",
        }
    }
}

/// `B` in the lower bound: either kept symbolic as `2n` or a number.
#[derive(Clone, Debug)]
pub enum MatveevB {
    TwoN,
    Value(CertReal),
}

/// Smallest admissible `A_j`.
pub const A_FLOOR: &str = "0.16";

#[derive(Clone, Debug)]
pub struct MatveevInstance {
    pub label: FormLabel,
    pub s: u32,
    pub d: u32,
    /// Numeric parts of the `A_j`. When `A_1` itself grows with `n`, only
    /// its coefficient in front of the `(1 + log 2n)` powers is stored here.
    pub a: Vec<CertReal>,
    pub b: MatveevB,
}

impl MatveevInstance {
    pub fn new(label: FormLabel, d: u32, a: Vec<CertReal>, b: MatveevB) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInput("no algebraic numbers".into()));
        }
        let prec = a[0].precision();
        let floor = CertReal::from_decimal(A_FLOOR, prec)?;
        if let Some(j) = a.iter().position(|x| x.certainly_lt(&floor)) {
            return Err(Error::InvalidInput(format!("A_{} = {} is below {A_FLOOR}", j + 1, a[j])));
        }
        Ok(MatveevInstance { label, s: a.len() as u32, d, a, b })
    }
}

/// `C(s, D) = 1.4 * 30^(s+3) * s^4.5 * D^2 * (1 + log D)`.
pub fn matveev_constant(s: u32, d: u32, prec: u32) -> Result<CertReal> {
    if s == 0 || d == 0 {
        return Err(Error::InvalidInput(format!("C(s, D) needs s, D >= 1, got ({s}, {d})")));
    }
    let sr = CertReal::from_int(s, prec);
    let dr = CertReal::from_int(d, prec);
    let s45 = &sr.pow(4) * &sr.sqrt()?;
    let one_log = &CertReal::one(prec) + &dr.ln()?;
    let c = CertReal::from_ratio(14, 10, prec) * CertReal::from_int(30, prec).pow(u64::from(s) + 3);
    Ok(c * s45 * dr.square() * one_log)
}

/// `C(s, D) * A_1 * ... * A_s`.
pub fn lower_bound_coefficient(inst: &MatveevInstance) -> Result<CertReal> {
    let prec = inst.a[0].precision();
    let mut acc = matveev_constant(inst.s, inst.d, prec)?;
    for a in &inst.a {
        acc = &acc * a;
    }
    Ok(acc)
}
