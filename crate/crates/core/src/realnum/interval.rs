//! Closed intervals with dyadic endpoints.
//!
//! Every operation rounds outward, so the result contains the exact result of
//! the operation applied to any members of the operands.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::dyadic::{Dyadic, Round};
use super::elementary;
use crate::error::{Error, Result};

/// Certified real: an interval `[lo, hi]` guaranteed to contain the quantity
/// it stands for, together with the working precision used to produce it.
#[derive(Clone, PartialEq, Eq)]
pub struct CertReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl CertReal {
    /// Interval from explicit endpoints. Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        CertReal { lo, hi, prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        CertReal { lo: x.clone(), hi: x, prec }
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        CertReal::point(Dyadic::from_int(v), prec)
    }

    pub fn zero(prec: u32) -> Self {
        CertReal::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        CertReal::point(Dyadic::one(), prec)
    }

    /// Enclosure of the rational `num / den`.
    pub fn from_ratio<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D, prec: u32) -> Self {
        let (n, d) = (num.into(), den.into());
        assert!(!d.is_zero(), "zero denominator");
        let lo = Dyadic::from_ratio(&n, &d, prec, Round::Down);
        let hi = Dyadic::from_ratio(&n, &d, prec, Round::Up);
        CertReal::new(lo, hi, prec)
    }

    /// Enclosure of a decimal literal such as `"2.83e47"` or `"0.16"`.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Self> {
        let (num, den) = parse_decimal(s)?;
        Ok(CertReal::from_ratio(num, den, prec))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    /// Midpoint collapsed to a point interval (drops the certification).
    pub fn mid_point(&self) -> CertReal {
        CertReal::point(self.mid().round(self.prec + 8, Round::Down), self.prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains(&Dyadic::from_int(v.clone()))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certainly `> 0`.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Certainly `< 0`.
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certainly `<= other` for every pair of members.
    pub fn certainly_le(&self, other: &CertReal) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &CertReal) -> bool {
        self.hi < other.lo
    }

    /// The unique integer `floor(x)` over the whole interval, if any.
    pub fn floor_unique(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    /// The unique integer the interval contains, if exactly one can be named.
    pub fn unique_integer(&self) -> Option<BigInt> {
        let a = self.lo.ceil();
        (a == self.hi.floor()).then_some(a)
    }

    pub fn hull(&self, other: &CertReal) -> CertReal {
        CertReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn max(&self, other: &CertReal) -> CertReal {
        CertReal {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn min(&self, other: &CertReal) -> CertReal {
        CertReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn abs(&self) -> CertReal {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let m = self.lo.abs().max(self.hi.clone());
            CertReal { lo: Dyadic::zero(), hi: m, prec: self.prec }
        }
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> CertReal {
        CertReal { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up), prec }
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> CertReal {
        CertReal { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    pub fn mul_int(&self, k: i64) -> CertReal {
        self * &CertReal::from_int(k, self.prec)
    }

    pub fn recip(&self) -> Result<CertReal> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let one = Dyadic::one();
        let p = self.prec;
        Ok(CertReal { lo: one.div(&self.hi, p, Round::Down), hi: one.div(&self.lo, p, Round::Up), prec: p })
    }

    pub fn checked_div(&self, other: &CertReal) -> Result<CertReal> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec.max(other.prec);
        let cands_lo = [
            self.lo.div(&other.lo, p, Round::Down),
            self.lo.div(&other.hi, p, Round::Down),
            self.hi.div(&other.lo, p, Round::Down),
            self.hi.div(&other.hi, p, Round::Down),
        ];
        let cands_hi = [
            self.lo.div(&other.lo, p, Round::Up),
            self.lo.div(&other.hi, p, Round::Up),
            self.hi.div(&other.lo, p, Round::Up),
            self.hi.div(&other.hi, p, Round::Up),
        ];
        let lo = cands_lo.into_iter().min().unwrap();
        let hi = cands_hi.into_iter().max().unwrap();
        Ok(CertReal { lo, hi, prec: p })
    }

    pub fn sqrt(&self) -> Result<CertReal> {
        if self.lo.is_negative() {
            return Err(Error::Domain(format!("sqrt of interval with negative part {self:?}")));
        }
        Ok(CertReal {
            lo: self.lo.sqrt(self.prec, Round::Down),
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        })
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self) -> Result<CertReal> {
        if !self.lo.is_positive() {
            return Err(Error::Domain(format!("log of non-positive interval {self:?}")));
        }
        let (lo, _) = elementary::ln_bounds(&self.lo, self.prec);
        let (_, hi) = elementary::ln_bounds(&self.hi, self.prec);
        Ok(CertReal { lo, hi, prec: self.prec })
    }

    pub fn square(&self) -> CertReal {
        let a = self.abs();
        CertReal::rounded(a.lo.mul(&a.lo), a.hi.mul(&a.hi), self.prec)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, k: u64) -> CertReal {
        if k == 0 {
            return CertReal::one(self.prec);
        }
        let mut base = self.clone();
        let mut acc: Option<CertReal> = None;
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.square();
        }
        acc.unwrap()
    }

    /// Signed integer power; negative exponents need a zero-free interval.
    pub fn powi(&self, k: i64) -> Result<CertReal> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            self.pow(k.unsigned_abs()).recip()
        }
    }

    /// Render as `[lo, hi]` with `digits` significant decimal digits, rounded outward.
    pub fn to_sci_string(&self, digits: usize) -> String {
        format!("[{}, {}]", self.lo.to_sci(digits, Round::Down), self.hi.to_sci(digits, Round::Up))
    }

    /// Decimal rendering of the lower endpoint, rounded down.
    pub fn lo_sci(&self, digits: usize) -> String {
        self.lo.to_sci(digits, Round::Down)
    }

    pub fn hi_sci(&self, digits: usize) -> String {
        self.hi.to_sci(digits, Round::Up)
    }
}

/// Compare two enclosures; `None` means the intervals overlap and the
/// comparison cannot be certified at this precision.
pub fn certified_compare(x: &CertReal, y: &CertReal) -> Option<Ordering> {
    if x.hi < y.lo {
        Some(Ordering::Less)
    } else if x.lo > y.hi {
        Some(Ordering::Greater)
    } else if x.is_point() && y.is_point() && x.lo == y.lo {
        Some(Ordering::Equal)
    } else {
        None
    }
}

/// Parse a decimal literal into an exact rational `num / den`.
pub fn parse_decimal(s: &str) -> Result<(BigInt, BigInt)> {
    let bad = || Error::InvalidInput(format!("not a decimal literal: {s:?}"));
    let t = s.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits: String = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    if scale >= 0 {
        Ok((num * num_traits::pow(ten, scale as usize), BigInt::one()))
    } else {
        Ok((num, num_traits::pow(ten, (-scale) as usize)))
    }
}

impl fmt::Debug for CertReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}b", self.to_sci_string(20), self.prec)
    }
}

impl fmt::Display for CertReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(12))
    }
}

impl Neg for &CertReal {
    type Output = CertReal;
    fn neg(self) -> CertReal {
        CertReal { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }
}

impl Neg for CertReal {
    type Output = CertReal;
    fn neg(self) -> CertReal {
        -&self
    }
}

impl Add for &CertReal {
    type Output = CertReal;
    fn add(self, rhs: &CertReal) -> CertReal {
        CertReal::rounded(self.lo.add(&rhs.lo), self.hi.add(&rhs.hi), self.prec.max(rhs.prec))
    }
}

impl Sub for &CertReal {
    type Output = CertReal;
    fn sub(self, rhs: &CertReal) -> CertReal {
        CertReal::rounded(self.lo.sub(&rhs.hi), self.hi.sub(&rhs.lo), self.prec.max(rhs.prec))
    }
}

impl Mul for &CertReal {
    type Output = CertReal;
    fn mul(self, rhs: &CertReal) -> CertReal {
        let p = self.prec.max(rhs.prec);
        if !self.lo.is_negative() && !rhs.lo.is_negative() {
            return CertReal::rounded(self.lo.mul(&rhs.lo), self.hi.mul(&rhs.hi), p);
        }
        let c = [self.lo.mul(&rhs.lo), self.lo.mul(&rhs.hi), self.hi.mul(&rhs.lo), self.hi.mul(&rhs.hi)];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        CertReal::rounded(lo, hi, p)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CertReal> for CertReal {
            type Output = CertReal;
            fn $m(self, rhs: CertReal) -> CertReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CertReal> for CertReal {
            type Output = CertReal;
            fn $m(self, rhs: &CertReal) -> CertReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<CertReal> for &CertReal {
            type Output = CertReal;
            fn $m(self, rhs: CertReal) -> CertReal {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
