//! Certified natural logarithm.
//!
//! `ln x = K ln 2 + 2 atanh(z)` with `x = y 2^K`, `y` in `[1/sqrt2, sqrt2)` and
//! `z = (y-1)/(y+1)`, so `|z| <= 0.1716`. The series is summed in fixed point
//! with `w` fractional bits and an explicit error count in units of `2^-w`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};

/// Fixed-point `atanh(num/den) * 2^w` with `|num/den| <= 1/3`.
///
/// Returns `(s, e)` such that the true value lies in `[s - e, s + e]`.
fn atanh_fixed(num: &BigInt, den: &BigInt, w: u64) -> (BigInt, u64) {
    debug_assert!(den.is_positive());
    debug_assert!(BigInt::from(3) * num.abs() <= *den);
    let neg = num.is_negative();
    let z = (num.abs() << w) / den;
    let z2 = (&z * &z) >> w;
    let mut p = z.clone();
    let mut sum = z;
    let mut terms: u64 = 0;
    let mut j: u64 = 1;
    loop {
        p = (&p * &z2) >> w;
        if p.is_zero() {
            break;
        }
        sum += &p / BigInt::from(2 * j + 1);
        terms += 1;
        j += 1;
    }
    // each truncated power is within 2 units of the true power, each summed
    // term within 2 more; the tail after the last nonzero power is below 2.1
    let err = 2 * terms + 5;
    if neg {
        (-sum, err)
    } else {
        (sum, err)
    }
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u64, (BigInt, u64)>> = RefCell::new(HashMap::new());
}

/// Fixed-point `ln 2 * 2^w` with its error bound.
fn ln2_fixed(w: u64) -> (BigInt, u64) {
    LN2_CACHE.with(|c| {
        if let Some(v) = c.borrow().get(&w) {
            return v.clone();
        }
        let (s, e) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
        let v = (s << 1, 2 * e);
        c.borrow_mut().insert(w, v.clone());
        v
    })
}

fn guard_bits(prec: u32) -> u64 {
    32 + 64 - (prec as u64).leading_zeros() as u64
}

/// Lower and upper bounds of `ln x` for a positive dyadic `x`, each rounded
/// outward to `prec` bits.
pub fn ln_bounds(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    assert!(x.is_positive(), "ln of non-positive dyadic");
    if *x == Dyadic::one() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    let w = prec as u64 + guard_bits(prec);
    let m = x.mantissa();
    let t = m.bits();
    // x = (m / 2^t) * 2^(exp + t); move the reduced mantissa into [1/sqrt2, sqrt2)
    let mut k = x.exponent() + t as i64;
    let mut scale = BigInt::one() << t;
    if (m * m) << 1u32 < (&scale * &scale) {
        scale >>= 1u32;
        k -= 1;
    }
    let (s, e) = atanh_fixed(&(m - &scale), &(m + &scale), w);
    let (l2, e2) = ln2_fixed(w);
    let value = (s << 1u32) + &l2 * BigInt::from(k);
    let err = BigInt::from(2 * e) + BigInt::from(e2) * BigInt::from(k.unsigned_abs());
    let lo = Dyadic::new(&value - &err, -(w as i64)).round(prec, Round::Down);
    let hi = Dyadic::new(&value + &err, -(w as i64)).round(prec, Round::Up);
    (lo, hi)
}
