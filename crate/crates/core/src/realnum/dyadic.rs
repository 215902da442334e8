//! Exact dyadic rationals `mant * 2^exp` with directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for the endpoint operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// A dyadic rational `mant * 2^exp`.
///
/// Values are kept normalized: the mantissa is odd, or zero with `exp == 0`.
/// Equality is therefore value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn bits(x: &BigInt) -> u64 {
    x.bits()
}

/// `floor(x / 2^s)` for any sign of `x`.
fn shr_floor(x: &BigInt, s: u64) -> BigInt {
    // num-bigint's arithmetic shift on negatives rounds toward -inf
    x >> s
}

fn shr_ceil(x: &BigInt, s: u64) -> BigInt {
    -((-x) >> s)
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Position of the leading bit: `|x|` lies in `[2^(t-1), 2^t)` with `t = top_bit()`.
    pub fn top_bit(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.exp + bits(&self.mant) as i64)
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let b = bits(&self.mant);
        if b <= prec as u64 {
            return self.clone();
        }
        let s = b - prec as u64;
        let m = match dir {
            Round::Down => shr_floor(&self.mant, s),
            Round::Up => shr_ceil(&self.mant, s),
        };
        Dyadic::new(m, self.exp + s as i64)
    }

    /// Directed-rounded quotient with at least `prec` significant bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let s = prec as i64 + bits(&other.mant) as i64 - bits(&self.mant) as i64 + 2;
        let (num, den) = if s >= 0 {
            (&self.mant << s as u64, other.mant.clone())
        } else {
            (self.mant.clone(), &other.mant << (-s) as u64)
        };
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let q = match dir {
            Round::Down => num.div_floor(&den),
            Round::Up => -((-num).div_floor(&den)),
        };
        Dyadic::new(q, self.exp - other.exp - s).round(prec, dir)
    }

    /// Directed-rounded square root; `self` must be non-negative.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let b = bits(&self.mant) as i64;
        let mut s = (2 * prec as i64 + 4 - b).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let n = &self.mant << s as u64;
        let mut r = n.sqrt();
        if dir == Round::Up && &r * &r < n {
            r += 1;
        }
        Dyadic::new(r, (self.exp - s) / 2).round(prec, dir)
    }

    /// `floor(self)` as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_floor(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_ceil(&self.mant, (-self.exp) as u64)
        }
    }

    /// Nearest integer, ties resolved upward.
    pub fn round_half_up(&self) -> BigInt {
        self.add(&Dyadic::new(BigInt::one(), -1)).floor()
    }

    /// Exact value as a numerator/denominator pair with positive denominator.
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        if self.exp >= 0 {
            (&self.mant << self.exp as u64, BigInt::one())
        } else {
            (self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Directed-rounded dyadic approximation of `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_int(num.clone()).div(&Dyadic::from_int(den.clone()), prec, dir)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = bits(&self.mant) as i64;
        let shift = (b - 60).max(0);
        let m = (&self.mant >> shift as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + shift;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Approximation of `log2|self|`, for diagnostics only.
    pub fn log2_abs(&self) -> f64 {
        let b = bits(&self.mant) as i64;
        let shift = (b - 60).max(0);
        let m = (&self.mant >> shift as u64).abs().to_f64().unwrap_or(f64::NAN);
        m.log2() + (self.exp + shift) as f64
    }

    /// Directed-rounded decimal rendering in scientific notation with `digits`
    /// significant digits.
    pub fn to_sci(&self, digits: usize, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        // decimal exponent estimate; corrected below
        let approx = self.log2_abs() * std::f64::consts::LOG10_2;
        let mut e10 = approx.floor() as i64 - digits as i64 + 1;
        loop {
            let scaled = self.scaled_by_pow10(-e10, dir);
            let s = scaled.abs().to_string();
            if s.len() > digits {
                e10 += 1;
                continue;
            }
            if s.len() < digits && s != "0" {
                e10 -= 1;
                continue;
            }
            let sign = if scaled.is_negative() { "-" } else { "" };
            let exp = e10 + s.len() as i64 - 1;
            let (head, tail) = s.split_at(1);
            return if tail.is_empty() { format!("{sign}{head}e{exp}") } else { format!("{sign}{head}.{tail}e{exp}") };
        }
    }

    /// Directed-rounded `self * 10^k` as an integer.
    fn scaled_by_pow10(&self, k: i64, dir: Round) -> BigInt {
        let (num, den) = self.to_ratio();
        let p = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
        let (num, den) = if k >= 0 { (num * p, den) } else { (num, den * p) };
        match dir {
            Round::Down => num.div_floor(&den),
            Round::Up => -((-num).div_floor(&den)),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same nonzero sign: compare magnitudes by leading bit first
        let (ta, tb) = (self.top_bit().unwrap(), other.top_bit().unwrap());
        let mag = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.abs() << (self.exp - e) as u64;
            let b = other.mant.abs() << (other.exp - e) as u64;
            a.cmp(&b)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(17, Round::Down))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(d(12, 0), d(3, 2));
        assert_eq!(d(0, 5), Dyadic::zero());
    }

    #[test]
    fn ordering_mixed_signs_and_scales() {
        assert!(d(-1, 10) < d(1, -10));
        assert!(d(3, -1) > d(1, 0));
        assert!(d(-3, -1) < d(-1, 0));
        assert_eq!(d(5, 0).cmp(&d(5, 0)), Ordering::Equal);
    }

    #[test]
    fn directed_division_brackets_one_third() {
        let one = d(1, 0);
        let three = d(3, 0);
        let lo = one.div(&three, 64, Round::Down);
        let hi = one.div(&three, 64, Round::Up);
        assert!(lo < hi);
        assert!(lo.mul(&three) < one);
        assert!(hi.mul(&three) > one);
    }

    #[test]
    fn directed_sqrt_brackets_two() {
        let two = d(2, 0);
        let lo = two.sqrt(100, Round::Down);
        let hi = two.sqrt(100, Round::Up);
        assert!(lo.mul(&lo) < two);
        assert!(hi.mul(&hi) > two);
        assert_eq!(d(9, 0).sqrt(10, Round::Down), d(3, 0));
        assert_eq!(d(9, 0).sqrt(10, Round::Up), d(3, 0));
    }

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(d(-3, -1).floor(), BigInt::from(-2));
        assert_eq!(d(-3, -1).ceil(), BigInt::from(-1));
        assert_eq!(d(5, -1).round_half_up(), BigInt::from(3));
    }

    #[test]
    fn scientific_rendering() {
        assert_eq!(d(1, 0).to_sci(3, Round::Down), "1.00e0");
        assert_eq!(d(-3, -2).to_sci(2, Round::Down), "-7.5e-1");
        assert_eq!(d(1, 10).to_sci(4, Round::Down), "1.024e3");
    }
}
