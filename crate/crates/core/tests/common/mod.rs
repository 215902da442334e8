//! Test-side oracles. Nothing here calls into the interval code: reals are
//! plain fixed-point integers scaled by `2^SCALE`, computed with Newton
//! iterations and atanh series.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const SCALE: u32 = 700;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx(pub BigInt);

pub fn one() -> BigInt {
    BigInt::one() << SCALE
}

impl Fx {
    pub fn int(v: impl Into<BigInt>) -> Fx {
        Fx(v.into() << SCALE)
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx(&self.0 - &o.0)
    }

    pub fn neg(&self) -> Fx {
        Fx(-&self.0)
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        Fx((&self.0 * &o.0) >> SCALE)
    }

    pub fn mul_int(&self, k: &BigInt) -> Fx {
        Fx(&self.0 * k)
    }

    pub fn div(&self, o: &Fx) -> Fx {
        Fx((&self.0 << SCALE).div_floor(&o.0))
    }

    pub fn pow(&self, k: u64) -> Fx {
        (0..k).fold(Fx::int(1), |acc, _| acc.mul(self))
    }

    pub fn sqrt(&self) -> Fx {
        Fx((&self.0 << SCALE).sqrt())
    }

    /// `||x||`, distance to the nearest integer.
    pub fn dist_int(&self) -> Fx {
        let f = self.0.mod_floor(&one());
        let g = one() - &f;
        Fx(f.min(g))
    }

    pub fn to_f64(&self) -> f64 {
        // keep 60 bits of the value
        let bits = self.0.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.0 >> shift).to_f64().unwrap();
        top * 2f64.powi((shift - SCALE as i64) as i32)
    }
}

/// `2 atanh(t)` by its power series; needs `|t| < 1/2` for speed.
fn two_atanh(t: &Fx) -> Fx {
    let t2 = t.mul(t);
    let mut term = t.clone();
    let mut sum = Fx(BigInt::zero());
    let mut k = 1u64;
    while !term.0.is_zero() {
        sum = Fx(&sum.0 + &term.0 / BigInt::from(k));
        term = term.mul(&t2);
        k += 2;
    }
    Fx(sum.0 * 2)
}

pub fn ln2() -> Fx {
    two_atanh(&Fx::int(1).div(&Fx::int(3)))
}

/// Natural log of a positive value.
pub fn ln(x: &Fx) -> Fx {
    assert!(x.0.is_positive());
    // x = 2^e y with y in [1, 2)
    let e = x.0.bits() as i64 - 1 - SCALE as i64;
    let y = if e >= 0 { Fx(&x.0 >> e as u64) } else { Fx(&x.0 << (-e) as u64) };
    let t = y.sub(&Fx::int(1)).div(&y.add(&Fx::int(1)));
    two_atanh(&t).add(&ln2().mul_int(&BigInt::from(e)))
}

/// Real root of `x^3 - x - 1`.
pub fn alpha() -> Fx {
    let mut x = Fx::int(4).div(&Fx::int(3));
    for _ in 0..20 {
        let f = x.pow(3).sub(&x).sub(&Fx::int(1));
        let df = x.mul(&x).mul_int(&BigInt::from(3)).sub(&Fx::int(1));
        x = x.sub(&f.div(&df));
    }
    x
}

pub fn sqrt5() -> Fx {
    Fx::int(5).sqrt()
}

pub fn delta() -> Fx {
    Fx::int(1).add(&sqrt5()).div(&Fx::int(2))
}

/// Leading Padovan coefficient, `(a^2 + a + 1) / (a (3a^2 - 1))`.
pub fn padovan_a(al: &Fx) -> Fx {
    let num = al.mul(al).add(al).add(&Fx::int(1));
    let den = al.mul(&al.mul(al).mul_int(&BigInt::from(3)).sub(&Fx::int(1)));
    num.div(&den)
}

/// Everything the reduction oracle needs, computed once.
pub struct Oracle {
    pub alpha: Fx,
    pub delta: Fx,
    pub ln_alpha: Fx,
    pub ln_delta: Fx,
    pub ln_sqrt5_a: Fx,
}

impl Oracle {
    pub fn new() -> Oracle {
        let al = alpha();
        let de = delta();
        let s5a = sqrt5().mul(&padovan_a(&al));
        Oracle { ln_alpha: ln(&al), ln_delta: ln(&de), ln_sqrt5_a: ln(&s5a), alpha: al, delta: de }
    }

    /// `log delta / log alpha` for the positive sign, the reciprocal otherwise.
    pub fn tau(&self, positive: bool) -> Fx {
        if positive {
            self.ln_delta.div(&self.ln_alpha)
        } else {
            self.ln_alpha.div(&self.ln_delta)
        }
    }

    /// `log(delta^k - 1) - log(sqrt5 a) - log(alpha^l - 1)`; `k`/`l` of 0
    /// drop the corresponding term.
    pub fn numerator(&self, k: u64, l: u64) -> Fx {
        let mut n = self.ln_sqrt5_a.neg();
        if k > 0 {
            n = n.add(&ln(&self.delta.pow(k).sub(&Fx::int(1))));
        }
        if l > 0 {
            n = n.sub(&ln(&self.alpha.pow(l).sub(&Fx::int(1))));
        }
        n
    }

    pub fn mu(&self, positive: bool, k: u64, l: u64) -> Fx {
        let n = self.numerator(k, l);
        if positive {
            n.div(&self.ln_alpha)
        } else {
            n.neg().div(&self.ln_delta)
        }
    }

    /// `||mu q|| - M ||tau q||`.
    pub fn epsilon(&self, positive: bool, mu: &Fx, q: &BigInt, m: &BigInt) -> Fx {
        let dm = mu.mul_int(q).dist_int();
        let dt = self.tau(positive).mul_int(q).dist_int().mul_int(m);
        dm.sub(&dt)
    }
}

/// `ln` of a positive big integer in f64.
pub fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits() as i64;
    let shift = (bits - 60).max(0);
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact term tables straight from the recurrences.
pub fn padovan(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::one(); 3];
    while p.len() <= n {
        let k = p.len();
        p.push(&p[k - 2] + &p[k - 3]);
    }
    p
}

pub fn fibonacci(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::zero(), BigInt::one()];
    while f.len() <= n {
        let k = f.len();
        f.push(&f[k - 1] + &f[k - 2]);
    }
    f
}

/// The committed representation fixture: `(c, pairs)`.
pub fn representations() -> Vec<(i64, Vec<(u64, u64)>)> {
    let text = include_str!("../fixtures/representations.csv");
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            let c: i64 = r[0].parse().unwrap();
            let nums: Vec<u64> = r[1]
                .split(|ch: char| !ch.is_ascii_digit())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().unwrap())
                .collect();
            (c, nums.chunks(2).map(|w| (w[0], w[1])).collect())
        })
        .collect()
}
