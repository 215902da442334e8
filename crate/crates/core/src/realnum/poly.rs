//! Integer polynomials: certified real-root isolation, complex-root
//! inclusion discs, and absolute logarithmic heights.

use num_bigint::BigInt;
use num_complex::Complex64;

use super::complex::CertComplex;
use super::dyadic::{Dyadic, Round};
use super::interval::CertReal;
use crate::error::{Error, Result};

/// Integer coefficients, lowest degree first.
pub type Poly = [i64];

fn degree(p: &Poly) -> Result<usize> {
    match p.iter().rposition(|c| *c != 0) {
        Some(d) if d >= 1 => Ok(d),
        _ => Err(Error::InvalidInput(format!("polynomial {p:?} has no roots"))),
    }
}

/// Interval Horner evaluation.
pub fn eval_poly(p: &Poly, x: &CertReal) -> CertReal {
    let prec = x.precision();
    let mut acc = CertReal::zero(prec);
    for c in p.iter().rev() {
        acc = &(&acc * x) + &CertReal::from_int(*c, prec);
    }
    acc
}

fn eval_exact(p: &Poly, x: &Dyadic) -> Dyadic {
    let mut acc = Dyadic::zero();
    for c in p.iter().rev() {
        acc = acc.mul(x).add(&Dyadic::from_int(*c));
    }
    acc
}

fn derivative(p: &Poly) -> Vec<i64> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * i as i64).collect()
}

fn eval_complex(p: &Poly, z: &CertComplex) -> CertComplex {
    let prec = z.re.precision();
    let mut acc = CertComplex::real(CertReal::zero(prec));
    for c in p.iter().rev() {
        acc = acc.mul(z).add(&CertComplex::real(CertReal::from_int(*c, prec)));
    }
    acc
}

/// Isolate the simple real root of `p` closest to `guess`.
///
/// Newton iteration on dyadics produces a candidate; the returned interval is
/// certified by an exact sign change of `p` at its endpoints.
pub fn real_root_near(p: &Poly, guess: f64, prec: u32) -> Result<CertReal> {
    degree(p)?;
    let dp = derivative(p);
    let w = prec + 16;
    let mut x = f64_to_dyadic(guess);
    let mut correct_bits = 20u32;
    for _ in 0..64 {
        let fx = eval_exact(p, &x);
        let dfx = eval_exact(&dp, &x);
        if dfx.is_zero() {
            return Err(Error::RootIsolation("vanishing derivative".into()));
        }
        let step = fx.div(&dfx, w, Round::Down);
        x = x.sub(&step).round(w, Round::Down);
        if correct_bits > 2 * w {
            break;
        }
        correct_bits *= 2;
    }
    // bracket [x - u, x + u]; widen until the sign change certifies it
    let top = x.top_bit().unwrap_or(0);
    let mut u = Dyadic::new(BigInt::from(1), top - prec as i64 - 2);
    for _ in 0..32 {
        let (a, b) = (x.sub(&u), x.add(&u));
        let (fa, fb) = (eval_exact(p, &a), eval_exact(p, &b));
        if fa.signum() * fb.signum() <= 0 {
            return Ok(CertReal::new(a, b, prec));
        }
        u = u.mul_pow2(4);
    }
    Err(Error::RootIsolation(format!("no sign change near {guess} for {p:?}")))
}

fn f64_to_dyadic(x: f64) -> Dyadic {
    if x == 0.0 {
        return Dyadic::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64 - 1075;
    let mant = (bits & ((1u64 << 52) - 1)) | (1u64 << 52);
    let m = BigInt::from(mant);
    Dyadic::new(if x < 0.0 { -m } else { m }, exp)
}

/// Durand–Kerner in double precision, used for starting approximations.
fn approx_roots(p: &Poly) -> Result<Vec<Complex64>> {
    let d = degree(p)?;
    let lead = p[d] as f64;
    let monic: Vec<Complex64> = p[..=d].iter().map(|c| Complex64::new(*c as f64 / lead, 0.0)).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let bound = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|i| seed.powu(i as u32) * (bound / 2.0).max(0.5)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::RootIsolation(format!("Durand-Kerner diverged on {p:?}")));
    }
    Ok(z)
}

/// Certified inclusion discs `(center, radius)` for all complex roots.
///
/// With Weierstrass corrections `W_i = p(z_i) / (lead * prod_{j != i}(z_i - z_j))`
/// the roots of `p` are the eigenvalues of `diag(z) - W 1^T`; Gerschgorin's
/// theorem then places exactly one root in each disc `|z - z_i| <= d |W_i|`
/// whenever these discs are pairwise disjoint.
pub fn root_discs(p: &Poly, prec: u32) -> Result<Vec<(CertComplex, CertReal)>> {
    let d = degree(p)?;
    let p = &p[..=d];
    let lead = CertReal::from_int(p[d], prec);
    let mut z: Vec<CertComplex> = approx_roots(p)?
        .into_iter()
        .map(|c| {
            CertComplex::new(CertReal::point(f64_to_dyadic(c.re), prec), CertReal::point(f64_to_dyadic(c.im), prec))
        })
        .collect();
    let corrections = |z: &[CertComplex]| -> Result<Vec<CertComplex>> {
        (0..d)
            .map(|i| {
                let mut den = CertComplex::real(lead.clone());
                for (j, zj) in z.iter().enumerate() {
                    if i != j {
                        den = den.mul(&z[i].sub(zj));
                    }
                }
                eval_complex(p, &z[i]).div(&den)
            })
            .collect()
    };
    // quadratic refinement from ~50 correct bits
    let mut good = 40u32;
    while good < prec + 16 {
        let w = corrections(&z)?;
        z = z.iter().zip(&w).map(|(zi, wi)| zi.sub(wi).mid_point()).collect();
        good *= 2;
    }
    let w = corrections(&z)?;
    let dd = CertReal::from_int(d as i64, prec);
    let mut discs = Vec::with_capacity(d);
    for (zi, wi) in z.iter().zip(&w) {
        let r = &wi.abs()? * &dd;
        let r = CertReal::point(r.hi().clone(), prec);
        discs.push((zi.clone(), r));
    }
    for i in 0..d {
        for j in i + 1..d {
            let gap = discs[i].0.sub(&discs[j].0).abs()?;
            let reach = &discs[i].1 + &discs[j].1;
            if !reach.certainly_lt(&gap) {
                return Err(Error::PrecisionExhausted { stage: "root isolation".into(), bits: prec });
            }
        }
    }
    Ok(discs)
}

/// Absolute logarithmic height `(1/d)(log|lead| + sum log max(1, |root|))`
/// of the algebraic number whose minimal polynomial is `coeffs`.
pub fn height_from_minpoly(coeffs: &Poly, prec: u32) -> Result<CertReal> {
    let d = degree(coeffs)?;
    let lead = coeffs[d];
    let mut acc = CertReal::from_int(lead.abs(), prec).ln()?;
    let one = CertReal::one(prec);
    for (center, r) in root_discs(coeffs, prec)? {
        let m = center.abs()?;
        let lo = &m - &r;
        let modulus = CertReal::new(lo.lo().clone().max(Dyadic::zero()), (&m + &r).hi().clone(), prec);
        acc = &acc + &modulus.max(&one).ln()?;
    }
    acc.checked_div(&CertReal::from_int(d as i64, prec))
}
