use super::complex::CertComplex;
use super::interval::CertReal;
use super::poly::real_root_near;
use crate::error::{Error, Result};

/// Minimal polynomial of the Padovan Binet coefficient `a`, ascending.
pub const MINPOLY_A: [i64; 4] = [-1, 6, -23, 23];
/// Minimal polynomial of `sqrt(5) * a`, ascending: `529x^6 - 1265x^4 - 250x^2 - 125`.
pub const MINPOLY_SQRT5_A: [i64; 7] = [-125, 0, -250, 0, -1265, 0, 529];
/// `x^3 - x - 1`
pub const PADOVAN_CHARPOLY: [i64; 4] = [-1, -1, 0, 1];
/// `x^2 - x - 1`
pub const FIBONACCI_CHARPOLY: [i64; 3] = [-1, -1, 1];

/// Roots and Binet coefficients of both recurrences, all as certified
/// enclosures at one working precision.
///
/// The complex roots `beta`, `gamma = conj(beta)` of `x^3 - x - 1` enter only
/// through their common modulus `alpha^(-1/2)`.
#[derive(Clone, Debug)]
pub struct AlgebraicConstants {
    pub precision: u32,
    /// Real root of `x^3 - x - 1` (the plastic number).
    pub alpha: CertReal,
    /// `|beta| = |gamma| = alpha^(-1/2)`.
    pub beta_gamma_modulus: CertReal,
    /// Padovan Binet coefficient `a = (1 + alpha) / (-alpha^2 + 3 alpha + 1)`.
    pub a_coeff: CertReal,
    /// Complex coefficient `b`; `c = conj(b)`.
    pub b_coeff: CertComplex,
    pub b_c_modulus: CertReal,
    /// Golden ratio `(1 + sqrt5) / 2`.
    pub delta: CertReal,
    /// `(1 - sqrt5) / 2`.
    pub eta: CertReal,
    pub sqrt5: CertReal,
    pub sqrt5_a: CertReal,
    pub log_alpha: CertReal,
    pub log_delta: CertReal,
    pub log_sqrt5_a: CertReal,
    pub minpoly_a: Vec<i64>,
    pub minpoly_sqrt5a: Vec<i64>,
}

/// Compute every constant at `precision` bits (at least 64).
pub fn compute_constants(precision: u32) -> Result<AlgebraicConstants> {
    if precision < 64 {
        return Err(Error::InvalidInput(format!("precision {precision} below 64 bits")));
    }
    let p = precision;
    let one = CertReal::one(p);
    let alpha = real_root_near(&PADOVAN_CHARPOLY, 1.324_717_957_244_746, p)?;
    let sqrt5 = CertReal::from_int(5, p).sqrt()?;
    let delta = (&one + &sqrt5).mul_pow2(-1);
    let eta = (&one - &sqrt5).mul_pow2(-1);

    let inv_alpha = alpha.recip()?;
    let beta_gamma_modulus = inv_alpha.sqrt()?;
    let alpha_sq = alpha.square();
    let a_coeff = (&one + &alpha).checked_div(&(&(&alpha.mul_int(3) - &alpha_sq) + &one))?;

    // beta = -alpha/2 + i sqrt(1/alpha - alpha^2/4)
    let beta = CertComplex::new(-alpha.mul_pow2(-1), (&inv_alpha - &alpha_sq.mul_pow2(-2)).sqrt()?);
    let one_c = CertComplex::real(one.clone());
    let three = CertReal::from_int(3, p);
    let b_den = beta.mul(&beta).scale(&CertReal::from_int(-1, p)).add(&beta.scale(&three)).add(&one_c);
    let b_coeff = one_c.add(&beta).div(&b_den)?;
    let b_c_modulus = b_coeff.abs()?;

    let sqrt5_a = &sqrt5 * &a_coeff;
    Ok(AlgebraicConstants {
        precision: p,
        log_alpha: alpha.ln()?,
        log_delta: delta.ln()?,
        log_sqrt5_a: sqrt5_a.ln()?,
        alpha,
        beta_gamma_modulus,
        a_coeff,
        b_coeff,
        b_c_modulus,
        delta,
        eta,
        sqrt5,
        sqrt5_a,
        minpoly_a: MINPOLY_A.to_vec(),
        minpoly_sqrt5a: MINPOLY_SQRT5_A.to_vec(),
    })
}
