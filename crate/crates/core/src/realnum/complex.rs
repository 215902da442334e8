//! Rectangular complex intervals, used only to certify polynomial roots.

use super::interval::CertReal;
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct CertComplex {
    pub re: CertReal,
    pub im: CertReal,
}

impl CertComplex {
    pub fn new(re: CertReal, im: CertReal) -> Self {
        CertComplex { re, im }
    }

    pub fn real(re: CertReal) -> Self {
        let p = re.precision();
        CertComplex { re, im: CertReal::zero(p) }
    }

    pub fn add(&self, o: &CertComplex) -> CertComplex {
        CertComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &CertComplex) -> CertComplex {
        CertComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &CertComplex) -> CertComplex {
        CertComplex { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    pub fn scale(&self, k: &CertReal) -> CertComplex {
        CertComplex { re: &self.re * k, im: &self.im * k }
    }

    pub fn norm_sqr(&self) -> CertReal {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> Result<CertReal> {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> CertComplex {
        CertComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn div(&self, o: &CertComplex) -> Result<CertComplex> {
        let inv = o.norm_sqr().recip()?;
        Ok(self.mul(&o.conj()).scale(&inv))
    }

    pub fn mid_point(&self) -> CertComplex {
        CertComplex { re: self.re.mid_point(), im: self.im.mid_point() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = CertComplex::new(CertReal::zero(64), CertReal::one(64));
        let sq = i.mul(&i);
        assert_eq!(sq.re.to_f64(), -1.0);
        assert_eq!(sq.im.to_f64(), 0.0);
        let q = CertComplex::real(CertReal::one(64)).div(&i).unwrap();
        assert!(q.im.contains(&super::super::Dyadic::from_int(-1)));
    }
}
