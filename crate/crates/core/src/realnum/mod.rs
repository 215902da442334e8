//! Certified arbitrary-precision real arithmetic and the algebraic constants
//! of the Padovan and Fibonacci recurrences.

mod complex;
mod constants;
mod dyadic;
mod elementary;
mod interval;
mod poly;

pub use complex::CertComplex;
pub use constants::{
    compute_constants, AlgebraicConstants, FIBONACCI_CHARPOLY, MINPOLY_A, MINPOLY_SQRT5_A, PADOVAN_CHARPOLY,
};
pub use dyadic::{Dyadic, Round};
pub use interval::{certified_compare, parse_decimal, CertReal};
pub use poly::{eval_poly, height_from_minpoly, real_root_near, Poly};

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Shared, memoized [`compute_constants`]; every caller at the same precision
/// gets the same immutable table.
pub fn constants_at(bits: u32) -> Result<Arc<AlgebraicConstants>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<AlgebraicConstants>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&bits) {
        return Ok(c.clone());
    }
    let c = Arc::new(compute_constants(bits)?);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(bits, c.clone());
    Ok(c)
}

/// Starting precision and hard cap for precision escalation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { start_bits: 192, max_bits: 16384 }
    }
}

impl PrecisionPolicy {
    /// Run at exactly one precision, never escalating.
    pub fn fixed(bits: u32) -> Self {
        PrecisionPolicy { start_bits: bits, max_bits: bits }
    }

    pub fn starting_at(bits: u32) -> Self {
        PrecisionPolicy { start_bits: bits, ..Default::default() }
    }

    /// Evaluate `f` at increasing precision until it returns `Some`.
    ///
    /// `Ok(None)` means "undecided at this precision": the precision doubles,
    /// up to `max_bits`, after which `PrecisionExhausted` is returned.
    pub fn escalate<T>(&self, stage: &str, mut f: impl FnMut(u32) -> Result<Option<T>>) -> Result<T> {
        let mut bits = self.start_bits.max(16);
        loop {
            if let Some(v) = f(bits)? {
                return Ok(v);
            }
            if bits >= self.max_bits {
                return Err(Error::PrecisionExhausted { stage: stage.to_string(), bits });
            }
            bits = (bits * 2).min(self.max_bits);
        }
    }
}
