use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::LaurentPoly;
use crate::error::Result;

/// Euler's totient.
pub fn euler_phi(m: u64) -> u64 {
    distinct_prime_factors(m)
        .into_iter()
        .fold(m, |acc, p| acc / p * (p - 1))
}

pub fn distinct_prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn cache() -> &'static Mutex<HashMap<u64, LaurentPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, LaurentPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `m`-th cyclotomic polynomial, obtained by dividing `t^m - 1` by `Φ_d` for every
/// proper divisor `d` of `m`.
///
/// # Panics
/// If `m == 0`.
pub fn cyclotomic_poly(m: u64) -> LaurentPoly {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(p) = cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let mut acc = LaurentPoly::from_pairs([(m as i64, 1), (0, -1)]);
    for d in 1..m {
        if m.is_multiple_of(d) {
            acc = acc
                .checked_div(&cyclotomic_poly(d))
                .expect("cyclotomic division chain is exact");
        }
    }
    cache().lock().unwrap().insert(m, acc.clone());
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicStrip {
    /// `(m, multiplicity)` for each `Φ_m` dividing the input, ascending in `m`.
    pub factors: Vec<(u64, u32)>,
    /// Cofactor with all cyclotomic factors removed, in canonical normal form.
    pub remainder: LaurentPoly,
}

impl CyclotomicStrip {
    /// True when every irreducible factor of the input is cyclotomic.
    pub fn fully_cyclotomic(&self) -> bool {
        self.remainder.is_unit()
    }
}

/// Removes every cyclotomic factor by trial division over all `m` with `φ(m) <= deg f`.
pub fn cyclotomic_strip(f: &LaurentPoly) -> Result<CyclotomicStrip> {
    let mut g = f.alexander_normalize()?;
    let mut factors = Vec::new();
    // φ(m) >= sqrt(m/2), so no m beyond 2·deg² can qualify.
    let bound = 2 * g.span() * g.span() + 2;
    let mut m = 1;
    while m <= bound && g.span() > 0 {
        if euler_phi(m) <= g.span() {
            let phi_m = cyclotomic_poly(m);
            let mut mult = 0;
            while let Some(q) = g.checked_div(&phi_m) {
                g = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((m, mult));
            }
        }
        m += 1;
    }
    Ok(CyclotomicStrip {
        factors,
        remainder: g.alexander_normalize()?,
    })
}
