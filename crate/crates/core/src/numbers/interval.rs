//! Rigorous rational enclosures of `π` and `cos(π s)` for rational `s`.
//!
//! Everything is computed in fixed point (integers scaled by `2^w`) with explicit
//! error bounds in units of the last place, then widened into a rational interval.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    /// `Some(±1)` when the interval excludes zero.
    pub fn strict_sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }
}

fn pow2(w: u32) -> BigInt {
    BigInt::one() << w
}

/// `atan(1/n)` scaled by `2^w`, with an error bound in ulps.
fn atan_inv_fixed(n: u64, w: u32) -> (BigInt, BigInt) {
    let n2 = BigInt::from(n * n);
    let mut power = pow2(w) / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    // Each floor costs at most one ulp per step and propagated errors shrink by n²;
    // the omitted alternating tail is below the first vanished term.
    (sum, BigInt::from(4 * k + 16))
}

/// `π` scaled by `2^w` as `(value, error in ulps)`, by Machin's formula.
fn pi_fixed(w: u32) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let (a, ea) = atan_inv_fixed(5, w);
    let (b, eb) = atan_inv_fixed(239, w);
    let v = (a * 16 - b * 4, ea * 16 + eb * 4);
    cache.lock().unwrap().insert(w, v.clone());
    v
}

/// Enclosure of `π` with width about `2^-bits`.
pub fn pi_enclosure(bits: u32) -> RatInterval {
    let w = bits + 16;
    let (v, e) = pi_fixed(w);
    let den = pow2(w);
    RatInterval {
        lo: BigRational::new(&v - &e, den.clone()),
        hi: BigRational::new(v + e, den),
    }
}

/// Enclosure of `cos(π s)` with width about `2^-bits` (plus the rounding of `s·π`).
pub fn cos_pi(s: &BigRational, bits: u32) -> RatInterval {
    // Reduce into [0, 1] using period 2 and evenness.
    let two = BigRational::from_integer(2.into());
    let mut s = s.clone() - (s / &two).floor() * &two;
    if s > BigRational::one() {
        s = &two - s;
    }
    if s.is_zero() {
        return RatInterval::point(BigRational::one());
    }
    if s.is_one() {
        return RatInterval::point(-BigRational::one());
    }
    if s == BigRational::new(1.into(), 2.into()) {
        return RatInterval::point(BigRational::zero());
    }

    let w = bits + 64;
    let scale = pow2(w);
    let (pv, pe) = pi_fixed(w);
    let num = s.numer();
    let den = s.denom();
    // θ ∈ [θl, θh] in fixed point; s > 0.
    let theta_lo = (num * (&pv - &pe)).div_floor(den);
    let theta_hi = (num * (&pv + &pe)).div_ceil(den);

    let x2 = (&theta_lo * &theta_lo) >> w;
    let mut term = scale.clone();
    let mut sum = scale.clone();
    let mut n: u64 = 1;
    loop {
        term = ((&term * &x2) >> w) / BigInt::from((2 * n - 1) * (2 * n));
        if term.is_zero() {
            break;
        }
        if n % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        n += 1;
    }
    // Per-term rounding error stays below 16 ulps for θ ≤ π (successive term ratios
    // are under 1 from the second term on); the alternating tail adds one more term.
    // cos is 1-Lipschitz, which absorbs the width of the θ enclosure.
    let err = BigInt::from(32 * (n + 2)) + (&theta_hi - &theta_lo);
    // Round outward to the requested precision.
    let out = pow2(bits);
    let lo = BigRational::new((&sum - &err).div_floor(&pow2(64)), out.clone()).max(-BigRational::one());
    let hi = BigRational::new((sum + err).div_ceil(&pow2(64)), out).min(BigRational::one());
    RatInterval { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::RealPoly;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn to_f64(x: &BigRational) -> f64 {
        use num_traits::ToPrimitive;
        x.to_f64().unwrap()
    }

    #[test]
    fn pi_is_enclosed() {
        for bits in [16, 64, 256] {
            let p = pi_enclosure(bits);
            assert!(to_f64(&p.lo) <= std::f64::consts::PI && std::f64::consts::PI <= to_f64(&p.hi));
            assert!(p.width() < BigRational::new(BigInt::one(), pow2(bits)));
        }
        // 355/113 overshoots π by 2.7e-7.
        assert!(pi_enclosure(64).hi < q(355, 113));
    }

    #[test]
    fn cos_matches_float() {
        for (n, d) in [(1, 3), (2, 5), (1, 7), (5, 6), (13, 10), (7, 4), (-1, 3), (99, 100)] {
            let s = q(n, d);
            let iv = cos_pi(&s, 64);
            let f = (std::f64::consts::PI * n as f64 / d as f64).cos();
            assert!(to_f64(&iv.lo) - 1e-15 <= f && f <= to_f64(&iv.hi) + 1e-15, "{n}/{d}");
            assert!(iv.width() < q(1, 1 << 40));
        }
    }

    #[test]
    fn cos_of_algebraic_points_is_certified() {
        // cos(π/3) = 1/2 and cos(2π/5) = (√5 - 1)/4 is a root of 4x² + 2x - 1.
        let iv = cos_pi(&q(1, 3), 128);
        assert!(iv.contains(&q(1, 2)));
        let iv = cos_pi(&q(2, 5), 128);
        let p = RealPoly::from_ints(&[-1, 2, 4]);
        assert!(p.eval(&iv.lo).is_negative() && p.eval(&iv.hi).is_positive());
    }

    #[test]
    fn exact_special_values() {
        assert_eq!(cos_pi(&q(0, 1), 8), RatInterval::point(q(1, 1)));
        assert_eq!(cos_pi(&q(3, 1), 8), RatInterval::point(q(-1, 1)));
        assert_eq!(cos_pi(&q(3, 2), 8), RatInterval::point(q(0, 1)));
    }
}
