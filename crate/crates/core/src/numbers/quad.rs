use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{Conjugate, Ring};

/// Real number `a + b·√d` with rational `a`, `b` and `d >= 0`.
///
/// Values with `b = 0` are plain rationals and combine with any radicand.
#[derive(Clone, Serialize, Deserialize)]
pub struct QuadExtNumber {
    #[serde(with = "crate::serde_util::rational")]
    pub a: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub b: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub d: BigRational,
}

impl QuadExtNumber {
    pub fn new(a: BigRational, b: BigRational, d: BigRational) -> Self {
        assert!(!d.is_negative(), "radicand must be nonnegative");
        Self { a, b, d }.tidy()
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
            d: BigRational::zero(),
        }
    }

    fn tidy(mut self) -> Self {
        if self.d.is_zero() {
            self.b = BigRational::zero();
        }
        self
    }

    fn radicand(&self, o: &Self) -> BigRational {
        if self.b.is_zero() {
            o.d.clone()
        } else {
            debug_assert!(o.b.is_zero() || self.d == o.d, "radicands differ");
            self.d.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    /// Exact sign by rationalization: compare `a²` with `b²d` when `a` and `b√d`
    /// have opposite signs.
    pub fn sign(&self) -> i8 {
        let sa = signum(&self.a);
        let sb = if self.d.is_zero() { 0 } else { signum(&self.b) };
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &self.d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        use crate::laurent::rational_to_f64;
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * rational_to_f64(&self.d).sqrt()
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            d: self.radicand(o),
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    fn neg(&self) -> Self {
        Self {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let d = self.radicand(o);
        Self {
            a: &self.a * &o.a + &self.b * &o.b * &d,
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
        .tidy()
    }
}

// Compares values, not representations: `0 + 1·√(9/25)` equals `3/5`.
impl PartialEq for QuadExtNumber {
    fn eq(&self, o: &Self) -> bool {
        if !self.b.is_zero() && !o.b.is_zero() && self.d != o.d {
            return false;
        }
        self.add(&o.neg()).is_zero()
    }
}

impl Eq for QuadExtNumber {}

fn signum(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Debug for QuadExtNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}·√{}", self.a, self.b, self.d)
        }
    }
}

/// Complex number `re + i·im` with both parts in `Q(√d)`; entries of `ε_ω(U)` at
/// `ω = x ± i√(1 - x²)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadComplex {
    pub re: QuadExtNumber,
    pub im: QuadExtNumber,
}

impl QuadComplex {
    pub fn from_parts(re: QuadExtNumber, im: QuadExtNumber) -> Self {
        Self { re, im }
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            re: QuadExtNumber::rational(a),
            im: QuadExtNumber::rational(BigRational::zero()),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Ring for QuadComplex {
    fn zero_like(&self) -> Self {
        Self::rational(BigRational::zero())
    }
    fn one_like(&self) -> Self {
        Self::rational(BigRational::one())
    }
    fn plus(&self, o: &Self) -> Self {
        Self {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        Self {
            re: self.re.mul(&o.re).add(&self.im.mul(&o.im).neg()),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn negated(&self) -> Self {
        Self {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Conjugate for QuadComplex {
    fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_signs() {
        assert_eq!(QuadExtNumber::new(q(0, 1), q(0, 1), q(3, 4)).sign(), 0);
        assert_eq!(QuadExtNumber::new(q(1, 1), q(-1, 1), q(2, 1)).sign(), -1);
        assert_eq!(QuadExtNumber::new(q(-1, 1), q(1, 1), q(2, 1)).sign(), 1);
        // 3/5 - √(9/25) = 0 exactly.
        assert_eq!(QuadExtNumber::new(q(3, 5), q(-1, 1), q(9, 25)).sign(), 0);
        assert_eq!(QuadExtNumber::new(q(-2, 1), q(0, 1), q(2, 1)).sign(), -1);
    }

    #[test]
    fn complex_arithmetic_on_circle() {
        // ω = 1/2 + i√(3/4) is a primitive sixth root of unity: ω³ = -1.
        let d = q(3, 4);
        let w = QuadComplex::from_parts(QuadExtNumber::rational(q(1, 2)), QuadExtNumber::new(q(0, 1), q(1, 1), d));
        let w3 = w.times(&w).times(&w);
        assert_eq!(w3.re.sign(), -1);
        assert!(w3.im.is_zero());
        assert!(w3.plus(&w3.one_like()).is_zero_elem());
        let n = w.times(&w.conj());
        assert!(n.minus(&n.one_like()).is_zero_elem());
    }
}
