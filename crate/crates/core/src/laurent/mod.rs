//! Integer Laurent polynomials `Z[t, t^-1]` with the involution `t -> t^-1`.
//!
//! Coefficients are arbitrary precision; zero coefficients are never stored, so
//! structural equality is ring equality.

mod cyclotomic;
mod real;
mod resultant;
mod sturm;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cyclotomic::{cyclotomic_poly, cyclotomic_strip, distinct_prime_factors, euler_phi, CyclotomicStrip};
pub use real::{chebyshev_reduce, RealPoly};
pub(crate) use real::rational_to_f64;
pub use resultant::{resultant, sylvester_resultant};
pub use sturm::{sturm_isolate, IsolatedRoot};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(exp: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_pairs<C: Into<BigInt>>(pairs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, &c.into());
        }
        p
    }

    /// Dense ascending coefficients starting at `t^low`.
    pub fn from_dense<C: Into<BigInt>>(low: i64, coeffs: impl IntoIterator<Item = C>) -> Self {
        Self::from_pairs(coeffs.into_iter().enumerate().map(|(i, c)| (low + i as i64, c)))
    }

    fn add_term(&mut self, exp: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Width of the exponent support (`max - min`); zero for monomials and for zero.
    pub fn span(&self) -> u64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (hi - lo) as u64,
            _ => 0,
        }
    }

    pub fn lowest_coeff(&self) -> Option<&BigInt> {
        self.coeffs.values().next()
    }

    pub fn highest_coeff(&self) -> Option<&BigInt> {
        self.coeffs.values().next_back()
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// The ring involution `t^k -> t^-k`.
    pub fn involute(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(e, c)| self.coeffs.get(&-e) == Some(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Augmentation `t -> 1`: the sum of all coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        let x = BigRational::from_integer(x.clone());
        self.coeffs.iter().fold(BigRational::zero(), |acc, (e, c)| {
            acc + BigRational::from_integer(c.clone()) * pow_rational(&x, *e)
        })
    }

    /// Substitution `t -> t^a`. With `a = 0` every term collapses onto the constant.
    pub fn substitute_power(&self, a: i64) -> Self {
        Self::from_pairs(self.coeffs.iter().map(|(e, c)| (e * a, c.clone())))
    }

    /// A unit of `Z[t, t^-1]` is `±t^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().all(|c| c.abs().is_one())
    }

    /// Canonical associate: nonnegative exponents, nonzero constant term and positive
    /// leading coefficient.
    pub fn alexander_normalize(&self) -> Result<Self> {
        let low = self.min_exp().ok_or(Error::ZeroPolynomial)?;
        let p = self.shift(-low);
        if p.highest_coeff().is_some_and(|c| c.is_negative()) {
            Ok(-p)
        } else {
            Ok(p)
        }
    }

    /// Dense ascending coefficients of `t^-min_exp * self`, together with `min_exp`.
    pub fn to_dense(&self) -> (i64, Vec<BigInt>) {
        let Some(low) = self.min_exp() else {
            return (0, Vec::new());
        };
        let mut out = vec![BigInt::zero(); self.span() as usize + 1];
        for (e, c) in &self.coeffs {
            out[(e - low) as usize] = c.clone();
        }
        (low, out)
    }

    /// Exact quotient `self / d` in `Z[t, t^-1]`, or `None` when `d` does not divide
    /// `self` or the rational quotient has a non-integer coefficient.
    pub fn checked_div(&self, d: &Self) -> Option<Self> {
        let (q, r, low) = self.div_rem_rational(d)?;
        if r.iter().any(|c| !c.is_zero()) || q.iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(Self::from_dense(low, q.into_iter().map(|c| c.to_integer())))
    }

    /// Long division of the polynomial parts over `Q`. Returns quotient, remainder and
    /// the exponent offset of the quotient. `None` only for `d = 0`.
    fn div_rem_rational(&self, d: &Self) -> Option<(Vec<BigRational>, Vec<BigRational>, i64)> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some((Vec::new(), Vec::new(), 0));
        }
        let (nl, num) = self.to_dense();
        let (dl, den) = d.to_dense();
        let mut rem: Vec<BigRational> = num.into_iter().map(BigRational::from_integer).collect();
        let den: Vec<BigRational> = den.into_iter().map(BigRational::from_integer).collect();
        let dd = den.len() - 1;
        if rem.len() <= dd {
            return Some((Vec::new(), rem, 0));
        }
        let lead = den[dd].clone();
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in den.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((quot, rem, nl - dl))
    }

    /// Renders with a chosen variable name, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match *e {
                0 => String::new(),
                1 => var.to_string(),
                e => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}{mono}"));
            }
        }
        out
    }
}

fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl crate::linalg::Ring for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero()
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl crate::linalg::Conjugate for LaurentPoly {
    fn conj(&self) -> Self {
        self.involute()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

// Interchange encoding: [[exponent, "coefficient"], ...] in ascending exponent order.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            seq.serialize_element(&(e, c.to_string()))?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Str(String),
    Int(i64),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct PairsVisitor;
        impl<'de> Visitor<'de> for PairsVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a list of [exponent, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<LaurentPoly, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((e, c)) = seq.next_element::<(i64, CoeffRepr)>()? {
                    let c = match c {
                        CoeffRepr::Int(v) => BigInt::from(v),
                        CoeffRepr::Str(s) => s
                            .trim()
                            .parse::<BigInt>()
                            .map_err(|_| de::Error::custom(format!("bad coefficient {s:?}")))?,
                    };
                    p.add_term(e, &c);
                }
                Ok(p)
            }
        }
        d.deserialize_seq(PairsVisitor)
    }
}
