use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::{cos_pi, RatInterval};
use crate::error::{Error, Result};
use crate::laurent::{cyclotomic_poly, euler_phi, LaurentPoly};
use crate::linalg::{Conjugate, Ring};

/// `Q(ζ_k)` presented as `Q[x]/Φ_k(x)` in the power basis.
#[derive(Debug)]
pub struct CyclotomicField {
    k: u64,
    degree: usize,
    /// `x^e mod Φ_k` for `0 <= e < k`.
    powers: Vec<Vec<BigRational>>,
}

impl CyclotomicField {
    /// Shared field of order `k` (`k >= 1`).
    pub fn get(k: u64) -> Arc<Self> {
        assert!(k >= 1, "cyclotomic order must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&k) {
            return f.clone();
        }
        let field = Arc::new(Self::build(k));
        cache.lock().unwrap().insert(k, field.clone());
        field
    }

    fn build(k: u64) -> Self {
        let degree = euler_phi(k) as usize;
        let (_, phi) = cyclotomic_poly(k).to_dense();
        let phi: Vec<BigRational> = phi.into_iter().map(BigRational::from_integer).collect();
        let mut powers = Vec::with_capacity(k as usize);
        let mut cur = vec![BigRational::zero(); degree];
        cur[0] = BigRational::one();
        for _ in 0..k {
            powers.push(cur.clone());
            // Multiply by x and reduce with the monic relation x^deg = -Σ φ_i x^i.
            let carry = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigRational::zero();
            if !carry.is_zero() {
                for i in 0..degree {
                    cur[i] -= &carry * &phi[i];
                }
            }
        }
        Self { k, degree, powers }
    }

    pub fn order(&self) -> u64 {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Element of `Q(ζ_k)` with canonical coordinates of degree below `φ(k)`.
#[derive(Clone)]
pub struct CyclotomicElement {
    field: Arc<CyclotomicField>,
    coords: Vec<BigRational>,
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.k == other.field.k && self.coords == other.coords
    }
}

impl Eq for CyclotomicElement {}

impl CyclotomicElement {
    pub fn zero(k: u64) -> Self {
        let field = CyclotomicField::get(k);
        let coords = vec![BigRational::zero(); field.degree];
        Self { field, coords }
    }

    pub fn from_rational(k: u64, q: BigRational) -> Self {
        let mut e = Self::zero(k);
        e.coords[0] = q;
        e
    }

    pub fn one(k: u64) -> Self {
        Self::from_rational(k, BigRational::one())
    }

    /// `ζ_k^e` for any integer exponent.
    pub fn zeta_pow(k: u64, e: i64) -> Self {
        let field = CyclotomicField::get(k);
        let idx = e.rem_euclid(k as i64) as usize;
        let coords = field.powers[idx].clone();
        Self { field, coords }
    }

    /// Image of a Laurent polynomial under `u -> ζ_k^j`.
    pub fn from_laurent(k: u64, p: &LaurentPoly, j: i64) -> Self {
        let field = CyclotomicField::get(k);
        let mut coords = vec![BigRational::zero(); field.degree];
        for (e, c) in p.terms() {
            let idx = (e * j).rem_euclid(k as i64) as usize;
            let c = BigRational::from_integer(c.clone());
            for (acc, v) in coords.iter_mut().zip(&field.powers[idx]) {
                if !v.is_zero() {
                    *acc += &c * v;
                }
            }
        }
        Self { field, coords }
    }

    /// Builds from raw power-basis coordinates of any length, reducing modulo `Φ_k`.
    pub fn from_coords(k: u64, raw: &[BigRational]) -> Self {
        let field = CyclotomicField::get(k);
        let mut coords = vec![BigRational::zero(); field.degree];
        for (e, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = e % k as usize;
            for (acc, v) in coords.iter_mut().zip(&field.powers[idx]) {
                *acc += c * v;
            }
        }
        Self { field, coords }
    }

    pub fn order(&self) -> u64 {
        self.field.k
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(Zero::is_zero)
    }

    /// Fixed by complex conjugation, decided exactly.
    pub fn is_real(&self) -> bool {
        self.conj_unchecked() == *self
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.field.k == o.field.k {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.field.k, o.field.k))
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.add_unchecked(o))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.add_unchecked(&o.neg_unchecked()))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    /// The automorphism `ζ -> ζ^{k-1}`, i.e. complex conjugation.
    pub fn conjugate(&self) -> Self {
        self.conj_unchecked()
    }

    fn add_unchecked(&self, o: &Self) -> Self {
        Self {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    fn neg_unchecked(&self) -> Self {
        Self {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let d = self.field.degree;
        let mut raw = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Self::from_coords(self.field.k, &raw)
    }

    fn conj_unchecked(&self) -> Self {
        let k = self.field.k as usize;
        let mut raw = vec![BigRational::zero(); k];
        for (i, c) in self.coords.iter().enumerate() {
            raw[(k - i % k) % k] += c;
        }
        Self::from_coords(self.field.k, &raw)
    }

    /// Enclosure of the real part of the value at `ζ_k = e^{2πi/k}`. For a real element
    /// this encloses the element itself.
    pub fn real_part_enclosure(&self, bits: u32) -> RatInterval {
        let k = self.field.k as i64;
        let mut acc = RatInterval::point(BigRational::zero());
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = BigRational::new((2 * i as i64).into(), k.into());
            acc = acc.add(&cos_pi(&s, bits).scale(c));
        }
        acc
    }

    /// Floating value at `ζ_k = e^{2πi/k}`; diagnostics and tests only.
    pub fn to_complex(&self) -> Complex64 {
        let k = self.field.k as f64;
        self.coords.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (i, c)| {
            let ang = 2.0 * std::f64::consts::PI * i as f64 / k;
            acc + Complex64::from_polar(crate::laurent::rational_to_f64(c), ang)
        })
    }
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 => format!("({c})z{}", self.field.k),
                i => format!("({c})z{}^{i}", self.field.k),
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

// Matrix algorithms only combine entries of one field; orders are validated when
// matrices are built.
impl Ring for CyclotomicElement {
    fn zero_like(&self) -> Self {
        Self::zero(self.field.k)
    }
    fn one_like(&self) -> Self {
        Self::one(self.field.k)
    }
    fn plus(&self, o: &Self) -> Self {
        debug_assert_eq!(self.field.k, o.field.k);
        self.add_unchecked(o)
    }
    fn minus(&self, o: &Self) -> Self {
        debug_assert_eq!(self.field.k, o.field.k);
        self.add_unchecked(&o.neg_unchecked())
    }
    fn times(&self, o: &Self) -> Self {
        debug_assert_eq!(self.field.k, o.field.k);
        self.mul_unchecked(o)
    }
    fn negated(&self) -> Self {
        self.neg_unchecked()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Conjugate for CyclotomicElement {
    fn conj(&self) -> Self {
        self.conj_unchecked()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn unit_times_inverse() {
        let z = CyclotomicElement::zeta_pow(6, 1);
        let zi = CyclotomicElement::zeta_pow(6, -1);
        assert_eq!(z.checked_mul(&zi).unwrap(), CyclotomicElement::one(6));
    }

    #[test]
    fn zeta3_trace_is_minus_one() {
        let z = CyclotomicElement::zeta_pow(3, 1);
        let s = z.checked_add(&z.conjugate()).unwrap();
        assert_eq!(s, CyclotomicElement::from_rational(3, q(-1, 1)));
        assert!(s.is_real());
        assert!(!z.is_real());
    }

    #[test]
    fn conjugation_is_an_involution() {
        let a = CyclotomicElement::zeta_pow(5, 1)
            .checked_add(&CyclotomicElement::from_rational(5, q(2, 1)))
            .unwrap();
        assert_eq!(a.conjugate().conjugate(), a);
        assert_ne!(a.conjugate(), a);
    }

    #[test]
    fn mismatched_orders() {
        let a = CyclotomicElement::one(3);
        let b = CyclotomicElement::one(4);
        assert_eq!(a.checked_add(&b), Err(Error::OrderMismatch(3, 4)));
        assert_eq!(a.checked_mul(&b), Err(Error::OrderMismatch(3, 4)));
    }

    #[test]
    fn laurent_substitution() {
        // u - 2 + u^-1 at ζ_6 is 2cos(π/3) - 2 = -1.
        let p = LaurentPoly::from_pairs([(1, 1), (0, -2), (-1, 1)]);
        assert_eq!(CyclotomicElement::from_laurent(6, &p, 1), CyclotomicElement::from_rational(6, q(-1, 1)));
        assert_eq!(CyclotomicElement::from_laurent(3, &p, 2), CyclotomicElement::from_rational(3, q(-3, 1)));
        assert_eq!(CyclotomicElement::from_laurent(1, &p, 1), CyclotomicElement::zero(1));
    }

    #[test]
    fn float_values() {
        let z = CyclotomicElement::zeta_pow(8, 3);
        let v = z.to_complex();
        let want = Complex64::from_polar(1.0, 6.0 * std::f64::consts::PI / 8.0);
        assert!((v - want).norm() < 1e-12);
    }
}
