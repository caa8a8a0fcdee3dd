//! Certified arithmetic for values of Laurent polynomials at points of the unit circle.
//!
//! Roots of unity land in cyclotomic fields; points with rational abscissa `x` land in
//! `Q(√(1 - x²), i)`. Signs of real elements are decided exactly where possible and by
//! interval evaluation at doubling precision otherwise. Zero is only ever reported from
//! an exact test.

mod cyclotomic;
pub mod interval;
mod quad;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{char_poly_berkowitz, Conjugate, Matrix, Ring};

pub use cyclotomic::{CyclotomicElement, CyclotomicField};
pub use quad::{QuadComplex, QuadExtNumber};

/// First rung of the precision ladder.
pub const START_PRECISION_BITS: u32 = 64;
pub const DEFAULT_MAX_PRECISION_BITS: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Half {
    Upper,
    Lower,
}

/// A point `ω` on the unit circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CirclePoint {
    /// `ω = exp(2πi·j/k)`.
    RootOfUnity { k: u64, j: u64 },
    /// `ω = x ± i√(1 - x²)`.
    RationalAbscissa {
        #[serde(with = "crate::serde_util::rational")]
        x: BigRational,
        half: Half,
    },
}

impl CirclePoint {
    pub fn root_of_unity(k: u64, j: u64) -> Result<Self> {
        let p = CirclePoint::RootOfUnity { k, j };
        p.validate()?;
        Ok(p)
    }

    pub fn abscissa(x: BigRational, half: Half) -> Result<Self> {
        let p = CirclePoint::RationalAbscissa { x, half };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CirclePoint::RootOfUnity { k, j } if *k >= 1 && (1..=*k).contains(j) => Ok(()),
            CirclePoint::RootOfUnity { k, j } => {
                Err(Error::InvalidInput(format!("root of unity needs 1 <= j <= k, got j={j}, k={k}")))
            }
            CirclePoint::RationalAbscissa { x, .. } if x.abs() <= BigRational::one() => Ok(()),
            CirclePoint::RationalAbscissa { x, .. } => {
                Err(Error::InvalidInput(format!("abscissa {x} outside [-1, 1]")))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn from_i8(s: i8) -> Self {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Exact,
    Interval { precision_bits: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedSign {
    pub value: Sign,
    pub certificate: Certificate,
}

impl CertifiedSign {
    fn exact(s: i8) -> Self {
        Self {
            value: Sign::from_i8(s),
            certificate: Certificate::Exact,
        }
    }
}

/// A real algebraic number of one of the two supported shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealAlgebraic {
    /// Must be fixed by conjugation; checked by [`certified_sign`].
    Cyclotomic(CyclotomicElement),
    Quad(QuadExtNumber),
}

impl RealAlgebraic {
    pub fn to_f64(&self) -> f64 {
        match self {
            RealAlgebraic::Cyclotomic(c) => c.to_complex().re,
            RealAlgebraic::Quad(q) => q.to_f64(),
        }
    }
}

/// Sign of a real algebraic number. Exact zero tests run first; nonzero cyclotomic
/// values are then bracketed at 64, 128, ... bits up to `max_bits`.
pub fn certified_sign(a: &RealAlgebraic, max_bits: u32) -> Result<CertifiedSign> {
    match a {
        RealAlgebraic::Quad(q) => Ok(CertifiedSign::exact(q.sign())),
        RealAlgebraic::Cyclotomic(c) => {
            if !c.is_real() {
                return Err(Error::NotReal);
            }
            if c.is_zero() {
                return Ok(CertifiedSign::exact(0));
            }
            if c.is_rational() {
                let v = &c.coords()[0];
                return Ok(CertifiedSign::exact(if v.is_positive() { 1 } else { -1 }));
            }
            let mut bits = START_PRECISION_BITS.min(max_bits.max(1));
            loop {
                if let Some(s) = c.real_part_enclosure(bits).strict_sign() {
                    return Ok(CertifiedSign {
                        value: Sign::from_i8(s),
                        certificate: Certificate::Interval { precision_bits: bits },
                    });
                }
                if bits >= max_bits {
                    return Err(Error::PrecisionExhausted(max_bits));
                }
                bits = (bits * 2).min(max_bits);
            }
        }
    }
}

/// Scalars that appear as entries of `ε_ω(U)`.
pub trait CircleScalar: Ring + Conjugate + PartialEq {
    /// The element as a real algebraic number, or `NotReal` if its imaginary part is
    /// nonzero.
    fn to_real(&self) -> Result<RealAlgebraic>;
}

impl CircleScalar for CyclotomicElement {
    fn to_real(&self) -> Result<RealAlgebraic> {
        if self.is_real() {
            Ok(RealAlgebraic::Cyclotomic(self.clone()))
        } else {
            Err(Error::NotReal)
        }
    }
}

impl CircleScalar for QuadComplex {
    fn to_real(&self) -> Result<RealAlgebraic> {
        if self.is_real() {
            Ok(RealAlgebraic::Quad(self.re.clone()))
        } else {
            Err(Error::NotReal)
        }
    }
}

pub fn is_hermitian<T: CircleScalar>(m: &[Vec<T>]) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n)
        && (0..n).all(|i| (i..n).all(|j| m[j][i] == m[i][j].conj()))
}

/// Characteristic polynomial `det(xI - m)` of a Hermitian matrix, descending
/// coefficients, each certified real.
pub fn char_poly<T: CircleScalar>(m: &[Vec<T>]) -> Result<Vec<RealAlgebraic>> {
    if m.is_empty() {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if !is_hermitian(m) {
        return Err(Error::NotHermitian);
    }
    let one = m[0][0].one_like();
    char_poly_berkowitz(m, &one).iter().map(CircleScalar::to_real).collect()
}

/// Signature (#positive - #negative roots) of a real-rooted polynomial given by
/// descending coefficients, by Descartes' rule of signs. Exact for real-rooted input;
/// a factor `x^m` (zero eigenvalues) contributes nothing.
pub fn signature_descartes(charpoly: &[RealAlgebraic], max_bits: u32) -> Result<i64> {
    let mut signs = Vec::with_capacity(charpoly.len());
    for c in charpoly {
        signs.push(certified_sign(c, max_bits)?.value.as_i8());
    }
    // Ascending order; drop the x^m factor.
    signs.reverse();
    let first = signs.iter().position(|s| *s != 0).unwrap_or(signs.len());
    let tail = &signs[first..];
    let positive = variations(tail.iter().copied());
    let negative = variations(
        tail.iter()
            .enumerate()
            .map(|(i, s)| if i % 2 == 0 { *s } else { -*s }),
    );
    Ok(positive as i64 - negative as i64)
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let nz: Vec<i8> = signs.filter(|s| *s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Signature of a Hermitian matrix.
pub fn signature<T: CircleScalar>(m: &[Vec<T>], max_bits: u32) -> Result<i64> {
    signature_descartes(&char_poly(m)?, max_bits)
}

/// Hermitian matrix over one of the exact scalar fields.
#[derive(Debug, Clone, PartialEq)]
pub enum EvaluatedMatrix {
    Cyclotomic(Matrix<CyclotomicElement>),
    Quadratic(Matrix<QuadComplex>),
}

impl EvaluatedMatrix {
    pub fn size(&self) -> usize {
        match self {
            EvaluatedMatrix::Cyclotomic(m) => m.len(),
            EvaluatedMatrix::Quadratic(m) => m.len(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        match self {
            EvaluatedMatrix::Cyclotomic(m) => is_hermitian(m),
            EvaluatedMatrix::Quadratic(m) => is_hermitian(m),
        }
    }

    pub fn char_poly(&self) -> Result<Vec<RealAlgebraic>> {
        match self {
            EvaluatedMatrix::Cyclotomic(m) => char_poly(m),
            EvaluatedMatrix::Quadratic(m) => char_poly(m),
        }
    }

    pub fn signature(&self, max_bits: u32) -> Result<i64> {
        signature_descartes(&self.char_poly()?, max_bits)
    }

    /// Entries as floating complex numbers; for oracles and diagnostics.
    pub fn to_complex(&self) -> Vec<Vec<num_complex::Complex64>> {
        match self {
            EvaluatedMatrix::Cyclotomic(m) => m.iter().map(|r| r.iter().map(|e| e.to_complex()).collect()).collect(),
            EvaluatedMatrix::Quadratic(m) => m.iter().map(|r| r.iter().map(|e| e.to_complex()).collect()).collect(),
        }
    }

    /// Entries as rationals when every entry is rational.
    pub fn to_rational(&self) -> Option<Matrix<BigRational>> {
        let rat_cyc = |e: &CyclotomicElement| e.is_rational().then(|| e.coords()[0].clone());
        let rat_quad = |e: &QuadComplex| {
            (e.im.is_zero() && (e.re.b.is_zero() || e.re.d.is_zero())).then(|| e.re.a.clone())
        };
        match self {
            EvaluatedMatrix::Cyclotomic(m) => m.iter().map(|r| r.iter().map(rat_cyc).collect()).collect(),
            EvaluatedMatrix::Quadratic(m) => m.iter().map(|r| r.iter().map(rat_quad).collect()).collect(),
        }
    }
}

/// Convenience: rational matrix as a cyclotomic matrix of order 1.
pub fn rational_matrix(m: &[Vec<BigRational>]) -> EvaluatedMatrix {
    EvaluatedMatrix::Cyclotomic(
        m.iter()
            .map(|r| r.iter().map(|q| CyclotomicElement::from_rational(1, q.clone())).collect())
            .collect(),
    )
}


#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int_matrix(rows: &[&[i64]]) -> EvaluatedMatrix {
        rational_matrix(&rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect::<Vec<_>>())
    }

    fn coeffs(m: &EvaluatedMatrix) -> Vec<f64> {
        m.char_poly().unwrap().iter().map(RealAlgebraic::to_f64).collect()
    }

    #[test]
    fn certified_sign_examples() {
        let z3 = CyclotomicElement::zeta_pow(3, 1);
        let tr = z3.checked_add(&z3.conjugate()).unwrap();
        let s = certified_sign(&RealAlgebraic::Cyclotomic(tr), 4096).unwrap();
        assert_eq!(s.value, Sign::Negative);

        let zero = QuadExtNumber::new(q(0, 1), q(0, 1), q(3, 4));
        let s = certified_sign(&RealAlgebraic::Quad(zero), 4096).unwrap();
        assert_eq!(s, CertifiedSign { value: Sign::Zero, certificate: Certificate::Exact });

        // ζ5 + ζ5^-1 - 1/2 = 2cos 72° - 1/2 ≈ 0.118.
        let z5 = CyclotomicElement::zeta_pow(5, 1);
        let v = z5
            .checked_add(&z5.conjugate())
            .unwrap()
            .checked_sub(&CyclotomicElement::from_rational(5, q(1, 2)))
            .unwrap();
        let s = certified_sign(&RealAlgebraic::Cyclotomic(v), 4096).unwrap();
        assert_eq!(s.value, Sign::Positive);
        assert!(matches!(s.certificate, Certificate::Interval { .. }));
    }

    #[test]
    fn non_real_is_rejected() {
        let z5 = CyclotomicElement::zeta_pow(5, 1);
        assert_eq!(certified_sign(&RealAlgebraic::Cyclotomic(z5), 4096), Err(Error::NotReal));
    }

    #[test]
    fn precision_cap_is_reported() {
        // 2cos(2π/7) - 1.2469796 differs from zero only around 2^-25.
        let z7 = CyclotomicElement::zeta_pow(7, 1);
        let v = z7
            .checked_add(&z7.conjugate())
            .unwrap()
            .checked_sub(&CyclotomicElement::from_rational(7, q(12469796, 10000000)))
            .unwrap();
        let a = RealAlgebraic::Cyclotomic(v);
        assert_eq!(certified_sign(&a, 8), Err(Error::PrecisionExhausted(8)));
        assert!(certified_sign(&a, 4096).is_ok());
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(coeffs(&int_matrix(&[&[0, 1], &[1, 0]])), vec![1.0, 0.0, -1.0]);
        assert_eq!(coeffs(&int_matrix(&[&[-1, 1], &[1, -1]])), vec![1.0, 2.0, 0.0]);
        assert_eq!(coeffs(&int_matrix(&[&[-4, 1], &[1, -4]])), vec![1.0, 8.0, 15.0]);
        assert_eq!(int_matrix(&[&[0, 1], &[2, 0]]).char_poly(), Err(Error::NotHermitian));
    }

    #[test]
    fn descartes_examples() {
        assert_eq!(int_matrix(&[&[0, 1], &[1, 0]]).signature(4096).unwrap(), 0);
        assert_eq!(int_matrix(&[&[-4, 1], &[1, -4]]).signature(4096).unwrap(), -2);
        assert_eq!(int_matrix(&[&[-1, 1], &[1, -1]]).signature(4096).unwrap(), -1);
        assert_eq!(int_matrix(&[&[0, 0], &[0, 0]]).signature(4096).unwrap(), 0);
        assert_eq!(int_matrix(&[&[2]]).signature(4096).unwrap(), 1);
    }

    #[test]
    fn circle_point_validation() {
        assert!(CirclePoint::root_of_unity(6, 0).is_err());
        assert!(CirclePoint::root_of_unity(6, 6).is_ok());
        assert!(CirclePoint::abscissa(q(3, 2), Half::Upper).is_err());
        assert!(CirclePoint::abscissa(q(-1, 1), Half::Lower).is_ok());
    }
}
