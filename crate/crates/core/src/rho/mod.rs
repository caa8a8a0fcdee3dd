//! Hermitian matrices over `Z[u, u^-1]` in the image of a cyclic embedding `u -> g`,
//! their evaluations `ε_ω` on the unit circle, signature functions, and the finite and
//! integral ρ-invariant formulas.

mod report;
mod signature;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::covers::Entries;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{det_ring, Matrix};
use crate::numbers::{
    rational_matrix, CirclePoint, CyclotomicElement, EvaluatedMatrix, Half, QuadComplex, QuadExtNumber,
};

pub use report::{doubly_slice_report, HypothesisCheck, ObstructionReport, RhoRow, Verdict};
pub use signature::{
    rho_finite, rho_from_signature, rho_integral, signature_function, Breakpoint, EndpointValues, RhoMode,
    RhoOptions, RhoResult, RhoValue, SignatureFunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorOrder {
    Infinite,
    Finite(u64),
}

impl fmt::Display for GeneratorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorOrder::Infinite => f.write_str("infinite"),
            GeneratorOrder::Finite(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OrderRepr {
    Finite(u64),
    Word(String),
}

impl Serialize for GeneratorOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GeneratorOrder::Infinite => OrderRepr::Word("infinite".into()),
            GeneratorOrder::Finite(k) => OrderRepr::Finite(*k),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match OrderRepr::deserialize(d)? {
            OrderRepr::Word(w) if w == "infinite" => Ok(GeneratorOrder::Infinite),
            OrderRepr::Word(w) => Err(serde::de::Error::custom(format!("bad order {w:?}"))),
            OrderRepr::Finite(0) => Err(serde::de::Error::custom("finite order must be at least 1")),
            OrderRepr::Finite(k) => Ok(GeneratorOrder::Finite(k)),
        }
    }
}

/// The element `g` that `u` maps to, its order, and its image `t^a` in the
/// abelianization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicEmbedding {
    #[serde(default = "default_generator_name", rename = "name")]
    pub generator_name: String,
    pub order: GeneratorOrder,
    #[serde(default)]
    pub abelianization_image: i64,
}

fn default_generator_name() -> String {
    "g".to_string()
}

impl CyclicEmbedding {
    pub fn new(name: &str, order: GeneratorOrder, abelianization_image: i64) -> Result<Self> {
        if order == GeneratorOrder::Finite(0) {
            return Err(Error::InvalidInput("finite order must be at least 1".into()));
        }
        Ok(Self {
            generator_name: name.to_string(),
            order,
            abelianization_image,
        })
    }

    pub fn infinite() -> Self {
        Self {
            generator_name: default_generator_name(),
            order: GeneratorOrder::Infinite,
            abelianization_image: 0,
        }
    }
}

/// Square Hermitian matrix over `Z[u, u^-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermMatrix {
    entries: Matrix<LaurentPoly>,
    context: CyclicEmbedding,
}

#[derive(Serialize, Deserialize)]
struct HermRepr {
    size: usize,
    entries: Entries,
    generator: CyclicEmbedding,
}

impl Serialize for HermMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HermRepr {
            size: self.size(),
            entries: Entries::flat(&self.entries),
            generator: self.context.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = HermRepr::deserialize(d)?;
        let m = r.entries.into_matrix(r.size).map_err(serde::de::Error::custom)?;
        HermMatrix::new(m, r.generator).map_err(serde::de::Error::custom)
    }
}

/// `T_n(x)` and `U_{n-1}(x)` for `n >= 0`, with `U_{-1} = 0`.
fn chebyshev_pair(x: &BigRational, n: u64) -> (BigRational, BigRational) {
    let two_x = x * BigRational::from_integer(2.into());
    let (mut t_prev, mut t) = (BigRational::one(), x.clone());
    let (mut u_prev, mut u) = (BigRational::zero(), BigRational::one());
    if n == 0 {
        return (t_prev, u_prev);
    }
    for _ in 1..n {
        let t_next = &two_x * &t - &t_prev;
        let u_next = &two_x * &u - &u_prev;
        t_prev = std::mem::replace(&mut t, t_next);
        u_prev = std::mem::replace(&mut u, u_next);
    }
    (t, u)
}

impl HermMatrix {
    pub fn new(entries: Matrix<LaurentPoly>, context: CyclicEmbedding) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix must be nonempty and square".into()));
        }
        if context.order == GeneratorOrder::Finite(0) {
            return Err(Error::InvalidInput("finite order must be at least 1".into()));
        }
        for i in 0..n {
            for j in i..n {
                if entries[j][i] != entries[i][j].involute() {
                    return Err(Error::NotHermitian);
                }
            }
        }
        Ok(Self { entries, context })
    }

    pub fn from_pairs(rows: &[&[&[(i64, i64)]]], context: CyclicEmbedding) -> Result<Self> {
        let m = rows
            .iter()
            .map(|r| r.iter().map(|e| LaurentPoly::from_pairs(e.iter().copied())).collect())
            .collect();
        Self::new(m, context)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &Matrix<LaurentPoly> {
        &self.entries
    }

    pub fn context(&self) -> &CyclicEmbedding {
        &self.context
    }

    pub fn with_context(&self, context: CyclicEmbedding) -> Self {
        Self {
            entries: self.entries.clone(),
            context,
        }
    }

    /// Entrywise involution, which is the transpose of a Hermitian matrix.
    pub fn involuted(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|r| r.iter().map(LaurentPoly::involute).collect()).collect(),
            context: self.context.clone(),
        }
    }

    pub fn determinant(&self) -> LaurentPoly {
        det_ring(&self.entries, &LaurentPoly::one())
    }

    /// A matrix `V` with `U = V + conj(V)^T`, when one exists. The off-diagonal part
    /// is free; a diagonal entry splits iff its constant coefficient is even.
    pub fn even_witness(&self) -> Option<Matrix<LaurentPoly>> {
        let n = self.size();
        let two = BigInt::from(2);
        let mut v = vec![vec![LaurentPoly::zero(); n]; n];
        for i in 0..n {
            let d = &self.entries[i][i];
            let c0 = d.coeff(0);
            if !(&c0 % &two).is_zero() {
                return None;
            }
            v[i][i] = LaurentPoly::from_pairs(
                d.terms()
                    .filter(|(e, _)| *e > 0)
                    .map(|(e, c)| (e, c.clone()))
                    .chain(std::iter::once((0, c0 / &two))),
            );
            for j in i + 1..n {
                v[i][j] = self.entries[i][j].clone();
            }
        }
        Some(v)
    }

    pub fn is_even(&self) -> bool {
        self.even_witness().is_some()
    }

    /// Image under `u -> t^a`.
    pub fn abelianized(&self) -> Matrix<LaurentPoly> {
        let a = self.context.abelianization_image;
        self.entries.iter().map(|r| r.iter().map(|e| e.substitute_power(a)).collect()).collect()
    }

    /// Whether the abelianized matrix is invertible over `Z[t, t^-1]`.
    pub fn zz_nonsingular(&self) -> bool {
        det_ring(&self.abelianized(), &LaurentPoly::one()).is_unit()
    }

    /// The integer matrix under `u -> 1`, `t -> 1`.
    pub fn augmentation(&self) -> Matrix<BigRational> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|e| BigRational::from_integer(e.eval_at_one())).collect())
            .collect()
    }

    pub fn augmentation_signature(&self) -> Result<i64> {
        rational_matrix(&self.augmentation()).signature(crate::numbers::DEFAULT_MAX_PRECISION_BITS)
    }

    /// `ε_ω`: substitutes `u -> ω` exactly.
    pub fn epsilon_eval(&self, w: &CirclePoint) -> Result<EvaluatedMatrix> {
        w.validate()?;
        let out = match w {
            CirclePoint::RootOfUnity { k, j } => EvaluatedMatrix::Cyclotomic(
                self.entries
                    .iter()
                    .map(|r| r.iter().map(|e| CyclotomicElement::from_laurent(*k, e, *j as i64)).collect())
                    .collect(),
            ),
            CirclePoint::RationalAbscissa { x, half } => {
                let d = BigRational::one() - x * x;
                let s = match half {
                    Half::Upper => BigRational::one(),
                    Half::Lower => -BigRational::one(),
                };
                let eval = |p: &LaurentPoly| {
                    let mut re = BigRational::zero();
                    let mut im = BigRational::zero();
                    for (e, c) in p.terms() {
                        let (t, u) = chebyshev_pair(x, e.unsigned_abs());
                        let c = BigRational::from_integer(c.clone());
                        re += &c * t;
                        if e > 0 {
                            im += &c * u;
                        } else if e < 0 {
                            im -= &c * u;
                        }
                    }
                    QuadComplex::from_parts(QuadExtNumber::rational(re), QuadExtNumber::new(BigRational::zero(), im * &s, d.clone()))
                };
                EvaluatedMatrix::Quadratic(self.entries.iter().map(|r| r.iter().map(eval).collect()).collect())
            }
        };
        if !out.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        Ok(out)
    }
}

impl fmt::Display for HermMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|e| e.display_with("u")).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `[[u - 2 + u^-1, 1], [1, u - 2 + u^-1]]` with `u` sent to an infinite-order element
/// of the commutator subgroup.
pub fn family_matrix() -> HermMatrix {
    let d: &[(i64, i64)] = &[(1, 1), (0, -2), (-1, 1)];
    let one: &[(i64, i64)] = &[(0, 1)];
    HermMatrix::from_pairs(&[&[d, one], &[one, d]], CyclicEmbedding::infinite()).expect("Hermitian")
}
