//! The metabelian groups `Z ⋉ A` with `A = Z[t, t^-1]/(p)`, `p` having unit leading and
//! constant coefficients so that `A ≅ Z^d` with `t` acting by the companion matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{identity, mat_mul, mat_vec, solve_rational, Matrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetabelianGroupCtx {
    p: LaurentPoly,
    degree: usize,
    companion: Matrix<BigInt>,
    companion_inv: Matrix<BigInt>,
    alexander: bool,
}

/// Element `(n, v)` of `Z ⋉ A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetabelianElement {
    pub n: i64,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub v: Vec<BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficients {
    Q,
    Fp(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementOrder {
    Infinite,
    Finite(u64),
}

/// `h` with `(t - 1)h = v'` and the word `(0,-h)(1,0)(0,h)(n-1,0)` that evaluates to
/// the target `(n, v')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalGenerationWitness {
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub h: Vec<BigInt>,
    pub word: Vec<MetabelianElement>,
}

#[derive(Serialize, Deserialize)]
struct CtxRepr {
    p: LaurentPoly,
}

impl Serialize for MetabelianGroupCtx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CtxRepr { p: self.p.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MetabelianGroupCtx {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CtxRepr::deserialize(d)?;
        MetabelianGroupCtx::new(&r.p).map_err(serde::de::Error::custom)
    }
}

impl MetabelianElement {
    pub fn new(n: i64, v: Vec<BigInt>) -> Self {
        Self { n, v }
    }

    pub fn from_ints(n: i64, v: &[i64]) -> Self {
        Self::new(n, v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl MetabelianGroupCtx {
    /// Builds the context, normalizing `p`. Fails unless the extreme coefficients are
    /// units.
    pub fn new(p: &LaurentPoly) -> Result<Self> {
        let p = p.alexander_normalize()?;
        let lead = p.highest_coeff().cloned().unwrap_or_default();
        let constant = p.lowest_coeff().cloned().unwrap_or_default();
        if !lead.abs().is_one() || !constant.abs().is_one() {
            return Err(Error::InvalidInput(format!(
                "p = {p} needs unit leading and constant coefficients; Z[t,t^-1]/(p) is not a finitely generated abelian group otherwise"
            )));
        }
        let (_, c) = p.to_dense();
        let d = c.len() - 1;
        // Column j is t·t^j. The last column reduces t^d = -(c_0 + ... + c_{d-1} t^{d-1}) / c_d.
        let mut companion = vec![vec![BigInt::zero(); d]; d];
        for j in 0..d {
            if j + 1 < d {
                companion[j + 1][j] = BigInt::one();
            } else {
                for (i, row) in companion.iter_mut().enumerate() {
                    row[j] = -(&c[i] * &lead);
                }
            }
        }
        // t^-1 · 1 = -(c_1 + c_2 t + ... + c_d t^{d-1}) / c_0; t^-1 · t^j = t^{j-1}.
        let mut companion_inv = vec![vec![BigInt::zero(); d]; d];
        for j in 0..d {
            if j > 0 {
                companion_inv[j - 1][j] = BigInt::one();
            } else {
                for (i, row) in companion_inv.iter_mut().enumerate() {
                    row[0] = -(&c[i + 1] * &constant);
                }
            }
        }
        debug_assert_eq!(mat_mul(&companion, &companion_inv), identity(d));
        let alexander = p.eval_at_one().abs().is_one();
        Ok(Self {
            p,
            degree: d,
            companion,
            companion_inv,
            alexander,
        })
    }

    pub fn p(&self) -> &LaurentPoly {
        &self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn companion(&self) -> &Matrix<BigInt> {
        &self.companion
    }

    pub fn companion_inv(&self) -> &Matrix<BigInt> {
        &self.companion_inv
    }

    pub fn is_alexander(&self) -> bool {
        self.alexander
    }

    pub fn identity(&self) -> MetabelianElement {
        MetabelianElement::new(0, vec![BigInt::zero(); self.degree])
    }

    /// Basis vector `t^i` of `A`.
    pub fn basis(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.degree];
        v[i] = BigInt::one();
        v
    }

    /// `C^n` for any integer `n`.
    pub fn companion_pow(&self, n: i64) -> Matrix<BigInt> {
        let base = if n >= 0 { &self.companion } else { &self.companion_inv };
        let mut e = n.unsigned_abs();
        let mut acc = identity(self.degree);
        let mut sq = base.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = mat_mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = mat_mul(&sq, &sq);
            }
        }
        acc
    }

    /// `t^n · v`.
    pub fn act(&self, n: i64, v: &[BigInt]) -> Vec<BigInt> {
        mat_vec(&self.companion_pow(n), v)
    }

    /// `(t - 1) · v`.
    pub fn t_minus_one(&self, v: &[BigInt]) -> Vec<BigInt> {
        mat_vec(&self.companion, v).into_iter().zip(v).map(|(a, b)| a - b).collect()
    }

    /// Image of a Laurent polynomial in `A`.
    pub fn reduce(&self, f: &LaurentPoly) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.degree];
        if self.degree == 0 {
            return out;
        }
        for (e, c) in f.terms() {
            for (o, x) in out.iter_mut().zip(self.act(e, &self.basis(0))) {
                *o += c * x;
            }
        }
        out
    }

    fn check_shape(&self, a: &MetabelianElement) -> Result<()> {
        if a.v.len() != self.degree {
            return Err(Error::InvalidInput(format!(
                "element vector has length {}, expected {}",
                a.v.len(),
                self.degree
            )));
        }
        Ok(())
    }

    /// `(n1, v1)(n2, v2) = (n1 + n2, v1 + t^{n1} v2)`.
    pub fn mul(&self, a: &MetabelianElement, b: &MetabelianElement) -> Result<MetabelianElement> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        let moved = self.act(a.n, &b.v);
        Ok(MetabelianElement::new(
            a.n + b.n,
            a.v.iter().zip(moved).map(|(x, y)| x + y).collect(),
        ))
    }

    pub fn inv(&self, a: &MetabelianElement) -> Result<MetabelianElement> {
        self.check_shape(a)?;
        Ok(MetabelianElement::new(
            -a.n,
            self.act(-a.n, &a.v).into_iter().map(|x| -x).collect(),
        ))
    }

    pub fn product(&self, word: &[MetabelianElement]) -> Result<MetabelianElement> {
        word.iter().try_fold(self.identity(), |acc, g| self.mul(&acc, g))
    }

    /// Writes `target` as a conjugate of `(1, 0)` times a power of `(1, 0)`.
    pub fn normal_generation_witness(&self, target: &MetabelianElement) -> Result<NormalGenerationWitness> {
        self.check_shape(target)?;
        if !self.alexander {
            return Err(Error::NotAlexander(self.p.eval_at_one()));
        }
        let d = self.degree;
        let a: Matrix<BigRational> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let delta = if i == j { BigInt::one() } else { BigInt::zero() };
                        BigRational::from_integer(&self.companion[i][j] - delta)
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<BigRational> = target.v.iter().cloned().map(BigRational::from_integer).collect();
        let h = solve_rational(&a, &rhs).ok_or_else(|| Error::NotAlexander(self.p.eval_at_one()))?;
        if h.iter().any(|x| !x.is_integer()) {
            return Err(Error::NotAlexander(self.p.eval_at_one()));
        }
        let h: Vec<BigInt> = h.into_iter().map(|x| x.to_integer()).collect();
        let neg_h: Vec<BigInt> = h.iter().map(|x| -x).collect();
        let word = vec![
            MetabelianElement::new(0, neg_h),
            MetabelianElement::new(1, vec![BigInt::zero(); d]),
            MetabelianElement::new(0, h.clone()),
            MetabelianElement::new(target.n - 1, vec![BigInt::zero(); d]),
        ];
        debug_assert_eq!(self.product(&word).as_ref(), Ok(target));
        Ok(NormalGenerationWitness { h, word })
    }

    /// Order of `(0, h)` after changing coefficients to `Q` or `F_p`.
    pub fn order_in_quotient(&self, h: &[BigInt], coefficients: Coefficients) -> Result<ElementOrder> {
        if h.len() != self.degree {
            return Err(Error::InvalidInput(format!("vector has length {}, expected {}", h.len(), self.degree)));
        }
        Ok(match coefficients {
            Coefficients::Q if h.iter().all(Zero::is_zero) => ElementOrder::Finite(1),
            Coefficients::Q => ElementOrder::Infinite,
            Coefficients::Fp(p) => {
                let p_big = BigInt::from(p);
                if h.iter().all(|x| x.mod_floor(&p_big).is_zero()) {
                    ElementOrder::Finite(1)
                } else {
                    ElementOrder::Finite(p)
                }
            }
        })
    }
}

/// `|p(1)| = 1`.
pub fn is_alexander(p: &LaurentPoly) -> bool {
    p.eval_at_one().abs().is_one()
}
