//! Orders of `Z[C_r] ⊗ T` for a square presentation `A(t)` of a torsion module `T`:
//! Fox's resultant formula, a block-circulant determinant oracle, the Livingston
//! vanishing criterion, and a sweep showing that Casson-Gordon-type input is absent.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{cyclotomic_strip, distinct_prime_factors, resultant, LaurentPoly};
use crate::linalg::{bareiss_det, det_ring, Matrix};

pub const DEFAULT_CIRCULANT_BOUND: usize = 200;

/// Square presentation matrix `A(t)` of `0 -> P -> P -> T -> 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderPresentation {
    entries: Matrix<LaurentPoly>,
}

#[derive(Serialize, Deserialize)]
struct PresentationRepr {
    size: usize,
    entries: Entries,
}

/// Entries may be given row-major flat or as nested rows; they are written flat.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum Entries {
    Flat(Vec<LaurentPoly>),
    Nested(Vec<Vec<LaurentPoly>>),
}

impl Entries {
    pub(crate) fn into_matrix(self, size: usize) -> Result<Matrix<LaurentPoly>> {
        let rows = match self {
            Entries::Nested(rows) => rows,
            Entries::Flat(flat) => {
                if flat.len() != size * size {
                    return Err(Error::InvalidInput(format!(
                        "expected {} entries for size {size}, got {}",
                        size * size,
                        flat.len()
                    )));
                }
                flat.chunks(size.max(1)).map(<[LaurentPoly]>::to_vec).collect()
            }
        };
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidInput(format!("matrix is not {size}x{size}")));
        }
        Ok(rows)
    }

    pub(crate) fn flat(m: &[Vec<LaurentPoly>]) -> Self {
        Entries::Flat(m.iter().flatten().cloned().collect())
    }
}

impl Serialize for AlexanderPresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationRepr {
            size: self.size(),
            entries: Entries::flat(&self.entries),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlexanderPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PresentationRepr::deserialize(d)?;
        let m = r.entries.into_matrix(r.size).map_err(serde::de::Error::custom)?;
        AlexanderPresentation::new(m).map_err(serde::de::Error::custom)
    }
}

impl AlexanderPresentation {
    pub fn new(entries: Matrix<LaurentPoly>) -> Result<Self> {
        let k = entries.len();
        if k == 0 || entries.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput("presentation must be a nonempty square matrix".into()));
        }
        Ok(Self { entries })
    }

    /// The `1x1` presentation `[[delta]]`.
    pub fn cyclic(delta: LaurentPoly) -> Self {
        Self {
            entries: vec![vec![delta]],
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &Matrix<LaurentPoly> {
        &self.entries
    }

    pub fn determinant(&self) -> LaurentPoly {
        det_ring(&self.entries, &LaurentPoly::one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverOrder {
    Finite {
        #[serde(with = "crate::serde_util::bigint")]
        value: BigInt,
    },
    Infinite,
}

impl CoverOrder {
    fn from_abs(v: BigInt) -> Self {
        if v.is_zero() {
            CoverOrder::Infinite
        } else {
            CoverOrder::Finite { value: v.abs() }
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, CoverOrder::Finite { value } if value.is_one())
    }
}

impl std::fmt::Display for CoverOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoverOrder::Finite { value } => write!(f, "{value}"),
            CoverOrder::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverOrderResult {
    pub r: u64,
    pub order: CoverOrder,
}

fn check_r(r: u64) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidInput("cover index must be positive".into()));
    }
    Ok(())
}

/// `|Res(det A(t), t^r - 1)|`, zero meaning infinite order.
pub fn fox_order(a: &AlexanderPresentation, r: u64) -> Result<CoverOrderResult> {
    check_r(r)?;
    let det = a.determinant();
    let order = if det.is_zero() {
        CoverOrder::Infinite
    } else {
        let t_r = LaurentPoly::from_pairs([(r as i64, 1), (0, -1)]);
        CoverOrder::from_abs(resultant(&det.alexander_normalize()?, &t_r)?)
    };
    Ok(CoverOrderResult { r, order })
}

/// The `rk x rk` integer matrix of `A(t)` acting on `Z[C_r]^k`.
pub fn block_circulant_matrix(a: &AlexanderPresentation, r: u64) -> Matrix<BigInt> {
    let k = a.size();
    let r = r as usize;
    let mut m = vec![vec![BigInt::zero(); r * k]; r * k];
    for (i, row) in a.entries.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            for (e, c) in entry.terms() {
                let shift = e.rem_euclid(r as i64) as usize;
                // t^e sends block b to block b + e.
                for b in 0..r {
                    let a_blk = (b + shift) % r;
                    m[a_blk * k + i][b * k + j] += c;
                }
            }
        }
    }
    m
}

/// Independent oracle for [`fox_order`]: the determinant of the block-circulant matrix.
pub fn block_circulant_order(a: &AlexanderPresentation, r: u64, bound: usize) -> Result<CoverOrderResult> {
    check_r(r)?;
    let size = r as usize * a.size();
    if size > bound {
        return Err(Error::BoundExceeded { size, bound });
    }
    let det = bareiss_det(block_circulant_matrix(a, r));
    Ok(CoverOrderResult {
        r,
        order: CoverOrder::from_abs(det),
    })
}

pub fn is_prime_power(r: u64) -> bool {
    r >= 2 && distinct_prime_factors(r).len() == 1
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && distinct_prime_factors(p) == [p]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LivingstonRow {
    pub r: u64,
    pub order: CoverOrder,
    pub prime_power: bool,
    /// Set for prime-power `r` when the criterion applies.
    pub matches_criterion: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LivingstonReport {
    pub delta: LaurentPoly,
    pub cyclotomic_factors: Vec<(u64, u32)>,
    pub remainder: LaurentPoly,
    pub applies: bool,
    pub reason: String,
    pub rows: Vec<LivingstonRow>,
}

/// Whether every irreducible factor of `delta` is some `Φ_m` with `m` divisible by at
/// least three distinct primes, and the cover orders that result.
pub fn livingston_check(delta: &LaurentPoly, covers: &[u64]) -> Result<LivingstonReport> {
    let strip = cyclotomic_strip(delta)?;
    let (applies, reason) = if !strip.fully_cyclotomic() {
        (false, format!("non-cyclotomic factor {} remains", strip.remainder))
    } else if let Some(&(m, _)) = strip.factors.iter().find(|(m, _)| distinct_prime_factors(*m).len() < 3) {
        (false, format!("factor Phi_{m} has fewer than three distinct prime divisors"))
    } else {
        (true, "every factor is Phi_m with m divisible by at least three distinct primes".to_string())
    };
    let pres = AlexanderPresentation::cyclic(delta.clone());
    let mut rows = Vec::with_capacity(covers.len());
    for &r in covers {
        let order = fox_order(&pres, r)?.order;
        let prime_power = is_prime_power(r);
        let (matches_criterion, note) = if !prime_power {
            (None, Some("outside theorem hypothesis".to_string()))
        } else if applies {
            (Some(order.is_trivial()), None)
        } else {
            (None, None)
        };
        rows.push(LivingstonRow {
            r,
            order,
            prime_power,
            matches_criterion,
            note,
        });
    }
    Ok(LivingstonReport {
        delta: delta.clone(),
        cyclotomic_factors: strip.factors,
        remainder: strip.remainder,
        applies,
        reason,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RubermanReport {
    pub delta: LaurentPoly,
    pub r_max: u64,
    pub rows: Vec<CoverOrderResult>,
    pub failing: Vec<u64>,
    pub success: bool,
    pub message: String,
}

/// Checks `|H_1(Σ_r)| = 1` for every prime power `r <= r_max`.
pub fn ruberman_inapplicability(delta: &LaurentPoly, r_max: u64) -> Result<RubermanReport> {
    let pres = AlexanderPresentation::cyclic(delta.clone());
    let rows = (2..=r_max)
        .filter(|&r| is_prime_power(r))
        .map(|r| fox_order(&pres, r))
        .collect::<Result<Vec<_>>>()?;
    let failing: Vec<u64> = rows.iter().filter(|row| !row.order.is_trivial()).map(|row| row.r).collect();
    let success = failing.is_empty();
    let message = if success {
        format!("Casson-Gordon-type input unavailable up to r_max = {r_max}")
    } else {
        format!("nontrivial cover homology at r = {failing:?}")
    };
    Ok(RubermanReport {
        delta: delta.clone(),
        r_max,
        rows,
        failing,
        success,
        message,
    })
}
