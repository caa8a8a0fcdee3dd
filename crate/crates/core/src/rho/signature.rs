use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::HermMatrix;
use crate::error::{Error, Result};
use crate::laurent::{chebyshev_reduce, cyclotomic_poly, cyclotomic_strip, sturm_isolate, IsolatedRoot, LaurentPoly, RealPoly};
use crate::numbers::interval::cos_pi;
use crate::numbers::{CirclePoint, Half, DEFAULT_MAX_PRECISION_BITS, START_PRECISION_BITS};

/// A zero of the circle determinant at abscissa `x ∈ (-1, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub root: IsolatedRoot,
    /// `q` with `x = cos(2πq)`, `0 < q < 1/2`, when the zero is a root of unity.
    #[serde(with = "crate::serde_util::rational_opt")]
    pub exact_cos_of: Option<BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointValues {
    pub at_one: i64,
    pub at_minus_one: i64,
}

/// `ω -> sgn ε_ω(U)` on the upper semicircle, parametrized by `x = Re ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureFunction {
    pub determinant: LaurentPoly,
    pub reduced_determinant: RealPoly,
    /// Descending in `x`.
    pub breakpoints: Vec<Breakpoint>,
    /// From `x = 1` down to `x = -1`; one more than the breakpoints.
    pub arc_values: Vec<i64>,
    #[serde(with = "crate::serde_util::rational_vec")]
    pub arc_samples: Vec<BigRational>,
    /// Exact signature at each breakpoint, when its abscissa is rational or it is a
    /// root of unity.
    pub singular_values: Vec<Option<i64>>,
    pub endpoint_values: EndpointValues,
}

impl SignatureFunction {
    pub fn all_tagged(&self) -> bool {
        self.breakpoints.iter().all(|b| b.exact_cos_of.is_some())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Shifts a palindromic-up-to-unit polynomial so that it is fixed by the involution.
fn center(p: &LaurentPoly) -> Result<LaurentPoly> {
    let n = p.alexander_normalize()?;
    let span = n.span() as i64;
    if span % 2 != 0 {
        return Err(Error::NotRealOnCircle);
    }
    Ok(n.shift(-span / 2))
}

fn cyclotomic_breakpoints(m: u64) -> Result<Vec<Breakpoint>> {
    let reduced = chebyshev_reduce(&center(&cyclotomic_poly(m))?)?;
    let roots = sturm_isolate(&reduced, &-BigRational::one(), &BigRational::one())?;
    // cos(2πj/m) decreases in j, so ascending roots pair with descending j.
    let js: Vec<u64> = (1..m).filter(|j| 2 * j < m && j.gcd(&m) == 1).collect();
    debug_assert_eq!(roots.len(), js.len());
    Ok(roots
        .into_iter()
        .zip(js.into_iter().rev())
        .map(|(root, j)| Breakpoint {
            root,
            exact_cos_of: Some(q(j as i64, m as i64)),
        })
        .collect())
}

/// Refines until the intervals are pairwise disjoint, sorted descending, and clear of
/// `±1`.
fn separate(bps: &mut [Breakpoint]) {
    let one = BigRational::one();
    loop {
        bps.sort_by(|a, b| b.root.lo.cmp(&a.root.lo));
        let mut clean = true;
        for i in 0..bps.len() {
            if i + 1 < bps.len() && bps[i + 1].root.hi >= bps[i].root.lo {
                clean = false;
                let (a, b) = (&bps[i].root, &bps[i + 1].root);
                if !a.is_exact() && (b.is_exact() || a.width() >= b.width()) {
                    bps[i].root.refine();
                } else {
                    bps[i + 1].root.refine();
                }
            }
        }
        if let Some(first) = bps.first_mut() {
            while first.root.hi >= one {
                first.root.refine();
            }
        }
        if let Some(last) = bps.last_mut() {
            while last.root.lo <= -&one {
                last.root.refine();
            }
        }
        if clean {
            return;
        }
    }
}

fn arc_samples(bps: &[Breakpoint]) -> Vec<BigRational> {
    if bps.is_empty() {
        return vec![BigRational::zero()];
    }
    let two = q(2, 1);
    let mut out = Vec::with_capacity(bps.len() + 1);
    out.push((&bps[0].root.hi + BigRational::one()) / &two);
    for w in bps.windows(2) {
        out.push((&w[1].root.hi + &w[0].root.lo) / &two);
    }
    out.push((&bps[bps.len() - 1].root.lo - BigRational::one()) / &two);
    out
}

/// The signature function of `ε_ω(u)` on the circle.
pub fn signature_function(u: &HermMatrix, max_bits: u32) -> Result<SignatureFunction> {
    let determinant = u.determinant();
    if determinant.is_zero() {
        return Err(Error::DegenerateOnCircle);
    }
    let reduced_determinant = chebyshev_reduce(&determinant)?;
    let strip = cyclotomic_strip(&determinant)?;
    let mut breakpoints = Vec::new();
    for &(m, _) in &strip.factors {
        if m >= 3 {
            breakpoints.extend(cyclotomic_breakpoints(m)?);
        }
    }
    if strip.remainder.span() > 0 {
        let reduced = chebyshev_reduce(&center(&strip.remainder)?)?;
        let one = BigRational::one();
        for root in sturm_isolate(&reduced, &-&one, &one)? {
            if root.is_exact() && root.lo.abs() == one {
                continue;
            }
            breakpoints.push(Breakpoint { root, exact_cos_of: None });
        }
    }
    separate(&mut breakpoints);

    let arc_samples = arc_samples(&breakpoints);
    let arc_values = arc_samples
        .iter()
        .map(|x| u.epsilon_eval(&CirclePoint::abscissa(x.clone(), Half::Upper)?)?.signature(max_bits))
        .collect::<Result<Vec<_>>>()?;
    let singular_values = breakpoints
        .iter()
        .map(|b| {
            let point = match &b.exact_cos_of {
                Some(qv) => CirclePoint::root_of_unity(
                    qv.denom().try_into().expect("small order"),
                    qv.numer().try_into().expect("small index"),
                )?,
                None if b.root.is_exact() => CirclePoint::abscissa(b.root.lo.clone(), Half::Upper)?,
                None => return Ok(None),
            };
            u.epsilon_eval(&point)?.signature(max_bits).map(Some)
        })
        .collect::<Result<Vec<_>>>()?;
    let endpoint_values = EndpointValues {
        at_one: u.epsilon_eval(&CirclePoint::root_of_unity(1, 1)?)?.signature(max_bits)?,
        at_minus_one: u.epsilon_eval(&CirclePoint::root_of_unity(2, 1)?)?.signature(max_bits)?,
    };
    Ok(SignatureFunction {
        determinant,
        reduced_determinant,
        breakpoints,
        arc_values,
        arc_samples,
        singular_values,
        endpoint_values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoMode {
    ExactIfPossible,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoOptions {
    pub mode: RhoMode,
    pub tol: BigRational,
    pub max_precision_bits: u32,
}

impl Default for RhoOptions {
    fn default() -> Self {
        Self {
            mode: RhoMode::ExactIfPossible,
            tol: q(1, 1_000_000_000),
            max_precision_bits: DEFAULT_MAX_PRECISION_BITS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RhoValue {
    Exact {
        #[serde(with = "crate::serde_util::rational")]
        value: BigRational,
    },
    Certified {
        #[serde(with = "crate::serde_util::rational")]
        lo: BigRational,
        #[serde(with = "crate::serde_util::rational")]
        hi: BigRational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoResult {
    pub value: RhoValue,
    pub copies: u32,
    /// Set when an exact value was asked for but some breakpoint is not a root of unity.
    #[serde(default)]
    pub fell_back_to_numeric: bool,
}

impl RhoResult {
    /// `Some(true)` if certainly nonzero, `Some(false)` if exactly zero, `None` if an
    /// enclosure straddles zero.
    pub fn is_nonzero(&self) -> Option<bool> {
        match &self.value {
            RhoValue::Exact { value } => Some(!value.is_zero()),
            RhoValue::Certified { lo, hi } if lo.is_positive() || hi.is_negative() => Some(true),
            RhoValue::Certified { .. } => None,
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        match &self.value {
            RhoValue::Exact { value } => value == x,
            RhoValue::Certified { lo, hi } => lo <= x && x <= hi,
        }
    }

    pub fn midpoint(&self) -> BigRational {
        match &self.value {
            RhoValue::Exact { value } => value.clone(),
            RhoValue::Certified { lo, hi } => (lo + hi) / q(2, 1),
        }
    }
}

impl std::fmt::Display for RhoResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::serde_util::rational_to_string as s;
        match &self.value {
            RhoValue::Exact { value } => write!(f, "rho = {} (exact)", s(value)),
            RhoValue::Certified { lo, hi } => write!(f, "rho in [{}, {}] (certified)", s(lo), s(hi)),
        }
    }
}

fn check_copies(r: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidInput("copies must be positive".into()));
    }
    Ok(())
}

/// `(1/rk) Σ_{j=1..k} sgn ε_{ζ_k^j}(u)`.
pub fn rho_finite(u: &HermMatrix, k: u64, copies: u32, max_bits: u32) -> Result<RhoResult> {
    check_copies(copies)?;
    if k == 0 {
        return Err(Error::InvalidInput("order must be positive".into()));
    }
    let mut total = 0i64;
    for j in 1..=k {
        total += u.epsilon_eval(&CirclePoint::root_of_unity(k, j)?)?.signature(max_bits)?;
    }
    Ok(RhoResult {
        value: RhoValue::Exact {
            value: BigRational::new(total.into(), (k as i64 * copies as i64).into()),
        },
        copies,
        fell_back_to_numeric: false,
    })
}

/// `(1/2πr) ∫ sgn ε_ω(u)` over the circle.
pub fn rho_integral(u: &HermMatrix, copies: u32, opts: &RhoOptions) -> Result<RhoResult> {
    check_copies(copies)?;
    let sf = signature_function(u, opts.max_precision_bits)?;
    rho_from_signature(&sf, copies, opts)
}

/// The integral from a computed signature function. With `θ_i/π = t_i` at the
/// breakpoints and `s_i` the arc values, `r·ρ = s_n + Σ t_i (s_{i-1} - s_i)`.
pub fn rho_from_signature(sf: &SignatureFunction, copies: u32, opts: &RhoOptions) -> Result<RhoResult> {
    check_copies(copies)?;
    if !opts.tol.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let s = &sf.arc_values;
    let n = sf.breakpoints.len();
    let r = BigRational::from_integer(copies.into());
    let base = BigRational::from_integer(s[n].into());
    let jumps: Vec<i64> = (1..=n).map(|i| s[i - 1] - s[i]).collect();

    if opts.mode == RhoMode::ExactIfPossible && sf.all_tagged() {
        let mut total = base;
        for (b, jump) in sf.breakpoints.iter().zip(&jumps) {
            let t = b.exact_cos_of.as_ref().expect("tagged") * q(2, 1);
            total += t * BigRational::from_integer((*jump).into());
        }
        return Ok(RhoResult {
            value: RhoValue::Exact { value: total / r },
            copies,
            fell_back_to_numeric: false,
        });
    }

    let weight: i64 = jumps.iter().map(|j| j.abs()).sum();
    let (mut lo, mut hi) = (base.clone(), base);
    if weight > 0 {
        let eps = &opts.tol / BigRational::from_integer(weight.into());
        for (b, jump) in sf.breakpoints.iter().zip(&jumps) {
            if *jump == 0 {
                continue;
            }
            let exact_t = b.exact_cos_of.as_ref().map(|qv| qv * q(2, 1));
            let (a, c) = arccos_over_pi(b.root.clone(), exact_t.as_ref(), &eps, opts.max_precision_bits)?;
            let j = BigRational::from_integer((*jump).into());
            if *jump > 0 {
                lo += &j * a;
                hi += &j * c;
            } else {
                lo += &j * c;
                hi += &j * a;
            }
        }
    }
    Ok(RhoResult {
        value: RhoValue::Certified { lo: lo / &r, hi: hi / &r },
        copies,
        fell_back_to_numeric: opts.mode == RhoMode::ExactIfPossible,
    })
}

/// Encloses `arccos(x)/π` for the root `x ∈ (-1, 1)` in an interval of width at most
/// `eps` by bisection against certified cosines. `exact` is the known value, if any,
/// used only when a bisection point lands on it.
fn arccos_over_pi(
    mut root: IsolatedRoot,
    exact: Option<&BigRational>,
    eps: &BigRational,
    max_bits: u32,
) -> Result<(BigRational, BigRational)> {
    let two = q(2, 1);
    let (mut sa, mut sb) = (BigRational::zero(), BigRational::one());
    let mut bits = START_PRECISION_BITS.min(max_bits.max(1));
    while &(&sb - &sa) > eps {
        let mid = (&sa + &sb) / &two;
        if exact == Some(&mid) {
            return Ok((mid.clone(), mid));
        }
        loop {
            let c = cos_pi(&mid, bits);
            if c.lo > root.hi {
                sa = mid;
                break;
            }
            if c.hi < root.lo {
                sb = mid;
                break;
            }
            if root.is_exact() && c.lo == c.hi && c.lo == root.lo {
                return Ok((mid.clone(), mid));
            }
            if !root.is_exact() && root.width() > c.width() {
                root.refine();
            } else if bits >= max_bits {
                return Err(Error::PrecisionExhausted(max_bits));
            } else {
                bits = bits.saturating_mul(2).min(max_bits);
            }
        }
    }
    Ok((sa, sb))
}
