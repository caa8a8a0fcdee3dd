//! Hermitian pairings on `H = ⊕ Z[t, t^-1]/(p_i)` with values in `Q(t)/Z[t, t^-1]`, and
//! lagrangian checks by lattice arithmetic on `H ≅ Z^D`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{identity, integer_kernel, lattice_basis, mat_vec, Matrix};
use crate::metabelian::MetabelianGroupCtx;

/// A class `num / den` in `Q(t)/Z[t, t^-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QZmodZZ {
    num: LaurentPoly,
    den: LaurentPoly,
}

#[derive(Serialize, Deserialize)]
struct FracRepr {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Serialize for QZmodZZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FracRepr {
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QZmodZZ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FracRepr::deserialize(d)?;
        QZmodZZ::new(r.num, r.den).map_err(serde::de::Error::custom)
    }
}

/// Whether `num / den` lies in `Z[t, t^-1]`.
pub fn qz_is_zero(num: &LaurentPoly, den: &LaurentPoly) -> Result<bool> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(num.checked_div(den).is_some())
}

impl QZmodZZ {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self { num, den })
    }

    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    /// `1 / den`.
    pub fn inverse_of(den: &LaurentPoly) -> Result<Self> {
        Self::new(LaurentPoly::one(), den.clone())
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.checked_div(&self.den).is_some()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        if let Some(q) = o.den.checked_div(&self.den) {
            return Self {
                num: &(&self.num * &q) + &o.num,
                den: o.den.clone(),
            };
        }
        if let Some(q) = self.den.checked_div(&o.den) {
            return Self {
                num: &self.num + &(&o.num * &q),
                den: self.den.clone(),
            };
        }
        Self {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, f: &LaurentPoly) -> Self {
        Self {
            num: &self.num * f,
            den: self.den.clone(),
        }
    }

    /// Image under the involution `t -> t^-1`.
    pub fn conj(&self) -> Self {
        Self {
            num: self.num.involute(),
            den: self.den.involute(),
        }
    }

    pub fn equiv(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl std::fmt::Display for QZmodZZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Pairing on `⊕ Z[t, t^-1]/(p_i)` given by `Bl(e_i, e_j) = gram[i][j]`, antilinear in
/// the first argument.
#[derive(Debug, Clone)]
pub struct BlanchfieldForm {
    summands: Vec<LaurentPoly>,
    gram: Matrix<QZmodZZ>,
    blocks: Vec<MetabelianGroupCtx>,
    offsets: Vec<usize>,
    dim: usize,
}

impl PartialEq for BlanchfieldForm {
    fn eq(&self, o: &Self) -> bool {
        self.summands == o.summands && self.gram == o.gram
    }
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    summands: Vec<LaurentPoly>,
    gram: Matrix<QZmodZZ>,
}

impl Serialize for BlanchfieldForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr {
            summands: self.summands.clone(),
            gram: self.gram.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlanchfieldForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FormRepr::deserialize(d)?;
        BlanchfieldForm::new(r.summands, r.gram).map_err(serde::de::Error::custom)
    }
}

/// A `t`-invariant sublattice of `H ≅ Z^D`, spanned over `Z[t, t^-1]` by `generators`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Submodule {
    #[serde(with = "crate::serde_util::bigint_matrix")]
    pub generators: Matrix<BigInt>,
    /// Hermite basis of the `t`-closed span.
    #[serde(with = "crate::serde_util::bigint_matrix")]
    closure: Matrix<BigInt>,
}

/// Interchange form of a submodule: just its generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmoduleSpec {
    #[serde(with = "crate::serde_util::bigint_matrix")]
    pub generators: Matrix<BigInt>,
}

impl Submodule {
    pub fn closure(&self) -> &Matrix<BigInt> {
        &self.closure
    }

    pub fn rank(&self) -> usize {
        self.closure.len()
    }

    pub fn spec(&self) -> SubmoduleSpec {
        SubmoduleSpec {
            generators: self.generators.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagrangianCheck {
    pub isotropic: bool,
    pub equals_annihilator: bool,
}

impl LagrangianCheck {
    pub fn holds(&self) -> bool {
        self.isotropic && self.equals_annihilator
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SliceVerdict {
    AlgebraicallyDoublySlice,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleSliceCheck {
    pub verdict: SliceVerdict,
    pub first: LagrangianCheck,
    pub second: LagrangianCheck,
    pub complementary: bool,
    pub failures: Vec<String>,
}

impl BlanchfieldForm {
    pub fn new(summands: Vec<LaurentPoly>, gram: Matrix<QZmodZZ>) -> Result<Self> {
        let n = summands.len();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!("gram matrix must be {n}x{n}")));
        }
        let mut blocks = Vec::with_capacity(n);
        for p in &summands {
            let ctx = MetabelianGroupCtx::new(p)?;
            if !ctx.is_alexander() {
                return Err(Error::NotAlexander(p.eval_at_one()));
            }
            blocks.push(ctx);
        }
        for i in 0..n {
            for j in 0..n {
                if !gram[j][i].equiv(&gram[i][j].conj()) {
                    return Err(Error::InvalidInput(format!("gram is not Hermitian at ({i}, {j})")));
                }
                if !gram[i][j].scale(&summands[j]).is_zero() || !gram[i][j].scale(&summands[i].involute()).is_zero() {
                    return Err(Error::InvalidInput(format!("summand orders do not annihilate gram entry ({i}, {j})")));
                }
            }
        }
        let mut offsets = Vec::with_capacity(n);
        let mut dim = 0;
        for b in &blocks {
            offsets.push(dim);
            dim += b.degree();
        }
        Ok(Self {
            summands,
            gram,
            blocks,
            offsets,
            dim,
        })
    }

    /// `Z[t]/(p) ⊕ Z[t]/(p)` with `Bl = [[0, 1/p], [1/p̄, 0]]`; `p` must be symmetric up
    /// to a unit.
    pub fn hyperbolic(p: &LaurentPoly) -> Result<Self> {
        let p = p.alexander_normalize()?;
        let pbar = p.involute();
        if !pbar.checked_div(&p).is_some_and(|q| q.is_unit()) {
            return Err(Error::InvalidInput(format!("{p} is not symmetric up to a unit")));
        }
        let gram = vec![
            vec![QZmodZZ::zero(), QZmodZZ::inverse_of(&p)?],
            vec![QZmodZZ::inverse_of(&pbar)?, QZmodZZ::zero()],
        ];
        Self::new(vec![p.clone(), p], gram)
    }

    /// `⊕ Z[t]/(p_i)` with `Bl(e_i, e_i) = 1/p_i`, each `p_i` shifted to be centered when
    /// its span is even.
    pub fn diagonal(ps: &[LaurentPoly]) -> Result<Self> {
        let n = ps.len();
        let mut gram = vec![vec![QZmodZZ::zero(); n]; n];
        let mut summands = Vec::with_capacity(n);
        for (i, p) in ps.iter().enumerate() {
            let p = p.alexander_normalize()?;
            let span = p.span() as i64;
            let c = if span % 2 == 0 { p.shift(-span / 2) } else { p.clone() };
            gram[i][i] = QZmodZZ::inverse_of(&c)?;
            summands.push(p);
        }
        Self::new(summands, gram)
    }

    pub fn summands(&self) -> &[LaurentPoly] {
        &self.summands
    }

    pub fn gram(&self) -> &Matrix<QZmodZZ> {
        &self.gram
    }

    /// Rank `D` of `H` as a free abelian group.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The generator `e_i` of the `i`-th summand as a lattice vector.
    pub fn unit_vector(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim];
        if self.blocks[i].degree() > 0 {
            v[self.offsets[i]] = BigInt::one();
        }
        v
    }

    fn check_vec(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::InvalidInput(format!("vector has length {}, expected {}", x.len(), self.dim)));
        }
        Ok(())
    }

    fn coordinates(&self, x: &[BigInt]) -> Vec<LaurentPoly> {
        self.blocks
            .iter()
            .zip(&self.offsets)
            .map(|(b, &off)| LaurentPoly::from_dense(0, x[off..off + b.degree()].iter().cloned()))
            .collect()
    }

    /// `t^n · x`.
    pub fn act(&self, n: i64, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_vec(x)?;
        let mut out = Vec::with_capacity(self.dim);
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            out.extend(b.act(n, &x[off..off + b.degree()]));
        }
        Ok(out)
    }

    /// `Σ x̄_i · gram[i][j] · y_j`.
    pub fn pairing_eval(&self, x: &[BigInt], y: &[BigInt]) -> Result<QZmodZZ> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        let xs = self.coordinates(x);
        let ys = self.coordinates(y);
        let mut acc = QZmodZZ::zero();
        for (i, xi) in xs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let xb = xi.involute();
            for (j, yj) in ys.iter().enumerate() {
                if yj.is_zero() || self.gram[i][j].num.is_zero() {
                    continue;
                }
                acc = acc.add(&self.gram[i][j].scale(&(&xb * yj)));
            }
        }
        Ok(acc)
    }

    /// The `Z[t, t^-1]`-submodule generated by `generators`.
    pub fn span(&self, generators: &[Vec<BigInt>]) -> Result<Submodule> {
        for g in generators {
            self.check_vec(g)?;
        }
        let mut basis = lattice_basis(generators, self.dim);
        loop {
            let mut ext = basis.clone();
            for b in &basis {
                ext.push(self.act(1, b)?);
            }
            let next = lattice_basis(&ext, self.dim);
            if next == basis {
                break;
            }
            basis = next;
        }
        Ok(Submodule {
            generators: generators.to_vec(),
            closure: basis,
        })
    }

    pub fn span_spec(&self, spec: &SubmoduleSpec) -> Result<Submodule> {
        self.span(&spec.generators)
    }

    fn is_invariant(&self, l: &Submodule) -> Result<bool> {
        let mut ext = l.closure.clone();
        for b in &l.closure {
            ext.push(self.act(1, b)?);
            ext.push(self.act(-1, b)?);
        }
        Ok(lattice_basis(&ext, self.dim) == l.closure)
    }

    /// `{y : Bl(x, y) = 0 for all x in l}` as a Hermite basis.
    ///
    /// With `Δ` the product of the distinct gram denominators, `Bl(x, y) = N_x(y)/Δ`
    /// and the condition is `N_x(y) = 0` in `Z[t, t^-1]/(Δ) ≅ Z^{deg Δ}`, which needs
    /// `Δ` to have unit extreme coefficients.
    pub fn annihilator(&self, l: &Submodule) -> Result<Matrix<BigInt>> {
        let mut dens: Vec<LaurentPoly> = Vec::new();
        for e in self.gram.iter().flatten() {
            if e.is_zero() {
                continue;
            }
            let d = e.den.alexander_normalize()?;
            if !dens.contains(&d) {
                dens.push(d);
            }
        }
        let delta = dens.iter().fold(LaurentPoly::one(), |acc, d| &acc * d);
        if delta.span() == 0 {
            return Ok(identity(self.dim));
        }
        let quotient = MetabelianGroupCtx::new(&delta).map_err(|_| {
            Error::Uncertifiable(format!("denominator {delta} lacks unit extreme coefficients"))
        })?;
        let mut rows: Matrix<BigInt> = Vec::new();
        for x in &l.closure {
            let xs = self.coordinates(x);
            // Column (j, k) is the image of a_j · t^k with a_j = Σ_i x̄_i · num_ij · Δ/den_ij.
            let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(self.dim);
            for j in 0..self.summands.len() {
                let mut a_j = LaurentPoly::zero();
                for (i, xi) in xs.iter().enumerate() {
                    let g = &self.gram[i][j];
                    if xi.is_zero() || g.num.is_zero() {
                        continue;
                    }
                    let cof = delta.checked_div(&g.den).ok_or_else(|| {
                        Error::Uncertifiable(format!("denominator {} does not divide {delta}", g.den))
                    })?;
                    a_j = &a_j + &(&(&xi.involute() * &g.num) * &cof);
                }
                let reduced = quotient.reduce(&a_j);
                for k in 0..self.blocks[j].degree() {
                    cols.push(quotient.act(k as i64, &reduced));
                }
            }
            for r in 0..quotient.degree() {
                rows.push(cols.iter().map(|c| c[r].clone()).collect());
            }
        }
        Ok(lattice_basis(&integer_kernel(&rows, self.dim), self.dim))
    }

    pub fn lagrangian_check(&self, l: &Submodule) -> Result<LagrangianCheck> {
        if !self.is_invariant(l)? {
            return Err(Error::NotInvariant);
        }
        let mut isotropic = true;
        'outer: for a in &l.closure {
            for b in &l.closure {
                if !self.pairing_eval(a, b)?.is_zero() {
                    isotropic = false;
                    break 'outer;
                }
            }
        }
        let equals_annihilator = self.annihilator(l)? == l.closure;
        Ok(LagrangianCheck {
            isotropic,
            equals_annihilator,
        })
    }

    pub fn is_lagrangian(&self, l: &Submodule) -> Result<bool> {
        Ok(self.lagrangian_check(l)?.holds())
    }

    /// `L1 ∩ L2 = 0` and `L1 + L2 = H`.
    pub fn are_complementary(&self, l1: &Submodule, l2: &Submodule) -> bool {
        if l1.rank() + l2.rank() != self.dim {
            return false;
        }
        let both: Matrix<BigInt> = l1.closure.iter().chain(&l2.closure).cloned().collect();
        lattice_basis(&both, self.dim) == identity(self.dim)
    }

    pub fn algebraic_double_slice_check(&self, l1: &Submodule, l2: &Submodule) -> Result<DoubleSliceCheck> {
        let first = self.lagrangian_check(l1)?;
        let second = self.lagrangian_check(l2)?;
        let complementary = self.are_complementary(l1, l2);
        let mut failures = Vec::new();
        for (name, c) in [("first", &first), ("second", &second)] {
            if !c.isotropic {
                failures.push(format!("{name} submodule is not isotropic"));
            }
            if !c.equals_annihilator {
                failures.push(format!("{name} submodule differs from its annihilator"));
            }
        }
        if !complementary {
            failures.push("submodules are not complementary".to_string());
        }
        Ok(DoubleSliceCheck {
            verdict: if failures.is_empty() {
                SliceVerdict::AlgebraicallyDoublySlice
            } else {
                SliceVerdict::NotCertified
            },
            first,
            second,
            complementary,
            failures,
        })
    }

    /// Block-diagonal companion matrix of the `t`-action on `Z^D`.
    pub fn t_action(&self) -> Matrix<BigInt> {
        let mut m = vec![vec![BigInt::zero(); self.dim]; self.dim];
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            for (i, row) in b.companion().iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    m[off + i][off + j] = c.clone();
                }
            }
        }
        m
    }

    pub fn is_invariant_lattice(&self, basis: &[Vec<BigInt>]) -> bool {
        let c = self.t_action();
        let mut ext = basis.to_vec();
        ext.extend(basis.iter().map(|b| mat_vec(&c, b)));
        lattice_basis(&ext, self.dim) == lattice_basis(basis, self.dim)
    }
}
