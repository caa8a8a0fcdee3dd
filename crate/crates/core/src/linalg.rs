//! Dense matrix routines shared across the crate: a division-free characteristic
//! polynomial over any commutative ring, fraction-free integer determinants, and
//! Hermite/Smith forms for lattice arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Minimal commutative-ring interface for the generic matrix algorithms.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
}

/// Ring involution used for Hermitian checks.
pub trait Conjugate {
    fn conj(&self) -> Self;
}

pub type Matrix<T> = Vec<Vec<T>>;

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
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

impl Conjugate for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }
}

/// Characteristic polynomial `det(xI - m)` by Berkowitz's algorithm, which uses no
/// division. Coefficients are returned in descending order, leading `1` first.
pub fn char_poly_berkowitz<T: Ring>(m: &[Vec<T>], one: &T) -> Vec<T> {
    let n = m.len();
    if n == 0 {
        return vec![one.clone()];
    }
    // Work from the trailing 1x1 block outwards.
    let mut vect = vec![one.clone(), m[n - 1][n - 1].negated()];
    for start in (0..n - 1).rev() {
        let size = n - start;
        let a = &m[start][start];
        let row: Vec<&T> = (start + 1..n).map(|j| &m[start][j]).collect();
        let mut col: Vec<T> = (start + 1..n).map(|i| m[i][start].clone()).collect();
        // Toeplitz column: 1, -a, -R C, -R A C, ..., -R A^{size-2} C.
        let mut diag = vec![one.clone(), a.negated()];
        for k in 0..size - 1 {
            let rc = row
                .iter()
                .zip(&col)
                .fold(one.zero_like(), |acc, (r, c)| acc.plus(&r.times(c)));
            diag.push(rc.negated());
            if k + 1 < size - 1 {
                col = (start + 1..n)
                    .map(|i| {
                        (start + 1..n)
                            .zip(&col)
                            .fold(one.zero_like(), |acc, (j, c)| acc.plus(&m[i][j].times(c)))
                    })
                    .collect();
            }
        }
        // Lower-triangular Toeplitz (size+1) x size times previous vector (length size).
        let mut next = Vec::with_capacity(size + 1);
        for i in 0..=size {
            let mut acc = one.zero_like();
            for (j, v) in vect.iter().enumerate() {
                if i >= j {
                    acc = acc.plus(&diag[i - j].times(v));
                }
            }
            next.push(acc);
        }
        vect = next;
    }
    vect
}

/// Determinant over a commutative ring via the characteristic polynomial.
pub fn det_ring<T: Ring>(m: &[Vec<T>], one: &T) -> T {
    let cp = char_poly_berkowitz(m, one);
    let c0 = cp.last().cloned().unwrap_or_else(|| one.clone());
    if m.len() % 2 == 1 {
        c0.negated()
    } else {
        c0
    }
}

/// Integer determinant by Bareiss fraction-free elimination.
pub fn bareiss_det(mut a: Matrix<BigInt>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Matrix<BigInt> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigInt::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn identity(n: usize) -> Matrix<BigInt> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Row echelon form over `Z` by unimodular row operations, tracking the transform.
///
/// Returns `(h, u, rank)` with `u · a = h`, `u` unimodular and the first `rank` rows of
/// `h` in Hermite normal form (positive pivots, entries above each pivot reduced into
/// `[0, pivot)`); the remaining rows of `h` are zero.
pub fn hermite_with_transform(a: &[Vec<BigInt>]) -> (Matrix<BigInt>, Matrix<BigInt>, usize) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut h: Matrix<BigInt> = a.to_vec();
    let mut u = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r.. until a single nonzero entry remains.
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u, r)
}

// row[i] -= q * row[j]
fn row_axpy(m: &mut Matrix<BigInt>, i: usize, j: usize, q: &BigInt) {
    let src = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

/// Canonical basis (Hermite normal form rows) of the lattice spanned by `gens` in `Z^dim`.
pub fn lattice_basis(gens: &[Vec<BigInt>], dim: usize) -> Matrix<BigInt> {
    if gens.is_empty() {
        return Vec::new();
    }
    debug_assert!(gens.iter().all(|g| g.len() == dim));
    let (h, _, r) = hermite_with_transform(gens);
    h.into_iter().take(r).collect()
}

/// Basis of the integer kernel `{y : m · y = 0}` of an `r x c` matrix.
pub fn integer_kernel(m: &[Vec<BigInt>], cols: usize) -> Matrix<BigInt> {
    if m.is_empty() {
        return identity(cols);
    }
    let transpose: Matrix<BigInt> = (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect();
    let (_, u, r) = hermite_with_transform(&transpose);
    u.into_iter().skip(r).collect()
}

/// Diagonal of the Smith normal form (nonzero invariant factors, ascending divisibility).
pub fn smith_invariants(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Matrix<BigInt> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let Some((pi, pj)) = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by(|&(a, b), &(c, d)| m[a][b].abs().cmp(&m[c][d].abs()))
            else {
                out.sort();
                return out;
            };
            m.swap(k, pi);
            for r in m.iter_mut() {
                r.swap(k, pj);
            }
            let p = m[k][k].clone();
            let mut dirty = false;
            for i in k + 1..rows {
                let q = m[i][k].div_floor(&p);
                if !q.is_zero() {
                    let src = m[k].clone();
                    for (x, y) in m[i].iter_mut().zip(&src) {
                        *x -= &q * y;
                    }
                }
                dirty |= !m[i][k].is_zero();
            }
            for j in k + 1..cols {
                let q = m[k][j].div_floor(&p);
                if !q.is_zero() {
                    for r in m.iter_mut() {
                        let y = r[k].clone();
                        r[j] -= &q * y;
                    }
                }
                dirty |= !m[k][j].is_zero();
            }
            if dirty {
                continue;
            }
            // Pivot must divide the rest of the block.
            if let Some(i) = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !m[i][j].mod_floor(&p).is_zero())) {
                let src = m[i].clone();
                for (x, y) in m[k].iter_mut().zip(&src) {
                    *x += y;
                }
                continue;
            }
            out.push(p.abs());
            break;
        }
    }
    out
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Matrix<T> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Solves the square system `a · x = b` over `Q`; `None` when singular.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Matrix<BigRational> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let src = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(rows: &[&[i64]]) -> Matrix<BigInt> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect()
    }

    fn brute_det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        (0..n).fold(BigInt::zero(), |acc, j| {
            let minor: Matrix<BigInt> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * brute_det(&minor);
            if j % 2 == 0 { acc + term } else { acc - term }
        })
    }

    #[test]
    fn berkowitz_small() {
        let one = BigRational::one();
        let cp = char_poly_berkowitz(&qm(&[&[0, 1], &[1, 0]]), &one);
        assert_eq!(cp, qm(&[&[1, 0, -1]])[0]);
        let cp = char_poly_berkowitz(&qm(&[&[-4, 1], &[1, -4]]), &one);
        assert_eq!(cp, qm(&[&[1, 8, 15]])[0]);
        let cp = char_poly_berkowitz(&qm(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]]), &one);
        assert_eq!(cp, qm(&[&[1, -10, 31, -30]])[0]);
    }

    #[test]
    fn determinants_agree_with_cofactor_expansion() {
        let m = zm(&[&[0, 2, -1, 3], &[1, 0, 4, 2], &[5, -2, 0, 1], &[3, 3, 3, 0]]);
        let want = brute_det(&m);
        assert_eq!(bareiss_det(m.clone()), want);
        let q: Matrix<BigRational> = m
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        assert_eq!(det_ring(&q, &BigRational::one()), BigRational::from_integer(want));
        assert_eq!(bareiss_det(zm(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn hermite_is_canonical() {
        let a = lattice_basis(&zm(&[&[2, 4], &[3, 7]]), 2);
        let b = lattice_basis(&zm(&[&[1, 3], &[0, 2], &[5, 15]]), 2);
        assert_eq!(a, b);
        assert_eq!(a, zm(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn kernel_basis() {
        let m = zm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = integer_kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(Zero::is_zero));
        }
        // The kernel is saturated: its Smith invariants are all 1.
        assert_eq!(smith_invariants(&k), vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn smith() {
        assert_eq!(smith_invariants(&zm(&[&[2, 0], &[0, 3]])), zm(&[&[1, 6]])[0]);
        assert_eq!(smith_invariants(&zm(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), zm(&[&[2, 6, 12]])[0]);
    }

    #[test]
    fn rational_solve() {
        let a = qm(&[&[2, 1], &[1, 3]]);
        let b = qm(&[&[3, 5]])[0].clone();
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x, vec![BigRational::new(4.into(), 5.into()), BigRational::new(7.into(), 5.into())]);
        assert!(solve_rational(&qm(&[&[1, 2], &[2, 4]]), &b).is_none());
    }
}
