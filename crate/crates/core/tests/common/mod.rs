#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;

use dslice::covers::AlexanderPresentation;
use dslice::laurent::{cyclotomic_poly, LaurentPoly};
use dslice::rho::{CyclicEmbedding, HermMatrix};

pub fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_pairs(pairs.iter().copied())
}

pub fn rand_laurent<R: Rng>(rng: &mut R, lo: i64, hi: i64, c: i64) -> LaurentPoly {
    LaurentPoly::from_pairs((lo..=hi).map(|e| (e, rng.gen_range(-c..=c))))
}

/// Random Hermitian matrix with entries of exponent span `[-deg, deg]`. Diagonal
/// entries are `w + w̄`, hence even, unless `odd` is set.
pub fn rand_herm<R: Rng>(rng: &mut R, n: usize, deg: i64, c: i64, odd: bool) -> HermMatrix {
    let mut m = vec![vec![LaurentPoly::zero(); n]; n];
    for i in 0..n {
        let w = rand_laurent(rng, 0, deg, c);
        m[i][i] = &w + &w.involute();
        if odd {
            m[i][i] = &m[i][i] + &LaurentPoly::constant(1);
        }
        for j in i + 1..n {
            let p = rand_laurent(rng, -deg, deg, c);
            m[j][i] = p.involute();
            m[i][j] = p;
        }
    }
    HermMatrix::new(m, CyclicEmbedding::infinite()).unwrap()
}

pub fn rand_presentation<R: Rng>(rng: &mut R, k: usize, deg: i64, c: i64) -> AlexanderPresentation {
    let m = (0..k)
        .map(|_| {
            (0..k)
                .map(|_| {
                    let hi = rng.gen_range(0..=deg);
                    rand_laurent(rng, 0, hi, c)
                })
                .collect()
        })
        .collect();
    AlexanderPresentation::new(m).unwrap()
}

/// Polynomials with unit extreme coefficients and `|p(1)| = 1`.
pub fn alexander_contexts() -> Vec<LaurentPoly> {
    vec![
        cyclotomic_poly(6),
        lp(&[(0, 1), (1, -3), (2, 1)]),
        cyclotomic_poly(10),
        cyclotomic_poly(30),
        lp(&[(0, 1), (1, -1), (3, 1)]),
    ]
}

pub fn eval_c(p: &LaurentPoly, z: Complex64) -> Complex64 {
    p.terms()
        .map(|(e, c)| z.powi(e as i32) * c.to_f64().unwrap())
        .sum()
}

/// Signature from floating eigenvalues; eigenvalues below `zero_tol` in absolute
/// value count as zero, and `None` is returned if any lies in `(zero_tol, gap)`.
pub fn float_signature(m: &[Vec<Complex64>], zero_tol: f64, gap: f64) -> Option<i64> {
    let n = m.len();
    let a = DMatrix::from_fn(n, n, |i, j| m[i][j]);
    let mut s = 0;
    for l in a.symmetric_eigenvalues().iter() {
        if l.abs() <= zero_tol {
            continue;
        }
        if l.abs() < gap {
            return None;
        }
        s += if *l > 0.0 { 1 } else { -1 };
    }
    Some(s)
}

pub fn float_eval(u: &HermMatrix, z: Complex64) -> Vec<Vec<Complex64>> {
    u.entries().iter().map(|r| r.iter().map(|e| eval_c(e, z)).collect()).collect()
}

/// `(1/k) Σ_j sgn U(ζ_k^j)` in floating point.
pub fn float_rho_finite(u: &HermMatrix, k: u64) -> f64 {
    let mut total = 0i64;
    for j in 1..=k {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
        total += float_signature(&float_eval(u, z), 1e-9, 0.0).unwrap();
    }
    total as f64 / k as f64
}
