use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::LaurentPoly;
use crate::error::{Error, Result};
use crate::linalg::bareiss_det;

/// Resultant of the polynomial parts of `f` and `g`.
///
/// Each input is first multiplied by the `t`-power making its lowest exponent zero.
/// The sign is that of the Sylvester determinant with coefficients in descending
/// order, i.e. `lc(f)^deg(g) · ∏ g(α)` over the roots `α` of `f`.
pub fn resultant(f: &LaurentPoly, g: &LaurentPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, a) = f.to_dense();
    let (_, b) = g.to_dense();
    Ok(sylvester_resultant(&a, &b))
}

/// Sylvester resultant of two dense ascending coefficient vectors (both nonzero,
/// highest entry nonzero).
pub fn sylvester_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::cyclotomic_poly;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn examples() {
        let trefoil = lp(&[(2, 1), (1, -1), (0, 1)]);
        let t2m1 = lp(&[(2, 1), (0, -1)]);
        // Oracle: Δ(1)·Δ(-1) by direct evaluation.
        let oracle = trefoil.eval_int(&BigInt::from(1)) * trefoil.eval_int(&BigInt::from(-1));
        assert_eq!(oracle.to_integer(), BigInt::from(3));
        assert_eq!(resultant(&trefoil, &t2m1).unwrap(), BigInt::from(3));
        assert_eq!(resultant(&lp(&[(1, 1), (0, -1)]), &lp(&[(1, 1), (0, 1)])).unwrap(), BigInt::from(2));

        let p30 = cyclotomic_poly(30);
        let oracle = p30.eval_int(&BigInt::from(1)) * p30.eval_int(&BigInt::from(-1));
        assert_eq!(oracle.to_integer(), BigInt::from(1));
        assert_eq!(resultant(&p30, &t2m1).unwrap(), BigInt::from(1));
    }

    #[test]
    fn units_are_normalized_away() {
        let f = lp(&[(-3, 1), (-2, 2)]);
        let g = lp(&[(5, 1), (6, 1)]);
        assert_eq!(resultant(&f, &g).unwrap(), resultant(&lp(&[(0, 1), (1, 2)]), &lp(&[(0, 1), (1, 1)])).unwrap());
    }

    #[test]
    fn constants() {
        assert_eq!(resultant(&lp(&[(0, 3)]), &lp(&[(2, 1), (0, 1)])).unwrap(), BigInt::from(9));
        assert_eq!(resultant(&lp(&[(0, 3)]), &lp(&[(0, 5)])).unwrap(), BigInt::from(1));
        assert_eq!(resultant(&LaurentPoly::zero(), &lp(&[(0, 5)])), Err(Error::ZeroPolynomial));
    }
}
