use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::signature::{rho_integral, rho_finite, RhoOptions, RhoResult, RhoValue};
use super::{GeneratorOrder, HermMatrix};
use crate::covers::is_prime;
use crate::error::{Error, Result};
use crate::laurent::{cyclotomic_strip, LaurentPoly};
use crate::metabelian::{is_alexander, Coefficients, ElementOrder, MetabelianGroupCtx};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoRow {
    /// `phi_A^Q`, `phi_A^F_p`, or `phi_B`.
    pub label: String,
    pub coefficients: Coefficients,
    pub generator_order: GeneratorOrder,
    pub result: RhoResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NotDoublySlice,
    Inconclusive,
    /// Some hypothesis failed; no verdict is drawn.
    HypothesesFailed,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NotDoublySlice => "NOT_DOUBLY_SLICE",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::HypothesesFailed => "HYPOTHESES_FAILED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub p: LaurentPoly,
    pub hypothesis_checks: Vec<HypothesisCheck>,
    pub rho_values: Vec<RhoRow>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> HypothesisCheck {
    HypothesisCheck {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

/// Best effort: looks for a cyclotomic factor or a rational root.
fn irreducibility(p: &LaurentPoly) -> Result<HypothesisCheck> {
    let strip = cyclotomic_strip(p)?;
    let passed = match strip.factors.as_slice() {
        [] => strip.remainder.span() > 0,
        [(_, 1)] => strip.remainder.is_unit(),
        _ => false,
    };
    let detail = if passed {
        "no cyclotomic or linear split found".to_string()
    } else if strip.factors.is_empty() {
        "p is a unit".to_string()
    } else {
        format!("cyclotomic factors {:?} with cofactor {}", strip.factors, strip.remainder)
    };
    Ok(check("p_irreducible", passed, detail))
}

/// Evaluates the obstructions for `u` over the module `Z[t, t^-1]/(p)`, taking the
/// summand `A` to be everything, which is forced when `p` is irreducible.
pub fn doubly_slice_report(
    u: &HermMatrix,
    p: &LaurentPoly,
    primes: &[u64],
    copies: u32,
    opts: &RhoOptions,
) -> Result<ObstructionReport> {
    if let Some(bad) = primes.iter().find(|&&q| !is_prime(q)) {
        return Err(Error::InvalidInput(format!("{bad} is not prime")));
    }
    let mut checks = Vec::new();
    let witness = u.even_witness();
    checks.push(check(
        "u_even",
        witness.is_some(),
        if witness.is_some() { "diagonal constant coefficients are even" } else { "odd diagonal constant coefficient" },
    ));
    let abel_det = crate::linalg::det_ring(&u.abelianized(), &LaurentPoly::one());
    checks.push(check("u_zz_nonsingular", abel_det.is_unit(), format!("abelianized determinant {abel_det}")));
    let aug = u.augmentation_signature()?;
    checks.push(check("augmentation_signature_zero", aug == 0, format!("augmentation signature {aug}")));
    let ctx = MetabelianGroupCtx::new(p);
    checks.push(check(
        "p_unit_extremes",
        ctx.is_ok(),
        match &ctx {
            Ok(c) => format!("normalized p = {}", c.p()),
            Err(e) => e.to_string(),
        },
    ));
    checks.push(check("p_alexander", is_alexander(p), format!("p(1) = {}", p.eval_at_one())));
    checks.push(irreducibility(p)?);

    let mut rows = Vec::new();
    let integral = rho_integral(u, copies, opts)?;
    rows.push(RhoRow {
        label: "phi_A^Q".into(),
        coefficients: Coefficients::Q,
        generator_order: GeneratorOrder::Infinite,
        result: integral,
    });
    for &prime in primes {
        // g is the class of 1 in A.
        let k = match &ctx {
            Ok(c) if c.degree() > 0 => match c.order_in_quotient(&c.basis(0), Coefficients::Fp(prime))? {
                ElementOrder::Finite(k) => k,
                ElementOrder::Infinite => unreachable!("F_p quotients are torsion"),
            },
            _ => prime,
        };
        rows.push(RhoRow {
            label: format!("phi_A^F_{prime}"),
            coefficients: Coefficients::Fp(prime),
            generator_order: GeneratorOrder::Finite(k),
            result: rho_finite(u, k, copies, opts.max_precision_bits)?,
        });
    }
    rows.push(RhoRow {
        label: "phi_B".into(),
        coefficients: Coefficients::Q,
        generator_order: GeneratorOrder::Finite(1),
        result: RhoResult {
            value: RhoValue::Exact {
                value: BigRational::new(BigInt::from(aug), BigInt::from(copies)),
            },
            copies,
            fell_back_to_numeric: false,
        },
    });

    let mut notes = vec!["decompositions H = A + B are not enumerated; p is taken irreducible, so B = 0".to_string()];
    if copies != 1 {
        notes.push(format!("values carry the 1/r normalization with r = {copies}"));
    }
    let verdict = if checks.iter().any(|c| !c.passed) {
        Verdict::HypothesesFailed
    } else if rows.iter().any(|r| r.result.is_nonzero() == Some(true)) {
        Verdict::NotDoublySlice
    } else {
        if rows.iter().any(|r| r.result.is_nonzero().is_none()) {
            notes.push("some enclosure contains zero".into());
        }
        Verdict::Inconclusive
    };
    Ok(ObstructionReport {
        p: p.clone(),
        hypothesis_checks: checks,
        rho_values: rows,
        verdict,
        notes,
    })
}

impl ObstructionReport {
    pub fn row(&self, label: &str) -> Option<&RhoRow> {
        self.rho_values.iter().find(|r| r.label == label)
    }

    pub fn phi_b_is_zero(&self) -> bool {
        self.row("phi_B").is_some_and(|r| r.result.is_nonzero() == Some(false))
    }

    pub fn rational_value(&self, label: &str) -> Option<BigRational> {
        match &self.row(label)?.result.value {
            RhoValue::Exact { value } => Some(value.clone()),
            RhoValue::Certified { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::cyclotomic_poly;
    use crate::rho::{family_matrix, CyclicEmbedding};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn family_is_obstructed() {
        let rep = doubly_slice_report(&family_matrix(), &cyclotomic_poly(30), &[3], 1, &RhoOptions::default()).unwrap();
        assert!(rep.hypothesis_checks.iter().all(|c| c.passed), "{:?}", rep.hypothesis_checks);
        assert_eq!(rep.verdict, Verdict::NotDoublySlice);
        assert_eq!(rep.rational_value("phi_A^Q"), Some(q(-4, 3)));
        assert_eq!(rep.rational_value("phi_A^F_3"), Some(q(-4, 3)));
        assert!(rep.phi_b_is_zero());
    }

    #[test]
    fn hyperbolic_is_inconclusive() {
        let u = HermMatrix::from_pairs(&[&[&[], &[(0, 1)]], &[&[(0, 1)], &[]]], CyclicEmbedding::infinite()).unwrap();
        let rep = doubly_slice_report(&u, &cyclotomic_poly(6), &[], 1, &RhoOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert!(rep.rho_values.iter().all(|r| r.result.is_nonzero() == Some(false)));
    }

    #[test]
    fn failed_hypotheses_withhold_verdict() {
        let p = &cyclotomic_poly(6) * &cyclotomic_poly(10);
        let rep = doubly_slice_report(&family_matrix(), &p, &[], 1, &RhoOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesesFailed);
        assert!(!rep.hypothesis_checks.iter().find(|c| c.name == "p_irreducible").unwrap().passed);
        assert!(doubly_slice_report(&family_matrix(), &p, &[4], 1, &RhoOptions::default()).is_err());
    }

    #[test]
    fn report_round_trips() {
        let rep = doubly_slice_report(&family_matrix(), &cyclotomic_poly(30), &[2, 5], 2, &RhoOptions::default()).unwrap();
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.contains(r#""verdict":"NOT_DOUBLY_SLICE""#));
        assert_eq!(serde_json::from_str::<ObstructionReport>(&s).unwrap(), rep);
        assert_eq!(rep.rational_value("phi_A^Q"), Some(q(-2, 3)));
    }
}
