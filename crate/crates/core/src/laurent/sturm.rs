use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::RealPoly;
use crate::error::{Error, Result};

/// A real root pinned down by a rational interval.
///
/// `poly` is square-free; the interval holds exactly one of its roots. Either the
/// endpoint signs differ, or `lo == hi` is the root itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedRoot {
    pub poly: RealPoly,
    #[serde(with = "crate::serde_util::rational")]
    pub lo: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub hi: BigRational,
    /// Multiplicity in the polynomial that was isolated.
    pub multiplicity: u32,
}

impl IsolatedRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Halves the interval, keeping the root. Exact roots are left alone.
    pub fn refine(&mut self) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        let sm = self.poly.sign_at(&mid);
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        if self.poly.sign_at(&self.lo) != sm {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    pub fn refine_to(&mut self, width: &BigRational) {
        while !self.is_exact() && &self.width() > width {
            self.refine();
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    /// Whether `x` is this root, decided exactly.
    pub fn is_root(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi && self.poly.eval(x).is_zero()
    }
}

struct SturmChain {
    chain: Vec<RealPoly>,
}

impl SturmChain {
    fn new(p: &RealPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&-BigRational::one()));
        }
        Self { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|q| q.sign_at(x))
            .filter(|s| *s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// All real roots of `p` in `[lo, hi]`, ascending, with pairwise disjoint isolating
/// intervals. Isolation runs on the square-free part; multiplicities come from the
/// repeated-gcd tower of `p`.
pub fn sturm_isolate(p: &RealPoly, lo: &BigRational, hi: &BigRational) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(Error::EmptyInterval);
    }
    let sf = p.square_free();
    if sf.degree() == 0 {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(&sf);
    let mut found = Vec::new();
    if sf.eval(lo).is_zero() {
        found.push((lo.clone(), lo.clone()));
    }
    let mut stack = vec![(lo.clone(), hi.clone())];
    let two = BigRational::from_integer(2.into());
    while let Some((a, b)) = stack.pop() {
        match chain.count(&a, &b) {
            0 => {}
            1 if sf.eval(&b).is_zero() => found.push((b.clone(), b)),
            // A root on the open end belongs to the neighbouring interval; split until
            // the lower endpoint is clear of it.
            1 if !sf.eval(&a).is_zero() => found.push((a, b)),
            _ => {
                let mid = (&a + &b) / &two;
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    found.sort_by(|x, y| x.0.cmp(&y.0));

    // Repeated-gcd tower: p, gcd(p, p'), gcd of that with its derivative, ...
    let mut tower = Vec::new();
    let mut g = p.gcd(&p.derivative());
    while g.degree() > 0 {
        tower.push(g.clone());
        g = g.gcd(&g.derivative());
    }

    let mut roots: Vec<IsolatedRoot> = found
        .into_iter()
        .map(|(a, b)| {
            let mut root = IsolatedRoot {
                poly: sf.clone(),
                lo: a,
                hi: b,
                multiplicity: 1,
            };
            for level in &tower {
                if root_of(level, &root) {
                    root.multiplicity += 1;
                } else {
                    break;
                }
            }
            root
        })
        .collect();
    separate(&mut roots);
    Ok(roots)
}

/// Whether the root isolated by `root` is also a root of `q`. The common roots of `q`
/// and `root.poly` are the roots of their gcd, and the interval holds only one of them.
fn root_of(q: &RealPoly, root: &IsolatedRoot) -> bool {
    let g = q.gcd(&root.poly);
    if g.degree() == 0 {
        return false;
    }
    if root.is_exact() {
        return g.eval(&root.lo).is_zero();
    }
    let chain = SturmChain::new(&g);
    let inside = chain.count(&root.lo, &root.hi);
    inside > 0 || g.eval(&root.lo).is_zero()
}

/// Refines neighbouring intervals until no two closed intervals touch.
pub(crate) fn separate(roots: &mut [IsolatedRoot]) {
    for i in 1..roots.len() {
        while roots[i - 1].hi >= roots[i].lo {
            if roots[i - 1].is_exact() && roots[i].is_exact() {
                break;
            }
            if roots[i - 1].width() >= roots[i].width() {
                roots[i - 1].refine();
            } else {
                roots[i].refine();
            }
        }
    }
}
