//! The three-interval exchange `T` on `[0, 1)` and its symbolic coding.
//!
//! For `0 < a < b < 1`,
//!
//! ```text
//! T(x) = x + 1 - a       on [0, a)      symbol 0
//!        x - a + 1 - b   on [a, b)      symbol 1
//!        x - b           on [b, 1)      symbol 2
//! ```
//!
//! Every branch decision is an exact sign computation in ℚ(√2, √3).

mod field;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub use field::QuadraticFieldElement;

use crate::error::{Error, Result};

type Q = QuadraticFieldElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IetSystem {
    a: Q,
    b: Q,
    degenerate: bool,
}

/// Symbols of `Tᵏ(x)` for `k` in `base..base + symbols.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItineraryWord {
    pub base: i64,
    pub symbols: Vec<u8>,
}

impl ItineraryWord {
    pub fn get(&self, k: i64) -> Option<u8> {
        let i = k.checked_sub(self.base)?;
        usize::try_from(i).ok().and_then(|i| self.symbols.get(i)).copied()
    }

    pub fn to_text(&self) -> String {
        word_text(&self.symbols)
    }
}

pub fn word_text(w: &[u8]) -> String {
    w.iter().map(|&s| char::from(b'0' + s)).collect()
}

/// The `n`-step refinement of `{[0,a), [a,b), [b,1)}`: sorted left endpoints
/// and the length-`n` word shared by every point of each cell.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub n: usize,
    pub cuts: Vec<Q>,
    pub words: Vec<Vec<u8>>,
}

impl Refinement {
    /// Distinct words, sorted.
    pub fn language(&self) -> Vec<Vec<u8>> {
        let set: BTreeSet<&Vec<u8>> = self.words.iter().collect();
        set.into_iter().cloned().collect()
    }
}

/// `p(1..=n_max)` with the strict-growth flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Complexity {
    pub counts: Vec<usize>,
    /// `p` strictly increasing over the range, which rules out periodic codings.
    pub strictly_increasing: bool,
    pub degenerate: bool,
}

fn rank(rows: Vec<[BigRational; 4]>) -> usize {
    let mut m = rows;
    let mut r = 0;
    for col in 0..4 {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[r][col];
                for c in 0..4 {
                    let d = &f * &m[r][c];
                    m[i][c] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

impl IetSystem {
    pub fn new(a: Q, b: Q) -> Result<Self> {
        let zero = Q::zero();
        let one = Q::one();
        if !(zero < a && a < b && b < one) {
            return Err(Error::Domain(format!("need 0 < a < b < 1, got a = {a}, b = {b}")));
        }
        let row = |x: &Q| -> [BigRational; 4] { [x.p.clone(), x.q.clone(), x.r.clone(), x.s.clone()] };
        let unit = [BigRational::one(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        let degenerate = rank(vec![unit, row(&a), row(&b)]) < 3;
        Ok(Self { a, b, degenerate })
    }

    /// `a = √2 - 1`, `b = √3 - 1`.
    pub fn default_instance() -> Self {
        Self::new(Q::from_integers(-1, 1, 0, 0), Q::from_integers(-1, 0, 1, 0)).expect("0 < √2-1 < √3-1 < 1")
    }

    pub fn a(&self) -> &Q {
        &self.a
    }

    pub fn b(&self) -> &Q {
        &self.b
    }

    /// `{1, a, b}` rationally dependent.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Errors unless the instance is rationally independent.
    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.degenerate {
            Err(Error::Refused(format!(
                "a = {}, b = {}: 1, a, b are rationally dependent, so the coding is not minimal",
                self.a, self.b
            )))
        } else {
            Ok(())
        }
    }

    fn check_unit(&self, x: &Q) -> Result<()> {
        if x.signum().is_lt() || *x >= Q::one() {
            Err(Error::Domain(format!("{x} is not in [0, 1)")))
        } else {
            Ok(())
        }
    }

    fn branch(&self, x: &Q) -> u8 {
        if *x < self.a {
            0
        } else if *x < self.b {
            1
        } else {
            2
        }
    }

    pub fn symbol(&self, x: &Q) -> Result<u8> {
        self.check_unit(x)?;
        Ok(self.branch(x))
    }

    fn step(&self, x: &Q) -> Q {
        let one = Q::one();
        match self.branch(x) {
            0 => &(x + &one) - &self.a,
            1 => &(&(x - &self.a) + &one) - &self.b,
            _ => x - &self.b,
        }
    }

    fn step_back(&self, y: &Q) -> Q {
        let one = Q::one();
        let one_minus_b = &one - &self.b;
        if *y < one_minus_b {
            y + &self.b
        } else if *y < &one - &self.a {
            &(y + &self.a) - &one_minus_b
        } else {
            &(y - &one) + &self.a
        }
    }

    pub fn apply(&self, x: &Q) -> Result<Q> {
        self.check_unit(x)?;
        Ok(self.step(x))
    }

    pub fn inverse(&self, y: &Q) -> Result<Q> {
        self.check_unit(y)?;
        Ok(self.step_back(y))
    }

    /// `Tᵏ(x)` for any integer `k`.
    pub fn iterate(&self, x: &Q, k: i64) -> Result<Q> {
        self.check_unit(x)?;
        let mut y = x.clone();
        for _ in 0..k.unsigned_abs() {
            y = if k > 0 { self.step(&y) } else { self.step_back(&y) };
        }
        Ok(y)
    }

    pub fn itinerary(&self, x: &Q, k_lo: i64, k_hi: i64) -> Result<ItineraryWord> {
        if k_lo > k_hi {
            return Err(Error::Precondition(format!("k_lo = {k_lo} > k_hi = {k_hi}")));
        }
        let mut y = self.iterate(x, k_lo)?;
        let mut symbols = Vec::with_capacity((k_hi - k_lo + 1) as usize);
        for k in k_lo..=k_hi {
            symbols.push(self.branch(&y));
            if k < k_hi {
                y = self.step(&y);
            }
        }
        Ok(ItineraryWord { base: k_lo, symbols })
    }

    /// Cells of `⋁_{k<n} T⁻ᵏ{[0,a), [a,b), [b,1)}`. Their left endpoints are
    /// `0` and the preimages `T⁻ᵏa`, `T⁻ᵏb` for `k < n`. `T` maps each cell by a
    /// translation into a cell of the `(n-1)`-step refinement, so the word of a
    /// cell is read off by following the successor cell of its left endpoint.
    pub fn refinement(&self, n: usize) -> Result<Refinement> {
        if n == 0 {
            return Err(Error::Domain("word length must be at least 1".into()));
        }
        let mut cuts = vec![Q::zero()];
        let (mut pa, mut pb) = (self.a.clone(), self.b.clone());
        for k in 0..n {
            if k > 0 {
                pa = self.step_back(&pa);
                pb = self.step_back(&pb);
            }
            cuts.push(pa.clone());
            cuts.push(pb.clone());
        }
        cuts.sort();
        cuts.dedup();

        let symbols: Vec<u8> = cuts.iter().map(|c| self.branch(c)).collect();
        let successor: Vec<usize> = cuts
            .iter()
            .map(|c| {
                let t = self.step(c);
                cuts.partition_point(|d| *d <= t) - 1
            })
            .collect();
        let words = (0..cuts.len())
            .map(|i| {
                let mut w = Vec::with_capacity(n);
                let mut at = i;
                for _ in 0..n {
                    w.push(symbols[at]);
                    at = successor[at];
                }
                w
            })
            .collect();
        Ok(Refinement { n, cuts, words })
    }

    /// Length-`n` words of the coded subshift, sorted.
    pub fn language(&self, n: usize) -> Result<Vec<Vec<u8>>> {
        Ok(self.refinement(n)?.language())
    }

    pub fn complexity(&self, n_max: usize) -> Result<Complexity> {
        if n_max == 0 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        let refinement = self.refinement(n_max)?;
        let counts: Vec<usize> = (1..=n_max)
            .map(|n| {
                let set: BTreeSet<&[u8]> = refinement.words.iter().map(|w| &w[..n]).collect();
                set.len()
            })
            .collect();
        let strictly_increasing = counts.windows(2).all(|w| w[0] < w[1]);
        Ok(Complexity {
            counts,
            strictly_increasing,
            degenerate: self.degenerate,
        })
    }

    /// The image intervals `[1-a, 1)`, `[1-b, 1-a)`, `[0, 1-b)` tile `[0, 1)`
    /// and each branch maps its interval onto the stated image.
    pub fn check_image_partition(&self) -> bool {
        let one = Q::one();
        let ends = [
            (Q::zero(), self.a.clone(), &one - &self.a, one.clone()),
            (self.a.clone(), self.b.clone(), &one - &self.b, &one - &self.a),
            (self.b.clone(), one.clone(), Q::zero(), &one - &self.b),
        ];
        ends.iter().all(|(lo, hi, ilo, ihi)| self.step(lo) == *ilo && &(hi - lo) == &(ihi - ilo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    #[test]
    fn apply_examples() {
        let t = IetSystem::default_instance();
        assert_eq!(t.apply(&Q::zero()).unwrap(), q("2-sqrt2"));
        assert_eq!(t.apply(t.b()).unwrap(), Q::zero());
        assert_eq!(t.apply(&q("1/2")).unwrap(), q("7/2-sqrt2-sqrt3"));
        assert_eq!(t.apply(&q("2-sqrt2")).unwrap(), q("5-2*sqrt2-sqrt3"));
        assert!((q("5-2*sqrt2-sqrt3").to_f64() - 0.4395221).abs() < 1e-7);
        assert!(t.apply(&Q::one()).is_err());
        assert!(t.apply(&q("-1/1000")).is_err());
    }

    #[test]
    fn inverse_undoes_apply() {
        let t = IetSystem::default_instance();
        let mut x = q("1/7");
        for _ in 0..200 {
            let y = t.apply(&x).unwrap();
            assert_eq!(t.inverse(&y).unwrap(), x);
            x = y;
        }
        assert!(t.check_image_partition());
    }

    #[test]
    fn itinerary_examples() {
        let t = IetSystem::default_instance();
        assert_eq!(t.itinerary(&Q::zero(), 0, 2).unwrap().symbols, vec![0, 1, 1]);
        assert_eq!(t.itinerary(t.b(), 0, 0).unwrap().symbols, vec![2]);
        let x = q("3/10+1/5*sqrt6");
        let n = 100;
        let shifted = t.itinerary(&t.apply(&x).unwrap(), 0, n).unwrap();
        let original = t.itinerary(&x, 1, n + 1).unwrap();
        assert_eq!(shifted.symbols, original.symbols);
        assert!(t.itinerary(&x, 3, 2).is_err());
    }

    #[test]
    fn validation() {
        assert!(IetSystem::new(q("1/2"), q("1/3")).is_err());
        assert!(IetSystem::new(q("0"), q("1/3")).is_err());
        assert!(IetSystem::new(q("1/3"), q("1")).is_err());
        assert!(!IetSystem::default_instance().is_degenerate());
        assert!(IetSystem::new(q("1/3"), q("2/3")).unwrap().is_degenerate());
        // a, b irrational but 1, a, b dependent: b = 1 - a.
        let dep = IetSystem::new(q("-1+sqrt2"), q("2-sqrt2")).unwrap();
        assert!(dep.is_degenerate());
        assert!(matches!(dep.require_nondegenerate(), Err(Error::Refused(_))));
    }

    #[test]
    fn language_examples() {
        let t = IetSystem::default_instance();
        let text = |n| -> Vec<String> { t.language(n).unwrap().iter().map(|w| word_text(w)).collect() };
        assert_eq!(text(1), vec!["0", "1", "2"]);
        assert_eq!(text(2).len(), 5);
        assert_eq!(t.language(30).unwrap().len(), 61);
        assert_eq!(t.complexity(3).unwrap().counts, vec![3, 5, 7]);
        assert_eq!(t.complexity(1).unwrap().counts, vec![3]);
    }

    #[test]
    fn rational_instance_is_eventually_constant() {
        let t = IetSystem::new(q("1/3"), q("2/3")).unwrap();
        let c = t.complexity(12).unwrap();
        assert!(c.degenerate);
        assert!(!c.strictly_increasing);
        assert_eq!(*c.counts.last().unwrap(), 3);
    }

    /// Words seen along an exact orbit segment are legal, and for short
    /// lengths they are all of them.
    #[test]
    fn orbit_sampling_agrees_with_refinement() {
        let t = IetSystem::default_instance();
        let orbit = t.itinerary(&q("1/5"), 0, 4000).unwrap().symbols;
        for n in 1..=8 {
            let sampled: BTreeSet<Vec<u8>> = orbit.windows(n).map(|w| w.to_vec()).collect();
            let exact: BTreeSet<Vec<u8>> = t.language(n).unwrap().into_iter().collect();
            assert_eq!(sampled, exact, "n = {n}");
        }
    }

    #[test]
    fn language_is_factor_closed() {
        let t = IetSystem::default_instance();
        for n in 2..=12 {
            let shorter: BTreeSet<Vec<u8>> = t.language(n - 1).unwrap().into_iter().collect();
            for w in t.language(n).unwrap() {
                assert!(shorter.contains(&w[1..]));
                assert!(shorter.contains(&w[..n - 1]));
            }
        }
    }

    #[test]
    fn orbit_of_zero_is_injective() {
        let t = IetSystem::default_instance();
        let mut seen = HashSet::new();
        let mut x = Q::zero();
        for _ in 0..=1000 {
            assert!(seen.insert(x.clone()));
            x = t.apply(&x).unwrap();
        }
    }
}
