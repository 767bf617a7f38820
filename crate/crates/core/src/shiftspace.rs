//! Alphabets, finite windows of bi-infinite points and the λ-adic metric.
//!
//! Points of a subshift are bi-infinite sequences; everything here works on a
//! finite window `[lo, hi]` containing the origin. The metric is
//! `d(x, y) = λ^{-e}` with `e = min{|i| : x_i ≠ y_i}`, and distances are
//! carried around as the integer exponent `e`. Floating point only appears
//! when a value is rendered.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a symbol inside its [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered, finite set of named symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Domain("alphabet must contain at least one symbol".into()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), Symbol(i as u32)).is_some() {
                return Err(Error::Domain(format!("duplicate symbol {name:?} in alphabet")));
            }
        }
        Ok(Self { names, index })
    }

    /// The alphabet `{0, 1, ..., k-1}` with decimal names.
    pub fn numeric(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn name(&self, symbol: Symbol) -> &str {
        &self.names[symbol.index()]
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        symbol.index() < self.names.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len() as u32).map(Symbol)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// The cells `x_lo, ..., x_hi` of a bi-infinite point.
#[derive(Clone, Debug)]
pub struct FiniteConfiguration {
    alphabet: Arc<Alphabet>,
    lo: i64,
    cells: Vec<Symbol>,
}

impl FiniteConfiguration {
    pub fn new(alphabet: Arc<Alphabet>, lo: i64, cells: Vec<Symbol>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Domain("configuration window is empty".into()));
        }
        if let Some(bad) = cells.iter().find(|s| !alphabet.contains(**s)) {
            return Err(Error::Domain(format!(
                "symbol index {} is not in an alphabet of size {}",
                bad.0,
                alphabet.len()
            )));
        }
        Ok(Self { alphabet, lo, cells })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.cells.len() as i64 - 1
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn get(&self, i: i64) -> Option<Symbol> {
        if i < self.lo {
            return None;
        }
        self.cells.get((i - self.lo) as usize).copied()
    }

    fn same_frame(&self, other: &Self) -> Result<()> {
        if self.lo != other.lo || self.cells.len() != other.cells.len() {
            return Err(Error::Domain(format!(
                "windows differ: [{}, {}] vs [{}, {}]",
                self.lo,
                self.hi(),
                other.lo,
                other.hi()
            )));
        }
        if !Arc::ptr_eq(&self.alphabet, &other.alphabet) && self.alphabet != other.alphabet {
            return Err(Error::Domain("configurations use different alphabets".into()));
        }
        Ok(())
    }

    /// Positions in the window where the two configurations differ, ascending.
    pub fn disagreements(&self, other: &Self) -> Result<Vec<i64>> {
        self.same_frame(other)?;
        Ok(self
            .cells
            .iter()
            .zip(&other.cells)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(k, _)| self.lo + k as i64)
            .collect())
    }
}

/// A distance expressed through its λ-exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistanceValue {
    /// The distance is exactly `λ^{-e}`.
    Exact(u64),
    /// No disagreement is visible; the distance is at most `λ^{-e}`.
    BoundedAbove(u64),
}

impl DistanceValue {
    pub fn exponent(self) -> u64 {
        match self {
            DistanceValue::Exact(e) | DistanceValue::BoundedAbove(e) => e,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, DistanceValue::Exact(_))
    }
}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceValue::Exact(e) => write!(f, "λ^-{e}"),
            DistanceValue::BoundedAbove(e) => write!(f, "≤ λ^-{e}"),
        }
    }
}

/// The λ-adic metric on a full shift, `d(x, y) = λ^{-min{|i| : x_i ≠ y_i}}`.
///
/// Below the threshold `c = 1/λ` it satisfies
/// `max(d(σx, σy), d(σ⁻¹x, σ⁻¹y)) = λ·d(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarShiftMetric {
    lambda: f64,
}

impl Default for SelfSimilarShiftMetric {
    fn default() -> Self {
        Self { lambda: 2.0 }
    }
}

impl SelfSimilarShiftMetric {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 1.0 {
            return Err(Error::Domain(format!("expanding factor must satisfy λ > 1, got {lambda}")));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn threshold_c(&self) -> f64 {
        1.0 / self.lambda
    }

    /// `λ^{exponent}`; exponents may be negative or half-integral.
    pub fn power(&self, exponent: f64) -> f64 {
        self.lambda.powf(exponent)
    }

    pub fn value(&self, d: DistanceValue) -> f64 {
        self.power(-(d.exponent() as f64))
    }

    pub fn distance(&self, x: &FiniteConfiguration, y: &FiniteConfiguration) -> Result<DistanceValue> {
        if x.lo() > 0 || x.hi() < 0 {
            return Err(Error::Domain(format!(
                "window [{}, {}] does not contain the origin",
                x.lo(),
                x.hi()
            )));
        }
        let diffs = x.disagreements(y)?;
        Ok(distance_at(&diffs, x.lo(), x.hi(), 0))
    }

    /// `distance(σⁿx, σⁿy)` for every `n` in `[n_lo, n_hi]`.
    ///
    /// `(σx)_i = x_{i+1}`, so shifting by `n` moves the window to
    /// `[lo - n, hi - n]`; each `n` must keep the origin inside it.
    pub fn orbit_distance_profile(
        &self,
        x: &FiniteConfiguration,
        y: &FiniteConfiguration,
        n_lo: i64,
        n_hi: i64,
    ) -> Result<Vec<DistanceValue>> {
        if n_lo > n_hi {
            return Err(Error::Domain(format!("empty shift range [{n_lo}, {n_hi}]")));
        }
        if n_lo < x.lo() || n_hi > x.hi() {
            return Err(Error::Domain(format!(
                "shift range [{n_lo}, {n_hi}] exceeds window [{}, {}]",
                x.lo(),
                x.hi()
            )));
        }
        let diffs = x.disagreements(y)?;
        Ok((n_lo..=n_hi)
            .map(|n| distance_at(&diffs, x.lo(), x.hi(), n))
            .collect())
    }

    /// Checks `max_{|i|=1} d(σⁱx, σⁱy) = λ·d(x, y)` on a pair below the threshold.
    pub fn check_self_similar_identity(
        &self,
        x: &FiniteConfiguration,
        y: &FiniteConfiguration,
    ) -> Result<bool> {
        let e = match self.distance(x, y)? {
            DistanceValue::Exact(e) if e >= 1 => e,
            other => {
                return Err(Error::Precondition(format!(
                    "identity is asserted only for exact distances ≤ λ^-1, got {other}"
                )))
            }
        };
        let shifted = self.orbit_distance_profile(x, y, -1, 1)?;
        let (back, fwd) = (shifted[0], shifted[2]);
        let nearest = [back, fwd]
            .iter()
            .filter(|d| d.is_exact())
            .map(|d| d.exponent())
            .min();
        let bounded_ok = [back, fwd]
            .iter()
            .filter(|d| !d.is_exact())
            .all(|d| d.exponent() >= e - 1);
        Ok(nearest == Some(e - 1) && bounded_ok)
    }

    /// Contraction along a forward orbit: `exponent(n) ≥ exponent(0) + n`.
    ///
    /// `profile[n]` is the distance at time `n`. Every entry must be at most
    /// the threshold (exponent ≥ 1) and the first one exact. `BoundedAbove`
    /// exponents are lower bounds on the true exponent.
    pub fn contraction_check(&self, profile: &[DistanceValue]) -> Result<bool> {
        let e0 = match profile.first() {
            Some(DistanceValue::Exact(e)) => *e,
            Some(other) => {
                return Err(Error::Precondition(format!(
                    "first profile entry must be exact, got {other}"
                )))
            }
            None => return Err(Error::Precondition("empty profile".into())),
        };
        if let Some(d) = profile.iter().find(|d| d.exponent() < 1) {
            return Err(Error::Precondition(format!(
                "profile leaves the threshold ball: {d}"
            )));
        }
        Ok(profile
            .iter()
            .enumerate()
            .all(|(n, d)| d.exponent() >= e0 + n as u64))
    }
}

/// Distance between `σⁿx` and `σⁿy` given the sorted disagreement positions of
/// `x, y` on `[lo, hi]`.
fn distance_at(diffs: &[i64], lo: i64, hi: i64, n: i64) -> DistanceValue {
    let at = diffs.partition_point(|&j| j < n);
    let right = diffs.get(at).map(|&j| j - n);
    let left = at.checked_sub(1).map(|k| n - diffs[k]);
    match (left, right) {
        (None, None) => DistanceValue::BoundedAbove((n - lo).min(hi - n) as u64 + 1),
        (l, r) => DistanceValue::Exact(l.into_iter().chain(r).min().unwrap() as u64),
    }
}
