//! Eventually periodic bi-infinite paths and pair certificates.

use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::EdgeSft;
use crate::error::{Error, Result};
use crate::shiftspace::{FiniteConfiguration, Symbol};

/// A bi-infinite edge path `…LLL W RRR…`.
///
/// `window` occupies `[window_start, window_start + window.len())`. The last
/// edge of `left_period` sits at `window_start - 1` and the first edge of
/// `right_period` at `window_start + window.len()`; both repeat forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventuallyPeriodicPath {
    pub left_period: Vec<usize>,
    pub window_start: i64,
    pub window: Vec<usize>,
    pub right_period: Vec<usize>,
}

impl EventuallyPeriodicPath {
    pub fn window_end(&self) -> i64 {
        self.window_start + self.window.len() as i64
    }

    pub fn edge_at(&self, i: i64) -> usize {
        let start = self.window_start;
        let end = self.window_end();
        if i < start {
            let l = self.left_period.len() as i64;
            self.left_period[(i - start).rem_euclid(l) as usize]
        } else if i >= end {
            let r = self.right_period.len() as i64;
            self.right_period[(i - end).rem_euclid(r) as usize]
        } else {
            self.window[(i - start) as usize]
        }
    }

    /// The same path read backwards: cell `i` of the result is cell `-i` of `self`.
    pub fn reversed(&self) -> Self {
        let mut window = self.window.clone();
        window.reverse();
        let mut left_period = self.right_period.clone();
        left_period.reverse();
        let mut right_period = self.left_period.clone();
        right_period.reverse();
        Self {
            left_period,
            window_start: 1 - self.window_end(),
            window,
            right_period,
        }
    }

    /// Checks that every pair of consecutive cells is a legal transition.
    pub fn validate(&self, sft: &EdgeSft) -> Result<()> {
        if self.left_period.is_empty() || self.right_period.is_empty() {
            return Err(Error::WitnessRejected("periodic tails must be non-empty".into()));
        }
        let n_edges = sft.edges().len();
        let all = self
            .left_period
            .iter()
            .chain(&self.window)
            .chain(&self.right_period);
        if let Some(e) = all.clone().find(|&&e| e >= n_edges) {
            return Err(Error::WitnessRejected(format!("unknown edge index {e}")));
        }
        let lo = self.window_start - self.left_period.len() as i64 - 1;
        let hi = self.window_end() + self.right_period.len() as i64 - 1;
        for i in lo..hi {
            let (a, b) = (self.edge_at(i), self.edge_at(i + 1));
            if sft.edges()[a].to != sft.edges()[b].from {
                return Err(Error::WitnessRejected(format!(
                    "edges {} and {} at positions {i}, {} do not connect",
                    sft.edges()[a].id,
                    sft.edges()[b].id,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn labels(&self, sft: &EdgeSft, lo: i64, hi: i64) -> Vec<Symbol> {
        (lo..=hi).map(|i| sft.edges()[self.edge_at(i)].label).collect()
    }
}

/// Exact disagreement set of two eventually periodic paths, in label terms.
///
/// Left of `core_lo` both paths are in their left periods, so the set repeats
/// with period `left_period`; right of `core_hi` likewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisagreementSet {
    pub core_lo: i64,
    pub core_hi: i64,
    pub core: Vec<i64>,
    pub left_period: i64,
    pub left_block: Vec<i64>,
    pub right_period: i64,
    pub right_block: Vec<i64>,
}

impl DisagreementSet {
    pub fn of(sft: &EdgeSft, x: &EventuallyPeriodicPath, y: &EventuallyPeriodicPath) -> Self {
        let label = |p: &EventuallyPeriodicPath, i: i64| sft.edges()[p.edge_at(i)].label;
        let differs = |i: i64| label(x, i) != label(y, i);
        let core_lo = x.window_start.min(y.window_start);
        let core_hi = x.window_end().max(y.window_end());
        let left_period = (x.left_period.len() as i64).lcm(&(y.left_period.len() as i64));
        let right_period = (x.right_period.len() as i64).lcm(&(y.right_period.len() as i64));
        Self {
            core_lo,
            core_hi,
            core: (core_lo..core_hi).filter(|&i| differs(i)).collect(),
            left_period,
            left_block: (core_lo - left_period..core_lo).filter(|&i| differs(i)).collect(),
            right_period,
            right_block: (core_hi..core_hi + right_period).filter(|&i| differs(i)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.left_block.is_empty() && self.right_block.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.core.is_empty()
    }

    pub fn contains(&self, i: i64) -> bool {
        if i < self.core_lo {
            let r = (i - self.core_lo).rem_euclid(self.left_period);
            self.left_block.contains(&(self.core_lo - self.left_period + r))
        } else if i >= self.core_hi {
            let r = (i - self.core_hi).rem_euclid(self.right_period);
            self.right_block.contains(&(self.core_hi + r))
        } else {
            self.core.binary_search(&i).is_ok()
        }
    }

    /// `(min, max)` for finite non-empty sets.
    pub fn bounds(&self) -> Option<(i64, i64)> {
        if !self.is_finite() {
            return None;
        }
        Some((*self.core.first()?, *self.core.last()?))
    }

    /// `min_{d ∈ D} dist(d, Nℤ)`, or `None` when the paths never differ.
    pub fn min_distance_to_multiples(&self, n: usize) -> Option<u64> {
        let n = n as i64;
        let dist = |d: i64| {
            let r = d.rem_euclid(n);
            r.min(n - r) as u64
        };
        let left_span = self.left_period.lcm(&n);
        let right_span = self.right_period.lcm(&n);
        let left = (self.core_lo - left_span..self.core_lo).filter(|&i| self.contains(i));
        let right = (self.core_hi..self.core_hi + right_span).filter(|&i| self.contains(i));
        self.core.iter().copied().chain(left).chain(right).map(dist).min()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    ForwardAsymptotic,
    BackwardAsymptotic,
    Homoclinic,
}

/// Two distinct points together with the range where they differ.
///
/// Homoclinic: the points agree outside `[disagreement_lo, disagreement_hi]`.
/// Forward asymptotic: they agree from `disagreement_hi + 1` on. Backward
/// asymptotic: they agree up to `disagreement_lo - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub kind: PairKind,
    pub x: EventuallyPeriodicPath,
    pub y: EventuallyPeriodicPath,
    pub disagreement_lo: i64,
    pub disagreement_hi: i64,
}

impl PairWitness {
    pub fn width(&self) -> u64 {
        (self.disagreement_hi - self.disagreement_lo + 1) as u64
    }

    pub fn disagreements(&self, sft: &EdgeSft) -> DisagreementSet {
        DisagreementSet::of(sft, &self.x, &self.y)
    }

    /// Replays both paths and checks the claims attached to `kind`.
    pub fn validate(&self, sft: &EdgeSft) -> Result<()> {
        self.x.validate(sft)?;
        self.y.validate(sft)?;
        let d = self.disagreements(sft);
        if d.is_empty() {
            return Err(Error::WitnessRejected("the two paths carry the same labels".into()));
        }
        let ok = match self.kind {
            PairKind::Homoclinic => {
                d.bounds() == Some((self.disagreement_lo, self.disagreement_hi))
            }
            PairKind::ForwardAsymptotic => {
                d.right_block.is_empty()
                    && d.contains(self.disagreement_hi)
                    && (self.disagreement_hi + 1..d.core_hi).all(|i| !d.contains(i))
            }
            PairKind::BackwardAsymptotic => {
                d.left_block.is_empty()
                    && d.contains(self.disagreement_lo)
                    && (d.core_lo..self.disagreement_lo).all(|i| !d.contains(i))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::WitnessRejected(format!(
                "{:?} witness does not match its disagreement range [{}, {}]",
                self.kind, self.disagreement_lo, self.disagreement_hi
            )))
        }
    }

    pub fn reversed(&self) -> Self {
        let kind = match self.kind {
            PairKind::ForwardAsymptotic => PairKind::BackwardAsymptotic,
            PairKind::BackwardAsymptotic => PairKind::ForwardAsymptotic,
            PairKind::Homoclinic => PairKind::Homoclinic,
        };
        Self {
            kind,
            x: self.x.reversed(),
            y: self.y.reversed(),
            disagreement_lo: -self.disagreement_hi,
            disagreement_hi: -self.disagreement_lo,
        }
    }

    pub fn to_json(&self, sft: &EdgeSft) -> serde_json::Value {
        witness_json(sft, Some(self.kind), &self.x, &self.y, Some((self.disagreement_lo, self.disagreement_hi)))
    }
}

pub(crate) fn path_json(sft: &EdgeSft, p: &EventuallyPeriodicPath) -> serde_json::Value {
    let ids = |v: &[usize]| -> Vec<&str> { v.iter().map(|&e| sft.edges()[e].id.as_str()).collect() };
    let labels = |v: &[usize]| -> Vec<&str> {
        v.iter().map(|&e| sft.alphabet().name(sft.edges()[e].label)).collect()
    };
    serde_json::json!({
        "left_period": ids(&p.left_period),
        "window_start": p.window_start,
        "window": ids(&p.window),
        "right_period": ids(&p.right_period),
        "left_period_labels": labels(&p.left_period),
        "window_labels": labels(&p.window),
        "right_period_labels": labels(&p.right_period),
    })
}

pub(crate) fn witness_json(
    sft: &EdgeSft,
    kind: Option<PairKind>,
    x: &EventuallyPeriodicPath,
    y: &EventuallyPeriodicPath,
    range: Option<(i64, i64)>,
) -> serde_json::Value {
    let mut v = serde_json::json!({
        "x": path_json(sft, x),
        "y": path_json(sft, y),
    });
    if let Some(kind) = kind {
        v["kind"] = serde_json::to_value(kind).expect("enum serializes");
    }
    if let Some((lo, hi)) = range {
        v["disagreement_lo"] = lo.into();
        v["disagreement_hi"] = hi.into();
    }
    v
}

/// Label windows `[lo, hi]` of both paths as finite configurations.
pub fn materialize(
    sft: &EdgeSft,
    x: &EventuallyPeriodicPath,
    y: &EventuallyPeriodicPath,
    lo: i64,
    hi: i64,
) -> Result<(FiniteConfiguration, FiniteConfiguration)> {
    let ab = Arc::clone(sft.alphabet());
    Ok((
        FiniteConfiguration::new(ab.clone(), lo, x.labels(sft, lo, hi))?,
        FiniteConfiguration::new(ab, lo, y.labels(sft, lo, hi))?,
    ))
}
