//! Exact expansivity constants of powers of the shift on edge SFTs.
//!
//! Under the λ-adic metric, `c` is an expansivity constant of `σᴺ` iff every
//! pair of distinct points has some `k` with `d(σ^{Nk}x, σ^{Nk}y) > c`. Write
//! `m(N)` for the largest `m` such that some distinct pair agrees on every
//! position within distance `< m` of `Nℤ`. Then every `c < λ^{-m(N)}` is an
//! expansivity constant, `λ^{-m(N)}` itself is not (the pair realizing
//! `m(N)` never gets further apart than that), and the supremum is
//! `γ(σᴺ) = λ^{-m(N)}`.
//!
//! Feasibility of a given `m` is decided on the constrained pair graph:
//! states `(u, v, phase)` where `phase` is the residue mod `N` of the next
//! position to be written, and transitions write a pair of edges whose labels
//! must agree whenever that position lies within distance `m - 1` of `Nℤ`. A
//! suitable pair exists iff some label-disagreeing transition lies on a
//! bi-infinite path.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sft::reach::{self, Csr};
use crate::sft::{materialize, witness_json, DisagreementSet, EdgeSft, EventuallyPeriodicPath};
use crate::shiftspace::SelfSimilarShiftMetric;

/// `λ^{twice/2}`: a power of λ with half-integer exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfPower {
    pub twice: i64,
}

impl HalfPower {
    pub fn exponent(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn value(self, metric: &SelfSimilarShiftMetric) -> f64 {
        metric.power(self.exponent())
    }
}

impl fmt::Display for HalfPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}", self.exponent())
        }
    }
}

impl Serialize for HalfPower {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.exponent())
    }
}

/// The pair graph of one `(N, m)` feasibility question.
pub struct ConstrainedPairGraph<'a> {
    sft: &'a EdgeSft,
    period: usize,
    radius: i64,
    vertices: usize,
    arcs: Vec<Arc>,
    succ: Csr,
    pred: Csr,
}

#[derive(Clone, Copy, Debug)]
struct Arc {
    source: u32,
    target: u32,
    e: u32,
    g: u32,
}

impl<'a> ConstrainedPairGraph<'a> {
    /// `agreement_radius = m - 1`; `-1` constrains nothing.
    pub fn new(sft: &'a EdgeSft, period: usize, agreement_radius: i64) -> Result<Self> {
        if period == 0 {
            return Err(Error::Domain("period N must be positive".into()));
        }
        if agreement_radius > (period / 2) as i64 - 1 || agreement_radius < -1 {
            return Err(Error::Domain(format!(
                "agreement radius {agreement_radius} outside [-1, {}] for N = {period}",
                (period / 2) as i64 - 1
            )));
        }
        let n = sft.vertex_count();
        let total = n * n * period;
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                for phase in 0..period {
                    let source = ((u * n + v) * period + phase) as u32;
                    let tight = (phase.min(period - phase) as i64) <= agreement_radius;
                    let next = (phase + 1) % period;
                    for &e in sft.out_edges(u) {
                        for &g in sft.out_edges(v) {
                            if tight && sft.label(e) != sft.label(g) {
                                continue;
                            }
                            let (a, b) = (sft.edges()[e].to, sft.edges()[g].to);
                            arcs.push(Arc {
                                source,
                                target: ((a * n + b) * period + next) as u32,
                                e: e as u32,
                                g: g as u32,
                            });
                        }
                    }
                }
            }
        }
        let succ = Csr::from_arcs(total, arcs.iter().map(|a| (a.source, a.target)));
        let pred = Csr::from_arcs(total, arcs.iter().map(|a| (a.target, a.source)));
        Ok(Self {
            sft,
            period,
            radius: agreement_radius,
            vertices: n,
            arcs,
            succ,
            pred,
        })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn agreement_radius(&self) -> i64 {
        self.radius
    }

    pub fn state_count(&self) -> usize {
        self.vertices * self.vertices * self.period
    }

    pub fn transition_count(&self) -> usize {
        self.arcs.len()
    }

    fn phase(&self, s: usize) -> usize {
        s % self.period
    }

    fn differs(&self, a: &Arc) -> bool {
        self.sft.label(a.e as usize) != self.sft.label(a.g as usize)
    }

    /// A pair of eventually periodic paths through the first (in state and
    /// edge order) disagreeing transition on a bi-infinite path.
    pub fn find_pair(&self) -> Option<PairOfPaths> {
        let (fwd, bwd) = reach::infinite_both(&self.succ, &self.pred);
        let pivot = *self
            .arcs
            .iter()
            .find(|a| self.differs(a) && bwd[a.source as usize] && fwd[a.target as usize])?;

        // Arcs are grouped by source; index them for the lasso walks.
        let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); self.state_count()];
        let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); self.state_count()];
        for (k, a) in self.arcs.iter().enumerate() {
            by_source[a.source as usize].push(k);
            by_target[a.target as usize].push(k);
        }

        let (left_period, left_transient) = {
            let mut seen = vec![usize::MAX; self.state_count()];
            let mut taken: Vec<usize> = Vec::new();
            let mut at = pivot.source as usize;
            loop {
                if seen[at] != usize::MAX {
                    let k = seen[at];
                    let mut transient = taken[..k].to_vec();
                    let mut period = taken[k..].to_vec();
                    transient.reverse();
                    period.reverse();
                    break (period, transient);
                }
                seen[at] = taken.len();
                let arc = *by_target[at]
                    .iter()
                    .find(|&&k| bwd[self.arcs[k].source as usize])
                    .expect("state with infinite past has such a predecessor");
                taken.push(arc);
                at = self.arcs[arc].source as usize;
            }
        };
        let (right_transient, right_period) = {
            let mut seen = vec![usize::MAX; self.state_count()];
            let mut taken: Vec<usize> = Vec::new();
            let mut at = pivot.target as usize;
            loop {
                if seen[at] != usize::MAX {
                    let k = seen[at];
                    break (taken[..k].to_vec(), taken[k..].to_vec());
                }
                seen[at] = taken.len();
                let arc = *by_source[at]
                    .iter()
                    .find(|&&k| fwd[self.arcs[k].target as usize])
                    .expect("state with infinite future has such a successor");
                taken.push(arc);
                at = self.arcs[arc].target as usize;
            }
        };

        let first_state = left_transient
            .first()
            .map(|&k| self.arcs[k].source as usize)
            .unwrap_or(pivot.source as usize);
        let window_start = self.phase(first_state) as i64;
        let pivot_arc = self
            .arcs
            .iter()
            .position(|a| a.source == pivot.source && a.e == pivot.e && a.g == pivot.g)
            .expect("pivot is an arc");
        let window: Vec<usize> = left_transient
            .iter()
            .chain(std::iter::once(&pivot_arc))
            .chain(&right_transient)
            .copied()
            .collect();
        let project = |arcs: &[usize], first: bool| -> Vec<usize> {
            arcs.iter()
                .map(|&k| {
                    let a = &self.arcs[k];
                    if first { a.e as usize } else { a.g as usize }
                })
                .collect()
        };
        let path = |first: bool| EventuallyPeriodicPath {
            left_period: project(&left_period, first),
            window_start,
            window: project(&window, first),
            right_period: project(&right_period, first),
        };
        Some(PairOfPaths {
            x: path(true),
            y: path(false),
        })
    }
}

/// Two eventually periodic points; used as the certificate for `m(N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairOfPaths {
    pub x: EventuallyPeriodicPath,
    pub y: EventuallyPeriodicPath,
}

impl PairOfPaths {
    pub fn disagreements(&self, sft: &EdgeSft) -> DisagreementSet {
        DisagreementSet::of(sft, &self.x, &self.y)
    }

    /// `min_k dist(Nk, D)` over all of ℤ.
    pub fn separation(&self, sft: &EdgeSft, n: usize) -> Option<u64> {
        self.disagreements(sft).min_distance_to_multiples(n)
    }

    pub fn to_json(&self, sft: &EdgeSft) -> serde_json::Value {
        witness_json(sft, None, &self.x, &self.y, None)
    }
}

fn check_range(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    if m > n / 2 {
        return Err(Error::Domain(format!("m = {m} exceeds ⌊N/2⌋ = {} for N = {n}", n / 2)));
    }
    Ok(())
}

/// Whether two distinct points agree within distance `< m` of every multiple
/// of `N`; returns a certificate when they do.
pub fn constrained_pair_exists(sft: &EdgeSft, n: usize, m: usize) -> Result<Option<PairOfPaths>> {
    check_range(n, m)?;
    let graph = ConstrainedPairGraph::new(sft, n, m as i64 - 1)?;
    Ok(graph.find_pair())
}

fn require_infinite(sft: &EdgeSft) -> Result<()> {
    if sft.is_infinite() {
        Ok(())
    } else {
        Err(Error::Degenerate(
            "the subshift has finitely many points; γ is a supremum over no separating pairs".into(),
        ))
    }
}

/// `m(N)` together with a certificate pair.
pub fn m_with_witness(sft: &EdgeSft, n: usize) -> Result<(usize, PairOfPaths)> {
    require_infinite(sft)?;
    check_range(n, 0)?;
    for m in (0..=n / 2).rev() {
        if let Some(w) = constrained_pair_exists(sft, n, m)? {
            return Ok((m, w));
        }
    }
    unreachable!("m = 0 is feasible on every infinite subshift")
}

pub fn m_of(sft: &EdgeSft, n: usize) -> Result<usize> {
    m_with_witness(sft, n).map(|(m, _)| m)
}

/// `m(N)` by bisection over the monotone feasibility predicate.
pub fn m_of_bisect(sft: &EdgeSft, n: usize) -> Result<usize> {
    require_infinite(sft)?;
    check_range(n, 0)?;
    let (mut lo, mut hi) = (0usize, n / 2);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if constrained_pair_exists(sft, n, mid)?.is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaResult {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    #[serde(skip)]
    pub witness: Option<PairOfPaths>,
}

impl GammaResult {
    pub fn gamma_exponent(&self) -> i64 {
        -(self.m as i64)
    }

    pub fn gamma(&self) -> f64 {
        self.lambda.powi(self.gamma_exponent() as i32)
    }

    /// `γ(σᴺ)·λ^{N/2} = λ^{N/2 - m}`.
    pub fn product(&self) -> HalfPower {
        HalfPower {
            twice: self.n as i64 - 2 * self.m as i64,
        }
    }

    pub fn row(&self, metric: &SelfSimilarShiftMetric) -> GammaRow {
        GammaRow {
            n: self.n,
            m_n: self.m,
            gamma_log_lambda: self.gamma_exponent(),
            gamma_decimal: metric.power(self.gamma_exponent() as f64),
            product_log_lambda: self.product(),
            product_decimal: self.product().value(metric),
        }
    }
}

/// One line of the γ report.
#[derive(Clone, Debug, Serialize)]
pub struct GammaRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub m_n: usize,
    pub gamma_log_lambda: i64,
    pub gamma_decimal: f64,
    pub product_log_lambda: HalfPower,
    pub product_decimal: f64,
}

/// Exact `γ(σᴺ) = λ^{-m(N)}` with a replay-checked certificate.
pub fn gamma_exact(sft: &EdgeSft, n: usize, metric: &SelfSimilarShiftMetric) -> Result<GammaResult> {
    let (m, witness) = m_with_witness(sft, n)?;
    witness.x.validate(sft)?;
    witness.y.validate(sft)?;
    match witness.separation(sft, n) {
        Some(s) if s == m as u64 => {}
        other => {
            return Err(Error::WitnessRejected(format!(
                "certificate for N = {n} separates at {other:?}, expected {m}"
            )))
        }
    }
    Ok(GammaResult {
        n,
        m,
        lambda: metric.lambda(),
        witness: Some(witness),
    })
}

/// Replays a certificate through the metric: the largest distance
/// `d(σ^{Nk}x, σ^{Nk}y)` over enough multiples `Nk` to cover both periodic
/// tails, reported as an exponent. Returns `None` when every sampled
/// distance is only bounded above.
pub fn replay_separation(
    sft: &EdgeSft,
    metric: &SelfSimilarShiftMetric,
    n: usize,
    pair: &PairOfPaths,
) -> Result<Option<u64>> {
    let d = pair.disagreements(sft);
    let ni = n as i64;
    let span_l = d.left_period.lcm(&ni);
    let span_r = d.right_period.lcm(&ni);
    let k_lo = (d.core_lo - span_l - ni).div_euclid(ni).min(0);
    let k_hi = (d.core_hi + span_r + ni).div_euclid(ni).max(0);
    let pad = ni;
    let (x, y) = materialize(sft, &pair.x, &pair.y, k_lo * ni - pad, k_hi * ni + pad)?;
    let profile = metric.orbit_distance_profile(&x, &y, k_lo * ni, k_hi * ni)?;
    Ok(profile
        .iter()
        .step_by(n)
        .filter(|v| v.is_exact())
        .map(|v| v.exponent())
        .min())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Products over the later half of the range never exceed the early maximum.
    Decaying,
    NotDecaying { early_max: HalfPower, late_max: HalfPower },
}

#[derive(Clone, Debug, Serialize)]
pub struct MtFitResult {
    pub lambda: f64,
    pub n_max: usize,
    pub results: Vec<GammaResult>,
    pub products: Vec<HalfPower>,
    pub c_min: HalfPower,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// `γ(σᴺ)·λ^{N/2}` for `N = 1..=n_max`, at most `max_parallel` values of `N`
/// in flight at once (each holds a pair graph of size `|V|²·N`).
pub fn mt_fit_with(
    sft: &EdgeSft,
    metric: &SelfSimilarShiftMetric,
    n_max: usize,
    max_parallel: usize,
) -> Result<MtFitResult> {
    require_infinite(sft)?;
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let all: Vec<usize> = (1..=n_max).collect();
    let mut results = Vec::with_capacity(n_max);
    for chunk in all.chunks(max_parallel.max(1)) {
        let part: Vec<Result<GammaResult>> =
            chunk.par_iter().map(|&n| gamma_exact(sft, n, metric)).collect();
        for r in part {
            results.push(r?);
        }
    }
    let products: Vec<HalfPower> = results.iter().map(GammaResult::product).collect();
    let c_min = *products.iter().max().expect("n_max ≥ 1");
    let split = n_max.div_ceil(2);
    let early_max = *products[..split].iter().max().expect("non-empty");
    let verdict = match products[split..].iter().max() {
        Some(&late_max) if late_max > early_max => Verdict::NotDecaying { early_max, late_max },
        _ => Verdict::Decaying,
    };
    Ok(MtFitResult {
        lambda: metric.lambda(),
        n_max,
        results,
        products,
        c_min,
        verdict,
    })
}

pub fn mt_fit(sft: &EdgeSft, metric: &SelfSimilarShiftMetric, n_max: usize) -> Result<MtFitResult> {
    mt_fit_with(sft, metric, n_max, rayon::current_num_threads())
}

/// Both sides of the doubly-asymptotic criterion over `N ≤ n_max`.
#[derive(Clone, Debug, Serialize)]
pub struct MtCheck {
    pub homoclinic_width: Option<u64>,
    /// `λ^{(W+1)/2}`, the bound the products must respect from `N = W` on.
    pub bound: Option<HalfPower>,
    pub products_bounded: bool,
    /// `N ≥ W` with `m(N) < ⌊(N - W + 1)/2⌋`.
    pub violations: Vec<usize>,
    pub fit: MtFitResult,
}

impl MtCheck {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty() && self.homoclinic_width.is_some() == self.products_bounded
    }
}

pub fn mt_check(sft: &EdgeSft, metric: &SelfSimilarShiftMetric, n_max: usize) -> Result<MtCheck> {
    let fit = mt_fit(sft, metric, n_max)?;
    let witness = sft.find_homoclinic_pair();
    let width = witness.as_ref().map(|w| w.width());
    let (bound, violations, bounded) = match width {
        Some(w) => {
            let bound = HalfPower { twice: w as i64 + 1 };
            let violations: Vec<usize> = fit
                .results
                .iter()
                .filter(|r| r.n as u64 >= w)
                .filter(|r| (r.m as u64) < (r.n as u64 + 1 - w) / 2)
                .map(|r| r.n)
                .collect();
            let bounded = fit
                .results
                .iter()
                .filter(|r| r.n as u64 >= w)
                .all(|r| r.product() <= bound);
            (Some(bound), violations, bounded)
        }
        None => (None, Vec::new(), matches!(fit.verdict, Verdict::Decaying)),
    };
    Ok(MtCheck {
        homoclinic_width: width,
        bound,
        products_bounded: bounded,
        violations,
        fit,
    })
}
