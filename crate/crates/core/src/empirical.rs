//! Horizon-limited brackets on `m(N)` for subshifts known through their
//! language.
//!
//! Looking only at positions `[-K, K]`, a pair of distinct legal words that
//! agrees near every visible multiple of `N` is necessary for a pair of points
//! that agrees near every multiple. The largest feasible `m` over words is
//! therefore an upper bound `m_upper ≥ m(N)`. Lower bounds need genuine points
//! and are labeled by how much of ℤ they were checked on.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{self, HalfPower};
use crate::iet::IetSystem;
use crate::sft::EdgeSft;
use crate::shiftspace::{Alphabet, SelfSimilarShiftMetric, Symbol};

pub type Word = Vec<Symbol>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleTag {
    SftDerived,
    IetDerived,
    FileLoaded,
}

impl fmt::Display for OracleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleTag::SftDerived => "sft-derived",
            OracleTag::IetDerived => "iet-derived",
            OracleTag::FileLoaded => "file-loaded",
        })
    }
}

/// A nondeterministic automaton whose accepted words of length `len` are
/// exactly the legal words of that length. Every state reachable in `i < len`
/// steps has a continuation to length `len`, and all states accept.
#[derive(Clone, Debug)]
pub struct Automaton {
    pub len: usize,
    pub initial: Vec<u32>,
    pub transitions: Vec<Vec<(Symbol, u32)>>,
}

impl Automaton {
    pub fn accepts(&self, word: &[Symbol]) -> bool {
        if word.len() != self.len {
            return false;
        }
        let mut current: BTreeSet<u32> = self.initial.iter().copied().collect();
        for &s in word {
            current = current
                .iter()
                .flat_map(|&q| self.transitions[q as usize].iter())
                .filter(|(t, _)| *t == s)
                .map(|&(_, q)| q)
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        true
    }

    /// A trie over a set of words of one length.
    pub fn trie(len: usize, words: &[Word]) -> Result<Self> {
        let mut transitions: Vec<Vec<(Symbol, u32)>> = vec![Vec::new()];
        for w in words {
            if w.len() != len {
                return Err(Error::Domain(format!("word of length {} in a length-{len} set", w.len())));
            }
            let mut at = 0usize;
            for &s in w {
                at = match transitions[at].iter().find(|(t, _)| *t == s) {
                    Some(&(_, next)) => next as usize,
                    None => {
                        let next = transitions.len();
                        transitions.push(Vec::new());
                        transitions[at].push((s, next as u32));
                        next
                    }
                };
            }
        }
        for t in &mut transitions {
            t.sort_unstable();
        }
        Ok(Self {
            len,
            initial: vec![0],
            transitions,
        })
    }
}

pub trait LanguageOracle: Sync {
    fn tag(&self) -> OracleTag;

    fn alphabet(&self) -> Arc<Alphabet>;

    /// The legal words of length `n`, sorted.
    fn words(&self, n: usize) -> Result<Vec<Word>>;

    fn automaton(&self, len: usize) -> Result<Automaton> {
        Automaton::trie(len, &self.words(len)?)
    }

    /// Whether `automaton` has few states independent of `len`, so that the
    /// pair search beats scanning the word list.
    fn has_compact_automaton(&self) -> bool {
        false
    }

    /// The edge graph behind the language, when there is one.
    fn exact_sft(&self) -> Option<&EdgeSft> {
        None
    }

    /// Exact points realizing a window, when the oracle can produce them.
    fn realize(&self, _window: &[Symbol], _k: usize) -> Option<Result<RealizedPoint>> {
        None
    }
}

/// A genuine point whose itinerary on `[-K, K]` was recomputed exactly.
#[derive(Clone, Debug, Serialize)]
pub struct RealizedPoint {
    pub description: String,
    pub window: Vec<u32>,
}

pub struct SftOracle {
    sft: EdgeSft,
}

impl SftOracle {
    pub fn new(sft: EdgeSft) -> Result<Self> {
        if sft.is_empty() {
            return Err(Error::EmptySubshift("the oracle would have no words".into()));
        }
        Ok(Self { sft })
    }
}

impl LanguageOracle for SftOracle {
    fn tag(&self) -> OracleTag {
        OracleTag::SftDerived
    }

    fn alphabet(&self) -> Arc<Alphabet> {
        Arc::clone(self.sft.alphabet())
    }

    fn words(&self, n: usize) -> Result<Vec<Word>> {
        Ok(self.sft.label_words(n))
    }

    fn automaton(&self, len: usize) -> Result<Automaton> {
        let transitions = (0..self.sft.vertex_count())
            .map(|v| {
                self.sft
                    .out_edges(v)
                    .iter()
                    .map(|&e| (self.sft.label(e), self.sft.edges()[e].to as u32))
                    .collect()
            })
            .collect();
        Ok(Automaton {
            len,
            initial: (0..self.sft.vertex_count() as u32).collect(),
            transitions,
        })
    }

    fn has_compact_automaton(&self) -> bool {
        true
    }

    fn exact_sft(&self) -> Option<&EdgeSft> {
        Some(&self.sft)
    }
}

/// The coding of a three-interval exchange. Word sets are computed once per
/// length; callers may also preload them from storage.
pub struct IetOracle {
    system: IetSystem,
    alphabet: Arc<Alphabet>,
    cache: Mutex<HashMap<usize, Arc<Vec<Word>>>>,
}

impl IetOracle {
    pub fn new(system: IetSystem) -> Self {
        Self {
            system,
            alphabet: Arc::new(Alphabet::numeric(3).expect("three symbols")),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn system(&self) -> &IetSystem {
        &self.system
    }

    pub fn preload(&self, n: usize, words: Vec<Word>) {
        self.cache.lock().expect("cache lock").insert(n, Arc::new(words));
    }

    fn cached(&self, n: usize) -> Result<Arc<Vec<Word>>> {
        if let Some(w) = self.cache.lock().expect("cache lock").get(&n) {
            return Ok(Arc::clone(w));
        }
        let words: Vec<Word> = self
            .system
            .language(n)?
            .into_iter()
            .map(|w| w.into_iter().map(|s| Symbol(s as u32)).collect())
            .collect();
        let words = Arc::new(words);
        self.cache.lock().expect("cache lock").insert(n, Arc::clone(&words));
        Ok(words)
    }
}

impl LanguageOracle for IetOracle {
    fn tag(&self) -> OracleTag {
        OracleTag::IetDerived
    }

    fn alphabet(&self) -> Arc<Alphabet> {
        Arc::clone(&self.alphabet)
    }

    fn words(&self, n: usize) -> Result<Vec<Word>> {
        Ok(self.cached(n)?.as_ref().clone())
    }

    fn automaton(&self, len: usize) -> Result<Automaton> {
        Automaton::trie(len, &self.cached(len)?)
    }

    /// The left endpoint `c` of the refinement cell coded by the window is a
    /// point with that forward itinerary, so `x = Tᴷ(c)` has it on `[-K, K]`.
    fn realize(&self, window: &[Symbol], k: usize) -> Option<Result<RealizedPoint>> {
        Some((|| {
            let target: Vec<u8> = window.iter().map(|s| s.0 as u8).collect();
            let refinement = self.system.refinement(window.len())?;
            let i = refinement
                .words
                .iter()
                .position(|w| *w == target)
                .ok_or_else(|| Error::WitnessRejected("window is not a legal word".into()))?;
            let x = self.system.iterate(&refinement.cuts[i], k as i64)?;
            let check = self.system.itinerary(&x, -(k as i64), k as i64)?;
            if check.symbols != target {
                return Err(Error::WitnessRejected("recomputed itinerary differs".into()));
            }
            Ok(RealizedPoint {
                description: x.to_string(),
                window: check.symbols.iter().map(|&s| s as u32).collect(),
            })
        })())
    }
}

/// Words read from a file: one word per line, one character per symbol,
/// every line of the same length `L`. Shorter lengths are factors.
pub struct FileOracle {
    alphabet: Arc<Alphabet>,
    words: Vec<Word>,
    len: usize,
}

impl FileOracle {
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let Some(&(_, first)) = lines.first() else {
            return Err(Error::parse("line 1", "no words"));
        };
        let len = first.chars().count();
        let mut names: BTreeSet<char> = BTreeSet::new();
        for &(no, l) in &lines {
            if l.chars().count() != len {
                return Err(Error::parse(format!("line {no}"), format!("expected a word of length {len}")));
            }
            names.extend(l.chars());
        }
        let alphabet = Arc::new(Alphabet::new(names.iter().map(|c| c.to_string()))?);
        let index: HashMap<char, Symbol> = names.iter().enumerate().map(|(i, &c)| (c, Symbol(i as u32))).collect();
        let words: BTreeSet<Word> = lines.iter().map(|(_, l)| l.chars().map(|c| index[&c]).collect()).collect();
        Ok(Self {
            alphabet,
            words: words.into_iter().collect(),
            len,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        Self::parse(&text)
    }

    pub fn max_len(&self) -> usize {
        self.len
    }
}

impl LanguageOracle for FileOracle {
    fn tag(&self) -> OracleTag {
        OracleTag::FileLoaded
    }

    fn alphabet(&self) -> Arc<Alphabet> {
        Arc::clone(&self.alphabet)
    }

    fn words(&self, n: usize) -> Result<Vec<Word>> {
        if n > self.len {
            return Err(Error::Domain(format!("the file only holds words of length {}", self.len)));
        }
        let set: BTreeSet<Word> = self
            .words
            .iter()
            .flat_map(|w| w.windows(n).map(|f| f.to_vec()))
            .collect();
        Ok(set.into_iter().collect())
    }
}

/// Positions `-K..=K` that lie within distance `< m` of a multiple of `N` in `[-K, K]`.
fn constrained_mask(n: usize, k: usize, m: usize) -> Vec<bool> {
    let (n, k, m) = (n as i64, k as i64, m as i64);
    let first = (-k).div_euclid(n) * n;
    let mut mask = vec![false; (2 * k + 1) as usize];
    let mut c = if first < -k { first + n } else { first };
    while c <= k {
        for p in (c - m + 1).max(-k)..=(c + m - 1).min(k) {
            mask[(p + k) as usize] = true;
        }
        c += n;
    }
    mask
}

fn check_horizon(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    if k < n {
        return Err(Error::Domain(format!("horizon K = {k} is smaller than N = {n}")));
    }
    Ok(())
}

type PairState = (u32, u32, bool);

/// Pairs of runs of the automaton that write equal symbols on `mask` and
/// differ somewhere. With `trace`, returns one such pair of words.
fn pair_search(a: &Automaton, mask: &[bool], trace: bool) -> (bool, Option<(Word, Word)>) {
    let mut frontier: Vec<PairState> = Vec::new();
    for &p in &a.initial {
        for &q in &a.initial {
            frontier.push((p, q, false));
        }
    }
    // Each traced layer maps a state to its predecessor and the two symbols written.
    let mut layers: Vec<HashMap<PairState, (PairState, Symbol, Symbol)>> = Vec::new();
    for &tight in mask {
        let mut next: HashMap<PairState, (PairState, Symbol, Symbol)> = HashMap::new();
        for &(p, q, differed) in &frontier {
            for &(s, p2) in &a.transitions[p as usize] {
                for &(t, q2) in &a.transitions[q as usize] {
                    if tight && s != t {
                        continue;
                    }
                    next.entry((p2, q2, differed || s != t)).or_insert(((p, q, differed), s, t));
                }
            }
        }
        frontier = next.keys().copied().collect();
        frontier.sort_unstable();
        if trace {
            layers.push(next);
        }
        if frontier.is_empty() {
            return (false, None);
        }
    }
    let Some(&end) = frontier.iter().find(|s| s.2) else {
        return (false, None);
    };
    if !trace {
        return (true, None);
    }
    let mut x = Vec::with_capacity(mask.len());
    let mut y = Vec::with_capacity(mask.len());
    let mut state = end;
    for layer in layers.iter().rev() {
        let (prev, s, t) = layer[&state];
        x.push(s);
        y.push(t);
        state = prev;
    }
    x.reverse();
    y.reverse();
    (true, Some((x, y)))
}

/// Largest `m ≤ ⌊N/2⌋` for which two distinct legal words on `[-K, K]` agree
/// at every position within distance `< m` of a visible multiple of `N`.
pub fn m_upper_at_horizon(o: &dyn LanguageOracle, n: usize, k: usize) -> Result<usize> {
    m_upper_with_pair(o, n, k).map(|(m, _)| m)
}

/// `m_upper` together with a pair of words attaining it.
pub fn m_upper_with_pair(o: &dyn LanguageOracle, n: usize, k: usize) -> Result<(usize, (Word, Word))> {
    if o.has_compact_automaton() {
        m_upper_pair_search(o, n, k)
    } else {
        m_upper_by_projection(o, n, k)
    }
}

fn too_few_words(k: usize) -> Error {
    Error::Degenerate(format!(
        "fewer than two legal words of length {}; the subshift is a single point",
        2 * k + 1
    ))
}

/// Dynamic programming over positions with pairs of automaton states.
pub fn m_upper_pair_search(o: &dyn LanguageOracle, n: usize, k: usize) -> Result<(usize, (Word, Word))> {
    check_horizon(n, k)?;
    let a = o.automaton(2 * k + 1)?;
    for m in (0..=n / 2).rev() {
        let mask = constrained_mask(n, k, m);
        if pair_search(&a, &mask, false).0 {
            let (_, pair) = pair_search(&a, &mask, true);
            return Ok((m, pair.expect("traced search finds the pair")));
        }
    }
    Err(too_few_words(k))
}

/// Groups the words of length `2K+1` by their symbols on the constrained
/// positions; `m` is feasible iff some group holds two words.
pub fn m_upper_by_projection(o: &dyn LanguageOracle, n: usize, k: usize) -> Result<(usize, (Word, Word))> {
    check_horizon(n, k)?;
    let words = o.words(2 * k + 1)?;
    for m in (0..=n / 2).rev() {
        let mask = constrained_mask(n, k, m);
        let mut groups: HashMap<Vec<Symbol>, usize> = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            let key: Vec<Symbol> = w.iter().zip(&mask).filter(|(_, &t)| t).map(|(s, _)| *s).collect();
            if let Some(&j) = groups.get(&key) {
                return Ok((m, (words[j].clone(), w.clone())));
            }
            groups.insert(key, i);
        }
    }
    Err(too_few_words(k))
}

/// The same quantity by direct enumeration of all pairs of words.
pub fn m_upper_naive(o: &dyn LanguageOracle, n: usize, k: usize) -> Result<usize> {
    check_horizon(n, k)?;
    let words = o.words(2 * k + 1)?;
    if words.len() < 2 {
        return Err(Error::Degenerate("fewer than two legal words".into()));
    }
    let dist = visible_distance(n, k);
    let cap = n / 2;
    let mut best = 0;
    for (i, u) in words.iter().enumerate() {
        for v in &words[i + 1..] {
            let value = u
                .iter()
                .zip(v)
                .enumerate()
                .filter(|(_, (s, t))| s != t)
                .map(|(p, _)| dist[p])
                .min()
                .expect("distinct words differ somewhere");
            best = best.max(value.min(cap));
            if best == cap {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

/// Distance from each position of `[-K, K]` to the nearest visible multiple of `N`.
fn visible_distance(n: usize, k: usize) -> Vec<usize> {
    let (ni, ki) = (n as i64, k as i64);
    (-ki..=ki)
        .map(|p| {
            let below = p.div_euclid(ni) * ni;
            let mut d = i64::MAX;
            for c in [below, below + ni] {
                if (-ki..=ki).contains(&c) {
                    d = d.min((p - c).abs());
                }
            }
            d as usize
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// Eventually periodic points checked against every multiple of `N`.
    Exact,
    /// Genuine points, checked only against multiples whose `⌊N/2⌋`-neighbourhood
    /// is inside the window. An upper bound for the pair's true separation.
    HorizonLimited,
    /// Raw words that may not extend to points agreeing as well outside the window.
    Heuristic,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessBound {
    pub value: usize,
    pub certification: Certification,
}

/// `min` over multiples `Nk ∈ [-K + ⌊N/2⌋, K - ⌊N/2⌋]` of the distance from
/// `Nk` to the disagreement set in `[-K, K]`, capped at `⌊N/2⌋`. Windows are
/// words on `[-K, K]`; `exact_points` states that they are windows of genuine
/// points.
pub fn m_lower_from_witness(
    o: &dyn LanguageOracle,
    n: usize,
    k: usize,
    x: &[Symbol],
    y: &[Symbol],
    exact_points: bool,
) -> Result<WitnessBound> {
    check_horizon(n, k)?;
    let len = 2 * k + 1;
    if x.len() != len || y.len() != len {
        return Err(Error::WitnessRejected(format!("windows must have length {len}")));
    }
    let a = o.automaton(len)?;
    for (name, w) in [("x", x), ("y", y)] {
        if !a.accepts(w) {
            return Err(Error::WitnessRejected(format!("{name} contains an illegal factor")));
        }
    }
    let diffs: Vec<i64> = (0..len).filter(|&i| x[i] != y[i]).map(|i| i as i64 - k as i64).collect();
    if diffs.is_empty() {
        return Err(Error::WitnessRejected("the two windows are identical".into()));
    }
    let (ni, ki, half) = (n as i64, k as i64, (n / 2) as i64);
    let lo = (-ki + half).div_euclid(ni) * ni;
    let lo = if lo < -ki + half { lo + ni } else { lo };
    let mut value = half;
    let mut c = lo;
    while c <= ki - half {
        let i = diffs.partition_point(|&d| d < c);
        let mut d = i64::MAX;
        if i < diffs.len() {
            d = d.min(diffs[i] - c);
        }
        if i > 0 {
            d = d.min(c - diffs[i - 1]);
        }
        value = value.min(d);
        c += ni;
    }
    Ok(WitnessBound {
        value: value as usize,
        certification: if exact_points {
            Certification::HorizonLimited
        } else {
            Certification::Heuristic
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub m_lower: usize,
    pub m_upper: usize,
    pub gamma_lower: f64,
    pub gamma_upper: f64,
    pub product_lower_log_lambda: HalfPower,
    pub product_upper_log_lambda: HalfPower,
    pub exact_m: Option<usize>,
    #[serde(rename = "K")]
    pub k: usize,
    pub oracle_tag: OracleTag,
}

/// Extra evidence behind a row, for JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct RowEvidence {
    #[serde(rename = "N")]
    pub n: usize,
    pub upper_pair: (String, String),
    pub witness: Option<WitnessBound>,
    pub points: Option<(RealizedPoint, RealizedPoint)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub lambda: f64,
    pub k: usize,
    pub oracle_tag: OracleTag,
    pub rows: Vec<DecayRow>,
    pub evidence: Vec<RowEvidence>,
}

fn word_string(o: &dyn LanguageOracle, w: &[Symbol]) -> String {
    let ab = o.alphabet();
    w.iter().map(|&s| ab.name(s)).collect::<Vec<_>>().join("")
}

fn decay_row(
    o: &dyn LanguageOracle,
    metric: &SelfSimilarShiftMetric,
    n: usize,
    k: usize,
    with_evidence: bool,
) -> Result<(DecayRow, Option<RowEvidence>)> {
    let (m_upper, (x, y)) = m_upper_with_pair(o, n, k)?;
    let (m_lower, exact_m) = match o.exact_sft() {
        Some(sft) => {
            let r = gamma::gamma_exact(sft, n, metric)?;
            (r.m, Some(r.m))
        }
        None => (0, None),
    };
    if m_lower > m_upper {
        return Err(Error::BracketViolation {
            n,
            lower: m_lower,
            upper: m_upper,
        });
    }
    let evidence = if with_evidence {
        let points = match (o.realize(&x, k), o.realize(&y, k)) {
            (Some(px), Some(py)) => Some((px?, py?)),
            _ => None,
        };
        let witness = if exact_m.is_some() {
            None
        } else {
            Some(m_lower_from_witness(o, n, k, &x, &y, points.is_some())?)
        };
        Some(RowEvidence {
            n,
            upper_pair: (word_string(o, &x), word_string(o, &y)),
            witness,
            points,
        })
    } else {
        None
    };
    let half = |m: usize| HalfPower {
        twice: n as i64 - 2 * m as i64,
    };
    Ok((
        DecayRow {
            n,
            m_lower,
            m_upper,
            gamma_lower: metric.power(-(m_upper as f64)),
            gamma_upper: metric.power(-(m_lower as f64)),
            product_lower_log_lambda: half(m_upper),
            product_upper_log_lambda: half(m_lower),
            exact_m,
            k,
            oracle_tag: o.tag(),
        },
        evidence,
    ))
}

/// Brackets for `N = 1..=n_max` at horizon `K`. `m_lower` is certified: the
/// exact `m(N)` for SFT-derived oracles and `0` otherwise.
pub fn decay_report(
    o: &dyn LanguageOracle,
    metric: &SelfSimilarShiftMetric,
    n_max: usize,
    k: usize,
    with_evidence: bool,
) -> Result<DecayReport> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    if k < n_max {
        return Err(Error::Domain(format!("horizon K = {k} is smaller than n_max = {n_max}")));
    }
    // Populate the word cache once before fanning out.
    if !o.has_compact_automaton() {
        o.words(2 * k + 1)?;
    }
    let rows: Vec<Result<(DecayRow, Option<RowEvidence>)>> = (1..=n_max)
        .into_par_iter()
        .map(|n| decay_row(o, metric, n, k, with_evidence))
        .collect();
    let mut out_rows = Vec::with_capacity(n_max);
    let mut evidence = Vec::new();
    for r in rows {
        let (row, ev) = r?;
        out_rows.push(row);
        evidence.extend(ev);
    }
    Ok(DecayReport {
        lambda: metric.lambda(),
        k,
        oracle_tag: o.tag(),
        rows: out_rows,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::parse_sft;

    fn golden() -> SftOracle {
        SftOracle::new(parse_sft("0 1\n11\n").unwrap()).unwrap()
    }

    fn full2() -> SftOracle {
        SftOracle::new(EdgeSft::full_shift(2).unwrap()).unwrap()
    }

    #[test]
    fn m_upper_examples() {
        assert_eq!(m_upper_at_horizon(&full2(), 4, 8).unwrap(), 2);
        assert_eq!(m_upper_by_projection(&full2(), 4, 8).unwrap().0, 2);
        assert_eq!(m_upper_at_horizon(&golden(), 2, 6).unwrap(), 1);
        assert_eq!(m_upper_naive(&golden(), 2, 6).unwrap(), 1);
        for k in 1..5 {
            assert_eq!(m_upper_at_horizon(&golden(), 1, k).unwrap(), 0);
        }
        assert!(matches!(m_upper_at_horizon(&golden(), 5, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn dp_matches_enumeration() {
        let sfts = [
            "0 1\n11\n",
            "0 1\n",
            "0 1 2\n00\n12\n21\n",
            "a b\naa\nbbb\n",
            "0 1\n010\n",
        ];
        for text in sfts {
            let o = SftOracle::new(parse_sft(text).unwrap()).unwrap();
            for n in 1..=5 {
                for k in n..=6 {
                    let dp = m_upper_pair_search(&o, n, k).unwrap().0;
                    assert_eq!(dp, m_upper_naive(&o, n, k).unwrap(), "{text:?} N={n} K={k}");
                    assert_eq!(dp, m_upper_by_projection(&o, n, k).unwrap().0, "{text:?} N={n} K={k}");
                }
            }
        }
    }

    #[test]
    fn traced_pair_attains_m_upper() {
        let o = SftOracle::new(parse_sft("0 1 2\n00\n12\n21\n").unwrap()).unwrap();
        let a = o.automaton(2 * 7 + 1).unwrap();
        for n in 1..=7 {
            let (m, (x, y)) = m_upper_with_pair(&o, n, 7).unwrap();
            assert!(a.accepts(&x) && a.accepts(&y) && x != y);
            let dist = visible_distance(n, 7);
            let value = (0..x.len()).filter(|&i| x[i] != y[i]).map(|i| dist[i]).min().unwrap();
            assert!(value.min(n / 2) >= m);
        }
    }

    #[test]
    fn witness_examples() {
        let o = full2();
        let (n, k) = (6, 12);
        let zero = vec![Symbol(0); 2 * k + 1];
        let mut one = zero.clone();
        one[k + n / 2] = Symbol(1);
        let b = m_lower_from_witness(&o, n, k, &zero, &one, false).unwrap();
        assert_eq!(b.value, n / 2);
        assert_eq!(b.certification, Certification::Heuristic);
        assert!(matches!(
            m_lower_from_witness(&o, n, k, &zero, &zero, false),
            Err(Error::WitnessRejected(_))
        ));
        let g = golden();
        let mut bad = vec![Symbol(0); 2 * k + 1];
        bad[3] = Symbol(1);
        bad[4] = Symbol(1);
        assert!(matches!(
            m_lower_from_witness(&g, n, k, &zero, &bad, false),
            Err(Error::WitnessRejected(_))
        ));
    }

    #[test]
    fn decay_report_golden_matches_exact() {
        let metric = SelfSimilarShiftMetric::default();
        let r = decay_report(&golden(), &metric, 10, 40, false).unwrap();
        for row in &r.rows {
            assert_eq!(row.exact_m, Some(row.n / 2));
            assert_eq!(row.m_upper, row.n / 2);
            assert_eq!(row.m_lower, row.n / 2);
        }
        let single = decay_report(&golden(), &metric, 1, 1, false).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert_eq!(single.rows[0].m_upper, 0);
        assert_eq!(single.rows[0].gamma_lower, 1.0);
    }

    #[test]
    fn iet_windows_are_realized() {
        let o = IetOracle::new(IetSystem::default_instance());
        let metric = SelfSimilarShiftMetric::default();
        let r = decay_report(&o, &metric, 3, 12, true).unwrap();
        for (row, ev) in r.rows.iter().zip(&r.evidence) {
            assert_eq!(row.m_lower, 0);
            assert!(row.exact_m.is_none());
            let w = ev.witness.as_ref().unwrap();
            assert_eq!(w.certification, Certification::HorizonLimited);
            assert!(w.value <= row.n / 2);
            assert!(ev.points.is_some());
        }
    }

    #[test]
    fn iet_routes_agree() {
        let o = IetOracle::new(IetSystem::default_instance());
        for n in 1..=4 {
            for k in n..=7 {
                let projection = m_upper_by_projection(&o, n, k).unwrap().0;
                assert_eq!(projection, m_upper_pair_search(&o, n, k).unwrap().0);
                assert_eq!(projection, m_upper_naive(&o, n, k).unwrap());
            }
        }
    }

    #[test]
    fn file_oracle_factors() {
        let o = FileOracle::parse("# sample\nabab\nbaba\n").unwrap();
        assert_eq!(o.max_len(), 4);
        assert_eq!(o.words(2).unwrap().len(), 2);
        assert_eq!(o.words(1).unwrap().len(), 2);
        assert!(o.words(5).is_err());
        assert!(FileOracle::parse("ab\nabc\n").is_err());
        assert_eq!(m_upper_at_horizon(&o, 1, 1).unwrap(), 0);
    }
}
