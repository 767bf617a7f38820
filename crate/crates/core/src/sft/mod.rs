//! Subshifts of finite type presented by labeled edge graphs.
//!
//! A point is a bi-infinite path in the graph; what the metric sees is the
//! sequence of edge labels along it. Plain edge shifts label every edge by its
//! own id. Higher-block recodings of forbidden-word shifts label each edge by
//! the last letter of its word, which recovers the original sequence. In both
//! cases distinct paths carry distinct label sequences, and construction
//! rejects any graph where that fails.

mod entropy;
mod pairs;
mod parse;
pub(crate) mod reach;
mod witness;

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use entropy::strongly_connected_components;
pub use parse::{higher_block, parse_edge_graph_json, parse_forbidden_words, parse_sft, EdgeSpec, GraphSpec};
pub use witness::{materialize, DisagreementSet, EventuallyPeriodicPath, PairKind, PairWitness};

pub(crate) use witness::witness_json;

use crate::error::{Error, Result};
use crate::shiftspace::{Alphabet, Symbol};
use reach::Csr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub label: Symbol,
}

/// An essential labeled edge graph.
///
/// Every vertex has in- and out-degree at least one, edges are stored in
/// input order, and `out_edges`/`in_edges` list edge indices ascending.
#[derive(Clone, Debug)]
pub struct EdgeSft {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    alphabet: Arc<Alphabet>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "periodic_orbits", rename_all = "snake_case")]
pub enum PointCountClass {
    Empty,
    /// Disjoint union of cycles; the count covers orbits up to the tested period.
    Finite(u64),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl EdgeSft {
    /// Builds and essentializes a graph. `edges` are `(id, from, to, label)`
    /// with vertex indices into `vertices`.
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, usize, usize, Symbol)>,
        alphabet: Arc<Alphabet>,
    ) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), i).is_some() {
                return Err(Error::Domain(format!("duplicate vertex {v:?}")));
            }
        }
        let mut ids = HashMap::new();
        for (id, from, to, label) in &edges {
            if ids.insert(id.as_str(), ()).is_some() {
                return Err(Error::Domain(format!("duplicate edge id {id:?}")));
            }
            if *from >= vertices.len() || *to >= vertices.len() {
                return Err(Error::Domain(format!("edge {id:?} references an unknown vertex")));
            }
            if !alphabet.contains(*label) {
                return Err(Error::Domain(format!("edge {id:?} has a label outside the alphabet")));
            }
        }
        let sft = Self::essentialize(vertices, edges, alphabet);
        sft.check_labels_determine_paths()?;
        Ok(sft)
    }

    /// An edge shift: each edge is its own symbol.
    pub fn edge_shift(vertices: Vec<String>, edges: Vec<(String, usize, usize)>) -> Result<Self> {
        let alphabet = Arc::new(Alphabet::new(edges.iter().map(|e| e.0.clone()))?);
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(i, (id, f, t))| (id, f, t, Symbol(i as u32)))
            .collect();
        Self::new(vertices, edges, alphabet)
    }

    /// The full shift on `k` symbols: one vertex, `k` loops.
    pub fn full_shift(k: usize) -> Result<Self> {
        let alphabet = Arc::new(Alphabet::numeric(k)?);
        let edges = (0..k)
            .map(|i| (i.to_string(), 0, 0, Symbol(i as u32)))
            .collect();
        Self::new(vec!["v".into()], edges, alphabet)
    }

    fn essentialize(
        vertices: Vec<String>,
        edges: Vec<(String, usize, usize, Symbol)>,
        alphabet: Arc<Alphabet>,
    ) -> Self {
        let n = vertices.len();
        let mut alive_v = vec![true; n];
        let mut alive_e = vec![true; edges.len()];
        loop {
            let mut indeg = vec![0usize; n];
            let mut outdeg = vec![0usize; n];
            for (k, (_, f, t, _)) in edges.iter().enumerate() {
                if alive_e[k] {
                    outdeg[*f] += 1;
                    indeg[*t] += 1;
                }
            }
            let mut changed = false;
            for v in 0..n {
                if alive_v[v] && (indeg[v] == 0 || outdeg[v] == 0) {
                    alive_v[v] = false;
                    changed = true;
                }
            }
            for (k, (_, f, t, _)) in edges.iter().enumerate() {
                if alive_e[k] && (!alive_v[*f] || !alive_v[*t]) {
                    alive_e[k] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut kept = Vec::new();
        for (v, name) in vertices.into_iter().enumerate() {
            if alive_v[v] {
                remap[v] = kept.len();
                kept.push(name);
            }
        }
        let edges: Vec<Edge> = edges
            .into_iter()
            .enumerate()
            .filter(|(k, _)| alive_e[*k])
            .map(|(_, (id, from, to, label))| Edge {
                id,
                from: remap[from],
                to: remap[to],
                label,
            })
            .collect();
        let mut out = vec![Vec::new(); kept.len()];
        let mut inc = vec![Vec::new(); kept.len()];
        for (k, e) in edges.iter().enumerate() {
            out[e.from].push(k);
            inc[e.to].push(k);
        }
        Self {
            vertices: kept,
            edges,
            alphabet,
            out,
            inc,
        }
    }

    /// Rejects graphs in which two distinct bi-infinite paths share a label
    /// sequence: no pair of different edges with equal labels may sit on a
    /// bi-infinite path of the label-synchronized pair graph.
    fn check_labels_determine_paths(&self) -> Result<()> {
        let n = self.vertices.len();
        let arcs: Vec<(u32, u32, usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .flat_map(|(u, v)| {
                self.out[u].iter().flat_map(move |&e| {
                    self.out[v].iter().filter_map(move |&g| {
                        (self.edges[e].label == self.edges[g].label).then(|| {
                            let (a, b) = (self.edges[e].to, self.edges[g].to);
                            ((u * n + v) as u32, (a * n + b) as u32, e, g)
                        })
                    })
                })
            })
            .collect();
        let succ = Csr::from_arcs(n * n, arcs.iter().map(|a| (a.0, a.1)));
        let pred = Csr::from_arcs(n * n, arcs.iter().map(|a| (a.1, a.0)));
        let (fwd, bwd) = reach::infinite_both(&succ, &pred);
        if let Some(a) = arcs
            .iter()
            .find(|a| a.2 != a.3 && bwd[a.0 as usize] && fwd[a.1 as usize])
        {
            return Err(Error::Unsupported(format!(
                "edges {:?} and {:?} share a label on distinct bi-infinite paths; \
                 only presentations whose labels determine the path are supported",
                self.edges[a.2].id, self.edges[a.3].id
            )));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn label(&self, e: usize) -> Symbol {
        self.edges[e].label
    }

    /// The same graph with every edge reversed; edge indices are preserved.
    pub fn reversed(&self) -> Self {
        Self {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    id: e.id.clone(),
                    from: e.to,
                    to: e.from,
                    label: e.label,
                })
                .collect(),
            alphabet: self.alphabet.clone(),
            out: self.inc.clone(),
            inc: self.out.clone(),
        }
    }

    /// Vertex adjacency counts `A[u][v] = #{edges u → v}`.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertices.len();
        let mut a = vec![vec![0u64; n]; n];
        for e in &self.edges {
            a[e.from][e.to] += 1;
        }
        a
    }

    /// Whether the subshift has infinitely many points. An essential graph
    /// has finitely many bi-infinite paths exactly when it is a disjoint
    /// union of cycles, i.e. when no vertex has two outgoing edges.
    pub fn is_infinite(&self) -> bool {
        self.out.iter().any(|o| o.len() >= 2)
    }

    pub fn classify_point_count(&self, max_period: usize) -> PointCountClass {
        if self.is_empty() {
            return PointCountClass::Empty;
        }
        if self.is_infinite() {
            return PointCountClass::Infinite;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut orbits = 0u64;
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                len += 1;
                v = self.edges[self.out[v][0]].to;
            }
            if len <= max_period {
                orbits += 1;
            }
        }
        PointCountClass::Finite(orbits)
    }

    pub fn entropy(&self) -> f64 {
        entropy::entropy(self)
    }

    pub fn spectral_radius(&self) -> f64 {
        entropy::spectral_radius(self)
    }

    pub fn find_homoclinic_pair(&self) -> Option<PairWitness> {
        pairs::find_homoclinic_pair(self)
    }

    pub fn find_asymptotic_pair(&self, direction: Direction) -> Result<PairWitness> {
        if !self.is_infinite() {
            return Err(Error::Domain(
                "asymptotic pairs are only guaranteed on subshifts with infinitely many points".into(),
            ));
        }
        let found = match direction {
            Direction::Forward => pairs::find_forward_asymptotic(self),
            Direction::Backward => pairs::find_forward_asymptotic(&self.reversed()).map(|w| w.reversed()),
        };
        found.ok_or_else(|| {
            Error::Domain(format!("no {direction:?} asymptotic pair found on an infinite subshift"))
        })
    }

    /// Serializes back to the edge-graph JSON schema.
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "id": e.id,
                    "from": self.vertices[e.from],
                    "to": self.vertices[e.to],
                    "label": self.alphabet.name(e.label),
                })
            })
            .collect();
        serde_json::json!({ "vertices": self.vertices, "edges": edges })
    }

    /// Label words of all paths of length `len`, sorted and deduplicated.
    pub fn label_words(&self, len: usize) -> Vec<Vec<Symbol>> {
        let mut words = std::collections::BTreeSet::new();
        let mut stack: Vec<(usize, Vec<Symbol>)> = Vec::new();
        if len == 0 {
            return vec![Vec::new()];
        }
        for e in 0..self.edges.len() {
            stack.push((e, vec![self.edges[e].label]));
        }
        while let Some((e, w)) = stack.pop() {
            if w.len() == len {
                words.insert(w);
                continue;
            }
            for &g in &self.out[self.edges[e].to] {
                let mut w2 = w.clone();
                w2.push(self.edges[g].label);
                stack.push((g, w2));
            }
        }
        words.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> EdgeSft {
        parse_forbidden_words("0 1\n11\n").unwrap()
    }

    #[test]
    fn essentialization_drops_dead_ends() {
        let g = EdgeSft::edge_shift(
            vec!["a".into(), "b".into()],
            vec![("x".into(), 0, 0), ("y".into(), 0, 1)],
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.vertices(), &["a".to_string()]);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(EdgeSft::full_shift(2).unwrap().classify_point_count(10), PointCountClass::Infinite);
        assert_eq!(EdgeSft::full_shift(1).unwrap().classify_point_count(10), PointCountClass::Finite(1));
        let two_three = EdgeSft::edge_shift(
            (0..5).map(|i| i.to_string()).collect(),
            vec![
                ("a".into(), 0, 1),
                ("b".into(), 1, 0),
                ("c".into(), 2, 3),
                ("d".into(), 3, 4),
                ("e".into(), 4, 2),
            ],
        )
        .unwrap();
        assert_eq!(two_three.classify_point_count(10), PointCountClass::Finite(2));
        assert_eq!(two_three.classify_point_count(2), PointCountClass::Finite(1));
        let empty = EdgeSft::edge_shift(vec!["a".into(), "b".into()], vec![("x".into(), 0, 1)]).unwrap();
        assert_eq!(empty.classify_point_count(3), PointCountClass::Empty);
    }

    #[test]
    fn zero_entropy_chain_is_infinite() {
        // Two loops joined by a bridge: countably many points, entropy 0.
        let chain = EdgeSft::edge_shift(
            vec!["A".into(), "B".into()],
            vec![("a".into(), 0, 0), ("t".into(), 0, 1), ("b".into(), 1, 1)],
        )
        .unwrap();
        assert_eq!(chain.classify_point_count(10), PointCountClass::Infinite);
        assert!(chain.entropy().abs() < 1e-12);
        let w = chain.find_homoclinic_pair().unwrap();
        w.validate(&chain).unwrap();
        assert_eq!(w.width(), 2);
    }

    #[test]
    fn ambiguous_labels_are_rejected() {
        let ab = Arc::new(Alphabet::numeric(1).unwrap());
        let err = EdgeSft::new(
            vec!["v".into()],
            vec![("p".into(), 0, 0, Symbol(0)), ("q".into(), 0, 0, Symbol(0))],
            ab,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn homoclinic_examples() {
        let full = EdgeSft::full_shift(2).unwrap();
        let w = full.find_homoclinic_pair().unwrap();
        w.validate(&full).unwrap();
        assert_eq!(w.kind, PairKind::Homoclinic);
        assert_eq!(w.width(), 1);

        let g = golden();
        let w = g.find_homoclinic_pair().unwrap();
        w.validate(&g).unwrap();
        assert_eq!(w.width(), 1);

        assert!(EdgeSft::full_shift(1).unwrap().find_homoclinic_pair().is_none());
    }

    #[test]
    fn asymptotic_examples() {
        let full = EdgeSft::full_shift(2).unwrap();
        let w = full.find_asymptotic_pair(Direction::Forward).unwrap();
        w.validate(&full).unwrap();
        assert_eq!(w.kind, PairKind::ForwardAsymptotic);

        let g = golden();
        let w = g.find_asymptotic_pair(Direction::Backward).unwrap();
        w.validate(&g).unwrap();
        assert_eq!(w.kind, PairKind::BackwardAsymptotic);
        let d = w.disagreements(&g);
        assert!((d.core_lo - 20..w.disagreement_lo).all(|i| !d.contains(i)));

        let single = EdgeSft::full_shift(1).unwrap();
        assert!(matches!(single.find_asymptotic_pair(Direction::Forward), Err(Error::Domain(_))));
    }

    #[test]
    fn asymptotic_pair_on_one_sided_structure() {
        // A ⇉ C ← B with loops: forward-asymptotic pairs arrive from
        // different loops, backward ones leave the same loop.
        let g = EdgeSft::edge_shift(
            vec!["A".into(), "B".into(), "C".into()],
            vec![
                ("a".into(), 0, 0),
                ("b".into(), 1, 1),
                ("c".into(), 2, 2),
                ("s".into(), 0, 2),
                ("t".into(), 1, 2),
            ],
        )
        .unwrap();
        for dir in [Direction::Forward, Direction::Backward] {
            let w = g.find_asymptotic_pair(dir).unwrap();
            w.validate(&g).unwrap();
        }
    }

    #[test]
    fn reversal_round_trips() {
        let g = golden();
        let w = g.find_homoclinic_pair().unwrap();
        assert_eq!(w.reversed().reversed(), w);
        w.reversed().validate(&g.reversed()).unwrap();
    }

    #[test]
    fn label_words_of_golden_mean() {
        let g = golden();
        assert_eq!(g.label_words(2).len(), 3);
        assert_eq!(g.label_words(3).len(), 5);
    }
}
