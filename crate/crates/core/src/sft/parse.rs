//! Input formats and the higher-block recoding.
//!
//! Edge-graph JSON:
//!
//! ```json
//! {"vertices": ["A", "B"],
//!  "edges": [{"id": "a", "from": "A", "to": "A"},
//!            {"id": "b", "from": "A", "to": "B", "label": "1"}]}
//! ```
//!
//! `label` is optional; without it an edge is labeled by its id. Vertex names
//! and ids may be JSON strings or numbers.
//!
//! Forbidden-words text: the first non-comment line lists the alphabet,
//! each later line is one forbidden word. Words are written either as
//! whitespace-separated symbols or, when every symbol is a single character,
//! as a plain string (`11`).

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Deserialize;

use super::EdgeSft;
use crate::error::{Error, Result};
use crate::shiftspace::{Alphabet, Symbol};

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Name {
    Text(String),
    Number(serde_json::Number),
}

impl Name {
    fn into_string(self) -> String {
        match self {
            Name::Text(s) => s,
            Name::Number(n) => n.to_string(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
struct RawEdge {
    id: Name,
    from: Name,
    to: Name,
    #[serde(default)]
    label: Option<Name>,
}

#[derive(Clone, Debug, Deserialize)]
struct RawGraph {
    vertices: Vec<Name>,
    edges: Vec<RawEdge>,
}

/// An edge graph with names resolved to strings, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub label: Option<String>,
}

impl GraphSpec {
    pub fn build(self) -> Result<EdgeSft> {
        let index: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        if index.len() != self.vertices.len() {
            return Err(Error::parse("vertices", "duplicate vertex name"));
        }
        let labeled = self.edges.iter().any(|e| e.label.is_some());
        let mut label_names: Vec<String> = Vec::new();
        let mut label_index: HashMap<String, Symbol> = HashMap::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            let from = *index
                .get(e.from.as_str())
                .ok_or_else(|| Error::parse(format!("edges[{k}].from"), format!("unknown vertex {:?}", e.from)))?;
            let to = *index
                .get(e.to.as_str())
                .ok_or_else(|| Error::parse(format!("edges[{k}].to"), format!("unknown vertex {:?}", e.to)))?;
            let name = match (&e.label, labeled) {
                (Some(l), _) => l.clone(),
                (None, true) => {
                    return Err(Error::parse(
                        format!("edges[{k}]"),
                        "either every edge carries a label or none does",
                    ))
                }
                (None, false) => e.id.clone(),
            };
            let next = Symbol(label_names.len() as u32);
            let sym = *label_index.entry(name.clone()).or_insert_with(|| {
                label_names.push(name);
                next
            });
            edges.push((e.id.clone(), from, to, sym));
        }
        if label_names.is_empty() {
            return Err(Error::parse("edges", "graph has no edges"));
        }
        let alphabet = Arc::new(Alphabet::new(label_names)?);
        EdgeSft::new(self.vertices, edges, alphabet).map_err(|e| match e {
            Error::Domain(m) => Error::parse("edges", m),
            other => other,
        })
    }
}

pub fn parse_edge_graph_json(input: &str) -> Result<EdgeSft> {
    let raw: RawGraph = serde_json::from_str(input).map_err(|e| {
        Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;
    let spec = GraphSpec {
        vertices: raw.vertices.into_iter().map(Name::into_string).collect(),
        edges: raw
            .edges
            .into_iter()
            .map(|e| EdgeSpec {
                id: e.id.into_string(),
                from: e.from.into_string(),
                to: e.to.into_string(),
                label: e.label.map(Name::into_string),
            })
            .collect(),
    };
    spec.build()
}

pub fn parse_forbidden_words(input: &str) -> Result<EdgeSft> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse("line 1", "missing alphabet line"))?;
    let alphabet = Alphabet::new(header.split_whitespace())
        .map_err(|e| Error::parse("line 1", e.to_string()))?;
    let single_chars = alphabet.names().iter().all(|s| s.chars().count() == 1);
    let mut forbidden = Vec::new();
    for (no, line) in lines {
        let tokens: Vec<String> = if line.contains(char::is_whitespace) || !single_chars {
            line.split_whitespace().map(str::to_string).collect()
        } else {
            line.chars().map(|c| c.to_string()).collect()
        };
        let word = tokens
            .iter()
            .map(|t| {
                alphabet
                    .symbol(t)
                    .ok_or_else(|| Error::parse(format!("line {no}"), format!("unknown symbol {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        forbidden.push(word);
    }
    higher_block(Arc::new(alphabet), &forbidden)
}

/// Parses either input format; JSON is recognised by a leading `{`.
pub fn parse_sft(input: &str) -> Result<EdgeSft> {
    let sft = if input.trim_start().starts_with('{') {
        parse_edge_graph_json(input)?
    } else {
        parse_forbidden_words(input).map_err(|e| match e {
            Error::EmptySubshift(m) => Error::parse("input", m),
            other => other,
        })?
    };
    if sft.is_empty() {
        return Err(Error::parse("input", "essential graph is empty"));
    }
    Ok(sft)
}

fn word_name(alphabet: &Alphabet, word: &[Symbol]) -> String {
    let parts: Vec<&str> = word.iter().map(|s| alphabet.name(*s)).collect();
    if alphabet.names().iter().all(|s| s.chars().count() == 1) {
        parts.concat()
    } else {
        parts.join(".")
    }
}

/// Recodes the subshift defined by `forbidden` as an essential edge graph.
///
/// With `L` the longest forbidden length, vertices are allowed words of length
/// `L - 1` and edges are allowed words of length `L`, running from their
/// prefix to their suffix and labeled by their last symbol. Length-one
/// prohibitions remove symbols up front; with nothing longer left the result
/// is one vertex carrying a loop per surviving symbol.
pub fn higher_block(alphabet: Arc<Alphabet>, forbidden: &[Vec<Symbol>]) -> Result<EdgeSft> {
    if let Some(w) = forbidden.iter().find(|w| w.is_empty()) {
        return Err(Error::Domain(format!("forbidden word {w:?} is empty")));
    }
    let banned: BTreeSet<Symbol> = forbidden
        .iter()
        .filter(|w| w.len() == 1)
        .map(|w| w[0])
        .collect();
    let symbols: Vec<Symbol> = alphabet.symbols().filter(|s| !banned.contains(s)).collect();
    let words: BTreeSet<&[Symbol]> = forbidden
        .iter()
        .filter(|w| w.len() >= 2)
        .map(|w| w.as_slice())
        .collect();
    let block = words.iter().map(|w| w.len()).max().unwrap_or(1);

    let sft = if block == 1 {
        let edges = symbols
            .iter()
            .map(|&s| (alphabet.name(s).to_string(), 0, 0, s))
            .collect();
        EdgeSft::new(vec!["·".into()], edges, alphabet.clone())?
    } else {
        // Allowed words, grown one symbol at a time; only suffixes can newly
        // contain a forbidden factor.
        let mut layer: Vec<Vec<Symbol>> = vec![Vec::new()];
        let mut vertices_words = Vec::new();
        for len in 1..=block {
            let mut next = Vec::new();
            for w in &layer {
                for &s in &symbols {
                    let mut v = w.clone();
                    v.push(s);
                    let bad = (2..=len).any(|k| words.contains(&v[len - k..]));
                    if !bad {
                        next.push(v);
                    }
                }
            }
            if len == block - 1 {
                vertices_words = next.clone();
            }
            layer = next;
        }
        let index: HashMap<&[Symbol], usize> = vertices_words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let edges = layer
            .iter()
            .map(|w| {
                let from = index[&w[..block - 1]];
                let to = index[&w[1..]];
                (word_name(&alphabet, w), from, to, w[block - 1])
            })
            .collect();
        let names = vertices_words.iter().map(|w| word_name(&alphabet, w)).collect();
        EdgeSft::new(names, edges, alphabet.clone())?
    };
    if sft.is_empty() {
        return Err(Error::EmptySubshift("every bi-infinite sequence contains a forbidden word".into()));
    }
    Ok(sft)
}
