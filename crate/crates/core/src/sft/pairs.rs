//! Asymptotic and homoclinic pairs via the synchronized pair graph.
//!
//! The pair graph has a state `(u, v)` per ordered pair of vertices and a
//! transition for every pair of edges `(e: u → u', g: v → v')`. A transition
//! is a disagreement when the two labels differ. Diagonal states `(w, w)` are
//! where two paths can merge for good.

use std::collections::VecDeque;

use super::reach::{self, Csr};
use super::{EdgeSft, EventuallyPeriodicPath, PairKind, PairWitness};

const NONE: usize = usize::MAX;

struct PairGraph<'a> {
    sft: &'a EdgeSft,
    n: usize,
}

impl<'a> PairGraph<'a> {
    fn new(sft: &'a EdgeSft) -> Self {
        Self {
            sft,
            n: sft.vertex_count(),
        }
    }

    fn state(&self, u: usize, v: usize) -> usize {
        u * self.n + v
    }

    fn split(&self, s: usize) -> (usize, usize) {
        (s / self.n, s % self.n)
    }

    fn is_diagonal(&self, s: usize) -> bool {
        let (u, v) = self.split(s);
        u == v
    }

    /// Transitions out of `s` as `(e, g, target)`, lexicographic in `(e, g)`.
    fn transitions(&self, s: usize) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let (u, v) = self.split(s);
        let edges = self.sft.edges();
        self.sft.out_edges(u).iter().flat_map(move |&e| {
            self.sft
                .out_edges(v)
                .iter()
                .map(move |&g| (e, g, self.state(edges[e].to, edges[g].to)))
        })
    }

    fn differs(&self, e: usize, g: usize) -> bool {
        self.sft.label(e) != self.sft.label(g)
    }

    /// For each state, the next label-equal step towards the diagonal
    /// (`Some(None)` on the diagonal itself), or `None` if unreachable.
    fn merge_routes(&self) -> Vec<Option<Option<(usize, usize, usize)>>> {
        let total = self.n * self.n;
        let mut route = vec![None; total];
        let mut queue = VecDeque::new();
        for w in 0..self.n {
            let s = self.state(w, w);
            route[s] = Some(None);
            queue.push_back(s);
        }
        // Reverse BFS over label-equal transitions.
        let mut preds: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); total];
        for s in 0..total {
            for (e, g, t) in self.transitions(s) {
                if !self.differs(e, g) {
                    preds[t].push((s, e, g));
                }
            }
        }
        while let Some(t) = queue.pop_front() {
            for &(s, e, g) in &preds[t] {
                if route[s].is_none() {
                    route[s] = Some(Some((e, g, t)));
                    queue.push_back(s);
                }
            }
        }
        route
    }

    fn backward_infinite(&self) -> Vec<bool> {
        let total = self.n * self.n;
        let arcs: Vec<(u32, u32)> = (0..total)
            .flat_map(|s| self.transitions(s).map(move |(_, _, t)| (s as u32, t as u32)))
            .collect();
        let succ = Csr::from_arcs(total, arcs.iter().copied());
        let pred = Csr::from_arcs(total, arcs.iter().map(|&(s, t)| (t, s)));
        reach::infinite_forward(&pred, &succ)
    }

    /// Follows merge routes from `s` to the diagonal.
    fn merge_tail(&self, route: &[Option<Option<(usize, usize, usize)>>], mut s: usize) -> (Vec<(usize, usize)>, usize) {
        let mut steps = Vec::new();
        while let Some(Some((e, g, t))) = route[s] {
            steps.push((e, g));
            s = t;
        }
        let (w, _) = self.split(s);
        (steps, w)
    }
}

/// Backward lasso into `v`: `(period, transient)` with the period ending where
/// the transient starts and the transient ending at `v`. Smallest in-edge first.
fn backward_lasso(sft: &EdgeSft, v: usize) -> (Vec<usize>, Vec<usize>) {
    let mut seen = vec![NONE; sft.vertex_count()];
    let mut taken = Vec::new();
    let mut at = v;
    loop {
        if seen[at] != NONE {
            let k = seen[at];
            let mut transient: Vec<usize> = taken[..k].to_vec();
            let mut period: Vec<usize> = taken[k..].to_vec();
            transient.reverse();
            period.reverse();
            return (period, transient);
        }
        seen[at] = taken.len();
        let e = sft.in_edges(at)[0];
        taken.push(e);
        at = sft.edges()[e].from;
    }
}

/// Forward lasso out of `v`: `(transient, period)`. Smallest out-edge first.
fn forward_lasso(sft: &EdgeSft, v: usize) -> (Vec<usize>, Vec<usize>) {
    let mut seen = vec![NONE; sft.vertex_count()];
    let mut taken = Vec::new();
    let mut at = v;
    loop {
        if seen[at] != NONE {
            let k = seen[at];
            return (taken[..k].to_vec(), taken[k..].to_vec());
        }
        seen[at] = taken.len();
        let e = sft.out_edges(at)[0];
        taken.push(e);
        at = sft.edges()[e].to;
    }
}

fn unzip(steps: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    steps.iter().copied().unzip()
}

/// Shortest-width homoclinic pair: two paths that leave a common vertex with
/// different labels and rejoin, with ties broken by `(vertex, edge, edge)`.
pub(super) fn find_homoclinic_pair(sft: &EdgeSft) -> Option<PairWitness> {
    if sft.is_empty() {
        return None;
    }
    let pg = PairGraph::new(sft);
    let route = pg.merge_routes();
    let total = pg.n * pg.n;

    // parent[s] = (previous state, e, g); sources have previous = NONE and
    // record the diagonal start in `origin`.
    let mut parent = vec![(NONE, NONE, NONE); total];
    let mut origin = vec![NONE; total];
    let mut visited = vec![false; total];
    let mut queue = VecDeque::new();
    let mut found: Option<(usize, usize, usize, usize)> = None; // (state, e, g, target)

    'sources: for u in 0..pg.n {
        let s = pg.state(u, u);
        for (e, g, t) in pg.transitions(s) {
            if e >= g || !pg.differs(e, g) {
                continue;
            }
            if route[t].is_some() {
                found = Some((s, e, g, t));
                break 'sources;
            }
            if !visited[t] {
                visited[t] = true;
                parent[t] = (NONE, e, g);
                origin[t] = u;
                queue.push_back(t);
            }
        }
    }
    if found.is_none() {
        'bfs: while let Some(s) = queue.pop_front() {
            for (e, g, t) in pg.transitions(s) {
                if pg.differs(e, g) && route[t].is_some() {
                    found = Some((s, e, g, t));
                    break 'bfs;
                }
                if !visited[t] && !pg.is_diagonal(t) {
                    visited[t] = true;
                    parent[t] = (s, e, g);
                    origin[t] = origin[s];
                    queue.push_back(t);
                }
            }
        }
    }
    let (last_state, e_last, g_last, merged) = found?;

    // Steps from the first disagreement up to and including the last one.
    let mut middle = vec![(e_last, g_last)];
    let start_vertex;
    if pg.is_diagonal(last_state) && parent[last_state].0 == NONE && origin[last_state] == NONE {
        start_vertex = pg.split(last_state).0;
    } else {
        let mut s = last_state;
        loop {
            let (prev, e, g) = parent[s];
            middle.push((e, g));
            if prev == NONE {
                start_vertex = origin[s];
                break;
            }
            s = prev;
        }
    }
    middle.reverse();
    let width = middle.len() as i64;
    let (tail, w) = pg.merge_tail(&route, merged);
    let (left_period, left_transient) = backward_lasso(sft, start_vertex);
    let (right_transient, right_period) = forward_lasso(sft, w);

    let (mx, my) = unzip(&middle);
    let (tx, ty) = unzip(&tail);
    let build = |mid: &[usize], tl: &[usize]| EventuallyPeriodicPath {
        left_period: left_period.clone(),
        window_start: -(left_transient.len() as i64),
        window: left_transient
            .iter()
            .chain(mid)
            .chain(tl)
            .chain(&right_transient)
            .copied()
            .collect(),
        right_period: right_period.clone(),
    };
    Some(PairWitness {
        kind: PairKind::Homoclinic,
        x: build(&mx, &tx),
        y: build(&my, &ty),
        disagreement_lo: 0,
        disagreement_hi: width - 1,
    })
}

/// A pair that agrees from some time on and differs before it.
///
/// Sources are all pair states with an infinite past; the search looks for a
/// shortest route to a disagreement whose target can merge into the diagonal
/// through label-equal steps.
pub(super) fn find_forward_asymptotic(sft: &EdgeSft) -> Option<PairWitness> {
    if sft.is_empty() {
        return None;
    }
    let pg = PairGraph::new(sft);
    let route = pg.merge_routes();
    let past = pg.backward_infinite();
    let total = pg.n * pg.n;

    let mut parent = vec![(NONE, NONE, NONE); total];
    let mut visited = vec![false; total];
    let mut queue = VecDeque::new();
    for s in (0..total).filter(|&s| past[s]) {
        visited[s] = true;
        queue.push_back(s);
    }
    let mut found = None;
    'bfs: while let Some(s) = queue.pop_front() {
        for (e, g, t) in pg.transitions(s) {
            if pg.differs(e, g) && route[t].is_some() {
                found = Some((s, e, g, t));
                break 'bfs;
            }
            if !visited[t] {
                visited[t] = true;
                parent[t] = (s, e, g);
                queue.push_back(t);
            }
        }
    }
    let (last_state, e_last, g_last, merged) = found?;
    let mut approach = vec![(e_last, g_last)];
    let mut s = last_state;
    while parent[s].0 != NONE {
        let (prev, e, g) = parent[s];
        approach.push((e, g));
        s = prev;
    }
    approach.reverse();
    let source = s;

    // Pair lasso into `source`, staying among states with an infinite past.
    let edges = sft.edges();
    let mut seen = vec![NONE; total];
    let mut taken: Vec<(usize, usize)> = Vec::new();
    let mut at = source;
    let (pair_period, pair_transient) = loop {
        if seen[at] != NONE {
            let k = seen[at];
            let mut transient = taken[..k].to_vec();
            let mut period = taken[k..].to_vec();
            transient.reverse();
            period.reverse();
            break (period, transient);
        }
        seen[at] = taken.len();
        let (u, v) = pg.split(at);
        let step = sft
            .in_edges(u)
            .iter()
            .flat_map(|&e| sft.in_edges(v).iter().map(move |&g| (e, g)))
            .find(|&(e, g)| past[pg.state(edges[e].from, edges[g].from)])
            .expect("state with infinite past has a predecessor with infinite past");
        taken.push(step);
        at = pg.state(edges[step.0].from, edges[step.1].from);
    };

    let (tail, w) = pg.merge_tail(&route, merged);
    let (right_transient, right_period) = forward_lasso(sft, w);
    let prefix_len = (pair_transient.len() + approach.len() - 1) as i64;
    let (px, py) = unzip(&pair_period);
    let (trx, try_) = unzip(&pair_transient);
    let (ax, ay) = unzip(&approach);
    let (tx, ty) = unzip(&tail);
    let build = |period: Vec<usize>, tr: &[usize], ap: &[usize], tl: &[usize]| EventuallyPeriodicPath {
        left_period: period,
        window_start: -prefix_len,
        window: tr
            .iter()
            .chain(ap)
            .chain(tl)
            .chain(&right_transient)
            .copied()
            .collect(),
        right_period: right_period.clone(),
    };
    let x = build(px, &trx, &ax, &tx);
    let y = build(py, &try_, &ay, &ty);
    let lo = (-prefix_len..=0)
        .find(|&i| sft.label(x.edge_at(i)) != sft.label(y.edge_at(i)))
        .unwrap_or(0);
    Some(PairWitness {
        kind: PairKind::ForwardAsymptotic,
        x,
        y,
        disagreement_lo: lo,
        disagreement_hi: 0,
    })
}
