//! Topological entropy as the log of the Perron root of the vertex adjacency.
//!
//! The spectral radius of a reducible nonnegative matrix is the largest
//! radius among its irreducible diagonal blocks, so the iteration runs per
//! strongly connected component. On each block `A + I` is primitive; power
//! iteration converges geometrically and the Collatz–Wielandt quotients
//! `min_i (Mx)_i / x_i ≤ ρ(M) ≤ max_i (Mx)_i / x_i` give a two-sided stop rule.

use super::EdgeSft;

const RELATIVE_TOLERANCE: f64 = 1e-13;
const MAX_ITERATIONS: usize = 1_000_000;

/// Tarjan's algorithm, iterative. Components come out in reverse topological
/// order; vertices inside a component are sorted.
pub fn strongly_connected_components(sft: &EdgeSft) -> Vec<Vec<usize>> {
    let n = sft.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next = 0usize;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let out = sft.out_edges(v);
            if *pos < out.len() {
                let w = sft.edges()[out[*pos]].to;
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }
    components
}

fn block_radius(sft: &EdgeSft, comp: &[usize]) -> f64 {
    let n = sft.vertex_count();
    let mut local = vec![usize::MAX; n];
    for (i, &v) in comp.iter().enumerate() {
        local[v] = i;
    }
    let arcs: Vec<(usize, usize)> = comp
        .iter()
        .flat_map(|&v| sft.out_edges(v).iter().map(move |&e| (v, e)))
        .filter_map(|(v, e)| {
            let t = local[sft.edges()[e].to];
            (t != usize::MAX).then_some((local[v], t))
        })
        .collect();
    if arcs.is_empty() {
        return 0.0;
    }
    let k = comp.len();
    let mut x = vec![1.0f64; k];
    let mut y = vec![0.0f64; k];
    let mut estimate = 0.0;
    for _ in 0..MAX_ITERATIONS {
        y.copy_from_slice(&x);
        for &(s, t) in &arcs {
            y[s] += x[t];
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..k {
            let q = y[i] / x[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        estimate = 0.5 * (lo + hi) - 1.0;
        if hi - lo <= RELATIVE_TOLERANCE * hi {
            break;
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        for i in 0..k {
            x[i] = y[i] / norm;
        }
    }
    estimate
}

pub(super) fn spectral_radius(sft: &EdgeSft) -> f64 {
    strongly_connected_components(sft)
        .iter()
        .map(|c| block_radius(sft, c))
        .fold(0.0, f64::max)
}

/// Natural-log entropy; `-∞` for the empty graph.
pub(super) fn entropy(sft: &EdgeSft) -> f64 {
    spectral_radius(sft).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::parse_forbidden_words;

    #[test]
    fn entropy_examples() {
        let full = EdgeSft::full_shift(2).unwrap();
        assert!((full.entropy() - 2f64.ln()).abs() < 1e-12);

        let golden = parse_forbidden_words("0 1\n11\n").unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((golden.entropy() - phi.ln()).abs() < 1e-9);
        assert!((golden.entropy() - 0.481212).abs() < 1e-6);

        assert_eq!(EdgeSft::full_shift(1).unwrap().entropy(), 0.0);
    }

    #[test]
    fn periodic_components_converge() {
        // A 2-cycle with a chord: adjacency [[1,1],[1,0]] up to relabeling,
        // plus a pure 3-cycle whose own matrix is imprimitive.
        let g = EdgeSft::edge_shift(
            (0..3).map(|i| i.to_string()).collect(),
            vec![("a".into(), 0, 1), ("b".into(), 1, 2), ("c".into(), 2, 0)],
        )
        .unwrap();
        assert!((g.spectral_radius() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scc_splits_chain() {
        let chain = EdgeSft::edge_shift(
            vec!["A".into(), "B".into()],
            vec![("a".into(), 0, 0), ("t".into(), 0, 1), ("b".into(), 1, 1)],
        )
        .unwrap();
        let mut comps = strongly_connected_components(&chain);
        comps.sort();
        assert_eq!(comps, vec![vec![0], vec![1]]);
    }
}
