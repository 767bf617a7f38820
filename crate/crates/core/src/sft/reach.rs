//! Reachability helpers shared by the pair-graph searches.

/// Compressed adjacency of a directed graph on `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    pub(crate) fn from_arcs(n: usize, arcs: impl Iterator<Item = (u32, u32)> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (s, _) in arcs.clone() {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        for (s, t) in arcs {
            targets[fill[s as usize]] = t;
            fill[s as usize] += 1;
        }
        Self { offsets, targets }
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub(crate) fn neighbours(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Vertices from which an infinite forward walk exists, given successor and
/// predecessor adjacencies of the same graph.
pub(crate) fn infinite_forward(succ: &Csr, pred: &Csr) -> Vec<bool> {
    let n = succ.len();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| succ.neighbours(v).len()).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] == 0).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &p in pred.neighbours(v) {
            let p = p as usize;
            if alive[p] {
                degree[p] -= 1;
                if degree[p] == 0 {
                    stack.push(p);
                }
            }
        }
    }
    alive
}

/// Both directions at once: `(forward_infinite, backward_infinite)`.
pub(crate) fn infinite_both(succ: &Csr, pred: &Csr) -> (Vec<bool>, Vec<bool>) {
    (infinite_forward(succ, pred), infinite_forward(pred, succ))
}
