//! Seeded random edge SFTs.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symdyn_core::sft::EdgeSft;

/// A random edge shift on at most `max_vertices` vertices and `max_edges`
/// edges, essentialized. May be finite or empty.
pub fn random_edge_shift<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> EdgeSft {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(1..=max_edges);
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..m)
        .map(|i| (format!("e{i}"), rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    EdgeSft::edge_shift(vertices, edges).expect("edge shifts have distinct labels")
}

/// `count` infinite essential edge shifts drawn from `seed`.
pub fn random_infinite_corpus(seed: u64, count: usize, max_vertices: usize, max_edges: usize) -> Vec<EdgeSft> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = random_edge_shift(&mut rng, max_vertices, max_edges);
        if s.is_infinite() {
            out.push(s);
        }
    }
    out
}
