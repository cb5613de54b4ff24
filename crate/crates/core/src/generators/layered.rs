use rand::Rng;

use crate::dag::Dag;

/// Layer-by-layer construction with `k` layers.
///
/// Every layer gets one vertex and the other `n - k` vertices fall into
/// uniformly random layers. Each vertex outside the first layer is linked
/// to one random vertex of the previous layer, then every pair from an
/// earlier to a later layer gains an edge with probability `p`. Vertices
/// are labeled layer by layer.
pub fn layer_by_layer<R: Rng + ?Sized>(n: usize, k: usize, p: f64, rng: &mut R) -> Dag {
    assert!(k >= 1 && k <= n, "need 1 <= k <= n, got k = {k}, n = {n}");
    assert!((0.0..=1.0).contains(&p), "p = {p} is not a probability");
    let mut sizes = vec![1usize; k];
    for _ in k..n {
        sizes[rng.gen_range(0..k)] += 1;
    }
    let mut starts = Vec::with_capacity(k + 1);
    starts.push(0);
    for &s in &sizes {
        starts.push(starts.last().unwrap() + s);
    }
    let layer_of: Vec<usize> = (0..k).flat_map(|l| std::iter::repeat_n(l, sizes[l])).collect();

    let mut parent = vec![usize::MAX; n];
    for v in starts[1]..n {
        let l = layer_of[v];
        parent[v] = rng.gen_range(starts[l - 1]..starts[l]);
    }
    let mut edges = Vec::new();
    for v in starts[1]..n {
        for u in 0..starts[layer_of[v]] {
            if u == parent[v] || rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Dag::from_edges_unchecked(n, edges)
}
