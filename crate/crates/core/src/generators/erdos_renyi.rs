use rand::Rng;

use crate::dag::Dag;

/// Each pair `i < j` becomes an edge `i -> j` independently with
/// probability `p`, so labels are already topologically sorted.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Dag {
    assert!((0.0..=1.0).contains(&p), "p = {p} is not a probability");
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Dag::from_edges_unchecked(n, edges)
}
