use rand::seq::SliceRandom;
use rand::Rng;

use crate::dag::Dag;

/// Intersection of `k` uniformly random total orders: `u -> v` whenever `u`
/// precedes `v` in every order. The result is transitively closed.
pub fn random_orders<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Dag {
    assert!(k >= 1, "at least one order is needed");
    // position[i][v]: rank of v in the i-th order.
    let mut positions = Vec::with_capacity(k);
    for _ in 0..k {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut position = vec![0; n];
        for (rank, &v) in order.iter().enumerate() {
            position[v] = rank;
        }
        positions.push(position);
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && positions.iter().all(|pos| pos[u] < pos[v]) {
                edges.push((u, v));
            }
        }
    }
    Dag::from_edges_unchecked(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_order_is_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = random_orders(12, 1, &mut rng);
        assert_eq!(d.m(), 66);
        assert_eq!(d.transitive_reduction().m(), 11);
    }

    #[test]
    fn output_is_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let d = random_orders(30, 3, &mut rng);
        assert_eq!(d.transitive_closure(), d);
    }
}
