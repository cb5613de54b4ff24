//! Uniform random labeled DAGs through their shape decomposition.

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigUint, RandBigInt};
use rand::seq::SliceRandom;
use rand::Rng;

use super::count::{layer_weight_prefix, CountError, CountTable};
use crate::dag::Dag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UniformMode {
    /// Uniform over all labeled DAGs.
    #[default]
    Exact,
    /// The printed two-step procedure: unconditioned layer-size recursion
    /// and one mandatory parent per vertex. Not uniform; kept for study.
    PaperFaithful,
}

/// Samples shapes and DAGs from a count table, caching the big-integer
/// weight vectors it needs.
#[derive(Debug)]
pub struct UniformSampler {
    table: CountTable,
    // first[i]: prefix sums of a_{i,s} over s.
    first: Vec<OnceLock<Vec<BigUint>>>,
    // next[m][k]: prefix sums of the next-layer weights with m vertices
    // left after a layer of size k.
    next: Vec<Vec<OnceLock<Vec<BigUint>>>>,
}

impl UniformSampler {
    pub fn new(table: CountTable) -> UniformSampler {
        let n = table.max_n();
        UniformSampler {
            first: (0..=n).map(|_| OnceLock::new()).collect(),
            next: (0..=n)
                .map(|m| (0..=n - m).map(|_| OnceLock::new()).collect())
                .collect(),
            table,
        }
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    pub fn max_n(&self) -> usize {
        self.table.max_n()
    }

    fn first_prefix(&self, i: usize) -> &[BigUint] {
        self.first[i].get_or_init(|| {
            let mut running = BigUint::default();
            (1..=i)
                .map(|s| {
                    running += self.table.a_nk(i, s);
                    running.clone()
                })
                .collect()
        })
    }

    fn next_prefix(&self, m: usize, k: usize) -> &[BigUint] {
        self.next[m][k].get_or_init(|| layer_weight_prefix(&self.table, m, k))
    }

    /// Random layer sizes. Panics if `n` is outside the table.
    pub fn random_shape<R: Rng + ?Sized>(&self, n: usize, mode: UniformMode, rng: &mut R) -> Vec<usize> {
        assert!(n >= 1 && n <= self.max_n(), "n = {n} outside the count table");
        let mut shape = vec![draw(self.first_prefix(n), rng)];
        let mut left = n - shape[0];
        while left > 0 {
            let prefix = match mode {
                UniformMode::Exact => self.next_prefix(left, *shape.last().unwrap()),
                UniformMode::PaperFaithful => self.first_prefix(left),
            };
            let size = draw(prefix, rng);
            shape.push(size);
            left -= size;
        }
        shape
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, mode: UniformMode, rng: &mut R) -> Dag {
        let shape = self.random_shape(n, mode, rng);
        shape_to_dag(&shape, mode, rng)
    }
}

/// Index `s >= 1` drawn with probability proportional to the `s`-th weight,
/// given the prefix sums of the weights.
fn draw<R: Rng + ?Sized>(prefix: &[BigUint], rng: &mut R) -> usize {
    let total = prefix.last().expect("non-empty weights");
    let r = rng.gen_biguint_below(total);
    prefix.partition_point(|p| *p <= r) + 1
}

/// Random DAG whose shape decomposition is `shape`, with uniformly random
/// labels.
pub fn shape_to_dag<R: Rng + ?Sized>(shape: &[usize], mode: UniformMode, rng: &mut R) -> Dag {
    assert!(shape.iter().all(|&x| x >= 1), "layer sizes must be positive");
    let n: usize = shape.iter().sum();
    let mut edges = Vec::new();
    let mut start = 0;
    for (level, &size) in shape.iter().enumerate() {
        if level > 0 {
            let prev_start = start - shape[level - 1];
            for v in start..start + size {
                match mode {
                    UniformMode::Exact => {
                        // Uniform non-empty subset of the previous level.
                        let chosen = loop {
                            let picks: Vec<usize> =
                                (prev_start..start).filter(|_| rng.gen::<bool>()).collect();
                            if !picks.is_empty() {
                                break picks;
                            }
                        };
                        edges.extend((0..prev_start).filter(|_| rng.gen::<bool>()).map(|u| (u, v)));
                        edges.extend(chosen.into_iter().map(|u| (u, v)));
                    }
                    UniformMode::PaperFaithful => {
                        let parent = rng.gen_range(prev_start..start);
                        edges.extend(
                            (0..start).filter(|&u| u == parent || rng.gen::<bool>()).map(|u| (u, v)),
                        );
                    }
                }
            }
        }
        start += size;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Dag::from_edges_unchecked(n, edges).relabel(&perm)
}

static SHARED: Mutex<Option<Arc<UniformSampler>>> = Mutex::new(None);

/// Process-wide sampler covering at least `n` vertices. The table is read
/// from the on-disk cache when one is configured.
pub fn shared_sampler(n: usize) -> Result<Arc<UniformSampler>, CountError> {
    let mut guard = SHARED.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(sampler) = guard.as_ref() {
        if sampler.max_n() >= n {
            return Ok(Arc::clone(sampler));
        }
    }
    // Grow geometrically so a sweep over increasing n rebuilds rarely.
    let target = guard
        .as_ref()
        .map_or(n, |s| n.max((2 * s.max_n()).min(super::count::DEFAULT_CAP)));
    let sampler = Arc::new(UniformSampler::new(CountTable::load_default(target)?));
    *guard = Some(Arc::clone(&sampler));
    Ok(sampler)
}
