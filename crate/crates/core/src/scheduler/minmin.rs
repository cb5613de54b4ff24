use super::{upward_rank, Schedule};
use crate::dag::Dag;

/// Order in which MinMin takes simultaneously available tasks. With unit
/// tasks every available task has the same completion time, so this order
/// is the only thing that distinguishes schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TiePolicy {
    /// Smallest task id first.
    #[default]
    LowestId,
    /// Smallest upward rank first (then smallest id), which postpones
    /// tasks on long chains as long as anything else is available.
    Adversarial,
}

/// MinMin as a unit-time simulation: at every step up to `procs` available
/// tasks start, chosen in `tie` order and placed on processors 0, 1, ...
pub fn minmin(d: &Dag, procs: usize, tie: TiePolicy) -> Schedule {
    assert!(procs >= 1);
    let n = d.n();
    let key: Vec<(usize, usize)> = match tie {
        TiePolicy::LowestId => (0..n).map(|v| (0, v)).collect(),
        TiePolicy::Adversarial => {
            let rank = upward_rank(d);
            (0..n).map(|v| (rank[v], v)).collect()
        }
    };
    let mut missing: Vec<usize> = (0..n).map(|v| d.in_degree(v)).collect();
    let mut available: Vec<usize> = (0..n).filter(|&v| missing[v] == 0).collect();
    let mut processor = vec![0; n];
    let mut start = vec![0; n];
    let mut time = 0;
    while !available.is_empty() {
        available.sort_by_key(|&v| key[v]);
        let batch: Vec<usize> = available.drain(..procs.min(available.len())).collect();
        for (p, &v) in batch.iter().enumerate() {
            processor[v] = p;
            start[v] = time;
        }
        for &v in &batch {
            for &w in d.successors(v) {
                missing[w] -= 1;
                if missing[w] == 0 {
                    available.push(w);
                }
            }
        }
        time += 1;
    }
    Schedule::new(processor, start)
}
