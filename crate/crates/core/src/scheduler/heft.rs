use super::{upward_rank, Schedule};
use crate::dag::Dag;

/// HEFT for unit tasks: decreasing upward rank (ties to the smaller id),
/// each task placed in the earliest free slot at or after its ready time on
/// any processor, idle gaps included. Processor ties go to the smaller
/// index.
pub fn heft(d: &Dag, procs: usize) -> Schedule {
    assert!(procs >= 1);
    let n = d.n();
    let rank = upward_rank(d);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(rank[v]), v));

    let mut busy: Vec<Vec<bool>> = vec![Vec::new(); procs];
    let mut processor = vec![0; n];
    let mut start = vec![0; n];
    for v in order {
        let ready = d.predecessors(v).iter().map(|&u| start[u] + 1).max().unwrap_or(0);
        let (p, t) = (0..procs)
            .map(|p| (p, first_free(&busy[p], ready)))
            .min_by_key(|&(p, t)| (t, p))
            .unwrap();
        if busy[p].len() <= t {
            busy[p].resize(t + 1, false);
        }
        busy[p][t] = true;
        processor[v] = p;
        start[v] = t;
    }
    Schedule::new(processor, start)
}

fn first_free(timeline: &[bool], from: usize) -> usize {
    (from..).find(|&t| !timeline.get(t).copied().unwrap_or(false)).unwrap()
}
