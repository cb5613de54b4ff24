use super::{upward_rank, Schedule};
use crate::dag::Dag;

/// Priority list built from critical-path tasks.
///
/// A task is critical when its earliest start (depth - 1) equals its latest
/// start (len - upward rank). Critical tasks are stacked so that the one
/// with the smallest latest start is on top, below them sits a virtual exit
/// whose parents are the sinks. The top of the stack is listed once all its
/// parents are listed; otherwise its unlisted parent with the smallest
/// latest start (then smallest id) is pushed.
pub fn hcpt_priority_list(d: &Dag) -> Vec<usize> {
    let n = d.n();
    let len = d.length();
    let depth = d.depths();
    let rank = upward_rank(d);
    let latest: Vec<usize> = (0..n).map(|v| len - rank[v]).collect();
    let exit = n;
    let sinks: Vec<usize> = (0..n).filter(|&v| d.out_degree(v) == 0).collect();
    let parents = |v: usize| if v == exit { &sinks[..] } else { d.predecessors(v) };

    let mut critical: Vec<usize> = (0..n).filter(|&v| depth[v] - 1 == latest[v]).collect();
    // Pushed largest first so that the smallest (latest, id) ends on top.
    critical.sort_by_key(|&v| std::cmp::Reverse((latest[v], v)));
    let mut stack = vec![exit];
    stack.extend(critical);

    let mut listed = vec![false; n];
    let mut list = Vec::with_capacity(n);
    while let Some(&top) = stack.last() {
        if top != exit && listed[top] {
            stack.pop();
            continue;
        }
        match parents(top).iter().filter(|&&u| !listed[u]).min_by_key(|&&u| (latest[u], u)) {
            Some(&parent) => stack.push(parent),
            None => {
                stack.pop();
                if top != exit {
                    listed[top] = true;
                    list.push(top);
                }
            }
        }
    }
    debug_assert_eq!(list.len(), n);
    list
}

/// HCPT: the priority list scheduled by earliest finish time without
/// insertion, so a task never starts before the last task already placed
/// on its processor. Processor ties go to the smaller index.
pub fn hcpt(d: &Dag, procs: usize) -> Schedule {
    assert!(procs >= 1);
    let n = d.n();
    let mut available = vec![0usize; procs];
    let mut processor = vec![0; n];
    let mut start = vec![0; n];
    for v in hcpt_priority_list(d) {
        let ready = d.predecessors(v).iter().map(|&u| start[u] + 1).max().unwrap_or(0);
        let (p, t) = (0..procs)
            .map(|p| (p, ready.max(available[p])))
            .min_by_key(|&(p, t)| (t, p))
            .unwrap();
        available[p] = t + 1;
        processor[v] = p;
        start[v] = t;
    }
    Schedule::new(processor, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduler::validate_schedule;

    #[test]
    fn chain_is_sequential() {
        let d = Dag::from_edges(5, (1..5).map(|i| (i - 1, i))).unwrap();
        for procs in 1..4 {
            assert_eq!(hcpt(&d, procs).makespan(), 5);
        }
    }

    #[test]
    fn list_is_topological_and_complete() {
        let d = Dag::from_edge_list(7, [(1, 3), (2, 3), (3, 4), (5, 6), (2, 7)]).unwrap();
        let list = hcpt_priority_list(&d);
        let mut position = [0; 7];
        for (i, &v) in list.iter().enumerate() {
            position[v] = i;
        }
        assert_eq!(list.len(), 7);
        assert!(d.edges().all(|(u, v)| position[u] < position[v]));
    }

    #[test]
    fn parents_of_critical_tasks_come_first() {
        // Critical path 1 -> 2 -> 3; task 4 feeds 3, task 5 is unrelated.
        let d = Dag::from_edge_list(5, [(1, 2), (2, 3), (4, 3)]).unwrap();
        assert_eq!(hcpt_priority_list(&d), vec![0, 1, 3, 2, 4]);
        let s = hcpt(&d, 2);
        assert!(validate_schedule(&d, &s, 2).is_empty());
    }

    #[test]
    fn no_backfilling() {
        // Task 5 depends on 3 and is listed before the independent task 6,
        // so 6 cannot move in front of it on the same processor.
        let d = Dag::from_edge_list(6, [(1, 2), (2, 3), (3, 4), (3, 5)]).unwrap();
        let s = hcpt(&d, 2);
        assert!(validate_schedule(&d, &s, 2).is_empty());
        assert_eq!(s.start[5], 4);
        assert_eq!(s.makespan(), 5);
    }
}
