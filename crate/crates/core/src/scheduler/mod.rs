//! Scheduling unit-cost tasks on identical processors.

mod exact;
mod hcpt;
mod heft;
mod minmin;
mod traps;

use std::fmt;

use thiserror::Error;

use crate::dag::Dag;

pub use exact::{
    brute_force_optimal, brute_force_schedule, decompose_at_bottlenecks, decompose_with, CutRule,
    DecompositionResult, Segment, BRUTE_FORCE_LIMIT,
};
pub use hcpt::{hcpt, hcpt_priority_list};
pub use heft::heft;
pub use minmin::{minmin, TiePolicy};
pub use traps::{hcpt_trap, minmin_trap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedulerError {
    #[error("exact search supports at most {limit} tasks, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("{0}")]
    ParameterOutOfRange(String),
}

/// Processor and start time of every task. Tasks take one time unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    pub processor: Vec<usize>,
    pub start: Vec<usize>,
}

impl Schedule {
    pub fn new(processor: Vec<usize>, start: Vec<usize>) -> Schedule {
        assert_eq!(processor.len(), start.len());
        Schedule { processor, start }
    }

    pub fn n(&self) -> usize {
        self.start.len()
    }

    pub fn makespan(&self) -> usize {
        self.start.iter().map(|s| s + 1).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TaskCount { expected: usize, found: usize },
    ProcessorOutOfRange { task: usize, processor: usize },
    SlotConflict { first: usize, second: usize, processor: usize, time: usize },
    Precedence { from: usize, to: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::TaskCount { expected, found } => {
                write!(f, "schedule has {found} tasks, DAG has {expected}")
            }
            Violation::ProcessorOutOfRange { task, processor } => {
                write!(f, "task {} uses processor {} which does not exist", task + 1, processor + 1)
            }
            Violation::SlotConflict { first, second, processor, time } => write!(
                f,
                "tasks {} and {} both run on processor {} at time {time}",
                first + 1,
                second + 1,
                processor + 1
            ),
            Violation::Precedence { from, to } => {
                write!(f, "task {} starts before its predecessor {} finishes", to + 1, from + 1)
            }
        }
    }
}

/// All violations of `s` as a schedule of `d` on `procs` processors; empty
/// when the schedule is valid.
pub fn validate_schedule(d: &Dag, s: &Schedule, procs: usize) -> Vec<Violation> {
    if s.n() != d.n() {
        return vec![Violation::TaskCount { expected: d.n(), found: s.n() }];
    }
    let mut violations = Vec::new();
    let mut slots: Vec<(usize, usize, usize)> = Vec::with_capacity(s.n());
    for task in 0..s.n() {
        if s.processor[task] >= procs {
            violations.push(Violation::ProcessorOutOfRange { task, processor: s.processor[task] });
        }
        slots.push((s.processor[task], s.start[task], task));
    }
    slots.sort_unstable();
    for w in slots.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            violations.push(Violation::SlotConflict {
                first: w[0].2,
                second: w[1].2,
                processor: w[0].0,
                time: w[0].1,
            });
        }
    }
    for (from, to) in d.edges() {
        if s.start[to] < s.start[from] + 1 {
            violations.push(Violation::Precedence { from, to });
        }
    }
    violations
}

/// Longest path, in tasks, from each task to a sink.
pub fn upward_rank(d: &Dag) -> Vec<usize> {
    let mut rank = vec![1; d.n()];
    for &v in d.topological_order().iter().rev() {
        if let Some(r) = d.successors(v).iter().map(|&w| rank[w]).max() {
            rank[v] = r + 1;
        }
    }
    rank
}

/// `max(len, ceil(n / procs))`.
pub fn lower_bound(d: &Dag, procs: usize) -> usize {
    assert!(procs >= 1);
    d.length().max(d.n().div_ceil(procs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    Heft,
    Hcpt,
    MinMin(TiePolicy),
}

impl Heuristic {
    pub const ALL: [Heuristic; 3] = [Heuristic::Heft, Heuristic::Hcpt, Heuristic::MinMin(TiePolicy::LowestId)];

    pub fn name(&self) -> &'static str {
        match self {
            Heuristic::Heft => "heft",
            Heuristic::Hcpt => "hcpt",
            Heuristic::MinMin(_) => "minmin",
        }
    }

    pub fn schedule(&self, d: &Dag, procs: usize) -> Schedule {
        match *self {
            Heuristic::Heft => heft(d, procs),
            Heuristic::Hcpt => hcpt(d, procs),
            Heuristic::MinMin(tie) => minmin(d, procs, tie),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Dag {
        Dag::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn chain_on_one_processor() {
        let s = Schedule::new(vec![0; 3], vec![0, 1, 2]);
        assert!(validate_schedule(&chain(3), &s, 1).is_empty());
        assert_eq!(s.makespan(), 3);
    }

    #[test]
    fn precedence_violation() {
        let s = Schedule::new(vec![0, 1], vec![0, 0]);
        assert_eq!(validate_schedule(&chain(2), &s, 2), vec![Violation::Precedence { from: 0, to: 1 }]);
    }

    #[test]
    fn slot_conflict_and_bad_processor() {
        let d = Dag::empty(3);
        let s = Schedule::new(vec![0, 0, 4], vec![2, 2, 0]);
        let v = validate_schedule(&d, &s, 2);
        assert!(v.contains(&Violation::ProcessorOutOfRange { task: 2, processor: 4 }));
        assert!(v.contains(&Violation::SlotConflict { first: 0, second: 1, processor: 0, time: 2 }));
    }

    #[test]
    fn two_processor_worked_example() {
        // Tasks 1, 2, 6 on the first processor; 5, 4, 8, 7, 3 on the second.
        let d = Dag::from_edge_list(8, [(1, 2), (5, 4), (4, 8), (8, 7), (7, 3), (7, 6), (2, 6)]).unwrap();
        let mut processor = vec![1; 8];
        let mut start = vec![0; 8];
        for (task, proc, time) in
            [(1, 0, 0), (2, 0, 1), (6, 0, 4), (5, 1, 0), (4, 1, 1), (8, 1, 2), (7, 1, 3), (3, 1, 4)]
        {
            processor[task - 1] = proc;
            start[task - 1] = time;
        }
        let s = Schedule::new(processor, start);
        assert!(validate_schedule(&d, &s, 2).is_empty());
        assert_eq!(s.makespan(), 5);
    }

    #[test]
    fn ranks() {
        assert_eq!(upward_rank(&chain(4)), vec![4, 3, 2, 1]);
        assert_eq!(upward_rank(&Dag::empty(3)), vec![1, 1, 1]);
        let diamond = Dag::from_edge_list(4, [(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(upward_rank(&diamond), vec![3, 2, 2, 1]);
        let d = Dag::from_edge_list(5, [(1, 3), (2, 3), (3, 4), (2, 5)]).unwrap();
        assert_eq!(upward_rank(&d), d.reversal().depths());
    }

    #[test]
    fn bounds() {
        assert_eq!(lower_bound(&chain(5), 3), 5);
        assert_eq!(lower_bound(&Dag::empty(5), 2), 3);
        let tri = crate::special::build_special(crate::special::SpecialKind::Triangular, 120).unwrap();
        assert_eq!(lower_bound(&tri, 15), 15);
    }
}
