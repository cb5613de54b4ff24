use std::collections::HashMap;

use itertools::Itertools;

use super::{Schedule, SchedulerError};
use crate::dag::Dag;

pub const BRUTE_FORCE_LIMIT: usize = 20;

/// An optimal schedule found by breadth-first search over sets of
/// completed tasks, one time unit per level.
///
/// When at most `procs` tasks are available they all start; otherwise every
/// `procs`-subset is tried. Starting an available task never hurts with
/// unit durations, so the search loses no optimal schedule.
pub fn brute_force_schedule(d: &Dag, procs: usize) -> Result<Schedule, SchedulerError> {
    assert!(procs >= 1);
    let n = d.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(SchedulerError::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let preds: Vec<u32> = (0..n)
        .map(|v| d.predecessors(v).iter().fold(0, |acc, &u| acc | 1 << u))
        .collect();
    let full: u32 = (1 << n) - 1;

    let mut parent: HashMap<u32, u32> = HashMap::from([(0, 0)]);
    let mut frontier = vec![0u32];
    while !parent.contains_key(&full) {
        let mut next = Vec::new();
        for &done in &frontier {
            let available: Vec<u32> = (0..n)
                .filter(|&v| done >> v & 1 == 0 && preds[v] & !done == 0)
                .map(|v| 1 << v)
                .collect();
            let mut visit = |batch: u32| {
                let state = done | batch;
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(state) {
                    e.insert(done);
                    next.push(state);
                }
            };
            if available.len() <= procs {
                visit(available.iter().fold(0, |a, b| a | b));
            } else {
                for combo in available.iter().combinations(procs) {
                    visit(combo.into_iter().fold(0, |a, b| a | b));
                }
            }
        }
        frontier = next;
    }

    let mut steps = vec![full];
    while *steps.last().unwrap() != 0 {
        steps.push(parent[steps.last().unwrap()]);
    }
    steps.reverse();
    let mut processor = vec![0; n];
    let mut start = vec![0; n];
    for (time, w) in steps.windows(2).enumerate() {
        let batch = w[1] & !w[0];
        for (p, v) in (0..n).filter(|&v| batch >> v & 1 == 1).enumerate() {
            processor[v] = p;
            start[v] = time;
        }
    }
    Ok(Schedule::new(processor, start))
}

pub fn brute_force_optimal(d: &Dag, procs: usize) -> Result<usize, SchedulerError> {
    brute_force_schedule(d, procs).map(|s| s.makespan())
}

/// A piece of a decomposed DAG; vertex `i` of `dag` is `vertices[i]` of the
/// original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub dag: Dag,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutRule {
    /// Cut at bottlenecks that are comparable to every other vertex.
    #[default]
    Comparable,
    /// Cut at every singleton layer.
    EverySingletonLayer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult {
    pub segments: Vec<Segment>,
    /// Number of bottleneck vertices (sole vertices of singleton layers).
    pub n_c: usize,
    /// Bottlenecks the DAG was actually cut at.
    pub cuts: Vec<usize>,
    /// Cut vertices that belong to two adjacent segments.
    pub shared: Vec<usize>,
}

impl DecompositionResult {
    /// Makespan of the concatenated schedule given each segment's makespan.
    pub fn compose(&self, segment_makespans: &[usize]) -> usize {
        assert_eq!(segment_makespans.len(), self.segments.len());
        segment_makespans.iter().sum::<usize>() - self.shared.len()
    }

    /// Optimal makespan assembled from exact per-segment optima.
    pub fn composed_optimum(&self, procs: usize) -> Result<usize, SchedulerError> {
        let optima = self
            .segments
            .iter()
            .map(|s| brute_force_optimal(&s.dag, procs))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.compose(&optima))
    }
}

/// Splits `d` at bottleneck vertices that every other vertex reaches or is
/// reached from. Each segment covers a run of layers and includes the cut
/// vertices at both of its ends, so the makespans of consecutive segments
/// overlap in one time unit.
pub fn decompose_at_bottlenecks(d: &Dag) -> DecompositionResult {
    decompose_with(d, CutRule::Comparable)
}

pub fn decompose_with(d: &Dag, rule: CutRule) -> DecompositionResult {
    let sd = d.shape_decomposition();
    let layers = sd.layers();
    let singletons: Vec<usize> = (0..layers.len()).filter(|&l| layers[l].len() == 1).collect();

    let cut_layers: Vec<usize> = match rule {
        CutRule::EverySingletonLayer => singletons.clone(),
        CutRule::Comparable => {
            let reach = d.reachability();
            let mut before = 0;
            let mut prefix = Vec::with_capacity(layers.len());
            for layer in layers {
                prefix.push(before);
                before += layer.len();
            }
            singletons
                .iter()
                .copied()
                .filter(|&l| {
                    let v = layers[l][0];
                    let ancestors = (0..d.n()).filter(|&u| u != v && reach[u].contains(v)).count();
                    let descendants = reach[v].ones().filter(|&w| w != v).count();
                    ancestors == prefix[l] && descendants == d.n() - prefix[l] - 1
                })
                .collect()
        }
    };

    let last = layers.len() - 1;
    let mut bounds: Vec<(usize, usize)> = Vec::new();
    if let (Some(&first_cut), Some(&last_cut)) = (cut_layers.first(), cut_layers.last()) {
        if first_cut > 0 {
            bounds.push((0, first_cut));
        }
        bounds.extend(cut_layers.windows(2).map(|w| (w[0], w[1])));
        if last_cut < last {
            bounds.push((last_cut, last));
        }
    }
    if bounds.is_empty() {
        bounds.push((0, last));
    }

    let segments: Vec<Segment> = bounds
        .iter()
        .map(|&(from, to)| {
            let mut vertices: Vec<usize> = layers[from..=to].iter().flatten().copied().collect();
            vertices.sort_unstable();
            Segment { dag: d.induced(&vertices), vertices }
        })
        .collect();
    let shared = bounds.windows(2).map(|w| layers[w[0].1][0]).collect();
    DecompositionResult {
        segments,
        n_c: singletons.len(),
        cuts: cut_layers.iter().map(|&l| layers[l][0]).collect(),
        shared,
    }
}
