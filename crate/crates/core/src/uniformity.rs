//! Exhaustive catalogs of small DAGs and goodness-of-fit checks for
//! generator output.

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;
use statrs::function::gamma::gamma_ur;
use thiserror::Error;

use crate::dag::Dag;
use crate::generators::{GeneratorError, GeneratorSpec};

pub const ENUMERATION_LIMIT: usize = 5;
pub const CANONICAL_LIMIT: usize = 8;

#[derive(Debug, Error)]
pub enum UniformityError {
    #[error("{what} is limited to n <= {limit}, got n = {n}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

/// Adjacency bitmask with bit `u * n + v` set for every edge `u -> v`.
pub fn adjacency_code(d: &Dag) -> u64 {
    assert!(d.n() <= CANONICAL_LIMIT);
    d.edges().fold(0, |acc, (u, v)| acc | 1 << (u * d.n() + v))
}

/// Smallest adjacency code over all relabelings; equal for two DAGs
/// exactly when they are isomorphic.
pub fn canonical_class(d: &Dag) -> Result<u64, UniformityError> {
    let n = d.n();
    if n > CANONICAL_LIMIT {
        return Err(UniformityError::TooLarge { what: "canonical labeling", n, limit: CANONICAL_LIMIT });
    }
    let edges: Vec<(usize, usize)> = d.edges().collect();
    Ok((0..n)
        .permutations(n)
        .map(|perm| edges.iter().fold(0u64, |acc, &(u, v)| acc | 1 << (perm[u] * n + perm[v])))
        .min()
        .unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoClass {
    pub canonical: u64,
    /// Index of the first labeled DAG of the class in the catalog.
    pub representative: usize,
    /// Number of labelings.
    pub size: usize,
    pub is_reduction: bool,
}

/// Every labeled DAG on `n` vertices grouped into isomorphism classes.
#[derive(Debug, Clone)]
pub struct ClassCatalog {
    pub n: usize,
    /// Labeled DAGs sorted by adjacency code.
    pub labeled: Vec<Dag>,
    pub class_of: Vec<usize>,
    pub classes: Vec<IsoClass>,
    /// Whether each labeled DAG is its own transitive reduction.
    pub tr_flags: Vec<bool>,
    index: HashMap<u64, usize>,
}

/// The four uniformity notions: over labeled DAGs or isomorphism classes,
/// and over all DAGs or transitive reductions only. For the reduced
/// universes a sample is counted through its transitive reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Universe {
    Labeled,
    Classes,
    LabeledReductions,
    ClassReductions,
}

impl Universe {
    pub const ALL: [Universe; 4] =
        [Universe::Labeled, Universe::Classes, Universe::LabeledReductions, Universe::ClassReductions];

    pub fn name(self) -> &'static str {
        match self {
            Universe::Labeled => "labeled",
            Universe::Classes => "classes",
            Universe::LabeledReductions => "labeled-reductions",
            Universe::ClassReductions => "class-reductions",
        }
    }

    fn reduced(self) -> bool {
        matches!(self, Universe::LabeledReductions | Universe::ClassReductions)
    }
}

/// All labeled DAGs on `n` vertices, found by checking every digraph
/// without loops for acyclicity.
pub fn enumerate_labeled_dags(n: usize) -> Result<ClassCatalog, UniformityError> {
    if n == 0 || n > ENUMERATION_LIMIT {
        return Err(UniformityError::TooLarge { what: "enumeration", n, limit: ENUMERATION_LIMIT });
    }
    let pairs: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).filter(|(u, v)| u != v).collect();
    let mut labeled = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut preds = vec![0u32; n];
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                preds[v] |= 1 << u;
            }
        }
        if is_acyclic(&preds) {
            let edges = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e);
            labeled.push(Dag::from_edges_unchecked(n, edges.collect::<Vec<_>>()));
        }
    }
    labeled.sort_by_key(adjacency_code);

    let mut classes: Vec<IsoClass> = Vec::new();
    let mut class_index: HashMap<u64, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(labeled.len());
    let mut tr_flags = Vec::with_capacity(labeled.len());
    for (i, d) in labeled.iter().enumerate() {
        let canonical = canonical_class(d)?;
        let is_reduction = d.transitive_reduction() == *d;
        let c = *class_index.entry(canonical).or_insert_with(|| {
            classes.push(IsoClass { canonical, representative: i, size: 0, is_reduction });
            classes.len() - 1
        });
        classes[c].size += 1;
        class_of.push(c);
        tr_flags.push(is_reduction);
    }
    let index = labeled.iter().enumerate().map(|(i, d)| (adjacency_code(d), i)).collect();
    Ok(ClassCatalog { n, labeled, class_of, classes, tr_flags, index })
}

fn is_acyclic(preds: &[u32]) -> bool {
    let n = preds.len();
    let mut removed = 0u32;
    loop {
        let sources = (0..n)
            .filter(|&v| removed >> v & 1 == 0 && preds[v] & !removed == 0)
            .fold(0u32, |acc, v| acc | 1 << v);
        if sources == 0 {
            return removed.count_ones() as usize == n;
        }
        removed |= sources;
    }
}

impl ClassCatalog {
    pub fn labeled_index(&self, d: &Dag) -> Option<usize> {
        if d.n() != self.n {
            return None;
        }
        self.index.get(&adjacency_code(d)).copied()
    }

    /// Cell labels for `universe`: labeled-DAG indices or class indices.
    pub fn cells(&self, universe: Universe) -> Vec<usize> {
        let keep = |reduction: bool| !universe.reduced() || reduction;
        match universe {
            Universe::Labeled | Universe::LabeledReductions => {
                (0..self.labeled.len()).filter(|&i| keep(self.tr_flags[i])).collect()
            }
            Universe::Classes | Universe::ClassReductions => {
                (0..self.classes.len()).filter(|&c| keep(self.classes[c].is_reduction)).collect()
            }
        }
    }

    /// Position of `d` among `cells(universe)`.
    pub fn cell_of(&self, d: &Dag, universe: Universe) -> Option<usize> {
        self.locate(d, universe, &self.cells(universe))
    }

    fn locate(&self, d: &Dag, universe: Universe, cells: &[usize]) -> Option<usize> {
        let d = if universe.reduced() { d.transitive_reduction() } else { d.clone() };
        let labeled = self.labeled_index(&d)?;
        let target = match universe {
            Universe::Labeled | Universe::LabeledReductions => labeled,
            Universe::Classes | Universe::ClassReductions => self.class_of[labeled],
        };
        cells.binary_search(&target).ok()
    }

    /// Uniform probabilities over the cells of `universe`.
    pub fn uniform(&self, universe: Universe) -> Vec<f64> {
        let k = self.cells(universe).len();
        vec![1.0 / k as f64; k]
    }

    /// Class probabilities induced by a labeled-uniform generator.
    pub fn class_mass_under_labeled_uniform(&self) -> Vec<f64> {
        let total = self.labeled.len() as f64;
        self.classes.iter().map(|c| c.size as f64 / total).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Cells with expected count below 5, where the approximation is poor.
    pub sparse_cells: usize,
}

/// Pearson's goodness-of-fit test of counts against cell probabilities.
/// Cells with probability zero are left out; an observation in such a cell
/// rejects outright.
pub fn chi_square_test(observed: &[u64], expected: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), expected.len());
    let total: u64 = observed.iter().sum();
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut sparse_cells = 0;
    let mut impossible = false;
    for (&o, &p) in observed.iter().zip(expected) {
        if p <= 0.0 {
            impossible |= o > 0;
            continue;
        }
        let e = p * total as f64;
        cells += 1;
        if e < 5.0 {
            sparse_cells += 1;
        }
        statistic += (o as f64 - e).powi(2) / e;
    }
    let df = cells.saturating_sub(1);
    let p_value = if impossible {
        statistic = f64::INFINITY;
        0.0
    } else if df == 0 || statistic == 0.0 {
        1.0
    } else {
        gamma_ur(df as f64 / 2.0, statistic / 2.0)
    };
    ChiSquare { statistic, df, p_value, sparse_cells }
}

/// Per-cell counts of `samples` DAGs drawn from `spec`. Sample `i` uses the
/// instance stream `i`, so the histogram does not depend on how the work is
/// split across threads.
pub fn empirical_class_distribution(
    catalog: &ClassCatalog,
    spec: &GeneratorSpec,
    samples: u64,
    universe: Universe,
) -> Result<Vec<u64>, UniformityError> {
    spec.method.validate(catalog.n)?;
    let cell_ids = catalog.cells(universe);
    let cells = cell_ids.len();
    const CHUNK: u64 = 4096;
    let chunks: Vec<Vec<u64>> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<Vec<u64>, UniformityError> {
            let mut counts = vec![0u64; cells];
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let d = spec.instance(catalog.n, i)?;
                let cell = catalog.locate(&d, universe, &cell_ids).expect("catalog covers every DAG");
                counts[cell] += 1;
            }
            Ok(counts)
        })
        .collect::<Result<_, _>>()?;
    Ok(chunks.into_iter().fold(vec![0; cells], |mut acc, part| {
        acc.iter_mut().zip(part).for_each(|(a, p)| *a += p);
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Method;

    #[test]
    fn two_vertices() {
        let c = enumerate_labeled_dags(2).unwrap();
        assert_eq!((c.labeled.len(), c.classes.len()), (3, 2));
    }

    #[test]
    fn three_vertices() {
        let c = enumerate_labeled_dags(3).unwrap();
        assert_eq!(c.labeled.len(), 25);
        let mut sizes: Vec<usize> = c.classes.iter().map(|k| k.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 3, 6, 6, 6]);
        assert_eq!(c.cells(Universe::LabeledReductions).len(), 19);
        assert_eq!(c.cells(Universe::ClassReductions).len(), 5);
    }

    #[test]
    fn enumeration_limit() {
        assert!(enumerate_labeled_dags(6).is_err());
        assert!(canonical_class(&Dag::empty(9)).is_err());
    }

    #[test]
    fn canonical_ids() {
        let chain = Dag::from_edge_list(3, [(1, 2), (2, 3)]).unwrap();
        let complete = Dag::from_edge_list(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_ne!(canonical_class(&chain).unwrap(), canonical_class(&complete).unwrap());
        let d = Dag::from_edge_list(6, [(1, 4), (2, 4), (4, 5), (3, 6)]).unwrap();
        let relabeled = d.relabel(&[5, 2, 0, 4, 1, 3]);
        assert_eq!(canonical_class(&d).unwrap(), canonical_class(&relabeled).unwrap());
    }

    #[test]
    fn chi_square_examples() {
        let even = chi_square_test(&[10, 10], &[0.5, 0.5]);
        assert_eq!((even.statistic, even.df, even.p_value), (0.0, 1, 1.0));
        let skewed = chi_square_test(&[15, 5], &[0.5, 0.5]);
        assert_eq!(skewed.statistic, 5.0);
        assert!((skewed.p_value - 0.025347).abs() < 1e-5);
        let impossible = chi_square_test(&[3, 1], &[1.0, 0.0]);
        assert_eq!(impossible.p_value, 0.0);
    }

    #[test]
    fn histogram_is_independent_of_chunking() {
        let catalog = enumerate_labeled_dags(3).unwrap();
        let spec = GeneratorSpec::new(Method::ErdosRenyi { p: 0.5 }, 3);
        let a = empirical_class_distribution(&catalog, &spec, 10_000, Universe::Labeled).unwrap();
        let b = empirical_class_distribution(&catalog, &spec, 10_000, Universe::Labeled).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 10_000);
        // Only the 8 upper-triangular DAGs can appear.
        assert_eq!(a.iter().filter(|&&c| c > 0).count(), 8);
    }
}
