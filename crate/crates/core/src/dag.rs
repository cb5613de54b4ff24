//! Labeled directed acyclic graphs and their structural transforms.
//!
//! Vertices are stored 0-based (`0..n`). Text formats and error messages use
//! the 1-based labels `1..=n`.

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Errors raised while validating an edge list.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DagError {
    #[error("a DAG needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
    /// The cycle is reported with 1-based labels, first vertex repeated last.
    #[error("cycle detected: {}", format_cycle(.0))]
    CycleDetected(Vec<usize>),
}

fn format_cycle(cycle: &[usize]) -> String {
    cycle
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// A labeled DAG with both adjacency directions materialized.
///
/// Adjacency lists are kept sorted, so two DAGs compare equal iff they have
/// the same vertex count and edge set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dag")
            .field("n", &self.n())
            .field("edges", &self.edges().map(|(u, v)| (u + 1, v + 1)).collect::<Vec<_>>())
            .finish()
    }
}

impl Dag {
    /// Validates a 0-based edge list.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Dag, DagError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(DagError::Empty);
        }
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(DagError::VertexOutOfRange { vertex: w + 1, n });
                }
            }
            if u == v {
                return Err(DagError::SelfLoop(u + 1));
            }
            succ[u].push(v);
            pred[v].push(u);
        }
        let mut edge_count = 0;
        for (u, list) in succ.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(DagError::DuplicateEdge(u + 1, w[0] + 1));
            }
            edge_count += list.len();
        }
        for list in &mut pred {
            list.sort_unstable();
        }
        let dag = Dag {
            succ,
            pred,
            edge_count,
        };
        if let Some(cycle) = dag.find_cycle() {
            return Err(DagError::CycleDetected(cycle));
        }
        Ok(dag)
    }

    /// Validates a 1-based edge list, the labeling used by every text format.
    pub fn from_edge_list<I>(n: usize, pairs: I) -> Result<Dag, DagError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut shifted = Vec::new();
        for (u, v) in pairs {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(DagError::VertexOutOfRange { vertex: w, n });
                }
            }
            shifted.push((u - 1, v - 1));
        }
        Dag::from_edges(n, shifted)
    }

    /// Builds a DAG from edges the caller guarantees to be valid (in range,
    /// loop-free, duplicate-free and acyclic).
    pub(crate) fn from_edges_unchecked<I>(n: usize, edges: I) -> Dag
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            succ[u].push(v);
            pred[v].push(u);
            edge_count += 1;
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
        }
        let dag = Dag {
            succ,
            pred,
            edge_count,
        };
        debug_assert!(dag.find_cycle().is_none());
        debug_assert!(dag.succ.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        dag
    }

    /// The DAG on `n` vertices without edges.
    pub fn empty(n: usize) -> Dag {
        assert!(n > 0, "a DAG needs at least one vertex");
        Dag::from_edges_unchecked(n, std::iter::empty())
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.succ[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.pred[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    /// All edges, 0-based, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    /// Kahn's algorithm; ties resolved by smallest vertex index.
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.n();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_degree(v)).collect();
        let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
            .filter(|&v| indeg[v] == 0)
            .map(std::cmp::Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(u)) = heap.pop() {
            order.push(u);
            for &v in &self.succ[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    heap.push(std::cmp::Reverse(v));
                }
            }
        }
        debug_assert_eq!(order.len(), n);
        order
    }

    fn find_cycle(&self) -> Option<Vec<usize>> {
        // Iterative DFS with three colors; the gray stack is the current path.
        let n = self.n();
        let mut color = vec![0u8; n];
        let mut on_path: Vec<usize> = Vec::new();
        let mut cursor: Vec<usize> = Vec::new();
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            color[root] = 1;
            on_path.push(root);
            cursor.push(0);
            while let Some(&u) = on_path.last() {
                let i = cursor.last_mut().unwrap();
                if let Some(&v) = self.succ[u].get(*i) {
                    *i += 1;
                    match color[v] {
                        0 => {
                            color[v] = 1;
                            on_path.push(v);
                            cursor.push(0);
                        }
                        1 => {
                            let start = on_path.iter().position(|&w| w == v).unwrap();
                            let mut cycle: Vec<usize> =
                                on_path[start..].iter().map(|&w| w + 1).collect();
                            cycle.push(v + 1);
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    color[u] = 2;
                    on_path.pop();
                    cursor.pop();
                }
            }
        }
        None
    }

    /// The DAG with every edge flipped.
    pub fn reversal(&self) -> Dag {
        Dag {
            succ: self.pred.clone(),
            pred: self.succ.clone(),
            edge_count: self.edge_count,
        }
    }

    /// Strict descendant sets: bit `v` of row `u` is set iff a nonempty path
    /// `u ⇝ v` exists.
    pub fn reachability(&self) -> Vec<FixedBitSet> {
        let n = self.n();
        let mut reach = vec![FixedBitSet::with_capacity(n); n];
        for &u in self.topological_order().iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            for &v in &self.succ[u] {
                row.insert(v);
                row.union_with(&reach[v]);
            }
            reach[u] = row;
        }
        reach
    }

    pub fn transitive_closure(&self) -> Dag {
        let reach = self.reachability();
        Dag::from_edges_unchecked(
            self.n(),
            reach
                .iter()
                .enumerate()
                .flat_map(|(u, row)| row.ones().map(move |v| (u, v))),
        )
    }

    /// The unique minimal DAG with the same reachability relation.
    ///
    /// Successors of `u` are scanned in topological order while accumulating
    /// everything reachable from the successors already seen; an edge `u -> v`
    /// is redundant iff `v` is already covered.
    pub fn transitive_reduction(&self) -> Dag {
        let n = self.n();
        let order = self.topological_order();
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let reach = self.reachability();
        let mut kept = Vec::with_capacity(self.edge_count);
        let mut covered = FixedBitSet::with_capacity(n);
        let mut by_position = Vec::new();
        for u in 0..n {
            covered.clear();
            by_position.clear();
            by_position.extend_from_slice(&self.succ[u]);
            by_position.sort_unstable_by_key(|&v| position[v]);
            for &v in &by_position {
                if !covered.contains(v) {
                    kept.push((u, v));
                    covered.union_with(&reach[v]);
                }
            }
        }
        Dag::from_edges_unchecked(n, kept)
    }

    /// Depth of each vertex: 1 for sources, else 1 + max depth of predecessors.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![1; self.n()];
        for u in self.topological_order() {
            for &v in &self.succ[u] {
                depth[v] = depth[v].max(depth[u] + 1);
            }
        }
        depth
    }

    pub fn shape_decomposition(&self) -> ShapeDecomposition {
        ShapeDecomposition::from_depths(self.depths())
    }

    /// Length of the longest path, counted in vertices.
    pub fn length(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Dag {
        assert_eq!(perm.len(), self.n());
        Dag::from_edges_unchecked(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Sub-DAG induced by `vertices`; vertex `i` of the result is
    /// `vertices[i]` of `self`.
    pub fn induced(&self, vertices: &[usize]) -> Dag {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = vertices.iter().enumerate().flat_map(|(i, &u)| {
            let index = &index;
            self.succ[u]
                .iter()
                .filter(move |&&v| index[v] != usize::MAX)
                .map(move |&v| (i, index[v]))
        });
        Dag::from_edges_unchecked(vertices.len(), edges.collect::<Vec<_>>())
    }

    /// Disjoint union, `other`'s vertices shifted after `self`'s.
    pub fn disjoint_union(&self, other: &Dag) -> Dag {
        let shift = self.n();
        Dag::from_edges_unchecked(
            self.n() + other.n(),
            self.edges()
                .chain(other.edges().map(|(u, v)| (u + shift, v + shift))),
        )
    }
}

/// Partition of the vertices by depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeDecomposition {
    layers: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl ShapeDecomposition {
    /// `depths[v]` is the 1-based depth of vertex `v`.
    pub fn from_depths(depths: Vec<usize>) -> ShapeDecomposition {
        let k = depths.iter().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); k];
        for (v, &d) in depths.iter().enumerate() {
            layers[d - 1].push(v);
        }
        debug_assert!(layers.iter().all(|l| !l.is_empty()));
        ShapeDecomposition {
            layers,
            depth: depths,
        }
    }

    /// Layers `X_1..X_k`, each sorted by vertex index.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn shape(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// Number of layers, i.e. the DAG length.
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn n(&self) -> usize {
        self.depth.len()
    }
}
