//! Deterministic special DAGs and their exact property values.
//!
//! Every constructor labels vertices layer-major, left to right, so the
//! output is byte-stable across runs.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dag::Dag;
use crate::metrics::{DagProperties, EdgeProperties};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecialKind {
    Empty,
    Complete,
    Chain,
    OutTree,
    InTree,
    Comb,
    CombReversed,
    Bipartite,
    Square,
    Triangular,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecialError {
    #[error("{kind} DAG is not defined for n = {n}; nearest admissible size is {nearest}")]
    InadmissibleSize {
        kind: SpecialKind,
        n: usize,
        nearest: usize,
    },
    #[error("unknown special DAG kind `{0}`")]
    UnknownKind(String),
}

impl SpecialKind {
    pub const ALL: [SpecialKind; 10] = [
        SpecialKind::Empty,
        SpecialKind::Complete,
        SpecialKind::Chain,
        SpecialKind::OutTree,
        SpecialKind::InTree,
        SpecialKind::Comb,
        SpecialKind::CombReversed,
        SpecialKind::Bipartite,
        SpecialKind::Square,
        SpecialKind::Triangular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialKind::Empty => "empty",
            SpecialKind::Complete => "complete",
            SpecialKind::Chain => "chain",
            SpecialKind::OutTree => "out-tree",
            SpecialKind::InTree => "in-tree",
            SpecialKind::Comb => "comb",
            SpecialKind::CombReversed => "comb-reversed",
            SpecialKind::Bipartite => "bipartite",
            SpecialKind::Square => "square",
            SpecialKind::Triangular => "triangular",
        }
    }

    pub fn is_admissible(self, n: usize) -> bool {
        n >= 1
            && match self {
                SpecialKind::Empty | SpecialKind::Complete | SpecialKind::Chain => true,
                SpecialKind::OutTree | SpecialKind::InTree => (n + 1).is_power_of_two(),
                SpecialKind::Comb | SpecialKind::CombReversed => n % 2 == 1,
                SpecialKind::Bipartite => n.is_multiple_of(2),
                SpecialKind::Square => isqrt(n).pow(2) == n,
                SpecialKind::Triangular => triangular_side(n).is_some(),
            }
    }

    /// Closest admissible size, preferring the smaller one on ties.
    pub fn nearest_admissible(self, n: usize) -> usize {
        let above = (n.max(1)..).find(|&c| self.is_admissible(c)).unwrap();
        match (1..=n).rev().find(|&c| self.is_admissible(c)) {
            Some(below) if n - below <= above - n => below,
            _ => above,
        }
    }

    /// Admissible sizes in `1..=limit`.
    pub fn admissible_sizes(self, limit: usize) -> impl Iterator<Item = usize> {
        (1..=limit).filter(move |&n| self.is_admissible(n))
    }
}

impl fmt::Display for SpecialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpecialKind {
    type Err = SpecialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpecialKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SpecialError::UnknownKind(s.to_string()))
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `k` such that `n = k(k+1)/2`.
fn triangular_side(n: usize) -> Option<usize> {
    let k = (isqrt(8 * n + 1) - 1) / 2;
    (k * (k + 1) / 2 == n).then_some(k)
}

fn check(kind: SpecialKind, n: usize) -> Result<(), SpecialError> {
    if kind.is_admissible(n) {
        Ok(())
    } else {
        Err(SpecialError::InadmissibleSize {
            kind,
            n,
            nearest: kind.nearest_admissible(n),
        })
    }
}

/// Complete connections between consecutive layers of the given sizes.
fn layered(sizes: &[usize]) -> Dag {
    let n = sizes.iter().sum();
    let mut edges = Vec::new();
    let mut start = 0;
    for pair in sizes.windows(2) {
        let next = start + pair[0];
        for u in start..next {
            for v in next..next + pair[1] {
                edges.push((u, v));
            }
        }
        start = next;
    }
    Dag::from_edges_unchecked(n, edges)
}

fn comb(n: usize) -> Dag {
    let spine = n.div_ceil(2);
    // Layer j >= 2 holds spine vertex j then the leaf hanging off spine j - 1.
    let spine_label = |j: usize| if j == 1 { 0 } else { 2 * j - 3 };
    let mut edges = Vec::new();
    for j in 2..=spine {
        edges.push((spine_label(j - 1), spine_label(j)));
        edges.push((spine_label(j - 1), spine_label(j) + 1));
    }
    Dag::from_edges_unchecked(n, edges)
}

pub fn build_special(kind: SpecialKind, n: usize) -> Result<Dag, SpecialError> {
    check(kind, n)?;
    Ok(match kind {
        SpecialKind::Empty => Dag::empty(n),
        SpecialKind::Complete => {
            Dag::from_edges_unchecked(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        }
        SpecialKind::Chain => Dag::from_edges_unchecked(n, (1..n).map(|i| (i - 1, i))),
        SpecialKind::OutTree => {
            Dag::from_edges_unchecked(n, (1..n).map(|child| ((child - 1) / 2, child)))
        }
        SpecialKind::InTree => build_special(SpecialKind::OutTree, n)?.reversal(),
        SpecialKind::Comb => comb(n),
        SpecialKind::CombReversed => comb(n).reversal(),
        SpecialKind::Bipartite => layered(&[n / 2, n / 2]),
        SpecialKind::Square => {
            let s = isqrt(n);
            layered(&vec![s; s])
        }
        SpecialKind::Triangular => {
            let k = triangular_side(n).unwrap();
            layered(&(1..=k).collect::<Vec<_>>())
        }
    })
}

fn edge_row(
    m: usize,
    (deg_max, deg_in_max, deg_out_max, deg_min): (usize, usize, usize, usize),
    deg_mean: f64,
    (deg_var, deg_in_var, deg_out_var): (f64, f64, f64),
) -> EdgeProperties {
    EdgeProperties {
        m,
        deg_max,
        deg_in_max,
        deg_out_max,
        deg_min,
        deg_mean,
        deg_sd: deg_var.sqrt(),
        deg_in_sd: deg_in_var.sqrt(),
        deg_out_sd: deg_out_var.sqrt(),
    }
}

fn swap_directions(e: EdgeProperties) -> EdgeProperties {
    EdgeProperties {
        deg_in_max: e.deg_out_max,
        deg_out_max: e.deg_in_max,
        deg_in_sd: e.deg_out_sd,
        deg_out_sd: e.deg_in_sd,
        ..e
    }
}

/// Closed-form edge properties.
fn edge_oracle(kind: SpecialKind, n: usize) -> EdgeProperties {
    let nf = n as f64;
    let empty = edge_row(0, (0, 0, 0, 0), 0.0, (0.0, 0.0, 0.0));
    if n == 1 {
        return empty;
    }
    match kind {
        SpecialKind::Empty => empty,
        SpecialKind::Complete => {
            let spread = (nf * nf - 1.0) / 12.0;
            edge_row(
                n * (n - 1) / 2,
                (n - 1, n - 1, n - 1, n - 1),
                nf - 1.0,
                (0.0, spread, spread),
            )
        }
        SpecialKind::Chain => {
            let one_sided = (1.0 - 1.0 / nf) / nf;
            edge_row(
                n - 1,
                (if n == 2 { 1 } else { 2 }, 1, 1, 1),
                2.0 * (1.0 - 1.0 / nf),
                (2.0 / nf * (1.0 - 2.0 / nf), one_sided, one_sided),
            )
        }
        // Out-tree and comb share the degree multiset {2, 3^(t-2), 1^t}.
        SpecialKind::OutTree | SpecialKind::Comb => edge_row(
            n - 1,
            (if n == 3 { 2 } else { 3 }, 1, 2, 1),
            2.0 * (1.0 - 1.0 / nf),
            (
                1.0 - 1.0 / nf - 4.0 / (nf * nf),
                (1.0 - 1.0 / nf) / nf,
                (nf * nf - 1.0) / (nf * nf),
            ),
        ),
        SpecialKind::InTree => swap_directions(edge_oracle(SpecialKind::OutTree, n)),
        SpecialKind::CombReversed => swap_directions(edge_oracle(SpecialKind::Comb, n)),
        SpecialKind::Bipartite => {
            let half = n / 2;
            let quarter_sq = nf * nf / 16.0;
            edge_row(
                half * half,
                (half, half, half, half),
                nf / 2.0,
                (0.0, quarter_sq, quarter_sq),
            )
        }
        SpecialKind::Square => {
            let s = isqrt(n);
            let sf = s as f64;
            edge_row(
                n * (s - 1),
                (if s == 2 { 2 } else { 2 * s }, s, s, s),
                2.0 * (sf - 1.0),
                (2.0 * sf - 4.0, sf - 1.0, sf - 1.0),
            )
        }
        SpecialKind::Triangular => {
            let k = triangular_side(n).unwrap();
            let kf = k as f64;
            edge_row(
                k * (k + 1) * (k - 1) / 3,
                (2 * (k - 1), k - 1, k, 2.min(k - 1)),
                4.0 / 3.0 * (kf - 1.0),
                (
                    2.0 * (kf - 1.0).powi(2) / 9.0,
                    (kf - 1.0) * (kf + 2.0) / 18.0,
                    (kf - 1.0) * (kf + 14.0) / 18.0,
                ),
            )
        }
    }
}

/// Exact property values of a special DAG from closed-form expressions.
///
/// Nothing is measured on a constructed graph; the formulas are checked
/// against [`crate::metrics::measure_all`] in the test suite.
pub fn oracle_properties(kind: SpecialKind, n: usize) -> Result<DagProperties, SpecialError> {
    check(kind, n)?;
    let nf = n as f64;
    let edges = edge_oracle(kind, n);
    let edges_tr = match kind {
        SpecialKind::Complete => edge_oracle(SpecialKind::Chain, n),
        _ => edges,
    };

    // (len, width, sh_max, sh_min, sh_mean, sh_var, sh_first, sh_last, mass_abs, run_max)
    struct Vertex(usize, usize, usize, usize, f64, f64, usize, usize, usize, usize);
    let v = match kind {
        _ if n == 1 => Vertex(1, 1, 1, 1, 1.0, 0.0, 1, 1, 0, 0),
        SpecialKind::Empty => Vertex(1, n, n, n, nf, 0.0, n, n, n, 1),
        SpecialKind::Complete | SpecialKind::Chain => Vertex(n, 1, 1, 1, 1.0, 0.0, 1, 1, 0, 0),
        SpecialKind::OutTree | SpecialKind::InTree => {
            let h = (n + 1).trailing_zeros() as usize;
            let mean = nf / h as f64;
            let leaves = n.div_ceil(2);
            let (first, last) = if kind == SpecialKind::OutTree {
                (1, leaves)
            } else {
                (leaves, 1)
            };
            let var = mean * ((nf + 2.0) / 3.0 - mean);
            Vertex(h, leaves, leaves, 1, mean, var, first, last, n - 1, h - 1)
        }
        SpecialKind::Comb => {
            let t = n.div_ceil(2);
            let q = nf + 1.0;
            let var = 2.0 / q * (1.0 - 2.0 / q);
            Vertex(t, t, 2, 1, 2.0 * (1.0 - 1.0 / q), var, 1, 2, n - 1, t - 1)
        }
        SpecialKind::CombReversed => {
            let t = n.div_ceil(2);
            let sd = (nf - 1.0) / (nf + 1.0) * ((nf - 1.0) / 2.0).sqrt();
            let mean = 2.0 * (1.0 - 1.0 / (nf + 1.0));
            Vertex(t, t, t, 1, mean, sd * sd, t, 1, t, 1)
        }
        SpecialKind::Bipartite => {
            let half = n / 2;
            let mass_abs = if n == 2 { 0 } else { n };
            Vertex(2, half, half, half, nf / 2.0, 0.0, half, half, mass_abs, 2 * usize::from(n > 2))
        }
        SpecialKind::Square => {
            let s = isqrt(n);
            Vertex(s, s, s, s, s as f64, 0.0, s, s, n, s)
        }
        SpecialKind::Triangular => {
            let k = triangular_side(n).unwrap();
            let kf = k as f64;
            Vertex(k, k, k, 1, (kf + 1.0) / 2.0, (kf * kf - 1.0) / 12.0, 1, k, n - 1, k - 1)
        }
    };
    Ok(DagProperties {
        n,
        edges,
        edges_tr,
        len: v.0,
        width: v.1,
        sh_max: v.2,
        sh_min: v.3,
        sh_mean: v.4,
        sh_sd: v.5.sqrt(),
        sh_first: v.6,
        sh_last: v.7,
        mass_abs: v.8,
        mass: v.8 as f64 / nf,
        nonsingleton_run_max: v.9,
    })
}
