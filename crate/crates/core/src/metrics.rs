//! The DAG property catalog: degree statistics, shape statistics, width and
//! mass.

use crate::dag::{Dag, ShapeDecomposition};
use crate::matching::{hopcroft_karp, matching_size};

/// Size of the largest antichain.
///
/// By Dilworth's theorem this equals the minimum number of chains covering
/// the order, which is `n` minus a maximum matching in the bipartite graph
/// `u -> v` for every comparable pair `u < v`.
pub fn width(d: &Dag) -> usize {
    let adj: Vec<Vec<usize>> = d
        .reachability()
        .into_iter()
        .map(|row| row.ones().collect())
        .collect();
    d.n() - matching_size(&hopcroft_karp(&adj, d.n()))
}

/// A maximal run of non-singleton layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// 0-based index of the first layer of the run.
    pub first_layer: usize,
    /// Number of layers in the run.
    pub layer_count: usize,
    pub vertices: Vec<usize>,
}

impl Block {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport {
    /// Vertices forming singleton layers, in layer order.
    pub bottlenecks: Vec<usize>,
    pub blocks: Vec<Block>,
    /// Largest block size, 0 when every layer is a singleton.
    pub mass_abs: usize,
    /// `mass_abs / n`.
    pub mass: f64,
    /// Longest run of consecutive non-singleton layers.
    pub nonsingleton_run_max: usize,
}

impl BlockReport {
    pub fn bottleneck_count(&self) -> usize {
        self.bottlenecks.len()
    }
}

/// Splits the shape at its singleton layers.
///
/// A block is the union of the layers strictly between two consecutive
/// boundaries, where boundaries are the singleton layers plus the virtual
/// layers before the first and after the last one. Bottleneck vertices are
/// never part of a block.
pub fn mass_and_blocks(sd: &ShapeDecomposition) -> BlockReport {
    let layers = sd.layers();
    let mut bottlenecks = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();
    let mut open: Option<Block> = None;
    for (i, layer) in layers.iter().enumerate() {
        if layer.len() == 1 {
            bottlenecks.push(layer[0]);
            blocks.extend(open.take());
        } else {
            let block = open.get_or_insert_with(|| Block {
                first_layer: i,
                layer_count: 0,
                vertices: Vec::new(),
            });
            block.layer_count += 1;
            block.vertices.extend_from_slice(layer);
        }
    }
    blocks.extend(open);
    let mass_abs = blocks.iter().map(Block::size).max().unwrap_or(0);
    let nonsingleton_run_max = blocks.iter().map(|b| b.layer_count).max().unwrap_or(0);
    BlockReport {
        bottlenecks,
        blocks,
        mass_abs,
        mass: mass_abs as f64 / sd.n() as f64,
        nonsingleton_run_max,
    }
}

/// Summary of an integer sample: extremes, mean and population standard
/// deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub max: usize,
    pub min: usize,
    pub mean: f64,
    pub sd: f64,
}

impl Summary {
    pub fn of(values: &[usize]) -> Summary {
        let n = values.len() as u128;
        let sum: u128 = values.iter().map(|&v| v as u128).sum();
        let sum_sq: u128 = values.iter().map(|&v| (v as u128) * (v as u128)).sum();
        // n² · variance, exact in integers.
        let scaled_var = n * sum_sq - sum * sum;
        Summary {
            max: values.iter().copied().max().unwrap_or(0),
            min: values.iter().copied().min().unwrap_or(0),
            mean: sum as f64 / n as f64,
            sd: (scaled_var as f64).sqrt() / n as f64,
        }
    }
}

/// Edge-related properties; measured on a DAG and on its transitive
/// reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeProperties {
    pub m: usize,
    pub deg_max: usize,
    pub deg_in_max: usize,
    pub deg_out_max: usize,
    pub deg_min: usize,
    pub deg_mean: f64,
    pub deg_sd: f64,
    pub deg_in_sd: f64,
    pub deg_out_sd: f64,
}

impl EdgeProperties {
    pub fn measure(d: &Dag) -> EdgeProperties {
        let n = d.n();
        let ins: Vec<usize> = (0..n).map(|v| d.in_degree(v)).collect();
        let outs: Vec<usize> = (0..n).map(|v| d.out_degree(v)).collect();
        let total: Vec<usize> = ins.iter().zip(&outs).map(|(a, b)| a + b).collect();
        let (deg, deg_in, deg_out) = (Summary::of(&total), Summary::of(&ins), Summary::of(&outs));
        EdgeProperties {
            m: d.m(),
            deg_max: deg.max,
            deg_in_max: deg_in.max,
            deg_out_max: deg_out.max,
            deg_min: deg.min,
            deg_mean: deg.mean,
            deg_sd: deg.sd,
            deg_in_sd: deg_in.sd,
            deg_out_sd: deg_out.sd,
        }
    }
}

/// The full property set of a DAG.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DagProperties {
    pub n: usize,
    pub edges: EdgeProperties,
    /// The same edge properties on the transitive reduction.
    pub edges_tr: EdgeProperties,
    pub len: usize,
    pub width: usize,
    pub sh_max: usize,
    pub sh_min: usize,
    pub sh_mean: f64,
    pub sh_sd: f64,
    pub sh_first: usize,
    pub sh_last: usize,
    pub mass_abs: usize,
    pub mass: f64,
    pub nonsingleton_run_max: usize,
}

impl DagProperties {
    pub fn m(&self) -> usize {
        self.edges.m
    }

    pub fn m_tr(&self) -> usize {
        self.edges_tr.m
    }

    /// Column names matching [`DagProperties::csv_values`].
    pub const CSV_COLUMNS: [&'static str; 30] = [
        "n",
        "m",
        "deg_max",
        "deg_in_max",
        "deg_out_max",
        "deg_min",
        "deg_mean",
        "deg_sd",
        "deg_in_sd",
        "deg_out_sd",
        "m_tr",
        "deg_max_tr",
        "deg_in_max_tr",
        "deg_out_max_tr",
        "deg_min_tr",
        "deg_mean_tr",
        "deg_sd_tr",
        "deg_in_sd_tr",
        "deg_out_sd_tr",
        "len",
        "width",
        "sh_max",
        "sh_min",
        "sh_mean",
        "sh_sd",
        "sh_first",
        "sh_last",
        "mass_abs",
        "mass",
        "nonsingleton_run_max",
    ];

    pub fn csv_values(&self) -> Vec<String> {
        fn edge_cols(e: &EdgeProperties) -> [String; 9] {
            [
                e.m.to_string(),
                e.deg_max.to_string(),
                e.deg_in_max.to_string(),
                e.deg_out_max.to_string(),
                e.deg_min.to_string(),
                e.deg_mean.to_string(),
                e.deg_sd.to_string(),
                e.deg_in_sd.to_string(),
                e.deg_out_sd.to_string(),
            ]
        }
        let mut row = vec![self.n.to_string()];
        row.extend(edge_cols(&self.edges));
        row.extend(edge_cols(&self.edges_tr));
        row.extend([
            self.len.to_string(),
            self.width.to_string(),
            self.sh_max.to_string(),
            self.sh_min.to_string(),
            self.sh_mean.to_string(),
            self.sh_sd.to_string(),
            self.sh_first.to_string(),
            self.sh_last.to_string(),
            self.mass_abs.to_string(),
            self.mass.to_string(),
            self.nonsingleton_run_max.to_string(),
        ]);
        row
    }
}

/// Measures every property of `d`.
///
/// Vertex-related properties depend only on reachability, so they are
/// identical on `d` and on its transitive reduction.
pub fn measure_all(d: &Dag) -> DagProperties {
    let tr = d.transitive_reduction();
    let sd = d.shape_decomposition();
    debug_assert_eq!(sd, tr.shape_decomposition());
    let shape = sd.shape();
    let sh = Summary::of(&shape);
    let blocks = mass_and_blocks(&sd);
    DagProperties {
        n: d.n(),
        edges: EdgeProperties::measure(d),
        edges_tr: EdgeProperties::measure(&tr),
        len: shape.len(),
        width: width(&tr),
        sh_max: sh.max,
        sh_min: sh.min,
        sh_mean: sh.mean,
        sh_sd: sh.sd,
        sh_first: shape[0],
        sh_last: *shape.last().unwrap(),
        mass_abs: blocks.mass_abs,
        mass: blocks.mass,
        nonsingleton_run_max: blocks.nonsingleton_run_max,
    }
}
