//! Closed-form expectations and bounds for the random generators.

use super::GeneratorError;

/// Upper bound on the expected layer size of an Erdős–Rényi DAG, `1/p`.
pub fn er_mean_shape_bound(p: f64) -> Result<f64, GeneratorError> {
    if p == 0.0 {
        Err(GeneratorError::Unbounded)
    } else {
        Ok(1.0 / p)
    }
}

/// Upper bound on the expected transitive-reduction edge count of an
/// Erdős–Rényi DAG: `(n-1)/p - ((1-p^2)/p^3)(1 - (1-p^2)^(n-1))`.
/// At `p = 0` the graph is empty and the bound is 0.
pub fn er_tr_edges_bound(n: usize, p: f64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    let q = 1.0 - p * p;
    let n1 = n.saturating_sub(1) as f64;
    n1 / p - q / p.powi(3) * (1.0 - q.powf(n1))
}

/// Expected edge count of an Erdős–Rényi DAG, `p n(n-1)/2`.
pub fn er_expected_edges(n: usize, p: f64) -> f64 {
    p * (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Expected edge count of the layer-by-layer DAG in the regular model with
/// `n/k` vertices per layer: `n(1 - 1/k)(p(n/2 - 1) + 1)`.
pub fn layer_expected_edges(n: usize, k: usize, p: f64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    n * (1.0 - 1.0 / k) * (p * (n / 2.0 - 1.0) + 1.0)
}

/// Lower bound on the expected transitive-reduction edge count of the
/// layer-by-layer DAG in the regular model:
/// `p(k-1)(n/k)^2 + (1-p)n(1 - 1/k)`.
pub fn layer_tr_edges_bound(n: usize, k: usize, p: f64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    p * (k - 1.0) * (n / k).powi(2) + (1.0 - p) * n * (1.0 - 1.0 / k)
}
