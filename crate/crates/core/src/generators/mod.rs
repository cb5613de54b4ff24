//! Random DAG generators.

pub mod count;
mod erdos_renyi;
mod layered;
mod orders;
pub mod predict;
mod uniform;

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use count::{CountError, CountTable};
pub use erdos_renyi::erdos_renyi;
pub use layered::layer_by_layer;
pub use orders::random_orders;
pub use uniform::{shape_to_dag, shared_sampler, UniformMode, UniformSampler};

use crate::dag::Dag;
use crate::rng::instance_rng;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("number of orders must be at least 1")]
    NoOrders,
    #[error("layer count {k} must be between 1 and n = {n}")]
    InvalidLayerCount { k: usize, n: usize },
    #[error("a DAG needs at least one vertex")]
    EmptyGraph,
    #[error("bound is unbounded at p = 0")]
    Unbounded,
    #[error(transparent)]
    Count(#[from] CountError),
}

/// A generation method with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    ErdosRenyi { p: f64 },
    Uniform { mode: UniformMode },
    RandomOrders { k: usize },
    LayerByLayer { layers: usize, p: f64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ErdosRenyi { .. } => "er",
            Method::Uniform { .. } => "uniform",
            Method::RandomOrders { .. } => "orders",
            Method::LayerByLayer { .. } => "layer",
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), GeneratorError> {
        let probability = |p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(GeneratorError::InvalidProbability(p))
            }
        };
        if n == 0 {
            return Err(GeneratorError::EmptyGraph);
        }
        match *self {
            Method::ErdosRenyi { p } => probability(p),
            Method::Uniform { .. } => {
                if n > count::DEFAULT_CAP {
                    Err(CountError::CapExceeded { n, cap: count::DEFAULT_CAP }.into())
                } else {
                    Ok(())
                }
            }
            Method::RandomOrders { k } => {
                if k == 0 {
                    Err(GeneratorError::NoOrders)
                } else {
                    Ok(())
                }
            }
            Method::LayerByLayer { layers, p } => {
                if layers == 0 || layers > n {
                    Err(GeneratorError::InvalidLayerCount { k: layers, n })
                } else {
                    probability(p)
                }
            }
        }
    }

    /// One DAG on `n` vertices drawn from `rng`.
    pub fn generate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Dag, GeneratorError> {
        self.validate(n)?;
        Ok(match *self {
            Method::ErdosRenyi { p } => erdos_renyi(n, p, rng),
            Method::Uniform { mode } => shared_sampler(n)?.sample(n, mode, rng),
            Method::RandomOrders { k } => random_orders(n, k, rng),
            Method::LayerByLayer { layers, p } => layer_by_layer(n, layers, p, rng),
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::ErdosRenyi { p } => write!(f, "er(p={p})"),
            Method::Uniform { mode: UniformMode::Exact } => write!(f, "uniform"),
            Method::Uniform { mode: UniformMode::PaperFaithful } => write!(f, "uniform(paper)"),
            Method::RandomOrders { k } => write!(f, "orders(K={k})"),
            Method::LayerByLayer { layers, p } => write!(f, "layer(k={layers},p={p})"),
        }
    }
}

/// A method together with the seed that drives it. Instance `i` always
/// uses its own random stream, so instances can be generated in any order
/// or in parallel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub method: Method,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(method: Method, seed: u64) -> GeneratorSpec {
        GeneratorSpec { method, seed }
    }

    pub fn rng(&self, instance: u64) -> ChaCha8Rng {
        instance_rng(self.seed, instance)
    }

    pub fn instance(&self, n: usize, instance: u64) -> Result<Dag, GeneratorError> {
        self.method.generate(n, &mut self.rng(instance))
    }
}

/// Uniformly random DAG on `n` vertices using the shared count table.
pub fn uniform_dag<R: Rng + ?Sized>(
    n: usize,
    mode: UniformMode,
    rng: &mut R,
) -> Result<Dag, GeneratorError> {
    Method::Uniform { mode }.generate(n, rng)
}
