//! Random DAG generation, structural metrics and list scheduling.

pub mod dag;
pub mod experiment;
pub mod generators;
pub mod io;
pub mod matching;
pub mod metrics;
pub mod rng;
pub mod scheduler;
pub mod special;
pub mod stats;
pub mod uniformity;

pub use dag::{Dag, DagError, ShapeDecomposition};
pub use generators::{GeneratorSpec, Method, UniformMode};
pub use metrics::{measure_all, width, DagProperties, EdgeProperties};
pub use special::{build_special, oracle_properties, SpecialKind};
