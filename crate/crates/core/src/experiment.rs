//! Experiment presets and custom parameter grids, written as CSV.
//!
//! Instance `i` of a run draws everything, including randomized
//! parameters, from its own stream `instance_rng(seed, i)`. Instances are
//! processed in parallel chunks and written in index order, so the output
//! does not depend on the thread count.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::dag::Dag;
use crate::generators::{GeneratorError, Method, UniformMode};
use crate::metrics::{measure_all, DagProperties};
use crate::rng::instance_rng;
use crate::scheduler::{Heuristic, TiePolicy};
use crate::special::{build_special, SpecialError, SpecialKind};

pub const SCHEMA_VERSION: u32 = 1;

/// Heuristics compared by the scheduling presets.
pub const HEURISTICS: [Heuristic; 3] =
    [Heuristic::Heft, Heuristic::Hcpt, Heuristic::MinMin(TiePolicy::LowestId)];
pub const FIG2_PROCESSORS: std::ops::RangeInclusive<usize> = 1..=128;
pub const FIG11_PROCESSORS: [usize; 4] = [2, 4, 8, 16];

const CHUNK: usize = 64;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Table1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
}

impl Preset {
    pub const ALL: [Preset; 11] = [
        Preset::Table1,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
        Preset::Fig9,
        Preset::Fig10,
        Preset::Fig11,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1 => "table1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
            Preset::Fig10 => "fig10",
            Preset::Fig11 => "fig11",
        }
    }

    pub fn is_scheduling(self) -> bool {
        matches!(self, Preset::Fig2 | Preset::Fig11)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Preset, ExperimentError> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ExperimentError::UnknownPreset(s.to_string()))
    }
}

/// Cartesian product of methods and sizes, each combination repeated.
/// With processor counts the rows are schedules, otherwise properties.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub methods: Vec<Method>,
    pub sizes: Vec<usize>,
    pub replications: usize,
    pub processors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Preset(Preset),
    Grid(Grid),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub plan: Plan,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn preset(preset: Preset, seed: u64) -> ExperimentSpec {
        ExperimentSpec { plan: Plan::Preset(preset), seed }
    }

    pub fn name(&self) -> &'static str {
        match &self.plan {
            Plan::Preset(p) => p.name(),
            Plan::Grid(_) => "grid",
        }
    }

    fn scheduling(&self) -> bool {
        match &self.plan {
            Plan::Preset(p) => p.is_scheduling(),
            Plan::Grid(g) => !g.processors.is_empty(),
        }
    }

    /// Parses `key = value` lines; `#` starts a comment. Either `preset`
    /// or `method` must be given. Lists are comma separated and integer
    /// ranges are written `a..b` (inclusive) or `a..b:step`.
    ///
    /// Keys: preset, seed, method (er, uniform, orders, layer), n, p, K,
    /// layers, mode (exact, paper), replications, procs.
    pub fn from_config(text: &str) -> Result<ExperimentSpec, ExperimentError> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_error(i + 1, format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim().to_string();
            if entries.iter().any(|e| e.1 == key) {
                return Err(config_error(i + 1, format!("`{key}` given twice")));
            }
            entries.push((i + 1, key, value.trim().to_string()));
        }
        let get = |key: &str| entries.iter().find(|e| e.1 == key).map(|e| (e.0, e.2.as_str()));
        const KEYS: [&str; 10] =
            ["preset", "seed", "method", "n", "p", "K", "layers", "mode", "replications", "procs"];
        if let Some((line, key, _)) = entries.iter().find(|e| !KEYS.contains(&e.1.as_str())) {
            return Err(config_error(*line, format!("unknown key `{key}`")));
        }

        let seed = match get("seed") {
            Some((line, v)) => parse_one(line, v)?,
            None => 1,
        };
        if let Some((line, name)) = get("preset") {
            if let Some((other, key, _)) = entries.iter().find(|e| !["preset", "seed"].contains(&e.1.as_str())) {
                return Err(config_error(*other, format!("`{key}` cannot be combined with a preset (line {line})")));
            }
            return Ok(ExperimentSpec::preset(name.parse()?, seed));
        }

        let (method_line, method) =
            get("method").ok_or_else(|| config_error(1, "either `preset` or `method` is required"))?;
        let list_f64 = |key: &str| -> Result<Option<Vec<f64>>, ExperimentError> {
            get(key).map(|(line, v)| parse_list(line, v, |s| parse_one(line, s))).transpose()
        };
        let list_usize = |key: &str| -> Result<Option<Vec<usize>>, ExperimentError> {
            get(key).map(|(line, v)| parse_ranges(line, v)).transpose()
        };
        fn required<T>(values: Option<Vec<T>>, line: usize, method: &str, key: &str) -> Result<Vec<T>, ExperimentError> {
            values.ok_or_else(|| config_error(line, format!("method `{method}` needs `{key}`")))
        }
        let methods: Vec<Method> = match method {
            "er" => required(list_f64("p")?, method_line, method, "p")?.into_iter().map(|p| Method::ErdosRenyi { p }).collect(),
            "uniform" => {
                let mode = match get("mode") {
                    None | Some((_, "exact")) => UniformMode::Exact,
                    Some((_, "paper")) => UniformMode::PaperFaithful,
                    Some((line, other)) => return Err(config_error(line, format!("unknown mode `{other}`"))),
                };
                vec![Method::Uniform { mode }]
            }
            "orders" => required(list_usize("K")?, method_line, method, "K")?.into_iter().map(|k| Method::RandomOrders { k }).collect(),
            "layer" => {
                let layers = required(list_usize("layers")?, method_line, method, "layers")?;
                let ps = required(list_f64("p")?, method_line, method, "p")?;
                layers
                    .iter()
                    .flat_map(|&layers| ps.iter().map(move |&p| Method::LayerByLayer { layers, p }))
                    .collect()
            }
            other => return Err(config_error(method_line, format!("unknown method `{other}`"))),
        };
        let (n_line, _) = get("n").ok_or_else(|| config_error(method_line, "`n` is required"))?;
        let sizes = list_usize("n")?.unwrap_or_default();
        for &n in &sizes {
            for m in &methods {
                m.validate(n).map_err(|e| config_error(n_line, format!("n = {n}: {e}")))?;
            }
        }
        let replications = match get("replications") {
            Some((line, v)) => parse_one(line, v)?,
            None => 1,
        };
        let processors = list_usize("procs")?.unwrap_or_default();
        if let Some((line, _)) = get("procs").filter(|_| processors.contains(&0)) {
            return Err(config_error(line, "processor counts must be positive"));
        }
        Ok(ExperimentSpec { plan: Plan::Grid(Grid { methods, sizes, replications, processors }), seed })
    }
}

fn config_error(line: usize, message: impl Into<String>) -> ExperimentError {
    ExperimentError::Config { line, message: message.into() }
}

fn parse_one<T: FromStr>(line: usize, value: &str) -> Result<T, ExperimentError> {
    value.trim().parse().map_err(|_| config_error(line, format!("cannot parse `{}`", value.trim())))
}

fn parse_list<T>(
    line: usize,
    value: &str,
    item: impl Fn(&str) -> Result<T, ExperimentError>,
) -> Result<Vec<T>, ExperimentError> {
    let items: Vec<T> = value.split(',').map(|s| item(s.trim())).collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(config_error(line, "empty list"));
    }
    Ok(items)
}

fn parse_ranges(line: usize, value: &str) -> Result<Vec<usize>, ExperimentError> {
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim) {
        match part.split_once("..") {
            None => out.push(parse_one(line, part)?),
            Some((a, rest)) => {
                let (b, step) = match rest.split_once(':') {
                    Some((b, s)) => (b, parse_one(line, s)?),
                    None => (rest, 1),
                };
                if step == 0 {
                    return Err(config_error(line, "range step must be positive"));
                }
                let (a, b): (usize, usize) = (parse_one(line, a)?, parse_one(line, b)?);
                out.extend((a..=b).step_by(step));
            }
        }
    }
    Ok(out)
}

/// Generation recipe for one instance; randomized parameters are drawn
/// from the instance stream before the DAG itself.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Recipe {
    Fixed(Method),
    ErUniformP,
    LayerUniformP { layers: usize },
    LayerLogUniformK { p: f64 },
}

impl Recipe {
    fn draw(self, rng: &mut ChaCha8Rng) -> Method {
        match self {
            Recipe::Fixed(m) => m,
            Recipe::ErUniformP => Method::ErdosRenyi { p: rng.gen() },
            Recipe::LayerUniformP { layers } => Method::LayerByLayer { layers, p: rng.gen() },
            Recipe::LayerLogUniformK { p } => {
                let k = rng.gen_range(0.0..101f64.ln()).exp().floor() as usize;
                Method::LayerByLayer { layers: k.clamp(1, 100), p }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Job {
    Properties { recipe: Recipe, n: usize },
    Special { kind: SpecialKind, n: usize },
    Schedule { recipe: Recipe, n: usize, processors: Vec<usize> },
}

fn sweep(n: impl IntoIterator<Item = usize>, recipe: impl Fn(usize) -> Recipe) -> Vec<Job> {
    n.into_iter().map(|n| Job::Properties { recipe: recipe(n), n }).collect()
}

fn repeat(count: usize, job: Job) -> Vec<Job> {
    vec![job; count]
}

/// Special-DAG sizes of the processor sweep.
pub fn fig2_size(kind: SpecialKind) -> usize {
    match kind {
        SpecialKind::OutTree | SpecialKind::InTree | SpecialKind::Comb | SpecialKind::CombReversed => 127,
        SpecialKind::Square => 121,
        SpecialKind::Triangular => 120,
        _ => 128,
    }
}

fn jobs(plan: &Plan) -> Vec<Job> {
    let fixed = |m: Method| move |_| Recipe::Fixed(m);
    let exact = Method::Uniform { mode: UniformMode::Exact };
    let sizes = 10..=200;
    match plan {
        Plan::Preset(Preset::Table1) => [Method::ErdosRenyi { p: 0.5 }, exact]
            .into_iter()
            .flat_map(|m| {
                [10, 20, 30].into_iter().flat_map(move |n| repeat(100, Job::Properties { recipe: Recipe::Fixed(m), n }))
            })
            .collect(),
        Plan::Preset(Preset::Fig2) => {
            SpecialKind::ALL.into_iter().map(|kind| Job::Special { kind, n: fig2_size(kind) }).collect()
        }
        Plan::Preset(Preset::Fig3) => repeat(300, Job::Properties { recipe: Recipe::ErUniformP, n: 100 }),
        Plan::Preset(Preset::Fig4) => sweep(sizes, fixed(Method::ErdosRenyi { p: 0.15 })),
        Plan::Preset(Preset::Fig5) => sweep(sizes, fixed(exact)),
        Plan::Preset(Preset::Fig6) => (2..=15)
            .flat_map(|k| repeat(30, Job::Properties { recipe: Recipe::Fixed(Method::RandomOrders { k }), n: 100 }))
            .collect(),
        Plan::Preset(Preset::Fig7) => sweep(sizes, fixed(Method::RandomOrders { k: 3 })),
        Plan::Preset(Preset::Fig8) => repeat(300, Job::Properties { recipe: Recipe::LayerUniformP { layers: 10 }, n: 100 }),
        Plan::Preset(Preset::Fig9) => repeat(300, Job::Properties { recipe: Recipe::LayerLogUniformK { p: 0.5 }, n: 100 }),
        Plan::Preset(Preset::Fig10) => sweep(sizes, |n| {
            Recipe::Fixed(Method::LayerByLayer { layers: ((n as f64).sqrt().round() as usize).max(1), p: 0.5 })
        }),
        Plan::Preset(Preset::Fig11) => [
            Method::ErdosRenyi { p: 0.15 },
            exact,
            Method::RandomOrders { k: 3 },
            Method::LayerByLayer { layers: 10, p: 0.5 },
        ]
        .into_iter()
        .flat_map(|m| {
            repeat(300, Job::Schedule { recipe: Recipe::Fixed(m), n: 100, processors: FIG11_PROCESSORS.to_vec() })
        })
        .collect(),
        Plan::Grid(g) => {
            let mut out = Vec::new();
            for &m in &g.methods {
                for &n in &g.sizes {
                    let job = if g.processors.is_empty() {
                        Job::Properties { recipe: Recipe::Fixed(m), n }
                    } else {
                        Job::Schedule { recipe: Recipe::Fixed(m), n, processors: g.processors.clone() }
                    };
                    out.extend(repeat(g.replications, job));
                }
            }
            out
        }
    }
}

pub const PROPERTY_PREFIX: [&str; 5] = ["instance", "method", "p", "K", "layers"];
pub const SCHEDULE_COLUMNS: [&str; 8] =
    ["instance", "method", "n", "P", "heuristic", "makespan", "best", "diff"];

fn method_columns(m: &Method) -> [String; 4] {
    let (p, k, layers) = match *m {
        Method::ErdosRenyi { p } => (p.to_string(), String::new(), String::new()),
        Method::Uniform { .. } => Default::default(),
        Method::RandomOrders { k } => (String::new(), k.to_string(), String::new()),
        Method::LayerByLayer { layers, p } => (p.to_string(), String::new(), layers.to_string()),
    };
    let name = match m {
        Method::Uniform { mode: UniformMode::PaperFaithful } => "uniform-paper".to_string(),
        other => other.name().to_string(),
    };
    [name, p, k, layers]
}

fn schedule_rows(instance: usize, method: &str, d: &Dag, processors: &[usize]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for &procs in processors {
        let makespans: Vec<usize> = HEURISTICS.iter().map(|h| h.schedule(d, procs).makespan()).collect();
        let best = *makespans.iter().min().unwrap();
        for (h, makespan) in HEURISTICS.iter().zip(makespans) {
            rows.push(vec![
                instance.to_string(),
                method.to_string(),
                d.n().to_string(),
                procs.to_string(),
                h.name().to_string(),
                makespan.to_string(),
                best.to_string(),
                (makespan - best).to_string(),
            ]);
        }
    }
    rows
}

fn run_job(seed: u64, instance: usize, job: &Job) -> Result<Vec<Vec<String>>, ExperimentError> {
    let mut rng = instance_rng(seed, instance as u64);
    match job {
        Job::Properties { recipe, n } => {
            let method = recipe.draw(&mut rng);
            let d = method.generate(*n, &mut rng)?;
            let mut row = vec![instance.to_string()];
            row.extend(method_columns(&method));
            row.extend(measure_all(&d).csv_values());
            Ok(vec![row])
        }
        Job::Special { kind, n } => {
            let d = build_special(*kind, *n)?;
            let procs: Vec<usize> = FIG2_PROCESSORS.collect();
            Ok(schedule_rows(instance, kind.name(), &d, &procs))
        }
        Job::Schedule { recipe, n, processors } => {
            let method = recipe.draw(&mut rng);
            let d = method.generate(*n, &mut rng)?;
            Ok(schedule_rows(instance, &method_columns(&method)[0], &d, processors))
        }
    }
}

/// Rows of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub seed: u64,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a numeric column; empty cells are skipped.
    pub fn floats(&self, name: &str) -> Vec<f64> {
        let c = self.column(name).unwrap_or_else(|| panic!("no column `{name}`"));
        self.rows.iter().filter(|r| !r[c].is_empty()).map(|r| r[c].parse().expect("numeric column")).collect()
    }

    /// Rows whose `column` equals `value`.
    pub fn filter(&self, column: &str, value: &str) -> Table {
        let c = self.column(column).unwrap_or_else(|| panic!("no column `{column}`"));
        Table { rows: self.rows.iter().filter(|r| r[c] == value).cloned().collect(), ..self.clone() }
    }

    pub fn to_csv(&self) -> String {
        let mut out = header(self.name.as_str(), self.seed, &self.columns);
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn header(name: &str, seed: u64, columns: &[String]) -> String {
    format!("# dagforge experiment={name} schema=v{SCHEMA_VERSION} seed={seed}\n{}\n", columns.join(","))
}

pub fn columns(spec: &ExperimentSpec) -> Vec<String> {
    if spec.scheduling() {
        SCHEDULE_COLUMNS.iter().map(|c| c.to_string()).collect()
    } else {
        PROPERTY_PREFIX.iter().chain(DagProperties::CSV_COLUMNS.iter()).map(|c| c.to_string()).collect()
    }
}

/// Runs `spec`, handing rows to `sink` one chunk at a time in instance
/// order.
fn run_chunks(
    spec: &ExperimentSpec,
    mut sink: impl FnMut(Vec<Vec<String>>) -> Result<(), ExperimentError>,
) -> Result<(), ExperimentError> {
    let jobs = jobs(&spec.plan);
    for (c, chunk) in jobs.chunks(CHUNK).enumerate() {
        let rows: Vec<Vec<Vec<String>>> = chunk
            .par_iter()
            .enumerate()
            .map(|(i, job)| run_job(spec.seed, c * CHUNK + i, job))
            .collect::<Result<_, _>>()?;
        sink(rows.into_iter().flatten().collect())?;
    }
    Ok(())
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Table, ExperimentError> {
    let mut rows = Vec::new();
    run_chunks(spec, |chunk| {
        rows.extend(chunk);
        Ok(())
    })?;
    Ok(Table { name: spec.name().to_string(), seed: spec.seed, columns: columns(spec), rows })
}

/// Streams the CSV to `out`, flushing after every chunk so an interrupted
/// run leaves the completed rows behind. Returns the number of data rows.
pub fn write_experiment<W: Write>(spec: &ExperimentSpec, out: &mut W) -> Result<usize, ExperimentError> {
    out.write_all(header(spec.name(), spec.seed, &columns(spec)).as_bytes())?;
    out.flush()?;
    let mut written = 0;
    run_chunks(spec, |rows| {
        for row in &rows {
            writeln!(out, "{}", row.join(","))?;
        }
        written += rows.len();
        out.flush()?;
        Ok(())
    })?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_sample_sizes() {
        let count = |p: Preset| jobs(&Plan::Preset(p)).len();
        assert_eq!(count(Preset::Table1), 600);
        assert_eq!(count(Preset::Fig3), 300);
        assert_eq!(count(Preset::Fig4), 191);
        assert_eq!(count(Preset::Fig6), 420);
        assert_eq!(count(Preset::Fig9), 300);
        assert_eq!(count(Preset::Fig11), 1200);
        assert_eq!(count(Preset::Fig2), SpecialKind::ALL.len());
    }

    #[test]
    fn fig2_sizes_are_admissible() {
        for kind in SpecialKind::ALL {
            assert!(kind.is_admissible(fig2_size(kind)), "{kind}");
        }
    }

    #[test]
    fn log_uniform_layers_stay_in_range() {
        let mut rng = instance_rng(1, 0);
        for _ in 0..10_000 {
            match (Recipe::LayerLogUniformK { p: 0.5 }).draw(&mut rng) {
                Method::LayerByLayer { layers, .. } => assert!((1..=100).contains(&layers)),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn grid_config() {
        let spec = ExperimentSpec::from_config(
            "# grid\nmethod = layer\nlayers = 2, 5\np = 0.5\nn = 10..30:10\nreplications = 3\nseed = 9\n",
        )
        .unwrap();
        assert_eq!(spec.seed, 9);
        let Plan::Grid(g) = &spec.plan else { panic!() };
        assert_eq!(g.sizes, vec![10, 20, 30]);
        assert_eq!(g.methods.len(), 2);
        assert_eq!(jobs(&spec.plan).len(), 18);
    }

    #[test]
    fn preset_config() {
        let spec = ExperimentSpec::from_config("preset = fig6\nseed = 4").unwrap();
        assert_eq!(spec, ExperimentSpec::preset(Preset::Fig6, 4));
        assert!(matches!(
            ExperimentSpec::from_config("preset = fig12"),
            Err(ExperimentError::UnknownPreset(_))
        ));
        assert!(matches!(
            ExperimentSpec::from_config("preset = fig6\nn = 3"),
            Err(ExperimentError::Config { line: 2, .. })
        ));
        assert!(matches!(
            ExperimentSpec::from_config("method = er\nn = 5\np = 2"),
            Err(ExperimentError::Config { line: 2, .. })
        ));
        assert!(matches!(ExperimentSpec::from_config("colour = red"), Err(ExperimentError::Config { line: 1, .. })));
    }

    #[test]
    fn scheduling_grid_rows() {
        let spec = ExperimentSpec::from_config("method = orders\nK = 2\nn = 12\nreplications = 4\nprocs = 2, 3").unwrap();
        let table = run_experiment(&spec).unwrap();
        assert_eq!(table.columns, SCHEDULE_COLUMNS);
        assert_eq!(table.rows.len(), 4 * 2 * HEURISTICS.len());
        assert!(table.floats("diff").iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn streamed_csv_matches_table() {
        let spec = ExperimentSpec::from_config("method = er\np = 0.3\nn = 20\nreplications = 150").unwrap();
        let mut buf = Vec::new();
        let written = write_experiment(&spec, &mut buf).unwrap();
        assert_eq!(written, 150);
        assert_eq!(String::from_utf8(buf).unwrap(), run_experiment(&spec).unwrap().to_csv());
    }
}
