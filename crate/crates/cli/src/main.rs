use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dagforge::experiment::{write_experiment, ExperimentError, ExperimentSpec, Preset};
use dagforge::io::{self as formats, Format, IoError};
use dagforge::scheduler::{
    brute_force_schedule, decompose_at_bottlenecks, lower_bound, validate_schedule, Heuristic, Schedule,
    TiePolicy,
};
use dagforge::special::SpecialError;
use dagforge::uniformity::{chi_square_test, empirical_class_distribution, enumerate_labeled_dags, Universe};
use dagforge::{build_special, measure_all, Dag, DagProperties, GeneratorSpec, Method, SpecialKind, UniformMode};

/// Exit statuses: 0 success, 1 I/O failure, 2 invalid input, 3 parse error.
#[derive(Debug)]
enum Failure {
    Io(String),
    Validation(String),
    Parse(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Parse(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Validation(m) | Failure::Parse(m) => m,
        }
    }
}

fn invalid(e: impl Display) -> Failure {
    Failure::Validation(e.to_string())
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Failure {
        match e {
            IoError::Parse { .. } => Failure::Parse(e.to_string()),
            IoError::Invalid(_) | IoError::UnknownFormat(_) => invalid(e),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Failure {
        match e {
            ExperimentError::Config { .. } => Failure::Parse(e.to_string()),
            ExperimentError::Io(_) => Failure::Io(e.to_string()),
            _ => invalid(e),
        }
    }
}

type Outcome = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "forge", version, about = "Random task graphs, their properties, and unit-cost scheduling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw random DAGs.
    Generate {
        #[command(flatten)]
        generator: GeneratorArgs,
        /// Number of DAGs to draw.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Edgelist)]
        out_format: FormatArg,
        /// Directory receiving one file per DAG; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a special DAG.
    Special {
        /// empty, complete, chain, out-tree, in-tree, comb, comb-reversed,
        /// bipartite, square or triangular.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// Round an inadmissible size to the nearest admissible one.
        #[arg(long)]
        nearest: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Edgelist)]
        out_format: FormatArg,
    },
    /// Print the property catalog of a DAG as CSV.
    Analyze {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Edgelist)]
        format: FormatArg,
    },
    /// Schedule a DAG with unit-time tasks on identical processors.
    Schedule {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Edgelist)]
        format: FormatArg,
        #[arg(long)]
        procs: usize,
        #[arg(long, value_enum, default_value_t = HeuristicArg::Heft)]
        heuristic: HeuristicArg,
    },
    /// Compare generator output with a uniform distribution over small DAGs.
    Audit {
        #[command(flatten)]
        generator: GeneratorArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, value_enum, default_value_t = UniverseArg::Labeled)]
        universe: UniverseArg,
    },
    /// Run a preset or a configured grid and write CSV.
    Experiment {
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        /// key = value file describing a preset or grid.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the seed of the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a DAG between formats.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        from: FormatArg,
        #[arg(long, value_enum)]
        to: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GeneratorArgs {
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long)]
    n: usize,
    /// Edge probability (er, layer).
    #[arg(long)]
    p: Option<f64>,
    /// Number of orders (orders).
    #[arg(long = "K")]
    k: Option<usize>,
    /// Number of layers (layer).
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Er,
    Uniform,
    Orders,
    Layer,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Edgelist,
    Dot,
    Stg,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Edgelist => Format::EdgeList,
            FormatArg::Dot => Format::Dot,
            FormatArg::Stg => Format::Stg,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    Heft,
    Hcpt,
    Minmin,
    MinminAdversarial,
    /// Breadth-first search for an optimal schedule (n <= 20).
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum UniverseArg {
    Labeled,
    Classes,
    LabeledReductions,
    ClassReductions,
}

impl From<UniverseArg> for Universe {
    fn from(u: UniverseArg) -> Universe {
        match u {
            UniverseArg::Labeled => Universe::Labeled,
            UniverseArg::Classes => Universe::Classes,
            UniverseArg::LabeledReductions => Universe::LabeledReductions,
            UniverseArg::ClassReductions => Universe::ClassReductions,
        }
    }
}

impl GeneratorArgs {
    fn spec(&self) -> Result<GeneratorSpec, Failure> {
        fn need<T>(value: Option<T>, method: &str, flag: &str) -> Result<T, Failure> {
            value.ok_or_else(|| invalid(format!("--method {method} needs --{flag}")))
        }
        let name = self.method_name();
        let method = match self.method {
            MethodArg::Er => Method::ErdosRenyi { p: need(self.p, name, "p")? },
            MethodArg::Uniform => Method::Uniform {
                mode: match self.mode {
                    ModeArg::Exact => UniformMode::Exact,
                    ModeArg::Paper => UniformMode::PaperFaithful,
                },
            },
            MethodArg::Orders => Method::RandomOrders { k: need(self.k, name, "K")? },
            MethodArg::Layer => Method::LayerByLayer {
                layers: need(self.layers, name, "layers")?,
                p: need(self.p, name, "p")?,
            },
        };
        method.validate(self.n).map_err(invalid)?;
        Ok(GeneratorSpec::new(method, self.seed))
    }

    fn method_name(&self) -> &'static str {
        match self.method {
            MethodArg::Er => "er",
            MethodArg::Uniform => "uniform",
            MethodArg::Orders => "orders",
            MethodArg::Layer => "layer",
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn load(path: &Path, format: FormatArg) -> Result<Dag, Failure> {
    let parsed = formats::read(&read_file(path)?, format.into())?;
    if parsed.dummies_removed {
        eprintln!("note: removed STG dummy entry and exit tasks");
    }
    Ok(parsed.dag)
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::EdgeList => "txt",
        Format::Dot => "dot",
        Format::Stg => "stg",
    }
}

fn generate(generator: &GeneratorArgs, count: u64, out_format: FormatArg, out: Option<&Path>) -> Outcome {
    let spec = generator.spec()?;
    let format: Format = out_format.into();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    let mut stdout = io::stdout().lock();
    for i in 0..count {
        let d = spec.instance(generator.n, i).map_err(invalid)?;
        let text = formats::write(&d, format);
        match out {
            Some(dir) => {
                let path = dir.join(format!("dag-{i:05}.{}", extension(format)));
                write_output(Some(&path), &text)?;
            }
            None => {
                if count > 1 {
                    writeln!(stdout, "# instance {i}").map_err(|e| Failure::Io(e.to_string()))?;
                }
                stdout.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?;
            }
        }
    }
    Ok(())
}

fn special(kind: &str, n: usize, nearest: bool, out_format: FormatArg) -> Outcome {
    let kind: SpecialKind = kind.parse().map_err(|e: SpecialError| invalid(e))?;
    let n = if nearest { kind.nearest_admissible(n) } else { n };
    let d = build_special(kind, n).map_err(invalid)?;
    write_output(None, &formats::write(&d, out_format.into()))
}

fn analyze(input: &Path, format: FormatArg) -> Outcome {
    let d = load(input, format)?;
    let text = format!("{}\n{}\n", DagProperties::CSV_COLUMNS.join(","), measure_all(&d).csv_values().join(","));
    write_output(None, &text)
}

fn schedule(input: &Path, format: FormatArg, procs: usize, heuristic: HeuristicArg) -> Outcome {
    if procs == 0 {
        return Err(invalid("--procs must be at least 1"));
    }
    let d = load(input, format)?;
    let s: Schedule = match heuristic {
        HeuristicArg::Heft => Heuristic::Heft.schedule(&d, procs),
        HeuristicArg::Hcpt => Heuristic::Hcpt.schedule(&d, procs),
        HeuristicArg::Minmin => Heuristic::MinMin(TiePolicy::LowestId).schedule(&d, procs),
        HeuristicArg::MinminAdversarial => Heuristic::MinMin(TiePolicy::Adversarial).schedule(&d, procs),
        HeuristicArg::Exact => brute_force_schedule(&d, procs).map_err(invalid)?,
    };
    let violations = validate_schedule(&d, &s, procs);
    assert!(violations.is_empty(), "invalid schedule: {}", violations[0]);
    let mut text = format!("# makespan {} lower_bound {}", s.makespan(), lower_bound(&d, procs));
    let r = decompose_at_bottlenecks(&d);
    if r.n_c > 0 {
        text.push_str(&format!(" bottlenecks {} segments {}", r.n_c, r.segments.len()));
    }
    text.push_str("\ntask,processor,start\n");
    for task in 0..d.n() {
        text.push_str(&format!("{},{},{}\n", task + 1, s.processor[task] + 1, s.start[task]));
    }
    write_output(None, &text)
}

fn audit(generator: &GeneratorArgs, samples: u64, universe: UniverseArg) -> Outcome {
    let spec = generator.spec()?;
    let catalog = enumerate_labeled_dags(generator.n).map_err(invalid)?;
    let universe: Universe = universe.into();
    let counts = empirical_class_distribution(&catalog, &spec, samples, universe).map_err(invalid)?;
    let test = chi_square_test(&counts, &catalog.uniform(universe));
    if test.sparse_cells > 0 {
        eprintln!("warning: {} cells expect fewer than 5 samples; the p-value is unreliable", test.sparse_cells);
    }
    let text = format!(
        "universe,cells,samples,statistic,df,p_value\n{},{},{samples},{},{},{}\n",
        universe.name(),
        counts.len(),
        test.statistic,
        test.df,
        test.p_value
    );
    write_output(None, &text)
}

fn experiment(preset: Option<&str>, config: Option<&Path>, seed: Option<u64>, out: Option<&Path>) -> Outcome {
    let mut spec = match (preset, config) {
        (Some(name), _) => ExperimentSpec::preset(name.parse::<Preset>()?, 1),
        (None, Some(path)) => ExperimentSpec::from_config(&read_file(path)?)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    match out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            write_experiment(&spec, &mut io::BufWriter::new(file))?;
        }
        None => {
            write_experiment(&spec, &mut io::stdout().lock())?;
        }
    }
    Ok(())
}

fn convert(input: &Path, from: FormatArg, to: FormatArg, out: Option<&Path>) -> Outcome {
    let d = load(input, from)?;
    write_output(out, &formats::write(&d, to.into()))
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Generate { generator, count, out_format, out } => {
            generate(generator, *count, *out_format, out.as_deref())
        }
        Command::Special { kind, n, nearest, out_format } => special(kind, *n, *nearest, *out_format),
        Command::Analyze { input, format } => analyze(input, *format),
        Command::Schedule { input, format, procs, heuristic } => schedule(input, *format, *procs, *heuristic),
        Command::Audit { generator, samples, universe } => audit(generator, *samples, *universe),
        Command::Experiment { preset, config, seed, out } => {
            experiment(preset.as_deref(), config.as_deref(), *seed, out.as_deref())
        }
        Command::Convert { input, from, to, out } => convert(input, *from, *to, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("forge: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
