//! `treeloss`: Bayes-optimal prediction over label hierarchies.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input or arguments,
//! 3 descent assumptions violated, 4 `validate` found violations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use treeloss::bench::{self, BenchConfig, DEFAULT_BRUTEFORCE_CUTOFF};
use treeloss::fast::smallest_minimizer;
use treeloss::greedy::certify;
use treeloss::{
    bayes_optimal_bruteforce, bayes_optimal_greedy, parse_hierarchy, parse_probs, random_simplex,
    random_tree, risk, risk_all_nodes_fast, symmetrize, validate_assumptions, ConditionCertificate,
    Error, GenSpec, Hierarchy, Label, Method, ProbVector, Shape, SubtreeStats, WeightMode,
};

#[derive(Parser)]
#[command(
    name = "treeloss",
    version,
    about = "Bayes-optimal prediction under tree-distance losses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predict the Bayes-optimal label for one probability vector.
    Predict {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        probs: PathBuf,
        #[arg(long, default_value = "fast")]
        method: Method,
        #[arg(long, value_enum, default_value_t = LossView::Native)]
        loss_view: LossView,
        /// Include the risk of every node in the output.
        #[arg(long)]
        risk_table: bool,
    },
    /// Check the edge-ratio assumptions required by the greedy method.
    Validate {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Write a random tree file and probability file.
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "symmetric-unit")]
        weight_mode: WeightMode,
        #[arg(long, default_value_t = 1.0)]
        concentration: f64,
        #[arg(long, value_enum, default_value_t = ShapeArg::Random)]
        shape: ShapeArg,
        /// Files are written to `<prefix>.tree` and `<prefix>.probs`.
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Time the three methods on balanced assumption-satisfying trees.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 4096, 16384])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip brute force above this size.
        #[arg(long, default_value_t = DEFAULT_BRUTEFORCE_CUTOFF)]
        bruteforce_cutoff: usize,
        /// Run brute force at every size.
        #[arg(long)]
        force_bruteforce: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum LossView {
    Native,
    Symmetrized,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Random,
    Balanced,
}

enum CliError {
    Io(String),
    Input(String),
    Assumptions(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Assumptions(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Input(m) | CliError::Assumptions(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::AssumptionsViolated(_) => CliError::Assumptions(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Serialize)]
struct RunResult {
    method: Method,
    loss_view: LossView,
    node: Label,
    risk: f64,
    /// Risk of `node` under the loss of the tree as given.
    native_risk: f64,
    elapsed_ns: u64,
    certificate: Option<ConditionCertificate<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    risks: Option<Vec<f64>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_tree(path: &Path) -> Result<Hierarchy<f64>, CliError> {
    parse_hierarchy(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_probs(path: &Path, n: usize) -> Result<ProbVector<f64>, CliError> {
    parse_probs(&read(path)?, n).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types serialize")
}

fn predict(
    tree: &Path,
    probs: &Path,
    method: Method,
    view: LossView,
    risk_table: bool,
) -> Result<String, CliError> {
    let native = load_tree(tree)?;
    let p = load_probs(probs, native.len())?;
    let h = match view {
        LossView::Native => native.clone(),
        LossView::Symmetrized => symmetrize(&native),
    };

    let start = Instant::now();
    let (node, risk_value, table) = match method {
        Method::Bruteforce => {
            let report = bayes_optimal_bruteforce(&h, &p)?;
            let node = report.argmin_set()[0];
            (node, report.risk(node), report.risks().to_vec())
        }
        Method::Fast => {
            let stats = SubtreeStats::compute(&h, &p).map_err(Error::from)?;
            let risks = risk_all_nodes_fast(&h, &p, &stats)?;
            let (node, r) = smallest_minimizer(&risks).expect("non-empty tree");
            (node, r, risks)
        }
        Method::Greedy => {
            let pred = bayes_optimal_greedy(&h, &p)?;
            (pred.node, pred.risk, Vec::new())
        }
    };
    let elapsed_ns = (start.elapsed().as_nanos() as u64).max(1);

    let risks = match (risk_table, method) {
        (false, _) => None,
        (true, Method::Greedy) => {
            let stats = SubtreeStats::compute(&h, &p).map_err(Error::from)?;
            Some(risk_all_nodes_fast(&h, &p, &stats)?)
        }
        (true, _) => Some(table),
    };
    let certificate = if validate_assumptions(&h).holds {
        let stats = SubtreeStats::compute(&h, &p).map_err(Error::from)?;
        Some(certify(&h, &stats, node)?)
    } else {
        None
    };

    Ok(to_json(&RunResult {
        method,
        loss_view: view,
        node,
        risk: risk_value,
        native_risk: risk(&native, &p, node)?,
        elapsed_ns,
        certificate,
        risks,
    }))
}

fn gen(spec: &GenSpec, prefix: &Path) -> Result<String, CliError> {
    let h: Hierarchy<f64> = random_tree(spec).map_err(|e| CliError::Input(e.to_string()))?;
    let p: ProbVector<f64> = random_simplex(spec.nodes, spec.seed, spec.concentration)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let with_suffix = |suffix: &str| {
        let mut path = prefix.as_os_str().to_owned();
        path.push(suffix);
        PathBuf::from(path)
    };
    let tree_path = with_suffix(".tree");
    let probs_path = with_suffix(".probs");
    let header = format!(
        "# generated: nodes={} arity={} seed={} weight-mode={} concentration={}\n",
        spec.nodes, spec.max_arity, spec.seed, spec.weight_mode, spec.concentration
    );
    for (path, body) in [(&tree_path, h.to_string()), (&probs_path, p.to_string())] {
        fs::write(path, format!("{header}{body}"))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(format!("{}\n{}", tree_path.display(), probs_path.display()))
}

fn run_bench(config: &BenchConfig) -> Result<String, CliError> {
    if config.sizes.is_empty() || config.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Input(
            "--sizes must be a non-empty ascending list".into(),
        ));
    }
    if config.sizes.contains(&0) || config.arity == 0 || config.repeats == 0 {
        return Err(CliError::Input(
            "sizes, arity and repeats must be positive".into(),
        ));
    }
    let rows = bench::run(config).map_err(|e| CliError::Input(e.to_string()))?;
    let mut out = String::from("size,method,median_elapsed_ns");
    for row in rows {
        let ns = row.median_elapsed_ns.round().max(1.0) as u64;
        out.push_str(&format!("\n{},{},{}", row.size, row.method, ns));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(String, u8), CliError> {
    match cli.command {
        Command::Predict {
            tree,
            probs,
            method,
            loss_view,
            risk_table,
        } => Ok((predict(&tree, &probs, method, loss_view, risk_table)?, 0)),
        Command::Validate { tree } => {
            let report = validate_assumptions(&load_tree(&tree)?);
            let code = if report.holds { 0 } else { 4 };
            Ok((to_json(&report), code))
        }
        Command::Gen {
            nodes,
            arity,
            seed,
            weight_mode,
            concentration,
            shape,
            out_prefix,
        } => {
            let shape = match shape {
                ShapeArg::Random => Shape::Random,
                ShapeArg::Balanced => Shape::Balanced,
            };
            let spec = GenSpec::new(nodes, arity, seed, weight_mode)
                .with_concentration(concentration)
                .with_shape(shape);
            Ok((gen(&spec, &out_prefix)?, 0))
        }
        Command::Bench {
            sizes,
            arity,
            repeats,
            seed,
            bruteforce_cutoff,
            force_bruteforce,
        } => {
            let config = BenchConfig {
                sizes,
                arity,
                repeats,
                seed,
                bruteforce_cutoff: (!force_bruteforce).then_some(bruteforce_cutoff),
                methods: Method::ALL.to_vec(),
                min_sample: Duration::from_millis(2),
            };
            Ok((run_bench(&config)?, 0))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, code)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
