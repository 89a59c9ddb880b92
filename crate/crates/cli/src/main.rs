//! `flame`: command-line front end for flame-core.

mod error;
mod input;
mod report;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use flame_core::digraph::{CapacityVector, Mode, Normalized, RootedDigraph, Vertex};
use flame_core::flame::{self, default_order, extract_flame, extract_flame_integral, is_flame};
use flame_core::flow::{decompose, lambda, lambda_all, max_flow};
use flame_core::greedoid::{
    check_greedoid_axioms, find_augmenting_edge, fractional_augment, DEFAULT_MAX_EDGES,
};
use flame_core::oracle::{brute_is_flame, brute_lambda, random_order};
use flame_core::{AugmentationStep, Rational, Scalar};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{carry, choose_mode, load, load_vector, prepare, require_unit, Input};
use crate::report::{
    edge, edge_values, flame_report, names, tight_set, walk, InputInfo, RunReport,
};

/// Overrides the default ground-set bound of `greedoid-check`.
const GREEDOID_MAX_EDGES_VAR: &str = "FLAME_GREEDOID_MAX_EDGES";

#[derive(Parser)]
#[command(
    name = "flame",
    version,
    about = "Connectivity-preserving flames of rooted digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Integral,
    Fractional,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Integral => Mode::Integral,
            ModeArg::Fractional => Mode::Fractional,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Connectivity from the root to every vertex.
    Lambda {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Lower the capacities to a flame with the same connectivities.
    Extract {
        file: PathBuf,
        /// Comma-separated vertex names; every non-root vertex exactly once.
        #[arg(long, value_delimiter = ',', conflicts_with = "shuffle_seed")]
        order: Option<Vec<String>>,
        #[arg(long)]
        shuffle_seed: Option<u64>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Check that a vector is a flame below the capacities with the same connectivities.
    Verify {
        file: PathBuf,
        /// Graph text file or JSON report of `extract`.
        #[arg(long)]
        against: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Exhaustive check of the greedoid axioms on flame edge sets.
    GreedoidCheck {
        file: PathBuf,
        #[arg(long)]
        max_edges: Option<usize>,
        /// Include every member in the report.
        #[arg(long)]
        list_members: bool,
    },
    /// Maximum flow to one vertex and its path and cycle decomposition.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        sink: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// One augmentation step at a vertex whose connectivity is short.
    Augment {
        file: PathBuf,
        /// Graph text file or JSON report of `extract`.
        #[arg(long)]
        flame: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        fractional: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Lambda { .. } => "lambda",
            Command::Extract { .. } => "extract",
            Command::Verify { .. } => "verify",
            Command::GreedoidCheck { .. } => "greedoid-check",
            Command::Decompose { .. } => "decompose",
            Command::Augment { .. } => "augment",
        }
    }

    fn file(&self) -> &Path {
        match self {
            Command::Lambda { file, .. }
            | Command::Extract { file, .. }
            | Command::Verify { file, .. }
            | Command::GreedoidCheck { file, .. }
            | Command::Decompose { file, .. }
            | Command::Augment { file, .. } => file,
        }
    }
}

/// What a subcommand computed. `ok` is false when a checked property fails.
struct Run {
    mode: Mode,
    graph: Normalized<Rational>,
    order: Vec<Vertex>,
    payload: Value,
    ok: bool,
    warnings: Vec<String>,
}

impl Run {
    fn new(mode: Mode, graph: Normalized<Rational>) -> Self {
        let order = default_order(&graph.digraph);
        Run {
            mode,
            graph,
            order,
            payload: Value::Null,
            ok: true,
            warnings: Vec::new(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn execute(command: &Command) -> Result<u8, CliError> {
    let started = Instant::now();
    let input = load(command.file())?;
    let run = match command {
        Command::Lambda { mode, .. } => run_lambda(&input, mode.map(Into::into)),
        Command::Extract {
            order,
            shuffle_seed,
            mode,
            ..
        } => run_extract(
            &input,
            order.as_deref(),
            *shuffle_seed,
            mode.map(Into::into),
        ),
        Command::Verify { against, mode, .. } => run_verify(&input, against, mode.map(Into::into)),
        Command::GreedoidCheck {
            max_edges,
            list_members,
            ..
        } => run_greedoid_check(&input, *max_edges, *list_members),
        Command::Decompose { sink, mode, .. } => run_decompose(&input, sink, mode.map(Into::into)),
        Command::Augment {
            flame,
            vertex,
            fractional,
            ..
        } => run_augment(&input, flame, vertex, *fractional),
    }?;

    let d = &run.graph.digraph;
    let mut warnings: Vec<String> = run.graph.warnings.iter().map(ToString::to_string).collect();
    warnings.extend(run.warnings);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let report = RunReport {
        command: command.name(),
        input: InputInfo {
            path: input.path.clone(),
            sha256: input.sha256.clone(),
        },
        mode: match run.mode {
            Mode::Integral => "integral",
            Mode::Fractional => "fractional",
        },
        vertex_order: names(d, run.order.iter().copied()),
        vertex_map: report::vertex_map(d),
        warnings,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        payload: run.payload,
    };
    let text = serde_json::to_string_pretty(&report).expect("reports serialize");
    // A closed pipe on stdout is not an error of the run.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if !run.ok {
        eprintln!("error: {} check failed", command.name());
    }
    Ok(if run.ok { 0 } else { 1 })
}

fn vertex(d: &RootedDigraph, name: &str) -> Result<Vertex, CliError> {
    d.vertex(name).map_err(|e| CliError::Usage(e.to_string()))
}

fn non_root_vertex(d: &RootedDigraph, name: &str) -> Result<Vertex, CliError> {
    let v = vertex(d, name)?;
    if v == d.root() {
        return Err(CliError::Usage(format!("`{name}` is the root")));
    }
    Ok(v)
}

fn run_lambda(input: &Input, mode: Option<Mode>) -> Result<Run, CliError> {
    let mode = choose_mode(&input.graph, mode);
    let mut run = Run::new(mode, prepare(input, mode)?);
    let d = &run.graph.digraph;
    let table: serde_json::Map<String, Value> = lambda_all(d, &run.graph.capacities)
        .into_iter()
        .map(|(v, value)| (d.name(v).to_string(), Value::String(value.to_string())))
        .collect();
    run.payload = json!({ "lambda": table });
    Ok(run)
}

fn run_extract(
    input: &Input,
    order: Option<&[String]>,
    seed: Option<u64>,
    mode: Option<Mode>,
) -> Result<Run, CliError> {
    let mode = choose_mode(&input.graph, mode);
    let mut run = Run::new(mode, prepare(input, mode)?);
    let d = &run.graph.digraph;
    let c = &run.graph.capacities;
    run.order = match (order, seed) {
        (Some(list), _) => list
            .iter()
            .map(|name| vertex(d, name.trim()))
            .collect::<Result<_, _>>()?,
        (None, Some(seed)) => random_order(d, seed),
        (None, None) => default_order(d),
    };
    d.check_order(&run.order)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let (f, trace, report, multiset) = match mode {
        Mode::Integral => {
            let out = extract_flame_integral(d, c, &run.order)
                .map_err(|e| CliError::from_run(e, &input.path))?;
            let ids: Vec<usize> = out.edges.iter().map(|id| id.0).collect();
            (out.capacities, out.trace, out.report, Some(ids))
        }
        Mode::Fractional => {
            let (f, trace) =
                extract_flame(d, c, &run.order).map_err(|e| CliError::from_run(e, &input.path))?;
            let report = flame::verify(d, c, &f);
            (f, trace, report, None)
        }
    };
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            let changes: Vec<Value> = s
                .changes
                .iter()
                .map(|ch| {
                    json!({
                        "edge": ch.edge.0,
                        "before": ch.before.to_string(),
                        "after": ch.after.to_string(),
                    })
                })
                .collect();
            json!({ "sink": d.name(s.sink), "amount": s.amount.to_string(), "changes": changes })
        })
        .collect();
    run.ok = report.holds();
    run.payload = json!({
        "flame": edge_values(d, &f),
        "multiset": multiset,
        "report": flame_report(d, &report),
        "trace": steps,
    });
    Ok(run)
}

fn run_verify(input: &Input, against: &Path, mode: Option<Mode>) -> Result<Run, CliError> {
    let mode = choose_mode(&input.graph, mode);
    let mut run = Run::new(mode, prepare(input, mode)?);
    let raw = load_vector(against, &input.graph.digraph)?;
    let f = carry(&run.graph, &raw, &mut run.warnings);
    let d = &run.graph.digraph;
    let c = &run.graph.capacities;
    let report = flame::verify(d, c, &f);

    let oracle = (|| -> flame_core::Result<Value> {
        let mut lambda_agrees = true;
        for row in &report.rows {
            lambda_agrees &= brute_lambda(d, c, row.vertex)? == row.lambda_c;
            lambda_agrees &= brute_lambda(d, &f, row.vertex)? == row.lambda_f;
        }
        let flame = brute_is_flame(d, &f)?;
        Ok(json!({ "lambda_agrees": lambda_agrees, "is_flame": flame }))
    })();
    let oracle = match oracle {
        Ok(value) => value,
        Err(e @ flame_core::Error::SizeBound { .. }) => {
            run.warnings
                .push(format!("oracle cross-check skipped: {e}"));
            Value::Null
        }
        Err(e) => return Err(CliError::from_run(e, &input.path)),
    };
    let oracle_agrees = oracle.is_null()
        || (oracle["lambda_agrees"] == true && oracle["is_flame"] == report.is_flame);
    run.ok = report.holds() && oracle_agrees;
    run.payload = json!({
        "flame": edge_values(d, &f),
        "report": flame_report(d, &report),
        "oracle": oracle,
    });
    Ok(run)
}

fn greedoid_bound(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(GREEDOID_MAX_EDGES_VAR) {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!("{GREEDOID_MAX_EDGES_VAR}=`{text}` is not a count"))
        }),
        Err(_) => Ok(DEFAULT_MAX_EDGES),
    }
}

fn run_greedoid_check(
    input: &Input,
    max_edges: Option<usize>,
    list_members: bool,
) -> Result<Run, CliError> {
    require_unit(input)?;
    let bound = greedoid_bound(max_edges)?;
    let mut run = Run::new(Mode::Integral, prepare(input, Mode::Integral)?);
    let report = check_greedoid_axioms(&run.graph.digraph, bound)
        .map_err(|e| CliError::from_run(e, &input.path))?;
    let ids = |s: &std::collections::BTreeSet<flame_core::EdgeId>| -> Vec<usize> {
        s.iter().map(|id| id.0).collect()
    };
    run.ok = report.holds();
    run.payload = json!({
        "holds": report.holds(),
        "ground_size": report.ground_size,
        "member_count": report.members.len(),
        "members": list_members.then(|| report.members.iter().map(ids).collect::<Vec<_>>()),
        "contains_empty": report.contains_empty,
        "augmentation": report.augmentation,
        "counterexample": report.counterexample.as_ref().map(|(small, large)| {
            json!({ "smaller": ids(small), "larger": ids(large) })
        }),
        "accessible": report.accessible,
        "downward_closed": report.downward_closed,
        "basis_sizes": report.basis_sizes,
        "lambda_sum": report.lambda_sum,
        "is_greedoid": report.is_greedoid(),
        "bases_equicardinal": report.bases_equicardinal(),
        "bases_attain_lambda_sum": report.bases_attain_lambda_sum(),
    });
    Ok(run)
}

fn run_decompose(input: &Input, sink: &str, mode: Option<Mode>) -> Result<Run, CliError> {
    let mode = choose_mode(&input.graph, mode);
    let mut run = Run::new(mode, prepare(input, mode)?);
    let d = &run.graph.digraph;
    let sink = non_root_vertex(d, sink)?;
    let fail = |e| CliError::from_run(e, &input.path);
    let x = max_flow(d, &run.graph.capacities, sink).map_err(fail)?;
    let dec = decompose(d, &x).map_err(fail)?;
    run.ok = dec.recompose() == *x.values() && dec.path_total() == *x.amount();
    run.payload = json!({
        "sink": d.name(sink),
        "amount": x.amount().to_string(),
        "flow": edge_values(d, x.values()),
        "paths": dec.paths.iter().map(|p| walk(d, p)).collect::<Vec<_>>(),
        "cycles": dec.cycles.iter().map(|p| walk(d, p)).collect::<Vec<_>>(),
    });
    Ok(run)
}

fn run_augment(
    input: &Input,
    flame_path: &Path,
    name: &str,
    fractional: bool,
) -> Result<Run, CliError> {
    let mode = if fractional {
        Mode::Fractional
    } else {
        require_unit(input)?;
        Mode::Integral
    };
    let mut run = Run::new(mode, prepare(input, mode)?);
    let raw = load_vector(flame_path, &input.graph.digraph)?;
    let y = carry(&run.graph, &raw, &mut run.warnings);
    let d = &run.graph.digraph;
    let c = &run.graph.capacities;
    let u = non_root_vertex(d, name)?;
    let fail = |e| CliError::from_run(e, &input.path);

    let (step, after) = if fractional {
        fractional_augment(d, c, &y, u).map_err(fail)?
    } else {
        let one = Rational::from_integer(1.into());
        if let Some((id, value)) = y.iter().find(|(_, v)| **v != one) {
            return Err(CliError::Input {
                path: flame_path.display().to_string(),
                line: 0,
                message: format!("value {value} on edge {id}; integral augmentation needs 0 or 1"),
            });
        }
        let h = y.support();
        let step = find_augmenting_edge(d, &h, u).map_err(fail)?;
        let mut grown = h;
        grown.insert(step.edge);
        (widen(step), CapacityVector::indicator(&grown))
    };

    let head = d.edge(step.edge).expect("the step uses a host edge").head;
    let before = lambda(d, &y, head).map_err(fail)?;
    let after_lambda = lambda(d, &after, head).map_err(fail)?;
    let (still_flame, _) = is_flame(d, &after);
    run.ok = still_flame
        && step.epsilon > Rational::from_integer(0.into())
        && after_lambda == before.clone() + step.epsilon.clone()
        && after.first_exceeding(c).is_none();
    run.payload = json!({
        "edge": edge(d, step.edge),
        "epsilon": step.epsilon.to_string(),
        "deficit_vertex": d.name(step.deficit_vertex),
        "tight_set": tight_set(d, &step.tight_set),
        "head_lambda_before": before.to_string(),
        "head_lambda_after": after_lambda.to_string(),
        "is_flame_after": still_flame,
        "flame": edge_values(d, &after),
    });
    Ok(run)
}

fn widen(step: AugmentationStep<i64>) -> AugmentationStep<Rational> {
    let to_q = |n: i64| Rational::from_ratio(n, 1).expect("nonzero denominator");
    AugmentationStep {
        edge: step.edge,
        epsilon: to_q(step.epsilon),
        tight_set: flame_core::TightSet {
            target: step.tight_set.target,
            set: step.tight_set.set,
            value: to_q(step.tight_set.value),
        },
        deficit_vertex: step.deficit_vertex,
    }
}
