//! Command-line drivers.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 hypothesis or
//! precondition failure, 3 resource limit (cutoff, budget, resampling).

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::constructions::{
    expected_cut, necessary_construction, semi_bipartite_extract, verify_not_colourable,
    ConstructionError, ConstructionOptions, LambdaMode, SampleMode, SemiBipartiteOptions,
};
use crate::dpcolor::{
    lll_certify, solve, two_phase_colour, validate_cover, verify_dp_colouring, CoverSpec, DpError,
    SolveOptions, TwoPhaseOptions, TwoPhaseOutcome,
};
use crate::fractional::{
    choose_local_weights, colour_bound, extract_independent_set, greedy_fractional_colouring,
    validate_colouring, ColouringDump, FractionalError, GreedyOptions, HardCoreOracle,
};
use crate::graph::io::{parse_edge_list, write_edge_list};
use crate::graph::Graph;
use crate::hardcore::{
    conditional_fact_check, enumerate_stats, estimate_occupancy, ExactConfig, Fugacity,
    HardcoreError, StatsReport, DEFAULT_CUTOFF,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) => 1,
            Self::Precondition(_) => 2,
            Self::Resource(_) => 3,
        }
    }
}

impl From<HardcoreError> for CliError {
    fn from(e: HardcoreError) -> Self {
        match e {
            HardcoreError::TooLarge { .. } => Self::Resource(e.to_string()),
            HardcoreError::Graph(_) => Self::Io(e.to_string()),
            _ => Self::Precondition(e.to_string()),
        }
    }
}

impl From<FractionalError> for CliError {
    fn from(e: FractionalError) -> Self {
        match e {
            FractionalError::Hardcore(h) => h.into(),
            _ => Self::Precondition(e.to_string()),
        }
    }
}

impl From<DpError> for CliError {
    fn from(e: DpError) -> Self {
        match e {
            DpError::GaveUp { .. } => Self::Resource(e.to_string()),
            DpError::NodeOutOfRange { .. }
            | DpError::OwnerOutOfRange { .. }
            | DpError::LoopEdge(_)
            | DpError::BadVertexKey(_)
            | DpError::Graph(_) => Self::Io(e.to_string()),
            _ => Self::Precondition(e.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::SizeCap { .. } | ConstructionError::Budget(_) => {
                Self::Resource(e.to_string())
            }
            ConstructionError::Hardcore(h) => h.into(),
            ConstructionError::Graph(_) => Self::Io(e.to_string()),
            _ => Self::Precondition(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hcchroma",
    version,
    about = "Hard-core model, fractional and correspondence colouring of triangle-free graphs"
)]
pub struct Cli {
    /// Largest graph handled by exact enumeration.
    #[arg(long, global = true, env = "HCCHROMA_CUTOFF", default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: usize,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Occupancy statistics of the hard-core model.
    Stats(StatsArgs),
    /// Greedy fractional colouring with locally chosen weights.
    FracColour(FracArgs),
    /// Correspondence colouring of a cover by resampling.
    DpSolve(DpArgs),
    /// Build and verify the bipartite lower-bound instance.
    Construct(ConstructArgs),
    /// Extract a dense semi-bipartite induced subgraph.
    Semibip(SemibipArgs),
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Largest distance `j` for `E|N^j(v) ∩ I|`.
    #[arg(long, default_value_t = 1)]
    pub max_distance: usize,
    /// Also check the two conditional identities (needs a triangle-free graph).
    #[arg(long)]
    pub facts: bool,
    /// Glauber updates used above the cutoff.
    #[arg(long, default_value_t = 1_000_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FracArgs {
    pub graph: PathBuf,
    /// `ε` in (0, 4]; the fugacity is `ε/2`.
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    /// Colouring JSON destination (stdout gets the summary).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Per-vertex bound and slack table.
    #[arg(long)]
    pub slack: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DpArgs {
    /// Cover JSON; its `graph` path is resolved relative to this file.
    pub cover: PathBuf,
    /// Uniform `ℓ`; defaults to each vertex's list size.
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_resamples: u64,
    /// Use the two-phase heuristic with this many rounds.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Sample from whole lists instead of the first `ℓ` nodes.
    #[arg(long)]
    pub no_truncate: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub delta: usize,
    #[arg(long, default_value_t = 0)]
    pub level: usize,
    /// Run the exhaustive non-colourability check.
    #[arg(long)]
    pub verify: bool,
    /// Search-node budget for `--verify`.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_vertices: usize,
    /// Writes `<prefix>.edges` and `<prefix>.lists.json`.
    #[arg(long)]
    pub prefix: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SemibipArgs {
    pub graph: PathBuf,
    /// Fugacity; omitted means `n / Σ log deg(v)`.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 64)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Force Glauber sampling with this many updates per trial.
    #[arg(long)]
    pub glauber_steps: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Runs one command, writing its primary output to `out` unless redirected.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    if cli.cutoff == 0 {
        return Err(CliError::Precondition("cutoff must be at least 1".into()));
    }
    let config = ExactConfig { cutoff: cli.cutoff };
    let mut buf: Vec<u8> = Vec::new();
    let sink = &mut buf;
    let work = move || match cli.command {
        Command::Stats(a) => stats(a, config, sink),
        Command::FracColour(a) => frac_colour(a, config, sink),
        Command::DpSolve(a) => dp_solve(a, sink),
        Command::Construct(a) => construct(a, sink),
        Command::Semibip(a) => semibip(a, config, sink),
    };
    let result = match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Resource(e.to_string()))?
            .install(work),
        None => work(),
    };
    out.write_all(&buf)
        .map_err(|e| CliError::Io(e.to_string()))?;
    result
}

fn stats(a: StatsArgs, config: ExactConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let g = read_graph(&a.graph)?;
    let lambda = Fugacity::new(a.lambda)?;
    let exact = config.check(&g).is_ok();
    let mut report = if exact {
        let stats = enumerate_stats(&g, &lambda, a.max_distance.max(1), config)?;
        serde_json::to_value(StatsReport::from(&stats)).expect("serialisable")
    } else {
        if a.facts {
            return Err(HardcoreError::TooLarge {
                n: g.n(),
                cutoff: config.cutoff,
            }
            .into());
        }
        let est = estimate_occupancy(&g, a.lambda, a.steps / 10, a.steps, 20, a.seed);
        let sums = (1..=a.max_distance.max(1))
            .map(|j| {
                let row: Vec<f64> = (0..g.n())
                    .map(|v| {
                        let layers = g.distance_layers(v, j).expect("vertex in range");
                        layers
                            .get(j)
                            .map_or(0.0, |l| l.iter().map(|u| est.mean[u]).sum())
                    })
                    .collect();
                (j.to_string(), row)
            })
            .collect();
        let mut v = serde_json::to_value(StatsReport {
            lambda: a.lambda,
            log_z: None,
            occupancy: est.mean,
            neighbour_occupancy: sums,
        })
        .expect("serialisable");
        v["occupancy_std_err"] = json!(est.std_err);
        v
    };
    report["mode"] = json!(if exact { "exact" } else { "glauber" });
    if a.facts {
        let f = conditional_fact_check(&g, &lambda, config)?;
        report["facts"] =
            json!({"fact1_residual": f.fact1_residual, "fact2_residual": f.fact2_residual});
    }
    emit(out, a.output.as_deref(), &to_json(&report))
}

fn frac_colour(a: FracArgs, config: ExactConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let g = read_graph(&a.graph)?;
    if let Some(t) = g.find_triangle() {
        return Err(HardcoreError::NotTriangleFree(t).into());
    }
    config.check(&g)?;
    let (lambda, weights) = choose_local_weights(&g, a.epsilon)?;
    let oracle = HardCoreOracle {
        lambda: lambda.clone(),
        config,
    };
    let outcome = greedy_fractional_colouring(&g, &weights, &oracle, GreedyOptions::default())?;
    let lam = *lambda.value();
    let bound = (0..g.n())
        .map(|v| colour_bound(lam, g.degree(v)))
        .collect::<Result<Vec<f64>, _>>()?;

    let dump = ColouringDump::from(&outcome.colouring);
    let dump_json = to_json(&dump);
    // validate what is actually written
    let reread: ColouringDump = serde_json::from_str(&dump_json).expect("own output parses");
    let col = reread.into_colouring(g.n());
    let report = validate_colouring(&g, &col, &bound);
    if !report.is_valid() {
        return Err(CliError::Precondition(format!(
            "colouring fails validation: {}",
            report.failures[0]
        )));
    }
    let independent = extract_independent_set(&g, &col)?;

    if let Some(path) = &a.slack {
        let mut tsv = String::from("vertex\tdegree\tbound\tmeasure\tslack\n");
        for v in 0..g.n() {
            writeln!(
                tsv,
                "{v}\t{}\t{}\t{}\t{}",
                g.degree(v),
                bound[v],
                report.measure[v],
                report.slack[v]
            )
            .expect("writing to a String");
        }
        write_file(path, &tsv)?;
    }
    let summary = json!({
        "n": g.n(),
        "epsilon": a.epsilon,
        "lambda": lam,
        "iterations": outcome.trace.len(),
        "total": dump.total,
        "valid": true,
        "worst_slack": report.worst_slack(),
        "independent_set": independent,
    });
    match &a.output {
        Some(path) => {
            write_file(path, &dump_json)?;
            emit(out, None, &to_json(&summary))
        }
        None => emit(
            out,
            None,
            &to_json(&json!({"summary": summary, "colouring": dump})),
        ),
    }
}

fn dp_solve(a: DpArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(&a.cover)
        .map_err(|e| CliError::Io(format!("{}: {e}", a.cover.display())))?;
    let spec: CoverSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Io(format!("{}: {e}", a.cover.display())))?;
    let base = a.cover.parent().unwrap_or(Path::new("."));
    let g = read_graph(&base.join(spec.graph_path()))?;
    let (cover, labels) = spec.build(&g)?;
    validate_cover(&cover).map_err(|v| CliError::Precondition(format!("invalid cover: {v}")))?;
    let ell: Vec<usize> = (0..g.n())
        .map(|u| a.ell.unwrap_or(cover.list(u).len()))
        .collect();

    let (hypothesis, certificate) = match lll_certify(&cover, &ell) {
        Ok(cert) => ("pass".to_string(), Some(cert)),
        Err(DpError::Hypothesis(r)) => (r.to_string(), None),
        Err(DpError::ListTooShort { .. }) | Err(DpError::LengthMismatch { .. }) => {
            ("lists shorter than ell".into(), None)
        }
        Err(e) => return Err(e.into()),
    };
    let mut result = json!({
        "hypothesis": hypothesis,
        "certified": certificate.as_ref().is_some_and(|c| c.certified()),
        "min_slack": certificate.as_ref().map(|c| c.min_slack).filter(|s| s.is_finite()),
        "min_product_slack": certificate.as_ref().map(|c| c.min_product_slack).filter(|s| s.is_finite()),
    });
    let choice = match a.rounds {
        Some(rounds) => {
            let opts = TwoPhaseOptions {
                rounds,
                seed: a.seed,
                fallback_resamples: Some(a.max_resamples),
                ..Default::default()
            };
            match two_phase_colour(&cover, &ell, &opts)? {
                TwoPhaseOutcome::Coloured {
                    choice,
                    phase_one,
                    round,
                    fallback,
                } => {
                    result["phase_one"] = json!(phase_one);
                    result["round"] = json!(round);
                    result["fallback"] = json!(fallback);
                    choice
                }
                TwoPhaseOutcome::Failed(report) => {
                    return Err(CliError::Precondition(format!(
                        "two-phase colouring failed after {} rounds: {} (max deg* {})",
                        report.rounds, report.hypothesis, report.max_star_degree
                    )));
                }
            }
        }
        None => {
            let opts = SolveOptions {
                seed: a.seed,
                max_resamples: a.max_resamples,
                ell: (!a.no_truncate).then(|| ell.clone()),
            };
            let sol = solve(&cover, &opts)?;
            result["resamples"] = json!(sol.resamples);
            sol.choice
        }
    };
    verify_dp_colouring(&cover, &choice)
        .map_err(|v| CliError::Precondition(format!("colouring fails verification: {v}")))?;
    result["choice"] = json!(choice);
    if let Some(labels) = labels {
        let projected: Vec<i64> = choice.iter().map(|&c| labels[c]).collect();
        if g.edges().any(|(u, v)| projected[u] == projected[v]) {
            return Err(CliError::Precondition(
                "projected list colouring is improper".into(),
            ));
        }
        result["labels"] = json!(projected);
    }
    emit(out, a.output.as_deref(), &to_json(&result))
}

fn construct(a: ConstructArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let inst = necessary_construction(
        a.delta,
        a.level,
        ConstructionOptions {
            max_vertices: a.max_vertices,
        },
    )?;
    let props = inst.check_properties();
    let mut report = json!({
        "delta": inst.delta,
        "level": inst.level,
        "n": inst.graph.n(),
        "edges": inst.graph.edge_count(),
        "copies": inst.copies,
        "special_vertex": inst.special_vertex,
        "special_degree": inst.graph.degree(inst.special_vertex),
        "special_list_size": inst.lists[inst.special_vertex].len(),
        "properties": {
            "bipartite": props.bipartite,
            "a_degrees": props.a_degrees,
            "b_degrees": props.b_degrees,
            "list_sizes": props.list_sizes,
            "b_count": props.b_count,
            "min_a_list_slack": props.min_a_list_slack,
        },
    });
    if a.verify {
        let v = verify_not_colourable(&inst, a.budget)?;
        eprintln!("not colourable: {}", v.not_colourable);
        report["verify"] = serde_json::to_value(v).expect("serialisable");
    }
    if let Some(prefix) = &a.prefix {
        let edges = PathBuf::from(format!("{}.edges", prefix.display()));
        let lists_path = PathBuf::from(format!("{}.lists.json", prefix.display()));
        let text = write_edge_list(&inst.graph);
        let reread = parse_edge_list(&text).map_err(|e| CliError::Io(e.to_string()))?;
        if reread != inst.graph {
            return Err(CliError::Io("edge list does not round-trip".into()));
        }
        write_file(&edges, &text)?;
        let lists: std::collections::BTreeMap<String, Vec<String>> = inst
            .lists
            .iter()
            .enumerate()
            .map(|(v, l)| (v.to_string(), l.iter().map(ToString::to_string).collect()))
            .collect();
        write_file(&lists_path, &to_json(&lists))?;
    }
    emit(out, a.output.as_deref(), &to_json(&report))
}

fn semibip(a: SemibipArgs, config: ExactConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let g = read_graph(&a.graph)?;
    let opts = SemiBipartiteOptions {
        lambda: a.lambda.map_or(LambdaMode::Auto, LambdaMode::Fixed),
        trials: a.trials,
        seed: a.seed,
        sample: a
            .glauber_steps
            .map_or(SampleMode::Auto, |steps| SampleMode::Glauber { steps }),
        config,
    };
    let res = semi_bipartite_extract(&g, opts)?;
    if !g.is_independent(&res.a) || g.edges_between(&res.a, &res.b) != res.cut_edges {
        return Err(CliError::Precondition(
            "extracted parts fail verification".into(),
        ));
    }
    let mut report = json!({
        "lambda": res.lambda,
        "exact": res.exact,
        "A": res.a,
        "B": res.b,
        "cut_edges": res.cut_edges,
        "avg_degree": res.avg_degree,
    });
    if res.exact {
        let e = expected_cut(&g, &Fugacity::new(res.lambda)?, config)?;
        report["expected_cut"] =
            json!({"by_degree": e.by_degree, "by_neighbourhood": e.by_neighbourhood});
    }
    emit(out, a.output.as_deref(), &to_json(&report))
}
