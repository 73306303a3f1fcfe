use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use clique_percolation::experiment::{
    configure_threads_from_env, estimate_threshold, run_simulation, run_sweep, ExperimentConfig, GridPoint,
    Variant,
};
use clique_percolation::output::{emit, write_communities, Format};
use clique_percolation::theory::{heuristic_threshold_c4, threshold_report, ThresholdModel};
use clique_percolation::{components_by_shared_vertices, enumerate_k_cliques, load_edge_list, Error, OrientationSpec, Result};

#[derive(Parser)]
#[command(name = "cpl", version, about = "Clique percolation on random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print predicted threshold, mean-offspring value and giant fraction as JSON.
    Theory(TheoryArgs),
    /// Simulate one (n, p) point.
    Simulate(SimulateArgs),
    /// Simulate a grid of points.
    Sweep(SweepArgs),
    /// Clique percolation communities of an edge-list graph.
    Communities(CommunitiesArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// shared, oriented, edge-joined or motif-c4
    #[arg(long, default_value = "shared")]
    variant: Variant,
    #[arg(short, long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    #[arg(short, long)]
    n: u64,
    /// transitive, k4-two-cyclic, or arcs like "0>1,1>2,0>2"
    #[arg(long)]
    orientation: Option<String>,
}

impl ModelArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(self.variant, self.k, self.ell, self.n);
        if let Some(spec) = &self.orientation {
            cfg.orientation = Some(parse_orientation(spec, self.k)?);
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct TheoryArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, conflicts_with = "mu")]
    p: Option<f64>,
    #[arg(long, alias = "target-mu")]
    mu: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    trials: u32,
    /// Master seed; required so every run is reproducible.
    #[arg(long)]
    seed: u64,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, conflicts_with = "mu", required_unless_present = "mu")]
    p: Option<f64>,
    #[arg(long, alias = "target-mu")]
    mu: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Values of p: "a,b,c" or "start:stop:step".
    #[arg(long, conflicts_with = "mu_grid", required_unless_present = "mu_grid")]
    p_grid: Option<String>,
    /// Values of mu: "a,b,c" or "start:stop:step".
    #[arg(long)]
    mu_grid: Option<String>,
    /// Also report the p at which the mean largest fraction first crosses this.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args)]
struct CommunitiesArgs {
    /// Whitespace-separated edge list, one edge per line, '#' comments.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long, default_value_t = 3)]
    k: usize,
    /// Overlap size; defaults to k-1.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_orientation(spec: &str, k: usize) -> Result<OrientationSpec> {
    match spec {
        "transitive" => OrientationSpec::transitive(k),
        "k4-two-cyclic" => Ok(OrientationSpec::k4_two_cyclic()),
        arcs => OrientationSpec::parse_arcs(arcs),
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("not a number: {s:?}")))
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts[..] {
        [start, stop, step] => {
            let (start, stop, step) = (parse_number(start)?, parse_number(stop)?, parse_number(step)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(Error::InvalidParameter(format!("bad range {spec:?}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        [_] => spec.split(',').filter(|s| !s.trim().is_empty()).map(parse_number).collect(),
        _ => Err(Error::InvalidParameter(format!("bad grid {spec:?}"))),
    }
}

fn theory(args: TheoryArgs) -> Result<()> {
    let cfg = args.model.config()?;
    let out = io::stdout().lock();
    if cfg.variant == Variant::MotifC4 {
        let t = heuristic_threshold_c4::<f64>(cfg.n);
        let value = serde_json::json!({
            "variant": "motif-c4",
            "n": cfg.n,
            "lambda": t.lambda,
            "critical_p": t.p0,
            "note": "heuristic, not a theorem",
        });
        serde_json::to_writer_pretty(out, &value)?;
        println!();
        return Ok(());
    }
    let p = match (args.p, args.mu) {
        (Some(p), _) => p,
        (None, Some(mu)) => cfg.p_for_mu(mu)?,
        (None, None) => return Err(Error::InvalidParameter("give --p or --mu".into())),
    };
    let model = match cfg.variant {
        Variant::Shared => ThresholdModel::Shared,
        Variant::EdgeJoined => ThresholdModel::EdgeJoined,
        Variant::Oriented => match cfg.orientation {
            Some(h) if h != OrientationSpec::transitive(cfg.k)? => ThresholdModel::Oriented(h),
            _ => ThresholdModel::OrientedTransitive,
        },
        Variant::MotifC4 => unreachable!(),
    };
    let report = threshold_report::<f64>(&model, cfg.n, p, cfg.k, cfg.ell)?;
    serde_json::to_writer_pretty(out, &report)?;
    println!();
    Ok(())
}

fn finish_config(model: &ModelArgs, run: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = model.config()?;
    cfg.trials = run.trials;
    cfg.master_seed = run.seed;
    cfg.output = run.output.clone();
    Ok(cfg)
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let mut cfg = finish_config(&args.model, &args.run)?;
    cfg.p = args.p;
    cfg.target_mu = args.mu;
    let sweep = run_simulation(&cfg)?;
    emit(&sweep, args.run.format, args.run.output.as_deref())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let cfg = finish_config(&args.model, &args.run)?;
    let grid: Vec<GridPoint> = match (&args.p_grid, &args.mu_grid) {
        (Some(spec), _) => parse_grid(spec)?.into_iter().map(GridPoint::P).collect(),
        (None, Some(spec)) => parse_grid(spec)?.into_iter().map(GridPoint::Mu).collect(),
        (None, None) => Vec::new(),
    };
    let result = run_sweep(&cfg, &grid)?;
    emit(&result, args.run.format, args.run.output.as_deref())?;
    if let Some(eps) = args.epsilon {
        let p_hat = estimate_threshold(&result, eps)?;
        eprintln!("estimated threshold p = {p_hat}");
    }
    Ok(())
}

fn communities(args: CommunitiesArgs) -> Result<()> {
    let graph = load_edge_list(BufReader::new(File::open(&args.input)?))?;
    let ell = args.ell.unwrap_or(args.k.saturating_sub(1));
    let cliques = enumerate_k_cliques(&graph.graph, args.k)?;
    let summary = components_by_shared_vertices(&cliques, ell)?;
    log::info!("{} cliques in {} communities", cliques.len(), summary.component_count());
    let writer: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    write_communities(&graph, &cliques, &summary, writer)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads_from_env().and_then(|()| match cli.command {
        Command::Theory(a) => theory(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Communities(a) => communities(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
