//! Command-line front end: `gen`, `place`, `weber`, `cost` and `sim`.
//!
//! Exit codes: 0 success, 1 runtime failure (I/O), 2 usage, 3 input format,
//! 4 numeric non-convergence.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chart::{line_chart, Series};
use crate::cost_model::{self, AllocationMethod, CostParams};
use crate::error::Error;
use crate::linear_placement;
use crate::placement_search::{
    exhaustive_search, fitness, ga_search, place_normal_traffic, FitnessMetric, Initialization,
    Placement, PlacementSummary, SearchParams,
};
use crate::privacy_sim::{self, privacy_curve, CurvePoint, PrivacyCurve, SimConfig};
use crate::road_graph::{self, Point, RoadNetwork, TopologyKind};
use crate::weber_solver::{self, BoundingBox, SolverConfig, SolverMode, WeberProblem};

#[derive(Debug, Parser)]
#[command(
    name = "mixzone",
    version,
    about = "Mix-zone placement and privacy simulation"
)]
struct Cli {
    /// Write a JSON run manifest listing inputs, outputs and parameters.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a road network as JSON.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Choose mix-zone sites on a network.
    Place(PlaceArgs),
    /// Solve a weighted Weber-point problem from a CSV of x,y[,weight].
    Weber(WeberArgs),
    /// Allocate link lengths on a line under the relay cost model.
    Cost(CostArgs),
    /// Simulate vehicles over a placement and report privacy metrics.
    Sim(SimArgs),
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Path network 1-2-...-N.
    Line {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Length of every link.
        #[arg(long, default_value_t = 1.0, conflicts_with = "lengths")]
        length: f64,
        /// Comma-separated lengths of the N-1 links.
        #[arg(long, value_delimiter = ',')]
        lengths: Option<Vec<f64>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rectangular grid.
    Grid {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        rows: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cols: u64,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Poisson point process on a rectangle, linked within the connection range.
    Poisson {
        /// Region as WIDTHxHEIGHT in meters.
        #[arg(long, value_parser = parse_area)]
        area: (f64, f64),
        /// Points per square meter.
        #[arg(long)]
        intensity: f64,
        /// Connection range in meters.
        #[arg(long)]
        range: f64,
        #[arg(long, env = "MIXZONE_SEED")]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_area(s: &str) -> Result<(f64, f64), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
    let w: f64 = w.trim().parse().map_err(|e| format!("width: {e}"))?;
    let h: f64 = h.trim().parse().map_err(|e| format!("height: {e}"))?;
    Ok((w, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlaceMethod {
    /// Closed form on line networks, genetic search otherwise.
    Auto,
    Linear,
    Ga,
    /// Backbone reduction for line-like networks.
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    AvgHops,
    TotalCost,
    WeightedDistance,
}

impl From<MetricArg> for FitnessMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::AvgHops => FitnessMetric::AvgHops,
            MetricArg::TotalCost => FitnessMetric::TotalCost,
            MetricArg::WeightedDistance => FitnessMetric::WeightedDistance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitArg {
    Weber,
    Random,
}

#[derive(Debug, Args)]
struct CostFlags {
    /// Cost constant Z.
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    /// Path exponent.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Path-loss exponent.
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    /// Total link length to distribute.
    #[arg(long, default_value_t = 1.0)]
    budget: f64,
}

impl CostFlags {
    fn params(&self) -> Result<CostParams, Failure> {
        CostParams::new(self.z, self.alpha, self.gamma, self.budget).map_err(usage)
    }
}

#[derive(Debug, Args)]
struct SearchFlags {
    #[arg(long, env = "MIXZONE_SEED")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 30)]
    population: usize,
    #[arg(long, default_value_t = 200)]
    maxgen: usize,
    #[arg(long, default_value_t = 0.8)]
    pc: f64,
    #[arg(long, default_value_t = 0.2)]
    pm: f64,
    #[arg(long)]
    no_local_search: bool,
    #[arg(long, value_enum, default_value_t = InitArg::Weber)]
    init: InitArg,
    #[arg(long, value_enum, default_value_t = MetricArg::AvgHops)]
    metric: MetricArg,
}

impl SearchFlags {
    fn params(&self, seed: u64) -> Result<SearchParams, Failure> {
        let sp = SearchParams {
            population_size: self.population,
            pc: self.pc,
            pm: self.pm,
            maxgen: self.maxgen,
            seed,
            local_search: !self.no_local_search,
            metric: self.metric.into(),
            init: match self.init {
                InitArg::Weber => Initialization::WeberSeeded,
                InitArg::Random => Initialization::Random,
            },
        };
        sp.validate().map_err(usage)?;
        Ok(sp)
    }
}

#[derive(Debug, Args)]
struct PlaceArgs {
    /// Network JSON file.
    #[arg(long)]
    network: PathBuf,
    /// Number of mix zones.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    mz: u64,
    #[arg(long, value_enum, default_value_t = PlaceMethod::Auto)]
    method: PlaceMethod,
    /// Cross-check against exhaustive enumeration and report on stderr.
    #[arg(long)]
    oracle: bool,
    /// Write the per-generation search trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    search: SearchFlags,
    #[command(flatten)]
    cost: CostFlags,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeberMode {
    Weiszfeld,
    Smoothed,
}

#[derive(Debug, Args)]
struct WeberArgs {
    /// CSV with x,y[,weight] per line.
    #[arg(long)]
    points: PathBuf,
    #[arg(long, value_enum, default_value_t = WeberMode::Weiszfeld)]
    mode: WeberMode,
    /// Smoothing constant for the smoothed mode.
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    /// Stop when an iterate moves less than this.
    #[arg(long)]
    step_tol: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    /// Feasible box as MINX,MINY,MAXX,MAXY.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    region: Option<Vec<f64>>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CostMethod {
    ClosedForm,
    Optimal,
    Uniform,
}

#[derive(Debug, Args)]
struct CostArgs {
    /// Number of intersections on the line.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    n: u64,
    /// Comma-separated zone sites. Defaults to the optimal sites for --mz.
    #[arg(long, value_delimiter = ',', conflicts_with = "mz")]
    sites: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    mz: u64,
    #[arg(long, value_enum, default_value_t = CostMethod::Optimal)]
    method: CostMethod,
    #[command(flatten)]
    cost: CostFlags,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Network JSON file.
    #[arg(long)]
    network: PathBuf,
    /// Fixed zone sites (comma-separated ids).
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["mz", "sweep"])]
    sites: Option<Vec<usize>>,
    /// Search a placement with this many zones.
    #[arg(long, conflicts_with = "sweep")]
    mz: Option<usize>,
    /// Comma-separated zone counts to sweep.
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<usize>>,
    #[arg(long, default_value_t = 200)]
    vehicles: usize,
    #[arg(long, default_value_t = 6)]
    trips: usize,
    /// Meters per second.
    #[arg(long, default_value_t = 14.0)]
    speed: f64,
    /// Co-presence window in seconds.
    #[arg(long, default_value_t = 300.0)]
    window: f64,
    /// Departure window in seconds.
    #[arg(long, default_value_t = 1800.0)]
    duration: f64,
    /// Aggregate relay capacity for the capacity bound.
    #[arg(long, default_value_t = 1.0)]
    aggregate_rate: f64,
    /// Largest j for TS(j).
    #[arg(long, default_value_t = 4)]
    max_j: usize,
    /// Per-(MZ, j) CSV; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON summary.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Directory for ts_vs_j.svg and entropy_vs_mz.svg.
    #[arg(long)]
    svg_dir: Option<PathBuf>,
    #[command(flatten)]
    search: SearchFlags,
    #[command(flatten)]
    cost: CostFlags,
}

#[derive(Debug)]
enum Failure {
    Runtime(String),
    Usage(String),
    Input(String),
    NonConvergence(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::NonConvergence(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Runtime(m)
            | Failure::Usage(m)
            | Failure::Input(m)
            | Failure::NonConvergence(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io(_) => Failure::Runtime(msg),
            Error::Oversize { .. } | Error::UnsupportedExponent(_) => Failure::Usage(msg),
            _ => Failure::Input(msg),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Inputs and outputs touched by one run, for the manifest.
#[derive(Debug, Default, Serialize)]
struct RunManifest {
    command: String,
    args: Vec<String>,
    inputs: Vec<String>,
    seed: Option<u64>,
    version: String,
    outputs: Vec<String>,
}

struct Ctx {
    manifest: RunManifest,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        self.manifest.inputs.push(path.display().to_string());
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn read_network(&mut self, path: &Path) -> Result<RoadNetwork, Failure> {
        let text = self.read(path)?;
        RoadNetwork::from_json(&text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    /// Write to `path`, or stdout when absent.
    fn emit(&mut self, path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
        match path {
            Some(p) => {
                fs::write(p, bytes)
                    .map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))?;
                self.manifest.outputs.push(p.display().to_string());
            }
            None => {
                let mut out = io::stdout().lock();
                out.write_all(bytes)
                    .and_then(|_| out.flush())
                    .map_err(|e| Failure::Runtime(format!("stdout: {e}")))?;
                self.manifest.outputs.push("-".into());
            }
        }
        Ok(())
    }

    fn seed(&mut self, seed: Option<u64>) -> Result<u64, Failure> {
        let s = seed
            .ok_or_else(|| Failure::Usage("this command needs --seed (or MIXZONE_SEED)".into()))?;
        self.manifest.seed = Some(s);
        Ok(s)
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    text.push('\n');
    Ok(text.into_bytes())
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut ctx = Ctx {
        manifest: RunManifest {
            command: command_name(&cli.command).into(),
            args: args
                .iter()
                .skip(1)
                .map(|a| a.to_string_lossy().into_owned())
                .collect(),
            version: env!("CARGO_PKG_VERSION").into(),
            ..RunManifest::default()
        },
    };
    let result = dispatch(&mut ctx, cli.command);
    if let Some(path) = &cli.manifest {
        let written = json_bytes(&ctx.manifest).and_then(|b| {
            fs::write(path, b).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
        });
        if let (Ok(()), Err(e)) = (&result, written) {
            eprintln!("mixzone: error: {}", e.message());
            return e.code();
        }
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("mixzone: error: {}", e.message());
            e.code()
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen { kind } => match kind {
            GenKind::Line { .. } => "gen line",
            GenKind::Grid { .. } => "gen grid",
            GenKind::Poisson { .. } => "gen poisson",
        },
        Command::Place(_) => "place",
        Command::Weber(_) => "weber",
        Command::Cost(_) => "cost",
        Command::Sim(_) => "sim",
    }
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen { kind } => cmd_gen(ctx, kind),
        Command::Place(a) => cmd_place(ctx, a),
        Command::Weber(a) => cmd_weber(ctx, a),
        Command::Cost(a) => cmd_cost(ctx, a),
        Command::Sim(a) => cmd_sim(ctx, a),
    }
}

fn cmd_gen(ctx: &mut Ctx, kind: GenKind) -> Result<(), Failure> {
    let (net, output) = match kind {
        GenKind::Line {
            n,
            length,
            lengths,
            output,
        } => {
            let lengths = lengths.unwrap_or_else(|| vec![length]);
            (
                road_graph::generate_line(n as usize, &lengths).map_err(usage)?,
                output,
            )
        }
        GenKind::Grid {
            rows,
            cols,
            spacing,
            output,
        } => (
            road_graph::generate_grid(rows as usize, cols as usize, spacing).map_err(usage)?,
            output,
        ),
        GenKind::Poisson {
            area,
            intensity,
            range,
            seed,
            output,
        } => {
            let seed = ctx.seed(seed)?;
            let out = road_graph::generate_poisson(area.0, area.1, intensity, range, seed)
                .map_err(usage)?;
            if out.truncated {
                eprintln!(
                    "mixzone: warning: draw of {} points was disconnected; kept the largest component ({} points)",
                    out.sampled,
                    out.network.len()
                );
            }
            (out.network, output)
        }
    };
    let mut text = net.to_json()?;
    text.push('\n');
    ctx.emit(output.as_deref(), text.as_bytes())
}

fn cmd_place(ctx: &mut Ctx, a: PlaceArgs) -> Result<(), Failure> {
    let net = ctx.read_network(&a.network)?;
    let cp = a.cost.params()?;
    let n = net.len();
    let mz = (a.mz as usize).min(n);
    let metric: FitnessMetric = a.search.metric.into();
    let method = match a.method {
        PlaceMethod::Auto if net.kind() == TopologyKind::Line => PlaceMethod::Linear,
        PlaceMethod::Auto => PlaceMethod::Ga,
        m => m,
    };

    let placement = match method {
        PlaceMethod::Linear => {
            if net.kind() != TopologyKind::Line {
                return Err(Failure::Input(
                    "--method linear needs a network of kind \"line\"".into(),
                ));
            }
            let res = linear_placement::optimal_multi(n, a.mz as usize)?;
            if a.oracle {
                let oracle = linear_placement::oracle_multi(n, a.mz as usize)?;
                eprintln!(
                    "oracle: closed form {} vs enumeration {} ({})",
                    res.avg_hops,
                    oracle.avg_hops,
                    if res.avg_hops == oracle.avg_hops {
                        "match"
                    } else {
                        "MISMATCH"
                    }
                );
            }
            Placement::new(&net, &res.sites)?
        }
        PlaceMethod::Ga => {
            let seed = ctx.seed(a.search.seed)?;
            let sp = a.search.params(seed)?;
            let (placement, trace) = ga_search(&net, mz, &sp, &cp)?;
            if let Some(path) = &a.trace {
                let mut buf = Vec::new();
                trace.write_csv(&mut buf)?;
                ctx.emit(Some(path), &buf)?;
            }
            placement
        }
        PlaceMethod::Normal => {
            let seed = ctx.seed(a.search.seed)?;
            let sp = a.search.params(seed)?;
            let out = place_normal_traffic(&net, mz, &cp, &sp)?;
            if let Some(w) = &out.warning {
                eprintln!("mixzone: warning: {w}");
            }
            out.placement
        }
        PlaceMethod::Auto => unreachable!("resolved above"),
    };
    let summary = PlacementSummary::new(&net, &placement, &cp, metric)?;
    if a.oracle && method != PlaceMethod::Linear {
        let (best, value) = exhaustive_search(&net, mz, &cp, metric)?;
        eprintln!(
            "oracle: {} {} vs exhaustive {} at {:?} ({})",
            metric.label(),
            summary.value,
            value,
            best.sites(),
            if summary.value <= value + 1e-12 {
                "match"
            } else {
                "worse"
            }
        );
    }
    ctx.emit(a.output.as_deref(), &json_bytes(&summary)?)
}

fn cmd_weber(ctx: &mut Ctx, a: WeberArgs) -> Result<(), Failure> {
    let text = ctx.read(&a.points)?;
    let mut problem = WeberProblem::from_csv(text.as_bytes())
        .map_err(|e| Failure::Input(format!("{}: {e}", a.points.display())))?;
    if let Some(r) = &a.region {
        let b = BoundingBox::new(Point::new(r[0], r[1]), Point::new(r[2], r[3])).map_err(usage)?;
        problem = problem.with_region(b);
    }
    let cfg = SolverConfig {
        epsilon: a.epsilon,
        step_tol: a.step_tol,
        max_iters: a.max_iters,
        mode: match a.mode {
            WeberMode::Weiszfeld => SolverMode::Weiszfeld,
            WeberMode::Smoothed => SolverMode::SmoothedGradient,
        },
    };
    cfg.validate().map_err(usage)?;
    let sol = weber_solver::run(&problem, &cfg)?;
    ctx.emit(a.output.as_deref(), &json_bytes(&sol)?)?;
    if !sol.converged {
        return Err(Failure::NonConvergence(format!(
            "no convergence after {} iterations (gradient norm {:e})",
            sol.iterations, sol.gradient_norm
        )));
    }
    Ok(())
}

fn cmd_cost(ctx: &mut Ctx, a: CostArgs) -> Result<(), Failure> {
    let cp = a.cost.params()?;
    let n = a.n as usize;
    let sites = match a.sites {
        Some(s) => s,
        None => linear_placement::optimal_multi(n, a.mz as usize)?.sites,
    };
    let method = match a.method {
        CostMethod::ClosedForm => AllocationMethod::ClosedForm,
        CostMethod::Optimal => AllocationMethod::NumericalOptimal,
        CostMethod::Uniform => AllocationMethod::Uniform,
    };
    let alloc = cost_model::multi_site_allocate(n, &sites, &cp, method)?;
    let mut buf = Vec::new();
    alloc.write_csv(&mut buf, &cp)?;
    ctx.emit(a.output.as_deref(), &buf)
}

fn cmd_sim(ctx: &mut Ctx, a: SimArgs) -> Result<(), Failure> {
    let net = ctx.read_network(&a.network)?;
    let seed = ctx.seed(a.search.seed)?;
    let cp = a.cost.params()?;
    let sp = a.search.params(seed)?;
    let cfg = SimConfig {
        vehicle_count: a.vehicles,
        trips_per_vehicle: a.trips,
        mean_speed: a.speed,
        zone_dwell_window: a.window,
        seed,
        duration: a.duration,
        aggregate_rate: a.aggregate_rate,
    };
    cfg.validate().map_err(usage)?;
    if a.max_j == 0 {
        return Err(Failure::Usage("--max-j must be at least 1".into()));
    }

    let curve = if let Some(sites) = &a.sites {
        let placement = Placement::new(&net, sites)?;
        let traversals = privacy_sim::simulate(&net, &placement, &cfg)?;
        PrivacyCurve {
            points: vec![CurvePoint {
                mz: placement.sites().len(),
                sites: placement.sites().to_vec(),
                report: privacy_sim::report(&net, &placement, &traversals, &cfg, a.max_j)?,
            }],
        }
    } else {
        let counts = match (&a.sweep, a.mz) {
            (Some(s), _) => s.clone(),
            (None, Some(m)) => vec![m],
            (None, None) => {
                return Err(Failure::Usage(
                    "give one of --sites, --mz or --sweep".into(),
                ))
            }
        };
        privacy_curve(&net, &cfg, &counts, &sp, &cp, a.max_j).map_err(usage)?
    };

    if let Some(path) = &a.json {
        ctx.emit(Some(path), &json_bytes(&curve)?)?;
    }
    if let Some(dir) = &a.svg_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
        let ts: Vec<Series> = curve
            .points
            .iter()
            .map(|p| Series {
                name: format!("MZ={}", p.mz),
                points: p
                    .report
                    .ts_curve
                    .iter()
                    .map(|(&j, &v)| (j as f64, v))
                    .collect(),
            })
            .collect();
        let svg = line_chart("Tracking success", "zones traversed j", "TS(j)", &ts);
        ctx.emit(Some(&dir.join("ts_vs_j.svg")), svg.as_bytes())?;
        let entropy = vec![Series {
            name: "mean entropy".into(),
            points: curve
                .points
                .iter()
                .map(|p| (p.mz as f64, p.report.mean_entropy))
                .collect(),
        }];
        let svg = line_chart("Cumulative entropy", "mix zones", "bits", &entropy);
        ctx.emit(Some(&dir.join("entropy_vs_mz.svg")), svg.as_bytes())?;
    }
    let mut buf = Vec::new();
    curve.write_csv(&mut buf)?;
    ctx.emit(a.csv.as_deref(), &buf)?;
    // placement quality alongside, for scripts reading stderr
    for p in &curve.points {
        let placement = Placement::new(&net, &p.sites)?;
        let hops = fitness(&net, &placement, &cp, FitnessMetric::AvgHops)?;
        eprintln!("mz={} sites={:?} avg_hops={hops}", p.mz, p.sites);
    }
    Ok(())
}
