//! `choice-lab`: command-line front end.
//!
//! Every subcommand prints a markdown report (or JSON with `--json`) and exits
//! with 0 when its embedded checks pass, 1 when a check fails and 2 on bad
//! input.

mod commands;
mod render;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use choice_lab::montecarlo::{configure_threads, DEFAULT_SEED, THREADS_ENV};
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "choice-lab",
    version,
    about = "Random betweenness preferences over three-prize lotteries"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for Monte Carlo work (results do not depend on it).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Primary output file (CSV, JSON, SVG or markdown, depending on the command).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Machine-readable JSON report.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Print the JSON report on stdout instead of markdown.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Two random implicit EU representations with equal choice tables but different joint choices.
    Example1(Example1Args),
    /// Random weighted utility on a circle versus uniform expected utility on ternary menus.
    Example2(Example2Args),
    /// Recover joint slope moments from slope-CDF queries.
    IdentifyMoments(IdentifyArgs),
    /// Check Monotonicity, Extremeness and Stochastic Betweenness on a choice table.
    CheckAxioms(CheckAxiomsArgs),
    /// Split a conjunction of binary events into cells of at most three events.
    DecomposeJoint(DecomposeArgs),
    /// Choice table of a distribution on a list of menus.
    SampleRcc(SampleRccArgs),
    /// SVG figure of a preference or a distribution.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
pub struct Example1Args {
    /// Number of random menus.
    #[arg(long, default_value_t = 1000)]
    pub menus: usize,
    /// Largest menu size (sizes cycle from 2).
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    /// Menus use lotteries on the grid of step 1/den.
    #[arg(long, default_value_t = 12)]
    pub den: i64,
    /// Weight of the first semi-weighted preference in μ′ ("1/2" reproduces the example).
    #[arg(long, default_value = "1/2")]
    pub mu_prime_weight: String,
    /// Per-menu CSV of both tables.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Example2Args {
    /// Monte Carlo samples per distribution (at least 10⁴).
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// Circle radii for ν₁.
    #[arg(long, value_delimiter = ',', default_values_t = [0.8, 1.5])]
    pub radii: Vec<f64>,
    /// Number of random ternary menus.
    #[arg(long, default_value_t = 20)]
    pub triples: usize,
    #[arg(long, default_value_t = 20)]
    pub den: i64,
    /// Per-triple CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CdfMode {
    Analytic,
    Simulated,
}

#[derive(Args, Debug)]
pub struct IdentifyArgs {
    /// Slope law JSON.
    #[arg(long)]
    pub law: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub order: u32,
    /// Quadrature grid for each power moment.
    #[arg(long, default_value_t = 20_000)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = CdfMode::Analytic)]
    pub mode: CdfMode,
    /// Simulated preferences per CDF probe (simulated mode).
    #[arg(long, default_value_t = 200_000)]
    pub n: u64,
    /// Largest accepted |recovered - direct| (default 1e-3 analytic, 5e-2 simulated).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CheckAxiomsArgs {
    /// Choice table JSON.
    #[arg(long)]
    pub rcc: PathBuf,
    /// Absolute slack for estimated rows, on top of four combined standard errors.
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Binary events JSON.
    #[arg(long)]
    pub events: PathBuf,
    /// Oracle samples (0 skips the oracle).
    #[arg(long, default_value_t = 100_000)]
    pub validate: u64,
    #[arg(long, default_value_t = choice_lab::joint_choice::DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
    /// Distribution JSON; with it, the joint-choice table of the input and every cell is computed.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Monte Carlo samples for the joint-choice table.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Joint-choice table output.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SampleRccArgs {
    /// Distribution JSON.
    #[arg(long)]
    pub dist: PathBuf,
    /// Menus JSON: a list of lists of lotteries.
    #[arg(long)]
    pub menus: PathBuf,
    /// Monte Carlo samples (ignored for finite mixtures, which are exact).
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// Add each menu's one-item deletions and its mixtures λD + (1-λ)p, λ ∈ {1/4, 1/2, 3/4}.
    #[arg(long)]
    pub family: bool,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// Preference or distribution JSON.
    #[arg(long)]
    pub spec: PathBuf,
    /// Indifference lines pass through the lottery grid of step 1/grid.
    #[arg(long, default_value_t = 8)]
    pub grid: u32,
    /// Sampled pivots drawn for a distribution.
    #[arg(long, default_value_t = 60)]
    pub pivots: u64,
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    configure_threads(cli.global.threads).context("configuring worker threads")?;
    let g = &cli.global;
    match &cli.command {
        Command::Example1(a) => commands::example1(g, a),
        Command::Example2(a) => commands::example2(g, a),
        Command::IdentifyMoments(a) => commands::identify_moments(g, a),
        Command::CheckAxioms(a) => commands::check_axioms(g, a),
        Command::DecomposeJoint(a) => commands::decompose_joint(g, a),
        Command::SampleRcc(a) => commands::sample_rcc(g, a),
        Command::Render(a) => commands::render(g, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let global = cli.global.clone();
    let outcome = run(cli).and_then(|r| {
        r.emit(&global)?;
        Ok(r.pass)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
