use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use acmn::experiments::{run_sweep, solve_instance, SweepConfig, SweepKind};
use acmn::geometry::{assign_distances, assign_with_ellipticity, fit_kde, EllipticityTarget};
use acmn::io::{candidates_tsv, parse_solution_tsv, read_to_string, read_topology, write_atomic, write_json, write_solution, TopologyFile};
use acmn::rwa::validate_lightpaths;
use acmn::seed::child_seed;
use acmn::topology::{generate_acmn_with, load_nsfnet, GenerationMode, GeneratorConfig, LogicalTopology};
use acmn::{Error, Result};

#[derive(Parser)]
#[command(name = "acmn", version, about = "Mesh optical network throughput simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random logical topologies with NSFNET-like counts.
    GenEnsemble {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::EdgeSwap)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Give link lengths to a logical topology.
    Assign(AssignArgs),
    /// Size sweep over mean link distance.
    SweepScale(SweepArgs),
    /// Ellipticity sweep over normalised diameter.
    SweepEllipticity(SweepArgs),
    /// Solve one physical topology over a grid of relaxation values.
    SolveOne {
        #[arg(long)]
        topology: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = acmn::experiments::default_x_grid())]
        x_grid: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sweep config supplying fibre, grid, k and RWA settings.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a solution TSV for wavelength collisions and occupancy.
    Validate {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        topology: Option<PathBuf>,
        #[arg(long, default_value_t = 156)]
        wavelengths: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    EdgeSwap,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pdf {
    Nsfnet,
}

#[derive(Args)]
struct AssignArgs {
    /// Logical topology; NSFNET when omitted.
    #[arg(long)]
    topology: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Pdf::Nsfnet)]
    pdf: Pdf,
    #[arg(long, default_value_t = 1)]
    realisations: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Target normalised diameter; enables rejection sampling.
    #[arg(long)]
    ellipticity: Option<f64>,
    #[arg(long, default_value_t = 3070.0)]
    mean_pair_km: f64,
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
    #[arg(long, default_value_t = acmn::geometry::ELLIPTICITY_BUDGET)]
    budget: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn load_config(path: Option<&Path>) -> Result<SweepConfig> {
    match path {
        Some(p) => SweepConfig::from_json(&read_to_string(p)?),
        None => Ok(SweepConfig::default()),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn gen_ensemble(count: usize, seed: u64, mode: Mode, out: &Path) -> Result<()> {
    create_dir(out)?;
    let cfg = GeneratorConfig {
        mode: match mode {
            Mode::EdgeSwap => GenerationMode::default(),
            Mode::Uniform => GenerationMode::UniformRandom,
        },
        ..GeneratorConfig::default()
    };
    for t in 0..count {
        let topo = generate_acmn_with(child_seed(seed, &[0, t as u64]), &cfg)?;
        write_json(&out.join(format!("topology_{t:04}.json")), &TopologyFile::from(&topo))?;
    }
    info!("wrote {count} topologies to {}", out.display());
    Ok(())
}

fn assign(args: &AssignArgs) -> Result<()> {
    create_dir(&args.out)?;
    let (nsf, km) = load_nsfnet();
    let topo: LogicalTopology = match &args.topology {
        Some(p) => read_topology(p)?.logical()?,
        None => nsf,
    };
    let pdf = match args.pdf {
        Pdf::Nsfnet => fit_kde(&km)?,
    };
    let target = args
        .ellipticity
        .map(|d| EllipticityTarget::new(d, args.tolerance, args.mean_pair_km))
        .transpose()
        .map_err(|e| Error::Config(e.to_string()))?;
    for r in 0..args.realisations {
        let seed = child_seed(args.seed, &[1, r as u64]);
        let pt = match &target {
            None => assign_distances(&topo, &pdf, seed),
            Some(t) => {
                let draw = assign_with_ellipticity(&topo, t, &pdf, seed, args.budget)?;
                info!("realisation {r}: accepted after {} draws", draw.attempts);
                draw.topology
            }
        };
        write_json(&args.out.join(format!("physical_{r:04}.json")), &TopologyFile::from(&pt))?;
    }
    Ok(())
}

fn solve_one(topology: &Path, x_grid: &[f64], seed: u64, config: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = load_config(config)?;
    cfg.validate()?;
    let pt = read_topology(topology)?.physical()?;
    let layer = cfg.physical_layer()?;
    let sol = solve_instance(&pt, x_grid, cfg.k, seed, &layer, &cfg.rwa)?;
    create_dir(out)?;
    write_solution(out, &sol.solution)?;
    write_atomic(&out.join("candidates.tsv"), candidates_tsv(&sol.pools, &sol.demands).as_bytes())?;
    write_json(&out.join("per_x.json"), &sol.per_x)?;
    println!(
        "best x {:.2}: N_lambda {} total {:.3} Tb/s avg {:.1} Gb/s",
        sol.best.x,
        sol.best.n_lambda,
        sol.best.total_bps / 1e12,
        sol.best.avg_bps / 1e9
    );
    Ok(())
}

fn validate(solution: &Path, topology: Option<&Path>, wavelengths: usize) -> Result<bool> {
    let records = parse_solution_tsv(&read_to_string(solution)?)?;
    let topo = topology.map(|p| read_topology(p)?.logical()).transpose()?;
    let report = validate_lightpaths(&records, wavelengths, topo.as_ref(), None);
    for v in &report.violations {
        println!("violation: {v}");
    }
    println!(
        "{} lightpaths, N_lambda {}, max link occupancy {}: {}",
        report.lightpaths,
        report.n_lambda.map_or("mixed".to_string(), |n| n.to_string()),
        report.max_link_occupancy,
        if report.is_valid() { "valid" } else { "INVALID" }
    );
    Ok(report.is_valid())
}

fn sweep(kind: SweepKind, args: &SweepArgs) -> Result<()> {
    let cfg = load_config(args.config.as_deref())?;
    create_dir(&args.out)?;
    let res = run_sweep(kind, &cfg, &args.out)?;
    for p in &res.points {
        println!(
            "{:>8.2}  N_lambda {:>6.2}  avg {:>7.1} Gb/s  total {:>7.2} Tb/s  ({} runs)",
            p.axis_value, p.n_lambda.mean, p.avg_gbps.mean, p.total_tbps.mean, p.n_lambda.count
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::GenEnsemble { count, seed, mode, out } => gen_ensemble(count, seed, mode, &out)?,
        Command::Assign(a) => assign(&a)?,
        Command::SweepScale(a) => sweep(SweepKind::Scale, &a)?,
        Command::SweepEllipticity(a) => sweep(SweepKind::Ellipticity, &a)?,
        Command::SolveOne { topology, x_grid, seed, config, out } => {
            solve_one(&topology, &x_grid, seed, config.as_deref(), &out)?
        }
        Command::Validate { solution, topology, wavelengths } => {
            return validate(&solution, topology.as_deref(), wavelengths)
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) | Error::Parse(_) | Error::Json(_) | Error::InvalidArgument(_) => 2,
                Error::InfeasibleBudgetExceeded { .. } => 3,
                _ => 1,
            })
        }
    }
}
