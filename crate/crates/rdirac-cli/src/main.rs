//! `rdirac`: evaluate Jost functions, determinants and states of radial
//! Dirac operators from the command line.

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use radial_dirac::states::Region;

use commands::{Command, Settings};
use config::ConfigError;
use output::Format;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_CEILING: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "rdirac", version, about = "Jost functions, resonances and trace formulas for radial Dirac operators")]
struct Cli {
    /// Potential description (TOML: kappa, mass, [[pieces]] lo/hi/coeffs).
    #[arg(long)]
    potential: PathBuf,
    #[arg(long, value_enum)]
    command: Command,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Accepted disagreement between the Jost routes.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Search rectangle `re_lo,re_hi,im_lo,im_hi`.
    #[arg(long, allow_hyphen_values = true)]
    region: Option<String>,
    /// Radii for `counting` and `hadamard`, comma separated.
    #[arg(long)]
    radii: Option<String>,
    /// Nyström nodes for the determinant.
    #[arg(long, default_value_t = 512)]
    nodes: usize,
    /// Truncation radius of the resonance sums.
    #[arg(long, default_value_t = 120.0)]
    trunc: f64,
    /// Spectral points, comma separated, e.g. `1.5,2+0.5i,-3-1i`.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: Option<String>,
    /// Real grid `lo,hi,n`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Largest accepted `2|Im k|γ`.
    #[arg(long, default_value_t = radial_dirac::jost::HARD_CEILING)]
    ceiling: f64,
    /// Cutoff of the Cauchy integral of Ω in `relation-check`.
    #[arg(long, default_value_t = 400.0)]
    t_max: f64,
    /// Also report the share of zeros off the sectors around the real axis.
    #[arg(long)]
    sectors: bool,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
}

fn settings(cli: &Cli) -> Result<Settings, ConfigError> {
    for (name, v) in [("--tol", cli.tol), ("--trunc", cli.trunc), ("--ceiling", cli.ceiling), ("--t-max", cli.t_max)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ConfigError(format!("{name} must be positive, got {v}")));
        }
    }
    if cli.ceiling > radial_dirac::jost::HARD_CEILING {
        return Err(ConfigError(format!("--ceiling is capped at {}", radial_dirac::jost::HARD_CEILING)));
    }
    if cli.nodes < 16 {
        return Err(ConfigError(format!("--nodes must be at least 16, got {}", cli.nodes)));
    }
    let pot = config::parse_potential_file(&cli.potential)?;
    let mut lambdas = Vec::new();
    if let Some(s) = &cli.lambdas {
        lambdas.extend(config::parse_list(s, config::parse_complex)?);
    }
    if let Some(s) = &cli.grid {
        lambdas.extend(config::parse_grid(s)?.into_iter().map(|x| num_complex::Complex64::new(x, 0.0)));
    }
    let region = match &cli.region {
        Some(s) => {
            let v = config::parse_list(s, config::parse_real)?;
            if v.len() != 4 {
                return Err(ConfigError(format!("--region expects re_lo,re_hi,im_lo,im_hi, got `{s}`")));
            }
            Some(Region::new(v[0], v[1], v[2], v[3]).map_err(|e| ConfigError(e.to_string()))?)
        }
        None => None,
    };
    let radii = match &cli.radii {
        Some(s) => config::parse_list(s, config::parse_real)?,
        None => Vec::new(),
    };
    if radii.iter().any(|&r| r <= 0.0) {
        return Err(ConfigError("--radii must be positive".into()));
    }
    Ok(Settings { pot, lambdas, region, radii, nodes: cli.nodes, trunc: cli.trunc, tol: cli.tol, ceiling: cli.ceiling, t_max: cli.t_max, sectors: cli.sectors })
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let s = match settings(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("rdirac: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let need = commands::required_measure(cli.command, &s);
    if need > s.ceiling {
        eprintln!(
            "rdirac: the request reaches 2|Im k|γ = {need:.3} beyond the validity ceiling {}; narrow the region or radii, or raise --ceiling",
            s.ceiling
        );
        return ExitCode::from(EXIT_CEILING);
    }
    let run = || commands::run(cli.command, &s);
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                eprintln!("rdirac: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
        },
        None => run(),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("rdirac: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let name = cli.command.name();
    let written = open_out(&cli.out).and_then(|mut w| {
        output::write_table(&mut *w, cli.format, name, s.pot.name(), &outcome.rows)?;
        w.flush()
    });
    if let Err(e) = written {
        eprintln!("rdirac: cannot write output: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    if outcome.failures.is_empty() {
        return ExitCode::SUCCESS;
    }
    for f in &outcome.failures {
        eprintln!("rdirac: {} failed at {}{:+}i: {}", f.stage, f.re_lambda, f.im_lambda, f.error);
    }
    let manifest = match &cli.out {
        Some(p) => {
            let mut path = p.clone().into_os_string();
            path.push(".failures.json");
            File::create(PathBuf::from(path)).map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
        }
        None => Ok(Box::new(io::stderr()) as Box<dyn Write>),
    };
    if let Ok(mut m) = manifest {
        let _ = output::write_manifest(&mut *m, name, s.pot.name(), outcome.rows.len(), &outcome.failures).and_then(|_| m.flush());
    }
    ExitCode::from(if outcome.ceiling_hit { EXIT_CEILING } else { EXIT_NUMERICAL })
}
