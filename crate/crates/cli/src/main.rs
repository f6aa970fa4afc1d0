//! Command-line front end: experiment presets, ad-hoc queries, weight export
//! and cross-validation. Angles are degrees at this boundary and radians
//! inside the library.

mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use superdir::{ArrayGeometry, CouplingMatrix, Direction};

#[derive(Parser)]
#[command(name = "superdir", version, about = "Superdirective URA directivity analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputOpts {
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: csv for tabular commands, json for weights)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Suppress the provenance comment header
    #[arg(long)]
    no_banner: bool,
}

#[derive(Args)]
struct GeometryOpts {
    /// Element count along z
    #[arg(long, short)]
    m: usize,
    /// Element count along x
    #[arg(long, short)]
    n: usize,
    /// x-spacing in wavelengths
    #[arg(long, default_value_t = 0.5)]
    dx: f64,
    /// z-spacing in wavelengths
    #[arg(long, default_value_t = 0.5)]
    dz: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum-directivity pattern over a (phi, theta) grid
    Pattern {
        #[command(flatten)]
        geom: GeometryOpts,
        /// Azimuth sample count (inclusive endpoints)
        #[arg(long, default_value_t = 181)]
        phi_count: usize,
        /// Zenith sample count (inclusive endpoints)
        #[arg(long, default_value_t = 181)]
        theta_count: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Endfire-plane cut (phi = 0, theta swept over [0, 180] degrees)
    Cut {
        #[command(flatten)]
        geom: GeometryOpts,
        #[arg(long, default_value_t = 181)]
        theta_count: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Endfire-plane cuts for a list of equal-axis spacings
    Sweep {
        /// Element count along z
        #[arg(long, short)]
        m: usize,
        /// Element count along x
        #[arg(long, short)]
        n: usize,
        /// Comma-separated spacings in wavelengths, e.g. 0.5,0.3,0.1
        #[arg(long, value_delimiter = ',', required = true)]
        spacings: Vec<f64>,
        #[arg(long, default_value_t = 181)]
        theta_count: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Optimal excitation weights for one direction (JSON)
    Weights {
        #[command(flatten)]
        geom: GeometryOpts,
        /// Azimuth in degrees, [0, 180]
        #[arg(long)]
        phi: f64,
        /// Zenith in degrees, [0, 180]
        #[arg(long)]
        theta: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the cross-validation checks for a geometry
    Verify {
        #[command(flatten)]
        geom: GeometryOpts,
        /// Gauss-Legendre order for the quadrature oracles
        #[arg(long, default_value_t = 64)]
        quad_order: usize,
        /// RNG seed for the randomized checks
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

const EXIT_COMPUTE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(AppError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(AppError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_COMPUTE)
        }
    }
}

enum AppError {
    Config(String),
    Compute(String),
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Compute(format!("I/O failure: {e}"))
    }
}

fn geometry(opts: &GeometryOpts) -> Result<ArrayGeometry, AppError> {
    ArrayGeometry::new(opts.m, opts.n, opts.dx, opts.dz).map_err(|e| AppError::Config(e.to_string()))
}

fn build_coupling(geom: ArrayGeometry) -> Result<CouplingMatrix, AppError> {
    CouplingMatrix::build(geom).map_err(|e| AppError::Compute(e.to_string()))
}

fn direction_from_degrees(phi_deg: f64, theta_deg: f64) -> Result<Direction, AppError> {
    Direction::new(phi_deg.to_radians(), theta_deg.to_radians())
        .map_err(|e| AppError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<ExitCode, AppError> {
    match cli.command {
        Command::Pattern { geom, phi_count, theta_count, output } => {
            if phi_count < 2 || theta_count < 2 {
                return Err(AppError::Config("phi_count and theta_count must be at least 2".into()));
            }
            let g = geometry(&geom)?;
            let c = build_coupling(g)?;
            let grid = superdir::pattern_grid(&c, phi_count, theta_count)
                .map_err(|e| AppError::Compute(e.to_string()))?;
            output::write_pattern(&grid, &output)?;
            let (peak, phi, theta) = grid.peak();
            println!(
                "peak {:.2} dB at phi {:.1} deg, theta {:.1} deg",
                peak,
                phi.to_degrees(),
                theta.to_degrees()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Cut { geom, theta_count, output } => {
            if theta_count < 2 {
                return Err(AppError::Config("theta_count must be at least 2".into()));
            }
            let g = geometry(&geom)?;
            let c = build_coupling(g)?;
            let cut = superdir::endfire_plane_cut(&c, theta_count)
                .map_err(|e| AppError::Compute(e.to_string()))?;
            output::write_cut(&g, &cut, &output)?;
            let (theta, peak) = cut
                .iter()
                .copied()
                .fold((0.0, f64::NEG_INFINITY), |acc, (t, v)| if v > acc.1 { (t, v) } else { acc });
            println!("peak {:.2} dB at theta {:.1} deg", peak, theta.to_degrees());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { m, n, spacings, theta_count, output } => {
            if spacings.is_empty() {
                return Err(AppError::Config("spacing list must be nonempty".into()));
            }
            if theta_count < 2 {
                return Err(AppError::Config("theta_count must be at least 2".into()));
            }
            let sweep = superdir::spacing_sweep(m, n, &spacings, theta_count);
            let succeeded = sweep.cuts.iter().filter(|cut| cut.outcome.is_ok()).count();
            output::write_sweep(&sweep, &output)?;
            for (idx, cut) in sweep.cuts.iter().enumerate() {
                if let Some(peak) = sweep.peak_db(idx) {
                    println!("spacing {} peak {:.2} dB", cut.dx, peak);
                }
            }
            if succeeded == 0 {
                Err(AppError::Compute("every spacing failed".into()))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Weights { geom, phi, theta, output } => {
            if output.format == Some(Format::Csv) {
                return Err(AppError::Config(
                    "the weights command emits JSON only; drop --format csv".into(),
                ));
            }
            let g = geometry(&geom)?;
            let dir = direction_from_degrees(phi, theta)?;
            let c = build_coupling(g)?;
            let opt = superdir::optimal_excitation(&c, dir)
                .map_err(|e| AppError::Compute(e.to_string()))?;
            output::write_weights(&g, &c, dir, &opt, &output)?;
            println!("g_star {:.2} dB at phi {:.1} deg, theta {:.1} deg", opt.achieved.db, phi, theta);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { geom, quad_order, seed } => {
            if quad_order < 8 {
                return Err(AppError::Config("quad_order must be at least 8".into()));
            }
            let g = geometry(&geom)?;
            verify::run(g, quad_order, seed)
        }
    }
}
