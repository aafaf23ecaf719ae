use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dsm::Dim;
use dsm_cli::commands::{cmd_image, cmd_reproduce, cmd_synthesize, cmd_verify, VerifyOptions};
use dsm_cli::config::Config;
use dsm_cli::{CliError, CliResult};

/// Direct sampling imaging of acoustic scatterers.
///
/// Set DSM_THREADS to limit the number of worker threads.
#[derive(Parser)]
#[command(name = "dsm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DimArg {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the forward problem and write near- and far-field sample files.
    Synthesize {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides `noise.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Image sample files; several incidents are max-combined.
    Image {
        config: PathBuf,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Base name of the CSV and PPM outputs.
        #[arg(long, default_value = "indicator")]
        name: String,
    },
    /// Check the far-field correlation identity and the forward solver.
    Verify {
        #[arg(long, value_enum, default_value = "both")]
        dim: DimArg,
        /// Quadrature size for every dimension (default 512 in 2D, 64 in 3D).
        #[arg(long)]
        nquad: Option<usize>,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 4.0)]
        rmax: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a preset end to end: data, images and a component report.
    Reproduce {
        example: String,
        /// Optional configuration for grid, protocol and cutoff.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Noise levels (default: `noise.epsilon` of the configuration).
        #[arg(long = "epsilon", value_delimiter = ',')]
        epsilons: Vec<f64>,
        /// Seeds for the noisy runs (default: `noise.seed`).
        #[arg(long = "seed", value_delimiter = ',')]
        seeds: Vec<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("DSM_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Config(format!("DSM_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::Synthesize { config, out, seed } => {
            let mut cfg = Config::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            for p in cmd_synthesize(&cfg, &out)? {
                println!("{}", p.display());
            }
        }
        Command::Image {
            config,
            files,
            out,
            name,
        } => {
            let cfg = Config::load(&config)?;
            let img = cmd_image(&cfg, &files, &out, &name)?;
            let (_, p) = img.argmax();
            println!("argmax ({:.4}, {:.4}); wrote {name}.csv and {name}.ppm", p.x(), p.y());
        }
        Command::Verify {
            dim,
            nquad,
            pairs,
            rmax,
            seed,
            out,
        } => {
            let dims = match dim {
                DimArg::Two => vec![Dim::Two],
                DimArg::Three => vec![Dim::Three],
                DimArg::Both => vec![Dim::Two, Dim::Three],
            };
            let opts = VerifyOptions {
                dims,
                nquad,
                pairs,
                rmax,
                seed,
            };
            for m in cmd_verify(&opts, &out)? {
                println!("{}: {:.3e} (tolerance {:.1e})", m.name, m.value, m.tolerance);
            }
        }
        Command::Reproduce {
            example,
            config,
            epsilons,
            seeds,
            out,
        } => {
            let cfg = match config {
                Some(p) => Config::load(&p)?,
                None => Config::default(),
            };
            let epsilons = if epsilons.is_empty() {
                cfg.epsilons.clone()
            } else {
                epsilons
            };
            if epsilons.iter().any(|e| !(*e >= 0.0)) {
                return Err(CliError::Config("noise levels must be non-negative".into()));
            }
            let seeds = if seeds.is_empty() { vec![cfg.seed] } else { seeds };
            let rep = cmd_reproduce(&example, &cfg, &epsilons, &seeds, &out)?;
            print!(
                "{}",
                std::fs::read_to_string(out.join("report.txt")).map_err(|e| CliError::io(&out, e))?
            );
            eprintln!("{} files written to {}", rep.files.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dsm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
