use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eqc::dataset::AdhocParams;
use eqc::experiment::{
    compare_models, plateau_csv, probe_plateau, run_experiment, write_adhoc, write_atomic, ExperimentConfig,
    ExternalScore,
};
use eqc::variational::{log_variance_slope, ProbeObservable};

#[derive(Parser)]
#[command(name = "eqc", version, about = "Evolutionary and variational quantum classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all repetitions of one experiment config.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run two configs on identical splits and tabulate test accuracy.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "out/compare")]
        out: PathBuf,
        /// Externally measured accuracy, `name=value`; repeatable.
        #[arg(long = "external")]
        external: Vec<ExternalScore>,
    },
    /// Gradient variance of a random layered ansatz versus qubit count.
    ProbePlateau {
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        layers: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use Z on qubit 0 instead of the global parity.
        #[arg(long)]
        local: bool,
        /// CSV destination; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an ad-hoc dataset (CSV plus `.meta.toml` sidecar).
    GenAdhoc {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0.3)]
        gap: f64,
        /// Samples per class.
        #[arg(long, default_value_t = 30)]
        per_class: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grid points per dimension.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: &PathBuf) -> eqc::Result<ExperimentConfig> {
    ExperimentConfig::from_file(path)
}

fn execute(cmd: Command) -> eqc::Result<()> {
    match cmd {
        Command::Run { config, out } => {
            let cfg = load(&config)?;
            let dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out").join(cfg.display_name()));
            let s = run_experiment(&cfg, &dir)?;
            let t = s.test_accuracy();
            println!(
                "{}: {} runs, test accuracy {:.4} ± {:.4}, {} perfect; written to {}",
                s.name,
                s.runs.len(),
                t.mean,
                t.std,
                s.perfect_runs(),
                dir.display()
            );
        }
        Command::Compare { a, b, out, external } => {
            let table = compare_models(&load(&a)?, &load(&b)?, &external, &out)?;
            print!("{}", table.to_text());
        }
        Command::ProbePlateau {
            n_list,
            layers,
            samples,
            seed,
            local,
            out,
        } => {
            let obs = if local { ProbeObservable::Local } else { ProbeObservable::Global };
            let rows = probe_plateau(&n_list, layers, samples, seed, obs)?;
            let bytes = plateau_csv(&rows)?;
            match out {
                Some(p) => {
                    write_atomic(&p, &bytes)?;
                    if rows.len() > 1 {
                        println!("log-variance slope {:.4}", log_variance_slope(&rows));
                    }
                }
                None => print!("{}", String::from_utf8_lossy(&bytes)),
            }
        }
        Command::GenAdhoc {
            dim,
            gap,
            per_class,
            seed,
            grid,
            out,
        } => {
            let mut p = AdhocParams::new(dim, gap, per_class, seed);
            p.grid = grid;
            let d = write_adhoc(&p, &out)?;
            println!("{} samples written to {}", d.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
