use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ecm_cli::config::Config;
use ecm_cli::error::{CliError, Result};
use ecm_cli::experiment::{compare_fronts, labeled_csv, read_front_csv, run_experiment, sweep};
use ecm_core::datagen::builtin;

#[derive(Parser)]
#[command(
    name = "ecm",
    version,
    about = "Entropy c-means clustering experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured method over every configured dataset.
    Run {
        /// TOML config path.
        config: PathBuf,
    },
    /// Write one built-in mixture dataset as CSV, label in the last column.
    Datagen {
        /// Generator name: proximity1..proximity5 or spread1..spread5.
        name: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun a config once per value of one parameter.
    Sweep {
        config: PathBuf,
        /// One of: pop, fe, pool, tour, mu, mum, t, f, cr, m, c.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Compare two objective CSVs: spacing and both epsilon indicators.
    Metrics { front_a: PathBuf, front_b: PathBuf },
}

fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("ECM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .map_err(|_| CliError::InvalidConfig(format!("ECM_THREADS={raw} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::InvalidConfig(e.to_string()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config } => {
            let cfg = Config::from_path(&config)?;
            let report = run_experiment(&cfg)?;
            for (ds, dr) in &report.datasets {
                for (m, mr) in &dr.methods {
                    let ari = mr
                        .max_ari
                        .map_or_else(|| "-".to_string(), |a| format!("{a:.4}"));
                    println!("{ds:<14} {m:<10} max_ari={ari} ssm={:.4}", mr.ssm_mean);
                }
            }
            if !report.avg_ranks.is_empty() {
                let ranks: Vec<String> = report
                    .avg_ranks
                    .iter()
                    .map(|(k, v)| format!("{k}={v:.2}"))
                    .collect();
                println!("avg ranks: {}", ranks.join(" "));
            }
            println!("report: {}", cfg.output_dir.join("report.json").display());
        }
        Command::Datagen { name, seed, out } => {
            let lds = builtin::<f64>(&name, seed)?;
            let csv = labeled_csv(&lds.dataset, &lds.labels);
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
        }
        Command::Sweep {
            config,
            param,
            values,
        } => {
            let cfg = Config::from_path(&config)?;
            let rows = sweep(&cfg, &param, &values)?;
            println!(
                "{} rows: {}",
                rows.len(),
                cfg.output_dir.join("sweep.csv").display()
            );
        }
        Command::Metrics { front_a, front_b } => {
            let a = read_front_csv(&front_a)?;
            let b = read_front_csv(&front_b)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&compare_fronts(&a, &b)?)?
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads().and_then(|()| run(cli)) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
