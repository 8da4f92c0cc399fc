use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use samba_core::experiments;
use samba_core::fibbench;
use samba_core::metrics;
use samba_core::scenario::Scenario;
use samba_core::{Sim, Strategy, TopoParams};

#[derive(Parser)]
#[command(name = "samba", about = "SAMBA network simulator and FIB benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    #[value(name = "fib-vs-c")]
    FibVsC,
    #[value(name = "fib-vs-p")]
    FibVsP,
    #[value(name = "app-vs-k")]
    AppVsK,
}

#[derive(Subcommand)]
enum Command {
    /// Time lookups and insertions on character-mode tries of growing size.
    BenchFib {
        /// Trie sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [1_000usize, 10_000, 100_000, 1_000_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        repetitions: usize,
        #[arg(long, default_value_t = 100)]
        batch: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// CSV output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute one scenario file and emit a per-consumer throughput series.
    Run {
        /// Scenario file path.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        strategy: Option<CliStrategy>,
        /// Write an event trace to this path.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random topology and print its node/link listing.
    GenTopo {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 21)]
        core_routers: usize,
        #[arg(long, default_value_t = 16)]
        edge_routers: usize,
        #[arg(long, default_value_t = 100)]
        consumers: usize,
        #[arg(long, default_value_t = 4)]
        producers: usize,
        /// Distinct prefixes; 0 means max(consumers, producers).
        #[arg(long, default_value_t = 0)]
        prefixes: usize,
        #[arg(long, default_value_t = 1)]
        parallel_links: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a paired-strategy parameter sweep and emit its CSV.
    Sweep {
        experiment: Experiment,
        /// Sweep values, comma separated (defaults per experiment).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<usize>>,
        /// Number of seeds (1..=n).
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Secondary CSV with discovery-overhead counts (fib-vs-c only).
        #[arg(long)]
        overhead_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CliStrategy {
    Samba,
    #[value(name = "self-learning")]
    SelfLearning,
}

impl From<CliStrategy> for Strategy {
    fn from(s: CliStrategy) -> Strategy {
        match s {
            CliStrategy::Samba => Strategy::Samba,
            CliStrategy::SelfLearning => Strategy::SelfLearning,
        }
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)
                        .with_context(|| format!("creating {}", dir.display()))?;
                }
            }
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::BenchFib {
            sizes,
            repetitions,
            batch,
            seed,
            out,
        } => {
            let rows = fibbench::bench_fib(&sizes, repetitions, batch, seed)
                .map_err(|e| anyhow::anyhow!(e))?;
            write_out(out.as_deref(), &fibbench::bench_csv(&rows))
        }
        Command::Run {
            config,
            seed,
            strategy,
            trace,
            out,
        } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading scenario {}", config.display()))?;
            let scenario = Scenario::parse(&text)?;
            let (mut sim_cfg, topo) = scenario.realize(seed, strategy.map(Into::into))?;
            sim_cfg.trace = trace.is_some();
            let report = Sim::new(sim_cfg, topo).run();
            if let Some(path) = trace {
                write_out(Some(&path), &report.trace)?;
            }
            write_out(out.as_deref(), &metrics::throughput_csv(&report))
        }
        Command::GenTopo {
            seed,
            core_routers,
            edge_routers,
            consumers,
            producers,
            prefixes,
            parallel_links,
            out,
        } => {
            let params = TopoParams {
                core_routers,
                edge_routers,
                consumers,
                producers,
                prefixes,
                parallel_links,
                ..TopoParams::default()
            };
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let topo = samba_core::generate(&params, &mut rng)?;
            write_out(out.as_deref(), &topo.render())
        }
        Command::Sweep {
            experiment,
            values,
            seeds,
            out,
            overhead_out,
        } => {
            if seeds == 0 {
                bail!("--seeds must be at least 1");
            }
            let seed_range = 1..=seeds;
            match experiment {
                Experiment::FibVsC => {
                    let values = values.unwrap_or_else(|| vec![10, 100, 1000]);
                    let rows = experiments::fib_vs_c(seed_range, &values, 4);
                    if let Some(path) = overhead_out {
                        write_out(Some(&path), &metrics::overhead_csv(&rows))?;
                    }
                    write_out(out.as_deref(), &metrics::fib_size_csv(&rows))
                }
                Experiment::FibVsP => {
                    let values =
                        values.unwrap_or_else(|| (1..=11).map(|i| 2 * i).collect());
                    let rows = experiments::fib_vs_p(seed_range, &values, 100);
                    write_out(out.as_deref(), &metrics::fib_size_csv(&rows))
                }
                Experiment::AppVsK => {
                    let values = values.unwrap_or_else(|| (1..=10).collect());
                    let rows = experiments::app_vs_k(seed_range, &values, 30, 4);
                    write_out(out.as_deref(), &metrics::app_csv(&rows))
                }
            }
        }
    }
}
