use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gfs_bench::config::GraphSpec;
use gfs_bench::harness::RunReport;
use gfs_bench::trace::write_trace;
use gfs_bench::{emit_csv, run_dynamic, run_static, BenchError, ExperimentConfig};
use gfs_core::graph::{load_edge_list, write_edge_list};
use gfs_core::reconstruction::{gfs_reconstruct, ls_reconstruct, select_beta, ObservedSamples};
use gfs_core::sampler::{gfs_sample, naive_a_optimal_greedy, random_sample};
use gfs_core::spectral::{exact_eigendecompose, lp_filter, rotation_count, truncated_jacobi};
use gfs_core::Vector;

#[derive(Parser)]
#[command(name = "gfs", version, about = "Greedy A-optimal graph sampling and reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Sensor,
    Community,
    Cube,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleMethod {
    Gfs,
    Random,
    OracleGreedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReconMethod {
    Ls,
    GfsBiased,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Exact,
    Fgft,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    GenGraph {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        radius: f64,
        #[arg(long, default_value_t = 4)]
        communities: usize,
        #[arg(long, default_value_t = 0.3)]
        p_in: f64,
        #[arg(long, default_value_t = 0.01)]
        p_out: f64,
        #[arg(long, default_value_t = 10)]
        side: usize,
        #[arg(long, default_value_t = 2)]
        dims: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select a sample set; writes one node index per line.
    Sample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        bandwidth: usize,
        #[arg(long)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = SampleMethod::Gfs)]
        method: SampleMethod,
        /// Sampling shift; defaults to 1/(kappa0 - 1) with kappa0 = 100.
        #[arg(long, default_value_t = 1.0 / 99.0)]
        mu: f64,
        #[arg(long, value_enum, default_value_t = BasisArg::Fgft)]
        basis: BasisArg,
        #[arg(long, default_value_t = 6.0)]
        fgft_factor: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct a signal from samples; writes `node,value` CSV.
    Reconstruct {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        bandwidth: usize,
        /// Sample set, one node index per line.
        #[arg(long)]
        samples: PathBuf,
        /// Observed values, one per line in sample order.
        #[arg(long)]
        values: PathBuf,
        #[arg(long, value_enum, default_value_t = ReconMethod::GfsBiased)]
        method: ReconMethod,
        /// Shift for the biased estimator; defaults to the diagonal average.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_enum, default_value_t = BasisArg::Fgft)]
        basis: BasisArg,
        #[arg(long, default_value_t = 6.0)]
        fgft_factor: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a static sweep from a config file; writes records CSV.
    StaticBench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a time-varying sweep from a config file; writes records CSV.
    DynamicBench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Directory for per-trial availability traces.
        #[arg(long)]
        trace_dir: Option<PathBuf>,
    },
}

fn read_lines<V: std::str::FromStr>(path: &Path) -> Result<Vec<V>, BenchError> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, l)| {
            l.parse()
                .map_err(|_| BenchError::Config(format!("{}: entry {}: cannot parse `{l}`", path.display(), i + 1)))
        })
        .collect()
}

fn basis_for(graph: &gfs_core::Graph, basis: BasisArg, factor: f64) -> Result<gfs_core::Basis, BenchError> {
    let l = graph.laplacian::<f64>();
    Ok(match basis {
        BasisArg::Exact => exact_eigendecompose(&l)?,
        BasisArg::Fgft => truncated_jacobi(&l, rotation_count(factor, graph.n())),
    })
}

fn finish_bench(report: RunReport, out: &Path) -> Result<(), BenchError> {
    for event in &report.events {
        eprintln!("{event}");
    }
    emit_csv(&report.records, out)?;
    let failed = report.error_count();
    if failed > 0 {
        return Err(BenchError::FailedRows(failed));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::GenGraph {
            family,
            n,
            radius,
            communities,
            p_in,
            p_out,
            side,
            dims,
            seed,
            out,
        } => {
            let spec = match family {
                Family::Sensor => GraphSpec::Sensor { n, radius, seed },
                Family::Community => GraphSpec::Community {
                    n,
                    communities,
                    p_in,
                    p_out,
                    seed,
                },
                Family::Cube => GraphSpec::Cube { side, dims },
            };
            let graph = spec.build()?;
            let mut w = std::io::BufWriter::new(std::fs::File::create(&out)?);
            write_edge_list(&graph, &mut w)?;
            w.flush()?;
        }
        Command::Sample {
            graph,
            bandwidth,
            budget,
            method,
            mu,
            basis,
            fgft_factor,
            seed,
            out,
        } => {
            let graph = load_edge_list(&graph)?;
            let set = match method {
                SampleMethod::Random => random_sample(graph.n(), budget, seed)?,
                SampleMethod::Gfs => {
                    let b = basis_for(&graph, basis, fgft_factor)?;
                    gfs_sample(&lp_filter(&b, bandwidth)?, mu, budget)?.sample_set
                }
                SampleMethod::OracleGreedy => {
                    let b = basis_for(&graph, basis, fgft_factor)?;
                    naive_a_optimal_greedy(&b, bandwidth, mu, budget)?
                }
            };
            let text: String = set.iter().map(|i| format!("{i}\n")).collect();
            std::fs::write(&out, text)?;
        }
        Command::Reconstruct {
            graph,
            bandwidth,
            samples,
            values,
            method,
            beta,
            basis,
            fgft_factor,
            out,
        } => {
            let graph = load_edge_list(&graph)?;
            let set: Vec<usize> = read_lines(&samples)?;
            let vals: Vec<f64> = read_lines(&values)?;
            let obs = ObservedSamples::new(set, Vector::from_vec(vals))?;
            let estimate = match method {
                ReconMethod::Ls => ls_reconstruct(&exact_eigendecompose(&graph.laplacian::<f64>())?, bandwidth, &obs)?,
                ReconMethod::GfsBiased => {
                    let filter = lp_filter(&basis_for(&graph, basis, fgft_factor)?, bandwidth)?;
                    let beta = match beta {
                        Some(b) => b,
                        None => select_beta(&filter, obs.sample_set.len())?,
                    };
                    gfs_reconstruct(&filter, beta, &obs)?
                }
            };
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_path(&out)?;
            w.write_record(["node", "value"])?;
            for (i, v) in estimate.signal.iter().enumerate() {
                w.write_record([i.to_string(), gfs_bench::record::format_sig12(*v)])?;
            }
            w.flush()?;
        }
        Command::StaticBench { config, out } => {
            let config = ExperimentConfig::load(&config)?;
            finish_bench(run_static(&config)?, &out)?;
        }
        Command::DynamicBench {
            config,
            out,
            trace_dir,
        } => {
            let config = ExperimentConfig::load(&config)?;
            let report = run_dynamic(&config)?;
            if let Some(dir) = trace_dir {
                std::fs::create_dir_all(&dir)?;
                for (trial, masks) in report.traces.iter().enumerate() {
                    let file = std::fs::File::create(dir.join(format!("trace_trial{trial}.csv")))?;
                    write_trace(masks, std::io::BufWriter::new(file))?;
                }
            }
            finish_bench(report, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
