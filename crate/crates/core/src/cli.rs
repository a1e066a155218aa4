//! Command-line front end for the `jnsc` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::harness::{compare_runs, run, run_and_write, ExperimentConfig, ExperimentKind};
use crate::matrix_io::{read_bit_matrix, write_bit_matrix};
use crate::netcode::build_broadcast_code;
use crate::network::NetworkSpec;
use crate::rng::stream;
use crate::sparsifier::{distortion_rate, gauss_baseline, sparsify, sparsify_exhaustive};

#[derive(Debug, Parser)]
#[command(name = "jnsc", version, about = "Joint network-source code design and evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sparsify a full-column-rank matrix by invertible column operations.
    Sparsify(SparsifyArgs),
    /// Mean distortion of randomized linear-code encoding against D(R).
    RdBench(RdBenchArgs),
    /// Build a linear broadcast code for a network file.
    Netcode(NetcodeArgs),
    /// Bit error rate of syndrome decoding over a BSC sweep.
    Ber(BerArgs),
    /// Run an experiment config.
    Run(RunArgs),
    /// Compare two result CSVs column by column.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Randomized,
    Exhaustive,
    Gauss,
}

#[derive(Debug, Args)]
pub struct SparsifyArgs {
    /// Matrix file; omit to draw a uniform n x (n-k) matrix.
    #[arg(long, conflicts_with_all = ["n", "k"])]
    pub input: Option<PathBuf>,
    #[arg(long, requires = "k")]
    pub n: Option<usize>,
    #[arg(long, requires = "n")]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "randomized")]
    pub method: Method,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 5)]
    pub passes: usize,
    #[arg(long)]
    pub seed: u64,
    /// Where to write `A·P`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write `P`.
    #[arg(long)]
    pub p_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RdBenchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub rate: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    pub draws: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NetcodeArgs {
    #[arg(long)]
    pub net: PathBuf,
    /// Source dimension; defaults to the largest terminal max-flow.
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub m: u32,
    #[arg(long, default_value_t = 50)]
    pub max_attempts: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(format!("not a nonnegative integer: {s}"));
    }
    Ok(v as u64)
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["h", "structured", "design"]))]
pub struct BerArgs {
    /// Parity-check matrix file in the `x·H` orientation.
    #[arg(long = "H", value_name = "FILE")]
    pub h: Option<PathBuf>,
    /// Blocklength of a structured (4, 5)-regular matrix.
    #[arg(long)]
    pub structured: Option<usize>,
    /// TOML with network, n, m, rates and optional lambda, trials, passes,
    /// terminal.
    #[arg(long)]
    pub design: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p_list: Vec<f64>,
    /// Bits per point; scientific notation accepted.
    #[arg(long, value_parser = parse_count)]
    pub bits: u64,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub config: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the config's output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
}

/// Runs a parsed command; the returned value is the process exit status.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Sparsify(a) => cmd_sparsify(a, out),
        Command::RdBench(a) => cmd_rd_bench(a, out),
        Command::Netcode(a) => cmd_netcode(a, out),
        Command::Ber(a) => cmd_ber(a, out),
        Command::Run(a) => cmd_run(a, out),
        Command::Compare(a) => cmd_compare(a, out),
    }
}

/// Exit status for an error: 2 for bad input, 3 for model failures.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        2
    } else {
        3
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_sparsify(a: SparsifyArgs, out: &mut dyn Write) -> Result<i32> {
    let m = match (&a.input, a.n, a.k) {
        (Some(p), _, _) => read_bit_matrix(p)?,
        (None, Some(n), Some(k)) => {
            if k >= n {
                return Err(Error::InvalidParameter {
                    name: "k",
                    reason: format!("need k < n, got n={n}, k={k}"),
                });
            }
            let mut r = stream(a.seed, &[0]);
            loop {
                let m = BitMatrix::random(n, n - k, &mut r);
                if m.rank() == n - k {
                    break m;
                }
            }
        }
        _ => {
            return Err(Error::InvalidParameter {
                name: "input",
                reason: "give --input or both --n and --k".into(),
            })
        }
    };
    let res = match a.method {
        Method::Randomized => sparsify(&m, a.trials, a.passes, a.seed)?,
        Method::Exhaustive => sparsify_exhaustive(&m)?,
        Method::Gauss => gauss_baseline(&m)?,
    };
    if let Some(p) = &a.out {
        write_bit_matrix(p, &res.ap)?;
    }
    if let Some(p) = &a.p_out {
        write_bit_matrix(p, &res.p)?;
    }
    let summary = serde_json::json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "density_before": m.density(),
        "density": res.density,
        "gauss_density": gauss_baseline(&m)?.density,
        "dr_bound": distortion_rate(m.cols() as f64 / m.rows() as f64)?,
        "pass_densities": res.pass_densities,
        "seed": a.seed,
    });
    writeln!(out, "{summary}")?;
    Ok(0)
}

fn cmd_rd_bench(a: RdBenchArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = ExperimentConfig {
        kind: Some(ExperimentKind::RdGap),
        seed: Some(a.seed),
        n: Some(a.n),
        rates: Some(a.rate),
        draws: Some(a.draws),
        instances: Some(a.instances),
        ..ExperimentConfig::default()
    };
    let res = run(&cfg)?;
    emit(out, a.out.as_deref(), &res.table.to_csv()?)?;
    Ok(0)
}

fn cmd_netcode(a: NetcodeArgs, out: &mut dyn Write) -> Result<i32> {
    let net = NetworkSpec::read(&a.net)?;
    let w =
        a.w.unwrap_or_else(|| net.terminals().iter().map(|&t| net.maxflow(t)).max().unwrap_or(1));
    let code = build_broadcast_code(&net, w, a.m, &mut stream(a.seed, &[]), a.max_attempts)?;
    let mut json = code.to_json()?;
    json.push('\n');
    emit(out, a.out.as_deref(), &json)?;
    Ok(0)
}

fn design_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg: ExperimentConfig = toml::from_str(&text).map_err(|e| Error::Config {
        field: "design".into(),
        reason: e.message().to_string(),
    })?;
    cfg.base_dir = path.parent().map(Path::to_path_buf);
    Ok(cfg)
}

fn cmd_ber(a: BerArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = match &a.design {
        Some(p) => design_config(p)?,
        None => ExperimentConfig::default(),
    };
    cfg.kind = Some(ExperimentKind::BerSweep);
    cfg.seed = Some(a.seed);
    cfg.p_list = Some(a.p_list);
    cfg.bits = Some(a.bits);
    cfg.h_file = a.h;
    cfg.structured = a.structured;
    if a.max_iter.is_some() {
        cfg.max_iter = a.max_iter;
    }
    cfg.output = None;
    cfg.svg = None;
    let res = run(&cfg)?;
    emit(out, a.out.as_deref(), &res.table.to_csv()?)?;
    if let Some(p) = &a.svg {
        std::fs::write(p, res.plot.render())?;
    }
    Ok(0)
}

fn cmd_run(a: RunArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = ExperimentConfig::load(&a.config)?;
    if a.seed.is_some() {
        cfg.seed = a.seed;
    }
    // command-line paths are relative to the working directory
    let cwd = std::env::current_dir()?;
    if let Some(p) = a.out {
        cfg.output = Some(cwd.join(p));
    }
    if let Some(p) = a.svg {
        cfg.svg = Some(cwd.join(p));
    }
    let go = || run_and_write(&cfg);
    let res = match a.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParameter {
                name: "threads",
                reason: e.to_string(),
            })?
            .install(go)?,
        None => go()?,
    };
    if cfg.output.is_none() {
        out.write_all(res.table.to_csv()?.as_bytes())?;
    }
    Ok(0)
}

fn cmd_compare(a: CompareArgs, out: &mut dyn Write) -> Result<i32> {
    let rep = compare_runs(&a.a, &a.b)?;
    write!(out, "{rep}")?;
    Ok(if rep.within(a.tolerance) { 0 } else { 1 })
}
