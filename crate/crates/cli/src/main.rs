use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use localmst::experiments::{run_and_write, Command, ExperimentConfig};

/// Monte Carlo experiments on local search for random minimum spanning trees.
///
/// Every value can come from a config file (`--config`, one `key = value` per
/// line); flags override it. The base seed is mandatory.
#[derive(Parser, Debug)]
#[command(name = "localmst", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Graph sizes, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Weight distribution: `uniform`, `uniform:B`, `texp:RATE:CAP` or `pwl:X0:F0,X1:F1,...`.
    #[arg(long, global = true)]
    dist: Option<String>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Start graph: path, star, clique, random_tree or mst.
    #[arg(long, global = true)]
    start: Option<String>,
    /// Threshold p for `appendix`.
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Run threshold W for `run-index` and `good-sets`.
    #[arg(long, global = true)]
    w: Option<f64>,
    /// Run length L for `run-index` and `good-sets`.
    #[arg(long, global = true)]
    l: Option<usize>,
    /// Allow `oracle` at n = 7.
    #[arg(long, global = true)]
    force: bool,
    /// CSV output path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON summary path; printed to stdout when absent.
    #[arg(long, global = true)]
    summary: Option<PathBuf>,
    /// Config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the merged config in file form and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// MST weight against ζ(3) / f(0).
    Zeta3,
    /// Pipeline cost against ρ* + ε.
    Upper,
    /// Heavy edges any cheap sequence must keep.
    Lower,
    /// Weighted MST diameter across sizes.
    WdiamScan,
    /// Kruskal forest and random graph components.
    Coupling,
    /// Threshold snapshot quantities.
    Appendix,
    /// Run index on the canonical path.
    RunIndex,
    /// Weighted diameters along the U-sequence.
    GoodSets,
    /// Exact cost on tiny graphs against the pipeline.
    Oracle,
    /// Pipeline cost against its per-phase bound.
    Pipeline,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Zeta3 => Command::Zeta3,
            Cmd::Upper => Command::Upper,
            Cmd::Lower => Command::Lower,
            Cmd::WdiamScan => Command::WdiamScan,
            Cmd::Coupling => Command::Coupling,
            Cmd::Appendix => Command::Appendix,
            Cmd::RunIndex => Command::RunIndex,
            Cmd::GoodSets => Command::GoodSets,
            Cmd::Oracle => Command::Oracle,
            Cmd::Pipeline => Command::Pipeline,
        }
    }
}

fn config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let command: Command = cli.command.into();
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let mut cfg = ExperimentConfig::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            cfg.command = command;
            cfg
        }
        None => {
            let seed = cli.seed.ok_or("--seed is required (or a config file with a seed)")?;
            ExperimentConfig::new(command, seed)
        }
    };
    let mut set = |key: &str, value: Option<String>| -> Result<(), String> {
        match value {
            Some(v) => cfg.set(key, &v).map_err(|e| e.to_string()),
            None => Ok(()),
        }
    };
    let join = |v: &Vec<usize>| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    set("n", cli.n.as_ref().map(join))?;
    set("trials", cli.trials.map(|v| v.to_string()))?;
    set("seed", cli.seed.map(|v| v.to_string()))?;
    set("dist", cli.dist.clone())?;
    set("epsilon", cli.epsilon.map(|v| v.to_string()))?;
    set("start", cli.start.clone())?;
    set("p", cli.p.map(|v| v.to_string()))?;
    set("w", cli.w.map(|v| v.to_string()))?;
    set("l", cli.l.map(|v| v.to_string()))?;
    set("force", cli.force.then(|| "true".to_string()))?;
    set("out", cli.out.as_ref().map(|p| p.display().to_string()))?;
    set("summary", cli.summary.as_ref().map(|p| p.display().to_string()))?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.print_config {
        print!("{}", cfg.to_text());
        return ExitCode::SUCCESS;
    }
    match run_and_write(&cfg) {
        Ok(report) => {
            if cfg.summary.is_none() {
                println!("{}", serde_json::to_string_pretty(&report.summary).expect("summary is valid JSON"));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
