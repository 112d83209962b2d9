use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use psbar_cli::{emit, gnuplot_script, run, Mode, RunConfig};

/// Cross sections for H̄⁺ formation in Ps + H̄ collisions in a Debye plasma.
#[derive(Parser)]
#[command(name = "psbar-xsec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single differential cross section dσ/dΩ over an angle grid.
    Sdcs(Args),
    /// Total cross section over energies.
    Tcs(Args),
}

/// List flags take `a,b,c` or `start:stop:count`. Flags override the
/// config file.
#[derive(clap::Args)]
struct Args {
    /// `key = value` settings file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ps states: 1s, 2s, 2p, 3s.
    #[arg(long)]
    state: Option<String>,
    /// Incident Ps energies (eV).
    #[arg(long)]
    energy_ev: Option<String>,
    /// Screening parameters μ (1/a₀).
    #[arg(long)]
    mu: Option<String>,
    /// Ejection angles (deg), SDCS only [default: 0:180:19].
    #[arg(long)]
    angles: Option<String>,
    /// Quasi-Monte Carlo points per amplitude [default: 1000000].
    #[arg(long)]
    samples: Option<String>,
    /// Master seed [default: 1].
    #[arg(long)]
    seed: Option<String>,
    /// Random shifts per amplitude [default: 16].
    #[arg(long)]
    replicates: Option<String>,
    /// Gauss–Legendre nodes in cosθ for TCS [default: 16].
    #[arg(long)]
    n_theta: Option<String>,
    /// Relative error above which rows are marked low_accuracy [default: 0.1].
    #[arg(long)]
    target_rel_err: Option<String>,
    /// H̄⁺ positron affinity (eV) [default: 0.75].
    #[arg(long)]
    affinity_ev: Option<String>,
    /// Also emit one row per magnetic substate for 2p.
    #[arg(long)]
    m_resolved: bool,
    /// csv or json [default: csv].
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a gnuplot script next to the output file.
    #[arg(long)]
    gnuplot: bool,
    /// Worker threads [default: all cores].
    #[arg(long, env = "PSBAR_THREADS")]
    threads: Option<String>,
}

fn configure(mode: Mode, args: Args) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::new(mode);
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.apply_file(path, &text).map_err(|e| e.to_string())?;
    }
    let flags = [
        ("state", args.state),
        ("energy_ev", args.energy_ev),
        ("mu", args.mu),
        ("angles", args.angles),
        ("samples", args.samples),
        ("seed", args.seed),
        ("replicates", args.replicates),
        ("n_theta", args.n_theta),
        ("target_rel_err", args.target_rel_err),
        ("affinity_ev", args.affinity_ev),
        ("format", args.format),
        ("threads", args.threads),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.apply_flag(key, &v).map_err(|e| e.to_string())?;
        }
    }
    if let Some(out) = args.out {
        cfg.out = Some(out);
    }
    cfg.m_resolved |= args.m_resolved;
    cfg.gnuplot |= args.gnuplot;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn execute(cfg: &RunConfig) -> Result<(), String> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| e.to_string())?;
    let records = pool.install(|| run(cfg)).map_err(|e| e.to_string())?;
    emit(&records, cfg.format, cfg.out.as_deref()).map_err(|e| e.to_string())?;
    if cfg.gnuplot {
        let Some(out) = &cfg.out else {
            return Err("--gnuplot needs --out".into());
        };
        let script = out.with_extension("gp");
        fs::write(&script, gnuplot_script(&records, out, cfg.mode)).map_err(|e| format!("{}: {e}", script.display()))?;
    }
    if let Some(out) = &cfg.out {
        eprintln!("wrote {} rows to {}", records.len(), out.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::Sdcs(a) => (Mode::Sdcs, a),
        Command::Tcs(a) => (Mode::Tcs, a),
    };
    match configure(mode, args).and_then(|cfg| execute(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("psbar-xsec: {e}");
            ExitCode::FAILURE
        }
    }
}
