use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corrlab_cli::{load_run_file, run, Action, CliError, ExperimentConfig, Sampler};

/// Ergodic-theory laboratory for holomorphic correspondences on the Riemann sphere.
///
/// Correspondences are given as files or as builtin:identity, builtin:squaring,
/// builtin:semigroup or builtin:power:<k>. Points are `x`, `x,y` or `inf`.
/// Test functions: const:<v>, stereo:<a>,<b>,<c>, fourier:<k>:re|im,
/// indicator:annulus:<r1>:<r2>, indicator:halfplane:re|im:<c>.
///
/// Exit status: 0 success, 2 configuration or input error, 3 numeric failure,
/// 4 size cap exceeded.
#[derive(Parser)]
#[command(name = "corrlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Random seed; every run is reproducible from its configuration.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Artifact path; a `.manifest.json` is written next to it. Defaults to stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Koopman {
    /// Largest backward tree (in leaves) evaluated exactly before sampling.
    #[arg(long)]
    cap: Option<u64>,
    /// Backward random walks per point beyond the cap.
    #[arg(long)]
    walks: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Topological and forward degree.
    Degrees { correspondence: String },
    /// Exact iterated preimage multiset of a point, as a weighted cloud.
    Preimage {
        correspondence: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        cap: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample an invariant measure as a weighted cloud.
    Measure {
        /// Required for the ds sampler.
        correspondence: Option<String>,
        #[arg(long, value_enum)]
        sampler: Option<Sampler>,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Correlation series I_n(φ, ψ) against a cloud.
    Correlate(CorrelateArgs),
    /// Correlation series with Cesàro transforms and finite-horizon verdicts.
    MixingReport(CorrelateArgs),
    /// Birkhoff partial averages of φ at a start point.
    Birkhoff {
        correspondence: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        horizon: Option<usize>,
        #[command(flatten)]
        koopman: Koopman,
        #[command(flatten)]
        common: Common,
    },
    /// Exact ergodicity, mixing and theorem checks on a finite instance.
    FiniteCheck {
        instance: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Log-density PGM image of a cloud.
    Render {
        cloud: PathBuf,
        #[arg(long)]
        size: Option<usize>,
        /// x_min,x_max,y_min,y_max
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        window: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a TOML experiment config or rerun a manifest.
    Run { path: PathBuf },
}

#[derive(Args)]
struct CorrelateArgs {
    correspondence: String,
    #[arg(long)]
    cloud: PathBuf,
    #[arg(long)]
    phi: String,
    #[arg(long)]
    psi: String,
    #[arg(long)]
    horizon: Option<usize>,
    #[command(flatten)]
    koopman: Koopman,
    #[command(flatten)]
    common: Common,
}

fn with_common(mut cfg: ExperimentConfig, common: Common) -> ExperimentConfig {
    cfg.seed = common.seed;
    cfg.output = common.output;
    cfg
}

fn correlate(action: Action, a: CorrelateArgs) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(action);
    cfg.correspondence = Some(a.correspondence);
    cfg.cloud = Some(a.cloud);
    cfg.phi = Some(a.phi);
    cfg.psi = Some(a.psi);
    cfg.horizon = a.horizon;
    cfg.cap = a.koopman.cap;
    cfg.walks = a.koopman.walks;
    with_common(cfg, a.common)
}

fn config(command: Command) -> Result<ExperimentConfig, CliError> {
    let cfg = match command {
        Command::Degrees { correspondence } => {
            let mut cfg = ExperimentConfig::new(Action::Degrees);
            cfg.correspondence = Some(correspondence);
            cfg
        }
        Command::Preimage {
            correspondence,
            point,
            depth,
            cap,
            common,
        } => {
            let mut cfg = ExperimentConfig::new(Action::Preimage);
            cfg.correspondence = Some(correspondence);
            cfg.point = Some(point);
            cfg.depth = depth;
            cfg.cap = cap;
            with_common(cfg, common)
        }
        Command::Measure {
            correspondence,
            sampler,
            start,
            depth,
            samples,
            common,
        } => {
            let mut cfg = ExperimentConfig::new(Action::Measure);
            cfg.correspondence = correspondence;
            cfg.sampler = sampler;
            cfg.start = start;
            cfg.depth = depth;
            cfg.samples = samples;
            with_common(cfg, common)
        }
        Command::Correlate(a) => correlate(Action::Correlate, a),
        Command::MixingReport(a) => correlate(Action::MixingReport, a),
        Command::Birkhoff {
            correspondence,
            start,
            phi,
            horizon,
            koopman,
            common,
        } => {
            let mut cfg = ExperimentConfig::new(Action::Birkhoff);
            cfg.correspondence = Some(correspondence);
            cfg.start = Some(start);
            cfg.phi = Some(phi);
            cfg.horizon = horizon;
            cfg.cap = koopman.cap;
            cfg.walks = koopman.walks;
            with_common(cfg, common)
        }
        Command::FiniteCheck { instance, common } => {
            let mut cfg = ExperimentConfig::new(Action::FiniteCheck);
            cfg.instance = Some(instance);
            with_common(cfg, common)
        }
        Command::Render {
            cloud,
            size,
            window,
            common,
        } => {
            let mut cfg = ExperimentConfig::new(Action::Render);
            cfg.cloud = Some(cloud);
            cfg.size = size;
            cfg.window = match window.as_deref() {
                None => None,
                Some(&[a, b, c, d]) => Some([a, b, c, d]),
                Some(w) => {
                    return Err(CliError::config(format!(
                        "render: --window takes x_min,x_max,y_min,y_max, got {} values",
                        w.len()
                    )))
                }
            };
            with_common(cfg, common)
        }
        Command::Run { path } => return load_run_file(&path),
    };
    let cwd = std::env::current_dir().map_err(|source| CliError::Io {
        path: ".".into(),
        source,
    })?;
    Ok(cfg.rebase(&cwd))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match config(cli.command).and_then(run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("corrlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
