use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use graphent::{GraphFormat, Method, Preset};
use graphent_cli::validate::cmd_validate;
use graphent_cli::{
    cmd_entangle, cmd_sweep, cmd_synthesize, emit, load_calibration, load_graph, parse_phi, CliError, EvalOptions,
    GraphSource, Result, SweepSpec, DEFAULT_SEED, MAX_QUBITS_ENV,
};

/// Entanglement of spins in Ising graph states.
#[derive(Parser)]
#[command(name = "graphent", version)]
struct Cli {
    /// Largest state vector to allocate, in qubits.
    #[arg(long, global = true, env = MAX_QUBITS_ENV, default_value_t = graphent::DEFAULT_MAX_QUBITS)]
    max_qubits: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file (edge list, .json, or .adj adjacency matrix).
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    graph: Option<PathBuf>,
    /// valencia, complete(N), path(N) or ring(N).
    #[arg(long)]
    preset: Option<String>,
    /// Override the file format: edge-list, json, adjacency.
    #[arg(long)]
    format: Option<String>,
}

impl GraphArgs {
    fn source(&self) -> Result<GraphSource> {
        let format = self.format.as_deref().map(str::parse::<GraphFormat>).transpose()?;
        match (&self.graph, &self.preset) {
            (Some(path), _) => Ok(GraphSource::File { path: path.clone(), format }),
            (None, Some(name)) => Ok(GraphSource::Preset(name.parse::<Preset>().map_err(usage)?)),
            (None, None) => Err(CliError::Usage("one of --graph or --preset is required".into())),
        }
    }
}

#[derive(Args)]
struct ShotArgs {
    /// Shots per measured axis.
    #[arg(long, default_value_t = graphent::DEFAULT_SHOTS)]
    shots: u64,
    /// Calibration JSON file, or builtin:valencia.
    #[arg(long)]
    calibration: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Add depolarizing gate and CX errors from the calibration (shots mode).
    #[arg(long)]
    gate_noise: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement of one spin at one angle, as a JSON record.
    Entangle {
        #[command(flatten)]
        graph: GraphArgs,
        /// Angle 2Jt/hbar: radians or e.g. pi/4.
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long)]
        spin: usize,
        /// analytic, exact or shots.
        #[arg(long, default_value = "analytic")]
        mode: String,
        #[command(flatten)]
        shots: ShotArgs,
    },
    /// CSV over an angle range for several spins and modes.
    Sweep {
        #[command(flatten)]
        graph: GraphArgs,
        /// START:STOP:COUNT, e.g. 0:2pi:64.
        #[arg(long, allow_hyphen_values = true)]
        sweep: String,
        /// Repeatable; defaults to every spin.
        #[arg(long)]
        spin: Vec<usize>,
        /// Repeatable; defaults to analytic.
        #[arg(long)]
        mode: Vec<String>,
        #[command(flatten)]
        shots: ShotArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gate listing of the preparation circuit.
    Synthesize {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long)]
        calibration: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check every computation path on random graphs.
    Validate {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn usage(e: graphent::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn parse_mode(s: &str) -> Result<Method> {
    s.parse().map_err(usage)
}

fn eval_options(args: &ShotArgs, max_qubits: usize) -> Result<EvalOptions> {
    Ok(EvalOptions {
        shots: args.shots,
        calibration: args.calibration.as_deref().map(load_calibration).transpose()?,
        seed: args.seed,
        gate_noise: args.gate_noise,
        max_qubits,
    })
}

fn run(cli: Cli) -> Result<()> {
    let max_qubits = cli.max_qubits;
    match cli.command {
        Command::Entangle { graph, phi, spin, mode, shots } => {
            let (phi, mode) = (parse_phi(&phi)?, parse_mode(&mode)?);
            let opts = eval_options(&shots, max_qubits)?;
            let g = load_graph(&graph.source()?)?;
            let record = cmd_entangle(&g, phi, spin, mode, &opts)?;
            let json = serde_json::to_string(&record).expect("record serializes");
            emit(None, &format!("{json}\n"))
        }
        Command::Sweep { graph, sweep, spin, mode, shots, out } => {
            let sweep: SweepSpec = sweep.parse()?;
            let modes = if mode.is_empty() {
                vec![Method::Analytic]
            } else {
                mode.iter().map(|m| parse_mode(m)).collect::<Result<_>>()?
            };
            let opts = eval_options(&shots, max_qubits)?;
            let g = load_graph(&graph.source()?)?;
            let spins = if spin.is_empty() { (0..g.n_vertices()).collect() } else { spin };
            let file = File::create(&out).map_err(|source| CliError::Io { path: out.clone(), source })?;
            cmd_sweep(&g, &sweep, &spins, &modes, &opts, BufWriter::new(file))
        }
        Command::Synthesize { graph, phi, calibration, out } => {
            let phi = parse_phi(&phi)?;
            let cal = calibration.as_deref().map(load_calibration).transpose()?;
            let g = load_graph(&graph.source()?)?;
            emit(out.as_deref(), &cmd_synthesize(&g, phi, cal.as_ref())?)
        }
        Command::Validate { max_n, trials, seed } => {
            cmd_validate(max_n, trials, seed, max_qubits, std::io::stdout().lock())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("graphent: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
