//! Command implementations behind the `graphent` binary.
//!
//! Exit codes: 0 success, 1 usage, 2 parse or validation error, 3 resource
//! cap exceeded, 4 internal consistency or property failure.

pub mod phi;
pub mod validate;

use std::io::Write;
use std::path::{Path, PathBuf};

use graphent::graph::GraphJson;
use graphent::{
    analytic_estimate, derive_seed, estimate_entanglement_shots_with, exact_entanglement_all,
    exact_entanglement_with_cap, synthesize_graph_circuit, CalibrationData, Circuit64, Estimate64,
    Graph, GraphFormat, Method, Preset, ShotOptions,
};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use phi::{parse_phi, SweepSpec};

pub const DEFAULT_SEED: u64 = 1;
pub const MAX_QUBITS_ENV: &str = "GRAPHENT_MAX_QUBITS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] graphent::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0} validation properties failed")]
    PropertyFailure(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(graphent::Error::ResourceCap { .. }) => 3,
            CliError::Core(graphent::Error::Consistency(_)) | CliError::PropertyFailure(_) => 4,
            CliError::Core(_) | CliError::Io { .. } | CliError::Csv(_) => 2,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Where the interaction graph comes from.
#[derive(Clone, Debug)]
pub enum GraphSource {
    Preset(Preset),
    File {
        path: PathBuf,
        format: Option<GraphFormat>,
    },
}

/// Format from the extension: `.json`, `.adj`/`.adjacency`, anything else is
/// an edge list.
pub fn format_for_path(path: &Path) -> GraphFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => GraphFormat::Json,
        Some("adj" | "adjacency") => GraphFormat::Adjacency,
        _ => GraphFormat::EdgeList,
    }
}

pub fn load_graph(src: &GraphSource) -> Result<Graph> {
    match src {
        GraphSource::Preset(p) => Ok(Graph::preset(*p)?),
        GraphSource::File { path, format } => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let format = format.unwrap_or_else(|| format_for_path(path));
            Ok(Graph::parse(&text, format)?)
        }
    }
}

/// A JSON calibration file, or `builtin:valencia` for the bundled table.
pub fn load_calibration(spec: &str) -> Result<CalibrationData> {
    match spec {
        "builtin:valencia" => Ok(CalibrationData::valencia_2021_01_19()),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(Path::new(path), e))?;
            Ok(CalibrationData::from_json(&text)?)
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub shots: u64,
    pub calibration: Option<CalibrationData>,
    pub seed: u64,
    pub gate_noise: bool,
    pub max_qubits: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            shots: graphent::DEFAULT_SHOTS,
            calibration: None,
            seed: DEFAULT_SEED,
            gate_noise: false,
            max_qubits: graphent::DEFAULT_MAX_QUBITS,
        }
    }
}

impl EvalOptions {
    fn check(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(CliError::Usage("--shots must be at least 1".into()));
        }
        if self.gate_noise && self.calibration.is_none() {
            return Err(CliError::Usage("--gate-noise needs --calibration".into()));
        }
        Ok(())
    }

    fn shot_options(&self) -> ShotOptions {
        ShotOptions {
            gate_noise: self.gate_noise,
            max_qubits: self.max_qubits,
        }
    }
}

/// One entanglement value for `spin` by the chosen method.
pub fn evaluate(g: &Graph, phi: f64, spin: usize, mode: Method, opts: &EvalOptions, seed: u64) -> Result<Estimate64> {
    let est = match mode {
        Method::Analytic => analytic_estimate(g, phi, spin)?,
        Method::Exact => exact_entanglement_with_cap(g, phi, spin, opts.max_qubits)?,
        Method::Shots => estimate_entanglement_shots_with(
            g,
            phi,
            spin,
            opts.shots,
            opts.calibration.as_ref(),
            seed,
            &opts.shot_options(),
        )?,
    };
    Ok(est)
}

#[derive(Debug, Serialize)]
pub struct EntangleRecord {
    pub phi: f64,
    pub spin: usize,
    pub mode: String,
    pub bloch: [f64; 3],
    pub entanglement: f64,
    pub std_error: Option<f64>,
    pub shots: Option<u64>,
    pub seed: u64,
    pub graph: GraphJson,
}

pub fn cmd_entangle(g: &Graph, phi: f64, spin: usize, mode: Method, opts: &EvalOptions) -> Result<EntangleRecord> {
    opts.check()?;
    let e = evaluate(g, phi, spin, mode, opts, opts.seed)?;
    Ok(EntangleRecord {
        phi,
        spin,
        mode: mode.to_string(),
        bloch: e.bloch.to_array(),
        entanglement: e.value,
        std_error: e.std_error,
        shots: e.shots,
        seed: opts.seed,
        graph: g.to_json(),
    })
}

pub const CSV_HEADER: [&str; 11] = [
    "phi",
    "spin",
    "mode",
    "mean_x",
    "mean_y",
    "mean_z",
    "bloch_norm",
    "entanglement",
    "std_error",
    "shots",
    "seed",
];

/// Writes one CSV row per (φ, spin, mode), φ outermost and mode innermost.
///
/// Shot rows use `derive_seed(seed, row)` with `row` the zero-based row index,
/// and that derived seed is what the `seed` column records; other rows record
/// the base seed.
pub fn cmd_sweep<W: Write>(
    g: &Graph,
    sweep: &SweepSpec,
    spins: &[usize],
    modes: &[Method],
    opts: &EvalOptions,
    out: W,
) -> Result<()> {
    opts.check()?;
    if spins.is_empty() || modes.is_empty() {
        return Err(CliError::Usage("sweep needs at least one spin and one mode".into()));
    }
    for &s in spins {
        g.degree(s)?;
    }
    let per_phi = spins.len() * modes.len();
    let rows: Vec<Vec<Vec<String>>> = sweep
        .points()
        .into_par_iter()
        .enumerate()
        .map(|(k, phi)| {
            let exact = if modes.contains(&Method::Exact) {
                Some(exact_entanglement_all(g, phi, opts.max_qubits)?)
            } else {
                None
            };
            let mut rows = Vec::with_capacity(per_phi);
            for (i, &spin) in spins.iter().enumerate() {
                for (j, &mode) in modes.iter().enumerate() {
                    let row = (k * per_phi + i * modes.len() + j) as u64;
                    let seed = match mode {
                        Method::Shots => derive_seed(opts.seed, row),
                        _ => opts.seed,
                    };
                    let e = match (&exact, mode) {
                        (Some(all), Method::Exact) => all[spin].clone(),
                        _ => evaluate(g, phi, spin, mode, opts, seed)?,
                    };
                    rows.push(csv_row(phi, &e, seed));
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows.into_iter().flatten() {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CliError::io(Path::new("<csv>"), e))?;
    Ok(())
}

fn csv_row(phi: f64, e: &Estimate64, seed: u64) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    vec![
        phi.to_string(),
        e.spin.to_string(),
        e.method.to_string(),
        e.bloch.x.to_string(),
        e.bloch.y.to_string(),
        e.bloch.z.to_string(),
        e.bloch.norm().to_string(),
        e.value.to_string(),
        opt(e.std_error.map(|s| s.to_string())),
        opt(e.shots.map(|s| s.to_string())),
        seed.to_string(),
    ]
}

/// Preparation circuit listing, one gate per line.
pub fn cmd_synthesize(g: &Graph, phi: f64, cal: Option<&CalibrationData>) -> Result<String> {
    if let Some(cal) = cal {
        cal.require_qubits(g.n_vertices())?;
    }
    let c: Circuit64 = synthesize_graph_circuit(g, phi, cal)?;
    Ok(c.listing())
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}
