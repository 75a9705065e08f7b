//! Finite-shot measurement emulation.
//!
//! Every estimate runs three experiments (z, x, y) on fresh copies of the
//! prepared state, each ending in a z-basis measurement of all qubits. Shots
//! are split into fixed-size chunks with one ChaCha8 stream per chunk, so the
//! counts for a given seed do not depend on thread scheduling.

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::calibration::CalibrationData;
use crate::circuit::{measurement_prelude, synthesize_graph_circuit, Circuit};
use crate::entanglement::{BlochVector, EntanglementEstimate, Method};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::graph::Graph;
use crate::scalar::Real;
use crate::state::{Axis, StateVector, DEFAULT_MAX_QUBITS};

/// Shot count used when none is given.
pub const DEFAULT_SHOTS: u64 = 8192;

const SHOT_CHUNK: u64 = 8192;

/// Measurement record of one experiment.
///
/// Outcomes are keyed by basis index (qubit `l` is bit `l`). As strings they
/// are written most-significant qubit first, so qubit 0 is the rightmost
/// character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotResult {
    n_qubits: usize,
    shots: u64,
    counts: BTreeMap<usize, u64>,
    seed: u64,
}

impl ShotResult {
    pub fn new(n_qubits: usize, counts: BTreeMap<usize, u64>, seed: u64) -> Result<Self> {
        let shots: u64 = counts.values().sum();
        if shots == 0 {
            return Err(Error::invalid("shot record is empty"));
        }
        if let Some(&b) = counts.keys().find(|&&b| n_qubits < usize::BITS as usize && b >> n_qubits != 0) {
            return Err(Error::invalid(format!("outcome {b} does not fit in {n_qubits} bits")));
        }
        Ok(ShotResult {
            n_qubits,
            shots,
            counts,
            seed,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn count(&self, outcome: usize) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn bitstring(&self, outcome: usize) -> String {
        format!("{outcome:0width$b}", width = self.n_qubits)
    }

    pub fn counts_by_bitstring(&self) -> BTreeMap<String, u64> {
        self.counts.iter().map(|(&b, &c)| (self.bitstring(b), c)).collect()
    }

    /// Number of shots that read qubit `l` as 0 and as 1.
    pub fn marginal_counts(&self, l: usize) -> Result<(u64, u64)> {
        Error::check_index("measured qubits", l, self.n_qubits)?;
        let ones: u64 = self.counts.iter().filter(|(&b, _)| b >> l & 1 == 1).map(|(_, &c)| c).sum();
        Ok((self.shots - ones, ones))
    }
}

/// Mean of a ±1-valued observable and its standard error √((1 − mean²)/N).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate<T> {
    pub mean: T,
    pub std_error: T,
}

/// Seed for an independent substream `tag` of `seed`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    rng.next_u64()
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `shot` for every shot, chunked over deterministic RNG streams, and
/// tallies the returned outcomes.
fn tally<F>(shots: u64, seed: u64, shot: F) -> Result<BTreeMap<usize, u64>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<usize> + Sync,
{
    let n_chunks = shots.div_ceil(SHOT_CHUNK);
    let partial: Vec<BTreeMap<usize, u64>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = chunk_rng(seed, chunk);
            let len = SHOT_CHUNK.min(shots - chunk * SHOT_CHUNK);
            let mut counts = BTreeMap::new();
            for _ in 0..len {
                *counts.entry(shot(&mut rng)?).or_insert(0) += 1;
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;
    let mut total = BTreeMap::new();
    for counts in partial {
        for (b, c) in counts {
            *total.entry(b).or_insert(0) += c;
        }
    }
    Ok(total)
}

/// Inverse-CDF sampler over |amp|².
struct OutcomeSampler {
    cumulative: Vec<f64>,
}

impl OutcomeSampler {
    fn new<T: Real>(s: &StateVector<T>) -> Self {
        let mut acc = 0.0;
        let cumulative = s
            .amplitudes()
            .iter()
            .map(|a| {
                acc += a.norm_sqr().as_f64();
                acc
            })
            .collect();
        OutcomeSampler { cumulative }
    }

    fn draw(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty state");
        let u = rng.random::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }
}

/// Draws `shots` i.i.d. z-basis outcomes of all qubits from |amp|².
pub fn sample_z<T: Real>(s: &StateVector<T>, shots: u64, seed: u64) -> Result<ShotResult> {
    if shots == 0 {
        return Err(Error::invalid("shots must be at least 1"));
    }
    let sampler = OutcomeSampler::new(s);
    let counts = tally(shots, seed, |rng| Ok(sampler.draw(rng)))?;
    ShotResult::new(s.n_qubits(), counts, seed)
}

/// Flips every bit of every shot independently with its qubit's readout error.
pub fn corrupt_readout(r: &ShotResult, cal: &CalibrationData, seed: u64) -> Result<ShotResult> {
    cal.require_qubits(r.n_qubits)?;
    let flips: Vec<(usize, f64)> = (0..r.n_qubits)
        .map(|q| (q, cal.readout_errors()[q]))
        .filter(|&(_, p)| p > 0.0)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for (&outcome, &n) in &r.counts {
        for _ in 0..n {
            let mut b = outcome;
            for &(q, p) in &flips {
                if rng.random_bool(p) {
                    b ^= 1 << q;
                }
            }
            *counts.entry(b).or_insert(0) += 1;
        }
    }
    ShotResult::new(r.n_qubits, counts, seed)
}

/// (n₀ − n₁)/N on qubit `l`, with standard error √((1 − mean²)/N).
pub fn estimate_mean_z<T: Real>(r: &ShotResult, l: usize) -> Result<MeanEstimate<T>> {
    let (n0, n1) = r.marginal_counts(l)?;
    let shots = r.shots as f64;
    let mean = (n0 as f64 - n1 as f64) / shots;
    let std_error = ((1.0 - mean * mean).max(0.0) / shots).sqrt();
    Ok(MeanEstimate {
        mean: T::of(mean),
        std_error: T::of(std_error),
    })
}

/// Stochastic executor inserting random Pauli errors after gates.
///
/// After a single-qubit gate on `q`, with probability `gate_error[q]` the
/// qubit is fully depolarized: one of I, X, Y, Z (uniform) hits it. After a
/// CX the pair's CX error likewise triggers one of the 16 two-qubit Paulis on
/// control and target. A rate of 1 therefore replaces the qubits with the
/// maximally mixed state. This is an approximation: the calibration tables
/// only quote error rates.
pub struct DepolarizingExecutor<'a, T> {
    circuit: &'a Circuit<T>,
    rates: Vec<f64>,
    seed: u64,
    max_qubits: usize,
}

/// Attaches depolarizing trajectories to `c`; fails if a used qubit or CX pair
/// is absent from `cal`.
pub fn apply_depolarizing_noise<'a, T: Real>(
    c: &'a Circuit<T>,
    cal: &CalibrationData,
    seed: u64,
) -> Result<DepolarizingExecutor<'a, T>> {
    let rates = c
        .gates()
        .iter()
        .map(|g| match *g {
            Gate::CX { control, target } => cal.cx_error(control, target).ok_or_else(|| {
                Error::invalid(format!("calibration has no CX error for {control}-{target}"))
            }),
            _ => cal.gate_error(g.qubits()[0]),
        })
        .collect::<Result<_>>()?;
    Ok(DepolarizingExecutor {
        circuit: c,
        rates,
        seed,
        max_qubits: DEFAULT_MAX_QUBITS,
    })
}

const PAULIS: [Option<Axis>; 4] = [None, Some(Axis::X), Some(Axis::Y), Some(Axis::Z)];

impl<'a, T: Real> DepolarizingExecutor<'a, T> {
    pub fn with_max_qubits(mut self, max_qubits: usize) -> Self {
        self.max_qubits = max_qubits;
        self
    }

    /// Samples `shots` trajectories, one z-basis outcome per trajectory.
    pub fn sample(&self, shots: u64) -> Result<ShotResult> {
        if shots == 0 {
            return Err(Error::invalid("shots must be at least 1"));
        }
        let clean = OutcomeSampler::new(&self.circuit.simulate(self.max_qubits)?);
        let gates = self.circuit.gates();
        let counts = tally(shots, self.seed, |rng| {
            // (gate index, Pauli code), code = first + 4·second with 0 = identity
            let mut faults = Vec::new();
            for (k, (g, &p)) in gates.iter().zip(&self.rates).enumerate() {
                if p > 0.0 && rng.random_bool(p) {
                    let code: usize = rng.random_range(0..if g.is_two_qubit() { 16 } else { 4 });
                    if code != 0 {
                        faults.push((k, code));
                    }
                }
            }
            if faults.is_empty() {
                return Ok(clean.draw(rng));
            }
            let mut s = StateVector::zero_with_cap(self.circuit.n_qubits(), self.max_qubits)?;
            let mut next = faults.iter().peekable();
            for (k, g) in gates.iter().enumerate() {
                s.apply(g)?;
                while let Some(&(_, code)) = next.next_if(|f| f.0 == k) {
                    let qubits = g.qubits();
                    for (slot, &q) in qubits.iter().enumerate() {
                        if let Some(axis) = PAULIS[(code >> (2 * slot)) & 3] {
                            s.apply_pauli(axis, q)?;
                        }
                    }
                }
            }
            Ok(OutcomeSampler::new(&s).draw(rng))
        })?;
        ShotResult::new(self.circuit.n_qubits(), counts, self.seed)
    }
}

/// Knobs for [`estimate_entanglement_shots_with`].
#[derive(Clone, Debug)]
pub struct ShotOptions {
    /// Insert depolarizing gate/CX errors from the calibration table.
    pub gate_noise: bool,
    pub max_qubits: usize,
}

impl Default for ShotOptions {
    fn default() -> Self {
        ShotOptions {
            gate_noise: false,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

/// Shot-based estimate of the entanglement of spin `l`, with readout errors
/// from `cal` when given.
pub fn estimate_entanglement_shots<T: Real>(
    g: &Graph,
    phi: T,
    l: usize,
    shots: u64,
    cal: Option<&CalibrationData>,
    seed: u64,
) -> Result<EntanglementEstimate<T>> {
    estimate_entanglement_shots_with(g, phi, l, shots, cal, seed, &ShotOptions::default())
}

pub fn estimate_entanglement_shots_with<T: Real>(
    g: &Graph,
    phi: T,
    l: usize,
    shots: u64,
    cal: Option<&CalibrationData>,
    seed: u64,
    opts: &ShotOptions,
) -> Result<EntanglementEstimate<T>> {
    Error::check_index("vertices", l, g.n_vertices())?;
    if shots == 0 {
        return Err(Error::invalid("shots must be at least 1"));
    }
    if let Some(cal) = cal {
        cal.require_qubits(g.n_vertices())?;
    }
    if opts.gate_noise && cal.is_none() {
        return Err(Error::invalid("gate noise needs a calibration table"));
    }
    let prep = synthesize_graph_circuit(g, phi, cal)?;
    // a noiseless preparation is shared by the three experiments
    let prepared = if opts.gate_noise { None } else { Some(prep.simulate(opts.max_qubits)?) };

    let mut means = [MeanEstimate { mean: T::zero(), std_error: T::zero() }; 3];
    for (tag, axis) in [Axis::Z, Axis::X, Axis::Y].into_iter().enumerate() {
        let tag = tag as u64;
        let prelude = measurement_prelude::<T>(axis, l);
        let run_seed = derive_seed(seed, 2 * tag);
        let raw = match (&prepared, cal) {
            (Some(state), _) => {
                let mut s = state.clone();
                s.apply_all(&prelude)?;
                sample_z(&s, shots, run_seed)?
            }
            (None, Some(cal)) => {
                let mut full = prep.clone();
                full.extend(prelude)?;
                apply_depolarizing_noise(&full, cal, run_seed)?
                    .with_max_qubits(opts.max_qubits)
                    .sample(shots)?
            }
            (None, None) => unreachable!("gate noise without calibration rejected above"),
        };
        let measured = match cal {
            Some(cal) => corrupt_readout(&raw, cal, derive_seed(seed, 2 * tag + 1))?,
            None => raw,
        };
        let slot = match axis {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        };
        means[slot] = estimate_mean_z(&measured, l)?;
    }

    // Sampled components can overshoot the unit ball; the value clamps.
    let bloch = BlochVector {
        x: means[0].mean,
        y: means[1].mean,
        z: means[2].mean,
    };
    let norm = bloch.norm();
    let half = T::of(0.5);
    let value = half * (T::one() - norm.min(T::one()));
    Ok(EntanglementEstimate {
        spin: l,
        value,
        bloch,
        method: Method::Shots,
        std_error: Some(propagate_std_error(&means, norm)),
        shots: Some(shots),
    })
}

/// First-order error of ½(1 − |m⃗|): ½·√(Σ (m_a/|m|)² σ_a²). Near |m| = 0 the
/// gradient is taken along the dominant component.
fn propagate_std_error<T: Real>(means: &[MeanEstimate<T>; 3], norm: T) -> T {
    let half = T::of(0.5);
    if norm.as_f64() > 1e-12 {
        let var: T = means
            .iter()
            .map(|m| {
                let w = m.mean / norm;
                w * w * m.std_error * m.std_error
            })
            .sum();
        half * var.sqrt()
    } else {
        let dominant = means
            .iter()
            .max_by(|a, b| {
                a.mean
                    .abs()
                    .partial_cmp(&b.mean.abs())
                    .unwrap()
                    .then(a.std_error.partial_cmp(&b.std_error).unwrap())
            })
            .expect("three components");
        half * dominant.std_error
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Preset;
    use std::f64::consts::FRAC_PI_4;

    fn plus() -> StateVector<f64> {
        let mut s = StateVector::zero(1).unwrap();
        s.apply(&Gate::H(0)).unwrap();
        s
    }

    #[test]
    fn deterministic_outcome() {
        let s = StateVector::<f64>::zero(2).unwrap();
        let r = sample_z(&s, 1000, 3).unwrap();
        assert_eq!(r.count(0), 1000);
        assert_eq!(r.counts_by_bitstring().get("00"), Some(&1000));
        assert_eq!(r.shots(), 1000);
        assert!(sample_z(&s, 0, 3).is_err());
    }

    #[test]
    fn bitstrings_put_qubit_zero_last() {
        let mut counts = BTreeMap::new();
        counts.insert(0b001, 3);
        let r = ShotResult::new(3, counts, 0).unwrap();
        assert_eq!(r.bitstring(0b001), "001");
        assert_eq!(r.marginal_counts(0).unwrap(), (0, 3));
        assert_eq!(r.marginal_counts(2).unwrap(), (3, 0));
        assert!(r.marginal_counts(3).is_err());
    }

    #[test]
    fn shot_record_validation() {
        assert!(ShotResult::new(2, BTreeMap::new(), 0).is_err());
        assert!(ShotResult::new(2, BTreeMap::from([(4, 1)]), 0).is_err());
    }

    #[test]
    fn fair_coin_within_band() {
        let r = sample_z(&plus(), 100_000, 11).unwrap();
        let f = r.count(0) as f64 / 1e5;
        assert!((f - 0.5).abs() <= 0.005, "{f}");
    }

    #[test]
    fn seeded_replay_is_identical() {
        let g = Graph::preset(Preset::Valencia).unwrap();
        let mut s = StateVector::<f64>::zero(5).unwrap();
        s.evolve_graph_exact(&g, 0.9).unwrap();
        assert_eq!(sample_z(&s, 20_000, 5).unwrap(), sample_z(&s, 20_000, 5).unwrap());
        assert_ne!(sample_z(&s, 20_000, 5).unwrap(), sample_z(&s, 20_000, 6).unwrap());
    }

    #[test]
    fn mean_estimator_examples() {
        let r = ShotResult::new(1, BTreeMap::from([(0, 50)]), 0).unwrap();
        let m = estimate_mean_z::<f64>(&r, 0).unwrap();
        assert_eq!((m.mean, m.std_error), (1.0, 0.0));

        let r = ShotResult::new(1, BTreeMap::from([(0, 50), (1, 50)]), 0).unwrap();
        let m = estimate_mean_z::<f64>(&r, 0).unwrap();
        assert_eq!(m.mean, 0.0);
        assert!((m.std_error - 0.1).abs() < 1e-15);

        let r = ShotResult::new(1, BTreeMap::from([(0, 300), (1, 100)]), 0).unwrap();
        let m = estimate_mean_z::<f64>(&r, 0).unwrap();
        assert_eq!(m.mean, 0.5);
        assert!((m.std_error - (0.75f64 / 400.0).sqrt()).abs() < 1e-15);
        assert!((m.std_error - 0.0433).abs() < 1e-4);
        assert!(estimate_mean_z::<f64>(&r, 1).is_err());
    }

    #[test]
    fn readout_corruption() {
        let zero = StateVector::<f64>::zero(1).unwrap();
        let clean = sample_z(&zero, 100_000, 1).unwrap();

        let ideal = CalibrationData::ideal(1).unwrap();
        assert_eq!(corrupt_readout(&clean, &ideal, 9).unwrap().counts(), clean.counts());

        let eps = 0.0433;
        let cal = CalibrationData::readout_only(vec![eps]).unwrap();
        let noisy = corrupt_readout(&clean, &cal, 9).unwrap();
        let f = noisy.count(1) as f64 / 1e5;
        assert!((f - eps).abs() <= 3.0 * (eps * (1.0 - eps) / 1e5).sqrt(), "{f}");

        let half = CalibrationData::readout_only(vec![0.5]).unwrap();
        let m = estimate_mean_z::<f64>(&corrupt_readout(&clean, &half, 2).unwrap(), 0).unwrap();
        assert!(m.mean.abs() <= 3.0 * m.std_error, "{m:?}");

        let two = StateVector::<f64>::zero(2).unwrap();
        assert!(corrupt_readout(&sample_z(&two, 10, 1).unwrap(), &cal, 1).is_err());
    }

    #[test]
    fn repeated_corruption_composes() {
        // two passes at ε equal one pass at 2ε(1−ε) in distribution
        let eps = 0.1;
        let zero = StateVector::<f64>::zero(1).unwrap();
        let clean = sample_z(&zero, 200_000, 4).unwrap();
        let once = CalibrationData::readout_only(vec![eps]).unwrap();
        let twice = corrupt_readout(&corrupt_readout(&clean, &once, 5).unwrap(), &once, 6).unwrap();
        let p = 2.0 * eps * (1.0 - eps);
        let merged = CalibrationData::readout_only(vec![p]).unwrap();
        let single = corrupt_readout(&clean, &merged, 7).unwrap();
        let band = 3.0 * (2.0 * p * (1.0 - p) / 200_000.0).sqrt();
        let (a, b) = (twice.count(1) as f64 / 2e5, single.count(1) as f64 / 2e5);
        assert!((a - b).abs() <= band, "{a} vs {b}");
        assert!((a - p).abs() <= band);
    }

    #[test]
    fn zero_rate_noise_is_noiseless() {
        let g = Graph::preset(Preset::Valencia).unwrap();
        let c = synthesize_graph_circuit(&g, 0.8f64, None).unwrap();
        let cal = CalibrationData::readout_only(vec![0.0; 5]).unwrap();
        let noisy = apply_depolarizing_noise(&c, &cal, 17).unwrap().sample(30_000).unwrap();
        let clean = sample_z(&c.simulate(24).unwrap(), 30_000, 17).unwrap();
        assert_eq!(noisy, clean);
    }

    #[test]
    fn full_rate_noise_depolarizes() {
        // H·H is the identity; every gate is followed by a random Pauli
        let mut c = Circuit::<f64>::new(1);
        c.extend([Gate::H(0), Gate::H(0)]).unwrap();
        let cal = CalibrationData::new(vec![0.0], vec![1.0], BTreeMap::new()).unwrap();
        let r = apply_depolarizing_noise(&c, &cal, 23).unwrap().sample(100_000).unwrap();
        let m = estimate_mean_z::<f64>(&r, 0).unwrap();
        assert!(m.mean.abs() <= 3.0 * m.std_error, "{m:?}");
    }

    #[test]
    fn noise_needs_calibrated_pairs() {
        let k5 = Graph::preset(Preset::Complete(5)).unwrap();
        let c = synthesize_graph_circuit(&k5, 0.8f64, None).unwrap();
        let cal = CalibrationData::valencia_2021_01_19();
        assert!(apply_depolarizing_noise(&c, &cal, 1).is_err());
    }

    #[test]
    fn phi_zero_is_exact_without_noise() {
        let g = Graph::preset(Preset::Valencia).unwrap();
        for l in 0..5 {
            let e = estimate_entanglement_shots(&g, 0.0f64, l, 4000, None, 8).unwrap();
            assert_eq!(e.bloch.z, 1.0);
            assert_eq!(e.value, 0.0);
            assert_eq!(e.method, Method::Shots);
            assert_eq!(e.shots, Some(4000));
        }
    }

    #[test]
    fn valencia_spin_one_within_band() {
        let g = Graph::preset(Preset::Valencia).unwrap();
        let e = estimate_entanglement_shots(&g, FRAC_PI_4, 1, 100_000, None, 99).unwrap();
        let target = 0.5 * (1.0 - 2f64.powf(-1.5));
        assert!((e.value - target).abs() <= 3.0 * e.std_error.unwrap(), "{e:?}");
    }

    #[test]
    fn gate_noise_increases_entanglement_estimate() {
        let g = Graph::preset(Preset::Valencia).unwrap();
        let cal = CalibrationData::valencia_2021_01_19();
        let opts = ShotOptions { gate_noise: true, ..Default::default() };
        let base = estimate_entanglement_shots(&g, 0.0f64, 1, 100_000, Some(&cal), 31).unwrap();
        let noisy = estimate_entanglement_shots_with(&g, 0.0f64, 1, 100_000, Some(&cal), 31, &opts).unwrap();
        let sigma = (base.std_error.unwrap().powi(2) + noisy.std_error.unwrap().powi(2)).sqrt();
        assert!(noisy.value - base.value > 3.0 * sigma, "{} vs {}", noisy.value, base.value);
        assert!(estimate_entanglement_shots_with(&g, 0.0f64, 1, 10, None, 1, &opts).is_err());
    }

    #[test]
    fn error_propagation() {
        let m = |mean: f64, se: f64| MeanEstimate { mean, std_error: se };
        let means = [m(0.0, 0.1), m(0.0, 0.1), m(0.6, 0.08)];
        assert!((propagate_std_error(&means, 0.6) - 0.04).abs() < 1e-15);
        let zero = [m(0.0, 0.1), m(0.0, 0.1), m(0.0, 0.1)];
        assert!((propagate_std_error(&zero, 0.0) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn substreams_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }
}
