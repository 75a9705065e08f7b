//! Self-check over random graphs: every computation path is compared against
//! its independent counterpart and the worst deviation is reported.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use graphent::{
    analytic_entanglement, exact_entanglement_all, graph_state, measurement_prelude,
    synthesize_graph_circuit, Axis, Graph, StateVector64,
};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CliError, Result};

const PHIS_PER_GRAPH: usize = 25;

#[derive(Clone, Debug)]
pub struct Property {
    pub name: &'static str,
    pub threshold: f64,
    pub worst: f64,
}

impl Property {
    fn new(name: &'static str, threshold: f64) -> Self {
        Property {
            name,
            threshold,
            worst: 0.0,
        }
    }

    fn record(&mut self, deviation: f64) {
        // a NaN sticks and fails the property
        if self.worst.is_nan() {
            return;
        }
        if !(deviation <= self.worst) {
            self.worst = deviation;
        }
    }

    pub fn passed(&self) -> bool {
        self.worst <= self.threshold
    }
}

pub fn random_graph(rng: &mut impl Rng, max_n: usize) -> Graph {
    let n = rng.random_range(2..=max_n);
    let density = rng.random::<f64>();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(density))
        .collect();
    Graph::new(n, edges).expect("generated edges are simple")
}

fn random_qubit(rng: &mut impl Rng) -> StateVector64 {
    loop {
        let v: Vec<Complex64> = (0..2)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return StateVector64::from_amplitudes(v.iter().map(|a| a / norm).collect())
                .expect("normalised");
        }
    }
}

/// Runs every property over `trials` random graphs with 2..=`max_n` vertices.
pub fn run_properties(max_n: usize, trials: usize, seed: u64, max_qubits: usize) -> Result<Vec<Property>> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if max_n < 2 {
        return Err(CliError::Usage("--max-n must be at least 2".into()));
    }
    if max_n > max_qubits {
        return Err(graphent::Error::ResourceCap {
            what: "validation graphs",
            requested: max_n,
            cap: max_qubits,
        }
        .into());
    }

    let mut analytic = Property::new("analytic vs exact entanglement", 1e-10);
    let mut transverse = Property::new("transverse Bloch components", 1e-12);
    let mut longitudinal = Property::new("<sz> vs cos^k(phi)", 1e-10);
    let mut circuit = Property::new("circuit vs exact state (1 - overlap)", 1e-12);
    let mut ordering = Property::new("edge order independence (1 - overlap)", 1e-12);
    let mut symmetry = Property::new("E(phi) vs E(-phi), E(phi+pi), E(pi-phi)", 1e-10);
    let mut prelude = Property::new("measurement prelude vs direct expectation", 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let g = random_graph(&mut rng, max_n);
        let degrees = g.degrees();
        for _ in 0..PHIS_PER_GRAPH {
            let phi = rng.random_range(-TAU..TAU);
            let state = graph_state(&g, phi, max_qubits)?;
            let est = exact_entanglement_all(&g, phi, max_qubits)?;
            for e in &est {
                let k = degrees[e.spin] as u32;
                analytic.record((e.value - analytic_entanglement(k, phi)).abs());
                transverse.record(e.bloch.x.abs().max(e.bloch.y.abs()));
                longitudinal.record((e.bloch.z - phi.cos().powi(k as i32)).abs());
            }

            let circ = synthesize_graph_circuit(&g, phi, None)?.simulate(max_qubits)?;
            circuit.record(1.0 - circ.overlap(&state)?);

            let mut edges = g.edges().to_vec();
            edges.shuffle(&mut rng);
            let mut shuffled = StateVector64::zero_with_cap(g.n_vertices(), max_qubits)?;
            shuffled.evolve_edges_exact(&edges, phi)?;
            ordering.record(1.0 - shuffled.overlap(&state)?);

            for other in [-phi, phi + PI, PI - phi] {
                for (a, b) in est.iter().zip(exact_entanglement_all(&g, other, max_qubits)?) {
                    symmetry.record((a.value - b.value).abs());
                }
            }
        }
        for axis in Axis::ALL {
            let s = random_qubit(&mut rng);
            let mut r = s.clone();
            r.apply_all(&measurement_prelude(axis, 0))?;
            prelude.record((r.expectation(Axis::Z, 0)? - s.expectation(axis, 0)?).abs());
        }
    }
    Ok(vec![analytic, transverse, longitudinal, circuit, ordering, symmetry, prelude])
}

/// Prints the report; fails with exit code 4 if any property misses its threshold.
pub fn cmd_validate<W: Write>(max_n: usize, trials: usize, seed: u64, max_qubits: usize, mut out: W) -> Result<()> {
    let props = run_properties(max_n, trials, seed, max_qubits)?;
    let io = |e| CliError::Io {
        path: "<stdout>".into(),
        source: e,
    };
    writeln!(out, "validate: max_n={max_n} trials={trials} seed={seed}").map_err(io)?;
    let mut failed = 0;
    for p in &props {
        let status = if p.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{status}  {:<44} worst {:>10.3e}  threshold {:.0e}", p.name, p.worst, p.threshold)
            .map_err(io)?;
        failed += usize::from(!p.passed());
    }
    if failed > 0 {
        return Err(CliError::PropertyFailure(failed));
    }
    Ok(())
}
