//! Synthetic circuits and devices for tests, benchmarks and sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, Gate};
use crate::device::CouplingGraph;

const SINGLE_GATES: &[&str] = &["h", "x", "t", "tdg", "s"];

/// `num_gates` gates on `num_qubits` qubits; each one is a CNOT on a uniform
/// random pair with probability `cx_fraction`, otherwise a single-qubit
/// Clifford+T gate.
pub fn random_circuit<R: Rng + ?Sized>(
    num_qubits: usize,
    num_gates: usize,
    cx_fraction: f64,
    rng: &mut R,
) -> Circuit {
    assert!(num_qubits > 0, "random_circuit needs at least one qubit");
    let mut gates = Vec::with_capacity(num_gates);
    for _ in 0..num_gates {
        if num_qubits > 1 && rng.gen_bool(cx_fraction.clamp(0.0, 1.0)) {
            let a = rng.gen_range(0..num_qubits);
            let mut b = rng.gen_range(0..num_qubits - 1);
            if b >= a {
                b += 1;
            }
            gates.push(Gate::cx(a, b));
        } else {
            let name = SINGLE_GATES.choose(rng).unwrap();
            gates.push(Gate::single(name, rng.gen_range(0..num_qubits)));
        }
    }
    Circuit::new(num_qubits, gates).expect("generated operands are in range")
}

/// Quantum Fourier transform without the final reversal, with every
/// controlled phase expanded into two CNOTs and three `u1`s. Every pair of
/// qubits interacts, so n = 20 gives 380 CNOTs and 970 gates in total.
pub fn qft_pattern(num_qubits: usize) -> Circuit {
    let mut gates = Vec::new();
    for i in 0..num_qubits {
        gates.push(Gate::single("h", i));
        for j in i + 1..num_qubits {
            // cu1(pi / 2^(j-i)) on (j, i), halved angles on either side.
            let half = format!("pi/{}", 1u128 << (j - i + 1).min(127));
            let neg = format!("-{half}");
            gates.push(Gate::single_with_params("u1", &[&half], j));
            gates.push(Gate::cx(j, i));
            gates.push(Gate::single_with_params("u1", &[&neg], i));
            gates.push(Gate::cx(j, i));
            gates.push(Gate::single_with_params("u1", &[&half], i));
        }
    }
    Circuit::new(num_qubits, gates).expect("in range")
}

/// Trotterised transverse-field Ising chain: each layer applies
/// `cx(i, i+1); rz(i+1); cx(i, i+1)` along the line and then `rx` on every
/// qubit. Only neighbouring logical qubits ever interact.
pub fn ising_chain(num_qubits: usize, layers: usize) -> Circuit {
    let mut gates = Vec::new();
    for _ in 0..layers {
        for i in 0..num_qubits.saturating_sub(1) {
            gates.push(Gate::cx(i, i + 1));
            gates.push(Gate::single_with_params("rz", &["0.1"], i + 1));
            gates.push(Gate::cx(i, i + 1));
        }
        for i in 0..num_qubits {
            gates.push(Gate::single_with_params("rx", &["0.2"], i));
        }
    }
    Circuit::new(num_qubits, gates).expect("in range")
}

/// Random connected graph: a random spanning tree plus each remaining pair
/// independently with probability `extra_edge_prob`.
pub fn random_connected_graph<R: Rng + ?Sized>(
    num_qubits: usize,
    extra_edge_prob: f64,
    rng: &mut R,
) -> CouplingGraph {
    let mut order: Vec<usize> = (0..num_qubits).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for k in 1..order.len() {
        edges.push((order[k], order[rng.gen_range(0..k)]));
    }
    for a in 0..num_qubits {
        for b in a + 1..num_qubits {
            if rng.gen_bool(extra_edge_prob.clamp(0.0, 1.0)) {
                edges.push((a, b));
            }
        }
    }
    CouplingGraph::new(num_qubits, &edges).expect("generated edges are valid")
}
