//! Building blocks of one search step: executable-gate detection, SWAP
//! candidates, the extended set, decay bookkeeping and the cost functions.

use crate::circuit::{Circuit, LogicalQubit};
use crate::dag::GateDag;
use crate::device::{CouplingGraph, DistanceMatrix, PhysicalQubit};
use crate::layout::Mapping;

/// A SWAP on a coupler, normalized so that `swap[0] < swap[1]`.
pub type PhysicalSwap = [PhysicalQubit; 2];

fn operands(circuit: &Circuit, gate: usize) -> (LogicalQubit, LogicalQubit) {
    circuit
        .gate(gate)
        .pair()
        .expect("front layer and extended set only hold two-qubit gates")
}

/// Gates of `front` whose mapped operands sit on a coupler.
pub fn executable_gates(
    front: &[usize],
    circuit: &Circuit,
    mapping: &Mapping,
    graph: &CouplingGraph,
) -> Vec<usize> {
    front
        .iter()
        .copied()
        .filter(|&gate| {
            let (a, b) = operands(circuit, gate);
            graph.is_edge(mapping.phys(a), mapping.phys(b))
        })
        .collect()
}

/// Every coupler with at least one endpoint hosting a qubit of the front
/// layer, deduplicated, in lexicographic order.
pub fn obtain_swaps(
    front: &[usize],
    circuit: &Circuit,
    mapping: &Mapping,
    graph: &CouplingGraph,
) -> Vec<PhysicalSwap> {
    let mut out = Vec::new();
    for &gate in front {
        let (a, b) = operands(circuit, gate);
        for q in [a, b] {
            let here = mapping.phys(q);
            for &nb in graph.adjacent_to(here.index()) {
                let nb = PhysicalQubit(nb);
                out.push(if here < nb { [here, nb] } else { [nb, here] });
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Breadth-first successors of the front layer, one DAG layer at a time
/// (ascending gate id within a layer), truncated at `size` gates.
pub fn compute_extended_set(dag: &GateDag, front: &[usize], size: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(size);
    if size == 0 {
        return out;
    }
    let mut seen: std::collections::HashSet<usize> = front.iter().copied().collect();
    let mut layer: Vec<usize> = front.to_vec();
    while !layer.is_empty() && out.len() < size {
        let mut next: Vec<usize> = layer
            .iter()
            .flat_map(|&g| dag.successors(g).iter().copied())
            .filter(|g| !seen.contains(g))
            .collect();
        next.sort_unstable();
        next.dedup();
        for &g in &next {
            seen.insert(g);
            if out.len() < size {
                out.push(g);
            }
        }
        layer = next;
    }
    out
}

/// Per-logical-qubit multiplicative penalty discouraging back-to-back SWAPs
/// on the same qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayTable {
    decay: Vec<f64>,
    steps_since_reset: usize,
}

impl DecayTable {
    pub fn new(num_qubits: usize) -> Self {
        DecayTable {
            decay: vec![1.0; num_qubits],
            steps_since_reset: 0,
        }
    }

    pub fn reset(&mut self) {
        self.decay.iter_mut().for_each(|d| *d = 1.0);
        self.steps_since_reset = 0;
    }

    #[inline]
    pub fn get(&self, q: LogicalQubit) -> f64 {
        self.decay[q.index()]
    }

    pub fn bump(&mut self, q: LogicalQubit, delta: f64) {
        self.decay[q.index()] += delta;
    }

    /// Count one search step; resets everything once `interval` steps have
    /// elapsed since the last reset.
    pub fn record_step(&mut self, interval: usize) {
        self.steps_since_reset += 1;
        if self.steps_since_reset >= interval {
            self.reset();
        }
    }

    pub fn steps_since_reset(&self) -> usize {
        self.steps_since_reset
    }

    pub fn values(&self) -> &[f64] {
        &self.decay
    }
}

#[inline]
fn site_after_swap(mapping: &Mapping, q: LogicalQubit, swap: Option<PhysicalSwap>) -> PhysicalQubit {
    let p = mapping.phys(q);
    match swap {
        Some([a, b]) if p == a => b,
        Some([a, b]) if p == b => a,
        _ => p,
    }
}

fn distance_sum(
    gates: &[usize],
    circuit: &Circuit,
    mapping: &Mapping,
    distances: &DistanceMatrix,
    swap: Option<PhysicalSwap>,
) -> f64 {
    gates
        .iter()
        .map(|&gate| {
            let (a, b) = operands(circuit, gate);
            let pa = site_after_swap(mapping, a, swap);
            let pb = site_after_swap(mapping, b, swap);
            distances.raw(pa.index(), pb.index()) as u64
        })
        .sum::<u64>() as f64
}

/// Sum of mapped-operand distances over the front layer.
pub fn h_basic(front: &[usize], circuit: &Circuit, mapping: &Mapping, distances: &DistanceMatrix) -> f64 {
    distance_sum(front, circuit, mapping, distances, None)
}

/// Look-ahead cost with decay, evaluated on `mapping` with `swap` applied:
///
/// `max(decay(a), decay(b)) * (sum_F D / |F| + W * sum_E D / |E|)`
///
/// where `a` and `b` are the logical qubits on the swapped sites (a vacant
/// site has decay 1). The extended-set term is dropped when `extended` is
/// empty.
#[allow(clippy::too_many_arguments)]
pub fn h_full(
    swap: PhysicalSwap,
    front: &[usize],
    extended: &[usize],
    circuit: &Circuit,
    mapping: &Mapping,
    distances: &DistanceMatrix,
    decay: &DecayTable,
    weight: f64,
) -> f64 {
    let front_term = distance_sum(front, circuit, mapping, distances, Some(swap)) / front.len() as f64;
    let lookahead_term = if extended.is_empty() {
        0.0
    } else {
        weight * distance_sum(extended, circuit, mapping, distances, Some(swap)) / extended.len() as f64
    };
    let decay_of = |p: PhysicalQubit| mapping.logical_at(p).map_or(1.0, |q| decay.get(q));
    let factor = decay_of(swap[0]).max(decay_of(swap[1]));
    factor * (front_term + lookahead_term)
}
