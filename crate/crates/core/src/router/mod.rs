//! One traversal of the SWAP-based heuristic search.
//!
//! The router drains executable gates from the front layer; when nothing
//! is executable it scores every candidate SWAP touching a front-layer qubit
//! and applies the cheapest one. One-qubit gates ride along on their qubit's
//! stream and are emitted as soon as the preceding two-qubit gate is.

mod heuristic;
mod params;

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::dag::GateDag;
use crate::device::Device;
use crate::layout::{Mapping, MappingError};

pub use heuristic::{
    compute_extended_set, executable_gates, h_basic, h_full, obtain_swaps, DecayTable, PhysicalSwap,
};
pub use params::{ParamsError, RouterParams};

/// Scores within this distance of the minimum are treated as ties.
pub const SCORE_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum RouteError {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("circuit needs {logical} qubits but the device has {physical}")]
    TooManyQubits { logical: usize, physical: usize },
    #[error("initial mapping covers {mapped} logical qubits on {physical} sites; expected {expected} on {device}")]
    MappingShape {
        mapped: usize,
        physical: usize,
        expected: usize,
        device: usize,
    },
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error("routing stalled with front layer {front_layer:?}")]
    Stalled { front_layer: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RouteStats {
    pub swaps_inserted: usize,
    /// `3 * swaps_inserted`: CNOTs added once SWAPs are decomposed.
    pub added_gates: usize,
    /// Output gate count with SWAPs decomposed.
    pub total_gates: usize,
    /// Output depth with SWAPs decomposed.
    pub depth: usize,
    pub search_steps: usize,
    /// SWAPs inserted by the stall fallback rather than the heuristic.
    pub forced_swaps: usize,
    pub runtime: Duration,
}

/// A hardware-compliant circuit together with the mappings that bracket it.
///
/// `circuit` is written over logical qubits and keeps SWAPs as gates. When
/// the device has more sites than the program has qubits, the register is
/// widened to the device size; the extra logical qubits are idle ancillas
/// that start on the vacant sites in ascending order and only ever appear
/// in SWAPs.
#[derive(Clone, Debug, PartialEq)]
pub struct RoutedCircuit {
    pub circuit: Circuit,
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    pub seed: u64,
    pub stats: RouteStats,
}

impl RoutedCircuit {
    pub fn decomposed(&self) -> Circuit {
        self.circuit.decomposed()
    }

    /// Equality of everything except wall-clock runtime.
    pub fn same_result(&self, other: &RoutedCircuit) -> bool {
        let strip = |r: &RoutedCircuit| RouteStats {
            runtime: Duration::ZERO,
            ..r.stats.clone()
        };
        self.circuit == other.circuit
            && self.initial_mapping == other.initial_mapping
            && self.final_mapping == other.final_mapping
            && strip(self) == strip(other)
    }
}

/// State of a single traversal. [`route`] drives it to completion; the
/// step-level methods are public so callers can observe or steer
/// individual decisions.
pub struct Router<'a> {
    circuit: &'a Circuit,
    device: &'a Device,
    dag: GateDag,
    params: RouterParams,
    rng: ChaCha8Rng,
    seed: u64,

    initial: Mapping,
    mapping: Mapping,
    remaining_predecessors: Vec<usize>,
    front: Vec<usize>,
    extended: Option<Vec<usize>>,
    decay: DecayTable,

    /// Gate ids touching each qubit, in program order, and how far each
    /// stream has been emitted.
    streams: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    output: Vec<Gate>,

    swaps: usize,
    forced_swaps: usize,
    search_steps: usize,
    steps_without_progress: usize,
}

impl<'a> Router<'a> {
    pub fn new(
        circuit: &'a Circuit,
        device: &'a Device,
        initial_mapping: &Mapping,
        params: RouterParams,
        seed: u64,
    ) -> Result<Self, RouteError> {
        params.validate()?;
        let n = circuit.num_qubits();
        let num_sites = device.num_qubits();
        if n > num_sites {
            return Err(RouteError::TooManyQubits {
                logical: n,
                physical: num_sites,
            });
        }
        if initial_mapping.num_logical() != n || initial_mapping.num_physical() != num_sites {
            return Err(RouteError::MappingShape {
                mapped: initial_mapping.num_logical(),
                physical: initial_mapping.num_physical(),
                expected: n,
                device: num_sites,
            });
        }
        let mapping = initial_mapping.padded(num_sites)?;

        let dag = GateDag::build(circuit);
        let remaining_predecessors = (0..circuit.len()).map(|g| dag.indegree(g)).collect();
        let front = dag.initial_front_layer();

        let mut streams = vec![Vec::new(); n];
        for (id, gate) in circuit.gates().iter().enumerate() {
            for q in gate.qubits().iter() {
                streams[q.index()].push(id);
            }
        }

        let mut router = Router {
            circuit,
            device,
            dag,
            params,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            initial: mapping.clone(),
            mapping,
            remaining_predecessors,
            front,
            extended: None,
            decay: DecayTable::new(num_sites),
            streams,
            cursor: vec![0; n],
            output: Vec::with_capacity(circuit.len()),
            swaps: 0,
            forced_swaps: 0,
            search_steps: 0,
            steps_without_progress: 0,
        };
        for q in 0..n {
            router.flush_single_qubit_gates(q);
        }
        Ok(router)
    }

    pub fn is_done(&self) -> bool {
        self.front.is_empty()
    }

    /// Current front layer, ascending gate id.
    pub fn front_layer(&self) -> &[usize] {
        &self.front
    }

    pub fn extended_set(&mut self) -> &[usize] {
        if self.extended.is_none() {
            self.extended = Some(compute_extended_set(
                &self.dag,
                &self.front,
                self.params.extended_set_size,
            ));
        }
        self.extended.as_deref().unwrap_or_default()
    }

    /// Current mapping, including ancillas on otherwise vacant sites.
    pub fn mapping(&self) -> &Mapping {
        &self.mapping
    }

    pub fn circuit(&self) -> &Circuit {
        self.circuit
    }

    pub fn device(&self) -> &Device {
        self.device
    }

    pub fn decay(&self) -> &DecayTable {
        &self.decay
    }

    /// Emit every currently executable front-layer gate and admit the
    /// successors they unblock. Returns how many gates were executed.
    pub fn execute_ready(&mut self) -> usize {
        let ready = executable_gates(&self.front, self.circuit, &self.mapping, self.device.graph());
        if ready.is_empty() {
            return 0;
        }
        self.front.retain(|g| !ready.contains(g));
        for &gate in &ready {
            self.emit_two_qubit_gate(gate);
            for i in 0..self.dag.successors(gate).len() {
                let succ = self.dag.successors(gate)[i];
                self.remaining_predecessors[succ] -= 1;
                if self.remaining_predecessors[succ] == 0 {
                    self.front.push(succ);
                }
            }
        }
        self.front.sort_unstable();
        self.extended = None;
        self.decay.reset();
        self.steps_without_progress = 0;
        ready.len()
    }

    /// Every candidate SWAP with its look-ahead cost.
    pub fn score_swaps(&mut self) -> Vec<(PhysicalSwap, f64)> {
        let candidates = obtain_swaps(&self.front, self.circuit, &self.mapping, self.device.graph());
        self.extended_set();
        let extended = self.extended.as_deref().unwrap_or_default();
        candidates
            .into_iter()
            .map(|swap| {
                let score = h_full(
                    swap,
                    &self.front,
                    extended,
                    self.circuit,
                    &self.mapping,
                    self.device.distances(),
                    &self.decay,
                    self.params.lookahead_weight,
                );
                (swap, score)
            })
            .collect()
    }

    /// Lowest-cost candidate; ties are broken uniformly at random.
    pub fn choose_swap(&mut self) -> PhysicalSwap {
        let scores = self.score_swaps();
        let mut best = Vec::new();
        let mut min_score = f64::INFINITY;
        for (swap, score) in scores {
            if score - min_score < -SCORE_EPSILON {
                min_score = score;
                best.clear();
                best.push(swap);
            } else if (score - min_score).abs() <= SCORE_EPSILON {
                best.push(swap);
            }
        }
        *best
            .choose(&mut self.rng)
            .expect("a non-empty front layer on a connected device has candidates")
    }

    /// Apply a heuristic SWAP: emit it, update the mapping, and advance the
    /// decay bookkeeping.
    pub fn apply_search_swap(&mut self, swap: PhysicalSwap) {
        let [a, b] = swap;
        let qa = self.mapping.logical_at(a).expect("mapping is padded");
        let qb = self.mapping.logical_at(b).expect("mapping is padded");
        self.insert_swap(swap);
        self.search_steps += 1;
        self.steps_without_progress += 1;
        self.decay.bump(qa, self.params.decay_delta);
        self.decay.bump(qb, self.params.decay_delta);
        self.decay.record_step(self.params.decay_reset_interval);
    }

    fn insert_swap(&mut self, [a, b]: PhysicalSwap) {
        debug_assert!(self.device.graph().is_edge(a, b));
        let qa = self.mapping.logical_at(a).expect("mapping is padded");
        let qb = self.mapping.logical_at(b).expect("mapping is padded");
        self.output.push(Gate::Swap { a: qa, b: qb });
        self.mapping.swap_unchecked(a, b);
        self.swaps += 1;
    }

    /// Budget of consecutive search steps without executing a gate before
    /// the stall fallback takes over.
    fn stall_budget(&self) -> usize {
        3 * (self.device.diameter() as usize).max(1) * self.front.len().max(1)
    }

    /// Walk the first operand of the lowest-id front gate along a shortest
    /// path until it neighbors the second operand.
    fn force_progress(&mut self) -> Result<(), RouteError> {
        let gate = self.front[0];
        let (a, b) = self.circuit.gate(gate).pair().expect("two-qubit gate");
        let from = self.mapping.phys(a);
        let to = self.mapping.phys(b);
        let path = self
            .device
            .graph()
            .shortest_path(from, to)
            .ok_or_else(|| RouteError::Stalled {
                front_layer: self.front.clone(),
            })?;
        for hop in path.windows(2).take(path.len().saturating_sub(2)) {
            let swap = if hop[0] < hop[1] { [hop[0], hop[1]] } else { [hop[1], hop[0]] };
            self.insert_swap(swap);
            self.forced_swaps += 1;
        }
        self.decay.reset();
        self.steps_without_progress = 0;
        if !self.device.graph().is_edge(self.mapping.phys(a), self.mapping.phys(b)) {
            return Err(RouteError::Stalled {
                front_layer: self.front.clone(),
            });
        }
        Ok(())
    }

    fn emit_two_qubit_gate(&mut self, gate: usize) {
        self.output.push(self.circuit.gate(gate).clone());
        for q in self.circuit.gate(gate).qubits().iter() {
            let q = q.index();
            debug_assert_eq!(self.streams[q][self.cursor[q]], gate);
            self.cursor[q] += 1;
            self.flush_single_qubit_gates(q);
        }
    }

    fn flush_single_qubit_gates(&mut self, q: usize) {
        while let Some(&next) = self.streams[q].get(self.cursor[q]) {
            let gate = self.circuit.gate(next);
            if gate.is_two_qubit() {
                break;
            }
            self.output.push(gate.clone());
            self.cursor[q] += 1;
        }
    }

    /// Route to completion.
    pub fn run(mut self) -> Result<RoutedCircuit, RouteError> {
        let start = Instant::now();
        while !self.is_done() {
            if self.execute_ready() > 0 {
                continue;
            }
            if self.steps_without_progress >= self.stall_budget() {
                self.force_progress()?;
                continue;
            }
            let swap = self.choose_swap();
            self.apply_search_swap(swap);
        }
        let runtime = start.elapsed();
        Ok(self.finish(runtime))
    }

    fn finish(self, runtime: Duration) -> RoutedCircuit {
        let n = self.circuit.num_qubits();
        let width = if self.device.num_qubits() > n {
            self.device.num_qubits()
        } else {
            n
        };
        let circuit = Circuit::with_cregs(width, self.circuit.cregs().to_vec(), self.output)
            .expect("routed gates stay within the widened register");
        let counts = circuit.gate_counts();
        let stats = RouteStats {
            swaps_inserted: self.swaps,
            added_gates: 3 * self.swaps,
            total_gates: counts.decomposed_total(),
            depth: circuit.depth(),
            search_steps: self.search_steps,
            forced_swaps: self.forced_swaps,
            runtime,
        };
        RoutedCircuit {
            circuit,
            initial_mapping: self.initial.restricted(n),
            final_mapping: self.mapping.restricted(n),
            seed: self.seed,
            stats,
        }
    }
}

/// Route `circuit` on `device` starting from `initial_mapping`. The seed
/// only drives tie-breaking between equally scored SWAPs.
pub fn route(
    circuit: &Circuit,
    device: &Device,
    initial_mapping: &Mapping,
    params: &RouterParams,
    seed: u64,
) -> Result<RoutedCircuit, RouteError> {
    Router::new(circuit, device, initial_mapping, *params, seed)?.run()
}
