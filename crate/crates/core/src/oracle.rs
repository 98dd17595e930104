//! Exact minimum SWAP count for tiny instances.
//!
//! Breadth-first search over (mapping, executed gates). Executing a gate is
//! free and never hurts, so each state greedily executes everything it can
//! before branching on every coupler as the next SWAP.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::circuit::Circuit;
use crate::dag::GateDag;
use crate::device::Device;
use crate::layout::Mapping;

pub const MAX_LOGICAL: usize = 6;
pub const MAX_PHYSICAL: usize = 6;
pub const MAX_TWO_QUBIT_GATES: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(
        "instance too large for exhaustive search ({logical} qubits, {gates} two-qubit gates, \
         {physical} sites; limits {MAX_LOGICAL}, {MAX_TWO_QUBIT_GATES}, {MAX_PHYSICAL})"
    )]
    TooLarge {
        logical: usize,
        gates: usize,
        physical: usize,
    },
    #[error("circuit needs {logical} qubits but the device has {physical}")]
    TooManyQubits { logical: usize, physical: usize },
    #[error("initial mapping does not match the circuit and device")]
    MappingShape,
}

/// Two-qubit gates as operand pairs plus a predecessor bitmask each.
pub(crate) struct TinyProblem {
    pub(crate) pairs: Vec<(usize, usize)>,
    pub(crate) preds: Vec<u16>,
    pub(crate) num_physical: usize,
    pub(crate) adjacent: Vec<bool>,
    pub(crate) edges: Vec<(usize, usize)>,
}

impl TinyProblem {
    pub(crate) fn new(circuit: &Circuit, device: &Device) -> Result<Self, OracleError> {
        let dag = GateDag::build(circuit);
        let (n, big_n) = (circuit.num_qubits(), device.num_qubits());
        if n > MAX_LOGICAL || dag.len() > MAX_TWO_QUBIT_GATES || big_n > MAX_PHYSICAL {
            return Err(OracleError::TooLarge {
                logical: n,
                gates: dag.len(),
                physical: big_n,
            });
        }
        if n > big_n {
            return Err(OracleError::TooManyQubits {
                logical: n,
                physical: big_n,
            });
        }
        let index_of = |gate: usize| dag.nodes().iter().position(|&g| g == gate).unwrap();
        let mut pairs = Vec::new();
        let mut preds = Vec::new();
        for &gate in dag.nodes() {
            let (a, b) = circuit.gate(gate).pair().unwrap();
            pairs.push((a.index(), b.index()));
            preds.push(
                dag.predecessors(gate)
                    .iter()
                    .fold(0u16, |mask, &p| mask | 1 << index_of(p)),
            );
        }
        let mut adjacent = vec![false; big_n * big_n];
        for &(a, b) in device.graph().edges() {
            adjacent[a * big_n + b] = true;
            adjacent[b * big_n + a] = true;
        }
        Ok(TinyProblem {
            pairs,
            preds,
            num_physical: big_n,
            adjacent,
            edges: device.graph().edges().to_vec(),
        })
    }

    pub(crate) fn full_mask(&self) -> u16 {
        ((1u32 << self.pairs.len()) - 1) as u16
    }

    /// Execute every gate that becomes available without SWAPs.
    pub(crate) fn close(&self, positions: &[u8], mut done: u16) -> u16 {
        loop {
            let before = done;
            for (i, &(a, b)) in self.pairs.iter().enumerate() {
                let bit = 1u16 << i;
                if done & bit == 0
                    && self.preds[i] & !done == 0
                    && self.adjacent[positions[a] as usize * self.num_physical + positions[b] as usize]
                {
                    done |= bit;
                }
            }
            if done == before {
                return done;
            }
        }
    }

    pub(crate) fn swapped(positions: &[u8], (u, v): (usize, usize)) -> Vec<u8> {
        positions
            .iter()
            .map(|&p| match p as usize {
                x if x == u => v as u8,
                x if x == v => u as u8,
                _ => p,
            })
            .collect()
    }
}

fn key(positions: &[u8], done: u16) -> u64 {
    positions
        .iter()
        .fold(done as u64, |acc, &p| (acc << 3) | p as u64)
}

/// All injections of `n` logical qubits into `num_physical` sites.
pub(crate) fn all_injections(n: usize, num_physical: usize) -> Vec<Vec<u8>> {
    fn extend(prefix: &mut Vec<u8>, n: usize, num_physical: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for p in 0..num_physical as u8 {
            if !prefix.contains(&p) {
                prefix.push(p);
                extend(prefix, n, num_physical, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), n, num_physical, &mut out);
    out
}

/// Fewest SWAPs that make every two-qubit gate of `circuit` executable on
/// `device`, starting from `initial_mapping`, or from the best possible
/// mapping when `None`.
pub fn optimal_swap_count(
    circuit: &Circuit,
    device: &Device,
    initial_mapping: Option<&Mapping>,
) -> Result<usize, OracleError> {
    let problem = TinyProblem::new(circuit, device)?;
    let starts: Vec<Vec<u8>> = match initial_mapping {
        Some(m) => {
            if m.num_logical() != circuit.num_qubits() || m.num_physical() != device.num_qubits() {
                return Err(OracleError::MappingShape);
            }
            vec![m.forward().iter().map(|p| p.index() as u8).collect()]
        }
        None => all_injections(circuit.num_qubits(), device.num_qubits()),
    };

    let goal = problem.full_mask();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for positions in starts {
        let done = problem.close(&positions, 0);
        if done == goal {
            return Ok(0);
        }
        if seen.insert(key(&positions, done)) {
            queue.push_back((positions, done, 0usize));
        }
    }
    while let Some((positions, done, cost)) = queue.pop_front() {
        for &edge in &problem.edges {
            let next = TinyProblem::swapped(&positions, edge);
            let next_done = problem.close(&next, done);
            if next_done == goal {
                return Ok(cost + 1);
            }
            if seen.insert(key(&next, next_done)) {
                queue.push_back((next, next_done, cost + 1));
            }
        }
    }
    unreachable!("a connected device can always bring any two qubits together")
}
