//! Dependency DAG over the two-qubit gates of a circuit.
//!
//! One-qubit gates never constrain routing, so they are not nodes. An edge
//! `a -> b` links each two-qubit gate to the most recent earlier two-qubit
//! gate on each of its qubits; a node therefore has at most two parents.

use crate::circuit::Circuit;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateDag {
    /// Gate ids of the two-qubit gates, ascending.
    nodes: Vec<usize>,
    /// Indexed by gate id; empty for one-qubit gates.
    successors: Vec<Vec<usize>>,
    predecessors: Vec<Vec<usize>>,
}

impl GateDag {
    /// Single pass over the circuit keeping the last two-qubit gate seen on
    /// each qubit.
    pub fn build(circuit: &Circuit) -> Self {
        let g = circuit.len();
        let mut last_on_qubit: Vec<Option<usize>> = vec![None; circuit.num_qubits()];
        let mut nodes = Vec::new();
        let mut successors = vec![Vec::new(); g];
        let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); g];
        for (id, gate) in circuit.gates().iter().enumerate() {
            let Some((a, b)) = gate.pair() else {
                continue;
            };
            nodes.push(id);
            for q in [a, b] {
                if let Some(prev) = last_on_qubit[q.index()] {
                    if !predecessors[id].contains(&prev) {
                        predecessors[id].push(prev);
                        successors[prev].push(id);
                    }
                }
                last_on_qubit[q.index()] = Some(id);
            }
        }
        for list in predecessors.iter_mut() {
            list.sort_unstable();
        }
        GateDag {
            nodes,
            successors,
            predecessors,
        }
    }

    /// Gate ids of the two-qubit gates.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Immediate successors, ascending gate id.
    pub fn successors(&self, gate: usize) -> &[usize] {
        &self.successors[gate]
    }

    pub fn predecessors(&self, gate: usize) -> &[usize] {
        &self.predecessors[gate]
    }

    pub fn indegree(&self, gate: usize) -> usize {
        self.predecessors[gate].len()
    }

    /// All edges `(from, to)` in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .nodes
            .iter()
            .flat_map(|&a| self.successors[a].iter().map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    /// The gates with no predecessors, ascending.
    pub fn initial_front_layer(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .copied()
            .filter(|&id| self.predecessors[id].is_empty())
            .collect()
    }

    /// Kahn's algorithm; `None` if a cycle exists (never, for a built DAG).
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut remaining: Vec<usize> = self.predecessors.iter().map(Vec::len).collect();
        let mut ready = self.initial_front_layer();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(node) = ready.pop() {
            order.push(node);
            for &succ in &self.successors[node] {
                remaining[succ] -= 1;
                if remaining[succ] == 0 {
                    ready.push(succ);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }
}
