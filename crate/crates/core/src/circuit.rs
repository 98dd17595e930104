//! Gate-list circuit representation over logical qubits.

use std::fmt;

use thiserror::Error;

/// Index of a program (logical) qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogicalQubit(pub usize);

impl LogicalQubit {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for LogicalQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// A bit of a named classical register, used as a measurement target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Clbit {
    pub register: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalRegister {
    pub name: String,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    Cx {
        control: LogicalQubit,
        target: LogicalQubit,
    },
    Swap {
        a: LogicalQubit,
        b: LogicalQubit,
    },
    /// Any one-qubit operation. Parameters are kept as literal source text;
    /// routing never looks inside them.
    Single {
        name: String,
        params: Vec<String>,
        qubit: LogicalQubit,
    },
    Measure {
        qubit: LogicalQubit,
        clbit: Clbit,
    },
}

impl Gate {
    pub fn cx(control: usize, target: usize) -> Self {
        Gate::Cx {
            control: LogicalQubit(control),
            target: LogicalQubit(target),
        }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::Swap {
            a: LogicalQubit(a),
            b: LogicalQubit(b),
        }
    }

    pub fn single(name: &str, qubit: usize) -> Self {
        Gate::Single {
            name: name.to_string(),
            params: Vec::new(),
            qubit: LogicalQubit(qubit),
        }
    }

    pub fn single_with_params(name: &str, params: &[&str], qubit: usize) -> Self {
        Gate::Single {
            name: name.to_string(),
            params: params.iter().map(|p| p.to_string()).collect(),
            qubit: LogicalQubit(qubit),
        }
    }

    pub fn measure(qubit: usize, register: usize, index: usize) -> Self {
        Gate::Measure {
            qubit: LogicalQubit(qubit),
            clbit: Clbit { register, index },
        }
    }

    /// The operand pair of a two-qubit gate, in operand order.
    #[inline]
    pub fn pair(&self) -> Option<(LogicalQubit, LogicalQubit)> {
        match *self {
            Gate::Cx { control, target } => Some((control, target)),
            Gate::Swap { a, b } => Some((a, b)),
            _ => None,
        }
    }

    #[inline]
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. } | Gate::Swap { .. })
    }

    pub fn qubits(&self) -> Operands {
        match *self {
            Gate::Cx { control, target } => Operands::Two(control, target),
            Gate::Swap { a, b } => Operands::Two(a, b),
            Gate::Single { qubit, .. } | Gate::Measure { qubit, .. } => Operands::One(qubit),
        }
    }

    /// Rename every operand through `f`.
    pub fn relabel(&self, mut f: impl FnMut(LogicalQubit) -> LogicalQubit) -> Gate {
        match self {
            Gate::Cx { control, target } => Gate::Cx {
                control: f(*control),
                target: f(*target),
            },
            Gate::Swap { a, b } => Gate::Swap { a: f(*a), b: f(*b) },
            Gate::Single {
                name,
                params,
                qubit,
            } => Gate::Single {
                name: name.clone(),
                params: params.clone(),
                qubit: f(*qubit),
            },
            Gate::Measure { qubit, clbit } => Gate::Measure {
                qubit: f(*qubit),
                clbit: *clbit,
            },
        }
    }
}

/// Operands of a gate: one or two logical qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operands {
    One(LogicalQubit),
    Two(LogicalQubit, LogicalQubit),
}

impl Operands {
    pub fn iter(self) -> impl Iterator<Item = LogicalQubit> {
        let (first, second) = match self {
            Operands::One(q) => (q, None),
            Operands::Two(a, b) => (a, Some(b)),
        };
        std::iter::once(first).chain(second)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("circuit must have at least one qubit")]
    NoQubits,
    #[error("gate {gate}: qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange {
        gate: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("gate {gate}: two-qubit gate acts twice on qubit {qubit}")]
    RepeatedOperand { gate: usize, qubit: usize },
    #[error("gate {gate}: classical bit {index} out of range for register {register}")]
    ClbitOutOfRange {
        gate: usize,
        register: usize,
        index: usize,
    },
}

/// An ordered gate list. A gate's id is its position in `gates`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    cregs: Vec<ClassicalRegister>,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        Self::with_cregs(num_qubits, Vec::new(), gates)
    }

    pub fn with_cregs(
        num_qubits: usize,
        cregs: Vec<ClassicalRegister>,
        gates: Vec<Gate>,
    ) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        let circuit = Circuit {
            num_qubits,
            cregs,
            gates,
        };
        for (id, gate) in circuit.gates.iter().enumerate() {
            circuit.check_gate(id, gate)?;
        }
        Ok(circuit)
    }

    fn check_gate(&self, id: usize, gate: &Gate) -> Result<(), CircuitError> {
        for q in gate.qubits().iter() {
            if q.index() >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    gate: id,
                    qubit: q.index(),
                    num_qubits: self.num_qubits,
                });
            }
        }
        if let Some((a, b)) = gate.pair() {
            if a == b {
                return Err(CircuitError::RepeatedOperand {
                    gate: id,
                    qubit: a.index(),
                });
            }
        }
        if let Gate::Measure { clbit, .. } = gate {
            let in_range = self
                .cregs
                .get(clbit.register)
                .is_some_and(|reg| clbit.index < reg.size);
            if !in_range {
                return Err(CircuitError::ClbitOutOfRange {
                    gate: id,
                    register: clbit.register,
                    index: clbit.index,
                });
            }
        }
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<usize, CircuitError> {
        let id = self.gates.len();
        self.check_gate(id, &gate)?;
        self.gates.push(gate);
        Ok(id)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    #[inline]
    pub fn gate(&self, id: usize) -> &Gate {
        &self.gates[id]
    }

    pub fn cregs(&self) -> &[ClassicalRegister] {
        &self.cregs
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn num_two_qubit_gates(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Same gates in reverse program order. Gate semantics are not inverted:
    /// only the operand structure matters for routing.
    pub fn reversed(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            cregs: self.cregs.clone(),
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }

    /// Every `Swap` replaced by `cx(a,b) cx(b,a) cx(a,b)`.
    pub fn decomposed(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            match *gate {
                Gate::Swap { a, b } => gates.extend(swap_as_cx(a, b)),
                _ => gates.push(gate.clone()),
            }
        }
        Circuit {
            num_qubits: self.num_qubits,
            cregs: self.cregs.clone(),
            gates,
        }
    }

    /// The same gates on a wider register, e.g. to give ancilla qubits names.
    pub fn widened(&self, num_qubits: usize) -> Circuit {
        assert!(num_qubits >= self.num_qubits);
        Circuit {
            num_qubits,
            cregs: self.cregs.clone(),
            gates: self.gates.clone(),
        }
    }

    /// Length of the critical path under unit-latency ASAP scheduling.
    ///
    /// A SWAP counts as its three-CNOT decomposition, so a circuit and its
    /// `decomposed()` form have the same depth.
    pub fn depth(&self) -> usize {
        let mut busy_until = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for gate in &self.gates {
            let (start, latency) = match gate.qubits() {
                Operands::One(q) => (busy_until[q.index()], 1),
                Operands::Two(a, b) => {
                    let latency = if matches!(gate, Gate::Swap { .. }) { 3 } else { 1 };
                    (busy_until[a.index()].max(busy_until[b.index()]), latency)
                }
            };
            let end = start + latency;
            for q in gate.qubits().iter() {
                busy_until[q.index()] = end;
            }
            depth = depth.max(end);
        }
        depth
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for gate in &self.gates {
            match gate {
                Gate::Cx { .. } => counts.cx += 1,
                Gate::Swap { .. } => counts.swap += 1,
                Gate::Single { .. } => counts.single += 1,
                Gate::Measure { .. } => counts.measure += 1,
            }
        }
        counts
    }
}

pub(crate) fn swap_as_cx(a: LogicalQubit, b: LogicalQubit) -> [Gate; 3] {
    [
        Gate::Cx {
            control: a,
            target: b,
        },
        Gate::Cx {
            control: b,
            target: a,
        },
        Gate::Cx {
            control: a,
            target: b,
        },
    ]
}

/// Per-kind gate tallies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub cx: usize,
    pub swap: usize,
    pub single: usize,
    pub measure: usize,
}

impl GateCounts {
    /// Total with each SWAP counted as one gate.
    pub fn total(&self) -> usize {
        self.cx + self.swap + self.single + self.measure
    }

    /// Total with each SWAP counted as three CNOTs.
    pub fn decomposed_total(&self) -> usize {
        self.total() + 2 * self.swap
    }
}
