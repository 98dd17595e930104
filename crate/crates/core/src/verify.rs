//! Hardware-compliance and equivalence checks for routed circuits.
//!
//! Routed circuits are written over logical qubits. Replaying one means
//! tracking the mapping from the initial layout: an inserted SWAP moves two
//! logical qubits, and every two-qubit gate must land on a coupler under the
//! mapping current at that point.

use thiserror::Error;

use crate::circuit::{Circuit, Gate, LogicalQubit};
use crate::device::{Device, PhysicalQubit};
use crate::layout::{Mapping, MappingError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("routed circuit uses {routed} qubits but the device has {device}")]
    TooWide { routed: usize, device: usize },
    #[error("initial mapping does not match the device or circuit: {0}")]
    Mapping(#[from] MappingError),
    #[error("initial mapping covers {mapped} logical qubits but the original circuit has {original}")]
    MappingShape { mapped: usize, original: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A two-qubit gate whose operands sit on uncoupled sites.
    NotAdjacent {
        physical: (PhysicalQubit, PhysicalQubit),
    },
    /// A gate that is not the next gate of the original circuit on its
    /// qubits, nor part of an inserted SWAP.
    Unmatched,
    /// The routed circuit ended before this original gate was emitted.
    Missing { original_gate: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Position in the routed circuit (its length for `Missing`).
    pub gate: usize,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplianceReport {
    pub compliant: bool,
    /// Mapping after replaying every SWAP, over the routed register.
    pub final_mapping: Mapping,
    pub first_violation: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub compliant: bool,
    /// Implies `compliant`.
    pub equivalent: bool,
    /// Mapping of the original circuit's qubits after the replay.
    pub final_mapping: Mapping,
    pub first_violation: Option<Violation>,
}

fn replay_mapping(routed: &Circuit, device: &Device, initial: &Mapping) -> Result<Mapping, VerifyError> {
    if routed.num_qubits() > device.num_qubits() {
        return Err(VerifyError::TooWide {
            routed: routed.num_qubits(),
            device: device.num_qubits(),
        });
    }
    if initial.num_physical() != device.num_qubits() {
        return Err(VerifyError::Mapping(MappingError::TooManyLogical {
            logical: initial.num_logical(),
            physical: device.num_qubits(),
        }));
    }
    Ok(initial.padded(routed.num_qubits().max(initial.num_logical()))?)
}

fn adjacency_violation(
    device: &Device,
    mapping: &Mapping,
    a: LogicalQubit,
    b: LogicalQubit,
) -> Option<ViolationKind> {
    let (pa, pb) = (mapping.phys(a), mapping.phys(b));
    (!device.graph().is_edge(pa, pb)).then_some(ViolationKind::NotAdjacent { physical: (pa, pb) })
}

/// Replay `routed` (SWAPs as gates) from `initial_mapping` and report the
/// first two-qubit gate acting on an uncoupled pair.
pub fn check_compliance(
    routed: &Circuit,
    device: &Device,
    initial_mapping: &Mapping,
) -> Result<ComplianceReport, VerifyError> {
    let mut mapping = replay_mapping(routed, device, initial_mapping)?;
    let mut first_violation = None;
    for (idx, gate) in routed.gates().iter().enumerate() {
        let Some((a, b)) = gate.pair() else { continue };
        if let Some(kind) = adjacency_violation(device, &mapping, a, b) {
            first_violation.get_or_insert(Violation { gate: idx, kind });
        }
        if matches!(gate, Gate::Swap { .. }) {
            mapping.swap_unchecked(mapping.phys(a), mapping.phys(b));
        }
    }
    Ok(ComplianceReport {
        compliant: first_violation.is_none(),
        final_mapping: mapping,
        first_violation,
    })
}

fn is_cx(gate: Option<&Gate>, control: LogicalQubit, target: LogicalQubit) -> bool {
    matches!(gate, Some(Gate::Cx { control: c, target: t }) if *c == control && *t == target)
}

/// Check that `routed` is `original` with SWAPs inserted, and that it is
/// hardware compliant.
///
/// Inserted SWAPs may appear as `Swap` gates or as their three-CNOT
/// decomposition `cx(a,b) cx(b,a) cx(a,b)`. A gate that could be the next
/// original gate on its qubits is always matched as such first; the router
/// never inserts a SWAP between the operands of an executable front gate, so
/// this resolves every output it produces.
pub fn verify_equivalence(
    original: &Circuit,
    routed: &Circuit,
    device: &Device,
    initial_mapping: &Mapping,
) -> Result<VerificationReport, VerifyError> {
    if initial_mapping.num_logical() != original.num_qubits() {
        return Err(VerifyError::MappingShape {
            mapped: initial_mapping.num_logical(),
            original: original.num_qubits(),
        });
    }
    let mut mapping = replay_mapping(routed, device, initial_mapping)?;

    let n = original.num_qubits();
    let mut streams: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, gate) in original.gates().iter().enumerate() {
        for q in gate.qubits().iter() {
            streams[q.index()].push(id);
        }
    }
    let mut cursor = vec![0usize; n];
    let next_original = |cursor: &[usize], q: LogicalQubit| -> Option<usize> {
        streams.get(q.index()).and_then(|s| s.get(cursor[q.index()])).copied()
    };

    let mut compliance_violation: Option<Violation> = None;
    let mut mismatch: Option<Violation> = None;
    let gates = routed.gates();
    let mut idx = 0;
    while idx < gates.len() {
        let gate = &gates[idx];
        let candidate = {
            let mut ids = gate.qubits().iter().map(|q| next_original(&cursor, q));
            let first = ids.next().flatten();
            first.filter(|&id| ids.all(|other| other == Some(id)) && original.gate(id) == gate)
        };

        if let Some(id) = candidate {
            if let Some((a, b)) = gate.pair() {
                if let Some(kind) = adjacency_violation(device, &mapping, a, b) {
                    compliance_violation.get_or_insert(Violation { gate: idx, kind });
                }
            }
            for q in original.gate(id).qubits().iter() {
                cursor[q.index()] += 1;
            }
            idx += 1;
            continue;
        }

        let inserted = match *gate {
            Gate::Swap { a, b } => Some((a, b, 1)),
            Gate::Cx { control, target }
                if is_cx(gates.get(idx + 1), target, control) && is_cx(gates.get(idx + 2), control, target) =>
            {
                Some((control, target, 3))
            }
            _ => None,
        };
        match inserted {
            Some((a, b, width)) => {
                if let Some(kind) = adjacency_violation(device, &mapping, a, b) {
                    compliance_violation.get_or_insert(Violation { gate: idx, kind });
                }
                mapping.swap_unchecked(mapping.phys(a), mapping.phys(b));
                idx += width;
            }
            None => {
                mismatch.get_or_insert(Violation {
                    gate: idx,
                    kind: ViolationKind::Unmatched,
                });
                if let Some((a, b)) = gate.pair() {
                    if let Some(kind) = adjacency_violation(device, &mapping, a, b) {
                        compliance_violation.get_or_insert(Violation { gate: idx, kind });
                    }
                }
                idx += 1;
            }
        }
    }

    if mismatch.is_none() {
        if let Some(q) = (0..n).find(|&q| cursor[q] < streams[q].len()) {
            mismatch = Some(Violation {
                gate: gates.len(),
                kind: ViolationKind::Missing {
                    original_gate: streams[q][cursor[q]],
                },
            });
        }
    }

    let compliant = compliance_violation.is_none();
    let first_violation = match (compliance_violation, mismatch.clone()) {
        (Some(c), Some(m)) => Some(if c.gate <= m.gate { c } else { m }),
        (c, m) => c.or(m),
    };
    Ok(VerificationReport {
        compliant,
        equivalent: compliant && mismatch.is_none(),
        final_mapping: mapping.restricted(n),
        first_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six_cnot() -> Circuit {
        Circuit::new(
            4,
            vec![
                Gate::cx(0, 1),
                Gate::cx(2, 3),
                Gate::cx(0, 2),
                Gate::cx(0, 3),
                Gate::cx(2, 3),
                Gate::cx(1, 2),
            ],
        )
        .unwrap()
    }

    fn hand_routed() -> Circuit {
        let c = six_cnot();
        let mut gates = c.gates()[..3].to_vec();
        gates.push(Gate::swap(0, 1));
        gates.extend_from_slice(&c.gates()[3..]);
        Circuit::new(4, gates).unwrap()
    }

    #[test]
    fn worked_example_compliance() {
        let dev = Device::builtin("ring4").unwrap();
        let id = Mapping::identity(4, 4).unwrap();
        let report = check_compliance(&hand_routed(), &dev, &id).unwrap();
        assert!(report.compliant);

        let report = check_compliance(&six_cnot(), &dev, &id).unwrap();
        assert!(!report.compliant);
        assert_eq!(report.first_violation.unwrap().gate, 3);

        let empty = Circuit::new(4, vec![]).unwrap();
        assert!(check_compliance(&empty, &dev, &id).unwrap().compliant);
    }

    #[test]
    fn worked_example_equivalence() {
        let dev = Device::builtin("ring4").unwrap();
        let id = Mapping::identity(4, 4).unwrap();
        let report = verify_equivalence(&six_cnot(), &hand_routed(), &dev, &id).unwrap();
        assert!(report.equivalent && report.compliant);
        let expected = Mapping::from_forward(vec![1, 0, 2, 3], 4).unwrap();
        assert_eq!(report.final_mapping, expected);

        let decomposed = hand_routed().decomposed();
        let report = verify_equivalence(&six_cnot(), &decomposed, &dev, &id).unwrap();
        assert!(report.equivalent);
        assert_eq!(report.final_mapping, expected);
    }

    #[test]
    fn identity_routing_is_equivalent() {
        let dev = Device::builtin("line3").unwrap();
        let c = Circuit::new(3, vec![Gate::single("h", 0), Gate::cx(0, 1), Gate::cx(1, 2)]).unwrap();
        let id = Mapping::identity(3, 3).unwrap();
        let report = verify_equivalence(&c, &c, &dev, &id).unwrap();
        assert!(report.equivalent);
        assert_eq!(report.final_mapping, id);
    }

    #[test]
    fn flipped_operands_are_caught() {
        let dev = Device::builtin("ring4").unwrap();
        let id = Mapping::identity(4, 4).unwrap();
        let mut gates = hand_routed().gates().to_vec();
        gates[4] = Gate::cx(3, 0);
        let mutated = Circuit::new(4, gates).unwrap();
        let report = verify_equivalence(&six_cnot(), &mutated, &dev, &id).unwrap();
        assert!(!report.equivalent);
        assert_eq!(report.first_violation.unwrap().gate, 4);
    }

    #[test]
    fn dropped_and_reordered_gates_are_caught() {
        let dev = Device::builtin("line3").unwrap();
        let id = Mapping::identity(3, 3).unwrap();
        let c = Circuit::new(3, vec![Gate::single("h", 1), Gate::cx(0, 1), Gate::cx(1, 2)]).unwrap();
        let dropped = Circuit::new(3, vec![Gate::single("h", 1), Gate::cx(0, 1)]).unwrap();
        let report = verify_equivalence(&c, &dropped, &dev, &id).unwrap();
        assert!(!report.equivalent);
        assert_eq!(
            report.first_violation.unwrap().kind,
            ViolationKind::Missing { original_gate: 2 }
        );

        let reordered = Circuit::new(3, vec![Gate::cx(0, 1), Gate::single("h", 1), Gate::cx(1, 2)]).unwrap();
        assert!(!verify_equivalence(&c, &reordered, &dev, &id).unwrap().equivalent);

        // One-qubit gates on different qubits may interleave freely.
        let c2 = Circuit::new(3, vec![Gate::single("h", 0), Gate::single("x", 2)]).unwrap();
        let swapped = Circuit::new(3, vec![Gate::single("x", 2), Gate::single("h", 0)]).unwrap();
        assert!(verify_equivalence(&c2, &swapped, &dev, &id).unwrap().equivalent);
    }

    #[test]
    fn non_adjacent_swap_is_not_compliant() {
        let dev = Device::builtin("line3").unwrap();
        let id = Mapping::identity(3, 3).unwrap();
        let c = Circuit::new(3, vec![Gate::cx(0, 1)]).unwrap();
        let routed = Circuit::new(3, vec![Gate::swap(0, 2), Gate::cx(0, 1)]).unwrap();
        let report = verify_equivalence(&c, &routed, &dev, &id).unwrap();
        assert!(!report.compliant && !report.equivalent);
        assert_eq!(report.first_violation.unwrap().gate, 0);
    }

    #[test]
    fn ancilla_swaps_replay() {
        // q0 on site 0, q1 on site 2 of line3; the ancilla q2 starts on site 1.
        let dev = Device::builtin("line3").unwrap();
        let m = Mapping::from_forward(vec![0, 2], 3).unwrap();
        let c = Circuit::new(2, vec![Gate::cx(0, 1), Gate::single("h", 1)]).unwrap();
        let routed = Circuit::new(3, vec![Gate::swap(0, 2), Gate::cx(0, 1), Gate::single("h", 1)]).unwrap();
        let report = verify_equivalence(&c, &routed, &dev, &m).unwrap();
        assert!(report.equivalent);
        assert_eq!(report.final_mapping, Mapping::from_forward(vec![1, 2], 3).unwrap());

        let stray = Circuit::new(3, vec![Gate::single("h", 2), Gate::cx(0, 1)]).unwrap();
        assert!(!verify_equivalence(&c, &stray, &dev, &m).unwrap().equivalent);
    }

    #[test]
    fn shape_errors() {
        let dev = Device::builtin("line3").unwrap();
        let c = Circuit::new(4, vec![]).unwrap();
        let m = Mapping::identity(3, 3).unwrap();
        assert!(matches!(check_compliance(&c, &dev, &m), Err(VerifyError::TooWide { .. })));
        let c3 = Circuit::new(3, vec![]).unwrap();
        let m4 = Mapping::identity(3, 4).unwrap();
        assert!(verify_equivalence(&c3, &c3, &dev, &m4).is_err());
        let m2 = Mapping::identity(2, 3).unwrap();
        assert!(matches!(
            verify_equivalence(&c3, &c3, &dev, &m2),
            Err(VerifyError::MappingShape { .. })
        ));
    }
}
