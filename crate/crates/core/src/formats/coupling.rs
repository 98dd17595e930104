//! Plain-text coupling graph files.
//!
//! ```text
//! # comment
//! 4        <- number of physical qubits
//! 0 1      <- one undirected coupler per line
//! 1 3
//! ```

use thiserror::Error;

use crate::device::{CouplingGraph, DeviceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CouplingParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing qubit count")]
    Empty,
    #[error(transparent)]
    Device(#[from] DeviceError),
}

pub fn parse_coupling(text: &str) -> Result<CouplingGraph, CouplingParseError> {
    let mut num_qubits = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| CouplingParseError::Syntax {
                line: line_no,
                message: format!("expected a non-negative integer, found '{s}'"),
            })
        };
        match (num_qubits, fields.as_slice()) {
            (None, [n]) => num_qubits = Some(parse(n)?),
            (None, _) => {
                return Err(CouplingParseError::Syntax {
                    line: line_no,
                    message: "first line must hold the qubit count".into(),
                })
            }
            (Some(_), [a, b]) => edges.push((parse(a)?, parse(b)?)),
            (Some(_), _) => {
                return Err(CouplingParseError::Syntax {
                    line: line_no,
                    message: format!("expected 'u v', found '{line}'"),
                })
            }
        }
    }
    let num_qubits = num_qubits.ok_or(CouplingParseError::Empty)?;
    Ok(CouplingGraph::new(num_qubits, &edges)?)
}

pub fn write_coupling(graph: &CouplingGraph) -> String {
    let mut out = format!("{}\n", graph.num_qubits());
    for (a, b) in graph.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}
