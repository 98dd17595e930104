//! Qubit mapping and routing with a SWAP-based bidirectional heuristic
//! search.
//!
//! The pipeline: build a [`device::Device`] (coupling graph plus distance
//! matrix), pick an initial [`layout::Mapping`] through reverse traversal
//! ([`traversal`]), then let the [`router`] insert SWAPs until every
//! two-qubit gate acts on a coupler. [`verify`] and [`oracle`] check the
//! result.

pub mod circuit;
pub mod dag;
pub mod device;
pub mod formats;
pub mod generate;
pub mod layout;
pub mod oracle;
pub mod router;
pub mod sweep;
pub mod traversal;
pub mod verify;

pub use circuit::{Circuit, Gate, GateCounts, LogicalQubit};
pub use dag::GateDag;
pub use device::{CouplingGraph, Device, DistanceMatrix, PhysicalQubit};
pub use layout::Mapping;
pub use router::{route, RoutedCircuit, RouterParams};
pub use traversal::{best_of_restarts, reverse_traversal};
