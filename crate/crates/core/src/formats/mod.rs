pub mod coupling;
pub mod qasm;
pub mod stats;
