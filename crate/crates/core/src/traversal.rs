//! Initial-mapping search by reverse traversal, and random restarts.
//!
//! Routing the circuit forward ends in some final mapping; routing the
//! reversed circuit from there ends in a mapping that has seen every gate,
//! which becomes the start of the next forward pass. The last pass always
//! runs forward and is the one reported.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::device::Device;
use crate::layout::Mapping;
use crate::router::{route, RouteError, RoutedCircuit, RouterParams};

/// Tie-breaking seed for pass `pass` of a traversal seeded with `seed`.
pub fn pass_seed(seed: u64, pass: usize) -> u64 {
    seed ^ (pass as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// The random starting mapping used by a traversal seeded with `seed`.
pub fn starting_mapping(circuit: &Circuit, device: &Device, seed: u64) -> Result<Mapping, RouteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    Ok(Mapping::random(circuit.num_qubits(), device.num_qubits(), &mut rng)?)
}

/// Every pass of one forward-backward-...-forward plan.
#[derive(Clone, Debug)]
pub struct Traversal {
    /// Pass `k` routes the original circuit for even `k`, the reversed one
    /// for odd `k`.
    pub passes: Vec<RoutedCircuit>,
}

impl Traversal {
    /// The final forward pass.
    pub fn result(&self) -> &RoutedCircuit {
        self.passes.last().expect("a traversal has at least one pass")
    }

    pub fn into_result(mut self) -> RoutedCircuit {
        self.passes.pop().expect("a traversal has at least one pass")
    }
}

/// Reverse traversal from a random mapping drawn with `seed`.
pub fn reverse_traversal(
    circuit: &Circuit,
    device: &Device,
    params: &RouterParams,
    seed: u64,
) -> Result<Traversal, RouteError> {
    params.validate()?;
    if circuit.num_qubits() > device.num_qubits() {
        return Err(RouteError::TooManyQubits {
            logical: circuit.num_qubits(),
            physical: device.num_qubits(),
        });
    }
    let start = starting_mapping(circuit, device, seed)?;
    reverse_traversal_from(circuit, device, &start, params, seed)
}

/// Reverse traversal from a given mapping.
pub fn reverse_traversal_from(
    circuit: &Circuit,
    device: &Device,
    start: &Mapping,
    params: &RouterParams,
    seed: u64,
) -> Result<Traversal, RouteError> {
    params.validate()?;
    let reversed = circuit.reversed();
    let mut mapping = start.clone();
    let mut passes = Vec::with_capacity(params.traversals);
    for pass in 0..params.traversals {
        let source = if pass % 2 == 0 { circuit } else { &reversed };
        let routed = route(source, device, &mapping, params, pass_seed(seed, pass))?;
        mapping = routed.final_mapping.clone();
        passes.push(routed);
    }
    Ok(Traversal { passes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trial {
    pub seed: u64,
    pub added_gates: usize,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct BestOfRestarts {
    pub best: RoutedCircuit,
    /// Seed of the winning restart.
    pub seed: u64,
    pub trials: Vec<Trial>,
}

/// Run `params.restarts` independent traversals with seeds
/// `base_seed, base_seed + 1, ...` and keep the one with the fewest added
/// gates, then the lowest depth, then the lowest seed.
pub fn best_of_restarts(
    circuit: &Circuit,
    device: &Device,
    params: &RouterParams,
    base_seed: u64,
) -> Result<BestOfRestarts, RouteError> {
    restarts(circuit, device, None, params, base_seed)
}

/// Like [`best_of_restarts`], but every restart starts from `start` and the
/// restarts differ only in tie-breaking.
pub fn best_of_restarts_from(
    circuit: &Circuit,
    device: &Device,
    start: &Mapping,
    params: &RouterParams,
    base_seed: u64,
) -> Result<BestOfRestarts, RouteError> {
    restarts(circuit, device, Some(start), params, base_seed)
}

fn restarts(
    circuit: &Circuit,
    device: &Device,
    start: Option<&Mapping>,
    params: &RouterParams,
    base_seed: u64,
) -> Result<BestOfRestarts, RouteError> {
    params.validate()?;
    let seeds: Vec<u64> = (0..params.restarts as u64)
        .map(|i| base_seed.wrapping_add(i))
        .collect();
    let results: Vec<(u64, RoutedCircuit)> = seeds
        .par_iter()
        .map(|&seed| {
            let traversal = match start {
                Some(m) => reverse_traversal_from(circuit, device, m, params, seed)?,
                None => reverse_traversal(circuit, device, params, seed)?,
            };
            Ok((seed, traversal.into_result()))
        })
        .collect::<Result<_, RouteError>>()?;

    let trials = results
        .iter()
        .map(|(seed, r)| Trial {
            seed: *seed,
            added_gates: r.stats.added_gates,
            depth: r.stats.depth,
        })
        .collect::<Vec<_>>();
    let (seed, best) = results
        .into_iter()
        .min_by_key(|(seed, r)| (r.stats.added_gates, r.stats.depth, *seed))
        .expect("at least one restart");
    Ok(BestOfRestarts { best, seed, trials })
}
