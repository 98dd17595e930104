//! The logical-to-physical qubit mapping and its mutation by SWAPs.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::circuit::LogicalQubit;
use crate::device::PhysicalQubit;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MappingError {
    #[error("{logical} logical qubits do not fit on {physical} physical qubits")]
    TooManyLogical { logical: usize, physical: usize },
    #[error("logical qubit {0} out of range")]
    LogicalOutOfRange(usize),
    #[error("physical qubit {0} out of range")]
    PhysicalOutOfRange(usize),
    #[error("physical qubit {0} assigned twice")]
    NotInjective(usize),
    #[error("cannot swap physical qubit {0} with itself")]
    DegenerateSwap(usize),
}

/// Injective map from `n` logical qubits onto `N >= n` physical sites.
/// Sites outside the image are vacant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mapping {
    forward: Vec<PhysicalQubit>,
    inverse: Vec<Option<LogicalQubit>>,
}

impl Mapping {
    /// `forward[q]` is the site of logical qubit `q`.
    pub fn from_forward(forward: Vec<usize>, num_physical: usize) -> Result<Self, MappingError> {
        if forward.len() > num_physical {
            return Err(MappingError::TooManyLogical {
                logical: forward.len(),
                physical: num_physical,
            });
        }
        let mut inverse = vec![None; num_physical];
        for (logical, &phys) in forward.iter().enumerate() {
            let slot = inverse
                .get_mut(phys)
                .ok_or(MappingError::PhysicalOutOfRange(phys))?;
            if slot.is_some() {
                return Err(MappingError::NotInjective(phys));
            }
            *slot = Some(LogicalQubit(logical));
        }
        Ok(Mapping {
            forward: forward.into_iter().map(PhysicalQubit).collect(),
            inverse,
        })
    }

    /// `q_i -> Q_i`.
    pub fn identity(num_logical: usize, num_physical: usize) -> Result<Self, MappingError> {
        Self::from_forward((0..num_logical).collect(), num_physical)
    }

    /// Uniformly random injection.
    pub fn random<R: Rng + ?Sized>(
        num_logical: usize,
        num_physical: usize,
        rng: &mut R,
    ) -> Result<Self, MappingError> {
        if num_logical > num_physical {
            return Err(MappingError::TooManyLogical {
                logical: num_logical,
                physical: num_physical,
            });
        }
        let mut sites: Vec<usize> = (0..num_physical).collect();
        sites.shuffle(rng);
        sites.truncate(num_logical);
        Self::from_forward(sites, num_physical)
    }

    #[inline]
    pub fn num_logical(&self) -> usize {
        self.forward.len()
    }

    #[inline]
    pub fn num_physical(&self) -> usize {
        self.inverse.len()
    }

    pub fn physical_of(&self, q: LogicalQubit) -> Result<PhysicalQubit, MappingError> {
        self.forward
            .get(q.index())
            .copied()
            .ok_or(MappingError::LogicalOutOfRange(q.index()))
    }

    pub fn logical_of(&self, p: PhysicalQubit) -> Result<Option<LogicalQubit>, MappingError> {
        self.inverse
            .get(p.index())
            .copied()
            .ok_or(MappingError::PhysicalOutOfRange(p.index()))
    }

    /// Unchecked `physical_of` for hot loops.
    #[inline]
    pub fn phys(&self, q: LogicalQubit) -> PhysicalQubit {
        self.forward[q.index()]
    }

    /// Unchecked `logical_of` for hot loops.
    #[inline]
    pub fn logical_at(&self, p: PhysicalQubit) -> Option<LogicalQubit> {
        self.inverse[p.index()]
    }

    pub fn forward(&self) -> &[PhysicalQubit] {
        &self.forward
    }

    /// Exchange the contents of two sites, vacant or not. Adjacency is the
    /// caller's concern.
    pub fn apply_swap(&mut self, a: PhysicalQubit, b: PhysicalQubit) -> Result<(), MappingError> {
        if a == b {
            return Err(MappingError::DegenerateSwap(a.index()));
        }
        for p in [a, b] {
            if p.index() >= self.inverse.len() {
                return Err(MappingError::PhysicalOutOfRange(p.index()));
            }
        }
        self.swap_unchecked(a, b);
        Ok(())
    }

    #[inline]
    pub(crate) fn swap_unchecked(&mut self, a: PhysicalQubit, b: PhysicalQubit) {
        self.inverse.swap(a.index(), b.index());
        if let Some(q) = self.inverse[a.index()] {
            self.forward[q.index()] = a;
        }
        if let Some(q) = self.inverse[b.index()] {
            self.forward[q.index()] = b;
        }
    }

    pub fn with_swap(&self, a: PhysicalQubit, b: PhysicalQubit) -> Result<Mapping, MappingError> {
        let mut out = self.clone();
        out.apply_swap(a, b)?;
        Ok(out)
    }

    /// Extend to `num_logical` logical qubits by placing the extra (ancilla)
    /// qubits on vacant sites in ascending site order.
    pub fn padded(&self, num_logical: usize) -> Result<Mapping, MappingError> {
        if num_logical > self.num_physical() {
            return Err(MappingError::TooManyLogical {
                logical: num_logical,
                physical: self.num_physical(),
            });
        }
        let mut forward: Vec<usize> = self.forward.iter().map(|p| p.index()).collect();
        if num_logical <= forward.len() {
            return Ok(self.clone());
        }
        let vacant = self
            .inverse
            .iter()
            .enumerate()
            .filter(|(_, slot)| slot.is_none())
            .map(|(p, _)| p);
        forward.extend(vacant.take(num_logical - self.num_logical()));
        Mapping::from_forward(forward, self.num_physical())
    }

    /// Keep only the first `num_logical` logical qubits.
    pub fn restricted(&self, num_logical: usize) -> Mapping {
        let forward = self.forward[..num_logical.min(self.forward.len())]
            .iter()
            .map(|p| p.index())
            .collect();
        Mapping::from_forward(forward, self.num_physical()).expect("a prefix stays injective")
    }

    pub fn is_consistent(&self) -> bool {
        let forward_ok = self
            .forward
            .iter()
            .enumerate()
            .all(|(q, &p)| self.inverse.get(p.index()) == Some(&Some(LogicalQubit(q))));
        let occupied = self.inverse.iter().filter(|s| s.is_some()).count();
        forward_ok && occupied == self.forward.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(i: usize) -> PhysicalQubit {
        PhysicalQubit(i)
    }

    fn q(i: usize) -> LogicalQubit {
        LogicalQubit(i)
    }

    #[test]
    fn worked_example_swap() {
        let mut m = Mapping::identity(4, 4).unwrap();
        m.apply_swap(p(0), p(1)).unwrap();
        assert_eq!(m.forward(), &[p(1), p(0), p(2), p(3)]);
        m.apply_swap(p(1), p(0)).unwrap();
        assert_eq!(m, Mapping::identity(4, 4).unwrap());
    }

    #[test]
    fn swap_with_vacant_site_moves_occupant() {
        let mut m = Mapping::from_forward(vec![2], 4).unwrap();
        m.apply_swap(p(2), p(3)).unwrap();
        assert_eq!(m.physical_of(q(0)).unwrap(), p(3));
        assert_eq!(m.logical_of(p(2)).unwrap(), None);
        assert_eq!(m.logical_of(p(3)).unwrap(), Some(q(0)));
        assert!(m.is_consistent());
    }

    #[test]
    fn lookups() {
        let m = Mapping::identity(3, 5).unwrap();
        for i in 0..3 {
            assert_eq!(m.physical_of(q(i)).unwrap(), p(i));
            assert_eq!(m.logical_of(m.physical_of(q(i)).unwrap()).unwrap(), Some(q(i)));
        }
        assert_eq!(m.logical_of(p(4)).unwrap(), None);
        assert!(m.physical_of(q(3)).is_err());
        assert!(m.logical_of(p(5)).is_err());

        let after = m.with_swap(p(0), p(1)).unwrap();
        let changed = (0..3)
            .filter(|&i| after.physical_of(q(i)) != m.physical_of(q(i)))
            .count();
        assert_eq!(changed, 2);
    }

    #[test]
    fn errors() {
        let mut m = Mapping::identity(2, 2).unwrap();
        assert_eq!(m.apply_swap(p(1), p(1)), Err(MappingError::DegenerateSwap(1)));
        assert!(m.apply_swap(p(0), p(9)).is_err());
        assert!(matches!(
            Mapping::from_forward(vec![0, 0], 2),
            Err(MappingError::NotInjective(0))
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            Mapping::random(3, 2, &mut rng),
            Err(MappingError::TooManyLogical { .. })
        ));
    }

    #[test]
    fn random_is_seeded() {
        let a = Mapping::random(5, 8, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b = Mapping::random(5, 8, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_consistent());
        let only = Mapping::random(1, 1, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(only, Mapping::identity(1, 1).unwrap());
    }

    #[test]
    fn random_permutations_look_uniform() {
        // 3! = 6 outcomes over 6000 draws; each should land near 1000.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..6000 {
            let m = Mapping::random(3, 3, &mut rng).unwrap();
            *counts.entry(m.forward().to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        assert!(counts.values().all(|&c| (850..1150).contains(&c)));
    }

    #[test]
    fn padding_fills_vacancies_in_order() {
        let m = Mapping::from_forward(vec![3, 1], 5).unwrap();
        let padded = m.padded(5).unwrap();
        assert_eq!(padded.forward(), &[p(3), p(1), p(0), p(2), p(4)]);
        assert_eq!(padded.restricted(2), m);
        assert!(m.padded(6).is_err());
    }

    proptest! {
        #[test]
        fn swaps_keep_bijection(
            n_phys in 2usize..12,
            n_log_frac in 0.0f64..=1.0,
            swaps in proptest::collection::vec((0usize..64, 0usize..64), 0..50),
            seed in any::<u64>(),
        ) {
            let n_log = ((n_phys as f64) * n_log_frac) as usize;
            let mut m = Mapping::random(n_log, n_phys, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            for (a, b) in swaps {
                let (a, b) = (a % n_phys, b % n_phys);
                if a == b { continue; }
                m.apply_swap(p(a), p(b)).unwrap();
                prop_assert!(m.is_consistent());
            }
        }

        #[test]
        fn one_swap_moves_a_pair_distance_by_at_most_one(
            seed in any::<u64>(),
            edge in any::<proptest::sample::Index>(),
        ) {
            use crate::device::{builtin_device, DistanceMatrix};
            let g = builtin_device("ibm-q20-tokyo").unwrap();
            let d = DistanceMatrix::floyd_warshall(&g);
            let m = Mapping::random(20, 20, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let (a, b) = g.edges()[edge.index(g.edges().len())];
            let after = m.with_swap(p(a), p(b)).unwrap();
            for q1 in 0..20 {
                for q2 in 0..20 {
                    if q1 == q2 { continue; }
                    let before = d.get(m.phys(q(q1)), m.phys(q(q2))) as i64;
                    let now = d.get(after.phys(q(q1)), after.phys(q(q2))) as i64;
                    prop_assert!((before - now).abs() <= 1);
                }
            }
        }
    }
}
