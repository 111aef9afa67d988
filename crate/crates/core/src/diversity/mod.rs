//! Population diversity as the pair `(d, m)`: the largest pairwise Hamming
//! distance `d(P)` and the largest number of slot-disjoint pairs at that
//! distance `m(P)`, i.e. the maximum matching size of the max-distance graph.
//!
//! Pairs are pairs of distinct slots of the multiset, so two copies of the
//! same genotype form a pair at distance 0. When `d(P) = 0` we report
//! `m(P) = 0`, and a single-slot population has `d = 0`.

pub mod matching;

use serde::{Deserialize, Serialize};

use crate::error::{JumpGaError, Result};
use crate::genotype::{hamming_unchecked, Genotype};

/// `(d, m)` of a population plus the number of slot pairs achieving `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiversitySnapshot {
    pub d: u32,
    pub m: usize,
    pub max_pair_count: usize,
}

/// Symmetric pairwise distance matrix over population slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    mu: usize,
    dist: Vec<u32>,
    max: u32,
    max_count: usize,
}

impl DistanceMatrix {
    pub fn new(slots: &[Genotype]) -> Result<Self> {
        check_lengths(slots)?;
        let mu = slots.len();
        let mut dist = vec![0u32; mu * mu];
        for i in 0..mu {
            for j in (i + 1)..mu {
                let h = hamming_unchecked(&slots[i], &slots[j]);
                dist[i * mu + j] = h;
                dist[j * mu + i] = h;
            }
        }
        let mut matrix = Self {
            mu,
            dist,
            max: 0,
            max_count: 0,
        };
        matrix.rescan();
        Ok(matrix)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mu
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mu == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.mu + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.dist[i * self.mu..(i + 1) * self.mu]
    }

    /// Recomputes row and column `slot` after `slots[slot]` was replaced.
    pub fn update_on_replacement(&mut self, slots: &[Genotype], slot: usize) {
        debug_assert_eq!(slots.len(), self.mu);
        let mu = self.mu;
        let old_max = self.max;
        let mut removed = 0;
        let mut row_max = 0;
        let mut row_count = 0;
        for j in (0..mu).filter(|&j| j != slot) {
            if self.dist[slot * mu + j] == old_max {
                removed += 1;
            }
            let h = hamming_unchecked(&slots[slot], &slots[j]);
            self.dist[slot * mu + j] = h;
            self.dist[j * mu + slot] = h;
            if h > row_max {
                row_max = h;
                row_count = 1;
            } else if h == row_max {
                row_count += 1;
            }
        }
        let remaining = self.max_count - removed;
        if row_max > old_max {
            self.max = row_max;
            self.max_count = row_count;
        } else if row_max == old_max {
            self.max_count = remaining + row_count;
        } else if remaining > 0 {
            self.max_count = remaining;
        } else {
            self.rescan();
        }
    }

    fn rescan(&mut self) {
        let mu = self.mu;
        self.max = 0;
        self.max_count = 0;
        for i in 0..mu {
            for &h in &self.dist[i * mu + i + 1..(i + 1) * mu] {
                if h > self.max {
                    self.max = h;
                    self.max_count = 1;
                } else if h == self.max {
                    self.max_count += 1;
                }
            }
        }
    }

    /// `d(P)`
    #[inline]
    pub fn max_distance(&self) -> u32 {
        self.max
    }

    /// Number of slot pairs at distance `d(P)`.
    #[inline]
    pub fn max_pair_count(&self) -> usize {
        self.max_count
    }

    /// Slot pairs `(i, j)`, `i < j`, at distance `target`, in row-major order.
    pub fn pairs_at(&self, target: u32) -> impl Iterator<Item = (usize, usize)> + '_ {
        let mu = self.mu;
        (0..mu).flat_map(move |i| {
            ((i + 1)..mu)
                .filter(move |&j| self.dist[i * mu + j] == target)
                .map(move |j| (i, j))
        })
    }

    /// Adjacency lists of the graph whose edges are the max-distance slot pairs.
    pub fn max_distance_graph(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.mu];
        for (i, j) in self.pairs_at(self.max) {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// A maximum set of slot-disjoint max-distance pairs; empty when `d = 0`.
    pub fn max_disjoint_pair_set(&self) -> Vec<(usize, usize)> {
        if self.max == 0 {
            return Vec::new();
        }
        matching::maximum_matching(&self.max_distance_graph())
    }

    pub fn max_disjoint_pairs(&self) -> usize {
        self.max_disjoint_pair_set().len()
    }

    pub fn snapshot(&self) -> DiversitySnapshot {
        DiversitySnapshot {
            d: self.max,
            m: self.max_disjoint_pairs(),
            max_pair_count: self.max_pair_count(),
        }
    }
}

fn check_lengths(slots: &[Genotype]) -> Result<()> {
    if let Some(first) = slots.first() {
        for x in slots {
            first.check_same_len(x)?;
        }
    }
    Ok(())
}

/// `d(P)` computed from scratch.
pub fn max_distance(slots: &[Genotype]) -> Result<u32> {
    Ok(DistanceMatrix::new(slots)?.max_distance())
}

/// `m(P)` computed from scratch.
pub fn max_disjoint_pairs(slots: &[Genotype]) -> Result<usize> {
    Ok(DistanceMatrix::new(slots)?.max_disjoint_pairs())
}

pub fn snapshot(slots: &[Genotype]) -> Result<DiversitySnapshot> {
    Ok(DistanceMatrix::new(slots)?.snapshot())
}

/// Result of adding one individual to a population.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub before: DiversitySnapshot,
    pub after: DiversitySnapshot,
    pub d_increased: bool,
    /// False iff `d` increased but `m(P ∪ {x}) != 1`.
    pub holds: bool,
}

/// `(d, m)` of `P ∪ {x}` together with the check that a distance increase
/// leaves exactly one disjoint max pair.
pub fn structural_check_add(slots: &[Genotype], x: &Genotype) -> Result<StructuralReport> {
    if let Some(first) = slots.first() {
        first.check_same_len(x)?;
    }
    let before = snapshot(slots)?;
    let mut grown = slots.to_vec();
    grown.push(x.clone());
    let after = snapshot(&grown)?;
    let d_increased = !slots.is_empty() && after.d > before.d;
    Ok(StructuralReport {
        before,
        after,
        d_increased,
        holds: !d_increased || after.m == 1,
    })
}

/// Population with slot `slot` removed.
pub fn without_slot(slots: &[Genotype], slot: usize) -> Result<Vec<Genotype>> {
    if slot >= slots.len() {
        return Err(JumpGaError::ContractViolation(format!(
            "slot {slot} out of range for population of {}",
            slots.len()
        )));
    }
    Ok(slots
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != slot)
        .map(|(_, x)| x.clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pop(strs: &[&str]) -> Vec<Genotype> {
        strs.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn random_pop(rng: &mut ChaCha8Rng, mu: usize, n: usize) -> Vec<Genotype> {
        (0..mu).map(|_| Genotype::random(n, rng).unwrap()).collect()
    }

    #[test]
    fn max_distance_examples() {
        assert_eq!(max_distance(&pop(&["0000", "0000", "0000"])).unwrap(), 0);
        assert_eq!(
            max_distance(&pop(&["000", "011", "101", "110"])).unwrap(),
            2
        );
        assert_eq!(max_distance(&pop(&["0101"])).unwrap(), 0);
    }

    #[test]
    fn max_disjoint_pairs_examples() {
        assert_eq!(
            max_disjoint_pairs(&pop(&["0000", "0011", "0001"])).unwrap(),
            1
        );
        // all four pairwise at distance 2: K4
        assert_eq!(
            max_disjoint_pairs(&pop(&["000", "011", "101", "110"])).unwrap(),
            2
        );
        // path A - B - C with H(A,B) = H(B,C) = 2 and H(A,C) = 0
        let path = pop(&["1100", "0000", "1100"]);
        let snap = snapshot(&path).unwrap();
        assert_eq!((snap.d, snap.m, snap.max_pair_count), (2, 1, 2));
        // identical members: m = 0 by convention
        assert_eq!(snapshot(&pop(&["01", "01"])).unwrap().m, 0);
    }

    #[test]
    fn plateau_populations_have_even_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let slots: Vec<_> = (0..6)
                .map(|_| Genotype::random_with_ones(15, 11, &mut rng).unwrap())
                .collect();
            assert_eq!(max_distance(&slots).unwrap() % 2, 0);
        }
    }

    #[test]
    fn structural_add_examples() {
        let p = pop(&["0000", "0011"]);
        let r = structural_check_add(&p, &"1100".parse().unwrap()).unwrap();
        assert_eq!((r.after.d, r.after.m), (4, 1));
        assert!(r.d_increased && r.holds);

        let r = structural_check_add(&p, &"0011".parse().unwrap()).unwrap();
        assert_eq!(r.after.d, r.before.d);
        assert!(!r.d_increased);

        let p = pop(&["000000", "000011", "111100"]);
        // d = 6 via (000011, 111100); m = 1
        let before = snapshot(&p).unwrap();
        assert_eq!((before.d, before.m), (6, 1));
        // 111111 is at distance 6 from 000000 only, a pair disjoint from the old one
        let r = structural_check_add(&p, &"111111".parse().unwrap()).unwrap();
        assert_eq!(r.after.d, 6);
        assert_eq!(r.after.m, before.m + 1);
    }

    #[test]
    fn identical_replacement_leaves_matrix_unchanged() {
        let mut slots = pop(&["0101", "0011", "1111"]);
        let mut m = DistanceMatrix::new(&slots).unwrap();
        let before = m.clone();
        slots[1] = "0011".parse().unwrap();
        m.update_on_replacement(&slots, 1);
        assert_eq!(m, before);
    }

    #[test]
    fn incremental_matches_full_recompute() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let mu = rng.random_range(2..=16);
            let n = rng.random_range(1..=32);
            let mut slots = random_pop(&mut rng, mu, n);
            let mut m = DistanceMatrix::new(&slots).unwrap();
            for _ in 0..1000 {
                let slot = rng.random_range(0..mu);
                slots[slot] = Genotype::random(n, &mut rng).unwrap();
                m.update_on_replacement(&slots, slot);
                assert_eq!(m, DistanceMatrix::new(&slots).unwrap());
            }
        }
    }

    #[test]
    fn replacing_member_of_unique_max_pair_changes_diversity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut checked = 0;
        while checked < 200 {
            let mut slots = random_pop(&mut rng, 6, 12);
            let mut m = DistanceMatrix::new(&slots).unwrap();
            if m.max_pair_count() != 1 {
                continue;
            }
            let before = (m.max_distance(), m.max_pair_count());
            let (a, _) = m.pairs_at(m.max_distance()).next().unwrap();
            // replace with a copy of a slot outside the pair, so the pair is destroyed
            let donor = (0..6)
                .find(|&i| slots[i] != slots[a] && m.get(i, a) != before.0)
                .unwrap();
            slots[a] = slots[donor].clone();
            m.update_on_replacement(&slots, a);
            assert_ne!((m.max_distance(), m.max_pair_count()), before);
            checked += 1;
        }
    }

    #[test]
    fn mismatched_lengths_rejected() {
        assert!(DistanceMatrix::new(&pop(&["01", "011"])).is_err());
        assert!(structural_check_add(&pop(&["01"]), &"011".parse().unwrap()).is_err());
    }
}
