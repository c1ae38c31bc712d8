//! Seeded generation of test instances: rationals with small numerators
//! and denominators, vectors, subsets, and finite posets.  Everything is
//! driven by a counter-based generator so a seed reproduces a run exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::error::Result;
use crate::lalg::LVec;
use crate::poset::FinPoset;
use crate::rat::{rat, Rat};

/// A deterministic sampler over the small instances the suite exercises.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A rational with numerator in `-8..=8` and denominator in `1..=8`.
    pub fn rational(&mut self) -> Rat {
        rat(self.rng.random_range(-8..=8), self.rng.random_range(1..=8))
    }

    /// A nonnegative rational on the same grid.
    pub fn nonneg_rational(&mut self) -> Rat {
        rat(self.rng.random_range(0..=8), self.rng.random_range(1..=8))
    }

    pub fn rationals(&mut self, count: usize) -> Vec<Rat> {
        (0..count).map(|_| self.rational()).collect()
    }

    pub fn lvec(&mut self, dim: usize) -> LVec {
        LVec::new((0..dim).map(|_| self.rational()).collect()).expect("dim >= 1")
    }

    /// A family of vectors seasoned with the degenerate cases that shake
    /// out boundary bugs: zero, the unit, negatives of units, and vectors
    /// with repeated values.
    pub fn lvec_family(&mut self, dim: usize, count: usize) -> Vec<LVec> {
        let mut out = vec![
            LVec::zero(dim),
            LVec::one(dim),
            LVec::one(dim).scale(&rat(-1, 1)),
        ];
        for i in 0..dim {
            out.push(LVec::unit(dim, i));
        }
        while out.len() < count {
            let mut v = self.lvec(dim);
            // occasionally force repeated coordinates so orthogonal
            // decompositions group nontrivially
            if dim >= 2 && self.rng.random_bool(0.3) {
                let from = self.rng.random_range(0..dim);
                let value = v.coord(from).clone();
                let to = self.rng.random_range(0..dim);
                let mut coords = v.coords().to_vec();
                coords[to] = value;
                v = LVec::new(coords).expect("dim >= 1");
            }
            out.push(v);
        }
        out.truncate(count.max(3 + dim));
        out
    }

    /// A uniformly random subset of `bits` positions, as a mask.
    pub fn subset_mask(&mut self, bits: usize) -> u64 {
        if bits == 0 {
            return 0;
        }
        self.rng.random_range(0..1u64 << bits)
    }

    /// A random poset on `size` points: a random strict relation on an
    /// ordered carrier, closed transitively (acyclic by construction).
    pub fn poset(&mut self, size: usize) -> Result<FinPoset> {
        let labels: Vec<String> = (0..size).map(|i| format!("p{i}")).collect();
        let mut le = vec![false; size * size];
        for i in 0..size {
            le[i * size + i] = true;
            for j in i + 1..size {
                if self.rng.random_bool(0.4) {
                    le[i * size + j] = true;
                }
            }
        }
        // transitive closure
        for k in 0..size {
            for i in 0..size {
                for j in 0..size {
                    if le[i * size + k] && le[k * size + j] {
                        le[i * size + j] = true;
                    }
                }
            }
        }
        FinPoset::from_le_matrix(labels, le)
    }
}

/// The fixed family of posets the structural checks sweep: the named small
/// shapes plus seeded random posets, all within the size cap.
pub fn poset_family(max_size: usize, seed: u64) -> Result<Vec<Arc<FinPoset>>> {
    let mut out: Vec<Arc<FinPoset>> = Vec::new();
    for n in 1..=3.min(max_size) {
        out.push(Arc::new(FinPoset::chain(n)));
    }
    if max_size >= 2 {
        out.push(Arc::new(FinPoset::antichain(2)));
    }
    if max_size >= 3 {
        out.push(Arc::new(FinPoset::antichain(3)));
        out.push(Arc::new(FinPoset::vee()));
    }
    if max_size >= 4 {
        out.push(Arc::new(FinPoset::diamond()));
    }
    let mut sampler = Sampler::new(seed);
    for size in 4..=max_size {
        out.push(Arc::new(sampler.poset(size)?));
        out.push(Arc::new(sampler.poset(size)?));
    }
    Ok(out)
}
