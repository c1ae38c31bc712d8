//! The free boolean extension of a finite distributive lattice.
//!
//! By finite duality a distributive lattice embeds into the powerset of its
//! join-irreducible elements via `i(a) = { p join-irreducible : p <= a }`,
//! and that powerset is the free boolean algebra over it: every bounded
//! lattice morphism into a boolean algebra factors uniquely through `i`.

use crate::boolalg::FinBoolAlg;
use crate::error::{Error, Result};
use crate::lattice::FinDistLattice;
use crate::laws::BoolOps;

/// A finite distributive lattice together with its embedding into the free
/// boolean algebra it generates.
#[derive(Debug, Clone)]
pub struct FreeBoolExt {
    source: FinDistLattice,
    irreducibles: Vec<usize>,
    algebra: FinBoolAlg,
}

impl FreeBoolExt {
    pub fn of(source: FinDistLattice) -> Result<FreeBoolExt> {
        let irreducibles = source.join_irreducibles();
        if irreducibles.is_empty() {
            return Err(Error::DegenerateBase);
        }
        let algebra = FinBoolAlg::new(
            irreducibles
                .iter()
                .map(|&p| source.label(p).to_string())
                .collect(),
        )?;
        Ok(FreeBoolExt {
            source,
            irreducibles,
            algebra,
        })
    }

    pub fn source(&self) -> &FinDistLattice {
        &self.source
    }

    /// The join-irreducibles of the source, in atom order.
    pub fn irreducibles(&self) -> &[usize] {
        &self.irreducibles
    }

    pub fn algebra(&self) -> &FinBoolAlg {
        &self.algebra
    }

    /// `i(a)`: the mask of join-irreducibles below `a`.
    pub fn embed(&self, a: usize) -> u64 {
        let mut mask = 0u64;
        for (k, &p) in self.irreducibles.iter().enumerate() {
            if self.source.le(p, a) {
                mask |= 1 << k;
            }
        }
        mask
    }

    /// The largest source element whose image is below `mask` — a convenient
    /// partial inverse: `recover(embed(a)) = a` for every `a`.
    pub fn recover(&self, mask: u64) -> usize {
        self.source.join_all(
            self.algebra
                .atoms_below(mask)
                .into_iter()
                .map(|k| self.irreducibles[k]),
        )
    }

    /// The join of everything strictly below `p` in the source (for a
    /// join-irreducible `p` this is its unique lower cover).
    fn below(&self, p: usize) -> usize {
        self.source
            .join_all((0..self.source.len()).filter(|&x| x != p && self.source.le(x, p)))
    }

    /// Extends a bounded lattice morphism `lambda : L -> C` (indexed by
    /// source carrier) to a boolean morphism `tau` from the free boolean
    /// algebra, returned as the full value table indexed by element mask.
    ///
    /// `tau { p } = lambda(p) /\ -lambda(p-)` where `p-` is the join of the
    /// elements strictly below `p`, and `tau` of a general mask is the join
    /// of its singletons.  The construction validates that `lambda` is a
    /// morphism, that `tau . i = lambda`, and that `tau` preserves the
    /// boolean operations; uniqueness holds because the image of `i`
    /// generates the extension.
    pub fn extend_morphism<C: BoolOps>(
        &self,
        target: &C,
        lambda: &[C::Elt],
    ) -> Result<Vec<C::Elt>> {
        let l = &self.source;
        if lambda.len() != l.len() {
            return Err(Error::DimensionMismatch {
                left: l.len(),
                right: lambda.len(),
            });
        }
        if lambda[l.bottom()] != target.bottom_elt() {
            return Err(Error::NotMorphism("preservation of bottom".into()));
        }
        if lambda[l.top()] != target.top_elt() {
            return Err(Error::NotMorphism("preservation of top".into()));
        }
        for a in 0..l.len() {
            for b in 0..l.len() {
                if lambda[l.meet(a, b)] != target.meet_op(&lambda[a], &lambda[b]) {
                    return Err(Error::NotMorphism("preservation of meets".into()));
                }
                if lambda[l.join(a, b)] != target.join_op(&lambda[a], &lambda[b]) {
                    return Err(Error::NotMorphism("preservation of joins".into()));
                }
            }
        }
        // value on each singleton { p }
        let singleton: Vec<C::Elt> = self
            .irreducibles
            .iter()
            .map(|&p| {
                target.meet_op(
                    &lambda[p],
                    &target.compl_op(&lambda[self.below(p)]),
                )
            })
            .collect();
        let table: Vec<C::Elt> = self
            .algebra
            .elements()
            .map(|mask| {
                self.algebra
                    .atoms_below(mask)
                    .into_iter()
                    .fold(target.bottom_elt(), |acc, k| {
                        target.join_op(&acc, &singleton[k])
                    })
            })
            .collect();
        // tau . i = lambda
        for a in 0..l.len() {
            if table[self.embed(a) as usize] != lambda[a] {
                return Err(Error::NotMorphism(
                    "factorization through the embedding".into(),
                ));
            }
        }
        // tau is a boolean morphism
        for x in self.algebra.elements() {
            if table[self.algebra.not(x) as usize] != target.compl_op(&table[x as usize]) {
                return Err(Error::NotMorphism("preservation of complements".into()));
            }
            for y in self.algebra.elements() {
                if table[self.algebra.and(x, y) as usize]
                    != target.meet_op(&table[x as usize], &table[y as usize])
                {
                    return Err(Error::NotMorphism("preservation of meets (extension)".into()));
                }
            }
        }
        Ok(table)
    }

    /// The image of the embedding generates the whole extension: closing
    /// `i[L]` under the boolean operations reaches every mask.  This is what
    /// makes the extension of a morphism unique.
    pub fn embedding_generates(&self) -> bool {
        let mut reached: std::collections::BTreeSet<u64> =
            (0..self.source.len()).map(|a| self.embed(a)).collect();
        loop {
            let snapshot: Vec<u64> = reached.iter().copied().collect();
            let before = reached.len();
            for &x in &snapshot {
                reached.insert(self.algebra.not(x));
                for &y in &snapshot {
                    reached.insert(self.algebra.and(x, y));
                    reached.insert(self.algebra.or(x, y));
                }
            }
            if reached.len() == before {
                break;
            }
        }
        reached.len() as u64 == self.algebra.size()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinPoset;

    fn lattice(p: FinPoset) -> FinDistLattice {
        FinDistLattice::from_poset(p).unwrap()
    }

    #[test]
    fn three_chain_extends_to_four_element_algebra() {
        let l = lattice(FinPoset::chain(3));
        let ext = FreeBoolExt::of(l).unwrap();
        assert_eq!(ext.irreducibles().len(), 2);
        assert_eq!(ext.algebra().size(), 4);
        // i(m) = { m } for the middle element
        let m = 1usize;
        assert_eq!(ext.embed(m).count_ones(), 1);
        // embedding preserves order, meets and joins
        let l = ext.source();
        for a in 0..l.len() {
            for b in 0..l.len() {
                assert_eq!(ext.embed(a) & ext.embed(b), ext.embed(l.meet(a, b)));
                assert_eq!(ext.embed(a) | ext.embed(b), ext.embed(l.join(a, b)));
                assert_eq!(
                    ext.algebra().le(ext.embed(a), ext.embed(b)),
                    l.le(a, b)
                );
            }
        }
        assert!(ext.embedding_generates());
    }

    #[test]
    fn boolean_source_embeds_onto_everything() {
        let b = FinBoolAlg::with_atom_count(3).unwrap();
        let l = b.as_lattice().unwrap();
        let ext = FreeBoolExt::of(l).unwrap();
        assert_eq!(ext.irreducibles().len(), 3);
        let mut images: Vec<u64> = (0..ext.source().len()).map(|a| ext.embed(a)).collect();
        images.sort_unstable();
        images.dedup();
        assert_eq!(images.len() as u64, ext.algebra().size(), "i is onto");
    }

    #[test]
    fn recover_inverts_the_embedding() {
        let l = FinDistLattice::of_upsets(&FinPoset::vee()).unwrap();
        let ext = FreeBoolExt::of(l).unwrap();
        for a in 0..ext.source().len() {
            assert_eq!(ext.recover(ext.embed(a)), a);
        }
    }

    #[test]
    fn extension_of_identity_on_a_boolean_source() {
        // L boolean: lambda = iso onto the mask algebra; tau must be that iso
        let b = FinBoolAlg::with_atom_count(2).unwrap();
        let l = b.as_lattice().unwrap();
        let ext = FreeBoolExt::of(l.clone()).unwrap();
        // lambda: lattice index -> mask in b; carrier of as_lattice is in
        // mask order by construction
        let lambda: Vec<u64> = (0..l.len() as u64).collect();
        let table = ext.extend_morphism(&b, &lambda).unwrap();
        for a in 0..l.len() {
            assert_eq!(table[ext.embed(a) as usize], a as u64);
        }
    }

    #[test]
    fn extension_rejects_non_morphisms() {
        let b = FinBoolAlg::with_atom_count(2).unwrap();
        let l = b.as_lattice().unwrap();
        let ext = FreeBoolExt::of(l.clone()).unwrap();
        let mut lambda: Vec<u64> = (0..l.len() as u64).collect();
        lambda.swap(1, 2);
        // swapping two atoms of the target is still a morphism
        assert!(ext.extend_morphism(&b, &lambda).is_ok());
        // sending an atom to top is not
        let mut bad: Vec<u64> = (0..l.len() as u64).collect();
        bad[1] = b.top();
        assert!(matches!(
            ext.extend_morphism(&b, &bad),
            Err(Error::NotMorphism(_))
        ));
    }

    #[test]
    fn non_boolean_source_still_extends() {
        // upsets of the vee: 5-element non-boolean frame, 3 irreducibles
        let l = FinDistLattice::of_upsets(&FinPoset::vee()).unwrap();
        let ext = FreeBoolExt::of(l.clone()).unwrap();
        assert_eq!(ext.irreducibles().len(), 3);
        assert_eq!(ext.algebra().size(), 8);
        assert!(ext.embedding_generates());
        // lambda = embed itself, target = the extension algebra
        let lambda: Vec<u64> = (0..l.len()).map(|a| ext.embed(a)).collect();
        let table = ext.extend_morphism(ext.algebra(), &lambda).unwrap();
        // tau is then the identity
        for mask in ext.algebra().elements() {
            assert_eq!(table[mask as usize], mask);
        }
    }
}
