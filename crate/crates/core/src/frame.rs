//! The free frame over a finite bounded meet-semilattice, and its
//! booleanization.
//!
//! For a bounded meet-semilattice `M`, the free frame is the set of downsets
//! of `M \ {0}`, ordered by inclusion, with the generator map `i(m) = down(m)
//! \ {0}`.  Joins are unions, meets are intersections, and `i` preserves
//! finite meets, top and bottom.  The extension of a semilattice morphism
//! `f : M -> L` to the frame is `D |-> \/ { f(m) : m in D }`, and it is the
//! unique frame morphism through `i`.
//!
//! Frame elements are handled individually as downsets; the full carrier is
//! never materialized except in explicitly capped enumeration helpers.  The
//! booleanization — the fixed points of double pseudocomplementation — is
//! enumerated by closing the generators under meet, regularized join and
//! pseudocomplement.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::FinDistLattice;
use crate::laws::BoolOps;
use crate::poset::FinPoset;

/// The free frame over `M`, presented by its base poset `M \ {0}`.
#[derive(Debug, Clone)]
pub struct FreeFrame {
    base: Arc<FinPoset>,
    /// base index -> index in the source semilattice
    base_to_m: Vec<usize>,
    /// source index -> base index (`None` for the bottom)
    m_to_base: Vec<Option<usize>>,
    m_len: usize,
}

impl FreeFrame {
    /// Builds the free frame over the bounded meet-semilattice underlying
    /// `m`.  Errors when `m` has no element besides its bottom.
    pub fn over(m: &FinDistLattice) -> Result<FreeFrame> {
        let keep: Vec<usize> = (0..m.len()).filter(|&i| i != m.bottom()).collect();
        if keep.is_empty() {
            return Err(Error::DegenerateBase);
        }
        let (base, base_to_m) = m.restrict_poset(&keep)?;
        let mut m_to_base = vec![None; m.len()];
        for (b, &mi) in base_to_m.iter().enumerate() {
            m_to_base[mi] = Some(b);
        }
        Ok(FreeFrame {
            base: Arc::new(base),
            base_to_m,
            m_to_base,
            m_len: m.len(),
        })
    }

    pub fn base(&self) -> &Arc<FinPoset> {
        &self.base
    }

    /// Source-semilattice index of a base element.
    pub fn source_index(&self, base_index: usize) -> usize {
        self.base_to_m[base_index]
    }

    /// The generator `i(m) = down(m) \ {0}` as a frame element.
    pub fn generator(&self, m_index: usize) -> Result<FrameElt> {
        if m_index >= self.m_len {
            return Err(Error::IndexOutOfRange {
                index: m_index,
                size: self.m_len,
            });
        }
        let members = match self.m_to_base[m_index] {
            // the bottom of M maps to the empty downset
            None => BTreeSet::new(),
            Some(b) => self.base.down_set(b),
        };
        self.elt(members)
    }

    pub fn bottom(&self) -> FrameElt {
        FrameElt {
            base: Arc::clone(&self.base),
            members: BTreeSet::new(),
        }
    }

    pub fn top(&self) -> FrameElt {
        FrameElt {
            base: Arc::clone(&self.base),
            members: (0..self.base.len()).collect(),
        }
    }

    /// Wraps a member set as a frame element, validating that it is a
    /// downset of the base.
    pub fn elt(&self, members: BTreeSet<usize>) -> Result<FrameElt> {
        if let Some(&i) = members.iter().find(|&&i| i >= self.base.len()) {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.base.len(),
            });
        }
        if !self.base.is_downset(&members) {
            return Err(Error::BadInput(
                "frame elements are downsets of the base".into(),
            ));
        }
        Ok(FrameElt {
            base: Arc::clone(&self.base),
            members,
        })
    }

    /// Extends a bounded-meet-semilattice morphism `f : M -> L` (given on
    /// indices) to the frame: `D |-> \/ { f(m) : m in D }`.  Validates that
    /// `f` preserves binary meets, top and bottom against the source tables.
    pub fn extend_morphism<'a>(
        &'a self,
        source: &FinDistLattice,
        target: &'a FinDistLattice,
        f: &'a [usize],
    ) -> Result<impl Fn(&FrameElt) -> usize + 'a> {
        if source.len() != self.m_len || f.len() != self.m_len {
            return Err(Error::DimensionMismatch {
                left: source.len(),
                right: f.len(),
            });
        }
        if f[source.bottom()] != target.bottom() {
            return Err(Error::NotMorphism("preservation of bottom".into()));
        }
        if f[source.top()] != target.top() {
            return Err(Error::NotMorphism("preservation of top".into()));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if f[source.meet(a, b)] != target.meet(f[a], f[b]) {
                    return Err(Error::NotMorphism("preservation of binary meets".into()));
                }
            }
        }
        let base_to_m = &self.base_to_m;
        Ok(move |d: &FrameElt| {
            target.join_all(d.members.iter().map(|&b| f[base_to_m[b]]))
        })
    }

    /// Every downset of the base, as frame elements (capped enumeration, for
    /// small instances and cross-checks only).
    pub fn all_elements(&self) -> Result<Vec<FrameElt>> {
        Ok(self
            .base
            .downsets()?
            .into_iter()
            .map(|members| FrameElt {
                base: Arc::clone(&self.base),
                members,
            })
            .collect())
    }

    /// The booleanization: all fixed points of double pseudocomplementation,
    /// found by closing the (regularized) generators under meet, regularized
    /// join and pseudocomplement.
    pub fn booleanize(&self) -> Booleanization {
        let mut elements: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        elements.insert(self.bottom().members);
        elements.insert(self.top().members);
        for m in 0..self.m_len {
            let g = self.generator(m).expect("index in range");
            elements.insert(g.double_negation().members);
        }
        loop {
            let snapshot: Vec<BTreeSet<usize>> = elements.iter().cloned().collect();
            let before = elements.len();
            for a in &snapshot {
                let ea = FrameElt {
                    base: Arc::clone(&self.base),
                    members: a.clone(),
                };
                elements.insert(ea.pseudocomplement().members);
                for b in &snapshot {
                    let eb = FrameElt {
                        base: Arc::clone(&self.base),
                        members: b.clone(),
                    };
                    elements.insert(ea.meet(&eb).expect("same base").members);
                    let union = ea.join(&eb).expect("same base");
                    elements.insert(union.double_negation().members);
                }
            }
            if elements.len() == before {
                break;
            }
        }
        Booleanization {
            base: Arc::clone(&self.base),
            elements: elements.into_iter().collect(),
        }
    }
}

/// An element of a free frame: a downset of the base poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameElt {
    base: Arc<FinPoset>,
    members: BTreeSet<usize>,
}

impl FrameElt {
    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn base(&self) -> &Arc<FinPoset> {
        &self.base
    }

    fn same_base(&self, other: &FrameElt) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) || self.base == other.base {
            Ok(())
        } else {
            Err(Error::PosetMismatch)
        }
    }

    fn wrap(&self, members: BTreeSet<usize>) -> FrameElt {
        FrameElt {
            base: Arc::clone(&self.base),
            members,
        }
    }

    /// Frame meet: intersection of downsets.
    pub fn meet(&self, other: &FrameElt) -> Result<FrameElt> {
        self.same_base(other)?;
        Ok(self.wrap(self.members.intersection(&other.members).copied().collect()))
    }

    /// Frame join: union of downsets.
    pub fn join(&self, other: &FrameElt) -> Result<FrameElt> {
        self.same_base(other)?;
        Ok(self.wrap(self.members.union(&other.members).copied().collect()))
    }

    pub fn le(&self, other: &FrameElt) -> Result<bool> {
        self.same_base(other)?;
        Ok(self.members.is_subset(&other.members))
    }

    pub fn is_bottom(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.members.len() == self.base.len()
    }

    /// Pseudocomplement: the largest downset disjoint from `self`, namely
    /// the points whose downset misses `self`.
    pub fn pseudocomplement(&self) -> FrameElt {
        let members = (0..self.base.len())
            .filter(|&q| self.base.down_set(q).is_disjoint(&self.members))
            .collect();
        self.wrap(members)
    }

    pub fn double_negation(&self) -> FrameElt {
        self.pseudocomplement().pseudocomplement()
    }

    /// Fixed under double pseudocomplementation.
    pub fn is_regular(&self) -> bool {
        self.double_negation().members == self.members
    }
}

/// The boolean algebra of regular elements of a free frame.
///
/// Meet is the frame meet; join is the double negation of the frame join;
/// complement is the pseudocomplement.
#[derive(Debug, Clone)]
pub struct Booleanization {
    base: Arc<FinPoset>,
    elements: Vec<BTreeSet<usize>>,
}

impl Booleanization {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn base(&self) -> &Arc<FinPoset> {
        &self.base
    }

    pub fn elements(&self) -> Vec<FrameElt> {
        self.elements
            .iter()
            .map(|m| FrameElt {
                base: Arc::clone(&self.base),
                members: m.clone(),
            })
            .collect()
    }

    pub fn index_of(&self, e: &FrameElt) -> Option<usize> {
        self.elements.iter().position(|m| m == &e.members)
    }

    pub fn contains(&self, e: &FrameElt) -> bool {
        self.index_of(e).is_some()
    }

    pub fn meet(&self, a: &FrameElt, b: &FrameElt) -> FrameElt {
        a.meet(b).expect("same base")
    }

    /// Boolean join: regularization of the frame join.
    pub fn join(&self, a: &FrameElt, b: &FrameElt) -> FrameElt {
        a.join(b).expect("same base").double_negation()
    }

    pub fn complement(&self, a: &FrameElt) -> FrameElt {
        a.pseudocomplement()
    }

    pub fn bottom(&self) -> FrameElt {
        FrameElt {
            base: Arc::clone(&self.base),
            members: BTreeSet::new(),
        }
    }

    pub fn top(&self) -> FrameElt {
        FrameElt {
            base: Arc::clone(&self.base),
            members: (0..self.base.len()).collect(),
        }
    }

    /// Meet of a family (top for an empty family).
    pub fn meet_all<'a>(&self, xs: impl IntoIterator<Item = &'a FrameElt>) -> FrameElt {
        xs.into_iter()
            .fold(self.top(), |acc, x| self.meet(&acc, x))
    }

    /// Boolean join of a family (bottom for an empty family): regularized
    /// union.
    pub fn join_all<'a>(&self, xs: impl IntoIterator<Item = &'a FrameElt>) -> FrameElt {
        let union = xs
            .into_iter()
            .fold(self.bottom(), |acc, x| acc.join(x).expect("same base"));
        union.double_negation()
    }
}

impl BoolOps for Booleanization {
    type Elt = FrameElt;

    fn carrier(&self) -> Vec<FrameElt> {
        self.elements()
    }
    fn meet_op(&self, a: &FrameElt, b: &FrameElt) -> FrameElt {
        self.meet(a, b)
    }
    fn join_op(&self, a: &FrameElt, b: &FrameElt) -> FrameElt {
        self.join(a, b)
    }
    fn compl_op(&self, a: &FrameElt) -> FrameElt {
        self.complement(a)
    }
    fn top_elt(&self) -> FrameElt {
        self.top()
    }
    fn bottom_elt(&self) -> FrameElt {
        self.bottom()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::boolean_algebra_violation;
    use crate::poset::FinPoset;

    fn chain_lattice(n: usize) -> FinDistLattice {
        FinDistLattice::from_poset(FinPoset::chain(n)).unwrap()
    }

    #[test]
    fn two_element_semilattice_gives_two_element_frame() {
        let m = chain_lattice(2);
        let fr = FreeFrame::over(&m).unwrap();
        assert_eq!(fr.base().len(), 1);
        assert_eq!(fr.all_elements().unwrap().len(), 2);
        assert_eq!(fr.generator(m.bottom()).unwrap(), fr.bottom());
        assert_eq!(fr.generator(m.top()).unwrap(), fr.top());
    }

    #[test]
    fn one_element_semilattice_is_rejected() {
        let one = FinDistLattice::from_poset(FinPoset::chain(1)).unwrap();
        assert!(matches!(FreeFrame::over(&one), Err(Error::DegenerateBase)));
    }

    #[test]
    fn generators_preserve_meets_and_bounds() {
        // on the diamond (a boolean 4-lattice viewed as a semilattice)
        let m = FinDistLattice::from_poset(FinPoset::diamond()).unwrap();
        let fr = FreeFrame::over(&m).unwrap();
        for a in 0..m.len() {
            for b in 0..m.len() {
                let lhs = fr
                    .generator(a)
                    .unwrap()
                    .meet(&fr.generator(b).unwrap())
                    .unwrap();
                let rhs = fr.generator(m.meet(a, b)).unwrap();
                assert_eq!(lhs, rhs, "i(a) /\\ i(b) = i(a /\\ b)");
            }
        }
        assert!(fr.generator(m.bottom()).unwrap().is_bottom());
        assert!(fr.generator(m.top()).unwrap().is_top());
        // generators are injective away from nothing: order embedding
        for a in 0..m.len() {
            for b in 0..m.len() {
                let ia = fr.generator(a).unwrap();
                let ib = fr.generator(b).unwrap();
                assert_eq!(ia.le(&ib).unwrap(), m.le(a, b), "i is an order embedding");
            }
        }
    }

    #[test]
    fn pseudocomplements_on_antichain_base() {
        // M = boolean 4-lattice; base = {x, y, 1} where x, y are atoms
        let m = FinDistLattice::from_poset(FinPoset::diamond()).unwrap();
        let fr = FreeFrame::over(&m).unwrap();
        let x = m.poset().index_of("x").unwrap();
        let y = m.poset().index_of("y").unwrap();
        let ix = fr.generator(x).unwrap();
        let iy = fr.generator(y).unwrap();
        // i(x)* = i(x-complement) = i(y)
        assert_eq!(ix.pseudocomplement(), iy);
        assert_eq!(iy.pseudocomplement(), ix);
        assert_eq!(fr.bottom().pseudocomplement(), fr.top());
        assert_eq!(fr.top().pseudocomplement(), fr.bottom());
    }

    #[test]
    fn booleanization_of_chain_base_collapses() {
        // base a 2-chain: only bottom and top are regular
        let m = chain_lattice(3);
        let fr = FreeFrame::over(&m).unwrap();
        assert_eq!(fr.base().len(), 2);
        assert_eq!(fr.all_elements().unwrap().len(), 3);
        let bools = fr.booleanize();
        assert_eq!(bools.len(), 2);
        assert_eq!(boolean_algebra_violation(&bools), None);
    }

    #[test]
    fn booleanization_contains_exactly_the_regular_downsets() {
        for m in [
            chain_lattice(3),
            FinDistLattice::from_poset(FinPoset::diamond()).unwrap(),
            FinDistLattice::of_upsets(&FinPoset::vee()).unwrap(),
        ] {
            let fr = FreeFrame::over(&m).unwrap();
            let bools = fr.booleanize();
            // oracle: scan every downset for regularity
            let regular: Vec<FrameElt> = fr
                .all_elements()
                .unwrap()
                .into_iter()
                .filter(|e| e.is_regular())
                .collect();
            assert_eq!(bools.len(), regular.len());
            for e in &regular {
                assert!(bools.contains(e));
            }
            assert_eq!(boolean_algebra_violation(&bools), None);
        }
    }

    #[test]
    fn morphism_extension_commutes_with_generators() {
        // f = identity on the diamond, target = the diamond itself
        let m = FinDistLattice::from_poset(FinPoset::diamond()).unwrap();
        let fr = FreeFrame::over(&m).unwrap();
        let f: Vec<usize> = (0..m.len()).collect();
        let phi = fr.extend_morphism(&m, &m, &f).unwrap();
        for a in 0..m.len() {
            assert_eq!(phi(&fr.generator(a).unwrap()), a, "phi . i = f");
        }
        // phi preserves finite joins and meets of generators
        for a in 0..m.len() {
            for b in 0..m.len() {
                let ga = fr.generator(a).unwrap();
                let gb = fr.generator(b).unwrap();
                assert_eq!(phi(&ga.join(&gb).unwrap()), m.join(a, b));
                assert_eq!(phi(&ga.meet(&gb).unwrap()), m.meet(a, b));
            }
        }
    }

    #[test]
    fn morphism_extension_rejects_non_morphisms() {
        let m = FinDistLattice::from_poset(FinPoset::diamond()).unwrap();
        let fr = FreeFrame::over(&m).unwrap();
        // constant-to-top map does not preserve bottom
        let f: Vec<usize> = vec![m.top(); m.len()];
        assert!(matches!(
            fr.extend_morphism(&m, &m, &f),
            Err(Error::NotMorphism(_))
        ));
        // swapping an atom with the top breaks meets
        let x = m.poset().index_of("x").unwrap();
        let mut g: Vec<usize> = (0..m.len()).collect();
        g.swap(x, m.top());
        assert!(fr.extend_morphism(&m, &m, &g).is_err());
    }

    #[test]
    fn uniqueness_of_the_extension() {
        // any frame morphism agreeing with f on generators agrees with the
        // canonical extension on every element, because every downset is the
        // union of the generators it contains
        let m = FinDistLattice::from_poset(FinPoset::diamond()).unwrap();
        let fr = FreeFrame::over(&m).unwrap();
        let f: Vec<usize> = (0..m.len()).collect();
        let phi = fr.extend_morphism(&m, &m, &f).unwrap();
        for d in fr.all_elements().unwrap() {
            let via_generators = m.join_all(
                d.members()
                    .iter()
                    .map(|&b| phi(&fr.generator(fr.source_index(b)).unwrap())),
            );
            assert_eq!(phi(&d), via_generators);
        }
    }
}
