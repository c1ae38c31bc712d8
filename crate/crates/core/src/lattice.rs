//! Finite bounded distributive lattices.
//!
//! At finite scale these are simultaneously the frames and the bounded
//! meet-semilattices the constructions need: every finite distributive
//! lattice is complete, and the infinite distributive law degenerates to the
//! finite one.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::FinPoset;

/// A finite bounded distributive lattice with explicit meet/join tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinDistLattice {
    poset: Arc<FinPoset>,
    meet: Vec<usize>, // row-major n*n
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FinDistLattice {
    /// Builds the lattice from its order.  Fails when some pair lacks a meet
    /// or a join, or when the lattice is not distributive.
    pub fn from_poset(poset: FinPoset) -> Result<FinDistLattice> {
        let n = poset.len();
        let mut meet = vec![0usize; n * n];
        let mut join = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = greatest_lower_bound(&poset, a, b).ok_or_else(|| {
                    Error::NotLattice(format!(
                        "`{}` and `{}` have no meet",
                        poset.label(a),
                        poset.label(b)
                    ))
                })?;
                join[a * n + b] = least_upper_bound(&poset, a, b).ok_or_else(|| {
                    Error::NotLattice(format!(
                        "`{}` and `{}` have no join",
                        poset.label(a),
                        poset.label(b)
                    ))
                })?;
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| poset.le(b, x)))
            .ok_or_else(|| Error::NotLattice("no bottom element".into()))?;
        let top = (0..n)
            .find(|&t| (0..n).all(|x| poset.le(x, t)))
            .ok_or_else(|| Error::NotLattice("no top element".into()))?;
        let l = FinDistLattice {
            poset: Arc::new(poset),
            meet,
            join,
            bottom,
            top,
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c)) {
                        return Err(Error::NotDistributive(format!(
                            "at `{}`, `{}`, `{}`",
                            l.label(a),
                            l.label(b),
                            l.label(c)
                        )));
                    }
                }
            }
        }
        Ok(l)
    }

    /// The lattice of all upsets of `p` ordered by inclusion (a frame).
    /// Errors when `p` is too large to enumerate.
    pub fn of_upsets(p: &FinPoset) -> Result<FinDistLattice> {
        let upsets = p.upsets()?;
        let labels = upsets
            .iter()
            .map(|u| {
                let mut l = String::from("{");
                l.push_str(&p.labels_of(u).join(","));
                l.push('}');
                l
            })
            .collect::<Vec<_>>();
        let n = upsets.len();
        let mut le = vec![false; n * n];
        for (i, u) in upsets.iter().enumerate() {
            for (j, v) in upsets.iter().enumerate() {
                le[i * n + j] = u.is_subset(v);
            }
        }
        FinDistLattice::from_poset(FinPoset::from_le_matrix(labels, le)?)
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poset(&self) -> &Arc<FinPoset> {
        &self.poset
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.poset.le(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Pseudocomplement: the largest `s` with `a /\ s = 0`.  In a finite
    /// distributive lattice this is the join of all such `s`.
    pub fn pseudocomplement(&self, a: usize) -> usize {
        self.join_all((0..self.len()).filter(|&s| self.meet(a, s) == self.bottom))
    }

    /// `a` is well inside `b`: `a* \/ b = 1`.
    pub fn well_inside(&self, a: usize, b: usize) -> bool {
        self.join(self.pseudocomplement(a), b) == self.top
    }

    /// Every element is the join of the elements well inside it.
    pub fn is_regular_frame(&self) -> bool {
        (0..self.len()).all(|a| {
            self.join_all((0..self.len()).filter(|&s| self.well_inside(s, a))) == a
        })
    }

    /// Join-irreducible elements: nonbottom `p` that differ from the join of
    /// everything strictly below them.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&p| {
                p != self.bottom
                    && self.join_all((0..self.len()).filter(|&x| x != p && self.le(x, p))) != p
            })
            .collect()
    }

    /// Checks `a /\ \/S = \/ { a /\ s : s in S }` for every element `a` and
    /// every subset `S` of size at most `max_subset` plus the full carrier —
    /// the finite shadow of the frame distributivity law.
    pub fn frame_law_holds(&self, max_subset: usize) -> bool {
        let n = self.len();
        let mut subsets: Vec<Vec<usize>> = vec![(0..n).collect()];
        fn extend(n: usize, prefix: Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            out.push(prefix.clone());
            if k == 0 {
                return;
            }
            let start = prefix.last().map_or(0, |&x| x + 1);
            for next in start..n {
                let mut p = prefix.clone();
                p.push(next);
                extend(n, p, k - 1, out);
            }
        }
        extend(n, Vec::new(), max_subset, &mut subsets);
        subsets.iter().all(|s| {
            (0..n).all(|a| {
                self.meet(a, self.join_all(s.iter().copied()))
                    == self.join_all(s.iter().map(|&x| self.meet(a, x)))
            })
        })
    }

    /// True when every element has a (boolean) complement.
    pub fn is_boolean(&self) -> bool {
        (0..self.len()).all(|a| {
            (0..self.len()).any(|b| {
                self.meet(a, b) == self.bottom && self.join(a, b) == self.top
            })
        })
    }

    /// The sub-poset on `keep` (indices into this carrier), preserving order
    /// and labels.  Returns the poset together with the map back into the
    /// lattice carrier.
    pub fn restrict_poset(&self, keep: &[usize]) -> Result<(FinPoset, Vec<usize>)> {
        let labels = keep
            .iter()
            .map(|&i| self.label(i).to_string())
            .collect::<Vec<_>>();
        let m = keep.len();
        let mut le = vec![false; m * m];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                le[i * m + j] = self.le(a, b);
            }
        }
        Ok((FinPoset::from_le_matrix(labels, le)?, keep.to_vec()))
    }

    /// Downsets of the carrier (as index sets), for small lattices.
    pub fn downset_indices(&self) -> Result<Vec<BTreeSet<usize>>> {
        self.poset.downsets()
    }
}

fn greatest_lower_bound(p: &FinPoset, a: usize, b: usize) -> Option<usize> {
    let lower: Vec<usize> = (0..p.len())
        .filter(|&x| p.le(x, a) && p.le(x, b))
        .collect();
    lower
        .iter()
        .copied()
        .find(|&g| lower.iter().all(|&x| p.le(x, g)))
}

fn least_upper_bound(p: &FinPoset, a: usize, b: usize) -> Option<usize> {
    let upper: Vec<usize> = (0..p.len())
        .filter(|&x| p.le(a, x) && p.le(b, x))
        .collect();
    upper
        .iter()
        .copied()
        .find(|&l| upper.iter().all(|&x| p.le(l, x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_is_a_distributive_lattice() {
        let l = FinDistLattice::from_poset(FinPoset::diamond()).unwrap();
        let x = l.poset().index_of("x").unwrap();
        let y = l.poset().index_of("y").unwrap();
        assert_eq!(l.meet(x, y), l.bottom());
        assert_eq!(l.join(x, y), l.top());
        assert!(l.is_boolean());
        assert!(l.frame_law_holds(3));
        assert!(l.is_regular_frame());
    }

    #[test]
    fn vee_is_not_a_lattice() {
        // two maximal elements have no join
        assert!(matches!(
            FinDistLattice::from_poset(FinPoset::vee()),
            Err(Error::NotLattice(_))
        ));
    }

    #[test]
    fn pentagon_and_diamond_m3_are_rejected() {
        // N5: 0 < a < c < 1, 0 < b < 1, a,b and c,b incomparable
        let n5 = FinPoset::from_pairs(
            vec!["0".into(), "a".into(), "b".into(), "c".into(), "1".into()],
            &[
                ("0".into(), "0".into()),
                ("a".into(), "a".into()),
                ("b".into(), "b".into()),
                ("c".into(), "c".into()),
                ("1".into(), "1".into()),
                ("0".into(), "a".into()),
                ("0".into(), "b".into()),
                ("0".into(), "c".into()),
                ("0".into(), "1".into()),
                ("a".into(), "c".into()),
                ("a".into(), "1".into()),
                ("b".into(), "1".into()),
                ("c".into(), "1".into()),
            ],
        )
        .unwrap();
        assert!(matches!(
            FinDistLattice::from_poset(n5),
            Err(Error::NotDistributive(_))
        ));

        // M3: three incomparable middles
        let mut pairs = vec![("0".to_string(), "0".to_string())];
        for m in ["a", "b", "c"] {
            pairs.push((m.into(), m.into()));
            pairs.push(("0".into(), m.into()));
            pairs.push((m.into(), "1".into()));
        }
        pairs.push(("1".into(), "1".into()));
        pairs.push(("0".into(), "1".into()));
        let m3 = FinPoset::from_pairs(
            vec!["0".into(), "a".into(), "b".into(), "c".into(), "1".into()],
            &pairs,
        )
        .unwrap();
        assert!(matches!(
            FinDistLattice::from_poset(m3),
            Err(Error::NotDistributive(_))
        ));
    }

    #[test]
    fn chain_pseudocomplements() {
        let l = FinDistLattice::from_poset(FinPoset::chain(3)).unwrap();
        assert_eq!(l.pseudocomplement(l.bottom()), l.top());
        // middle element of a chain has pseudocomplement bottom
        assert_eq!(l.pseudocomplement(1), l.bottom());
        assert_eq!(l.pseudocomplement(l.top()), l.bottom());
        // a chain of length 3 is not regular: the middle is not a join of
        // elements well inside it
        assert!(!l.is_regular_frame());
    }

    #[test]
    fn join_irreducibles_of_small_lattices() {
        // 3-chain 0 < m < 1: both nonbottom elements are join-irreducible.
        let c = FinDistLattice::from_poset(FinPoset::chain(3)).unwrap();
        assert_eq!(c.join_irreducibles(), vec![1, 2]);
        // diamond (boolean on 2 atoms): exactly the two atoms.
        let d = FinDistLattice::from_poset(FinPoset::diamond()).unwrap();
        let irr = d.join_irreducibles();
        assert_eq!(irr.len(), 2);
        for p in irr {
            let lbl = d.label(p);
            assert!(lbl == "x" || lbl == "y");
        }
    }

    #[test]
    fn upset_lattice_of_vee() {
        let l = FinDistLattice::of_upsets(&FinPoset::vee()).unwrap();
        assert_eq!(l.len(), 5);
        assert!(l.frame_law_holds(3));
        // upsets of the vee form a non-boolean frame
        assert!(!l.is_boolean());
    }

    #[test]
    fn birkhoff_round_trip_on_upset_lattices() {
        // downsets of join-irreducibles of Up(P) recover Up(P) size
        for p in [FinPoset::chain(3), FinPoset::antichain(2), FinPoset::vee()] {
            let l = FinDistLattice::of_upsets(&p).unwrap();
            let irr = l.join_irreducibles();
            // in Up(P) the join-irreducibles are the principal upsets
            assert_eq!(irr.len(), p.len());
        }
    }
}
