//! Finite posets and the Alexandroff topology of their upsets.
//!
//! A finite poset carries the topology whose opens are exactly the upsets;
//! the least neighborhood of `x` is `up(x)`, the closure of a set is its
//! down-closure, and the interior of a set is the set of points whose whole
//! upset it contains.  Regular open sets (`U = int(cl(U))`) form a boolean
//! algebra which the extension pipelines are checked against.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::{fault, ENUMERATION_CAP};

/// A finite partially ordered set over labelled elements.
///
/// The order is stored as a full reflexive-transitive boolean matrix; the
/// constructors validate reflexivity, antisymmetry and transitivity and
/// reject empty carriers and duplicate labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPoset {
    labels: Vec<String>,
    le: Vec<bool>, // row-major n*n, le[i*n+j] <=> i <= j
}

impl FinPoset {
    /// Builds a poset from a list of related pairs.  The reflexive-transitive
    /// closure of the pairs is taken, so a cover relation is enough; cycles
    /// between distinct elements are rejected.
    pub fn from_pairs(labels: Vec<String>, pairs: &[(String, String)]) -> Result<FinPoset> {
        let n = labels.len();
        let index = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let mut le = vec![false; n * n];
        for (a, b) in pairs {
            le[index(a)? * n + index(b)?] = true;
        }
        for i in 0..n {
            le[i * n + i] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_le_matrix(labels, le)
    }

    /// Builds a poset from a row-major `n*n` order matrix.
    pub fn from_le_matrix(labels: Vec<String>, le: Vec<bool>) -> Result<FinPoset> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidPoset("empty carrier".into()));
        }
        if le.len() != n * n {
            return Err(Error::InvalidPoset(format!(
                "order matrix has {} entries, expected {}",
                le.len(),
                n * n
            )));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::InvalidPoset(format!("duplicate label `{l}`")));
            }
        }
        let p = FinPoset { labels, le };
        for i in 0..n {
            if !p.le(i, i) {
                return Err(Error::InvalidPoset(format!(
                    "not reflexive at `{}`",
                    p.labels[i]
                )));
            }
            for j in 0..n {
                if i != j && p.le(i, j) && p.le(j, i) {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric at `{}`, `{}`",
                        p.labels[i], p.labels[j]
                    )));
                }
                for k in 0..n {
                    if p.le(i, j) && p.le(j, k) && !p.le(i, k) {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive at `{}` <= `{}` <= `{}`",
                            p.labels[i], p.labels[j], p.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    /// Total order `e0 < e1 < ... < e(n-1)`.
    pub fn chain(n: usize) -> FinPoset {
        let labels = (0..n).map(|i| format!("c{i}")).collect::<Vec<_>>();
        let mut le = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                le[i * n + j] = true;
            }
        }
        FinPoset::from_le_matrix(labels, le).expect("chain is a poset")
    }

    /// Discrete order on `n` points.
    pub fn antichain(n: usize) -> FinPoset {
        let labels = (0..n).map(|i| format!("a{i}")).collect::<Vec<_>>();
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        FinPoset::from_le_matrix(labels, le).expect("antichain is a poset")
    }

    /// One bottom below two incomparable tops: `b <= t1`, `b <= t2`.
    pub fn vee() -> FinPoset {
        FinPoset::from_pairs(
            vec!["b".into(), "t1".into(), "t2".into()],
            &[
                ("b".into(), "b".into()),
                ("t1".into(), "t1".into()),
                ("t2".into(), "t2".into()),
                ("b".into(), "t1".into()),
                ("b".into(), "t2".into()),
            ],
        )
        .expect("vee is a poset")
    }

    /// Four-element diamond: bottom, two incomparable middles, top.
    pub fn diamond() -> FinPoset {
        FinPoset::from_pairs(
            vec!["0".into(), "x".into(), "y".into(), "1".into()],
            &[
                ("0".into(), "0".into()),
                ("x".into(), "x".into()),
                ("y".into(), "y".into()),
                ("1".into(), "1".into()),
                ("0".into(), "x".into()),
                ("0".into(), "y".into()),
                ("0".into(), "1".into()),
                ("x".into(), "1".into()),
                ("y".into(), "1".into()),
            ],
        )
        .expect("diamond is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty carriers
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i * self.len() + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// All related pairs, row-major — the inverse of [`FinPoset::from_pairs`].
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.le(i, j) {
                    out.push((self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        out
    }

    pub fn up_set(&self, i: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&j| self.le(i, j)).collect()
    }

    pub fn down_set(&self, i: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&j| self.le(j, i)).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| (0..self.len()).all(|j| !self.lt(i, j)))
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| (0..self.len()).all(|j| !self.lt(j, i)))
            .collect()
    }

    /// Covering pairs `(i, j)`: `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.lt(i, j) && !(0..self.len()).any(|k| self.lt(i, k) && self.lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_upset(&self, s: &BTreeSet<usize>) -> bool {
        s.iter()
            .all(|&i| (0..self.len()).all(|j| !self.le(i, j) || s.contains(&j)))
    }

    pub fn is_downset(&self, s: &BTreeSet<usize>) -> bool {
        s.iter()
            .all(|&i| (0..self.len()).all(|j| !self.le(j, i) || s.contains(&j)))
    }

    /// Interior in the Alexandroff topology: points whose whole upset lies in
    /// `s`.  Always an upset; the largest one inside `s`.
    pub fn interior_of(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| !self.le(x, y) || s.contains(&y)))
            .collect()
    }

    /// Closure in the Alexandroff topology: the down-closure of `s`.  The
    /// smallest closed (= down-closed) set containing `s`.
    pub fn closure_of(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        if fault::is(fault::Fault::ClosureNoDownset) {
            return s.clone();
        }
        (0..self.len())
            .filter(|&x| s.iter().any(|&y| self.le(x, y)))
            .collect()
    }

    pub fn complement_of(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.len()).filter(|x| !s.contains(x)).collect()
    }

    /// `int(cl(s))` — the regularization of an open set.
    pub fn regularize(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.interior_of(&self.closure_of(s))
    }

    fn subset_from_mask(&self, mask: u32) -> BTreeSet<usize> {
        (0..self.len()).filter(|&i| mask >> i & 1 == 1).collect()
    }

    /// All upsets, in a deterministic order.  Errors above [`ENUMERATION_CAP`].
    pub fn upsets(&self) -> Result<Vec<BTreeSet<usize>>> {
        let n = self.len();
        if n >= 32 || (1u64 << n) > ENUMERATION_CAP as u64 {
            return Err(Error::CapExceeded {
                what: format!("upsets of a {n}-element poset"),
                size: if n >= 64 { u64::MAX } else { 1u64 << n },
                cap: ENUMERATION_CAP as u64,
            });
        }
        Ok((0u32..1 << n)
            .map(|m| self.subset_from_mask(m))
            .filter(|s| self.is_upset(s))
            .collect())
    }

    /// All downsets, in a deterministic order.  Errors above the cap.
    pub fn downsets(&self) -> Result<Vec<BTreeSet<usize>>> {
        let n = self.len();
        if n >= 32 || (1u64 << n) > ENUMERATION_CAP as u64 {
            return Err(Error::CapExceeded {
                what: format!("downsets of a {n}-element poset"),
                size: if n >= 64 { u64::MAX } else { 1u64 << n },
                cap: ENUMERATION_CAP as u64,
            });
        }
        Ok((0u32..1 << n)
            .map(|m| self.subset_from_mask(m))
            .filter(|s| self.is_downset(s))
            .collect())
    }

    pub fn labels_of(&self, s: &BTreeSet<usize>) -> Vec<String> {
        s.iter().map(|&i| self.labels[i].clone()).collect()
    }
}

/// A subset of a specific poset, tagged with its owner so mismatched
/// operations fail instead of silently mixing carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetSubset {
    poset: Arc<FinPoset>,
    members: BTreeSet<usize>,
}

impl PosetSubset {
    pub fn new(poset: Arc<FinPoset>, members: BTreeSet<usize>) -> Result<PosetSubset> {
        if let Some(&i) = members.iter().find(|&&i| i >= poset.len()) {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: poset.len(),
            });
        }
        Ok(PosetSubset { poset, members })
    }

    pub fn from_labels(poset: Arc<FinPoset>, labels: &[String]) -> Result<PosetSubset> {
        let members = labels
            .iter()
            .map(|l| poset.index_of(l))
            .collect::<Result<_>>()?;
        Ok(PosetSubset { poset, members })
    }

    pub fn poset(&self) -> &Arc<FinPoset> {
        &self.poset
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    fn same_poset(&self, other: &PosetSubset) -> Result<()> {
        if Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset {
            Ok(())
        } else {
            Err(Error::PosetMismatch)
        }
    }

    fn wrap(&self, members: BTreeSet<usize>) -> PosetSubset {
        PosetSubset {
            poset: Arc::clone(&self.poset),
            members,
        }
    }

    pub fn interior(&self) -> PosetSubset {
        self.wrap(self.poset.interior_of(&self.members))
    }

    pub fn closure(&self) -> PosetSubset {
        self.wrap(self.poset.closure_of(&self.members))
    }

    pub fn complement(&self) -> PosetSubset {
        self.wrap(self.poset.complement_of(&self.members))
    }

    pub fn union(&self, other: &PosetSubset) -> Result<PosetSubset> {
        self.same_poset(other)?;
        Ok(self.wrap(self.members.union(&other.members).copied().collect()))
    }

    pub fn intersect(&self, other: &PosetSubset) -> Result<PosetSubset> {
        self.same_poset(other)?;
        Ok(self.wrap(self.members.intersection(&other.members).copied().collect()))
    }

    pub fn is_upset(&self) -> bool {
        self.poset.is_upset(&self.members)
    }

    pub fn is_downset(&self) -> bool {
        self.poset.is_downset(&self.members)
    }

    /// `U = int(cl(U))`.
    pub fn is_regular_open(&self) -> bool {
        self.members == self.poset.regularize(&self.members)
    }
}

/// The boolean algebra of regular open subsets of a finite poset.
///
/// Meet is intersection, join is `int(cl(union))`, complement is the interior
/// of the set complement.
#[derive(Debug, Clone)]
pub struct RegularOpenAlgebra {
    poset: Arc<FinPoset>,
    elements: Vec<BTreeSet<usize>>,
}

/// Enumerates the regular open sets of `poset` and packages their boolean
/// operations.  Errors when the carrier is too large to scan.
pub fn regular_opens(poset: Arc<FinPoset>) -> Result<RegularOpenAlgebra> {
    let elements = poset
        .upsets()?
        .into_iter()
        .filter(|u| *u == poset.regularize(u))
        .collect();
    Ok(RegularOpenAlgebra { poset, elements })
}

impl RegularOpenAlgebra {
    pub fn poset(&self) -> &Arc<FinPoset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BTreeSet<usize>] {
        &self.elements
    }

    pub fn index_of(&self, s: &BTreeSet<usize>) -> Option<usize> {
        self.elements.iter().position(|e| e == s)
    }

    pub fn bottom(&self) -> BTreeSet<usize> {
        BTreeSet::new()
    }

    pub fn top(&self) -> BTreeSet<usize> {
        (0..self.poset.len()).collect()
    }

    pub fn meet(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        a.intersection(b).copied().collect()
    }

    pub fn join(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.poset.regularize(&a.union(b).copied().collect())
    }

    pub fn complement(&self, a: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.poset.interior_of(&self.poset.complement_of(a))
    }

    pub fn le(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
        a.is_subset(b)
    }
}
