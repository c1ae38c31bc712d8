//! Finite boolean algebras presented by their atoms.
//!
//! Elements are subsets of the atom set, stored as bit masks; the operations
//! are the set-theoretic ones.  Every finite boolean algebra is of this form.

use crate::error::{Error, Result};
use crate::lattice::FinDistLattice;
use crate::poset::FinPoset;

/// Maximum number of atoms; keeps every element enumerable as a `u64` mask
/// and the carrier within the enumeration cap.
pub const MAX_ATOMS: usize = 16;

/// A finite boolean algebra with named atoms.  An element is the mask of the
/// atoms below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinBoolAlg {
    atoms: Vec<String>,
}

impl FinBoolAlg {
    pub fn new(atoms: Vec<String>) -> Result<FinBoolAlg> {
        if atoms.is_empty() {
            return Err(Error::EmptyAtomSet);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::CapExceeded {
                what: "boolean algebra atoms".into(),
                size: atoms.len() as u64,
                cap: MAX_ATOMS as u64,
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a.clone()) {
                return Err(Error::BadInput(format!("duplicate atom `{a}`")));
            }
        }
        Ok(FinBoolAlg { atoms })
    }

    /// `n` atoms named `a1..an`.
    pub fn with_atom_count(n: usize) -> Result<FinBoolAlg> {
        FinBoolAlg::new((1..=n).map(|i| format!("a{i}")).collect())
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atoms
    }

    /// Number of elements, `2^atoms`.
    pub fn size(&self) -> u64 {
        1u64 << self.atoms.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.size()
    }

    pub fn atom(&self, i: usize) -> u64 {
        1u64 << i
    }

    pub fn bottom(&self) -> u64 {
        0
    }

    pub fn top(&self) -> u64 {
        self.size() - 1
    }

    pub fn and(&self, a: u64, b: u64) -> u64 {
        a & b
    }

    pub fn or(&self, a: u64, b: u64) -> u64 {
        a | b
    }

    pub fn not(&self, a: u64) -> u64 {
        !a & self.top()
    }

    pub fn le(&self, a: u64, b: u64) -> bool {
        a & !b == 0
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = u64>) -> u64 {
        xs.into_iter().fold(self.top(), |acc, x| acc & x)
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = u64>) -> u64 {
        xs.into_iter().fold(0, |acc, x| acc | x)
    }

    pub fn is_atom(&self, a: u64) -> bool {
        a.count_ones() == 1
    }

    /// Atoms below `a`, by index.
    pub fn atoms_below(&self, a: u64) -> Vec<usize> {
        (0..self.atom_count()).filter(|&i| a >> i & 1 == 1).collect()
    }

    /// Canonical label: the brace-set of atom names, e.g. `{}`, `{p}`,
    /// `{p,q}`.
    pub fn element_label(&self, a: u64) -> String {
        let mut s = String::from("{");
        s.push_str(
            &self
                .atoms_below(a)
                .iter()
                .map(|&i| self.atoms[i].clone())
                .collect::<Vec<_>>()
                .join(","),
        );
        s.push('}');
        s
    }

    pub fn element_of_label(&self, label: &str) -> Result<u64> {
        let inner = label
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let mut mask = 0u64;
        if inner.is_empty() {
            return Ok(0);
        }
        for name in inner.split(',') {
            let i = self
                .atoms
                .iter()
                .position(|a| a == name)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    /// The order of the algebra as a poset over all `2^n` elements, for
    /// export and cross-checks on small algebras.
    pub fn order_poset(&self) -> Result<FinPoset> {
        let n = self.size() as usize;
        let labels = self.elements().map(|e| self.element_label(e)).collect();
        let mut le = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                le[a * n + b] = self.le(a as u64, b as u64);
            }
        }
        FinPoset::from_le_matrix(labels, le)
    }

    /// The algebra as a distributive lattice over all its elements.
    pub fn as_lattice(&self) -> Result<FinDistLattice> {
        FinDistLattice::from_poset(self.order_poset()?)
    }
}
