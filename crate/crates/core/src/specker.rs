//! The Specker view of `Q^n`: the algebra generated over the rationals by
//! the idempotents `x_e` attached to a finite boolean algebra with `n`
//! atoms.  At this finite scale the generated algebra is all of `Q^n`,
//! every element has a unique orthogonal decomposition, the idempotents
//! recover the boolean algebra, boolean morphisms extend uniquely to
//! algebra morphisms, and the Dedekind completion adds nothing new.

use num::Zero;

use crate::boolalg::FinBoolAlg;
use crate::error::{Error, Result};
use crate::lalg::LVec;
use crate::rat::Rat;

/// `Q^n` organized around the idempotent generators `x_e` for `e` in a
/// boolean algebra whose atoms index the coordinates.
#[derive(Debug, Clone)]
pub struct SpeckerAlg {
    algebra: FinBoolAlg,
}

impl SpeckerAlg {
    pub fn over(algebra: FinBoolAlg) -> SpeckerAlg {
        SpeckerAlg { algebra }
    }

    pub fn algebra(&self) -> &FinBoolAlg {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.atom_count()
    }

    /// The idempotent generator `x_e`: the characteristic vector of the
    /// atoms below `e`.
    pub fn x_of(&self, e: u64) -> LVec {
        LVec::indicator(self.dim(), e)
    }

    /// The defining relations of the generators; returns the first failure.
    pub fn relation_violation(&self) -> Option<String> {
        let b = &self.algebra;
        let dim = self.dim();
        if self.x_of(b.bottom()) != LVec::zero(dim) {
            return Some("x at bottom is not 0".into());
        }
        if self.x_of(b.top()) != LVec::one(dim) {
            return Some("x at top is not 1".into());
        }
        for e in b.elements() {
            let xe = self.x_of(e);
            if &LVec::one(dim) - &xe != self.x_of(b.not(e)) {
                return Some(format!(
                    "complement of {} does not map to 1 - x",
                    b.element_label(e)
                ));
            }
            for f in b.elements() {
                let xf = self.x_of(f);
                if &xe * &xf != self.x_of(b.and(e, f)) {
                    return Some(format!(
                        "meet of {} and {} does not multiply",
                        b.element_label(e),
                        b.element_label(f)
                    ));
                }
                if &(&xe + &xf) - &(&xe * &xf) != self.x_of(b.or(e, f)) {
                    return Some(format!(
                        "join of {} and {} fails inclusion-exclusion",
                        b.element_label(e),
                        b.element_label(f)
                    ));
                }
                if b.le(e, f) != xe.le(&xf) {
                    return Some(format!(
                        "order of {} and {} disagrees with the vectors",
                        b.element_label(e),
                        b.element_label(f)
                    ));
                }
            }
        }
        None
    }

    /// The idempotents of the algebra are exactly the generators, one per
    /// boolean element; returns the first failure of the correspondence.
    pub fn idempotent_iso_violation(&self) -> Option<String> {
        let b = &self.algebra;
        // every generator is idempotent and they are pairwise distinct
        for e in b.elements() {
            if !self.x_of(e).is_idempotent() {
                return Some(format!("x at {} not idempotent", b.element_label(e)));
            }
        }
        // every idempotent vector arises from exactly one element: the 0/1
        // vectors are indexed by their support masks
        for mask in b.elements() {
            let v = LVec::indicator(self.dim(), mask);
            if crate::lalg::idempotent_mask(&v) != Some(mask) {
                return Some(format!("support of mask {mask} does not round-trip"));
            }
        }
        // the boolean structure transfers: multiplication is meet,
        // inclusion-exclusion is join, 1 - e is complement
        self.relation_violation()
    }
}

/// One orthogonal component: a nonzero value and the mask of coordinates
/// carrying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoPart {
    pub value: Rat,
    pub mask: u64,
}

/// The orthogonal decomposition `a = sum r_i x_(b_i)` with distinct nonzero
/// values `r_i` and disjoint nonzero masks `b_i`, ordered by the smallest
/// coordinate in each mask.
pub fn ortho_decomp(a: &LVec) -> Vec<OrthoPart> {
    let mut parts: Vec<OrthoPart> = Vec::new();
    for (i, c) in a.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match parts.iter_mut().find(|p| &p.value == c) {
            Some(part) => part.mask |= 1 << i,
            None => parts.push(OrthoPart {
                value: c.clone(),
                mask: 1 << i,
            }),
        }
    }
    parts
}

/// Rebuilds the vector from its orthogonal components.
pub fn recompose(dim: usize, parts: &[OrthoPart]) -> LVec {
    parts.iter().fold(LVec::zero(dim), |acc, p| {
        &acc + &LVec::indicator(dim, p.mask).scale(&p.value)
    })
}

/// The unique algebra morphism extending a boolean morphism of the
/// idempotent generators.
#[derive(Debug, Clone)]
pub struct SpeckerMorphism {
    source: FinBoolAlg,
    target: FinBoolAlg,
    tau: Vec<u64>,
}

/// Builds the extension of `tau`, validating first that `tau` is a boolean
/// morphism from `source` to `target` (indexed by source element).
pub fn specker_morphism(
    source: &FinBoolAlg,
    target: &FinBoolAlg,
    tau: &[u64],
) -> Result<SpeckerMorphism> {
    if tau.len() != source.size() as usize {
        return Err(Error::BadInput(format!(
            "morphism table has {} entries for a {}-element algebra",
            tau.len(),
            source.size()
        )));
    }
    let top = target.top();
    for &image in tau {
        if image & !top != 0 {
            return Err(Error::NotMorphism("image outside the target".into()));
        }
    }
    if tau[source.bottom() as usize] != target.bottom() {
        return Err(Error::NotMorphism("bottom not preserved".into()));
    }
    if tau[source.top() as usize] != target.top() {
        return Err(Error::NotMorphism("top not preserved".into()));
    }
    for e in source.elements() {
        if target.not(tau[e as usize]) != tau[source.not(e) as usize] {
            return Err(Error::NotMorphism("complement not preserved".into()));
        }
        for f in source.elements() {
            if target.and(tau[e as usize], tau[f as usize]) != tau[source.and(e, f) as usize] {
                return Err(Error::NotMorphism("meet not preserved".into()));
            }
        }
    }
    Ok(SpeckerMorphism {
        source: source.clone(),
        target: target.clone(),
        tau: tau.to_vec(),
    })
}

impl SpeckerMorphism {
    pub fn source(&self) -> &FinBoolAlg {
        &self.source
    }

    pub fn target(&self) -> &FinBoolAlg {
        &self.target
    }

    pub fn tau(&self, e: u64) -> u64 {
        self.tau[e as usize]
    }

    /// The extension through the orthogonal decomposition:
    /// `sum r_i x_(b_i)` maps to `sum r_i x_(tau b_i)`.
    pub fn apply(&self, a: &LVec) -> Result<LVec> {
        let sdim = self.source.atom_count();
        if a.dim() != sdim {
            return Err(Error::DimensionMismatch {
                left: sdim,
                right: a.dim(),
            });
        }
        let tdim = self.target.atom_count();
        let parts = ortho_decomp(a)
            .into_iter()
            .map(|p| OrthoPart {
                value: p.value,
                mask: self.tau(p.mask),
            })
            .collect::<Vec<_>>();
        Ok(recompose(tdim, &parts))
    }

    /// The same extension computed atom by atom: `a = sum a_p x_p` over the
    /// atoms, so the image is `sum a_p x_(tau p)`.  Agreement with `apply`
    /// witnesses uniqueness — any morphism fixing the generators is forced
    /// on all of `Q^n`.
    pub fn apply_atomwise(&self, a: &LVec) -> Result<LVec> {
        let sdim = self.source.atom_count();
        if a.dim() != sdim {
            return Err(Error::DimensionMismatch {
                left: sdim,
                right: a.dim(),
            });
        }
        let tdim = self.target.atom_count();
        let mut image = LVec::zero(tdim);
        for i in 0..sdim {
            let atom = self.source.atom(i);
            image = &image + &LVec::indicator(tdim, self.tau(atom)).scale(a.coord(i));
        }
        Ok(image)
    }

    /// Checks that the extension respects the algebra and lattice structure
    /// on the given sample; returns the first violated law.
    pub fn morphism_violation(&self, sample: &[LVec]) -> Option<String> {
        for a in sample {
            for b in sample {
                let (fa, fb) = (self.apply(a).ok()?, self.apply(b).ok()?);
                if self.apply(&(a + b)).ok()? != &fa + &fb {
                    return Some("addition not preserved".into());
                }
                if self.apply(&(a * b)).ok()? != &fa * &fb {
                    return Some("multiplication not preserved".into());
                }
                if self.apply(&a.join(b)).ok()? != fa.join(&fb) {
                    return Some("join not preserved".into());
                }
                if self.apply(&a.meet(b)).ok()? != fa.meet(&fb) {
                    return Some("meet not preserved".into());
                }
            }
        }
        let sdim = self.source.atom_count();
        if self.apply(&LVec::one(sdim)).ok()? != LVec::one(self.target.atom_count()) {
            return Some("unit not preserved".into());
        }
        None
    }
}

/// Exact supremum of a nonempty finite family (coordinatewise maximum).
pub fn sup(family: &[LVec]) -> Result<LVec> {
    family
        .iter()
        .cloned()
        .reduce(|a, b| a.join(&b))
        .ok_or_else(|| Error::BadInput("supremum of an empty family".into()))
}

/// Exact infimum of a nonempty finite family (coordinatewise minimum).
pub fn inf(family: &[LVec]) -> Result<LVec> {
    family
        .iter()
        .cloned()
        .reduce(|a, b| a.meet(&b))
        .ok_or_else(|| Error::BadInput("infimum of an empty family".into()))
}

/// Is `s` the least upper bound of `family` among the given candidates?
pub fn is_least_upper_bound(s: &LVec, family: &[LVec], candidates: &[LVec]) -> bool {
    family.iter().all(|a| a.le(s))
        && candidates
            .iter()
            .filter(|u| family.iter().all(|a| a.le(u)))
            .all(|u| s.le(u))
}

/// A finite family of two-term combinations of generators, each below `a`,
/// whose supremum is exactly `a`.  Witnesses that the generators join-densely
/// generate the completed algebra: with `s` the norm of `a`, each orthogonal
/// component contributes the piece `r_i x_(b_i) - s (1 - x_(b_i))`, and the
/// coordinates outside every component contribute the analogous zero piece.
pub fn specker_pieces_below(a: &LVec) -> Vec<LVec> {
    let dim = a.dim();
    let s = a.norm();
    let mut groups = ortho_decomp(a);
    let zero_mask = ((1u64 << dim) - 1) & !a.support_mask();
    if zero_mask != 0 {
        groups.push(OrthoPart {
            value: Rat::zero(),
            mask: zero_mask,
        });
    }
    groups
        .into_iter()
        .map(|p| {
            let on = LVec::indicator(dim, p.mask);
            let off = &LVec::one(dim) - &on;
            &on.scale(&p.value) - &off.scale(&s)
        })
        .collect()
}
