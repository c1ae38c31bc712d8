//! Structural law checking shared by every boolean-algebra-shaped carrier in
//! the crate (atom-mask algebras, booleanized frames, regular open sets,
//! normal-function idempotents).

/// Finite boolean operations over an enumerable carrier.
pub trait BoolOps {
    type Elt: Clone + Eq + std::fmt::Debug;

    fn carrier(&self) -> Vec<Self::Elt>;
    fn meet_op(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn join_op(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn compl_op(&self, a: &Self::Elt) -> Self::Elt;
    fn top_elt(&self) -> Self::Elt;
    fn bottom_elt(&self) -> Self::Elt;
}

/// Verifies every boolean-algebra axiom over the whole carrier (pairs and
/// triples).  Returns the name of the first violated law, if any.
pub fn boolean_algebra_violation<B: BoolOps>(b: &B) -> Option<String> {
    let elts = b.carrier();
    let top = b.top_elt();
    let bot = b.bottom_elt();
    for x in &elts {
        if &b.meet_op(x, &top) != x {
            return Some("top is not a meet identity".into());
        }
        if &b.join_op(x, &bot) != x {
            return Some("bottom is not a join identity".into());
        }
        if b.meet_op(x, &b.compl_op(x)) != bot {
            return Some("complement does not meet to bottom".into());
        }
        if b.join_op(x, &b.compl_op(x)) != top {
            return Some("complement does not join to top".into());
        }
        if &b.compl_op(&b.compl_op(x)) != x {
            return Some("double complement is not the identity".into());
        }
        if &b.meet_op(x, x) != x || &b.join_op(x, x) != x {
            return Some("operations are not idempotent".into());
        }
    }
    for x in &elts {
        for y in &elts {
            if b.meet_op(x, y) != b.meet_op(y, x) || b.join_op(x, y) != b.join_op(y, x) {
                return Some("operations are not commutative".into());
            }
            if &b.meet_op(x, &b.join_op(x, y)) != x || &b.join_op(x, &b.meet_op(x, y)) != x {
                return Some("absorption fails".into());
            }
            // De Morgan
            if b.compl_op(&b.meet_op(x, y)) != b.join_op(&b.compl_op(x), &b.compl_op(y)) {
                return Some("De Morgan (meet) fails".into());
            }
        }
    }
    for x in &elts {
        for y in &elts {
            for z in &elts {
                if b.meet_op(x, &b.meet_op(y, z)) != b.meet_op(&b.meet_op(x, y), z)
                    || b.join_op(x, &b.join_op(y, z)) != b.join_op(&b.join_op(x, y), z)
                {
                    return Some("operations are not associative".into());
                }
                if b.meet_op(x, &b.join_op(y, z))
                    != b.join_op(&b.meet_op(x, y), &b.meet_op(x, z))
                {
                    return Some("distributivity fails".into());
                }
            }
        }
    }
    None
}

/// A bijection between two carriers that preserves all boolean structure.
/// Returns the name of the first defect, if any.
pub fn boolean_iso_violation<A: BoolOps, B: BoolOps>(
    a: &A,
    b: &B,
    map: impl Fn(&A::Elt) -> B::Elt,
) -> Option<String> {
    let xs = a.carrier();
    let ys = b.carrier();
    if xs.len() != ys.len() {
        return Some(format!("carriers differ in size: {} vs {}", xs.len(), ys.len()));
    }
    let images: Vec<B::Elt> = xs.iter().map(&map).collect();
    for y in &ys {
        if !images.contains(y) {
            return Some("map is not surjective".into());
        }
    }
    for (i, x) in xs.iter().enumerate() {
        for (j, x2) in xs.iter().enumerate() {
            if i != j && images[i] == images[j] {
                return Some("map is not injective".into());
            }
            if map(&a.meet_op(x, x2)) != b.meet_op(&images[i], &images[j]) {
                return Some("map does not preserve meet".into());
            }
            if map(&a.join_op(x, x2)) != b.join_op(&images[i], &images[j]) {
                return Some("map does not preserve join".into());
            }
        }
        if map(&a.compl_op(x)) != b.compl_op(&images[i]) {
            return Some("map does not preserve complement".into());
        }
    }
    if map(&a.top_elt()) != b.top_elt() || map(&a.bottom_elt()) != b.bottom_elt() {
        return Some("map does not preserve the bounds".into());
    }
    None
}

impl BoolOps for crate::boolalg::FinBoolAlg {
    type Elt = u64;

    fn carrier(&self) -> Vec<u64> {
        self.elements().collect()
    }
    fn meet_op(&self, a: &u64, b: &u64) -> u64 {
        self.and(*a, *b)
    }
    fn join_op(&self, a: &u64, b: &u64) -> u64 {
        self.or(*a, *b)
    }
    fn compl_op(&self, a: &u64) -> u64 {
        self.not(*a)
    }
    fn top_elt(&self) -> u64 {
        self.top()
    }
    fn bottom_elt(&self) -> u64 {
        self.bottom()
    }
}

impl BoolOps for crate::poset::RegularOpenAlgebra {
    type Elt = std::collections::BTreeSet<usize>;

    fn carrier(&self) -> Vec<Self::Elt> {
        self.elements().to_vec()
    }
    fn meet_op(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        self.meet(a, b)
    }
    fn join_op(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        self.join(a, b)
    }
    fn compl_op(&self, a: &Self::Elt) -> Self::Elt {
        self.complement(a)
    }
    fn top_elt(&self) -> Self::Elt {
        self.top()
    }
    fn bottom_elt(&self) -> Self::Elt {
        self.bottom()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::FinBoolAlg;
    use crate::poset::{regular_opens, FinPoset};
    use std::sync::Arc;

    #[test]
    fn mask_algebra_satisfies_axioms() {
        for n in 1..=4 {
            let b = FinBoolAlg::with_atom_count(n).unwrap();
            assert_eq!(boolean_algebra_violation(&b), None);
        }
    }

    #[test]
    fn regular_opens_satisfy_axioms() {
        for p in [
            FinPoset::chain(3),
            FinPoset::antichain(2),
            FinPoset::vee(),
            FinPoset::diamond(),
        ] {
            let ro = regular_opens(Arc::new(p)).unwrap();
            assert_eq!(boolean_algebra_violation(&ro), None);
        }
    }

    #[test]
    fn iso_checker_sees_defects() {
        let a = FinBoolAlg::with_atom_count(2).unwrap();
        let b = FinBoolAlg::with_atom_count(2).unwrap();
        assert_eq!(boolean_iso_violation(&a, &b, |x| *x), None);
        // swapping the atoms is still an isomorphism
        assert_eq!(
            boolean_iso_violation(&a, &b, |x| (x & 1) << 1 | (x >> 1 & 1)),
            None
        );
        // a constant map is not
        assert!(boolean_iso_violation(&a, &b, |_| 0).is_some());
        // a non-morphism bijection is flagged
        assert!(boolean_iso_violation(&a, &b, |x| x ^ 1).is_some());
    }
}
