//! Canonical extension of a finite boolean algebra.
//!
//! The pipeline: filters of `B` form a bounded meet-semilattice under
//! reverse inclusion (meet = filter generated by the union, bottom = `B`,
//! top = `{1}`); the free frame over it is the frame of downsets of the
//! nontrivial filters; and the booleanization of that frame, with the
//! composite embedding `e(b) = i(up(b))`, is a canonical extension of `B`:
//! `e` is a dense and compact boolean embedding.  Against it we check the
//! classical description: the regular open subsets of the space of proper
//! filters under inclusion.

use std::collections::BTreeSet;

use serde_json::json;

use crate::boolalg::FinBoolAlg;
use crate::error::Result;
use crate::frame::{Booleanization, FrameElt, FreeFrame};
use crate::lattice::FinDistLattice;
use crate::laws::{boolean_algebra_violation, boolean_iso_violation, BoolOps};
use crate::poset::{regular_opens, FinPoset, RegularOpenAlgebra};
use crate::report::CheckResult;

/// The semilattice of all filters of `B` under reverse inclusion.
///
/// Every filter of a finite boolean algebra is principal, so the carrier is
/// indexed by the generator: index `x` is the filter `up(x)`.  Reverse
/// inclusion makes `up(x) <= up(y)` exactly when `x <= y` in `B`, the bottom
/// is `up(0) = B` and the top is `up(1) = {1}`.
pub fn filter_semilattice(b: &FinBoolAlg) -> Result<FinDistLattice> {
    let n = b.size() as usize;
    let labels = b
        .elements()
        .map(|x| format!("^{}", b.element_label(x)))
        .collect::<Vec<_>>();
    let mut le = vec![false; n * n];
    for x in b.elements() {
        for y in b.elements() {
            le[x as usize * n + y as usize] = b.le(x, y);
        }
    }
    FinDistLattice::from_poset(FinPoset::from_le_matrix(labels, le)?)
}

/// Members of the filter `up(x)`.
pub fn filter_members(b: &FinBoolAlg, x: u64) -> Vec<u64> {
    b.elements().filter(|&y| b.le(x, y)).collect()
}

/// The space of proper filters of `B`, ordered by inclusion.  Index `k`
/// holds the filter generated by mask `k + 1`.
pub fn proper_filter_poset(b: &FinBoolAlg) -> Result<FinPoset> {
    let n = (b.size() - 1) as usize;
    let labels = (1..b.size())
        .map(|x| format!("^{}", b.element_label(x)))
        .collect::<Vec<_>>();
    let mut le = vec![false; n * n];
    for x in 1..b.size() {
        for y in 1..b.size() {
            // up(x) included in up(y) iff y <= x
            le[(x - 1) as usize * n + (y - 1) as usize] = b.le(y, x);
        }
    }
    FinPoset::from_le_matrix(labels, le)
}

/// A canonical extension of a finite boolean algebra: the booleanization of
/// the free frame over its filter semilattice, with the embedding
/// `e(b) = i(up(b))`.
#[derive(Debug, Clone)]
pub struct BaCanExt {
    algebra: FinBoolAlg,
    filt: FinDistLattice,
    frame: FreeFrame,
    bools: Booleanization,
    e_images: Vec<FrameElt>,
}

/// Builds the extension.  The filter index of mask `x` is `x` itself, so the
/// embedding is `e(x) = i(up(x))`.
pub fn canonical_extension_ba(b: &FinBoolAlg) -> Result<BaCanExt> {
    let filt = filter_semilattice(b)?;
    let frame = FreeFrame::over(&filt)?;
    let bools = frame.booleanize();
    let e_images = b
        .elements()
        .map(|x| frame.generator(x as usize))
        .collect::<Result<Vec<_>>>()?;
    Ok(BaCanExt {
        algebra: b.clone(),
        filt,
        frame,
        bools,
        e_images,
    })
}

impl BaCanExt {
    pub fn algebra(&self) -> &FinBoolAlg {
        &self.algebra
    }

    pub fn filter_semilattice(&self) -> &FinDistLattice {
        &self.filt
    }

    pub fn frame(&self) -> &FreeFrame {
        &self.frame
    }

    /// The extension algebra (the booleanization).
    pub fn extension(&self) -> &Booleanization {
        &self.bools
    }

    /// The embedding `e`.
    pub fn e(&self, x: u64) -> &FrameElt {
        &self.e_images[x as usize]
    }

    /// `i(F)` for the filter generated by `x`.
    pub fn filter_generator(&self, x: u64) -> FrameElt {
        self.frame.generator(x as usize).expect("mask in range")
    }
}

impl BoolOps for BaCanExt {
    // the extension viewed as a boolean algebra, so iso checks can target it
    type Elt = FrameElt;

    fn carrier(&self) -> Vec<FrameElt> {
        self.bools.elements()
    }
    fn meet_op(&self, a: &FrameElt, b: &FrameElt) -> FrameElt {
        self.bools.meet(a, b)
    }
    fn join_op(&self, a: &FrameElt, b: &FrameElt) -> FrameElt {
        self.bools.join(a, b)
    }
    fn compl_op(&self, a: &FrameElt) -> FrameElt {
        self.bools.complement(a)
    }
    fn top_elt(&self) -> FrameElt {
        self.bools.top()
    }
    fn bottom_elt(&self) -> FrameElt {
        self.bools.bottom()
    }
}

/// How compactness families are chosen.
#[derive(Debug, Clone, Copy)]
pub enum CompactnessMode {
    /// Every subset of the carrier (algebras of at most 16 elements).
    Exhaustive,
    /// A fixed number of seeded random subsets.
    Sampled { count: usize, seed: u64 },
}

/// Verifies that the extension is a canonical extension of its algebra:
/// the embedding is a boolean monomorphism, the extension is boolean, the
/// embedding is dense (with constructive meet/join witnesses through the
/// filters) and compact (exhaustively for small algebras, sampled above).
pub fn verify_canonical_ba(ext: &BaCanExt, mode: CompactnessMode) -> Vec<CheckResult> {
    let b = &ext.algebra;
    let mut checks = Vec::new();

    // the extension is a boolean algebra
    checks.push(match boolean_algebra_violation(&ext.bools) {
        None => CheckResult::passed(
            "extension-is-boolean",
            json!({"size": ext.bools.len()}),
        ),
        Some(law) => CheckResult::failed("extension-is-boolean", json!({ "violated": law })),
    });

    // e is a boolean embedding
    let mut failures = Vec::new();
    for x in b.elements() {
        for y in b.elements() {
            if x < y && ext.e(x) == ext.e(y) {
                failures.push(json!({
                    "law": "injectivity",
                    "x": b.element_label(x),
                    "y": b.element_label(y),
                }));
            }
            let meet = ext.bools.meet(ext.e(x), ext.e(y));
            if &meet != ext.e(b.and(x, y)) {
                failures.push(json!({
                    "law": "meet",
                    "x": b.element_label(x),
                    "y": b.element_label(y),
                }));
            }
            let join = ext.bools.join(ext.e(x), ext.e(y));
            if &join != ext.e(b.or(x, y)) {
                failures.push(json!({
                    "law": "join",
                    "x": b.element_label(x),
                    "y": b.element_label(y),
                }));
            }
        }
        if ext.bools.complement(ext.e(x)) != *ext.e(b.not(x)) {
            failures.push(json!({"law": "complement", "x": b.element_label(x)}));
        }
    }
    if !ext.e(b.bottom()).is_bottom() || !ext.e(b.top()).is_top() {
        failures.push(json!({"law": "bounds"}));
    }
    checks.push(CheckResult::from_failures(
        "embedding-boolean-mono",
        json!({"pairs": b.size() * b.size()}),
        failures,
    ));

    // every filter generator is the meet of the embedded filter members
    let mut failures = Vec::new();
    for x in b.elements() {
        let members = filter_members(b, x);
        let meet = ext
            .bools
            .meet_all(members.iter().map(|&m| ext.e(m)));
        if meet != ext.filter_generator(x) {
            failures.push(json!({"filter": format!("^{}", b.element_label(x))}));
        }
    }
    checks.push(CheckResult::from_failures(
        "filter-meet-representation",
        json!({"filters": b.size()}),
        failures,
    ));

    // density: every extension element is the regularized join of the filter
    // generators below it, each of which is a meet from the image of e
    let mut failures = Vec::new();
    for c in ext.bools.elements() {
        let parts: Vec<FrameElt> = c
            .members()
            .iter()
            .map(|&q| {
                let filt_index = ext.frame.source_index(q);
                ext.filter_generator(filt_index as u64)
            })
            .collect();
        let rebuilt = ext.bools.join_all(parts.iter());
        if rebuilt != c {
            failures.push(json!({
                "element": c.members().iter().collect::<Vec<_>>(),
            }));
        }
    }
    checks.push(CheckResult::from_failures(
        "dense",
        json!({"elements": ext.bools.len()}),
        failures,
    ));

    // compactness: a family of embedded elements meets to bottom exactly
    // when the family itself meets to bottom, in which case the family (made
    // minimal greedily) is its own finite witness
    let families: Vec<Vec<u64>> = match mode {
        CompactnessMode::Exhaustive => {
            let n = b.size();
            (0u64..1 << n)
                .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
                .collect()
        }
        CompactnessMode::Sampled { count, seed } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    b.elements()
                        .filter(|_| rng.random_bool(0.5))
                        .collect::<Vec<u64>>()
                })
                .collect()
        }
    };
    let mode_json = match mode {
        CompactnessMode::Exhaustive => json!({"mode": "exhaustive", "families": families.len()}),
        CompactnessMode::Sampled { count, seed } => {
            json!({"mode": "sampled", "families": count, "seed": seed})
        }
    };
    let mut failures = Vec::new();
    let mut example_witnesses = Vec::new();
    for s in &families {
        let ext_meet = ext.bools.meet_all(s.iter().map(|&x| ext.e(x)));
        let alg_meet = b.meet_all(s.iter().copied());
        match (ext_meet.is_bottom(), alg_meet == b.bottom()) {
            (true, true) => {
                // shrink greedily to a minimal witness family
                let mut s0 = s.clone();
                let mut i = 0;
                while i < s0.len() {
                    let mut trial = s0.clone();
                    trial.remove(i);
                    if b.meet_all(trial.iter().copied()) == b.bottom() {
                        s0 = trial;
                    } else {
                        i += 1;
                    }
                }
                if example_witnesses.len() < 3 && !s0.is_empty() {
                    example_witnesses.push(json!({
                        "family": s.iter().map(|&x| b.element_label(x)).collect::<Vec<_>>(),
                        "witness": s0.iter().map(|&x| b.element_label(x)).collect::<Vec<_>>(),
                    }));
                }
            }
            (false, false) => {}
            (ext_zero, alg_zero) => {
                failures.push(json!({
                    "family": s.iter().map(|&x| b.element_label(x)).collect::<Vec<_>>(),
                    "extensionMeetIsBottom": ext_zero,
                    "algebraMeetIsBottom": alg_zero,
                }));
            }
        }
    }
    let mut context = mode_json;
    context["witnessExamples"] = serde_json::Value::Array(example_witnesses);
    checks.push(CheckResult::from_failures("compact", context, failures));

    checks
}

/// The isomorphism between the booleanized frame and the regular open sets
/// of the proper-filter space.
#[derive(Debug, Clone)]
pub struct RoIso {
    x: std::sync::Arc<FinPoset>,
    ro: RegularOpenAlgebra,
    /// image of each extension element (by extension index) in `X`
    table: Vec<BTreeSet<usize>>,
}

impl RoIso {
    pub fn space(&self) -> &FinPoset {
        &self.x
    }

    pub fn regular_open_algebra(&self) -> &RegularOpenAlgebra {
        &self.ro
    }

    pub fn image(&self, ext_index: usize) -> &BTreeSet<usize> {
        &self.table[ext_index]
    }
}

/// `f(F) = { G in X : F included in G }`, the principal upset of `F` in the
/// proper-filter space; mask indexing as in [`proper_filter_poset`].
fn filter_upset_in_x(b: &FinBoolAlg, x_space: &FinPoset, f_mask: u64) -> BTreeSet<usize> {
    let _ = x_space;
    (1..b.size())
        .filter(|&g| b.le(g, f_mask)) // up(f) subset of up(g) iff g <= f
        .map(|g| (g - 1) as usize)
        .collect()
}

/// Builds the comparison map `c |-> \/ { f(F) : F in c }` from the extension
/// to the upsets of the proper-filter space, restricted to the regular
/// elements on both sides.
pub fn ro_iso(ext: &BaCanExt) -> Result<RoIso> {
    let b = &ext.algebra;
    let x = std::sync::Arc::new(proper_filter_poset(b)?);
    let ro = regular_opens(std::sync::Arc::clone(&x))?;
    let table = ext
        .bools
        .elements()
        .iter()
        .map(|c| {
            let mut image = BTreeSet::new();
            for &q in c.members() {
                let f_mask = ext.frame.source_index(q) as u64;
                image.extend(filter_upset_in_x(b, &x, f_mask));
            }
            image
        })
        .collect();
    Ok(RoIso { x, ro, table })
}

/// Checks that the comparison map is a boolean isomorphism onto the regular
/// open algebra, that it sends `e(b)` to the set of proper filters
/// containing `b`, and that the underlying downset-to-upset translation is
/// an order isomorphism.
pub fn verify_ro_iso(ext: &BaCanExt, iso: &RoIso) -> Vec<CheckResult> {
    let b = &ext.algebra;
    let mut checks = Vec::new();

    // the regular open sets form a boolean algebra of the same size
    checks.push(match boolean_algebra_violation(&iso.ro) {
        None => CheckResult::passed(
            "regular-opens-boolean",
            json!({"size": iso.ro.len()}),
        ),
        Some(law) => CheckResult::failed("regular-opens-boolean", json!({ "violated": law })),
    });

    // e(b) lands on the filters containing b
    let mut failures = Vec::new();
    for v in b.elements() {
        let ext_index = ext
            .bools
            .index_of(ext.e(v))
            .expect("embedded element is regular");
        let expected: BTreeSet<usize> = (1..b.size())
            .filter(|&g| b.le(g, v)) // v in up(g) iff g <= v
            .map(|g| (g - 1) as usize)
            .collect();
        if iso.table[ext_index] != expected {
            failures.push(json!({
                "element": b.element_label(v),
                "image": iso.x.labels_of(&iso.table[ext_index]),
                "expected": iso.x.labels_of(&expected),
            }));
        }
    }
    checks.push(CheckResult::from_failures(
        "embedding-image-is-filter-set",
        json!({"elements": b.size()}),
        failures,
    ));

    // boolean isomorphism extension -> regular opens
    let elements = ext.bools.elements();
    let index_of = |e: &FrameElt| ext.bools.index_of(e).expect("regular element");
    let violation = boolean_iso_violation(ext, &iso.ro, |c| iso.table[index_of(c)].clone());
    checks.push(match violation {
        None => CheckResult::passed(
            "extension-isomorphic-to-regular-opens",
            json!({"size": elements.len()}),
        ),
        Some(d) => CheckResult::failed(
            "extension-isomorphic-to-regular-opens",
            json!({ "defect": d }),
        ),
    });

    // the downset-to-upset translation is an order isomorphism of frames
    let mut failures = Vec::new();
    match ext.frame.all_elements() {
        Ok(all) => {
            let translate = |d: &FrameElt| -> BTreeSet<usize> {
                let mut image = BTreeSet::new();
                for &q in d.members() {
                    image.extend(filter_upset_in_x(
                        b,
                        &iso.x,
                        ext.frame.source_index(q) as u64,
                    ));
                }
                image
            };
            let images: Vec<BTreeSet<usize>> = all.iter().map(&translate).collect();
            let upsets: Vec<BTreeSet<usize>> = iso.x.upsets().unwrap_or_default();
            if images.len() != upsets.len() {
                failures.push(json!({
                    "defect": "carrier sizes differ",
                    "downsets": images.len(),
                    "upsets": upsets.len(),
                }));
            }
            for u in &upsets {
                if !images.contains(u) {
                    failures.push(json!({"defect": "not surjective onto upsets"}));
                    break;
                }
            }
            for (i, d1) in all.iter().enumerate() {
                for (j, d2) in all.iter().enumerate() {
                    let le_src = d1.le(d2).expect("same base");
                    let le_img = images[i].is_subset(&images[j]);
                    if le_src != le_img {
                        failures.push(json!({
                            "defect": "order not preserved and reflected",
                            "left": d1.members().iter().collect::<Vec<_>>(),
                            "right": d2.members().iter().collect::<Vec<_>>(),
                        }));
                    }
                }
            }
        }
        Err(e) => failures.push(json!({"defect": format!("enumeration skipped: {e}")})),
    }
    checks.push(CheckResult::from_failures(
        "frame-order-isomorphism",
        json!({}),
        failures,
    ));

    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atom() -> FinBoolAlg {
        FinBoolAlg::new(vec!["p".into(), "q".into()]).unwrap()
    }

    #[test]
    fn filters_of_the_two_element_algebra() {
        let b = FinBoolAlg::with_atom_count(1).unwrap();
        let filt = filter_semilattice(&b).unwrap();
        assert_eq!(filt.len(), 2);
        assert_eq!(filt.label(filt.bottom()), "^{}");
        assert_eq!(filt.label(filt.top()), "^{a1}");
        assert_eq!(filter_members(&b, 0), vec![0, 1]);
        assert_eq!(filter_members(&b, 1), vec![1]);
    }

    #[test]
    fn filter_semilattice_meet_is_generated_filter() {
        let b = two_atom();
        let filt = filter_semilattice(&b).unwrap();
        // meet of up(p) and up(q) is the filter generated by their union,
        // namely up(p /\ q) = up(0) = B
        let p = b.atom(0) as usize;
        let q = b.atom(1) as usize;
        assert_eq!(filt.meet(p, q), filt.bottom());
        assert_eq!(filt.join(p, q), b.top() as usize);
    }

    #[test]
    fn proper_filter_space_of_two_atoms_is_a_vee() {
        let b = two_atom();
        let x = proper_filter_poset(&b).unwrap();
        assert_eq!(x.len(), 3);
        // up(1) = {1} is the bottom: contained in every proper filter
        let top_filter = (b.top() - 1) as usize;
        assert_eq!(x.minimal_elements(), vec![top_filter]);
        assert_eq!(x.maximal_elements().len(), 2);
        // and it is literally the vee shape
        assert_eq!(x.covers().len(), 2);
    }

    #[test]
    fn three_atoms_give_seven_proper_filters() {
        let b = FinBoolAlg::with_atom_count(3).unwrap();
        assert_eq!(proper_filter_poset(&b).unwrap().len(), 7);
    }

    #[test]
    fn free_frame_over_two_atom_filters_has_five_downsets() {
        // base = three nontrivial filters; its downsets, equivalently the
        // upsets of the proper-filter vee, number five
        let b = two_atom();
        let ext = canonical_extension_ba(&b).unwrap();
        assert_eq!(ext.frame().base().len(), 3);
        assert_eq!(ext.frame().all_elements().unwrap().len(), 5);
        assert_eq!(
            proper_filter_poset(&b).unwrap().upsets().unwrap().len(),
            5
        );
    }

    #[test]
    fn extension_sizes_match_the_algebra() {
        for atoms in 1..=4 {
            let b = FinBoolAlg::with_atom_count(atoms).unwrap();
            let ext = canonical_extension_ba(&b).unwrap();
            assert_eq!(ext.extension().len() as u64, b.size());
        }
    }

    #[test]
    fn embedding_satisfies_the_pseudocomplement_identity() {
        // i(up(b))* = i(up(-b))
        let b = two_atom();
        let ext = canonical_extension_ba(&b).unwrap();
        for x in b.elements() {
            assert_eq!(
                ext.e(x).pseudocomplement(),
                *ext.e(b.not(x)),
                "at {}",
                b.element_label(x)
            );
        }
    }

    #[test]
    fn generator_meet_identity_from_two_atoms() {
        // i(up p) /\ i(up q) = i(up(p /\ q)) = bottom
        let b = two_atom();
        let ext = canonical_extension_ba(&b).unwrap();
        let m = ext
            .e(b.atom(0))
            .meet(ext.e(b.atom(1)))
            .unwrap();
        assert!(m.is_bottom());
    }

    #[test]
    fn verification_all_green_up_to_three_atoms() {
        for atoms in 1..=3 {
            let b = FinBoolAlg::with_atom_count(atoms).unwrap();
            let ext = canonical_extension_ba(&b).unwrap();
            let checks = verify_canonical_ba(&ext, CompactnessMode::Exhaustive);
            for c in &checks {
                assert!(c.pass, "atoms={atoms} check `{}`: {}", c.name, c.witness);
            }
        }
    }

    #[test]
    fn compactness_families_include_the_complement_pair() {
        let b = two_atom();
        let ext = canonical_extension_ba(&b).unwrap();
        // S = {p, -p}: both meets are bottom
        let p = b.atom(0);
        let family = [p, b.not(p)];
        let ext_meet = ext.bools.meet_all(family.iter().map(|&x| ext.e(x)));
        assert!(ext_meet.is_bottom());
        assert_eq!(b.meet_all(family.iter().copied()), b.bottom());
        // S empty: meets are the tops
        assert!(ext.bools.meet_all(std::iter::empty()).is_top());
    }

    #[test]
    fn ro_iso_matches_on_two_atoms() {
        let b = two_atom();
        let ext = canonical_extension_ba(&b).unwrap();
        let iso = ro_iso(&ext).unwrap();
        assert_eq!(iso.regular_open_algebra().len() as u64, b.size());
        // phi(e(p)) = { up(p) }
        let p = b.atom(0);
        let ext_index = ext.bools.index_of(ext.e(p)).unwrap();
        let image = iso.image(ext_index);
        assert_eq!(image.len(), 1);
        assert_eq!(
            iso.space().label(*image.iter().next().unwrap()),
            "^{p}"
        );
        for c in verify_ro_iso(&ext, &iso) {
            assert!(c.pass, "check `{}`: {}", c.name, c.witness);
        }
    }

    #[test]
    fn one_atom_pipeline_degenerates_correctly() {
        let b = FinBoolAlg::with_atom_count(1).unwrap();
        let ext = canonical_extension_ba(&b).unwrap();
        assert_eq!(ext.extension().len(), 2);
        let iso = ro_iso(&ext).unwrap();
        for c in verify_ro_iso(&ext, &iso) {
            assert!(c.pass, "check `{}`: {}", c.name, c.witness);
        }
    }
}
