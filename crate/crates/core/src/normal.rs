//! Normal functions on a finite poset: rational-valued functions fixed by
//! the upper-then-lower envelope.  They form the Dedekind completion of
//! the order-preserving functions; their multiplicative idempotents are
//! exactly the indicators of regular open up-sets, and over the space of
//! proper ideals of `Q^n` they realize the canonical extension concretely.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::Zero;
use serde_json::json;

use crate::balcan::CanExtContext;
use crate::error::{Error, Result};
use crate::lalg::{LIdeal, LVec};
use crate::poset::{regular_opens, FinPoset, RegularOpenAlgebra};
use crate::rat::{self, Rat};
use crate::report::CheckResult;
use crate::specker::{ortho_decomp, OrthoPart};
use crate::ENUMERATION_CAP;

/// A rational-valued function on a finite poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFn {
    poset: Arc<FinPoset>,
    values: Vec<Rat>,
}

impl NormalFn {
    pub fn new(poset: Arc<FinPoset>, values: Vec<Rat>) -> Result<NormalFn> {
        if values.len() != poset.len() {
            return Err(Error::BadInput(format!(
                "{} values for a poset of {} points",
                values.len(),
                poset.len()
            )));
        }
        Ok(NormalFn { poset, values })
    }

    pub fn constant(poset: Arc<FinPoset>, r: Rat) -> NormalFn {
        let n = poset.len();
        NormalFn {
            poset,
            values: vec![r; n],
        }
    }

    /// The indicator of a subset.
    pub fn indicator(poset: Arc<FinPoset>, members: &BTreeSet<usize>) -> NormalFn {
        let values = (0..poset.len())
            .map(|i| {
                if members.contains(&i) {
                    rat::int(1)
                } else {
                    Rat::zero()
                }
            })
            .collect();
        NormalFn { poset, values }
    }

    pub fn poset(&self) -> &Arc<FinPoset> {
        &self.poset
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rat {
        &self.values[i]
    }

    fn same_poset(&self, other: &NormalFn) -> Result<()> {
        if Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset {
            Ok(())
        } else {
            Err(Error::PosetMismatch)
        }
    }

    fn wrap(&self, values: Vec<Rat>) -> NormalFn {
        NormalFn {
            poset: Arc::clone(&self.poset),
            values,
        }
    }

    fn envelope(&self, prefer: impl Fn(&Rat, &Rat) -> bool) -> NormalFn {
        let n = self.poset.len();
        let values = (0..n)
            .map(|i| {
                let mut best = &self.values[i];
                for j in 0..n {
                    if self.poset.le(i, j) && prefer(&self.values[j], best) {
                        best = &self.values[j];
                    }
                }
                best.clone()
            })
            .collect();
        self.wrap(values)
    }

    /// The upper envelope: the maximum over the up-set of each point.
    pub fn upper(&self) -> NormalFn {
        self.envelope(|candidate, best| candidate > best)
    }

    /// The lower envelope: the minimum over the up-set of each point.
    pub fn lower(&self) -> NormalFn {
        self.envelope(|candidate, best| candidate < best)
    }

    /// The normalization: the lower envelope of the upper envelope.
    pub fn normalize(&self) -> NormalFn {
        self.upper().lower()
    }

    pub fn is_normal(&self) -> bool {
        self == &self.normalize()
    }

    /// Order preservation along the poset.
    pub fn is_order_preserving(&self) -> bool {
        let n = self.poset.len();
        (0..n).all(|i| (0..n).all(|j| !self.poset.le(i, j) || self.values[i] <= self.values[j]))
    }

    /// Lower semicontinuity in the up-set topology: every strict
    /// superlevel set is open.
    pub fn is_lower_semicontinuous(&self) -> bool {
        let mut cuts: Vec<&Rat> = self.values.iter().collect();
        cuts.sort();
        cuts.dedup();
        cuts.into_iter().all(|r| {
            let superlevel: BTreeSet<usize> = (0..self.poset.len())
                .filter(|&i| &self.values[i] > r)
                .collect();
            self.poset.is_upset(&superlevel)
        })
    }

    fn zip(&self, other: &NormalFn, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<NormalFn> {
        self.same_poset(other)?;
        Ok(self.wrap(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        ))
    }

    /// Pointwise operations, then normalization: the operations of the
    /// algebra of normal functions.
    pub fn add(&self, other: &NormalFn) -> Result<NormalFn> {
        Ok(self.zip(other, |a, b| a + b)?.normalize())
    }

    pub fn mul(&self, other: &NormalFn) -> Result<NormalFn> {
        Ok(self.zip(other, |a, b| a * b)?.normalize())
    }

    pub fn meet(&self, other: &NormalFn) -> Result<NormalFn> {
        Ok(self.zip(other, |a, b| a.min(b).clone())?.normalize())
    }

    pub fn join(&self, other: &NormalFn) -> Result<NormalFn> {
        Ok(self.zip(other, |a, b| a.max(b).clone())?.normalize())
    }

    pub fn scale(&self, r: &Rat) -> NormalFn {
        self.wrap(self.values.iter().map(|v| v * r).collect()).normalize()
    }

    pub fn le(&self, other: &NormalFn) -> Result<bool> {
        self.same_poset(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a <= b))
    }
}

/// All functions on the poset taking values in the given grid, for
/// exhaustive checks; errors past the enumeration cap.
pub fn functions_on_grid(poset: &Arc<FinPoset>, grid: &[Rat]) -> Result<Vec<NormalFn>> {
    let n = poset.len();
    let total = (grid.len() as u64).checked_pow(n as u32);
    match total {
        Some(t) if t <= ENUMERATION_CAP as u64 => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "function enumeration".into(),
                size: total.unwrap_or(u64::MAX),
                cap: ENUMERATION_CAP as u64,
            })
        }
    }
    let mut out = Vec::new();
    let k = grid.len();
    let mut index = vec![0usize; n];
    loop {
        out.push(NormalFn {
            poset: Arc::clone(poset),
            values: index.iter().map(|&d| grid[d].clone()).collect(),
        });
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(out);
            }
            index[pos] += 1;
            if index[pos] < k {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// Verifies the structural facts about normal functions on one poset:
/// normalization is an idempotent envelope, lower semicontinuity is order
/// preservation is being a fixed point of the lower envelope (exhaustively
/// over three-valued functions), the normalized operations stay normal,
/// and the multiplicative idempotents are exactly the indicators of the
/// regular open sets.
pub fn verify_normal_structure(poset: &Arc<FinPoset>) -> Result<Vec<CheckResult>> {
    let grid = [Rat::zero(), rat::rat(1, 2), rat::int(1)];
    let fns = functions_on_grid(poset, &grid)?;
    let ro = regular_opens(Arc::clone(poset))?;
    let mut checks = Vec::new();

    let mut failures = Vec::new();
    for f in &fns {
        let n1 = f.normalize();
        if n1.normalize() != n1 {
            failures.push(json!({ "values": values_json(f) }));
        }
        if !n1.is_normal() {
            failures.push(json!({ "values": values_json(f), "law": "fixed-point" }));
        }
        // the normalization bounds: lower envelope <= normalization <= upper
        if !(f.lower().le(&n1)? && n1.le(&f.upper())?) {
            failures.push(json!({ "values": values_json(f), "law": "between-envelopes" }));
        }
    }
    checks.push(CheckResult::from_failures(
        "normalization-idempotent",
        json!({ "functions": fns.len(), "poset": poset.labels() }),
        failures,
    ));

    let mut failures = Vec::new();
    for f in &fns {
        let fixed = f == &f.lower();
        let mono = f.is_order_preserving();
        let lsc = f.is_lower_semicontinuous();
        if fixed != mono || mono != lsc {
            failures.push(json!({
                "values": values_json(f),
                "lowerFixed": fixed,
                "orderPreserving": mono,
                "lowerSemicontinuous": lsc,
            }));
        }
    }
    checks.push(CheckResult::from_failures(
        "semicontinuity-is-monotonicity",
        json!({ "functions": fns.len() }),
        failures,
    ));

    // normalized operations keep the family closed, on a subsample
    let mut failures = Vec::new();
    let step = (fns.len() / 24).max(1);
    let sample: Vec<&NormalFn> = fns.iter().step_by(step).collect();
    for f in &sample {
        for g in &sample {
            for h in [f.add(g)?, f.mul(g)?, f.meet(g)?, f.join(g)?] {
                if !h.is_normal() {
                    failures.push(json!({
                        "left": values_json(f),
                        "right": values_json(g),
                    }));
                }
            }
        }
    }
    checks.push(CheckResult::from_failures(
        "operations-stay-normal",
        json!({ "samplePairs": sample.len() * sample.len() }),
        failures,
    ));

    // idempotents among all grid functions = indicators of regular opens
    let mut found: Vec<Vec<Rat>> = Vec::new();
    for f in &fns {
        if f.is_normal() && &f.mul(f)? == f {
            found.push(f.values().to_vec());
        }
    }
    let expected: Vec<Vec<Rat>> = ro
        .elements()
        .iter()
        .map(|u| NormalFn::indicator(Arc::clone(poset), u).values().to_vec())
        .collect();
    let mut failures = Vec::new();
    for v in &found {
        if !expected.contains(v) {
            failures.push(json!({ "extraIdempotent": rat_vec_json(v) }));
        }
    }
    for v in &expected {
        if !found.contains(v) {
            failures.push(json!({ "missingIdempotent": rat_vec_json(v) }));
        }
    }
    checks.push(CheckResult::from_failures(
        "idempotents-are-regular-open-indicators",
        json!({ "found": found.len(), "regularOpens": expected.len() }),
        failures,
    ));

    Ok(checks)
}

fn values_json(f: &NormalFn) -> serde_json::Value {
    rat_vec_json(f.values())
}

fn rat_vec_json(v: &[Rat]) -> serde_json::Value {
    json!(v.iter().map(rat::format).collect::<Vec<_>>())
}

/// The space of proper ideals of `Q^dim` under inclusion, indexed by
/// zero-set mask minus one.
pub fn ideal_space(dim: usize) -> Result<Arc<FinPoset>> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if dim > 10 {
        return Err(Error::CapExceeded {
            what: "ideal space".into(),
            size: (1u64 << dim) - 1,
            cap: (1 << 10) - 1,
        });
    }
    let n = (1usize << dim) - 1;
    let labels: Vec<String> = (1..=n as u64)
        .map(|m| LIdeal::new(dim, m).expect("mask in range").label())
        .collect();
    let mut le = vec![false; n * n];
    for z in 1..=n as u64 {
        for w in 1..=n as u64 {
            // larger ideals vanish on fewer coordinates
            le[(z as usize - 1) * n + (w as usize - 1)] = w & !z == 0;
        }
    }
    Ok(Arc::new(FinPoset::from_le_matrix(labels, le)?))
}

/// The index of a proper ideal in the ideal space.
pub fn space_index(ideal: &LIdeal) -> Result<usize> {
    if !ideal.is_proper() {
        return Err(Error::BadInput(
            "the whole algebra is not a point of the ideal space".into(),
        ));
    }
    Ok(ideal.zero_mask() as usize - 1)
}

/// The ideal at a space index.
pub fn space_ideal(dim: usize, index: usize) -> Result<LIdeal> {
    LIdeal::new(dim, index as u64 + 1)
}

/// The up-set of an ideal in the space: the proper ideals containing it.
pub fn up_region(dim: usize, ideal: &LIdeal) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for index in 0..(1usize << dim) - 1 {
        if ideal.le(&space_ideal(dim, index)?) {
            out.insert(index);
        }
    }
    Ok(out)
}

/// The complementary region: the proper ideals whose zero set misses the
/// ideal's zero set entirely.
pub fn complement_region(dim: usize, ideal: &LIdeal) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for index in 0..(1usize << dim) - 1 {
        if space_ideal(dim, index)?.zero_mask() & ideal.zero_mask() == 0 {
            out.insert(index);
        }
    }
    Ok(out)
}

/// The boolean-extension image of each element of the extension algebra as
/// a regular open set of the ideal space, with the up-set regions of the
/// ideals as the images of the lattice generators.
pub fn extension_regions(ctx: &CanExtContext) -> Result<(RegularOpenAlgebra, Vec<BTreeSet<usize>>)> {
    let dim = ctx.dim();
    let space = ideal_space(dim)?;
    let ro = regular_opens(Arc::clone(&space))?;
    // the lattice generator at a frame element: the complement region of
    // the ideal (proper ideals disjoint from it), which is regular open
    let lattice = ctx.frame().lattice();
    let mut lambda = Vec::with_capacity(lattice.len());
    for index in 0..lattice.len() {
        let ideal = ctx.frame().ideal(index);
        let region = complement_region(dim, &ideal)?;
        if ro.index_of(&region).is_none() {
            return Err(Error::BadInput(format!(
                "complement region of {} is not regular open",
                ideal.label()
            )));
        }
        lambda.push(region);
    }
    let table = ctx.boolext().extend_morphism(&ro, &lambda)?;
    Ok((ro, table))
}

/// The concrete isomorphism from the Specker extension to normal functions:
/// decompose, send each idempotent to the indicator of its region, and
/// normalize the weighted sum.
pub fn phi(regions: &[BTreeSet<usize>], space: &Arc<FinPoset>, v: &LVec) -> Result<NormalFn> {
    let parts = ortho_decomp(v);
    let mut f = NormalFn::constant(Arc::clone(space), Rat::zero());
    for OrthoPart { value, mask } in parts {
        let indicator = NormalFn::indicator(Arc::clone(space), &regions[mask as usize]);
        f = NormalFn::new(
            Arc::clone(space),
            f.values()
                .iter()
                .zip(indicator.values())
                .map(|(a, b)| a + &(b * &value))
                .collect(),
        )?;
    }
    Ok(f.normalize())
}

/// The closed form of the composite map from `Q^n` to normal functions:
/// the value at a proper ideal is the minimum coordinate on its zero set.
pub fn gamma(dim: usize, space: &Arc<FinPoset>, a: &LVec) -> Result<NormalFn> {
    if a.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: a.dim(),
        });
    }
    let values = (0..space.len())
        .map(|index| {
            let ideal = space_ideal(dim, index)?;
            Ok(ideal
                .zero_set()
                .iter()
                .map(|&i| a.coord(i).clone())
                .min()
                .expect("proper ideals have nonempty zero sets"))
        })
        .collect::<Result<Vec<_>>>()?;
    NormalFn::new(Arc::clone(space), values)
}

/// The same map recomputed by bisection: at each ideal, the largest grid
/// rational `r` with `(a - r)-` in the ideal, after shifting `a` up to be
/// nonnegative.
pub fn gamma_by_bisection(dim: usize, space: &Arc<FinPoset>, a: &LVec) -> Result<NormalFn> {
    let shift = rat::ceil_nonneg(&a.neg_part().norm());
    let b = a.shift(&shift);
    let denom = rat::denominator_lcm(b.coords());
    let upper = b.norm() + rat::int(1);
    let values = (0..space.len())
        .map(|index| {
            let ideal = space_ideal(dim, index)?;
            rat::sup_on_grid(&denom, &upper, |r| {
                ideal.contains(&b.shift(&-r.clone()).neg_part())
            })
            .map(|r| r - &shift)
            .ok_or_else(|| Error::BadInput("no grid value below the shifted vector".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    NormalFn::new(Arc::clone(space), values)
}

/// Restriction of a normal function to the maximal ideals (the singleton
/// zero sets), as a vector.  Errors unless the function is normal.
pub fn psi(dim: usize, f: &NormalFn) -> Result<LVec> {
    if !f.is_normal() {
        return Err(Error::NotNormal);
    }
    LVec::new(
        (0..dim)
            .map(|i| {
                let ideal = LIdeal::maximal_at(dim, i);
                Ok(f.value(space_index(&ideal)?).clone())
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

/// The inverse of the restriction: extend a vector to the whole space by
/// minima over zero sets, which is exactly the closed-form map.
pub fn psi_inv(dim: usize, space: &Arc<FinPoset>, h: &LVec) -> Result<NormalFn> {
    gamma(dim, space, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn vee() -> Arc<FinPoset> {
        Arc::new(FinPoset::vee())
    }

    fn f(poset: &Arc<FinPoset>, vals: &[i64]) -> NormalFn {
        NormalFn::new(
            Arc::clone(poset),
            vals.iter().map(|&v| int(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn envelopes_on_the_vee() {
        let p = vee();
        // order of points: bottom, then the two tops
        let g = f(&p, &[1, 1, 2]);
        assert_eq!(g.upper(), f(&p, &[2, 1, 2]));
        assert_eq!(g.lower(), f(&p, &[1, 1, 2]));
        assert_eq!(g.normalize(), g);
        assert!(g.is_normal());
    }

    #[test]
    fn indicator_of_the_bottom_normalizes_to_zero() {
        let p = vee();
        let g = f(&p, &[1, 0, 0]);
        assert_eq!(g.upper(), f(&p, &[1, 0, 0]));
        assert_eq!(g.normalize(), f(&p, &[0, 0, 0]));
        assert!(!g.is_normal());
    }

    #[test]
    fn envelope_inequalities_hold_exhaustively() {
        let p = vee();
        let grid = [Rat::zero(), rat(1, 2), int(1)];
        for g in functions_on_grid(&p, &grid).unwrap() {
            assert!(g.lower().le(&g).unwrap());
            assert!(g.le(&g.upper()).unwrap());
            assert!(g.normalize().is_normal());
        }
    }

    #[test]
    fn structure_checks_pass_on_small_posets() {
        for p in [
            Arc::new(FinPoset::chain(3)),
            Arc::new(FinPoset::antichain(2)),
            vee(),
            Arc::new(FinPoset::diamond()),
        ] {
            for c in verify_normal_structure(&p).unwrap() {
                assert!(c.pass, "{} failed on {:?}: {}", c.name, p.labels(), c.witness);
            }
        }
    }

    #[test]
    fn mismatched_posets_are_rejected() {
        let a = f(&vee(), &[0, 0, 0]);
        let b = f(&Arc::new(FinPoset::chain(3)), &[0, 0, 0]);
        assert!(matches!(a.add(&b), Err(Error::PosetMismatch)));
    }

    #[test]
    fn ideal_space_orders_by_inclusion() {
        let space = ideal_space(2).unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(space.labels(), &["I{1}", "I{2}", "I{1,2}"]);
        // the zero ideal I{1,2} sits below both maximal ideals
        let bottom = space.index_of("I{1,2}").unwrap();
        assert_eq!(space.up_set(bottom).len(), 3);
        assert_eq!(space.maximal_elements().len(), 2);

        let space3 = ideal_space(3).unwrap();
        assert_eq!(space3.len(), 7);
        assert_eq!(space3.maximal_elements().len(), 3);
    }

    #[test]
    fn regions_are_complementary_regular_opens() {
        let dim = 3;
        let space = ideal_space(dim).unwrap();
        let ro = regular_opens(Arc::clone(&space)).unwrap();
        for mask in 1..(1u64 << dim) {
            let ideal = LIdeal::new(dim, mask).unwrap();
            let up = up_region(dim, &ideal).unwrap();
            let co = complement_region(dim, &ideal).unwrap();
            assert!(ro.index_of(&up).is_some(), "up region of {}", ideal.label());
            assert!(ro.index_of(&co).is_some(), "complement region of {}", ideal.label());
            // they are complements in the regular open algebra
            assert_eq!(ro.complement(&up), co, "at {}", ideal.label());
            assert_eq!(ro.complement(&co), up, "at {}", ideal.label());
        }
    }

    #[test]
    fn extension_sends_ideal_idempotents_to_up_regions() {
        let ctx = CanExtContext::new(3).unwrap();
        let (_, regions) = extension_regions(&ctx).unwrap();
        for mask in 1..(1u64 << 3) {
            let ideal = LIdeal::new(3, mask).unwrap();
            let b = ctx.b_of_ideal(&ideal);
            assert_eq!(
                regions[b as usize],
                complement_region(3, &ideal).unwrap(),
                "generator at {}",
                ideal.label()
            );
            let not_b = ctx.boolext().algebra().not(b);
            assert_eq!(
                regions[not_b as usize],
                up_region(3, &ideal).unwrap(),
                "complement at {}",
                ideal.label()
            );
        }
    }

    #[test]
    fn gamma_closed_form_on_a_fixed_vector() {
        let space = ideal_space(2).unwrap();
        let a = LVec::from_i64(&[1, 2]);
        let g = gamma(2, &space, &a).unwrap();
        assert_eq!(g.values(), &[int(1), int(2), int(1)]);
        assert!(g.is_normal());
        assert_eq!(g, gamma_by_bisection(2, &space, &a).unwrap());
    }

    #[test]
    fn gamma_matches_bisection_on_mixed_vectors() {
        let space = ideal_space(3).unwrap();
        let samples = [
            LVec::from_i64(&[-2, 0, 5]),
            LVec::new(vec![rat(1, 2), rat(-7, 3), int(4)]).unwrap(),
            LVec::zero(3),
        ];
        for a in &samples {
            let g = gamma(3, &space, a).unwrap();
            assert!(g.is_normal());
            assert_eq!(g, gamma_by_bisection(3, &space, a).unwrap());
        }
    }

    #[test]
    fn restriction_inverts_the_extension() {
        let space = ideal_space(2).unwrap();
        let h = LVec::from_i64(&[0, 5]);
        let g = psi_inv(2, &space, &h).unwrap();
        assert_eq!(g.values(), &[int(0), int(5), int(0)]);
        assert_eq!(psi(2, &g).unwrap(), h);
        // the indicator of the bottom ideal is not normal and is rejected
        let bad = NormalFn::new(
            Arc::clone(&space),
            vec![int(0), int(0), int(1)],
        )
        .unwrap();
        assert!(!bad.is_normal());
        assert!(matches!(psi(2, &bad), Err(Error::NotNormal)));
    }

    #[test]
    fn phi_agrees_with_gamma_through_theta() {
        let ctx = CanExtContext::new(2).unwrap();
        let space = ideal_space(2).unwrap();
        let (_, regions) = extension_regions(&ctx).unwrap();
        let samples = [
            LVec::from_i64(&[1, 2]),
            LVec::from_i64(&[-3, 0]),
            LVec::new(vec![rat(1, 2), rat(5, 3)]).unwrap(),
        ];
        for a in &samples {
            let image = ctx.alpha(a).unwrap();
            let via_phi = phi(&regions, &space, &image).unwrap();
            let via_gamma = gamma(2, &space, a).unwrap();
            assert_eq!(via_phi, via_gamma, "at {:?}", a);
            // and restriction recovers the vector
            assert_eq!(psi(2, &via_phi).unwrap(), *a);
        }
    }
}
