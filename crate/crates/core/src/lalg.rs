//! The finite-dimensional bounded archimedean lattice-ordered algebra
//! `Q^n` with coordinatewise operations, and its lattice ideals.
//!
//! Every lattice ideal of `Q^n` is a coordinate ideal — the vectors
//! vanishing on a fixed index set — and every such ideal is archimedean.
//! The ideals form a boolean frame under inclusion; the maximal proper
//! ideals (one vanishing coordinate) make up the Yosida space, and
//! evaluation at them is the identity on coordinates.

use std::collections::BTreeSet;
use std::ops::{Add, Mul, Neg, Sub};

use num::{Signed, Zero};

use crate::boolalg::FinBoolAlg;
use crate::error::{Error, Result};
use crate::fault;
use crate::lattice::FinDistLattice;
use crate::poset::FinPoset;
use crate::rat::{self, Rat};

/// Maximum dimension; keeps the `2^dim` coordinate ideals enumerable.
pub const MAX_DIM: usize = 16;

/// An element of `Q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LVec {
    coords: Vec<Rat>,
}

impl LVec {
    pub fn new(coords: Vec<Rat>) -> Result<LVec> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if coords.len() > MAX_DIM {
            return Err(Error::CapExceeded {
                what: "vector dimension".into(),
                size: coords.len() as u64,
                cap: MAX_DIM as u64,
            });
        }
        Ok(LVec { coords })
    }

    pub fn from_i64(coords: &[i64]) -> LVec {
        LVec::new(coords.iter().map(|&c| rat::int(c)).collect()).expect("nonempty")
    }

    pub fn constant(dim: usize, r: Rat) -> LVec {
        LVec::new(vec![r; dim]).expect("dim checked by caller")
    }

    pub fn zero(dim: usize) -> LVec {
        LVec::constant(dim, Rat::zero())
    }

    pub fn one(dim: usize) -> LVec {
        LVec::constant(dim, rat::int(1))
    }

    /// The standard basis vector with 1 in coordinate `i`.
    pub fn unit(dim: usize, i: usize) -> LVec {
        let mut v = LVec::zero(dim);
        v.coords[i] = rat::int(1);
        v
    }

    /// Characteristic vector of a coordinate mask.
    pub fn indicator(dim: usize, mask: u64) -> LVec {
        LVec::new(
            (0..dim)
                .map(|i| if mask >> i & 1 == 1 { rat::int(1) } else { Rat::zero() })
                .collect(),
        )
        .expect("dim checked by caller")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rat {
        &self.coords[i]
    }

    fn zip(&self, other: &LVec, f: impl Fn(&Rat, &Rat) -> Rat) -> LVec {
        assert_eq!(self.dim(), other.dim(), "operands must share a dimension");
        LVec {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn map(&self, f: impl Fn(&Rat) -> Rat) -> LVec {
        LVec {
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn meet(&self, other: &LVec) -> LVec {
        self.zip(other, |a, b| a.min(b).clone())
    }

    pub fn join(&self, other: &LVec) -> LVec {
        self.zip(other, |a, b| a.max(b).clone())
    }

    pub fn scale(&self, r: &Rat) -> LVec {
        self.map(|c| c * r)
    }

    /// Adds the scalar `r` to every coordinate (`a + r·1`).
    pub fn shift(&self, r: &Rat) -> LVec {
        self.map(|c| c + r)
    }

    /// `a+ = a \/ 0`.
    pub fn pos_part(&self) -> LVec {
        self.map(|c| c.max(&Rat::zero()).clone())
    }

    /// `a- = (-a) \/ 0`.
    pub fn neg_part(&self) -> LVec {
        self.map(|c| (-c).max(Rat::zero()))
    }

    /// `|a| = a \/ (-a)`.
    pub fn abs(&self) -> LVec {
        self.map(|c| c.abs())
    }

    /// The uniform norm: the least `r` with `|a| <= r·1`, which is the
    /// largest coordinate of `|a|`.
    pub fn norm(&self) -> Rat {
        self.coords
            .iter()
            .map(|c| c.abs())
            .max()
            .expect("nonempty")
    }

    /// Coordinatewise order.
    pub fn le(&self, other: &LVec) -> bool {
        assert_eq!(self.dim(), other.dim(), "operands must share a dimension");
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// 0/1 vector test: `a · a = a`.
    pub fn is_idempotent(&self) -> bool {
        self.coords
            .iter()
            .all(|c| c.is_zero() || c == &rat::int(1))
    }

    /// Mask of nonzero coordinates.
    pub fn support_mask(&self) -> u64 {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(0u64, |m, (i, _)| m | 1 << i)
    }
}

impl Add for &LVec {
    type Output = LVec;
    fn add(self, rhs: &LVec) -> LVec {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &LVec {
    type Output = LVec;
    fn sub(self, rhs: &LVec) -> LVec {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for &LVec {
    type Output = LVec;
    fn mul(self, rhs: &LVec) -> LVec {
        self.zip(rhs, |a, b| a * b)
    }
}

impl Neg for &LVec {
    type Output = LVec;
    fn neg(self) -> LVec {
        self.map(|c| -c)
    }
}

/// The four standard decomposition data of a vector.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub pos: LVec,
    pub neg: LVec,
    pub abs: LVec,
    pub norm: Rat,
}

/// Positive part, negative part, absolute value and uniform norm.
pub fn decompose(a: &LVec) -> Decomposition {
    Decomposition {
        pos: a.pos_part(),
        neg: a.neg_part(),
        abs: a.abs(),
        norm: a.norm(),
    }
}

/// A coordinate ideal of `Q^n`: the vectors vanishing on `zero set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LIdeal {
    dim: usize,
    zero_mask: u64,
}

impl LIdeal {
    pub fn new(dim: usize, zero_mask: u64) -> Result<LIdeal> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if dim > MAX_DIM {
            return Err(Error::CapExceeded {
                what: "ideal dimension".into(),
                size: dim as u64,
                cap: MAX_DIM as u64,
            });
        }
        if zero_mask >> dim != 0 {
            return Err(Error::BadInput(format!(
                "zero set exceeds dimension {dim}"
            )));
        }
        Ok(LIdeal { dim, zero_mask })
    }

    pub fn from_zero_set(dim: usize, zero_set: &BTreeSet<usize>) -> Result<LIdeal> {
        let mut mask = 0u64;
        for &i in zero_set {
            if i >= dim {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    size: dim,
                });
            }
            mask |= 1 << i;
        }
        LIdeal::new(dim, mask)
    }

    /// The whole algebra, as the ideal with empty zero set.
    pub fn unit(dim: usize) -> LIdeal {
        LIdeal {
            dim,
            zero_mask: 0,
        }
    }

    /// The zero ideal: everything vanishes.
    pub fn zero(dim: usize) -> LIdeal {
        LIdeal {
            dim,
            zero_mask: (1u64 << dim) - 1,
        }
    }

    /// The maximal ideal of vectors vanishing at coordinate `i`.
    pub fn maximal_at(dim: usize, i: usize) -> LIdeal {
        LIdeal {
            dim,
            zero_mask: 1 << i,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero_mask(&self) -> u64 {
        self.zero_mask
    }

    pub fn zero_set(&self) -> BTreeSet<usize> {
        (0..self.dim).filter(|&i| self.zero_mask >> i & 1 == 1).collect()
    }

    pub fn contains(&self, a: &LVec) -> bool {
        assert_eq!(a.dim(), self.dim, "ideal and vector dimensions differ");
        a.support_mask() & self.zero_mask == 0
    }

    /// Ideal inclusion: vanishing on more coordinates means a smaller ideal.
    pub fn le(&self, other: &LIdeal) -> bool {
        other.zero_mask & !self.zero_mask == 0
    }

    pub fn is_proper(&self) -> bool {
        self.zero_mask != 0
    }

    /// `I + J`: sums of members, again a coordinate ideal (common zeros).
    pub fn sum(&self, other: &LIdeal) -> LIdeal {
        LIdeal {
            dim: self.dim,
            zero_mask: self.zero_mask & other.zero_mask,
        }
    }

    /// `I /\ J = I` intersect `J`.
    pub fn intersect(&self, other: &LIdeal) -> LIdeal {
        LIdeal {
            dim: self.dim,
            zero_mask: self.zero_mask | other.zero_mask,
        }
    }

    pub fn label(&self) -> String {
        let mut s = String::from("I{");
        s.push_str(
            &self
                .zero_set()
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        s.push('}');
        s
    }
}

/// The smallest lattice ideal containing every generator: vectors vanishing
/// wherever all generators vanish.
pub fn lideal_generated(dim: usize, generators: &[LVec]) -> Result<LIdeal> {
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: g.dim(),
            });
        }
    }
    let common_zero = generators
        .iter()
        .fold((1u64 << dim) - 1, |m, g| m & !g.support_mask());
    LIdeal::new(dim, common_zero)
}

/// Membership in the ideal generated by a single element: `|x| <= n |a|`
/// for some multiplier `n >= 1`.  Returns a witness multiplier.
pub fn dominated_by_multiple(x: &LVec, a: &LVec) -> Option<u64> {
    assert_eq!(x.dim(), a.dim(), "operands must share a dimension");
    let mut n = 1u64;
    for (xi, ai) in x.coords().iter().zip(a.coords()) {
        if ai.is_zero() {
            if !xi.is_zero() {
                return None;
            }
        } else {
            let needed = rat::ceil_nonneg(&(xi.abs() / ai.abs()));
            let needed = num::ToPrimitive::to_u64(&needed.to_integer()).unwrap_or(u64::MAX);
            n = n.max(needed.max(1));
        }
    }
    Some(n)
}

/// Membership in the ideal generated by a finite set, through the single
/// combined bound `|x| <= n (|a_1| + ... + |a_k|)`.
pub fn generated_contains(generators: &[LVec], x: &LVec) -> bool {
    if generators.is_empty() {
        return x.is_zero();
    }
    let total = generators
        .iter()
        .map(LVec::abs)
        .reduce(|a, b| &a + &b)
        .expect("nonempty");
    dominated_by_multiple(x, &total).is_some()
}

/// Does `(n |x| - 1)+` belong to `ideal` for every multiplier `n >= 1`?
///
/// Over the rationals the quantifier collapses: the clamped multiples all
/// vanish on a coordinate exactly when the coordinate itself is zero, since
/// no nonzero rational has all its multiples below 1.  The fault hook
/// replaces the clause with a constant `true` to model an implementation
/// that forgot it.
pub fn clamped_multiples_in_ideal(ideal: &LIdeal, x: &LVec) -> bool {
    if fault::is(fault::Fault::HullSkipClause) {
        return true;
    }
    ideal
        .zero_set()
        .iter()
        .all(|&i| x.coord(i).is_zero())
}

/// The archimedean hull of the ideal generated by `generators`: all `x` whose
/// clamped multiples `(n |x| - 1)+` stay in the generated ideal.  Returned
/// as the coordinate ideal carved out by probing the basis vectors.
pub fn arch_hull(dim: usize, generators: &[LVec]) -> Result<LIdeal> {
    let base = lideal_generated(dim, generators)?;
    let mut mask = 0u64;
    for i in 0..dim {
        if !clamped_multiples_in_ideal(&base, &LVec::unit(dim, i)) {
            mask |= 1 << i;
        }
    }
    LIdeal::new(dim, mask)
}

/// One step of the archimedean closure operator: all `a` such that for some
/// bound `b >= 0` every `(n |a| - b)+` lies in `I`.  Over `Q^n` one step
/// already closes.
pub fn k_step(ideal: &LIdeal) -> LIdeal {
    // membership: on each vanishing coordinate of I, n |a_i| <= b_i for all
    // n forces a_i = 0 (b is fixed while the multiples grow)
    let dim = ideal.dim();
    let mut mask = 0u64;
    for i in 0..dim {
        let e = LVec::unit(dim, i);
        let in_k = ideal
            .zero_set()
            .iter()
            .all(|&j| e.coord(j).is_zero());
        if !in_k {
            mask |= 1 << i;
        }
    }
    LIdeal {
        dim,
        zero_mask: mask,
    }
}

/// Whether the quotient by `ideal` is archimedean: no nonzero positive
/// element all of whose multiples stay below the unit.  The quotient of
/// `Q^n` by a coordinate ideal is a rational coordinate algebra, so it
/// suffices to watch the basis directions escape past the unit.
pub fn quotient_is_archimedean(ideal: &LIdeal) -> bool {
    let qdim = QuotientMap::new(ideal.clone()).quotient_dim();
    (0..qdim).all(|i| {
        let e = LVec::unit(qdim, i);
        (1..).map(|n| e.scale(&rat::int(n)))
            .take(4)
            .any(|multiple| !multiple.le(&LVec::one(qdim)))
    })
}

/// Brute-force oracle for the archimedean hull: the least coordinate ideal
/// that contains every generator and has an archimedean quotient, found by
/// scanning all `2^dim` candidates.
pub fn arch_hull_oracle(dim: usize, generators: &[LVec]) -> Result<LIdeal> {
    let mut candidates = Vec::new();
    for mask in 0..1u64 << dim {
        let ideal = LIdeal::new(dim, mask)?;
        let contains_all = generators.iter().all(|g| ideal.contains(g));
        if contains_all && quotient_is_archimedean(&ideal) {
            candidates.push(ideal);
        }
    }
    candidates
        .iter()
        .find(|c| candidates.iter().all(|d| LIdeal::le(c, d)))
        .cloned()
        .ok_or_else(|| Error::BadInput("no least archimedean superideal".into()))
}

/// The quotient of `Q^n` by a coordinate ideal, realized as restriction to
/// the vanishing coordinates.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    kernel: LIdeal,
}

impl QuotientMap {
    pub fn new(kernel: LIdeal) -> QuotientMap {
        QuotientMap { kernel }
    }

    pub fn kernel(&self) -> &LIdeal {
        &self.kernel
    }

    pub fn quotient_dim(&self) -> usize {
        self.kernel.zero_mask().count_ones() as usize
    }

    /// The image of `a`: its coordinates on the kernel's zero set, in
    /// increasing coordinate order.  Errors when the quotient is the zero
    /// algebra (empty zero set would give dimension 0).
    pub fn project(&self, a: &LVec) -> Result<LVec> {
        if a.dim() != self.kernel.dim() {
            return Err(Error::DimensionMismatch {
                left: self.kernel.dim(),
                right: a.dim(),
            });
        }
        LVec::new(
            self.kernel
                .zero_set()
                .iter()
                .map(|&i| a.coord(i).clone())
                .collect(),
        )
    }

    /// The quotient order: `a + I >= 0 + I` exactly when `a-` lies in `I`.
    pub fn nonnegative_in_quotient(&self, a: &LVec) -> bool {
        self.kernel.contains(&a.neg_part())
    }
}

/// The frame of all coordinate ideals of `Q^dim` under inclusion, with the
/// carrier indexed by zero-set mask.
#[derive(Debug, Clone)]
pub struct ArchFrame {
    dim: usize,
    lattice: FinDistLattice,
}

/// Builds the ideal frame: meets are intersections, joins are archimedean
/// hulls of sums (which for coordinate ideals are the sums themselves).
pub fn arch_frame(dim: usize) -> Result<ArchFrame> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if dim > 10 {
        // the lattice materializes all 2^dim ideals with full order tables
        return Err(Error::CapExceeded {
            what: "ideal frame carrier".into(),
            size: 1u64 << dim,
            cap: 1 << 10,
        });
    }
    let n = 1usize << dim;
    let labels = (0..n as u64)
        .map(|m| LIdeal { dim, zero_mask: m }.label())
        .collect::<Vec<_>>();
    let mut le = vec![false; n * n];
    for z in 0..n as u64 {
        for w in 0..n as u64 {
            le[z as usize * n + w as usize] = w & !z == 0; // W subset of Z
        }
    }
    Ok(ArchFrame {
        dim,
        lattice: FinDistLattice::from_poset(FinPoset::from_le_matrix(labels, le)?)?,
    })
}

impl ArchFrame {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lattice(&self) -> &FinDistLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ideal(&self, index: usize) -> LIdeal {
        LIdeal {
            dim: self.dim,
            zero_mask: index as u64,
        }
    }

    pub fn index_of(&self, ideal: &LIdeal) -> usize {
        ideal.zero_mask() as usize
    }

    /// Indices of the proper ideals (everything except the whole algebra).
    pub fn proper_indices(&self) -> Vec<usize> {
        (1..self.len()).collect()
    }
}

/// The Yosida space of `Q^dim`: the maximal proper ideals, each vanishing
/// at a single coordinate.  Evaluation at them recovers the coordinates.
#[derive(Debug, Clone)]
pub struct YosidaSpace {
    dim: usize,
}

pub fn yosida(dim: usize) -> Result<YosidaSpace> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(YosidaSpace { dim })
}

impl YosidaSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> LIdeal {
        LIdeal::maximal_at(self.dim, i)
    }

    pub fn points(&self) -> Vec<LIdeal> {
        (0..self.dim).map(|i| self.point(i)).collect()
    }

    /// The points containing `ideal` — its zero set, as space indices.
    pub fn zero_set_of(&self, ideal: &LIdeal) -> BTreeSet<usize> {
        ideal.zero_set()
    }

    /// Evaluation of `a` at the points: the function `M_i -> a_i`, which on
    /// coordinates is the identity.
    pub fn zeta(&self, a: &LVec) -> Result<LVec> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: a.dim(),
            });
        }
        Ok(a.clone())
    }

    /// The discrete space of points.
    pub fn poset(&self) -> FinPoset {
        let labels = (0..self.dim).map(|i| format!("M{}", i + 1)).collect();
        let mut le = vec![false; self.dim * self.dim];
        for i in 0..self.dim {
            le[i * self.dim + i] = true;
        }
        FinPoset::from_le_matrix(labels, le).expect("discrete order")
    }
}

/// The boolean algebra of idempotents of `Q^dim`, atoms being the basis
/// vectors.  `e \/ f = e + f - ef`, `e /\ f = ef`, `-e = 1 - e` all agree
/// with the mask operations.
pub fn idempotent_algebra(dim: usize) -> Result<FinBoolAlg> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    FinBoolAlg::new((1..=dim).map(|i| format!("e{i}")).collect())
}

/// The idempotent vector for a mask.
pub fn idempotent_vec(dim: usize, mask: u64) -> LVec {
    LVec::indicator(dim, mask)
}

/// The mask of an idempotent vector, if it is one.
pub fn idempotent_mask(v: &LVec) -> Option<u64> {
    v.is_idempotent().then(|| v.support_mask())
}

/// Checks the vector-lattice identity suite on a pair of vectors and a pair
/// of nonnegative scalars; returns the name of the first identity that
/// fails.
pub fn lattice_identity_violation(a: &LVec, b: &LVec, r: &Rat, s: &Rat) -> Option<&'static str> {
    assert!(!r.is_negative() && !s.is_negative(), "scalars must be >= 0");
    let dim = a.dim();
    // translation distributes over finite joins and meets
    let c = LVec::constant(dim, s.clone());
    if a + &b.join(&c) != (a + b).join(&(a + &c)) {
        return Some("translation distributes over join");
    }
    if a + &b.meet(&c) != (a + b).meet(&(a + &c)) {
        return Some("translation distributes over meet");
    }
    // negation swaps meet and join
    if -&a.join(b) != (-a).meet(&-b) {
        return Some("negation swaps join and meet");
    }
    // jordan decomposition and absolute value
    if &a.pos_part() - &a.neg_part() != *a {
        return Some("difference of parts recovers the vector");
    }
    if a.abs() != &a.pos_part() + &a.neg_part() {
        return Some("absolute value is the sum of the parts");
    }
    // subadditivity of the positive part
    if !(a + b).pos_part().le(&(&a.pos_part() + &b.pos_part())) {
        return Some("positive part is subadditive");
    }
    // the parts are disjoint, additively and multiplicatively
    if !(a.pos_part().meet(&a.neg_part())).is_zero() {
        return Some("parts meet to zero");
    }
    if !(&a.pos_part() * &a.neg_part()).is_zero() {
        return Some("parts multiply to zero");
    }
    // scaling preserves disjointness
    let a0 = a.pos_part();
    let b0 = b.pos_part();
    let disjoint = a0.meet(&b0).is_zero();
    if disjoint && !(a0.scale(r).meet(&b0.scale(s))).is_zero() {
        return Some("scaling preserves disjointness");
    }
    // norm laws
    if (a + b).norm() > a.norm() + b.norm() {
        return Some("norm is subadditive");
    }
    if a.scale(r).norm() != r.abs() * a.norm() {
        return Some("norm is absolutely homogeneous");
    }
    // squares are positive
    if !(LVec::zero(dim).le(&(a * a))) {
        return Some("squares are nonnegative");
    }
    // multiplication by a nonnegative element distributes over join
    let pos = b.abs();
    if &pos * &a.join(&LVec::zero(dim)) != (&pos * a).join(&LVec::zero(dim)) {
        return Some("positive multiplication distributes over join");
    }
    None
}

/// `r e <= s f` for nonzero idempotents and positive scalars forces both
/// `r <= s` and `e <= f`; returns a violation name if the implication or
/// its ingredients fail.
pub fn scaled_idempotent_violation(
    dim: usize,
    e_mask: u64,
    f_mask: u64,
    r: &Rat,
    s: &Rat,
) -> Option<&'static str> {
    if e_mask == 0 || f_mask == 0 || !r.is_positive() || !s.is_positive() {
        return None; // hypothesis not met
    }
    let e = idempotent_vec(dim, e_mask);
    let f = idempotent_vec(dim, f_mask);
    if e.scale(r).le(&f.scale(s)) && (r > s || e_mask & !f_mask != 0) {
        return Some("scaled idempotent comparison must compare both factors");
    }
    None
}
