//! Exact-arithmetic laboratory for canonical extensions of finite boolean
//! algebras and of finite-dimensional bounded archimedean lattice-ordered
//! algebras.
//!
//! The crate has two pipelines that are built and cross-checked against each
//! other:
//!
//! * the *boolean* pipeline: a finite boolean algebra `B`, its semilattice of
//!   filters, the free frame of downsets over that semilattice, and the
//!   booleanization of that frame, which is a canonical extension of `B`
//!   (dense + compact embedding).  The result is compared with the algebra of
//!   regular open subsets of the poset of proper filters.
//! * the *vector* pipeline: the algebra `Q^n` with coordinatewise operations,
//!   its frame of archimedean lattice ideals, the free boolean extension of
//!   that frame, the Specker algebra over it, and the extension map `alpha`
//!   into its Dedekind completion.  The result is compared with the algebra
//!   of normal rational-valued functions on the poset of proper ideals.
//!
//! Everything is computed with arbitrary-precision rationals; every check is
//! exact (zero tolerance).  Verification entry points return [`report`]
//! structures with named pass/fail clauses and replayable counterexamples.
//!
//! Batch verification runs in parallel via rayon when the `parallel` feature
//! (on by default) is enabled; the sequential code path is always available
//! and produces byte-identical reports.

pub mod ba;
pub mod balcan;
pub mod boolalg;
pub mod boolext;
pub mod error;
pub mod exec;
pub mod fault;
pub mod frame;
pub mod gen;
pub mod io;
pub mod lalg;
pub mod lattice;
pub mod laws;
pub mod normal;
pub mod poset;
pub mod rat;
pub mod report;
pub mod specker;
pub mod suite;

pub use error::Error;
pub use rat::Rat;

/// Hard cap on carriers that get enumerated element by element (subsets of a
/// poset, idempotent candidates, and similar).  Instances above the cap are
/// rejected with [`Error::CapExceeded`] instead of silently degrading.
pub const ENUMERATION_CAP: u32 = 1 << 16;
