//! Process-global fault injection used to prove that the verification suite
//! actually detects broken implementations.
//!
//! Each variant swaps a single step of one operation for a plausible-looking
//! wrong one.  The suite runner enables a fault at process startup (from a
//! command-line flag) before any mathematics runs; nothing in this crate sets
//! one.  Library tests must never call [`set`]: tests share a process and the
//! flag is global.

use std::sync::atomic::{AtomicU8, Ordering};

static ACTIVE: AtomicU8 = AtomicU8::new(0);

/// A deliberately wrong single step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// `alpha` keeps the positivity shift `s` in its output, so the result
    /// depends on which shift was chosen.
    AlphaKeepShift,
    /// Alexandroff closure returns the set itself instead of its down-closure.
    ClosureNoDownset,
    /// The archimedean-hull membership test skips the clamped-multiple clause
    /// and admits every vector.
    HullSkipClause,
}

impl Fault {
    pub const ALL: [Fault; 3] = [
        Fault::AlphaKeepShift,
        Fault::ClosureNoDownset,
        Fault::HullSkipClause,
    ];

    /// Stable command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Fault::AlphaKeepShift => "s-dependent-alpha",
            Fault::ClosureNoDownset => "closure-no-downset",
            Fault::HullSkipClause => "hull-skip-clause",
        }
    }

    pub fn from_name(name: &str) -> Option<Fault> {
        Fault::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// Enables a fault (or clears it with `None`).  Call once at process startup.
pub fn set(f: Option<Fault>) {
    ACTIVE.store(f.map_or(0, |f| f as u8 + 1), Ordering::SeqCst);
}

/// The currently injected fault, if any.
pub fn active() -> Option<Fault> {
    match ACTIVE.load(Ordering::Relaxed) {
        0 => None,
        n => Some(Fault::ALL[(n - 1) as usize]),
    }
}

/// True when `f` is the injected fault.
pub fn is(f: Fault) -> bool {
    active() == Some(f)
}
