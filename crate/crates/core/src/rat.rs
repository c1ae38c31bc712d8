//! Exact rational scalars and the few numeric helpers the pipelines share.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.  All arithmetic in the crate is exact.
pub type Rat = BigRational;

/// `p / q` as a [`Rat`].  Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer `n` as a [`Rat`].
pub fn int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or a plain integer string, in lowest terms with a positive
/// denominator (the same shape [`format`] produces).
pub fn parse(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::BadRational(s.to_string()))
}

/// Formats in lowest terms with a positive denominator; integers print
/// without the `/1` suffix.
pub fn format(r: &Rat) -> String {
    r.to_string()
}

/// Least integer `>= r`, clamped below at 0.
pub fn ceil_nonneg(r: &Rat) -> Rat {
    let c = r.ceil();
    if c.is_negative() {
        Rat::zero()
    } else {
        c
    }
}

/// Least common multiple of the denominators of `rs` (1 for an empty slice).
pub fn denominator_lcm<'a>(rs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    let mut l = BigInt::one();
    for r in rs {
        l = num::integer::lcm(l, r.denom().clone());
    }
    l
}

/// Largest rational with denominator dividing `denom` in `[0, upper]` that
/// satisfies the downward-closed predicate `pred`, found by bisection on the
/// grid `k/denom`.  Returns `None` when even 0 fails.
///
/// This is the independent oracle used to re-derive achieved suprema: the
/// caller guarantees that the supremum lies on the grid and that `pred(r)`
/// holds exactly for `r` at or below it.
pub fn sup_on_grid(denom: &BigInt, upper: &Rat, pred: impl Fn(&Rat) -> bool) -> Option<Rat> {
    assert!(denom > &BigInt::zero());
    let hi_k = (upper * BigRational::from_integer(denom.clone()))
        .floor()
        .to_integer()
        .to_i64()
        .expect("search bound too large");
    if hi_k < 0 {
        return None;
    }
    let at = |k: i64| BigRational::new(BigInt::from(k), denom.clone());
    if !pred(&at(0)) {
        return None;
    }
    let (mut lo, mut hi) = (0i64, hi_k); // pred holds at lo; hi is the last candidate
    if pred(&at(hi)) {
        return Some(at(hi));
    }
    // invariant: pred(at(lo)) && !pred(at(hi))
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(&at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(at(lo))
}
