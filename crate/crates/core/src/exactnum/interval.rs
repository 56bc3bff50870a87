use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactnum::ExactReal;

/// Number of refinement steps after which deciders give up with
/// [`Error::NeedsMorePrecision`]. Ties at integer boundaries (possible for
/// Thue–Morse bases) can never be separated, so a cap is required.
pub const DEFAULT_REFINEMENT_CAP: u32 = 64;

/// A closed interval `[lo, hi]` with rational endpoints, enclosing some
/// real value. Endpoints are exact rationals, never floating point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RealInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RealInterval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        RealInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains_rational(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Whether the exact value can lie in this enclosure; errors only on
    /// mixed fields.
    pub fn contains_value(&self, v: &ExactReal) -> Result<bool> {
        let lo = ExactReal::from_ratio(self.lo.clone());
        let hi = ExactReal::from_ratio(self.hi.clone());
        Ok(lo.compare(v)? != Ordering::Greater && v.compare(&hi)? != Ordering::Greater)
    }

    pub fn contains_interval(&self, inner: &RealInterval) -> bool {
        self.lo <= inner.lo && inner.hi <= self.hi
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(RealInterval { lo, hi })
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.intersect(other).is_some()
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        let corners = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = corners.iter().min().unwrap().clone();
        let hi = corners.iter().max().unwrap().clone();
        RealInterval { lo, hi }
    }

    /// Symmetrically widened to total width `width` (no-op when already
    /// wider); a superset of an enclosure is still an enclosure.
    pub fn padded_to_width(&self, width: &BigRational) -> RealInterval {
        let slack = width - self.width();
        if slack <= BigRational::from_integer(BigInt::from(0)) {
            return self.clone();
        }
        let half = slack / BigRational::from_integer(BigInt::from(2));
        RealInterval {
            lo: &self.lo - &half,
            hi: &self.hi + &half,
        }
    }

    /// The ceiling, if it is the same for every point of the interval.
    pub fn decide_ceil(&self) -> Option<BigInt> {
        let lo = self.lo.ceil().to_integer();
        let hi = self.hi.ceil().to_integer();
        (lo == hi).then_some(lo)
    }

    /// The floor, if it is the same for every point of the interval.
    pub fn decide_floor(&self) -> Option<BigInt> {
        let lo = self.lo.floor().to_integer();
        let hi = self.hi.floor().to_integer();
        (lo == hi).then_some(lo)
    }

    /// Position of the enclosed value relative to `v`, when the enclosure
    /// already separates from it.
    pub fn compare_rational(&self, v: &BigRational) -> Option<Ordering> {
        if &self.hi < v {
            Some(Ordering::Less)
        } else if &self.lo > v {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// An enclosure of a fixed real number together with a callback producing
/// tighter enclosures at increasing refinement levels.
///
/// Each refinement intersects the callback's answer with the running
/// enclosure, so the produced intervals are nested by construction and the
/// width never grows.
pub struct AdaptiveEnclosure<F: FnMut(u32) -> RealInterval> {
    refine_fn: F,
    level: u32,
    current: RealInterval,
}

impl<F: FnMut(u32) -> RealInterval> AdaptiveEnclosure<F> {
    pub fn new(mut refine_fn: F) -> Self {
        let current = refine_fn(0);
        AdaptiveEnclosure {
            refine_fn,
            level: 0,
            current,
        }
    }

    pub fn current(&self) -> &RealInterval {
        &self.current
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    fn step(&mut self) {
        self.level += 1;
        let next = (self.refine_fn)(self.level);
        self.current = self
            .current
            .intersect(&next)
            .expect("refinement produced a disjoint enclosure of the same value");
    }

    /// Runs up to `budget` refinement steps and returns the enclosure.
    pub fn refine(&mut self, budget: u32) -> &RealInterval {
        for _ in 0..budget {
            self.step();
        }
        &self.current
    }

    pub fn refine_until_width(&mut self, width: &BigRational, cap: u32) -> Result<&RealInterval> {
        for _ in 0..cap {
            if self.current.width() <= *width {
                return Ok(&self.current);
            }
            self.step();
        }
        if self.current.width() <= *width {
            Ok(&self.current)
        } else {
            Err(Error::NeedsMorePrecision)
        }
    }

    /// Tightens until the ceiling of the enclosed value is decided, giving
    /// up after `cap` steps.
    pub fn decide_ceil(&mut self, cap: u32) -> Result<BigInt> {
        for _ in 0..=cap {
            if let Some(c) = self.current.decide_ceil() {
                return Ok(c);
            }
            self.step();
        }
        self.current.decide_ceil().ok_or(Error::NeedsMorePrecision)
    }

    /// Tightens until the enclosed value separates from the exact `v`.
    pub fn compare_exact(&mut self, v: &ExactReal, cap: u32) -> Result<Ordering> {
        for _ in 0..=cap {
            let lo = ExactReal::from_ratio(self.current.lo().clone());
            let hi = ExactReal::from_ratio(self.current.hi().clone());
            if v.compare(&lo)? == Ordering::Less {
                return Ok(Ordering::Greater);
            }
            if v.compare(&hi)? == Ordering::Greater {
                return Ok(Ordering::Less);
            }
            self.step();
        }
        Err(Error::NeedsMorePrecision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn degenerate_refinement_is_fixed_point() {
        let q = r(7, 5);
        let mut enc = AdaptiveEnclosure::new(|_| RealInterval::point(r(7, 5)));
        let out = enc.refine(5);
        assert_eq!(out, &RealInterval::point(q));
    }

    #[test]
    fn refinement_nests() {
        // widths 1/2^level around 1/3
        let mut enc = AdaptiveEnclosure::new(|level| {
            let w = BigRational::new(BigInt::one(), BigInt::one() << level);
            RealInterval::new(r(1, 3) - &w, r(1, 3) + &w)
        });
        let mut prev = enc.current().clone();
        for _ in 0..10 {
            let next = enc.refine(1).clone();
            assert!(prev.contains_interval(&next));
            prev = next;
        }
        assert!(prev.contains_rational(&r(1, 3)));
    }

    #[test]
    fn ceil_decision_and_cap() {
        let mut enc = AdaptiveEnclosure::new(|level| {
            let w = BigRational::new(BigInt::one(), BigInt::one() << level);
            RealInterval::new(r(3, 2) - &w, r(3, 2) + &w)
        });
        assert_eq!(enc.decide_ceil(16).unwrap(), BigInt::from(2));

        // an enclosure pinned to an integer never decides its ceiling
        let mut tie = AdaptiveEnclosure::new(|level| {
            let w = BigRational::new(BigInt::one(), BigInt::one() << level);
            RealInterval::new(r(2, 1) - &w, r(2, 1) + &w)
        });
        assert_eq!(tie.decide_ceil(8), Err(Error::NeedsMorePrecision));
    }
}
