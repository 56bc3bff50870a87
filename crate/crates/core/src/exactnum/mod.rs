//! Exact scalars and rigorous rational enclosures.
//!
//! [`ExactReal`] is either a rational or an element `a + b√d` of a real
//! quadratic field. All comparisons, floors and ceilings are decided with
//! integer arithmetic only, so they are infallible. [`RealInterval`] is a
//! closed interval with rational endpoints used to enclose values that do
//! not live in any single quadratic field, with [`AdaptiveEnclosure`]
//! driving on-demand refinement.

mod interval;
mod real;

pub use interval::{AdaptiveEnclosure, RealInterval, DEFAULT_REFINEMENT_CAP};
pub use real::ExactReal;
