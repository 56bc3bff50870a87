//! Exact digit expansions in Cantor real bases.
//!
//! A Cantor real base is a sequence `(β_n)` of reals greater than one; a
//! representation of `x` is a digit word `a_0 a_1 a_2 …` with
//! `x = Σ a_n / (β_0 ⋯ β_n)`. This crate computes the two extreme
//! expansions — greedy (largest feasible digit first) and lazy (smallest
//! feasible digit first) — together with their one-sided limit words, a
//! Parry-style admissibility test for lazy expansions, and the finite
//! automaton recognizing the factors of the lazy shift of an alternate
//! (periodic) base.
//!
//! All arithmetic is exact: scalars live in `Q` or a fixed real quadratic
//! field `Q(√d)`, and quantities outside any such field (Thue–Morse bases)
//! are handled through rigorous rational enclosures that are refined on
//! demand.
//!
//! Organization:
//! * [`exactnum`] — exact scalars, sign/floor/ceiling decisions, rational
//!   interval enclosures with adaptive refinement;
//! * [`bases`] — finitely described base sequences and the largest
//!   representable value `x_β`;
//! * [`words`] — canonical ultimately periodic digit words;
//! * [`expansion`] — the greedy/lazy/quasi-greedy/quasi-lazy algorithms,
//!   digit complement, word valuation;
//! * [`admissibility`] — membership tests for lazy expansions and their
//!   closure, prefix factorizations;
//! * [`automaton`] — shift automata for alternate bases, soficity
//!   decision, DOT/table export.

pub mod admissibility;
pub mod automaton;
pub mod bases;
pub mod error;
pub mod exactnum;
pub mod expansion;
pub mod words;

pub use error::Error;
pub use exactnum::{ExactReal, RealInterval};
pub use words::DigitWord;
