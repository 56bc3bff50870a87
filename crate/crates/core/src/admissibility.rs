//! Membership tests for lazy expansions and their closure.
//!
//! An infinite word `a` over the per-position alphabets is the lazy
//! expansion of some value iff every shift of it is lexicographically
//! strictly above the quasi-lazy word of the correspondingly shifted base;
//! relaxing strict to non-strict characterizes the topological closure.
//! For ultimately periodic inputs and eventually periodic bases all
//! quantifiers range over finitely many states, so the test is complete.

use crate::bases::CantorBase;
use crate::error::{Error, Result};
use crate::expansion::{check_alphabet, quasi_lazy_word};
use crate::words::{lcm, DigitWord};
use std::cmp::Ordering;

/// Outcome of the membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibilityVerdict {
    /// The word is the lazy expansion of a value in `(x_β − 1, x_β]`.
    InLazy,
    /// The word lies in the closure of the lazy expansions but is not one
    /// itself (some shift comparison is an equality).
    InClosureOnly,
    NotAdmissible,
    /// A quasi-lazy period search gave up; the answer is unknown.
    Inconclusive(String),
}

/// Quasi-lazy words of the shifted bases, cached by structural shift.
pub(crate) struct ShiftQuasiLazy<'a> {
    base: &'a CantorBase,
    cap: usize,
    cache: Vec<Option<DigitWord>>,
}

impl<'a> ShiftQuasiLazy<'a> {
    pub(crate) fn new(base: &'a CantorBase, cap: usize) -> Result<Self> {
        if !base.is_eventually_periodic() {
            return Err(Error::UnsupportedBase(
                "admissibility tests need an eventually periodic base",
            ));
        }
        let slots = base.preperiod_len().unwrap() + base.period_len().unwrap() + 1;
        Ok(ShiftQuasiLazy {
            base,
            cap,
            cache: vec![None; slots],
        })
    }

    pub(crate) fn at(&mut self, n: usize) -> Result<DigitWord> {
        let idx = self.base.structural_shift(n).unwrap();
        if self.cache[idx].is_none() {
            self.cache[idx] = Some(quasi_lazy_word(&self.base.shifted(idx), self.cap)?);
        }
        Ok(self.cache[idx].clone().unwrap())
    }
}

/// Decides whether `w` is a lazy expansion for `base`, lies only in the
/// closure, or is not admissible at all.
///
/// The shift conditions are verified for every `n` below a window after
/// which both the shifted word and the shifted base (hence its quasi-lazy
/// word) revisit earlier states, so the finite check covers all `n`.
pub fn check_lazy_admissible(
    base: &CantorBase,
    w: &DigitWord,
    cap: usize,
) -> Result<AdmissibilityVerdict> {
    let mut quasi = ShiftQuasiLazy::new(base, cap)?;
    if check_alphabet(base, w).is_err() {
        return Ok(AdmissibilityVerdict::NotAdmissible);
    }
    let p = base.period_len().unwrap();
    let window = base.preperiod_len().unwrap()
        + w.preperiod().len()
        + lcm(w.period().len().max(1), p);
    let mut saw_equality = false;
    for n in 0..window {
        let bound = match quasi.at(n) {
            Ok(b) => b,
            Err(Error::PeriodNotFound(steps)) => {
                return Ok(AdmissibilityVerdict::Inconclusive(format!(
                    "quasi-lazy period search for shift {n} exhausted {steps} steps"
                )))
            }
            Err(e) => return Err(e),
        };
        match w.shifted(n).lex_cmp(&bound) {
            Ordering::Less => return Ok(AdmissibilityVerdict::NotAdmissible),
            Ordering::Equal => saw_equality = true,
            Ordering::Greater => {}
        }
    }
    Ok(if saw_equality {
        AdmissibilityVerdict::InClosureOnly
    } else {
        AdmissibilityVerdict::InLazy
    })
}

/// The length-`n` words obtained from the quasi-lazy word by bumping its
/// `n`-th digit: `ℓ_0 ⋯ ℓ_{n−2} s` with `s` ranging strictly above
/// `ℓ_{n−1}` up to the alphabet maximum. Empty exactly when the quasi-lazy
/// digit is already maximal there. Lazy expansions are concatenations of
/// such blocks over successively shifted bases.
pub fn bump_blocks(base: &CantorBase, n: usize, cap: usize) -> Result<Vec<Vec<u32>>> {
    assert!(n >= 1, "block length must be at least 1");
    let quasi = quasi_lazy_word(base, cap)?;
    let digits = quasi.prefix(n);
    let last = digits[n - 1];
    let max = base.max_digit(n - 1);
    Ok((last + 1..=max)
        .map(|s| {
            let mut word = digits[..n - 1].to_vec();
            word.push(s);
            word
        })
        .collect())
}

/// All bump blocks of an alternate base whose length is `≡ h (mod p)`, up
/// to `length_bound` (the full set can be infinite).
pub fn bump_blocks_by_residue(
    base: &CantorBase,
    h: usize,
    length_bound: usize,
    cap: usize,
) -> Result<Vec<Vec<u32>>> {
    if !base.is_alternate() {
        return Err(Error::UnsupportedBase(
            "residue classes of block lengths need an alternate base",
        ));
    }
    let p = base.period_len().unwrap();
    assert!(h < p, "residue out of range");
    let mut out = Vec::new();
    for n in 1..=length_bound {
        if n % p == h {
            out.extend(bump_blocks(base, n, cap)?);
        }
    }
    Ok(out)
}

/// Decides whether the finite word is a prefix of some lazy expansion by
/// decomposing it into bump blocks over successively shifted bases,
/// followed by a prefix of the current quasi-lazy word.
///
/// This is the constructive route; [`crate::expansion::lazy_prefix_interval`]
/// decides the same question through the digit recursion and serves as its
/// independent oracle.
pub fn is_expansion_prefix(base: &CantorBase, w: &[u32], cap: usize) -> Result<bool> {
    let mut quasi = ShiftQuasiLazy::new(base, cap)?;
    let len = w.len();
    // reachable[pos]: the suffix w[pos..] continues a decomposition whose
    // blocks consumed exactly pos digits (each block advances the shift by
    // its length, so the shift at pos is pos itself)
    let mut suffix_ok = vec![false; len + 1];
    suffix_ok[len] = true;
    for pos in (0..len).rev() {
        let bound = quasi.at(pos)?;
        if bound.starts_with(&w[pos..]) {
            suffix_ok[pos] = true;
            continue;
        }
        for m in 1..=len - pos {
            let spine = bound.digit_at(m - 1);
            let digit = w[pos + m - 1];
            if digit > spine && digit <= base.max_digit(pos + m - 1) && suffix_ok[pos + m] {
                suffix_ok[pos] = true;
                break;
            }
            // all longer blocks must follow the quasi-lazy spine here
            if digit != spine {
                break;
            }
        }
    }
    Ok(suffix_ok[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::lazy_prefix_interval;

    const CAP: usize = 10_000;

    fn alt() -> CantorBase {
        "alt: (1+1*sqrt(13))/2 , (5+1*sqrt(13))/6".parse().unwrap()
    }

    fn w(s: &str) -> DigitWord {
        s.parse().unwrap()
    }

    #[test]
    fn paper_admissibility_verdicts() {
        assert_eq!(
            check_lazy_admissible(&alt(), &w("(2 1 2 0)^w"), CAP).unwrap(),
            AdmissibilityVerdict::InLazy
        );
        let quasi = quasi_lazy_word(&alt(), CAP).unwrap();
        assert_eq!(
            check_lazy_admissible(&alt(), &quasi, CAP).unwrap(),
            AdmissibilityVerdict::InClosureOnly
        );
        assert_eq!(
            check_lazy_admissible(&alt(), &DigitWord::zero(), CAP).unwrap(),
            AdmissibilityVerdict::NotAdmissible
        );
        // a digit above the alphabet maximum
        assert_eq!(
            check_lazy_admissible(&alt(), &w("(2 2)^w"), CAP).unwrap(),
            AdmissibilityVerdict::NotAdmissible
        );
    }

    #[test]
    fn tiny_cap_is_inconclusive() {
        assert!(matches!(
            check_lazy_admissible(&alt(), &w("(2 1 2 0)^w"), 2).unwrap(),
            AdmissibilityVerdict::Inconclusive(_)
        ));
    }

    #[test]
    fn bump_block_slices() {
        assert_eq!(bump_blocks(&alt(), 1, CAP).unwrap(), vec![vec![1], vec![2]]);
        assert!(bump_blocks(&alt(), 2, CAP).unwrap().is_empty());
        assert!(bump_blocks(&alt(), 3, CAP).unwrap().is_empty());
    }

    #[test]
    fn residue_classes_of_blocks() {
        assert_eq!(
            bump_blocks_by_residue(&alt(), 1, 5, CAP).unwrap(),
            vec![vec![1], vec![2]]
        );
        assert_eq!(
            bump_blocks_by_residue(&alt(), 0, 5, CAP).unwrap(),
            vec![vec![0, 1, 2, 1]]
        );
        assert!(bump_blocks_by_residue(&alt(), 0, 0, CAP).unwrap().is_empty());

        // integer base: the quasi-lazy word is zero, so every slice bumps
        // a zero prefix
        let int_base: CantorBase = "alt: 2,3".parse().unwrap();
        assert_eq!(
            bump_blocks_by_residue(&int_base, 1, 3, CAP).unwrap(),
            vec![vec![1], vec![0, 0, 1]]
        );
        assert_eq!(
            bump_blocks_by_residue(&int_base, 0, 2, CAP).unwrap(),
            vec![vec![0, 1], vec![0, 2]]
        );
    }

    #[test]
    fn prefix_decomposition_matches_quasi_lazy() {
        let quasi = quasi_lazy_word(&alt(), CAP).unwrap();
        for len in 0..=12 {
            assert!(
                is_expansion_prefix(&alt(), &quasi.prefix(len), CAP).unwrap(),
                "prefix of length {len}"
            );
        }
        assert!(is_expansion_prefix(&alt(), &[2, 1, 2, 0], CAP).unwrap());
        assert!(!is_expansion_prefix(&alt(), &[0, 0], CAP).unwrap());
    }

    #[test]
    fn prefix_decomposition_agrees_with_interval_oracle() {
        // exhaustive over alphabet-valid words of length ≤ 5
        let base = alt();
        let mut stack: Vec<Vec<u32>> = vec![vec![]];
        while let Some(word) = stack.pop() {
            let by_blocks = is_expansion_prefix(&base, &word, CAP).unwrap();
            let by_interval = lazy_prefix_interval(&base, &word).unwrap().is_some();
            assert_eq!(by_blocks, by_interval, "disagreement on {word:?}");
            if word.len() < 5 {
                for d in 0..=base.max_digit(word.len()) {
                    let mut next = word.clone();
                    next.push(d);
                    stack.push(next);
                }
            }
        }
    }
}
