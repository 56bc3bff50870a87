//! Ultimately periodic digit words in canonical form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An infinite digit word `u v^ω` over the non-negative integers, stored as
/// a finite preperiod `u` and period `v`. An empty period means the word
/// ends in `0^ω` (a "finite" word).
///
/// Construction canonicalizes: the period is primitive, an all-zero period
/// becomes empty, and the preperiod is the shortest possible (its tail is
/// rolled into the period). Equality of canonical forms therefore coincides
/// with equality of the represented infinite words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitWord {
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl DigitWord {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>) -> Self {
        let mut w = DigitWord { preperiod, period };
        w.canonicalize();
        w
    }

    /// The finite word `digits 0^ω`.
    pub fn finite(digits: Vec<u32>) -> Self {
        DigitWord::new(digits, Vec::new())
    }

    /// The purely periodic word `period^ω`.
    pub fn periodic(period: Vec<u32>) -> Self {
        DigitWord::new(Vec::new(), period)
    }

    pub fn zero() -> Self {
        DigitWord {
            preperiod: Vec::new(),
            period: Vec::new(),
        }
    }

    fn canonicalize(&mut self) {
        if self.period.iter().all(|&d| d == 0) {
            self.period.clear();
            while self.preperiod.last() == Some(&0) {
                self.preperiod.pop();
            }
            return;
        }
        reduce_to_primitive(&mut self.period);
        // roll the preperiod tail into the period: u·c and (v·c)^ω agree
        // when u ends with c = last letter of the period
        while self.preperiod.last().is_some() && self.preperiod.last() == self.period.last() {
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    /// True when the word ends in `0^ω`.
    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Length of the longest prefix ending in a non-zero digit; only
    /// meaningful for finite words.
    pub fn finite_len(&self) -> Option<usize> {
        self.is_finite().then_some(self.preperiod.len())
    }

    pub fn is_zero(&self) -> bool {
        self.preperiod.is_empty() && self.period.is_empty()
    }

    pub fn digit_at(&self, n: usize) -> u32 {
        if n < self.preperiod.len() {
            self.preperiod[n]
        } else if self.period.is_empty() {
            0
        } else {
            self.period[(n - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `len` digits.
    pub fn prefix(&self, len: usize) -> Vec<u32> {
        (0..len).map(|n| self.digit_at(n)).collect()
    }

    pub fn starts_with(&self, digits: &[u32]) -> bool {
        digits
            .iter()
            .enumerate()
            .all(|(n, &d)| self.digit_at(n) == d)
    }

    /// Period length used for comparison windows (`1` for finite words,
    /// whose tail is `0^ω`).
    fn cycle_len(&self) -> usize {
        self.period.len().max(1)
    }

    /// The word with the first `n` digits removed, canonicalized.
    pub fn shifted(&self, n: usize) -> DigitWord {
        if n <= self.preperiod.len() {
            DigitWord::new(self.preperiod[n..].to_vec(), self.period.clone())
        } else if self.period.is_empty() {
            DigitWord::zero()
        } else {
            let mut period = self.period.clone();
            period.rotate_left((n - self.preperiod.len()) % self.period.len());
            DigitWord::periodic(period)
        }
    }

    /// Exact lexicographic comparison. Two ultimately periodic words that
    /// agree on their combined preperiods plus one aligned period are
    /// equal, so the comparison window is finite.
    pub fn lex_cmp(&self, other: &DigitWord) -> Ordering {
        let bound = self.preperiod.len().max(other.preperiod.len())
            + lcm(self.cycle_len(), other.cycle_len());
        for n in 0..bound {
            match self.digit_at(n).cmp(&other.digit_at(n)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Largest digit occurring in the word.
    pub fn max_digit(&self) -> u32 {
        self.preperiod
            .iter()
            .chain(self.period.iter())
            .copied()
            .max()
            .unwrap_or(0)
    }
}

fn reduce_to_primitive(period: &mut Vec<u32>) {
    let n = period.len();
    for len in 1..=n / 2 {
        if n % len == 0 && period[..n - len] == period[len..] {
            period.truncate(len);
            return;
        }
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for DigitWord {
    /// Digits space-separated with the period in parentheses, e.g.
    /// `0 1 (2 0)^w`; finite words print without the period part and the
    /// zero word prints as the empty string. Round-trips through the
    /// parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in &self.preperiod {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{d}")?;
            first = false;
        }
        if !self.period.is_empty() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "(")?;
            for (i, d) in self.period.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{d}")?;
            }
            write!(f, ")^w")?;
        }
        Ok(())
    }
}

impl FromStr for DigitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(DigitWord::zero());
        }
        let bad = |msg: &str| Error::Parse(format!("{msg} in digit word {s:?}"));
        let (pre_str, per_str) = match s.find('(') {
            None => (s, None),
            Some(open) => {
                let tail = &s[open + 1..];
                let close = tail.find(')').ok_or_else(|| bad("unclosed '('"))?;
                let after = tail[close + 1..].trim();
                if after != "^w" {
                    return Err(bad("expected ')^w' after period"));
                }
                (&s[..open], Some(&tail[..close]))
            }
        };
        let parse_digits = |part: &str| -> Result<Vec<u32>> {
            part.split_whitespace()
                .map(|tok| tok.parse::<u32>().map_err(|_| bad("bad digit")))
                .collect()
        };
        let preperiod = parse_digits(pre_str)?;
        let period = match per_str {
            None => Vec::new(),
            Some(p) => {
                let digits = parse_digits(p)?;
                if digits.is_empty() {
                    return Err(bad("empty period"));
                }
                digits
            }
        };
        Ok(DigitWord::new(preperiod, period))
    }
}
