//! Finite automata recognizing the factor language of the lazy (and
//! greedy) shift of an alternate base.
//!
//! For an alternate base of length `p` whose quasi-lazy words are all
//! ultimately periodic `ℓ_0^{(i)} ⋯ (ℓ_{m_i}^{(i)} ⋯ ℓ_{m_i+n_i-1}^{(i)})^ω`
//! (with `n_i` inflated to a multiple of `p`), the automaton has states
//! `q_{i,j,k}` with `j = (i+k) mod p`, one initial state `q_{i,i,0}` per
//! phase, every state final, and two kinds of transitions from `q_{i,j,k}`:
//! following the spine digit `ℓ_k^{(i)}` advances `k` (wrapping the period
//! back to `m_i`), while any strictly larger digit up to the alphabet
//! maximum `⌈β_j⌉ − 1` resets to `q_{(j+1) mod p, (j+1) mod p, 0}`. The
//! greedy automaton is the same picture over the complemented digits
//! `t_k^{(i)} = ⌈β_{i+k}⌉ − 1 − ℓ_k^{(i)}` with resets on strictly smaller
//! digits.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::bases::CantorBase;
use crate::error::{Error, Result};
use crate::expansion::{lazy_prefix_interval, quasi_lazy_word, PrefixConstraint, PrefixWalker};
use crate::words::lcm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutomatonKind {
    Greedy,
    Lazy,
}

/// Deterministic automaton over the digit alphabet with states `q_{i,j,k}`;
/// all states are final and there is one initial state per phase.
#[derive(Clone, Debug)]
pub struct ShiftAutomaton {
    kind: AutomatonKind,
    p: usize,
    /// `(m_i, n_i)` per phase, with `p | n_i`.
    shape: Vec<(usize, usize)>,
    /// Digit rows per phase (`ℓ` for lazy, `t` for greedy), length
    /// `m_i + n_i`.
    rows: Vec<Vec<u32>>,
    /// Alphabet maximum per phase.
    maxima: Vec<u32>,
    states: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
    transitions: Vec<BTreeMap<u32, usize>>,
}

impl ShiftAutomaton {
    pub fn kind(&self) -> AutomatonKind {
        self.kind
    }

    pub fn period_len(&self) -> usize {
        self.p
    }

    pub fn shape(&self) -> &[(usize, usize)] {
        &self.shape
    }

    pub fn states(&self) -> &[(usize, usize, usize)] {
        &self.states
    }

    /// The digit rows the construction follows: the quasi-lazy digits
    /// `ℓ_k^{(i)}` for the lazy automaton, their complements `t_k^{(i)}`
    /// for the greedy one.
    pub fn digit_rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial_states(&self) -> Vec<usize> {
        (0..self.p).map(|i| self.index[&(i, i, 0)]).collect()
    }

    /// Successor under one digit, if defined.
    pub fn step(&self, state: usize, digit: u32) -> Option<usize> {
        self.transitions[state].get(&digit).copied()
    }

    fn run_from(&self, start: usize, word: &[u32]) -> bool {
        let mut state = start;
        for &d in word {
            match self.step(state, d) {
                Some(next) => state = next,
                None => return false,
            }
        }
        true
    }

    /// Whether the word labels a path from some initial state; since all
    /// states are final this is factor-language membership.
    pub fn accepts(&self, word: &[u32]) -> bool {
        self.initial_states()
            .into_iter()
            .any(|q| self.run_from(q, word))
    }

    /// DOT rendering: one edge per (source, target) pair with the digit
    /// labels comma-joined, initial states marked by arrows from
    /// point-shaped pseudo-nodes.
    pub fn to_dot(&self) -> String {
        let name = match self.kind {
            AutomatonKind::Greedy => "greedy_shift",
            AutomatonKind::Lazy => "lazy_shift",
        };
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  node [shape=circle];");
        for i in 0..self.p {
            let _ = writeln!(out, "  init_{i} [shape=point, label=\"\"];");
        }
        for i in 0..self.p {
            let _ = writeln!(out, "  init_{i} -> q_{i}_{i}_0;");
        }
        for (idx, &(i, j, k)) in self.states.iter().enumerate() {
            let mut grouped: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
            for (&digit, &target) in &self.transitions[idx] {
                grouped.entry(target).or_default().push(digit);
            }
            for (target, digits) in grouped {
                let (ti, tj, tk) = self.states[target];
                let labels: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                let _ = writeln!(
                    out,
                    "  q_{i}_{j}_{k} -> q_{ti}_{tj}_{tk} [label=\"{}\"];",
                    labels.join(",")
                );
            }
        }
        out.push_str("}\n");
        out
    }

    /// Plain-text transition table, one sorted `i j k digit -> i' j' k'`
    /// line per transition.
    pub fn to_table(&self) -> String {
        let mut lines: Vec<(usize, usize, usize, u32, String)> = Vec::new();
        for (idx, &(i, j, k)) in self.states.iter().enumerate() {
            for (&digit, &target) in &self.transitions[idx] {
                let (ti, tj, tk) = self.states[target];
                lines.push((i, j, k, digit, format!("{ti} {tj} {tk}")));
            }
        }
        lines.sort();
        let mut out = String::new();
        for (i, j, k, digit, target) in lines {
            let _ = writeln!(out, "{i} {j} {k} {digit} -> {target}");
        }
        out
    }

    /// Merges bisimilar states (partition refinement over the partial
    /// transition structure; every state is final, so only the defined
    /// digits and their targets distinguish states). Off the construction
    /// path so state counts match the unminimized picture.
    pub fn minimized(&self) -> MinimizedAutomaton {
        let n = self.states.len();
        let mut class: Vec<usize> = vec![0; n];
        loop {
            let mut signatures: HashMap<(usize, Vec<(u32, usize)>), usize> = HashMap::new();
            let mut next: Vec<usize> = Vec::with_capacity(n);
            for idx in 0..n {
                let sig: Vec<(u32, usize)> = self.transitions[idx]
                    .iter()
                    .map(|(&d, &t)| (d, class[t]))
                    .collect();
                let key = (class[idx], sig);
                let fresh = signatures.len();
                next.push(*signatures.entry(key).or_insert(fresh));
            }
            if next == class {
                break;
            }
            class = next;
        }
        let count = class.iter().max().map_or(0, |m| m + 1);
        let mut transitions: Vec<BTreeMap<u32, usize>> = vec![BTreeMap::new(); count];
        for idx in 0..n {
            for (&d, &t) in &self.transitions[idx] {
                transitions[class[idx]].insert(d, class[t]);
            }
        }
        let mut initials: Vec<usize> = self
            .initial_states()
            .into_iter()
            .map(|q| class[q])
            .collect();
        initials.sort_unstable();
        initials.dedup();
        MinimizedAutomaton {
            initials,
            transitions,
        }
    }
}

/// Result of merging bisimilar states of a [`ShiftAutomaton`].
#[derive(Clone, Debug)]
pub struct MinimizedAutomaton {
    pub initials: Vec<usize>,
    pub transitions: Vec<BTreeMap<u32, usize>>,
}

impl MinimizedAutomaton {
    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn accepts(&self, word: &[u32]) -> bool {
        'outer: for &start in &self.initials {
            let mut state = start;
            for &d in word {
                match self.transitions[state].get(&d) {
                    Some(&next) => state = next,
                    None => continue 'outer,
                }
            }
            return true;
        }
        word.is_empty() && self.initials.is_empty()
    }
}

fn quasi_lazy_rows(base: &CantorBase, cap: usize) -> Result<(Vec<(usize, usize)>, Vec<Vec<u32>>)> {
    let p = base.period_len().unwrap();
    let mut shape = Vec::with_capacity(p);
    let mut rows = Vec::with_capacity(p);
    for i in 0..p {
        let word = quasi_lazy_word(&base.shifted(i), cap).map_err(|e| match e {
            Error::PeriodNotFound(steps) => Error::PeriodNotFoundAtShift {
                shift: i,
                cap: steps,
            },
            other => other,
        })?;
        let m = word.preperiod().len();
        let n = lcm(word.period().len().max(1), p);
        shape.push((m, n));
        rows.push(word.prefix(m + n));
    }
    Ok((shape, rows))
}

fn build(base: &CantorBase, cap: usize, kind: AutomatonKind) -> Result<ShiftAutomaton> {
    if !base.is_alternate() {
        return Err(Error::UnsupportedBase(
            "shift automata are built for alternate bases",
        ));
    }
    let p = base.period_len().unwrap();
    let maxima: Vec<u32> = (0..p).map(|j| base.max_digit(j)).collect();
    let (shape, lazy_rows) = quasi_lazy_rows(base, cap)?;
    let rows: Vec<Vec<u32>> = match kind {
        AutomatonKind::Lazy => lazy_rows,
        AutomatonKind::Greedy => lazy_rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(k, &l)| maxima[(i + k) % p] - l)
                    .collect()
            })
            .collect(),
    };

    let mut states = Vec::new();
    let mut index = HashMap::new();
    for (i, &(m, n)) in shape.iter().enumerate() {
        for k in 0..m + n {
            let j = (i + k) % p;
            index.insert((i, j, k), states.len());
            states.push((i, j, k));
        }
    }

    let mut transitions: Vec<BTreeMap<u32, usize>> = vec![BTreeMap::new(); states.len()];
    for (idx, &(i, j, k)) in states.iter().enumerate() {
        let (m, n) = shape[i];
        let spine_digit = rows[i][k];
        let k_next = if k + 1 < m + n { k + 1 } else { m };
        let spine_target = index[&(i, (j + 1) % p, k_next)];
        let prev = transitions[idx].insert(spine_digit, spine_target);
        debug_assert!(prev.is_none());
        let reset_target = index[&((j + 1) % p, (j + 1) % p, 0)];
        let reset_range = match kind {
            AutomatonKind::Lazy => {
                if spine_digit < maxima[j] {
                    spine_digit + 1..=maxima[j]
                } else {
                    #[allow(clippy::reversed_empty_ranges)]
                    {
                        1..=0
                    }
                }
            }
            AutomatonKind::Greedy => {
                if spine_digit > 0 {
                    0..=spine_digit - 1
                } else {
                    #[allow(clippy::reversed_empty_ranges)]
                    {
                        1..=0
                    }
                }
            }
        };
        for digit in reset_range {
            let prev = transitions[idx].insert(digit, reset_target);
            assert!(prev.is_none(), "nondeterministic transition");
        }
    }

    let automaton = ShiftAutomaton {
        kind,
        p,
        shape,
        rows,
        maxima,
        states,
        index,
        transitions,
    };
    debug_assert!(automaton.all_states_accessible());
    Ok(automaton)
}

impl ShiftAutomaton {
    /// Every retained state `q_{i,j,k}` has `j = (i+k) mod p` and is
    /// reachable from an initial state.
    fn all_states_accessible(&self) -> bool {
        if self
            .states
            .iter()
            .any(|&(i, j, k)| (i + k) % self.p != j)
        {
            return false;
        }
        let mut seen = vec![false; self.states.len()];
        let mut stack = self.initial_states();
        while let Some(q) = stack.pop() {
            if std::mem::replace(&mut seen[q], true) {
                continue;
            }
            stack.extend(self.transitions[q].values().copied());
        }
        seen.into_iter().all(|s| s)
    }

    #[cfg(test)]
    fn with_relabeled_edge(&self, state: usize, from: u32, to: u32) -> ShiftAutomaton {
        let mut copy = self.clone();
        let target = copy.transitions[state].remove(&from).unwrap();
        copy.transitions[state].insert(to, target);
        copy
    }
}

/// Automaton recognizing the factors of the lazy shift.
pub fn build_lazy_automaton(base: &CantorBase, cap: usize) -> Result<ShiftAutomaton> {
    build(base, cap, AutomatonKind::Lazy)
}

/// Automaton recognizing the factors of the greedy shift; shares its state
/// set with the lazy one.
pub fn build_greedy_automaton(base: &CantorBase, cap: usize) -> Result<ShiftAutomaton> {
    build(base, cap, AutomatonKind::Greedy)
}

/// Verifies the digit-complement duality between the greedy and lazy
/// automata: `δ(q_{i,j,k}, a) = q'` iff `δ'(q_{i,j,k}, ⌈β_{i+k}⌉−1−a) = q'`,
/// in both directions over every state.
pub fn check_complement_duality(greedy: &ShiftAutomaton, lazy: &ShiftAutomaton) -> Result<bool> {
    if greedy.kind != AutomatonKind::Greedy || lazy.kind != AutomatonKind::Lazy {
        return Err(Error::ShapeMismatch);
    }
    if greedy.p != lazy.p || greedy.shape != lazy.shape || greedy.maxima != lazy.maxima {
        return Err(Error::ShapeMismatch);
    }
    for (idx, &(i, _, k)) in greedy.states.iter().enumerate() {
        let max = greedy.maxima[(i + k) % greedy.p];
        for a in 0..=max {
            if greedy.step(idx, a) != lazy.step(idx, max - a) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Independent factor-language oracle: a word is a factor of the lazy
/// shift iff it is a prefix of a lazy expansion of one of the `p` shifted
/// bases, decided through the exact digit-recursion intervals.
pub fn factor_oracle(base: &CantorBase, word: &[u32]) -> Result<bool> {
    let p = base.period_len().ok_or(Error::UnsupportedBase(
        "factor oracle needs an alternate base",
    ))?;
    for i in 0..p {
        if lazy_prefix_interval(&base.shifted(i), word)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of the soficity decision for the lazy shift of an alternate
/// base.
#[derive(Debug)]
pub enum SoficityReport {
    /// All quasi-lazy words are ultimately periodic; the automaton's
    /// language agreed with the factor oracle on every word up to the
    /// validation length.
    Sofic(ShiftAutomaton),
    /// Some period searches were exhausted. Aperiodicity (hence
    /// non-soficity) is not certified, only bounded-search failure; the
    /// listed shifts are the evidence.
    NotDecidedWithinCap { cap: usize, failed_shifts: Vec<usize> },
}

/// Decides soficity of the lazy shift: sofic iff every shifted base has an
/// ultimately periodic quasi-lazy word. On success the constructed
/// automaton is validated against [`factor_oracle`] on all words of length
/// up to `validation_len`.
pub fn decide_soficity(
    base: &CantorBase,
    cap: usize,
    validation_len: usize,
) -> Result<SoficityReport> {
    if !base.is_alternate() {
        return Err(Error::UnsupportedBase(
            "soficity decision applies to alternate bases",
        ));
    }
    let p = base.period_len().unwrap();
    let failed_shifts: Vec<usize> = (0..p)
        .filter(|&i| quasi_lazy_word(&base.shifted(i), cap).is_err())
        .collect();
    if !failed_shifts.is_empty() {
        return Ok(SoficityReport::NotDecidedWithinCap { cap, failed_shifts });
    }
    let automaton = build_lazy_automaton(base, cap)?;
    validate_against_oracle(base, &automaton, validation_len)?;
    Ok(SoficityReport::Sofic(automaton))
}

/// Exhaustively compares automaton acceptance with the factor oracle on
/// all words up to `max_len`, walking the prefix tree with incremental
/// interval constraints. Both languages are prefix-closed, so subtrees
/// below a word rejected by both sides agree throughout and need no
/// visit.
pub fn validate_against_oracle(
    base: &CantorBase,
    automaton: &ShiftAutomaton,
    max_len: usize,
) -> Result<()> {
    let p = base.period_len().unwrap();
    let sup = base.sup_digit();
    let shifted: Vec<CantorBase> = (0..p).map(|i| base.shifted(i)).collect();
    let mut walkers: Vec<PrefixWalker> = Vec::with_capacity(p);
    for b in &shifted {
        walkers.push(PrefixWalker::new(b)?);
    }
    let roots: Vec<Option<PrefixConstraint>> = walkers
        .iter_mut()
        .map(|w| Some(w.root()))
        .collect();
    let mut stack: Vec<(Vec<u32>, Vec<Option<PrefixConstraint>>)> = vec![(Vec::new(), roots)];
    while let Some((word, nodes)) = stack.pop() {
        let by_automaton = automaton.accepts(&word);
        let by_oracle = nodes.iter().any(|n| n.is_some());
        if by_automaton != by_oracle {
            return Err(Error::ValidationMismatch(format!(
                "word {word:?}: automaton {by_automaton}, oracle {by_oracle}"
            )));
        }
        if by_oracle && word.len() < max_len {
            for d in 0..=sup {
                let mut next_word = word.clone();
                next_word.push(d);
                let next_nodes: Vec<Option<PrefixConstraint>> = nodes
                    .iter()
                    .enumerate()
                    .map(|(i, n)| n.as_ref().and_then(|n| walkers[i].extend(n, d)))
                    .collect();
                stack.push((next_word, next_nodes));
            }
        }
    }
    Ok(())
}
