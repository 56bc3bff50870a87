//! Finitely described Cantor real bases.
//!
//! A Cantor real base is a sequence `(β_n)` of reals greater than one with
//! divergent partial products. Two families are constructible here, both
//! taking finitely many values (which keeps the largest representable value
//! finite, as the lazy algorithm requires):
//!
//! * eventually periodic sequences (with the purely periodic case called an
//!   *alternate* base), where everything is computed exactly;
//! * sequences following the Thue–Morse word over two values `{α, β}`,
//!   where the largest representable value is generally outside any
//!   quadratic field and is handled through rigorous enclosures.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{AdaptiveEnclosure, ExactReal, RealInterval};

/// Structural position of an index inside an eventually periodic base:
/// either within the preperiod or a phase of the period. Two indices with
/// the same structural position see identical base tails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructuralPos {
    Pre(usize),
    Per(usize),
}

/// A finitely described Cantor real base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CantorBase {
    EventuallyPeriodic {
        preperiod: Vec<ExactReal>,
        period: Vec<ExactReal>,
    },
    /// Entry `n` is `alpha` when the binary expansion of `offset + n` has
    /// an even number of ones, `beta` otherwise. The offset makes shifted
    /// bases representable (the shift of a Thue–Morse word is generally
    /// not Thue–Morse).
    ThueMorse {
        alpha: ExactReal,
        beta: ExactReal,
        offset: u64,
    },
}

fn check_entry(entry: &ExactReal) -> Result<()> {
    if entry.compare(&ExactReal::one())? != Ordering::Greater {
        return Err(Error::InvalidNumber(format!(
            "base entry {entry} must exceed 1"
        )));
    }
    Ok(())
}

fn check_single_field(entries: &[&ExactReal]) -> Result<()> {
    let mut field = None;
    for e in entries {
        match (field, e.field()) {
            (_, None) => {}
            (None, f) => field = f,
            (Some(d1), Some(d2)) if d1 == d2 => {}
            _ => return Err(Error::MixedFields),
        }
    }
    Ok(())
}

impl CantorBase {
    /// An eventually periodic base; the period must be non-empty and all
    /// entries must exceed one and live in a single quadratic field.
    pub fn eventually_periodic(preperiod: Vec<ExactReal>, period: Vec<ExactReal>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidNumber("empty base period".into()));
        }
        let all: Vec<&ExactReal> = preperiod.iter().chain(period.iter()).collect();
        check_single_field(&all)?;
        for e in &all {
            check_entry(e)?;
        }
        Ok(CantorBase::EventuallyPeriodic { preperiod, period })
    }

    /// A purely periodic (alternate) base.
    pub fn alternate(entries: Vec<ExactReal>) -> Result<Self> {
        CantorBase::eventually_periodic(Vec::new(), entries)
    }

    /// The constant base `(β, β, …)`.
    pub fn constant(entry: ExactReal) -> Result<Self> {
        CantorBase::alternate(vec![entry])
    }

    /// The base following the Thue–Morse word over `{alpha, beta}`.
    pub fn thue_morse(alpha: ExactReal, beta: ExactReal) -> Result<Self> {
        check_single_field(&[&alpha, &beta])?;
        check_entry(&alpha)?;
        check_entry(&beta)?;
        Ok(CantorBase::ThueMorse {
            alpha,
            beta,
            offset: 0,
        })
    }

    pub fn is_eventually_periodic(&self) -> bool {
        matches!(self, CantorBase::EventuallyPeriodic { .. })
    }

    /// A purely periodic base with no preperiod.
    pub fn is_alternate(&self) -> bool {
        matches!(
            self,
            CantorBase::EventuallyPeriodic { preperiod, .. } if preperiod.is_empty()
        )
    }

    pub fn period_len(&self) -> Option<usize> {
        match self {
            CantorBase::EventuallyPeriodic { period, .. } => Some(period.len()),
            CantorBase::ThueMorse { .. } => None,
        }
    }

    pub fn preperiod_len(&self) -> Option<usize> {
        match self {
            CantorBase::EventuallyPeriodic { preperiod, .. } => Some(preperiod.len()),
            CantorBase::ThueMorse { .. } => None,
        }
    }

    /// The radicand of the common quadratic field of the entries, if any.
    pub fn field(&self) -> Option<u64> {
        match self {
            CantorBase::EventuallyPeriodic { preperiod, period } => preperiod
                .iter()
                .chain(period.iter())
                .find_map(|e| e.field()),
            CantorBase::ThueMorse { alpha, beta, .. } => alpha.field().or(beta.field()),
        }
    }

    /// The `n`-th base entry `β_n`.
    pub fn entry(&self, n: usize) -> ExactReal {
        match self {
            CantorBase::EventuallyPeriodic { preperiod, period } => {
                if n < preperiod.len() {
                    preperiod[n].clone()
                } else {
                    period[(n - preperiod.len()) % period.len()].clone()
                }
            }
            CantorBase::ThueMorse {
                alpha,
                beta,
                offset,
            } => {
                let idx = offset + n as u64;
                if idx.count_ones() % 2 == 0 {
                    alpha.clone()
                } else {
                    beta.clone()
                }
            }
        }
    }

    /// The base `(β_n, β_{n+1}, …)` starting at index `n`.
    pub fn shifted(&self, n: usize) -> CantorBase {
        match self {
            CantorBase::EventuallyPeriodic { preperiod, period } => {
                if n <= preperiod.len() {
                    CantorBase::EventuallyPeriodic {
                        preperiod: preperiod[n..].to_vec(),
                        period: period.clone(),
                    }
                } else {
                    let mut period = period.clone();
                    let rot = (n - preperiod.len()) % period.len();
                    period.rotate_left(rot);
                    CantorBase::EventuallyPeriodic {
                        preperiod: Vec::new(),
                        period,
                    }
                }
            }
            CantorBase::ThueMorse {
                alpha,
                beta,
                offset,
            } => CantorBase::ThueMorse {
                alpha: alpha.clone(),
                beta: beta.clone(),
                offset: offset + n as u64,
            },
        }
    }

    /// Structural position of index `n`; `None` for Thue–Morse bases,
    /// whose shifts are pairwise distinct.
    pub fn structural_pos(&self, n: usize) -> Option<StructuralPos> {
        match self {
            CantorBase::EventuallyPeriodic { preperiod, period } => {
                if n < preperiod.len() {
                    Some(StructuralPos::Pre(n))
                } else {
                    Some(StructuralPos::Per((n - preperiod.len()) % period.len()))
                }
            }
            CantorBase::ThueMorse { .. } => None,
        }
    }

    /// Canonical representative of the shift amount `n`: shifts beyond the
    /// preperiod repeat with the period length. Only meaningful for
    /// eventually periodic bases.
    pub fn structural_shift(&self, n: usize) -> Option<usize> {
        match self {
            CantorBase::EventuallyPeriodic { preperiod, period } => {
                let pp = preperiod.len();
                if n <= pp {
                    Some(n)
                } else {
                    Some(pp + (n - pp) % period.len())
                }
            }
            CantorBase::ThueMorse { .. } => None,
        }
    }

    /// Alphabet maximum `⌈β_n⌉ − 1` at position `n`.
    pub fn max_digit(&self, n: usize) -> u32 {
        let c = self.entry(n).ceil_exact();
        (c - BigInt::one())
            .to_u32()
            .expect("alphabet maximum exceeds u32")
    }

    /// The distinct entry values of the base.
    fn value_set(&self) -> Vec<ExactReal> {
        match self {
            CantorBase::EventuallyPeriodic { preperiod, period } => {
                let mut vals: Vec<ExactReal> = Vec::new();
                for e in preperiod.iter().chain(period.iter()) {
                    if !vals.contains(e) {
                        vals.push(e.clone());
                    }
                }
                vals
            }
            CantorBase::ThueMorse { alpha, beta, .. } => {
                if alpha == beta {
                    vec![alpha.clone()]
                } else {
                    vec![alpha.clone(), beta.clone()]
                }
            }
        }
    }

    /// Smallest entry value; strictly exceeds one.
    pub fn min_entry(&self) -> ExactReal {
        let vals = self.value_set();
        let mut min = vals[0].clone();
        for v in &vals[1..] {
            min = min.min_of(v);
        }
        min
    }

    /// Largest alphabet maximum over all positions.
    pub fn sup_digit(&self) -> u32 {
        self.value_set()
            .iter()
            .map(|e| {
                (e.ceil_exact() - BigInt::one())
                    .to_u32()
                    .expect("alphabet maximum exceeds u32")
            })
            .max()
            .expect("base has at least one entry")
    }

    /// The largest representable value `x_β = Σ (⌈β_n⌉−1)/(β_0⋯β_n)`,
    /// computed exactly for eventually periodic bases.
    ///
    /// The purely periodic tail satisfies a cyclic linear system coming
    /// from `x_{β^{(n)}} = (x_{β^{(n+1)}} + ⌈β_n⌉ − 1)/β_n`, whose solution
    /// is well defined because the period product exceeds one; the
    /// preperiod is then unwound with the same recursion.
    pub fn max_value_exact(&self) -> Result<ExactReal> {
        match self {
            CantorBase::ThueMorse { .. } => Err(Error::UnsupportedBase(
                "exact largest representable value needs an eventually periodic base",
            )),
            CantorBase::EventuallyPeriodic { preperiod, period } => {
                let max_term = |e: &ExactReal| ExactReal::from_bigint(e.ceil_exact() - 1);
                // numerator Σ_i M_i Π_{k>i} β_k and denominator Π β_k − 1
                let mut weighted = ExactReal::zero();
                let mut prod = ExactReal::one();
                for e in period.iter().rev() {
                    weighted = &weighted + &(&max_term(e) * &prod);
                    prod = &prod * e;
                }
                let mut x = &weighted / &(&prod - &ExactReal::one());
                for e in preperiod.iter().rev() {
                    x = &(&x + &max_term(e)) / e;
                }
                Ok(x)
            }
        }
    }

    /// Rigorous enclosure of the largest representable value from a
    /// partial sum of `terms` series terms plus a geometric tail bound
    /// (valid because entries come from a finite set, so the partial
    /// products grow at least geometrically).
    pub fn max_value_series(&self, terms: usize) -> RealInterval {
        let mut series = MaxValueSeries::new(self);
        series.extend_to(terms);
        series.enclosure(32 + 4 * terms as u32)
    }

    /// Adaptive enclosure of the largest representable value, suitable for
    /// ceiling decisions; successive refinements are nested.
    pub fn max_value_adaptive(&self) -> AdaptiveEnclosure<impl FnMut(u32) -> RealInterval> {
        let mut series = MaxValueSeries::new(self);
        AdaptiveEnclosure::new(move |level| {
            // effort grows geometrically then saturates: past this point
            // denominators dominate the cost and deciders should give up
            let step = 1usize << level.min(8);
            series.extend_to(16 * step);
            series.enclosure(64 * step as u32)
        })
    }
}

/// Incremental partial sums of `Σ (⌈β_n⌉−1)/(β_0⋯β_n)` with a geometric
/// tail bound.
pub struct MaxValueSeries {
    base: CantorBase,
    terms: usize,
    partial: ExactReal,
    prod: ExactReal,
    /// `sup_digit / (min_entry − 1)`, the tail bound before dividing by
    /// the partial product.
    tail_factor: ExactReal,
}

impl MaxValueSeries {
    pub fn new(base: &CantorBase) -> Self {
        let sup = ExactReal::from_integer(base.sup_digit() as i64);
        let tail_factor = &sup / &(&base.min_entry() - &ExactReal::one());
        MaxValueSeries {
            base: base.clone(),
            terms: 0,
            partial: ExactReal::zero(),
            prod: ExactReal::one(),
            tail_factor,
        }
    }

    pub fn extend_to(&mut self, terms: usize) {
        while self.terms < terms {
            let entry = self.base.entry(self.terms);
            let max = ExactReal::from_bigint(entry.ceil_exact() - 1);
            self.prod = &self.prod * &entry;
            self.partial = &self.partial + &(&max / &self.prod);
            self.terms += 1;
        }
    }

    /// Current enclosure `[partial, partial + tail]`, rationalized
    /// outward at the given precision.
    pub fn enclosure(&self, bits: u32) -> RealInterval {
        let tail = &self.tail_factor / &self.prod;
        let hi = &self.partial + &tail;
        RealInterval::new(
            self.partial.enclosure(bits).lo().clone(),
            hi.enclosure(bits).hi().clone(),
        )
    }
}

/// Enclosure of width ≤ `tol` of the lacunary product
/// `Π_{k≥1} (1 − z^{2^{k-1}})` for exact `0 < z < 1`.
///
/// The truncated product is exact in the field of `z`; the remaining
/// factors lie in `(1 − z^{2^K}/(1−z), 1]`, which bounds the truncation
/// error rigorously.
pub fn lacunary_product_value(z: &ExactReal, tol: &BigRational) -> Result<RealInterval> {
    if tol <= &BigRational::zero() {
        return Err(Error::InvalidTolerance);
    }
    if !z.is_positive() || z.compare(&ExactReal::one())? != Ordering::Less {
        return Err(Error::OutOfDomain("product argument must be in (0,1)".into()));
    }
    let one = ExactReal::one();
    let gap = &one - z;
    let mut product = ExactReal::one();
    let mut power = z.clone(); // z^{2^{k-1}} for the next factor
    let mut factors = 0u32;
    let mut enc = AdaptiveEnclosure::new(move |level| {
        while factors < 4 + 2 * level {
            product = &product * &(&one - &power);
            power = &power * &power;
            factors += 1;
        }
        let err = &power / &gap;
        let lo = &product * &(&one - &err);
        let bits = 64 * (level + 1);
        RealInterval::new(
            lo.enclosure(bits).lo().clone(),
            product.enclosure(bits).hi().clone(),
        )
    });
    enc.refine_until_width(tol, 64)?;
    Ok(enc.current().clone())
}

/// Enclosure of width ≤ `tol` of the largest representable value of the
/// Thue–Morse base over `{alpha, beta}`, via the closed form
/// `(x₁+y₁)/2 · 1/(1 − 1/(αβ)) + (x₁−y₁)/2 · f(1/(αβ))` where `x₁`, `y₁`
/// are the two-term partial sums of the base and its letter swap, and `f`
/// is the lacunary product above.
pub fn thue_morse_max_value(
    alpha: &ExactReal,
    beta: &ExactReal,
    tol: &BigRational,
) -> Result<RealInterval> {
    if tol <= &BigRational::zero() {
        return Err(Error::InvalidTolerance);
    }
    check_single_field(&[alpha, beta])?;
    check_entry(alpha)?;
    check_entry(beta)?;
    let max_a = ExactReal::from_bigint(alpha.ceil_exact() - 1);
    let max_b = ExactReal::from_bigint(beta.ceil_exact() - 1);
    let prod = alpha.try_mul(beta)?;
    let z = ExactReal::one().try_div(&prod)?;
    let x1 = &(&max_a / alpha) + &(&max_b / &prod);
    let y1 = &(&max_b / beta) + &(&max_a / &prod);
    let two = ExactReal::from_integer(2);
    let sym = &(&x1 + &y1) / &two;
    let skew = &(&x1 - &y1) / &two;
    let geometric = &sym / &(&ExactReal::one() - &z);

    let half = tol / BigRational::from_integer(BigInt::from(2));
    // bound |skew| away from the tolerance split
    let skew_bound = skew.abs().enclosure(64).hi().clone() + BigRational::one();
    let product_iv = lacunary_product_value(&z, &(&half / &skew_bound))?;

    let mut bits = 128;
    loop {
        let skew_iv = skew.enclosure(bits);
        let term = skew_iv.mul(&product_iv);
        let total = geometric.enclosure(bits).add(&term);
        if total.width() <= *tol {
            return Ok(total);
        }
        if bits > 1 << 20 {
            return Err(Error::NeedsMorePrecision);
        }
        bits *= 2;
    }
}

impl fmt::Display for CantorBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CantorBase::EventuallyPeriodic { preperiod, period } => {
                let join = |es: &[ExactReal]| {
                    es.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                if preperiod.is_empty() {
                    write!(f, "alt: {}", join(period))
                } else {
                    write!(f, "evp: pre=[{}] per=[{}]", join(preperiod), join(period))
                }
            }
            CantorBase::ThueMorse {
                alpha,
                beta,
                offset,
            } => {
                write!(f, "tm: alpha={alpha} beta={beta}")?;
                if *offset != 0 {
                    write!(f, " offset={offset}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for CantorBase {
    type Err = Error;

    /// Accepts `alt: e0, e1, …`, `evp: pre=[…] per=[…]` and
    /// `tm: alpha=<e> beta=<e> [offset=<k>]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::Parse(format!("{msg} in base description {s:?}"));
        if let Some(rest) = s.strip_prefix("alt:") {
            let entries = parse_scalar_list(rest)?;
            if entries.is_empty() {
                return Err(bad("alternate base needs at least one entry"));
            }
            CantorBase::alternate(entries)
        } else if let Some(rest) = s.strip_prefix("evp:") {
            let pre_start = rest.find("pre=[").ok_or_else(|| bad("missing pre=[…]"))?;
            let pre_end = rest[pre_start..]
                .find(']')
                .map(|i| pre_start + i)
                .ok_or_else(|| bad("unclosed pre list"))?;
            let per_start = rest.find("per=[").ok_or_else(|| bad("missing per=[…]"))?;
            let per_end = rest[per_start..]
                .find(']')
                .map(|i| per_start + i)
                .ok_or_else(|| bad("unclosed per list"))?;
            let pre = parse_scalar_list(&rest[pre_start + 5..pre_end])?;
            let per = parse_scalar_list(&rest[per_start + 5..per_end])?;
            CantorBase::eventually_periodic(pre, per)
        } else if let Some(rest) = s.strip_prefix("tm:") {
            let mut alpha = None;
            let mut beta = None;
            let mut offset = 0u64;
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("alpha=") {
                    alpha = Some(v.parse::<ExactReal>()?);
                } else if let Some(v) = tok.strip_prefix("beta=") {
                    beta = Some(v.parse::<ExactReal>()?);
                } else if let Some(v) = tok.strip_prefix("offset=") {
                    offset = v.parse().map_err(|_| bad("bad offset"))?;
                } else {
                    return Err(bad("unexpected token"));
                }
            }
            let alpha = alpha.ok_or_else(|| bad("missing alpha="))?;
            let beta = beta.ok_or_else(|| bad("missing beta="))?;
            let base = CantorBase::thue_morse(alpha, beta)?;
            Ok(base.shifted(offset as usize))
        } else {
            Err(bad("expected 'alt:', 'evp:' or 'tm:' prefix"))
        }
    }
}

fn parse_scalar_list(s: &str) -> Result<Vec<ExactReal>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|tok| tok.parse::<ExactReal>()).collect()
}
