use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::RealInterval;

/// An exact element of `Q` or of a real quadratic field `Q(√d)`.
///
/// Rationals are kept in lowest terms with a positive denominator (enforced
/// by `BigRational`). A quadratic value `a + b√d` always has `b ≠ 0` and a
/// squarefree radicand `d ≥ 2`; any other combination is normalized away by
/// the constructors, so structural equality coincides with numerical
/// equality and the derived `Hash`/`Eq` are sound.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactReal {
    Rational(BigRational),
    Quadratic {
        a: BigRational,
        b: BigRational,
        d: u64,
    },
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactReal::Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        ExactReal::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ExactReal::Rational(BigRational::from_integer(n))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        ExactReal::Rational(r)
    }

    /// `num/den`, reduced. `den` must be non-zero.
    pub fn rational(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactReal::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `a + b√d`. Square factors of `d` are folded into `b`, so the stored
    /// radicand is squarefree; `d` a perfect square (or `b = 0`) collapses
    /// to a rational.
    pub fn quadratic(a: BigRational, b: BigRational, d: u64) -> Result<Self> {
        if b.is_zero() || d == 0 {
            return Ok(ExactReal::Rational(a));
        }
        if d == 1 {
            return Ok(ExactReal::Rational(a + b));
        }
        let (square_part, free_part) = split_square_factor(d);
        let b = b * BigRational::from_integer(BigInt::from(square_part));
        if free_part == 1 {
            return Ok(ExactReal::Rational(a + b));
        }
        Ok(ExactReal::Quadratic { a, b, d: free_part })
    }

    /// Convenience constructor for `(p + q√d)/r` with integer `p`, `q`, `r`.
    pub fn quadratic_parts(p: i64, q: i64, d: u64, r: i64) -> Result<Self> {
        assert!(r != 0, "zero denominator");
        let den = BigInt::from(r);
        ExactReal::quadratic(
            BigRational::new(BigInt::from(p), den.clone()),
            BigRational::new(BigInt::from(q), den),
            d,
        )
    }

    /// The radicand of the field this value needs, `None` for rationals.
    pub fn field(&self) -> Option<u64> {
        match self {
            ExactReal::Rational(_) => None,
            ExactReal::Quadratic { d, .. } => Some(*d),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactReal::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactReal::Rational(r) => Some(r),
            ExactReal::Quadratic { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactReal::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, ExactReal::Rational(r) if r.is_one())
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, ExactReal::Rational(r) if r.is_integer())
    }

    fn parts(&self) -> (BigRational, BigRational) {
        match self {
            ExactReal::Rational(r) => (r.clone(), BigRational::zero()),
            ExactReal::Quadratic { a, b, .. } => (a.clone(), b.clone()),
        }
    }

    /// Common radicand for a two-operand operation.
    fn common_field(&self, other: &Self) -> Result<Option<u64>> {
        match (self.field(), other.field()) {
            (None, f) | (f, None) => Ok(f),
            (Some(d1), Some(d2)) if d1 == d2 => Ok(Some(d1)),
            _ => Err(Error::MixedFields),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let field = self.common_field(other)?;
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        match field {
            None => Ok(ExactReal::Rational(a1 + a2)),
            Some(d) => ExactReal::quadratic(a1 + a2, b1 + b2, d),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let field = self.common_field(other)?;
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        match field {
            None => Ok(ExactReal::Rational(a1 - a2)),
            Some(d) => ExactReal::quadratic(a1 - a2, b1 - b2, d),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let field = self.common_field(other)?;
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        match field {
            None => Ok(ExactReal::Rational(a1 * a2)),
            Some(d) => {
                let radicand = BigRational::from_integer(BigInt::from(d));
                ExactReal::quadratic(&a1 * &a2 + &b1 * &b2 * radicand, a1 * b2 + b1 * a2, d)
            }
        }
    }

    /// Exact quotient; quadratic divisors are rationalized with the
    /// conjugate, whose norm `a² − b²d` is non-zero for non-zero operands
    /// since `d` is squarefree.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = self.common_field(other)?;
        match field {
            None => {
                let (a1, _) = self.parts();
                let (a2, _) = other.parts();
                Ok(ExactReal::Rational(a1 / a2))
            }
            Some(d) => {
                let (a2, b2) = other.parts();
                let radicand = BigRational::from_integer(BigInt::from(d));
                let norm = &a2 * &a2 - &b2 * &b2 * radicand;
                debug_assert!(!norm.is_zero());
                let conj = ExactReal::quadratic(a2 / &norm, -b2 / norm, d)?;
                self.try_mul(&conj)
            }
        }
    }

    pub fn negated(&self) -> Self {
        match self {
            ExactReal::Rational(r) => ExactReal::Rational(-r),
            ExactReal::Quadratic { a, b, d } => ExactReal::Quadratic {
                a: -a,
                b: -b,
                d: *d,
            },
        }
    }

    /// Exact sign, decided with integer arithmetic only. For `a + b√d` the
    /// sign follows from the signs of `a`, `b` and a comparison of `a²`
    /// with `b²d`.
    pub fn sign(&self) -> Ordering {
        match self {
            ExactReal::Rational(r) => r.cmp(&BigRational::zero()),
            ExactReal::Quadratic { a, b, d } => {
                let zero = BigRational::zero();
                let sa = a.cmp(&zero);
                let sb = b.cmp(&zero);
                debug_assert_ne!(sb, Ordering::Equal);
                match (sa, sb) {
                    (Ordering::Equal, s) => s,
                    (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
                    (Ordering::Less, Ordering::Less) => Ordering::Less,
                    (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                        let radicand = BigRational::from_integer(BigInt::from(*d));
                        let lhs = a * a;
                        let rhs = b * b * radicand;
                        // a > 0 > b: a + b√d > 0 ⟺ a² > b²d
                        if sa == Ordering::Greater {
                            lhs.cmp(&rhs)
                        } else {
                            rhs.cmp(&lhs)
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }

    /// Exact three-way comparison; errors on mixed fields.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        Ok(self.try_sub(other)?.sign())
    }

    /// Comparison for operands already known to share a field.
    pub fn cmp_same_field(&self, other: &Self) -> Ordering {
        self.compare(other)
            .expect("operands must lie in the same quadratic field")
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.negated()
        } else {
            self.clone()
        }
    }

    pub fn min_of(&self, other: &Self) -> Self {
        if self.cmp_same_field(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// The unique integer `n` with `n ≤ self < n + 1`.
    ///
    /// For quadratic values the enclosure is tightened until it separates
    /// from every integer; this terminates because a value with `b ≠ 0` is
    /// irrational.
    pub fn floor_exact(&self) -> BigInt {
        match self {
            ExactReal::Rational(r) => r.floor().to_integer(),
            ExactReal::Quadratic { .. } => {
                let mut bits = 16;
                loop {
                    let iv = self.enclosure(bits);
                    let lo = iv.lo().floor().to_integer();
                    let hi = iv.hi().floor().to_integer();
                    if lo == hi {
                        return lo;
                    }
                    bits *= 2;
                }
            }
        }
    }

    /// The smallest integer `≥ self`.
    pub fn ceil_exact(&self) -> BigInt {
        match self {
            ExactReal::Rational(r) => r.ceil().to_integer(),
            _ => -self.negated().floor_exact(),
        }
    }

    /// A rational enclosure of width at most `2^{-bits}`; exact
    /// (degenerate) for rationals. Enclosures at increased precision nest.
    pub fn enclosure(&self, bits: u32) -> RealInterval {
        match self {
            ExactReal::Rational(r) => RealInterval::point(r.clone()),
            ExactReal::Quadratic { a, b, d } => {
                // the root precision must absorb the magnitude of b, which
                // can be huge even when the represented value is small
                let magnitude =
                    (b.numer().bits() as i64 - b.denom().bits() as i64 + 2).max(0) as u32;
                let (sq_lo, sq_hi) = sqrt_bounds(*d, bits + magnitude);
                let (lo, hi) = if b.is_positive() {
                    (a + b * sq_lo, a + b * sq_hi)
                } else {
                    (a + b * sq_hi, a + b * sq_lo)
                };
                RealInterval::new(lo, hi)
            }
        }
    }
}

/// Rational bounds `lo ≤ √d ≤ hi` with `hi − lo = 2^{-bits}`, nested as
/// `bits` increases.
fn sqrt_bounds(d: u64, bits: u32) -> (BigRational, BigRational) {
    let scaled = BigInt::from(d) << (2 * bits);
    let root = scaled.sqrt();
    let denom = BigInt::one() << bits;
    (
        BigRational::new(root.clone(), denom.clone()),
        BigRational::new(root + 1, denom),
    )
}

/// `d = s² · f` with `f` squarefree; returns `(s, f)`.
///
/// Trial division is capped; for a remaining cofactor the perfect-square
/// case is still detected, which covers every radicand of practical size.
fn split_square_factor(d: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut f = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= f && p < (1 << 20) {
        while f % (p * p) == 0 {
            f /= p * p;
            s *= p;
        }
        p += 1;
    }
    let r = f.isqrt();
    if r > 1 && r * r == f {
        s *= r;
        f = 1;
    }
    (s, f)
}

macro_rules! ref_binop {
    ($trait:ident, $method:ident, $try_method:ident) => {
        impl $trait for &ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: &ExactReal) -> ExactReal {
                self.$try_method(rhs)
                    .expect("operands must lie in the same quadratic field")
            }
        }
        impl $trait for ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: ExactReal) -> ExactReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactReal> for ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: &ExactReal) -> ExactReal {
                (&self).$method(rhs)
            }
        }
    };
}

ref_binop!(Add, add, try_add);
ref_binop!(Sub, sub, try_sub);
ref_binop!(Mul, mul, try_mul);
ref_binop!(Div, div, try_div);

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        self.negated()
    }
}

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        self.negated()
    }
}

impl fmt::Display for ExactReal {
    /// `p`, `p/q`, `(A+B*sqrt(d))/c` or `(A-B*sqrt(d))/c`; the quadratic
    /// form uses the least common denominator `c` of both coordinates and
    /// omits `/c` when `c = 1`. Round-trips through the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            ExactReal::Quadratic { a, b, d } => {
                let c = a.denom().lcm(b.denom());
                let num_a = a.numer() * (&c / a.denom());
                let num_b = b.numer() * (&c / b.denom());
                let sign = if num_b.is_negative() { '-' } else { '+' };
                let abs_b = num_b.abs();
                if c.is_one() {
                    write!(f, "({num_a}{sign}{abs_b}*sqrt({d}))")
                } else {
                    write!(f, "({num_a}{sign}{abs_b}*sqrt({d}))/{c}")
                }
            }
        }
    }
}

impl FromStr for ExactReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_exact_real(s)
    }
}

/// Parses `p`, `p/q`, `(a+b*sqrt(d))/c`, `(a-b*sqrt(d))/c`, or the same
/// quadratic forms without the trailing `/c`.
fn parse_exact_real(input: &str) -> Result<ExactReal> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let s = compact.as_str();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    let bad = |msg: &str| Error::Parse(format!("{msg} in {input:?}"));

    if let Some(rest) = s.strip_prefix('(') {
        // the outermost ')' is the last one; an inner one closes the sqrt
        let (inner, denom) = match rest.rsplit_once(')') {
            Some((inner, tail)) => {
                let denom = if tail.is_empty() {
                    BigInt::one()
                } else {
                    let digits = tail
                        .strip_prefix('/')
                        .ok_or_else(|| bad("expected /denominator after ')'"))?;
                    parse_int(digits).ok_or_else(|| bad("bad denominator"))?
                };
                (inner, denom)
            }
            None => return Err(bad("unclosed '('")),
        };
        if denom.is_zero() {
            return Err(bad("zero denominator"));
        }
        // inner is a ± b*sqrt(d); find the sign that separates the terms
        // (skip a leading sign belonging to a).
        let sep = inner
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .ok_or_else(|| bad("expected 'a+b*sqrt(d)' form"))?;
        let (a_str, tail) = (&inner[..sep.0], &inner[sep.0 + 1..]);
        let b_str = tail
            .strip_suffix(')')
            .and_then(|t| t.split_once("*sqrt("))
            .ok_or_else(|| bad("expected 'b*sqrt(d)'"))?;
        let a_num = parse_int(a_str).ok_or_else(|| bad("bad rational coordinate"))?;
        let mut b_num = parse_int(b_str.0).ok_or_else(|| bad("bad radical coefficient"))?;
        if sep.1 == '-' {
            b_num = -b_num;
        }
        let d: u64 = b_str
            .1
            .parse()
            .map_err(|_| bad("bad radicand"))?;
        ExactReal::quadratic(
            BigRational::new(a_num, denom.clone()),
            BigRational::new(b_num, denom),
            d,
        )
    } else {
        match s.split_once('/') {
            None => {
                let n = parse_int(s).ok_or_else(|| bad("bad integer"))?;
                Ok(ExactReal::Rational(BigRational::from_integer(n)))
            }
            Some((num, den)) => {
                let n = parse_int(num).ok_or_else(|| bad("bad numerator"))?;
                let d = parse_int(den).ok_or_else(|| bad("bad denominator"))?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(ExactReal::Rational(BigRational::new(n, d)))
            }
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    if s.is_empty() {
        return None;
    }
    s.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, q_: i64, d: u64, r: i64) -> ExactReal {
        ExactReal::quadratic_parts(p, q_, d, r).unwrap()
    }

    #[test]
    fn rational_arithmetic() {
        let half = ExactReal::rational(1, 2);
        let third = ExactReal::rational(1, 3);
        assert_eq!(half.try_add(&third).unwrap(), ExactReal::rational(5, 6));
        let x = ExactReal::rational(7, 3);
        assert_eq!(x.try_div(&ExactReal::one()).unwrap(), x);
    }

    #[test]
    fn quadratic_addition_normalizes() {
        // (1+√13)/2 + (5+√13)/6 = (4+2√13)/3
        let sum = q(1, 1, 13, 2).try_add(&q(5, 1, 13, 6)).unwrap();
        assert_eq!(sum, q(4, 2, 13, 3));
        // conjugates cancel to a rational
        let one = q(1, 1, 13, 2).try_add(&q(1, -1, 13, 2)).unwrap();
        assert!(one.is_one());
    }

    #[test]
    fn quadratic_multiplication() {
        // ((1+√13)/2)((5+√13)/6) = (3+√13)/2
        let prod = q(1, 1, 13, 2).try_mul(&q(5, 1, 13, 6)).unwrap();
        assert_eq!(prod, q(3, 1, 13, 2));
        // ((3+√13)/2)((√13−3)/2) = 1
        let unit = q(3, 1, 13, 2).try_mul(&q(-3, 1, 13, 2)).unwrap();
        assert!(unit.is_one());
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = q(1, 1, 13, 2);
        let b = q(0, 1, 5, 1);
        assert_eq!(a.try_add(&b), Err(Error::MixedFields));
        assert_eq!(a.compare(&b), Err(Error::MixedFields));
    }

    #[test]
    fn division_by_zero_rejected() {
        let a = q(1, 1, 13, 2);
        assert_eq!(a.try_div(&ExactReal::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn comparisons() {
        // (1+√13)/2 > 2 since √13 > 3
        assert_eq!(
            q(1, 1, 13, 2).compare(&ExactReal::from_integer(2)).unwrap(),
            Ordering::Greater
        );
        // (5+√13)/6 < 3/2 since √13 < 4
        assert_eq!(
            q(5, 1, 13, 6).compare(&ExactReal::rational(3, 2)).unwrap(),
            Ordering::Less
        );
        let x = q(-7, 3, 29, 5);
        assert_eq!(x.compare(&x).unwrap(), Ordering::Equal);
    }

    #[test]
    fn floor_and_ceiling() {
        assert_eq!(q(1, 1, 13, 2).floor_exact(), BigInt::from(2));
        // φ² = (3+√5)/2 has ceiling 3
        assert_eq!(q(3, 1, 5, 2).ceil_exact(), BigInt::from(3));
        assert_eq!(ExactReal::rational(-1, 2).floor_exact(), BigInt::from(-1));
        assert_eq!(ExactReal::from_integer(4).floor_exact(), BigInt::from(4));
        assert_eq!(q(0, -1, 2, 1).floor_exact(), BigInt::from(-2));
    }

    #[test]
    fn square_factors_are_folded() {
        // √8 = 2√2
        assert_eq!(
            ExactReal::quadratic_parts(0, 1, 8, 1).unwrap(),
            q(0, 2, 2, 1)
        );
        // √9 = 3 collapses to a rational
        assert_eq!(
            ExactReal::quadratic_parts(1, 1, 9, 1).unwrap(),
            ExactReal::from_integer(4)
        );
    }

    #[test]
    fn display_round_trips() {
        for v in [
            ExactReal::rational(-3, 7),
            ExactReal::from_integer(42),
            q(5, 7, 13, 18),
            q(35, -5, 13, 18),
            q(8, -2, 13, 1),
            q(0, 1, 2, 1),
        ] {
            let shown = v.to_string();
            let back: ExactReal = shown.parse().unwrap();
            assert_eq!(back, v, "round-trip failed for {shown}");
        }
    }

    #[test]
    fn parses_spec_forms() {
        let v: ExactReal = "(1+1*sqrt(13))/2".parse().unwrap();
        assert_eq!(v, q(1, 1, 13, 2));
        let v: ExactReal = "(35-5*sqrt(13))/18".parse().unwrap();
        assert_eq!(v, q(35, -5, 13, 18));
        let v: ExactReal = "4/3".parse().unwrap();
        assert_eq!(v, ExactReal::rational(4, 3));
        assert!("(1+sqrt(13))/2".parse::<ExactReal>().is_err());
        assert!("1/0".parse::<ExactReal>().is_err());
    }

    #[test]
    fn enclosures_nest_and_contain() {
        let v = q(1, 1, 13, 2);
        let coarse = v.enclosure(8);
        let fine = v.enclosure(16);
        assert!(coarse.contains_interval(&fine));
        let fl = v.floor_exact();
        assert!(coarse.lo() >= &BigRational::from_integer(fl.clone()));
        assert!(coarse.hi() <= &BigRational::from_integer(fl + 2));
    }
}
