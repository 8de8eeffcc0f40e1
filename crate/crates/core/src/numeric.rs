//! Numeric helpers: exact rationals, rigorous enclosures of `ln` and `exp`,
//! and a log-domain nonnegative real.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Bits kept after the binary point when enclosures are rounded outward.
const GRID_BITS: usize = 200;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rat_from_uint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

/// `2^{-e}` as an exact rational.
pub fn inv_pow2(e: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << e)
}

pub fn pow(base: &Rational, e: usize) -> Rational {
    num_traits::pow(base.clone(), e)
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p.trim().parse().ok()?, q))
        }
        None => match s.split_once('.') {
            // exact decimal: "-0.25" = -25/100
            Some((whole, frac)) => {
                if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                let negative = whole.starts_with('-');
                let digits = format!("{}{frac}", whole.trim_start_matches(['-', '+']));
                let mag = Rational::new(digits.parse().ok()?, BigInt::from(10u32).pow(frac.len() as u32));
                Some(if negative { -mag } else { mag })
            }
            None => Some(rat_int(s.parse::<BigInt>().ok()?)),
        },
    }
}

/// Natural logarithm of a positive big integer as `f64`.
pub fn ln_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits() as usize;
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational as `f64`, robust to huge parts.
pub fn ln_rational(q: &Rational) -> f64 {
    assert!(q.is_positive(), "log of a nonpositive rational");
    ln_biguint(q.numer().magnitude()) - ln_biguint(q.denom().magnitude())
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let Some(x) = q.to_f64().filter(|x| x.is_finite() && *x != 0.0) {
        return x;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rational(&q.abs()).exp()
}

/// A closed interval `[lo, hi]` with dyadic rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

fn floor_grid(q: &Rational) -> Rational {
    let scale = BigInt::one() << GRID_BITS;
    let scaled = (q * Rational::from_integer(scale.clone())).floor();
    Rational::new(scaled.to_integer(), scale)
}

fn ceil_grid(q: &Rational) -> Rational {
    let scale = BigInt::one() << GRID_BITS;
    let scaled = (q * Rational::from_integer(scale.clone())).ceil();
    Rational::new(scaled.to_integer(), scale)
}

impl Interval {
    pub fn exact(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    fn rounded(lo: Rational, hi: Rational) -> Self {
        Interval {
            lo: floor_grid(&lo),
            hi: ceil_grid(&hi),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::rounded(lo, hi)
    }

    pub fn scale(&self, q: &Rational) -> Interval {
        self.mul(&Interval::exact(q.clone()))
    }

    /// Division by a strictly positive interval.
    pub fn div_positive(&self, d: &Interval) -> Interval {
        assert!(d.lo.is_positive(), "divisor interval must be positive");
        let inv = Interval::rounded(d.hi.recip(), d.lo.recip());
        self.mul(&inv)
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational_to_f64(&((&self.lo + &self.hi) / rat(2, 1)))
    }

    pub fn upper_f64(&self) -> f64 {
        let x = rational_to_f64(&self.hi);
        x + x.abs() * 4.0 * f64::EPSILON
    }

    pub fn lower_f64(&self) -> f64 {
        let x = rational_to_f64(&self.lo);
        x - x.abs() * 4.0 * f64::EPSILON
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.15e}, {:.15e}]", self.lower_f64(), self.upper_f64())
    }
}

/// Enclosure of `2·atanh(z) = ln((1+z)/(1−z))` for `0 ≤ z ≤ 1/2`.
fn two_atanh(z: &Rational) -> Interval {
    debug_assert!(!z.is_negative() && *z <= rat(1, 2));
    if z.is_zero() {
        return Interval::exact(Rational::zero());
    }
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = Rational::zero();
    let mut j = 0usize;
    loop {
        let term = &power / rat_int(2 * j as i64 + 1);
        sum += &term;
        power *= &z2;
        j += 1;
        // remaining tail ≤ z^{2j+1} / ((2j+1)(1 − z²))
        let tail = &power / (rat_int(2 * j as i64 + 1) * (Rational::one() - &z2));
        if tail < inv_pow2(GRID_BITS + 8) {
            let two = rat(2, 1);
            return Interval::rounded(&sum * &two, (&sum + &tail) * &two);
        }
        // keep the exact sum small
        if j.is_multiple_of(8) {
            sum = floor_grid_fine(&sum);
            power = ceil_grid_fine(&power);
        }
    }
}

// Finer grid used inside series so that rounding stays below the final grid.
fn floor_grid_fine(q: &Rational) -> Rational {
    let scale = BigInt::one() << (GRID_BITS + 32);
    Rational::new((q * Rational::from_integer(scale.clone())).floor().to_integer(), scale)
}

fn ceil_grid_fine(q: &Rational) -> Rational {
    let scale = BigInt::one() << (GRID_BITS + 32);
    Rational::new((q * Rational::from_integer(scale.clone())).ceil().to_integer(), scale)
}

/// Enclosure of `ln 2`.
pub fn ln2() -> Interval {
    // ln 2 = 2·atanh(1/3)
    let i = two_atanh(&rat(1, 3));
    // widen by the rounding slack inside the series
    Interval {
        lo: &i.lo - inv_pow2(GRID_BITS - 4),
        hi: &i.hi + inv_pow2(GRID_BITS - 4),
    }
}

/// Enclosure of `ln q` for a positive rational.
pub fn ln(q: &Rational) -> Interval {
    assert!(q.is_positive(), "ln of a nonpositive rational");
    // q = 2^e · m with m in [1, 2)
    let mut e: i64 = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut m = if e >= 0 {
        q / rat_int(BigInt::one() << e as usize)
    } else {
        q * rat_int(BigInt::one() << (-e) as usize)
    };
    while m < Rational::one() {
        m *= rat(2, 1);
        e -= 1;
    }
    while m >= rat(2, 1) {
        m /= rat(2, 1);
        e += 1;
    }
    // ln m = 2 atanh((m−1)/(m+1)), with (m−1)/(m+1) ≤ 1/3
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let part = two_atanh(&z);
    let part = Interval {
        lo: &part.lo - inv_pow2(GRID_BITS - 4),
        hi: &part.hi + inv_pow2(GRID_BITS - 4),
    };
    let scaled = ln2().scale(&rat_int(e));
    part.add(&scaled)
}

/// Lower and upper enclosure of `exp(q)` for a rational `q`.
fn exp_rational(q: &Rational) -> Interval {
    if q.is_negative() {
        let pos = exp_rational(&-q);
        return Interval::rounded(pos.hi.recip(), pos.lo.recip());
    }
    // halve until q/2^s ≤ 1/4
    let mut s = 0usize;
    let mut y = q.clone();
    while y > rat(1, 4) {
        y /= rat(2, 1);
        s += 1;
    }
    let mut term = Rational::one();
    let mut sum = Rational::one();
    let mut j = 1usize;
    let base = loop {
        term = &term * &y / rat_int(j as i64);
        sum += &term;
        j += 1;
        // tail after term j−1: next term · 1/(1 − y/(j+1))
        let next = &term * &y / rat_int(j as i64);
        let tail = &next / (Rational::one() - &y / rat_int(j as i64 + 1));
        if tail < inv_pow2(GRID_BITS + 16 + s) {
            break Interval::rounded(sum.clone(), &sum + &tail);
        }
        if j.is_multiple_of(8) {
            sum = floor_grid_fine(&sum);
            term = ceil_grid_fine(&term);
        }
    };
    // rounding slack inside the loop
    let mut acc = Interval {
        lo: &base.lo - inv_pow2(GRID_BITS - 4),
        hi: &base.hi + inv_pow2(GRID_BITS - 4),
    };
    for _ in 0..s {
        acc = acc.mul(&acc);
    }
    acc
}

/// Enclosure of `exp(x)` over an interval.
pub fn exp(x: &Interval) -> Interval {
    let lo = exp_rational(&x.lo).lo;
    let hi = exp_rational(&x.hi).hi;
    Interval { lo, hi }
}

/// A nonnegative real stored as its natural logarithm (`-inf` for zero).
#[derive(Copy, Clone, Debug, PartialEq, PartialOrd)]
pub struct LogNumber(f64);

impl LogNumber {
    pub const ZERO: LogNumber = LogNumber(f64::NEG_INFINITY);
    pub const ONE: LogNumber = LogNumber(0.0);

    pub fn from_ln(ln: f64) -> Self {
        LogNumber(ln)
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        if n.is_zero() {
            LogNumber::ZERO
        } else {
            LogNumber(ln_biguint(n))
        }
    }

    pub fn ln(self) -> f64 {
        self.0
    }


    /// Sum via log-sum-exp.
    pub fn sum<I: IntoIterator<Item = LogNumber>>(terms: I) -> LogNumber {
        let terms: Vec<f64> = terms.into_iter().map(|t| t.0).collect();
        let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return LogNumber::ZERO;
        }
        let s: f64 = terms.iter().map(|t| (t - max).exp()).sum();
        LogNumber(max + s.ln())
    }

    /// `self / other − 1`, computed from the log difference.
    pub fn relative_error(self, reference: LogNumber) -> f64 {
        (self.0 - reference.0).exp_m1()
    }

    pub fn to_f64(self) -> f64 {
        self.0.exp()
    }
}

impl std::ops::Mul for LogNumber {
    type Output = LogNumber;

    // product of values is the sum of logs
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: LogNumber) -> LogNumber {
        LogNumber(self.0 + other.0)
    }
}

impl fmt::Display for LogNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_sig(self.0, 12))
    }
}

/// Formats with a fixed number of significant digits.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    format!("{:.*e}", digits - 1, x)
}

/// Whether `|n|` is a power of two.
pub fn is_power_of_two(n: &BigInt) -> bool {
    let m = n.magnitude();
    !m.is_zero() && (m & (m - 1u32)).is_zero()
}
