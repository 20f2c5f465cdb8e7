//! Exact rationals and eventually periodic binary expansions.
//!
//! Every ordinate and abscissa in the crate is a [`Rational`] in lowest
//! terms. Binary expansions follow the convention that a dyadic rational
//! uses the representation ending in all zeros, so its period is empty.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, TakagiError};

/// Exact arbitrary-precision fraction, always reduced with a positive denominator.
pub type Rational = BigRational;

/// Longest binary orbit (preperiod plus period) processed before giving up.
pub const ORBIT_CAP: usize = 1_000_000;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` for a possibly negative exponent.
pub fn pow2(e: i64) -> Rational {
    let mag = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new_raw(BigInt::one(), mag)
    }
}

/// `4^e` for a possibly negative exponent.
pub fn pow4(e: i64) -> Rational {
    pow2(2 * e)
}

pub fn is_dyadic(x: &Rational) -> bool {
    let d = x.denom();
    let t = d.trailing_zeros().unwrap_or(0);
    (d >> t as usize).is_one()
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || TakagiError::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Canonical `"p/q"` (or `"p"` for integers) text form.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // both parts huge: shift them down together first
            let shift = x.denom().bits().saturating_sub(1000) as usize;
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Splits a positive denominator into `2^a · d` with `d` odd.
pub(crate) fn split_two_power(q: &BigUint) -> (u64, BigUint) {
    let a = q.trailing_zeros().unwrap_or(0);
    (a, q >> a as usize)
}

pub(crate) fn unsigned(x: &BigInt) -> BigUint {
    x.magnitude().clone()
}

/// Residues `s, 2s, 4s, … (mod d)` over one full cycle, for odd `d` and
/// `gcd(s, d) = 1` (the orbit is then purely periodic).
pub(crate) fn residue_cycle(s: &BigUint, d: &BigUint, cap: usize) -> Result<ResidueCycle> {
    if d.is_one() {
        return Ok(ResidueCycle::Small { residues: vec![0], modulus: 1 });
    }
    if let (Some(s), Some(d)) = (s.to_u64(), d.to_u64()) {
        if d < (1 << 62) {
            let mut residues = Vec::new();
            let mut r = s;
            loop {
                residues.push(r);
                if residues.len() > cap {
                    return Err(TakagiError::OrbitTooLong { cap });
                }
                // r < d, so 2r < 2d
                r <<= 1;
                if r >= d {
                    r -= d;
                }
                if r == s {
                    break;
                }
            }
            return Ok(ResidueCycle::Small { residues, modulus: d });
        }
    }
    let mut residues = Vec::new();
    let mut r = s.clone();
    loop {
        residues.push(r.clone());
        if residues.len() > cap {
            return Err(TakagiError::OrbitTooLong { cap });
        }
        r <<= 1usize;
        if &r >= d {
            r -= d;
        }
        if &r == s {
            break;
        }
    }
    Ok(ResidueCycle::Big { residues, modulus: d.clone() })
}

pub(crate) enum ResidueCycle {
    Small { residues: Vec<u64>, modulus: u64 },
    Big { residues: Vec<BigUint>, modulus: BigUint },
}

impl ResidueCycle {
    pub(crate) fn len(&self) -> usize {
        match self {
            ResidueCycle::Small { residues, .. } => residues.len(),
            ResidueCycle::Big { residues, .. } => residues.len(),
        }
    }
}

/// `Σ terms[i] · 2^(n-1-i)` for `n = terms.len()`, by binary splitting so that
/// long periods stay near-linear.
pub(crate) fn weighted_sum<T>(terms: &[T]) -> BigUint
where
    T: Clone + Into<BigUint>,
{
    const LEAF: usize = 32;
    if terms.len() <= LEAF {
        let mut acc = BigUint::zero();
        for t in terms {
            acc <<= 1usize;
            acc += t.clone().into();
        }
        return acc;
    }
    let (left, right) = terms.split_at(terms.len() / 2);
    (weighted_sum(left) << right.len()) + weighted_sum(right)
}

/// [`weighted_sum`] for terms below `2^62`, accumulated in place.
pub(crate) fn weighted_sum_small(terms: &[u64]) -> BigUint {
    let n = terms.len();
    let mut acc = vec![0u64; n / 64 + 4];
    for (i, &t) in terms.iter().enumerate() {
        let shift = n - 1 - i;
        let (mut w, bit) = (shift / 64, shift % 64);
        let v = u128::from(t) << bit;
        let (lo, c1) = acc[w].overflowing_add(v as u64);
        acc[w] = lo;
        let (hi, c2) = acc[w + 1].overflowing_add((v >> 64) as u64 + u64::from(c1));
        acc[w + 1] = hi;
        let mut carry = c2;
        w += 2;
        while carry {
            let (x, c) = acc[w].overflowing_add(1);
            acc[w] = x;
            carry = c;
            w += 1;
        }
    }
    let digits: Vec<u32> = acc.iter().flat_map(|&x| [x as u32, (x >> 32) as u32]).collect();
    BigUint::new(digits)
}

/// Eventually periodic binary expansion `0.ε₁ε₂…` of a rational in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryExpansion {
    pub preperiod: Vec<u8>,
    /// Empty iff the value is a dyadic rational.
    pub period: Vec<u8>,
    pub value: Rational,
}

impl BinaryExpansion {
    /// The `n`-th digit `ε_n`, counting from 1.
    pub fn digit(&self, n: usize) -> u8 {
        assert!(n >= 1, "digits are indexed from 1");
        let i = n - 1;
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else if self.period.is_empty() {
            0
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Infinite digit stream `ε₁, ε₂, …`.
    pub fn digits(&self) -> impl Iterator<Item = u8> + '_ {
        (1..).map(move |n| self.digit(n))
    }

    pub fn is_dyadic(&self) -> bool {
        self.period.is_empty()
    }

    /// Evaluates `0.<preperiod>(<period>)` as an exact fraction.
    pub fn evaluate(preperiod: &[u8], period: &[u8]) -> Rational {
        let pre = Rational::new(BigInt::from(weighted_sum(preperiod)), BigInt::one() << preperiod.len());
        if period.is_empty() {
            return pre;
        }
        let per = BigInt::from(weighted_sum(period));
        let cycle = (BigInt::one() << period.len()) - 1;
        let tail = Rational::new(per, cycle << preperiod.len());
        pre + tail
    }
}

fn push_digits(v: &mut Vec<u8>, digits: &[u8]) {
    v.extend(digits.iter().map(|&d| b'0' + d));
}

impl fmt::Display for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = b"0.".to_vec();
        if self.preperiod.is_empty() && self.period.is_empty() {
            s.push(b'0');
        }
        push_digits(&mut s, &self.preperiod);
        if !self.period.is_empty() {
            s.push(b'(');
            push_digits(&mut s, &self.period);
            s.push(b')');
        }
        f.write_str(std::str::from_utf8(&s).expect("ascii"))
    }
}

/// Canonical binary expansion of `x ∈ [0, 1)`.
///
/// The preperiod has exactly as many digits as the power of two in the
/// denominator (or, for dyadic inputs, ends at the last 1), and the period is
/// the cycle of the long-division remainders, so both are minimal.
pub fn to_binary(x: &Rational) -> Result<BinaryExpansion> {
    if x.is_negative() || x >= &Rational::one() {
        return Err(TakagiError::Domain(format!("binary expansion needs 0 <= x < 1, got {x}")));
    }
    let p = unsigned(x.numer());
    let (a, d) = split_two_power(&unsigned(x.denom()));
    if a as usize > ORBIT_CAP {
        return Err(TakagiError::OrbitTooLong { cap: ORBIT_CAP });
    }
    let (whole, s) = p.div_rem(&d);
    let mut preperiod: Vec<u8> = (0..a).rev().map(|i| whole.bit(i) as u8).collect();
    let period = if d.is_one() {
        while preperiod.last() == Some(&0) {
            preperiod.pop();
        }
        Vec::new()
    } else {
        match residue_cycle(&s, &d, ORBIT_CAP)? {
            ResidueCycle::Small { residues, modulus } => {
                residues.iter().map(|&r| u8::from(2 * r >= modulus)).collect()
            }
            ResidueCycle::Big { residues, modulus } => {
                residues.iter().map(|r| u8::from((r << 1usize) >= modulus)).collect()
            }
        }
    };
    Ok(BinaryExpansion { preperiod, period, value: x.clone() })
}

/// `D_k(x) = Σ_{j≤k} (1 − 2ε_j)`: excess of zeros over ones among the first
/// `k` binary digits.
pub fn digit_sum_d(x: &Rational, k: usize) -> Result<i64> {
    let b = to_binary(x)?;
    Ok(digit_excess(&b, k))
}

pub(crate) fn digit_excess(b: &BinaryExpansion, k: usize) -> i64 {
    b.digits().take(k).map(|e| 1 - 2 * i64::from(e)).sum()
}

/// Whether the binary expansion of `x` contains `000` somewhere after its
/// first `1`. Dyadic inputs are rejected.
pub fn has_three_zero_run_after_first_one(x: &Rational) -> Result<bool> {
    if !x.is_positive() || x >= &Rational::one() {
        return Err(TakagiError::Domain(format!("need 0 < x < 1, got {x}")));
    }
    if is_dyadic(x) {
        return Err(TakagiError::Domain(format!("{x} is a dyadic rational")));
    }
    let b = to_binary(x)?;
    Ok(three_zero_run(&b))
}

pub(crate) fn three_zero_run(b: &BinaryExpansion) -> bool {
    // the first 1 sits within preperiod + one period; every window of the
    // periodic part then shows up within the next period + 2 digits
    let span = b.preperiod.len() + 3 * b.period.len() + 3;
    let mut seen_one = false;
    let mut zeros = 0;
    for e in b.digits().take(span) {
        if e == 1 {
            seen_one = true;
            zeros = 0;
        } else if seen_one {
            zeros += 1;
            if zeros == 3 {
                return true;
            }
        }
    }
    false
}

/// The residue classes used by `T`: `min(r, m − r)` for a residue `r` mod `m`.
pub(crate) fn fold_small(r: u64, m: u64) -> u64 {
    r.min(m - r)
}

pub(crate) fn fold_big(r: &BigUint, m: &BigUint) -> BigUint {
    let other = m - r;
    if &other < r {
        other
    } else {
        r.clone()
    }
}
