//! Local level sets: classes of `x ~ x'` iff `|D_n(x)| = |D_n(x')|` for all `n`.
//!
//! A class is generated from its leftmost point by block flips: cut the binary
//! digits at the zeros of `D_n` and complement any subset of the blocks (the
//! last block runs to infinity). A dyadic rational has two binary
//! representations and each is counted as its own point, so a class whose
//! expansion holds `m` twos has `2^{m+1}` points.

use serde::Serialize;

use crate::arith::{to_binary, BinaryExpansion, Rational};
use crate::error::{Result, TakagiError};
use crate::expansion::{expansion_to_abscissa, Tail, TakagiExpansion};
use crate::serde_rational;

/// Zeros of `D_n` used to sample an uncountable class.
const SAMPLE_ZEROS: usize = 4;
/// Largest number of twos for which every member is materialized.
const MAX_MATERIALIZED_TWOS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "count")]
pub enum LocalCardinality {
    /// Number of points, counting both representations of a dyadic point.
    Exact(u64),
    Uncountable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalMember {
    #[serde(with = "serde_rational")]
    pub x: Rational,
    /// Both binary representations of this dyadic point lie in the class.
    pub split: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalLevelSet {
    #[serde(with = "serde_rational")]
    pub seed: Rational,
    /// Number of 2's in the expansion, `None` when 2 recurs forever.
    pub twos_count: Option<usize>,
    pub cardinality: LocalCardinality,
    /// Sorted by value. For an uncountable class (or a very large one) these
    /// are the flips of the first few blocks only.
    pub members: Vec<LocalMember>,
    pub complete: bool,
}

/// Digits `0.<pre>(<period>)`; the period is never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Digits {
    pre: Vec<u8>,
    period: Vec<u8>,
}

impl Digits {
    fn digit(&self, n: usize) -> u8 {
        if n < self.pre.len() {
            self.pre[n]
        } else {
            self.period[(n - self.pre.len()) % self.period.len()]
        }
    }

    /// Moves period digits into the preperiod until it has `len` digits.
    fn extend_to(&mut self, len: usize) {
        while self.pre.len() < len {
            self.pre.push(self.period[0]);
            self.period.rotate_left(1);
        }
    }

    fn value(&self) -> Rational {
        BinaryExpansion::evaluate(&self.pre, &self.period)
    }

    /// The representations of `x ∈ [0, 1]`: one, or two for a dyadic point
    /// other than 0 and 1.
    fn representations(x: &Rational) -> Result<Vec<Digits>> {
        if x == &Rational::from_integer(1.into()) {
            return Ok(vec![Digits { pre: Vec::new(), period: vec![1] }]);
        }
        let b = to_binary(x)?;
        if !b.is_dyadic() {
            return Ok(vec![Digits { pre: b.preperiod, period: b.period }]);
        }
        let mut reps = vec![Digits { pre: b.preperiod.clone(), period: vec![0] }];
        let mut pre = b.preperiod;
        if pre.pop() == Some(1) {
            pre.push(0);
            reps.push(Digits { pre, period: vec![1] });
        }
        Ok(reps)
    }
}

/// Digit positions (1-based) of the ones of `x = Σ 2^{−(k_n + 2n)}` for the
/// first `n` terms.
fn one_positions(e: &TakagiExpansion, n: usize) -> Vec<usize> {
    e.unrolled(n).iter().enumerate().map(|(i, &k)| k as usize + 2 * i).collect()
}

fn digits_with_ones(ones: &[usize], len: usize) -> Vec<u8> {
    let mut d = vec![0u8; len];
    for &p in ones.iter().filter(|&&p| p <= len) {
        d[p - 1] = 1;
    }
    d
}

/// Binary digits of the leftmost point of an exact expansion. Relaxed
/// admissibility keeps the positions `k_n + 2n` strictly increasing.
fn seed_digits(e: &TakagiExpansion) -> Digits {
    match e.tail {
        Tail::Periodic { entry } => {
            let len = e.cycle().len();
            // the digit pattern repeats with period 2·len once the first copy
            // of the cycle is written out
            let ones = one_positions(e, entry + 3 * len);
            let split = ones[entry + len - 1];
            let pre = digits_with_ones(&ones, split);
            let window = digits_with_ones(&ones, split + 2 * len);
            Digits { pre, period: window[split..].to_vec() }
        }
        _ => {
            let ones = one_positions(e, e.terms.len());
            let len = ones.last().copied().unwrap_or(0);
            Digits { pre: digits_with_ones(&ones, len), period: vec![0] }
        }
    }
}

/// Positions `n ≥ 1` with `D_n = 0` among the first `limit` digits.
fn excess_zeros(d: &Digits, limit: usize) -> Vec<usize> {
    let mut excess = 0i64;
    let mut zeros = Vec::new();
    for n in 0..limit {
        excess += 1 - 2 * i64::from(d.digit(n));
        if excess == 0 {
            zeros.push(n + 1);
        }
    }
    zeros
}

/// Complements the digits of every block whose bit is set in `mask`; block
/// `b` covers positions `(cuts[b−1], cuts[b]]` and the last block everything
/// past the final cut, period included.
fn flip(d: &Digits, cuts: &[usize], mask: u64) -> Digits {
    let mut out = d.clone();
    let mut start = 0;
    for (b, &end) in cuts.iter().chain(std::iter::once(&d.pre.len())).enumerate() {
        if mask >> b & 1 == 1 {
            for digit in &mut out.pre[start..end] {
                *digit ^= 1;
            }
        }
        start = end;
    }
    if mask >> cuts.len() & 1 == 1 {
        for digit in &mut out.period {
            *digit ^= 1;
        }
    }
    out
}

fn flip_members(seed: &Digits, cuts: &[usize]) -> Vec<LocalMember> {
    let mut values: Vec<Rational> = (0..1u64 << (cuts.len() + 1)).map(|mask| flip(seed, cuts, mask).value()).collect();
    values.sort();
    let mut members: Vec<LocalMember> = Vec::new();
    for x in values {
        match members.last_mut() {
            Some(last) if last.x == x => last.split = true,
            _ => members.push(LocalMember { x, split: false }),
        }
    }
    members
}

/// The local level set of the leftmost point `x` of an exact expansion, with
/// its members obtained by block flips.
pub fn local_level_set(e: &TakagiExpansion) -> Result<LocalLevelSet> {
    let seed = expansion_to_abscissa(e)?;
    let mut digits = seed_digits(e);
    debug_assert_eq!(digits.value(), seed);
    let twos = e.count_twos();
    let (cardinality, wanted) = match twos {
        Some(m) if m <= MAX_MATERIALIZED_TWOS => (LocalCardinality::Exact(1 << (m + 1)), m),
        Some(m) if m < 63 => (LocalCardinality::Exact(1 << (m + 1)), SAMPLE_ZEROS),
        Some(m) => return Err(TakagiError::CapExceeded(format!("2^{} local points", m + 1))),
        None => (LocalCardinality::Uncountable, SAMPLE_ZEROS),
    };
    // a 2 at term i puts a zero of D at digit 2i + 2, and each copy of a
    // cycle holding a 2 adds one more
    let terms = e.terms.len() + wanted * e.cycle().len();
    let scan = (2 * terms + 2).max(digits.pre.len());
    digits.extend_to(scan);
    let mut cuts = excess_zeros(&digits, scan);
    cuts.truncate(wanted);
    let members = flip_members(&digits, &cuts);
    let complete = twos.is_some_and(|m| m == cuts.len());
    Ok(LocalLevelSet { seed, twos_count: twos, cardinality, members, complete })
}

/// `|D_n|` agree for all `n`, decided on the eventually periodic digits: past
/// both preperiods, three copies of the joint period settle every `n`. A
/// dyadic point counts as equivalent when either representation is.
pub fn same_local_level_set(x1: &Rational, x2: &Rational) -> Result<bool> {
    for x in [x1, x2] {
        if x.numer().sign() == num_bigint::Sign::Minus || x > &Rational::from_integer(1.into()) {
            return Err(TakagiError::Domain(format!("need 0 <= x <= 1, got {x}")));
        }
    }
    let a = Digits::representations(x1)?;
    let b = Digits::representations(x2)?;
    Ok(a.iter().any(|d1| b.iter().any(|d2| same_abs_excess(d1, d2))))
}

fn same_abs_excess(d1: &Digits, d2: &Digits) -> bool {
    let start = d1.pre.len().max(d2.pre.len());
    let joint = num_integer::lcm(d1.period.len(), d2.period.len());
    let (mut e1, mut e2) = (0i64, 0i64);
    (0..start + 3 * joint).all(|n| {
        e1 += 1 - 2 * i64::from(d1.digit(n));
        e2 += 1 - 2 * i64::from(d2.digit(n));
        e1.abs() == e2.abs()
    })
}
