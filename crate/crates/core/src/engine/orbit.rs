//! Walking the `Ψ`-orbit of an ordinate in `(0, ½)` and closing it with a
//! certificate that no hump is hit from some point on.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{is_dyadic, rat, split_two_power, three_zero_run, to_binary, unsigned, Rational};
use crate::error::{Result, TakagiError};
use crate::expansion::{kappa, t_k};
use crate::serde_rational;

/// Longest binary period for which the no-3-zeros test is attempted.
const BINARY_PERIOD_CAP: u64 = 4096;

pub(crate) struct Step {
    pub k: u64,
    pub y: Rational,
    pub phi: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TailKind {
    /// The orbit returns to an earlier value without hitting a hump.
    Cycle,
    /// The binary expansion has no `000` after its first `1`.
    NoThreeZeros,
    /// `k_n` grows by `c` per step and `2^{k_n}Ψⁿ(y)` is affine in `n`.
    Drift { c: u64 },
}

impl TailKind {
    pub fn tag(self) -> &'static str {
        match self {
            TailKind::Cycle => "orbit cycle, no hump hit",
            TailKind::NoThreeZeros => "no-3-zeros tail",
            TailKind::Drift { .. } => "affine drift orbit within doubling bound",
        }
    }
}

pub(crate) enum Closure {
    /// `|L₀(Ψ^index(y))| = 1`, certified by `kind`.
    Tail { index: usize, kind: TailKind },
    Infinite(&'static str),
    FirstHit(usize),
    Exhausted,
}

pub(crate) struct Walk {
    pub steps: Vec<Step>,
    pub hits: Vec<usize>,
    pub closure: Closure,
    /// The orbit point where the walk stopped, `Ψ^{steps.len()}(y)`.
    pub last: Rational,
}

pub(crate) const T_K_HIT: &str = "t_k hit ⇒ infinite";
pub(crate) const HIT_CYCLE: &str = "hump-hit cycle ⇒ infinite";

/// Period of the binary expansion of an ordinate, if at most `cap`.
fn binary_period(y: &Rational, cap: u64) -> Option<u64> {
    let (_, d) = split_two_power(&unsigned(y.denom()));
    let d = d.to_u64()?;
    if d == 1 {
        return Some(0);
    }
    let mut r = 2 % d;
    let mut n = 1;
    while r != 1 {
        if n >= cap {
            return None;
        }
        r = ((r as u128 * 2) % d as u128) as u64;
        n += 1;
    }
    Some(n)
}

fn no_three_zeros(y: &Rational) -> bool {
    match to_binary(y) {
        Ok(b) => !three_zero_run(&b),
        Err(_) => false,
    }
}

/// `2^{k'+2} ≤ 3k·4^k`, i.e. `k' ≤ 2k + log₂k + log₂3 − 2`: the step from `k`
/// to `k'` forces `Φ > ⅔` at `k`.
fn pair_sufficient(k: u64, next: u64) -> bool {
    (BigInt::one() << (next + 2) as usize) <= BigInt::from(3 * k) << (2 * k) as usize
}

/// `2^{k'} ≥ 3k·4^k`, i.e. `k' ≥ 2k + log₂k + log₂3`: the step forces a hump hit.
fn pair_necessitates(k: u64, next: u64) -> bool {
    (BigInt::one() << next as usize) >= BigInt::from(3 * k) << (2 * k) as usize
}

/// Checks that the three consecutive orbit points `(k, z = 2ᵏ·y)` start an
/// affine drift `k_{N+m} = k_N + cm`, `z_{N+m} = z_N + bm` valid for all `m`,
/// with every step inside the doubling bound. Returns `c`.
fn drift(window: &[(u64, Rational)]) -> Option<u64> {
    let [(k0, z0), (k1, z1), (k2, z2)] = window else {
        return None;
    };
    if k1 <= k0 || k2 <= k1 || k2 - k1 != k1 - k0 {
        return None;
    }
    let c = k1 - k0;
    if c > 60 {
        return None;
    }
    let b = z1 - z0;
    if (z2 - z1) != b {
        return None;
    }
    let p = Rational::from_integer(BigInt::one() << (c + 2) as usize);
    let ck = rat(c as i64, 1);
    let k0r = rat(*k0 as i64, 1);
    // z_{n+1} = 2^{c+2}(z_n − k_n) stays affine iff b(2^{c+2} − 1) = c·2^{c+2}
    if &b * (&p - rat(1, 1)) != &ck * &p || z1 != &(&p * (z0 - &k0r)) {
        return None;
    }
    // κ stays on schedule: k_n ≤ z_n < 2(k_n − 1) for all later n
    let a0 = z0 - &k0r;
    let b0 = rat(2, 1) * (&k0r - rat(1, 1)) - z0;
    if a0.is_negative() || b < ck || !b0.is_positive() || rat(2, 1) * &ck < b {
        return None;
    }
    // Φ(Ψⁿ(y)) = 2^{k_n}(z_n − k_n) is nondecreasing along the drift
    let phi0 = a0 * Rational::from_integer(BigInt::one() << *k0 as usize);
    if phi0 <= rat(2, 3) || !pair_sufficient(*k0, k0 + c) {
        return None;
    }
    Some(c)
}

/// Walks `y_n = Ψⁿ(y)` for `y ∈ (0, ½)`, recording hump hits `Φ(y_n) ≤ ⅔`,
/// until a certificate closes the orbit, a hit forces an infinite level set,
/// or `charge` refuses further work.
pub(crate) fn walk(y: &Rational, stop_at_first_hit: bool, charge: &mut dyn FnMut() -> bool) -> Walk {
    let binary_ok = binary_period(y, BINARY_PERIOD_CAP).is_some_and(|p| p > 0);
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut steps: Vec<Step> = Vec::new();
    let mut scaled: Vec<(u64, Rational)> = Vec::new();
    let mut hits = Vec::new();
    let mut z = y.clone();
    let close = |steps, hits, closure, last| Walk { steps, hits, closure, last };
    loop {
        let m = steps.len();
        if !charge() {
            return close(steps, hits, Closure::Exhausted, z);
        }
        let k = kappa(&z).expect("orbit stays in [0, 1/2)").expect("orbit avoids 0");
        let phi = (&z - t_k(k)) * (BigInt::one() << (2 * k) as usize);
        if phi.is_zero() {
            let closure = if stop_at_first_hit { Closure::FirstHit(m) } else { Closure::Infinite(T_K_HIT) };
            return close(steps, hits, closure, z);
        }
        if let Some(&i) = seen.get(&z) {
            let closure = if hits.iter().any(|&h| h >= i) {
                Closure::Infinite(HIT_CYCLE)
            } else {
                Closure::Tail { index: i, kind: TailKind::Cycle }
            };
            return close(steps, hits, closure, z);
        }
        if binary_ok && !is_dyadic(&z) && no_three_zeros(&z) {
            return close(steps, hits, Closure::Tail { index: m, kind: TailKind::NoThreeZeros }, z);
        }
        scaled.push((k, &z * (BigInt::one() << k as usize)));
        if m >= 2 {
            if let Some(c) = drift(&scaled[m - 2..]) {
                return close(steps, hits, Closure::Tail { index: m - 2, kind: TailKind::Drift { c } }, z);
            }
        }
        seen.insert(z.clone(), m);
        let hit = phi <= rat(2, 3);
        let next = (&z - t_k(k)) * BigInt::from(4);
        steps.push(Step { k, y: z, phi });
        if hit {
            hits.push(m);
            if stop_at_first_hit {
                return close(steps, hits, Closure::FirstHit(m), next);
            }
        }
        z = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

/// Outcome of the two-point test, with the rule that decided it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipResult {
    #[serde(with = "serde_rational")]
    pub ordinate: Rational,
    pub verdict: Membership,
    pub certificate: String,
    /// Orbit points examined.
    pub steps: u64,
}

/// Decides `|L(y)| = 2` for `0 < y < ½` through the condition
/// `Φ(Ψⁿ(y)) > ⅔` for all `n`: `No` at the first violation, `Yes` once a
/// certificate covers the rest of the orbit, `Unknown` after `budget` steps.
pub fn is_two_point_level_set(y: &Rational, budget: u64) -> Result<MembershipResult> {
    if !y.is_positive() || y >= &rat(1, 2) {
        return Err(TakagiError::Domain(format!("the two-point test needs 0 < y < 1/2, got {y}")));
    }
    let mut used = 0u64;
    let w = walk(y, true, &mut || {
        used += 1;
        used <= budget
    });
    let steps = used.min(budget);
    let (verdict, certificate) = match w.closure {
        Closure::Tail { kind, .. } => (Membership::Yes, kind.tag().to_string()),
        Closure::FirstHit(n) => (Membership::No, format!("hump hit: Φ(Ψ^{n}(y)) ≤ 2/3")),
        Closure::Infinite(tag) => (Membership::No, tag.to_string()),
        Closure::Exhausted => (Membership::Unknown, "budget exhausted".to_string()),
    };
    Ok(MembershipResult { ordinate: y.clone(), verdict, certificate, steps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DoublingVerdict {
    /// Every step satisfies `k_{n+1} ≤ 2k_n + log₂k_n + log₂3 − 2`.
    SufficientForTwo,
    /// Some step satisfies `k_{n+1} ≥ 2k_n + log₂k_n + log₂3`.
    NecessitatesMore,
    Inconclusive,
}

/// Growth test on consecutive terms of a canonical expansion, with the
/// logarithms cleared into integer inequalities.
pub fn doubling_bound_check(k_seq: &[u64]) -> DoublingVerdict {
    let pairs: Vec<(u64, u64)> = k_seq.windows(2).map(|w| (w[0], w[1])).collect();
    if pairs.iter().any(|&(a, b)| pair_necessitates(a, b)) {
        DoublingVerdict::NecessitatesMore
    } else if pairs.iter().all(|&(a, b)| pair_sufficient(a, b)) {
        DoublingVerdict::SufficientForTwo
    } else {
        DoublingVerdict::Inconclusive
    }
}
