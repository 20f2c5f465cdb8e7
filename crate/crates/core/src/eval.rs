//! Exact evaluation of `φ`, the partial sums `T_k` and the Takagi function `T`
//! at rational points.
//!
//! For `x = p/q` the orbit `2ⁿx mod 1` is eventually periodic, so the series
//! `T(x) = Σ 2⁻ⁿ φ(2ⁿx)` splits into a finite preperiod and a geometric tail
//! over one period. No truncation is involved anywhere.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{
    fold_big, fold_small, residue_cycle, split_two_power, unsigned, weighted_sum, weighted_sum_small,
    Rational,
    ResidueCycle, ORBIT_CAP,
};
use crate::error::{Result, TakagiError};
use crate::serde_rational;

/// Distance from `x` to the nearest integer.
pub fn phi(x: &Rational) -> Rational {
    let frac = x - x.floor();
    let other = Rational::one() - &frac;
    if other < frac {
        other
    } else {
        frac
    }
}

/// The partial sum `T_k(x)` together with the slope of `T_k` on the dyadic
/// interval of length `2⁻ᵏ` containing `x` (on its right for dyadic `x`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialEvaluation {
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub slope: i64,
}

fn check_unit(x: &Rational) -> Result<()> {
    if x.is_negative() || x > &Rational::one() {
        return Err(TakagiError::Domain(format!("need 0 <= x <= 1, got {x}")));
    }
    Ok(())
}

/// `T_k(x) = Σ_{n<k} 2⁻ⁿ φ(2ⁿx)`; the slope is `D_k` of `x mod 1`.
pub fn takagi_partial(x: &Rational, k: usize) -> Result<PartialEvaluation> {
    check_unit(x)?;
    let q = unsigned(x.denom());
    // x = 1 behaves like 0 (period one)
    let mut r = unsigned(x.numer()) % &q;
    let mut folds = Vec::with_capacity(k);
    let mut slope = 0i64;
    for _ in 0..k {
        folds.push(fold_big(&r, &q));
        r <<= 1usize;
        if r >= q {
            r -= &q;
            slope -= 1;
        } else {
            slope += 1;
        }
    }
    let value = if k == 0 {
        Rational::zero()
    } else {
        Rational::new(
            BigInt::from(weighted_sum(&folds)),
            BigInt::from(q) << (k - 1),
        )
    };
    Ok(PartialEvaluation { k, value, slope })
}

/// `T(x)` as an unreduced fraction `(numerator, denominator)`.
///
/// With `q = 2ᵃ·d`, `d` odd, and `p` the period of `2` modulo `d`:
/// `T(x) = [2H(2ᵖ−1) + 2G·2ᵃ] / [2²ᵃ·d·(2ᵖ−1)]`, where `H` and `G` are the
/// binary-weighted sums of the folded residues over the preperiod and one
/// period respectively.
pub fn takagi_fraction(x: &Rational) -> Result<(BigInt, BigInt)> {
    check_unit(x)?;
    if x.is_one() {
        return Ok((BigInt::zero(), BigInt::one()));
    }
    let p = unsigned(x.numer());
    let q = unsigned(x.denom());
    let (a, d) = split_two_power(&q);
    if a as usize > ORBIT_CAP {
        return Err(TakagiError::OrbitTooLong { cap: ORBIT_CAP });
    }

    let mut r = p.clone();
    let mut pre = Vec::with_capacity(a as usize);
    for _ in 0..a {
        pre.push(fold_big(&r, &q));
        r <<= 1usize;
        if r >= q {
            r -= &q;
        }
    }
    let h = weighted_sum(&pre);

    let s = p.mod_floor(&d);
    let cycle = residue_cycle(&s, &d, ORBIT_CAP)?;
    let period = cycle.len();
    let g = match cycle {
        ResidueCycle::Small { residues, modulus } => {
            let folded: Vec<u64> = residues.iter().map(|&r| fold_small(r, modulus)).collect();
            weighted_sum_small(&folded)
        }
        ResidueCycle::Big { residues, modulus } => {
            let folded: Vec<BigUint> = residues.iter().map(|r| fold_big(r, &modulus)).collect();
            weighted_sum(&folded)
        }
    };
    // multiplying by 2^period − 1 as a shift and a subtraction
    let numer = (((&h << period) - &h) << 1usize) + (g << (a as usize + 1));
    let denom = ((&d << period) - &d) << (2 * a as usize);
    Ok((BigInt::from(numer), BigInt::from(denom)))
}

const MEMO_ENTRY_BITS: u64 = 1024;
const MEMO_CAPACITY: usize = 1 << 16;

fn memo() -> &'static Mutex<HashMap<Rational, Rational>> {
    static MEMO: OnceLock<Mutex<HashMap<Rational, Rational>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Exact value of the Takagi function at a rational point of `[0, 1]`.
///
/// Results with moderately sized denominators are memoized in a shared,
/// thread-safe table.
pub fn takagi(x: &Rational) -> Result<Rational> {
    if let Some(v) = memo().lock().expect("memo poisoned").get(x) {
        return Ok(v.clone());
    }
    let (n, d) = takagi_fraction(x)?;
    let value = Rational::new(n, d);
    if value.denom().bits() <= MEMO_ENTRY_BITS && x.denom().bits() <= MEMO_ENTRY_BITS {
        let mut table = memo().lock().expect("memo poisoned");
        if table.len() >= MEMO_CAPACITY {
            table.clear();
        }
        table.insert(x.clone(), value.clone());
    }
    Ok(value)
}

/// Unreduced fraction used to compare large exact values without gcds.
struct Frac {
    n: BigInt,
    d: BigInt,
}

impl Frac {
    fn of(x: &Rational) -> Frac {
        Frac { n: x.numer().clone(), d: x.denom().clone() }
    }

    fn takagi(x: &Rational) -> Result<Frac> {
        let (n, d) = takagi_fraction(x)?;
        Ok(Frac { n, d })
    }

    fn half(self) -> Frac {
        Frac { n: self.n, d: self.d << 1usize }
    }

    fn add(&self, other: &Frac) -> Frac {
        // the denominator of T(2x) is a multiple of that of x, so the sum
        // stays on it and avoids growing by a factor q
        if other.d.bits() <= 64 {
            let (k, r) = self.d.div_rem(&other.d);
            if r.is_zero() {
                return Frac { n: &self.n + &other.n * k, d: self.d.clone() };
            }
        }
        Frac { n: &self.n * &other.d + &other.n * &self.d, d: &self.d * &other.d }
    }

    /// Values of `T` at related points have denominators with one odd part,
    /// so most comparisons need only a shift.
    fn same(&self, other: &Frac) -> bool {
        if self.d == other.d {
            return self.n == other.n;
        }
        let (s, t) = (self.d.trailing_zeros().unwrap_or(0), other.d.trailing_zeros().unwrap_or(0));
        if self.d.clone() >> s as usize == other.d.clone() >> t as usize {
            return if s <= t {
                (&self.n << (t - s) as usize) == other.n
            } else {
                self.n == (&other.n << (s - t) as usize)
            };
        }
        &self.n * &other.d == &other.n * &self.d
    }
}

/// Checks `T(1−x) = T(x)` and the two-branch functional equation
/// `T(x) = ½T(2x) + x` (x ≤ ½), `T(x) = ½T(2x−1) + 1 − x` (x ≥ ½) exactly.
pub fn check_functional_equation(x: &Rational) -> Result<bool> {
    check_unit(x)?;
    let one = Rational::one();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let tx = Frac::takagi(x)?;
    if !tx.same(&Frac::takagi(&(&one - x))?) {
        return Ok(false);
    }
    if x <= &half {
        let rhs = Frac::takagi(&(x * BigInt::from(2)))?.half().add(&Frac::of(x));
        if !tx.same(&rhs) {
            return Ok(false);
        }
    }
    if x >= &half {
        let inner = x * BigInt::from(2) - &one;
        let rhs = Frac::takagi(&inner)?.half().add(&Frac::of(&(&one - x)));
        if !tx.same(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, pow2, rat};

    #[test]
    fn phi_values() {
        assert_eq!(phi(&rat(1, 2)), rat(1, 2));
        assert_eq!(phi(&rat(7, 3)), rat(1, 3));
        assert_eq!(phi(&int(0)), int(0));
        assert_eq!(phi(&rat(-1, 4)), rat(1, 4));
    }

    #[test]
    fn known_values() {
        assert_eq!(takagi(&rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(takagi(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(takagi(&rat(1, 7)).unwrap(), rat(22, 49));
        assert_eq!(takagi(&rat(1, 3)).unwrap(), rat(2, 3));
        assert_eq!(takagi(&int(0)).unwrap(), int(0));
        assert_eq!(takagi(&int(1)).unwrap(), int(0));
        assert_eq!(takagi(&rat(1, 5)).unwrap(), rat(8, 15));
        assert_eq!(takagi(&rat(1, 12)).unwrap(), rat(1, 3));
        assert_eq!(takagi(&rat(257, 2048)).unwrap(), rat(777, 2048));
    }

    #[test]
    fn powers_of_two() {
        for k in 1..=64i64 {
            let x = pow2(-k);
            assert_eq!(takagi(&x).unwrap(), int(k) * pow2(-k));
            let p = takagi_partial(&x, k as usize).unwrap();
            assert_eq!(p.value, int(k) * pow2(-k));
        }
    }

    #[test]
    fn partial_sums() {
        let p = takagi_partial(&rat(1, 4), 2).unwrap();
        assert_eq!(p.value, rat(1, 2));
        assert_eq!(p.slope, 0);
        assert_eq!(takagi_partial(&rat(3, 7), 0).unwrap().value, int(0));
        // slope of T_3 just right of 0 is 3
        assert_eq!(takagi_partial(&int(0), 3).unwrap().slope, 3);
        assert_eq!(takagi_partial(&int(1), 3).unwrap().value, int(0));
    }

    #[test]
    fn functional_equation_spot_checks() {
        for x in [int(0), rat(1, 3), rat(1, 7), rat(1, 2), int(1), rat(5, 11), rat(999, 1000)] {
            assert!(check_functional_equation(&x).unwrap(), "failed at {x}");
        }
        assert!(check_functional_equation(&rat(3, 2)).is_err());
    }

    #[test]
    fn out_of_range() {
        assert!(takagi(&rat(-1, 2)).is_err());
        assert!(takagi_partial(&rat(5, 4), 2).is_err());
    }
}
