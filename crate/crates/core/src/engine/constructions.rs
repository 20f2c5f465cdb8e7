//! Explicit ordinates with prescribed level-set cardinalities.

use serde::Serialize;

use super::cardinality::{cardinality, Cardinality, CardinalityResult};
use super::orbit::{is_two_point_level_set, Membership};
use super::DEFAULT_BUDGET;
use crate::arith::{pow2, pow4, rat, Rational};
use crate::error::{Result, TakagiError};
use crate::expansion::{kappa, phi_map, psi, OrdinateInterval};
use crate::serde_rational;

/// An ordinate built to have `|L(y)| = target_cardinality`, with the engine's
/// verdict attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessConstruction {
    pub target_cardinality: u64,
    #[serde(with = "serde_rational")]
    pub ordinate: Rational,
    pub recipe: String,
    #[serde(with = "serde_rational")]
    pub base_ordinate: Rational,
    pub validation: CardinalityResult,
    pub confirmed: bool,
}

pub fn construct_witness(n: u64) -> Result<WitnessConstruction> {
    construct_witness_with_budget(n, DEFAULT_BUDGET)
}

/// An ordinate with exactly `2n` preimages:
///
/// * `2n = 2`: `1/3`, whose binary expansion has no `000`;
/// * `2n = 2^m ≥ 8`: `Σ_{i=0}^{m−2} ½·4^{−i} + 4^{−(m−1)}·s` with `s = 3/7`;
/// * `2n = 4m`: `½ + 4^{−m}·ŷ` with `ŷ = 1/3`;
/// * `2n = 4m + 2`: `⅜ + 4^{−(m+2)}·ŷ` with `ŷ = 1/3`.
pub fn construct_witness_with_budget(n: u64, budget: u64) -> Result<WitnessConstruction> {
    if n == 0 {
        return Err(TakagiError::Domain("witness needs n >= 1".into()));
    }
    let target = 2 * n;
    let third = rat(1, 3);
    let (ordinate, recipe, base) = if n == 1 {
        (third.clone(), "no-3-zeros ordinate".to_string(), third)
    } else if target.is_power_of_two() && target >= 8 {
        let m = target.trailing_zeros() as i64;
        let s = rat(3, 7);
        let mut y = &s * pow4(-(m - 1));
        for i in 0..=m - 2 {
            y += rat(1, 2) * pow4(-i);
        }
        (y, format!("doubling chain of length {m} over a two-point seed in I_3"), s)
    } else if target.is_multiple_of(4) {
        let m = (target / 4) as i64;
        (rat(1, 2) + pow4(-m) * &third, format!("1/2 + 4^-{m}·ŷ"), third)
    } else {
        let m = ((target - 2) / 4) as i64;
        (rat(3, 8) + pow4(-(m + 2)) * &third, format!("3/8 + 4^-{}·ŷ", m + 2), third)
    };
    let validation = cardinality(&ordinate, budget)?;
    let confirmed = validation.cardinality == Cardinality::Exact(target);
    Ok(WitnessConstruction { target_cardinality: target, ordinate, recipe, base_ordinate: base, validation, confirmed })
}

fn two_point(y: &Rational, budget: u64) -> Result<bool> {
    if y <= &rat(0, 1) || y >= &rat(1, 2) {
        return Ok(false);
    }
    Ok(is_two_point_level_set(y, budget)?.verdict == Membership::Yes)
}

/// The open interval `U_m` (`m ≥ 2`) of ordinates in `I₃` whose level sets have
/// `2^m + 2` points under the side conditions below:
/// `(⅜ + Σ_{j=1}^{m−2} 2^{−(2j+5)} + 3·2^{−(2m+5)}, ⅜ + Σ_{j=1}^{m−1} 2^{−(2j+5)})`.
pub fn sum_construction_interval(m: u64) -> Result<(Rational, Rational)> {
    if m < 2 {
        return Err(TakagiError::Domain(format!("sum construction needs m >= 2, got {m}")));
    }
    let m = m as i64;
    let tail = |upto: i64| -> Rational { (1..=upto).map(|j| pow2(-(2 * j + 5))).sum() };
    let lo = rat(3, 8) + tail(m - 2) + rat(3, 1) * pow2(-(2 * m + 5));
    let hi = rat(3, 8) + tail(m - 1);
    Ok((lo, hi))
}

/// `a_m = 4^{m−2} Σ_{j=1}^{m−2} 2^{−(2j−1)}`.
fn sum_offset(m: i64) -> Rational {
    let s: Rational = (1..=m - 2).map(|j| pow2(-(2 * j - 1))).sum();
    pow4(m - 2) * s
}

/// The point of `U_m` whose rescaled image `y' = 4^m Ψ(y) − a_m` is `seed ∈ I₃`.
pub fn sum_construction_sample(m: u64, seed: &Rational) -> Result<Rational> {
    sum_construction_interval(m)?;
    if !OrdinateInterval::new(3)?.contains(seed) {
        return Err(TakagiError::Domain(format!("seed must lie in I_3, got {seed}")));
    }
    let m = m as i64;
    Ok(rat(3, 8) + (seed + sum_offset(m)) * pow4(-(m + 1)))
}

/// `y ∈ U_m`, `y' ∈ S₂ ∩ I₃` and `Ψ^{m−1}(y) ∈ S₂ ∩ I₉`, each certified.
pub fn sum_construction_side_conditions(m: u64, y: &Rational, budget: u64) -> Result<bool> {
    let (lo, hi) = sum_construction_interval(m)?;
    if y <= &lo || y >= &hi {
        return Ok(false);
    }
    let mi = m as i64;
    let y_prime = pow4(mi) * psi(y)? - sum_offset(mi);
    if !OrdinateInterval::new(3)?.contains(&y_prime) || !two_point(&y_prime, budget)? {
        return Ok(false);
    }
    let mut z = y.clone();
    for _ in 0..m - 1 {
        z = psi(&z)?;
    }
    Ok(kappa(&z)? == Some(9) && two_point(&z, budget)?)
}

/// The open interval `U_m` (`m ≥ 4`) of ordinates in `I₃` whose level sets have
/// `2^m − 2` points under the side conditions below:
/// `(⅜ Σ_{j=0}^{m−2} 2^{−6j}, ⅜ Σ_{j=0}^{m−3} 2^{−6j} + 2^{−(6(m−2)+1)})`.
pub fn difference_construction_interval(m: u64) -> Result<(Rational, Rational)> {
    if m < 4 {
        return Err(TakagiError::Domain(format!("difference construction needs m >= 4, got {m}")));
    }
    let m = m as i64;
    let geo = |upto: i64| -> Rational { (0..=upto).map(|j| rat(3, 8) * pow2(-6 * j)).sum() };
    Ok((geo(m - 2), geo(m - 3) + pow2(-(6 * (m - 2) + 1))))
}

/// The point `y ∈ U_m` with `Φ^{m−2}(y) = seed ∈ I₃`.
pub fn difference_construction_sample(m: u64, seed: &Rational) -> Result<Rational> {
    difference_construction_interval(m)?;
    if !OrdinateInterval::new(3)?.contains(seed) {
        return Err(TakagiError::Domain(format!("seed must lie in I_3, got {seed}")));
    }
    let mut y = seed.clone();
    for _ in 0..m - 2 {
        y = rat(3, 8) + y / rat(64, 1);
    }
    Ok(y)
}

/// `y ∈ U_m`, `Ψ(Φⁿ(y)) ∈ S₂` for `n = 0, …, m−3`, and `Φ^{m−2}(y) ∈ S₂`.
pub fn difference_construction_side_conditions(m: u64, y: &Rational, budget: u64) -> Result<bool> {
    let (lo, hi) = difference_construction_interval(m)?;
    if y <= &lo || y >= &hi {
        return Ok(false);
    }
    let mut z = y.clone();
    for _ in 0..=m - 3 {
        if !two_point(&psi(&z)?, budget)? {
            return Ok(false);
        }
        z = phi_map(&z)?;
    }
    two_point(&z, budget)
}

fn kappas(y: &Rational, upto: usize) -> Result<Vec<Option<u64>>> {
    let mut out = Vec::with_capacity(upto);
    let mut z = y.clone();
    for _ in 0..upto {
        z = psi(&z)?;
        out.push(kappa(&z)?);
    }
    Ok(out)
}

fn phi_psi_above(y: &Rational, upto: usize) -> Result<bool> {
    let mut z = y.clone();
    for _ in 0..upto {
        z = psi(&z)?;
        if phi_map(&z)? <= rat(2, 3) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks, exactly, the structural facts behind the difference construction for
/// `y ∈ U_m`, `m ≥ 5`, with `y_n = Φ^{n−1}(y)`:
///
/// * `y_n ∈ I₃` for `n = 1, …, m−1`;
/// * `(κ₁, …, κ₆)(y_n) = (9,9,9,8,7,8)` and `Ψ⁷(y_n) = Ψ(y_{n+2})` for `n = 1, …, m−4`;
/// * `κ₁(y_{m−2}) = 9` and `(κ₁, …, κ₅)(y_{m−3}) = (9,9,9,8,7)`;
/// * `Φ(Ψʲ(y_n)) > ⅔` for `j = 1, …, 6`, `n = 1, …, m−4`, and for `j = 1, …, 5`, `n = m−3`.
pub fn verify_difference_claims(m: u64, y: &Rational) -> Result<bool> {
    if m < 5 {
        return Err(TakagiError::Domain(format!("the claims need m >= 5, got {m}")));
    }
    let (lo, hi) = difference_construction_interval(m)?;
    if y <= &lo || y >= &hi {
        return Err(TakagiError::Domain(format!("{y} is not in U_{m}")));
    }
    let m = m as usize;
    // ys[n] = y_n = Φ^{n−1}(y); index 0 unused
    let mut ys = vec![Rational::from_integer(0.into()), y.clone()];
    for _ in 2..=m - 1 {
        let next = phi_map(ys.last().expect("nonempty"))?;
        ys.push(next);
    }
    let i3 = OrdinateInterval::new(3)?;
    if !ys[1..].iter().all(|z| i3.contains(z)) {
        return Ok(false);
    }
    let pattern: Vec<Option<u64>> = [9, 9, 9, 8, 7, 8].iter().map(|&k| Some(k)).collect();
    for n in 1..=m - 4 {
        if kappas(&ys[n], 6)? != pattern {
            return Ok(false);
        }
        let mut z = ys[n].clone();
        for _ in 0..7 {
            z = psi(&z)?;
        }
        if z != psi(&ys[n + 2])? || !phi_psi_above(&ys[n], 6)? {
            return Ok(false);
        }
    }
    if kappas(&ys[m - 2], 1)? != [Some(9)] || kappas(&ys[m - 3], 5)? != pattern[..5] {
        return Ok(false);
    }
    phi_psi_above(&ys[m - 3], 5)
}
