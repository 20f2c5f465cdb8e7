//! Level sets `L(y) = {x ∈ [0,1] : T(x) = y}`.
//!
//! With `L₀(y) = L(y) ∩ [0, ½]` the engine works from the set equations
//!
//! * `L(y) = L₀(y) ∪ (1 − L₀(y))`,
//! * `L₀(y) = f_k[L₀(Ψ(y))] ∪ ⋃_j g_{k,j}[L(4ʲΦ(y))]` for `y ∈ I_k`, `k ≥ 3`,
//! * `L₀(y) = ⋃_j g_{1,j}[L(4ʲΦ(y))]` for `y ∈ I₂`,
//!
//! walking the `Ψ`-orbit of `y` and recursing into the "hump hits"
//! `4ʲΦ(Ψⁿ(y)) ≤ ⅔`. An infinite orbit is closed only by a certificate that no
//! further hits occur; without one the answer is a lower bound.

mod cardinality;
mod constructions;
mod orbit;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{pow2, pow4, rat, Rational};
use crate::serde_rational;

pub use cardinality::{
    cardinality, enumerate_level_set, Cardinality, CardinalityResult, LevelSetEnumeration,
};
pub use constructions::{
    construct_witness, construct_witness_with_budget, difference_construction_interval,
    difference_construction_sample, difference_construction_side_conditions,
    sum_construction_interval, sum_construction_sample, sum_construction_side_conditions,
    verify_difference_claims, WitnessConstruction,
};
pub use orbit::{doubling_bound_check, is_two_point_level_set, DoublingVerdict, Membership, MembershipResult};

/// Default work budget for the semi-decision procedures.
pub const DEFAULT_BUDGET: u64 = 10_000;

/// `x ↦ scale·x + offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineMap {
    #[serde(with = "serde_rational")]
    pub scale: Rational,
    #[serde(with = "serde_rational")]
    pub offset: Rational,
}

impl AffineMap {
    pub fn identity() -> Self {
        Self { scale: rat(1, 1), offset: rat(0, 1) }
    }

    /// `f_k(x) = x/4 + 2⁻ᵏ`.
    pub fn f(k: u64) -> Self {
        Self { scale: rat(1, 4), offset: pow2(-(k as i64)) }
    }

    /// `g_{k,j}(x) = x/4^{k+j} + 2⁻ᵏ − Σ_{r=0}^{j} 4^{−(k+r)}`.
    pub fn g(k: u64, j: u64) -> Self {
        let k = k as i64;
        let j = j as i64;
        // Σ_{r=0}^{j} 4^{-(k+r)} = (4/3)·4^{-k}·(1 − 4^{-(j+1)})
        let sum = rat(4, 3) * pow4(-k) * (rat(1, 1) - pow4(-(j + 1)));
        Self { scale: pow4(-(k + j)), offset: pow2(-k) - sum }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.scale * x + &self.offset
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap { scale: &self.scale * &inner.scale, offset: self.apply(&inner.offset) }
    }
}

/// The anchor `x_{k,j} = 2⁻ᵏ − Σ_{r=0}^{j} 4^{−(k+r)}`, equal to `g_{k,j}(0)`.
pub fn anchor(k: u64, j: i64) -> Rational {
    let mut x = pow2(-(k as i64));
    for r in 0..=j {
        x -= pow4(-(k as i64 + r));
    }
    x
}

pub(crate) fn four_pow_times(j: u64, x: &Rational) -> Rational {
    x * (BigInt::from(1) << (2 * j as usize))
}
