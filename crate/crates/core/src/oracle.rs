//! Brute-force enclosure of level sets by subdividing `[0, 1]` into dyadic
//! boxes, independent of the symbolic engine.
//!
//! On `[i/2^m, (i+1)/2^m]` the partial sum `T_m` is linear and
//! `T = T_m + 2^{−m}·T(2^m x mod 1)` with `0 ≤ T ≤ ⅔`, so the values of `T` lie
//! between the smaller endpoint value and the larger one plus `⅔·2^{−m}`.
//! At a dyadic point `T = T_m`, and `2^m·T(i/2^m)` is an integer.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::arith::{pow2, rat, Rational};
use crate::error::{Result, TakagiError};
use crate::serde_rational;

pub const MAX_ORACLE_DEPTH: u32 = 48;
/// Most surviving boxes kept at one depth.
pub const MAX_BOXES: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DyadicBox {
    pub depth: u32,
    /// The box is `[index/2^depth, (index+1)/2^depth]`.
    pub index: u64,
    #[serde(with = "serde_rational")]
    pub range_lo: Rational,
    #[serde(with = "serde_rational")]
    pub range_hi: Rational,
}

impl DyadicBox {
    pub fn new(depth: u32, index: u64) -> Result<Self> {
        check_depth(depth)?;
        if index >= 1 << depth {
            return Err(TakagiError::Domain(format!("box index {index} out of range at depth {depth}")));
        }
        let (range_lo, range_hi) = enclosure(depth, index);
        Ok(Self { depth, index, range_lo, range_hi })
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let scaled = x * Rational::from_integer(BigInt::from(1u64) << self.depth as usize);
        scaled >= rat(self.index as i64, 1) && scaled <= rat(self.index as i64 + 1, 1)
    }
}

fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_ORACLE_DEPTH {
        return Err(TakagiError::CapExceeded(format!("depth {depth} above {MAX_ORACLE_DEPTH}")));
    }
    Ok(())
}

/// `2^m·T(i/2^m) = Σ_{j=1}^{m} min(i mod 2^j, 2^j − i mod 2^j)`, for `i ≤ 2^m`.
fn scaled_value(i: u64, m: u32) -> u64 {
    (1..=m)
        .map(|j| {
            let r = i & ((1u64 << j) - 1);
            r.min((1u64 << j) - r)
        })
        .sum()
}

fn enclosure(depth: u32, index: u64) -> (Rational, Rational) {
    let a = scaled_value(index, depth);
    let b = scaled_value(index + 1, depth);
    let unit = pow2(-(depth as i64));
    let lo = rat(a.min(b) as i64, 1) * &unit;
    let hi = (rat(a.max(b) as i64, 1) + rat(2, 3)) * unit;
    (lo, hi)
}

/// Certified range `[lo, hi] ⊇ T([i/2^m, (i+1)/2^m])`.
pub fn enclose(depth: u32, index: u64) -> Result<(Rational, Rational)> {
    let b = DyadicBox::new(depth, index)?;
    Ok((b.range_lo, b.range_hi))
}

/// `y = p/q` tested against `[a, b + ⅔]·2^{−m}` as `3·2^m·p ∈ [3qa, q(3b + 2)]`.
enum Target {
    Small { p: u128, q: u128 },
    Big { p: BigInt, q: BigInt },
}

impl Target {
    fn new(y: &Rational) -> Self {
        match (y.numer().to_u128(), y.denom().to_u128()) {
            (Some(p), Some(q)) if p < 1 << 64 && q < 1 << 64 => Target::Small { p, q },
            _ => Target::Big { p: y.numer().clone(), q: y.denom().clone() },
        }
    }

    fn inside(&self, m: u32, a: u64, b: u64) -> bool {
        let (lo, hi) = (a.min(b), a.max(b));
        match self {
            Target::Small { p, q } => {
                let y = 3 * (p << m);
                y >= 3 * q * lo as u128 && y <= q * (3 * hi as u128 + 2)
            }
            Target::Big { p, q } => {
                let y: BigInt = (p << m as usize) * 3;
                y >= q * (3 * lo) && y <= q * (3 * hi + 2)
            }
        }
    }
}

/// A surviving box with both scaled endpoint values.
#[derive(Clone, Copy)]
struct Survivor {
    index: u64,
    left: u64,
    right: u64,
}

/// Union of runs of adjacent surviving boxes at the final depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalCover {
    #[serde(with = "serde_rational")]
    pub ordinate: Rational,
    pub depth: u32,
    #[serde(with = "serde_rational::pair_vec")]
    pub clusters: Vec<(Rational, Rational)>,
    /// Surviving boxes at the final depth.
    pub boxes: usize,
    /// Cluster count after each subdivision, depth `0..=depth`.
    pub cluster_history: Vec<usize>,
    /// The cluster count grew over the last four depths, as it does forever
    /// for an infinite level set.
    pub still_splitting: bool,
}

fn count_runs(level: &[Survivor]) -> usize {
    level.windows(2).filter(|w| w[1].index != w[0].index + 1).count() + usize::from(!level.is_empty())
}

/// Sound enclosure of `L(y)`: every solution of `T(x) = y` lies in a cluster.
pub fn level_set_cover(y: &Rational, depth: u32) -> Result<IntervalCover> {
    check_depth(depth)?;
    if y.is_negative() || y > &rat(2, 3) {
        return Err(TakagiError::Domain(format!("ordinate must lie in [0, 2/3], got {y}")));
    }
    let target = Target::new(y);
    let mut level = vec![Survivor { index: 0, left: 0, right: 0 }];
    let mut history = vec![count_runs(&level)];
    for m in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for s in &level {
            // 2^{m+1}·T at the midpoint: average of the endpoints plus 2^{−(m+1)}
            let mid = s.left + s.right + 1;
            for child in [
                Survivor { index: 2 * s.index, left: 2 * s.left, right: mid },
                Survivor { index: 2 * s.index + 1, left: mid, right: 2 * s.right },
            ] {
                if target.inside(m + 1, child.left, child.right) {
                    next.push(child);
                }
            }
        }
        if next.len() > MAX_BOXES {
            return Err(TakagiError::CapExceeded(format!("more than {MAX_BOXES} boxes at depth {}", m + 1)));
        }
        level = next;
        history.push(count_runs(&level));
    }
    let unit = pow2(-(depth as i64));
    let mut clusters: Vec<(Rational, Rational)> = Vec::new();
    let mut run: Option<(u64, u64)> = None;
    let close = |(a, b): (u64, u64)| (rat(a as i64, 1) * &unit, rat(b as i64 + 1, 1) * &unit);
    for s in &level {
        run = match run {
            Some((a, b)) if s.index == b + 1 => Some((a, s.index)),
            Some(r) => {
                clusters.push(close(r));
                Some((s.index, s.index))
            }
            None => Some((s.index, s.index)),
        };
    }
    clusters.extend(run.map(close));
    let n = history.len();
    let still_splitting = n > 4 && history[n - 1] > history[n - 5];
    Ok(IntervalCover {
        ordinate: y.clone(),
        depth,
        clusters,
        boxes: level.len(),
        cluster_history: history,
        still_splitting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::takagi;

    #[test]
    fn whole_interval() {
        assert_eq!(enclose(0, 0).unwrap(), (rat(0, 1), rat(2, 3)));
    }

    #[test]
    fn quarter_boxes() {
        let (lo, hi) = enclose(2, 1).unwrap();
        assert!(lo <= rat(1, 2) && rat(1, 2) <= hi);
        let (_, hi) = enclose(2, 0).unwrap();
        assert!(hi <= rat(2, 3));
    }

    #[test]
    fn endpoint_values_match_evaluation() {
        for m in 0..9u32 {
            for i in 0..=(1u64 << m) {
                let x = rat(i as i64, 1 << m);
                assert_eq!(rat(scaled_value(i, m) as i64, 1 << m), takagi(&x).unwrap());
            }
        }
    }

    #[test]
    fn one_third_has_two_clusters() {
        let c = level_set_cover(&rat(1, 3), 30).unwrap();
        assert_eq!(c.clusters.len(), 2);
        assert!(c.clusters[0].0 <= rat(1, 12) && rat(1, 12) <= c.clusters[0].1);
        assert!(c.clusters[1].0 <= rat(11, 12) && rat(11, 12) <= c.clusters[1].1);
    }

    #[test]
    fn seven_twelfths_has_four() {
        assert_eq!(level_set_cover(&rat(7, 12), 30).unwrap().clusters.len(), 4);
    }

    #[test]
    fn maximum_keeps_splitting() {
        let c = level_set_cover(&rat(2, 3), 16).unwrap();
        assert!(c.still_splitting);
        assert!(c.clusters.len() >= 1 << 6);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(level_set_cover(&rat(3, 4), 4).is_err());
        assert!(level_set_cover(&rat(1, 3), 49).is_err());
        assert!(DyadicBox::new(3, 8).is_err());
    }
}
