//! Humps, Catalan counts, and the removed-interval system behind the bounds on
//! the measure of `S₂ = {y : |L(y)| = 2}`.
//!
//! A balanced dyadic `x₀ = 0.ε₁…ε_{2m}` (`D_{2m}(x₀) = 0`) carries a hump: the
//! graph above `I = [x₀, x₀ + 4^{−m}]` is a copy of the whole graph scaled by
//! `4^{−m}` and lifted by `T(x₀)`, so it projects onto
//! `J = [T(x₀), T(x₀) + ⅔·4^{−m}]`.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{int, pow2, pow4, rat, BinaryExpansion, Rational};
use crate::error::{Result, TakagiError};
use crate::eval::takagi;
use crate::expansion::t_k;
use crate::serde_rational;

/// Largest order accepted by [`enumerate_humps`].
pub const MAX_HUMP_ORDER: u64 = 14;
/// Most descriptors [`enumerate_humps`] will produce.
pub const MAX_HUMPS: usize = 1 << 20;
/// Most intervals [`removed_intervals`] will materialize.
pub const MAX_REMOVED_INTERVALS: usize = 1 << 20;

/// `C_n = binom(2n, n)/(n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    let mut c = BigUint::one();
    // C_{i+1} = C_i·2(2i + 1)/(i + 2)
    for i in 0..n {
        c = c * (2 * (2 * i + 1)) / (i + 2);
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HumpFilter {
    All,
    /// `D_j ≠ 0` for `j < 2m`.
    FirstGeneration,
    /// `D_j ≥ 0` for all `j ≤ 2m`.
    Leading,
    FirstGenerationLeading,
    /// First-generation leading humps that are not subsidiary.
    NonSubsidiary,
}

impl std::str::FromStr for HumpFilter {
    type Err = TakagiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "all" => Ok(Self::All),
            "first_generation" => Ok(Self::FirstGeneration),
            "leading" => Ok(Self::Leading),
            "first_generation_leading" => Ok(Self::FirstGenerationLeading),
            "non_subsidiary" => Ok(Self::NonSubsidiary),
            _ => Err(TakagiError::Parse(format!("unknown hump filter {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HumpDescriptor {
    #[serde(with = "serde_rational")]
    pub x0: Rational,
    /// The `2m` digits of `x₀`.
    pub binary: String,
    pub order: u64,
    /// Number of `j ≤ 2m` with `D_j(x₀) = 0`.
    pub generation: u64,
    pub leading: bool,
    /// `x₀ = 0.ε₁…ε_{2m−3}011` where `0.ε₁…ε_{2m−3}1` is first-generation
    /// leading: the hump sits directly left of that larger one.
    pub subsidiary: bool,
    #[serde(with = "serde_rational::pair")]
    pub abscissa_interval: (Rational, Rational),
    #[serde(with = "serde_rational::pair")]
    pub ordinate_interval: (Rational, Rational),
}

fn excess_path(digits: &[u8]) -> impl Iterator<Item = i64> + '_ {
    digits.iter().scan(0i64, |d, &e| {
        *d += 1 - 2 * i64::from(e);
        Some(*d)
    })
}

fn is_first_generation_leading(digits: &[u8]) -> bool {
    let n = digits.len();
    n >= 2 && excess_path(digits).enumerate().all(|(j, d)| if j + 1 == n { d == 0 } else { d > 0 })
}

fn is_subsidiary(digits: &[u8]) -> bool {
    let n = digits.len();
    if n < 4 || digits[n - 3..] != [0, 1, 1] {
        return false;
    }
    let mut parent = digits[..n - 3].to_vec();
    parent.push(1);
    is_first_generation_leading(&parent)
}

fn describe(digits: &[u8]) -> Result<HumpDescriptor> {
    let m = digits.len() as u64 / 2;
    let x0 = BinaryExpansion::evaluate(digits, &[]);
    let path: Vec<i64> = excess_path(digits).collect();
    let y0 = takagi(&x0)?;
    let width = pow4(-(m as i64));
    Ok(HumpDescriptor {
        binary: digits.iter().map(|&e| char::from(b'0' + e)).collect(),
        order: m,
        generation: path.iter().filter(|&&d| d == 0).count() as u64,
        leading: path.iter().all(|&d| d >= 0),
        subsidiary: is_subsidiary(digits),
        abscissa_interval: (x0.clone(), &x0 + &width),
        ordinate_interval: (y0.clone(), y0 + rat(2, 3) * width),
        x0,
    })
}

struct HumpSearch {
    filter: HumpFilter,
    len: usize,
    digits: Vec<u8>,
    out: Vec<HumpDescriptor>,
}

impl HumpSearch {
    /// Whether a prefix ending at excess `d` can still be completed.
    fn allowed(&self, d: i64) -> bool {
        let n = self.digits.len();
        let remaining = (self.len - n) as i64;
        if d.abs() > remaining {
            return false;
        }
        let interior = n < self.len;
        match self.filter {
            HumpFilter::All => true,
            HumpFilter::Leading => d >= 0,
            HumpFilter::FirstGeneration => !interior || d != 0,
            HumpFilter::FirstGenerationLeading | HumpFilter::NonSubsidiary => {
                if interior {
                    d > 0
                } else {
                    d == 0
                }
            }
        }
    }

    /// Digit strings in lexicographic order, pruned as the filter allows.
    fn run(&mut self, d: i64) -> Result<()> {
        if self.digits.len() == self.len {
            if self.filter == HumpFilter::NonSubsidiary && is_subsidiary(&self.digits) {
                return Ok(());
            }
            if self.out.len() >= MAX_HUMPS {
                return Err(TakagiError::CapExceeded(format!("more than {MAX_HUMPS} humps")));
            }
            self.out.push(describe(&self.digits)?);
            return Ok(());
        }
        for e in [0u8, 1] {
            let next = d + 1 - 2 * i64::from(e);
            self.digits.push(e);
            if self.allowed(next) {
                self.run(next)?;
            }
            self.digits.pop();
        }
        Ok(())
    }
}

/// All humps of order `1..=max_order` passing `filter`, by order and then by
/// digit string.
pub fn enumerate_humps(max_order: u64, filter: HumpFilter) -> Result<Vec<HumpDescriptor>> {
    if max_order == 0 {
        return Err(TakagiError::Domain("max_order must be at least 1".into()));
    }
    if max_order > MAX_HUMP_ORDER {
        return Err(TakagiError::CapExceeded(format!("max_order {max_order} above {MAX_HUMP_ORDER}")));
    }
    let mut search = HumpSearch { filter, len: 0, digits: Vec::new(), out: Vec::new() };
    for m in 1..=max_order {
        search.len = 2 * m as usize;
        search.run(0)?;
    }
    Ok(search.out)
}

/// Writes a hump table with header
/// `x0,binary,order,generation,leading,subsidiary,j_lo,j_hi`.
pub fn write_humps_csv<W: Write>(humps: &[HumpDescriptor], out: W) -> Result<()> {
    let io = |e: csv::Error| TakagiError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x0", "binary", "order", "generation", "leading", "subsidiary", "j_lo", "j_hi"]).map_err(io)?;
    for h in humps {
        w.write_record([
            h.x0.to_string(),
            h.binary.clone(),
            h.order.to_string(),
            h.generation.to_string(),
            h.leading.to_string(),
            h.subsidiary.to_string(),
            h.ordinate_interval.0.to_string(),
            h.ordinate_interval.1.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| TakagiError::Io(e.to_string()))
}

/// `σ₃ = 1/32` and `σ_k = 2^{−(k+1)} − 2^{−(2k−1)}` for `k ≥ 4`: the total
/// length of the removed intervals lying in `I_k`, counted with multiplicity.
pub fn sigma_k(k: u64) -> Result<Rational> {
    match k {
        0..=2 => Err(TakagiError::Domain(format!("sigma_k needs k >= 3, got {k}"))),
        3 => Ok(rat(1, 32)),
        _ => Ok(pow2(-(k as i64 + 1)) - pow2(-(2 * k as i64 - 1))),
    }
}

/// `σ_{k+1} = σ_k − σ_{k−1}/4 − ½·4^{−k}`, for `k ≥ 4`.
pub fn sigma_recursion_holds(k: u64) -> Result<bool> {
    if k < 4 {
        return Err(TakagiError::Domain(format!("the sigma recursion starts at k = 4, got {k}")));
    }
    Ok(sigma_k(k + 1)? == sigma_k(k)? - sigma_k(k - 1)? / int(4) - rat(1, 2) * pow4(-(k as i64)))
}

/// The intervals `Ψ_{k₀}^{−1}∘…∘Ψ_{k_{n−1}}^{−1}(J_{k_n})` with
/// `J_k = [t_k, t_k + ⅔·4^{−k}]`, over tuples with `k₀ ≥ 3`,
/// `k_i ≥ max(3, k_{i−1} − 1)`, all `k_i ≤ max_k` and `n ≤ depth_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovedIntervalSystem {
    pub depth_n: u64,
    pub max_k: u64,
    /// Sorted by lower endpoint.
    #[serde(with = "serde_rational::pair_vec")]
    pub intervals: Vec<(Rational, Rational)>,
    /// Length of `⋃ J_k` over `k > max_k`, disjoint from every listed interval.
    #[serde(with = "serde_rational")]
    pub analytic_tail: Rational,
    /// Total length, with multiplicity, of the intervals not listed and not in
    /// the analytic tail: `1/12` minus the listed and analytic mass.
    #[serde(with = "serde_rational")]
    pub tail_bound: Rational,
}

/// Endpoints scaled by `3·2^shift`, so every interval is a pair of integers.
struct Scan {
    shift: u64,
    intervals: Vec<(BigInt, BigInt)>,
    /// Sum of interval lengths, scaled.
    mass: BigInt,
}

impl Scan {
    fn new(depth_n: u64, max_k: u64, cap: Option<usize>) -> Result<Self> {
        let mut scan = Scan { shift: 2 * max_k + 2 * depth_n, intervals: Vec::new(), mass: BigInt::zero() };
        for k in 3..=max_k {
            scan.descend(k, 0, &BigInt::zero(), depth_n, max_k, cap)?;
        }
        scan.intervals.sort();
        Ok(scan)
    }

    /// `t_k` and `⅔·4^{−k}` at depth `n`, both divided by `4ⁿ`, scaled.
    fn scaled(&self, k: u64, n: u64) -> (BigInt, BigInt) {
        let t = BigInt::from(3 * k) << (self.shift - k - 2 * n) as usize;
        let h = BigInt::one() << (self.shift + 1 - 2 * k - 2 * n) as usize;
        (t, h)
    }

    fn descend(&mut self, k: u64, n: u64, offset: &BigInt, depth_n: u64, max_k: u64, cap: Option<usize>) -> Result<()> {
        let (t, h) = self.scaled(k, n);
        let lo = offset + &t;
        if cap.is_some_and(|c| self.intervals.len() >= c) {
            return Err(TakagiError::CapExceeded(format!("more than {} removed intervals", cap.unwrap_or(0))));
        }
        self.intervals.push((lo.clone(), &lo + &h));
        self.mass += &h;
        if n < depth_n {
            for next in k.saturating_sub(1).max(3)..=max_k {
                self.descend(next, n + 1, &lo, depth_n, max_k, cap)?;
            }
        }
        Ok(())
    }

    fn denominator(&self) -> BigInt {
        BigInt::from(3) << self.shift as usize
    }

    fn union_length(&self) -> BigInt {
        let mut total = BigInt::zero();
        let mut current: Option<(BigInt, BigInt)> = None;
        for (lo, hi) in &self.intervals {
            match &mut current {
                Some((_, end)) if lo <= end => {
                    if hi > end {
                        *end = hi.clone();
                    }
                }
                _ => {
                    if let Some((a, b)) = current.take() {
                        total += b - a;
                    }
                    current = Some((lo.clone(), hi.clone()));
                }
            }
        }
        if let Some((a, b)) = current {
            total += b - a;
        }
        total
    }
}

fn check_parameters(max_k: u64) -> Result<()> {
    if max_k < 3 {
        return Err(TakagiError::Domain(format!("max_k must be at least 3, got {max_k}")));
    }
    Ok(())
}

/// `Σ_{k > max_k} ⅔·4^{−k} = (2/9)·4^{−max_k}`.
fn analytic_tail(max_k: u64) -> Rational {
    rat(2, 9) * pow4(-(max_k as i64))
}

pub fn removed_intervals(depth_n: u64, max_k: u64) -> Result<RemovedIntervalSystem> {
    check_parameters(max_k)?;
    let scan = Scan::new(depth_n, max_k, Some(MAX_REMOVED_INTERVALS))?;
    let den = scan.denominator();
    let tail = analytic_tail(max_k);
    let mass = Rational::new(scan.mass.clone(), den.clone());
    let intervals = scan
        .intervals
        .into_iter()
        .map(|(lo, hi)| (Rational::new(lo, den.clone()), Rational::new(hi, den.clone())))
        .collect();
    Ok(RemovedIntervalSystem {
        depth_n,
        max_k,
        intervals,
        tail_bound: rat(1, 12) - mass - &tail,
        analytic_tail: tail,
    })
}

/// Certified bounds on the Lebesgue measure of `S₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureBounds {
    pub depth_n: u64,
    pub max_k: u64,
    #[serde(with = "serde_rational")]
    pub lower: Rational,
    #[serde(with = "serde_rational")]
    pub upper: Rational,
    /// Measure of the enumerated part of the removed set, `[½, ⅔]` included.
    #[serde(with = "serde_rational")]
    pub removed_union: Rational,
    #[serde(with = "serde_rational")]
    pub tail_bound: Rational,
    pub intervals: usize,
}

/// `S₂` is `[0, ⅔]` minus `[½, ⅔]` and the removed intervals. The union `U`
/// of what is enumerated is part of the removed set, so `⅔ − U` bounds the
/// measure from above; the rest has total length at most the tail bound, which
/// gives the lower bound.
pub fn s2_measure_bounds(depth_n: u64, max_k: u64) -> Result<MeasureBounds> {
    check_parameters(max_k)?;
    let scan = Scan::new(depth_n, max_k, None)?;
    let den = scan.denominator();
    let tail = analytic_tail(max_k);
    let union = Rational::new(scan.union_length(), den.clone()) + &tail + rat(1, 6);
    let tail_bound = rat(1, 12) - Rational::new(scan.mass.clone(), den) - tail;
    debug_assert!(tail_bound >= Rational::zero());
    let upper = rat(2, 3) - &union;
    Ok(MeasureBounds {
        depth_n,
        max_k,
        lower: &upper - &tail_bound,
        upper,
        removed_union: union,
        tail_bound,
        intervals: scan.intervals.len(),
    })
}

/// `J_k = [t_k, t_k + ⅔·4^{−k}]`.
pub fn removed_interval(k: u64) -> (Rational, Rational) {
    let t = t_k(k);
    let hi = &t + rat(2, 3) * pow4(-(k as i64));
    (t, hi)
}
