use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::orbit::{walk, Closure, TailKind, Walk};
use super::{four_pow_times, AffineMap};
use crate::arith::{pow2, rat, Rational};
use crate::error::{Result, TakagiError};
use crate::eval::takagi;
use crate::expansion::{canonical_expansion, expansion_to_abscissa};
use crate::serde_rational;

/// `|L(y)|` as far as the engine could certify it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "count")]
pub enum Cardinality {
    Exact(u64),
    Infinite,
    /// The work budget ran out; the level set has at least this many points.
    AtLeast(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CardinalityResult {
    #[serde(with = "serde_rational")]
    pub ordinate: Rational,
    #[serde(flatten)]
    pub cardinality: Cardinality,
    /// Rule that settled the outermost computation.
    pub certificate: String,
    /// Every rule used anywhere in the recursion, in order of first use.
    pub certificates: Vec<String>,
    pub work: u64,
}

const EMPTY: &str = "empty above 2/3";
const ZERO: &str = "zero level";
const HALF: &str = "1/2 ⇒ infinite";
const DEPENDENCY_CYCLE: &str = "dependency cycle ⇒ infinite";
const EXHAUSTED: &str = "budget exhausted";
const UPPER_BRANCH: &str = "upper branch hump sum";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Count {
    Finite(u64),
    Infinite,
    /// Lower bound only.
    Partial(u64),
}

impl Count {
    fn value(self) -> u64 {
        match self {
            Count::Finite(n) | Count::Partial(n) => n,
            Count::Infinite => u64::MAX,
        }
    }

    fn add(self, other: Count) -> Count {
        match (self, other) {
            (Count::Infinite, _) | (_, Count::Infinite) => Count::Infinite,
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a.saturating_add(b)),
            (a, b) => Count::Partial(a.value().saturating_add(b.value())),
        }
    }

    fn double(self) -> Count {
        self.add(self)
    }
}

enum Memo {
    InProgress,
    Done(Count, &'static str),
}

struct Engine {
    budget: u64,
    work: u64,
    memo: HashMap<Rational, Memo>,
    tags: Vec<&'static str>,
}

/// The `j ≥ 0` with `4ʲ·phi ≤ ⅔`, for `phi > 0`.
fn hump_levels(phi: &Rational) -> Vec<(u64, Rational)> {
    let mut out = Vec::new();
    let mut j = 0;
    loop {
        let v = four_pow_times(j, phi);
        if v > rat(2, 3) {
            return out;
        }
        out.push((j, v));
        j += 1;
    }
}

impl Engine {
    fn new(budget: u64) -> Self {
        Self { budget, work: 0, memo: HashMap::new(), tags: Vec::new() }
    }

    fn note(&mut self, tag: &'static str) {
        if !self.tags.contains(&tag) {
            self.tags.push(tag);
        }
    }

    fn charge(&mut self) -> bool {
        if self.work >= self.budget {
            return false;
        }
        self.work += 1;
        true
    }

    fn orbit(&mut self, y: &Rational) -> Walk {
        let (budget, mut work) = (self.budget, self.work);
        let w = walk(y, false, &mut || {
            if work >= budget {
                return false;
            }
            work += 1;
            true
        });
        self.work = work;
        w
    }

    /// `|L(y)|`.
    fn level(&mut self, y: &Rational) -> (Count, &'static str) {
        let (count, tag) = self.level_inner(y);
        self.note(tag);
        (count, tag)
    }

    fn level_inner(&mut self, y: &Rational) -> (Count, &'static str) {
        if y > &rat(2, 3) {
            return (Count::Finite(0), EMPTY);
        }
        if y.is_zero() {
            return (Count::Finite(2), ZERO);
        }
        if y == &rat(1, 2) {
            return (Count::Infinite, HALF);
        }
        match self.memo.get(y) {
            Some(Memo::Done(c, tag)) => return (*c, tag),
            Some(Memo::InProgress) => return (Count::Infinite, DEPENDENCY_CYCLE),
            None => {}
        }
        if !self.charge() {
            return (Count::Partial(2), EXHAUSTED);
        }
        self.memo.insert(y.clone(), Memo::InProgress);
        let (half, tag) = self.half_level(y);
        let count = half.double();
        if matches!(count, Count::Partial(_)) {
            self.memo.remove(y);
        } else {
            self.memo.insert(y.clone(), Memo::Done(count, tag));
        }
        (count, tag)
    }

    /// `Σ_j |L(4ʲ·phi)|`, with the first infinite tag if any.
    fn hump_sum(&mut self, phi: &Rational) -> (Count, Option<&'static str>) {
        let mut total = Count::Finite(0);
        let mut infinite_tag = None;
        for (_, v) in hump_levels(phi) {
            let (c, tag) = self.level(&v);
            if c == Count::Infinite && infinite_tag.is_none() {
                infinite_tag = Some(tag);
            }
            total = total.add(c);
        }
        (total, infinite_tag)
    }

    /// `|L₀(y)|` for `0 < y ≤ ⅔`, `y ≠ ½`.
    fn half_level(&mut self, y: &Rational) -> (Count, &'static str) {
        if y > &rat(1, 2) {
            let phi = (y - rat(1, 2)) * BigInt::from(4);
            let (sum, inf) = self.hump_sum(&phi);
            return (sum, inf.unwrap_or(UPPER_BRANCH));
        }
        let w = self.orbit(y);
        match w.closure {
            Closure::Infinite(tag) => (Count::Infinite, tag),
            Closure::FirstHit(_) => unreachable!("walk runs to closure"),
            Closure::Exhausted => {
                let lower: u64 = w.hits.iter().map(|&m| 2 * hump_levels(&w.steps[m].phi).len() as u64).sum();
                (Count::Partial(1 + lower), EXHAUSTED)
            }
            Closure::Tail { kind, .. } => {
                let mut total = Count::Finite(1);
                let mut tag = kind.tag();
                for &m in &w.hits {
                    let (c, inf) = self.hump_sum(&w.steps[m].phi);
                    if c == Count::Infinite && total != Count::Infinite {
                        tag = inf.unwrap_or(tag);
                    }
                    total = total.add(c);
                    if matches!(c, Count::Partial(_)) && total != Count::Infinite {
                        tag = EXHAUSTED;
                    }
                }
                (total, tag)
            }
        }
    }
}

/// Classifies `|L(y)|` for `0 ≤ y ≤ ⅔` within `budget` units of work (one per
/// distinct ordinate and one per orbit step). `Exact` is only reported when
/// every infinite orbit in the recursion was closed by a certificate.
pub fn cardinality(y: &Rational, budget: u64) -> Result<CardinalityResult> {
    if y.is_negative() || y > &rat(2, 3) {
        return Err(TakagiError::Domain(format!("ordinate must lie in [0, 2/3], got {y}")));
    }
    let mut engine = Engine::new(budget);
    let (count, tag) = engine.level(y);
    let cardinality = match count {
        Count::Finite(n) => Cardinality::Exact(n),
        Count::Infinite => Cardinality::Infinite,
        Count::Partial(n) => Cardinality::AtLeast(n),
    };
    if matches!(count, Count::Partial(_)) {
        engine.note(EXHAUSTED);
    }
    let certificate = if matches!(count, Count::Partial(_)) { EXHAUSTED } else { tag };
    Ok(CardinalityResult {
        ordinate: y.clone(),
        cardinality,
        certificate: certificate.to_string(),
        certificates: engine.tags.iter().map(|t| t.to_string()).collect(),
        work: engine.work,
    })
}

/// Exact points of a finite level set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSetEnumeration {
    #[serde(with = "serde_rational")]
    pub ordinate: Rational,
    #[serde(with = "serde_rational::vec")]
    pub points: Vec<Rational>,
    /// All points were found (their number matches the certified cardinality).
    pub complete: bool,
    pub certificates: Vec<String>,
}

struct Enumerator {
    budget: u64,
    work: u64,
    memo: HashMap<Rational, Option<Vec<Rational>>>,
}

impl Enumerator {
    /// `L(y)`, or `None` if some point could not be pinned down.
    fn level(&mut self, y: &Rational) -> Option<Vec<Rational>> {
        if y > &rat(2, 3) {
            return Some(Vec::new());
        }
        if y.is_zero() {
            return Some(vec![rat(0, 1), rat(1, 1)]);
        }
        if let Some(hit) = self.memo.get(y) {
            return hit.clone();
        }
        let half = self.half_level(y);
        let full = half.map(|pts| {
            let set: BTreeSet<Rational> =
                pts.iter().cloned().chain(pts.iter().map(|x| rat(1, 1) - x)).collect();
            set.into_iter().collect::<Vec<_>>()
        });
        self.memo.insert(y.clone(), full.clone());
        full
    }

    fn humps(&mut self, outer: &AffineMap, k: u64, phi: &Rational) -> Option<Vec<Rational>> {
        let mut out = Vec::new();
        for (j, v) in hump_levels(phi) {
            let map = outer.compose(&AffineMap::g(k, j));
            out.extend(self.level(&v)?.iter().map(|x| map.apply(x)));
        }
        Some(out)
    }

    fn half_level(&mut self, y: &Rational) -> Option<Vec<Rational>> {
        if y > &rat(1, 2) {
            let phi = (y - rat(1, 2)) * BigInt::from(4);
            return self.humps(&AffineMap::identity(), 1, &phi);
        }
        let (budget, mut work) = (self.budget, self.work);
        let w = walk(y, false, &mut || {
            if work >= budget {
                return false;
            }
            work += 1;
            true
        });
        self.work = work;
        let Closure::Tail { index, kind } = w.closure else {
            return None;
        };
        // F_m = f_{k_0} ∘ … ∘ f_{k_{m−1}}
        let mut maps = vec![AffineMap::identity()];
        for step in &w.steps {
            let last = maps.last().expect("nonempty");
            maps.push(last.compose(&AffineMap::f(step.k)));
        }
        let mut points = Vec::new();
        for &m in &w.hits {
            points.extend(self.humps(&maps[m], w.steps[m].k, &w.steps[m].phi)?);
        }
        let tail_ordinate = w.steps.get(index).map_or(&w.last, |s| &s.y);
        let tail = match kind {
            TailKind::Drift { c } => {
                // x = Σ_m 2^{−(k_N + (c+2)m)}
                let k = w.steps[index].k as i64;
                pow2(-k) / (rat(1, 1) - pow2(-(c as i64 + 2)))
            }
            TailKind::Cycle | TailKind::NoThreeZeros => {
                let limit = (self.budget as usize).max(64);
                let e = canonical_expansion(tail_ordinate, limit).ok()?;
                expansion_to_abscissa(&e).ok()?
            }
        };
        points.push(maps[index].apply(&tail));
        Some(points)
    }
}

/// Lists `L(y)` exactly when its cardinality is certified finite.
///
/// Points are assembled by pushing certified single points through the maps
/// `f_k` and `g_{k,j}`; each returned `x` is re-checked to satisfy `T(x) = y`.
pub fn enumerate_level_set(y: &Rational, budget: u64) -> Result<LevelSetEnumeration> {
    let card = cardinality(y, budget)?;
    let expected = match card.cardinality {
        Cardinality::Exact(n) => n,
        Cardinality::Infinite => return Err(TakagiError::InfiniteLevelSet(y.to_string())),
        Cardinality::AtLeast(_) => return Err(TakagiError::BudgetExhausted { budget }),
    };
    let mut en = Enumerator { budget, work: 0, memo: HashMap::new() };
    let points = en.level(y).unwrap_or_default();
    for x in &points {
        if &takagi(x)? != y {
            return Err(TakagiError::Domain(format!("internal check failed: T({x}) != {y}")));
        }
    }
    let complete = points.len() as u64 == expected;
    Ok(LevelSetEnumeration { ordinate: y.clone(), points, complete, certificates: card.certificates })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(y: Rational) -> Cardinality {
        cardinality(&y, 10_000).unwrap().cardinality
    }

    #[test]
    fn fixtures() {
        assert_eq!(count(rat(0, 1)), Cardinality::Exact(2));
        assert_eq!(count(rat(1, 2)), Cardinality::Infinite);
        assert_eq!(count(rat(7, 12)), Cardinality::Exact(4));
        assert_eq!(count(rat(73, 192)), Cardinality::Exact(6));
        assert_eq!(count(rat(1, 3)), Cardinality::Exact(2));
        assert_eq!(count(rat(22, 49)), Cardinality::Exact(2));
        assert_eq!(count(rat(2, 3)), Cardinality::Infinite);
        assert_eq!(count(rat(777, 2048)), Cardinality::Infinite);
        assert_eq!(count(rat(3, 8)), Cardinality::Infinite);
    }

    #[test]
    fn exhausted_budget_gives_lower_bound() {
        let r = cardinality(&rat(73, 192), 1).unwrap();
        assert!(matches!(r.cardinality, Cardinality::AtLeast(n) if n >= 2));
        assert_eq!(r.certificate, "budget exhausted");
    }

    #[test]
    fn enumerations() {
        let e = enumerate_level_set(&rat(1, 3), 1000).unwrap();
        assert_eq!(e.points, [rat(1, 12), rat(11, 12)]);
        assert!(e.complete);
        let e = enumerate_level_set(&rat(7, 12), 1000).unwrap();
        assert_eq!(e.points.len(), 4);
        assert!(e.points.contains(&rat(13, 48)) && e.points.contains(&rat(23, 48)));
        assert!(e.complete);
        let e = enumerate_level_set(&rat(22, 49), 1000).unwrap();
        assert_eq!(e.points, [rat(1, 7), rat(6, 7)]);
        assert!(enumerate_level_set(&rat(1, 2), 1000).is_err());
    }
}
