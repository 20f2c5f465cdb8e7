//! The ordinate intervals `I_k`, the maps `κ`, `Ψ`, `Φ`, and Takagi
//! expansions of ordinates, together with the construction of solutions of
//! `T(x) = y` from an expansion.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{int, pow2, pow4, rat, Rational};
use crate::error::{Result, TakagiError};
use crate::serde_rational;

/// `t_k = k / 2ᵏ`. Note `t₁ = t₂ = ½`.
pub fn t_k(k: u64) -> Rational {
    Rational::new(BigInt::from(k), BigInt::one() << k as usize)
}

fn two_thirds() -> Rational {
    rat(2, 3)
}

fn half() -> Rational {
    rat(1, 2)
}

fn check_ordinate(y: &Rational) -> Result<()> {
    if y.is_negative() || y > &two_thirds() {
        return Err(TakagiError::Domain(format!("ordinate must lie in [0, 2/3], got {y}")));
    }
    Ok(())
}

/// `I₂ = [½, ⅔]` and `I_k = [t_k, t_{k−1})` for `k ≥ 3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrdinateInterval {
    pub k: u64,
    #[serde(with = "serde_rational")]
    pub lower: Rational,
    #[serde(with = "serde_rational")]
    pub upper: Rational,
}

impl OrdinateInterval {
    pub fn new(k: u64) -> Result<Self> {
        match k {
            0 | 1 => Err(TakagiError::Domain(format!("I_k needs k >= 2, got {k}"))),
            2 => Ok(Self { k, lower: half(), upper: two_thirds() }),
            _ => Ok(Self { k, lower: t_k(k), upper: t_k(k - 1) }),
        }
    }

    pub fn contains(&self, y: &Rational) -> bool {
        if self.k == 2 {
            y >= &self.lower && y <= &self.upper
        } else {
            y >= &self.lower && y < &self.upper
        }
    }
}

/// `t_k ≤ y`, decided on integers.
fn t_at_most(k: u64, y: &Rational) -> bool {
    BigInt::from(k) * y.denom() <= y.numer() << k as usize
}

/// The `k` with `y ∈ I_k`; `None` stands for `κ(0) = ∞`.
pub fn kappa(y: &Rational) -> Result<Option<u64>> {
    check_ordinate(y)?;
    Ok(kappa_unchecked(y))
}

fn kappa_unchecked(y: &Rational) -> Option<u64> {
    if y.is_zero() {
        return None;
    }
    if y >= &half() {
        return Some(2);
    }
    // smallest k >= 3 with t_k <= y: gallop, then bisect
    let mut lo = 2u64;
    let mut hi = 3u64;
    while !t_at_most(hi, y) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if t_at_most(mid, y) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// `κ_n(y) = κ(Ψⁿ(y))`.
pub fn kappa_n(y: &Rational, n: usize) -> Result<Option<u64>> {
    let mut z = y.clone();
    for _ in 0..n {
        z = psi(&z)?;
    }
    kappa(&z)
}

/// `Ψ(y) = 4(y − t_{κ(y)})`, with `Ψ(0) = 0`.
pub fn psi(y: &Rational) -> Result<Rational> {
    check_ordinate(y)?;
    Ok(psi_unchecked(y))
}

pub(crate) fn psi_unchecked(y: &Rational) -> Rational {
    match kappa_unchecked(y) {
        None => Rational::zero(),
        Some(k) => (y - t_k(k)) * BigInt::from(4),
    }
}

/// `Φ(y) = 4ᵏ(y − t_k)` on `I_k` (`k ≥ 3`), `4(y − ½)` for `y ≥ ½`, `Φ(0) = 0`.
pub fn phi_map(y: &Rational) -> Result<Rational> {
    if y.is_negative() {
        return Err(TakagiError::Domain(format!("Φ needs y >= 0, got {y}")));
    }
    if y >= &half() {
        return Ok((y - half()) * BigInt::from(4));
    }
    Ok(match kappa_unchecked(y) {
        None => Rational::zero(),
        Some(k) => (y - t_k(k)) * pow4(k as i64),
    })
}

/// How a Takagi expansion continues past its explicit terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    /// All later terms are `∞`: the orbit reached `0`.
    Terminated,
    /// `terms[entry..]` repeats forever.
    Periodic { entry: usize },
    /// The orbit was cut off; no exact value is attached.
    Truncated,
}

/// A (canonical or alternative) Takagi expansion `[k₀, k₁, …]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TakagiExpansion {
    pub terms: Vec<u64>,
    pub tail: Tail,
}

impl TakagiExpansion {
    pub fn terminated(terms: Vec<u64>) -> Self {
        Self { terms, tail: Tail::Terminated }
    }

    pub fn periodic(prefix: Vec<u64>, cycle: Vec<u64>) -> Self {
        assert!(!cycle.is_empty(), "empty cycle");
        let entry = prefix.len();
        let mut terms = prefix;
        terms.extend(cycle);
        Self { terms, tail: Tail::Periodic { entry } }.normalize()
    }

    pub fn is_exact(&self) -> bool {
        self.tail != Tail::Truncated
    }

    /// The explicit terms before the repeating part.
    pub fn prefix(&self) -> &[u64] {
        match self.tail {
            Tail::Periodic { entry } => &self.terms[..entry],
            _ => &self.terms,
        }
    }

    pub fn cycle(&self) -> &[u64] {
        match self.tail {
            Tail::Periodic { entry } => &self.terms[entry..],
            _ => &[],
        }
    }

    /// `k_n`, with `None` for `∞` or for positions past a truncation.
    pub fn term(&self, n: usize) -> Option<u64> {
        if let Some(&k) = self.terms.get(n) {
            return Some(k);
        }
        match self.tail {
            Tail::Periodic { entry } => {
                let cycle = &self.terms[entry..];
                Some(cycle[(n - entry) % cycle.len()])
            }
            _ => None,
        }
    }

    /// The first `n` terms, unrolling a periodic tail.
    pub fn unrolled(&self, n: usize) -> Vec<u64> {
        (0..n).map_while(|i| self.term(i)).collect()
    }

    /// Number of 2's among the terms; `None` if 2 repeats forever.
    pub fn count_twos(&self) -> Option<usize> {
        if self.cycle().contains(&2) {
            return None;
        }
        Some(self.terms.iter().filter(|&&k| k == 2).count())
    }

    /// Consecutive pairs `(k_n, k_{n+1})`, including the wrap-around of a cycle.
    fn pairs(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self.terms.windows(2).map(|w| (w[0], w[1])).collect();
        if let Tail::Periodic { entry } = self.tail {
            out.push((*self.terms.last().expect("nonempty cycle"), self.terms[entry]));
        }
        out
    }

    /// `k_n ≥ 2` and `k_{n+1} ≥ k_n − 1`.
    pub fn is_relaxed_admissible(&self) -> bool {
        self.terms.iter().all(|&k| k >= 2) && self.pairs().iter().all(|&(a, b)| b + 1 >= a)
    }

    /// Relaxed admissibility plus: once a term is at least 3, all later ones are.
    pub fn is_canonically_admissible(&self) -> bool {
        self.is_relaxed_admissible() && self.pairs().iter().all(|&(a, b)| a < 3 || b >= 3)
    }

    /// Shortest cycle, entered as early as possible.
    pub fn normalize(mut self) -> Self {
        let Tail::Periodic { mut entry } = self.tail else {
            return self;
        };
        let len = self.terms.len() - entry;
        let minimal = (1..=len)
            .find(|&p| len.is_multiple_of(p) && (entry + p..self.terms.len()).all(|i| self.terms[i] == self.terms[i - p]))
            .expect("the full cycle always qualifies");
        self.terms.truncate(entry + minimal);
        while entry > 0 && self.terms[entry - 1] == self.terms[self.terms.len() - 1] {
            // the cycle rotates right by one
            self.terms.pop();
            entry -= 1;
        }
        self.tail = Tail::Periodic { entry };
        self
    }
}

impl fmt::Display for TakagiExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.prefix().iter().map(u64::to_string).collect();
        match self.tail {
            Tail::Periodic { .. } => {
                let cycle: Vec<String> = self.cycle().iter().map(u64::to_string).collect();
                parts.push(format!("({})", cycle.join(" ")));
            }
            Tail::Truncated => parts.push("?".into()),
            Tail::Terminated => {}
        }
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for TakagiExpansion {
    type Err = TakagiError;

    /// Parses the forms produced by `Display`, e.g. `[3,9]`, `[4,3,2,4,(6)]`, `[5,6,?]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || TakagiError::Parse(format!("not a Takagi expansion: {s:?}"));
        let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let inner = inner.trim();
        let (head, tail_part) = match inner.find('(') {
            Some(i) => (&inner[..i], Some(&inner[i..])),
            None => (inner, None),
        };
        let mut terms = Vec::new();
        let mut truncated = false;
        for tok in head.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if truncated {
                return Err(bad());
            }
            if tok == "?" {
                truncated = true;
            } else {
                terms.push(tok.parse::<u64>().map_err(|_| bad())?);
            }
        }
        if let Some(cyc) = tail_part {
            if truncated {
                return Err(bad());
            }
            let body = cyc.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let cycle = body
                .split([' ', ','])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            if cycle.is_empty() {
                return Err(bad());
            }
            return Ok(Self::periodic(terms, cycle));
        }
        let tail = if truncated { Tail::Truncated } else { Tail::Terminated };
        Ok(Self { terms, tail })
    }
}

impl Serialize for TakagiExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The canonical itinerary: pairs `(k_n, Ψⁿ(y))` plus the tail kind.
pub(crate) fn itinerary(y: &Rational, max_terms: usize) -> (Vec<(u64, Rational)>, Tail) {
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut steps = Vec::new();
    let mut z = y.clone();
    loop {
        if z.is_zero() {
            return (steps, Tail::Terminated);
        }
        if let Some(&i) = seen.get(&z) {
            return (steps, Tail::Periodic { entry: i });
        }
        if steps.len() >= max_terms {
            return (steps, Tail::Truncated);
        }
        let k = kappa_unchecked(&z).expect("nonzero ordinate");
        let next = (&z - t_k(k)) * BigInt::from(4);
        seen.insert(z.clone(), steps.len());
        steps.push((k, z));
        z = next;
    }
}

/// `k_n = κ(Ψⁿ(y))` until the orbit hits 0, revisits a value, or `max_terms`
/// terms have been produced.
pub fn canonical_expansion(y: &Rational, max_terms: usize) -> Result<TakagiExpansion> {
    check_ordinate(y)?;
    if max_terms == 0 {
        return Err(TakagiError::Domain("max_terms must be at least 1".into()));
    }
    let (steps, tail) = itinerary(y, max_terms);
    Ok(TakagiExpansion { terms: steps.into_iter().map(|(k, _)| k).collect(), tail })
}

fn exact_checked(e: &TakagiExpansion) -> Result<()> {
    if !e.is_exact() {
        return Err(TakagiError::Truncated(e.to_string()));
    }
    if !e.is_relaxed_admissible() {
        return Err(TakagiError::Inadmissible(e.to_string()));
    }
    Ok(())
}

/// `Σ_n f(k_n, n)` over an exact expansion, with the periodic part summed as a
/// geometric series in `4^{−L}` for cycle length `L`.
fn series<F: Fn(u64, usize) -> Rational>(e: &TakagiExpansion, f: F) -> Rational {
    let prefix: Rational = e.prefix().iter().enumerate().map(|(n, &k)| f(k, n)).sum();
    let Tail::Periodic { entry } = e.tail else {
        return prefix;
    };
    let cycle: Rational = e.cycle().iter().enumerate().map(|(i, &k)| f(k, entry + i)).sum();
    let len = e.cycle().len() as i64;
    prefix + cycle / (int(1) - pow4(-len))
}

/// `y = Σ k_n / 2^{k_n + 2n}`.
pub fn expansion_to_ordinate(e: &TakagiExpansion) -> Result<Rational> {
    exact_checked(e)?;
    Ok(series(e, |k, n| int(k as i64) * pow2(-((k + 2 * n as u64) as i64))))
}

/// `x = Σ 2^{−(k_n + 2n)}`, a solution of `T(x) = y` for the ordinate `y`
/// of `e`; it is the leftmost point of its local level set.
pub fn expansion_to_abscissa(e: &TakagiExpansion) -> Result<Rational> {
    exact_checked(e)?;
    Ok(series(e, |k, n| pow2(-((k + 2 * n as u64) as i64))))
}

/// One expansion of an ordinate with its solution (absent when truncated).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionSolution {
    pub expansion: TakagiExpansion,
    #[serde(with = "serde_rational::option")]
    pub abscissa: Option<Rational>,
    /// Number of rewrites applied to the canonical expansion.
    pub rewrites: usize,
}

#[derive(Clone)]
struct Node {
    steps: Vec<(u64, Rational)>,
    tail: Tail,
}

impl Node {
    fn expansion(&self) -> TakagiExpansion {
        TakagiExpansion { terms: self.steps.iter().map(|(k, _)| *k).collect(), tail: self.tail }
            .normalize()
    }

    /// Repeats a cycle until `max_terms` positions are explicit.
    fn unroll(&mut self, max_terms: usize) {
        if let Tail::Periodic { entry } = self.tail {
            let cycle: Vec<(u64, Rational)> = self.steps[entry..].to_vec();
            while self.steps.len() + cycle.len() <= max_terms {
                self.steps.extend(cycle.iter().cloned());
            }
            self.tail = Tail::Periodic { entry: self.steps.len() - cycle.len() };
        }
    }

    /// Applies the rewrite `k ↦ k+1, k, …, 2` at position `n`, if allowed.
    fn rewrite(&self, n: usize, max_terms: usize) -> Option<Node> {
        let (k, y) = &self.steps[n];
        let v = (y - t_k(*k)) * pow4(*k as i64);
        if v.is_negative() || v > two_thirds() {
            return None;
        }
        let (rest, tail) = itinerary(&v, max_terms);
        let mut spliced = Vec::with_capacity(*k as usize);
        let mut z = v.clone();
        for e in 2..=*k + 1 {
            z = t_k(e) + z / BigInt::from(4);
            spliced.push((e, z.clone()));
        }
        spliced.reverse();
        let mut steps = self.steps[..n].to_vec();
        steps.extend(spliced);
        let offset = steps.len();
        steps.extend(rest);
        let tail = match tail {
            Tail::Periodic { entry } => Tail::Periodic { entry: entry + offset },
            t => t,
        };
        Some(Node { steps, tail })
    }
}

const ALTERNATIVE_CAP: usize = 100_000;

/// The canonical expansion of `y` followed by every distinct expansion reachable
/// with at most `depth` rewrites `[…, k_n, …] → […, k_n+1, k_n, …, 2, …]`,
/// applicable where `4^{k_n}(y_n − t_{k_n}) ≤ ⅔`. Results are ordered by number
/// of rewrites, then by rewrite position, then lexicographically.
pub fn alternative_expansions(
    y: &Rational,
    depth: usize,
    max_terms: usize,
) -> Result<Vec<ExpansionSolution>> {
    check_ordinate(y)?;
    if max_terms == 0 {
        return Err(TakagiError::Domain("max_terms must be at least 1".into()));
    }
    let (steps, tail) = itinerary(y, max_terms);
    let root = Node { steps, tail };
    let mut seen: HashSet<TakagiExpansion> = HashSet::new();
    let mut out = Vec::new();
    let push = |node: &Node, rewrites: usize, out: &mut Vec<ExpansionSolution>| -> Result<()> {
        let expansion = node.expansion();
        let abscissa = if expansion.is_exact() { Some(expansion_to_abscissa(&expansion)?) } else { None };
        out.push(ExpansionSolution { expansion, abscissa, rewrites });
        Ok(())
    };
    seen.insert(root.expansion());
    push(&root, 0, &mut out)?;
    let mut level = vec![root];
    for r in 1..=depth {
        let mut children: Vec<(usize, Vec<u64>, TakagiExpansion, Node)> = Vec::new();
        for node in &level {
            let mut node = node.clone();
            node.unroll(max_terms);
            for n in 0..node.steps.len().min(max_terms) {
                if let Some(child) = node.rewrite(n, max_terms) {
                    let e = child.expansion();
                    children.push((n, e.terms.clone(), e, child));
                }
            }
        }
        children.sort_by(|a, b| (a.0, &a.1, a.2.tail).cmp(&(b.0, &b.1, b.2.tail)));
        let mut next = Vec::new();
        for (_, _, e, child) in children {
            if seen.insert(e) {
                push(&child, r, &mut out)?;
                next.push(child);
                if out.len() > ALTERNATIVE_CAP {
                    return Err(TakagiError::CapExceeded(format!(
                        "more than {ALTERNATIVE_CAP} expansions"
                    )));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Ok(out)
}

/// The fixed point `y_k* = k / (3·2^{k−2})` of `Ψ_k`, `k ≥ 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    pub k: u64,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

pub fn fixed_point(k: u64) -> Result<FixedPoint> {
    if k < 4 {
        return Err(TakagiError::Domain(format!("Ψ_k has a fixed point below 1/2 only for k >= 4, got {k}")));
    }
    let value = Rational::new(BigInt::from(k), BigInt::from(3) << (k - 2) as usize);
    Ok(FixedPoint { k, value })
}

/// Distinct abscissae of a list of solutions, sorted.
pub fn distinct_abscissae(solutions: &[ExpansionSolution]) -> Vec<Rational> {
    let set: BTreeSet<Rational> = solutions.iter().filter_map(|s| s.abscissa.clone()).collect();
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::takagi;

    fn parse(s: &str) -> TakagiExpansion {
        s.parse().unwrap()
    }

    #[test]
    fn intervals_partition() {
        assert_eq!(t_k(1), t_k(2));
        for k in 3..40 {
            assert!(t_k(k) < t_k(k - 1));
            let i = OrdinateInterval::new(k).unwrap();
            assert!(i.contains(&t_k(k)) && !i.contains(&t_k(k - 1)));
            assert_eq!(kappa(&t_k(k)).unwrap(), Some(k));
        }
        assert!(OrdinateInterval::new(2).unwrap().contains(&rat(2, 3)));
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(&rat(19, 32)).unwrap(), Some(2));
        assert_eq!(kappa(&rat(3, 8)).unwrap(), Some(3));
        assert_eq!(kappa(&rat(1, 5)).unwrap(), Some(5));
        assert_eq!(kappa(&int(0)).unwrap(), None);
        assert_eq!(kappa(&rat(1, 2)).unwrap(), Some(2));
        assert!(kappa(&rat(3, 4)).is_err());
        assert_eq!(kappa(&pow2(-1000)).unwrap(), Some(1010));
    }

    #[test]
    fn maps() {
        assert_eq!(psi(&rat(19, 32)).unwrap(), rat(3, 8));
        assert_eq!(psi(&rat(3, 8)).unwrap(), int(0));
        assert_eq!(psi(&rat(1, 3)).unwrap(), rat(1, 3));
        assert_eq!(phi_map(&rat(7, 12)).unwrap(), rat(1, 3));
        assert_eq!(phi_map(&rat(3, 8)).unwrap(), int(0));
        assert_eq!(phi_map(&rat(22, 49)).unwrap(), (rat(22, 49) - rat(3, 8)) * int(64));
        assert_eq!(phi_map(&rat(1, 3)).unwrap(), rat(64, 3));
        assert_eq!(phi_map(&rat(1, 3)).unwrap(), psi(&rat(1, 3)).unwrap() * int(64));
    }

    #[test]
    fn canonical_fixtures() {
        let cases = [
            ("1/2", "[2]"),
            ("19/32", "[2,3]"),
            ("2/3", "[(2)]"),
            ("3/7", "[3,(5 5 4)]"),
            ("1/3", "[(4)]"),
            ("3/8", "[3]"),
            ("0", "[]"),
            ("9/32", "[4,(6)]"),
            ("777/2048", "[3,9]"),
        ];
        for (y, e) in cases {
            let got = canonical_expansion(&y.parse().unwrap(), 64).unwrap();
            assert_eq!(got.to_string(), e, "expansion of {y}");
            assert_eq!(parse(e), got);
        }
        let e = canonical_expansion(&rat(22, 49), 30).unwrap();
        assert_eq!(e.tail, Tail::Truncated);
        assert_eq!(e.terms, (3..33).collect::<Vec<u64>>());
        assert!(e.to_string().ends_with(",?]"));
    }

    #[test]
    fn ordinates_and_abscissae() {
        assert_eq!(expansion_to_ordinate(&parse("[2,3]")).unwrap(), rat(19, 32));
        assert_eq!(expansion_to_ordinate(&parse("[7]")).unwrap(), t_k(7));
        assert_eq!(expansion_to_ordinate(&parse("[(4)]")).unwrap(), rat(1, 3));
        assert_eq!(expansion_to_abscissa(&parse("[(4)]")).unwrap(), rat(1, 12));
        assert_eq!(expansion_to_abscissa(&parse("[2]")).unwrap(), rat(1, 4));
        assert_eq!(expansion_to_abscissa(&parse("[3,9]")).unwrap(), rat(257, 2048));
        let alt = parse("[4,3,2,4,(6)]");
        assert_eq!(expansion_to_ordinate(&alt).unwrap(), rat(777, 2048));
        assert_eq!(expansion_to_abscissa(&alt).unwrap(), rat(1357, 12288));
        assert!(expansion_to_ordinate(&parse("[3,4,?]")).is_err());
        assert!(expansion_to_ordinate(&parse("[5,2]")).is_err());
    }

    #[test]
    fn normalization() {
        let e = TakagiExpansion { terms: vec![3, 5, 5, 4, 5, 5, 4], tail: Tail::Periodic { entry: 1 } };
        assert_eq!(e.normalize().to_string(), "[3,(5 5 4)]");
        let e = TakagiExpansion { terms: vec![4, 6, 6], tail: Tail::Periodic { entry: 1 } };
        assert_eq!(e.normalize().to_string(), "[4,(6)]");
        let e = TakagiExpansion { terms: vec![4, 5, 4], tail: Tail::Periodic { entry: 1 } };
        assert_eq!(e.normalize().to_string(), "[(4 5)]");
    }

    #[test]
    fn admissibility() {
        assert!(parse("[3,(5 5 4)]").is_canonically_admissible());
        assert!(parse("[4,3,2]").is_relaxed_admissible());
        assert!(!parse("[4,3,2]").is_canonically_admissible());
        assert!(!parse("[5,3]").is_relaxed_admissible());
        assert!(!parse("[(6 4)]").is_relaxed_admissible());
        assert_eq!(parse("[2,3,2]").count_twos(), Some(2));
        assert_eq!(parse("[3,(2)]").count_twos(), None);
    }

    #[test]
    fn alternatives_of_three_eighths() {
        let sols = alternative_expansions(&rat(3, 8), 2, 64).unwrap();
        let got: Vec<String> = sols.iter().map(|s| s.expansion.to_string()).collect();
        assert_eq!(got, ["[3]", "[4,3,2]", "[4,3,3,2]"]);
        let xs: Vec<Rational> = sols.iter().map(|s| s.abscissa.clone().unwrap()).collect();
        assert_eq!(xs, [rat(1, 8), rat(7, 64), rat(27, 256)]);
    }

    #[test]
    fn alternatives_of_five_thirty_seconds() {
        let sols = alternative_expansions(&rat(5, 32), 1, 64).unwrap();
        let got: Vec<String> = sols.iter().map(|s| s.expansion.to_string()).collect();
        assert!(got.contains(&"[5]".to_string()));
        assert!(got.contains(&"[6,5,4,3,2]".to_string()));
    }

    #[test]
    fn alternative_abscissae_solve() {
        for y in [rat(777, 2048), rat(3, 8), rat(19, 32), rat(1, 2), rat(7, 12)] {
            for s in alternative_expansions(&y, 2, 40).unwrap() {
                assert!(s.expansion.is_relaxed_admissible());
                if let Some(x) = s.abscissa {
                    assert_eq!(takagi(&x).unwrap(), y, "{} for {y}", s.expansion);
                }
            }
        }
    }

    #[test]
    fn fixed_points() {
        assert_eq!(fixed_point(6).unwrap().value, rat(1, 8));
        assert_eq!(fixed_point(9).unwrap().value, rat(3, 128));
        assert_eq!(fixed_point(12).unwrap().value, rat(1, 256));
        for k in 4..30 {
            let f = fixed_point(k).unwrap();
            assert_eq!(kappa(&f.value).unwrap(), Some(k));
            assert_eq!(psi(&f.value).unwrap(), f.value);
        }
        assert!(fixed_point(3).is_err());
    }
}
