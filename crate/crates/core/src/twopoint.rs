//! Weierstrass semigroups at the pair `(P_inf, P)` for a finite totally
//! ramified place `P`: the gap graph, lub-closure membership, pure gaps and
//! pure-gap rectangles for two-point codes.
//!
//! Pairs are always ordered `(coefficient at P_inf, coefficient at P)`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, KummerCurve, Place};
use crate::onepoint::{semigroup_at, NumericalSemigroup, OnePointError};
use crate::rr::{oracle_pure_gap, Divisor, RrError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoPointError {
    #[error("curve has genus 0")]
    ZeroGenus,
    #[error("the floor criterion is implemented for lambda = 1 only (curve has lambda = {0}); use the Riemann-Roch oracle")]
    FormulaNeedsLambdaOne(u32),
    #[error("pure-gap family needs q > 3, got q = {0}")]
    FamilyNeedsLargeQ(u64),
    #[error("gap graph check failed: {0}")]
    GapGraph(String),
    #[error("formula and oracle disagree at ({a}, {b}): formula says {formula}")]
    Disagreement { a: u64, b: u64, formula: bool },
    #[error("({a}, {b}) in the rectangle is not a pure gap")]
    NotPureGap { a: u64, b: u64 },
    #[error("no pure gaps found with both coordinates in [1, {0}]")]
    NoPureGaps(u64),
    #[error("no pure-gap rectangle gives 2g-2 < deg G < n = {n}")]
    NoAdmissibleBox { n: u64 },
    #[error(transparent)]
    OnePoint(#[from] OnePointError),
    #[error(transparent)]
    Rr(#[from] RrError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Graph of the bijection `G(P_inf) -> G(P)`, sorted by first coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapGraph {
    pub pairs: Vec<(u64, u64)>,
}

fn finite_place(c: &KummerCurve, index: usize) -> Result<Place, TwoPointError> {
    Ok(c.ramified(index)?)
}

/// `{(mr - mj - ri, i + m(j-1)) : 1 <= i <= m-1-floor(m/r), 1 <= j <= r-1-floor(ri/m)}`,
/// checked to be a bijection between the two one-point gap sets.
pub fn gamma_set(c: &KummerCurve, index: usize) -> Result<GapGraph, TwoPointError> {
    if c.genus() == 0 {
        return Err(TwoPointError::ZeroGenus);
    }
    let place = finite_place(c, index)?;
    let (m, r) = (c.m() as i64, c.r() as i64);
    let mut pairs = Vec::new();
    for i in 1..=(m - 1 - m / r) {
        for j in 1..=(r - 1 - r * i / m) {
            pairs.push(((m * r - m * j - r * i) as u64, (i + m * (j - 1)) as u64));
        }
    }
    pairs.sort_unstable();
    let g = c.genus() as usize;
    if pairs.len() != g {
        return Err(TwoPointError::GapGraph(format!("{} pairs for genus {g}", pairs.len())));
    }
    let firsts: BTreeSet<u64> = pairs.iter().map(|p| p.0).collect();
    let seconds: BTreeSet<u64> = pairs.iter().map(|p| p.1).collect();
    let g_inf: BTreeSet<u64> = semigroup_at(c, &Place::Infinity)?.gaps().iter().copied().collect();
    let g_p: BTreeSet<u64> = semigroup_at(c, &place)?.gaps().iter().copied().collect();
    if firsts != g_inf {
        return Err(TwoPointError::GapGraph("first coordinates differ from G(P_inf)".into()));
    }
    if seconds != g_p {
        return Err(TwoPointError::GapGraph("second coordinates differ from G(P)".into()));
    }
    Ok(GapGraph { pairs })
}

/// `H(P_inf, P)` as the lub-closure of `Gamma`, `H(P_inf) x {0}` and `{0} x H(P)`.
#[derive(Debug, Clone)]
pub struct TwoPointSemigroup {
    pub gamma: GapGraph,
    pub at_infinity: NumericalSemigroup,
    pub at_place: NumericalSemigroup,
}

impl TwoPointSemigroup {
    pub fn new(c: &KummerCurve, index: usize) -> Result<TwoPointSemigroup, TwoPointError> {
        let gamma = gamma_set(c, index)?;
        let place = finite_place(c, index)?;
        Ok(TwoPointSemigroup { gamma, at_infinity: semigroup_at(c, &Place::Infinity)?, at_place: semigroup_at(c, &place)? })
    }

    /// Whether `(a, b) = lub(u, v)` for generators `u, v <= (a, b)`; this
    /// needs one generator with first coordinate `a` and one with second
    /// coordinate `b`.
    pub fn contains(&self, a: u64, b: u64) -> bool {
        // (0, 0) lies on both axes, so a = 0 or b = 0 is always matched.
        let first_hit = self.at_infinity.contains(a) || self.gamma.pairs.iter().any(|&(x, y)| x == a && y <= b);
        let second_hit = self.at_place.contains(b) || self.gamma.pairs.iter().any(|&(x, y)| y == b && x <= a);
        first_hit && second_hit
    }
}

/// Lub-closure membership of `(a, b)` in `H(P_inf, P_index)`.
pub fn two_point_member(c: &KummerCurve, index: usize, a: u64, b: u64) -> Result<bool, TwoPointError> {
    Ok(TwoPointSemigroup::new(c, index)?.contains(a, b))
}

/// Floor criterion for a pure gap at `(P_inf, P)` on `y^m = f(x)`, `deg f = r`:
/// for each `t` in `[0, m)` either `floor((a-rt)/m) + floor((b+t)/m) < 0` or
/// that sum equals `floor((a-1-rt)/m) + floor((b-1+t)/m)`.
pub fn floor_criterion(m: u64, r: u64, a: u64, b: u64) -> bool {
    if a == 0 || b == 0 {
        return false;
    }
    let (m, r, a, b) = (m as i64, r as i64, a as i64, b as i64);
    (0..m).all(|t| {
        let top = (a - r * t).div_euclid(m) + (b + t).div_euclid(m);
        top < 0 || top == (a - 1 - r * t).div_euclid(m) + (b - 1 + t).div_euclid(m)
    })
}

/// Pure-gap test by the floor criterion; requires `lambda = 1`.
pub fn is_pure_gap_formula(c: &KummerCurve, index: usize, a: u64, b: u64) -> Result<bool, TwoPointError> {
    finite_place(c, index)?;
    if c.lambda() != 1 {
        return Err(TwoPointError::FormulaNeedsLambdaOne(c.lambda()));
    }
    Ok(floor_criterion(c.m() as u64, c.r() as u64, a, b))
}

/// `(q^(l+1) - 2q^l - 2, 1)`, a pure gap on `y^(q^l + 1) = f(x)` with `deg f = q`.
pub fn pure_gap_family(q: u64, l: u32) -> Result<(u64, u64), TwoPointError> {
    if q <= 3 {
        return Err(TwoPointError::FamilyNeedsLargeQ(q));
    }
    let ql = q.pow(l);
    let pair = (q * ql - 2 * ql - 2, 1);
    if !floor_criterion(ql + 1, q, pair.0, pair.1) {
        return Err(TwoPointError::NotPureGap { a: pair.0, b: pair.1 });
    }
    Ok(pair)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PureGapMethod {
    /// Floor criterion, cross-checked against the oracle.
    Formula,
    /// Riemann-Roch oracle only (`lambda != 1`).
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PureGapSet {
    pub index: usize,
    pub bound: u64,
    pub method: PureGapMethod,
    pub pairs: Vec<(u64, u64)>,
}

impl PureGapSet {
    pub fn contains(&self, a: u64, b: u64) -> bool {
        self.pairs.binary_search(&(a, b)).is_ok()
    }
}

/// Default enumeration bound `4g`.
pub fn default_bound(c: &KummerCurve) -> u64 {
    4 * c.genus() as u64
}

/// All pure gaps in `[1, bound]^2`, sorted.
pub fn enumerate_pure_gaps(c: &KummerCurve, index: usize, bound: u64) -> Result<PureGapSet, TwoPointError> {
    finite_place(c, index)?;
    let formula_applies = c.lambda() == 1;
    let rows: Vec<Result<Vec<(u64, u64)>, TwoPointError>> = (1..=bound)
        .into_par_iter()
        .map(|a| {
            let mut row = Vec::new();
            for b in 1..=bound {
                let oracle = oracle_pure_gap(c, index, a, b)?;
                if formula_applies {
                    let formula = floor_criterion(c.m() as u64, c.r() as u64, a, b);
                    if formula != oracle {
                        return Err(TwoPointError::Disagreement { a, b, formula });
                    }
                }
                if oracle {
                    row.push((a, b));
                }
            }
            Ok(row)
        })
        .collect();
    let mut pairs = Vec::new();
    for row in rows {
        pairs.extend(row?);
    }
    let method = if formula_applies { PureGapMethod::Formula } else { PureGapMethod::Oracle };
    Ok(PureGapSet { index, bound, method, pairs })
}

/// Rectangle `[beta, beta+t1] x [gamma, gamma+t2]` of pure gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PureGapBox {
    pub beta: u64,
    pub gamma: u64,
    pub t1: u64,
    pub t2: u64,
}

impl PureGapBox {
    /// Checks every lattice point with the Riemann-Roch oracle.
    pub fn verified(c: &KummerCurve, index: usize, beta: u64, gamma: u64, t1: u64, t2: u64) -> Result<PureGapBox, TwoPointError> {
        for a in beta..=beta + t1 {
            for b in gamma..=gamma + t2 {
                if !oracle_pure_gap(c, index, a, b)? {
                    return Err(TwoPointError::NotPureGap { a, b });
                }
            }
        }
        Ok(PureGapBox { beta, gamma, t1, t2 })
    }

    /// `G = (2 beta + t1 - 1) P_inf + (2 gamma + t2 - 1) P`.
    pub fn divisor(&self, index: usize) -> Divisor {
        let a = 2 * self.beta as i64 + self.t1 as i64 - 1;
        let b = 2 * self.gamma as i64 + self.t2 as i64 - 1;
        Divisor::two_point(a, index, b)
    }

    fn points(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (self.beta..=self.beta + self.t1).flat_map(move |a| (self.gamma..=self.gamma + self.t2).map(move |b| (a, b)))
    }
}

/// The pure-gap rectangle with largest `t1 + t2` whose divisor is
/// `a P_inf + b P`, if any. Ties go to the smallest rectangle in `Ord`.
pub fn rectangle_for(c: &KummerCurve, index: usize, a: i64, b: i64) -> Result<Option<PureGapBox>, TwoPointError> {
    finite_place(c, index)?;
    if a < 1 || b < 1 {
        return Ok(None);
    }
    let (a, b) = (a as u64, b as u64);
    // 2 beta + t1 - 1 = a with beta >= 1, so t1 <= a - 1 and t1 = a + 1 (mod 2)
    let splits = |n: u64| -> Vec<(u64, u64)> { (0..n).filter(|t| (n + 1 - t).is_multiple_of(2)).map(|t| ((n + 1 - t) / 2, t)).collect() };
    let mut pure = std::collections::HashMap::new();
    let mut is_pure = |x: u64, y: u64| -> Result<bool, TwoPointError> {
        if let Some(&v) = pure.get(&(x, y)) {
            return Ok(v);
        }
        let v = oracle_pure_gap(c, index, x, y)?;
        pure.insert((x, y), v);
        Ok(v)
    };
    let mut cands: Vec<PureGapBox> = Vec::new();
    for &(beta, t1) in &splits(a) {
        for &(gamma, t2) in &splits(b) {
            cands.push(PureGapBox { beta, gamma, t1, t2 });
        }
    }
    cands.sort_by_key(|r| (std::cmp::Reverse(r.t1 + r.t2), *r));
    'next: for rect in cands {
        for (x, y) in rect.points() {
            if !is_pure(x, y)? {
                continue 'next;
            }
        }
        return Ok(Some(rect));
    }
    Ok(None)
}

/// A rectangle together with the two-point code it designs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxDesign {
    #[serde(flatten)]
    pub rect: PureGapBox,
    #[serde(rename = "degG")]
    pub deg_g: i64,
    /// Conventional Goppa bound `deg G - (2g - 2)`.
    pub goppa_d: i64,
    pub designed_d: i64,
    /// `n + g - 1 - deg G`, valid when `2g - 2 < deg G < n`.
    pub k: i64,
    pub divisor: String,
}

impl BoxDesign {
    pub fn new(rect: PureGapBox, index: usize, genus: u32, n: u64) -> BoxDesign {
        let g = genus as i64;
        let d = rect.divisor(index);
        let deg_g = d.degree();
        let goppa_d = deg_g - (2 * g - 2);
        BoxDesign {
            rect,
            deg_g,
            goppa_d,
            designed_d: goppa_d + rect.t1 as i64 + rect.t2 as i64 + 2,
            k: n as i64 + g - 1 - deg_g,
            divisor: d.to_string(),
        }
    }

    pub fn admissible(&self, genus: u32, n: u64) -> bool {
        self.deg_g > 2 * genus as i64 - 2 && self.deg_g < n as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoxObjective {
    /// Largest designed distance, then largest `k`.
    #[default]
    DesignedDistance,
    /// Largest improvement `t1 + t2 + 2` over the Goppa bound, then largest `k`.
    Gain,
}

fn grow(set: &PureGapSet, beta: u64, gamma: u64, t1_first: bool) -> PureGapBox {
    let row_ok = |b: u64, t1: u64| (beta..=beta + t1).all(|a| set.contains(a, b));
    let col_ok = |a: u64, t2: u64| (gamma..=gamma + t2).all(|b| set.contains(a, b));
    let (mut t1, mut t2) = (0, 0);
    if t1_first {
        while set.contains(beta + t1 + 1, gamma) {
            t1 += 1;
        }
        while row_ok(gamma + t2 + 1, t1) {
            t2 += 1;
        }
    } else {
        while set.contains(beta, gamma + t2 + 1) {
            t2 += 1;
        }
        while col_ok(beta + t1 + 1, t2) {
            t1 += 1;
        }
    }
    PureGapBox { beta, gamma, t1, t2 }
}

/// Searches greedily-maximal pure-gap rectangles for the best admissible design.
pub fn best_pure_gap_box(c: &KummerCurve, set: &PureGapSet, n: u64, objective: BoxObjective) -> Result<BoxDesign, TwoPointError> {
    if set.pairs.is_empty() {
        return Err(TwoPointError::NoPureGaps(set.bound));
    }
    let g = c.genus();
    let mut best: Option<BoxDesign> = None;
    for &(beta, gamma) in &set.pairs {
        for t1_first in [true, false] {
            let rect = grow(set, beta, gamma, t1_first);
            debug_assert!(rect.points().all(|(a, b)| set.contains(a, b)));
            let design = BoxDesign::new(rect, set.index, g, n);
            if !design.admissible(g, n) {
                continue;
            }
            let key = |d: &BoxDesign| {
                let primary = match objective {
                    BoxObjective::DesignedDistance => d.designed_d,
                    BoxObjective::Gain => d.designed_d - d.goppa_d,
                };
                (primary, d.k)
            };
            let better = match &best {
                None => true,
                Some(cur) => key(&design) > key(cur) || (key(&design) == key(cur) && design.rect < cur.rect),
            };
            if better {
                best = Some(design);
            }
        }
    }
    best.ok_or(TwoPointError::NoAdmissibleBox { n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rr::oracle_two_point;
    use crate::testutil::{ex51, ex52, ex53, split_curve};

    #[test]
    fn gamma_example_53() {
        let c = ex53();
        let g = gamma_set(&c, 1).unwrap();
        let expect = [(1, 20), (2, 13), (3, 6), (5, 19), (6, 12), (7, 5), (10, 11), (11, 4), (14, 10), (15, 3), (19, 2), (23, 1)];
        assert_eq!(g.pairs, expect);
    }

    #[test]
    fn gamma_small_cases() {
        let c = split_curve(5, 3, 1, 2);
        assert_eq!(gamma_set(&c, 1).unwrap().pairs, [(1, 1)]);
        let c = ex52();
        let g = gamma_set(&c, 1).unwrap();
        assert_eq!(g.pairs, [(1, 7), (2, 2), (4, 4), (7, 1)]);
        for &(a, b) in &g.pairs {
            assert!(oracle_two_point(&c, 1, a, b).unwrap());
        }
        assert_eq!(gamma_set(&split_curve(7, 2, 1, 1), 1).unwrap_err(), TwoPointError::ZeroGenus);
    }

    #[test]
    fn membership_examples() {
        let c = ex53();
        let h = TwoPointSemigroup::new(&c, 1).unwrap();
        assert!(h.contains(0, 0));
        assert!(h.contains(19, 10));
        assert!(!h.contains(10, 10));
        assert!(h.contains(4, 0));
        assert!(!h.contains(1, 0));
        assert!(h.contains(0, 7));
        assert!(two_point_member(&c, 1, 23, 1).unwrap());
    }

    #[test]
    fn formula_examples() {
        let c = ex53();
        assert!(is_pure_gap_formula(&c, 1, 10, 10).unwrap());
        assert!(!is_pure_gap_formula(&c, 1, 0, 0).unwrap());
        let c = ex51();
        assert!(is_pure_gap_formula(&c, 1, 13, 1).unwrap());
        let c = split_curve(11, 7, 2, 3);
        assert_eq!(is_pure_gap_formula(&c, 1, 3, 3).unwrap_err(), TwoPointError::FormulaNeedsLambdaOne(2));
    }

    #[test]
    fn floor_criterion_ignores_lambda() {
        // y^m = f^lambda and y^m = f define the same field when gcd(m, lambda) = 1
        for (m, lambda, r) in [(7, 3, 4), (9, 2, 4), (5, 4, 3), (8, 3, 3)] {
            let c = split_curve(11, m, lambda, r);
            assert!(matches!(is_pure_gap_formula(&c, 1, 1, 1), Err(TwoPointError::FormulaNeedsLambdaOne(_))));
            let bound = 4 * c.genus() as u64;
            for a in 1..=bound {
                for b in 1..=bound {
                    assert_eq!(
                        floor_criterion(m as u64, r as u64, a, b),
                        oracle_pure_gap(&c, 1, a, b).unwrap(),
                        "m={m} lambda={lambda} ({a}, {b})"
                    );
                }
            }
        }
    }

    #[test]
    fn family_examples() {
        assert_eq!(pure_gap_family(5, 1).unwrap(), (13, 1));
        assert_eq!(pure_gap_family(7, 1).unwrap(), (33, 1));
        assert_eq!(pure_gap_family(4, 1).unwrap(), (6, 1));
        assert_eq!(pure_gap_family(3, 1).unwrap_err(), TwoPointError::FamilyNeedsLargeQ(3));
        // oracle on y^5 = x(x-1)(x-2)(x-3) over F_11
        let c = split_curve(11, 5, 1, 4);
        assert!(oracle_pure_gap(&c, 1, 6, 1).unwrap());
        for l in 1..=3 {
            for q in 4..=9 {
                let (a, b) = pure_gap_family(q, l).unwrap();
                assert!(floor_criterion(q.pow(l) + 1, q, a, b));
            }
        }
    }

    #[test]
    fn enumeration_example_52_fixture() {
        let c = ex52();
        let set = enumerate_pure_gaps(&c, 1, 16).unwrap();
        assert_eq!(set.method, PureGapMethod::Formula);
        // frozen from the first verified run (formula and oracle agree)
        assert_eq!(set.pairs, [(1, 1), (1, 2), (1, 4), (2, 1), (4, 1)]);
        assert!(set.pairs.iter().all(|&(a, b)| a >= 1 && b >= 1));
    }

    #[test]
    fn enumeration_example_53_contains_10_10() {
        let c = ex53();
        let set = enumerate_pure_gaps(&c, 1, 24).unwrap();
        assert!(set.contains(10, 10));
        let g_inf = semigroup_at(&c, &Place::Infinity).unwrap();
        let g_p = semigroup_at(&c, &c.ramified(1).unwrap()).unwrap();
        for &(a, b) in &set.pairs {
            assert!(!g_inf.contains(a) && !g_p.contains(b));
        }
    }

    #[test]
    fn box_designs_from_examples() {
        let c = ex53();
        let rect = PureGapBox::verified(&c, 1, 10, 10, 0, 0).unwrap();
        let d = BoxDesign::new(rect, 1, c.genus(), 255);
        assert_eq!(d.divisor, "19P_inf + 19P_1");
        assert_eq!((d.deg_g, d.designed_d, d.k), (38, 18, 228));

        let c = ex51();
        let rect = PureGapBox::verified(&c, 1, 13, 1, 0, 0).unwrap();
        let d = BoxDesign::new(rect, 1, c.genus(), 124);
        assert_eq!(d.divisor, "25P_inf + 1P_1");
        assert_eq!((d.deg_g, d.designed_d, d.k), (26, 10, 107));

        assert_eq!(PureGapBox::verified(&c, 1, 1, 1, 30, 0).unwrap_err(), TwoPointError::NotPureGap { a: 5, b: 1 });
    }

    #[test]
    fn rectangles_for_paper_divisors() {
        let c = ex53();
        assert_eq!(rectangle_for(&c, 1, 19, 19).unwrap(), Some(PureGapBox { beta: 10, gamma: 10, t1: 0, t2: 0 }));
        let c = ex51();
        let rect = rectangle_for(&c, 1, 25, 1).unwrap().unwrap();
        assert_eq!(rect, PureGapBox { beta: 13, gamma: 1, t1: 0, t2: 0 });
        assert_eq!(rectangle_for(&ex52(), 1, 5, 0).unwrap(), None);
    }

    #[test]
    fn best_box_search() {
        let c = ex53();
        let set = enumerate_pure_gaps(&c, 1, 48).unwrap();
        let best = best_pure_gap_box(&c, &set, 255, BoxObjective::DesignedDistance).unwrap();
        assert!(best.admissible(c.genus(), 255));
        assert!(best.designed_d >= 18);
        let gain = best_pure_gap_box(&c, &set, 255, BoxObjective::Gain).unwrap();
        assert!(gain.designed_d - gain.goppa_d >= best.designed_d - best.goppa_d);
        for design in [&best, &gain] {
            let r = design.rect;
            PureGapBox::verified(&c, 1, r.beta, r.gamma, r.t1, r.t2).unwrap();
        }

        let empty = PureGapSet { index: 1, bound: 3, method: PureGapMethod::Formula, pairs: vec![] };
        assert_eq!(best_pure_gap_box(&c, &empty, 255, BoxObjective::default()).unwrap_err(), TwoPointError::NoPureGaps(3));
        // n too small for any rectangle
        assert!(matches!(best_pure_gap_box(&c, &set, 5, BoxObjective::default()), Err(TwoPointError::NoAdmissibleBox { .. })));
    }
}
