//! Numerical semigroups and Weierstrass semigroups at one totally ramified
//! place.

use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, KummerCurve, Place};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OnePointError {
    #[error("curve has genus 0")]
    ZeroGenus,
    #[error("{0} is not totally ramified")]
    NotTotallyRamified(String),
    #[error("the fractional-part gap criterion applies to the finite ramified places P_1..P_r, not P_inf")]
    CriterionAtInfinity,
    #[error("need t >= 2 and n >= 2 consecutive generators, got n = {n}, t = {t}")]
    BadConsecutive { n: u64, t: u64 },
    #[error("m = {m} is not of the form r*t + 1 with r = {r}")]
    NotOneModR { m: u32, r: u32 },
    #[error("symmetry is undefined for genus 0")]
    SymmetryOfGenusZero,
    #[error("not a numerical semigroup: {0}")]
    Invalid(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// A numerical semigroup, stored by its finite gap set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    gaps: Vec<u64>,
    genus: u64,
    frobenius: i64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl NumericalSemigroup {
    /// From a finite gap set; checks that the complement is closed under addition.
    pub fn from_gaps(gaps: impl IntoIterator<Item = u64>) -> Result<NumericalSemigroup, OnePointError> {
        let mut gaps: Vec<u64> = gaps.into_iter().collect();
        gaps.sort_unstable();
        gaps.dedup();
        if gaps.first() == Some(&0) {
            return Err(OnePointError::Invalid("0 listed as a gap".into()));
        }
        let conductor = gaps.last().map_or(0, |&f| f + 1);
        let is_member = |n: u64| gaps.binary_search(&n).is_err();
        for a in 1..=conductor {
            if !is_member(a) {
                continue;
            }
            for b in a..=conductor {
                if is_member(b) && !is_member(a + b) {
                    return Err(OnePointError::Invalid(format!("{a} + {b} = {} is listed as a gap", a + b)));
                }
            }
        }
        let frobenius = gaps.last().map_or(-1, |&f| f as i64);
        let generators = minimal_generators(&gaps);
        Ok(NumericalSemigroup { generators, genus: gaps.len() as u64, gaps, frobenius })
    }

    /// The semigroup generated by `gens`, which must have gcd 1.
    pub fn from_generators(gens: &[u64]) -> Result<NumericalSemigroup, OnePointError> {
        let gens: Vec<u64> = gens.iter().copied().filter(|&g| g > 0).collect();
        let Some(&smallest) = gens.iter().min() else {
            return Err(OnePointError::Invalid("no positive generators".into()));
        };
        if gens.iter().fold(0, |acc, &g| gcd(acc, g)) != 1 {
            return Err(OnePointError::Invalid("generators have gcd > 1".into()));
        }
        // Sieve until `smallest` consecutive members appear.
        let mut member = vec![true];
        let mut run = 0u64;
        let mut n = 0usize;
        while run < smallest {
            n += 1;
            let hit = gens.iter().any(|&g| n >= g as usize && member[n - g as usize]);
            member.push(hit);
            run = if hit { run + 1 } else { 0 };
        }
        let gaps = (1..member.len()).filter(|&i| !member[i]).map(|i| i as u64);
        NumericalSemigroup::from_gaps(gaps)
    }

    pub fn contains(&self, n: u64) -> bool {
        self.gaps.binary_search(&n).is_err()
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    /// Minimal generating set.
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// Largest gap, `-1` when there are none.
    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    pub fn conductor(&self) -> u64 {
        (self.frobenius + 1) as u64
    }

    /// Members up to and including `bound`.
    pub fn members_up_to(&self, bound: u64) -> impl Iterator<Item = u64> + '_ {
        (0..=bound).filter(|&n| self.contains(n))
    }

    /// Frobenius number equals `2g - 1`.
    pub fn is_symmetric(&self) -> Result<bool, OnePointError> {
        if self.genus == 0 {
            return Err(OnePointError::SymmetryOfGenusZero);
        }
        Ok(self.frobenius == 2 * self.genus as i64 - 1)
    }
}

/// Nonzero members that are not the sum of two nonzero members. All minimal
/// generators are below `conductor + smallest member`.
fn minimal_generators(gaps: &[u64]) -> Vec<u64> {
    let is_member = |n: u64| gaps.binary_search(&n).is_err();
    let conductor = gaps.last().map_or(0, |&f| f + 1);
    let smallest = (1..).find(|&n| is_member(n)).expect("finitely many gaps");
    (1..conductor + smallest).filter(|&n| is_member(n)).filter(|&n| !(1..=n / 2).any(|a| is_member(a) && is_member(n - a))).collect()
}

fn finite_index(c: &KummerCurve, place: &Place) -> Result<usize, OnePointError> {
    match *place {
        Place::Ramified { index, .. } => {
            c.ramified(index)?;
            Ok(index)
        }
        Place::Infinity => Err(OnePointError::CriterionAtInfinity),
        Place::Ordinary { .. } => Err(OnePointError::NotTotallyRamified(place.to_string())),
    }
}

/// Fractional-part gap criterion at a finite ramified place: `s` is a gap
/// iff `r * (t*lambda mod m) > m * (1 + floor((s-1)/m))`, with `t` the
/// solution of `s + lambda*t = 0 (mod m)` in `[0, m)`.
pub fn is_gap(c: &KummerCurve, place: &Place, s: u64) -> Result<bool, OnePointError> {
    finite_index(c, place)?;
    Ok(gap_criterion(c.m() as u64, c.r() as u64, c.lambda() as u64, s))
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    (1..m).find(|x| a * x % m == 1).unwrap_or(0)
}

pub(crate) fn gap_criterion(m: u64, r: u64, lambda: u64, s: u64) -> bool {
    if s == 0 {
        return false;
    }
    let t = ((m - s % m) % m) * inverse_mod(lambda % m, m) % m;
    let frac_numer = t * lambda % m;
    // s = 0 mod m gives t = 0: never a gap
    r * frac_numer > m * (1 + (s - 1) / m)
}

/// Gap sets from the closed forms: `<m, r>` at `P_inf`, and
/// `{1 + i + mj : 0 <= i <= m-2-floor(m/r), 0 <= j <= r-2-floor(r(i+1)/m)}`
/// at a finite ramified place.
pub fn semigroup_at(c: &KummerCurve, place: &Place) -> Result<NumericalSemigroup, OnePointError> {
    if c.genus() == 0 {
        return Err(OnePointError::ZeroGenus);
    }
    match place {
        Place::Infinity => NumericalSemigroup::from_generators(&[c.m() as u64, c.r() as u64]),
        _ => {
            finite_index(c, place)?;
            let (m, r) = (c.m() as i64, c.r() as i64);
            let mut gaps = Vec::new();
            for i in 0..=(m - 2 - m / r) {
                for j in 0..=(r - 2 - r * (i + 1) / m) {
                    gaps.push((1 + i + m * j) as u64);
                }
            }
            NumericalSemigroup::from_gaps(gaps)
        }
    }
}

/// Genus of `<n, n+1, ..., n+t-1>`: `J(2(n-1) - (J-1)(t-1))/2` with
/// `J = ceil((n-1)/(t-1))`.
pub fn consecutive_genus(n: u64, t: u64) -> Result<u64, OnePointError> {
    if t < 2 || n < 2 {
        return Err(OnePointError::BadConsecutive { n, t });
    }
    let j = (n - 1).div_ceil(t - 1);
    let twice = j * (2 * (n - 1)) - j * (j - 1) * (t - 1);
    Ok(twice / 2)
}

/// `<m - floor(m/r), ..., m>`.
pub fn top_block_semigroup(m: u32, r: u32) -> Result<NumericalSemigroup, OnePointError> {
    let lo = (m - m / r) as u64;
    let gens: Vec<u64> = (lo..=m as u64).collect();
    NumericalSemigroup::from_generators(&gens)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopBlockCheck {
    pub holds: bool,
    pub top_block: NumericalSemigroup,
    pub computed: NumericalSemigroup,
}

/// For `m = rt + 1`, compares `<m - floor(m/r), ..., m>` with `H(P)`.
pub fn check_top_block(c: &KummerCurve, place: &Place) -> Result<TopBlockCheck, OnePointError> {
    let (m, r) = (c.m(), c.r());
    if m % r != 1 % r || m < r + 1 {
        return Err(OnePointError::NotOneModR { m, r });
    }
    finite_index(c, place)?;
    top_block_comparison(c, place)
}

/// The same comparison without the `m = rt + 1` precondition.
pub fn top_block_comparison(c: &KummerCurve, place: &Place) -> Result<TopBlockCheck, OnePointError> {
    let computed = semigroup_at(c, place)?;
    let top_block = top_block_semigroup(c.m(), c.r())?;
    Ok(TopBlockCheck { holds: computed == top_block, top_block, computed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rr::oracle_is_gap;
    use crate::testutil::{ex52, ex53, split_curve};
    use proptest::prelude::*;

    fn p1(c: &KummerCurve) -> Place {
        c.ramified(1).unwrap()
    }

    /// Brute-force gap enumeration of a generated semigroup.
    fn brute_gaps(gens: &[u64], limit: u64) -> Vec<u64> {
        let mut member = vec![false; limit as usize + 1];
        member[0] = true;
        for n in 1..=limit as usize {
            member[n] = gens.iter().any(|&g| n >= g as usize && member[n - g as usize]);
        }
        (1..=limit).filter(|&n| !member[n as usize]).collect()
    }

    #[test]
    fn criterion_examples() {
        let c = ex53();
        let p = p1(&c);
        assert!(is_gap(&c, &p, 1).unwrap());
        assert!(!is_gap(&c, &p, 7).unwrap());
        assert!(!is_gap(&c, &p, 0).unwrap());
        assert_eq!(is_gap(&c, &Place::Infinity, 1), Err(OnePointError::CriterionAtInfinity));
    }

    #[test]
    fn criterion_does_not_transfer_to_infinity() {
        // 4 = r is a pole order at P_inf, yet the finite-place test calls it a gap
        let c = ex53();
        assert!(gap_criterion(9, 4, 1, 4));
        assert!(!oracle_is_gap(&c, &Place::Infinity, 4).unwrap());
    }

    #[test]
    fn example_semigroups() {
        let c = ex53();
        let inf = semigroup_at(&c, &Place::Infinity).unwrap();
        assert_eq!(inf.gaps(), &[1, 2, 3, 5, 6, 7, 10, 11, 14, 15, 19, 23]);
        assert_eq!(inf.generators(), &[4, 9]);
        let at_p = semigroup_at(&c, &p1(&c)).unwrap();
        assert_eq!(at_p.gaps(), &[1, 2, 3, 4, 5, 6, 10, 11, 12, 13, 19, 20]);
        assert_eq!(at_p.generators(), &[7, 8, 9]);
        assert_eq!(at_p.genus(), 12);
        assert_eq!(at_p.frobenius(), 20);

        let c = ex52();
        let at_p = semigroup_at(&c, &p1(&c)).unwrap();
        assert_eq!(at_p.gaps(), &[1, 2, 4, 7]);
        for s in 1..=10 {
            assert_eq!(at_p.gaps().contains(&s), oracle_is_gap(&c, &p1(&c), s).unwrap());
        }
        assert_eq!(semigroup_at(&c, &Place::Infinity).unwrap().generators(), &[3, 5]);
    }

    #[test]
    fn genus_zero_rejected() {
        let c = split_curve(7, 2, 1, 1);
        assert_eq!(c.genus(), 0);
        assert_eq!(semigroup_at(&c, &Place::Infinity).unwrap_err(), OnePointError::ZeroGenus);
    }

    #[test]
    fn consecutive_genus_examples() {
        assert_eq!(consecutive_genus(7, 3).unwrap(), 12);
        assert_eq!(consecutive_genus(2, 2).unwrap(), 1);
        assert_eq!(consecutive_genus(5, 6 - 5 + 1).unwrap(), 10);
        assert_eq!(brute_gaps(&[5, 6], 100).len(), 10);
        assert!(consecutive_genus(5, 1).is_err());
    }

    #[test]
    fn consecutive_genus_matches_brute_force() {
        for n in 2..20u64 {
            for t in 2..8u64 {
                let gens: Vec<u64> = (n..n + t).collect();
                assert_eq!(consecutive_genus(n, t).unwrap(), brute_gaps(&gens, 1000).len() as u64, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn top_block_examples() {
        let c = ex53();
        let chk = check_top_block(&c, &p1(&c)).unwrap();
        assert!(chk.holds);
        assert_eq!(chk.top_block.generators(), &[7, 8, 9]);

        let c = split_curve(5, 3, 1, 2);
        let chk = check_top_block(&c, &p1(&c)).unwrap();
        assert!(chk.holds);
        assert_eq!(chk.computed.gaps(), &[1]);

        let c = split_curve(5, 8, 1, 3);
        assert_eq!(check_top_block(&c, &p1(&c)).unwrap_err(), OnePointError::NotOneModR { m: 8, r: 3 });
    }

    #[test]
    fn symmetry_examples() {
        assert!(NumericalSemigroup::from_generators(&[2, 3]).unwrap().is_symmetric().unwrap());
        assert!(!NumericalSemigroup::from_generators(&[7, 8, 9]).unwrap().is_symmetric().unwrap());
        let c = split_curve(5, 4, 1, 3);
        let h = semigroup_at(&c, &p1(&c)).unwrap();
        assert_eq!((h.genus(), h.frobenius()), (3, 5));
        assert!(h.is_symmetric().unwrap());
        let trivial = NumericalSemigroup::from_gaps([]).unwrap();
        assert_eq!(trivial.is_symmetric(), Err(OnePointError::SymmetryOfGenusZero));
        assert_eq!(trivial.frobenius(), -1);
    }

    #[test]
    fn invalid_gap_sets() {
        assert!(NumericalSemigroup::from_gaps([0, 1]).is_err());
        // 2 is a member but 4 = 2 + 2 is listed as a gap
        assert!(NumericalSemigroup::from_gaps([1, 3, 4]).is_err());
        assert!(NumericalSemigroup::from_generators(&[4, 6]).is_err());
        assert!(NumericalSemigroup::from_generators(&[]).is_err());
    }

    proptest! {
        #[test]
        fn generated_semigroups_are_closed(a in 2u64..15, b in 2u64..15, c in 2u64..30) {
            prop_assume!(gcd(gcd(a, b), c) == 1);
            let h = NumericalSemigroup::from_generators(&[a, b, c]).unwrap();
            let expect = brute_gaps(&[a, b, c], 500);
            prop_assert_eq!(h.gaps(), expect.as_slice());
            let bound = 2 * h.conductor();
            for x in h.members_up_to(bound) {
                for y in h.members_up_to(bound) {
                    prop_assert!(h.contains(x + y));
                }
            }
            let regenerated = NumericalSemigroup::from_generators(h.generators()).unwrap();
            prop_assert_eq!(regenerated, h);
        }
    }
}
