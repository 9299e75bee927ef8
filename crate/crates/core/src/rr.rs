//! Divisors on the distinguished places `P_1, ..., P_r, P_inf`, their
//! restriction to `K(x)`, Riemann-Roch dimensions and explicit bases.
//!
//! Every divisor here is supported on totally ramified places, so it is
//! invariant under the Kummer automorphisms and `L(D)` splits into the
//! `y^t`-strata `L([D + (y^t)]|K(x)) y^t`, `0 <= t < m`. Each stratum is a
//! Riemann-Roch space on the projective line, of dimension `max(0, deg + 1)`.
//! Nothing below needs linear algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, KummerCurve, Place};
use crate::gf::FieldElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RrError {
    #[error("{0} is not a totally ramified place")]
    NotDistinguished(String),
    #[error("divisor needs the irrational factor (x - alpha_{index}) on its own; coefficients at places outside F_q must coincide")]
    IrrationalDenominator { index: usize },
    #[error("cannot evaluate at P_{0}: its center is not in F_q")]
    IrrationalPlace(usize),
    #[error("function has a pole at {0}")]
    Pole(String),
    #[error("the gap test needs s >= 1")]
    ZeroOrder,
    #[error("bad divisor `{0}`: expected terms like `19P_inf` or `2P_1` joined by `+`")]
    Parse(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Integer combination of `P_inf` and `P_1..P_r`; zero entries are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Divisor {
    inf: i64,
    coeffs: BTreeMap<usize, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn at_infinity(n: i64) -> Divisor {
        Divisor { inf: n, coeffs: BTreeMap::new() }
    }

    /// `n P_index`.
    pub fn at(index: usize, n: i64) -> Divisor {
        Divisor::zero().with(index, n)
    }

    pub fn from_parts(inf: i64, coeffs: impl IntoIterator<Item = (usize, i64)>) -> Divisor {
        coeffs.into_iter().fold(Divisor::at_infinity(inf), |d, (i, n)| d.with(i, n))
    }

    /// For `(a, b)` at `(P_inf, P_index)`.
    pub fn two_point(a: i64, index: usize, b: i64) -> Divisor {
        Divisor::at(index, b).with_inf(a)
    }

    /// Replaces the coefficient of `P_inf`.
    pub fn with_inf(mut self, n: i64) -> Divisor {
        self.inf = n;
        self
    }

    /// Replaces the coefficient of `P_index`.
    pub fn with(mut self, index: usize, n: i64) -> Divisor {
        if n == 0 {
            self.coeffs.remove(&index);
        } else {
            self.coeffs.insert(index, n);
        }
        self
    }

    pub fn inf(&self) -> i64 {
        self.inf
    }

    pub fn coeff(&self, index: usize) -> i64 {
        self.coeffs.get(&index).copied().unwrap_or(0)
    }

    /// `(index, coefficient)` pairs with nonzero coefficient.
    pub fn finite_terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&i, &n)| (i, n))
    }

    pub fn support_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.inf == 0 && self.coeffs.is_empty()
    }

    /// All places have degree one.
    pub fn degree(&self) -> i64 {
        self.inf + self.coeffs.values().sum::<i64>()
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        other.finite_terms().fold(self.clone().with_inf(self.inf + other.inf), |d, (i, n)| {
            let c = d.coeff(i) + n;
            d.with(i, c)
        })
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_parts(self.inf * k, self.finite_terms().map(|(i, n)| (i, n * k)))
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.scale(-1))
    }

    /// The negated negative part, i.e. the pole divisor of a principal divisor.
    pub fn pole_part(&self) -> Divisor {
        Divisor::from_parts((-self.inf).max(0), self.finite_terms().map(|(i, n)| (i, (-n).max(0))))
    }

    /// Coefficient at a distinguished place.
    pub fn coeff_at(&self, place: &Place) -> Option<i64> {
        match place {
            Place::Infinity => Some(self.inf),
            Place::Ramified { index, .. } => Some(self.coeff(*index)),
            Place::Ordinary { .. } => None,
        }
    }

    pub fn contains(&self, place: &Place) -> bool {
        self.coeff_at(place).is_some_and(|n| n != 0)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.inf != 0 {
            terms.push(format!("{}P_inf", self.inf));
        }
        terms.extend(self.finite_terms().map(|(i, n)| format!("{n}P_{i}")));
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `<int>P_inf` and `<int>P_<i>` joined by `+`, whitespace-insensitive.
/// Repeated places accumulate; `0` is the zero divisor.
impl FromStr for Divisor {
    type Err = RrError;

    fn from_str(s: &str) -> Result<Divisor, RrError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || RrError::Parse(s.to_string());
        if compact == "0" {
            return Ok(Divisor::zero());
        }
        if compact.is_empty() {
            return Err(bad());
        }
        let mut d = Divisor::zero();
        for term in compact.split('+') {
            let (n, place) = term.split_once('P').ok_or_else(bad)?;
            let n: i64 = n.parse().map_err(|_| bad())?;
            let place = place.strip_prefix('_').ok_or_else(bad)?;
            if place == "inf" {
                d.inf += n;
            } else {
                let i: usize = place.parse().map_err(|_| bad())?;
                if i == 0 {
                    return Err(bad());
                }
                let c = d.coeff(i) + n;
                d = d.with(i, c);
            }
        }
        Ok(d)
    }
}

/// A divisor on the rational function field `K(x)`, supported on `Q_inf`
/// and the places `Q_i` below `P_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RestrictedDivisor {
    pub inf: i64,
    pub coeffs: BTreeMap<usize, i64>,
}

impl RestrictedDivisor {
    pub fn degree(&self) -> i64 {
        self.inf + self.coeffs.values().sum::<i64>()
    }
}

/// `D|K(x)`: every distinguished place has ramification index `m`.
pub fn restrict(c: &KummerCurve, d: &Divisor) -> RestrictedDivisor {
    let m = c.m() as i64;
    RestrictedDivisor {
        inf: d.inf().div_euclid(m),
        coeffs: d.finite_terms().map(|(i, n)| (i, n.div_euclid(m))).filter(|&(_, n)| n != 0).collect(),
    }
}

/// `D + t (y)` where `(y) = lambda * sum P_i - r * lambda * P_inf`.
pub fn shift_by_y_power(c: &KummerCurve, d: &Divisor, t: u32) -> Divisor {
    let tl = t as i64 * c.lambda() as i64;
    let y_part = Divisor::from_parts(-(c.r() as i64) * tl, (1..=c.r() as usize).map(|i| (i, tl)));
    d.add(&y_part)
}

/// The `t`-th stratum `[D + (y^t)]|K(x)`.
pub fn stratum(c: &KummerCurve, d: &Divisor, t: u32) -> RestrictedDivisor {
    restrict(c, &shift_by_y_power(c, d, t))
}

/// Degree of the `t`-th stratum, computed without materializing it.
fn stratum_degree(c: &KummerCurve, d: &Divisor, t: u32) -> i64 {
    let (m, r, lam) = (c.m() as i64, c.r() as i64, c.lambda() as i64);
    let tl = t as i64 * lam;
    let mut deg = (d.inf() - r * tl).div_euclid(m);
    let mut listed = 0i64;
    for (_, n) in d.finite_terms() {
        deg += (n + tl).div_euclid(m);
        listed += 1;
    }
    deg + (r - listed) * tl.div_euclid(m)
}

/// `l(D)` as the sum of genus-zero stratum dimensions.
pub fn rr_dim(c: &KummerCurve, d: &Divisor) -> u64 {
    (0..c.m()).map(|t| (1 + stratum_degree(c, d, t)).max(0) as u64).sum()
}

/// `x^j * prod_i (x - alpha_i)^(-c_i) * g(x)^(-c_g) * y^t`, where `g` is the
/// product of the factors of `f` with roots outside `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisFunction {
    pub t: u32,
    pub j: u32,
    /// Exponents `c_i` at rational ramified places, nonzero only.
    pub denom: BTreeMap<usize, i64>,
    /// Shared exponent of the irrational cofactor `g`.
    pub irrational_exp: i64,
}

impl fmt::Display for BasisFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.j {
            0 => {}
            1 => parts.push("x".to_string()),
            j => parts.push(format!("x^{j}")),
        }
        for (&i, &c) in &self.denom {
            if c == -1 {
                parts.push(format!("(x-a{i})"));
            } else {
                parts.push(format!("(x-a{i})^{}", -c));
            }
        }
        if self.irrational_exp != 0 {
            parts.push(format!("g^{}", -self.irrational_exp));
        }
        match self.t {
            0 => {}
            1 => parts.push("y".to_string()),
            t => parts.push(format!("y^{t}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

impl BasisFunction {
    /// Valuation at a distinguished place, from the divisors of `x - alpha_i`,
    /// `y` and the cofactor `g`.
    pub fn valuation(&self, c: &KummerCurve, place: &Place) -> Result<i64, RrError> {
        let (m, r, lam) = (c.m() as i64, c.r() as i64, c.lambda() as i64);
        let (t, j) = (self.t as i64, self.j as i64);
        let irrational = (r as usize - c.rational_ramified()) as i64;
        match *place {
            Place::Infinity => {
                let denom: i64 = self.denom.values().sum::<i64>() + irrational * self.irrational_exp;
                Ok(-m * j + m * denom - t * r * lam)
            }
            Place::Ramified { index, .. } => match c.alpha(index) {
                Some(alpha) => {
                    let x_zero = if alpha.is_zero() { m * j } else { 0 };
                    Ok(-m * self.denom.get(&index).copied().unwrap_or(0) + t * lam + x_zero)
                }
                None => Ok(-m * self.irrational_exp + t * lam),
            },
            Place::Ordinary { .. } => Err(RrError::NotDistinguished(place.to_string())),
        }
    }

    /// Value at a rational place where the function is regular.
    pub fn eval(&self, c: &KummerCurve, place: &Place) -> Result<FieldElement, RrError> {
        let fq = c.field();
        let denom_value = |x: FieldElement, skip: Option<usize>| -> Result<FieldElement, RrError> {
            let mut v = fq.one();
            for (&i, &ci) in &self.denom {
                if Some(i) == skip {
                    continue;
                }
                let alpha = c.alpha(i).expect("rational index");
                v = fq.mul(v, fq.pow_signed(fq.sub(x, alpha), -ci).map_err(|_| RrError::Pole(place.to_string()))?);
            }
            let g = c.f_irrational().eval(x);
            v = fq.mul(v, fq.pow_signed(g, -self.irrational_exp).map_err(|_| RrError::Pole(place.to_string()))?);
            Ok(v)
        };
        match *place {
            Place::Ordinary { a, b } => {
                let v = denom_value(a, None)?;
                Ok(fq.mul(fq.mul(fq.pow(a, self.j as u64), v), fq.pow(b, self.t as u64)))
            }
            Place::Ramified { index, .. } => {
                let alpha = c.alpha(index).ok_or(RrError::IrrationalPlace(index))?;
                let v = self.valuation(c, place)?;
                if v < 0 {
                    return Err(RrError::Pole(place.to_string()));
                }
                if v > 0 {
                    return Ok(fq.zero());
                }
                // v = 0 forces t = 0; if alpha = 0 the x^j factor cancels
                // against (x - alpha)^(-c_index) exactly.
                debug_assert_eq!(self.t, 0);
                let xj = if alpha.is_zero() { fq.one() } else { fq.pow(alpha, self.j as u64) };
                Ok(fq.mul(xj, denom_value(alpha, Some(index))?))
            }
            Place::Infinity => {
                let v = self.valuation(c, place)?;
                if v < 0 {
                    return Err(RrError::Pole(place.to_string()));
                }
                if v > 0 {
                    return Ok(fq.zero());
                }
                // Ratio of leading coefficients; only g can be non-monic.
                let lead = c.f_irrational().leading().expect("nonzero");
                fq.pow_signed(lead, -self.irrational_exp).map_err(|_| RrError::Pole(place.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RrBasis {
    pub divisor: Divisor,
    pub functions: Vec<BasisFunction>,
}

impl RrBasis {
    pub fn dim(&self) -> usize {
        self.functions.len()
    }
}

/// Explicit basis of `L(D)`, stratum by stratum.
pub fn rr_basis(c: &KummerCurve, d: &Divisor) -> Result<RrBasis, RrError> {
    c.check_divisor(d)?;
    let n_rat = c.rational_ramified();
    let r = c.r() as usize;
    let irr_coeff = (n_rat < r).then(|| d.coeff(n_rat + 1));
    if let Some(base) = irr_coeff {
        if let Some(index) = (n_rat + 1..=r).find(|&i| d.coeff(i) != base) {
            return Err(RrError::IrrationalDenominator { index });
        }
    }
    let (m, lam) = (c.m() as i64, c.lambda() as i64);
    let mut functions = Vec::new();
    for t in 0..c.m() {
        let tl = t as i64 * lam;
        let s = stratum(c, d, t);
        let degree = stratum_degree(c, d, t);
        if degree < 0 {
            continue;
        }
        let denom: BTreeMap<usize, i64> = (1..=n_rat).map(|i| (i, (d.coeff(i) + tl).div_euclid(m))).filter(|&(_, ci)| ci != 0).collect();
        let irrational_exp = irr_coeff.map_or(0, |base| (base + tl).div_euclid(m));
        debug_assert_eq!(s.inf + denom.values().sum::<i64>() + (r - n_rat) as i64 * irrational_exp, degree);
        functions.extend((0..=degree as u32).map(|j| BasisFunction { t, j, denom: denom.clone(), irrational_exp }));
    }
    Ok(RrBasis { divisor: d.clone(), functions })
}

/// `s P` for a distinguished place `P`.
pub fn point_divisor(place: &Place, s: i64) -> Result<Divisor, RrError> {
    match *place {
        Place::Infinity => Ok(Divisor::at_infinity(s)),
        Place::Ramified { index, .. } => Ok(Divisor::at(index, s)),
        Place::Ordinary { .. } => Err(RrError::NotDistinguished(place.to_string())),
    }
}

/// Weierstrass gap test `l((s-1)P) = l(sP)`.
pub fn oracle_is_gap(c: &KummerCurve, place: &Place, s: u64) -> Result<bool, RrError> {
    if s == 0 {
        return Err(RrError::ZeroOrder);
    }
    let s = s as i64;
    Ok(rr_dim(c, &point_divisor(place, s)?) == rr_dim(c, &point_divisor(place, s - 1)?))
}

/// `(a, b)` in `H(P_inf, P_index)`: both one-step reductions drop `l`.
pub fn oracle_two_point(c: &KummerCurve, index: usize, a: u64, b: u64) -> Result<bool, RrError> {
    c.ramified(index)?;
    let (a, b) = (a as i64, b as i64);
    let top = rr_dim(c, &Divisor::two_point(a, index, b));
    Ok(top > rr_dim(c, &Divisor::two_point(a - 1, index, b)) && top > rr_dim(c, &Divisor::two_point(a, index, b - 1)))
}

/// Pure gap at `(P_inf, P_index)`: `l(aP_inf + bP) = l((a-1)P_inf + (b-1)P)`.
pub fn oracle_pure_gap(c: &KummerCurve, index: usize, a: u64, b: u64) -> Result<bool, RrError> {
    c.ramified(index)?;
    if a == 0 || b == 0 {
        return Ok(false);
    }
    let (a, b) = (a as i64, b as i64);
    Ok(rr_dim(c, &Divisor::two_point(a, index, b)) == rr_dim(c, &Divisor::two_point(a - 1, index, b - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{curve, ex51, ex52, ex53, split_curve};
    use proptest::prelude::*;

    #[test]
    fn divisor_parse_and_display() {
        let d: Divisor = "19P_inf + 19 P_1".parse().unwrap();
        assert_eq!(d, Divisor::two_point(19, 1, 19));
        assert_eq!(d.to_string(), "19P_inf + 19P_1");
        assert_eq!(d.degree(), 38);
        let d: Divisor = "5P_inf".parse().unwrap();
        assert_eq!(d, Divisor::at_infinity(5));
        let d: Divisor = " 2P_3+1P_3 + -1P_inf".parse().unwrap();
        assert_eq!((d.inf(), d.coeff(3)), (-1, 3));
        assert_eq!("0".parse::<Divisor>().unwrap(), Divisor::zero());
        assert_eq!(Divisor::zero().to_string(), "0");
        for bad in ["", "P_inf", "5P_", "5Q_1", "5P_0", "5P_inf +", "x"] {
            assert!(bad.parse::<Divisor>().is_err(), "{bad}");
        }
    }

    #[test]
    fn restriction_floors() {
        let c = ex53();
        let d = Divisor::from_parts(19, [(1, 21), (2, 2), (3, 2), (4, 2)]);
        let res = restrict(&c, &d);
        assert_eq!(res.inf, 2);
        assert_eq!(res.coeffs, BTreeMap::from([(1, 2)]));
        assert_eq!(restrict(&c, &Divisor::zero()), RestrictedDivisor::default());
        assert_eq!(restrict(&c, &Divisor::at_infinity(-1)).inf, -1);
    }

    #[test]
    fn dimensions_from_examples() {
        let c = ex52();
        assert_eq!(rr_dim(&c, &Divisor::at_infinity(5)), 3);
        assert_eq!(rr_dim(&c, &Divisor::at_infinity(6)), 4);
        assert_eq!(rr_dim(&c, &Divisor::zero()), 1);

        let c = ex53();
        let g = Divisor::two_point(19, 1, 19);
        let strata: Vec<i64> = (0..9).map(|t| 1 + stratum_degree(&c, &g, t)).collect();
        assert_eq!(strata, vec![5, 4, 4, 3, 3, 2, 2, 2, 2]);
        assert_eq!(rr_dim(&c, &g), 27);

        let c = ex51();
        assert_eq!(rr_dim(&c, &Divisor::two_point(25, 1, 1)), 17);
    }

    #[test]
    fn bases_from_examples() {
        let c = ex52();
        let names = |d: Divisor| -> Vec<String> { rr_basis(&c, &d).unwrap().functions.iter().map(|f| f.to_string()).collect() };
        assert_eq!(names(Divisor::at_infinity(5)), ["1", "x", "y"]);
        assert_eq!(names(Divisor::at_infinity(6)), ["1", "x", "x^2", "y"]);
        assert_eq!(names(Divisor::zero()), ["1"]);
        let b = rr_basis(&c, &Divisor::two_point(0, 1, 4)).unwrap();
        assert_eq!(b.dim() as u64, rr_dim(&c, &Divisor::at(1, 4)));
        assert!(b.functions.iter().any(|f| f.to_string().contains("(x-a1)")));
    }

    #[test]
    fn gap_oracle_examples() {
        let c = ex53();
        assert!(oracle_is_gap(&c, &Place::Infinity, 23).unwrap());
        assert!(!oracle_is_gap(&c, &Place::Infinity, 9).unwrap());
        assert!(!oracle_is_gap(&c, &Place::Infinity, 2 * c.genus() as u64).unwrap());
        assert_eq!(oracle_is_gap(&c, &Place::Infinity, 0), Err(RrError::ZeroOrder));
        let ord = Place::Ordinary { a: FieldElement::ONE, b: FieldElement::ONE };
        assert!(matches!(oracle_is_gap(&c, &ord, 1), Err(RrError::NotDistinguished(_))));
    }

    #[test]
    fn two_point_oracle_examples() {
        let c = ex53();
        assert!(oracle_two_point(&c, 1, 0, 0).unwrap());
        assert!(oracle_two_point(&c, 1, 23, 1).unwrap());
        assert!(!oracle_two_point(&c, 1, 10, 10).unwrap());
        assert!(oracle_pure_gap(&c, 1, 10, 10).unwrap());
        assert!(!oracle_pure_gap(&c, 1, 0, 0).unwrap());
        assert!(oracle_two_point(&c, 9, 0, 0).is_err());
    }

    #[test]
    fn irrational_denominators_rejected() {
        // x^2 + 2 is irreducible over F_5: both ramified places are irrational
        let c = curve(5, 1, 3, 1, &[2, 0, 1]);
        assert!(rr_basis(&c, &Divisor::at(1, 3)).is_err());
        let b = rr_basis(&c, &Divisor::from_parts(0, [(1, 3), (2, 3)])).unwrap();
        assert_eq!(b.dim() as u64, rr_dim(&c, &b.divisor));
        assert!(b.functions.iter().any(|f| f.irrational_exp != 0));
    }

    fn arb_divisor(r: usize) -> impl Strategy<Value = Divisor> {
        (-30i64..60, proptest::collection::vec(-12i64..24, r))
            .prop_map(|(inf, cs)| Divisor::from_parts(inf, cs.into_iter().enumerate().map(|(i, n)| (i + 1, n))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn basis_matches_dimension_and_valuations(d in arb_divisor(4), lam in 1u32..9) {
            prop_assume!(lam % 3 != 0);
            let c = split_curve(13, 9, lam as i64, 4);
            let b = rr_basis(&c, &d).unwrap();
            prop_assert_eq!(b.dim() as u64, rr_dim(&c, &d));
            let mut places = vec![Place::Infinity];
            places.extend((1..=4).map(|i| c.ramified(i).unwrap()));
            for f in &b.functions {
                for pl in &places {
                    prop_assert!(f.valuation(&c, pl).unwrap() >= -d.coeff_at(pl).unwrap(), "{} at {}", f, pl);
                }
            }
        }

        #[test]
        fn dimension_monotone_unit_steps(d in arb_divisor(4)) {
            let c = split_curve(13, 9, 1, 4);
            let base = rr_dim(&c, &d);
            for step in [Divisor::at_infinity(1), Divisor::at(1, 1), Divisor::at(3, 1)] {
                let up = rr_dim(&c, &d.add(&step));
                prop_assert!(base <= up && up <= base + 1);
            }
            if d.degree() < 0 {
                prop_assert_eq!(base, 0);
            }
            if d.degree() >= 2 * c.genus() as i64 - 1 {
                prop_assert_eq!(base as i64, d.degree() + 1 - c.genus() as i64);
            }
        }
    }
}
