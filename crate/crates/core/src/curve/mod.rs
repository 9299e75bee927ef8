//! Kummer extensions `y^m = f(x)^lambda` over `F_q`: validation, genus,
//! distinguished places and rational-point enumeration.

mod config;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};
use crate::poly::{PolyError, Polynomial};
use crate::rr::Divisor;

pub use config::{ConfigError, CurveConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("Kummer degree m = {0} must be at least 2")]
    DegreeTooSmall(u32),
    #[error("characteristic {p} divides m = {m}")]
    CharacteristicDividesM { p: u32, m: u32 },
    #[error("gcd(m, r*lambda) = gcd({m}, {r}*{lambda}) != 1")]
    NotCoprime { m: u32, r: u32, lambda: u32 },
    #[error("lambda = {lambda} must lie in (0, m) = (0, {m})")]
    LambdaOutOfRange { m: u32, lambda: i64 },
    #[error("f must have degree at least 1")]
    ConstantF,
    #[error("f is not separable")]
    NotSeparable,
    #[error("place P_{index} does not exist (curve has r = {r} ramified finite places)")]
    NoSuchPlace { index: usize, r: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Places of degree one on the curve.
///
/// Ramified places are numbered `1..=r`; indices up to `alphas().len()` have
/// their center in `F_q` (sorted by encoding), the rest are centered at roots
/// of `f` outside `F_q` and never appear in [`KummerCurve::rational_places`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Place {
    Infinity,
    Ramified { index: usize, alpha: FieldElement },
    Ordinary { a: FieldElement, b: FieldElement },
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "P_inf"),
            Place::Ramified { index, .. } => write!(f, "P_{index}"),
            Place::Ordinary { a, b } => write!(f, "P({a},{b})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KummerCurve {
    field: Field,
    m: u32,
    lambda: u32,
    f: Polynomial,
    r: u32,
    genus: u32,
    alphas: Vec<FieldElement>,
    /// `f / prod (x - alpha_i)` over the rational roots.
    f_irrational: Polynomial,
}

/// The function `z = f^a / y^b` with `am - b*lambda = 1`, whose pole divisor is `r P_inf`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoleFunction {
    pub f_exp: u32,
    pub y_exp: u32,
    pub divisor: Divisor,
    pub pole_divisor: Divisor,
}

/// Divisors of the distinguished functions on the curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipalDivisors {
    /// `(x - alpha_i)`, indexed like the ramified places (entry `i-1`).
    pub x_minus_alpha: Vec<Divisor>,
    pub y: Divisor,
    pub f: Divisor,
    pub z: PoleFunction,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl KummerCurve {
    /// Validates the data; `lambda` must lie in `(0, m)`.
    pub fn new(field: &Field, m: u32, lambda: i64, f: Polynomial) -> Result<KummerCurve, CurveError> {
        if m < 2 {
            return Err(CurveError::DegreeTooSmall(m));
        }
        if m.is_multiple_of(field.p()) {
            return Err(CurveError::CharacteristicDividesM { p: field.p(), m });
        }
        if f.field() != field {
            return Err(PolyError::MixedFields.into());
        }
        if lambda <= 0 || lambda >= m as i64 {
            return Err(CurveError::LambdaOutOfRange { m, lambda });
        }
        let lam = lambda as u32;
        let r = match f.degree() {
            None | Some(0) => return Err(CurveError::ConstantF),
            Some(d) => d as u32,
        };
        if gcd(m as u64, r as u64 * lam as u64) != 1 {
            return Err(CurveError::NotCoprime { m, r, lambda: lam });
        }
        if !f.is_separable()? {
            return Err(CurveError::NotSeparable);
        }
        let alphas = f.roots()?;
        let mut f_irrational = f.clone();
        for &a in &alphas {
            let (quot, rem) = f_irrational.divmod(&Polynomial::linear(field, a))?;
            debug_assert!(rem.is_zero());
            f_irrational = quot;
        }
        let genus = (m - 1) * (r - 1) / 2;
        Ok(KummerCurve { field: field.clone(), m, lambda: lam, f, r, genus, alphas, f_irrational })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    /// Degree of `f`, the number of finite ramified places.
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Roots of `f` in `F_q`, sorted by encoding.
    pub fn alphas(&self) -> &[FieldElement] {
        &self.alphas
    }

    pub fn f_irrational(&self) -> &Polynomial {
        &self.f_irrational
    }

    /// Number of ramified places with center in `F_q`.
    pub fn rational_ramified(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_rational_index(&self, index: usize) -> bool {
        (1..=self.alphas.len()).contains(&index)
    }

    /// Center of `P_index`, if it lies in `F_q`.
    pub fn alpha(&self, index: usize) -> Option<FieldElement> {
        index.checked_sub(1).and_then(|i| self.alphas.get(i)).copied()
    }

    /// The ramified place `P_index`, rational or not.
    pub fn ramified(&self, index: usize) -> Result<Place, CurveError> {
        if index == 0 || index > self.r as usize {
            return Err(CurveError::NoSuchPlace { index, r: self.r });
        }
        let alpha = self.alpha(index).unwrap_or(FieldElement::ZERO);
        Ok(Place::Ramified { index, alpha })
    }

    pub fn check_divisor(&self, d: &Divisor) -> Result<(), CurveError> {
        match d.support_indices().find(|&i| i == 0 || i > self.r as usize) {
            Some(index) => Err(CurveError::NoSuchPlace { index, r: self.r }),
            None => Ok(()),
        }
    }

    /// `P_inf`, the rational ramified places, then every ordinary place
    /// `(a, b)` with `f(a) != 0` and `b^m = f(a)^lambda`, lexicographically.
    pub fn rational_places(&self) -> Vec<Place> {
        let fq = &self.field;
        let table = fq.mth_root_table(self.m).expect("m >= 2");
        let mut places = Vec::with_capacity(1 + self.alphas.len() + fq.q() as usize * self.m as usize);
        places.push(Place::Infinity);
        places.extend(self.alphas.iter().enumerate().map(|(i, &alpha)| Place::Ramified { index: i + 1, alpha }));
        for a in fq.elements() {
            let fa = self.f.eval(a);
            if fa.is_zero() {
                continue;
            }
            let v = fq.pow(fa, self.lambda as u64);
            places.extend(table[v.enc() as usize].iter().map(|&b| Place::Ordinary { a, b }));
        }
        places
    }

    /// Divisors of `x - alpha_i`, `y`, `f(x)` and the pole function `z`.
    pub fn principal_divisors(&self) -> PrincipalDivisors {
        let (m, r, lam) = (self.m as i64, self.r as i64, self.lambda as i64);
        let all = 1..=self.r as usize;
        let x_minus_alpha = all.clone().map(|i| Divisor::at(i, m).with_inf(-m)).collect();
        let y = Divisor::from_parts(-r * lam, all.clone().map(|i| (i, lam)));
        let f = Divisor::from_parts(-r * m, all.clone().map(|i| (i, m)));
        // smallest a >= 1 with a*m = 1 mod lambda
        let a = (1..=lam.max(1)).find(|a| (a * m - 1) % lam == 0).expect("gcd(m, lambda) = 1");
        let b = (a * m - 1) / lam;
        let divisor = f.scale(a).add(&y.scale(-b));
        let pole_divisor = divisor.pole_part();
        PrincipalDivisors { x_minus_alpha, y, f, z: PoleFunction { f_exp: a as u32, y_exp: b as u32, divisor, pole_divisor } }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::testutil::curve;

    #[test]
    fn example_curves_genus_and_points() {
        let c = curve(5, 2, 3, 1, &[0, 4, 0, 0, 0, 1]);
        assert_eq!((c.r(), c.genus()), (5, 4));
        assert_eq!(c.rational_places().len(), 66);

        let c = curve(2, 6, 9, 1, &[0, 1, 1, 0, 1]);
        assert_eq!((c.r(), c.genus()), (4, 12));
        assert_eq!(c.rational_places().len(), 257);

        let c = curve(5, 2, 6, 1, &[0, 1, 0, 0, 0, 1]);
        assert_eq!((c.r(), c.genus()), (5, 10));
        assert_eq!(c.rational_places().len(), 126);
        assert_eq!(c.alphas().len(), 5);
        assert_eq!(c.alpha(1), Some(FieldElement::ZERO));
    }

    #[test]
    fn validation_errors() {
        let f25 = make_field(5, 2).unwrap();
        let g = Polynomial::from_encodings(&f25, &[0, 4, 0, 0, 0, 1]).unwrap();
        assert_eq!(KummerCurve::new(&f25, 5, 1, g.clone()).unwrap_err(), CurveError::CharacteristicDividesM { p: 5, m: 5 });
        assert_eq!(KummerCurve::new(&f25, 10, 1, g.clone()).unwrap_err(), CurveError::CharacteristicDividesM { p: 5, m: 10 });
        assert_eq!(KummerCurve::new(&f25, 3, 3, g.clone()).unwrap_err(), CurveError::LambdaOutOfRange { m: 3, lambda: 3 });
        assert_eq!(KummerCurve::new(&f25, 1, 1, g.clone()).unwrap_err(), CurveError::DegreeTooSmall(1));
        // r = 5, m = 4, lambda = 2: gcd(4, 10) = 2
        assert_eq!(KummerCurve::new(&f25, 4, 2, g.clone()).unwrap_err(), CurveError::NotCoprime { m: 4, r: 5, lambda: 2 });
        let sq = Polynomial::from_encodings(&f25, &[0, 0, 1]).unwrap();
        assert_eq!(KummerCurve::new(&f25, 3, 1, sq).unwrap_err(), CurveError::NotSeparable);
        let konst = Polynomial::from_encodings(&f25, &[3]).unwrap();
        assert_eq!(KummerCurve::new(&f25, 3, 1, konst).unwrap_err(), CurveError::ConstantF);
    }

    #[test]
    fn lambda_range() {
        let f25 = make_field(5, 2).unwrap();
        let g = Polynomial::from_encodings(&f25, &[0, 4, 0, 0, 0, 1]).unwrap();
        for lambda in [0, -1, 4] {
            assert_eq!(KummerCurve::new(&f25, 3, lambda, g.clone()).unwrap_err(), CurveError::LambdaOutOfRange { m: 3, lambda });
        }
        assert_eq!(curve(5, 2, 3, 2, &[0, 4, 0, 0, 0, 1]).lambda(), 2);
    }

    #[test]
    fn place_census_formula() {
        for c in [curve(5, 2, 3, 1, &[0, 4, 0, 0, 0, 1]), curve(5, 2, 3, 2, &[1, 0, 1]), curve(7, 1, 4, 3, &[3, 0, 0, 1])] {
            let fq = c.field();
            let expect: usize = 1
                + c.alphas().len()
                + fq.elements()
                    .filter(|&a| !c.f().eval(a).is_zero())
                    .map(|a| fq.mth_roots(fq.pow(c.f().eval(a), c.lambda() as u64), c.m()).unwrap().len())
                    .sum::<usize>();
            let places = c.rational_places();
            assert_eq!(places.len(), expect);
            let mut sorted = places.clone();
            sorted.sort();
            assert_eq!(sorted, places, "ordering is (kind, enc(a), enc(b))");
            for pl in places {
                if let Place::Ordinary { a, b } = pl {
                    let fa = c.f().eval(a);
                    assert!(!fa.is_zero());
                    assert_eq!(fq.pow(b, c.m() as u64), fq.pow(fa, c.lambda() as u64));
                }
            }
        }
    }

    #[test]
    fn irrational_roots_are_symbolic() {
        // x^2 + 2 is irreducible over F_5
        let c = curve(5, 1, 3, 1, &[2, 0, 1]);
        assert_eq!(c.r(), 2);
        assert!(c.alphas().is_empty());
        assert_eq!(c.f_irrational(), c.f());
        assert!(c.ramified(2).is_ok());
        assert!(!c.is_rational_index(1));
        assert!(c.rational_places().iter().all(|p| !matches!(p, Place::Ramified { .. })));
        assert_eq!(c.ramified(3).unwrap_err(), CurveError::NoSuchPlace { index: 3, r: 2 });
    }

    #[test]
    fn principal_divisor_facts() {
        let c = curve(5, 2, 3, 1, &[0, 4, 0, 0, 0, 1]);
        let pd = c.principal_divisors();
        assert_eq!(pd.y.to_string(), "-5P_inf + 1P_1 + 1P_2 + 1P_3 + 1P_4 + 1P_5");
        assert_eq!(pd.x_minus_alpha[0].to_string(), "-3P_inf + 3P_1");
        assert_eq!(pd.f.degree(), 0);
        assert_eq!((pd.z.f_exp, pd.z.y_exp), (1, 2));
        assert_eq!(pd.z.pole_divisor, Divisor::at_infinity(5));
        for d in pd.x_minus_alpha.iter().chain([&pd.y, &pd.f, &pd.z.divisor]) {
            assert_eq!(d.degree(), 0);
        }

        // general lambda: a*m - b*lambda = 1 with a, b >= 1
        let c = curve(11, 1, 7, 3, &[0, 1, 3, 1]);
        let z = c.principal_divisors().z;
        assert_eq!(z.f_exp as i64 * 7 - z.y_exp as i64 * 3, 1);
        assert!(z.f_exp >= 1 && z.y_exp >= 1);
        assert_eq!(z.pole_divisor, Divisor::at_infinity(c.r() as i64));
    }
}
