//! Dense univariate polynomials over `F_q`.

use std::fmt;

use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomials live over different fields")]
    MixedFields,
    #[error("bad coefficient list: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Little-endian coefficients with no trailing zeros; zero is empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]", self)
    }
}

/// Comma-separated encodings, little-endian; the zero polynomial prints as `0`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.enc().to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Polynomial {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Polynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Polynomial {
        Polynomial::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: FieldElement) -> Polynomial {
        Polynomial::new(field, vec![c])
    }

    /// The monomial `x`.
    pub fn x(field: &Field) -> Polynomial {
        Polynomial::new(field, vec![FieldElement::ZERO, FieldElement::ONE])
    }

    /// `x - a`.
    pub fn linear(field: &Field, a: FieldElement) -> Polynomial {
        Polynomial::new(field, vec![field.neg(a), FieldElement::ONE])
    }

    pub fn from_encodings(field: &Field, encs: &[u64]) -> Result<Polynomial, PolyError> {
        let coeffs = encs.iter().map(|&e| field.elem(e)).collect::<Result<Vec<_>, _>>()?;
        Ok(Polynomial::new(field, coeffs))
    }

    /// Parses `"0,4,0,0,0,1"` (little-endian encodings).
    pub fn parse(field: &Field, s: &str) -> Result<Polynomial, PolyError> {
        let encs = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<u64>().map_err(|_| PolyError::Parse(format!("`{t}` is not a non-negative integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Polynomial::from_encodings(field, &encs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::MixedFields)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or_default();
                let b = other.coeffs.get(i).copied().unwrap_or_default();
                f.add(a, b)
            })
            .collect();
        Ok(Polynomial::new(f, c))
    }

    pub fn neg(&self) -> Polynomial {
        let c = self.coeffs.iter().map(|&a| self.field.neg(a)).collect();
        Polynomial::new(&self.field, c)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Polynomial {
        let v = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Polynomial::new(&self.field, v)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(f));
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Polynomial::new(f, out))
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::constant(&self.field, FieldElement::ONE);
        for _ in 0..n {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// `(quotient, remainder)` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        self.check(divisor)?;
        let f = &self.field;
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = f.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(f), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let c = f.mul(rem[shift + dd], lead_inv);
            quot[shift] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Polynomial::new(f, quot), Polynomial::new(f, rem)))
    }

    /// Scaled to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(self.field.inv(l).expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (`gcd(0, 0) = 0`).
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Polynomial {
        let f = &self.field;
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, &a)| f.mul(f.from_int(i as i64), a)).collect();
        Polynomial::new(f, c)
    }

    /// Horner evaluation.
    pub fn eval(&self, a: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// `gcd(f, f')` is constant.
    pub fn is_separable(&self) -> Result<bool, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.gcd(&self.derivative())?.degree() == Some(0))
    }

    /// Roots in `F_q` by exhaustive scan, in encoding order.
    pub fn roots(&self) -> Result<Vec<FieldElement>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.field.elements().filter(|&a| self.eval(a).is_zero()).collect())
    }
}
