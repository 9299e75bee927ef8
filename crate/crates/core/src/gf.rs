//! Prime-power finite fields `F_q`, `q = p^e`.
//!
//! Elements are stored by their canonical integer encoding
//! `enc = sum coeffs[i] * p^i`, where `coeffs` are the little-endian
//! coefficients of the element as a polynomial over `F_p` reduced modulo the
//! field's modulus. Addition works digit-wise; multiplication goes through
//! exponent/logarithm tables built once per field from a primitive element
//! found by exhaustive search.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field cardinality (tables are `O(q)`).
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {p}^{e} exceeds the supported limit {MAX_FIELD_SIZE}")]
    TooLarge { p: u32, e: u32 },
    #[error("encoding {enc} is not an element of F_{q}")]
    OutOfRange { enc: u64, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("root order m must be positive")]
    ZeroRootOrder,
}

/// A field element, identified by its canonical encoding in `[0, q)`.
///
/// Elements do not carry their field; every operation goes through the
/// [`Field`] that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, serde::Serialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Canonical integer encoding.
    #[inline]
    pub fn enc(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Caller guarantees `enc < q`.
    #[inline]
    pub(crate) fn from_enc_unchecked(enc: u32) -> FieldElement {
        FieldElement(enc)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field parameters: characteristic, degree and the defining modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// Monic irreducible modulus over `F_p`, little-endian, length `e + 1`.
    pub modulus: Vec<u32>,
}

struct Tables {
    spec: FieldSpec,
    /// `exp[i] = g^i` for `i in [0, 2(q-1))`, doubled to skip a reduction.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
    /// `pow_p[i] = p^i`.
    pow_p: Vec<u32>,
    /// Full addition table for small non-binary extension fields.
    add: Option<Vec<u32>>,
}

/// Handle to a constructed finite field. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (p={}, e={}, modulus={:?})", self.q(), self.p(), self.e(), self.0.spec.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds `F_{p^e}` with the irreducible monic modulus of smallest encoding.
/// For `e = 1` the modulus is `x`.
pub fn make_field(p: u32, e: u32) -> Result<Field, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if e == 0 {
        return Err(GfError::ZeroDegree);
    }
    let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_FIELD_SIZE);
    let q = q.ok_or(GfError::TooLarge { p, e })? as u32;
    let modulus = smallest_irreducible(p, e as usize);
    Ok(Field::from_modulus(p, e, q, modulus))
}

impl Field {
    fn from_modulus(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Field {
        let mut pow_p = Vec::with_capacity(e as usize);
        let mut acc = 1u32;
        for _ in 0..e {
            pow_p.push(acc);
            acc = acc.wrapping_mul(p);
        }
        let spec = FieldSpec { p, e, q, modulus };
        let order = (q - 1) as usize;
        let mut tables = Tables { spec, exp: Vec::new(), log: vec![0; q as usize], pow_p, add: None };

        // Smallest-encoding primitive element; q = 2 has generator 1.
        let mut exp = Vec::with_capacity(2 * order.max(1));
        for cand in 1..q {
            exp.clear();
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = slow_mul(&tables, x, cand);
                if x == 1 || exp.len() > order {
                    break;
                }
            }
            if exp.len() == order {
                break;
            }
        }
        debug_assert_eq!(exp.len(), order);
        for (i, &v) in exp.iter().enumerate() {
            tables.log[v as usize] = i as u32;
        }
        let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
        tables.exp = doubled;
        if p != 2 && e > 1 && q <= ADD_TABLE_LIMIT {
            let mut add = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                add.extend((0..q).map(|b| digit_add(p, &tables.pow_p, a, b)));
            }
            tables.add = Some(add);
        }
        Field(Arc::new(tables))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.0.spec.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.spec.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.spec.modulus
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Element with the given canonical encoding.
    pub fn elem(&self, enc: u64) -> Result<FieldElement, GfError> {
        if enc < self.q() as u64 {
            Ok(FieldElement(enc as u32))
        } else {
            Err(GfError::OutOfRange { enc, q: self.q() })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p() as i64) as u32)
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q()).map(FieldElement)
    }

    /// Base-`p` digit vector (little-endian, length `e`).
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let p = self.p();
        let mut v = a.0;
        (0..self.e())
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, GfError> {
        let p = self.p() as u64;
        let mut enc = 0u64;
        let mut scale = 1u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if i >= self.e() as usize && c != 0 {
                return Err(GfError::OutOfRange { enc: u64::MAX, q: self.q() });
            }
            enc += (c as u64 % p) * scale;
            scale = scale.saturating_mul(p);
        }
        self.elem(enc)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p();
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.e() == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        if let Some(table) = &self.0.add {
            return FieldElement(table[(a.0 * self.q() + b.0) as usize]);
        }
        FieldElement(digit_add(p, &self.0.pow_p, a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.p();
        if p == 2 {
            return a;
        }
        let (mut x, mut out) = (a.0, 0u32);
        for &scale in &self.0.pow_p {
            let d = x % p;
            out += ((p - d) % p) * scale;
            x /= p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let t = &self.0;
        FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        let t = &self.0;
        let order = self.q() - 1;
        let l = t.log[a.0 as usize];
        Ok(FieldElement(t.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, n: u64) -> FieldElement {
        if n == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let t = &self.0;
        let order = (self.q() - 1) as u64;
        let l = (t.log[a.0 as usize] as u64 * (n % order)) % order;
        FieldElement(t.exp[l as usize])
    }

    /// `a^n` for a possibly negative exponent.
    pub fn pow_signed(&self, a: FieldElement, n: i64) -> Result<FieldElement, GfError> {
        if n >= 0 {
            Ok(self.pow(a, n as u64))
        } else {
            Ok(self.pow(self.inv(a)?, n.unsigned_abs()))
        }
    }

    /// All `b` with `b^m = v`, by exhaustive scan, in encoding order.
    pub fn mth_roots(&self, v: FieldElement, m: u32) -> Result<Vec<FieldElement>, GfError> {
        if m == 0 {
            return Err(GfError::ZeroRootOrder);
        }
        Ok(self.elements().filter(|&b| self.pow(b, m as u64) == v).collect())
    }

    /// `table[v]` lists every `b` with `b^m = v`; one pass over the field.
    pub fn mth_root_table(&self, m: u32) -> Result<Vec<Vec<FieldElement>>, GfError> {
        if m == 0 {
            return Err(GfError::ZeroRootOrder);
        }
        let mut table = vec![Vec::new(); self.q() as usize];
        for b in self.elements() {
            table[self.pow(b, m as u64).0 as usize].push(b);
        }
        Ok(table)
    }
}

const ADD_TABLE_LIMIT: u32 = 256;

fn digit_add(p: u32, pow_p: &[u32], mut x: u32, mut y: u32) -> u32 {
    let mut out = 0u32;
    for &scale in pow_p {
        out += ((x % p + y % p) % p) * scale;
        x /= p;
        y /= p;
    }
    out
}

/// Multiplication by schoolbook polynomial arithmetic mod the modulus.
fn slow_mul(t: &Tables, a: u32, b: u32) -> u32 {
    let FieldSpec { p, e, ref modulus, .. } = t.spec;
    let digits = |mut v: u32| -> Vec<u32> {
        (0..e)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    };
    let prod = fp::mul(p, &digits(a), &digits(b));
    let r = fp::rem(p, &prod, modulus);
    r.iter().zip(&t.pow_p).map(|(&d, &s)| d * s).sum()
}

/// Smallest-encoding monic irreducible polynomial of degree `e` over `F_p`.
fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let lower_count = (p as u64).pow(e as u32);
    for lower in 0..lower_count {
        let mut f = Vec::with_capacity(e + 1);
        let mut v = lower;
        for _ in 0..e {
            f.push((v % p as u64) as u32);
            v /= p as u64;
        }
        f.push(1);
        if fp::is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Dense little-endian polynomials over the prime field, used only to find
/// and apply the modulus.
pub(crate) mod fp {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let (mut b, mut n) = (a as u64 % p as u64, p as u64 - 2);
        while n > 0 {
            if n & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            n >>= 1;
        }
        r as u32
    }

    pub fn mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|v| v as u32).collect())
    }

    pub fn rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] as u64 * lead_inv % p as u64;
            for (i, &mi) in m.iter().enumerate() {
                let sub = c * mi as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(p, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn powmod(p: u32, base: &[u32], mut n: u64, m: &[u32]) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut b = rem(p, base, m);
        while n > 0 {
            if n & 1 == 1 {
                result = rem(p, &mul(p, &result, &b), m);
            }
            b = rem(p, &mul(p, &b, &b), m);
            n >>= 1;
        }
        result
    }

    /// Rabin-style test: `gcd(f, x^(p^k) - x) = 1` for `1 <= k <= deg/2`.
    pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
        let f = trim(f.to_vec());
        let deg = f.len() - 1;
        if deg == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut h = rem(p, &x, &f);
        for _ in 1..=deg / 2 {
            h = powmod(p, &h, p as u64, &f);
            let g = gcd(p, &f, &sub(p, &h, &x));
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}
