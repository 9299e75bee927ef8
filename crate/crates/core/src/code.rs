//! Evaluation codes `C_L(D, G)`, their duals `C_Omega`, designed distances,
//! brute-force minimum distance and shortening.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{KummerCurve, Place};
use crate::gf::{Field, FieldElement};
use crate::rr::{rr_basis, Divisor, RrError};
use crate::twopoint::{PureGapBox, TwoPointError};

/// Default brute-force budget, in enumerated message vectors.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("G = {0} must be supported on P_inf and ramified places with center in F_q")]
    UnsupportedSupport(String),
    #[error("code has dimension 0")]
    ZeroDimension,
    #[error("cannot shorten by s = {s}: need s < k = {k}")]
    ShortenTooFar { s: usize, k: usize },
    #[error("Homma-Kim bound needs a pure-gap rectangle")]
    MissingBox,
    #[error("G = {g} does not match the rectangle, which requires {expected}")]
    BoxMismatch { g: String, expected: String },
    #[error(transparent)]
    Rr(#[from] RrError),
    #[error(transparent)]
    TwoPoint(#[from] TwoPointError),
}

/// Dense row-major matrix over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<FieldElement>>) -> Matrix {
        let n = rows.len();
        let data: Vec<FieldElement> = rows.into_iter().inspect(|r| assert_eq!(r.len(), cols)).flatten().collect();
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    /// In-place reduced row-echelon form; zero rows are dropped. Returns the
    /// pivot columns.
    pub fn rref(&mut self, fq: &Field) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = fq.inv(self.get(r, col)).expect("nonzero pivot");
            for j in 0..cols {
                self.data[r * cols + j] = fq.mul(self.data[r * cols + j], inv);
            }
            let pivot_row: Vec<FieldElement> = self.row(r).to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, col);
                if factor.is_zero() {
                    continue;
                }
                let row = &mut self.data[i * cols..(i + 1) * cols];
                for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = fq.sub(*x, fq.mul(factor, p));
                }
            }
            pivots.push(col);
            r += 1;
        }
        self.rows = r;
        self.data.truncate(r * cols);
        pivots
    }

    pub fn rank(&self, fq: &Field) -> usize {
        self.clone().rref(fq).len()
    }

    /// Basis of `{v : M v = 0}` as rows, in reduced row-echelon form.
    pub fn nullspace(&self, fq: &Field) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref(fq);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![FieldElement::ZERO; self.cols];
            v[fc] = FieldElement::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = fq.neg(m.get(i, fc));
            }
            basis.push(v);
        }
        let mut out = Matrix::from_rows(self.cols, basis);
        out.rref(fq);
        out
    }

    /// `v M` for a row vector `v`.
    pub fn left_mul(&self, fq: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(i)) {
                *o = fq.add(*o, fq.mul(c, x));
            }
        }
        out
    }

    /// Rows as lines of space-separated encodings, LF-terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in self.iter_rows() {
            let line: Vec<String> = row.iter().map(|x| x.enc().to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    /// `n - deg G` for `C_L`.
    GoppaL,
    /// `deg G - (2g - 2)` for `C_Omega`.
    GoppaOmega,
    /// Pure-gap rectangle bound for `C_Omega`.
    HommaKim,
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DistanceKind::GoppaL => "goppa_L",
            DistanceKind::GoppaOmega => "goppa_omega",
            DistanceKind::HommaKim => "homma_kim",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct LinearCode {
    pub field: Field,
    pub gen: Matrix,
    /// Evaluation places, one per coordinate.
    pub positions: Vec<Place>,
    pub designed_d: i64,
    pub d_kind: DistanceKind,
    pub exact_d: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeSummary {
    pub n: usize,
    pub k: usize,
    pub designed_d: i64,
    pub d_kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_d: Option<u64>,
}

impl LinearCode {
    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn summary(&self) -> CodeSummary {
        CodeSummary { n: self.n(), k: self.k(), designed_d: self.designed_d, d_kind: self.d_kind.to_string(), exact_d: self.exact_d }
    }

    /// Computes and stores the exact minimum distance when within budget.
    pub fn with_exact_distance(mut self, budget: u64) -> LinearCode {
        self.exact_d = exact_min_distance(&self, budget);
        self
    }
}

/// Evaluation places `D`: every rational place outside `supp G`.
pub fn evaluation_places(c: &KummerCurve, g: &Divisor) -> Result<Vec<Place>, CodeError> {
    c.check_divisor(g).map_err(RrError::from)?;
    if g.support_indices().any(|i| !c.is_rational_index(i)) {
        return Err(CodeError::UnsupportedSupport(g.to_string()));
    }
    Ok(c.rational_places().into_iter().filter(|p| !g.contains(p)).collect())
}

/// `C_L(D, G)`: rows are basis functions of `L(G)` evaluated on `D`.
pub fn build_cl(c: &KummerCurve, g: &Divisor) -> Result<LinearCode, CodeError> {
    let positions = evaluation_places(c, g)?;
    let basis = rr_basis(c, g)?;
    let rows = basis
        .functions
        .par_iter()
        .map(|f| positions.iter().map(|p| f.eval(c, p)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut gen = Matrix::from_rows(positions.len(), rows);
    gen.rref(c.field());
    if gen.rows() == 0 {
        return Err(CodeError::ZeroDimension);
    }
    let n = positions.len() as i64;
    Ok(LinearCode { field: c.field().clone(), gen, positions, designed_d: n - g.degree(), d_kind: DistanceKind::GoppaL, exact_d: None })
}

/// `C_Omega(D, G)`, the dual of `C_L(D, G)`.
pub fn build_comega(c: &KummerCurve, g: &Divisor) -> Result<LinearCode, CodeError> {
    let cl = build_cl(c, g)?;
    let gen = cl.gen.nullspace(c.field());
    if gen.rows() == 0 {
        return Err(CodeError::ZeroDimension);
    }
    Ok(LinearCode {
        field: cl.field,
        gen,
        positions: cl.positions,
        designed_d: g.degree() - (2 * c.genus() as i64 - 2),
        d_kind: DistanceKind::GoppaOmega,
        exact_d: None,
    })
}

/// `C_Omega` carrying the pure-gap rectangle bound.
pub fn build_comega_with_box(c: &KummerCurve, g: &Divisor, rect: &PureGapBox) -> Result<LinearCode, CodeError> {
    let d = designed_distance(c, g, 0, DistanceKind::HommaKim, Some(rect))?;
    let mut code = build_comega(c, g)?;
    code.designed_d = d;
    code.d_kind = DistanceKind::HommaKim;
    Ok(code)
}

/// The requested lower bound on the minimum distance; `n` is only used by `GoppaL`.
pub fn designed_distance(c: &KummerCurve, g: &Divisor, n: usize, kind: DistanceKind, rect: Option<&PureGapBox>) -> Result<i64, CodeError> {
    let two_g_minus_2 = 2 * c.genus() as i64 - 2;
    match kind {
        DistanceKind::GoppaL => Ok(n as i64 - g.degree()),
        DistanceKind::GoppaOmega => Ok(g.degree() - two_g_minus_2),
        DistanceKind::HommaKim => {
            let rect = rect.ok_or(CodeError::MissingBox)?;
            let index = g.support_indices().next().unwrap_or(1);
            let expected = rect.divisor(index);
            if expected != *g {
                return Err(CodeError::BoxMismatch { g: g.to_string(), expected: expected.to_string() });
            }
            PureGapBox::verified(c, index, rect.beta, rect.gamma, rect.t1, rect.t2)?;
            Ok(g.degree() - two_g_minus_2 + rect.t1 as i64 + rect.t2 as i64 + 2)
        }
    }
}

/// Minimum nonzero weight by enumerating all `q^k` messages, or `None` when
/// `q^k` exceeds `budget`. Messages are walked in modular Gray-code order so
/// every step adds a single scaled generator row.
pub fn exact_min_distance(code: &LinearCode, budget: u64) -> Option<u64> {
    let fq = &code.field;
    let q = fq.q() as u64;
    let k = code.k();
    let words = (q as u128).checked_pow(k as u32)?;
    if words > budget as u128 || k == 0 {
        return None;
    }
    let n = code.n();
    let gen = &code.gen;
    // Split on the value of the first message coordinate.
    (0..q)
        .into_par_iter()
        .map(|lead| {
            let lead = elem_of(lead);
            let mut word: Vec<FieldElement> = gen.row(0).iter().map(|&x| fq.mul(lead, x)).collect();
            let mut weight = word.iter().filter(|x| !x.is_zero()).count() as u64;
            let mut best = if weight > 0 { weight } else { u64::MAX };
            let rest = k - 1;
            // counter digits and Gray digits for rows 1..k
            let mut counter = vec![0u64; rest];
            let mut gray = vec![0u64; rest];
            let steps = q.pow(rest as u32);
            for _ in 1..steps {
                let mut j = 0;
                while counter[j] == q - 1 {
                    counter[j] = 0;
                    j += 1;
                }
                counter[j] += 1;
                let old = elem_of(gray[j]);
                gray[j] = (gray[j] + 1) % q;
                let delta = fq.sub(elem_of(gray[j]), old);
                for (w, &x) in word.iter_mut().zip(gen.row(j + 1)) {
                    if x.is_zero() {
                        continue;
                    }
                    let before = !w.is_zero();
                    *w = fq.add(*w, fq.mul(delta, x));
                    let after = !w.is_zero();
                    weight = weight + after as u64 - before as u64;
                }
                if weight > 0 && weight < best {
                    best = weight;
                }
            }
            debug_assert!(n as u64 >= best || best == u64::MAX);
            best
        })
        .min()
        .filter(|&d| d != u64::MAX)
}

#[inline]
fn elem_of(enc: u64) -> FieldElement {
    FieldElement::from_enc_unchecked(enc as u32)
}

/// Subcode vanishing on the last `s` coordinates, with those coordinates
/// deleted. When the deleted columns have rank below `s` the shortened code
/// is larger than `k - s`; it is then cut to the first `k - s` rows of its
/// echelon form, which keeps the distance bound.
pub fn shorten(code: &LinearCode, s: usize) -> Result<LinearCode, CodeError> {
    let (n, k) = (code.n(), code.k());
    if s >= k {
        return Err(CodeError::ShortenTooFar { s, k });
    }
    if s == 0 {
        return Ok(code.clone());
    }
    let fq = &code.field;
    // [M_S | I_k]: rows that reduce to zero on M_S carry left-kernel vectors.
    let aug_rows: Vec<Vec<FieldElement>> = (0..k)
        .map(|i| {
            let mut row: Vec<FieldElement> = code.gen.row(i)[n - s..].to_vec();
            row.extend((0..k).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }));
            row
        })
        .collect();
    let mut aug = Matrix::from_rows(s + k, aug_rows);
    let pivots = aug.rref(fq);
    let kernel: Vec<Vec<FieldElement>> = pivots
        .iter()
        .enumerate()
        .filter(|&(_, &pc)| pc >= s)
        .map(|(i, _)| code.gen.left_mul(fq, &aug.row(i)[s..]))
        .map(|w| w[..n - s].to_vec())
        .collect();
    let mut gen = Matrix::from_rows(n - s, kernel);
    gen.rref(fq);
    let keep = k - s;
    if gen.rows() > keep {
        gen = Matrix::from_rows(n - s, gen.iter_rows().take(keep).map(<[FieldElement]>::to_vec).collect());
    }
    Ok(LinearCode {
        field: code.field.clone(),
        gen,
        positions: code.positions[..n - s].to_vec(),
        designed_d: code.designed_d,
        d_kind: code.d_kind,
        exact_d: None,
    })
}
