//! Curves shared by unit tests.

use crate::curve::KummerCurve;
use crate::gf::make_field;
use crate::poly::Polynomial;

pub fn curve(p: u32, e: u32, m: u32, lambda: i64, f: &[u64]) -> KummerCurve {
    let field = make_field(p, e).unwrap();
    let f = Polynomial::from_encodings(&field, f).unwrap();
    KummerCurve::new(&field, m, lambda, f).unwrap()
}

/// `y^m = (x (x-1) ... (x-r+1))^lambda` over the prime field `F_p`.
pub fn split_curve(p: u32, m: u32, lambda: i64, r: u32) -> KummerCurve {
    let field = make_field(p, 1).unwrap();
    let f = (0..r as u64)
        .map(|a| Polynomial::linear(&field, field.elem(a).unwrap()))
        .fold(Polynomial::constant(&field, field.one()), |acc, g| acc.mul(&g).unwrap());
    KummerCurve::new(&field, m, lambda, f).unwrap()
}

/// `y^6 = x^5 + x` over `F_25`.
pub fn ex51() -> KummerCurve {
    curve(5, 2, 6, 1, &[0, 1, 0, 0, 0, 1])
}

/// `y^3 = x^5 - x` over `F_25`.
pub fn ex52() -> KummerCurve {
    curve(5, 2, 3, 1, &[0, 4, 0, 0, 0, 1])
}

/// `y^9 = x^4 + x^2 + x` over `F_64`.
pub fn ex53() -> KummerCurve {
    curve(2, 6, 9, 1, &[0, 1, 1, 0, 1])
}
