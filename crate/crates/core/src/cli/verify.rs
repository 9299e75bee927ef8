//! Reproduction checks on three bundled curves with known parameters.

use std::fs;
use std::path::Path;

use serde_json::json;

use super::{curve_from_text, CliError, Report, Table};
use crate::code::{build_cl, build_comega_with_box, exact_min_distance, shorten, DistanceKind, DEFAULT_BUDGET};
use crate::curve::{KummerCurve, Place};
use crate::onepoint::semigroup_at;
use crate::rr::{oracle_pure_gap, Divisor};
use crate::twopoint::{gamma_set, is_pure_gap_formula, pure_gap_family, PureGapBox};

struct Fixture {
    name: &'static str,
    text: &'static str,
}

const FIXTURES: [Fixture; 3] = [
    Fixture { name: "f25_m3", text: include_str!("../../fixtures/f25_m3.conf") },
    Fixture { name: "f64_m9", text: include_str!("../../fixtures/f64_m9.conf") },
    Fixture { name: "f25_m6", text: include_str!("../../fixtures/f25_m6.conf") },
];

type Check = fn(&KummerCurve) -> Result<String, String>;

struct Criterion {
    id: &'static str,
    fixture: usize,
    check: Check,
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what} is {got:?}, expected {want:?}"))
    }
}

fn places_genus(c: &KummerCurve, n: usize, g: u32) -> Result<String, String> {
    expect("genus", c.genus(), g)?;
    expect("number of rational places", c.rational_places().len(), n)?;
    Ok(format!("{n} rational places, g = {g}"))
}

fn cl_exact(c: &KummerCurve, a: i64, n: usize, k: usize, d: u64) -> Result<String, String> {
    let code = build_cl(c, &Divisor::at_infinity(a)).map_err(|e| e.to_string())?;
    expect("(n, k)", (code.n(), code.k()), (n, k))?;
    expect("designed distance", code.designed_d, d as i64)?;
    let exact = exact_min_distance(&code, DEFAULT_BUDGET).ok_or("enumeration over budget")?;
    expect("minimum distance", exact, d)?;
    Ok(format!("[{n}, {k}, {d}] by enumeration"))
}

fn gaps_at(c: &KummerCurve, place: &Place) -> Result<Vec<u64>, String> {
    Ok(semigroup_at(c, place).map_err(|e| e.to_string())?.gaps().to_vec())
}

fn p1(c: &KummerCurve) -> Result<Place, String> {
    c.ramified(1).map_err(|e| e.to_string())
}

fn pure_gap_both(c: &KummerCurve, a: u64, b: u64) -> Result<(), String> {
    expect("floor criterion", is_pure_gap_formula(c, 1, a, b).map_err(|e| e.to_string())?, true)?;
    expect("Riemann-Roch test", oracle_pure_gap(c, 1, a, b).map_err(|e| e.to_string())?, true)
}

fn omega_box(c: &KummerCurve, beta: u64, gamma: u64, n: usize, k: usize, d: i64) -> Result<String, String> {
    let rect = PureGapBox { beta, gamma, t1: 0, t2: 0 };
    let g = rect.divisor(1);
    let code = build_comega_with_box(c, &g, &rect).map_err(|e| e.to_string())?;
    expect("(n, k)", (code.n(), code.k()), (n, k))?;
    expect("rank", code.gen.rank(&code.field), k)?;
    expect("designed distance", (code.designed_d, code.d_kind), (d, DistanceKind::HommaKim))?;
    Ok(format!("G = {g}: [{n}, {k}, >= {d}]"))
}

const CRITERIA: [Criterion; 14] = [
    Criterion { id: "f25_m3.places-genus", fixture: 0, check: |c| places_genus(c, 66, 4) },
    Criterion {
        id: "f25_m3.semigroup-inf",
        fixture: 0,
        check: |c| {
            let h = semigroup_at(c, &Place::Infinity).map_err(|e| e.to_string())?;
            expect("generators", h.generators(), &[3, 5][..])?;
            Ok("H(P_inf) = <3, 5>".into())
        },
    },
    Criterion { id: "f25_m3.code-5P_inf", fixture: 0, check: |c| cl_exact(c, 5, 65, 3, 60) },
    Criterion { id: "f25_m3.code-6P_inf", fixture: 0, check: |c| cl_exact(c, 6, 65, 4, 59) },
    Criterion { id: "f64_m9.places-genus", fixture: 1, check: |c| places_genus(c, 257, 12) },
    Criterion {
        id: "f64_m9.gaps-inf",
        fixture: 1,
        check: |c| {
            expect("G(P_inf)", gaps_at(c, &Place::Infinity)?, vec![1, 2, 3, 5, 6, 7, 10, 11, 14, 15, 19, 23])?;
            Ok("12 gaps".into())
        },
    },
    Criterion {
        id: "f64_m9.gaps-p",
        fixture: 1,
        check: |c| {
            expect("G(P_1)", gaps_at(c, &p1(c)?)?, vec![1, 2, 3, 4, 5, 6, 10, 11, 12, 13, 19, 20])?;
            let h = semigroup_at(c, &p1(c)?).map_err(|e| e.to_string())?;
            expect("generators", h.generators(), &[7, 8, 9][..])?;
            Ok("12 gaps, H(P_1) = <7, 8, 9>".into())
        },
    },
    Criterion {
        id: "f64_m9.gamma",
        fixture: 1,
        check: |c| {
            let gamma = gamma_set(c, 1).map_err(|e| e.to_string())?;
            let want = vec![(1, 20), (2, 13), (3, 6), (5, 19), (6, 12), (7, 5), (10, 11), (11, 4), (14, 10), (15, 3), (19, 2), (23, 1)];
            expect("gap graph", gamma.pairs, want)?;
            Ok("12 pairs".into())
        },
    },
    Criterion {
        id: "f64_m9.pure-gap-10-10",
        fixture: 1,
        check: |c| {
            pure_gap_both(c, 10, 10)?;
            Ok("(10, 10) by floor criterion and Riemann-Roch".into())
        },
    },
    Criterion { id: "f64_m9.code-omega", fixture: 1, check: |c| omega_box(c, 10, 10, 255, 228, 18) },
    Criterion {
        id: "f64_m9.shortened",
        fixture: 1,
        check: |c| {
            let rect = PureGapBox { beta: 10, gamma: 10, t1: 0, t2: 0 };
            let code = build_comega_with_box(c, &rect.divisor(1), &rect).map_err(|e| e.to_string())?;
            for s in [1, 15, 29] {
                let short = shorten(&code, s).map_err(|e| e.to_string())?;
                expect("(n, k)", (short.n(), short.k()), (255 - s, 228 - s))?;
                expect("rank", short.gen.rank(&short.field), 228 - s)?;
                expect("designed distance", short.designed_d, 18)?;
            }
            Ok("s = 1, 15, 29 give [255-s, 228-s, >= 18]".into())
        },
    },
    Criterion { id: "f25_m6.places-genus", fixture: 2, check: |c| places_genus(c, 126, 10) },
    Criterion {
        id: "f25_m6.pure-gap-13-1",
        fixture: 2,
        check: |c| {
            expect("family member for q = 5", pure_gap_family(5, 1).map_err(|e| e.to_string())?, (13, 1))?;
            pure_gap_both(c, 13, 1)?;
            Ok("(13, 1) by family, floor criterion and Riemann-Roch".into())
        },
    },
    Criterion { id: "f25_m6.code-omega", fixture: 2, check: |c| omega_box(c, 13, 1, 124, 107, 10) },
];

pub(super) fn ids() -> Vec<&'static str> {
    CRITERIA.iter().map(|c| c.id).collect()
}

pub(super) struct Outcome {
    pub report: Report,
    /// First failing criterion, as an exit-5 error.
    pub failure: Option<CliError>,
}

pub(super) fn run(dir: Option<&Path>) -> Result<Outcome, CliError> {
    let mut curves = Vec::new();
    for fx in &FIXTURES {
        let text = match dir {
            Some(d) => {
                let path = d.join(format!("{}.conf", fx.name));
                fs::read_to_string(&path).map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))?
            }
            None => fx.text.to_string(),
        };
        curves.push(curve_from_text(&text).map_err(|e| format!("{}: {e}", fx.name)));
    }
    let mut rows = Vec::new();
    let mut failure = None;
    let mut passed = 0;
    for cr in &CRITERIA {
        let result = match &curves[cr.fixture] {
            Ok(c) => (cr.check)(c),
            Err(e) => Err(e.clone()),
        };
        let (status, detail) = match result {
            Ok(d) => {
                passed += 1;
                ("pass", d)
            }
            Err(d) => {
                failure.get_or_insert_with(|| CliError { code: 5, message: format!("{} failed: {d}", cr.id) });
                ("FAIL", d)
            }
        };
        rows.push(vec![json!(cr.id), json!(status), json!(detail)]);
    }
    let report = Report::new().field("passed", json!(passed)).field("failed", json!(CRITERIA.len() - passed)).table(Table::new(
        "criteria",
        &["id", "status", "detail"],
        rows,
    ));
    Ok(Outcome { report, failure })
}
