//! The published example tables, embedded as fixtures.
//!
//! Table 1 keeps the factored notation of the source (`2^3*13`) and is
//! expanded through [`Factorization`] so that a transcription slip in either
//! the factors or the printed products shows up as a failing row.

use serde::Serialize;

use crate::arith::{abundancy, gcd_list, Factorization, Rational};
use crate::families::{self, CheckOutcome, FamilySpec, Provenance};

/// One Table 1 row: weights, seed factorizations, σ(a)/a, a, and (aN₁, aN₂).
struct SeedRow {
    alphas: [u64; 2],
    n1: &'static str,
    n2: &'static str,
    target: &'static str,
    a: &'static str,
    tuple: [u64; 2],
}

const TABLE1: [SeedRow; 13] = [
    SeedRow { alphas: [1, 2], n1: "2^3*13", n2: "2^2*29", target: "8/5", a: "3*5", tuple: [1560, 1740] },
    SeedRow { alphas: [1, 2], n1: "2^2*3^2*5*41", n2: "2^5*3^5", target: "1", a: "1", tuple: [7380, 7776] },
    SeedRow { alphas: [1, 2], n1: "2^3*41", n2: "2^2*89", target: "104/63", a: "3^2*7", tuple: [20664, 22428] },
    SeedRow { alphas: [1, 2], n1: "17*37", n2: "683", target: "35/12", a: "2^5*3^3", tuple: [543456, 590112] },
    SeedRow { alphas: [1, 2], n1: "17*37", n2: "683", target: "35/12", a: "2^3*3^2*13", tuple: [588744, 639288] },
    SeedRow { alphas: [2, 1], n1: "2^2*5*107", n2: "2^5*71", target: "13/9", a: "3^2", tuple: [19260, 20448] },
    SeedRow { alphas: [2, 1], n1: "2^3*3^5*11", n2: "2^5*3^2*79", target: "1", a: "1", tuple: [21384, 22752] },
    SeedRow { alphas: [2, 1], n1: "2^2*3^3*29", n2: "2^3*3*139", target: "8/7", a: "7", tuple: [21924, 23352] },
    SeedRow { alphas: [2, 1], n1: "17*37*59", n2: "179*227", target: "403/144", a: "2^4*3^2", tuple: [5343984, 5851152] },
    SeedRow { alphas: [1, 3], n1: "3^3*5^3", n2: "3^2*5*79", target: "9/4", a: "2^5*7", tuple: [756000, 796320] },
    SeedRow { alphas: [3, 1], n1: "11*29", n2: "17*19", target: "32/9", a: "2^2*3^3*5*7", tuple: [1205820, 1220940] },
    SeedRow { alphas: [3, 1], n1: "7*13^2", n2: "11^3", target: "10/3", a: "2^3*3^3*5", tuple: [1277640, 1437480] },
    SeedRow { alphas: [3, 1], n1: "3^2*19*41", n2: "3^5*29", target: "18/7", a: "2^3*5*7", tuple: [1963080, 1973160] },
];

/// Rows of Tables 2–8 as (spec, tuples). Table 6 prints (2001, 2607) twice
/// in its k=2, p=2, q=4 row; both copies are kept.
fn plain_tables() -> Vec<(u8, FamilySpec, Vec<Vec<u64>>)> {
    let t = |rows: &[&[u64]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
    let pm = |k, p, q| FamilySpec::Pm { k, p, q };
    let hm = |k, p, q| FamilySpec::Hm { k, p, q };
    let mp = |k, p, q| FamilySpec::Mp { k, p, q };
    vec![
        (2, FamilySpec::AlphaBeta { alpha: 1, beta: 2 }, t(&[&[26, 46], &[296, 586]])),
        (2, FamilySpec::AlphaBeta { alpha: 1, beta: 3 }, t(&[&[3, 4], &[15, 33], &[5919, 7905]])),
        (3, pm(2, 1, 2), t(&[&[3, 20], &[5, 12], &[5, 70], &[5, 88], &[6, 28], &[10, 20]])),
        (3, pm(2, 1, 3), t(&[&[6, 180], &[10, 780], &[24, 780], &[26, 660], &[34, 504]])),
        (3, pm(2, 2, 1), t(&[&[2, 3], &[19, 33], &[27, 77], &[39, 161], &[45, 133], &[51, 69]])),
        (3, pm(2, 2, 2), t(&[&[1, 4], &[1378, 9962], &[1660, 4892], &[1975, 10425]])),
        (3, pm(3, 1, 2), t(&[&[1, 2, 20], &[1, 3, 18], &[1, 4, 20], &[1, 8, 20], &[1, 10, 18]])),
        (3, pm(3, 1, 3), t(&[&[1, 76, 360], &[2, 11, 240], &[2, 41, 420], &[6, 120, 180]])),
        (3, pm(3, 2, 1), t(&[&[1, 47, 185], &[2, 11, 14], &[2, 110, 371], &[3, 302, 411]])),
        (3, pm(3, 2, 2), t(&[&[3, 36, 98], &[5, 34, 135], &[5, 40, 105], &[10, 106, 406]])),
        (3, pm(3, 2, 3), t(&[&[14, 350, 1340], &[22, 96, 1862], &[31, 301, 1876]])),
        (3, pm(3, 2, 4), t(&[&[3, 39, 156], &[11, 40, 294], &[12, 14, 60], &[17, 70, 210]])),
        (3, pm(3, 2, 5), t(&[&[6, 222, 1608], &[15, 33, 168], &[30, 66, 552]])),
        (3, pm(3, 3, 1), t(&[&[2, 10, 15], &[4, 20, 39], &[8, 40, 87], &[9, 45, 63]])),
        (3, pm(3, 3, 3), t(&[&[56, 134, 710], &[108, 268, 1724], &[236, 404, 2510]])),
        (4, FamilySpec::Wpm { k: 2, p: 1 }, t(&[&[4, 6], &[10, 16], &[34, 68], &[60, 81], &[91, 273]])),
        (4, FamilySpec::Wpm { k: 2, p: 2 }, t(&[&[7, 21], &[105, 231], &[1065, 2499]])),
        (4, FamilySpec::Wpm { k: 3, p: 1 }, t(&[&[1, 21, 63], &[1, 22, 44], &[2, 38, 98], &[4, 6, 34]])),
        (4, FamilySpec::Wpm { k: 3, p: 2 }, t(&[&[12, 276, 412], &[70, 210, 224], &[87, 189, 264]])),
        (5, FamilySpec::Gm { k: 2 }, t(&[&[28, 84], &[42, 102], &[60, 276], &[92, 160]])),
        (5, FamilySpec::Gm { k: 3 }, t(&[&[1080, 1092, 1188], &[10164, 10584, 11172]])),
        (6, hm(2, 1, 2), t(&[&[20, 28], &[24, 56], &[30, 66], &[40, 90], &[56, 88], &[92, 132]])),
        (6, hm(2, 1, 3), t(&[&[3, 6], &[10, 32], &[12, 60], &[15, 33], &[24, 116], &[33, 57]])),
        (6, hm(2, 2, 1), t(&[&[120, 168], &[1272, 1320], &[2160, 3792], &[3672, 4968]])),
        (6, hm(2, 2, 4), t(&[&[435, 717], &[447, 513], &[2001, 2607], &[2001, 2607]])),
        (6, hm(3, 1, 3), t(&[&[840, 1020, 1380], &[1008, 1260, 1638], &[2016, 2232, 2772]])),
        (7, FamilySpec::Whm { k: 3, p: 2 }, t(&[&[117, 117, 4680]])),
        (8, mp(2, 2, 2), t(&[&[1, 2], &[13, 21], &[13, 27], &[17, 175], &[45, 123]])),
        (8, mp(3, 2, 2), t(&[&[2, 4, 51], &[3, 40, 71], &[5, 12, 23], &[7, 116, 303]])),
        (8, mp(3, 2, 3), t(&[&[1, 81, 148], &[10, 94, 164], &[10, 164, 418]])),
        (8, mp(4, 3, 3), t(&[&[1, 4, 5, 9]])),
        (8, mp(4, 3, 4), t(&[&[2, 49, 56, 118], &[2, 84, 121, 141], &[7, 35, 51, 75]])),
    ]
}

/// A Table 1 row with its seeds expanded to integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedFixture {
    pub alphas: Vec<u64>,
    pub ns: Vec<u64>,
    pub target: Rational,
    pub a: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableFixture {
    pub table: u8,
    pub spec: FamilySpec,
    pub tuple: Vec<u64>,
    /// Present for Table 1 rows only.
    pub seed: Option<SeedFixture>,
}

fn expand(s: &str) -> u64 {
    s.parse::<Factorization>()
        .unwrap_or_else(|e| panic!("table fixture {s}: {e}"))
        .value()
}

/// Every row of Tables 1–8 in printed order.
pub fn table_fixtures() -> Vec<TableFixture> {
    let mut out: Vec<TableFixture> = TABLE1
        .iter()
        .map(|r| TableFixture {
            table: 1,
            spec: FamilySpec::Multiamicable { alphas: r.alphas.to_vec() },
            tuple: r.tuple.to_vec(),
            seed: Some(SeedFixture {
                alphas: r.alphas.to_vec(),
                ns: vec![expand(r.n1), expand(r.n2)],
                target: r.target.parse().expect("table target"),
                a: expand(r.a),
            }),
        })
        .collect();
    for (table, spec, tuples) in plain_tables() {
        for tuple in tuples {
            out.push(TableFixture { table, spec: spec.clone(), tuple, seed: None });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub table: u8,
    pub spec: FamilySpec,
    pub tuple: Vec<u64>,
    pub sigmas: Vec<u64>,
    pub passed: bool,
    /// The failing relation, when the row does not verify.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub passed: usize,
    pub failed: usize,
}

impl TableReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// Row counts per table, indexed 1..=8.
    pub fn counts(&self) -> [usize; 9] {
        let mut c = [0; 9];
        for r in &self.rows {
            c[r.table as usize] += 1;
        }
        c
    }
}

fn check_seed(seed: &SeedFixture, tuple: &[u64]) -> Option<String> {
    let products: Option<Vec<u64>> = seed.ns.iter().map(|&n| n.checked_mul(seed.a)).collect();
    if products.as_deref() != Some(tuple) {
        return Some(format!("a·N = {products:?} differs from printed {tuple:?}"));
    }
    match abundancy(seed.a) {
        Ok(r) if r == seed.target => {}
        Ok(r) => return Some(format!("σ(a)/a = {r}, printed {}", seed.target)),
        Err(e) => return Some(e.to_string()),
    }
    for &n in &seed.ns {
        if gcd_list(&[seed.a, n]).ok() != Some(1) {
            return Some(format!("gcd({}, {n}) ≠ 1", seed.a));
        }
    }
    let sigmas: Result<Vec<u64>, _> = seed.ns.iter().map(|&n| crate::arith::sigma(n)).collect();
    let sigmas = match sigmas {
        Ok(s) => s,
        Err(e) => return Some(e.to_string()),
    };
    if sigmas.windows(2).any(|w| w[0] != w[1]) {
        return Some(format!("seed σ values differ: {sigmas:?}"));
    }
    let weighted: u64 = seed.alphas.iter().zip(&seed.ns).map(|(a, n)| a * n).sum();
    match Rational::new(weighted, sigmas[0]) {
        Ok(t) if t == seed.target => None,
        Ok(t) => Some(format!("seed ratio {t}, printed {}", seed.target)),
        Err(e) => Some(e.to_string()),
    }
}

/// Checks every embedded row by exact arithmetic.
pub fn verify_tables() -> TableReport {
    let rows: Vec<TableRow> = table_fixtures()
        .into_iter()
        .map(|f| {
            let (sigmas, mut detail) = match families::check_as(&f.spec, &f.tuple, Provenance::Table) {
                Ok(CheckOutcome::Member(r)) => (r.sigmas, None),
                Ok(CheckOutcome::Mismatch(m)) => (m.sigmas, Some(m.violation.to_string())),
                Err(e) => (Vec::new(), Some(e.to_string())),
            };
            if detail.is_none() {
                if let Some(seed) = &f.seed {
                    detail = check_seed(seed, &f.tuple);
                }
            }
            TableRow {
                table: f.table,
                spec: f.spec,
                tuple: f.tuple,
                sigmas,
                passed: detail.is_none(),
                detail,
            }
        })
        .collect();
    let passed = rows.iter().filter(|r| r.passed).count();
    let failed = rows.len() - passed;
    TableReport { rows, passed, failed }
}
