//! Acceptance run: one line per criterion.
//!
//! Criterion 5 is expected to be red (see `lemma_bounds`): the k = 3 bound is
//! false above x = 23. The run checks that the counterexample reproduces and
//! fails only if some other criterion fails or that pattern changes.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use amiforge::arith::{Rational, SigmaSieve};
use amiforge::construct::{construct_multiamicable, find_multipliers, seed_ratio};
use amiforge::density::{count_amicable, count_multiamicable_pairs, lemma_rearranged, lemma_sum_check, lemma_sum_exact};
use amiforge::families::{self, FamilySpec};
use amiforge::search::{enumerate, scan_open_question, table_fixtures, verify_tables, SearchConfig, SearchReport};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;

struct Line {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Option<Duration>,
    /// A failure that has been analysed and is asserted to reproduce.
    expected_red: bool,
}

fn timed<F: FnOnce() -> (bool, String)>(id: u8, name: &'static str, budget: Option<u64>, f: F) -> Line {
    let started = Instant::now();
    let (ok, detail) = f();
    let elapsed = started.elapsed();
    let budget = budget.map(Duration::from_secs);
    let in_time = budget.is_none_or(|b| elapsed < b);
    Line { id, name, pass: ok && in_time, detail, elapsed, budget, expected_red: false }
}

fn sieve(n: u64) -> SigmaSieve {
    SigmaSieve::build(n).expect("sieve")
}

fn run(spec: &FamilySpec, limit: u64, sieve: &SigmaSieve, workers: usize) -> SearchReport {
    enumerate(&SearchConfig::new(spec.clone(), limit, sieve).with_workers(workers)).expect("search")
}

/// Byte form of a report used for the determinism comparison.
fn fingerprint(r: &SearchReport) -> String {
    serde_json::to_string(&(&r.records, r.scanned)).expect("json")
}

fn table_verification() -> (bool, String) {
    let report = verify_tables();
    let counts = report.counts();
    let ok = report.all_passed() && counts == [0, 13, 5, 55, 15, 6, 23, 1, 16];
    (ok, format!("{} rows, {} failed, per table {:?}", report.rows.len(), report.failed, &counts[1..]))
}

fn table1_reconstruction() -> (bool, String) {
    let mut bad = Vec::new();
    let mut rows = 0;
    for f in table_fixtures().into_iter().filter(|f| f.table == 1) {
        rows += 1;
        let seed = f.seed.expect("table 1 seed");
        let st = seed_ratio(&seed.alphas, &seed.ns).expect("seed");
        let ms = find_multipliers(&st.target, 10_000, &seed.ns);
        let built = construct_multiamicable(&seed.alphas, &seed.ns, 10_000).expect("construct");
        let emitted = built.iter().any(|c| c.a == seed.a && c.tuple == f.tuple);
        if st.target != seed.target || !ms.contains(&seed.a) || !emitted {
            bad.push(f.tuple.clone());
        }
    }
    let shared = construct_multiamicable(&[1, 2], &[629, 683], 10_000).expect("construct");
    let both = [vec![543456, 590112], vec![588744, 639288]].iter().all(|t| shared.iter().any(|c| &c.tuple == t));
    (bad.is_empty() && both, format!("{rows} rows, rows 4-5 from one seed: {both}, mismatches {bad:?}"))
}

fn rediscovery_specs() -> Vec<FamilySpec> {
    let mut specs = vec![
        FamilySpec::Pm { k: 2, p: 1, q: 2 },
        FamilySpec::Hm { k: 2, p: 1, q: 2 },
        FamilySpec::Wpm { k: 2, p: 1 },
        FamilySpec::Gm { k: 2 },
        FamilySpec::Mp { k: 2, p: 2, q: 2 },
    ];
    // Every other k = 2 row printed in Tables 3-6 and 8 as well.
    for f in table_fixtures() {
        if matches!(f.table, 3..=6 | 8) && f.spec.k() == 2 && !specs.contains(&f.spec) {
            specs.push(f.spec);
        }
    }
    specs
}

fn rediscovery(s: &SigmaSieve) -> (bool, String) {
    let mut missing = Vec::new();
    let mut found = 0;
    let mut expected = 0;
    let fixtures = table_fixtures();
    for spec in rediscovery_specs() {
        let report = run(&spec, 1000, s, 4);
        let tuples = report.tuples();
        for f in fixtures.iter().filter(|f| f.spec == spec && f.tuple.iter().all(|&n| n <= 1000)) {
            expected += 1;
            if !tuples.contains(&f.tuple) {
                missing.push(format!("{spec} {:?}", f.tuple));
            }
        }
        for t in &tuples {
            if !families::is_member(&spec, t).expect("predicate") {
                missing.push(format!("{spec} {t:?} fails its predicate"));
            }
        }
        found += tuples.len();
    }
    (
        missing.is_empty(),
        format!("{expected} printed rows <= 10^3 all present among {found} tuples; problems {missing:?}"),
    )
}

fn oracle_equivalence(s: &SigmaSieve) -> (bool, String) {
    let specs = common::oracle_specs(3);
    let diffs: Vec<String> = specs
        .par_iter()
        .filter_map(|spec| {
            let fast = run(spec, 200, s, 2).tuples();
            let slow = common::brute_force(spec, 200);
            (fast != slow).then(|| format!("{spec}: {} vs {}", fast.len(), slow.len()))
        })
        .collect();
    (diffs.is_empty(), format!("{} family specs at limit 200, differences {diffs:?}", specs.len()))
}

/// Σ_{a,b,c <= x} ⌊x/lcm(a,b,c)⌋/(abc), the first equality of the k = 3
/// mean-value argument, evaluated exactly.
fn lcm_triple_sum(x: u64) -> BigRational {
    let mut acc = BigRational::from_integer(0.into());
    for a in 1..=x {
        for b in 1..=x {
            let ab = a.lcm(&b);
            for c in 1..=x {
                let l = ab.lcm(&c);
                let fl = x / l;
                if fl > 0 {
                    acc += BigRational::new(BigInt::from(fl), BigInt::from(a * b * c));
                }
            }
        }
    }
    acc
}

fn lemma_bounds() -> Line {
    let started = Instant::now();
    let s = sieve(100_000);
    let xs = [1u64, 10, 100, 1_000, 10_000, 100_000];
    let mut holds = Vec::new();
    let mut cells = Vec::new();
    for k in 1..=3u32 {
        for &x in &xs {
            let r = lemma_sum_check(&s, x, k).expect("lemma");
            assert!(r.exact);
            holds.push(((k, x), r.holds && r.margin > 0.0));
            if !r.holds {
                cells.push(format!("k={k} x={x}: {:.2} >= {:.2}", r.lhs, r.rhs));
            }
        }
    }
    let identity = xs.iter().all(|&x| lemma_sum_exact(&s, x, 1).expect("sum") == lemma_rearranged(x));
    let low_k = holds.iter().filter(|((k, _), _)| *k <= 2).all(|(_, h)| *h);
    let k3: Vec<bool> = holds.iter().filter(|((k, _), _)| *k == 3).map(|(_, h)| *h).collect();
    let all_hold = holds.iter().all(|(_, h)| *h);

    // The k = 3 failure, cross-checked by an independent formula.
    let r23 = lemma_sum_check(&s, 23, 3).expect("lemma");
    let r24 = lemma_sum_check(&s, 24, 3).expect("lemma");
    let exact24 = lemma_sum_exact(&s, 24, 3).expect("sum");
    let ours = BigRational::new(exact24.numer.into(), exact24.denom.into());
    let theirs = lcm_triple_sum(24);
    let bound24 = BigRational::from_float(r24.rhs + r24.rhs_error).expect("finite");
    let counterexample = ours == theirs && theirs > bound24 && r23.holds && !r24.holds;
    let pattern = low_k && identity && k3 == [true, true, false, false, false, false] && counterexample;

    let detail = format!(
        "k=1,2 hold at every x: {low_k}; k=1 rearrangement identical: {identity}; \
         k=3 fails at x >= 24 (checked by the lcm-triple sum at x=24: {counterexample}): {}",
        cells.join("; ")
    );
    Line {
        id: 5,
        name: "lemma bounds",
        pass: all_hold && identity,
        detail,
        elapsed: started.elapsed(),
        budget: None,
        expected_red: !all_hold && pattern,
    }
}

fn amicable_implications() -> (bool, String) {
    let s = sieve(10_000);
    let pairs = run(&FamilySpec::AmicablePair, 10_000, &s, 4).tuples();
    let mut exceptions = Vec::new();
    let mut checks = 0;
    for t in &pairs {
        let mut verdicts = vec![("gm", families::is_gm(t)), ("wgm", families::is_wgm(t)), ("feebly", families::is_feebly(t))];
        for p in 1..=3 {
            verdicts.push(("pm", families::is_pm(t, p, 2)));
            verdicts.push(("wpm", families::is_wpm(t, p)));
            verdicts.push(("hm", families::is_hm(t, p, 2)));
            verdicts.push(("whm", families::is_whm(t, p)));
        }
        for (name, v) in verdicts {
            checks += 1;
            if v != Ok(true) {
                exceptions.push(format!("{name} {t:?}"));
            }
        }
    }
    let proper = pairs.iter().filter(|t| t[0] != t[1]).count();
    (
        exceptions.is_empty() && proper == 5,
        format!("{} pairs ({proper} proper), {checks} checks, exceptions {exceptions:?}", pairs.len()),
    )
}

fn density_echo() -> (bool, String) {
    let s = sieve(100_000);
    let a = count_amicable(&s, &[1_000, 10_000, 100_000]).expect("count");
    let non_increasing = a.series.ratios.windows(2).all(|w| w[0] >= w[1]);
    let partners = a.members.iter().all(|&(n, m)| n != m && families::is_amicable_pair(n, m) == Ok(true));
    let m = count_multiamicable_pairs(&s, 1, 2, &[1_000, 2_000]).expect("count");
    let ratios: Vec<String> = a.series.ratios.iter().map(Rational::to_string).collect();
    (
        non_increasing && partners && m.series.counts == [0, 1],
        format!(
            "A = {:?}, A/x = {ratios:?}, partners verified: {partners}, M(1,2) = {:?}",
            a.series.counts, m.series.counts
        ),
    )
}

fn open_question() -> (bool, String) {
    let s = sieve(10_000);
    let r = scan_open_question(&s, 10_000).expect("scan");
    (r.records.is_empty(), format!("{} equal-σ pairs up to 10^4 examined, {} hits", r.scanned, r.records.len()))
}

fn determinism(s3: &SigmaSieve, s4: &SigmaSieve) -> (bool, String) {
    let mut jobs: Vec<(FamilySpec, u64, &SigmaSieve)> = rediscovery_specs().into_iter().map(|sp| (sp, 1000, s3)).collect();
    jobs.extend(common::oracle_specs(3).into_iter().map(|sp| (sp, 200, s4)));
    let differing: Vec<String> = jobs
        .iter()
        .filter_map(|(spec, limit, s)| {
            let prints: Vec<String> = [1, 2, 8].iter().map(|&w| fingerprint(&run(spec, *limit, s, w))).collect();
            (prints[0] != prints[1] || prints[0] != prints[2]).then(|| spec.to_string())
        })
        .collect();
    (differing.is_empty(), format!("{} reports compared at workers 1, 2, 8; differing {differing:?}", jobs.len()))
}

fn main() -> ExitCode {
    let s1000 = sieve(1000);
    let s200 = sieve(200);
    let lines = vec![
        timed(1, "table fixtures", Some(5), table_verification),
        timed(2, "table 1 reconstruction", Some(30), table1_reconstruction),
        timed(3, "search rediscovery", Some(60), || rediscovery(&s1000)),
        timed(4, "oracle equivalence", Some(600), || oracle_equivalence(&s200)),
        lemma_bounds(),
        timed(6, "amicable implications", None, amicable_implications),
        timed(7, "density echo", Some(120), density_echo),
        timed(8, "open-question scan", None, open_question),
        timed(9, "determinism", None, || determinism(&s1000, &s200)),
    ];
    let mut unexpected = 0;
    for l in &lines {
        let verdict = match (l.pass, l.expected_red) {
            (true, _) => "PASS",
            (false, true) => "FAIL (analysed, reproduces)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        let budget = l.budget.map(|b| format!(", budget {} s", b.as_secs())).unwrap_or_default();
        println!(
            "criterion {}: {verdict}: {} [{:.2} s{budget}] {}",
            l.id,
            l.name,
            l.elapsed.as_secs_f64(),
            l.detail
        );
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}
