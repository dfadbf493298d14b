use std::fmt::Write as _;
use std::time::Instant;

use amiforge::arith::{Factorization, SigmaSieve};
use amiforge::construct::{self, ConstructError, ConstructedTuple, MultiplierIndex};
use amiforge::density::{self, DensityError};
use amiforge::families::{self, CheckOutcome, FamilyKind, FamilyParams, FamilySpec};
use amiforge::search::{self, SearchConfig, SearchError, SearchReport};
use serde_json::json;

use crate::output::{emit, join, CliError, Rendered};
use crate::{Cli, Command, DensityCommand, FamilyArgs, Global};

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Internal(_) => CliError::Failure(e.to_string()),
            _ => usage(e),
        }
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::Internal(_) => CliError::Failure(e.to_string()),
            _ => usage(e),
        }
    }
}

impl From<DensityError> for CliError {
    fn from(e: DensityError) -> Self {
        usage(e)
    }
}

fn parse_number(item: &str) -> Result<u64, CliError> {
    let item = item.trim();
    if item.bytes().all(|b| b.is_ascii_digit()) && !item.is_empty() {
        return item.parse().map_err(|_| usage(format!("{item:?} does not fit in 64 bits")));
    }
    item.parse::<Factorization>().map(|f| f.value()).map_err(usage)
}

/// Comma-separated decimal integers or prime-power products.
pub fn parse_list(s: &str) -> Result<Vec<u64>, CliError> {
    if s.trim().is_empty() {
        return Err(usage("empty list"));
    }
    s.split(',').map(parse_number).collect()
}

fn takes_k(kind: FamilyKind) -> bool {
    !matches!(
        kind,
        FamilyKind::AmicablePair
            | FamilyKind::Perfect
            | FamilyKind::AmicableNumber
            | FamilyKind::CohenPair
            | FamilyKind::AlphaBeta
            | FamilyKind::Multiamicable
    )
}

/// Resolves a family from flags; `default_k` fills k for families that take it.
fn resolve_spec(args: &FamilyArgs, default_k: usize) -> Result<FamilySpec, CliError> {
    let kind: FamilyKind = args.family.parse().map_err(usage)?;
    let mut alphas = args.alphas.as_deref().map(parse_list).transpose()?;
    match (args.alpha, args.beta) {
        (None, None) => {}
        (Some(a), Some(b)) if alphas.is_none() => alphas = Some(vec![a, b]),
        (Some(_), Some(_)) => return Err(usage("give either --alphas or --alpha/--beta")),
        _ => return Err(usage("--alpha and --beta go together")),
    }
    let k = args.k.or((takes_k(kind)).then_some(default_k));
    let params = FamilyParams { k, p: args.p, q: args.q, alphas };
    FamilySpec::from_params(kind, &params).map_err(usage)
}

fn workers(global: &Global) -> Result<usize, CliError> {
    match global.workers {
        Some(0) => Err(usage("workers must be at least 1")),
        Some(w) => Ok(w),
        None => Ok(search::default_workers()),
    }
}

fn sieve_for(global: &Global, needed: u64) -> Result<SigmaSieve, CliError> {
    if needed > global.sieve_limit {
        return Err(usage(format!(
            "this command needs σ up to {needed}, above the sieve limit {}; raise --sieve-limit or AMIFORGE_SIEVE_LIMIT",
            global.sieve_limit
        )));
    }
    SigmaSieve::build(needed.max(1)).map_err(usage)
}

fn tuple_csv_row(out: &mut String, tuple: &[u64], sigmas: &[u64], spec: &FamilySpec) {
    let _ = writeln!(out, "{};{};{};{}", join(tuple), join(sigmas), spec.kind(), spec.params_string());
}

fn report_csv(report: &SearchReport) -> String {
    let mut csv = String::from("tuple;sigmas;family;params\n");
    for r in &report.records {
        tuple_csv_row(&mut csv, &r.tuple, &r.sigmas, &r.spec);
    }
    csv
}

fn report_json(report: &SearchReport) -> serde_json::Value {
    json!({
        "spec": report.spec,
        "limit": report.limit,
        "count": report.records.len(),
        "scanned": report.scanned,
        "records": report.records,
    })
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let started = Instant::now();
    let global = &cli.global;
    let (name, rendered) = match &cli.command {
        Command::Sieve { limit } => ("sieve", sieve(global, *limit)?),
        Command::Check { family, tuple } => ("check", check(family, tuple)?),
        Command::Search { family, limit } => ("search", run_search(global, family, *limit)?),
        Command::Construct { alphas, ns, seed_limit, a_bound } => {
            ("construct", run_construct(global, alphas, ns.as_deref(), *seed_limit, *a_bound)?)
        }
        Command::Density { which } => ("density", run_density(global, which)?),
        Command::ScanQuestion { limit } => ("scan-question", scan_question(global, *limit)?),
        Command::Census { alphas, limits } => ("census", census(global, alphas, limits)?),
        Command::VerifyTables => ("verify-tables", verify_tables()?),
    };
    emit(global, name, &rendered, started.elapsed())?;
    Ok(rendered.exit)
}

fn sieve(global: &Global, limit: u64) -> Result<Rendered, CliError> {
    if limit == 0 {
        return Err(usage("limit must be at least 1"));
    }
    let s = sieve_for(global, limit)?;
    let mut csv = Vec::new();
    s.write_csv(&mut csv)?;
    let values: Vec<_> = s.values().iter().enumerate().map(|(i, &v)| json!({"n": i + 1, "sigma": v})).collect();
    Rendered::new(json!({ "limit": limit }), values, String::from_utf8(csv).expect("ascii csv"))
}

fn check(args: &FamilyArgs, tuple: &str) -> Result<Rendered, CliError> {
    let tuple = parse_list(tuple)?;
    let spec = resolve_spec(args, tuple.len())?;
    let outcome = families::check(&spec, &tuple).map_err(usage)?;
    let mut csv = String::from("tuple;sigmas;family;params;member;detail\n");
    let (sigmas, member, detail) = match &outcome {
        CheckOutcome::Member(r) => (r.sigmas.clone(), true, None),
        CheckOutcome::Mismatch(m) => (m.sigmas.clone(), false, Some(m.violation.clone())),
    };
    let _ = writeln!(
        csv,
        "{};{};{};{};{};{}",
        join(&tuple),
        join(&sigmas),
        spec.kind(),
        spec.params_string(),
        member,
        detail.as_ref().map(ToString::to_string).unwrap_or_default()
    );
    let results = json!({
        "member": member,
        "tuple": tuple,
        "sigmas": sigmas,
        "violation": detail,
        "detail": detail.as_ref().map(ToString::to_string),
    });
    Rendered::new(json!({ "spec": spec }), results, csv)
}

fn run_search(global: &Global, args: &FamilyArgs, limit: u64) -> Result<Rendered, CliError> {
    let spec = resolve_spec(args, 2)?;
    let workers = workers(global)?;
    if limit == 0 {
        return Err(usage("limit must be at least 1"));
    }
    let s = sieve_for(global, limit)?;
    let report = search::enumerate(&SearchConfig::new(spec.clone(), limit, &s).with_workers(workers))?;
    Rendered::new(
        json!({ "spec": spec, "limit": limit, "workers": workers }),
        report_json(&report),
        report_csv(&report),
    )
}

fn run_construct(
    global: &Global,
    alphas: &str,
    ns: Option<&str>,
    seed_limit: Option<u64>,
    a_bound: u64,
) -> Result<Rendered, CliError> {
    let alphas = parse_list(alphas)?;
    if a_bound == 0 {
        return Err(usage("a-bound must be at least 1"));
    }
    let built: Vec<ConstructedTuple> = match (ns, seed_limit) {
        (Some(ns), None) => construct::construct_multiamicable(&alphas, &parse_list(ns)?, a_bound)?,
        (None, Some(limit)) => {
            let s = sieve_for(global, limit)?;
            let seeds = construct::find_seed_tuples(&s, &alphas, limit)?;
            let index = MultiplierIndex::build(a_bound)?;
            let mut all = Vec::new();
            for seed in &seeds {
                all.extend(index.construct(seed)?);
            }
            all.sort_by(|a, b| (&a.tuple, a.a).cmp(&(&b.tuple, b.a)));
            all
        }
        _ => return Err(usage("construct needs exactly one of --ns or --seed-limit")),
    };
    let mut csv = String::from("alphas;ns;target;a;tuple\n");
    for c in &built {
        let _ = writeln!(csv, "{};{};{};{};{}", join(&c.seed.alphas), join(&c.seed.ns), c.seed.target, c.a, join(&c.tuple));
    }
    Rendered::new(
        json!({ "alphas": alphas, "ns": ns.map(parse_list).transpose()?, "seed_limit": seed_limit, "a_bound": a_bound }),
        json!({ "count": built.len(), "tuples": built }),
        csv,
    )
}

fn run_density(global: &Global, which: &DensityCommand) -> Result<Rendered, CliError> {
    match which {
        DensityCommand::Amicable { checkpoints } => {
            let xs = parse_list(checkpoints)?;
            let s = sieve_for(global, *xs.iter().max().expect("non-empty"))?;
            let count = density::count_amicable(&s, &xs)?;
            let mut csv = Vec::new();
            count.series.write_csv(&mut csv, Some(density::pomerance_bound))?;
            Rendered::new(json!({ "which": "amicable", "checkpoints": xs }), &count, String::from_utf8(csv).expect("ascii"))
        }
        DensityCommand::Multi { alpha, beta, checkpoints } => {
            let xs = parse_list(checkpoints)?;
            let s = sieve_for(global, *xs.iter().max().expect("non-empty"))?;
            let count = density::count_multiamicable_pairs(&s, *alpha, *beta, &xs)?;
            let mut csv = Vec::new();
            count.series.write_csv(&mut csv, None)?;
            Rendered::new(
                json!({ "which": "multi", "alpha": alpha, "beta": beta, "checkpoints": xs }),
                &count,
                String::from_utf8(csv).expect("ascii"),
            )
        }
        DensityCommand::Lemma { k, checkpoints } => {
            let xs = parse_list(checkpoints)?;
            let ks = parse_list(k)?;
            let s = sieve_for(global, *xs.iter().max().expect("non-empty"))?;
            let mut reports = Vec::new();
            let mut csv = String::from("x,k,lhs,rhs,margin,holds,exact\n");
            for &k in &ks {
                let k = u32::try_from(k).map_err(|_| usage("k is too large"))?;
                for &x in &xs {
                    let r = density::lemma_sum_check(&s, x, k)?;
                    let _ = writeln!(csv, "{},{},{},{},{},{},{}", r.x, r.k, r.lhs, r.rhs, r.margin, r.holds, r.exact);
                    reports.push(r);
                }
            }
            Rendered::new(json!({ "which": "lemma", "k": ks, "checkpoints": xs }), reports, csv)
        }
        DensityCommand::Pomerance { checkpoints } => {
            let xs = parse_list(checkpoints)?;
            let s = sieve_for(global, *xs.iter().max().expect("non-empty"))?;
            let rows = density::pomerance_curve(&s, &xs)?;
            let mut csv = Vec::new();
            density::write_pomerance_csv(&rows, &mut csv)?;
            Rendered::new(json!({ "which": "pomerance", "checkpoints": xs }), rows, String::from_utf8(csv).expect("ascii"))
        }
    }
}

fn scan_question(global: &Global, limit: u64) -> Result<Rendered, CliError> {
    if limit == 0 {
        return Err(usage("limit must be at least 1"));
    }
    let s = sieve_for(global, limit)?;
    let report = search::scan_open_question(&s, limit)?;
    let mut results = report_json(&report);
    results["range"] = json!({ "m_min": 1, "n_max": limit });
    Rendered::new(json!({ "limit": limit }), results, report_csv(&report))
}

fn census(global: &Global, alphas: &str, limits: &str) -> Result<Rendered, CliError> {
    let alphas = parse_list(alphas)?;
    let limits = parse_list(limits)?;
    let workers = workers(global)?;
    let top = *limits.iter().max().expect("non-empty");
    let s = sieve_for(global, top)?;
    let rows = search::conjecture_census(&s, &alphas, &limits, workers)?;
    let mut csv = String::from("limit,count\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{}", r.limit, r.count);
    }
    Rendered::new(json!({ "alphas": alphas, "limits": limits }), rows, csv)
}

fn verify_tables() -> Result<Rendered, CliError> {
    let report = search::verify_tables();
    let mut csv = String::from("table;tuple;sigmas;family;params;passed;detail\n");
    for r in &report.rows {
        let _ = writeln!(
            csv,
            "{};{};{};{};{};{};{}",
            r.table,
            join(&r.tuple),
            join(&r.sigmas),
            r.spec.kind(),
            r.spec.params_string(),
            r.passed,
            r.detail.clone().unwrap_or_default()
        );
    }
    let mut out = Rendered::new(json!({}), &report, csv)?;
    if !report.all_passed() {
        eprintln!("amiforge: {} of {} table rows failed", report.failed, report.rows.len());
        out.exit = 1;
    }
    Ok(out)
}
