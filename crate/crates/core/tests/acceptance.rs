//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always show; the process fails if any criterion does.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive};
use pillai_core::contfrac::{convergents, determinants, Tau};
use pillai_core::linforms::{compute_bound_chain, Base, BoundChain, Campaign, Sign};
use pillai_core::realnum::{height_from_minpoly, PrecisionPolicy};
use pillai_core::recurrences::{binet_enclosure, growth_bounds_report, terms_upto, SequenceKind};
use pillai_core::reduction::soundness::{scan_report, SCAN_LIMIT};
use pillai_core::reduction::{run_reduction, CampaignReport, ReductionContext, ReductionSummary};

const SEARCH_LIMIT: Duration = Duration::from_secs(5);
const CF_LIMIT: Duration = Duration::from_secs(10);
const CHAIN_LIMIT: Duration = Duration::from_secs(1);
const GRID_LIMIT: Duration = Duration::from_secs(600);
const VERIFY_LIMIT: Duration = Duration::from_secs(900);
const CHAIN_TOLERANCE: f64 = 0.05;
const BOUND_SLACK: u64 = 5;
const HEIGHT_RANGE: (f64, f64) = (1.195, 1.215);
/// Stride through the large grid for the certified small-multiplier scan.
const GRID_SCAN_STRIDE: usize = 401;

const VALUES: [i64; 35] = [
    -226, -82, -52, -30, -27, -18, -9, -6, -5, -4, -3, -1, 0, 1, 2, 3, 4, 6, 7, 8, 10, 11, 13, 15, 16, 20, 25, 31, 32,
    36, 44, 52, 62, 111, 262,
];
const CF_PREFIX: [u64; 20] = [1, 1, 2, 2, 6, 2, 1, 2, 1, 2, 1, 1, 11, 1, 2, 3, 1, 7, 37, 4];
const CONVERGENT_P: &str = "78093067704223831799032754534503501859635391435517";
const CONVERGENT_Q: &str = "45634243076387457097046528084208490147594968308975";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn pillai(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_pillai")).args(args).env_remove("PILLAI_PRECISION_BITS").output().unwrap()
}

fn representations() -> Outcome {
    let fixture = include_str!("fixtures/representations.csv");
    let t = Instant::now();
    let o = pillai(&["search", "--m-max", "189", "--n-max", "300", "--min-reps", "2", "--format", "csv"]);
    let dt = t.elapsed();
    let text = String::from_utf8_lossy(&o.stdout);
    let rows = text.lines().count().saturating_sub(1);
    let same = o.status.success() && text == fixture;
    outcome(
        same && rows == 35 && dt < SEARCH_LIMIT,
        format!("{rows} rows, byte-identical: {same}, {} (limit {})", secs(dt), secs(SEARCH_LIMIT)),
    )
}

fn value_list() -> Outcome {
    let o = pillai(&["search", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap_or_default();
    let mut got: Vec<i64> =
        v.as_array().map(|a| a.iter().filter_map(|r| r["c"].as_str()?.parse().ok()).collect()).unwrap_or_default();
    got.sort_unstable();
    let missing: Vec<i64> = VALUES.iter().copied().filter(|c| !got.contains(c)).collect();
    let extra: Vec<i64> = got.iter().copied().filter(|c| !VALUES.contains(c)).collect();
    outcome(got == VALUES, format!("{} values; missing {missing:?}, unexpected {extra:?}", got.len()))
}

fn continued_fraction() -> Outcome {
    let t = Instant::now();
    let pq = match Tau::DeltaOverAlpha.expand(110, PrecisionPolicy::fixed(512)) {
        Ok(pq) => pq,
        Err(e) => return outcome(false, e.to_string()),
    };
    let dt = t.elapsed();
    let prefix: Vec<u64> = pq.quotients.iter().take(20).map(|q| q.to_u64().unwrap_or(0)).collect();
    let convs = convergents(&pq);
    let (p, q): (BigInt, BigInt) = (CONVERGENT_P.parse().unwrap(), CONVERGENT_Q.parse().unwrap());
    let at = convs.iter().position(|c| c.p == p && c.q == q);
    let ok = prefix == CF_PREFIX && at.is_some() && dt < CF_LIMIT;
    outcome(
        ok,
        format!(
            "prefix matches: {}, 50-digit convergent at index {at:?}, {} at 512 bits (limit {})",
            prefix == CF_PREFIX,
            secs(dt),
            secs(CF_LIMIT)
        ),
    )
}

fn chain_row(chain: &BoundChain, key: &str) -> f64 {
    chain.row(key).map_or(f64::NAN, |r| r.value.hi().to_f64())
}

fn matveev_chain() -> (Outcome, Option<BoundChain>) {
    let t = Instant::now();
    let chain = match compute_bound_chain(PrecisionPolicy::default()) {
        Ok(c) => c,
        Err(e) => return (outcome(false, e.to_string()), None),
    };
    let dt = t.elapsed();
    let targets = [("lambda", 8.45e13), ("case1", 2.96e27), ("case2", 1.97e27), ("final", 2.08e41)];
    let mut ok = dt < CHAIN_LIMIT;
    let mut parts = Vec::new();
    for (key, want) in targets {
        let got = chain_row(&chain, key);
        let dev = got / want - 1.0;
        ok &= dev.abs() <= CHAIN_TOLERANCE;
        parts.push(format!("{key} {got:.4e} ({:+.2}%)", dev * 100.0));
    }
    let n = chain.n_absolute.to_f64().unwrap_or(f64::NAN);
    let dev = n / 2.83e47 - 1.0;
    ok &= dev.abs() <= CHAIN_TOLERANCE;
    parts.push(format!("N {n:.4e} ({:+.2}%)", dev * 100.0));
    (outcome(ok, format!("{}; {} (limit {})", parts.join(", "), secs(dt), secs(CHAIN_LIMIT))), Some(chain))
}

fn find(reports: &[CampaignReport], sign: Sign, base: Base) -> Option<&CampaignReport> {
    reports.iter().find(|r| r.sign == sign && r.base == base)
}

fn all_positive(r: &CampaignReport) -> bool {
    r.entries.iter().all(|e| e.epsilon.parse::<f64>().is_ok_and(|x| x > 0.0)) && !r.entries.is_empty()
}

fn reduction(chain: &BoundChain) -> (Outcome, Option<ReductionSummary>) {
    let policy = PrecisionPolicy::starting_at(512);
    let t = Instant::now();
    let s = match run_reduction(chain, policy) {
        Ok(s) => s,
        Err(e) => return (outcome(false, e.to_string()), None),
    };
    let dt = t.elapsed();
    let checks: [(&str, Option<&CampaignReport>, u64); 10] = [
        ("gamma+/delta", find(&s.gamma, Sign::Pos, Base::Delta), 250),
        ("gamma+/alpha", find(&s.gamma, Sign::Pos, Base::Alpha), 420),
        ("gamma-/delta", find(&s.gamma, Sign::Neg, Base::Delta), 242),
        ("gamma-/alpha", find(&s.gamma, Sign::Neg, Base::Alpha), 406),
        ("gamma1+", find(&s.gamma1, Sign::Pos, Base::Alpha), 446),
        ("gamma1-", find(&s.gamma1, Sign::Neg, Base::Alpha), 429),
        ("gamma2+", find(&s.gamma2, Sign::Pos, Base::Delta), 263),
        ("gamma2-", find(&s.gamma2, Sign::Neg, Base::Delta), 263),
        ("gamma3+", find(&s.gamma3, Sign::Pos, Base::Delta), 274),
        ("gamma3-", find(&s.gamma3, Sign::Neg, Base::Delta), 274),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, r, reference) in checks {
        match r {
            Some(r) => {
                let good = all_positive(r) && r.max_k_bound <= reference + BOUND_SLACK;
                ok &= good;
                parts.push(format!("{name} {}/{reference}", r.max_k_bound));
            }
            None => {
                ok = false;
                parts.push(format!("{name} missing"));
            }
        }
    }

    // the grid as printed, 1..264 x 1..446, on top of the derived one
    let t_grid = Instant::now();
    let grid = ReductionContext::new(chain, policy)
        .and_then(|ctx| ctx.run_both(Campaign::Gamma3, Base::Delta, Some((1, 264)), Some((1, 446))));
    let grid_dt = t_grid.elapsed();
    match grid {
        Ok(rs) => {
            let worst = rs.iter().map(|r| r.max_k_bound).max().unwrap_or(u64::MAX);
            ok &= rs.iter().all(all_positive) && worst <= 274 + BOUND_SLACK && grid_dt < GRID_LIMIT;
            parts.push(format!("264x446 grid {worst}/274 in {}", secs(grid_dt)));
        }
        Err(e) => {
            ok = false;
            parts.push(format!("264x446 grid failed: {e}"));
        }
    }
    parts.push(format!("final n < {}", s.final_n_bound));
    (outcome(ok, format!("{}; derived pipeline {}", parts.join(", "), secs(dt))), Some(s))
}

/// Roots of a real polynomial (coefficients low to high) by Durand-Kerner.
fn roots(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let eval = |x: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c / lead);
    let mut z: Vec<Complex64> = (0..d).map(|k| Complex64::new(0.4, 0.9).powu(k as u32)).collect();
    for _ in 0..500 {
        for i in 0..d {
            let denom = (0..d).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval(z[i]) / denom;
            z[i] -= step;
        }
    }
    z
}

fn height(chain: &BoundChain) -> Outcome {
    let minpoly = [-125.0, 0.0, -250.0, 0.0, -1265.0, 0.0, 529.0];
    let rs = roots(&minpoly);
    let oracle = (529f64.ln() + rs.iter().map(|z| z.norm().max(1.0).ln()).sum::<f64>()) / 6.0;
    let from_chain = &chain.h_sqrt5_a;
    let direct = height_from_minpoly(pillai_core::realnum::MINPOLY_SQRT5_A.as_ref(), 256);
    let inside = |x: f64| HEIGHT_RANGE.0 < x && x < HEIGHT_RANGE.1;
    let (lo, hi) = (from_chain.lo().to_f64(), from_chain.hi().to_f64());
    let mut ok = inside(lo) && inside(hi) && inside(oracle) && lo - 1e-9 <= oracle && oracle <= hi + 1e-9;
    if let Ok(d) = &direct {
        ok &= (d.to_f64() - from_chain.to_f64()).abs() < 1e-12;
    } else {
        ok = false;
    }
    outcome(ok, format!("certified [{lo:.6}, {hi:.6}], root-finding oracle {oracle:.6}, range {HEIGHT_RANGE:?}"))
}

fn property_suites(summary: Option<&ReductionSummary>) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;

    let p = terms_upto(SequenceKind::Padovan, 500);
    let identity = (5..=500).all(|m| &p[m] - &p[m - 1] == p[m - 5]);
    ok &= identity;
    parts.push(format!("difference identity to 500: {identity}"));

    let policy = PrecisionPolicy::default();
    let growth = growth_bounds_report(SequenceKind::Padovan, 4, 1000, policy).is_ok_and(|v| v.is_empty())
        && growth_bounds_report(SequenceKind::Fibonacci, 1, 1000, policy).is_ok_and(|v| v.is_empty());
    ok &= growth;
    parts.push(format!("growth to 1000: {growth}"));

    let (pp, ff) = (common::padovan(200), common::fibonacci(200));
    let binet = (0..=200u64).all(|k| {
        binet_enclosure(SequenceKind::Padovan, k, 128).is_ok_and(|e| e.contains_int(&pp[k as usize]))
            && binet_enclosure(SequenceKind::Fibonacci, k, 128).is_ok_and(|e| e.contains_int(&ff[k as usize]))
    });
    ok &= binet;
    parts.push(format!("Binet to 200: {binet}"));

    let dets = [Tau::DeltaOverAlpha, Tau::AlphaOverDelta].into_iter().all(|t| {
        t.expand(130, PrecisionPolicy::starting_at(512))
            .is_ok_and(|pq| determinants(&convergents(&pq)).iter().all(|d| d.abs().is_one()))
    });
    ok &= dets;
    parts.push(format!("determinants: {dets}"));

    match summary {
        Some(s) => {
            let mut certs = 0;
            let mut bad = 0;
            for r in s.reports() {
                let stride = if r.campaign == Campaign::Gamma3 { GRID_SCAN_STRIDE } else { 1 };
                match scan_report(r, SCAN_LIMIT, stride, 192) {
                    Ok(out) => {
                        certs += out.certificates;
                        bad += out.counterexamples.len() + out.undecided.len();
                    }
                    Err(_) => bad += 1,
                }
            }
            ok &= bad == 0;
            parts.push(format!("scan m <= {SCAN_LIMIT}: {certs} certificates, {bad} counterexamples or undecided"));
        }
        None => {
            ok = false;
            parts.push("scan: no reduction to scan".into());
        }
    }
    outcome(ok, parts.join(", "))
}

fn end_to_end() -> Outcome {
    let t = Instant::now();
    let o = pillai(&["verify"]);
    let dt = t.elapsed();
    let text = String::from_utf8_lossy(&o.stdout);
    let pass = o.status.code() == Some(0) && text.contains("theorem check pass") && dt < VERIFY_LIMIT;
    let first = text.lines().next().unwrap_or("").to_string();
    outcome(pass, format!("exit {:?}, {}; {first}", o.status.code(), secs(dt)))
}

fn main() {
    let mut results = Vec::new();
    let mut report = |n: usize, name: &str, o: Outcome| {
        println!("criterion {n} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push(o.pass);
    };
    report(1, "representation table", representations());
    report(2, "value list", value_list());
    report(3, "continued fraction", continued_fraction());
    let (o, chain) = matveev_chain();
    report(4, "bound chain", o);
    let summary = match &chain {
        Some(c) => {
            let (o, s) = reduction(c);
            report(5, "reduction campaigns", o);
            report(6, "height", height(c));
            s
        }
        None => {
            report(5, "reduction campaigns", outcome(false, "no bound chain"));
            report(6, "height", outcome(false, "no bound chain"));
            None
        }
    };
    report(7, "property suites", property_suites(summary.as_ref()));
    report(8, "end to end", end_to_end());
    let failed = results.iter().filter(|p| !**p).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
