//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use smalldiv::arithfn::{sigma_small_2, HurwitzTable};
use smalldiv::characters::DirichletCharacter;
use smalldiv::exactnum::{int, CyclotomicNumber, Rational};
use smalldiv::report::VerificationReport;
use smalldiv::suite::{run_identity, IdentityOptions, RunConfig};

struct Outcome {
    ok: bool,
    detail: String,
}

fn chr(s: &str) -> DirichletCharacter {
    s.parse().unwrap()
}

fn summarize(reports: &[VerificationReport]) -> Outcome {
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    if failed.is_empty() {
        let cov: Vec<_> = reports.iter().map(|r| r.coverage.as_str()).collect();
        Outcome {
            ok: true,
            detail: format!("{} reports; {}", reports.len(), cov.join("; ")),
        }
    } else {
        Outcome {
            ok: false,
            detail: format!(
                "{} of {} reports fail; first: {}",
                failed.len(),
                reports.len(),
                failed[0].to_string().replace('\n', " | ")
            ),
        }
    }
}

fn run(cfg: &RunConfig, name: &str) -> Vec<VerificationReport> {
    run_identity(name, cfg, &IdentityOptions::default()).expect("known identity")
}

/// `sum_t H(4n - t^2) = 2 sigma(n) - sum_{d | n} min(d, n/d)`, a check on the
/// class-number table that does not go through form enumeration.
fn class_number_relation(table: &HurwitzTable, upto: u64) -> Option<u64> {
    for n in 1..=upto {
        let mut lhs = Rational::from_integer(0.into());
        let mut t: i64 = 0;
        while (t * t) as u64 <= 4 * n {
            let h = table.get(4 * n - (t * t) as u64);
            lhs += if t == 0 { h } else { h * int(2) };
            t += 1;
        }
        let (mut sigma, mut lambda) = (0u64, 0u64);
        for d in 1..=n {
            if n % d == 0 {
                sigma += d;
                lambda += d.min(n / d);
            }
        }
        if lhs != int(2 * sigma as i64 - lambda as i64) {
            return Some(n);
        }
    }
    None
}

fn criterion1(cfg: &RunConfig) -> Outcome {
    let mut reports = run(&RunConfig { prec: Some(800), ..cfg.clone() }, "hurwitz");
    let one = DirichletCharacter::one();
    let psi = chr("kronecker:-4");
    let s8 = sigma_small_2(&one, &psi, 8).unwrap();
    let s16 = sigma_small_2(&one, &psi, 16).unwrap();
    if s8 != CyclotomicNumber::from_int(-4) || s16 != CyclotomicNumber::from_int(4) {
        reports.push(VerificationReport::new("anchors").fail_at("n = 1, 2", "-4, 4", format!("{s8}, {s16}")));
    }
    let table = HurwitzTable::new(800);
    if let Some(n) = class_number_relation(&table, 200) {
        reports.push(VerificationReport::new("class-number relation").fail_at(format!("n = {n}"), "equal", "differ"));
    }
    summarize(&reports)
}

fn criterion3(cfg: &RunConfig) -> Outcome {
    let reports = run(&RunConfig { prec: Some(2000), ..cfg.clone() }, "congruence");
    let mut out = summarize(&reports);
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| {
            let p = |k: &str| r.parameters.get(k).cloned().unwrap_or_default();
            format!("chi={} p={} a={} b={}", p("chi"), p("p"), p("a"), p("b"))
        })
        .collect();
    if !bad.is_empty() {
        out.detail = format!("{}; failing: {}", out.detail, bad.join(", "));
    }
    out
}

fn criterion6(cfg: &RunConfig) -> Outcome {
    // tau = i at 1e-8 and tau = 2i at 1e-10, quadrature 1e-10
    let cfg = RunConfig {
        tol: 1e-8,
        quad_tol: 1e-10,
        ..cfg.clone()
    };
    let mut reports = run(&cfg, "prop-ii");
    reports.extend(run(&RunConfig { prec: Some(50), ..cfg.clone() }, "laurent"));
    let mut out = summarize(&reports);
    let res: Vec<String> = reports
        .iter()
        .filter_map(|r| r.residual.map(|v| format!("{} residual {v:.2e}", r.parameters.get("tau").cloned().unwrap_or_default())))
        .collect();
    let d1: Vec<&String> = reports.iter().flat_map(|r| r.notes.iter()).filter(|n| n.starts_with("D_1")).collect();
    out.detail = format!("{}; {:?}", res.join(", "), d1);
    out
}

fn criterion9(cfg: &RunConfig) -> Outcome {
    let cfg = RunConfig {
        tol: 1e-8,
        quad_tol: 1e-10,
        ..cfg.clone()
    };
    let mut reports = run(&cfg, "lipschitz");
    reports.extend(run(&cfg, "gamma-recurrence"));
    reports.extend(run(&cfg, "eichler"));
    let mut out = summarize(&reports);
    if out.ok {
        let worst = reports.iter().filter_map(|r| r.residual).fold(0.0, f64::max);
        out.detail = format!("{} reports, worst residual {worst:.2e}", reports.len());
    }
    out
}

fn line(n: u32, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if let Some(b) = budget {
        if took > b {
            o.ok = false;
            o.detail = format!("over time budget {b:?}; {}", o.detail);
        }
    }
    println!(
        "{} criterion {n} ({:.1}s): {}",
        if o.ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        o.detail
    );
    o.ok
}

fn main() -> ExitCode {
    let cfg = RunConfig::default();
    let with_prec = |p: i64| RunConfig { prec: Some(p), ..cfg.clone() };
    let mut ok = vec![line(1, Some(Duration::from_secs(10)), || criterion1(&cfg))];
    ok.push(line(2, Some(Duration::from_secs(30)), || summarize(&run(&with_prec(2000), "holoproj"))));
    ok.push(line(3, Some(Duration::from_secs(120)), || criterion3(&cfg)));
    ok.push(line(4, Some(Duration::from_secs(60)), || summarize(&run(&with_prec(300), "alprop"))));
    ok.push(line(5, None, || summarize(&run(&with_prec(100), "partial-theta"))));
    ok.push(line(6, None, || criterion6(&cfg)));
    ok.push(line(7, None, || {
        let mut r = run(&with_prec(20), "triple-product");
        r.extend(run(&with_prec(20), "elliptic"));
        summarize(&r)
    }));
    ok.push(line(8, None, || summarize(&run(&cfg, "jacobi-poly"))));
    ok.push(line(9, None, || criterion9(&cfg)));
    // the modularity statements are accepted through their coefficient-level surrogates
    let surrogate = [ok[1], ok[5], ok[8]];
    ok.push(line(10, None, || Outcome {
        ok: surrogate.iter().all(|&b| b),
        detail: format!("surrogates for criteria 2, 6, 9: {surrogate:?}"),
    }));
    if ok.iter().all(|&b| b) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
