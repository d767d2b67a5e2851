//! The aggregated verification suite: every identity harness under one name,
//! run with a shared configuration.

use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithfn::{padic_congruence_check, verify_hurwitz_identity};
use crate::characters::DirichletCharacter;
use crate::exactnum::{int, rat};
use crate::holoproj::{
    eichler_integral_check, incomplete_gamma_recurrence_residual, lipschitz_check, verify_euler_transformation,
    verify_gamma_integral, verify_jacobi_poly, verify_projection, ComplexPoint,
};
use crate::jacobi::{
    appell_lerch_numeric_check, appell_lerch_specialized, theta_reciprocal_laurent, verify_alprop, verify_elliptic,
    verify_partial_theta, verify_prop_ii, verify_triple_product, JacobiError, TorsionPoint,
};
use crate::report::VerificationReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(format!("unknown output format {s:?}")),
        }
    }
}

/// Shared settings. `prec = None` lets every harness use its own default.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub prec: Option<i64>,
    pub tol: f64,
    pub quad_tol: f64,
    pub seed: u64,
    pub threads: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prec: None,
            tol: 1e-8,
            quad_tol: 1e-10,
            seed: 20240101,
            threads: 0,
            format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if matches!(self.prec, Some(p) if p < 1) {
            return Err("--prec must be at least 1".into());
        }
        if !(self.tol > 0.0) {
            return Err("--tol must be positive".into());
        }
        if !(self.quad_tol > 0.0) {
            return Err("quadrature tolerance must be positive".into());
        }
        Ok(())
    }

    fn prec_or(&self, default: i64) -> i64 {
        self.prec.unwrap_or(default)
    }

    /// Runs `f` on a pool with `threads` workers (0 = rayon default).
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        if self.threads == 0 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.threads).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

/// Optional per-identity inputs; absent fields take the documented defaults.
#[derive(Clone, Debug, Default)]
pub struct IdentityOptions {
    pub chi: Option<DirichletCharacter>,
    pub psi: Option<DirichletCharacter>,
    pub tau: Option<ComplexPoint>,
    pub max_degree: Option<u64>,
    pub trials: Option<usize>,
}

/// Every identity known to `verify`, in suite order.
pub const IDENTITIES: &[&str] = &[
    "hurwitz",
    "holoproj",
    "congruence",
    "alprop",
    "partial-theta",
    "prop-ii",
    "laurent",
    "triple-product",
    "elliptic",
    "appell-lerch",
    "jacobi-poly",
    "euler-transformation",
    "lipschitz",
    "gamma-recurrence",
    "gamma-integral",
    "eichler",
];

fn chr(spec: &str) -> DirichletCharacter {
    spec.parse().expect("built-in character spec")
}

fn skipped(identity: &str, reason: impl ToString) -> VerificationReport {
    VerificationReport::new(identity).skipped(reason.to_string())
}

fn or_skip<E: ToString>(identity: &str, r: Result<VerificationReport, E>) -> VerificationReport {
    r.unwrap_or_else(|e| skipped(identity, e))
}

/// Pairs checked by the projection-defect harness when none is given.
pub fn default_projection_pairs() -> Vec<(DirichletCharacter, DirichletCharacter)> {
    let minus4 = chr("kronecker:-4");
    let k12 = chr("kronecker:12");
    vec![
        (DirichletCharacter::one(), minus4.clone()),
        (k12.clone(), minus4),
        (k12.clone(), chr("kronecker:-8")),
        (k12, chr("kronecker:-3")),
    ]
}

/// Runs one identity harness; several parameter sets give several reports.
pub fn run_identity(name: &str, cfg: &RunConfig, opts: &IdentityOptions) -> Result<Vec<VerificationReport>, String> {
    let reports = match name {
        "hurwitz" => vec![verify_hurwitz_identity(cfg.prec_or(800).max(8) as u64)],
        "holoproj" => {
            let pairs = match (&opts.chi, &opts.psi) {
                (Some(c), Some(p)) => vec![(c.clone(), p.clone())],
                (None, None) => default_projection_pairs(),
                _ => return Err("give both --chi and --psi, or neither".into()),
            };
            let prec = cfg.prec_or(2000);
            pairs
                .par_iter()
                .map(|(c, p)| or_skip("holoproj", verify_projection(c, p, prec)))
                .collect()
        }
        "congruence" => {
            let psi = opts.psi.clone().unwrap_or_else(|| chr("kronecker:-4"));
            let chis = match &opts.chi {
                Some(c) => vec![c.clone()],
                None => vec![DirichletCharacter::one(), chr("kronecker:12")],
            };
            let prec = cfg.prec_or(2000);
            let mut jobs = Vec::new();
            for chi in &chis {
                for p in [3u64, 5, 7] {
                    for a in 1..=2u32 {
                        for b in 1..=2u32 {
                            jobs.push((chi.clone(), p, a, b));
                        }
                    }
                }
            }
            jobs.par_iter()
                .map(|(chi, p, a, b)| or_skip("congruence", padic_congruence_check(&psi, chi, *p, *a, *b, prec)))
                .collect()
        }
        "alprop" => {
            let chi = opts.chi.clone().unwrap_or_else(|| chr("kronecker:8"));
            let psi = opts.psi.clone().unwrap_or_else(|| chr("kronecker:-4"));
            vec![or_skip("alprop", verify_alprop(&chi, &psi, cfg.prec_or(300)))]
        }
        "partial-theta" => vec![or_skip("partial-theta", verify_partial_theta(cfg.prec_or(100)))],
        "prop-ii" => {
            let points = match opts.tau {
                Some(t) => vec![(t, cfg.tol)],
                // the second point decays faster and meets a tighter bound
                None => vec![(ComplexPoint::new(0.0, 1.0), cfg.tol), (ComplexPoint::new(0.0, 2.0), cfg.tol * 1e-2)],
            };
            points
                .into_iter()
                .map(|(t, tol)| or_skip("prop-ii", verify_prop_ii(t, cfg.quad_tol, tol)))
                .collect()
        }
        "laurent" => vec![laurent_report(cfg.prec_or(50))],
        "triple-product" => vec![verify_triple_product(cfg.prec_or(20))],
        "elliptic" => {
            let prec = cfg.prec_or(20);
            [(0, 0), (0, 1), (1, 0), (1, 1)]
                .into_iter()
                .map(|(l, m)| verify_elliptic(l, m, prec))
                .collect()
        }
        "appell-lerch" => appell_lerch_reports(cfg),
        "jacobi-poly" => vec![verify_jacobi_poly(
            opts.max_degree.unwrap_or(10),
            opts.trials.unwrap_or(100),
            cfg.seed,
        )],
        "euler-transformation" => vec![verify_euler_transformation(
            opts.max_degree.unwrap_or(10),
            opts.trials.unwrap_or(20),
            cfg.seed,
        )],
        "lipschitz" => {
            let w = opts.tau.unwrap_or(ComplexPoint::new(0.3, 0.7));
            (2..=4)
                .map(|r| or_skip("lipschitz", lipschitz_check(w, r, 20_000, cfg.tol)))
                .collect()
        }
        "gamma-recurrence" => {
            let (worst, s, x) = incomplete_gamma_recurrence_residual();
            vec![VerificationReport::new("gamma-recurrence")
                .coverage("s = -2, -1.75, ..., 2; 40 log-spaced x in [0.1, 20]")
                .note(format!("worst at s = {s}, x = {x:.4}"))
                .with_residual(worst, cfg.tol.min(1e-10))]
        }
        "gamma-integral" => vec![or_skip("gamma-integral", verify_gamma_integral(cfg.quad_tol, cfg.tol))],
        "eichler" => {
            let chis = match &opts.chi {
                Some(c) => vec![c.clone()],
                None => vec![DirichletCharacter::one(), chr("kronecker:12")],
            };
            let taus = match opts.tau {
                Some(t) => vec![t],
                None => vec![ComplexPoint::new(0.0, 1.0), ComplexPoint::new(0.0, 2.0)],
            };
            let mut out = Vec::new();
            for chi in &chis {
                for &tau in &taus {
                    out.push(or_skip("eichler", eichler_integral_check(chi, tau, 200, cfg.quad_tol, cfg.tol)));
                }
            }
            out
        }
        other => return Err(format!("unknown identity {other:?}; known: {}", IDENTITIES.join(", "))),
    };
    Ok(reports)
}

fn laurent_report(prec: i64) -> VerificationReport {
    let report = VerificationReport::new("laurent").param("prec", prec);
    let l = match theta_reciprocal_laurent(2, prec) {
        Ok(l) => l,
        Err(e) => return report.skipped(e.to_string()),
    };
    let lead = l.d2.valuation().map(|v| (v, l.d2.den()));
    if lead != Some((-1, 4)) || l.d2.coeff(-1) != crate::exactnum::CyclotomicNumber::from_int(-1) {
        return report.fail_at("leading term of D_2", "-q^(-1/4)", format!("{}", l.d2.truncate(8)));
    }
    // D_2 is the inverse of the leading coefficient of theta^2
    let a1 = &l.theta_coeffs[1];
    let check = l.d2.mul(&a1.mul(a1)).scale_rational(&int(-1)).canonicalize();
    if check.nonzero_terms().any(|(e, c)| e != 0 || !c.is_one()) {
        return report.fail_at("D_2 (i a_1)^2", "1", format!("{}", check.truncate(8)));
    }
    let report = report.coverage(format!("D_1, D_2 below q^{prec}"));
    if l.d1.is_zero() {
        report.note(format!("D_1 = 0 below q^{prec}"))
    } else {
        report.note(format!("D_1 nonzero: {}", l.d1))
    }
}

/// A random torsion point with denominators up to 6.
fn random_torsion(rng: &mut StdRng) -> TorsionPoint {
    let mut r = || {
        let d = rng.random_range(1..=6i64);
        rat(rng.random_range(-2 * d..=2 * d), d)
    };
    TorsionPoint::new(r(), r())
}

fn appell_lerch_reports(cfg: &RunConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    // the integer shift w = 2 tau puts a pole at n = -2
    let w = TorsionPoint::new(int(2), int(0));
    let z = TorsionPoint::new(int(1), rat(1, 2));
    let pole = VerificationReport::new("appell-lerch").param("w", &w).param("z", &z);
    out.push(match appell_lerch_specialized(1, 0, &w, &z, &int(10)) {
        Err(JacobiError::PoleAtSpecialization(n)) => pole.coverage(format!("pole detected at n = {n}")),
        other => pole.fail_at("specialization", "PoleAtSpecialization", format!("{other:?}")),
    });
    let w = TorsionPoint::new(int(2), rat(1, 3));
    let tau = ComplexPoint::new(0.0, 0.5);
    out.push(numeric_al_report(1, 0, &w, &z, tau, cfg.tol.min(1e-9)));
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut done = 0;
    while done < 5 {
        let (w, z) = (random_torsion(&mut rng), random_torsion(&mut rng));
        let level = rng.random_range(1..=2i64);
        let j = rng.random_range(0..=2u32);
        if appell_lerch_specialized(level, j, &w, &z, &int(40)).is_err() {
            continue;
        }
        out.push(numeric_al_report(level, j, &w, &z, ComplexPoint::new(0.0, 0.4), cfg.tol.min(1e-9)));
        done += 1;
    }
    out
}

fn numeric_al_report(level: i64, j: u32, w: &TorsionPoint, z: &TorsionPoint, tau: ComplexPoint, tol: f64) -> VerificationReport {
    let report = VerificationReport::new("appell-lerch")
        .param("level", level)
        .param("j", j)
        .param("w", w)
        .param("z", z)
        .param("tau", tau);
    match appell_lerch_numeric_check(level, j, w, z, 40, tau) {
        Ok(r) => report.coverage("exact series to q^40 vs direct summation").with_residual(r, tol),
        Err(e) => report.skipped(e.to_string()),
    }
}

/// Every harness, in [`IDENTITIES`] order; the order and content of the
/// result depend only on `cfg`.
pub fn verify_all(cfg: &RunConfig) -> Vec<VerificationReport> {
    let opts = IdentityOptions::default();
    cfg.install(|| {
        IDENTITIES
            .par_iter()
            .map(|name| run_identity(name, cfg, &opts).expect("built-in identity"))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    })
}
