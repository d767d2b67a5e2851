use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use smalldiv::arithfn::{
    hurwitz_class_number, mock_numerator, mock_plus_part, padic_congruence_check, search_hurwitz_analogue, sigma_small_1,
    sigma_small_2, theta_series, HurwitzTable,
};
use smalldiv::characters::DirichletCharacter;
use smalldiv::exactnum::{int, parse_rational, Rational};
use smalldiv::holoproj::ComplexPoint;
use smalldiv::qseries::{sturm_bound, QSeries};
use smalldiv::report::VerificationReport;
use smalldiv::suite::{run_identity, verify_all, IdentityOptions, OutputFormat, RunConfig};

/// Like `print!`, but a closed pipe ends the process quietly instead of panicking.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout().lock(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        out!($($t)*);
        out!("\n");
    }};
}

#[derive(Parser)]
#[command(name = "smalldiv", version, about = "Small divisor functions, Hurwitz class numbers and their q-series identities")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Series precision (exponent bound); each identity has its own default
    #[arg(long, global = true)]
    prec: Option<i64>,
    /// Numeric acceptance tolerance
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Quadrature tolerance
    #[arg(long, global = true, default_value_t = 1e-10)]
    quad_tol: f64,
    /// Emit JSON
    #[arg(long, global = true)]
    json: bool,
    /// Output format for reports (text, json, csv); --json wins
    #[arg(long, global = true, default_value = "text")]
    format: OutputFormat,
    /// Worker threads (0 = one per core); falls back to SMALLDIV_THREADS
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 20240101)]
    seed: u64,
}

fn character(s: &str) -> Result<DirichletCharacter, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn complex(s: &str) -> Result<ComplexPoint, String> {
    s.parse()
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s:?}"))
}

#[derive(Clone)]
struct RationalList(Vec<Rational>);

/// `a,b,c` or `start:end:step` (inclusive).
fn rational_list(s: &str) -> Result<RationalList, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, end, step] => {
            let (start, end, step) = (rational(start)?, rational(end)?, rational(step)?);
            if step <= int(0) {
                return Err("range step must be positive".into());
            }
            let mut out = Vec::new();
            let mut x = start;
            while x <= end {
                out.push(x.clone());
                x += &step;
                if out.len() > 100_000 {
                    return Err("range has too many points".into());
                }
            }
            Ok(RationalList(out))
        }
        [_] => s.split(',').map(rational).collect::<Result<_, _>>().map(RationalList),
        _ => Err(format!("expected a,b,c or start:end:step, got {s:?}")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Table of sigma^sm_{1,psi}(n) or sigma^sm_{2,chi}(n)
    Sigma {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        kind: u8,
        #[arg(long, value_parser = character, default_value = "trivial:1")]
        chi: DirichletCharacter,
        #[arg(long, value_parser = character)]
        psi: DirichletCharacter,
        #[arg(long)]
        upto: u64,
    },
    /// Unary theta series theta_psi
    Theta {
        #[arg(long, value_parser = character)]
        psi: DirichletCharacter,
    },
    /// Table of Hurwitz class numbers H(0..=upto)
    Hurwitz {
        #[arg(long)]
        upto: u64,
    },
    /// The holomorphic part F^+ (or G^+ for chi = trivial:1)
    Mockq {
        #[arg(long, value_parser = character, default_value = "trivial:1")]
        chi: DirichletCharacter,
        #[arg(long, value_parser = character)]
        psi: DirichletCharacter,
        /// Print the numerator series instead of the quotient
        #[arg(long)]
        numerator: bool,
    },
    /// Sturm bound for weight and level
    Sturm {
        #[arg(long, value_parser = rational)]
        weight: Rational,
        #[arg(long)]
        level: u64,
    },
    /// p-adic congruence check of (theta_psi(p^{2a} tau) F^+) | U(p^b)
    Congruence {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, value_parser = character)]
        psi: DirichletCharacter,
        #[arg(long, value_parser = character, default_value = "trivial:1")]
        chi: DirichletCharacter,
    },
    /// Run an identity harness, or `all`
    Verify {
        identity: String,
        #[arg(long, value_parser = character)]
        chi: Option<DirichletCharacter>,
        #[arg(long, value_parser = character)]
        psi: Option<DirichletCharacter>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        tau: Option<ComplexPoint>,
        #[arg(long)]
        max_degree: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Scan (C, t) for progressions where C G^+(t tau) reproduces H(n)
    SearchHurwitzAnalogue {
        #[arg(long, value_parser = character)]
        psi: DirichletCharacter,
        #[arg(long = "C-range", value_parser = rational_list, allow_hyphen_values = true)]
        c_range: RationalList,
        #[arg(long = "t-range", value_parser = rational_list)]
        t_range: RationalList,
        #[arg(long, default_value_t = 24)]
        max_modulus: u64,
    },
}

enum Failure {
    /// Exit 1: a verification did not pass.
    Verification,
    /// Exit 2: bad input that the parser could not catch.
    Usage(String),
}

fn print_series(s: &QSeries, json: bool) {
    if json {
        outln!("{}", serde_json::to_string_pretty(s).expect("series serialize"));
    } else {
        out!("{}", s.to_text());
    }
}

fn emit_reports(reports: &[VerificationReport], cfg: &RunConfig) -> Result<(), Failure> {
    match cfg.format {
        OutputFormat::Json => outln!("{}", serde_json::to_string_pretty(reports).expect("reports serialize")),
        OutputFormat::Csv => {
            outln!("{}", VerificationReport::CSV_HEADER);
            for r in reports {
                outln!("{}", r.csv_row());
            }
        }
        OutputFormat::Text => {
            for r in reports {
                outln!("{r}");
            }
        }
    }
    if reports.iter().any(|r| r.failed()) {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn threads(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("SMALLDIV_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("SMALLDIV_THREADS must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = cli.global;
    let threads = threads(g.threads)?;
    let cfg = RunConfig {
        prec: g.prec,
        tol: g.tol,
        quad_tol: g.quad_tol,
        seed: g.seed,
        threads,
        format: if g.json { OutputFormat::Json } else { g.format },
    };
    cfg.validate().map_err(Failure::Usage)?;
    let json = cfg.format == OutputFormat::Json;
    let usage = |e: &dyn std::fmt::Display| Failure::Usage(e.to_string());
    cfg.install(|| match cli.command {
        Command::Sigma { kind, chi, psi, upto } => {
            let mut rows = Vec::new();
            for n in 1..=upto {
                let v = if kind == 1 {
                    sigma_small_1(&psi, n)
                } else {
                    sigma_small_2(&chi, &psi, n).map_err(|e| usage(&e))?
                };
                rows.push((n, v));
            }
            if json {
                let out: Vec<_> = rows.iter().map(|(n, v)| json!({ "n": n, "value": v })).collect();
                outln!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
            } else {
                for (n, v) in rows {
                    outln!("{n}\t{v}");
                }
            }
            Ok(())
        }
        Command::Theta { psi } => {
            print_series(&theta_series(&psi, cfg.prec.unwrap_or(100)), json);
            Ok(())
        }
        Command::Hurwitz { upto } => {
            let rows: Vec<_> = if upto > 2000 {
                let t = HurwitzTable::new(upto);
                (0..=upto).map(|n| smalldiv::arithfn::HurwitzValue { n, value: t.get(n) }).collect()
            } else {
                (0..=upto).map(hurwitz_class_number).collect()
            };
            if json {
                outln!("{}", serde_json::to_string_pretty(&rows).expect("serialize"));
            } else {
                for r in rows {
                    outln!("{}\t{}", r.n, r.value);
                }
            }
            Ok(())
        }
        Command::Mockq { chi, psi, numerator } => {
            let prec = cfg.prec.unwrap_or(100);
            let s = if numerator {
                mock_numerator(&chi, &psi, prec)
            } else {
                mock_plus_part(&chi, &psi, prec)
            }
            .map_err(|e| usage(&e))?;
            print_series(&s, json);
            Ok(())
        }
        Command::Sturm { weight, level } => {
            let b = sturm_bound(&weight, level).map_err(|e| usage(&e))?;
            if json {
                outln!("{}", json!({ "weight": weight.to_string(), "level": level, "bound": b }));
            } else {
                outln!("{b}");
            }
            Ok(())
        }
        Command::Congruence { p, a, b, psi, chi } => {
            let prec = cfg.prec.unwrap_or(2000);
            let r = padic_congruence_check(&psi, &chi, p, a, b, prec).map_err(|e| usage(&e))?;
            emit_reports(&[r], &cfg)
        }
        Command::Verify {
            identity,
            chi,
            psi,
            tau,
            max_degree,
            trials,
        } => {
            let reports = if identity == "all" {
                verify_all(&cfg)
            } else {
                let opts = IdentityOptions {
                    chi,
                    psi,
                    tau,
                    max_degree,
                    trials,
                };
                run_identity(&identity, &cfg, &opts).map_err(|e| Failure::Usage(format!("{e}, all")))?
            };
            emit_reports(&reports, &cfg)
        }
        Command::SearchHurwitzAnalogue {
            psi,
            c_range,
            t_range,
            max_modulus,
        } => {
            let prec = cfg.prec.unwrap_or(400);
            let found = search_hurwitz_analogue(&psi, &c_range.0, &t_range.0, max_modulus, prec).map_err(|e| usage(&e))?;
            if json {
                outln!("{}", serde_json::to_string_pretty(&found).expect("serialize"));
            } else {
                outln!("# candidates only; a match below the Sturm bound proves nothing");
                outln!("C\tt\tprogression\tsupport\tchecked_below\tsturm_bound");
                for c in &found {
                    outln!(
                        "{}\t{}\t{} mod {}\t{}\t{}\t{}",
                        c.c, c.t, c.residue, c.modulus, c.support, c.checked_below, c.sturm_bound
                    );
                }
                if found.is_empty() {
                    outln!("# no candidates");
                }
            }
            Ok(())
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
