//! Command-line front end: runs the verification suites and emits
//! machine-readable reports (JSON or CSV) on standard output.
//!
//! Exit codes: 0 = all checks passed, 1 = a verification failed,
//! 2 = usage or input error.

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rsdelta::delta::{verify_delta, DeltaParams};
use rsdelta::exponents::{theorem1_bound, theorem2_bound, q as rat};
use rsdelta::hecke::{count_bilinear, count_bilinear_intervals, ramanujan_sum, EvaluationMode,
    MaassFormData, RankinSelbergSpec};
use rsdelta::lfunction::{analytic_conductor, smoothed_sum};
use rsdelta::oscillatory::{oscillatory_quadrature, polynomial_phase, stationary_phase_expansion,
    PhaseDescriptors};
use rsdelta::report::{ReportEnvelope, VerificationReport};
use rsdelta::voronoi::{verify_voronoi, VoronoiInstance};
use rsdelta::weights::bump;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "rsdelta",
    about = "Numerical verification toolkit: delta-symbol expansion, Maass-form \
             summation formula, stationary phase, Hecke arithmetic and exact \
             exponent balancing",
    version
)]
struct Cli {
    /// Output format for the report envelope
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the divisor-style delta-symbol expansion against exact delta
    VerifyDelta {
        /// Modulus cutoff Q of the expansion
        #[arg(long = "Q")]
        big_q: u64,
        /// Check all |n| <= nmax
        #[arg(long)]
        nmax: i64,
    },
    /// Two-sided check of the Maass-form summation formula
    VerifyVoronoi {
        /// Eigenvalue fixture (JSON); defaults to the bundled even form
        #[arg(long)]
        fixture: Option<String>,
        /// Modulus of the additive twist
        #[arg(long)]
        q: u64,
        /// Residue of the additive twist, coprime to q
        #[arg(long)]
        a: i64,
        /// Weight support as "lo,hi" (bump weight, narrow central plateau)
        #[arg(long, default_value = "30,60")]
        support: String,
    },
    /// Stationary-phase expansion vs a quadrature oracle
    StationaryPhase {
        /// Phase family: quadratic vertex or with a cubic correction
        #[arg(long, value_enum)]
        demo: Demo,
        /// Curvature scale of the phase
        #[arg(long)]
        lambda: f64,
        /// Number of correction terms beyond the leading one
        #[arg(long, default_value_t = 1)]
        order: usize,
        /// Relative-error tolerance for the comparison
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Exact-rational minimax balancing of the bound-term lists
    BalanceExponents {
        /// Term-list family: 1 (fixed dyadic scale) or 2 (scale exponent nu)
        #[arg(long)]
        theorem: u8,
        /// Scale exponent for family 2, as a rational "p/q" in (2/3, 1]
        #[arg(long)]
        nu: Option<String>,
    },
    /// Analytic conductor of a spectral-parameter triple
    Conductor {
        #[arg(long)]
        tf: f64,
        #[arg(long)]
        tg: f64,
        #[arg(long)]
        t: f64,
    },
    /// Smoothed dyadic coefficient sum S(N) at ordinate t
    SmoothedSum {
        /// Eigenvalue fixture (JSON); defaults to the bundled even form
        #[arg(long)]
        fixture: Option<String>,
        /// Dyadic scale (the weight covers [N, 2N])
        #[arg(long = "N")]
        n_scale: f64,
        /// Ordinate of the oscillation n^{-it}
        #[arg(long)]
        t: f64,
    },
    /// Ramanujan sum c_q(n), exact
    RamanujanSum {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
    },
    /// Near-diagonal bilinear lattice count with brute-force cross-check
    CountBilinear {
        #[arg(long = "R")]
        r: u64,
        #[arg(long = "H")]
        h: u64,
        #[arg(long)]
        delta: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Fresnel,
    Cubic,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"lo,hi\", got {s:?}"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    if !(lo > 0.0 && hi > lo) {
        return Err(format!("need 0 < lo < hi, got {lo}, {hi}"));
    }
    Ok((lo, hi))
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    match s.split('/').collect::<Vec<_>>()[..] {
        [p] => Ok(rat(i64::from_str(p.trim()).map_err(|e| e.to_string())?, 1)),
        [p, q] => Ok(rat(
            i64::from_str(p.trim()).map_err(|e| e.to_string())?,
            i64::from_str(q.trim()).map_err(|e| e.to_string())?,
        )),
        _ => Err(format!("expected \"p/q\", got {s:?}")),
    }
}

fn load_form(path: &Option<String>) -> Result<MaassFormData, String> {
    match path {
        Some(p) => MaassFormData::load(p).map_err(|e| e.to_string()),
        None => MaassFormData::fixture().map_err(|e| e.to_string()),
    }
}

fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rational_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

fn run(cli: &Cli) -> Result<ReportEnvelope, String> {
    let start = Instant::now();
    let mut env;
    match &cli.command {
        Command::VerifyDelta { big_q, nmax } => {
            env = ReportEnvelope::new("verify-delta");
            env.param("Q", big_q).param("nmax", nmax);
            let params = DeltaParams::with_defaults(*big_q).map_err(|e| e.to_string())?;
            let report = verify_delta(-nmax, *nmax, &params).map_err(|e| e.to_string())?;
            env.push(report);
        }
        Command::VerifyVoronoi { fixture, q, a, support } => {
            env = ReportEnvelope::new("verify-voronoi");
            env.param("q", q).param("a", a).param("support", support);
            let (lo, hi) = parse_pair(support)?;
            let form = load_form(fixture)?;
            // narrow plateau keeps the bump edges wide, which is what makes
            // the dual sum decay fast enough to certify the tail
            let mid = 0.5 * (lo + hi);
            let half = (hi - lo) / 30.0;
            let w = bump(lo, hi, (mid - half, mid + half)).map_err(|e| e.to_string())?;
            let inst = VoronoiInstance::new(form, *a, *q, w).map_err(|e| e.to_string())?;
            let report = verify_voronoi(&inst).map_err(|e| e.to_string())?;
            env.push(report);
        }
        Command::StationaryPhase { demo, lambda, order, tol } => {
            env = ReportEnvelope::new("stationary-phase");
            env.param("lambda", lambda).param("order", order).param("tol", tol);
            if !(*lambda > 0.0) {
                return Err(format!("lambda must be > 0, got {lambda}"));
            }
            let mu = match demo {
                Demo::Fresnel => {
                    env.param("demo", "fresnel");
                    0.0
                }
                Demo::Cubic => {
                    env.param("demo", "cubic");
                    lambda / 50.0
                }
            };
            let w = bump(1.0, 2.0, (1.2, 1.8)).map_err(|e| e.to_string())?;
            let h = polynomial_phase(*lambda, mu, 1.5, PhaseDescriptors::default());
            let expansion =
                stationary_phase_expansion(&w, &h, *order).map_err(|e| e.to_string())?;
            let oracle = oscillatory_quadrature(&w, &h, 1e-12).map_err(|e| e.to_string())?;
            let rel = (expansion - oracle).norm() / oracle.norm();
            let mut report = VerificationReport::new("stationary_phase_vs_quadrature");
            report.tolerance = Some(*tol);
            report.record("expansion_re", expansion.re);
            report.record("expansion_im", expansion.im);
            report.record("oracle_re", oracle.re);
            report.record("oracle_im", oracle.im);
            report.record("relative_error", rel);
            report.check(rel <= *tol, &format!("relative error {rel:.3e} above {tol:.1e}"));
            env.push(report);
        }
        Command::BalanceExponents { theorem, nu } => {
            env = ReportEnvelope::new("balance-exponents");
            env.param("theorem", theorem);
            let mut report = VerificationReport::new("exponent_balance");
            match theorem {
                1 => {
                    if nu.is_some() {
                        return Err("--nu applies only to --theorem 2".into());
                    }
                    let r = theorem1_bound().map_err(|e| e.to_string())?;
                    env.param("exponent_exact", rational_str(&r.exponent));
                    env.param("kappa_exact", rational_str(&r.kappa));
                    env.param("theta_exact", rational_str(&r.theta));
                    report.record("exponent", rational_f64(&r.exponent));
                    report.record("kappa", rational_f64(&r.kappa));
                    report.record("theta", rational_f64(&r.theta));
                    report.check(r.interior, "optimum not interior to the window");
                    report.check(r.reduction_valid, "reduced term list misses the envelope");
                }
                2 => {
                    let nu = match nu {
                        Some(s) => parse_rational(s)?,
                        None => rat(3, 4),
                    };
                    env.param("nu_exact", rational_str(&nu));
                    let r = theorem2_bound(&nu).map_err(|e| e.to_string())?;
                    env.param("exponent_exact", rational_str(&r.exponent));
                    env.param("kappa_exact", rational_str(&r.kappa));
                    env.param("theta_exact", rational_str(&r.theta));
                    env.param("regime", format!("{:?}", r.regime));
                    report.record("exponent", rational_f64(&r.exponent));
                    report.record("kappa", rational_f64(&r.kappa));
                    report.record("theta", rational_f64(&r.theta));
                    report.check(r.interior, "optimum not interior to the window");
                }
                t => return Err(format!("theorem must be 1 or 2, got {t}")),
            }
            env.push(report);
        }
        Command::Conductor { tf, tg, t } => {
            env = ReportEnvelope::new("conductor");
            env.param("tf", tf).param("tg", tg).param("t", t);
            let profile = analytic_conductor(*tf, *tg, *t);
            let mut report = VerificationReport::new("analytic_conductor");
            for (i, f) in profile.factors.iter().enumerate() {
                report.record(format!("factor_{i}"), *f);
            }
            report.record("conductor", profile.conductor);
            report.check(
                profile.conductor > 0.0 && profile.conductor.is_finite(),
                "conductor not positive finite",
            );
            env.push(report);
        }
        Command::SmoothedSum { fixture, n_scale, t } => {
            env = ReportEnvelope::new("smoothed-sum");
            env.param("N", n_scale).param("t", t);
            let form = load_form(fixture)?;
            let max_prime = form.prime_table.keys().next_back().copied().unwrap_or(0);
            if !(*n_scale >= 1.0) || 2.0 * n_scale > max_prime as f64 {
                return Err(format!(
                    "N must lie in [1, {}] for the fixture's tabulated primes",
                    max_prime / 2
                ));
            }
            let spec = RankinSelbergSpec::new(form.clone(), form, *t, EvaluationMode::Generic)
                .map_err(|e| e.to_string())?;
            let v = bump(1.0, 2.0, (1.25, 1.75)).map_err(|e| e.to_string())?;
            let s = smoothed_sum(&spec, *n_scale, &v).map_err(|e| e.to_string())?;
            let mut report = VerificationReport::new("smoothed_dyadic_sum");
            report.record("value_re", s.re);
            report.record("value_im", s.im);
            report.record("abs", s.norm());
            // trivial-bound sanity: |S(N)| cannot exceed Σ |λ_f λ_g| ≲ mean-square · N
            report.check(s.norm().is_finite(), "sum not finite");
            env.push(report);
        }
        Command::RamanujanSum { q, n } => {
            env = ReportEnvelope::new("ramanujan-sum");
            env.param("q", q).param("n", n);
            let c = ramanujan_sum(*q, *n).map_err(|e| e.to_string())?;
            let mut report = VerificationReport::new("ramanujan_sum");
            report.record("value", c as f64);
            env.param("value", c);
            env.push(report);
        }
        Command::CountBilinear { r, h, delta } => {
            env = ReportEnvelope::new("count-bilinear");
            env.param("R", r).param("H", h).param("delta", delta);
            let brute = count_bilinear(*r, *h, *delta);
            let oracle = count_bilinear_intervals(*r, *h, *delta);
            let scale = (*r as f64) * (*h as f64);
            let envelope = 10.0 * scale * scale.ln().max(1.0);
            let mut report = VerificationReport::new("bilinear_count");
            report.record("count", brute as f64);
            report.record("oracle_count", oracle as f64);
            report.record("envelope", envelope);
            report.check(brute == oracle, "loop and interval counts differ");
            report.check(
                (brute as f64) <= envelope,
                &format!("count {brute} above envelope {envelope:.1}"),
            );
            env.push(report);
        }
    }
    env.wall_time_s = start.elapsed().as_secs_f64();
    Ok(env)
}

fn emit(env: &ReportEnvelope, format: Format) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(env).unwrap());
        }
        Format::Csv => {
            println!("command,report,key,value");
            for (k, v) in &env.params {
                println!("{},,param:{},{}", env.command, k, v);
            }
            for r in &env.results {
                for (k, v) in &r.measurements {
                    println!("{},{},{},{:e}", env.command, r.name, k, v);
                }
                println!("{},{},pass,{}", env.command, r.name, r.pass);
            }
            println!("{},,pass,{}", env.command, env.pass);
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(env) => {
            emit(&env, cli.format);
            if env.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
