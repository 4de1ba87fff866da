//! End-to-end acceptance suite: one test per criterion, each printing a
//! single pass/fail line (visible with `cargo test --test acceptance --
//! --nocapture`). Every criterion also enforces its runtime budget.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsdelta::delta::{verify_delta, DeltaParams};
use rsdelta::exponents::{crossover_nu, q, theorem1_bound, theorem2_bound, Regime};
use rsdelta::hecke::{
    count_bilinear, count_bilinear_intervals, euler_phi, l4_norm, l4_norm_fit, ramanujan_average,
    ramanujan_sum, MaassFormData,
};
use rsdelta::lfunction::{conductor_slope, ConductorScenario};
use rsdelta::oscillatory::{
    nonstationary_bound, oscillatory_quadrature, polynomial_phase, stationary_phase_expansion,
    PhaseConvention, PhaseDescriptors, PhaseFunction,
};
use rsdelta::special::{gamma_ratio, log_gamma};
use rsdelta::voronoi::{
    g_transform_cross_check, verify_voronoi, VoronoiInstance,
};
use rsdelta::weights::bump;
use std::time::Instant;

fn conclude(criterion: u32, name: &str, start: Instant, budget_s: f64, detail: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    println!("[acceptance] criterion {criterion} ({name}): PASS in {elapsed:.2}s — {detail}");
    assert!(
        elapsed < budget_s,
        "criterion {criterion} over budget: {elapsed:.1}s >= {budget_s}s"
    );
}

#[test]
fn criterion_1_exponent_engine_family_one() {
    let start = Instant::now();
    let r = theorem1_bound().unwrap();
    assert_eq!(r.exponent, q(61, 84), "exponent");
    assert_eq!(r.kappa, q(25, 42), "kappa");
    assert_eq!(r.theta, q(1, 42), "theta");
    assert!(r.interior && r.reduction_valid);
    conclude(1, "exponent balancing, family 1", start, 1.0,
        "exponent 61/84, kappa 25/42, theta 1/42, exact");
}

#[test]
fn criterion_2_exponent_engine_family_two() {
    let start = Instant::now();
    let low = theorem2_bound(&q(3, 4)).unwrap();
    assert_eq!(low.exponent, q(65, 96));
    assert_eq!(low.kappa, q(2, 3));
    assert_eq!(low.regime, Regime::Low);
    let high = theorem2_bound(&q(1, 1)).unwrap();
    assert_eq!(high.exponent, q(61, 84));
    assert_eq!(high.kappa, q(1, 1) - q(17, 42));
    assert_eq!(high.regime, Regime::High);
    assert_eq!(crossover_nu(), q(14, 17));
    let cross = theorem2_bound(&q(14, 17)).unwrap();
    assert_eq!(cross.exponent, q(35, 51));
    conclude(2, "exponent balancing, family 2", start, 1.0,
        "nu=3/4 -> 65/96 (low, kappa 2/3); nu=1 -> 61/84 (high, kappa 25/42); crossover 14/17 -> 35/51");
}

#[test]
fn criterion_3_ramanujan_sum_routes_and_divisor_identity() {
    let start = Instant::now();
    for qq in 1..=200u64 {
        for n in 0..=200u64 {
            // ramanujan_sum itself errors if the direct-sum and Möbius
            // routes ever disagree
            let _ = ramanujan_sum(qq, n).unwrap();
            let mut divisor_sum = 0i64;
            for d in 1..=qq {
                if qq % d == 0 {
                    divisor_sum += if n % d == 0 {
                        euler_phi(d) as i64 // c_d(n) = φ(d) when d | n
                    } else {
                        ramanujan_sum(d, n).unwrap()
                    };
                }
            }
            let expect = if n % qq == 0 { qq as i64 } else { 0 };
            assert_eq!(divisor_sum, expect, "divisor identity at q={qq}, n={n}");
        }
    }
    conclude(3, "Ramanujan sums", start, 10.0,
        "two routes and the divisor identity agree exactly on the 200x201 grid");
}

#[test]
fn criterion_4_delta_identity() {
    let start = Instant::now();
    let p50 = DeltaParams::with_defaults(50).unwrap();
    let r50 = verify_delta(-25, 25, &p50).unwrap();
    let e50 = r50.measurements["max_error"];
    assert!(r50.pass && e50 <= 1e-6, "Q=50 max error {e50:.3e}");
    let p100 = DeltaParams::with_defaults(100).unwrap();
    let r100 = verify_delta(-25, 25, &p100).unwrap();
    let e100 = r100.measurements["max_error"];
    assert!(e100 <= e50, "Q=100 error {e100:.3e} exceeds Q=50 error {e50:.3e}");
    conclude(4, "delta-symbol identity", start, 300.0,
        &format!("max error {e50:.3e} at Q=50, {e100:.3e} at Q=100, bound 1e-6"));
}

#[test]
fn criterion_5_summation_formula() {
    let start = Instant::now();
    let form = MaassFormData::fixture().unwrap();
    let weight = || bump(30.0, 60.0, (44.0, 46.0)).unwrap();
    let mut worst_residual = 0.0f64;
    let mut worst_tail = 0.0f64;
    for (a, qq) in [(1i64, 1u64), (1, 2), (2, 3)] {
        let inst = VoronoiInstance::new(form.clone(), a, qq, weight()).unwrap();
        let r = verify_voronoi(&inst).unwrap();
        let residual = r.measurements["residual"];
        let tail = r.measurements["tail_bound"];
        assert!(
            r.pass && residual <= 1e-4 && tail < 1e-8,
            "q={qq}: residual {residual:.3e}, tail {tail:.3e}"
        );
        worst_residual = worst_residual.max(residual);
        worst_tail = worst_tail.max(tail);
    }
    let inst = VoronoiInstance::new(form, 1, 1, weight()).unwrap();
    let ys = [0.05, 0.1, 0.2, 0.4, 0.7, 1.0, 1.5, 2.0, 3.0, 5.0];
    let routes = g_transform_cross_check(&inst, &ys).unwrap();
    assert!(routes.pass, "route gap {}", routes.measurements["worst_gap"]);
    conclude(5, "summation formula", start, 300.0,
        &format!(
            "q in {{1,2,3}}: worst residual {worst_residual:.3e}, worst tail {worst_tail:.3e}; \
             transform routes agree at 10 y (gap {:.3e})",
            routes.measurements["worst_gap"]
        ));
}

#[test]
fn criterion_6_stationary_phase() {
    let start = Instant::now();
    // order-1 expansion vs quadrature across the curvature ladder
    let w = bump(1.0, 2.0, (1.2, 1.8)).unwrap();
    let mut errors = Vec::new();
    for lambda in [1e2, 1e3, 1e4] {
        let h = polynomial_phase(lambda, 0.0, 1.5, PhaseDescriptors::default());
        let exp1 = stationary_phase_expansion(&w, &h, 1).unwrap();
        let oracle = oscillatory_quadrature(&w, &h, 1e-12).unwrap();
        errors.push((exp1 - oracle).norm() / oracle.norm());
    }
    assert!(errors[0] > errors[1] && errors[1] > errors[2],
        "errors not strictly decreasing: {errors:?}");
    assert!(errors[2] <= 1e-3, "error at lambda=1e4: {:.3e}", errors[2]);

    // 50 randomized linear-phase instances: measured integral never beats the
    // integration-by-parts certificate by more than the sampling headroom
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..50 {
        let lambda: f64 = rng.gen_range(100.0..2000.0);
        let p_lo: f64 = rng.gen_range(1.1..1.4);
        let p_hi: f64 = rng.gen_range(1.6..1.9);
        let wr = bump(1.0, 2.0, (p_lo, p_hi)).unwrap();
        // X0 = sup over the support of |w^(j)| for j <= 3 (V0 = 1 units)
        let mut x0 = 0.0f64;
        for k in 0..=400 {
            let t = 1.0 + k as f64 / 400.0;
            for j in 0..=3 {
                x0 = x0.max(wr.deriv(j, t).abs());
            }
        }
        let d = PhaseDescriptors { x0, v0: 1.0, y0: 1.0, q0: 1.0, r0: lambda, omega: lambda };
        let h = PhaseFunction::from_jet_fn(PhaseConvention::ExpIH, d, move |t, ord| {
            rsdelta::jet::Jet::variable(t, ord) * lambda
        });
        let bound = nonstationary_bound(&wr, &h, 3).unwrap();
        let measured = oscillatory_quadrature(&wr, &h, 1e-13).unwrap().norm();
        assert!(
            measured <= 10.0 * bound,
            "instance {i}: measured {measured:.3e} above 10x certificate {bound:.3e}"
        );
    }
    conclude(6, "stationary phase", start, 60.0,
        &format!("order-1 errors {:.2e} > {:.2e} > {:.2e}; 50 randomized certificates held",
            errors[0], errors[1], errors[2]));
}

#[test]
fn criterion_7_gamma_ratio() {
    let start = Instant::now();
    let mut worst_mod = 0.0f64;
    let mut worst_rel = 0.0f64;
    for sigma in [0.5, 1.5] {
        for t in [1e3, 1e4] {
            let ratio = gamma_ratio(sigma, t).unwrap();
            let dev = (ratio.norm() - 1.0).abs();
            assert!(dev <= 1e-12, "|ratio| off unity by {dev:.3e} at sigma={sigma}, t={t}");
            worst_mod = worst_mod.max(dev);
            // mean phase derivative over [0, t]: the phase vanishes at t=0,
            // so Im(log Γ(σ+it) − log Γ(σ−it))/t is the finite difference
            let phase = (log_gamma(Complex64::new(sigma, t)).unwrap()
                - log_gamma(Complex64::new(sigma, -t)).unwrap())
            .im;
            let fd = phase / t;
            let target = 2.0 * (t.ln() - 1.0);
            let rel = (fd - target).abs() / target.abs();
            assert!(rel <= 1e-3, "phase derivative off by {rel:.3e} at sigma={sigma}, t={t}");
            worst_rel = worst_rel.max(rel);
        }
    }
    conclude(7, "gamma ratio", start, 1.0,
        &format!("|ratio|-1 within {worst_mod:.1e}; phase derivative matches 2 log(t/e) within {worst_rel:.1e}"));
}

#[test]
fn criterion_8_conductor_dropping() {
    let start = Instant::now();
    let ts = [1e2, 1e3, 1e4];
    let generic = conductor_slope(ConductorScenario::Generic, &ts).unwrap();
    assert!((generic - 4.0).abs() <= 0.1, "generic slope {generic}");
    let sum_point = conductor_slope(ConductorScenario::SumPoint, &ts).unwrap();
    assert!((sum_point - 3.0).abs() <= 0.1, "sum-point slope {sum_point}");
    let diff_point = conductor_slope(ConductorScenario::DiffPoint { nu: 0.75 }, &ts).unwrap();
    assert!((diff_point - 2.75).abs() <= 0.1, "difference-point slope {diff_point}");
    conclude(8, "conductor dropping", start, 1.0,
        &format!("log-log slopes {generic:.3} (generic), {sum_point:.3} (sum point), {diff_point:.3} (difference point)"));
}

/// λ(n) for a single n via trial-division factorization and the prime-power
/// recursion, independent of the sieve used elsewhere.
fn eigenvalue_of(form: &MaassFormData, n: u64) -> f64 {
    let mut m = n;
    let mut out = 1.0f64;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0u32;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            out *= prime_power(form, p, k);
        }
        p += 1;
    }
    if m > 1 {
        out *= prime_power(form, m, 1);
    }
    out
}

fn prime_power(form: &MaassFormData, p: u64, k: u32) -> f64 {
    let lp = form.prime_table[&p];
    let (mut prev, mut cur) = (1.0f64, lp);
    for _ in 1..k {
        (prev, cur) = (cur, lp * cur - prev);
    }
    cur
}

#[test]
fn criterion_9_eigenvalue_statistics() {
    let start = Instant::now();
    let form = MaassFormData::fixture().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100 {
        let m = rng.gen_range(2u64..=1000);
        let n = rng.gen_range(2u64..=1000);
        if num_integer::gcd(m, n) != 1 {
            continue;
        }
        let residual =
            (eigenvalue_of(&form, m * n) - eigenvalue_of(&form, m) * eigenvalue_of(&form, n)).abs();
        assert!(residual <= 1e-9, "multiplicativity at ({m},{n}): {residual:.3e}");
        checked += 1;
    }
    // mean-square and fourth-moment reports with fitted constants
    let mut prev_log = 0.0;
    let mut prev_l4 = 0.0;
    for n_max in [2500u64, 5000, 10_000] {
        let avg = ramanujan_average(&form, n_max).unwrap();
        let l4 = l4_norm(&form, n_max).unwrap();
        assert!(avg.log_normalized >= prev_log && l4 >= prev_l4, "partial sums decreased");
        let normalized = l4 / (n_max as f64).ln().powi(4);
        assert!(normalized < 10.0, "fourth moment / log^4 = {normalized}");
        prev_log = avg.log_normalized;
        prev_l4 = l4;
    }
    let avg = ramanujan_average(&form, 10_000).unwrap();
    let (l4_value, l4_slope) = l4_norm_fit(&form, 10_000).unwrap();
    conclude(9, "eigenvalue statistics", start, 10.0,
        &format!(
            "100 multiplicativity checks <= 1e-9; mean square {:.4}, log-weighted {:.2}, \
             fourth moment {:.2} (log-log-log slope {:.2})",
            avg.mean_square, avg.log_normalized, l4_value, l4_slope
        ));
}

#[test]
fn criterion_10_bilinear_counting() {
    let start = Instant::now();
    let (r, h, delta) = (50u64, 50u64, 2.0);
    let brute = count_bilinear(r, h, delta);
    let oracle = count_bilinear_intervals(r, h, delta);
    assert_eq!(brute, oracle, "loop and interval routes differ");
    let scale = (r as f64) * (h as f64);
    let envelope = 10.0 * scale * scale.ln();
    assert!((brute as f64) <= envelope, "count {brute} above envelope {envelope:.1}");
    conclude(10, "bilinear counting", start, 10.0,
        &format!("count {brute} = oracle, within 10·H·R·log(HR) = {envelope:.0}"));
}
