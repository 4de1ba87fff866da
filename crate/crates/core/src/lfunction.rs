//! Rankin–Selberg L-function scaffolding: archimedean gamma factors, the
//! four-factor analytic conductor with its drop at special ordinates, smoothed
//! dyadic coefficient sums, and absolute-convergence tail checks.

use crate::hecke::{hecke_eigenvalues, rs_dirichlet_coeffs, HeckeError, RankinSelbergSpec};
use crate::report::VerificationReport;
use crate::special::{log_gamma, SpecialError};
use crate::weights::SmoothWeight;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LfuncError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// The four archimedean factors (1/2 + |t ± t_f ± t_g|) and their product.
#[derive(Debug, Clone)]
pub struct ConductorProfile {
    pub t_f: f64,
    pub t_g: f64,
    pub t: f64,
    pub factors: [f64; 4],
    pub conductor: f64,
}

pub fn analytic_conductor(t_f: f64, t_g: f64, t: f64) -> ConductorProfile {
    let factors = [
        0.5 + (t + t_f + t_g).abs(),
        0.5 + (t - t_f - t_g).abs(),
        0.5 + (t + t_f - t_g).abs(),
        0.5 + (t - t_f + t_g).abs(),
    ];
    ConductorProfile {
        t_f,
        t_g,
        t,
        factors,
        conductor: factors.iter().product(),
    }
}

/// Parameter families used to measure how the conductor scales with T.
#[derive(Debug, Clone, Copy)]
pub enum ConductorScenario {
    /// t_f = t_g = T, t = T: all four factors grow linearly — degree 4.
    Generic,
    /// t_f = t_g = T, t = 2T: one factor collapses to 1/2 — degree 3.
    SumPoint,
    /// t_f = T, t_g = T − T^ν, t = T^ν: degree 2 + ν.
    DiffPoint { nu: f64 },
}

pub fn conductor_at(scenario: ConductorScenario, big_t: f64) -> ConductorProfile {
    match scenario {
        ConductorScenario::Generic => analytic_conductor(big_t, big_t, big_t),
        ConductorScenario::SumPoint => analytic_conductor(big_t, big_t, 2.0 * big_t),
        ConductorScenario::DiffPoint { nu } => {
            let gap = big_t.powf(nu);
            analytic_conductor(big_t, big_t - gap, gap)
        }
    }
}

/// Least-squares slope of log(conductor) against log(T).
pub fn conductor_slope(scenario: ConductorScenario, ts: &[f64]) -> Result<f64, LfuncError> {
    if ts.len() < 2 {
        return Err(LfuncError::Domain("slope fit needs >= 2 points".into()));
    }
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| (t.ln(), conductor_at(scenario, t).conductor.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

/// Log of the completed archimedean factor:
/// −2s·log π + Σ over the four sign choices of log Γ((s + i(±t_f ± t_g) + a)/2),
/// where a = 0 when the two forms share parity and 1 otherwise.
pub fn log_gamma_factor(spec: &RankinSelbergSpec, s: Complex64) -> Result<Complex64, LfuncError> {
    let a = if spec.f.parity == spec.g.parity { 0.0 } else { 1.0 };
    let tf = spec.f.spectral_r;
    let tg = spec.g.spectral_r;
    let mut total = -2.0 * s * PI.ln();
    for mu in [tf + tg, tf - tg, -tf + tg, -tf - tg] {
        let arg = (s + Complex64::new(a, mu)) / 2.0;
        total += log_gamma(arg)?;
    }
    Ok(total)
}

/// exp of [`log_gamma_factor`]; underflows to 0 for large spectral parameters,
/// which is why the log form is primary.
pub fn gamma_factor(spec: &RankinSelbergSpec, s: Complex64) -> Result<Complex64, LfuncError> {
    Ok(log_gamma_factor(spec, s)?.exp())
}

/// Smoothed dyadic coefficient sum S(N) = Σ_n λ_f(n) λ_g(n) n^{−it} V(n/N).
pub fn smoothed_sum(
    spec: &RankinSelbergSpec,
    n_scale: f64,
    v: &SmoothWeight,
) -> Result<Complex64, LfuncError> {
    if !(n_scale >= 1.0) {
        return Err(LfuncError::Domain(format!("scale must be >= 1, got {n_scale}")));
    }
    let n_hi = (n_scale * v.support.1).floor() as u64;
    let n_lo = ((n_scale * v.support.0).ceil() as u64).max(1);
    if n_hi < n_lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let lf = hecke_eigenvalues(&spec.f, n_hi)?;
    let lg = hecke_eigenvalues(&spec.g, n_hi)?;
    let mut s = Complex64::new(0.0, 0.0);
    for n in n_lo..=n_hi {
        let w = v.eval(n as f64 / n_scale);
        if w != 0.0 {
            let osc = Complex64::from_polar(1.0, -spec.t * (n as f64).ln());
            s += lf[n as usize] * lg[n as usize] * w * osc;
        }
    }
    Ok(s)
}

/// Stability of the partial sums of Σ b(n) n^{−σ} in the region of absolute
/// convergence: the step from N to 10N must stay below an envelope derived
/// from the measured mean square of the coefficients.
pub fn dirichlet_tail_check(
    spec: &RankinSelbergSpec,
    sigma: f64,
    n: u64,
) -> Result<VerificationReport, LfuncError> {
    let start = Instant::now();
    if sigma < 1.5 {
        return Err(LfuncError::Domain(format!(
            "tail check requires sigma >= 1.5, got {sigma}"
        )));
    }
    if n < 10 {
        return Err(LfuncError::Domain("cutoff must be >= 10".into()));
    }
    let m = 10 * n;
    let b = rs_dirichlet_coeffs(&spec.f, &spec.g, m)?;
    let mut partial_n = 0.0;
    let mut partial_m = 0.0;
    let mut mean_sq = 0.0;
    for k in 1..=m as usize {
        let term = b[k] / (k as f64).powf(sigma);
        if k as u64 <= n {
            partial_n += term;
        }
        partial_m += term;
        mean_sq += b[k] * b[k];
    }
    mean_sq /= m as f64;
    // |b(n)| is mean_sq^{1/2} on average; allow a generous log-factor margin
    let envelope = 10.0 * mean_sq.sqrt() * (m as f64).ln() * (n as f64).powf(1.0 - sigma)
        / (sigma - 1.0);
    let diff = (partial_m - partial_n).abs();
    let mut report = VerificationReport::new("dirichlet_tail");
    report.tolerance = Some(envelope);
    report.record("partial_sum_at_cutoff", partial_n);
    report.record("partial_sum_at_10x_cutoff", partial_m);
    report.record("tail_step", diff);
    report.record("envelope", envelope);
    report.check(
        diff <= envelope,
        &format!("tail step {diff:.3e} vs envelope {envelope:.3e}"),
    );
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{EvaluationMode, MaassFormData};
    use crate::weights::bump;

    fn fixture_pair(t_mode: EvaluationMode) -> RankinSelbergSpec {
        let f = MaassFormData::fixture().unwrap();
        let g = MaassFormData::fixture().unwrap();
        let t = match t_mode {
            EvaluationMode::SumPoint => f.spectral_r + g.spectral_r,
            EvaluationMode::DiffPoint => 0.0,
            EvaluationMode::Generic => f.spectral_r + g.spectral_r,
        };
        RankinSelbergSpec::new(f, g, t, t_mode).unwrap()
    }

    #[test]
    fn conductor_sum_point_example() {
        let p = analytic_conductor(100.0, 100.0, 200.0);
        let mut fs = p.factors;
        fs.sort_by(f64::total_cmp);
        assert_eq!(fs, [0.5, 200.5, 200.5, 400.5]);
        assert!((p.conductor - 8.05e6).abs() / 8.05e6 < 0.01);
        assert!(p.factors.iter().all(|&f| f >= 0.5));
    }

    #[test]
    fn conductor_at_zero_is_square() {
        let p = analytic_conductor(31.0, 17.0, 0.0);
        let root = (0.5 + 48.0) * (0.5 + 14.0);
        assert!((p.conductor - root * root).abs() < 1e-6);
    }

    #[test]
    fn conductor_slopes() {
        let ts = [1e2, 1e3, 1e4];
        let s4 = conductor_slope(ConductorScenario::Generic, &ts).unwrap();
        let s3 = conductor_slope(ConductorScenario::SumPoint, &ts).unwrap();
        let s275 = conductor_slope(ConductorScenario::DiffPoint { nu: 0.75 }, &ts).unwrap();
        assert!((s4 - 4.0).abs() < 0.1, "generic slope {s4}");
        assert!((s3 - 3.0).abs() < 0.1, "sum-point slope {s3}");
        assert!((s275 - 2.75).abs() < 0.1, "difference-point slope {s275}");
    }

    #[test]
    fn conductor_drop_brackets() {
        for t in [1e2, 1e3, 1e4] {
            let sum = conductor_at(ConductorScenario::SumPoint, t).conductor;
            let ratio = sum / (t * t * t);
            assert!((4.0..=16.0).contains(&ratio), "T={t}: sum ratio {ratio}");
            let gen = conductor_at(ConductorScenario::Generic, t).conductor;
            let ratio4 = gen / (t * t * t * t);
            assert!((1.0..=9.0).contains(&ratio4), "T={t}: generic ratio {ratio4}");
        }
    }

    #[test]
    fn gamma_factor_conjugate_symmetry() {
        let spec = fixture_pair(EvaluationMode::SumPoint);
        let s = Complex64::new(0.7, 0.3);
        let a = gamma_factor(&spec, s).unwrap();
        let b = gamma_factor(&spec, s.conj()).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn gamma_factor_matches_stirling_magnitude() {
        let spec = fixture_pair(EvaluationMode::SumPoint);
        let tf = spec.f.spectral_r;
        let tg = spec.g.spectral_r;
        let t = tf + tg;
        let s = Complex64::new(0.5, t);
        let lg = log_gamma_factor(&spec, s).unwrap();
        // Stirling magnitude per factor: |Γ(σ'+iy)| ≈ √(2π) |y|^{σ'−1/2} e^{−π|y|/2}
        let mut pred = -2.0 * 0.5 * PI.ln();
        for mu in [tf + tg, tf - tg, -tf + tg, -tf - tg] {
            let y = (t + mu) / 2.0;
            let sp = 0.25; // Re((1/2 + it + iμ)/2)
            if y.abs() > 5.0 {
                pred += 0.5 * (2.0 * PI).ln() + (sp - 0.5) * y.abs().ln() - PI * y.abs() / 2.0;
            } else {
                pred += log_gamma(Complex64::new(sp, y)).unwrap().re;
            }
        }
        assert!((lg.re - pred).abs() < 2.0f64.ln(), "log|γ| = {}, predicted {}", lg.re, pred);
    }

    #[test]
    fn gamma_factor_pole_is_error() {
        let spec = fixture_pair(EvaluationMode::DiffPoint);
        // t_f = t_g ⇒ one ordinate vanishes; s = 0 puts that factor at Γ(0)
        assert!(gamma_factor(&spec, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn smoothed_sum_nonnegative_for_equal_forms_at_t_zero() {
        let spec = fixture_pair(EvaluationMode::DiffPoint); // f = g, t = 0
        let v = bump(0.5, 2.5, (1.0, 2.0)).unwrap();
        let s = smoothed_sum(&spec, 50.0, &v).unwrap();
        assert!(s.im.abs() < 1e-12);
        assert!(s.re >= 0.0);
        // triangle equality with nonnegative summands
        let lam = hecke_eigenvalues(&spec.f, 125).unwrap();
        let abs_sum: f64 = (1..=125u64)
            .map(|n| lam[n as usize] * lam[n as usize] * v.eval(n as f64 / 50.0))
            .sum();
        assert!((s.re - abs_sum).abs() < 1e-10 * abs_sum.max(1.0));
    }

    #[test]
    fn smoothed_sum_conjugates_under_t_negation() {
        let base = fixture_pair(EvaluationMode::SumPoint);
        let mut neg = fixture_pair(EvaluationMode::SumPoint);
        neg.t = -base.t;
        let v = bump(0.5, 2.5, (1.0, 2.0)).unwrap();
        let a = smoothed_sum(&base, 40.0, &v).unwrap();
        let b = smoothed_sum(&neg, 40.0, &v).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn smoothed_sum_below_trivial_bound() {
        let spec = fixture_pair(EvaluationMode::SumPoint);
        let v = bump(0.5, 2.5, (1.0, 2.0)).unwrap();
        let n_scale = 1000.0;
        let s = smoothed_sum(&spec, n_scale, &v).unwrap();
        let lam = hecke_eigenvalues(&spec.f, 2500).unwrap();
        let trivial: f64 = (1..=2500u64)
            .map(|n| lam[n as usize].powi(2) * v.eval(n as f64 / n_scale))
            .sum();
        assert!(s.norm() <= trivial + 1e-9);
        let fitted = s.norm() / n_scale.sqrt();
        assert!(fitted.is_finite());
    }

    #[test]
    fn tail_check_passes_and_tightens_with_sigma() {
        let spec = fixture_pair(EvaluationMode::SumPoint);
        let r2 = dirichlet_tail_check(&spec, 2.0, 1000).unwrap();
        assert!(r2.pass, "{}", r2.detail);
        let r3 = dirichlet_tail_check(&spec, 3.0, 1000).unwrap();
        assert!(r3.pass);
        assert!(r3.measurements["envelope"] < r2.measurements["envelope"]);
        assert!(dirichlet_tail_check(&spec, 1.2, 1000).is_err());
    }
}
