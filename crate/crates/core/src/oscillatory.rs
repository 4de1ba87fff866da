//! Oscillatory integral engine: oscillation-aware quadrature, nonstationary
//! decay certificates and the stationary-phase expansion.
//!
//! The engine works internally in the e^{ih} convention; phases declared in
//! the e(h) = e^{2πih} convention are scaled by 2π on entry so the two
//! conventions cannot be mixed up downstream.

use crate::jet::Jet;
use crate::quadrature::{integrate_complex, QuadError};
use crate::weights::SmoothWeight;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OscError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("descriptor certificate refused: {0}")]
    CertificateRefused(String),
    #[error("no stationary point: h' does not change sign on the interval")]
    NoStationaryPoint,
    #[error("multiple stationary points detected; interval is ambiguous")]
    AmbiguousStationary,
    #[error("degenerate phase: |h''(t0)| = {h2} below threshold {threshold}")]
    DegeneratePhase { h2: f64, threshold: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseConvention {
    /// Integrand e^{i h(t)}.
    ExpIH,
    /// Integrand e(h(t)) = e^{2πi h(t)}.
    EOfH,
}

/// Bound descriptors of the integration-by-parts lemma and the
/// stationary-phase proposition, in the units of the declared convention.
#[derive(Debug, Clone, Copy)]
pub struct PhaseDescriptors {
    pub x0: f64,
    pub v0: f64,
    pub y0: f64,
    pub q0: f64,
    pub r0: f64,
    pub omega: f64,
}

impl Default for PhaseDescriptors {
    fn default() -> Self {
        PhaseDescriptors {
            x0: 1.0,
            v0: 1.0,
            y0: 1.0,
            q0: 1.0,
            r0: 1.0,
            omega: 1.0,
        }
    }
}

type JetFn = Arc<dyn Fn(f64, usize) -> Jet + Send + Sync>;

#[derive(Clone)]
pub struct PhaseFunction {
    jet_fn: JetFn,
    pub convention: PhaseConvention,
    pub descriptors: PhaseDescriptors,
}

impl std::fmt::Debug for PhaseFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhaseFunction")
            .field("convention", &self.convention)
            .field("descriptors", &self.descriptors)
            .finish()
    }
}

impl PhaseFunction {
    pub fn from_jet_fn(
        convention: PhaseConvention,
        descriptors: PhaseDescriptors,
        jet_fn: impl Fn(f64, usize) -> Jet + Send + Sync + 'static,
    ) -> Self {
        PhaseFunction {
            jet_fn: Arc::new(jet_fn),
            convention,
            descriptors,
        }
    }

    /// Phase value in the declared convention.
    pub fn eval(&self, t: f64) -> f64 {
        (self.jet_fn)(t, 0).value()
    }

    /// j-th derivative in the declared convention.
    pub fn deriv(&self, j: usize, t: f64) -> f64 {
        (self.jet_fn)(t, j).derivative(j)
    }

    fn scale(&self) -> f64 {
        match self.convention {
            PhaseConvention::ExpIH => 1.0,
            PhaseConvention::EOfH => 2.0 * PI,
        }
    }

    /// Phase value in the internal e^{ih} convention.
    pub fn internal_eval(&self, t: f64) -> f64 {
        self.eval(t) * self.scale()
    }

    pub fn internal_deriv(&self, j: usize, t: f64) -> f64 {
        self.deriv(j, t) * self.scale()
    }

    fn internal_jet(&self, t: f64, order: usize) -> Jet {
        (self.jet_fn)(t, order) * self.scale()
    }

    /// Sampled finite-difference consistency check of the derivative oracle.
    pub fn validate(&self, interval: (f64, f64), tol: f64) -> bool {
        let (a, b) = interval;
        let h = (b - a) * 1e-6;
        (0..=20).all(|i| {
            let t = a + (b - a) * (0.02 + 0.96 * i as f64 / 20.0);
            let fd = (self.eval(t + h) - self.eval(t - h)) / (2.0 * h);
            let an = self.deriv(1, t);
            (fd - an).abs() <= tol * (1.0 + fd.abs().max(an.abs()))
        })
    }

    /// Negated phase (conjugates the integral).
    pub fn negated(&self) -> PhaseFunction {
        let inner = self.jet_fn.clone();
        PhaseFunction {
            jet_fn: Arc::new(move |t, ord| -&inner(t, ord)),
            convention: self.convention,
            descriptors: self.descriptors,
        }
    }
}

/// ∫ w(t) · e^{i·phase(t)} dt with oscillation-aware panel sizing.
pub fn oscillatory_quadrature(
    w: &SmoothWeight,
    h: &PhaseFunction,
    tol: f64,
) -> Result<Complex64, OscError> {
    let (a, b) = w.support;
    // Panel count from the largest local frequency on the support.
    let mut max_freq: f64 = 0.0;
    for i in 0..=64 {
        let t = a + (b - a) * i as f64 / 64.0;
        max_freq = max_freq.max(h.internal_deriv(1, t).abs());
    }
    let periods = (b - a) * max_freq / (2.0 * PI);
    let panels = ((periods * 4.0).ceil() as usize + 16).min(500_000);
    let f = |t: f64| Complex64::from_polar(w.eval(t), h.internal_eval(t));
    let (v, _) = integrate_complex(&f, a, b, tol, panels)?;
    Ok(v)
}

/// Integration-by-parts decay certificate of the nonstationary regime:
/// (β−α)·X₀·[(Q₀R₀/√Y₀)^{−A} + (R₀V₀)^{−A}].
///
/// Descriptors are sample-validated against the declared-convention phase
/// before the bound is issued.
pub fn nonstationary_bound(
    w: &SmoothWeight,
    h: &PhaseFunction,
    a_order: u32,
) -> Result<f64, OscError> {
    let (a, b) = w.support;
    let d = h.descriptors;
    let n = 200;
    let mut min_h1 = f64::INFINITY;
    let mut max_c = [0.0f64; 2]; // recorded constants for j = 2, 3
    for i in 0..=n {
        let t = a + (b - a) * i as f64 / n as f64;
        if w.eval(t) == 0.0 {
            continue;
        }
        min_h1 = min_h1.min(h.deriv(1, t).abs());
        for (slot, j) in [(0usize, 2usize), (1, 3)] {
            let ratio = h.deriv(j, t).abs() / (d.y0 * d.q0.powi(-(j as i32)));
            max_c[slot] = max_c[slot].max(ratio);
        }
    }
    if min_h1.is_finite() && min_h1 < 0.999 * d.r0 {
        return Err(OscError::CertificateRefused(format!(
            "sampled min |h'| = {min_h1} below declared R0 = {}",
            d.r0
        )));
    }
    if max_c.iter().any(|&c| c > 1e3) {
        return Err(OscError::CertificateRefused(format!(
            "sampled |h^(j)| exceeds Y0 Q0^-j by factor {:?}",
            max_c
        )));
    }
    let a_f = a_order as f64;
    let term1 = (d.q0 * d.r0 / d.y0.sqrt()).powf(-a_f);
    let term2 = (d.r0 * d.v0).powf(-a_f);
    Ok((b - a) * d.x0 * (term1 + term2))
}

/// Unique stationary point of the phase on the interval, by bisection on h'
/// followed by Newton polish.
pub fn find_stationary(h: &PhaseFunction, interval: (f64, f64)) -> Result<f64, OscError> {
    let (alpha, beta) = interval;
    if !(alpha < beta) {
        return Err(OscError::Domain("empty interval".into()));
    }
    let n = 800;
    let mut crossings = Vec::new();
    let mut prev = h.deriv(1, alpha);
    for i in 1..=n {
        let t = alpha + (beta - alpha) * i as f64 / n as f64;
        let cur = h.deriv(1, t);
        if prev == 0.0 {
            crossings.push((t - (beta - alpha) / n as f64, t));
        } else if prev.signum() != cur.signum() && cur != 0.0 {
            crossings.push((t - (beta - alpha) / n as f64, t));
        }
        prev = cur;
    }
    match crossings.len() {
        0 => return Err(OscError::NoStationaryPoint),
        1 => {}
        _ => return Err(OscError::AmbiguousStationary),
    }
    let (mut lo, mut hi) = crossings[0];
    let (mut flo, _fhi) = (h.deriv(1, lo), h.deriv(1, hi));
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = h.deriv(1, mid);
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut t0 = 0.5 * (lo + hi);
    for _ in 0..4 {
        let f1 = h.deriv(1, t0);
        let f2 = h.deriv(2, t0);
        if f2 != 0.0 {
            let step = f1 / f2;
            let next = t0 - step;
            if next > alpha && next < beta {
                t0 = next;
            }
        }
    }
    Ok(t0)
}

/// Terms p_n(t0) of the stationary-phase expansion, in the internal e^{ih}
/// convention, together with t0 and h''(t0).
pub struct StationaryExpansion {
    pub t0: f64,
    pub h2: f64,
    pub terms: Vec<Complex64>,
    /// e^{ih(t0)}/√(h''(t0)) · Σ terms
    pub value: Complex64,
}

/// Stationary-phase expansion of ∫ w e^{ih}: leading factor
/// e^{ih(t0)}/√h''(t0) times Σ_{n≤order} p_n(t0) with
/// p_n = √(2π) e^{iπ/4}/n! (i/(2h''))ⁿ G^{(2n)}(t0).
pub fn stationary_phase_expansion(
    w: &SmoothWeight,
    h: &PhaseFunction,
    order: usize,
) -> Result<Complex64, OscError> {
    Ok(stationary_phase_terms(w, h, order)?.value)
}

pub fn stationary_phase_terms(
    w: &SmoothWeight,
    h: &PhaseFunction,
    order: usize,
) -> Result<StationaryExpansion, OscError> {
    let (a, b) = w.support;
    let t0 = find_stationary(h, (a, b))?;
    let d = h.descriptors;
    let scale = match h.convention {
        PhaseConvention::ExpIH => 1.0,
        PhaseConvention::EOfH => 2.0 * PI,
    };
    let h2_raw = h.deriv(2, t0);
    let threshold = 1e-8 * d.y0 / (d.q0 * d.q0);
    if h2_raw.abs() < threshold {
        return Err(OscError::DegeneratePhase {
            h2: h2_raw.abs(),
            threshold,
        });
    }
    if h2_raw < 0.0 {
        // conjugate symmetry: ∫ w e^{ih} = conj(∫ w e^{-ih})
        let neg = h.negated();
        let mut exp = stationary_phase_terms(w, &neg, order)?;
        exp.terms.iter_mut().for_each(|p| *p = p.conj());
        exp.value = exp.value.conj();
        exp.h2 = -exp.h2;
        return Ok(exp);
    }

    let need = 2 * order;
    let hjet = h.internal_jet(t0, (need + 1).max(2));
    let wjet = w.jet(t0, need);
    let h2 = 2.0 * hjet.coeffs[2]; // = scale * h2_raw
    debug_assert!((h2 - scale * h2_raw).abs() <= 1e-9 * h2.abs());

    // H(t) = h(t) − h(t0) − ½h''(t0)(t−t0)²: Taylor coefficients of h with
    // orders 0..2 removed.
    let mut hcoef = hjet.coeffs.clone();
    hcoef[0] = 0.0;
    if hcoef.len() > 1 {
        hcoef[1] = 0.0; // zero up to Newton tolerance; removed exactly
    }
    if hcoef.len() > 2 {
        hcoef[2] = 0.0;
    }

    // E = e^{iH}: complex Taylor coefficients via E' = iH'E.
    let mut e = vec![Complex64::new(0.0, 0.0); need + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for k in 0..need {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..=k {
            if j + 1 < hcoef.len() {
                s += Complex64::i() * ((j + 1) as f64 * hcoef[j + 1]) * e[k - j];
            }
        }
        e[k + 1] = s / (k + 1) as f64;
    }

    // G = w·E Taylor coefficients, then G^{(2n)}(t0) = (2n)!·g[2n].
    let mut g = vec![Complex64::new(0.0, 0.0); need + 1];
    for k in 0..=need {
        for j in 0..=k {
            g[k] += wjet.coeffs[j] * e[k - j];
        }
    }

    let front = Complex64::from_polar((2.0 * PI).sqrt(), PI / 4.0);
    let mut terms = Vec::with_capacity(order + 1);
    let mut fact_n = 1.0;
    let mut fact_2n = 1.0;
    for n in 0..=order {
        if n > 0 {
            fact_n *= n as f64;
            fact_2n *= (2 * n - 1) as f64 * (2 * n) as f64;
        }
        let g2n = g[2 * n] * fact_2n;
        let pn = front / fact_n * (Complex64::i() / (2.0 * h2)).powu(n as u32) * g2n;
        terms.push(pn);
    }
    let sum: Complex64 = terms.iter().sum();
    let value = Complex64::from_polar(1.0, hjet.coeffs[0]) / h2.sqrt() * sum;
    Ok(StationaryExpansion {
        t0,
        h2,
        terms,
        value,
    })
}

/// Quadratic phase λ(t−t0)²/2 (+ optional cubic μ(t−t0)³) in e^{ih}.
pub fn polynomial_phase(
    lambda: f64,
    mu: f64,
    t0: f64,
    descriptors: PhaseDescriptors,
) -> PhaseFunction {
    PhaseFunction::from_jet_fn(PhaseConvention::ExpIH, descriptors, move |t, ord| {
        let dt = Jet::variable(t, ord) - t0;
        let sq = &dt * &dt;
        let cb = &sq * &dt;
        sq * (lambda / 2.0) + cb * mu
    })
}
