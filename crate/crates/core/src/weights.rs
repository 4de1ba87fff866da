//! Compactly supported smooth weights, dyadic partitions of unity and
//! Mellin transforms.
//!
//! Weights carry derivative oracles backed by Taylor-jet arithmetic on the
//! closed-form mollifier expressions, not finite differences.

use crate::jet::Jet;
use crate::quadrature::{integrate_complex, integrate_real, QuadError};
use crate::report::VerificationReport;
use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("degenerate interval: {0}")]
    Domain(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

type JetFn = Arc<dyn Fn(f64, usize) -> Jet + Send + Sync>;

/// Smooth weight supported in [a, b] ⊂ (0, ∞) with derivative oracles.
#[derive(Clone)]
pub struct SmoothWeight {
    pub support: (f64, f64),
    pub inert_scale: f64,
    pub max_order: usize,
    jet_fn: JetFn,
}

impl std::fmt::Debug for SmoothWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothWeight")
            .field("support", &self.support)
            .field("inert_scale", &self.inert_scale)
            .finish()
    }
}

impl SmoothWeight {
    pub fn from_jet_fn(
        support: (f64, f64),
        inert_scale: f64,
        max_order: usize,
        jet_fn: impl Fn(f64, usize) -> Jet + Send + Sync + 'static,
    ) -> Self {
        SmoothWeight {
            support,
            inert_scale,
            max_order,
            jet_fn: Arc::new(jet_fn),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.support.0 || x >= self.support.1 {
            return 0.0;
        }
        (self.jet_fn)(x, 0).value()
    }

    /// j-th derivative at x; identically zero outside the open support.
    pub fn deriv(&self, j: usize, x: f64) -> f64 {
        if x <= self.support.0 || x >= self.support.1 {
            return 0.0;
        }
        (self.jet_fn)(x, j).derivative(j)
    }

    /// Taylor jet of the weight at x up to `order`.
    pub fn jet(&self, x: f64, order: usize) -> Jet {
        if x <= self.support.0 || x >= self.support.1 {
            return Jet::constant(0.0, order);
        }
        (self.jet_fn)(x, order)
    }

    pub fn integral(&self) -> Result<f64, WeightError> {
        let (v, _) = integrate_real(
            &|x| self.eval(x),
            self.support.0,
            self.support.1,
            1e-12,
            32,
        )?;
        Ok(v)
    }

    /// Same shape rescaled so the weight integrates to 1.
    pub fn normalized_unit_mass(&self) -> Result<SmoothWeight, WeightError> {
        let mass = self.integral()?;
        if mass <= 0.0 {
            return Err(WeightError::Domain("weight has nonpositive mass".into()));
        }
        let inner = self.jet_fn.clone();
        let inv = 1.0 / mass;
        Ok(SmoothWeight {
            support: self.support,
            inert_scale: self.inert_scale,
            max_order: self.max_order,
            jet_fn: Arc::new(move |x, ord| inner(x, ord) * inv),
        })
    }
}

/// Smooth one-sided step: 0 for v ≤ 0, 1 for v ≥ 1, built from e^{-1/v}.
fn step_jet(v: &Jet) -> Jet {
    let order = v.order();
    let v0 = v.value();
    // e^{-1/v} is below 1e-43 here; the flat tails are exact zeros/ones.
    if v0 <= 1e-2 {
        return Jet::constant(0.0, order);
    }
    if v0 >= 1.0 - 1e-2 {
        return Jet::constant(1.0, order);
    }
    let g = (-v.recip()).exp();
    let one_minus = &Jet::constant(1.0, order) - v;
    let g2 = (-one_minus.recip()).exp();
    let denom = &g + &g2;
    g / denom
}

/// Plateau bump: smooth, ≡1 on `plateau`, supported in (a, b).
pub fn bump(a: f64, b: f64, plateau: (f64, f64)) -> Result<SmoothWeight, WeightError> {
    let (p1, p2) = plateau;
    if !(a < p1 && p1 < p2 && p2 < b) {
        return Err(WeightError::Domain(format!(
            "need a < plateau.0 < plateau.1 < b, got a={a}, plateau=({p1},{p2}), b={b}"
        )));
    }
    let rise = p1 - a;
    let fall = b - p2;
    let inert_scale = (a.abs() / rise).max(b.abs() / fall).max(1.0);
    Ok(SmoothWeight::from_jet_fn(
        (a, b),
        inert_scale,
        12,
        move |x, order| {
            let t = Jet::variable(x, order);
            if x < p1 {
                step_jet(&((t - a) * (1.0 / rise)))
            } else if x > p2 {
                step_jet(&((-&t + b) * (1.0 / fall)))
            } else {
                Jet::constant(1.0, order)
            }
        },
    ))
}

/// Smooth dyadic partition of unity on [lo, hi].
#[derive(Debug, Clone)]
pub struct DyadicPartition {
    pub pieces: Vec<SmoothWeight>,
    pub range: (f64, f64),
}

impl DyadicPartition {
    pub fn sum_at(&self, x: f64) -> f64 {
        self.pieces.iter().map(|p| p.eval(x)).sum()
    }
}

/// Ratio-2 dyadic windows [c, 4c] with 50% overlap whose telescoping sum is 1.
pub fn dyadic_partition(lo: f64, hi: f64) -> Result<DyadicPartition, WeightError> {
    if !(0.0 < lo && lo < hi) {
        return Err(WeightError::Domain(format!(
            "need 0 < lo < hi, got lo={lo}, hi={hi}"
        )));
    }
    let l_lo = lo.log2();
    let l_hi = hi.log2();
    let mut pieces = Vec::new();
    let k_min = (l_lo - 2.0).floor() as i64;
    let k_max = l_hi.floor() as i64 + 1;
    for k in k_min..=k_max {
        let kf = k as f64;
        // piece_k(x) = s(log2 x − k) − s(log2 x − k − 1), supported in (2^k, 2^{k+2})
        if kf >= l_hi || kf + 2.0 <= l_lo {
            continue;
        }
        let support = (2f64.powi(k as i32), 2f64.powi(k as i32 + 2));
        pieces.push(SmoothWeight::from_jet_fn(support, 1.0, 12, move |x, order| {
            let t = Jet::variable(x, order);
            let lg = t.ln() * std::f64::consts::LOG2_E;
            let a = step_jet(&(lg.clone() - kf));
            let b = step_jet(&(lg - (kf + 1.0)));
            a - b
        }));
    }
    Ok(DyadicPartition {
        pieces,
        range: (lo, hi),
    })
}

/// Mellin transform ∫₀^∞ w(z) z^{s−1} dz by adaptive quadrature; entire in s.
pub fn mellin(w: &SmoothWeight, s: Complex64) -> Result<Complex64, WeightError> {
    let (a, b) = w.support;
    let (v, _) = integrate_complex(
        &|z: f64| {
            let zc = Complex64::new(z, 0.0);
            Complex64::new(w.eval(z), 0.0) * (zc.ln() * (s - 1.0)).exp()
        },
        a,
        b,
        1e-13 * (1.0 + (b - a)),
        (32.0 + (b - a) * s.im.abs() / 4.0).min(4096.0) as usize,
    )?;
    Ok(v)
}

/// Sample |x^j w^(j)(x)| / X^j over the support and report the constants c_j.
pub fn check_inert(w: &SmoothWeight, x_scale: f64, jmax: usize) -> VerificationReport {
    let mut report = VerificationReport::new("check_inert");
    let (a, b) = w.support;
    let n = 600;
    for j in 0..=jmax.min(w.max_order) {
        let mut cj: f64 = 0.0;
        for i in 0..=n {
            let x = a + (b - a) * i as f64 / n as f64;
            let v = (x.abs().powi(j as i32) * w.deriv(j, x)).abs() / x_scale.powi(j as i32);
            cj = cj.max(v);
        }
        report.record(format!("c_{j}"), cj);
        report.check(cj.is_finite(), &format!("c_{j} not finite"));
    }
    report
}
