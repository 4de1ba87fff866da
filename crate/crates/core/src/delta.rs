//! Delta-symbol expansion: the Kronecker delta as a weighted sum of additive
//! characters e(an/q) with analytic weights g(q,x), generated by a unit-mass
//! smooth mollifier on [Q/2, Q].
//!
//! The mollifier ω (discrete unit mass: Σ_{d≥1} ω(d) = 1) generates
//!   Δ_q(u) = Σ_{r≥1} (1/(qr)) (ω(qr) − ω(|u|/(qr))),
//! and δ(n) = Σ_q Σ*_{a mod q} e(an/q) Δ_q(n) exactly. The analytic weight is
//! the Fourier transform g(q,x) = ∫ χ(u) Δ_q(u) e(−ux/(qQ)) du with χ a
//! smooth cutoff that is 1 on [−Q², Q²], so that the x-integral form
//!   δ(n) = (1/Q) Σ_{q≤Q} (1/q) Σ*_a e(an/q) ∫ g(q,x) e(nx/(qQ)) dx
//! holds for |n| ≤ Q². The smooth window W(x/x_cutoff) truncating the
//! x-integral is applied exactly by swapping integrals: windowing in x is
//! convolution against the kernel (xc/(qQ))·Ŵ(xc·(u−n)/(qQ)) in u.

use crate::hecke::{self, HeckeError};
use crate::quadrature::{gauss_composite_real, QuadError};
use crate::report::VerificationReport;
use crate::weights::{bump, SmoothWeight, WeightError};
use std::f64::consts::PI;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeltaError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

/// Fourier transform table of the x-window, Ŵ(ξ) = ∫ W(y) e(−ξy) dy,
/// cubic-interpolated on a uniform grid (Ŵ is real and even).
struct WindowTransform {
    step: f64,
    values: Vec<f64>,
}

impl WindowTransform {
    fn build(window: &SmoothWeight) -> Self {
        let (a, b) = window.support;
        let step = 2e-3;
        let xi_max = 25.0;
        let count = (xi_max / step) as usize + 4;
        let mut values = Vec::with_capacity(count);
        for i in 0..count {
            let xi = i as f64 * step;
            // W is even, so Ŵ(ξ) = ∫ W(y) cos(2πξy) dy
            let panels = 8 + (4.0 * xi * (b - a) / 4.0).ceil() as usize;
            let v = gauss_composite_real(
                &|y: f64| window.eval(y) * (2.0 * PI * xi * y).cos(),
                a,
                b,
                panels,
            );
            values.push(v);
        }
        WindowTransform { step, values }
    }

    fn eval(&self, xi: f64) -> f64 {
        let x = xi.abs() / self.step;
        let i = x.floor() as usize;
        if i + 2 >= self.values.len() || i == 0 {
            if i == 0 {
                // linear near the origin of the grid
                let t = x;
                return self.values[0] * (1.0 - t) + self.values[1] * t;
            }
            return 0.0;
        }
        // Catmull-Rom through the four surrounding samples
        let t = x - i as f64;
        let (p0, p1, p2, p3) = (
            self.values[i - 1],
            self.values[i],
            self.values[i + 1],
            self.values[i + 2],
        );
        0.5 * ((2.0 * p1)
            + (-p0 + p2) * t
            + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t
            + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t)
    }
}

pub struct DeltaParams {
    /// The modulus bound Q of the expansion.
    pub big_q: u64,
    /// Scale of the x-window: the window is supported on |x| ≤ 2·x_cutoff.
    pub x_cutoff: f64,
    pub quad_tol: f64,
    /// The generating mollifier ω, supported in [Q/2, Q], discrete unit mass.
    pub seed_weight: SmoothWeight,
    /// Smooth cutoff χ, 1 on [−Q², Q²], supported in [−2Q², 2Q²].
    chi: SmoothWeight,
    /// Smooth x-window W, supported in [−2, 2], 1 on [−1, 1]; applied at
    /// scale x_cutoff.
    pub window: SmoothWeight,
    w_hat: WindowTransform,
}

impl DeltaParams {
    pub fn new(big_q: u64, x_cutoff: f64, quad_tol: f64) -> Result<Self, DeltaError> {
        if big_q < 4 {
            return Err(DeltaError::Domain(format!(
                "modulus bound must be >= 4, got {big_q}"
            )));
        }
        if x_cutoff < 2.0 {
            return Err(DeltaError::Domain(format!(
                "x_cutoff must be >= 2, got {x_cutoff}"
            )));
        }
        let qf = big_q as f64;
        let raw = bump(qf / 2.0, qf, (0.6 * qf, 0.9 * qf))?;
        // normalize to unit mass over the integers
        let mass: f64 = (1..=2 * big_q).map(|d| raw.eval(d as f64)).sum();
        if mass <= 0.0 {
            return Err(DeltaError::Domain("mollifier has no integer mass".into()));
        }
        let seed_weight = scale_weight(raw, 1.0 / mass);
        let q2 = qf * qf;
        let chi = bump(-2.0 * q2, 2.0 * q2, (-q2, q2))?;
        let window = bump(-2.0, 2.0, (-1.0, 1.0))?;
        let w_hat = WindowTransform::build(&window);
        Ok(DeltaParams {
            big_q,
            x_cutoff,
            quad_tol,
            seed_weight,
            chi,
            window,
            w_hat,
        })
    }

    pub fn with_defaults(big_q: u64) -> Result<Self, DeltaError> {
        DeltaParams::new(big_q, 128.0, 1e-9)
    }

    /// The DFI kernel Δ_q(u) = Σ_r (1/(qr))(ω(qr) − ω(|u|/(qr))).
    pub fn delta_kernel(&self, q: u64, u: f64) -> f64 {
        let qq = self.big_q as f64;
        let qf = q as f64;
        let ua = u.abs();
        let mut s = 0.0;
        // ω(qr) != 0 needs qr in (Q/2, Q)
        let r_hi = (qq / qf).floor() as u64;
        for r in 1..=r_hi {
            let d = qf * r as f64;
            if d > qq / 2.0 {
                s += self.seed_weight.eval(d) / d;
            }
        }
        // ω(|u|/(qr)) != 0 needs r in (|u|/(qQ), 2|u|/(qQ))
        let r_lo = ((ua / (qf * qq)).floor() as u64).max(1);
        let r_hi = (2.0 * ua / (qf * qq)).ceil() as u64 + 1;
        for r in r_lo..=r_hi {
            let d = qf * r as f64;
            s -= self.seed_weight.eval(ua / d) / d;
        }
        s
    }

    /// Constant value of Δ_q on |u| < qQ/2 (where the second sum is empty).
    pub fn delta_kernel_const(&self, q: u64) -> f64 {
        let qq = self.big_q as f64;
        let qf = q as f64;
        let mut s = 0.0;
        for r in 1..=(qq / qf).floor() as u64 {
            let d = qf * r as f64;
            if d > qq / 2.0 {
                s += self.seed_weight.eval(d) / d;
            }
        }
        s
    }
}

fn scale_weight(w: SmoothWeight, factor: f64) -> SmoothWeight {
    let support = w.support;
    let inert_scale = w.inert_scale;
    let max_order = w.max_order;
    SmoothWeight::from_jet_fn(support, inert_scale, max_order, move |x, ord| {
        w.jet(x, ord) * factor
    })
}

/// The analytic weight g(q,x) = ∫ χ(u) Δ_q(u) e(−ux/(qQ)) du, by direct
/// (real, cosine-transform) quadrature over the support of χ.
pub fn g_weight(q: u64, x: f64, params: &DeltaParams) -> Result<f64, DeltaError> {
    if q < 1 || q > params.big_q {
        return Err(DeltaError::Domain(format!(
            "modulus {q} outside 1..={}",
            params.big_q
        )));
    }
    let qq = params.big_q as f64;
    let hi = 2.0 * qq * qq;
    let freq = x.abs() / (q as f64 * qq); // cycles per unit u
    let panels = (200.0 + 6.0 * freq * hi).ceil() as usize;
    // integrand is even in u
    let v = gauss_composite_real(
        &|u: f64| {
            params.chi.eval(u) * params.delta_kernel(q, u) * (2.0 * PI * freq * u).cos()
        },
        0.0,
        hi,
        panels.min(2_000_000),
    );
    Ok(2.0 * v)
}

/// (1/(qQ)) ∫ W(x/x_cutoff) g(q,x) e(nx/(qQ)) dx, evaluated exactly as the
/// convolution ∫ χ(u) Δ_q(u) K(u−n) du with K(v) = (xc/(qQ))·Ŵ(xc·v/(qQ)).
fn windowed_transform(params: &DeltaParams, q: u64, n: i64) -> f64 {
    let qq = params.big_q as f64;
    let scale = q as f64 * qq / params.x_cutoff; // kernel width unit
    let half = 25.0 * scale;
    let nf = n as f64;
    let lo = (nf - half).max(-2.0 * qq * qq);
    let hi = (nf + half).min(2.0 * qq * qq);
    if lo >= hi {
        return 0.0;
    }
    // resolve both the kernel (scale `scale`) and the mollifier ramps (~Q/10)
    let feature = (scale / 4.0).min(qq / 20.0).max(1e-3);
    let panels = (((hi - lo) / feature).ceil() as usize).clamp(64, 400_000);
    gauss_composite_real(
        &|u: f64| {
            params.chi.eval(u)
                * params.delta_kernel(q, u)
                * params.w_hat.eval((u - nf) / scale)
                / scale
        },
        lo,
        hi,
        panels,
    )
}

/// The delta expansion (1/Q)·Σ_{q≤Q} (1/q) Σ*_{a mod q} e(an/q) ·
/// ∫ W(x/x_cutoff) g(q,x) e(nx/(qQ)) dx ≈ δ(n). The a-sum is the exact
/// Ramanujan sum c_q(n).
pub fn delta_expansion(n: i64, params: &DeltaParams) -> Result<f64, DeltaError> {
    let q2 = (params.big_q * params.big_q) as i64;
    if n.abs() > q2 {
        return Err(DeltaError::Domain(format!(
            "|n| = {} exceeds Q^2 = {q2}",
            n.abs()
        )));
    }
    let mut total = 0.0;
    for q in 1..=params.big_q {
        let cq = hecke::ramanujan_sum(q, n.unsigned_abs())?;
        if cq != 0 {
            total += cq as f64 * windowed_transform(params, q, n);
        }
    }
    Ok(total)
}

/// Machine-precision evaluation of the same identity with the x-integral
/// carried out exactly (Fourier inversion): δ(n) = Σ_q c_q(n)·Δ_q(n).
pub fn delta_exact(n: i64, params: &DeltaParams) -> Result<f64, DeltaError> {
    let mut total = 0.0;
    for q in 1..=params.big_q {
        let cq = hecke::ramanujan_sum(q, n.unsigned_abs())?;
        if cq != 0 {
            total += cq as f64 * params.delta_kernel(q, n as f64);
        }
    }
    Ok(total)
}

/// Sweep n over a range; reports the maximum deviation from δ(n) and the
/// modulus profile of the worst point.
pub fn verify_delta(
    n_lo: i64,
    n_hi: i64,
    params: &DeltaParams,
) -> Result<VerificationReport, DeltaError> {
    let start = Instant::now();
    let mut report = VerificationReport::new("delta_identity");
    report.tolerance = Some(1e-6);
    if n_lo > n_hi {
        report.detail = "empty range".into();
        report.wall_time_s = start.elapsed().as_secs_f64();
        return Ok(report);
    }
    let mut max_err = 0.0f64;
    let mut worst_n = n_lo;
    for n in n_lo..=n_hi {
        let v = delta_expansion(n, params)?;
        let target = if n == 0 { 1.0 } else { 0.0 };
        let err = (v - target).abs();
        if err > max_err {
            max_err = err;
            worst_n = n;
        }
    }
    report.record("max_error", max_err);
    report.record("worst_n", worst_n as f64);
    // modulus profile of partial sums at the worst point
    let mut partial = 0.0;
    for q in 1..=params.big_q {
        let cq = hecke::ramanujan_sum(q, worst_n.unsigned_abs())?;
        if cq != 0 {
            partial += cq as f64 * windowed_transform(params, q, worst_n);
        }
        if q % (params.big_q / 4).max(1) == 0 {
            report.record(format!("partial_q{q}"), partial);
        }
    }
    let pass = max_err <= 1e-6;
    report.check(pass, &format!("max |expansion - delta| = {max_err:.3e}"));
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}
