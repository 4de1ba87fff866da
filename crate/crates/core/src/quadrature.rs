//! Shared adaptive quadrature on finite intervals.
//!
//! Adaptive Simpson with a fixed initial panelling, used by the Mellin
//! transform, the delta-symbol weight, the oscillatory oracle and the Bessel
//! kernels. Complex-valued integrands are integrated componentwise.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("quadrature budget exceeded: best estimate {estimate:?} with error bound {error_bound}")]
    BudgetExceeded {
        estimate: Complex64,
        error_bound: f64,
    },
}

const MAX_DEPTH: usize = 48;

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
///
/// `initial_panels` controls the pre-subdivision; oscillatory callers size it
/// so each panel sees at most a fraction of a period.
pub fn integrate_complex<F>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    initial_panels: usize,
) -> Result<(Complex64, f64), QuadError>
where
    F: Fn(f64) -> Complex64,
{
    assert!(b >= a);
    if a == b {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let n = initial_panels.max(1);
    let h = (b - a) / n as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err_total = 0.0;
    let panel_tol = tol / n as f64;
    let mut exceeded = false;
    for i in 0..n {
        let lo = a + i as f64 * h;
        let hi = if i == n - 1 { b } else { lo + h };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        let whole = simpson(lo, hi, flo, fmid, fhi);
        let (v, e, ok) = adapt(f, lo, hi, flo, fmid, fhi, whole, panel_tol, MAX_DEPTH);
        total += v;
        err_total += e;
        exceeded |= !ok;
    }
    if exceeded && err_total > tol * 10.0 {
        return Err(QuadError::BudgetExceeded {
            estimate: total,
            error_bound: err_total,
        });
    }
    Ok((total, err_total))
}

pub fn integrate_real<F>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    initial_panels: usize,
) -> Result<(f64, f64), QuadError>
where
    F: Fn(f64) -> f64,
{
    let (v, e) = integrate_complex(&|x| Complex64::new(f(x), 0.0), a, b, tol, initial_panels)?;
    Ok((v.re, e))
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: usize,
) -> (Complex64, f64, bool)
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol || depth == 0 {
        let refined = left + right + delta / 15.0;
        (refined, delta.norm() / 15.0, depth > 0)
    } else {
        let (lv, le, lok) = adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
        let (rv, re, rok) = adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        (lv + rv, le + re, lok && rok)
    }
}

/// Fixed-order Gauss-Legendre nodes/weights on [-1, 1] (16 point).
pub const GL16_NODES: [f64; 16] = [
    -0.9894009349916499,
    -0.9445750230732326,
    -0.8656312023878318,
    -0.755404408355003,
    -0.6178762444026438,
    -0.45801677765722737,
    -0.2816035507792589,
    -0.09501250983763744,
    0.09501250983763744,
    0.2816035507792589,
    0.45801677765722737,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
pub const GL16_WEIGHTS: [f64; 16] = [
    0.027152459411754094,
    0.062253523938647894,
    0.09515851168249278,
    0.12462897125553387,
    0.14959598881657673,
    0.16915651939500254,
    0.18260341504492358,
    0.18945061045506849,
    0.18945061045506849,
    0.18260341504492358,
    0.16915651939500254,
    0.14959598881657673,
    0.12462897125553387,
    0.09515851168249278,
    0.062253523938647894,
    0.027152459411754094,
];

/// Composite 16-point Gauss-Legendre over `panels` equal panels of [a, b].
pub fn gauss_composite_complex<F>(f: &F, a: f64, b: f64, panels: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..panels {
        let lo = a + i as f64 * h;
        let c = lo + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in GL16_NODES.iter().zip(GL16_WEIGHTS.iter()) {
            total += f(c + half * x) * (*w * half);
        }
    }
    total
}

pub fn gauss_composite_real<F>(f: &F, a: f64, b: f64, panels: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    gauss_composite_complex(&|x| Complex64::new(f(x), 0.0), a, b, panels).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let (v, _) = integrate_real(&|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12, 4).unwrap();
        // x^4/4 - x^2 + x at 2 = 4 - 4 + 2
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_sine() {
        let (v, e) = integrate_real(&|x| (40.0 * x).sin(), 0.0, PI, 1e-10, 64).unwrap();
        let exact = (1.0 - (40.0 * PI).cos()) / 40.0;
        assert!((v - exact).abs() < 1e-9, "v={v} exact={exact} err={e}");
    }

    #[test]
    fn gauss_composite_matches_adaptive() {
        let f = |x: f64| Complex64::new((3.0 * x).cos(), x.exp());
        let g = gauss_composite_complex(&f, 0.0, 1.0, 4);
        let (a, _) = integrate_complex(&f, 0.0, 1.0, 1e-12, 4).unwrap();
        assert!((g - a).norm() < 1e-12);
    }
}
