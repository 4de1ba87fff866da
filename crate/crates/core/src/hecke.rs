//! Maass-form data model, Hecke eigenvalue extension, Ramanujan-sum
//! arithmetic, Rankin–Selberg Dirichlet coefficients and the bilinear
//! counting / quadratic-root helpers used by the shifted-sum analysis.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HeckeError {
    #[error("prime table does not cover prime {0}")]
    MissingPrime(u64),
    #[error("fixture i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("fixture parse: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("eigenvalue bound violated at p={p}: |{value}| > {bound}")]
    BoundViolated { p: u64, value: f64, bound: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("ramanujan-sum route disagreement at q={q}, n={n}: {direct} vs {moebius}")]
    RouteDisagreement { q: u64, n: u64, direct: i64, moebius: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Hecke–Maass cusp form for the full modular group, given by its spectral
/// parameter and a table of prime eigenvalues.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaassFormData {
    pub name: String,
    pub spectral_r: f64,
    pub parity: Parity,
    /// λ(p) per prime p.
    pub prime_table: BTreeMap<u64, f64>,
    pub source: String,
    /// Certified absolute accuracy of the tabulated eigenvalues.
    pub precision: f64,
}

#[derive(Deserialize)]
struct FixtureFile {
    name: String,
    #[serde(rename = "spectral_R")]
    spectral_r: f64,
    parity: Parity,
    eigenvalues: Vec<(u64, f64)>,
    source: String,
    precision: f64,
}

impl MaassFormData {
    pub fn from_json(text: &str) -> Result<Self, HeckeError> {
        let raw: FixtureFile = serde_json::from_str(text)?;
        let form = MaassFormData {
            name: raw.name,
            spectral_r: raw.spectral_r,
            parity: raw.parity,
            prime_table: raw.eigenvalues.into_iter().collect(),
            source: raw.source,
            precision: raw.precision,
        };
        form.check_bounds()?;
        Ok(form)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HeckeError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The bundled fixture: first even Hecke–Maass cusp form for SL₂(ℤ).
    pub fn fixture() -> Result<Self, HeckeError> {
        let path = concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/fixtures/maass_even_r13p78.json"
        );
        Self::load(path)
    }

    /// Best-known progress toward the Ramanujan conjecture: the prime
    /// eigenvalues must satisfy |λ(p)| ≤ p^{7/64} + p^{−7/64} (+ slack).
    fn check_bounds(&self) -> Result<(), HeckeError> {
        const THETA: f64 = 7.0 / 64.0;
        for (&p, &v) in &self.prime_table {
            let bound = (p as f64).powf(THETA) + (p as f64).powf(-THETA) + 1e-6;
            if v.abs() > bound {
                return Err(HeckeError::BoundViolated { p, value: v, bound });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluationMode {
    /// t = t_f + t_g
    SumPoint,
    /// t = t_f − t_g
    DiffPoint,
    Generic,
}

/// A Rankin–Selberg pair with the ordinate where the L-value is probed.
#[derive(Debug, Clone)]
pub struct RankinSelbergSpec {
    pub f: MaassFormData,
    pub g: MaassFormData,
    pub t: f64,
    pub mode: EvaluationMode,
}

impl RankinSelbergSpec {
    pub fn new(
        f: MaassFormData,
        g: MaassFormData,
        t: f64,
        mode: EvaluationMode,
    ) -> Result<Self, HeckeError> {
        let expected = match mode {
            EvaluationMode::SumPoint => Some(f.spectral_r + g.spectral_r),
            EvaluationMode::DiffPoint => Some(f.spectral_r - g.spectral_r),
            EvaluationMode::Generic => None,
        };
        if let Some(e) = expected {
            if (t - e).abs() > 1e-9 {
                return Err(HeckeError::Domain(format!(
                    "mode expects t = {e}, got {t}"
                )));
            }
        }
        Ok(RankinSelbergSpec { f, g, t, mode })
    }
}

/// λ(1..N) by the prime-power recursion λ(p^{k+1}) = λ(p)λ(p^k) − λ(p^{k−1})
/// and multiplicativity, via a smallest-prime-factor sieve.
///
/// Returned vector is indexed by n: out[n] = λ(n), out[0] = 0.
pub fn hecke_eigenvalues(form: &MaassFormData, n_max: u64) -> Result<Vec<f64>, HeckeError> {
    let n = n_max as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    let mut lam = vec![0.0f64; n + 1];
    if n >= 1 {
        lam[1] = 1.0;
    }
    for i in 2..=n {
        let p = spf[i] as usize;
        let mut m = i;
        let mut k = 0u32;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        let lp = *form
            .prime_table
            .get(&(p as u64))
            .ok_or(HeckeError::MissingPrime(p as u64))?;
        let pk = i / m; // p^k
        if m > 1 {
            lam[i] = lam[pk] * lam[m]; // both strictly smaller, already filled
        } else if k == 1 {
            lam[i] = lp;
        } else {
            lam[i] = lp * lam[pk / p] - lam[pk / p / p];
        }
    }
    Ok(lam)
}

#[derive(Debug, Clone, Copy)]
pub struct RamanujanAverage {
    /// Σ_{n≤N} λ(n)² / N
    pub mean_square: f64,
    /// Σ_{n≤N} λ(n)² / n
    pub log_normalized: f64,
}

pub fn ramanujan_average(form: &MaassFormData, n_max: u64) -> Result<RamanujanAverage, HeckeError> {
    let lam = hecke_eigenvalues(form, n_max)?;
    let mut sum = 0.0;
    let mut logsum = 0.0;
    for n in 1..=n_max as usize {
        let s = lam[n] * lam[n];
        sum += s;
        logsum += s / n as f64;
    }
    Ok(RamanujanAverage {
        mean_square: sum / n_max as f64,
        log_normalized: logsum,
    })
}

/// Σ_{n≤N} λ(n)⁴ / n.
pub fn l4_norm(form: &MaassFormData, n_max: u64) -> Result<f64, HeckeError> {
    let lam = hecke_eigenvalues(form, n_max)?;
    Ok((1..=n_max as usize)
        .map(|n| lam[n].powi(4) / n as f64)
        .sum())
}

/// Least-squares slope of log S(N) against log log N over a dyadic ladder,
/// where S(N) = Σ_{n≤N} λ(n)⁴/n. Returns (S(N_max), fitted exponent).
pub fn l4_norm_fit(form: &MaassFormData, n_max: u64) -> Result<(f64, f64), HeckeError> {
    let lam = hecke_eigenvalues(form, n_max)?;
    let mut partial = 0.0;
    let mut pts = Vec::new();
    let mut next = 16u64;
    for n in 1..=n_max as usize {
        partial += lam[n].powi(4) / n as f64;
        if n as u64 == next || n as u64 == n_max {
            pts.push(((n as f64).ln().ln(), partial.ln()));
            next *= 2;
        }
    }
    let k = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    Ok((partial, slope))
}

fn moebius(mut q: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            q /= p;
            if q % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if q > 1 {
        mu = -mu;
    }
    mu
}

pub fn euler_phi(q: u64) -> u64 {
    let mut result = q;
    let mut n = q;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Ramanujan sum c_q(n), computed along two independent routes that must
/// agree exactly: the direct sum Σ*_{a mod q} e(an/q) (rounded) and the
/// Möbius identity Σ_{d | (q,n)} d·μ(q/d).
pub fn ramanujan_sum(q: u64, n: u64) -> Result<i64, HeckeError> {
    if q == 0 {
        return Err(HeckeError::Domain("q must be >= 1".into()));
    }
    let mut direct = 0.0f64;
    for a in 1..=q {
        if num_integer::gcd(a, q) == 1 {
            direct += (2.0 * PI * ((a as u128 * n as u128 % q as u128) as f64) / q as f64).cos();
        }
    }
    let direct = direct.round() as i64;

    let mut moeb = 0i64;
    for d in 1..=q {
        if q % d == 0 && n % d == 0 {
            moeb += d as i64 * moebius(q / d);
        }
    }
    if direct != moeb {
        return Err(HeckeError::RouteDisagreement {
            q,
            n,
            direct,
            moebius: moeb,
        });
    }
    Ok(moeb)
}

/// Dirichlet coefficients of L(s,f⊗g)/ζ(2s): b(n) = Σ_{d²|n} λ_f(n/d²)λ_g(n/d²).
/// out[n] = b(n), out[0] = 0.
pub fn rs_dirichlet_coeffs(
    f: &MaassFormData,
    g: &MaassFormData,
    n_max: u64,
) -> Result<Vec<f64>, HeckeError> {
    let lf = hecke_eigenvalues(f, n_max)?;
    let lg = hecke_eigenvalues(g, n_max)?;
    let mut b = vec![0.0f64; n_max as usize + 1];
    for n in 1..=n_max as usize {
        let mut d = 1usize;
        while d * d <= n {
            if n % (d * d) == 0 {
                let m = n / (d * d);
                b[n] += lf[m] * lg[m];
            }
            d += 1;
        }
    }
    Ok(b)
}

/// Exact count of quadruples r₁,r₂ ∈ (R,2R], h₁,h₂ ∈ (H,2H] with
/// |h₁r₂ − h₂r₁| ≤ δ, by brute force.
pub fn count_bilinear(r: u64, h: u64, delta: f64) -> u64 {
    let mut count = 0u64;
    for r1 in r + 1..=2 * r {
        for r2 in r + 1..=2 * r {
            for h1 in h + 1..=2 * h {
                for h2 in h + 1..=2 * h {
                    let diff = (h1 * r2) as i64 - (h2 * r1) as i64;
                    if (diff.abs() as f64) <= delta {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Same count by interval arithmetic: for fixed (r₁, r₂, h₁) the admissible
/// h₂ form an integer interval. Independent of `count_bilinear`.
pub fn count_bilinear_intervals(r: u64, h: u64, delta: f64) -> u64 {
    let mut count = 0u64;
    for r1 in r + 1..=2 * r {
        for r2 in r + 1..=2 * r {
            for h1 in h + 1..=2 * h {
                let center = (h1 * r2) as f64;
                let lo = ((center - delta) / r1 as f64).ceil() as i64;
                let hi = ((center + delta) / r1 as f64).floor() as i64;
                let lo = lo.max(h as i64 + 1);
                let hi = hi.min(2 * h as i64);
                if hi >= lo {
                    count += (hi - lo + 1) as u64;
                }
            }
        }
    }
    count
}

/// Positive root of πr·y(y + dh) − td²h = 0:
/// α₊ = (−πrdh + √(π²r²d²h² + 4πtd²hr)) / (2πr).
pub fn alpha_plus(r: u64, h: u64, d: u64, t: f64) -> Result<f64, HeckeError> {
    if r == 0 || h == 0 || d == 0 || t <= 0.0 {
        return Err(HeckeError::Domain(
            "need r, h, d >= 1 and t > 0".into(),
        ));
    }
    let (rf, hf, df) = (r as f64, h as f64, d as f64);
    let disc = PI * PI * rf * rf * df * df * hf * hf + 4.0 * PI * t * df * df * hf * rf;
    if disc < 0.0 {
        return Err(HeckeError::Domain("negative discriminant".into()));
    }
    let y = (-PI * rf * df * hf + disc.sqrt()) / (2.0 * PI * rf);
    let residual = PI * rf * y * (y + df * hf) - t * df * df * hf;
    let scale = (t * df * df * hf).abs().max(1.0);
    debug_assert!(residual.abs() <= 1e-9 * scale);
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn two_prime_form(l2: f64, l3: f64) -> MaassFormData {
        let mut table = BTreeMap::new();
        table.insert(2, l2);
        table.insert(3, l3);
        table.insert(5, 0.3);
        table.insert(7, -0.4);
        table.insert(11, 0.6);
        MaassFormData {
            name: "synthetic".into(),
            spectral_r: 10.0,
            parity: Parity::Even,
            prime_table: table,
            source: "test".into(),
            precision: 0.0,
        }
    }

    #[test]
    fn eigenvalue_recursion_and_multiplicativity() {
        let form = two_prime_form(1.2, -0.7);
        let lam = hecke_eigenvalues(&form, 12).unwrap();
        assert_eq!(lam[1], 1.0);
        assert!((lam[4] - (1.2 * 1.2 - 1.0)).abs() < 1e-15);
        assert!((lam[6] - 1.2 * -0.7).abs() < 1e-15);
        assert!((lam[12] - -0.7 * (1.2 * 1.2 - 1.0)).abs() < 1e-14);
        assert!((lam[8] - (1.2 * (1.2 * 1.2 - 1.0) - 1.2)).abs() < 1e-14);
    }

    #[test]
    fn missing_prime_is_reported() {
        let form = two_prime_form(1.2, -0.7);
        match hecke_eigenvalues(&form, 20) {
            Err(HeckeError::MissingPrime(p)) => assert_eq!(p, 13),
            other => panic!("expected missing-prime error, got {other:?}"),
        }
    }

    #[test]
    fn ramanujan_average_base_cases() {
        let form = two_prime_form(0.5, 0.5);
        let avg = ramanujan_average(&form, 1).unwrap();
        assert_eq!(avg.mean_square, 1.0);
        assert_eq!(avg.log_normalized, 1.0);
        // partial sums of λ(n)² are nondecreasing in N
        let mut prev = 0.0;
        for n in 1..=10 {
            let cur = ramanujan_average(&form, n).unwrap().mean_square * n as f64;
            assert!(cur >= prev);
            prev = cur;
        }
    }

    #[test]
    fn l4_norm_monotone_under_doubling() {
        let form = two_prime_form(0.9, -0.3);
        assert_eq!(l4_norm(&form, 1).unwrap(), 1.0);
        let a = l4_norm(&form, 5).unwrap();
        let b = l4_norm(&form, 10).unwrap();
        assert!(b >= a);
    }

    #[test]
    fn ramanujan_sum_known_values() {
        assert_eq!(ramanujan_sum(12, 0).unwrap(), euler_phi(12) as i64);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(ramanujan_sum(6, 3).unwrap(), -2);
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(ramanujan_sum(p, 1).unwrap(), -1);
        }
    }

    #[test]
    fn ramanujan_sum_routes_agree_on_grid() {
        for q in 1..=200u64 {
            for n in 0..=200u64 {
                ramanujan_sum(q, n).unwrap();
            }
        }
    }

    #[test]
    fn ramanujan_sum_divisor_orthogonality() {
        // Σ_{d|q} c_d(n) = q·1_{q|n}
        for q in 1..=60u64 {
            for n in 0..=60u64 {
                let s: i64 = (1..=q)
                    .filter(|d| q % d == 0)
                    .map(|d| ramanujan_sum(d, n).unwrap())
                    .sum();
                let expect = if n % q == 0 { q as i64 } else { 0 };
                assert_eq!(s, expect, "q={q}, n={n}");
            }
        }
    }

    #[test]
    fn rs_coefficients_structure() {
        let f = two_prime_form(1.1, 0.2);
        let g = two_prime_form(-0.5, 0.8);
        let b = rs_dirichlet_coeffs(&f, &g, 10).unwrap();
        let lf = hecke_eigenvalues(&f, 10).unwrap();
        let lg = hecke_eigenvalues(&g, 10).unwrap();
        assert_eq!(b[1], 1.0);
        assert!((b[4] - (lf[4] * lg[4] + 1.0)).abs() < 1e-14);
        for p in [2usize, 3, 5, 7] {
            assert!((b[p] - lf[p] * lg[p]).abs() < 1e-14);
        }
    }

    #[test]
    fn bilinear_count_routes_agree() {
        for (r, h, delta) in [(10, 10, 0.0), (10, 10, 0.5), (12, 7, 2.0), (5, 20, 3.0)] {
            assert_eq!(
                count_bilinear(r, h, delta),
                count_bilinear_intervals(r, h, delta),
                "r={r} h={h} delta={delta}"
            );
        }
    }

    #[test]
    fn bilinear_count_diagonal_and_integrality() {
        let c0 = count_bilinear(10, 10, 0.0);
        assert!(c0 >= 100, "diagonal quadruples alone give 100, got {c0}");
        assert_eq!(c0, count_bilinear(10, 10, 0.99));
    }

    #[test]
    fn alpha_plus_root_identity() {
        let (r, h, d, t) = (3u64, 2u64, 5u64, 1.0e4);
        let y = alpha_plus(r, h, d, t).unwrap();
        let residual = PI * 3.0 * y * (y + 10.0) - t * 25.0 * 2.0;
        assert!(residual.abs() / (t * 50.0) < 1e-12);
        // the other root is negative: product of roots = −td²h/(πr) < 0
        let other = -t * 25.0 * 2.0 / (PI * 3.0) / y;
        assert!(other < 0.0);
        // leading √t behavior: quadrupling t roughly doubles the root
        let y4 = alpha_plus(r, h, d, 4.0 * t).unwrap();
        assert!((y4 / y - 2.0).abs() < 0.2);
    }

    #[test]
    fn fixture_loads_and_is_multiplicative() {
        let form = MaassFormData::fixture().unwrap();
        assert!((form.spectral_r - 13.7797513519).abs() < 1e-6);
        assert_eq!(form.parity, Parity::Even);
        let lam = hecke_eigenvalues(&form, 1000).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let m = rng.gen_range(2u64..=31);
            let n = rng.gen_range(2u64..=31);
            if num_integer::gcd(m, n) == 1 && m * n <= 1000 {
                let res = (lam[(m * n) as usize] - lam[m as usize] * lam[n as usize]).abs();
                assert!(res <= 1e-9 + 4.0 * form.precision, "m={m} n={n} res={res}");
            }
        }
    }

    #[test]
    fn fixture_average_is_order_one() {
        let form = MaassFormData::fixture().unwrap();
        let avg = ramanujan_average(&form, 10_000).unwrap();
        assert!(avg.mean_square > 0.1 && avg.mean_square < 10.0);
        let (_, slope) = l4_norm_fit(&form, 10_000).unwrap();
        assert!(slope <= 4.0, "fitted log-power {slope}");
    }

    #[test]
    fn spec_mode_consistency() {
        let f = two_prime_form(0.1, 0.1);
        let mut g = two_prime_form(0.2, 0.2);
        g.spectral_r = 4.0;
        assert!(RankinSelbergSpec::new(f.clone(), g.clone(), 14.0, EvaluationMode::SumPoint).is_ok());
        assert!(RankinSelbergSpec::new(f.clone(), g.clone(), 6.0, EvaluationMode::DiffPoint).is_ok());
        assert!(RankinSelbergSpec::new(f, g, 13.5, EvaluationMode::SumPoint).is_err());
    }
}
