//! Truncated Taylor series ("jets") for exact derivative oracles.
//!
//! A `Jet` holds the Taylor coefficients of a function at a point up to a
//! fixed order. Arithmetic on jets propagates derivatives through closed-form
//! expressions, so weight and phase constructors get derivative oracles that
//! are exact up to roundoff instead of finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    /// coeffs[k] = f^(k)(x0) / k!
    pub coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(c: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// The identity function t ↦ t expanded at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = x0;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// k-th derivative at the expansion point: k! * coeffs[k].
    pub fn derivative(&self, k: usize) -> f64 {
        if k >= self.coeffs.len() {
            return 0.0;
        }
        let mut fact = 1.0;
        for j in 2..=k {
            fact *= j as f64;
        }
        self.coeffs[k] * fact
    }

    pub fn exp(&self) -> Jet {
        // e_0 = exp(a_0); e' = a' e  =>  (k+1) e_{k+1} = sum_{j=0..k} (j+1) a_{j+1} e_{k-j}
        let n = self.order();
        let mut out = vec![0.0; n + 1];
        out[0] = self.coeffs[0].exp();
        for k in 0..n {
            let mut s = 0.0;
            for j in 0..=k {
                s += (j + 1) as f64 * self.coeffs[j + 1] * out[k - j];
            }
            out[k + 1] = s / (k + 1) as f64;
        }
        Jet { coeffs: out }
    }

    pub fn ln(&self) -> Jet {
        // l' = a'/a  =>  (k+1) l_{k+1} = [(k+1) a_{k+1} - sum_{j=1..k} j l_j a_{k+1-j}] / a_0
        let n = self.order();
        assert!(self.coeffs[0] > 0.0, "ln of non-positive jet value");
        let mut out = vec![0.0; n + 1];
        out[0] = self.coeffs[0].ln();
        for k in 0..n {
            let mut s = (k + 1) as f64 * self.coeffs[k + 1];
            for j in 1..=k {
                s -= j as f64 * out[j] * self.coeffs[k + 1 - j];
            }
            out[k + 1] = s / self.coeffs[0] / (k + 1) as f64;
        }
        Jet { coeffs: out }
    }

    pub fn sqrt(&self) -> Jet {
        (self.ln() * 0.5).exp()
    }

    pub fn powi(&self, mut p: u32) -> Jet {
        let mut acc = Jet::constant(1.0, self.order());
        let mut base = self.clone();
        while p > 0 {
            if p & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            p >>= 1;
        }
        acc
    }

    pub fn recip(&self) -> Jet {
        Jet::constant(1.0, self.order()) / self.clone()
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    fn sin_cos(&self) -> (Jet, Jet) {
        // s' = a' c, c' = -a' s
        let n = self.order();
        let mut s = vec![0.0; n + 1];
        let mut c = vec![0.0; n + 1];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 0..n {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 0..=k {
                let aj = (j + 1) as f64 * self.coeffs[j + 1];
                ds += aj * c[k - j];
                dc -= aj * s[k - j];
            }
            s[k + 1] = ds / (k + 1) as f64;
            c[k + 1] = dc / (k + 1) as f64;
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let mut out = self.coeffs.clone();
        for (a, b) in out.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        Jet { coeffs: out }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let mut out = self.coeffs.clone();
        for (a, b) in out.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        Jet { coeffs: out }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.order();
        let mut out = vec![0.0; n + 1];
        for k in 0..=n {
            let mut s = 0.0;
            for j in 0..=k {
                s += self.coeffs[j] * rhs.coeffs[k - j];
            }
            out[k] = s;
        }
        Jet { coeffs: out }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let n = self.order();
        assert!(rhs.coeffs[0] != 0.0, "division by jet with zero value");
        let mut out = vec![0.0; n + 1];
        for k in 0..=n {
            let mut s = self.coeffs[k];
            for j in 0..k {
                s -= out[j] * rhs.coeffs[k - j];
            }
            out[k] = s / rhs.coeffs[0];
        }
        Jet { coeffs: out }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

// Convenience owned-value operators.
impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}
impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}
impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}
impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * rhs).collect(),
        }
    }
}
impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut out = self.coeffs;
        out[0] += rhs;
        Jet { coeffs: out }
    }
}
impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        let mut out = self.coeffs;
        out[0] -= rhs;
        Jet { coeffs: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn exp_derivatives() {
        // d^k/dx^k exp(2x) = 2^k exp(2x)
        let x = Jet::variable(0.7, 6);
        let f = (x * 2.0).exp();
        for k in 0..=6 {
            let expect = 2f64.powi(k as i32) * (1.4f64).exp();
            assert!(close(f.derivative(k), expect, 1e-12), "k={k}");
        }
    }

    #[test]
    fn ln_and_div_roundtrip() {
        let x = Jet::variable(1.3, 8);
        let f = x.clone().exp().ln();
        for k in 0..=8 {
            assert!(close(f.derivative(k), x.derivative(k), 1e-11), "k={k}");
        }
        let g = Jet::constant(1.0, 8) / x.clone();
        // d^k (1/x) = (-1)^k k! x^{-k-1}
        let mut fact = 1.0;
        for k in 0..=8 {
            if k > 0 {
                fact *= k as f64;
            }
            let expect = if k % 2 == 0 { 1.0 } else { -1.0 } * fact * (1.3f64).powi(-(k as i32) - 1);
            assert!(close(g.derivative(k), expect, 1e-11), "k={k}");
        }
    }

    #[test]
    fn sin_cos_derivatives() {
        let x = Jet::variable(0.4, 5);
        let s = x.sin();
        assert!(close(s.derivative(0), 0.4f64.sin(), 1e-14));
        assert!(close(s.derivative(1), 0.4f64.cos(), 1e-14));
        assert!(close(s.derivative(2), -0.4f64.sin(), 1e-13));
        assert!(close(s.derivative(3), -0.4f64.cos(), 1e-13));
    }

    #[test]
    fn sqrt_matches_powi() {
        let x = Jet::variable(2.0, 6);
        let r = x.clone().sqrt();
        let sq = &r * &r;
        for k in 0..=6 {
            assert!(close(sq.derivative(k), x.derivative(k), 1e-11), "k={k}");
        }
    }
}
