//! Truncated power series in one variable with complex coefficients.

use crate::C64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    /// Coefficients of x^0 .. x^N.
    pub coeffs: Vec<C64>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![C64::new(0.0, 0.0); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = C64::new(1.0, 0.0);
        s
    }

    pub fn from_coeffs(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, C64::new(0.0, 0.0));
        PowerSeries { coeffs: c }
    }

    pub fn scale(&self, a: C64) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    /// exp of a series; the constant term is allowed and contributes e^{c0}.
    pub fn exp(&self) -> Self {
        let n = self.order();
        let f = &self.coeffs;
        let mut g = vec![C64::new(0.0, 0.0); n + 1];
        g[0] = f[0].exp();
        for k in 1..=n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 1..=k {
                acc += f[j] * g[k - j] * j as f64;
            }
            g[k] = acc / k as f64;
        }
        PowerSeries { coeffs: g }
    }

    /// Principal log; needs a nonzero constant term.
    pub fn ln(&self) -> Option<Self> {
        let g = &self.coeffs;
        if g[0].norm() == 0.0 {
            return None;
        }
        let n = self.order();
        let mut f = vec![C64::new(0.0, 0.0); n + 1];
        f[0] = g[0].ln();
        for k in 1..=n {
            let mut acc = g[k] * k as f64;
            for j in 1..k {
                acc -= f[j] * g[k - j] * j as f64;
            }
            f[k] = acc / (g[0] * k as f64);
        }
        Some(PowerSeries { coeffs: f })
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order().max(other.order());
        (0..=n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        PowerSeries { coeffs: (0..=n).map(|k| self.coeffs[k] + o.coeffs[k]).collect() }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, o: &PowerSeries) -> PowerSeries {
        self + &(-o)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        let mut out = vec![C64::new(0.0, 0.0); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }
}
