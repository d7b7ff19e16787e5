//! Oracles shared by the integration tests. Nothing here calls into the
//! crate's quadrature or cdf code.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Unnormalized log density of the ratio surmise, shifted so that r = 1 maps to 0.
fn log_kernel(r: f64, b: f64) -> f64 {
    let at_one = b * 2f64.ln() - (1.0 + 1.5 * b) * 3f64.ln();
    b * (r + r * r).ln() - (1.0 + 1.5 * b) * (1.0 + r + r * r).ln() - at_one
}

/// Tabulated cdf of the surmise on `u = r / (1 + r)`, built by composite
/// Simpson panels on a uniform grid.
pub struct InverseCdf {
    u: Vec<f64>,
    cdf: Vec<f64>,
    /// Unnormalized integral, i.e. `1 / C_b` times `exp(log_kernel(1))`.
    total: f64,
}

impl InverseCdf {
    pub fn new(b: f64) -> Self {
        let panels = 100_000;
        let h = 1.0 / (2 * panels) as f64;
        let g = |u: f64| -> f64 {
            if u <= 0.0 || u >= 1.0 {
                return 0.0;
            }
            let r = u / (1.0 - u);
            log_kernel(r, b).exp() / ((1.0 - u) * (1.0 - u))
        };
        let mut u = vec![0.0];
        let mut acc = vec![0.0];
        let mut sum = 0.0;
        for p in 0..panels {
            let a = 2.0 * p as f64 * h;
            sum += h / 3.0 * (g(a) + 4.0 * g(a + h) + g(a + 2.0 * h));
            u.push(a + 2.0 * h);
            acc.push(sum);
        }
        let cdf = acc.iter().map(|c| c / sum).collect();
        InverseCdf { u, cdf, total: sum }
    }

    /// Normalization constant `C_b` of the surmise.
    pub fn norm(&self, b: f64) -> f64 {
        let at_one = b * 2f64.ln() - (1.0 + 1.5 * b) * 3f64.ln();
        at_one.exp().recip() / self.total
    }

    pub fn cdf(&self, r: f64) -> f64 {
        let u = r / (1.0 + r);
        let j = self.u.partition_point(|&x| x <= u).clamp(1, self.u.len() - 1);
        let (u0, u1) = (self.u[j - 1], self.u[j]);
        let t = (u - u0) / (u1 - u0);
        self.cdf[j - 1] + t * (self.cdf[j] - self.cdf[j - 1])
    }

    pub fn quantile(&self, p: f64) -> f64 {
        let j = self.cdf.partition_point(|&c| c < p).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[j - 1], self.cdf[j]);
        let t = if c1 > c0 { (p - c0) / (c1 - c0) } else { 0.5 };
        let u = self.u[j - 1] + t * (self.u[j] - self.u[j - 1]);
        u / (1.0 - u)
    }

    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.quantile(rng.random::<f64>())).collect()
    }

    /// `int_0^inf r P(r) dr` from the same table (midpoint rule in `u`).
    pub fn mean(&self) -> f64 {
        let mut m = 0.0;
        for j in 1..self.u.len() {
            let um = 0.5 * (self.u[j] + self.u[j - 1]);
            m += um / (1.0 - um) * (self.cdf[j] - self.cdf[j - 1]);
        }
        m
    }
}

/// Ascending levels with i.i.d. exponential spacings.
pub fn poisson_levels(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = 0.0;
    (0..n)
        .map(|_| {
            e += -(1.0 - rng.random::<f64>()).ln();
            e
        })
        .collect()
}
