//! Ratio surmise `P(r, b) = C_b (r + r^2)^b / (1 + r + r^2)^(1 + 3b/2)` for
//! real `b > 0`.
//!
//! The density satisfies `P(1/r) = r^2 P(r)`, so every integral over
//! `[1, inf)` is folded back onto `[0, 1]`:
//! `F(r) = 1 - F(1/r)` and `<r> = int_0^1 (u + 1/u) P(u) du`.
//!
//! The kernel is evaluated relative to its value at `r = 1` in log space so
//! large `b` neither underflows nor overflows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::integrate;

/// Quadrature tolerance for the normalization constant.
pub const NORM_TOL: f64 = 1e-12;
/// Quadrature tolerance for cdf and mean evaluations.
pub const EVAL_TOL: f64 = 1e-12;

/// `k(k+1)/2 * beta + (k - 1)`.
pub fn predicted_beta_prime(beta: u32, k: u32) -> u32 {
    k * (k + 1) / 2 * beta + (k - 1)
}

/// A normalized surmise at effective index `beta_eff`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurmiseParams {
    pub beta_eff: f64,
    /// `C_b`; may overflow to `inf` for very large `b`, evaluation uses `log_norm`.
    pub norm: f64,
    log_norm: f64,
}

/// `ln[(r + r^2)^b / (1 + r + r^2)^(1 + 3b/2)]` minus its value at `r = 1`.
fn log_kernel_rel(r: f64, beta_eff: f64) -> f64 {
    if r <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let a = (r + r * r) / 2.0;
    let b = (1.0 + r + r * r) / 3.0;
    beta_eff * a.ln() - (1.0 + 1.5 * beta_eff) * b.ln()
}

/// `ln` of the unnormalized kernel at `r = 1`: `b ln 2 - (1 + 3b/2) ln 3`.
fn log_kernel_at_one(beta_eff: f64) -> f64 {
    beta_eff * 2f64.ln() - (1.0 + 1.5 * beta_eff) * 3f64.ln()
}

pub fn surmise_params(beta_eff: f64) -> Result<SurmiseParams> {
    if !(beta_eff > 0.0) || !beta_eff.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "effective index {beta_eff} must be positive and finite"
        )));
    }
    let rel = integrate(
        |r| log_kernel_rel(r, beta_eff).exp(),
        0.0,
        f64::INFINITY,
        NORM_TOL,
    )?;
    let log_norm = -(rel.ln() + log_kernel_at_one(beta_eff));
    Ok(SurmiseParams {
        beta_eff,
        norm: log_norm.exp(),
        log_norm,
    })
}

impl SurmiseParams {
    pub fn pdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        (self.log_norm + log_kernel_at_one(self.beta_eff) + log_kernel_rel(r, self.beta_eff)).exp()
    }

    /// `int_0^r P`; exact symmetry gives `F(1) = 1/2`.
    pub fn cdf(&self, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        if r == f64::INFINITY {
            return Ok(1.0);
        }
        if r <= 1.0 {
            integrate(|x| self.pdf(x), 0.0, r, EVAL_TOL)
        } else {
            Ok(1.0 - integrate(|x| self.pdf(x), 0.0, 1.0 / r, EVAL_TOL)?)
        }
    }

    pub fn mean(&self) -> Result<f64> {
        integrate(|u| (u + 1.0 / u) * self.pdf(u), 0.0, 1.0, EVAL_TOL)
    }
}

pub fn surmise_pdf(r: f64, p: &SurmiseParams) -> f64 {
    p.pdf(r)
}

pub fn surmise_cdf(r: f64, p: &SurmiseParams) -> Result<f64> {
    p.cdf(r)
}

pub fn surmise_mean(p: &SurmiseParams) -> Result<f64> {
    p.mean()
}

/// Number of panels of [`CdfTable`] on `[0, 1]`.
const TABLE_PANELS: usize = 4096;

/// Tabulated surmise cdf for bulk evaluation.
///
/// The cdf is accumulated panel by panel with a 15-point Kronrod rule on a
/// uniform grid over `[0, 1]` and interpolated by cubic Hermite polynomials
/// whose slopes are the exact density. Values above 1 use `F(r) = 1 - F(1/r)`.
#[derive(Debug, Clone)]
pub struct CdfTable {
    params: SurmiseParams,
    nodes: Vec<f64>,
}

impl CdfTable {
    pub fn new(params: SurmiseParams) -> Self {
        let h = 1.0 / TABLE_PANELS as f64;
        let mut nodes = Vec::with_capacity(TABLE_PANELS + 1);
        let mut acc = 0.0;
        nodes.push(0.0);
        for i in 0..TABLE_PANELS {
            let a = i as f64 * h;
            let (v, _) = crate::numerics::quad::kronrod15(&|x| params.pdf(x), a, a + h);
            acc += v;
            nodes.push(acc);
        }
        // pin F(1) = 1/2 exactly; the drift is far below the table accuracy
        let scale = 0.5 / acc;
        for v in &mut nodes {
            *v *= scale;
        }
        CdfTable { params, nodes }
    }

    pub fn params(&self) -> &SurmiseParams {
        &self.params
    }

    fn lower_half(&self, u: f64) -> f64 {
        let h = 1.0 / TABLE_PANELS as f64;
        let pos = u * TABLE_PANELS as f64;
        let i = (pos.floor() as usize).min(TABLE_PANELS - 1);
        let t = pos - i as f64;
        let x0 = i as f64 * h;
        let (f0, f1) = (self.nodes[i], self.nodes[i + 1]);
        let (d0, d1) = (self.params.pdf(x0) * h, self.params.pdf(x0 + h) * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * f0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * f1
            + (t3 - t2) * d1
    }

    pub fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else if r <= 1.0 {
            self.lower_half(r)
        } else {
            1.0 - self.lower_half(1.0 / r)
        }
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    #[test]
    fn predictions() {
        assert_eq!(predicted_beta_prime(1, 1), 1);
        assert_eq!(predicted_beta_prime(2, 4), 23);
        assert_eq!(predicted_beta_prime(1, 9), 53);
        assert_eq!(predicted_beta_prime(1, 20), 229);
        assert_eq!(predicted_beta_prime(4, 1), 4);
    }

    #[test]
    fn goe_normalization_constant() {
        // independent coarse midpoint sum for int_0^inf = 2 int_0^1
        let n = 200_000;
        let h = 1.0 / n as f64;
        let riemann: f64 = (0..n)
            .map(|i| {
                let r = (i as f64 + 0.5) * h;
                (r + r * r) / (1.0 + r + r * r).powf(2.5)
            })
            .sum::<f64>()
            * h
            * 2.0;
        assert_abs_diff_eq!(riemann, 8.0 / 27.0, epsilon = 1e-8);
        let p = surmise_params(1.0).unwrap();
        assert_abs_diff_eq!(p.norm, 27.0 / 8.0, epsilon = 1e-8);
    }

    #[test]
    fn pdf_at_one_for_goe() {
        let p = surmise_params(1.0).unwrap();
        assert_abs_diff_eq!(p.pdf(1.0), 27.0 / 8.0 * 2.0 / 3f64.powf(2.5), epsilon = 1e-10);
        assert_abs_diff_eq!(p.pdf(1.0), 0.43301, epsilon = 1e-5);
        assert_eq!(p.pdf(0.0), 0.0);
    }

    #[test]
    fn inversion_symmetry() {
        for beta in [0.5, 1.0, 4.0, 13.0, 60.0] {
            let p = surmise_params(beta).unwrap();
            for r in [0.5f64, 2.0, 7.0] {
                let lhs = p.pdf(1.0 / r);
                let rhs = r * r * p.pdf(r);
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10 * lhs.max(1.0));
            }
        }
    }

    #[test]
    fn cdf_median_is_one() {
        for beta in [1.0, 2.5, 4.0, 43.0] {
            let p = surmise_params(beta).unwrap();
            assert_abs_diff_eq!(p.cdf(1.0).unwrap(), 0.5, epsilon = 1e-8);
            assert_eq!(p.cdf(0.0).unwrap(), 0.0);
            assert_eq!(p.cdf(f64::INFINITY).unwrap(), 1.0);
        }
    }

    #[test]
    fn table_means() {
        for (beta, mean) in [(4.0, 1.1747), (8.0, 1.0855), (13.0, 1.0521), (43.0, 1.0156)] {
            let p = surmise_params(beta).unwrap();
            assert_abs_diff_eq!(p.mean().unwrap(), mean, epsilon = 5e-5);
        }
    }

    #[test]
    fn rejects_non_positive_index() {
        assert!(surmise_params(0.0).is_err());
        assert!(surmise_params(-1.0).is_err());
        assert!(surmise_params(f64::NAN).is_err());
    }

    #[test]
    fn large_index_stays_finite() {
        let p = surmise_params(229.0).unwrap();
        assert!(p.norm.is_finite());
        assert_abs_diff_eq!(p.cdf(1.0).unwrap(), 0.5, epsilon = 1e-8);
        assert!(p.mean().unwrap() > 1.0);
    }

    #[test]
    fn table_matches_quadrature() {
        for beta in [1.0, 4.0, 13.0, 43.0, 60.0] {
            let p = surmise_params(beta).unwrap();
            let table = CdfTable::new(p);
            for i in 1..200 {
                let r = i as f64 * 0.025;
                assert_abs_diff_eq!(table.cdf(r), p.cdf(r).unwrap(), epsilon = 1e-10);
            }
        }
    }
}
