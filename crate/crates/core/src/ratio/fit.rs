use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ks::{ks_statistic, kolmogorov_q};
use super::surmise::{surmise_params, CdfTable, SurmiseParams};
use super::transform::RatioSequence;
use crate::error::{Error, Result};

/// Grid of effective indices scanned by [`fit_beta_prime`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Default for FitGrid {
    fn default() -> Self {
        FitGrid {
            lo: 1.0,
            hi: 60.0,
            step: 1.0,
        }
    }
}

impl FitGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.lo < self.hi && self.step > 0.0 && self.hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "fit grid needs 0 < lo < hi and step > 0, got lo={} hi={} step={}",
                self.lo, self.hi, self.step
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|j| self.lo + j as f64 * self.step).collect()
    }
}

/// Result of scanning the cdf distance over a grid of effective indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub beta_fit: f64,
    pub d_curve: Vec<(f64, f64)>,
    pub ks_stat: f64,
    pub ks_p: f64,
    pub mean_r: f64,
    pub n: usize,
    /// The minimum sits on the first or last grid point.
    pub at_boundary: bool,
}

/// Sorted copy of a sample.
pub(crate) fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Mean absolute gap `(1/n) sum_i |i/n - F(r_(i))|` over sorted sample points.
pub(crate) fn distance_sorted(sorted: &[f64], table: &CdfTable) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &r)| ((i + 1) as f64 / n - table.cdf(r)).abs())
        .sum::<f64>()
        / n
}

/// Normalized distance between the empirical cdf of `rs` and the surmise cdf.
pub fn cdf_distance(rs: &RatioSequence, p: &SurmiseParams) -> Result<f64> {
    cdf_distance_values(&rs.values, p)
}

pub fn cdf_distance_values(values: &[f64], p: &SurmiseParams) -> Result<f64> {
    let s = sorted(values)?;
    Ok(distance_sorted(&s, &CdfTable::new(*p)))
}

pub fn fit_beta_prime(rs: &RatioSequence, grid: FitGrid) -> Result<FitReport> {
    fit_values(&rs.values, grid)
}

/// Scans `grid`, picking the smallest index among ties for the minimum of D.
pub fn fit_values(values: &[f64], grid: FitGrid) -> Result<FitReport> {
    grid.validate()?;
    let s = sorted(values)?;
    let points = grid.points();
    let d_curve = points
        .par_iter()
        .map(|&b| {
            let table = CdfTable::new(surmise_params(b)?);
            Ok((b, distance_sorted(&s, &table)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (j, &(_, d)) in d_curve.iter().enumerate() {
        if d < d_curve[best].1 {
            best = j;
        }
    }
    let beta_fit = d_curve[best].0;
    let table = CdfTable::new(surmise_params(beta_fit)?);
    let ks_stat = ks_statistic(&s, |r| table.cdf(r));
    let n = s.len();
    let ks_p = kolmogorov_q((n as f64).sqrt() * ks_stat);
    // summed in original order so the mean does not depend on sorting
    let mean_r = values.iter().sum::<f64>() / n as f64;
    Ok(FitReport {
        beta_fit,
        d_curve,
        ks_stat,
        ks_p,
        mean_r,
        n,
        at_boundary: best == 0 || best == points.len() - 1,
    })
}
