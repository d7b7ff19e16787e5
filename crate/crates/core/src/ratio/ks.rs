//! One-sample Kolmogorov-Smirnov test against the ratio surmise.

use std::f64::consts::PI;

use super::fit::sorted;
use super::surmise::{CdfTable, SurmiseParams};
use super::transform::RatioSequence;
use crate::error::Result;

/// Series terms below this are dropped.
const SERIES_CUTOFF: f64 = 1e-12;

/// `sup_i max(|i/n - F(r_(i))|, |(i-1)/n - F(r_(i))|)` for a sorted sample.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let f = cdf(r);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.abs().max(below.abs())
        })
        .fold(0.0, f64::max)
}

/// Kolmogorov survival function `Q(l) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 l^2)`.
///
/// For small `l` the alternating series converges slowly; there the
/// equivalent theta-function form
/// `1 - sqrt(2 pi)/l sum_{j>=1} exp(-(2j-1)^2 pi^2 / (8 l^2))` is used.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    let q = if lambda < 0.6 {
        let mut sum = 0.0;
        for j in 1.. {
            let odd = (2 * j - 1) as f64;
            let term = (-odd * odd * PI * PI / (8.0 * lambda * lambda)).exp();
            sum += term;
            if term < SERIES_CUTOFF {
                break;
            }
        }
        1.0 - (2.0 * PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for j in 1.. {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            sum += sign * term;
            if term < SERIES_CUTOFF {
                break;
            }
            sign = -sign;
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}

/// KS statistic and asymptotic p-value at `lambda = sqrt(n) * stat`.
pub fn ks_test(rs: &RatioSequence, p: &SurmiseParams) -> Result<(f64, f64)> {
    ks_test_values(&rs.values, p)
}

pub fn ks_test_values(values: &[f64], p: &SurmiseParams) -> Result<(f64, f64)> {
    let s = sorted(values)?;
    let table = CdfTable::new(*p);
    let stat = ks_statistic(&s, |r| table.cdf(r));
    Ok((stat, ks_p_value(s.len(), stat)))
}

/// Asymptotic p-value of a KS statistic from `n` samples.
pub fn ks_p_value(n: usize, stat: f64) -> f64 {
    kolmogorov_q((n as f64).sqrt() * stat)
}
