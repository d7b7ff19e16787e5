use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Density histogram over `[lo, hi]`, normalized by the full sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub centers: Vec<f64>,
    pub densities: Vec<f64>,
    /// Fraction of the sample inside `[lo, hi]`.
    pub in_range: f64,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.centers.len() as f64
    }

    pub fn bins(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.centers.iter().copied().zip(self.densities.iter().copied())
    }
}

/// Bins `values` into `bins` equal bins on `[lo, hi]` (the last bin is closed).
/// Values outside the range count toward the normalization only.
pub fn histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if bins == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "histogram needs bins >= 1 and lo < hi, got {bins} bins on [{lo}, {hi}]"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let mut inside = 0usize;
    for &v in values {
        if !(lo..=hi).contains(&v) {
            continue;
        }
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
        inside += 1;
    }
    let n = values.len() as f64;
    Ok(Histogram {
        lo,
        hi,
        centers: (0..bins).map(|b| lo + (b as f64 + 0.5) * width).collect(),
        densities: counts.iter().map(|&c| c as f64 / (n * width)).collect(),
        in_range: inside as f64 / n,
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    #[test]
    fn single_value_single_bin() {
        let h = histogram(&[1.5; 10], 1, 0.0, 4.0).unwrap();
        assert_eq!(h.densities, vec![0.25]);
        assert_eq!(h.centers, vec![2.0]);
    }

    #[test]
    fn uniform_grid() {
        let values: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) * 5.0 / 1000.0).collect();
        let h = histogram(&values, 5, 0.0, 5.0).unwrap();
        for d in &h.densities {
            assert_abs_diff_eq!(*d, 0.2, epsilon = 1e-12);
        }
    }

    #[test]
    fn out_of_range_values_reduce_mass() {
        let h = histogram(&[0.5, 1.5, 9.0, -1.0], 2, 0.0, 2.0).unwrap();
        assert_eq!(h.in_range, 0.5);
        let mass: f64 = h.densities.iter().sum::<f64>() * h.bin_width();
        assert_abs_diff_eq!(mass, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn upper_edge_goes_to_last_bin() {
        let h = histogram(&[2.0], 2, 0.0, 2.0).unwrap();
        assert_eq!(h.densities, vec![0.0, 1.0]);
    }

    #[test]
    fn errors() {
        assert!(matches!(histogram(&[], 1, 0.0, 1.0), Err(Error::EmptySample)));
        assert!(histogram(&[1.0], 0, 0.0, 1.0).is_err());
        assert!(histogram(&[1.0], 1, 1.0, 1.0).is_err());
    }
}
