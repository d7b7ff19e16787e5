use std::ops::{Index, IndexMut};

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square complex matrix stored row-major. Real matrices are the
/// imaginary-part-zero case.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::NotSquare {
                dim,
                entries: entries.len(),
            });
        }
        let m = DenseMatrix { dim, entries };
        m.check_finite()?;
        Ok(m)
    }

    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { dim, entries }
    }

    pub fn from_real_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(dim, |i, j| Complex64::new(f(i, j), 0.0))
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn check_finite(&self) -> Result<()> {
        match self
            .entries
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            Some(p) => Err(Error::NonFinite {
                row: p / self.dim,
                col: p % self.dim,
            }),
            None => Ok(()),
        }
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        DenseMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest entrywise violation of `m = m^dag`.
    pub fn hermitian_defect(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        worst
    }

    /// `max |(m^dag m - I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let a = self.to_faer();
        let p = a.adjoint() * &a;
        let mut worst = 0.0f64;
        for j in 0..self.dim {
            for i in 0..self.dim {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::InvalidParameter(format!(
                "cannot multiply {}x{} by {}x{}",
                self.dim, self.dim, rhs.dim, rhs.dim
            )));
        }
        let p = self.to_faer() * rhs.to_faer();
        Ok(Self::from_faer(p.as_ref()))
    }

    pub(crate) fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(self.dim, self.dim, |i, j| self[(i, j)])
    }

    pub(crate) fn to_faer_real(&self) -> Mat<f64> {
        Mat::from_fn(self.dim, self.dim, |i, j| self[(i, j)].re)
    }

    pub(crate) fn from_faer(m: faer::MatRef<'_, Complex64>) -> Self {
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    /// Energies on the real line.
    Line,
    /// Eigenphases in `[0, 2pi)`.
    Circle,
}

/// Sorted, finite, non-empty list of levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    levels: Vec<f64>,
    kind: SpectrumKind,
}

impl Spectrum {
    /// Wraps already sorted levels, rejecting unsorted or non-finite input.
    pub fn new(levels: Vec<f64>, kind: SpectrumKind) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::TooFewLevels { needed: 1, got: 0 });
        }
        if let Some(i) = levels.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum { index: i });
        }
        if let Some(i) = levels.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidSpectrum { index: i + 1 });
        }
        Ok(Spectrum { levels, kind })
    }

    pub fn from_unsorted(mut levels: Vec<f64>, kind: SpectrumKind) -> Result<Self> {
        if let Some(i) = levels.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum { index: i });
        }
        levels.sort_by(f64::total_cmp);
        Self::new(levels, kind)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn into_levels(self) -> Vec<f64> {
        self.levels
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `last - first`.
    pub fn width(&self) -> f64 {
        self.levels[self.levels.len() - 1] - self.levels[0]
    }

    /// Drops `floor(fraction * len)` levels from each end.
    pub fn trimmed(&self, fraction: f64) -> Result<Spectrum> {
        if !(0.0..0.5).contains(&fraction) {
            return Err(Error::InvalidParameter(format!(
                "trim fraction {fraction} outside [0, 0.5)"
            )));
        }
        let cut = (fraction * self.levels.len() as f64).floor() as usize;
        let kept = self.levels[cut..self.levels.len() - cut].to_vec();
        Spectrum::new(kept, self.kind)
    }
}
