//! Gaussian and circular random-matrix ensembles.

use std::f64::consts::TAU;

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    eigenphases_unitary, eigenvalues_hermitian, DenseMatrix, RngStream, Spectrum, SpectrumKind,
};

/// Relative tolerance (of the spectral width) for matching Kramers pairs.
pub const KRAMERS_TOL: f64 = 1e-8;

/// Dyson symmetry index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum DysonIndex {
    Orthogonal,
    Unitary,
    Symplectic,
}

impl DysonIndex {
    pub fn value(self) -> u8 {
        match self {
            DysonIndex::Orthogonal => 1,
            DysonIndex::Unitary => 2,
            DysonIndex::Symplectic => 4,
        }
    }
}

impl TryFrom<u8> for DysonIndex {
    type Error = Error;

    fn try_from(beta: u8) -> Result<Self> {
        match beta {
            1 => Ok(DysonIndex::Orthogonal),
            2 => Ok(DysonIndex::Unitary),
            4 => Ok(DysonIndex::Symplectic),
            other => Err(Error::InvalidParameter(format!(
                "Dyson index must be 1, 2 or 4, got {other}"
            ))),
        }
    }
}

impl From<DysonIndex> for u8 {
    fn from(b: DysonIndex) -> u8 {
        b.value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianEnsembleSpec {
    pub beta: DysonIndex,
    /// Number of distinct levels returned.
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularEnsembleSpec {
    pub beta: DysonIndex,
    pub dim: usize,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter("ensemble dimension must be positive".into()));
    }
    Ok(())
}

/// The Hermitian matrix behind a Gaussian sample. For the symplectic
/// ensemble it has dimension `2 * dim` and a doubly degenerate spectrum.
pub fn gaussian_matrix(spec: GaussianEnsembleSpec, rng: &mut RngStream) -> Result<DenseMatrix> {
    check_dim(spec.dim)?;
    let n = spec.dim;
    let m = match spec.beta {
        DysonIndex::Orthogonal => {
            let g = DenseMatrix::from_real_fn(n, |_, _| rng.gaussian());
            DenseMatrix::from_fn(n, |i, j| 0.5 * (g[(i, j)] + g[(j, i)]))
        }
        DysonIndex::Unitary => {
            let g = DenseMatrix::from_fn(n, |_, _| rng.complex_gaussian());
            DenseMatrix::from_fn(n, |i, j| 0.5 * (g[(i, j)] + g[(j, i)].conj()))
        }
        DysonIndex::Symplectic => {
            let ga = DenseMatrix::from_fn(n, |_, _| rng.complex_gaussian());
            let gb = DenseMatrix::from_fn(n, |_, _| rng.complex_gaussian());
            // A Hermitian, B antisymmetric
            let a = |i: usize, j: usize| 0.5 * (ga[(i, j)] + ga[(j, i)].conj());
            let b = |i: usize, j: usize| 0.5 * (gb[(i, j)] - gb[(j, i)]);
            DenseMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
                (true, true) => a(i, j),
                (true, false) => b(i, j - n),
                (false, true) => -b(i - n, j).conj(),
                (false, false) => a(i - n, j - n).conj(),
            })
        }
    };
    Ok(m)
}

/// Levels of one Gaussian-ensemble matrix, sorted, exactly `spec.dim` long.
pub fn sample_gaussian(spec: GaussianEnsembleSpec, rng: &mut RngStream) -> Result<Spectrum> {
    let m = gaussian_matrix(spec, rng)?;
    let raw = eigenvalues_hermitian(&m)?;
    match spec.beta {
        DysonIndex::Symplectic => {
            let levels = kramers_pairs_line(raw.levels())?;
            Spectrum::new(levels, SpectrumKind::Line)
        }
        _ => Ok(raw),
    }
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `diag(R)` moved into `Q`.
pub fn haar_unitary(dim: usize, rng: &mut RngStream) -> Result<DenseMatrix> {
    check_dim(dim)?;
    let z = Mat::<Complex64>::from_fn(dim, dim, |_, _| rng.complex_gaussian());
    let qr = z.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<Complex64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            let n = d.norm();
            if n == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                d / n
            }
        })
        .collect();
    Ok(DenseMatrix::from_fn(dim, |i, j| q[(i, j)] * phases[j]))
}

/// The unitary behind a circular sample (dimension `2 * dim` for beta = 4).
pub fn circular_matrix(spec: CircularEnsembleSpec, rng: &mut RngStream) -> Result<DenseMatrix> {
    check_dim(spec.dim)?;
    let n = spec.dim;
    match spec.beta {
        DysonIndex::Unitary => haar_unitary(n, rng),
        DysonIndex::Orthogonal => {
            let u = haar_unitary(n, rng)?;
            u.transpose().matmul(&u)
        }
        DysonIndex::Symplectic => {
            let u = haar_unitary(2 * n, rng)?;
            quaternion_dual(&u).matmul(&u)
        }
    }
}

/// `J U^T J^-1` with `J = [[0, I], [-I, 0]]`.
pub fn quaternion_dual(u: &DenseMatrix) -> DenseMatrix {
    let dim = u.dim();
    let n = dim / 2;
    // (J X J^-1)_{ij} = s(i) s(j) X_{p(i), p(j)}, p swaps halves, s = +1 top / -1 bottom
    let partner = |i: usize| if i < n { i + n } else { i - n };
    let sign = |i: usize| if i < n { 1.0 } else { -1.0 };
    DenseMatrix::from_fn(dim, |i, j| {
        // X = U^T
        u[(partner(j), partner(i))] * (sign(i) * sign(j))
    })
}

/// Eigenphases of one circular-ensemble matrix, exactly `spec.dim` long.
pub fn sample_circular(spec: CircularEnsembleSpec, rng: &mut RngStream) -> Result<Spectrum> {
    let w = circular_matrix(spec, rng)?;
    let raw = eigenphases_unitary(&w)?;
    match spec.beta {
        DysonIndex::Symplectic => {
            let phases = kramers_pairs_circle(raw.levels())?;
            Spectrum::from_unsorted(phases, SpectrumKind::Circle)
        }
        _ => Ok(raw),
    }
}

/// Collapses consecutive degenerate pairs of sorted real levels to their means.
pub fn kramers_pairs_line(levels: &[f64]) -> Result<Vec<f64>> {
    if !levels.len().is_multiple_of(2) {
        return Err(Error::KramersMismatch {
            index: levels.len() - 1,
            gap: f64::INFINITY,
            tol: 0.0,
        });
    }
    let width = levels.last().copied().unwrap_or(0.0) - levels.first().copied().unwrap_or(0.0);
    let tol = KRAMERS_TOL * width.max(f64::MIN_POSITIVE);
    levels
        .chunks_exact(2)
        .enumerate()
        .map(|(p, pair)| {
            let gap = pair[1] - pair[0];
            if gap > tol {
                Err(Error::KramersMismatch {
                    index: 2 * p,
                    gap,
                    tol,
                })
            } else {
                Ok(0.5 * (pair[0] + pair[1]))
            }
        })
        .collect()
}

/// Kramers pairing for sorted phases in `[0, 2pi)`; a pair may straddle the
/// branch cut, in which case the pairing is shifted by one.
pub fn kramers_pairs_circle(phases: &[f64]) -> Result<Vec<f64>> {
    let n = phases.len();
    if !n.is_multiple_of(2) {
        return Err(Error::KramersMismatch {
            index: n - 1,
            gap: f64::INFINITY,
            tol: 0.0,
        });
    }
    let tol = KRAMERS_TOL * TAU;
    let gap = |a: f64, b: f64| {
        let d = (b - a).rem_euclid(TAU);
        d.min(TAU - d)
    };
    let try_offset = |offset: usize| -> Result<Vec<f64>> {
        (0..n / 2)
            .map(|p| {
                let i = (2 * p + offset) % n;
                let j = (2 * p + offset + 1) % n;
                let g = gap(phases[i], phases[j]);
                if g > tol {
                    return Err(Error::KramersMismatch { index: i, gap: g, tol });
                }
                // circular mean of two nearby phases
                let mid = phases[i] + 0.5 * (phases[j] - phases[i]).rem_euclid(TAU);
                let mid = if (phases[j] - phases[i]).rem_euclid(TAU) > std::f64::consts::PI {
                    phases[j] + 0.5 * (phases[i] - phases[j]).rem_euclid(TAU)
                } else {
                    mid
                };
                Ok(crate::numerics::wrap_phase(mid))
            })
            .collect()
    };
    try_offset(0).or_else(|first| try_offset(1).map_err(|_| first))
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::numerics::make_stream;

    fn gauss(beta: u8, dim: usize) -> GaussianEnsembleSpec {
        GaussianEnsembleSpec {
            beta: beta.try_into().unwrap(),
            dim,
        }
    }

    #[test]
    fn dyson_index_validation() {
        assert!(DysonIndex::try_from(3).is_err());
        assert_eq!(DysonIndex::try_from(4).unwrap().value(), 4);
    }

    #[test]
    fn goe_matrix_symmetric() {
        let m = gaussian_matrix(gauss(1, 2), &mut make_stream(3, 0)).unwrap();
        assert!(m.is_real());
        assert_eq!(m[(0, 1)], m[(1, 0)]);
    }

    #[test]
    fn gse_spectrum_is_kramers_degenerate() {
        let m = gaussian_matrix(gauss(4, 100), &mut make_stream(5, 0)).unwrap();
        assert_eq!(m.dim(), 200);
        let raw = eigenvalues_hermitian(&m).unwrap();
        let width = raw.width();
        for pair in raw.levels().chunks_exact(2) {
            assert!((pair[1] - pair[0]).abs() <= 1e-8 * width);
        }
        let s = sample_gaussian(gauss(4, 100), &mut make_stream(5, 0)).unwrap();
        assert_eq!(s.len(), 100);
    }

    #[test]
    fn output_lengths() {
        for beta in [1, 2, 4] {
            let s = sample_gaussian(gauss(beta, 30), &mut make_stream(9, beta as u64)).unwrap();
            assert_eq!(s.len(), 30);
            let spec = CircularEnsembleSpec {
                beta: beta.try_into().unwrap(),
                dim: 30,
            };
            let c = sample_circular(spec, &mut make_stream(9, beta as u64)).unwrap();
            assert_eq!(c.len(), 30);
            assert_eq!(c.kind(), SpectrumKind::Circle);
            assert!(c.levels().iter().all(|t| (0.0..TAU).contains(t)));
        }
    }

    #[test]
    fn haar_dim_one_is_a_phase() {
        let u = haar_unitary(1, &mut make_stream(1, 1)).unwrap();
        assert_abs_diff_eq!(u[(0, 0)].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn haar_is_unitary() {
        let u = haar_unitary(64, &mut make_stream(8, 8)).unwrap();
        assert!(u.unitarity_defect() <= 1e-10);
    }

    #[test]
    fn coe_matrix_symmetric() {
        let spec = CircularEnsembleSpec {
            beta: DysonIndex::Orthogonal,
            dim: 2,
        };
        let w = circular_matrix(spec, &mut make_stream(4, 0)).unwrap();
        assert!((w[(0, 1)] - w[(1, 0)]).norm() < 1e-14);
    }

    #[test]
    fn reproducible() {
        let a = sample_gaussian(gauss(2, 50), &mut make_stream(77, 3)).unwrap();
        let b = sample_gaussian(gauss(2, 50), &mut make_stream(77, 3)).unwrap();
        let bits = |s: &Spectrum| s.levels().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn circle_pairing_across_branch_cut() {
        let phases = [1e-12, 1.0, 1.0 + 1e-11, TAU - 1e-12];
        let merged = kramers_pairs_circle(&phases).unwrap();
        assert_eq!(merged.len(), 2);
        assert!(merged.iter().any(|&t| (t - 1.0).abs() < 1e-10));
        assert!(merged.iter().any(|&t| t < 1e-11 || t > TAU - 1e-11));
    }

    #[test]
    fn pairing_mismatch_is_an_error() {
        assert!(matches!(
            kramers_pairs_line(&[0.0, 0.5, 1.0, 1.0]),
            Err(Error::KramersMismatch { index: 0, .. })
        ));
    }
}
