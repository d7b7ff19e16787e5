use std::f64::consts::TAU;

use faer::{Mat, Side};
use num_complex::Complex64;

use super::matrix::{DenseMatrix, Spectrum, SpectrumKind};
use crate::error::{Error, Result};

/// Entrywise tolerance for the Hermitian precondition.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Entrywise tolerance for `U^dag U = I` and for `|lambda| = 1`.
pub const UNITARY_TOL: f64 = 1e-8;

fn check_hermitian(m: &DenseMatrix) -> Result<()> {
    m.check_finite()?;
    let (row, col, deviation) = m.hermitian_defect();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            row,
            col,
            deviation,
        });
    }
    Ok(())
}

/// All eigenvalues of a Hermitian matrix, ascending.
///
/// Real symmetric input takes the real solver path.
pub fn eigenvalues_hermitian(m: &DenseMatrix) -> Result<Spectrum> {
    check_hermitian(m)?;
    let values = if m.is_real() {
        m.to_faer_real()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::EigenSolver)?
    } else {
        m.to_faer()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::EigenSolver)?
    };
    Spectrum::from_unsorted(values, SpectrumKind::Line)
}

/// Eigenphases `arg(lambda)` of a unitary matrix mapped to `[0, 2pi)`, ascending.
pub fn eigenphases_unitary(m: &DenseMatrix) -> Result<Spectrum> {
    m.check_finite()?;
    let deviation = m.unitarity_defect();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let values = m.to_faer().eigenvalues().map_err(|_| Error::EigenSolver)?;
    let mut phases = Vec::with_capacity(values.len());
    for (index, z) in values.iter().enumerate() {
        let modulus = z.norm();
        if (modulus - 1.0).abs() > UNITARY_TOL {
            return Err(Error::OffUnitCircle { index, modulus });
        }
        phases.push(wrap_phase(z.arg()));
    }
    Spectrum::from_unsorted(phases, SpectrumKind::Circle)
}

/// Maps an angle into `[0, 2pi)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2pi for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// `V f(Lambda) V^dag` for a Hermitian `m = V Lambda V^dag`.
pub fn hermitian_function(m: &DenseMatrix, f: impl Fn(f64) -> Complex64) -> Result<DenseMatrix> {
    check_hermitian(m)?;
    let evd = m
        .to_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::EigenSolver)?;
    let v = evd.U();
    let s = evd.S();
    let n = m.dim();
    let scaled = Mat::from_fn(n, n, |i, j| v[(i, j)] * f(s[j].re));
    let out = &scaled * v.adjoint();
    Ok(DenseMatrix::from_faer(out.as_ref()))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use approx::assert_abs_diff_eq;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_eigenvalues() {
        let m = DenseMatrix::diagonal(&[c(3.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(eigenvalues_hermitian(&m).unwrap().levels(), &[2.0, 3.0]);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let m = DenseMatrix::from_real_fn(2, |i, j| if i != j { 1.0 } else { 0.0 });
        let s = eigenvalues_hermitian(&m).unwrap();
        assert_abs_diff_eq!(s.levels()[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.levels()[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        // pauli y
        let m = DenseMatrix::new(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap();
        let s = eigenvalues_hermitian(&m).unwrap();
        assert_abs_diff_eq!(s.levels()[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.levels()[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DenseMatrix::from_real_fn(2, |i, j| if i < j { 1.0 } else { 0.0 });
        assert!(matches!(
            eigenvalues_hermitian(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn identity_phases_are_zero() {
        let s = eigenphases_unitary(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(s.levels(), &[0.0, 0.0, 0.0]);
        assert_eq!(s.kind(), SpectrumKind::Circle);
    }

    #[test]
    fn diagonal_unitary_phases() {
        let m = DenseMatrix::diagonal(&[Complex64::from_polar(1.0, FRAC_PI_2), c(-1.0, 0.0)]);
        let s = eigenphases_unitary(&m).unwrap();
        assert_abs_diff_eq!(s.levels()[0], FRAC_PI_2, epsilon = 1e-14);
        assert_abs_diff_eq!(s.levels()[1], PI, epsilon = 1e-14);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = DenseMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(matches!(
            eigenphases_unitary(&m),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(-1e-300), 0.0);
        assert_abs_diff_eq!(wrap_phase(-FRAC_PI_2), 3.0 * FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_phase(5.0 * PI), PI, epsilon = 1e-14);
    }

    #[test]
    fn matrix_exponential_of_pauli_x() {
        // exp(-i t X) = cos t I - i sin t X
        let x = DenseMatrix::from_real_fn(2, |i, j| if i != j { 1.0 } else { 0.0 });
        let t = 0.7f64;
        let u = hermitian_function(&x, |l| Complex64::from_polar(1.0, -t * l)).unwrap();
        assert_abs_diff_eq!(u[(0, 0)].re, t.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(u[(0, 1)].im, -t.sin(), epsilon = 1e-14);
        assert!(u.unitarity_defect() < 1e-14);
    }
}
