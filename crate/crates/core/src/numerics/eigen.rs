use super::SymmetricMatrix;
use crate::error::{Error, Result};
use nalgebra::SymmetricEigen;

const MAX_SWEEPS_PER_ROW: usize = 64;

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(s: &SymmetricMatrix) -> Result<Vec<f64>> {
    let n = s.dim();
    let max_iter = MAX_SWEEPS_PER_ROW * n.max(16);
    let eig = SymmetricEigen::try_new(s.to_nalgebra(), f64::EPSILON, max_iter)
        .ok_or(Error::ConvergenceFailure { n })?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spectrum() {
        let v = symmetric_eigenvalues(&SymmetricMatrix::identity(4).unwrap()).unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn ascending_two_by_two() {
        let s = SymmetricMatrix::from_row_major(2, &[0.75, 0.25, 0.25, 0.75]).unwrap();
        let v = symmetric_eigenvalues(&s).unwrap();
        assert!((v[0] - 0.5).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn indefinite_inputs_are_fine() {
        let s = SymmetricMatrix::from_row_major(2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        let v = symmetric_eigenvalues(&s).unwrap();
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
    }
}
