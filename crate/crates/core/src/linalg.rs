//! Small dense linear algebra helpers: exact rational Gaussian elimination,
//! complex kernel extraction, eigenvalue sums, and least-squares fits.

use crate::error::{Error, Result};
use crate::scalar::Rat;
use nalgebra::{Complex, DMatrix, DVector};
use num::traits::Zero;

pub type C64 = Complex<f64>;

/// Solve A x = b exactly over ℚ by Gaussian elimination with partial
/// (first-nonzero) pivoting. Errors if A is singular.
pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut rhs: Vec<Rat> = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::numeric("singular exact linear system"))?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].clone().recip();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
            let sub = &factor * &rhs[col];
            rhs[r] -= sub;
        }
    }
    Ok((0..n)
        .map(|i| &rhs[i] * &m[i][i].clone().recip())
        .collect())
}

/// Exact inverse of a square rational matrix.
pub fn invert_rat(a: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::from_integer(1.into());
        cols.push(solve_rat(a, &e)?);
    }
    // transpose columns into rows
    Ok((0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect())
}

/// Numerically extracted kernel of a complex matrix, with the singular values
/// used for the rank decision.
pub struct Kernel {
    /// Orthonormal kernel basis, one column per kernel vector.
    pub basis: DMatrix<C64>,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// Set when some singular value falls within a factor of 10 of the
    /// threshold, making the rank decision fragile.
    pub ambiguous: bool,
}

/// Kernel of `a` with threshold `rel_tol`·σ_max (absolute floor 1e-300).
pub fn complex_kernel(a: &DMatrix<C64>, rel_tol: f64) -> Result<Kernel> {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::numeric("SVD failed to produce right singular vectors"))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let smax = sv.first().cloned().unwrap_or(0.0);
    let threshold = (rel_tol * smax).max(1e-300);
    let ambiguous = sv
        .iter()
        .any(|&s| s > threshold * 0.1 && s < threshold * 10.0 && s != 0.0 && smax > 0.0);
    // rows of v_t corresponding to small singular values span the kernel
    let mut cols: Vec<DVector<C64>> = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= threshold {
            cols.push(v_t.row(i).transpose().map(|z| z.conj()));
        }
    }
    // v_t may have fewer rows than n when the matrix is wide/rank-truncated;
    // nalgebra returns min(nrows, ncols) rows, which equals n for square input.
    let basis = if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    };
    Ok(Kernel {
        basis,
        singular_values: sv,
        threshold,
        ambiguous,
    })
}

/// Sum of |λ|² over the eigenvalues of a complex matrix (Schur-based).
pub fn eigenvalue_abs_sq_sum(a: &DMatrix<C64>) -> Result<f64> {
    if a.nrows() == 0 {
        return Ok(0.0);
    }
    let schur = a
        .clone()
        .try_schur(1e-14, 10_000)
        .ok_or_else(|| Error::numeric("complex Schur iteration failed to converge"))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().map(|z| z.norm_sqr()).sum())
}

/// Eigenvalues of a complex matrix.
pub fn complex_eigenvalues(a: &DMatrix<C64>) -> Result<Vec<C64>> {
    let schur = a
        .clone()
        .try_schur(1e-14, 10_000)
        .ok_or_else(|| Error::numeric("complex Schur iteration failed to converge"))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().cloned().collect())
}

/// Smallest singular value of a complex matrix.
pub fn sigma_min(a: &DMatrix<C64>) -> f64 {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0.0;
    }
    let svd = a.clone().svd(false, false);
    svd.singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Ordinary least squares y ≈ X·c, returning coefficients and R².
///
/// R² is computed against the centered total sum of squares; a perfectly
/// constant y yields R² = 1 when the fit is exact.
pub fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let xtx = x.transpose() * x;
    let xty = x.transpose() * y;
    let coeffs = xtx
        .lu()
        .solve(&xty)
        .ok_or_else(|| Error::numeric("singular normal equations in least squares"))?;
    let fitted = x * &coeffs;
    let resid = y - &fitted;
    let ss_res: f64 = resid.iter().map(|r| r * r).sum();
    let mean = y.mean();
    let ss_tot: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res <= 1e-24 {
        1.0
    } else {
        0.0
    };
    Ok((coeffs, r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn exact_solve_2x2() {
        // [[1/3, -1/6], [-1/6, 1/3]] x = (1,1)  =>  x = (6,6)
        let a = vec![vec![rat(1, 3), rat(-1, 6)], vec![rat(-1, 6), rat(1, 3)]];
        let b = vec![rat(1, 1), rat(1, 1)];
        let x = solve_rat(&a, &b).unwrap();
        assert_eq!(x, vec![rat(6, 1), rat(6, 1)]);
    }

    #[test]
    fn exact_inverse_roundtrip() {
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(2, 1)]];
        let inv = invert_rat(&a).unwrap();
        assert_eq!(inv[0][0], rat(2, 3));
        assert_eq!(inv[0][1], rat(-1, 3));
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = DMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0); 4]);
        let k = complex_kernel(&a, 1e-10).unwrap();
        assert_eq!(k.basis.ncols(), 1);
        let v = k.basis.column(0);
        let img = &a * v;
        assert!(img.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn eig_sum_matches_frobenius_for_normal() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 2.0),
                C64::new(0.0, -2.0),
                C64::new(3.0, 0.0),
            ],
        );
        // hermitian => sum |λ|² = ||A||_F²
        let s = eigenvalue_abs_sq_sum(&a).unwrap();
        let f: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        assert!((s - f).abs() < 1e-10);
    }
}
