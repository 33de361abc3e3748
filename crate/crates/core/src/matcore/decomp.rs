use super::{jacobi::jacobi_eigen, Matrix};
use crate::error::{Error, Result};

/// Largest ratio of extreme singular values an inversion will accept.
pub const CONDITION_LIMIT: f64 = 1e12;

struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
}

fn require_square(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Doolittle LU with partial pivoting. `None` when a pivot is exactly zero.
fn lu(m: &Matrix) -> Option<Lu> {
    let n = m.rows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))?;
        if a[(p, k)] == 0.0 {
            return None;
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = a[(k, k)];
        for i in (k + 1)..n {
            let f = a[(i, k)] / pivot;
            a[(i, k)] = f;
            for j in (k + 1)..n {
                a[(i, j)] -= f * a[(k, j)];
            }
        }
    }
    Some(Lu { lu: a, perm, sign })
}

impl Lu {
    fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.lu.rows();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                x[i] -= self.lu[(i, k)] * x[k];
            }
            x[i] /= self.lu[(i, i)];
        }
        b.copy_from_slice(&x);
    }
}

pub fn det(m: &Matrix) -> Result<f64> {
    require_square(m)?;
    Ok(match lu(m) {
        Some(f) => f.sign * f.lu.diag().iter().product::<f64>(),
        None => 0.0,
    })
}

fn spectral_norm(m: &Matrix) -> Result<f64> {
    let g = &m.transpose() * m;
    Ok(jacobi_eigen(&g.symmetrize())?.max().max(0.0).sqrt())
}

/// General inverse. Reports `Singular` for an exactly zero pivot or when
/// `‖A‖₂·‖A⁻¹‖₂` exceeds [`CONDITION_LIMIT`].
pub fn inv(m: &Matrix) -> Result<Matrix> {
    require_square(m)?;
    let n = m.rows();
    let f = lu(m).ok_or(Error::Singular { cond: f64::INFINITY })?;
    let mut out = Matrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = 0.0);
        e[j] = 1.0;
        f.solve_in_place(&mut e);
        for i in 0..n {
            out[(i, j)] = e[i];
        }
    }
    if !out.all_finite() {
        return Err(Error::Singular { cond: f64::INFINITY });
    }
    let cond = spectral_norm(m)? * spectral_norm(&out)?;
    if cond.is_nan() || cond > CONDITION_LIMIT {
        return Err(Error::Singular { cond });
    }
    Ok(out)
}

/// Lower-triangular Cholesky factor `L` with `M = L Lᵀ`. The upper triangle
/// of `m` is ignored.
pub fn cholesky(m: &Matrix) -> Result<Matrix> {
    require_square(m)?;
    let n = m.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d.is_nan() || d <= 0.0 {
            return Err(Error::NotPositiveDefinite { min_eig: d });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Inverse of a symmetric positive definite matrix via Cholesky; the result
/// is exactly symmetric.
pub fn spd_inverse(m: &Matrix) -> Result<Matrix> {
    let l = cholesky(m)?;
    let n = m.rows();
    // L⁻¹ by forward substitution, then M⁻¹ = L⁻ᵀ L⁻¹
    let mut linv = Matrix::zeros(n, n);
    for j in 0..n {
        linv[(j, j)] = 1.0 / l[(j, j)];
        for i in (j + 1)..n {
            let mut s = 0.0;
            for k in j..i {
                s -= l[(i, k)] * linv[(k, j)];
            }
            linv[(i, j)] = s / l[(i, i)];
        }
    }
    let inv = &linv.transpose() * &linv;
    Ok(inv.symmetrize())
}

/// `ln det M` for symmetric positive definite M.
pub fn spd_log_det(m: &Matrix) -> Result<f64> {
    let l = cholesky(m)?;
    Ok(2.0 * l.diag().iter().map(|d| d.ln()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_and_spd_inverse() {
        let m = Matrix::from_rows(&[[4.0, 2.0], [2.0, 3.0]]).unwrap();
        let l = cholesky(&m).unwrap();
        assert!((&l * &l.transpose()).max_abs_diff(&m) < 1e-15);
        let mi = spd_inverse(&m).unwrap();
        assert!((&m * &mi).max_abs_diff(&Matrix::identity(2)) < 1e-15);
        assert!((spd_log_det(&m).unwrap() - 8f64.ln()).abs() < 1e-14);
        assert!(cholesky(&Matrix::from_diag(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn det_of_permutation_and_singular() {
        let p = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(det(&p).unwrap(), -1.0);
        assert_eq!(det(&Matrix::zeros(3, 3)).unwrap(), 0.0);
    }
}
