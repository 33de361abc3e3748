use super::{complex_subspace_from_span, is_symplectic, require_symplectic, standard_j, unitary_reduction};
use crate::error::{Error, Result};
use crate::matcore::{Matrix, Tolerance};
use crate::sampling::{gaussian_matrix, stream};

/// Matrix exponential by scaling and squaring a truncated Taylor series.
/// `target` is the norm the argument is scaled down to before the series.
fn expm_scaled(a: &Matrix, target: f64, terms: usize) -> Matrix {
    let norm1 = (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > target {
        (norm1 / target).log2().ceil() as i32
    } else {
        0
    };
    let b = a.scale(0.5f64.powi(squarings));
    let mut sum = Matrix::identity(a.rows());
    let mut term = Matrix::identity(a.rows());
    for k in 1..=terms {
        term = (&term * &b).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.norm_max() <= f64::EPSILON * 1e-3 * sum.norm_max() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn expm(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("expm needs a square matrix".into()));
    }
    Ok(expm_scaled(a, 0.5, 30))
}

/// Random element of Sp(n): `exp(J H)` with `H` symmetric,
/// `H = spread · (G + Gᵀ) / (2√(2n))` for a standard normal `G`.
///
/// The `1/√(2n)` keeps `‖H‖₂` near `√2 · spread` independently of `n`.
/// Deterministic in `(n, spread, seed)`.
pub fn random_symplectic(n: usize, spread: f64, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(spread > 0.0 && spread.is_finite()) {
        return Err(Error::InvalidArgument(format!("spread must be positive, got {spread}")));
    }
    let dim = 2 * n;
    let mut rng = stream(seed, "random_symplectic", n as u64);
    let g = gaussian_matrix(&mut rng, dim, dim);
    let h = g.symmetrize().scale(spread / (dim as f64).sqrt());
    let a = &standard_j(n) * &h;
    let tol = Tolerance::default();
    let mut s = expm_scaled(&a, 0.5, 30);
    for target in [0.125, 0.03125] {
        if is_symplectic(&s, n, tol)? {
            return Ok(s);
        }
        s = expm_scaled(&a, target, 40);
    }
    require_symplectic(&s, n, tol)?;
    Ok(s)
}

/// Random matrix in Sp(n) ∩ O(2n): complex Gram-Schmidt of Gaussian vectors.
pub fn random_orthosymplectic(n: usize, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut rng = stream(seed, "random_orthosymplectic", n as u64);
    let g = gaussian_matrix(&mut rng, 2 * n, n);
    let jg = &standard_j(n) * &g;
    let span = Matrix::from_fn(2 * n, 2 * n, |i, j| if j < n { g[(i, j)] } else { jg[(i, j - n)] });
    let v = complex_subspace_from_span(&span, Tolerance::default())?;
    unitary_reduction(&v)
}
