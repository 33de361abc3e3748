//! The standard symplectic structure on ℝ²ⁿ in `(x₁..xₙ, p₁..pₙ)` ordering,
//! symplectic spectra and Williamson diagonalization, and complex subspaces.

mod random;
mod subspace;
mod williamson;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{spd_inverse, Matrix, Tolerance};

pub use random::{expm, random_orthosymplectic, random_symplectic};
pub use subspace::{complex_subspace_from_span, orthonormal_columns, unitary_reduction, ComplexSubspace};
pub use williamson::{williamson, williamson_with, WilliamsonDecomposition};

/// Relative mismatch allowed between the two copies of each eigenvalue of
/// `−K²` before the pairing is declared broken.
pub const PAIRING_REL_TOL: f64 = 1e-8;

/// `J = [[0, Iₙ], [−Iₙ, 0]]`.
pub fn standard_j(n: usize) -> Matrix {
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// The symplectic form `σ(z, z′) = Jz · z′`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n: usize,
    j: Matrix,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch("need at least one degree of freedom".into()));
        }
        Ok(SymplecticForm { n, j: standard_j(n) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> &Matrix {
        &self.j
    }

    pub fn eval(&self, z: &[f64], w: &[f64]) -> Result<f64> {
        let jz = self.j.matvec(z)?;
        if w.len() != jz.len() {
            return Err(Error::DimensionMismatch("vector lengths differ".into()));
        }
        Ok(crate::matcore::dot(&jz, w))
    }
}

/// Ascending symplectic eigenvalues of an SPD matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub values: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

pub(crate) fn require_phase_space(m: &Matrix, n: usize) -> Result<()> {
    if n == 0 || m.rows() != 2 * n || m.cols() != 2 * n {
        return Err(Error::DimensionMismatch(format!(
            "expected a {0}x{0} matrix for n = {n}, got {1}x{2}",
            2 * n,
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// `‖SᵀJS − J‖_max`.
pub fn symplectic_residual(s: &Matrix, n: usize) -> Result<f64> {
    require_phase_space(s, n)?;
    let j = standard_j(n);
    let sjs = &(&s.transpose() * &j) * s;
    Ok(sjs.max_abs_diff(&j))
}

/// `SᵀJS = J` within `abs + rel·‖S‖²_max`.
pub fn is_symplectic(s: &Matrix, n: usize, tol: Tolerance) -> Result<bool> {
    let r = symplectic_residual(s, n)?;
    let scale = s.norm_max();
    Ok(r <= tol.bound(scale * scale))
}

/// Fails with `NotSymplectic` unless `SᵀJS = J` within `tol` relative to `‖S‖²`.
pub fn require_symplectic(s: &Matrix, n: usize, tol: Tolerance) -> Result<()> {
    let residual = symplectic_residual(s, n)?;
    let scale = s.norm_max();
    if residual > tol.bound(scale * scale) {
        return Err(Error::NotSymplectic { residual });
    }
    Ok(())
}

/// `S⁻¹ = −J Sᵀ J`, exact for symplectic S and free of any linear solve.
pub fn symplectic_inverse(s: &Matrix) -> Matrix {
    let n = s.rows() / 2;
    let j = standard_j(n);
    -&(&(&j * &s.transpose()) * &j)
}

/// Skew matrix `K = M^{1/2} J M^{1/2}`, antisymmetrized to kill rounding.
pub(crate) fn skew_core(m: &Matrix, n: usize, tol: Tolerance) -> Result<(Matrix, Matrix)> {
    require_phase_space(m, n)?;
    let root = m.sqrt_pd(tol)?;
    let k = (&(&root * &standard_j(n)) * &root).antisymmetrize();
    Ok((root, k))
}

/// Groups the ascending eigenvalues of `−K²` into consecutive equal pairs.
pub(crate) fn pair_squares(mu: &[f64]) -> Result<Vec<f64>> {
    let top = mu.last().copied().unwrap_or(0.0).abs();
    let mut out = Vec::with_capacity(mu.len() / 2);
    let mut worst: f64 = 0.0;
    for pair in mu.chunks_exact(2) {
        worst = worst.max((pair[1] - pair[0]).abs());
        out.push(0.5 * (pair[0] + pair[1]));
    }
    if !mu.len().is_multiple_of(2) || worst > PAIRING_REL_TOL * top {
        return Err(Error::PairingFailed { mismatch: worst });
    }
    Ok(out)
}

/// Symplectic spectrum of a 2n×2n SPD matrix: the moduli `λⱼ` of the
/// eigenvalues `±iλⱼ` of `JM`, read off as square roots of the paired
/// eigenvalues of the PSD matrix `−K² = KᵀK`.
pub fn symplectic_spectrum(m: &Matrix, n: usize) -> Result<SymplecticSpectrum> {
    symplectic_spectrum_with(m, n, Tolerance::default())
}

pub fn symplectic_spectrum_with(m: &Matrix, n: usize, tol: Tolerance) -> Result<SymplecticSpectrum> {
    let (_, k) = skew_core(m, n, tol)?;
    let g = (&k.transpose() * &k).symmetrize();
    let eig = g.sym_eig(tol)?;
    let squares = pair_squares(&eig.values)?;
    Ok(SymplecticSpectrum {
        values: squares.into_iter().map(|x| x.max(0.0).sqrt()).collect(),
    })
}

/// Largest relative deviation between the ascending spectrum of `M⁻¹` and
/// the reciprocals of the descending spectrum of `M`.
pub fn inverse_spectrum_residual(m: &Matrix, n: usize) -> Result<f64> {
    let fwd = symplectic_spectrum(m, n)?;
    let inv = symplectic_spectrum(&spd_inverse(m)?, n)?;
    Ok(inv
        .values
        .iter()
        .zip(fwd.values.iter().rev())
        .map(|(a, b)| (a - 1.0 / b).abs() / a.abs().max(1.0 / b))
        .fold(0.0, f64::max))
}

/// Checks `λⱼ(M⁻¹) = 1/λ_{n+1−j}(M)` (1-based), the order-reversed pairing.
pub fn inverse_spectrum_check(m: &Matrix, n: usize, tol: Tolerance) -> Result<bool> {
    Ok(inverse_spectrum_residual(m, n)? <= tol.rel.max(tol.abs))
}

/// Real symmetric embedding `[[A, −B], [B, A]]` of the Hermitian `A + iB`.
pub fn hermitian_embedding(re: &Matrix, im: &Matrix) -> Result<Matrix> {
    Matrix::from_blocks(re, &-im, im, re)
}

/// Both routes for deciding `M + iJ ⪰ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdCheck {
    /// Verdict from the symplectic spectrum: `λ₁ ≥ 1 − tol`.
    pub psd: bool,
    /// `λ₁(M)`.
    pub min_spec: f64,
    /// Verdict from the smallest eigenvalue of the real embedding.
    pub embedding_psd: bool,
    pub embedding_min_eig: f64,
}

impl PsdCheck {
    pub fn routes_agree(&self) -> bool {
        self.psd == self.embedding_psd
    }
}

/// Decides `M + iJ ⪰ 0` via `min λⱼ(M) ≥ 1`, and independently via the
/// eigenvalues of the real embedding `[[M, −J], [J, M]]`. Both verdicts use
/// the same threshold `abs + rel·max(‖M‖_max, 1)`.
pub fn psd_check(m: &Matrix, n: usize, tol: Tolerance) -> Result<PsdCheck> {
    let spec = symplectic_spectrum_with(m, n, tol)?;
    let threshold = tol.bound(m.norm_max().max(1.0));
    let emb = hermitian_embedding(m, &standard_j(n))?;
    let emb_min = emb.sym_eig(tol)?.min();
    Ok(PsdCheck {
        psd: spec.min() >= 1.0 - threshold,
        min_spec: spec.min(),
        embedding_psd: emb_min >= -threshold,
        embedding_min_eig: emb_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn j_invariants() {
        for n in 1..4 {
            let j = standard_j(n);
            assert_eq!(&j * &j, Matrix::identity(2 * n).scale(-1.0));
            assert_eq!(j.transpose(), j.scale(-1.0));
            assert!((j.det().unwrap() - 1.0).abs() < 1e-14);
        }
        let f = SymplecticForm::new(1).unwrap();
        // σ(e_x, e_p) = J e_x · e_p = −1 in this convention
        assert_eq!(f.eval(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), -1.0);
    }

    #[test]
    fn is_symplectic_examples() {
        assert!(is_symplectic(&Matrix::identity(2), 1, tol()).unwrap());
        assert!(is_symplectic(&Matrix::from_diag(&[2.0, 0.5]), 1, tol()).unwrap());
        assert!(!is_symplectic(&Matrix::from_diag(&[2.0, 2.0]), 1, tol()).unwrap());
        assert!(matches!(
            is_symplectic(&Matrix::identity(3), 1, tol()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn spectrum_examples() {
        let s = symplectic_spectrum(&Matrix::identity(6), 3).unwrap();
        for v in s.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
        // JM for diag(4,1) has characteristic polynomial λ² + 4
        let s = symplectic_spectrum(&Matrix::from_diag(&[4.0, 1.0]), 1).unwrap();
        assert!((s.values[0] - 2.0).abs() < 1e-14);
        assert!(matches!(
            symplectic_spectrum(&Matrix::from_diag(&[1.0, -1.0]), 1),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn inverse_spectrum_examples() {
        assert!(inverse_spectrum_check(&Matrix::identity(4), 2, tol()).unwrap());
        assert!(inverse_spectrum_check(&Matrix::from_diag(&[4.0, 1.0]), 1, tol()).unwrap());
        let m = Matrix::from_diag(&[1.0, 2.0, 3.0, 5.0]);
        // spectrum (√3, √10); the literal same-order pairing would fail
        let fwd = symplectic_spectrum(&m, 2).unwrap();
        let inv = symplectic_spectrum(&spd_inverse(&m).unwrap(), 2).unwrap();
        assert!((inv.values[0] - 1.0 / fwd.values[1]).abs() < 1e-14);
        assert!((inv.values[0] - 1.0 / fwd.values[0]).abs() > 0.1);
        assert!(inverse_spectrum_check(&m, 2, tol()).unwrap());
    }

    #[test]
    fn psd_check_examples() {
        let c = psd_check(&Matrix::identity(4), 2, tol()).unwrap();
        assert!(c.psd && c.embedding_psd);
        assert!((c.min_spec - 1.0).abs() < 1e-14);

        let c = psd_check(&Matrix::from_diag(&[0.25, 1.0]), 1, tol()).unwrap();
        assert!(!c.psd && !c.embedding_psd);
        assert!((c.min_spec - 0.5).abs() < 1e-14);
        // [[1/4, i], [−i, 1]] has eigenvalues (5 ± √73)/8
        assert!((c.embedding_min_eig - (5.0 - 73f64.sqrt()) / 8.0).abs() < 1e-14);

        let s = random_symplectic(2, 1.0, 3).unwrap();
        let m = &s * &s.transpose();
        let c = psd_check(&m, 2, tol()).unwrap();
        assert!(c.routes_agree());
        assert!((c.min_spec - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symplectic_inverse_matches() {
        let s = random_symplectic(3, 1.0, 11).unwrap();
        let si = symplectic_inverse(&s);
        assert!((&s * &si).max_abs_diff(&Matrix::identity(6)) < 1e-12);
    }
}
