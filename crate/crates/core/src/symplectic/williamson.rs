use serde::Serialize;

use super::{pair_squares, skew_core, standard_j};
use crate::error::{Error, Result};
use crate::matcore::{argmax_norm, dot, norm2, Matrix, Tolerance};

/// Eigenvalues of `−K²` closer than this (relative to the largest, measured
/// on their square roots) are treated as one degenerate cluster.
const CLUSTER_REL_GAP: f64 = 1e-7;

/// `M = Sᵀ D S` with `S` symplectic and `D = diag(Λ, Λ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WilliamsonDecomposition {
    pub s: Matrix,
    pub lambda: Vec<f64>,
    #[serde(skip)]
    pub d: Matrix,
}

impl WilliamsonDecomposition {
    /// `Sᵀ D S`.
    pub fn reconstruct(&self) -> Matrix {
        &(&self.s.transpose() * &self.d) * &self.s
    }

    /// `‖SᵀDS − M‖_max`.
    pub fn reconstruction_residual(&self, m: &Matrix) -> f64 {
        self.reconstruct().max_abs_diff(m)
    }

    /// `‖SᵀJS − J‖_max`.
    pub fn symplectic_residual(&self) -> f64 {
        let j = standard_j(self.lambda.len());
        (&(&self.s.transpose() * &j) * &self.s).max_abs_diff(&j)
    }
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, w);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Williamson diagonalization of a 2n×2n SPD matrix.
///
/// With `K = M^{1/2} J M^{1/2}` skew, an orthogonal `O` is built with
/// `Oᵀ K O = [[0, Λ], [−Λ, 0]]` by pairing each unit eigenvector `u` of
/// `−K²` with `v = −Ku/λ`. Then `S = D^{−1/2} Oᵀ M^{1/2}` gives `SᵀDS = M`
/// and `SᵀJS = J`. Inside a degenerate cluster the pairs are chosen by joint
/// Gram-Schmidt; if the resulting `O` misses its postcondition the call fails
/// with `DegenerateClusterFailure`.
pub fn williamson(m: &Matrix, n: usize) -> Result<WilliamsonDecomposition> {
    williamson_with(m, n, Tolerance::default())
}

pub fn williamson_with(m: &Matrix, n: usize, tol: Tolerance) -> Result<WilliamsonDecomposition> {
    let (root, k) = skew_core(m, n, tol)?;
    let dim = 2 * n;
    let g = (&k.transpose() * &k).symmetrize();
    let eig = g.sym_eig(tol)?;
    pair_squares(&eig.values)?;

    let roots: Vec<f64> = eig.values.iter().map(|x| x.max(0.0).sqrt()).collect();
    let gap = CLUSTER_REL_GAP * roots[dim - 1];
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=dim {
        if i == dim || roots[i] - roots[i - 1] >= gap {
            clusters.push((start, i));
            start = i;
        }
    }

    let mut chosen: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut pairs: Vec<(f64, Vec<f64>, Vec<f64>)> = Vec::with_capacity(n);
    for &(lo, hi) in &clusters {
        let size = hi - lo;
        if size % 2 != 0 {
            return Err(Error::PairingFailed {
                mismatch: roots[hi - 1] - roots[lo],
            });
        }
        let mut candidates: Vec<Vec<f64>> = (lo..hi).map(|c| eig.vectors.col(c)).collect();
        for _ in 0..size / 2 {
            for c in candidates.iter_mut() {
                orthogonalize(c, &chosen);
            }
            let best = argmax_norm(&candidates).ok_or(Error::DegenerateClusterFailure)?;
            let c = candidates.remove(best);
            let cn = norm2(&c);
            if cn < 1e-3 {
                return Err(Error::DegenerateClusterFailure);
            }
            let u: Vec<f64> = c.iter().map(|x| x / cn).collect();
            let ku = k.matvec(&u)?;
            let lam = norm2(&ku);
            if lam == 0.0 {
                return Err(Error::DegenerateClusterFailure);
            }
            let mut v: Vec<f64> = ku.iter().map(|x| -x / lam).collect();
            chosen.push(u.clone());
            orthogonalize(&mut v, &chosen);
            let vn = norm2(&v);
            if vn < 0.5 {
                return Err(Error::DegenerateClusterFailure);
            }
            v.iter_mut().for_each(|x| *x /= vn);
            chosen.push(v.clone());
            let kv = k.matvec(&v)?;
            pairs.push((dot(&u, &kv), u, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let lambda: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut o = Matrix::zeros(dim, dim);
    for (j, (_, u, v)) in pairs.iter().enumerate() {
        for i in 0..dim {
            o[(i, j)] = u[i];
            o[(i, n + j)] = v[i];
        }
    }

    // postcondition on O: orthogonal and brings K to canonical skew form
    let ot = o.transpose();
    let orth_err = (&ot * &o).max_abs_diff(&Matrix::identity(dim));
    let mut canon = Matrix::zeros(dim, dim);
    for (j, &l) in lambda.iter().enumerate() {
        canon[(j, n + j)] = l;
        canon[(n + j, j)] = -l;
    }
    let skew_err = (&(&ot * &k) * &o).max_abs_diff(&canon);
    if orth_err > 1e-9 || skew_err > 1e-9 * k.norm_max().max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateClusterFailure);
    }

    let inv_sqrt: Vec<f64> = lambda.iter().chain(lambda.iter()).map(|l| 1.0 / l.sqrt()).collect();
    let s = &(&Matrix::from_diag(&inv_sqrt) * &ot) * &root;
    let d = Matrix::from_diag(&lambda.iter().chain(lambda.iter()).copied().collect::<Vec<_>>());
    Ok(WilliamsonDecomposition { s, lambda, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_spd, stream};
    use crate::symplectic::{is_symplectic, symplectic_spectrum};

    fn assert_post(m: &Matrix, n: usize, w: &WilliamsonDecomposition, rel: f64) {
        assert!(w.reconstruction_residual(m) <= rel * m.norm_max(), "reconstruction {}", w.reconstruction_residual(m));
        assert!(w.symplectic_residual() <= rel, "symplectic {}", w.symplectic_residual());
        let spec = symplectic_spectrum(m, n).unwrap();
        for (a, b) in spec.values.iter().zip(&w.lambda) {
            assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn identity_case() {
        let m = Matrix::identity(6);
        let w = williamson(&m, 3).unwrap();
        assert_post(&m, 3, &w, 1e-12);
        assert!(w.lambda.iter().all(|l| (l - 1.0).abs() < 1e-14));
        assert!((&w.s.transpose() * &w.s).max_abs_diff(&Matrix::identity(6)) < 1e-12);
    }

    #[test]
    fn diagonal_two_by_two() {
        let m = Matrix::from_diag(&[4.0, 1.0]);
        let w = williamson(&m, 1).unwrap();
        assert!((w.lambda[0] - 2.0).abs() < 1e-14);
        assert_post(&m, 1, &w, 1e-12);
        assert!(is_symplectic(&w.s, 1, Tolerance::default()).unwrap());
    }

    #[test]
    fn degenerate_clusters() {
        // diag(Λ, Λ) with a repeated entry, rotated by an orthogonal-symplectic map
        let m = Matrix::from_diag(&[2.0, 2.0, 3.0, 2.0, 2.0, 3.0]);
        let w = williamson(&m, 3).unwrap();
        assert_post(&m, 3, &w, 1e-12);
        let u = crate::symplectic::random_orthosymplectic(3, 8).unwrap();
        let m2 = (&(&u.transpose() * &m) * &u).symmetrize();
        assert_post(&m2, 3, &williamson(&m2, 3).unwrap(), 1e-12);
    }

    #[test]
    fn random_spd_round_trip() {
        for i in 0..20 {
            let mut rng = stream(5, "williamson-unit", i);
            let m = random_spd(&mut rng, 6, 0.5, 1e4);
            let w = williamson(&m, 3).unwrap();
            assert_post(&m, 3, &w, 1e-9);
        }
    }
}
