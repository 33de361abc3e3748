use super::standard_j;
use crate::error::{Error, Result};
use crate::matcore::{argmax_norm, dot, norm2, Matrix, Tolerance};

/// Relative residual below which a vector counts as dependent on those
/// already accepted.
const RANK_REL_TOL: f64 = 1e-10;

/// A `J`-invariant subspace `𝕍 ⊂ ℝ²ⁿ` of dimension `2k`, held as an
/// orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSubspace {
    ambient_n: usize,
    basis: Matrix,
}

impl ComplexSubspace {
    /// `ℝ^{2k} ⊕ 0`: the first `k` x-axes and first `k` p-axes.
    pub fn coordinate(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::DimensionMismatch(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        let basis = Matrix::from_fn(2 * n, 2 * k, |i, j| {
            let axis = if j < k { j } else { n + j - k };
            if i == axis {
                1.0
            } else {
                0.0
            }
        });
        Ok(ComplexSubspace { ambient_n: n, basis })
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    /// Complex dimension `k` (real dimension `2k`).
    pub fn k(&self) -> usize {
        self.basis.cols() / 2
    }

    /// Orthonormal basis, `2n × 2k`.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Orthogonal projector `B Bᵀ`.
    pub fn projector(&self) -> Matrix {
        &self.basis * &self.basis.transpose()
    }

    /// `‖PJ − JP‖_max`.
    pub fn commutator(&self) -> f64 {
        projector_commutator(&self.projector(), self.ambient_n)
    }
}

pub(crate) fn projector_commutator(p: &Matrix, n: usize) -> f64 {
    let j = standard_j(n);
    (p * &j).max_abs_diff(&(&j * p))
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, w);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Orthonormal basis of the column span (modified Gram-Schmidt with
/// re-orthogonalization). Dependent columns are dropped; an all-dependent
/// input is `RankDeficient`.
pub fn orthonormal_columns(vectors: &Matrix) -> Result<Matrix> {
    let scale = (0..vectors.cols())
        .map(|j| norm2(&vectors.col(j)))
        .fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for j in 0..vectors.cols() {
        let mut w = vectors.col(j);
        orthogonalize(&mut w, &out);
        let r = norm2(&w);
        if r > RANK_REL_TOL * scale && r > 0.0 {
            out.push(w.into_iter().map(|x| x / r).collect());
        }
    }
    if out.is_empty() {
        return Err(Error::RankDeficient);
    }
    Matrix::from_columns(&out)
}

/// Orthonormalizes the span of `vectors` (2n × m) and checks it is complex.
pub fn complex_subspace_from_span(vectors: &Matrix, tol: Tolerance) -> Result<ComplexSubspace> {
    if !vectors.rows().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimension must be even, got {}",
            vectors.rows()
        )));
    }
    let n = vectors.rows() / 2;
    let basis = orthonormal_columns(vectors)?;
    let p = &basis * &basis.transpose();
    let commutator = projector_commutator(&p, n);
    if basis.cols() % 2 != 0 || commutator > tol.bound(1.0) {
        return Err(Error::NotComplex { commutator });
    }
    Ok(ComplexSubspace { ambient_n: n, basis })
}

/// Builds `U ∈ Sp(n) ∩ O(2n)` mapping `ℝ^{2k} ⊕ 0` onto `𝕍`.
///
/// Complex Gram-Schmidt under `⟨u, v⟩ = u·v + i(Ju·v)`: each accepted unit
/// vector `a` brings its partner `b = −Ja`, so the accepted span stays
/// `J`-invariant. Columns `a₁..aₖ` come from `𝕍`, the rest from completing
/// with the standard basis; the matrix `[A, −JA]` commutes with `J` exactly.
pub fn unitary_reduction(v: &ComplexSubspace) -> Result<Matrix> {
    let n = v.ambient_n;
    let dim = 2 * n;
    let j = standard_j(n);
    let k = v.k();
    let basis_cols: Vec<Vec<f64>> = (0..v.basis.cols()).map(|c| v.basis.col(c)).collect();
    let standard: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|r| if r == i { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut a_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (mut pool, wanted) in [(basis_cols, k), (standard, n - k)] {
        for _ in 0..wanted {
            for c in pool.iter_mut() {
                orthogonalize(c, &accepted);
            }
            let best = argmax_norm(&pool).ok_or(Error::GramSchmidtBreakdown)?;
            let c = pool.remove(best);
            let r = norm2(&c);
            if r < 1e-6 {
                return Err(Error::GramSchmidtBreakdown);
            }
            let a: Vec<f64> = c.into_iter().map(|x| x / r).collect();
            let b: Vec<f64> = j.matvec(&a)?.into_iter().map(|x| -x).collect();
            accepted.push(a.clone());
            accepted.push(b);
            a_cols.push(a);
        }
    }
    let a_mat = Matrix::from_columns(&a_cols)?;
    let b_mat = -&(&j * &a_mat);
    Ok(Matrix::from_fn(dim, dim, |r, c| if c < n { a_mat[(r, c)] } else { b_mat[(r, c - n)] }))
}
