//! Block partitions `ℝ²ⁿ = ℝ^{2n_A} ⊕ ℝ^{2n_B}`, Schur complements, and
//! orthogonal projections (shadows) of ellipsoids.
//!
//! Public inputs and outputs use the global `(x₁..xₙ, p₁..pₙ)` ordering.
//! [`BlockPartition`] is the one place where that ordering is converted to
//! the block ordering `(x_A, p_A, x_B, p_B)`, where A is the first `n_A`
//! degrees of freedom.

mod ellipsoid;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{cholesky, spd_inverse, Matrix};

pub use ellipsoid::{
    contains, containment_worst_ratio, project_ellipsoid, unit_ball_volume, volume, Ellipsoid,
    DEFAULT_CONTAINMENT_SAMPLES, MEMBERSHIP_REL_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    A,
    B,
}

/// Splitting of `n = n_A + n_B` degrees of freedom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    n_a: usize,
    n_b: usize,
    perm: Vec<usize>,
}

impl BlockPartition {
    pub fn new(n_a: usize, n_b: usize) -> Result<Self> {
        if n_a == 0 || n_b == 0 {
            return Err(Error::DimensionMismatch(format!(
                "both blocks need at least one degree of freedom (n_A={n_a}, n_B={n_b})"
            )));
        }
        let n = n_a + n_b;
        let perm = (0..n_a)
            .chain(n..n + n_a)
            .chain(n_a..n)
            .chain(n + n_a..2 * n)
            .collect();
        Ok(BlockPartition { n_a, n_b, perm })
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn n(&self) -> usize {
        self.n_a + self.n_b
    }

    /// `perm[block index] = global index`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    fn a_indices(&self) -> &[usize] {
        &self.perm[..2 * self.n_a]
    }

    fn b_indices(&self) -> &[usize] {
        &self.perm[2 * self.n_a..]
    }

    /// Global-ordered vector to `(z_A, z_B)`.
    pub fn split(&self, z: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if z.len() != 2 * self.n() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} does not match n = {}",
                z.len(),
                self.n()
            )));
        }
        Ok((
            self.a_indices().iter().map(|&i| z[i]).collect(),
            self.b_indices().iter().map(|&i| z[i]).collect(),
        ))
    }

    /// `(z_A, z_B)` back to the global ordering.
    pub fn merge(&self, za: &[f64], zb: &[f64]) -> Result<Vec<f64>> {
        if za.len() != 2 * self.n_a || zb.len() != 2 * self.n_b {
            return Err(Error::DimensionMismatch("block lengths do not match partition".into()));
        }
        let mut z = vec![0.0; 2 * self.n()];
        for (&g, &x) in self.perm.iter().zip(za.iter().chain(zb)) {
            z[g] = x;
        }
        Ok(z)
    }

    /// `M` with rows and columns reordered into block ordering.
    pub fn to_block_order(&self, m: &Matrix) -> Result<Matrix> {
        self.require_dims(m)?;
        Ok(m.select(&self.perm, &self.perm))
    }

    /// Inverse of [`BlockPartition::to_block_order`].
    pub fn to_global_order(&self, m: &Matrix) -> Result<Matrix> {
        self.require_dims(m)?;
        let mut inv = vec![0; self.perm.len()];
        for (b, &g) in self.perm.iter().enumerate() {
            inv[g] = b;
        }
        Ok(m.select(&inv, &inv))
    }

    fn require_dims(&self, m: &Matrix) -> Result<()> {
        let d = 2 * self.n();
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "partition expects {d}x{d}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }
}

/// The four blocks of a matrix under a [`BlockPartition`].
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedMatrix {
    pub partition: BlockPartition,
    pub aa: Matrix,
    pub ab: Matrix,
    pub ba: Matrix,
    pub bb: Matrix,
}

impl PartitionedMatrix {
    /// Reassembles the matrix in global ordering.
    pub fn assemble(&self) -> Matrix {
        let block = Matrix::from_blocks(&self.aa, &self.ab, &self.ba, &self.bb)
            .expect("blocks come from a valid partition");
        self.partition
            .to_global_order(&block)
            .expect("blocks come from a valid partition")
    }

    fn pivot(&self, eliminated: Block) -> &Matrix {
        match eliminated {
            Block::A => &self.aa,
            Block::B => &self.bb,
        }
    }
}

pub fn partition(m: &Matrix, p: &BlockPartition) -> Result<PartitionedMatrix> {
    let blocked = p.to_block_order(m)?;
    let (da, db) = (2 * p.n_a, 2 * p.n_b);
    Ok(PartitionedMatrix {
        partition: p.clone(),
        aa: blocked.block(0, 0, da, da),
        ab: blocked.block(0, da, da, db),
        ba: blocked.block(da, 0, db, da),
        bb: blocked.block(da, da, db, db),
    })
}

fn pivot_inverse(pivot: &Matrix) -> Result<Matrix> {
    cholesky(&pivot.symmetrize()).map_err(|_| Error::PivotNotPD)?;
    spd_inverse(&pivot.symmetrize()).map_err(|_| Error::PivotNotPD)
}

/// Schur complement eliminating the given block:
/// `M/M_BB = M_AA − M_AB M_BB⁻¹ M_BA` for `Block::B`, and
/// `M/M_AA = M_BB − M_BA M_AA⁻¹ M_AB` for `Block::A`.
pub fn schur(p: &PartitionedMatrix, eliminated: Block) -> Result<Matrix> {
    let pinv = pivot_inverse(p.pivot(eliminated))?;
    let out = match eliminated {
        Block::B => &p.aa - &(&(&p.ab * &pinv) * &p.ba),
        Block::A => &p.bb - &(&(&p.ba * &pinv) * &p.ab),
    };
    Ok(out.symmetrize())
}

/// `M⁻¹` assembled blockwise from the two Schur complements, returned in
/// global ordering:
///
/// ```text
/// [ (M/M_BB)⁻¹                    −(M/M_BB)⁻¹ M_AB M_BB⁻¹ ]
/// [ −M_BB⁻¹ M_BA (M/M_BB)⁻¹        (M/M_AA)⁻¹             ]
/// ```
pub fn block_inverse(p: &PartitionedMatrix) -> Result<Matrix> {
    let bb_inv = pivot_inverse(&p.bb)?;
    let sb_inv = spd_inverse(&schur(p, Block::B)?).map_err(|_| Error::PivotNotPD)?;
    let sa_inv = spd_inverse(&schur(p, Block::A)?).map_err(|_| Error::PivotNotPD)?;
    let upper_right = -&(&(&sb_inv * &p.ab) * &bb_inv);
    let lower_left = -&(&(&bb_inv * &p.ba) * &sb_inv);
    let block = Matrix::from_blocks(&sb_inv, &upper_right, &lower_left, &sa_inv)?;
    p.partition.to_global_order(&block)
}

/// Off-diagonal block `X = −(M/M_BB)⁻¹ M_AB M_BB⁻¹` of `M⁻¹`.
pub fn inverse_coupling(p: &PartitionedMatrix) -> Result<Matrix> {
    let bb_inv = pivot_inverse(&p.bb)?;
    let sb_inv = spd_inverse(&schur(p, Block::B)?).map_err(|_| Error::PivotNotPD)?;
    Ok(-&(&(&sb_inv * &p.ab) * &bb_inv))
}

/// For a point `z_A` on the shadow boundary, the `z_B` that puts `(z_A, z_B)`
/// on the boundary of the source ellipsoid: `z_B = −Q_BB⁻¹ Q_BA z_A`.
pub fn shadow_lift(p: &PartitionedMatrix, za: &[f64]) -> Result<Vec<f64>> {
    let bb_inv = pivot_inverse(&p.bb)?;
    let w = p.ba.matvec(za)?;
    Ok(bb_inv.matvec(&w)?.into_iter().map(|x| -x).collect())
}
