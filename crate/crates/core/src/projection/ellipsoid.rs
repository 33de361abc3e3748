use rayon::prelude::*;
use serde::Serialize;

use super::{partition, schur, Block, BlockPartition};
use crate::error::{Error, Result};
use crate::matcore::{cholesky, spd_log_det, Matrix, Tolerance};
use crate::sampling::{stream, unit_vector};

/// Relative slack in the membership predicate.
pub const MEMBERSHIP_REL_TOL: f64 = 1e-9;

pub const DEFAULT_CONTAINMENT_SAMPLES: usize = 100_000;

/// `{ z : Q(z − c)·(z − c) ≤ R² }` with `Q` symmetric positive definite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ellipsoid {
    q: Matrix,
    radius: f64,
    center: Vec<f64>,
}

impl Ellipsoid {
    pub fn new(q: Matrix, radius: f64, center: Vec<f64>) -> Result<Self> {
        q.check_symmetric(Tolerance::default())?;
        if center.len() != q.rows() {
            return Err(Error::DimensionMismatch(format!(
                "center has length {}, shape matrix is {}x{}",
                center.len(),
                q.rows(),
                q.cols()
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        let q = q.symmetrize();
        cholesky(&q)?;
        Ok(Ellipsoid { q, radius, center })
    }

    /// Ball of radius `radius` centred at the origin.
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Ellipsoid::new(Matrix::identity(dim), radius, vec![0.0; dim])
    }

    pub fn centered(q: Matrix, radius: f64) -> Result<Self> {
        let d = q.rows();
        Ellipsoid::new(q, radius, vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    pub fn shape(&self) -> &Matrix {
        &self.q
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// `Q(z − c)·(z − c) / R²`; at most one inside.
    pub fn level(&self, z: &[f64]) -> Result<f64> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} in a {}-dimensional ellipsoid",
                z.len(),
                self.dim()
            )));
        }
        let d: Vec<f64> = z.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        Ok(self.q.quadratic_form(&d)? / (self.radius * self.radius))
    }

    pub fn contains_point(&self, z: &[f64]) -> Result<bool> {
        Ok(self.level(z)? <= 1.0 + MEMBERSHIP_REL_TOL)
    }

    /// Linear image `{ T z : z ∈ E }` for invertible `T`: shape `T⁻ᵀ Q T⁻¹`.
    pub fn transformed(&self, t: &Matrix, t_inv: &Matrix) -> Result<Ellipsoid> {
        let q = &(&t_inv.transpose() * &self.q) * t_inv;
        let c = t.matvec(&self.center)?;
        Ellipsoid::new(q.symmetrize(), self.radius, c)
    }

    /// Map from the unit sphere onto the boundary: `u ↦ c + R·Q^{−1/2}u`.
    pub(crate) fn boundary_map(&self) -> Result<Matrix> {
        Ok(self.q.inv_sqrt_pd(Tolerance::default())?.scale(self.radius))
    }
}

/// Volume of the unit ball in `d` dimensions, `π^{d/2} / Γ(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    // V₀ = 1, V₁ = 2, V_d = (2π/d) V_{d−2}
    let mut v = if d.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if d.is_multiple_of(2) { 2 } else { 3 };
    while k <= d {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v
}

/// `V_d · R^d / √det Q`.
pub fn volume(e: &Ellipsoid) -> Result<f64> {
    let d = e.dim();
    let log_det = spd_log_det(e.shape())?;
    Ok(unit_ball_volume(d) * e.radius().powi(d as i32) * (-0.5 * log_det).exp())
}

/// Shadow of `E` on the A (or B) block: shape `Q/Q_BB` (or `Q/Q_AA`), same
/// radius, centre the corresponding block of `E`'s centre.
pub fn project_ellipsoid(e: &Ellipsoid, p: &BlockPartition, side: Block) -> Result<Ellipsoid> {
    let pm = partition(e.shape(), p)?;
    let (ca, cb) = p.split(e.center())?;
    let (shape, center) = match side {
        Block::A => (schur(&pm, Block::B)?, ca),
        Block::B => (schur(&pm, Block::A)?, cb),
    };
    Ellipsoid::new(shape, e.radius(), center).map_err(|err| match err {
        Error::NotPositiveDefinite { .. } => Error::PivotNotPD,
        other => other,
    })
}

/// Largest `outer.level(z)` over boundary samples `z` of `inner`.
///
/// Sample `i` draws its direction from the stream keyed by `(seed, i)`, so
/// the result does not depend on thread scheduling.
pub fn containment_worst_ratio(outer: &Ellipsoid, inner: &Ellipsoid, samples: usize, seed: u64) -> Result<f64> {
    if outer.dim() != inner.dim() {
        return Err(Error::DimensionMismatch(format!(
            "outer has dimension {}, inner {}",
            outer.dim(),
            inner.dim()
        )));
    }
    let map = inner.boundary_map()?;
    let dim = inner.dim();
    let worst = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, "containment", i);
            let u = unit_vector(&mut rng, dim);
            let mut z = map.matvec(&u).expect("dimensions checked");
            z.iter_mut().zip(inner.center()).for_each(|(a, c)| *a += c);
            outer.level(&z).expect("dimensions checked")
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Monte-Carlo containment test: every sampled boundary point of `inner`
/// must satisfy `outer`'s membership predicate.
pub fn contains(outer: &Ellipsoid, inner: &Ellipsoid, samples: usize, seed: u64) -> Result<bool> {
    Ok(containment_worst_ratio(outer, inner, samples, seed)? <= 1.0 + MEMBERSHIP_REL_TOL)
}
