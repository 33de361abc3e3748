//! Inscribed symplectic balls in orthogonal projections of symplectic balls.
//!
//! For `S ∈ Sp(n)` the ball `S(B²ⁿ(R))` is the ellipsoid `{Mz·z ≤ R²}` with
//! `M = (SSᵀ)⁻¹`. Its shadow on the A coordinates has shape `M/M_BB`, whose
//! symplectic eigenvalues never exceed one; the Williamson factor of the
//! shadow then gives a symplectic ball of the same radius inside it.

mod exactness;

use serde::Serialize;

pub use exactness::{
    image_commutator, Criterion, ExactnessReport, Verdict, COUPLED_COUPLING_TOL, COUPLED_SECOND_ORDER_TOL,
    EXACT_COUPLING_TOL, EXACT_SECOND_ORDER_TOL, ROUNDING_FACTOR,
};

use crate::error::{Error, Result};
use crate::matcore::{Matrix, Tolerance};
use crate::projection::{partition, schur, unit_ball_volume, volume, Block, BlockPartition, Ellipsoid};
use crate::symplectic::{
    is_symplectic, require_symplectic, symplectic_inverse, symplectic_spectrum, unitary_reduction, williamson,
    ComplexSubspace,
};

/// Everything known about the shadow of `S(B²ⁿ(R))` on a `2n_A`-dimensional
/// complex subspace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionAnalysis {
    pub n: usize,
    pub n_a: usize,
    pub radius: f64,
    /// Automorphism of the inscribed ball.
    pub s_a: Matrix,
    /// Symplectic spectrum of `M/M_BB`, ascending.
    pub lambda_a: Vec<f64>,
    pub exact: bool,
    pub borderline: bool,
    /// Present iff `exact`: `S_B S_Bᵀ = (M/M_AA)⁻¹`.
    pub s_b: Option<Matrix>,
    pub projected: Ellipsoid,
    /// `S_A(B^{2n_A}(R))`, shape `(S_A S_Aᵀ)⁻¹`.
    pub inscribed: Ellipsoid,
    pub vol_projected: f64,
    /// `(πR²)^{n_A} / n_A!`.
    pub vol_bound: f64,
    pub vol_inscribed: f64,
    pub exactness: ExactnessReport,
    /// For [`analyze_subspace`]: the `2n × 2n_A` orthonormal frame of `𝕍`.
    /// Ellipsoid coordinates `y` stand for the point `frame·y`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<Matrix>,
}

impl ProjectionAnalysis {
    /// `max Λ_A`.
    pub fn max_lambda(&self) -> f64 {
        self.lambda_a.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")))
    }
}

fn n_of(s: &Matrix) -> Result<usize> {
    if !s.is_square() || !s.rows().is_multiple_of(2) || s.rows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected an even square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    Ok(s.rows() / 2)
}

/// `M = (SSᵀ)⁻¹ = S⁻ᵀS⁻¹` and `M⁻¹ = SSᵀ`, both without a linear solve.
fn shape_pair(s: &Matrix) -> (Matrix, Matrix) {
    let s_inv = symplectic_inverse(s);
    let m = (&s_inv.transpose() * &s_inv).symmetrize();
    let minv = (s * &s.transpose()).symmetrize();
    (m, minv)
}

/// Symmetric positive definite symplectic square root, if `p` admits one.
fn symplectic_sqrt(p: &Matrix, n: usize) -> Result<Option<Matrix>> {
    let root = p.sqrt_pd(Tolerance::default())?;
    Ok(is_symplectic(&root, n, Tolerance::default())?.then_some(root))
}

/// Shadow of `S(B²ⁿ(R))` on the first `n_A` degrees of freedom
/// (`x₁..x_{n_A}, p₁..p_{n_A}`) and the symplectic ball inscribed in it.
///
/// `S_A` is the inverse Williamson factor of `M/M_BB = (S_A⁻¹)ᵀ D_A S_A⁻¹`.
/// In the exact case it is replaced by the symmetric positive definite
/// square root of `(M/M_BB)⁻¹`, which removes the rotation freedom.
pub fn analyze_split(s: &Matrix, n_a: usize, radius: f64) -> Result<ProjectionAnalysis> {
    let n = n_of(s)?;
    if n_a == 0 || n_a > n {
        return Err(Error::DimensionMismatch(format!("need 1 <= n_A <= n, got n_A={n_a}, n={n}")));
    }
    check_radius(radius)?;
    require_symplectic(s, n, Tolerance::default())?;
    let (m, minv) = shape_pair(s);

    if n_a == n {
        let ball = Ellipsoid::centered(m, radius)?;
        let vol = volume(&ball)?;
        return Ok(ProjectionAnalysis {
            n,
            n_a,
            radius,
            s_a: s.clone(),
            lambda_a: vec![1.0; n],
            exact: true,
            borderline: false,
            s_b: None,
            projected: ball.clone(),
            inscribed: ball,
            vol_projected: vol,
            vol_bound: unit_ball_volume(2 * n) * radius.powi(2 * n as i32),
            vol_inscribed: vol,
            exactness: ExactnessReport::trivial(),
            frame: None,
        });
    }

    let part = BlockPartition::new(n_a, n - n_a)?;
    let pm = partition(&m, &part)?;
    let q_a = schur(&pm, Block::B)?;
    let wd = williamson(&q_a, n_a)?;
    let exactness = exactness::assess(s, &m, &minv, &part)?;
    let exact = exactness.exact();

    let mut s_a = symplectic_inverse(&wd.s);
    let mut s_b = None;
    if exact {
        let minv_blocks = partition(&minv, &part)?;
        if let Some(root) = symplectic_sqrt(&minv_blocks.aa.symmetrize(), n_a)? {
            s_a = root;
        }
        s_b = symplectic_sqrt(&minv_blocks.bb.symmetrize(), n - n_a)?;
    }

    // (S_A S_Aᵀ)⁻¹ = S_A⁻ᵀ S_A⁻¹
    let s_a_inv = symplectic_inverse(&s_a);
    let inscribed = Ellipsoid::centered((&s_a_inv.transpose() * &s_a_inv).symmetrize(), radius)?;
    let projected = Ellipsoid::centered(q_a, radius)?;
    let vol_projected = volume(&projected)?;
    let vol_inscribed = volume(&inscribed)?;

    Ok(ProjectionAnalysis {
        n,
        n_a,
        radius,
        s_a,
        lambda_a: wd.lambda,
        exact,
        borderline: exactness.borderline(),
        s_b,
        projected,
        inscribed,
        vol_projected,
        vol_bound: unit_ball_volume(2 * n_a) * radius.powi(2 * n_a as i32),
        vol_inscribed,
        exactness,
        frame: None,
    })
}

/// `(exact, ‖X‖_max / ‖M⁻¹‖_max)` with `X = −(M/M_BB)⁻¹ M_AB M_BB⁻¹` the
/// off-diagonal block of `M⁻¹`.
pub fn exactness_check(s: &Matrix, n_a: usize) -> Result<(bool, f64)> {
    let n = n_of(s)?;
    if n_a == 0 || n_a > n {
        return Err(Error::DimensionMismatch(format!("need 1 <= n_A <= n, got n_A={n_a}, n={n}")));
    }
    require_symplectic(s, n, Tolerance::default())?;
    if n_a == n {
        return Ok((true, 0.0));
    }
    let part = BlockPartition::new(n_a, n - n_a)?;
    let (m, minv) = shape_pair(s);
    let report = exactness::assess(s, &m, &minv, &part)?;
    Ok((report.exact(), report.coupling.value))
}

/// Shadow on an arbitrary complex subspace `𝕍`.
///
/// With `U ∈ Sp(n) ∩ O(2n)` taking `ℝ^{2k} ⊕ 0` onto `𝕍`, the shadow on `𝕍`
/// is `U` applied to the shadow of `UᵀS(B²ⁿ(R))` on the first `k` degrees
/// of freedom. The ellipsoids are reported in the coordinates of the frame
/// `U|_{ℝ^{2k}⊕0}`; volumes are unchanged.
pub fn analyze_subspace(s: &Matrix, v: &ComplexSubspace, radius: f64) -> Result<ProjectionAnalysis> {
    let n = n_of(s)?;
    if v.ambient_n() != n {
        return Err(Error::DimensionMismatch(format!(
            "subspace lives in dimension {}, matrix in {}",
            2 * v.ambient_n(),
            2 * n
        )));
    }
    require_symplectic(s, n, Tolerance::default())?;
    let u = unitary_reduction(v)?;
    let k = v.k();
    let mut analysis = analyze_split(&(&u.transpose() * s), k, radius)?;
    let rows: Vec<usize> = (0..2 * n).collect();
    let cols: Vec<usize> = (0..k).chain(n..n + k).collect();
    analysis.frame = Some(u.select(&rows, &cols));
    Ok(analysis)
}

/// Whether `Sᵀ𝕍` is again complex, i.e. `JSᵀ𝕍 = Sᵀ𝕍`.
pub fn complexity_of_image(s: &Matrix, v: &ComplexSubspace, tol: Tolerance) -> Result<bool> {
    let n = n_of(s)?;
    require_symplectic(s, n, Tolerance::default())?;
    Ok(image_commutator(s, v.basis())? <= tol.bound(1.0))
}

/// Symplectic spectrum of `(M/M_AA)⁻¹`; all ones when `S` splits.
pub fn complementary_spectrum(s: &Matrix, n_a: usize) -> Result<Vec<f64>> {
    let n = n_of(s)?;
    let part = BlockPartition::new(n_a, n.saturating_sub(n_a))?;
    let (_, minv) = shape_pair(s);
    let blocks = partition(&minv, &part)?;
    Ok(symplectic_spectrum(&blocks.bb.symmetrize(), n - n_a)?.values)
}
