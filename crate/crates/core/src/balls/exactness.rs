use serde::Serialize;

use crate::error::Result;
use crate::matcore::{spd_log_det, Matrix};
use crate::projection::BlockPartition;
use crate::symplectic::{orthonormal_columns, standard_j, symplectic_spectrum};

/// Relative coupling `‖X‖_max / ‖M⁻¹‖_max` at or below which a split is exact.
pub const EXACT_COUPLING_TOL: f64 = 1e-8;

/// Relative coupling at or above which a split is clearly not exact.
/// Values strictly between the two bounds are borderline.
pub const COUPLED_COUPLING_TOL: f64 = 1e-6;

/// Bands for `max |1 − λⱼ|` and the relative volume excess. Both grow like
/// the square of the coupling (empirically at least half of it), so the
/// bands sit near the squares of the coupling bands. They are widened when
/// the rounding floor `ROUNDING_FACTOR·ε·‖M‖_max‖M⁻¹‖_max` is larger.
pub const EXACT_SECOND_ORDER_TOL: f64 = 1e-13;
pub const COUPLED_SECOND_ORDER_TOL: f64 = 1e-12;
pub const ROUNDING_FACTOR: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Exact,
    Borderline,
    Coupled,
}

impl Verdict {
    pub fn classify(value: f64, exact_below: f64, coupled_above: f64) -> Verdict {
        if value <= exact_below {
            Verdict::Exact
        } else if value >= coupled_above {
            Verdict::Coupled
        } else {
            Verdict::Borderline
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Criterion {
    pub value: f64,
    pub exact_below: f64,
    pub coupled_above: f64,
    pub verdict: Verdict,
}

impl Criterion {
    pub fn new(value: f64, exact_below: f64, coupled_above: f64) -> Self {
        Criterion { value, exact_below, coupled_above, verdict: Verdict::classify(value, exact_below, coupled_above) }
    }

    fn first_order(value: f64) -> Self {
        Criterion::new(value, EXACT_COUPLING_TOL, COUPLED_COUPLING_TOL)
    }

    fn second_order(value: f64, floor: f64) -> Self {
        let exact_below = EXACT_SECOND_ORDER_TOL.max(floor);
        Criterion::new(value, exact_below, COUPLED_SECOND_ORDER_TOL.max(10.0 * exact_below))
    }
}

/// The four independent tests of whether `S` splits as `S_A ⊕ S_B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactnessReport {
    /// `‖X‖_max / ‖M⁻¹‖_max`, `X` the off-diagonal block of `M⁻¹ = SSᵀ`.
    pub coupling: Criterion,
    /// `max |1 − λⱼ(M/M_BB)|`.
    pub spectrum: Criterion,
    /// `‖PJ − JP‖_max` for `P` the projector onto `Sᵀ(ℝ^{2n_A} ⊕ 0)`.
    pub image: Criterion,
    /// `vol_projected / vol_bound − 1`.
    pub volume: Criterion,
    /// `‖XᵀJ_A X + (M/M_AA)⁻¹ J_B (M/M_AA)⁻¹ − J_B‖_max`; zero for every
    /// symplectic `S` up to rounding.
    pub identity_residual: f64,
}

impl ExactnessReport {
    fn criteria(&self) -> [Criterion; 4] {
        [self.coupling, self.spectrum, self.image, self.volume]
    }

    /// Exact when the coupling is negligible and no criterion is borderline.
    pub fn exact(&self) -> bool {
        self.coupling.verdict == Verdict::Exact && !self.borderline()
    }

    pub fn borderline(&self) -> bool {
        self.criteria().iter().any(|c| c.verdict == Verdict::Borderline)
    }

    /// Whether all four criteria give the same verdict. Borderline cases
    /// are not classified and count as agreeing.
    pub fn criteria_agree(&self) -> bool {
        self.borderline() || self.criteria().iter().all(|c| c.verdict == self.coupling.verdict)
    }

    pub(crate) fn trivial() -> Self {
        let zero = Criterion::new(0.0, 0.0, 0.0);
        ExactnessReport { coupling: zero, spectrum: zero, image: zero, volume: zero, identity_residual: 0.0 }
    }
}

/// `‖PJ − JP‖_max` where `P` projects onto the span of `Sᵀ·basis(𝕍)`.
pub fn image_commutator(s: &Matrix, basis: &Matrix) -> Result<f64> {
    let n = s.rows() / 2;
    let image = orthonormal_columns(&s.transpose().matmul(basis)?)?;
    let p = &image * &image.transpose();
    let j = standard_j(n);
    Ok((&p * &j).max_abs_diff(&(&j * &p)))
}

/// Evaluates all four criteria from `M⁻¹ = SSᵀ`.
///
/// The second-order criteria are read off `(M⁻¹)_AA = (M/M_BB)⁻¹`, which
/// comes straight from `S` without a Schur subtraction: its symplectic
/// eigenvalues are the reciprocals of `Λ_A`, and its determinant is
/// `det(M/M_BB)⁻¹`.
pub(crate) fn assess(s: &Matrix, m: &Matrix, minv: &Matrix, part: &BlockPartition) -> Result<ExactnessReport> {
    let (na, nb) = (part.n_a(), part.n_b());
    let blocked = part.to_block_order(minv)?;
    let (da, db) = (2 * na, 2 * nb);
    let minv_aa = blocked.block(0, 0, da, da).symmetrize();
    let x = blocked.block(0, da, da, db);
    let minv_bb = blocked.block(da, da, db, db);
    let coupling = x.norm_max() / minv.norm_max();

    let inv_lambda = symplectic_spectrum(&minv_aa, na)?;
    let spectrum = inv_lambda.values.iter().map(|l| (1.0 - 1.0 / l).abs()).fold(0.0, f64::max);

    let a_axes: Vec<usize> = (0..na).chain(part.n()..part.n() + na).collect();
    let all: Vec<usize> = (0..2 * part.n()).collect();
    let basis = Matrix::identity(2 * part.n()).select(&all, &a_axes);
    let image = image_commutator(s, &basis)?;

    // vol_projected / vol_bound = det(M/M_BB)^{−1/2}
    let volume = (0.5 * spd_log_det(&minv_aa)?).exp_m1().abs();

    let (ja, jb) = (standard_j(na), standard_j(nb));
    let lhs = &(&(&x.transpose() * &ja) * &x) + &(&(&minv_bb * &jb) * &minv_bb);
    let identity_residual = lhs.max_abs_diff(&jb);

    let floor = ROUNDING_FACTOR * f64::EPSILON * m.norm_max() * minv.norm_max();
    Ok(ExactnessReport {
        coupling: Criterion::first_order(coupling),
        spectrum: Criterion::second_order(spectrum, floor),
        image: Criterion::first_order(image),
        volume: Criterion::second_order(volume, floor),
        identity_residual,
    })
}
