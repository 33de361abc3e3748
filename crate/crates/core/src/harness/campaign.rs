//! Randomized verification campaign over the invariants of the
//! `symplectic`, `projection` and `balls` modules.

use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::balls::analyze_split;
use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::projection::{
    containment_worst_ratio, partition, project_ellipsoid, shadow_lift, Block, BlockPartition, Ellipsoid,
    MEMBERSHIP_REL_TOL,
};
use crate::sampling::{random_spd, stream, unit_vector};
use crate::symplectic::{
    inverse_spectrum_residual, is_symplectic, psd_check, random_symplectic, symplectic_inverse, williamson,
};
use crate::Tolerance;

pub const MAX_N: usize = 10;
pub const DEFAULT_NS: [usize; 3] = [1, 2, 3];
pub const DEFAULT_CASES: usize = 100;
pub const DEFAULT_SPREAD: f64 = 1.0;
pub const DEFAULT_SAMPLES: usize = 100_000;

/// Bound on `max Λ_A − 1`.
const LAMBDA_TOL: f64 = 1e-8;
/// Relative bound on Williamson and inverse-spectrum residuals.
const DECOMPOSITION_TOL: f64 = 1e-8;
/// Relative bound on `|vol_inscribed / vol_bound − 1|` and on the volume
/// deficit `vol_bound − vol_projected`.
const VOLUME_TOL: f64 = 1e-9;
/// Relative bound on how far a lifted shadow-boundary point sits from the
/// source boundary.
const LIFT_TOL: f64 = 1e-9;
const LIFT_POINTS: usize = 16;
/// Condition number of the random SPD matrices fed to Williamson.
const SPD_CONDITION: f64 = 1e4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub ns: Vec<usize>,
    pub cases: usize,
    pub spread: f64,
    pub seed: u64,
    pub samples: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            ns: DEFAULT_NS.to_vec(),
            cases: DEFAULT_CASES,
            spread: DEFAULT_SPREAD,
            seed: 0,
            samples: DEFAULT_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRecord {
    pub index: usize,
    pub n: usize,
    pub n_a: usize,
    pub spread: f64,
    pub lambda_a: Vec<f64>,
    pub x_norm: f64,
    pub exact: bool,
    pub borderline: bool,
    pub criteria_agree: bool,
    pub vol_projected: f64,
    pub vol_bound: f64,
    pub vol_inscribed: f64,
    pub containment_worst: f64,
    pub containment: bool,
    pub williamson_residual: f64,
    pub williamson_symplectic_residual: f64,
    pub psd_routes_agree: bool,
    pub inverse_spectrum_residual: f64,
    pub lift_residual: f64,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub run: usize,
    pub passed: usize,
    pub failed: usize,
    pub borderline: usize,
}

/// Everything except the wall time is a pure function of the config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignBody {
    pub seed: u64,
    pub ns: Vec<usize>,
    pub cases_per_n: usize,
    pub spread: f64,
    pub samples: usize,
    pub counts: Counts,
    pub cases: Vec<CaseRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    #[serde(flatten)]
    pub body: CampaignBody,
    pub wall_time_seconds: f64,
}

impl CampaignReport {
    pub fn all_passed(&self) -> bool {
        self.body.counts.failed == 0
    }
}

fn validate(config: &CampaignConfig) -> Result<()> {
    if let Some(&n) = config.ns.iter().find(|&&n| n == 0 || n > MAX_N) {
        return Err(Error::InvalidArgument(format!("n must be in 1..={MAX_N}, got {n}")));
    }
    if !(config.spread > 0.0 && config.spread.is_finite()) {
        return Err(Error::InvalidArgument(format!("spread must be positive, got {}", config.spread)));
    }
    if config.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    Ok(())
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    validate(config)?;
    let start = Instant::now();
    let jobs: Vec<(usize, usize, usize)> = config
        .ns
        .iter()
        .flat_map(|&n| (0..config.cases).map(move |i| (n, i)))
        .enumerate()
        .map(|(index, (n, i))| (index, n, i))
        .collect();
    let cases: Vec<CaseRecord> = jobs
        .par_iter()
        .map(|&(index, n, i)| run_case(config, index, n, i))
        .collect();
    let failed = cases.iter().filter(|c| !c.passed).count();
    let counts = Counts {
        run: cases.len(),
        passed: cases.len() - failed,
        failed,
        borderline: cases.iter().filter(|c| c.borderline).count(),
    };
    let body = CampaignBody {
        seed: config.seed,
        ns: config.ns.clone(),
        cases_per_n: config.cases,
        spread: config.spread,
        samples: config.samples,
        counts,
        cases,
    };
    Ok(CampaignReport { body, wall_time_seconds: start.elapsed().as_secs_f64() })
}

struct Checks(Vec<String>);

impl Checks {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn ok<T>(&mut self, label: &str, r: Result<T>) -> Option<T> {
        r.map_err(|e| self.0.push(format!("{label}: {e}"))).ok()
    }
}

fn run_case(config: &CampaignConfig, index: usize, n: usize, i: usize) -> CaseRecord {
    let mut rng = stream(config.seed, &format!("verify/n={n}"), i as u64);
    let case_seed = rng.next_u64();
    let n_a = 1 + i % n;
    let mut checks = Checks(Vec::new());
    let mut rec = CaseRecord {
        index,
        n,
        n_a,
        spread: config.spread,
        lambda_a: Vec::new(),
        x_norm: f64::NAN,
        exact: false,
        borderline: false,
        criteria_agree: false,
        vol_projected: f64::NAN,
        vol_bound: f64::NAN,
        vol_inscribed: f64::NAN,
        containment_worst: f64::NAN,
        containment: false,
        williamson_residual: f64::NAN,
        williamson_symplectic_residual: f64::NAN,
        psd_routes_agree: false,
        inverse_spectrum_residual: f64::NAN,
        lift_residual: f64::NAN,
        failures: Vec::new(),
        passed: false,
    };

    if let Some(s) = checks.ok("random_symplectic", random_symplectic(n, config.spread, case_seed)) {
        let symplectic = is_symplectic(&s, n, Tolerance::default()).unwrap_or(false);
        checks.require(symplectic, || "generated matrix is not symplectic".into());
        if let Some(a) = checks.ok("analyze_split", analyze_split(&s, n_a, 1.0)) {
            rec.x_norm = a.exactness.coupling.value;
            rec.exact = a.exact;
            rec.borderline = a.borderline;
            rec.criteria_agree = a.exactness.criteria_agree();
            rec.vol_projected = a.vol_projected;
            rec.vol_bound = a.vol_bound;
            rec.vol_inscribed = a.vol_inscribed;
            let max_lambda = a.max_lambda();
            checks.require(max_lambda <= 1.0 + LAMBDA_TOL, || format!("max lambda_A = {max_lambda} exceeds 1"));
            checks.require(a.vol_projected >= a.vol_bound * (1.0 - VOLUME_TOL), || {
                format!("vol_projected {} below bound {}", a.vol_projected, a.vol_bound)
            });
            checks.require((a.vol_inscribed / a.vol_bound - 1.0).abs() <= VOLUME_TOL, || {
                format!("inscribed volume {} differs from bound {}", a.vol_inscribed, a.vol_bound)
            });
            checks.require(rec.criteria_agree, || "exactness criteria disagree".into());
            if let Some(w) = checks.ok(
                "containment",
                containment_worst_ratio(&a.projected, &a.inscribed, config.samples, case_seed),
            ) {
                rec.containment_worst = w;
                rec.containment = w <= 1.0 + MEMBERSHIP_REL_TOL;
                checks.require(rec.containment, || format!("inscribed ball leaves the projection (level {w})"));
            }
            rec.lambda_a = a.lambda_a;
        }
        if n_a < n {
            let s_inv = symplectic_inverse(&s);
            let m = (&s_inv.transpose() * &s_inv).symmetrize();
            if let Some(r) = checks.ok("shadow lift", lift_residual(&m, n_a, n - n_a, case_seed)) {
                rec.lift_residual = r;
                checks.require(r <= LIFT_TOL, || format!("lifted shadow point off the boundary by {r}"));
            }
        } else {
            rec.lift_residual = 0.0;
        }
    }

    let m = random_spd(&mut rng, 2 * n, 0.05, SPD_CONDITION);
    if let Some(w) = checks.ok("williamson", williamson(&m, n)) {
        rec.williamson_residual = w.reconstruction_residual(&m) / m.norm_max();
        rec.williamson_symplectic_residual = w.symplectic_residual();
        checks.require(rec.williamson_residual <= DECOMPOSITION_TOL, || {
            format!("Williamson reconstruction residual {}", rec.williamson_residual)
        });
        checks.require(rec.williamson_symplectic_residual <= DECOMPOSITION_TOL, || {
            format!("Williamson symplectic residual {}", rec.williamson_symplectic_residual)
        });
    }
    if let Some(c) = checks.ok("psd check", psd_check(&m, n, Tolerance::default())) {
        rec.psd_routes_agree = c.routes_agree();
        checks.require(rec.psd_routes_agree, || "spectral and embedding PSD verdicts differ".into());
    }
    if let Some(r) = checks.ok("inverse spectrum", inverse_spectrum_residual(&m, n)) {
        rec.inverse_spectrum_residual = r;
        checks.require(r <= DECOMPOSITION_TOL, || format!("inverse spectrum residual {r}"));
    }

    rec.passed = checks.0.is_empty();
    rec.failures = checks.0;
    rec
}

/// Largest `|Q(z_A, z_B)·(z_A, z_B) − 1|` over lifted boundary points of the
/// unit shadow of `{Qz·z ≤ 1}`.
fn lift_residual(q: &Matrix, n_a: usize, n_b: usize, seed: u64) -> Result<f64> {
    let part = BlockPartition::new(n_a, n_b)?;
    let pm = partition(q, &part)?;
    let shadow = project_ellipsoid(&Ellipsoid::centered(q.clone(), 1.0)?, &part, Block::A)?;
    let map = shadow.shape().inv_sqrt_pd(Tolerance::default())?;
    let mut worst: f64 = 0.0;
    for k in 0..LIFT_POINTS {
        let mut rng = stream(seed, "verify/lift", k as u64);
        let za = map.matvec(&unit_vector(&mut rng, 2 * n_a))?;
        let zb = shadow_lift(&pm, &za)?;
        let z = part.merge(&za, &zb)?;
        worst = worst.max((q.quadratic_form(&z)? - 1.0).abs());
    }
    Ok(worst)
}
