//! Deterministic random streams and the random inputs used by tests and the
//! verification campaign.
//!
//! Every stream is a pure function of `(master seed, purpose label, index)`,
//! so results never depend on evaluation order or thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{Matrix, Tolerance};

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Independent generator for `(seed, label, index)`.
pub fn stream(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut state = seed ^ fnv1a(label).rotate_left(17) ^ index.wrapping_mul(0xD134_2543_DE82_EF95);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

pub fn gaussian_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::new(rows, cols, gaussian_vec(rng, rows * cols)).expect("gaussian entries are finite")
}

/// Uniform direction on the unit sphere in `dim` dimensions.
pub fn unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, dim);
        let n = crate::matcore::norm2(&v);
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Symmetric matrix with standard normal entries, symmetrized.
pub fn random_symmetric<R: Rng>(rng: &mut R, dim: usize) -> Matrix {
    gaussian_matrix(rng, dim, dim).symmetrize()
}

/// Haar-ish orthogonal matrix: eigenvectors of a random symmetric matrix.
pub fn random_orthogonal<R: Rng>(rng: &mut R, dim: usize) -> Matrix {
    random_symmetric(rng, dim)
        .sym_eig(Tolerance::default())
        .expect("random symmetric matrix diagonalizes")
        .vectors
}

/// SPD matrix `Q diag(e) Qᵀ` with eigenvalues log-uniform in `[lo, lo·cond]`.
pub fn random_spd<R: Rng>(rng: &mut R, dim: usize, lo: f64, cond: f64) -> Matrix {
    let q = random_orthogonal(rng, dim);
    let e: Vec<f64> = (0..dim)
        .map(|_| lo * cond.powf(rng.random::<f64>()))
        .collect();
    (&(&q * &Matrix::from_diag(&e)) * &q.transpose()).symmetrize()
}
