//! C interface to `symball`.
//!
//! Matrices and projection analyses cross the boundary as opaque handles
//! owned by the caller and released with the matching `_free` function.
//! Every fallible call returns a [`SymballStatus`]; on failure a message is
//! available from [`symball_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symball::balls::{analyze_split, ProjectionAnalysis};
use symball::symplectic::{psd_check, random_symplectic, symplectic_spectrum, williamson};
use symball::{Error, Matrix, Tolerance};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymballStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    NotSymmetric = 5,
    NotPositiveDefinite = 6,
    NotSymplectic = 7,
    NotComplex = 8,
    RankDeficient = 9,
    Singular = 10,
    /// Eigensolver, pairing or Gram-Schmidt failure.
    NumericalFailure = 11,
    Parse = 12,
    Io = 13,
    /// A Rust panic was caught at the boundary.
    Internal = 14,
}

impl From<&Error> for SymballStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch(_) => SymballStatus::DimensionMismatch,
            Error::NonFinite { .. } => SymballStatus::NonFinite,
            Error::NotSymmetric { .. } => SymballStatus::NotSymmetric,
            Error::NotPositiveDefinite { .. } | Error::PivotNotPD => SymballStatus::NotPositiveDefinite,
            Error::NotSymplectic { .. } => SymballStatus::NotSymplectic,
            Error::NotComplex { .. } => SymballStatus::NotComplex,
            Error::RankDeficient => SymballStatus::RankDeficient,
            Error::Singular { .. } => SymballStatus::Singular,
            Error::EigFailed { .. }
            | Error::PairingFailed { .. }
            | Error::DegenerateClusterFailure
            | Error::GramSchmidtBreakdown => SymballStatus::NumericalFailure,
            Error::InvalidArgument(_) => SymballStatus::InvalidArgument,
            Error::Parse(_) => SymballStatus::Parse,
            Error::Io(_) => SymballStatus::Io,
        }
    }
}

/// Dense real matrix, row-major.
pub struct SymballMatrix(Matrix);

/// Projection of a symplectic ball onto a coordinate splitting.
pub struct SymballAnalysis(ProjectionAnalysis);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(SymballStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(SymballStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SymballStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SymballStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SymballStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SymballStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, need: usize) -> Result<&'a mut [f64], Fail> {
    if p.is_null() {
        return Err(null("output buffer"));
    }
    if len < need {
        return Err(Fail(SymballStatus::DimensionMismatch, format!("output buffer holds {len} values, {need} needed")));
    }
    Ok(std::slice::from_raw_parts_mut(p, need))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn symball_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Copies `rows * cols` row-major values into a new matrix.
///
/// # Safety
/// `data` must point to `rows * cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symball_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut SymballMatrix,
) -> SymballStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        let len = rows.checked_mul(cols).ok_or_else(|| Fail(SymballStatus::InvalidArgument, "size overflow".into()))?;
        let m = Matrix::new(rows, cols, std::slice::from_raw_parts(data, len).to_vec())?;
        write_handle(out, SymballMatrix(m))
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn symball_matrix_free(m: *mut SymballMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symball_matrix_rows(m: *const SymballMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// Column count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symball_matrix_cols(m: *const SymballMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symball_matrix_get(m: *const SymballMatrix, row: usize, col: usize, out: *mut f64) -> SymballStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        if row >= m.rows() || col >= m.cols() {
            return Err(Fail(
                SymballStatus::InvalidArgument,
                format!("index ({row}, {col}) outside a {}x{} matrix", m.rows(), m.cols()),
            ));
        }
        write_out(out, m[(row, col)])
    })
}

/// Copies the entries, row-major, into `buf`, which must hold at least
/// `rows * cols` values.
///
/// # Safety
/// `m` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn symball_matrix_copy(m: *const SymballMatrix, buf: *mut f64, len: usize) -> SymballStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        out_slice(buf, len, m.as_slice().len())?.copy_from_slice(m.as_slice());
        Ok(())
    })
}

/// Deterministic random symplectic matrix of size `2n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn symball_random_symplectic(
    n: usize,
    spread: f64,
    seed: u64,
    out: *mut *mut SymballMatrix,
) -> SymballStatus {
    guard(|| {
        let s = random_symplectic(n, spread, seed)?;
        write_handle(out, SymballMatrix(s))
    })
}

/// Symplectic spectrum of the SPD matrix `m` (size `2n`), ascending, into
/// `buf[0..n]`.
///
/// # Safety
/// `m` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn symball_symplectic_spectrum(
    m: *const SymballMatrix,
    n: usize,
    buf: *mut f64,
    len: usize,
) -> SymballStatus {
    guard(|| {
        let spec = symplectic_spectrum(&deref(m, "matrix")?.0, n)?;
        out_slice(buf, len, n)?.copy_from_slice(&spec.values);
        Ok(())
    })
}

/// Whether `M + iJ` is positive semidefinite.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symball_psd_check(m: *const SymballMatrix, n: usize, out: *mut bool) -> SymballStatus {
    guard(|| {
        let check = psd_check(&deref(m, "matrix")?.0, n, Tolerance::default())?;
        write_out(out, check.psd)
    })
}

/// Williamson normal form `M = SᵀDS`. Writes a new handle for `S` to `s_out`
/// and the symplectic spectrum to `lambda[0..n]`.
///
/// # Safety
/// `m` must be a live handle, `s_out` writable, and `lambda` must point to
/// `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn symball_williamson(
    m: *const SymballMatrix,
    n: usize,
    s_out: *mut *mut SymballMatrix,
    lambda: *mut f64,
    len: usize,
) -> SymballStatus {
    guard(|| {
        let w = williamson(&deref(m, "matrix")?.0, n)?;
        out_slice(lambda, len, n)?.copy_from_slice(&w.lambda);
        write_handle(s_out, SymballMatrix(w.s))
    })
}

/// Projects `S(B(radius))` onto the first `n_a` degrees of freedom.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symball_analyze_split(
    s: *const SymballMatrix,
    n_a: usize,
    radius: f64,
    out: *mut *mut SymballAnalysis,
) -> SymballStatus {
    guard(|| {
        let a = analyze_split(&deref(s, "matrix")?.0, n_a, radius)?;
        write_handle(out, SymballAnalysis(a))
    })
}

/// # Safety
/// `a` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn symball_analysis_free(a: *mut SymballAnalysis) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of degrees of freedom kept, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symball_analysis_n_a(a: *const SymballAnalysis) -> usize {
    a.as_ref().map_or(0, |a| a.0.n_a)
}

/// Symplectic spectrum of the projected ball into `buf[0..n_a]`.
///
/// # Safety
/// `a` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn symball_analysis_lambda(a: *const SymballAnalysis, buf: *mut f64, len: usize) -> SymballStatus {
    guard(|| {
        let a = &deref(a, "analysis")?.0;
        out_slice(buf, len, a.n_a)?.copy_from_slice(&a.lambda_a);
        Ok(())
    })
}

/// Writes the exact and borderline flags and the relative coupling.
///
/// # Safety
/// `a` must be a live handle; `exact` and `borderline` writable.
#[no_mangle]
pub unsafe extern "C" fn symball_analysis_exactness(
    a: *const SymballAnalysis,
    exact: *mut bool,
    borderline: *mut bool,
    coupling: *mut f64,
) -> SymballStatus {
    guard(|| {
        let a = &deref(a, "analysis")?.0;
        write_out(exact, a.exact)?;
        write_out(borderline, a.borderline)?;
        write_out(coupling, a.exactness.coupling.value)
    })
}

/// Volumes of the projected ellipsoid, of the ball of the same radius in
/// the kept coordinates, and of the inscribed symplectic ball.
///
/// # Safety
/// `a` must be a live handle; the three outputs writable.
#[no_mangle]
pub unsafe extern "C" fn symball_analysis_volumes(
    a: *const SymballAnalysis,
    projected: *mut f64,
    bound: *mut f64,
    inscribed: *mut f64,
) -> SymballStatus {
    guard(|| {
        let a = &deref(a, "analysis")?.0;
        write_out(projected, a.vol_projected)?;
        write_out(bound, a.vol_bound)?;
        write_out(inscribed, a.vol_inscribed)
    })
}

/// New handle for the symplectic `S_A` whose ball is inscribed in the
/// projection.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn symball_analysis_s_a(a: *const SymballAnalysis, out: *mut *mut SymballMatrix) -> SymballStatus {
    guard(|| {
        let a = &deref(a, "analysis")?.0;
        write_handle(out, SymballMatrix(a.s_a.clone()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn errors_map_to_status() {
        assert_eq!(SymballStatus::from(&Error::PivotNotPD), SymballStatus::NotPositiveDefinite);
        assert_eq!(SymballStatus::from(&Error::GramSchmidtBreakdown), SymballStatus::NumericalFailure);
        assert_eq!(SymballStatus::from(&Error::NotSymplectic { residual: 1.0 }), SymballStatus::NotSymplectic);
    }

    #[test]
    fn panics_are_caught() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, SymballStatus::Internal);
        let msg = unsafe { CStr::from_ptr(symball_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }
}
