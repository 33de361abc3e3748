use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use symball_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(symball_last_error()) }.to_str().unwrap().to_owned()
}

fn matrix(rows: usize, cols: usize, data: &[f64]) -> *mut SymballMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { symball_matrix_new(rows, cols, data.as_ptr(), &mut m) }, SymballStatus::Ok);
    m
}

const SHEAR: [f64; 16] = [1., 0., 0., 0., 0., 1., 0., 0., 0., 1., 1., 0., 1., 0., 0., 1.];

#[test]
fn matrix_round_trip() {
    let data = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let m = matrix(2, 3, &data);
    unsafe {
        assert_eq!((symball_matrix_rows(m), symball_matrix_cols(m)), (2, 3));
        let mut x = 0.0;
        assert_eq!(symball_matrix_get(m, 1, 2, &mut x), SymballStatus::Ok);
        assert_eq!(x, 6.0);
        assert_eq!(symball_matrix_get(m, 2, 0, &mut x), SymballStatus::InvalidArgument);
        let mut buf = [0.0; 6];
        assert_eq!(symball_matrix_copy(m, buf.as_mut_ptr(), 6), SymballStatus::Ok);
        assert_eq!(buf, data);
        assert_eq!(symball_matrix_copy(m, buf.as_mut_ptr(), 5), SymballStatus::DimensionMismatch);
        symball_matrix_free(m);
        symball_matrix_free(ptr::null_mut());
        assert_eq!(symball_matrix_rows(ptr::null()), 0);
    }
}

#[test]
fn bad_inputs_set_status_and_message() {
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(symball_matrix_new(2, 2, ptr::null(), &mut m), SymballStatus::NullPointer);
        assert!(last_error().contains("null"));
        let nan = [f64::NAN, 0.0, 0.0, 1.0];
        assert_eq!(symball_matrix_new(2, 2, nan.as_ptr(), &mut m), SymballStatus::NonFinite);
        assert!(m.is_null());

        let indefinite = matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let mut l = [0.0];
        assert_eq!(symball_symplectic_spectrum(indefinite, 1, l.as_mut_ptr(), 1), SymballStatus::NotPositiveDefinite);
        symball_matrix_free(indefinite);

        let not_sp = matrix(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let mut a = ptr::null_mut();
        assert_eq!(symball_analyze_split(not_sp, 1, 1.0, &mut a), SymballStatus::NotSymplectic);
        assert!(last_error().starts_with("matrix is not symplectic"));
        assert!(a.is_null());
        symball_matrix_free(not_sp);
    }
}

#[test]
fn spectrum_and_williamson() {
    let m = matrix(2, 2, &[4.0, 0.0, 0.0, 1.0]);
    unsafe {
        let mut l = [0.0];
        assert_eq!(symball_symplectic_spectrum(m, 1, l.as_mut_ptr(), 1), SymballStatus::Ok);
        assert!((l[0] - 2.0).abs() < 1e-14);
        let mut psd = false;
        assert_eq!(symball_psd_check(m, 1, &mut psd), SymballStatus::Ok);
        assert!(psd);

        let mut s = ptr::null_mut();
        let mut lambda = [0.0];
        assert_eq!(symball_williamson(m, 1, &mut s, lambda.as_mut_ptr(), 1), SymballStatus::Ok);
        let mut buf = [0.0; 4];
        assert_eq!(symball_matrix_copy(s, buf.as_mut_ptr(), 4), SymballStatus::Ok);
        // M = SᵀDS with D = 2·I and S = diag(√2, 1/√2)
        assert!((buf[0] - 2f64.sqrt()).abs() < 1e-14);
        assert!((buf[3] - 0.5f64.sqrt()).abs() < 1e-14);
        symball_matrix_free(s);
        symball_matrix_free(m);
    }
}

#[test]
fn shear_projection() {
    let s = matrix(4, 4, &SHEAR);
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(symball_analyze_split(s, 1, 1.0, &mut a), SymballStatus::Ok);
        assert_eq!(symball_analysis_n_a(a), 1);
        let mut l = [0.0];
        assert_eq!(symball_analysis_lambda(a, l.as_mut_ptr(), 1), SymballStatus::Ok);
        assert!((l[0] - 0.5f64.sqrt()).abs() < 1e-12);
        let (mut projected, mut bound, mut inscribed) = (0.0, 0.0, 0.0);
        assert_eq!(symball_analysis_volumes(a, &mut projected, &mut bound, &mut inscribed), SymballStatus::Ok);
        assert!((projected - std::f64::consts::PI * 2f64.sqrt()).abs() < 1e-12);
        assert!((bound - std::f64::consts::PI).abs() < 1e-14);
        assert!((inscribed - bound).abs() < 1e-12);
        let (mut exact, mut borderline, mut coupling) = (true, true, 0.0);
        assert_eq!(symball_analysis_exactness(a, &mut exact, &mut borderline, &mut coupling), SymballStatus::Ok);
        assert!(!exact && !borderline && coupling > 0.1);

        let mut sa = ptr::null_mut();
        assert_eq!(symball_analysis_s_a(a, &mut sa), SymballStatus::Ok);
        assert_eq!(symball_matrix_rows(sa), 2);
        let mut buf = [0.0; 4];
        symball_matrix_copy(sa, buf.as_mut_ptr(), 4);
        // S_A is symplectic in one degree of freedom: det = 1
        assert!((buf[0] * buf[3] - buf[1] * buf[2] - 1.0).abs() < 1e-12);
        symball_matrix_free(sa);
        symball_analysis_free(a);
        symball_matrix_free(s);
    }
}

#[test]
fn random_symplectic_matches_core() {
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(symball_random_symplectic(3, 0.8, 11, &mut m), SymballStatus::Ok);
        let mut buf = [0.0; 36];
        assert_eq!(symball_matrix_copy(m, buf.as_mut_ptr(), 36), SymballStatus::Ok);
        let core = symball::symplectic::random_symplectic(3, 0.8, 11).unwrap();
        assert_eq!(&buf[..], core.as_slice());
        symball_matrix_free(m);
        assert_eq!(symball_random_symplectic(0, 1.0, 0, &mut m), SymballStatus::InvalidArgument);
    }
}

#[test]
fn header_is_current() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/symball.h")).unwrap();
    for name in [
        "symball_last_error",
        "symball_matrix_new",
        "symball_matrix_free",
        "symball_symplectic_spectrum",
        "symball_williamson",
        "symball_analyze_split",
        "symball_analysis_s_a",
        "typedef struct SymballMatrix SymballMatrix",
        "SYMBALL_STATUS_NOT_SYMPLECTIC = 7",
    ] {
        assert!(header.contains(name), "{name} missing from the header");
    }
}

/// Compiles a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<this test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libsymball_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = tempfile::TempDir::new().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("run cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
