use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use triwell_ffi::*;

fn params(n: usize) -> TwModelParams {
    TwModelParams { u: 0.7, j: 1.0, epsilon: 1.5, n }
}

fn last_error() -> String {
    let p = tw_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn eigensystem_round_trip() {
    let p = params(6);
    let mut es = ptr::null_mut();
    unsafe {
        assert_eq!(tw_eigensystem_new(&p, &mut es), TwStatus::Ok);
        let d = tw_eigensystem_dim(es);
        assert_eq!(d, tw_dimension(6));
        let mut e = vec![0.0; d];
        assert_eq!(tw_eigensystem_energies(es, e.as_mut_ptr(), d), TwStatus::Ok);
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
        let mut fock = vec![0.0; d];
        let mut husimi = vec![0.0; d];
        assert_eq!(tw_fock_projection(es, 3, fock.as_mut_ptr(), d), TwStatus::Ok);
        assert_eq!(tw_husimi_projection(es, 3, husimi.as_mut_ptr(), d), TwStatus::Ok);
        assert!((fock.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(husimi.iter().all(|v| *v >= 0.0));

        assert_eq!(tw_eigensystem_energies(es, e.as_mut_ptr(), d - 1), TwStatus::BufferSize);
        assert!(last_error().contains("need"));
        assert_eq!(tw_fock_projection(es, d, fock.as_mut_ptr(), d), TwStatus::InvalidInput);
        tw_eigensystem_free(es);
    }
}

#[test]
fn cached_build_matches_direct() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().to_str().unwrap()).unwrap();
    let p = params(5);
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(tw_eigensystem_load_or_build(&p, path.as_ptr(), &mut a), TwStatus::Ok);
        assert_eq!(tw_eigensystem_load_or_build(&p, path.as_ptr(), &mut b), TwStatus::Ok);
        let d = tw_eigensystem_dim(a);
        let (mut x, mut y) = (vec![0.0; d], vec![0.0; d]);
        tw_eigensystem_energies(a, x.as_mut_ptr(), d);
        tw_eigensystem_energies(b, y.as_mut_ptr(), d);
        assert_eq!(x, y);
        tw_eigensystem_free(a);
        tw_eigensystem_free(b);
    }
}

#[test]
fn invalid_arguments_report_errors() {
    unsafe {
        let bad = TwModelParams { n: 0, ..params(1) };
        let mut es = ptr::null_mut();
        assert_eq!(tw_eigensystem_new(&bad, &mut es), TwStatus::InvalidInput);
        assert!(es.is_null());
        assert!(last_error().contains("N"));
        assert_eq!(tw_eigensystem_new(ptr::null(), &mut es), TwStatus::NullPointer);
        assert_eq!(tw_eigensystem_dim(ptr::null()), 0);
        tw_eigensystem_free(ptr::null_mut());

        let mut idx = 0;
        assert_eq!(tw_fock_index(2, 2, 0, &mut idx), TwStatus::Ok);
        assert_eq!(idx, 0);
        assert_eq!(tw_fock_index(2, 2, 1, &mut idx), TwStatus::InvalidInput);

        let (mut n1, mut n3) = (0.0, 0.0);
        assert_eq!(tw_rho2_zero(&params(1), 5.0, &mut n1, &mut n3), TwStatus::Domain);
    }
}

#[test]
fn trajectory_from_rho2_zero_point() {
    let p = params(100);
    unsafe {
        let (mut n1, mut n3) = (0.0, 0.0);
        assert_eq!(tw_rho2_zero(&p, 0.0752, &mut n1, &mut n3), TwStatus::Ok);
        assert!((n1 - 0.7082).abs() < 2e-4 && (n3 - 0.2917).abs() < 2e-4);
        let x0 = [n1, n3, 0.0, 0.0];
        let mut t = ptr::null_mut();
        assert_eq!(tw_trajectory_new(&p, x0.as_ptr(), 10.0, 0.5, &mut t), TwStatus::Ok);
        let len = tw_trajectory_len(t);
        assert_eq!(len, 21);
        let mut rows = vec![0.0; 4 * len];
        assert_eq!(tw_trajectory_populations(t, rows.as_mut_ptr(), rows.len()), TwStatus::Ok);
        assert_eq!(rows[4 * 20], 10.0);
        for r in rows.chunks(4) {
            assert!((r[1] + r[2] + r[3] - 1.0).abs() < 1e-10);
        }
        let (mut de, mut dn) = (1.0, 1.0);
        assert_eq!(tw_trajectory_drift(t, &mut de, &mut dn), TwStatus::Ok);
        assert!(de < 1e-10 && dn < 1e-10);
        tw_trajectory_free(t);

        let off = [0.9, 0.9, 0.0, 0.0];
        assert_eq!(tw_trajectory_new(&p, off.as_ptr(), 1.0, 0.1, &mut t), TwStatus::Domain);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(tw_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "triwell.h"

int main(void) {
    TwModelParams p = { 0.7, 1.0, 1.5, 4 };
    TwEigenSystem *es = NULL;
    if (tw_eigensystem_new(&p, &es) != TW_STATUS_OK) return 10;
    size_t d = tw_eigensystem_dim(es);
    double e[15];
    if (d != 15 || tw_eigensystem_energies(es, e, d) != TW_STATUS_OK) return 11;
    if (tw_eigensystem_energies(es, e, 3) != TW_STATUS_BUFFER_SIZE) return 12;
    if (tw_last_error_message() == NULL) return 13;
    tw_eigensystem_free(es);
    p.n = 0;
    if (tw_eigensystem_new(&p, &es) != TW_STATUS_INVALID_INPUT) return 14;
    printf("%s %.6f\n", tw_version(), e[0]);
    return 0;
}
"#;

/// Compiles a C program against the generated header and the static
/// library and runs it.
#[test]
fn header_compiles_and_links_from_c() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // tests run from target/<profile>/deps
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libtriwell_ffi.a");
    if !lib.exists() {
        panic!("static library not found at {}", lib.display());
    }
    let work = tempfile::tempdir().unwrap();
    let src = work.path().join("main.c");
    let exe = work.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler runs");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(env!("CARGO_PKG_VERSION")), "{text}");
}
