use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use octabill_ffi::*;

fn quad(s: &str) -> *mut ObQuad {
    let t = CString::new(s).unwrap();
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { ob_quad_parse(t.as_ptr(), &mut q) }, ObStatus::Ok);
    q
}

fn text(q: *const ObQuad) -> String {
    unsafe {
        let s = ob_quad_to_string(q);
        let out = CStr::from_ptr(s).to_str().unwrap().to_string();
        ob_string_free(s);
        out
    }
}

#[test]
fn quad_round_trip() {
    let a = quad("1/2+3*r2");
    let b = quad("-1/2");
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(ob_quad_arith(ObOp::Add, a, b, &mut c), ObStatus::Ok);
        assert_eq!(text(c), "0+3*r2");
        let mut f = 0.0;
        assert_eq!(ob_quad_to_f64(c, &mut f), ObStatus::Ok);
        assert!((f - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        let mut o = 0;
        assert_eq!(ob_quad_cmp(a, b, &mut o), ObStatus::Ok);
        assert_eq!(o, 1);
        ob_quad_free(a);
        ob_quad_free(b);
        ob_quad_free(c);
    }
}

#[test]
fn errors_are_codes() {
    let zero = quad("0");
    let one = quad("1");
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(ob_quad_arith(ObOp::Div, one, zero, &mut out), ObStatus::DivisionByZero);
        assert!(out.is_null());
        assert!(!CStr::from_ptr(ob_last_error()).to_bytes().is_empty());
        assert_eq!(ob_quad_arith(ObOp::Add, ptr::null(), zero, &mut out), ObStatus::NullPointer);
        assert_eq!(ob_quad_parse(ptr::null(), &mut out), ObStatus::NullPointer);
        assert!(ob_quad_to_string(ptr::null()).is_null());
        ob_quad_free(ptr::null_mut());
        ob_quad_free(zero);
        ob_quad_free(one);
    }
}

#[test]
fn dynamics_handle() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(ob_dynamics_new(&mut d), ObStatus::Ok);
        let (mut x, mut y) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(ob_dynamics_tile_center(d, 2, &mut x, &mut y), ObStatus::Ok);
        let mut code = [0u32; 9];
        assert_eq!(ob_dynamics_orbit_code(d, x, y, 9, code.as_mut_ptr()), ObStatus::Ok);
        assert_eq!(code, [9, 26, 7, 32, 34, 38, 41, 2, 28]);
        let mut per = 0;
        assert_eq!(ob_dynamics_period(d, x, y, 4, &mut per), ObStatus::Ok);
        assert_eq!(per, 9);
        assert_eq!(ob_dynamics_period(d, x, y, 1, &mut per), ObStatus::Ok);
        assert_eq!(per, 0);

        let (mut nx, mut ny, mut r, mut p) = (ptr::null_mut(), ptr::null_mut(), 0u32, 0u8);
        assert_eq!(ob_dynamics_step(d, x, y, &mut nx, &mut ny, &mut r, &mut p), ObStatus::Ok);
        assert_eq!(r, 9);
        // A point far from the region.
        let far = quad("100");
        assert_eq!(ob_dynamics_step(d, far, far, &mut nx, &mut ny, &mut r, &mut p), ObStatus::OutsideDomain);
        for q in [x, y, nx, ny, far] {
            ob_quad_free(q);
        }
        ob_dynamics_free(d);
    }
}

#[test]
fn expansion_buffer() {
    let word = [0u32];
    let mut n = 0;
    unsafe {
        assert_eq!(ob_substitution_expand(word.as_ptr(), 1, 2, ptr::null_mut(), 0, &mut n), ObStatus::BufferTooSmall);
        assert_eq!(n, 9);
        let mut buf = vec![0u32; n];
        assert_eq!(ob_substitution_expand(word.as_ptr(), 1, 2, buf.as_mut_ptr(), n, &mut n), ObStatus::Ok);
        assert_eq!(buf, [9, 26, 7, 32, 34, 38, 41, 2, 28]);
        let bad = [44u32];
        assert_eq!(ob_substitution_expand(bad.as_ptr(), 1, 1, buf.as_mut_ptr(), 9, &mut n), ObStatus::Invalid);
    }
}

#[test]
fn verify_through_abi() {
    let mut pass = false;
    let mut detail = ptr::null_mut();
    unsafe {
        assert_eq!(ob_verify(13, &mut pass, &mut detail), ObStatus::Ok);
        assert!(pass);
        assert!(CStr::from_ptr(detail).to_str().unwrap().contains("4/17"));
        ob_string_free(detail);
        assert_eq!(ob_verify(0, &mut pass, ptr::null_mut()), ObStatus::Invalid);
    }
}

#[test]
fn header_lists_exports() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/octabill.h")).unwrap();
    for f in [
        "ob_last_error",
        "ob_quad_parse",
        "ob_quad_arith",
        "ob_dynamics_new",
        "ob_dynamics_orbit_code",
        "ob_substitution_expand",
        "ob_verify",
        "typedef struct ObQuad ObQuad",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
}

/// Builds the static library and links the C smoke program against it, when a C compiler is present.
#[test]
fn c_program_links() {
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = dir.join("liboctabill_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    // Test builds only produce the rlib.
    let st = Command::new(env!("CARGO")).args(["build", "-q", "-p", "octabill-ffi", "--lib"]).status().unwrap();
    assert!(st.success());
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let bin = std::env::temp_dir().join(format!("octabill_smoke_{}", std::process::id()));
    let st = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&bin).output().unwrap();
    let _ = std::fs::remove_file(&bin);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
