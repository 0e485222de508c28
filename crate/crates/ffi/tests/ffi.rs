use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use lctkit_ffi::*;

fn parse(text: &str) -> *mut LctIdeal {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lct_ideal_parse(c.as_ptr(), &mut out) }, LctStatus::Ok);
    out
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { lct_string_free(s) };
    owned
}

fn last_error() -> String {
    let p = lct_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn exact_values_through_the_handle() {
    let j = parse("vars 2\n2 0\n0 3\n");
    unsafe {
        assert_eq!(lct_ideal_dim(j), 2);
        let mut primary = false;
        assert_eq!(lct_ideal_is_m_primary(j, &mut primary), LctStatus::Ok);
        assert!(primary);
        let mut colength = 0u64;
        assert_eq!(lct_ideal_colength(j, &mut colength), LctStatus::Ok);
        assert_eq!(colength, 6);
        let mut s = ptr::null_mut();
        assert_eq!(lct_ideal_lct(j, &mut s), LctStatus::Ok);
        assert_eq!(take_string(s), "5/6");
        assert_eq!(lct_ideal_multiplicity(j, &mut s), LctStatus::Ok);
        assert_eq!(take_string(s), "6");
        assert_eq!(lct_ideal_to_string(j, &mut s), LctStatus::Ok);
        assert_eq!(take_string(s), "(x1^2, x2^3)");
        assert_eq!(lct_ideal_check_json(j, &mut s), LctStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v["lhs"], "25/6");
        assert_eq!(v["holds"], true);
        assert_eq!(v["equality"], false);
        lct_ideal_free(j);
    }
}

#[test]
fn product_and_exponent_rows() {
    let rows = [1u32, 0, 0, 1];
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(lct_ideal_from_exponents(2, rows.as_ptr(), 2, &mut m), LctStatus::Ok);
        let j = parse("vars 2\nx1^2\nx2^3\n");
        let mut prod = ptr::null_mut();
        assert_eq!(lct_ideal_product(m, j, &mut prod), LctStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(lct_ideal_lct(prod, &mut s), LctStatus::Ok);
        assert_eq!(take_string(s), "5/8");
        assert_eq!(lct_ideal_multiplicity(prod, &mut s), LctStatus::Ok);
        assert_eq!(take_string(s), "11");
        for h in [m, j, prod] {
            lct_ideal_free(h);
        }
    }
}

#[test]
fn statuses_match_exit_codes() {
    unsafe {
        let bad = CString::new("vars 2\nx1^2 + x2\n").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(lct_ideal_parse(bad.as_ptr(), &mut out), LctStatus::Parse);
        assert!(out.is_null());
        assert!(last_error().contains("line"));

        let line = parse("vars 2\nx1*x2\n");
        let mut s = ptr::null_mut();
        assert_eq!(lct_ideal_lct(line, &mut s), LctStatus::Domain);
        assert!(s.is_null());
        assert_eq!(last_error(), "ideal is not m-primary");
        let mut primary = true;
        assert_eq!(lct_ideal_is_m_primary(line, &mut primary), LctStatus::Ok);
        assert!(!primary);

        let three = parse("vars 3\n1 0 0\n0 1 0\n0 0 1\n");
        let mut prod = ptr::null_mut();
        assert_eq!(lct_ideal_product(line, three, &mut prod), LctStatus::Domain);
        lct_ideal_free(line);
        lct_ideal_free(three);

        assert_eq!(LctStatus::Parse as i32, 1);
        assert_eq!(LctStatus::Domain as i32, 2);
        assert_eq!(LctStatus::Resource as i32, 3);
        assert_eq!(LctStatus::Internal as i32, 4);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(lct_ideal_parse(ptr::null(), &mut out), LctStatus::InvalidArgument);
        let mut s = ptr::null_mut();
        assert_eq!(lct_ideal_lct(ptr::null(), &mut s), LctStatus::InvalidArgument);
        let j = parse("vars 1\n3\n");
        assert_eq!(lct_ideal_lct(j, ptr::null_mut()), LctStatus::InvalidArgument);
        assert_eq!(last_error(), "null output pointer");
        assert_eq!(lct_ideal_dim(ptr::null()), 0);
        lct_ideal_free(ptr::null_mut());
        lct_string_free(ptr::null_mut());
        lct_ideal_free(j);
    }
}

#[test]
fn monte_carlo_bracket() {
    let j = parse("vars 2\n2 0\n0 3\n");
    let (mut lo, mut hi) = (0.0, 0.0);
    unsafe {
        assert_eq!(lct_ideal_estimate_threshold(j, 42, 0, &mut lo, &mut hi), LctStatus::Ok);
        lct_ideal_free(j);
    }
    assert!(lo <= 5.0 / 6.0 && 5.0 / 6.0 <= hi && hi - lo <= 0.07, "[{lo}, {hi}]");
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(lct_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn static_lib() -> PathBuf {
    // target/<profile>/deps/ffi-<hash> -> target/<profile>/liblctkit_ffi.a
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("liblctkit_ffi.a")
}

#[test]
fn header_declares_every_export() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/lctkit.h")).unwrap();
    let source = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let mut exported = 0;
    for line in source.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(header.contains(&format!("{name}(")), "{name} missing from header");
            exported += 1;
        }
    }
    assert!(exported >= 12);
    assert!(header.contains("typedef struct LctIdeal LctIdeal;"));
}

#[test]
fn c_program_links_against_the_header() {
    let lib = static_lib();
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out_dir = std::env::temp_dir().join(format!("lctkit-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("a C compiler is needed for this test");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), format!("ok {}", env!("CARGO_PKG_VERSION")));
}
