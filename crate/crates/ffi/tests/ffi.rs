use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::process::Command;
use std::ptr;

use lf_kernel_ffi::*;

const FOL: &str = "iota : type. o : type. f : iota -> iota. g : iota -> iota -> iota. c : iota. \
    eq : iota -> iota -> o. and : o -> o -> o. forall : (iota -> o) -> o.";

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = lf_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
}

struct Handle(*mut LfSession);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { lf_session_free(self.0) }
    }
}

fn open(sig: &str, fuel: u64) -> Handle {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { lf_session_new(cs(sig).as_ptr(), fuel, &mut s) },
        LfStatus::Ok,
        "{:?}",
        last_error()
    );
    Handle(s)
}

fn take(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { lf_string_free(p) };
    s
}

#[test]
fn session_lifecycle() {
    let h = open(FOL, 0);
    assert_eq!(unsafe { lf_session_len(h.0) }, 8);
    assert_eq!(unsafe { lf_session_len(ptr::null()) }, 0);
    assert!(last_error().is_none());
}

#[test]
fn signature_errors_map_to_exit_codes() {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { lf_session_new(cs("a : type").as_ptr(), 0, &mut s) },
        LfStatus::ParseError
    );
    assert!(s.is_null());
    assert!(last_error().unwrap().contains("parse error"));
    let st = unsafe { lf_session_new(cs("a : type. a : type.").as_ptr(), 0, &mut s) };
    assert_eq!(st, LfStatus::Fail);
    assert!(s.is_null());
}

#[test]
fn synth_and_check() {
    let h = open(FOL, 0);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { lf_synth(h.0, cs("forall").as_ptr(), &mut out) },
        LfStatus::Ok
    );
    assert_eq!(take(out), "(iota -> o) -> o");
    let st = unsafe {
        lf_check_object(
            h.0,
            cs("[x:iota] f x").as_ptr(),
            cs("iota -> iota").as_ptr(),
        )
    };
    assert_eq!(st, LfStatus::Ok);
    let st = unsafe { lf_check_object(h.0, cs("f").as_ptr(), cs("iota").as_ptr()) };
    assert_eq!(st, LfStatus::Fail);
    assert!(last_error().is_some());
    let st = unsafe { lf_synth(h.0, cs("nope").as_ptr(), &mut out) };
    assert_eq!(st, LfStatus::ParseError);
}

#[test]
fn context_is_used_by_later_queries() {
    let h = open(FOL, 0);
    assert_eq!(
        unsafe { lf_session_set_context(h.0, cs("x:iota").as_ptr()) },
        LfStatus::Ok
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { lf_synth(h.0, cs("eq x").as_ptr(), &mut out) },
        LfStatus::Ok
    );
    assert_eq!(take(out), "iota -> o");
    assert_eq!(
        unsafe { lf_session_set_context(h.0, cs("x:nope").as_ptr()) },
        LfStatus::ParseError
    );
}

#[test]
fn equality_and_canonical_forms() {
    let h = open(FOL, 0);
    let eq = |a: &str, m: &str, n: &str| unsafe {
        lf_def_equal(h.0, cs(a).as_ptr(), cs(m).as_ptr(), cs(n).as_ptr())
    };
    assert_eq!(eq("iota -> iota", "[x:iota] f x", "f"), LfStatus::Ok);
    assert_eq!(eq("iota", "([x:iota] x) c", "c"), LfStatus::Ok);
    assert_eq!(eq("iota", "f c", "c"), LfStatus::Fail);
    assert!(last_error().unwrap().starts_with("not equal"));
    let mut out = ptr::null_mut();
    let st = unsafe {
        lf_canonicalize(
            h.0,
            cs("o").as_ptr(),
            cs("forall ([x:iota] eq x x)").as_ptr(),
            &mut out,
        )
    };
    assert_eq!(st, LfStatus::Ok);
    assert_eq!(take(out), "forall ([x] eq x x)");
}

#[test]
fn fuel_exhaustion() {
    let h = open(FOL, 1);
    let st = unsafe {
        lf_def_equal(
            h.0,
            cs("iota").as_ptr(),
            cs("([x:iota] ([y:iota] y) x) c").as_ptr(),
            cs("c").as_ptr(),
        )
    };
    assert_eq!(st, LfStatus::OutOfFuel);
}

#[test]
fn bad_arguments() {
    let h = open(FOL, 0);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { lf_synth(ptr::null(), cs("c").as_ptr(), &mut out) },
        LfStatus::NullArgument
    );
    assert_eq!(
        unsafe { lf_synth(h.0, ptr::null(), &mut out) },
        LfStatus::NullArgument
    );
    assert_eq!(
        unsafe { lf_synth(h.0, cs("c").as_ptr(), ptr::null_mut()) },
        LfStatus::NullArgument
    );
    assert_eq!(
        unsafe { lf_session_new(cs("a : type.").as_ptr(), 0, ptr::null_mut()) },
        LfStatus::NullArgument
    );
    let bad = b"\xff\0";
    let st = unsafe { lf_synth(h.0, bad.as_ptr() as *const c_char, &mut out) };
    assert_eq!(st, LfStatus::InvalidUtf8);
    unsafe {
        lf_string_free(ptr::null_mut());
        lf_session_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_per_thread() {
    let h = open(FOL, 0);
    assert_eq!(
        unsafe { lf_check_object(h.0, cs("f").as_ptr(), cs("iota").as_ptr()) },
        LfStatus::Fail
    );
    std::thread::spawn(|| assert!(last_error().is_none()))
        .join()
        .unwrap();
    assert!(last_error().is_some());
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/lf_kernel.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "lf_session_new",
        "lf_def_equal",
        "lf_canonicalize",
        "lf_last_error_message",
        "LF_STATUS_OUT_OF_FUEL = 3",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let out = Command::new("cc")
        .args([
            "-std=c99",
            "-Wall",
            "-Werror",
            "-fsyntax-only",
            "-x",
            "c",
            header,
        ])
        .output();
    let out = out.expect("a C compiler is needed to check the header");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = env!("CARGO_MANIFEST_DIR");
    let deps = std::env::current_exe().unwrap();
    let profile_dir = deps.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("liblf_kernel_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let exe = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("lf_smoke");
    let status = Command::new("cc")
        .arg(format!("{manifest}/tests/c/smoke.c"))
        .arg(format!("-I{manifest}/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "forall ([y] eq y y)\n"
    );
}
