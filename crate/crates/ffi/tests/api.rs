use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hvnogo_ffi::*;

const TWO_SETTINGS: &str = r#"{"e_p": "1/2", "e_w": "1/4", "settings": [{"label": "alpha1", "x": "1/3"}, {"label": "alpha2", "x": "2/3"}]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Copies and frees a library-owned string.
unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = CStr::from_ptr(s).to_str().unwrap().to_string();
    hv_string_free(s);
    owned
}

unsafe fn last_error() -> String {
    take(hv_last_error_message())
}

#[test]
fn triple_check_from_json() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(hv_family_from_json(c(TWO_SETTINGS).as_ptr(), &mut family), HvStatus::Ok);
        assert_eq!(hv_family_len(family), 2);

        let mut report = ptr::null_mut();
        assert_eq!(hv_check_triple(family, &mut report), HvStatus::Ok);
        assert_eq!(hv_report_is_feasible(report), 0);

        let mut json = ptr::null_mut();
        assert_eq!(hv_report_to_json(report, &mut json), HvStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(value["feasible"], false);
        assert_eq!(value["certificate"].as_array().unwrap().len(), 10);

        hv_report_free(report);
        hv_family_free(family);
    }
}

#[test]
fn builder_matches_json() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(hv_family_new(c("1/2").as_ptr(), c("1/4").as_ptr(), &mut family), HvStatus::Ok);
        assert_eq!(hv_family_len(family), 0);

        // An empty family cannot be checked.
        let mut report = ptr::null_mut();
        assert_eq!(hv_check_triple(family, &mut report), HvStatus::MalformedInput);
        assert!(report.is_null());

        for x in ["1/3", "1/3"] {
            let label = format!("s{}", hv_family_len(family));
            assert_eq!(hv_family_add_setting(family, c(&label).as_ptr(), c(x).as_ptr()), HvStatus::Ok);
        }
        assert_eq!(hv_check_triple(family, &mut report), HvStatus::Ok);
        assert_eq!(hv_report_is_feasible(report), 1);
        hv_report_free(report);
        hv_family_free(family);
    }
}

#[test]
fn rejected_inputs_leave_state_unchanged() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(hv_family_new(c("1/2").as_ptr(), c("1/4").as_ptr(), &mut family), HvStatus::Ok);
        assert_eq!(hv_family_add_setting(family, c("a").as_ptr(), c("1/3").as_ptr()), HvStatus::Ok);

        assert_eq!(hv_family_add_setting(family, c("a").as_ptr(), c("1/2").as_ptr()), HvStatus::MalformedInput);
        assert!(last_error().contains("duplicate"));
        assert_eq!(hv_family_add_setting(family, c("b").as_ptr(), c("3/2").as_ptr()), HvStatus::MalformedInput);
        assert_eq!(hv_family_add_setting(family, c("b").as_ptr(), c("half").as_ptr()), HvStatus::InvalidArgument);
        assert!(last_error().starts_with("x:"));
        assert_eq!(hv_family_len(family), 1);
        hv_family_free(family);

        let mut other = ptr::null_mut();
        assert_eq!(hv_family_new(c("2").as_ptr(), c("1/4").as_ptr(), &mut other), HvStatus::MalformedInput);
        assert!(other.is_null());
        assert!(last_error().contains("e_p"));
    }
}

#[test]
fn malformed_json_names_the_field() {
    unsafe {
        let bad = c(r#"{"e_p": "1/2", "e_w": 7, "settings": []}"#);
        let mut family = ptr::null_mut();
        assert_eq!(hv_family_from_json(bad.as_ptr(), &mut family), HvStatus::MalformedInput);
        assert!(family.is_null());
        assert!(last_error().contains("e_w"));
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(hv_family_from_json(ptr::null(), &mut family), HvStatus::NullPointer);
        assert_eq!(hv_family_from_json(c("{}").as_ptr(), ptr::null_mut()), HvStatus::NullPointer);
        let mut report = ptr::null_mut();
        assert_eq!(hv_check_triple(ptr::null(), &mut report), HvStatus::NullPointer);
        assert_eq!(hv_report_is_feasible(ptr::null()), -1);
        assert_eq!(hv_family_len(ptr::null()), 0);
        assert_eq!(hv_quantum_joint(0.0, 0.0, ptr::null_mut()), HvStatus::NullPointer);
        hv_family_free(ptr::null_mut());
        hv_report_free(ptr::null_mut());
        hv_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8_is_reported() {
    unsafe {
        let bytes = [0xffu8, 0xfe, 0];
        let mut family = ptr::null_mut();
        let status = hv_family_from_json(bytes.as_ptr().cast(), &mut family);
        assert_eq!(status, HvStatus::InvalidUtf8);
    }
}

#[test]
fn witnesses_validate() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(hv_family_from_json(c(TWO_SETTINGS).as_ptr(), &mut family), HvStatus::Ok);
        for (mode, name) in [
            (HvDropMode::Independence, "DropIndependence"),
            (HvDropMode::Objectivity, "DropObjectivity"),
            (HvDropMode::Determinism, "DropDeterminism"),
        ] {
            let mut json = ptr::null_mut();
            assert_eq!(hv_witness_json(family, mode, 0, &mut json), HvStatus::Ok);
            let value: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
            assert_eq!(value["model"]["mode"], name);
            for check in value["validation"]["checks"].as_array().unwrap() {
                if check["retained"] == true {
                    assert_eq!(check["passed"], true);
                }
            }
        }
        // Two settings need 16 atoms.
        let mut json = ptr::null_mut();
        assert_eq!(hv_witness_json(family, HvDropMode::Objectivity, 15, &mut json), HvStatus::BudgetExceeded);
        assert!(json.is_null());
        hv_family_free(family);
    }
}

#[test]
fn quantum_values() {
    unsafe {
        let mut joint = [0.0; 4];
        assert_eq!(hv_quantum_joint(0.0, std::f64::consts::FRAC_PI_2, joint.as_mut_ptr()), HvStatus::Ok);
        for (a, b) in joint.iter().zip([0.5, 0.0, 0.5, 0.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let mut params = [0.0; 3];
        let (alpha, phi) = (std::f64::consts::FRAC_PI_3, std::f64::consts::FRAC_PI_4);
        assert_eq!(hv_quantum_params(alpha, phi, params.as_mut_ptr()), HvStatus::Ok);
        let expected = [0.25, 0.5, (phi / 2.0).cos().powi(2)];
        for (a, b) in params.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(hv_quantum_joint(f64::NAN, 0.0, joint.as_mut_ptr()), HvStatus::InvalidArgument);
    }
}

#[test]
fn sampling_matches_library() {
    unsafe {
        let joint = [0.1, 0.2, 0.3, 0.4];
        let mut counts = [0u64; 4];
        assert_eq!(hv_sample_events(joint.as_ptr(), 10_000, 42, counts.as_mut_ptr()), HvStatus::Ok);
        let dist = hvnogo::JointDist::new(joint).unwrap();
        assert_eq!(counts, hvnogo::montecarlo::sample_events(&dist, 10_000, 42).as_array());

        let bad = [0.5, 0.5, 0.5, 0.5];
        assert_eq!(hv_sample_events(bad.as_ptr(), 10, 1, counts.as_mut_ptr()), HvStatus::InvalidArgument);
    }
}

#[test]
fn errors_are_thread_local() {
    unsafe {
        let mut family = ptr::null_mut();
        assert_eq!(hv_family_from_json(ptr::null(), &mut family), HvStatus::NullPointer);
    }
    let other = std::thread::spawn(|| hv_last_error_message().is_null()).join().unwrap();
    assert!(other);
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "hvnogo.h"

int main(void) {
    HvFamily *family = NULL;
    if (hv_family_new("1/2", "1/4", &family) != HV_STATUS_OK) return 1;
    if (hv_family_add_setting(family, "alpha1", "1/3") != HV_STATUS_OK) return 2;
    if (hv_family_add_setting(family, "alpha2", "2/3") != HV_STATUS_OK) return 3;
    HvReport *report = NULL;
    if (hv_check_triple(family, &report) != HV_STATUS_OK) return 4;
    if (hv_report_is_feasible(report) != 0) return 5;
    char *json = NULL;
    if (hv_report_to_json(report, &json) != HV_STATUS_OK) return 6;
    if (strstr(json, "\"certificate\"") == NULL) return 7;
    hv_string_free(json);
    hv_report_free(report);
    hv_family_free(family);

    if (hv_family_from_json("{", &family) != HV_STATUS_MALFORMED_INPUT) return 8;
    char *message = hv_last_error_message();
    if (message == NULL) return 9;
    hv_string_free(message);

    double joint[4];
    if (hv_quantum_joint(0.0, 1.5707963267948966, joint) != HV_STATUS_OK) return 10;
    uint64_t counts[4];
    if (hv_sample_events(joint, 1000, 7, counts) != HV_STATUS_OK) return 11;
    if (counts[0] + counts[1] + counts[2] + counts[3] != 1000) return 12;
    printf("ok\n");
    return 0;
}
"#;

/// Compiles a C program against the generated header and the static library.
#[test]
fn c_program_links_against_staticlib() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let staticlib = profile_dir.join("libhvnogo_ffi.a");
    assert!(staticlib.exists(), "missing {}", staticlib.display());
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler on PATH; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&source, C_SMOKE).unwrap();
    let compiled = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&source)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(compiled.status.success(), "{}", String::from_utf8_lossy(&compiled.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
