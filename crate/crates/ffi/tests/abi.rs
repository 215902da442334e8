use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use pillai_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(pillai_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn search_through_handles() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(pillai_search_new(189, 300, 2, &mut h), PillaiStatus::Ok);
        assert_eq!(pillai_search_len(h), 35);
        let mut c = 0i64;
        assert_eq!(pillai_search_value(h, 0, &mut c), PillaiStatus::Ok);
        assert_eq!(c, -226);
        let mut count = 0usize;
        assert_eq!(pillai_search_pair_count(h, 0, &mut count), PillaiStatus::Ok);
        let (mut m, mut n) = (0u64, 0u64);
        assert_eq!(pillai_search_pair(h, 0, count - 1, &mut m, &mut n), PillaiStatus::Ok);
        assert_eq!((count, m, n), (2, 19, 14));
        assert_eq!(pillai_search_pair(h, 0, count, &mut m, &mut n), PillaiStatus::OutOfRange);
        assert!(last_error().contains("pair"));
        assert_eq!(pillai_search_value(h, 35, &mut c), PillaiStatus::OutOfRange);
        pillai_search_free(h);
    }
}

#[test]
fn string_buffers_report_their_size() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(pillai_search_new(189, 300, 2, &mut h), PillaiStatus::Ok);
        let mut needed = 0usize;
        let mut small = [0 as std::ffi::c_char; 2];
        assert_eq!(
            pillai_search_value_str(h, 0, small.as_mut_ptr(), small.len(), &mut needed),
            PillaiStatus::BufferTooSmall
        );
        assert_eq!(needed, "-226".len() + 1);
        let mut buf = vec![0 as std::ffi::c_char; needed];
        assert_eq!(pillai_search_value_str(h, 0, buf.as_mut_ptr(), buf.len(), &mut needed), PillaiStatus::Ok);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "-226");
        pillai_search_free(h);
    }
}

#[test]
fn null_and_invalid_arguments() {
    unsafe {
        assert_eq!(pillai_search_new(10, 10, 2, ptr::null_mut()), PillaiStatus::NullPointer);
        let mut h = ptr::null_mut();
        assert_eq!(pillai_search_new(10, 10, 0, &mut h), PillaiStatus::InvalidArgument);
        assert!(h.is_null());
        assert_eq!(pillai_search_len(ptr::null()), 0);
        let mut c = 0i64;
        assert_eq!(pillai_search_value(ptr::null(), 0, &mut c), PillaiStatus::NullPointer);
        let mut cf = ptr::null_mut();
        assert_eq!(pillai_cf_new(PillaiTau::DeltaOverAlpha, 10, 32, &mut cf), PillaiStatus::InvalidArgument);
        assert!(last_error().contains("64"));
        pillai_search_free(ptr::null_mut());
        pillai_cf_free(ptr::null_mut());
        pillai_certificate_free(ptr::null_mut());
        assert_eq!(pillai_certificate_passed(ptr::null()), 0);
    }
}

#[test]
fn continued_fraction_prefix() {
    let want = [1u64, 1, 2, 2, 6, 2, 1, 2, 1, 2, 1, 1, 11, 1, 2, 3, 1, 7, 37, 4];
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(pillai_cf_new(PillaiTau::DeltaOverAlpha, want.len(), 0, &mut h), PillaiStatus::Ok);
        assert_eq!(pillai_cf_len(h), want.len());
        let got: Vec<u64> = (0..want.len())
            .map(|i| {
                let mut v = 0;
                assert_eq!(pillai_cf_quotient(h, i, &mut v), PillaiStatus::Ok);
                v
            })
            .collect();
        assert_eq!(got, want);
        pillai_cf_free(h);
    }
}

#[test]
fn fixed_low_precision_is_reported() {
    let mut h = ptr::null_mut();
    unsafe {
        let s = pillai_cf_new(PillaiTau::AlphaOverDelta, 200, 64, &mut h);
        assert_eq!(s, PillaiStatus::PrecisionExhausted);
        assert!(h.is_null());
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(pillai_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// The generated header must parse as C and as C++.
#[test]
fn header_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/pillai.h");
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(cc).args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, header]).output() else {
            eprintln!("{cc} not available, skipped");
            continue;
        };
        assert!(out.status.success(), "{cc}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn certificate_through_handles() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(pillai_certificate_run(0, &mut h), PillaiStatus::Ok, "{}", last_error());
        assert_eq!(pillai_certificate_passed(h), 1);
        let mut bound = 0u64;
        assert_eq!(pillai_certificate_final_bound(h, &mut bound), PillaiStatus::Ok);
        assert!(bound <= 300);

        let mut needed = 0usize;
        assert_eq!(pillai_certificate_digest(h, ptr::null_mut(), 0, &mut needed), PillaiStatus::BufferTooSmall);
        assert_eq!(needed, 65);
        let mut digest = vec![0 as std::ffi::c_char; needed];
        assert_eq!(pillai_certificate_digest(h, digest.as_mut_ptr(), needed, &mut needed), PillaiStatus::Ok);
        let digest = CStr::from_ptr(digest.as_ptr()).to_str().unwrap().to_string();

        assert_eq!(pillai_certificate_json(h, ptr::null_mut(), 0, &mut needed), PillaiStatus::BufferTooSmall);
        let mut json = vec![0 as std::ffi::c_char; needed];
        assert_eq!(pillai_certificate_json(h, json.as_mut_ptr(), needed, &mut needed), PillaiStatus::Ok);
        let text = CStr::from_ptr(json.as_ptr()).to_str().unwrap();
        let back: pillai_core::certificate::PipelineCertificate = serde_json::from_str(text).unwrap();
        assert_eq!(back.digest, digest);
        assert!(back.digest_matches().unwrap());
        pillai_certificate_free(h);
    }
}
