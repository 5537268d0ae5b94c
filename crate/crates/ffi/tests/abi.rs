use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use cpd_surf_ffi::*;

fn last_error() -> String {
    let p = cpd_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn gallery_surface(name: &str) -> *mut CpdSurface {
    let name = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { cpd_surface_gallery(name.as_ptr(), &mut s) },
        CpdStatus::Ok
    );
    assert!(!s.is_null());
    s
}

#[test]
fn catenoid_point_and_curvatures() {
    let s = gallery_surface("catenoid");
    let mut p = [0.0; 3];
    unsafe {
        assert_eq!(cpd_surface_eval(s, 0.0, 0.0, p.as_mut_ptr()), CpdStatus::Ok);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15 && p[2].abs() < 1e-15);

        let mut c = CpdCurvatures::default();
        assert_eq!(cpd_surface_curvatures(s, 0.5, 1.0, &mut c), CpdStatus::Ok);
        let k = -1.0 / 0.5f64.cosh().powi(4);
        assert!((c.gaussian - k).abs() < 1e-12, "{c:?}");
        assert!(c.mean.abs() < 1e-12);
        assert!((c.theta - 2.0 * (-0.5f64).exp().atan()).abs() < 1e-12);
        cpd_surface_free(s);
    }
}

#[test]
fn spec_verification_round_trip() {
    let json = CString::new(
        r#"{"kind": "case1", "theta": "atan(1/x)", "psi": "0",
            "domain": {"x": [0.5, 3], "y": [0, 6.283185307179586]}}"#,
    )
    .unwrap();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(cpd_surface_from_json(json.as_ptr(), &mut s), CpdStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(cpd_surface_verify(s, 15, 15, &mut r), CpdStatus::Ok);
        assert_eq!(cpd_report_passed(r), 1);

        let mut text = ptr::null_mut();
        assert_eq!(cpd_report_to_json(r, &mut text), CpdStatus::Ok);
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(text).to_str().unwrap()).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["total_points"], 225);
        cpd_string_free(text);
        cpd_report_free(r);
        cpd_surface_free(s);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut s = ptr::null_mut();
        let bad = CString::new(
            r#"{"kind": "case1", "theta": "sin(x", "domain": {"x": [0.5, 3], "y": [0, 1]}}"#,
        )
        .unwrap();
        assert_eq!(
            cpd_surface_from_json(bad.as_ptr(), &mut s),
            CpdStatus::Parse
        );
        assert!(last_error().contains("offset 5"), "{}", last_error());
        assert!(s.is_null());

        let junk = CString::new("{not json").unwrap();
        assert_eq!(
            cpd_surface_from_json(junk.as_ptr(), &mut s),
            CpdStatus::InvalidInput
        );

        let name = CString::new("torus").unwrap();
        assert_eq!(
            cpd_surface_gallery(name.as_ptr(), &mut s),
            CpdStatus::InvalidInput
        );
        assert!(last_error().contains("catenoid"));

        assert_eq!(
            cpd_surface_from_json(ptr::null(), &mut s),
            CpdStatus::NullPointer
        );
        assert_eq!(
            cpd_surface_eval(ptr::null(), 0.0, 0.0, ptr::null_mut()),
            CpdStatus::NullPointer
        );
        assert_eq!(cpd_report_passed(ptr::null()), -1);

        let invalid = [0xffu8, 0];
        assert_eq!(
            cpd_surface_gallery(invalid.as_ptr().cast(), &mut s),
            CpdStatus::InvalidUtf8
        );

        let sc = gallery_surface("scherk");
        let mut p = [0.0; 3];
        // Outside the strip |x| < π/2 the logarithm's argument is negative.
        assert_eq!(
            cpd_surface_eval(sc, 2.0, 0.1, p.as_mut_ptr()),
            CpdStatus::Domain
        );

        let mut r = ptr::null_mut();
        assert_eq!(
            cpd_surface_verify(sc, 1, 5, &mut r),
            CpdStatus::InvalidInput
        );
        assert!(r.is_null());
        cpd_surface_free(sc);

        cpd_surface_free(ptr::null_mut());
        cpd_report_free(ptr::null_mut());
        cpd_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api_and_compiles() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::fs::read_to_string(format!("{dir}/include/cpd_surf.h")).unwrap();
    for name in [
        "cpd_surface_from_json",
        "cpd_surface_gallery",
        "cpd_surface_free",
        "cpd_surface_eval",
        "cpd_surface_curvatures",
        "cpd_surface_verify",
        "cpd_report_passed",
        "cpd_report_to_json",
        "cpd_report_free",
        "cpd_string_free",
        "cpd_last_error_message",
        "typedef struct CpdSurface CpdSurface;",
        "CPD_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }

    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"cpd_surf.h\"\n\
         int probe(void) {\n\
           CpdSurface *s = 0;\n\
           CpdCurvatures c;\n\
           if (cpd_surface_gallery(\"helicoid\", &s) != CPD_STATUS_OK) return 1;\n\
           cpd_surface_curvatures(s, 0.1, 0.2, &c);\n\
           cpd_surface_free(s);\n\
           return c.mean == 0.0 ? 0 : 2;\n\
         }\n",
    )
    .unwrap();
    match Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(format!("{dir}/include"))
        .arg(&src)
        .output()
    {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(e) => eprintln!("skipping C compile check: {e}"),
    }
}
