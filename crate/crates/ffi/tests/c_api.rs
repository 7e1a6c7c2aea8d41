use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use projsep_ffi::*;

fn square() -> *mut ProjsepDataset {
    let points = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.5, 0.4];
    let labels: [i8; 10] = [-1, 1, -1, 1, 1, -1, -1, 1, 1, -1];
    let mut ds = ptr::null_mut();
    let s = unsafe { projsep_dataset_new(points.as_ptr(), 5, 2, labels.as_ptr(), 2, &mut ds) };
    assert_eq!(s, ProjsepStatus::Ok);
    ds
}

fn last_error() -> String {
    let p = projsep_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn handle_lifecycle() {
    let ds = square();
    unsafe {
        assert_eq!(projsep_dataset_len(ds), 5);
        assert_eq!(projsep_dataset_dim(ds), 2);
        assert_eq!(projsep_dataset_properties(ds), 2);
        projsep_dataset_free(ds);
        projsep_dataset_free(ptr::null_mut());
        assert_eq!(projsep_dataset_len(ptr::null()), 0);
    }
}

#[test]
fn separability_and_margin() {
    let ds = square();
    let (mut sep, mut margin) = (false, 0.0);
    unsafe {
        assert_eq!(projsep_separable(ds, 1, true, &mut sep, &mut margin), ProjsepStatus::Ok);
        assert!(sep && margin > 0.0);
        let mut m = 0.0;
        assert_eq!(projsep_max_margin(ds, 1, &mut m), ProjsepStatus::Ok);
        assert!((m - 0.25).abs() < 1e-6, "{m}");
        projsep_dataset_free(ds);
    }
}

#[test]
fn projection_breaks_the_hidden_property() {
    let ds = square();
    let mut w = [0.0; 2];
    unsafe {
        assert_eq!(projsep_eliminating_projection(ds, 1, false, w.as_mut_ptr()), ProjsepStatus::Ok);
        assert!(((w[0] * w[0] + w[1] * w[1]).sqrt() - 1.0).abs() < 1e-12);
        let mut value = 0.0;
        assert_eq!(projsep_svm_overlap(ds, 1, w.as_ptr(), 0.1, &mut value), ProjsepStatus::Ok);
        assert!(value > 0.0);
        projsep_dataset_free(ds);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    let labels: [i8; 2] = [1, 0];
    let points = [0.0, 1.0];
    let mut ds = ptr::null_mut();
    let s = unsafe { projsep_dataset_new(points.as_ptr(), 2, 1, labels.as_ptr(), 1, &mut ds) };
    assert_eq!(s, ProjsepStatus::InvalidArgument);
    assert!(last_error().contains("column 1"));
    assert!(ds.is_null());

    let s = unsafe { projsep_dataset_new(ptr::null(), 2, 1, labels.as_ptr(), 1, &mut ds) };
    assert_eq!(s, ProjsepStatus::NullPointer);

    let sq = square();
    let (mut sep, mut margin) = (false, 0.0);
    let s = unsafe { projsep_separable(sq, 3, true, &mut sep, &mut margin) };
    assert_eq!(s, ProjsepStatus::InvalidArgument);
    unsafe { projsep_dataset_free(sq) };

    let missing = CString::new("/nonexistent/projsep.json").unwrap();
    let s = unsafe { projsep_dataset_load(missing.as_ptr(), &mut ds) };
    assert_eq!(s, ProjsepStatus::Io);
}

#[test]
fn loads_dataset_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    std::fs::write(&path, r#"{"version":1,"dimension":1,"points":[[0],[1]],"labels":[[-1,1]]}"#).unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    let mut ds = ptr::null_mut();
    unsafe {
        assert_eq!(projsep_dataset_load(c.as_ptr(), &mut ds), ProjsepStatus::Ok);
        assert_eq!(projsep_dataset_len(ds), 2);
        projsep_dataset_free(ds);
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    let c = CString::new(bad.to_str().unwrap()).unwrap();
    assert_eq!(unsafe { projsep_dataset_load(c.as_ptr(), &mut ds) }, ProjsepStatus::Parse);
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(projsep_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/projsep.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["projsep_dataset_new", "projsep_dataset_free", "projsep_last_error", "PROJSEP_STATUS_OK"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{}\"\nint main(void) {{ ProjsepDataset *d = 0; return projsep_dataset_len(d) == 0 ? PROJSEP_STATUS_OK : 1; }}\n",
            header.display()
        ),
    )
    .unwrap();
    match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(status) => assert!(status.success()),
        Err(_) => eprintln!("no C compiler available; syntax check skipped"),
    }
}
