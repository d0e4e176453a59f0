//! Replays the checked-in fuzz seeds through the same checks the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use tatecoh::format::*;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn texts(target: &str) -> Vec<(String, String)> {
    seeds(target)
        .into_iter()
        .filter_map(|(n, b)| String::from_utf8(b).ok().map(|t| (n, t)))
        .collect()
}

#[test]
fn group_seeds() {
    let mut ok = 0;
    for (name, t) in texts("parse_group") {
        if let Ok(g) = parse_group(&t) {
            ok += 1;
            assert_eq!(parse_group(&group_to_value(&g).to_string()).unwrap(), g, "{name}");
        }
    }
    assert!(ok >= 5);
}

#[test]
fn module_seeds() {
    let mut ok = 0;
    for (name, t) in texts("parse_module") {
        if let Ok(m) = parse_module(&t) {
            ok += 1;
            assert_eq!(parse_module(&module_to_value(&m).to_string()).unwrap(), m, "{name}");
        }
    }
    assert!(ok >= 3);
}

#[test]
fn cocycle_seeds() {
    let mut ok = 0;
    for (name, t) in texts("parse_cocycle") {
        if let Ok(f) = parse_cocycle(&t) {
            ok += 1;
            assert_eq!(parse_cocycle(&cocycle_to_value(&f).to_string()).unwrap(), f, "{name}");
        }
    }
    assert!(ok >= 2);
}

#[test]
fn bundle_seeds() {
    for (name, t) in texts("parse_bundle") {
        let e = parse_bundle(&t).unwrap_or_else(|err| panic!("{name}: {err}"));
        assert_eq!(parse_bundle(&bundle_to_value(&e).to_string()).unwrap(), e, "{name}");
    }
}

#[test]
fn module_extension_seeds() {
    for (name, t) in texts("parse_module_extension") {
        let e = parse_module_extension(&t).unwrap_or_else(|err| panic!("{name}: {err}"));
        let again = parse_module_extension(&module_extension_to_value(&e).to_string()).unwrap();
        assert_eq!(again.middle(), e.middle(), "{name}");
    }
}

#[test]
fn text_spec_seeds() {
    for (_, t) in texts("parse_kernel_spec") {
        if let Ok(inv) = parse_kernel_spec(&t) {
            assert!(inv.is_finite());
        }
    }
    for (_, t) in texts("parse_degree_range") {
        if let Ok((lo, hi)) = parse_degree_range(&t) {
            assert!(lo <= hi);
        }
    }
}
