//! Byte-level golden files for QASM export and readout dumps.
//!
//! Regenerate with `QNQ_UPDATE_GOLDEN=1 cargo test -p qnq-core --test golden`.

mod common;

use std::fs;

use common::golden_dir;
use qnq_core::circuit::build_full_circuit;
use qnq_core::qasm::export_qasm;
use qnq_core::sim::run;

fn check(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("QNQ_UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        expected == actual,
        "{name} differs from golden file {}",
        path.display()
    );
}

#[test]
fn qasm_golden_files() {
    for n in [1, 2, 4] {
        let doc = export_qasm(&build_full_circuit(n).unwrap());
        check(&format!("nq{n}.qasm"), &doc.text);
    }
}

#[test]
fn readout_golden_files() {
    for n in [1, 2, 4] {
        let state = run(&build_full_circuit(n).unwrap()).unwrap();
        check(&format!("readout{n}.txt"), &state.dump());
    }
}

#[test]
fn golden_files_use_lf_endings() {
    for name in ["nq1.qasm", "nq2.qasm", "nq4.qasm"] {
        let bytes = fs::read(golden_dir().join(name)).unwrap();
        assert!(!bytes.contains(&b'\r'), "{name}");
    }
}
