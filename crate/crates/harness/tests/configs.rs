use entspec_harness::config::DEFAULT_MAX_QUBITS;
use entspec_harness::{experiment, ExperimentConfig};

#[test]
fn shipped_configs_are_valid() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            cfg.validate(DEFAULT_MAX_QUBITS).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(!experiment(cfg.experiment).groups(&cfg).unwrap().is_empty());
            seen += 1;
        }
    }
    assert!(seen >= 6);
}
