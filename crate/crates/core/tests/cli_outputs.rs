use std::path::{Path, PathBuf};
use std::process::Command;

use qwalk_core::circuit::{build_step_circuit, Circuit, NativeGateSet, WalkSpec};
use qwalk_core::cli::run_command;
use qwalk_core::config::{ExperimentConfig, ExperimentKind, OutputFormat};

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn qwalk(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn validate(schema_file: &str, doc: &str) {
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_dir().join("schema").join(schema_file)).unwrap()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(doc).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:#?}");
}

const SWEEP: &str = "[walk]\nposition_qubits = 2\ncoin_qubits = 2\nsteps = 5\n[gates]\na_list = [0.0, 13.0, 26.0]\n";
const TOLERANCE: &str = "[walk]\nsteps = 21\n[tolerance]\nwalks = [[2, 1], [2, 2]]\nmax_ranks = [3, 4]\n";
const COMPOSITE: &str = "[composite]\nn_list = [5, 10]\n";

#[test]
fn json_outputs_match_their_schemas() {
    let cases = [
        (ExperimentKind::Simulate, "[walk]\ncoin_qubits = 2\nsteps = 4\n", "simulate.schema.json"),
        (ExperimentKind::SweepA, SWEEP, "sweep-a.schema.json"),
        (ExperimentKind::Tolerance, TOLERANCE, "tolerance.schema.json"),
        (ExperimentKind::Composite, COMPOSITE, "composite.schema.json"),
    ];
    for (kind, cfg, schema) in cases {
        let cfg = ExperimentConfig::parse(cfg).unwrap();
        let out = run_command(Some(kind), &cfg, Some(OutputFormat::Json)).unwrap();
        validate(schema, &out.primary);
    }
}

#[test]
fn csv_headers_are_stable() {
    let header = |kind, cfg: &str| {
        let cfg = ExperimentConfig::parse(cfg).unwrap();
        let out = run_command(Some(kind), &cfg, Some(OutputFormat::Csv)).unwrap();
        out.primary.lines().next().unwrap().to_string()
    };
    assert_eq!(header(ExperimentKind::Simulate, ""), "step,fidelity,total_probability");
    assert_eq!(header(ExperimentKind::SweepA, SWEEP), "a,step,fidelity,total_probability");
    assert_eq!(
        header(ExperimentKind::Tolerance, TOLERANCE),
        "position_qubits,coin_qubits,max_rank,tolerance,steps_within"
    );
    assert_eq!(
        header(ExperimentKind::Composite, COMPOSITE),
        "n,from_rank,to_rank,mean_increase_percent,increase_percent,counts_from,counts_to"
    );
    let sweep = run_command(
        Some(ExperimentKind::SweepA),
        &ExperimentConfig::parse(SWEEP).unwrap(),
        Some(OutputFormat::Csv),
    )
    .unwrap();
    assert_eq!(sweep.companions[0].1.lines().next(), Some("a,f_cz,f_ccz"));
    assert_eq!(sweep.primary.lines().count(), 1 + 3 * 5);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sweep.toml", SWEEP);
    for format in ["csv", "json"] {
        let mut outputs = Vec::new();
        for i in 0..2 {
            let out = dir.path().join(format!("run{i}.{format}"));
            let status = qwalk(&[
                "sweep-a",
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--format",
                format,
                "--seedless",
            ]);
            assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
            outputs.push(std::fs::read(&out).unwrap());
        }
        assert_eq!(outputs[0], outputs[1]);
    }
    assert_eq!(
        std::fs::read(dir.path().join("run0.gates.csv")).unwrap(),
        std::fs::read(dir.path().join("run1.gates.csv")).unwrap()
    );
}

#[test]
fn zero_a_series_equals_published_gate_run() {
    let sweep = ExperimentConfig::parse("[walk]\nsteps = 6\n[gates]\na_list = [0.0]\n").unwrap();
    let plain = ExperimentConfig::parse("[walk]\nsteps = 6\n").unwrap();
    let s = run_command(Some(ExperimentKind::SweepA), &sweep, Some(OutputFormat::Csv)).unwrap();
    let p = run_command(Some(ExperimentKind::Simulate), &plain, Some(OutputFormat::Csv)).unwrap();
    let from_sweep: Vec<String> = s.primary.lines().skip(1).map(|l| l.splitn(2, ',').nth(1).unwrap().to_string()).collect();
    let from_plain: Vec<String> = p.primary.lines().skip(1).map(str::to_string).collect();
    assert_eq!(from_sweep, from_plain);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let ok = qwalk(&["simulate"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().count(), 22);

    let bad = write_config(dir.path(), "bad.toml", "[walk]\nposition_qubit = 3\n");
    let out = qwalk(&["simulate", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position_qubit"));

    let missing = qwalk(&["simulate", "--config", "/nonexistent/qwalk.toml"]);
    assert_eq!(missing.status.code(), Some(2));

    let unordered = write_config(dir.path(), "sets.toml", "[composite]\nfidelity_sets = [[0.99, 0.999]]\n");
    assert_eq!(qwalk(&["composite", "--config", unordered.to_str().unwrap()]).status.code(), Some(2));

    let big = write_config(dir.path(), "big.toml", "[walk]\nposition_qubits = 10\ncoin_qubits = 2\n");
    let out = qwalk(&["simulate", "--config", big.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("maximum is 12"));
}

#[test]
fn composite_report_prints_counts() {
    let out = qwalk(&["composite"]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("5, G(3 -> 4)"));
    assert!(err.contains("3:82"));
}

#[test]
fn step_circuits_match_golden_files() {
    for (n, nc, rho, name) in [(2, 2, 3, "lazy4_rank3"), (2, 1, 3, "ring4_rank3"), (3, 2, 4, "lazy8_rank4")] {
        let spec = WalkSpec::new(n, nc, 1).unwrap();
        let c = build_step_circuit(&spec, &NativeGateSet::new(rho).unwrap(), 0).unwrap();
        let golden = std::fs::read_to_string(manifest_dir().join("tests/golden").join(format!("{name}.txt"))).unwrap();
        assert_eq!(c.to_text(), golden, "{name}");
        let parsed = Circuit::from_text(&golden).unwrap();
        assert_eq!(parsed.rank_census(), c.rank_census());
        assert_eq!(parsed.move_count(), c.move_count());
    }
}

#[test]
fn shipped_configs_load() {
    let dir = manifest_dir().join("configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(cfg.experiment.kind.is_some(), "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 7);
}
