use std::fs;
use std::process::{Command, Output};

use neurobench_core::report::parse_matrix;
use neurobench_core::Registry;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neurobench"))
        .args(args)
        .env_remove("NEUROBENCH_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn devices_list_shows_every_device() {
    let o = run(&["devices", "list"]);
    assert!(o.status.success());
    let reg = Registry::builtin().unwrap();
    let out = stdout(&o);
    assert_eq!(out.lines().count(), reg.devices().len() + 1);
    assert!(out.contains("CMOSdig"));
}

#[test]
fn element_row_matches_library() {
    let o = run(&["bench", "element", "--tech", "ANNDCSRAM"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("delay 897.31 ps"));
    assert!(out.contains("energy 306810 aJ"));
}

#[test]
fn network_csv_reparses() {
    let o = run(&["bench", "network", "--kind", "ONN"]);
    assert!(o.status.success());
    assert_eq!(parse_matrix(&stdout(&o)).unwrap().len(), 7);
}

#[test]
fn unknown_technology_is_a_data_error() {
    let o = run(&["bench", "element", "--tech", "NOPE"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error:") && err.contains("NOPE"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bench", "chip"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "chip", "--nominal", "--config", "x.json"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "network", "--kind", "XNN"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn chip_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("chip.json");
    fs::write(&cfg, r#"{"cores": 4, "neurons_per_core": 128, "synapses_per_neuron": 64}"#).unwrap();
    let o = run(&["bench", "chip", "--config", cfg.to_str().unwrap(), "--tech", "ANNDCSRAM"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("ANNDCSRAM,32768,"), "{row}");

    fs::write(&cfg, r#"{"cores": 0, "neurons_per_core": 128, "synapses_per_neuron": 64}"#).unwrap();
    let o = run(&["bench", "chip", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    fs::write(&cfg, "{not json").unwrap();
    let o = run(&["bench", "chip", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn nominal_chips_cover_all_technologies() {
    let o = run(&["bench", "chip", "--nominal"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 57);
}

#[test]
fn workload_schedules() {
    let p = stdout(&run(&["bench", "workload", "--name", "lenet", "--tech", "ANNAnCAnC", "--schedule", "parallel"]));
    let m = stdout(&run(&["bench", "workload", "--name", "lenet", "--tech", "ANNAnCAnC", "--schedule", "tmux"]));
    assert!(p.contains("schedule             parallel"));
    assert!(m.contains("schedule             time_multiplexed"));
    let energy = |s: &str| s.lines().find(|l| l.starts_with("energy")).unwrap().to_string();
    assert_eq!(energy(&p), energy(&m));
    let o = run(&["bench", "workload", "--name", "nope", "--tech", "ANNAnCAnC"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn topsdown_reports_element_and_workload() {
    let o = run(&["topsdown", "--chip", "Loihi", "--workload", "speech_mlp"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("tau_syn"));
    assert!(out.contains("published estimate"));
    let o = run(&["topsdown", "--chip", "DYNAPSEL"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn export_matrix_and_pareto() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    let o = run(&["export", "--what", "matrix", "--out", m.to_str().unwrap(), "--precision", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(parse_matrix(&fs::read_to_string(&m).unwrap()).unwrap().len(), 56);

    let w = dir.path().join("w.csv");
    let o = run(&["export", "--what", "matrix", "--scope", "workload", "--workload", "lenet", "--out", w.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&w).unwrap().lines().count(), 57);

    let p = dir.path().join("p.json");
    let o = run(&[
        "export", "--what", "pareto", "--set", "energy-delay", "--workload", "lenet", "--format", "json", "--out",
        p.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    assert!(!v.as_array().unwrap().is_empty());

    let o = run(&["export", "--what", "scatter", "--set", "neuron", "--out", p.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&p).unwrap().lines().count(), 57);

    let o = run(&["export", "--what", "matrix", "--scope", "workload", "--out", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn data_dir_overrides_builtin() {
    let dir = tempfile::tempdir().unwrap();
    Registry::builtin().unwrap().export_dir(dir.path()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_neurobench"))
        .args(["bench", "element", "--tech", "ANNDCSRAM"])
        .env("NEUROBENCH_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("delay 897.31 ps"));

    let empty = tempfile::tempdir().unwrap();
    let o = run(&["--data-dir", empty.path().to_str().unwrap(), "devices", "list"]);
    assert_eq!(o.status.code(), Some(1));
}
