//! End-to-end runs of the binary: exit codes, schema validation,
//! determinism of artifacts, and a few numeric spot values.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_padiclab")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("padiclab-cli-{}-{tag}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(bin())
        .arg(sub)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("binary runs")
}

#[test]
fn riesz_reports_closed_form_within_tolerance() {
    let dir = workdir("riesz");
    let config = dir.join("riesz.json");
    fs::write(
        &config,
        r#"{"experiment":"riesz","p":2,"n":1,"q":1.0,"y":{"num":1,"den":1},"cutoff":6}"#,
    )
    .unwrap();
    let out = run("riesz", &config, &dir, &[]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("closed form -1.333333333"), "{stdout}");
    let csv = fs::read_to_string(dir.join("riesz.csv")).unwrap();
    assert!(csv.starts_with("# {\"config_hash\":"), "hash line present");
    assert!(csv.contains("closed_form"), "header row present");
    let manifest = fs::read_to_string(dir.join("run.json")).unwrap();
    assert!(manifest.contains("config_hash"));
}

#[test]
fn tolerance_flag_tightens_the_riesz_gate() {
    let dir = workdir("riesz-tol");
    let config = dir.join("riesz.json");
    fs::write(
        &config,
        r#"{"experiment":"riesz","p":2,"n":1,"q":1.0,"y":{"num":1,"den":1},"cutoff":6}"#,
    )
    .unwrap();
    // truncation error ~1.6e-4 cannot meet 1e-9: numeric failure, exit 1
    let out = run("riesz", &config, &dir, &["--tolerance", "1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("exceeds"), "{stderr}");
}

#[test]
fn riesz_numeric_failure_exits_one() {
    let dir = workdir("riesz-fail");
    let config = dir.join("riesz.json");
    fs::write(
        &config,
        r#"{"experiment":"riesz","p":2,"n":1,"q":1.0,"y":{"num":0,"den":1},"cutoff":6}"#,
    )
    .unwrap();
    let out = run("riesz", &config, &dir, &[]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "divergent y = 0 is a numeric failure"
    );
}

#[test]
fn unknown_field_is_a_usage_error() {
    let dir = workdir("schema");
    let config = dir.join("riesz.json");
    fs::write(
        &config,
        r#"{"experiment":"riesz","p":2,"n":1,"q":1.0,"y":{"num":1,"den":1},"cutoff":6,"bogus":1}"#,
    )
    .unwrap();
    let out = run("riesz", &config, &dir, &[]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bogus"), "{stderr}");
}

#[test]
fn experiment_mismatch_is_a_usage_error() {
    let dir = workdir("mismatch");
    let config = dir.join("c.json");
    fs::write(
        &config,
        r#"{"experiment":"fourier","p":2,"n":1,"q":1.0,"y":{"num":1,"den":1},"cutoff":6}"#,
    )
    .unwrap();
    let out = run("riesz", &config, &dir, &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_and_missing_config_exit_two() {
    let out = Command::new(bin()).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin()).arg("riesz").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_byte_identical_for_one_seed() {
    let dir = workdir("simulate");
    let config = dir.join("sim.json");
    fs::write(
        &config,
        r#"{
            "experiment": "simulate",
            "flow": {
                "p": 3, "d": 2,
                "drift": {"kind": "constant", "matrix": [
                    {"num":0,"den":1},{"num":3,"den":1},
                    {"num":0,"den":1},{"num":0,"den":1}]},
                "diffusion": [
                    [{"num":3,"den":1},{"num":0,"den":1},{"num":0,"den":1},{"num":0,"den":1}],
                    [{"num":0,"den":1},{"num":0,"den":1},{"num":0,"den":1},{"num":3,"den":1}]]
            },
            "time": {"radius_exp": 0, "level": 2},
            "noise": {
                "measure": {"family":"q_gaussian","p":3,"beta":1.0,"gamma":{"num":0,"den":1},"q":1.0},
                "lattice": {"m":1,"n":2},
                "scaling": [{"num":3,"den":1},{"num":3,"den":1}]
            },
            "seed": 11
        }"#,
    )
    .unwrap();
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    let ra = run("simulate", &config, &out_a, &[]);
    assert!(
        ra.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&ra.stderr)
    );
    let rb = run("simulate", &config, &out_b, &[]);
    assert!(rb.status.success());
    let ta = fs::read(out_a.join("trajectory.jsonl")).unwrap();
    let tb = fs::read(out_b.join("trajectory.jsonl")).unwrap();
    assert!(!ta.is_empty());
    assert_eq!(ta, tb, "same seed, byte-identical trajectories");
    // a different --seed flag overrides and changes the path
    let out_c = dir.join("c");
    let rc = run("simulate", &config, &out_c, &["--seed", "12"]);
    assert!(rc.status.success());
    let tc = fs::read(out_c.join("trajectory.jsonl")).unwrap();
    assert_ne!(ta, tc);
}

#[test]
fn kakutani_zero_shift_is_equivalent() {
    let dir = workdir("kakutani");
    let config = dir.join("k.json");
    fs::write(
        &config,
        r#"{
            "experiment": "kakutani",
            "measure": {
                "family": "q_gaussian", "p": 3, "beta": 1.0, "q": 1.0,
                "gamma": {"num":0,"den":1},
                "scaling": [{"num":1,"den":1},{"num":1,"den":1},{"num":1,"den":1}]
            },
            "shift": [{"num":0,"den":1},{"num":0,"den":1},{"num":0,"den":1}]
        }"#,
    )
    .unwrap();
    let out = run("kakutani", &config, &dir, &[]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict equivalent"), "{stdout}");
    let csv = fs::read_to_string(dir.join("kakutani.csv")).unwrap();
    let mut rows = 0;
    for line in csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("k,"))
    {
        let alpha: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(alpha, 1.0);
        rows += 1;
    }
    assert_eq!(rows, 3);
    let json = fs::read_to_string(dir.join("kakutani.json")).unwrap();
    assert!(json.contains("\"verdict\": \"equivalent\""), "{json}");
}

#[test]
fn fourier_round_trip_through_files() {
    let dir = workdir("fourier");
    let gen_config = dir.join("gen.json");
    fs::write(
        &gen_config,
        r#"{"experiment":"fourier","generate":{"p":3,"m":2,"n":2,"seed":5}}"#,
    )
    .unwrap();
    let out1 = dir.join("step1");
    let r1 = run("fourier", &gen_config, &out1, &[]);
    assert!(
        r1.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&r1.stderr)
    );

    // feed the artifact back through the inverse transform
    let inv_config = dir.join("inv.json");
    fs::write(
        &inv_config,
        format!(
            r#"{{"experiment":"fourier","input":"{}","inverse":true}}"#,
            out1.join("fourier.csv").display()
        ),
    )
    .unwrap();
    let out2 = dir.join("step2");
    let r2 = run("fourier", &inv_config, &out2, &[]);
    assert!(
        r2.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&r2.stderr)
    );
    let csv = fs::read_to_string(out2.join("fourier.csv")).unwrap();
    assert!(csv.contains("digit_index"));
}

#[test]
fn density_and_pdmeasure_run() {
    let dir = workdir("density");
    let config = dir.join("d.json");
    fs::write(
        &config,
        r#"{
            "experiment": "density",
            "measure": {"family":"q_gaussian","p":3,"beta":1.0,"gamma":{"num":0,"den":1},"q":1.0},
            "lattice": {"m": 3, "n": 3}
        }"#,
    )
    .unwrap();
    let out = run("density", &config, &dir, &[]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("lattice mass"), "{stdout}");

    let pdm = dir.join("pdm.json");
    fs::write(
        &pdm,
        r#"{
            "experiment": "pdmeasure",
            "measure": {
                "family": "q_gaussian", "p": 3, "beta": 1.0, "q": 1.0,
                "gamma": {"num":0,"den":1},
                "scaling": [{"num":1,"den":1},{"num":1,"den":1}]
            },
            "b_values": [0.5, 1.0],
            "direction": [{"num":1,"den":3},{"num":1,"den":3}],
            "cylinder": [
                {"center":{"num":0,"den":1},"radius_exp":0},
                {"center":{"num":0,"den":1},"radius_exp":0}
            ]
        }"#,
    )
    .unwrap();
    let out = run("pdmeasure", &pdm, &dir, &[]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = fs::read_to_string(dir.join("pdmeasure.json")).unwrap();
    assert!(json.contains("value_re"));
}

#[test]
fn histogram_ratio_table_flags_nothing_for_identity_shift() {
    let dir = workdir("histogram");
    let config = dir.join("h.json");
    fs::write(
        &config,
        r#"{
            "experiment": "histogram",
            "flow": {
                "p": 3, "d": 2,
                "drift": {"kind": "zero"},
                "diffusion": [
                    [{"num":3,"den":1},{"num":0,"den":1},{"num":0,"den":1},{"num":0,"den":1}],
                    [{"num":0,"den":1},{"num":0,"den":1},{"num":0,"den":1},{"num":3,"den":1}]]
            },
            "time": {"radius_exp": 0, "level": 2},
            "noise": {
                "measure": {"family":"q_gaussian","p":3,"beta":1.0,"gamma":{"num":0,"den":1},"q":1.0},
                "lattice": {"m":1,"n":2},
                "scaling": [{"num":3,"den":1},{"num":3,"den":1}]
            },
            "m_q": 1,
            "n_samples": 200,
            "seed": 3,
            "shift": [
                {"num":1,"den":1},{"num":0,"den":1},
                {"num":0,"den":1},{"num":1,"den":1}]
        }"#,
    )
    .unwrap();
    let out = run("histogram", &config, &dir, &["--threads", "2"]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("0 flagged"), "{stdout}");
    let csv = fs::read_to_string(dir.join("histogram_ratios.csv")).unwrap();
    assert!(csv.contains("class_id,base_count"));
}

#[test]
fn picard_writes_convergence_report() {
    let dir = workdir("picard");
    let config = dir.join("p.json");
    fs::write(
        &config,
        r#"{
            "experiment": "picard",
            "p": 3,
            "x0": {"num": 1, "den": 1},
            "coeffs": [
                {"time_power":0,"noise_power":1,"constant":{"num":1,"den":1},"linear":{"num":3,"den":1}}
            ],
            "time": {"radius_exp": 0, "level": 2},
            "noise": {
                "measure": {"family":"q_gaussian","p":3,"beta":1.0,"gamma":{"num":0,"den":1},"q":1.0},
                "lattice": {"m":1,"n":2},
                "scaling": [{"num":3,"den":1}]
            },
            "seed": 9
        }"#,
    )
    .unwrap();
    let out = run("picard", &config, &dir, &[]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("converged"), "{stdout}");
    let json = fs::read_to_string(dir.join("picard.json")).unwrap();
    assert!(json.contains("\"converged\": true"), "{json}");
}

#[test]
fn regrep_and_quasiinv_run_clean() {
    let dir = workdir("regrep");
    let measure = r#"{
        "family": "q_gaussian", "p": 3, "beta": 1.0, "q": 1.0,
        "gamma": {"num":0,"den":1},
        "scaling": [{"num":1,"den":1},{"num":1,"den":1}]
    }"#;
    let config = dir.join("r.json");
    fs::write(
        &config,
        format!(
            r#"{{
                "experiment": "regrep",
                "measure": {measure},
                "h": [{{"num":1,"den":1}},{{"num":3,"den":1}}],
                "sample": {{"count": 2000, "lattice": {{"m":3,"n":3}}, "seed": 5}}
            }}"#
        ),
    )
    .unwrap();
    let out = run("regrep", &config, &dir, &[]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = fs::read_to_string(dir.join("regrep.json")).unwrap();
    assert!(json.contains("\"within_three_se\": true"), "{json}");

    let config = dir.join("q.json");
    fs::write(
        &config,
        format!(
            r#"{{
                "experiment": "quasiinv",
                "measure": {measure},
                "shift": [{{"num":3,"den":1}},{{"num":0,"den":1}}],
                "sample": {{"count": 50, "lattice": {{"m":2,"n":2}}, "seed": 6}}
            }}"#
        ),
    )
    .unwrap();
    let out = run("quasiinv", &config, &dir, &[]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.join("quasiinv.csv")).unwrap();
    assert!(csv.contains("sample_index,rho"));
}
