//! End-to-end checks of the `kslice` binary: exit codes, deterministic
//! output, and the documented file formats.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kslice"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kslice-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

#[test]
fn thresholds_prints_exact_rationals() {
    let out = bin().args(["thresholds", "--delta", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"lambda_c\": \"4\""));
    assert!(text.contains("\"alpha_c\": \"4/17\""));

    let out = bin().args(["thresholds", "--delta", "4"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"lambda_c\": \"27/16\""));
    assert!(text.contains("\"alpha_c\": \"27/151\""));

    // delta < 3 is a configuration error: exit code 2
    let out = bin().args(["thresholds", "--delta", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_is_deterministic_and_dumps_hex_trajectories() {
    let dir = tmp_dir("sample");
    let gpath = dir.join("g.txt");
    std::fs::write(&gpath, "4 2\n0 1\n2 3\n").unwrap();
    let run = |dump: &PathBuf| {
        bin()
            .args([
                "sample",
                "--graph",
                gpath.to_str().unwrap(),
                "--k",
                "2",
                "--variant",
                "hdx",
                "--steps",
                "500",
                "--seed",
                "9",
                "--traj-dump",
                dump.to_str().unwrap(),
            ])
            .output()
            .unwrap()
    };
    let d1 = dir.join("t1.hex");
    let d2 = dir.join("t2.hex");
    let o1 = run(&d1);
    let o2 = run(&d2);
    assert!(o1.status.success());
    assert_eq!(o1.stdout, o2.stdout, "byte-identical reports");
    let t1 = std::fs::read_to_string(&d1).unwrap();
    assert_eq!(t1, std::fs::read_to_string(&d2).unwrap());
    assert_eq!(t1.lines().count(), 501);
    for line in t1.lines() {
        let mask = u64::from_str_radix(line, 16).unwrap();
        assert_eq!(mask.count_ones(), 2);
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn spectrum_and_mixing_reports() {
    let dir = tmp_dir("spectrum");
    let gpath = dir.join("e3.txt");
    std::fs::write(&gpath, "3 0\n").unwrap();
    let out = bin()
        .args(["spectrum", "--graph", gpath.to_str().unwrap(), "--k", "1", "--variant", "hdx"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // rank-one kernel: gamma = 1
    let gamma: f64 = v["gamma"].as_str().unwrap().parse().unwrap();
    assert!((gamma - 1.0).abs() < 1e-12);

    let out = bin()
        .args([
            "mixing",
            "--graph",
            gpath.to_str().unwrap(),
            "--k",
            "1",
            "--variant",
            "hdx",
            "--horizon",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tau_mix"], serde_json::json!(1));
    assert_eq!(v["envelope_ok"], serde_json::json!(true));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_runs_on_the_shipped_corpus() {
    let corpus = workspace_root().join("corpus");
    let out = bin().args(["verify", "--corpus", corpus.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failed"], serde_json::json!(0));
    assert!(v["passed"].as_u64().unwrap() > 100);
}

#[test]
fn verify_env_var_selects_the_corpus_root() {
    let corpus = workspace_root().join("corpus");
    let out = bin().env("KSLICE_CORPUS", &corpus).arg("verify").output().unwrap();
    assert!(out.status.success());
}

#[test]
fn verify_missing_corpus_exits_2() {
    let out = bin().args(["verify", "--corpus", "/nonexistent-kslice"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_corruption_exits_1() {
    let dir = tmp_dir("verify");
    std::fs::create_dir_all(dir.join("graphs")).unwrap();
    std::fs::create_dir_all(dir.join("counts")).unwrap();
    std::fs::write(dir.join("graphs/p3.txt"), "3 2\n0 1\n1 2\n").unwrap();
    std::fs::write(dir.join("counts/p3.json"), "[\"1\",\"3\",\"2\",\"0\"]").unwrap();
    let out = bin().args(["verify", "--corpus", dir.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("count-fixture"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_emits_csv() {
    let dir = tmp_dir("sweep");
    let spec = dir.join("spec.json");
    std::fs::write(&spec, r#"{"family":"cycle","sizes":[6,8],"k_fixed":2,"variant":"metropolis"}"#)
        .unwrap();
    let outfile = dir.join("rows.csv");
    let out = bin()
        .args([
            "sweep",
            "--spec",
            spec.to_str().unwrap(),
            "--format",
            "csv",
            "--out",
            outfile.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&outfile).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("family,n,k,"));
    assert!(lines[1].starts_with("cycle,6,2,"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_empty_family_gaps_match_the_johnson_closed_form() {
    // The hdx walk on k-subsets of an empty graph is the Johnson-scheme
    // down-up chain, whose gap is n / (k (n - k + 1)); the sweep's exact
    // eigensolve must reproduce it.
    let dir = tmp_dir("sweep-johnson");
    let spec = dir.join("spec.json");
    std::fs::write(
        &spec,
        r#"{"family":"empty","sizes":[6,8,10],"k_fraction":0.334,"variant":"hdx"}"#,
    )
    .unwrap();
    let out = bin().args(["sweep", "--spec", spec.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let n: f64 = cols[1].parse().unwrap();
        let k: f64 = cols[2].parse().unwrap();
        let gamma: f64 = cols[5].parse().unwrap();
        let want = n / (k * (n - k + 1.0));
        assert!((gamma - want).abs() < 1e-12, "{line}: want {want}");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn edgeworth_and_cumulants_reports() {
    let dir = tmp_dir("edgeworth");
    let gpath = dir.join("c12.txt");
    std::fs::write(&gpath, kslice::graph::Graph::cycle(12).to_edge_list()).unwrap();
    let out = bin()
        .args(["cumulants", "--graph", gpath.to_str().unwrap(), "--lambda", "0.8", "--d", "6"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kappa"].as_array().unwrap().len(), 6);

    let out = bin()
        .args([
            "edgeworth",
            "--graph",
            gpath.to_str().unwrap(),
            "--target-k",
            "3",
            "--d",
            "2",
            "--window",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["rows"].as_array().unwrap().len() >= 4);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn induced_and_decompose_reports() {
    let dir = tmp_dir("induced");
    let gpath = dir.join("two_c5.txt");
    let g = kslice::graph::Graph::cycle(5).disjoint_union(&kslice::graph::Graph::cycle(5));
    std::fs::write(&gpath, g.to_edge_list()).unwrap();
    let out = bin()
        .args(["induced", "--graph", gpath.to_str().unwrap(), "--component", "0", "--k", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["mk_pairs_checked"].as_u64().unwrap() > 0);

    let out = bin()
        .args([
            "decompose",
            "--graph",
            gpath.to_str().unwrap(),
            "--component",
            "0",
            "--k",
            "3",
            "--trials",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    let _ = std::fs::remove_dir_all(&dir);
}
