//! End-to-end behaviour of the `boxdim` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn boxdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxdim"))
        .args(args)
        .env_remove("BOXDIM_CACHE_DIR")
        .output()
        .unwrap()
}

fn config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let out = dir.join(format!("{name}_out"));
    let path = dir.join(format!("{name}.toml"));
    fs::write(&path, format!("{body}\n[output]\ndir = {out:?}\n")).unwrap();
    path
}

const Z_COVER: &str = r#"
[group]
kind = "free_abelian"
rank = 1
[filtration]
powers = { p = 2, t = 6 }
[task]
name = "cover"
r = [1, 2]
growth = { c = 3, d = 1 }
"#;

const UT3_PROFILE: &str = r#"
[group]
kind = "unitriangular"
size = 3
[filtration]
moduli = [2, 4]
[task]
name = "profile"
r = [2]
s_cap = 4
mode = "greedy"
"#;

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let ok = boxdim(&["run", "--config", config(d, "ok", Z_COVER).to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    let chain = Z_COVER.replace("powers = { p = 2, t = 6 }", "moduli = [3, 4]");
    let bad = boxdim(&["run", "--config", config(d, "chain", &chain).to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));

    let unknown = Z_COVER.replace("rank = 1", "rank = 1\ncolour = 3");
    assert_eq!(
        boxdim(&["run", "--config", config(d, "unknown", &unknown).to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let capped = Z_COVER.replace("[task]", "vertex_cap = 10\n[task]");
    let out = boxdim(&["run", "--config", config(d, "capped", &capped).to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    let missing = boxdim(&["run", "--config", d.join("absent.toml").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));

    // output directory blocked by a plain file
    fs::write(d.join("blocked_out"), "").unwrap();
    let blocked = boxdim(&["run", "--config", config(d, "blocked", Z_COVER).to_str().unwrap()]);
    assert_eq!(blocked.status.code(), Some(1));
}

#[test]
fn outputs_have_expected_columns() {
    let tmp = TempDir::new().unwrap();
    let cfg = config(tmp.path(), "p", UT3_PROFILE);
    assert!(boxdim(&["--no-timing", "run", "--config", cfg.to_str().unwrap()])
        .status
        .success());
    let csv = fs::read_to_string(tmp.path().join("p_out/profile.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "R,S_achieved,n_achieved,mode,component_count,hirsch_length,wall_time_ms,status"
    );
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[4], "2");
    assert_eq!(row[5], "3");
    assert_eq!(row[6], "0");
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("p_out/profile.json")).unwrap()).unwrap();
    assert_eq!(summary["task"], "profile");
    assert_eq!(summary["moduli"], serde_json::json!([2, 4]));
}

#[test]
fn witness_round_trip() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cfg = config(d, "w", Z_COVER);
    let w = d.join("w.json");
    let run = boxdim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--export-witness",
        w.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    let ok = boxdim(&[
        "cover",
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--witness",
        w.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 2);

    // merge every set of the first witness into one family
    let mut file: serde_json::Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    let fams = file["witnesses"][0]["cover"]["families"].as_array_mut().unwrap();
    let all: Vec<serde_json::Value> = fams.iter().flat_map(|f| f.as_array().unwrap().clone()).collect();
    *fams = vec![serde_json::Value::Array(all)];
    let bad = d.join("bad.json");
    fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    let out = boxdim(&[
        "cover",
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--witness",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));

    // a witness for another group is refused
    let other = config(d, "other", &Z_COVER.replace("rank = 1", "rank = 2"));
    let out = boxdim(&[
        "cover",
        "verify",
        "--config",
        other.to_str().unwrap(),
        "--witness",
        w.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn explicit_rsdim_witness() {
    let tmp = TempDir::new().unwrap();
    let body = "[group]\nkind = \"free_abelian\"\nrank = 1\n[task]\nname = \"rsdim\"\nr = 2\ns = 3\nmethod = \"exhaustive\"\nspace = \"cycle:12\"\n";
    let cfg = config(tmp.path(), "c12", body);
    let w = tmp.path().join("c12.json");
    assert!(boxdim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--export-witness",
        w.to_str().unwrap()
    ])
    .status
    .success());
    let csv = fs::read_to_string(tmp.path().join("c12_out/rsdim.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("2,3,exhaustive,12,1,"), "{csv}");
    assert!(boxdim(&[
        "cover",
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--witness",
        w.to_str().unwrap()
    ])
    .status
    .success());
}

#[test]
fn warm_cache_gives_identical_outputs() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cache = d.join("cache");
    let cold = config(d, "cold", UT3_PROFILE);
    let warm = config(d, "warm", UT3_PROFILE);
    let cache_arg = cache.to_str().unwrap();
    for cfg in [&cold, &warm] {
        let out = boxdim(&[
            "--cache-dir",
            cache_arg,
            "--no-timing",
            "run",
            "--config",
            cfg.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let entries = fs::read_dir(&cache).unwrap().count();
    assert_eq!(entries, 2);
    for name in ["profile.csv", "profile.json"] {
        assert_eq!(
            fs::read(d.join("cold_out").join(name)).unwrap(),
            fs::read(d.join("warm_out").join(name)).unwrap()
        );
    }
    let uncached = config(d, "none", UT3_PROFILE);
    assert!(boxdim(&["--no-timing", "run", "--config", uncached.to_str().unwrap()])
        .status
        .success());
    assert_eq!(
        fs::read(d.join("cold_out/profile.csv")).unwrap(),
        fs::read(d.join("none_out/profile.csv")).unwrap()
    );
}

#[test]
fn cache_gc() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cache = d.join("cache");
    let cfg = config(d, "p", UT3_PROFILE);
    let cache_arg = cache.to_str().unwrap();
    assert!(
        boxdim(&["--cache-dir", cache_arg, "run", "--config", cfg.to_str().unwrap()])
            .status
            .success()
    );
    let out = boxdim(&["--cache-dir", cache_arg, "cache", "gc", "--budget", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("freed ") && !text.starts_with("freed 0 "), "{text}");
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 0);
    assert_eq!(boxdim(&["cache", "gc", "--budget", "0"]).status.code(), Some(2));
}
