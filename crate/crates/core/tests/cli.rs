use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn acmn(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acmn"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

#[test]
fn generate_assign_solve_validate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(acmn(&["gen-ensemble", "--count", "3", "--seed", "4", "--out", "ens"], d).status.success());
    let topo = fs::read_to_string(d.join("ens/topology_0002.json")).unwrap();
    assert!(topo.contains("\"nodes\": 14") || topo.contains("\"nodes\":14"));

    let out = acmn(
        &["assign", "--topology", "ens/topology_0000.json", "--pdf", "nsfnet", "--realisations", "2", "--seed", "1", "--out", "phys"],
        d,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.join("phys/physical_0001.json").exists());

    let out = acmn(&["assign", "--ellipticity", "2.13", "--mean-pair-km", "3070", "--out", "ell"], d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = acmn(
        &["solve-one", "--topology", "phys/physical_0000.json", "--x-grid", "0.8,0.9", "--out", "sol"],
        d,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("best x"));
    for f in ["solution.tsv", "summary.json", "candidates.tsv", "per_x.json"] {
        assert!(d.join("sol").join(f).exists(), "{f}");
    }

    let out = acmn(&["validate", "--solution", "sol/solution.tsv", "--topology", "phys/physical_0000.json"], d);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("valid"));

    // Duplicate the first lightpath: a wavelength collision.
    let text = fs::read_to_string(d.join("sol/solution.tsv")).unwrap();
    let first = text.lines().nth(1).unwrap().to_string();
    fs::write(d.join("bad.tsv"), format!("{text}{first}\n")).unwrap();
    let out = acmn(&["validate", "--solution", "bad.tsv"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("INVALID"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), r#"{"topologies": 0}"#).unwrap();
    let out = acmn(&["sweep-scale", "--config", "cfg.json", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("cfg.json"), r#"{"nonsense": true}"#).unwrap();
    let out = acmn(&["sweep-ellipticity", "--config", "cfg.json", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_budget_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cfg.json"),
        r#"{"topologies": 1, "realisations": 1, "axis": [1000], "rwa": {"wavelengths": 1}, "max_infeasible": 0}"#,
    )
    .unwrap();
    let out = acmn(&["sweep-scale", "--config", "cfg.json", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
