//! End-to-end runs of the binary: outputs, exit codes and determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pg-surf"));
    c.env_remove("PG_SURF_THREADS");
    c
}

struct Run {
    dir: TempDir,
}

impl Run {
    fn new() -> Self {
        Run {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn config(&self, name: &str, body: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn exec(&self, cmd: &str, config: &Path, sets: &[&str]) -> Output {
        let mut c = bin();
        c.current_dir(self.dir.path()).arg(cmd).arg("--config").arg(config);
        for s in sets {
            c.arg("--set").arg(s);
        }
        c.output().unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: stdout={} stderr={}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

const THM31: &str = r#"{"family": {"name": "thm31", "k0": 1.0}, "resolution": [20, 20]}"#;

#[test]
fn curvature_thm31_grid() {
    let r = Run::new();
    let cfg = r.config("c.json", THM31);
    let o = r.exec("curvature", &cfg, &["output.csv=k.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(r.path("k.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "u1,u2,x,y,z,K,H,epsilon,W,excluded");
    assert_eq!(lines.len(), 401);
    let s = stdout_json(&o);
    assert!(s["k"]["max_dev"].as_f64().unwrap() < 1e-7);
    assert!((s["k_closed_form"]["mean"].as_f64().unwrap() + 1.0).abs() < 1e-7);
    assert_eq!(s["excluded"], 0);
}

#[test]
fn curvature_plane_is_flat() {
    let r = Run::new();
    let cfg = r.config("c.json", r#"{"family": {"name": "plane"}, "output": {"csv": "p.csv"}}"#);
    assert_eq!(code(&r.exec("curvature", &cfg, &[])), 0);
    let csv = fs::read_to_string(r.path("p.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!((cols[5], cols[6]), (0.0, 0.0));
    }
}

#[test]
fn curvature_marks_exclusions() {
    // z = x y crosses f g' = ±1 at |x| = 1
    let r = Run::new();
    let cfg = r.config(
        "c.json",
        r#"{"family": {"name": "saddle"}, "grid": {"u1": [-1, 1], "u2": [-1, 1], "n1": 5, "n2": 5},
            "output": {"csv": "s.csv"}}"#,
    );
    let o = r.exec("curvature", &cfg, &[]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["excluded"], 10);
    let csv = fs::read_to_string(r.path("s.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.ends_with(",1")).count(), 10);
}

#[test]
fn flags_override_file() {
    let r = Run::new();
    let cfg = r.config("c.json", THM31);
    let o = r.exec("curvature", &cfg, &["family.k0=-4", "resolution=[3,4]"]);
    assert_eq!(code(&o), 0);
    let s = stdout_json(&o);
    assert_eq!(s["samples"], 12);
    assert!((s["k_closed_form"]["mean"].as_f64().unwrap() + 4.0).abs() < 1e-7);
}

#[test]
fn verify_pass_and_fail() {
    let r = Run::new();
    let cfg = r.config(
        "v.json",
        r#"{"family": {"name": "thm42", "h0": 0.5, "causal": "timelike"}}"#,
    );
    let o = r.exec("verify", &cfg, &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(stdout_json(&o)["passed"], true);

    let o = r.exec("verify", &cfg, &["family.perturb=1.01"]);
    assert_eq!(code(&o), 1);
    let s = stdout_json(&o);
    assert_eq!(s["passed"], false);
    let failed: Vec<&str> = s["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"constancy.H"), "{failed:?}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("constancy.H"));
}

#[test]
fn verify_finite_differences() {
    let r = Run::new();
    let cfg = r.config(
        "v.json",
        r#"{"family": {"name": "thm32", "h0": 0.5, "causal": "spacelike"}, "resolution": [15, 15],
            "mode": {"mode": "finite-difference", "step": 1e-4},
            "tolerances": {"constancy": 1e-4, "cross": 1e-4, "motion": 1e-4}, "verify": {"motions": 3}}"#,
    );
    let o = r.exec("verify", &cfg, &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn config_errors_exit_2() {
    let r = Run::new();
    let cfg = r.config("c.json", THM31);
    assert_eq!(code(&r.exec("verify", &cfg, &["family.k0=0"])), 2);
    assert_eq!(code(&r.exec("curvature", &cfg, &["resolution=[1,5]"])), 2);
    assert_eq!(code(&r.exec("curvature", &cfg, &["nokey"])), 2);
    assert_eq!(code(&r.exec("curvature", &cfg, &["unknown_field=1"])), 2);
    assert_eq!(code(&r.exec("reconstruct", &cfg, &[])), 2);
    assert_eq!(code(&r.exec("probe", &cfg, &[])), 2);
    assert_eq!(code(&r.exec("mesh", &cfg, &[])), 2);
    let bad = r.config("bad.json", "{ not json");
    assert_eq!(code(&r.exec("curvature", &bad, &[])), 2);
    assert_eq!(code(&r.exec("curvature", &r.path("missing.json"), &[])), 2);
    // radicand domain violated by an explicit grid
    let t = r.config(
        "t.json",
        r#"{"family": {"name": "thm32", "h0": 0.5, "causal": "timelike"},
            "grid": {"u1": [-1, 1], "u2": [-1, 1], "n1": 5, "n2": 5}}"#,
    );
    assert_eq!(code(&r.exec("curvature", &t, &[])), 2);
    let o = bin()
        .env("PG_SURF_THREADS", "zero")
        .arg("curvature")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = bin().arg("bogus").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn all_lightlike_exit_3() {
    // z = y: f g' = 1 everywhere
    let r = Run::new();
    let cfg = r.config(
        "c.json",
        r#"{"surface": {"kind": "first", "f": {"type": "constant", "value": 1},
                        "g": {"type": "polynomial", "coeffs": [0, 1]}},
            "grid": {"u1": [0, 1], "u2": [0, 1], "n1": 4, "n2": 4}}"#,
    );
    let o = r.exec("curvature", &cfg, &[]);
    assert_eq!(code(&o), 3);
    assert_eq!(stdout_json(&o)["excluded"], 16);
    assert_eq!(code(&r.exec("mesh", &cfg, &["output.obj=m.obj"])), 3);
    assert!(!r.path("m.obj").exists());
}

#[test]
fn reconstruct_exit_codes() {
    let r = Run::new();
    let cfg = r.config("r.json", r#"{"reconstruct": {"theorem": "3.1", "k0": 1.0}}"#);
    let o = r.exec("reconstruct", &cfg, &[]);
    assert_eq!(code(&o), 0);
    let s = stdout_json(&o);
    assert!(s["max_error"].as_f64().unwrap() < 1e-6);
    assert_eq!(s["samples"], 2001);

    // coarse step: larger error, breaches the default tolerance
    let o = r.exec("reconstruct", &cfg, &["reconstruct.step=0.1"]);
    assert_eq!(code(&o), 1);
    let coarse = stdout_json(&o)["max_error"].as_f64().unwrap();
    assert!(coarse > 1e-6);
    // and passes once the tolerance admits it
    let o = r.exec("reconstruct", &cfg, &["reconstruct.step=0.1", "tolerances.reconstruct=1e-5"]);
    assert_eq!(code(&o), 0);

    // timelike slope handed to the spacelike branch
    let b = r.config(
        "b.json",
        r#"{"reconstruct": {"theorem": "3.2", "h0": 0.5, "causal": "spacelike", "slope": 1.5}}"#,
    );
    assert_eq!(code(&r.exec("reconstruct", &b, &[])), 4);
    assert_eq!(code(&r.exec("reconstruct", &b, &["reconstruct.causal=timelike", "reconstruct.slope=-1.5"])), 0);
    // heading into the singularity of the slope law
    assert_eq!(code(&r.exec("reconstruct", &b, &["reconstruct.causal=timelike"])), 1);
    let w = r.config(
        "w.json",
        r#"{"reconstruct": {"theorem": "4.2", "h0": 0.5, "causal": "timelike", "w0": 2.0}}"#,
    );
    assert_eq!(code(&r.exec("reconstruct", &w, &[])), 4);
    assert_eq!(code(&r.exec("reconstruct", &w, &["reconstruct.causal=spacelike", "reconstruct.w0=-2"])), 0);
    // g'/g reaches infinity in finite time
    assert_eq!(code(&r.exec("reconstruct", &w, &["reconstruct.causal=spacelike"])), 1);
}

#[test]
fn probe_floor_and_control() {
    let r = Run::new();
    let cfg = r.config(
        "p.json",
        r#"{"probe": {"k0": 1.0, "space": {"kind": "polynomial", "degree": 2}}}"#,
    );
    let o = r.exec("probe", &cfg, &[]);
    assert_eq!(code(&o), 0);
    let s = stdout_json(&o);
    assert!(s["scope"].as_str().unwrap().contains("not a proof"));
    assert!(s["best_residual"].as_f64().unwrap() > s["bound"].as_f64().unwrap());
    assert_eq!(code(&r.exec("probe", &cfg, &["probe.k0=0"])), 0);
    // a floor above what the search reaches is reported as a breach
    assert_eq!(code(&r.exec("probe", &cfg, &["tolerances.probe_floor=10"])), 1);
    // an empty budget reports the starting residual
    let o = r.exec("probe", &cfg, &["probe.budget=0"]);
    assert_eq!(stdout_json(&o)["evaluations"], 0);
}

#[test]
fn mesh_topology() {
    let r = Run::new();
    let cfg = r.config(
        "m.json",
        r#"{"family": {"name": "thm31", "k0": 1.0}, "resolution": [10, 10], "output": {"obj": "m.obj"}}"#,
    );
    let o = r.exec("mesh", &cfg, &[]);
    assert_eq!(code(&o), 0);
    let obj = fs::read_to_string(r.path("m.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 100);
    let faces: Vec<&str> = obj.lines().filter(|l| l.starts_with("f ")).collect();
    assert_eq!(faces.len(), 81);
    for f in faces {
        for idx in f.split_whitespace().skip(1) {
            let i: usize = idx.parse().unwrap();
            assert!((1..=100).contains(&i));
        }
    }
    let side = fs::read_to_string(r.path("m.csv")).unwrap();
    assert_eq!(side.lines().count(), 101);
}

#[test]
fn mesh_holes_and_saddle() {
    let r = Run::new();
    // lightlike columns at |x| = 1 leave holes, never degenerate faces
    let cfg = r.config(
        "m.json",
        r#"{"family": {"name": "saddle"}, "grid": {"u1": [-1, 1], "u2": [-1, 1], "n1": 5, "n2": 5},
            "output": {"obj": "h.obj", "sidecar": "h_side.csv"}}"#,
    );
    let o = r.exec("mesh", &cfg, &[]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["faces"], 8);
    let side = fs::read_to_string(r.path("h_side.csv")).unwrap();
    assert!(side.starts_with("vertex,u1,u2,K,H,epsilon,W,excluded\n"));

    let o = r.exec("mesh", &cfg, &["grid.u1=[-0.5,0.5]", "grid.u2=[-0.5,0.5]", "output.sidecar=s.csv"]);
    assert_eq!(code(&o), 0);
    let side = fs::read_to_string(r.path("s.csv")).unwrap();
    for line in side.lines().skip(1) {
        let h: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(h.abs() < 1e-12);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let r = Run::new();
    let cfg = r.config(
        "d.json",
        r#"{"family": {"name": "thm42", "h0": 1.3, "lambda1": -0.7, "lambda3": 0.4, "causal": "spacelike"},
            "resolution": [17, 13]}"#,
    );
    let run = |tag: &str| {
        let outs = [
            ("curvature", vec![format!("output.csv={tag}.csv"), format!("output.json={tag}.json")]),
            ("mesh", vec![format!("output.obj={tag}.obj"), format!("output.json={tag}_mesh.json")]),
            ("verify", vec![format!("output.json={tag}_verify.json")]),
        ];
        for (cmd, sets) in &outs {
            let sets: Vec<&str> = sets.iter().map(String::as_str).collect();
            assert_eq!(code(&r.exec(cmd, &cfg, &sets)), 0, "{cmd}");
        }
        ["csv", "json", "obj", "csv", "_mesh.json", "_verify.json"]
            .iter()
            .map(|ext| {
                let name = if ext.starts_with('_') {
                    format!("{tag}{ext}")
                } else {
                    format!("{tag}.{ext}")
                };
                fs::read(r.path(&name)).unwrap()
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run("a"), run("b"));

    // stdout reports too, across thread counts
    let p = r.config(
        "p.json",
        r#"{"probe": {"k0": -0.5, "space": {"kind": "exp-polynomial", "degree": 2}, "budget": 3000},
            "reconstruct": {"theorem": "4.2", "h0": 0.5}}"#,
    );
    for cmd in ["probe", "reconstruct"] {
        let a = r.exec(cmd, &p, &[]).stdout;
        let mut c = bin();
        c.current_dir(r.dir.path()).env("PG_SURF_THREADS", "3").arg(cmd).arg("--config").arg(&p);
        assert_eq!(a, c.output().unwrap().stdout, "{cmd}");
    }
}
