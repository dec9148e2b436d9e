//! Fixed-format writers. Floats in CSV and OBJ use 17 significant digits;
//! JSON uses the shortest representation that round-trips.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use pgsurf::sampling::CurvatureReport;
use serde::Serialize;

use crate::CliError;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub const CSV_HEADER: &str = "u1,u2,x,y,z,K,H,epsilon,W,excluded";

pub fn curvature_csv(report: &CurvatureReport) -> String {
    let mut out = String::with_capacity(report.samples.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in &report.samples {
        let [x, y, z] = s.position;
        let cols = [s.u1, s.u2, x, y, z, s.k, s.h, s.epsilon, s.w].map(num);
        let _ = writeln!(out, "{},{}", cols.join(","), u8::from(s.excluded));
    }
    out
}

/// Vertices in grid order, then one quad per cell whose four corners are
/// all admissible. Indices are 1-based.
pub fn mesh_obj(report: &CurvatureReport) -> (String, usize) {
    let g = &report.grid;
    let mut out = String::new();
    let _ = writeln!(out, "# {} x {} grid, {} vertices", g.n1, g.n2, g.len());
    for s in &report.samples {
        let [x, y, z] = s.position.map(num);
        let _ = writeln!(out, "v {x} {y} {z}");
    }
    let mut faces = 0;
    for i in 0..g.n1 - 1 {
        for j in 0..g.n2 - 1 {
            let corners = [g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1), g.index(i, j + 1)];
            if corners.iter().all(|&c| !report.samples[c].excluded) {
                let [a, b, c, d] = corners.map(|c| c + 1);
                let _ = writeln!(out, "f {a} {b} {c} {d}");
                faces += 1;
            }
        }
    }
    (out, faces)
}

pub fn mesh_sidecar(report: &CurvatureReport) -> String {
    let mut out = String::from("vertex,u1,u2,K,H,epsilon,W,excluded\n");
    for (i, s) in report.samples.iter().enumerate() {
        let cols = [s.u1, s.u2, s.k, s.h, s.epsilon, s.w].map(num);
        let _ = writeln!(out, "{},{},{}", i + 1, cols.join(","), u8::from(s.excluded));
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes the JSON summary to its configured path, or stdout.
pub fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let text = json(value);
    match path {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
