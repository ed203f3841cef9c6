//! CSV tables, a hashed JSON manifest, and verification of stored phases.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::config::ScenarioConfig;
use super::run::{Design, PhaseTable, ScenarioResult, Summary, SweepResult};

pub const MANIFEST: &str = "manifest.json";
pub const CONFIG: &str = "config.toml";
pub const PHASE_STATIONARY: &str = "phase_stationary.csv";
pub const PHASE_GS: &str = "phase_gs.csv";
pub const ON_AXIS: &str = "on_axis.csv";
pub const GS_TRACE: &str = "gs_trace.csv";
pub const PULSE_MESH: &str = "pulse_mesh.csv";
pub const SWEEP_TABLE: &str = "sweep.csv";

/// A rendered output file.
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    pub value: Value,
    pub hash: String,
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn phase_csv(t: &PhaseTable) -> Vec<u8> {
    csv_bytes(&["r_m", "phi_rad"], t.r_m.iter().zip(&t.phi_rad).map(|(r, p)| vec![num(*r), num(*p)]))
}

pub fn render_run(result: &ScenarioResult) -> Vec<Artifact> {
    let a = &result.on_axis;
    let mut out = vec![
        Artifact { name: CONFIG.into(), bytes: result.config.to_toml_string().into_bytes() },
        Artifact { name: PHASE_STATIONARY.into(), bytes: phase_csv(&result.phase_stationary) },
        Artifact { name: PHASE_GS.into(), bytes: phase_csv(&result.phase_gs) },
        Artifact {
            name: ON_AXIS.into(),
            bytes: csv_bytes(
                &["z_m", "target_intensity", "asymptotic_intensity", "stationary_phase_intensity", "gs_intensity"],
                (0..a.z_m.len()).map(|i| {
                    vec![
                        num(a.z_m[i]),
                        num(a.target_intensity[i]),
                        num(a.asymptotic_intensity[i]),
                        num(a.stationary_phase_intensity[i]),
                        num(a.gs_intensity[i]),
                    ]
                }),
            ),
        },
        Artifact {
            name: GS_TRACE.into(),
            bytes: csv_bytes(
                &["iteration", "error"],
                result.gs_errors.iter().enumerate().map(|(i, e)| vec![i.to_string(), num(*e)]),
            ),
        },
    ];
    if let Some(m) = &result.pulse_mesh {
        let rows = m
            .z_m
            .iter()
            .zip(&m.intensity)
            .flat_map(|(z, row)| m.t_fs.iter().zip(row).map(move |(t, v)| vec![num(*z), num(*t), num(*v)]));
        out.push(Artifact { name: PULSE_MESH.into(), bytes: csv_bytes(&["z_m", "t_fs", "intensity"], rows) });
    }
    out
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize")
}

/// Seal a manifest body: record file hashes and the hash of the body itself.
fn seal(mut body: serde_json::Map<String, Value>, files: &[Artifact]) -> Manifest {
    let hashes: BTreeMap<String, String> = files.iter().map(|a| (a.name.clone(), sha256(&a.bytes))).collect();
    body.insert("files".into(), to_json(&hashes));
    let canonical = serde_json::to_vec(&Value::Object(body.clone())).expect("json");
    let hash = sha256(&canonical);
    body.insert("hash".into(), Value::String(hash.clone()));
    Manifest { value: Value::Object(body), hash }
}

pub fn run_manifest(result: &ScenarioResult, files: &[Artifact]) -> Manifest {
    let body = json!({
        "kind": result.config.kind.name(),
        "config": to_json(&result.config),
        "summary": to_json(&result.summary),
        "bounds": to_json(&result.bounds),
    });
    let Value::Object(map) = body else { unreachable!() };
    seal(map, files)
}

fn write_all(dir: &Path, files: &[Artifact], manifest: &Manifest) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for a in files {
        let p = dir.join(&a.name);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&p, &a.bytes).map_err(|e| Error::io(&p, e))?;
    }
    let p = dir.join(MANIFEST);
    let text = serde_json::to_string_pretty(&manifest.value).expect("json");
    fs::write(&p, text + "\n").map_err(|e| Error::io(&p, e))
}

pub fn emit_run(result: &ScenarioResult, dir: &Path) -> Result<Manifest> {
    let files = render_run(result);
    let manifest = run_manifest(result, &files);
    write_all(dir, &files, &manifest)?;
    Ok(manifest)
}

fn point_dir(i: usize) -> String {
    format!("point_{i:02}")
}

/// Render a whole sweep: a summary table, the per-point outputs in
/// subdirectories, and one manifest covering all of them.
pub fn render_sweep(result: &SweepResult) -> (Vec<Artifact>, Manifest) {
    let rows = result.rows();
    let table = csv_bytes(
        &[
            result.param.as_str(),
            "i_stationary",
            "i_gs",
            "i_stationary_normalized",
            "i_gs_normalized",
            "beta",
            "master_lower",
            "thm2_lower",
            "thm2_lower_half_width",
            "bound_sound",
        ],
        rows.iter().map(|r| {
            vec![
                num(r.value),
                num(r.i_stationary),
                num(r.i_gs),
                num(r.i_stationary_normalized),
                num(r.i_gs_normalized),
                num(r.beta),
                num(r.master_lower),
                num(r.thm2_lower),
                num(r.thm2_lower_half_width),
                r.bound_sound.to_string(),
            ]
        }),
    );
    let mut files = vec![Artifact { name: SWEEP_TABLE.into(), bytes: table }];
    let mut points = Vec::new();
    for (i, p) in result.points.iter().enumerate() {
        let dir = point_dir(i);
        let inner = render_run(p);
        let m = run_manifest(p, &inner);
        points.push(json!({ "dir": dir, "hash": m.hash }));
        let text = serde_json::to_string_pretty(&m.value).expect("json") + "\n";
        files.extend(inner.into_iter().map(|a| Artifact { name: format!("{dir}/{}", a.name), bytes: a.bytes }));
        files.push(Artifact { name: format!("{dir}/{MANIFEST}"), bytes: text.into_bytes() });
    }
    let body = json!({
        "param": result.param,
        "values": result.values,
        "rows": to_json(&rows),
        "points": points,
    });
    let Value::Object(map) = body else { unreachable!() };
    let manifest = seal(map, &files);
    (files, manifest)
}

pub fn emit_sweep(result: &SweepResult, dir: &Path) -> Result<Manifest> {
    let (files, manifest) = render_sweep(result);
    write_all(dir, &files, &manifest)?;
    Ok(manifest)
}

pub fn read_manifest(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
}

pub fn read_summary(manifest: &Value) -> Result<Summary> {
    let s = manifest.get("summary").ok_or_else(|| Error::config("manifest has no summary"))?;
    serde_json::from_value(s.clone()).map_err(|e| Error::config(format!("manifest summary: {e}")))
}

pub fn read_phase_table(path: &Path) -> Result<PhaseTable> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["r_m", "phi_rad"] {
        return Err(Error::config(format!("{}: expected columns r_m,phi_rad", path.display())));
    }
    let mut t = PhaseTable { r_m: Vec::new(), phi_rad: Vec::new() };
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::config(format!("{}: malformed number on line {}", path.display(), t.r_m.len() + 2)))
        };
        let (r, p) = (parse(0)?, parse(1)?);
        t.r_m.push(r);
        t.phi_rad.push(p);
    }
    Ok(t)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::config(format!("{}: {other:?}", path.display())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub phase_file: PathBuf,
    pub stored: f64,
    pub recomputed: f64,
    pub relative_error: f64,
}

impl Verification {
    pub fn passes(&self, tol: f64) -> bool {
        self.relative_error <= tol
    }
}

/// Recompute `I` from a stored phase table and compare with the value in the
/// manifest next to it. Without an explicit configuration the stored one is used.
pub fn verify_phase(phase_path: &Path, config: Option<&ScenarioConfig>) -> Result<Verification> {
    let dir = phase_path.parent().unwrap_or(Path::new("."));
    let manifest = read_manifest(&dir.join(MANIFEST))?;
    let summary = read_summary(&manifest)?;
    let stored = match phase_path.file_name().and_then(|n| n.to_str()) {
        Some(PHASE_STATIONARY) => summary.i_stationary,
        Some(PHASE_GS) => summary.i_gs,
        _ => return Err(Error::config(format!("{} is not an emitted phase table", phase_path.display()))),
    };
    let config = match config {
        Some(c) => c.clone(),
        None => ScenarioConfig::load(&dir.join(CONFIG))?,
    };
    let design = Design::new(&config)?;
    let table = read_phase_table(phase_path)?;
    let radii = design.grid.radii();
    if table.r_m.len() != radii.len()
        || table.r_m.iter().zip(&radii).any(|(a, b)| (a - b).abs() > 1e-12 * b.abs())
    {
        return Err(Error::GridMismatch(format!(
            "{} does not match the configured s-grid ({} samples)",
            phase_path.display(),
            radii.len()
        )));
    }
    let recomputed = design.error(&table.phi_rad)?;
    let relative_error = ((recomputed - stored) / stored).abs();
    Ok(Verification { phase_file: phase_path.to_path_buf(), stored, recomputed, relative_error })
}
