//! File formats: JSON helpers, coefficient panels (CSV with JSON sidecar, or
//! a compact binary layout) and statistic-surface export.
//!
//! Binary panel layout, all integers and reals little-endian:
//!
//! | offset | size | content                                   |
//! |--------|------|-------------------------------------------|
//! | 0      | 8    | magic `SPHCPNL\0`                         |
//! | 8      | 4    | format version, `u32` = 1                 |
//! | 12     | 4    | `lmax`, `u32`                             |
//! | 16     | 8    | `n_times`, `u64`                          |
//! | 24     | 8·K  | `K = (lmax+1)² · n_times` `f64` values    |
//!
//! Values are harmonic-major: index `(l² + l + m) · n_times + (t - 1)`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cusum::{sup_statistic, StatisticSurface};
use crate::error::{Error, Result};
use crate::fields::MeanScenario;
use crate::harmonics::{harmonic_count, harmonic_index, CoefficientPanel};

pub const PANEL_MAGIC: &[u8; 8] = b"SPHCPNL\0";
pub const PANEL_FORMAT_VERSION: u32 = 1;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Schema {
        context: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Sidecar metadata stored next to every panel file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelMeta {
    pub lmax: usize,
    pub n_times: usize,
    pub seed: Option<u64>,
    pub scenario: Option<MeanScenario>,
}

impl PanelMeta {
    pub fn for_panel(panel: &CoefficientPanel) -> Self {
        PanelMeta {
            lmax: panel.lmax(),
            n_times: panel.n_times(),
            seed: None,
            scenario: None,
        }
    }
}

/// `panel.csv` ↦ `panel.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn is_binary(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("bin") | Some("scp"))
}

/// Write a panel (CSV unless the extension is `.bin`/`.scp`) plus its sidecar.
pub fn write_panel(path: &Path, panel: &CoefficientPanel, meta: &PanelMeta) -> Result<()> {
    if is_binary(path) {
        write_panel_binary(path, panel)?;
    } else {
        write_panel_csv(path, panel)?;
    }
    write_json(&sidecar_path(path), meta)
}

/// Read a panel written by [`write_panel`]; the sidecar is optional for CSV.
pub fn read_panel(path: &Path) -> Result<(CoefficientPanel, Option<PanelMeta>)> {
    let side = sidecar_path(path);
    let meta: Option<PanelMeta> = if side.exists() && side != path {
        Some(read_json(&side)?)
    } else {
        None
    };
    let panel = if is_binary(path) {
        read_panel_binary(path)?
    } else {
        read_panel_csv(path, meta.as_ref().map(|m| (m.lmax, m.n_times)))?
    };
    if let Some(m) = &meta {
        if (m.lmax, m.n_times) != (panel.lmax(), panel.n_times()) {
            return Err(Error::Schema {
                context: side.display().to_string(),
                message: format!(
                    "sidecar declares lmax {} / n_times {}, data has {} / {}",
                    m.lmax,
                    m.n_times,
                    panel.lmax(),
                    panel.n_times()
                ),
            });
        }
    }
    Ok((panel, meta))
}

/// CSV with header `ell,m,t,value`, one row per coefficient, `t` one-based.
pub fn write_panel_csv(path: &Path, panel: &CoefficientPanel) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let err = |e| Error::io(path, e);
    writeln!(w, "ell,m,t,value").map_err(err)?;
    for l in 0..=panel.lmax() {
        for m in -(l as i32)..=(l as i32) {
            for (t, v) in panel.series(l, m).iter().enumerate() {
                writeln!(w, "{l},{m},{},{v:?}", t + 1).map_err(err)?;
            }
        }
    }
    w.flush().map_err(err)
}

#[derive(Debug, Deserialize)]
struct PanelRow {
    ell: usize,
    m: i32,
    t: usize,
    value: f64,
}

/// Parse a panel CSV. Without `shape`, `lmax` and `n_times` are the largest
/// degree and time index present. Every coefficient must appear exactly once.
pub fn read_panel_csv(path: &Path, shape: Option<(usize, usize)>) -> Result<CoefficientPanel> {
    let schema = |message: String| Error::Schema {
        context: path.display().to_string(),
        message,
    };
    let mut reader = csv::Reader::from_reader(File::open(path).map_err(|e| Error::io(path, e))?);
    let headers = reader.headers()?.clone();
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["ell", "m", "t", "value"] {
        return Err(schema(format!("expected header ell,m,t,value, found {:?}", headers)));
    }
    let rows: Vec<PanelRow> = reader.deserialize().collect::<std::result::Result<_, _>>()?;
    let (lmax, n_times) = match shape {
        Some(s) => s,
        None => (
            rows.iter().map(|r| r.ell).max().unwrap_or(0),
            rows.iter().map(|r| r.t).max().unwrap_or(0),
        ),
    };
    if n_times == 0 {
        return Err(schema("panel has no time steps".into()));
    }
    let mut values = vec![f64::NAN; harmonic_count(lmax) * n_times];
    let mut seen = vec![false; values.len()];
    for r in &rows {
        if r.ell > lmax || r.m.unsigned_abs() as usize > r.ell || r.t == 0 || r.t > n_times {
            return Err(schema(format!(
                "row (ell={}, m={}, t={}) out of range",
                r.ell, r.m, r.t
            )));
        }
        let idx = harmonic_index(r.ell, r.m) * n_times + r.t - 1;
        if seen[idx] {
            return Err(schema(format!("duplicate row (ell={}, m={}, t={})", r.ell, r.m, r.t)));
        }
        seen[idx] = true;
        values[idx] = r.value;
    }
    if let Some(idx) = seen.iter().position(|s| !s) {
        let h = idx / n_times;
        let ell = (h as f64).sqrt() as usize;
        let m = h as i64 - (ell * ell + ell) as i64;
        return Err(schema(format!(
            "missing row (ell={ell}, m={m}, t={})",
            idx % n_times + 1
        )));
    }
    CoefficientPanel::from_values(lmax, n_times, values).map_err(|e| schema(e.to_string()))
}

pub fn write_panel_binary(path: &Path, panel: &CoefficientPanel) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let err = |e| Error::io(path, e);
    let lmax = u32::try_from(panel.lmax()).map_err(|_| Error::invalid("lmax does not fit in u32"))?;
    w.write_all(PANEL_MAGIC).map_err(err)?;
    w.write_all(&PANEL_FORMAT_VERSION.to_le_bytes()).map_err(err)?;
    w.write_all(&lmax.to_le_bytes()).map_err(err)?;
    w.write_all(&(panel.n_times() as u64).to_le_bytes()).map_err(err)?;
    for v in panel.values() {
        w.write_all(&v.to_le_bytes()).map_err(err)?;
    }
    w.flush().map_err(err)
}

pub fn read_panel_binary(path: &Path) -> Result<CoefficientPanel> {
    let schema = |message: String| Error::Schema {
        context: path.display().to_string(),
        message,
    };
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    if bytes.len() < 24 || &bytes[..8] != PANEL_MAGIC {
        return Err(schema("not a binary panel file (bad magic)".into()));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != PANEL_FORMAT_VERSION {
        return Err(schema(format!("unsupported binary panel version {version}")));
    }
    let lmax = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let n_times = u64::from_le_bytes(bytes[16..24].try_into().unwrap()) as usize;
    let count = harmonic_count(lmax)
        .checked_mul(n_times)
        .ok_or_else(|| schema("dimensions overflow".into()))?;
    let body = &bytes[24..];
    if body.len() != count * 8 {
        return Err(schema(format!(
            "expected {} value bytes, found {}",
            count * 8,
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    CoefficientPanel::from_values(lmax, n_times, values).map_err(|e| schema(e.to_string()))
}

/// Metadata written next to an exported surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceExportMeta {
    #[serde(rename = "N")]
    pub n_times: usize,
    #[serde(rename = "L")]
    pub lmax: usize,
    pub lmin: usize,
    pub grid_r: usize,
    pub grid_s: usize,
    pub sup: f64,
}

/// CSV matrix, one row per `r_j`, one column per `s_k`, plus a JSON sidecar.
pub fn write_surface(path: &Path, surface: &StatisticSurface) -> Result<SurfaceExportMeta> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let err = |e| Error::io(path, e);
    for j in 0..=surface.grid_r {
        let line = surface
            .row(j)
            .iter()
            .map(|v| format!("{v:?}"))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(w, "{line}").map_err(err)?;
    }
    w.flush().map_err(err)?;
    let meta = SurfaceExportMeta {
        n_times: surface.meta.n_times,
        lmax: surface.meta.lmax,
        lmin: surface.meta.lmin,
        grid_r: surface.grid_r,
        grid_s: surface.grid_s,
        sup: sup_statistic(surface),
    };
    write_json(&sidecar_path(path), &meta)?;
    Ok(meta)
}
