//! CSV exports with fixed column schemas and JSON metadata sidecars.
//!
//! Reals are written with 17 significant digits (`{:.16e}`) so every value
//! re-parses to the same `f64`. Missing values are empty fields.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::convergence::ConvergenceRow;
use crate::error::{Error, Result};
use crate::experiment::ScanRow;
use crate::field::SpinorField;
use crate::texture::{BlochSample, TwistProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportKind {
    Wavefunction,
    Texture,
    Twist,
    Scan,
    Clicks,
    Convergence,
}

impl ExportKind {
    pub fn header(self) -> &'static str {
        match self {
            ExportKind::Wavefunction => "z,re_plus,im_plus,abs2_plus,re_minus,im_minus,abs2_minus",
            ExportKind::Texture => "z,s1,s2,s3,weight,reliable",
            ExportKind::Twist => "z,azimuth,polar",
            ExportKind::Scan => "z_center,passage_probability,s1,s2,s3,purity",
            ExportKind::Clicks => "z_center,axis,up,down",
            ExportKind::Convergence => "method,dt,dz,l2_error_vs_oracle",
        }
    }

    pub fn columns(self) -> usize {
        self.header().split(',').count()
    }
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_real(line: &mut String, x: f64) {
    if !line.is_empty() {
        line.push(',');
    }
    let _ = write!(line, "{x:.16e}");
}

fn push_opt(line: &mut String, x: Option<f64>) {
    match x {
        Some(v) => push_real(line, v),
        None => line.push(','),
    }
}

fn table(kind: ExportKind, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(kind.header());
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn check_finite(kind: ExportKind, values: impl IntoIterator<Item = f64>) -> Result<()> {
    if values.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(Error::CorruptState(format!("non-finite value in {kind:?} export")))
    }
}

pub fn wavefunction_csv(state: &SpinorField) -> Result<String> {
    let grid = state.grid();
    let rows: Vec<String> = (0..grid.len())
        .map(|k| {
            let (u, d) = (state.psi_plus()[k], state.psi_minus()[k]);
            let mut line = String::new();
            for v in [grid.z(k), u.re, u.im, u.norm_sqr(), d.re, d.im, d.norm_sqr()] {
                push_real(&mut line, v);
            }
            line
        })
        .collect();
    check_finite(
        ExportKind::Wavefunction,
        state.psi_plus().iter().chain(state.psi_minus()).flat_map(|c| [c.re, c.im]),
    )?;
    Ok(table(ExportKind::Wavefunction, rows))
}

pub fn texture_csv(samples: &[BlochSample]) -> Result<String> {
    check_finite(
        ExportKind::Texture,
        samples.iter().flat_map(|s| [s.z, s.s[0], s.s[1], s.s[2], s.weight]),
    )?;
    Ok(table(
        ExportKind::Texture,
        samples.iter().map(|s| {
            let mut line = String::new();
            for v in [s.z, s.s[0], s.s[1], s.s[2], s.weight] {
                push_real(&mut line, v);
            }
            line.push_str(if s.reliable { ",1" } else { ",0" });
            line
        }),
    ))
}

pub fn twist_csv(profile: &TwistProfile) -> Result<String> {
    check_finite(
        ExportKind::Twist,
        profile.z.iter().chain(&profile.azimuth).chain(&profile.polar).copied(),
    )?;
    Ok(table(
        ExportKind::Twist,
        (0..profile.len()).map(|k| {
            let mut line = String::new();
            for v in [profile.z[k], profile.azimuth[k], profile.polar[k]] {
                push_real(&mut line, v);
            }
            line
        }),
    ))
}

pub fn scan_csv(rows: &[ScanRow]) -> Result<String> {
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| a.z_center.total_cmp(&b.z_center));
    Ok(table(
        ExportKind::Scan,
        sorted.iter().map(|r| {
            let mut line = String::new();
            push_real(&mut line, r.z_center);
            push_opt(&mut line, r.passage_probability);
            for i in 0..3 {
                push_opt(&mut line, r.bloch.map(|b| b[i]));
            }
            push_opt(&mut line, r.purity);
            line
        }),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClickRow {
    pub z_center: f64,
    pub axis: &'static str,
    pub up: u64,
    pub down: u64,
}

pub fn clicks_csv(rows: &[ClickRow]) -> String {
    table(
        ExportKind::Clicks,
        rows.iter()
            .map(|r| format!("{},{},{},{}", fmt_real(r.z_center), r.axis, r.up, r.down)),
    )
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> Result<String> {
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| {
        a.method
            .as_str()
            .cmp(b.method.as_str())
            .then(a.dt.total_cmp(&b.dt))
    });
    check_finite(
        ExportKind::Convergence,
        sorted.iter().flat_map(|r| [r.dt, r.dz, r.l2_error]),
    )?;
    Ok(table(
        ExportKind::Convergence,
        sorted.iter().map(|r| {
            format!(
                "{},{},{},{}",
                r.method,
                fmt_real(r.dt),
                fmt_real(r.dz),
                fmt_real(r.l2_error)
            )
        }),
    ))
}

/// Parsed CSV: header names and rows of raw fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Column as reals; empty fields become `None`.
    pub fn reals(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let c = self
            .column(name)
            .ok_or_else(|| Error::Config(format!("missing column `{name}`")))?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let f = r[c].trim();
                if f.is_empty() {
                    return Ok(None);
                }
                f.parse::<f64>()
                    .map(Some)
                    .map_err(|e| Error::Config(format!("row {}: column `{name}`: {e}", i + 1)))
            })
            .collect()
    }
}

pub fn parse_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Config("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .enumerate()
        .map(|(i, l)| {
            let fields: Vec<String> = l.split(',').map(str::to_string).collect();
            if fields.len() != header.len() {
                return Err(Error::Config(format!(
                    "row {}: {} fields, expected {}",
                    i + 1,
                    fields.len(),
                    header.len()
                )));
            }
            Ok(fields)
        })
        .collect::<Result<_>>()?;
    Ok(Table { header, rows })
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata<'a, C: Serialize> {
    pub kind: ExportKind,
    pub columns: Vec<&'static str>,
    pub rows: usize,
    pub generator: &'static str,
    pub version: &'static str,
    pub time: f64,
    pub config: &'a C,
}

/// Path of the JSON sidecar for `csv_path`: `foo.csv` → `foo.meta.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

/// Writes `body` to `path` and its metadata sidecar next to it.
pub fn write_export<C: Serialize>(
    path: &Path,
    kind: ExportKind,
    body: &str,
    time: f64,
    config: &C,
) -> Result<Vec<PathBuf>> {
    fs::write(path, body)?;
    let meta = Metadata {
        kind,
        columns: kind.header().split(',').collect(),
        rows: body.lines().count().saturating_sub(1),
        generator: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        time,
        config,
    };
    let side = sidecar_path(path);
    let mut json = serde_json::to_string_pretty(&meta)?;
    json.push('\n');
    fs::write(&side, json)?;
    Ok(vec![path.to_path_buf(), side])
}
