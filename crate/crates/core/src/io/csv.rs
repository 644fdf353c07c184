//! Spectrum CSV: `#`-prefixed metadata lines, a fixed header, one row per grid point.
//!
//! ```text
//! # solver = closed_form
//! # network_hash = 3f0c9a...
//! # reference_energy_cm1 = 12000
//! # v_g = 1
//! # width_convention = Gamma_n = 2 g_n^2 / v_g
//! # g1 = 10
//! # Gamma1 = 200
//! E_cm1,T,R,A_total,A_sink,A_dephasing,A_ohmic
//! -7.0000000000000000e1,9.9...e-1,...
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::ProbeGrid;
use crate::scattering::Solver;
use crate::spectrum::{PortMeta, Spectrum, SpectrumMeta};
use crate::FanoFit;

pub const SPECTRUM_HEADER: &str = "E_cm1,T,R,A_total,A_sink,A_dephasing,A_ohmic";
pub const FANO_HEADER: &str = "label,q,e_res,gamma_w,t_bg,residual,converged";
pub const WIDTH_CONVENTION: &str = "Gamma_n = 2 g_n^2 / v_g";

/// 17 significant digits: every f64 survives a write/read cycle unchanged.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_spectrum_csv(spec: &Spectrum<f64>) -> String {
    let m = &spec.meta;
    let mut out = String::new();
    let _ = writeln!(out, "# solver = {}", m.solver);
    let _ = writeln!(out, "# network_hash = {}", m.network_hash);
    let _ = writeln!(out, "# reference_energy_cm1 = {}", m.reference_energy);
    let _ = writeln!(out, "# v_g = {}", m.v_g);
    let _ = writeln!(out, "# width_convention = {WIDTH_CONVENTION}");
    for p in &m.ports {
        let _ = writeln!(out, "# g{} = {}", p.site, p.g);
        let _ = writeln!(out, "# Gamma{} = {}", p.site, p.width);
    }
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for (i, e) in spec.energies().into_iter().enumerate() {
        let row = [
            e,
            spec.transmission[i],
            spec.reflection[i],
            spec.absorption_total[i],
            spec.absorption_sink[i],
            spec.absorption_dephasing[i],
            spec.absorption_ohmic[i],
        ];
        let cells: Vec<String> = row.iter().map(|&x| num(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_spectrum_csv(path: &Path, spec: &Spectrum<f64>) -> Result<()> {
    fs::write(path, format_spectrum_csv(spec)).map_err(|e| Error::io(path, e))
}

pub fn read_spectrum_csv(path: &Path) -> Result<Spectrum<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_spectrum_csv(&text).map_err(|e| match e {
        Error::MalformedCsv { path: None, reason } => Error::MalformedCsv { path: Some(path.to_path_buf()), reason },
        other => other,
    })
}

pub fn parse_spectrum_csv(text: &str) -> Result<Spectrum<f64>> {
    let bad = |reason: String| Error::MalformedCsv { path: None, reason };
    let meta = parse_meta(text).map_err(bad)?;

    let mut reader = ::csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != SPECTRUM_HEADER {
        return Err(bad(format!("expected header {SPECTRUM_HEADER:?}")));
    }
    let mut cols: [Vec<f64>; 7] = Default::default();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        for (k, col) in cols.iter_mut().enumerate() {
            let cell = rec.get(k).ok_or_else(|| bad(format!("row {} has {} fields", row + 1, rec.len())))?;
            let v: f64 = cell.trim().parse().map_err(|_| bad(format!("row {}: bad number {cell:?}", row + 1)))?;
            col.push(v);
        }
    }
    let [energies, t, r, a, sink, deph, ohmic] = cols;
    let n = energies.len();
    if n < 2 {
        return Err(bad(format!("need at least 2 rows, found {n}")));
    }
    let grid = ProbeGrid::new(energies[0], energies[n - 1], n).map_err(|e| bad(e.to_string()))?;
    let tol = 1e-9 * grid.spacing();
    if let Some(i) = (0..n).find(|&i| (grid.point(i) - energies[i]).abs() > tol) {
        return Err(bad(format!("energy grid is not uniform at row {}", i + 1)));
    }
    Ok(Spectrum {
        grid,
        transmission: t,
        reflection: r,
        absorption_total: a,
        absorption_sink: sink,
        absorption_dephasing: deph,
        absorption_ohmic: ohmic,
        meta,
    })
}

fn parse_meta(text: &str) -> std::result::Result<SpectrumMeta, String> {
    let mut meta = SpectrumMeta {
        solver: Solver::ClosedForm,
        network_hash: String::new(),
        ports: Vec::new(),
        v_g: 1.0,
        reference_energy: 0.0,
    };
    let float = |k: &str, v: &str| v.parse::<f64>().map_err(|_| format!("metadata {k}: bad number {v:?}"));
    for line in text.lines().filter_map(|l| l.strip_prefix('#')) {
        let Some((key, value)) = line.split_once('=') else { continue };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "solver" => meta.solver = value.parse().map_err(|e: Error| e.to_string())?,
            "network_hash" => meta.network_hash = value.to_string(),
            "reference_energy_cm1" => meta.reference_energy = float(key, value)?,
            "v_g" => meta.v_g = float(key, value)?,
            _ => {
                if let Some(site) = key.strip_prefix('g').and_then(|s| s.parse::<usize>().ok()) {
                    meta.ports.push(PortMeta { site, g: float(key, value)?, width: f64::NAN });
                } else if let Some(site) = key.strip_prefix("Gamma").and_then(|s| s.parse::<usize>().ok()) {
                    let w = float(key, value)?;
                    if let Some(p) = meta.ports.iter_mut().find(|p| p.site == site) {
                        p.width = w;
                    }
                }
            }
        }
    }
    Ok(meta)
}

pub fn format_fano_csv(rows: &[(String, FanoFit)]) -> String {
    let mut out = String::from(FANO_HEADER);
    out.push('\n');
    for (label, f) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(label),
            num(f.q),
            num(f.e_res),
            num(f.gamma_w),
            num(f.t_bg),
            num(f.residual),
            f.converged
        );
    }
    out
}

pub fn write_fano_csv(path: &Path, rows: &[(String, FanoFit)]) -> Result<()> {
    fs::write(path, format_fano_csv(rows)).map_err(|e| Error::io(path, e))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
