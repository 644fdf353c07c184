//! Writes a scenario suite to disk and describes every emitted file in `report.json`.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extrema::Extremum;
use crate::fano::fit_fano;
use crate::io::csv::{write_fano_csv, write_spectrum_csv, WIDTH_CONVENTION};
use crate::io::svg::render_overlay;
use crate::scenario::SuiteResult;
use crate::{FanoFit, Spectrum};

pub const REPORT_FILE: &str = "report.json";

/// A named energy window for Fano fitting, cm⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct FitWindow {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ExtremumRow {
    pub kind: &'static str,
    pub energy_cm1: f64,
    pub transmission: f64,
    pub prominence: f64,
}

impl From<&Extremum<f64>> for ExtremumRow {
    fn from(e: &Extremum<f64>) -> Self {
        Self { kind: e.kind.as_str(), energy_cm1: e.energy, transmission: e.value, prominence: e.prominence }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GridInfo {
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BaselineEntry {
    pub csv: String,
    pub network_hash: String,
    pub dip_count: usize,
    pub extrema: Vec<ExtremumRow>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DiffEntry {
    pub l2: f64,
    pub l_inf: f64,
    pub area: f64,
    pub extrema_delta: i64,
    pub reflection_l_inf: f64,
    pub absorption_l_inf: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScenarioEntry {
    pub label: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<DiffEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dip_count: Option<usize>,
    pub extrema: Vec<ExtremumRow>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub solver: String,
    pub width_convention: &'static str,
    pub reference_energy_cm1: f64,
    pub prominence: f64,
    pub grid: GridInfo,
    pub baseline: BaselineEntry,
    pub scenarios: Vec<ScenarioEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fano_fits_csv: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fano_errors: Vec<String>,
}

impl Report {
    /// Every file the report points at, in report order.
    pub fn referenced_files(&self) -> Vec<&str> {
        let mut out = vec![self.baseline.csv.as_str()];
        for s in &self.scenarios {
            out.extend(s.csv.as_deref());
            out.extend(s.svg.as_deref());
        }
        out.extend(self.fano_fits_csv.as_deref());
        out
    }
}

/// File-name stem for a scenario: position plus a lowercase slug of its label.
pub fn scenario_stem(index: usize, label: &str) -> String {
    let mut slug = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            slug.push(c.to_ascii_lowercase());
        } else if !slug.ends_with('-') {
            slug.push('-');
        }
    }
    format!("{:02}_{}", index + 1, slug.trim_matches('-'))
}

fn fit_rows(
    prefix: &str,
    spec: &Spectrum,
    windows: &[FitWindow],
    rows: &mut Vec<(String, FanoFit)>,
    errors: &mut Vec<String>,
) {
    for w in windows {
        let label = format!("{prefix}/{}", w.label);
        match fit_fano(spec, (w.lo, w.hi), None) {
            Ok(fit) => rows.push((label, fit)),
            Err(e) => errors.push(format!("{label}: {e}")),
        }
    }
}

/// Writes baseline and scenario CSVs, optional overlay SVGs, Fano fits for
/// `windows`, and `report.json` into `dir`.
pub fn write_suite(
    dir: &Path,
    suite: &SuiteResult<f64>,
    prominence: f64,
    windows: &[FitWindow],
    emit_svg: bool,
) -> Result<Report> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let base = &suite.baseline;
    let baseline_csv = "baseline.csv".to_string();
    write_spectrum_csv(&dir.join(&baseline_csv), base)?;

    let mut fano_rows = Vec::new();
    let mut fano_errors = Vec::new();
    fit_rows("baseline", base, windows, &mut fano_rows, &mut fano_errors);

    let mut scenarios = Vec::new();
    for (i, outcome) in suite.outcomes.iter().enumerate() {
        let entry = match &outcome.result {
            Err(msg) => ScenarioEntry {
                label: outcome.label.clone(),
                status: "error",
                error: Some(msg.clone()),
                csv: None,
                svg: None,
                diff: None,
                dip_count: None,
                extrema: Vec::new(),
            },
            Ok(run) => {
                let stem = scenario_stem(i, &outcome.label);
                let csv = format!("{stem}.csv");
                write_spectrum_csv(&dir.join(&csv), &run.spectrum)?;
                let svg = if emit_svg {
                    let name = format!("{stem}.svg");
                    let body = render_overlay(&outcome.label, base, Some((&run.spectrum, &outcome.label)));
                    fs::write(dir.join(&name), body).map_err(|e| Error::io(dir.join(&name), e))?;
                    Some(name)
                } else {
                    None
                };
                fit_rows(&outcome.label, &run.spectrum, windows, &mut fano_rows, &mut fano_errors);
                let d = run.diff;
                ScenarioEntry {
                    label: outcome.label.clone(),
                    status: "ok",
                    error: None,
                    csv: Some(csv),
                    svg,
                    diff: Some(DiffEntry {
                        l2: d.l2,
                        l_inf: d.l_inf,
                        area: d.area,
                        extrema_delta: d.extrema_delta,
                        reflection_l_inf: d.reflection_l_inf,
                        absorption_l_inf: d.absorption_l_inf,
                    }),
                    dip_count: Some(run.extrema.iter().filter(|e| e.kind == crate::ExtremumKind::Dip).count()),
                    extrema: run.extrema.iter().map(ExtremumRow::from).collect(),
                }
            }
        };
        scenarios.push(entry);
    }

    let fano_fits_csv = if windows.is_empty() {
        None
    } else {
        let name = "fano_fits.csv".to_string();
        write_fano_csv(&dir.join(&name), &fano_rows)?;
        Some(name)
    };

    let report = Report {
        solver: base.meta.solver.to_string(),
        width_convention: WIDTH_CONVENTION,
        reference_energy_cm1: base.meta.reference_energy,
        prominence,
        grid: GridInfo { e_min: base.grid.e_min(), e_max: base.grid.e_max(), n_points: base.grid.n_points() },
        baseline: BaselineEntry {
            csv: baseline_csv,
            network_hash: base.meta.network_hash.clone(),
            dip_count: suite.baseline_extrema.iter().filter(|e| e.kind == crate::ExtremumKind::Dip).count(),
            extrema: suite.baseline_extrema.iter().map(ExtremumRow::from).collect(),
        },
        scenarios,
        fano_fits_csv,
        fano_errors,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let path = dir.join(REPORT_FILE);
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProbeGrid;
    use crate::preset::{fmo_preset, PresetParams};
    use crate::scenario::{run_scenario_suite, DefectScenario, SuiteOptions};
    use std::collections::BTreeSet;

    #[test]
    fn stems_are_unique_and_clean() {
        assert_eq!(scenario_stem(0, "inhibit J1,2"), "01_inhibit-j1-2");
        assert_eq!(scenario_stem(11, "  remove site 5!"), "12_remove-site-5");
    }

    #[test]
    fn every_emitted_file_referenced_once() {
        let (net, wg) = fmo_preset(&PresetParams::default()).unwrap();
        let grid = ProbeGrid::new(100.0, 800.0, 281).unwrap();
        let scenarios = vec![DefectScenario::inhibit(1, 2), DefectScenario::remove(6), DefectScenario::remove(5)];
        let suite = run_scenario_suite(&net, &wg, &grid, &scenarios, &SuiteOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let windows = vec![FitWindow { label: "mid".into(), lo: 430.0, hi: 480.0 }];
        let report = write_suite(dir.path(), &suite, 0.01, &windows, true).unwrap();

        let on_disk: BTreeSet<String> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n != REPORT_FILE)
            .collect();
        let refs = report.referenced_files();
        let unique: BTreeSet<String> = refs.iter().map(|s| s.to_string()).collect();
        assert_eq!(refs.len(), unique.len());
        assert_eq!(unique, on_disk);
        assert_eq!(report.scenarios[1].status, "error");
        assert_eq!(report.scenarios.len(), 3);

        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(REPORT_FILE)).unwrap()).unwrap();
        assert_eq!(json["scenarios"][0]["label"], "inhibit J1,2");
        assert!(json["scenarios"][0]["diff"]["l_inf"].as_f64().unwrap() > 0.0);
    }
}
