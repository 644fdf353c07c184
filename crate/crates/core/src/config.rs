//! Run configuration read from TOML. Unknown keys are rejected.
//!
//! ```toml
//! [network]
//! source = "preset"          # or "file", together with `path`
//! gamma_dp = 77.0
//! gamma_s = 5.3
//! ohmic_fraction = 0.05
//! sink_site = 3
//!
//! [waveguide]
//! g1 = 10.0
//! g6 = 0.1
//! v_g = 1.0
//!
//! [grid]                     # optional; default spans the site energies ±300
//! e_min = -70.0
//! e_max = 940.0
//! n_points = 2001
//!
//! [output]
//! dir = "out"
//! emit_svg = true
//!
//! [analysis]
//! prominence = 0.01
//! solver = "closed_form"
//!
//! [[scenario]]
//! label = "inhibit J1,2"     # optional
//! steps = [{ inhibit = [1, 2] }]
//!
//! [[scenario]]
//! steps = [{ remove = 5 }, { set_ports = [[1, 10.0], [6, 0.1]] }]
//!
//! [[fano_window]]
//! label = "sharp"
//! lo = 450.0
//! hi = 464.0
//! ```
//!
//! Relative paths are resolved against the directory holding the config file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::io::report::FitWindow;
use crate::model::Site;
use crate::preset::{HamiltonianData, PresetParams};
use crate::scattering::Solver;
use crate::scenario::Defect;
use crate::{DefectScenario, ProbeGrid, SiteNetwork, WaveguideCoupling, DEFAULT_PROMINENCE};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    network: RawNetwork,
    #[serde(default)]
    waveguide: RawWaveguide,
    grid: Option<RawGrid>,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    analysis: RawAnalysis,
    #[serde(default)]
    scenario: Vec<RawScenario>,
    #[serde(default)]
    fano_window: Vec<RawWindow>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    source: String,
    path: Option<PathBuf>,
    gamma_dp: Option<f64>,
    gamma_s: Option<f64>,
    ohmic_fraction: Option<f64>,
    sink_site: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWaveguide {
    g1: Option<f64>,
    g6: Option<f64>,
    v_g: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    e_min: f64,
    e_max: f64,
    n_points: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    #[serde(default)]
    emit_svg: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalysis {
    prominence: Option<f64>,
    solver: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    label: Option<String>,
    steps: Vec<RawStep>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawStep {
    Inhibit([usize; 2]),
    Remove(usize),
    SetPorts(Vec<(usize, f64)>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    label: Option<String>,
    lo: f64,
    hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSource {
    Preset,
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
}

/// A validated run: the network it builds passes model validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: NetworkSource,
    pub params: PresetParams<f64>,
    pub sink_site: Site,
    pub grid: Option<GridSpec>,
    pub scenarios: Vec<DefectScenario>,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    pub prominence: f64,
    pub solver: Solver,
    pub fano_windows: Vec<FitWindow>,
}

impl RunConfig {
    pub fn coupling_ratio(&self) -> f64 {
        self.params.g1 / self.params.g6
    }

    pub fn hamiltonian(&self) -> Result<HamiltonianData> {
        match &self.source {
            NetworkSource::Preset => Ok(HamiltonianData::bundled()),
            NetworkSource::File(p) => HamiltonianData::from_file(p),
        }
    }

    pub fn build(&self) -> Result<(SiteNetwork, WaveguideCoupling)> {
        let mut recipe = self.params.recipe();
        recipe.sink_site = self.sink_site;
        recipe.build(&self.hamiltonian()?)
    }

    pub fn probe_grid(&self, net: &SiteNetwork) -> Result<ProbeGrid> {
        match self.grid {
            Some(g) => ProbeGrid::new(g.e_min, g.e_max, g.n_points),
            None => ProbeGrid::default_for(net),
        }
    }
}

fn semantic(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key}: {msg}"))
}

fn non_negative(key: &str, v: Option<f64>, default: f64) -> Result<f64> {
    let v = v.unwrap_or(default);
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(semantic(key, format!("must be finite and non-negative, got {v}")))
    }
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_config_str(&text, base).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Parses config text; relative paths are resolved against `base_dir`.
pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base_dir.join(p) };

    let source = match raw.network.source.as_str() {
        "preset" => {
            if raw.network.path.is_some() {
                return Err(semantic("network.path", "only allowed with source = \"file\""));
            }
            NetworkSource::Preset
        }
        "file" => {
            let p = raw
                .network
                .path
                .as_deref()
                .ok_or_else(|| semantic("network.path", "required with source = \"file\""))?;
            let p = resolve(p);
            if !p.is_file() {
                return Err(semantic("network.path", format!("{} does not exist", p.display())));
            }
            NetworkSource::File(p)
        }
        other => return Err(semantic("network.source", format!("expected \"preset\" or \"file\", got {other:?}"))),
    };

    let defaults = PresetParams::<f64>::default();
    let params = PresetParams {
        g1: non_negative("waveguide.g1", raw.waveguide.g1, defaults.g1)?,
        g6: non_negative("waveguide.g6", raw.waveguide.g6, defaults.g6)?,
        gamma_dp: non_negative("network.gamma_dp", raw.network.gamma_dp, defaults.gamma_dp)?,
        gamma_s: non_negative("network.gamma_s", raw.network.gamma_s, defaults.gamma_s)?,
        ohmic_fraction: non_negative("network.ohmic_fraction", raw.network.ohmic_fraction, defaults.ohmic_fraction)?,
        v_g: raw.waveguide.v_g.unwrap_or(defaults.v_g),
    };
    if !(params.v_g.is_finite() && params.v_g > 0.0) {
        return Err(semantic("waveguide.v_g", format!("must be finite and positive, got {}", params.v_g)));
    }

    let grid = match raw.grid {
        Some(g) => {
            ProbeGrid::new(g.e_min, g.e_max, g.n_points).map_err(|e| semantic("grid", e))?;
            Some(GridSpec { e_min: g.e_min, e_max: g.e_max, n_points: g.n_points })
        }
        None => None,
    };

    let prominence = raw.analysis.prominence.unwrap_or(DEFAULT_PROMINENCE);
    if !(prominence.is_finite() && prominence > 0.0) {
        return Err(semantic("analysis.prominence", format!("must be finite and positive, got {prominence}")));
    }
    let solver = match raw.analysis.solver {
        Some(s) => s.parse().map_err(|e| semantic("analysis.solver", e))?,
        None => Solver::ClosedForm,
    };

    let mut scenarios = Vec::with_capacity(raw.scenario.len());
    for (i, sc) in raw.scenario.into_iter().enumerate() {
        if sc.steps.is_empty() {
            return Err(semantic(&format!("scenario[{i}].steps"), "must not be empty"));
        }
        let defects: Vec<Defect<f64>> = sc
            .steps
            .into_iter()
            .map(|s| match s {
                RawStep::Inhibit([a, b]) => Defect::InhibitCoupling(Site(a), Site(b)),
                RawStep::Remove(n) => Defect::RemoveSite(Site(n)),
                RawStep::SetPorts(ps) => Defect::SetPortAmplitudes(ps.into_iter().map(|(s, g)| (Site(s), g)).collect()),
            })
            .collect();
        scenarios.push(match sc.label {
            Some(label) => DefectScenario::new(label, defects),
            None => {
                let label = defects.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ");
                DefectScenario::new(label, defects)
            }
        });
    }

    let mut fano_windows = Vec::with_capacity(raw.fano_window.len());
    for (i, w) in raw.fano_window.into_iter().enumerate() {
        if !(w.lo.is_finite() && w.hi.is_finite() && w.lo < w.hi) {
            return Err(semantic(
                &format!("fano_window[{i}]"),
                format!("need finite lo < hi, got [{}, {}]", w.lo, w.hi),
            ));
        }
        let label = w.label.unwrap_or_else(|| format!("{}-{}", w.lo, w.hi));
        fano_windows.push(FitWindow { label, lo: w.lo, hi: w.hi });
    }

    let cfg = RunConfig {
        source,
        params,
        sink_site: Site(raw.network.sink_site.unwrap_or(3)),
        grid,
        scenarios,
        output_dir: resolve(raw.output.dir.as_deref().unwrap_or(Path::new("out"))),
        emit_svg: raw.output.emit_svg,
        prominence,
        solver,
        fano_windows,
    };
    let (net, wg) = cfg.build().map_err(|e| semantic("network", e))?;
    if cfg.grid.is_none() {
        cfg.probe_grid(&net).map_err(|e| semantic("grid", e))?;
    }
    for (i, sc) in cfg.scenarios.iter().enumerate() {
        crate::apply_scenario(&net, &wg, sc).map_err(|e| semantic(&format!("scenario[{i}]"), e))?;
    }
    Ok(cfg)
}
