//! Single-photon waveguide scattering off lossy excitonic site networks.
//!
//! A 1-D plasmonic waveguide is side-coupled to a few sites of an excitonic
//! network (the FMO complex by default). The crate computes transmission,
//! reflection and absorption spectra, applies structural defects to the
//! network, compares the resulting spectra against the intact baseline and
//! fits Fano lineshapes to individual features.
//!
//! The numerical core is generic over [`Scalar`] (`f32` / `f64`); the
//! aliases below fix it to `f64`, which is what file I/O and the CLI use.

pub mod config;
pub mod error;
pub mod extrema;
pub mod fano;
pub mod io;
pub mod linalg;
pub mod model;
pub mod preset;
pub mod scalar;
pub mod scattering;
pub mod scenario;
pub mod spectrum;

pub use config::{parse_config, RunConfig};
pub use error::{Error, Result};
pub use extrema::{count_dips, find_extrema, ExtremumKind, DEFAULT_PROMINENCE};
pub use fano::{fano_gradient, fit_fano, FanoParams};
pub use model::{validate_network, LossBreakdown, Port, Site, Violation};
pub use preset::{fmo_preset, HamiltonianData, PresetParams};
pub use scalar::Scalar;
pub use scattering::{effective_hamiltonian, solve_closed_form, solve_direct, Solver};
pub use scenario::{apply_defect, apply_scenario, run_scenario_suite, spectral_difference, Defect, SuiteOptions};
pub use spectrum::sweep_spectrum;

pub type SiteNetwork = model::SiteNetwork<f64>;
pub type WaveguideCoupling = model::WaveguideCoupling<f64>;
pub type ProbeGrid = model::ProbeGrid<f64>;
pub type ScatteringSolution = scattering::ScatteringSolution<f64>;
pub type Spectrum = spectrum::Spectrum<f64>;
pub type DefectScenario = scenario::DefectScenario<f64>;
pub type SpectralDiff = scenario::SpectralDiff<f64>;
pub type SuiteResult = scenario::SuiteResult<f64>;
pub type FanoFit = fano::FanoFit<f64>;
pub type Extremum = extrema::Extremum<f64>;
