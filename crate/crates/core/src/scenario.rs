//! Network defects, spectral comparison against a baseline, and scenario suites.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extrema::{find_extrema, Extremum, ExtremumKind, DEFAULT_PROMINENCE};
use crate::model::{Port, ProbeGrid, Site, SiteNetwork, WaveguideCoupling};
use crate::preset::apply_ohmic_losses;
use crate::scalar::Scalar;
use crate::scattering::Solver;
use crate::spectrum::{sweep_spectrum, Spectrum};

/// One transformation of the network or its probe.
#[derive(Debug, Clone, PartialEq)]
pub enum Defect<T> {
    /// Zero `J_ab` (and `J_ba`).
    InhibitCoupling(Site, Site),
    /// Delete the site entirely; higher site numbers shift down by one.
    RemoveSite(Site),
    /// Set port amplitudes (adding ports as needed) and re-derive Ohmic losses.
    SetPortAmplitudes(Vec<(Site, T)>),
}

impl<T: Scalar> fmt::Display for Defect<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::InhibitCoupling(a, b) => write!(f, "inhibit J{a},{b}"),
            Defect::RemoveSite(n) => write!(f, "remove site {n}"),
            Defect::SetPortAmplitudes(ports) => {
                let parts: Vec<String> = ports.iter().map(|(s, g)| format!("g{s}={g}")).collect();
                write!(f, "ports {}", parts.join(","))
            }
        }
    }
}

/// A labelled sequence of defects applied in order.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectScenario<T> {
    pub label: String,
    pub defects: Vec<Defect<T>>,
}

impl<T: Scalar> DefectScenario<T> {
    pub fn new(label: impl Into<String>, defects: Vec<Defect<T>>) -> Self {
        Self { label: label.into(), defects }
    }

    pub fn single(defect: Defect<T>) -> Self {
        Self { label: defect.to_string(), defects: vec![defect] }
    }

    pub fn inhibit(a: usize, b: usize) -> Self {
        Self::single(Defect::InhibitCoupling(Site(a), Site(b)))
    }

    pub fn remove(n: usize) -> Self {
        Self::single(Defect::RemoveSite(Site(n)))
    }
}

/// Applies one defect. Never mutates its inputs.
pub fn apply_defect<T: Scalar>(
    net: &SiteNetwork<T>,
    wg: &WaveguideCoupling<T>,
    defect: &Defect<T>,
) -> Result<(SiteNetwork<T>, WaveguideCoupling<T>)> {
    let n = net.n_sites();
    let check = |s: Site| {
        if s.is_valid_for(n) {
            Ok(())
        } else {
            Err(Error::InvalidScenario(format!("site {s} out of range for a {n}-site network")))
        }
    };
    let mut net = net.clone();
    let mut wg = wg.clone();
    match defect {
        Defect::InhibitCoupling(a, b) => {
            check(*a)?;
            check(*b)?;
            if a == b {
                return Err(Error::InvalidScenario(format!("cannot inhibit self-coupling of site {a}")));
            }
            net.coupling[a.index()][b.index()] = T::zero();
            net.coupling[b.index()][a.index()] = T::zero();
        }
        Defect::RemoveSite(s) => {
            check(*s)?;
            if wg.amplitude(*s).is_some() {
                return Err(Error::InvalidScenario(format!("site {s} is a waveguide port and cannot be removed")));
            }
            if n == 1 {
                return Err(Error::InvalidScenario("cannot remove the only site".into()));
            }
            let k = s.index();
            net.epsilon.remove(k);
            net.coupling.remove(k);
            net.coupling.iter_mut().for_each(|row| {
                row.remove(k);
            });
            net.loss.remove(k);
            net.loss_breakdown.remove(k);
            net.labels.remove(k);
            for p in &mut wg.ports {
                if p.site > *s {
                    p.site = Site(p.site.0 - 1);
                }
            }
        }
        Defect::SetPortAmplitudes(ports) => {
            for &(site, g) in ports {
                check(site)?;
                match wg.ports.iter_mut().find(|p| p.site == site) {
                    Some(p) => p.g = g,
                    None => wg.ports.push(Port { site, g }),
                }
            }
            wg.validate(n)?;
            apply_ohmic_losses(&mut net, &wg);
        }
    }
    Ok((net, wg))
}

pub fn apply_scenario<T: Scalar>(
    net: &SiteNetwork<T>,
    wg: &WaveguideCoupling<T>,
    scenario: &DefectScenario<T>,
) -> Result<(SiteNetwork<T>, WaveguideCoupling<T>)> {
    scenario.defects.iter().try_fold((net.clone(), wg.clone()), |(n, w), d| apply_defect(&n, &w, d))
}

/// How far a modified transmission spectrum departs from the baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDiff<T> {
    /// `sqrt(Σ ΔT² · h)`
    pub l2: T,
    pub l_inf: T,
    /// Trapezoidal integral of `|ΔT|`.
    pub area: T,
    /// Dip count of the modified spectrum minus that of the baseline.
    pub extrema_delta: i64,
    /// Max `|ΔR|`, reported only.
    pub reflection_l_inf: T,
    /// Max `|ΔA_total|`, reported only.
    pub absorption_l_inf: T,
}

pub fn spectral_difference<T: Scalar>(base: &Spectrum<T>, modified: &Spectrum<T>) -> Result<SpectralDiff<T>> {
    spectral_difference_with(base, modified, T::lit(DEFAULT_PROMINENCE))
}

pub fn spectral_difference_with<T: Scalar>(
    base: &Spectrum<T>,
    modified: &Spectrum<T>,
    prominence: T,
) -> Result<SpectralDiff<T>> {
    if base.grid != modified.grid {
        return Err(Error::GridMismatch(format!(
            "[{}, {}] x {} vs [{}, {}] x {}",
            base.grid.e_min(),
            base.grid.e_max(),
            base.grid.n_points(),
            modified.grid.e_min(),
            modified.grid.e_max(),
            modified.grid.n_points()
        )));
    }
    let h = base.grid.spacing();
    let dt: Vec<T> = base.transmission.iter().zip(&modified.transmission).map(|(a, b)| (*a - *b).abs()).collect();
    let l_inf_of = |a: &[T], b: &[T]| a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).fold(T::zero(), T::max);
    let l2 = (dt.iter().map(|d| *d * *d).sum::<T>() * h).sqrt();
    let area = dt.windows(2).map(|w| (w[0] + w[1]) * T::lit(0.5) * h).sum::<T>();
    let dips =
        |s: &Spectrum<T>| find_extrema(s, prominence).iter().filter(|e| e.kind == ExtremumKind::Dip).count() as i64;
    Ok(SpectralDiff {
        l2,
        l_inf: dt.iter().copied().fold(T::zero(), T::max),
        area,
        extrema_delta: dips(modified) - dips(base),
        reflection_l_inf: l_inf_of(&base.reflection, &modified.reflection),
        absorption_l_inf: l_inf_of(&base.absorption_total, &modified.absorption_total),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions<T> {
    pub solver: Solver,
    pub prominence: T,
}

impl<T: Scalar> Default for SuiteOptions<T> {
    fn default() -> Self {
        Self { solver: Solver::ClosedForm, prominence: T::lit(DEFAULT_PROMINENCE) }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioRun<T> {
    pub spectrum: Spectrum<T>,
    pub diff: SpectralDiff<T>,
    pub extrema: Vec<Extremum<T>>,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome<T> {
    pub label: String,
    /// A failed scenario keeps its error message; the rest of the suite still runs.
    pub result: std::result::Result<ScenarioRun<T>, String>,
}

#[derive(Debug, Clone)]
pub struct SuiteResult<T> {
    pub baseline: Spectrum<T>,
    pub baseline_extrema: Vec<Extremum<T>>,
    pub outcomes: Vec<ScenarioOutcome<T>>,
}

/// Baseline spectrum once, then every scenario against it, in input order.
pub fn run_scenario_suite<T: Scalar>(
    net: &SiteNetwork<T>,
    wg: &WaveguideCoupling<T>,
    grid: &ProbeGrid<T>,
    scenarios: &[DefectScenario<T>],
    opts: &SuiteOptions<T>,
) -> Result<SuiteResult<T>> {
    let baseline = sweep_spectrum(net, wg, grid, opts.solver)?;
    let baseline_extrema = find_extrema(&baseline, opts.prominence);
    let outcomes = scenarios
        .par_iter()
        .map(|sc| {
            let run = || -> Result<ScenarioRun<T>> {
                let (n2, w2) = apply_scenario(net, wg, sc)?;
                let spectrum = sweep_spectrum(&n2, &w2, grid, opts.solver)?;
                let diff = spectral_difference_with(&baseline, &spectrum, opts.prominence)?;
                let extrema = find_extrema(&spectrum, opts.prominence);
                Ok(ScenarioRun { spectrum, diff, extrema })
            };
            ScenarioOutcome { label: sc.label.clone(), result: run().map_err(|e| e.to_string()) }
        })
        .collect();
    Ok(SuiteResult { baseline, baseline_extrema, outcomes })
}
