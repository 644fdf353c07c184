//! Transmission / reflection / absorption spectra over a probe grid.

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{ProbeGrid, SiteNetwork, WaveguideCoupling};
use crate::scalar::Scalar;
use crate::scattering::{ScatteringProblem, Solver};

#[derive(Debug, Clone, PartialEq)]
pub struct PortMeta {
    pub site: usize,
    pub g: f64,
    /// Radiative width `2 g² / v_g`.
    pub width: f64,
}

/// Provenance recorded alongside every spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMeta {
    pub solver: Solver,
    pub network_hash: String,
    pub ports: Vec<PortMeta>,
    pub v_g: f64,
    pub reference_energy: f64,
}

impl SpectrumMeta {
    pub fn describe<T: Scalar>(net: &SiteNetwork<T>, wg: &WaveguideCoupling<T>, solver: Solver) -> Self {
        Self {
            solver,
            network_hash: network_hash(net),
            ports: wg
                .ports
                .iter()
                .map(|p| PortMeta { site: p.site.0, g: p.g.as_f64(), width: wg.width(p.g).as_f64() })
                .collect(),
            v_g: wg.v_g.as_f64(),
            reference_energy: net.reference_energy.as_f64(),
        }
    }

    pub fn amplitude(&self, site: usize) -> Option<f64> {
        self.ports.iter().find(|p| p.site == site).map(|p| p.g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub grid: ProbeGrid<T>,
    pub transmission: Vec<T>,
    pub reflection: Vec<T>,
    pub absorption_total: Vec<T>,
    pub absorption_sink: Vec<T>,
    pub absorption_dephasing: Vec<T>,
    pub absorption_ohmic: Vec<T>,
    pub meta: SpectrumMeta,
}

impl<T: Scalar> Spectrum<T> {
    pub fn energies(&self) -> Vec<T> {
        self.grid.points()
    }

    pub fn len(&self) -> usize {
        self.transmission.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transmission.is_empty()
    }
}

/// Evaluates `solver` at every grid point. Points are solved in parallel and
/// assembled in grid order, so the result matches a serial run bit for bit.
pub fn sweep_spectrum<T: Scalar>(
    net: &SiteNetwork<T>,
    wg: &WaveguideCoupling<T>,
    grid: &ProbeGrid<T>,
    solver: Solver,
) -> Result<Spectrum<T>> {
    let problem = ScatteringProblem::new(net, wg)?;
    let solutions = (0..grid.n_points())
        .into_par_iter()
        .map(|i| {
            let e = grid.point(i);
            problem.solve(e, solver).map_err(|err| match err {
                Error::Pole { energy } => Error::PoleAtGridPoint { index: i, energy },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let column = |f: &dyn Fn(&crate::scattering::ScatteringSolution<T>) -> T| solutions.iter().map(f).collect();
    Ok(Spectrum {
        grid: *grid,
        transmission: column(&|s| s.flux.transmitted),
        reflection: column(&|s| s.flux.reflected),
        absorption_total: column(&|s| s.flux.absorbed_total()),
        absorption_sink: column(&|s| s.flux.absorbed_by_channel.sink),
        absorption_dephasing: column(&|s| s.flux.absorbed_by_channel.dephasing),
        absorption_ohmic: column(&|s| s.flux.absorbed_by_channel.ohmic),
        meta: SpectrumMeta::describe(net, wg, solver),
    })
}

/// Short content hash of the network (energies, couplings, losses, reference).
pub fn network_hash<T: Scalar>(net: &SiteNetwork<T>) -> String {
    let mut h = Sha256::new();
    let mut put = |x: T| h.update(x.as_f64().to_bits().to_le_bytes());
    put(T::from_usize(net.n_sites()).unwrap());
    put(net.reference_energy);
    net.epsilon.iter().for_each(|&x| put(x));
    net.coupling.iter().flatten().for_each(|&x| put(x));
    for b in &net.loss_breakdown {
        put(b.dephasing);
        put(b.ohmic);
        put(b.sink);
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}
