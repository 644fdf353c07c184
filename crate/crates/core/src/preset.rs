//! Bundled FMO Hamiltonian and the loss recipe that turns it into a probed network.
//!
//! The data file is TOML with a single `[hamiltonian]` table:
//!
//! ```toml
//! [hamiltonian]
//! units = "cm-1"
//! reference_energy = 12000.0
//! source = "citation"
//! labels = ["site 1", "site 2"]          # optional
//! epsilon = [445.0, 450.0]               # offsets from reference_energy
//! coupling_upper = [-104.1]              # upper triangle, row by row
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{LossBreakdown, Port, Site, SiteNetwork, WaveguideCoupling};
use crate::scalar::Scalar;

pub const BUNDLED_FILE_NAME: &str = "fmo_paestuarii.toml";
const BUNDLED: &str = include_str!("../data/fmo_paestuarii.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HamiltonianFile {
    hamiltonian: HamiltonianData,
}

/// Lossless site Hamiltonian as stored on disk (cm⁻¹).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianData {
    pub units: String,
    pub reference_energy: f64,
    pub source: String,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub epsilon: Vec<f64>,
    pub coupling_upper: Vec<f64>,
}

impl HamiltonianData {
    /// The 7-site FMO monomer shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED, Path::new(BUNDLED_FILE_NAME)).expect("bundled Hamiltonian is well-formed")
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::PresetLoad { path: path.to_path_buf(), reason: e.to_string() })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let fail = |reason: String| Error::PresetLoad { path: PathBuf::from(origin), reason };
        let file: HamiltonianFile = toml::from_str(text).map_err(|e| fail(e.to_string()))?;
        let data = file.hamiltonian;
        let n = data.epsilon.len();
        if data.units != "cm-1" {
            return Err(fail(format!("unsupported units {:?}, expected \"cm-1\"", data.units)));
        }
        if n == 0 {
            return Err(fail("epsilon is empty".into()));
        }
        if data.coupling_upper.len() != n * (n - 1) / 2 {
            return Err(fail(format!(
                "coupling_upper has {} entries, {} sites need {}",
                data.coupling_upper.len(),
                n,
                n * (n - 1) / 2
            )));
        }
        if let Some(labels) = &data.labels {
            if labels.len() != n {
                return Err(fail(format!("{} labels for {} sites", labels.len(), n)));
            }
        }
        Ok(data)
    }

    pub fn n_sites(&self) -> usize {
        self.epsilon.len()
    }

    /// Full symmetric coupling matrix with zero diagonal.
    pub fn coupling_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n_sites();
        let mut j = vec![vec![0.0; n]; n];
        let mut it = self.coupling_upper.iter();
        for a in 0..n {
            for b in a + 1..n {
                let v = *it.next().expect("length checked on load");
                j[a][b] = v;
                j[b][a] = v;
            }
        }
        j
    }

    pub fn coupling(&self, a: Site, b: Site) -> f64 {
        self.coupling_matrix()[a.index()][b.index()]
    }

    pub fn to_network<T: Scalar>(&self) -> SiteNetwork<T> {
        let conv = |v: &[f64]| v.iter().map(|&x| T::lit(x)).collect::<Vec<_>>();
        let mut net =
            SiteNetwork::lossless(conv(&self.epsilon), self.coupling_matrix().iter().map(|row| conv(row)).collect());
        if let Some(labels) = &self.labels {
            net.labels = labels.clone();
        }
        net.reference_energy = T::lit(self.reference_energy);
        net
    }
}

/// How losses and ports are laid onto a lossless Hamiltonian.
///
/// Every port site gets `gamma_dp + ohmic_fraction · Γ_n` with
/// `Γ_n = 2 g_n² / v_g`; the sink site gets `gamma_s`; all other sites are lossless.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRecipe<T> {
    pub ports: Vec<Port<T>>,
    pub v_g: T,
    pub gamma_dp: T,
    pub sink_site: Site,
    pub gamma_s: T,
    pub ohmic_fraction: T,
}

impl<T: Scalar> NetworkRecipe<T> {
    pub fn build(&self, data: &HamiltonianData) -> Result<(SiteNetwork<T>, WaveguideCoupling<T>)> {
        let mut net = data.to_network::<T>();
        let n = net.n_sites();
        let mut wg = WaveguideCoupling::new(self.ports.clone(), self.v_g);
        wg.ohmic_fraction = self.ohmic_fraction;
        wg.validate(n)?;
        if !self.sink_site.is_valid_for(n) {
            return Err(Error::InvalidScenario(format!("sink site {} out of range", self.sink_site)));
        }
        for p in &wg.ports {
            let mut b = net.loss_breakdown[p.site.index()];
            b.dephasing = self.gamma_dp;
            net.set_loss(p.site, b);
        }
        let mut b = net.loss_breakdown[self.sink_site.index()];
        b.sink = self.gamma_s;
        net.set_loss(self.sink_site, b);
        apply_ohmic_losses(&mut net, &wg);
        net.validate()?;
        Ok((net, wg))
    }
}

/// Re-derives every site's Ohmic component from the current ports:
/// `ohmic_fraction · Γ_n` on port sites, zero elsewhere.
pub fn apply_ohmic_losses<T: Scalar>(net: &mut SiteNetwork<T>, wg: &WaveguideCoupling<T>) {
    for i in 0..net.n_sites() {
        let site = Site::from_index(i);
        let ohmic = wg.amplitude(site).map_or(T::zero(), |g| wg.ohmic_fraction * wg.width(g));
        let b = LossBreakdown { ohmic, ..net.loss_breakdown[i] };
        net.set_loss(site, b);
    }
}

/// Parameters of the FMO preset: ports on sites 1 and 6, sink on site 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetParams<T> {
    pub g1: T,
    pub g6: T,
    pub gamma_dp: T,
    pub gamma_s: T,
    pub ohmic_fraction: T,
    pub v_g: T,
}

impl<T: Scalar> Default for PresetParams<T> {
    fn default() -> Self {
        Self {
            g1: T::lit(10.0),
            g6: T::lit(10.0),
            gamma_dp: T::lit(77.0),
            gamma_s: T::lit(5.3),
            ohmic_fraction: T::lit(1.0 / 20.0),
            v_g: T::one(),
        }
    }
}

impl<T: Scalar> PresetParams<T> {
    pub fn recipe(&self) -> NetworkRecipe<T> {
        NetworkRecipe {
            ports: vec![Port { site: Site(1), g: self.g1 }, Port { site: Site(6), g: self.g6 }],
            v_g: self.v_g,
            gamma_dp: self.gamma_dp,
            sink_site: Site(3),
            gamma_s: self.gamma_s,
            ohmic_fraction: self.ohmic_fraction,
        }
    }
}

/// FMO monomer probed on sites 1 and 6, using the bundled Hamiltonian.
pub fn fmo_preset<T: Scalar>(params: &PresetParams<T>) -> Result<(SiteNetwork<T>, WaveguideCoupling<T>)> {
    params.recipe().build(&HamiltonianData::bundled())
}

/// Same as [`fmo_preset`] but reads the Hamiltonian from `path`.
pub fn fmo_preset_from_file<T: Scalar>(
    path: impl AsRef<Path>,
    params: &PresetParams<T>,
) -> Result<(SiteNetwork<T>, WaveguideCoupling<T>)> {
    params.recipe().build(&HamiltonianData::from_file(path)?)
}
