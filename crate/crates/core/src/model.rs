//! Excitonic site network, waveguide coupling and probe grid.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// 1-based site number, as sites are labelled in the FMO literature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site(pub usize);

impl Site {
    /// Zero-based position in the network's vectors.
    ///
    /// Panics on `Site(0)`; callers validate against the network first.
    pub fn index(self) -> usize {
        self.0.checked_sub(1).expect("site numbers start at 1")
    }

    pub fn from_index(i: usize) -> Self {
        Site(i + 1)
    }

    pub fn is_valid_for(self, n_sites: usize) -> bool {
        self.0 >= 1 && self.0 <= n_sites
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Named components of a site's non-Hermitian width, cm⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossBreakdown<T> {
    pub dephasing: T,
    pub ohmic: T,
    pub sink: T,
}

impl<T: Scalar> LossBreakdown<T> {
    pub fn zero() -> Self {
        Self { dephasing: T::zero(), ohmic: T::zero(), sink: T::zero() }
    }

    pub fn total(&self) -> T {
        self.dephasing + self.ohmic + self.sink
    }

    fn channels(&self) -> [(&'static str, T); 3] {
        [("dephasing", self.dephasing), ("ohmic", self.ohmic), ("sink", self.sink)]
    }
}

/// N-site excitonic network: site energies, symmetric coupling matrix and
/// per-site loss rates. Energies are offsets from `reference_energy`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteNetwork<T> {
    pub epsilon: Vec<T>,
    pub coupling: Vec<Vec<T>>,
    pub loss: Vec<T>,
    pub loss_breakdown: Vec<LossBreakdown<T>>,
    pub labels: Vec<String>,
    pub reference_energy: T,
}

impl<T: Scalar> SiteNetwork<T> {
    /// Lossless network with default labels.
    pub fn lossless(epsilon: Vec<T>, coupling: Vec<Vec<T>>) -> Self {
        let n = epsilon.len();
        Self {
            epsilon,
            coupling,
            loss: vec![T::zero(); n],
            loss_breakdown: vec![LossBreakdown::zero(); n],
            labels: (1..=n).map(|i| format!("site {i}")).collect(),
            reference_energy: T::zero(),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.epsilon.len()
    }

    /// Replaces the breakdown of one site and keeps `loss` consistent with it.
    pub fn set_loss(&mut self, site: Site, breakdown: LossBreakdown<T>) {
        let i = site.index();
        self.loss_breakdown[i] = breakdown;
        self.loss[i] = breakdown.total();
    }

    /// Same network with every site energy shifted by `c`.
    pub fn shifted(&self, c: T) -> Self {
        let mut out = self.clone();
        out.epsilon.iter_mut().for_each(|e| *e = *e + c);
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = validate_network(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(v))
        }
    }
}

/// One violated invariant of a [`SiteNetwork`] or [`WaveguideCoupling`].
/// Site numbers are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyNetwork,
    Dimension { field: String, expected: usize, found: usize },
    NonFinite { field: &'static str, site: usize },
    AsymmetricCoupling { a: usize, b: usize },
    NonZeroDiagonal { site: usize },
    NegativeLoss { site: usize, channel: &'static str },
    LossMismatch { site: usize },
    PortOutOfRange { site: usize },
    DuplicatePort { site: usize },
    NegativeAmplitude { site: usize },
    GroupVelocity,
    NonZeroSeparation,
    OhmicFraction,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyNetwork => write!(f, "network has no sites"),
            Violation::Dimension { field, expected, found } => {
                write!(f, "dimension mismatch in {field}: expected {expected}, found {found}")
            }
            Violation::NonFinite { field, site } => write!(f, "non-finite {field} at site {site}"),
            Violation::AsymmetricCoupling { a, b } => write!(f, "asymmetric coupling ({a},{b})"),
            Violation::NonZeroDiagonal { site } => write!(f, "non-zero coupling diagonal at site {site}"),
            Violation::NegativeLoss { site, channel } => {
                write!(f, "negative {channel} loss at site {site}")
            }
            Violation::LossMismatch { site } => write!(f, "loss_breakdown mismatch at site {site}"),
            Violation::PortOutOfRange { site } => write!(f, "port site {site} out of range"),
            Violation::DuplicatePort { site } => write!(f, "duplicate port site {site}"),
            Violation::NegativeAmplitude { site } => {
                write!(f, "negative coupling amplitude at port site {site}")
            }
            Violation::GroupVelocity => write!(f, "group velocity must be positive and finite"),
            Violation::NonZeroSeparation => write!(f, "port separation d must be 0"),
            Violation::OhmicFraction => write!(f, "ohmic fraction must be non-negative and finite"),
        }
    }
}

/// Checks every [`SiteNetwork`] invariant. Empty result iff the network is valid.
pub fn validate_network<T: Scalar>(net: &SiteNetwork<T>) -> Vec<Violation> {
    let n = net.n_sites();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Violation::EmptyNetwork);
    }

    let mut dim = |field: &str, found: usize| {
        if found != n {
            out.push(Violation::Dimension { field: field.to_string(), expected: n, found });
            false
        } else {
            true
        }
    };
    let rows_ok = dim("coupling", net.coupling.len());
    let loss_ok = dim("loss", net.loss.len());
    let breakdown_ok = dim("loss_breakdown", net.loss_breakdown.len());
    dim("labels", net.labels.len());

    for (i, e) in net.epsilon.iter().enumerate() {
        if !e.is_finite() {
            out.push(Violation::NonFinite { field: "epsilon", site: i + 1 });
        }
    }

    if rows_ok {
        let square = net.coupling.iter().enumerate().fold(true, |ok, (i, row)| {
            if row.len() != n {
                out.push(Violation::Dimension {
                    field: format!("coupling row {}", i + 1),
                    expected: n,
                    found: row.len(),
                });
                false
            } else {
                ok
            }
        });
        if square {
            for i in 0..n {
                if net.coupling[i][i] != T::zero() {
                    out.push(Violation::NonZeroDiagonal { site: i + 1 });
                }
                for j in 0..n {
                    if !net.coupling[i][j].is_finite() {
                        out.push(Violation::NonFinite { field: "coupling", site: i + 1 });
                    } else if i < j && net.coupling[i][j] != net.coupling[j][i] {
                        out.push(Violation::AsymmetricCoupling { a: i + 1, b: j + 1 });
                    }
                }
            }
        }
    }

    if loss_ok && breakdown_ok {
        for (i, (&total, parts)) in net.loss.iter().zip(&net.loss_breakdown).enumerate() {
            let site = i + 1;
            for (channel, v) in parts.channels() {
                if !v.is_finite() {
                    out.push(Violation::NonFinite { field: channel, site });
                } else if v < T::zero() {
                    out.push(Violation::NegativeLoss { site, channel });
                }
            }
            let sum = parts.total();
            let scale = T::one().max(total.abs()).max(sum.abs());
            if !total.is_finite() || (total - sum).abs() > T::lit(8.0) * T::epsilon() * scale {
                out.push(Violation::LossMismatch { site });
            }
        }
    }
    out
}

/// A network site coupled to the waveguide with real amplitude `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Port<T> {
    pub site: Site,
    pub g: T,
}

/// Which sites couple to the waveguide, and how strongly.
///
/// `g` is the real-space delta-coupling amplitude; a port of amplitude `g`
/// has radiative width `Γ = 2 g² / v_g` into the waveguide.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveguideCoupling<T> {
    pub ports: Vec<Port<T>>,
    pub v_g: T,
    /// Separation between ports. Only `0` is supported.
    pub d: T,
    /// Ohmic loss of a port site as a fraction of its radiative width.
    pub ohmic_fraction: T,
}

impl<T: Scalar> WaveguideCoupling<T> {
    pub fn new(ports: Vec<Port<T>>, v_g: T) -> Self {
        Self { ports, v_g, d: T::zero(), ohmic_fraction: T::zero() }
    }

    /// Radiative width `2 g² / v_g` for amplitude `g`.
    pub fn width(&self, g: T) -> T {
        T::lit(2.0) * g * g / self.v_g
    }

    pub fn amplitude(&self, site: Site) -> Option<T> {
        self.ports.iter().find(|p| p.site == site).map(|p| p.g)
    }

    /// Dense coupling vector `w` with `w[n] = g` at port sites, zero elsewhere.
    pub fn coupling_vector(&self, n_sites: usize) -> Vec<T> {
        let mut w = vec![T::zero(); n_sites];
        for p in &self.ports {
            w[p.site.index()] = p.g;
        }
        w
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        let v = validate_coupling(self, n_sites);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidCoupling(v))
        }
    }
}

pub fn validate_coupling<T: Scalar>(wg: &WaveguideCoupling<T>, n_sites: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    for (k, p) in wg.ports.iter().enumerate() {
        if !p.site.is_valid_for(n_sites) {
            out.push(Violation::PortOutOfRange { site: p.site.0 });
        }
        if wg.ports[..k].iter().any(|q| q.site == p.site) {
            out.push(Violation::DuplicatePort { site: p.site.0 });
        }
        if !(p.g >= T::zero()) || !p.g.is_finite() {
            out.push(Violation::NegativeAmplitude { site: p.site.0 });
        }
    }
    if !(wg.v_g > T::zero()) || !wg.v_g.is_finite() {
        out.push(Violation::GroupVelocity);
    }
    if wg.d != T::zero() {
        out.push(Violation::NonZeroSeparation);
    }
    if !(wg.ohmic_fraction >= T::zero()) || !wg.ohmic_fraction.is_finite() {
        out.push(Violation::OhmicFraction);
    }
    out
}

/// Uniform grid of probe energies, cm⁻¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeGrid<T> {
    e_min: T,
    e_max: T,
    n_points: usize,
}

impl<T: Scalar> ProbeGrid<T> {
    pub const DEFAULT_POINTS: usize = 2001;
    pub const DEFAULT_MARGIN: f64 = 300.0;

    pub fn new(e_min: T, e_max: T, n_points: usize) -> Result<Self> {
        if !e_min.is_finite() || !e_max.is_finite() {
            return Err(Error::InvalidGrid("grid bounds must be finite".into()));
        }
        if !(e_min < e_max) {
            return Err(Error::InvalidGrid(format!("e_min ({e_min}) must be below e_max ({e_max})")));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        Ok(Self { e_min, e_max, n_points })
    }

    /// `[min ε − 300, max ε + 300]` with 2001 points.
    pub fn default_for(net: &SiteNetwork<T>) -> Result<Self> {
        let lo = net.epsilon.iter().copied().fold(T::infinity(), T::min);
        let hi = net.epsilon.iter().copied().fold(T::neg_infinity(), T::max);
        let margin = T::lit(Self::DEFAULT_MARGIN);
        Self::new(lo - margin, hi + margin, Self::DEFAULT_POINTS)
    }

    pub fn e_min(&self) -> T {
        self.e_min
    }

    pub fn e_max(&self) -> T {
        self.e_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> T {
        (self.e_max - self.e_min) / T::from_usize(self.n_points - 1).unwrap()
    }

    pub fn point(&self, i: usize) -> T {
        if i + 1 == self.n_points {
            self.e_max
        } else {
            self.e_min + self.spacing() * T::from_usize(i).unwrap()
        }
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Same grid shifted by `c`.
    pub fn shifted(&self, c: T) -> Self {
        Self { e_min: self.e_min + c, e_max: self.e_max + c, n_points: self.n_points }
    }
}
