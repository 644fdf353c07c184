//! Independent oracles for checking the solvers: random network instances,
//! a dense Hermitian eigendecomposition of the site Hamiltonian, and network
//! surgery that bypasses the defect machinery.

use fmo_scatter::model::{LossBreakdown, Port, Site};
use fmo_scatter::{SiteNetwork, WaveguideCoupling};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

/// Random network of 1..=7 sites, ports on a random non-empty subset.
pub fn random_instance<R: Rng>(rng: &mut R, lossless: bool) -> (SiteNetwork, WaveguideCoupling, f64) {
    let n = rng.gen_range(1..=7);
    let eps: Vec<f64> = (0..n).map(|_| rng.gen_range(-200.0..200.0)).collect();
    let mut j = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let v = rng.gen_range(-100.0..100.0);
            j[a][b] = v;
            j[b][a] = v;
        }
    }
    let mut net = SiteNetwork::lossless(eps, j);
    if !lossless {
        for i in 0..n {
            let b = LossBreakdown { dephasing: rng.gen_range(0.0..60.0), ohmic: 0.0, sink: rng.gen_range(0.0..10.0) };
            net.set_loss(Site::from_index(i), b);
        }
    }
    let mut ports = Vec::new();
    for i in 0..n {
        if rng.gen_bool(0.5) {
            ports.push(Port { site: Site::from_index(i), g: rng.gen_range(0.5..20.0) });
        }
    }
    if ports.is_empty() {
        ports.push(Port { site: Site::from_index(rng.gen_range(0..n)), g: rng.gen_range(0.5..20.0) });
    }
    let wg = WaveguideCoupling::new(ports, rng.gen_range(0.5..2.0));
    (net, wg, rng.gen_range(-300.0..300.0))
}

/// Eigenpairs of the Hermitian (loss-free) site Hamiltonian.
pub fn eigenpairs(net: &SiteNetwork) -> Vec<(f64, Vec<f64>)> {
    let n = net.n_sites();
    let h = DMatrix::from_fn(n, n, |a, b| if a == b { net.epsilon[a] } else { net.coupling[a][b] });
    let eig = SymmetricEigen::new(h);
    let mut out: Vec<(f64, Vec<f64>)> =
        (0..n).map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Eigenvalues whose eigenvector overlaps the ports: `Σ_ports |v_p|² > tol`.
pub fn bright_eigenvalues(net: &SiteNetwork, wg: &WaveguideCoupling, tol: f64) -> Vec<f64> {
    eigenpairs(net)
        .into_iter()
        .filter(|(_, v)| wg.ports.iter().map(|p| v[p.site.index()].powi(2)).sum::<f64>() > tol)
        .map(|(e, _)| e)
        .collect()
}

/// Copy of `net` with every loss channel zeroed.
pub fn without_losses(net: &SiteNetwork) -> SiteNetwork {
    let mut out = net.clone();
    for i in 0..out.n_sites() {
        out.set_loss(Site::from_index(i), LossBreakdown::zero());
    }
    out
}

/// Copy of `net` with every coupling of `site` zeroed; its energy and loss stay.
pub fn decoupled(net: &SiteNetwork, site: Site) -> SiteNetwork {
    let mut out = net.clone();
    let k = site.index();
    for m in 0..out.n_sites() {
        if m != k {
            out.coupling[k][m] = 0.0;
            out.coupling[m][k] = 0.0;
        }
    }
    out
}
