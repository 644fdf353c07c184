use fmo_scatter::extrema::find_extrema_in;
use fmo_scatter::fano::{fit_fano_data, FitOptions};
use fmo_scatter::model::{self, Site};
use fmo_scatter::preset::{fmo_preset, PresetParams};
use fmo_scatter::scattering::ScatteringProblem;
use fmo_scatter::{
    apply_defect, apply_scenario, spectral_difference, sweep_spectrum, Defect, DefectScenario, FanoParams, ProbeGrid,
    Solver,
};
use fmo_scatter_validation as oracle;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, lossless: bool) -> (fmo_scatter::SiteNetwork, fmo_scatter::WaveguideCoupling, f64) {
    oracle::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), lossless)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn solvers_agree(seed in any::<u64>()) {
        let (net, wg, e) = instance(seed, false);
        let p = ScatteringProblem::new(&net, &wg).unwrap();
        let (a, b) = (p.closed_form(e).unwrap(), p.direct(e).unwrap());
        prop_assert!((a.t - b.t).norm() < 1e-10);
        for (x, y) in a.xi.iter().zip(&b.xi) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn flux_balances_and_r_is_t_minus_one(seed in any::<u64>(), lossless in any::<bool>()) {
        let (net, wg, e) = instance(seed, lossless);
        for solver in [Solver::ClosedForm, Solver::Direct] {
            let s = ScatteringProblem::new(&net, &wg).unwrap().solve(e, solver).unwrap();
            prop_assert!(s.flux.balance_residual().abs() < 1e-10);
            prop_assert!((s.r - (s.t - 1.0)).norm() < 1e-12);
            prop_assert!(s.flux.absorbed_total() >= -1e-15);
            if lossless {
                prop_assert!((s.t.norm_sqr() + s.r.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn energy_gauge_invariance(seed in any::<u64>(), shift in -5000.0f64..5000.0) {
        let (net, wg, e) = instance(seed, false);
        let a = ScatteringProblem::new(&net, &wg).unwrap().closed_form(e).unwrap();
        let b = ScatteringProblem::new(&net.shifted(shift), &wg).unwrap().closed_form(e + shift).unwrap();
        prop_assert!((a.t - b.t).norm() < 1e-9);
    }

    #[test]
    fn bright_eigenvalues_are_transmission_zeros(seed in any::<u64>()) {
        let (net, wg, _) = instance(seed, true);
        let p = ScatteringProblem::new(&net, &wg).unwrap();
        let pairs = oracle::eigenpairs(&net);
        for (k, (ev, v)) in pairs.iter().enumerate() {
            let overlap: f64 = wg.ports.iter().map(|q| v[q.site.index()].powi(2)).sum();
            let isolated = pairs.iter().enumerate().all(|(m, (o, _))| m == k || (o - ev).abs() > 1e-3);
            if overlap > 1e-3 && isolated {
                prop_assert!(p.closed_form(*ev).unwrap().t.norm_sqr() < 1e-12, "T({ev}) not zero");
            }
        }
    }

    #[test]
    fn decoupled_site_equals_removed_site(seed in any::<u64>()) {
        let (net, wg, e) = instance(seed, false);
        let Some(free) = (1..=net.n_sites()).map(Site).find(|s| wg.amplitude(*s).is_none()) else {
            return Ok(());
        };
        let (removed, wg2) = apply_defect(&net, &wg, &Defect::RemoveSite(free)).unwrap();
        let a = ScatteringProblem::new(&oracle::decoupled(&net, free), &wg).unwrap().closed_form(e).unwrap();
        let b = ScatteringProblem::new(&removed, &wg2).unwrap().closed_form(e).unwrap();
        prop_assert!((a.t - b.t).norm() < 1e-12);
        prop_assert!(a.xi[free.index()].norm() == 0.0);
    }

    #[test]
    fn single_precision_tracks_double(seed in any::<u64>()) {
        let (net, wg, e) = instance(seed, false);
        let net32 = model::SiteNetwork::<f32> {
            epsilon: net.epsilon.iter().map(|&x| x as f32).collect(),
            coupling: net.coupling.iter().map(|r| r.iter().map(|&x| x as f32).collect()).collect(),
            loss: net.loss.iter().map(|&x| x as f32).collect(),
            loss_breakdown: net
                .loss_breakdown
                .iter()
                .map(|b| model::LossBreakdown { dephasing: b.dephasing as f32, ohmic: b.ohmic as f32, sink: b.sink as f32 })
                .collect(),
            labels: net.labels.clone(),
            reference_energy: net.reference_energy as f32,
        };
        let wg32 = model::WaveguideCoupling::<f32>::new(
            wg.ports.iter().map(|p| model::Port { site: p.site, g: p.g as f32 }).collect(),
            wg.v_g as f32,
        );
        let a = ScatteringProblem::new(&net, &wg).unwrap().closed_form(e).unwrap();
        let b = ScatteringProblem::new(&net32, &wg32).unwrap().closed_form(e as f32).unwrap();
        prop_assert!((a.t.norm_sqr() - f64::from(b.t.norm_sqr())).abs() < 1e-3);
        prop_assert!(f64::from(b.flux.balance_residual()).abs() < 1e-4);
    }

    #[test]
    fn fano_round_trip(q in 0.3f64..4.0, e_res in -5.0f64..5.0, w in 1.0f64..6.0, t_bg in 0.2f64..1.5, neg in any::<bool>()) {
        let q = if neg { -q } else { q };
        let truth = FanoParams::new(q, e_res, w, t_bg);
        let energies: Vec<f64> = (0..301).map(|i| -30.0 + 0.2 * i as f64).collect();
        let values: Vec<f64> = energies.iter().map(|&e| truth.eval(e)).collect();
        let fit = fit_fano_data(&energies, &values, None, &FitOptions::default()).unwrap();
        prop_assert!(fit.residual < 1e-8, "{fit:?}");
        prop_assert!(((fit.q - q) / q).abs() < 1e-6);
        prop_assert!((fit.e_res - e_res).abs() < 1e-6 * w);
        prop_assert!(((fit.gamma_w.abs() - w) / w).abs() < 1e-6);
        prop_assert!(((fit.t_bg - t_bg) / t_bg).abs() < 1e-6);
    }

    #[test]
    fn extrema_ignore_offsets_and_respect_threshold(vals in prop::collection::vec(0.0f64..1.0, 3..120), c in -10.0f64..10.0, prom in 0.0f64..0.5) {
        let energies: Vec<f64> = (0..vals.len()).map(|i| i as f64).collect();
        let a = find_extrema_in(&energies, &vals, prom);
        let shifted: Vec<f64> = vals.iter().map(|v| v + c).collect();
        let b = find_extrema_in(&energies, &shifted, prom);
        prop_assert_eq!(a.iter().map(|x| (x.index, x.kind)).collect::<Vec<_>>(), b.iter().map(|x| (x.index, x.kind)).collect::<Vec<_>>());
        for x in &a {
            prop_assert!(x.prominence >= prom);
            prop_assert!(x.index > 0 && x.index + 1 < vals.len());
        }
    }
}

#[test]
fn spectral_difference_is_a_metric_on_preset_scenarios() {
    let (net, wg) = fmo_preset(&PresetParams::default()).unwrap();
    let grid = ProbeGrid::new(100.0, 800.0, 351).unwrap();
    let spectra: Vec<_> = [
        None,
        Some(DefectScenario::inhibit(1, 2)),
        Some(DefectScenario::remove(5)),
        Some(DefectScenario::inhibit(4, 7)),
    ]
    .into_iter()
    .map(|sc| {
        let (n, w) = match sc {
            Some(sc) => apply_scenario(&net, &wg, &sc).unwrap(),
            None => (net.clone(), wg.clone()),
        };
        sweep_spectrum(&n, &w, &grid, Solver::ClosedForm).unwrap()
    })
    .collect();
    for a in &spectra {
        assert_eq!(spectral_difference(a, a).unwrap().l_inf, 0.0);
        for b in &spectra {
            let ab = spectral_difference(a, b).unwrap();
            let ba = spectral_difference(b, a).unwrap();
            assert_eq!(ab.l_inf, ba.l_inf);
            assert_eq!(ab.extrema_delta, -ba.extrema_delta);
            for c in &spectra {
                let ac = spectral_difference(a, c).unwrap().l_inf;
                let cb = spectral_difference(c, b).unwrap().l_inf;
                assert!(ab.l_inf <= ac + cb + 1e-15);
            }
        }
    }
}

#[test]
fn solvers_give_identical_preset_spectra() {
    let (net, wg) = fmo_preset(&PresetParams::default()).unwrap();
    let grid = ProbeGrid::default_for(&net).unwrap();
    let a = sweep_spectrum(&net, &wg, &grid, Solver::ClosedForm).unwrap();
    let b = sweep_spectrum(&net, &wg, &grid, Solver::Direct).unwrap();
    let worst = a.transmission.iter().zip(&b.transmission).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-12, "{worst}");
    for i in 0..a.len() {
        let parts = a.absorption_sink[i] + a.absorption_dephasing[i] + a.absorption_ohmic[i];
        assert!((parts - a.absorption_total[i]).abs() < 1e-13);
        assert!((a.transmission[i] + a.reflection[i] + a.absorption_total[i] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let (net, wg) = fmo_preset(&PresetParams::default()).unwrap();
    let grid = ProbeGrid::default_for(&net).unwrap();
    let parallel = sweep_spectrum(&net, &wg, &grid, Solver::ClosedForm).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| sweep_spectrum(&net, &wg, &grid, Solver::ClosedForm).unwrap());
    assert_eq!(parallel, serial);
}
