//! Single-photon scattering off a site network side-coupled to a 1-D waveguide.
//!
//! With both ports at `x = 0`, the right/left field amplitudes are
//! `φ_R = e^{ikx}[θ(−x) + t θ(x)]` and `φ_L = r e^{−ikx} θ(−x)`, and the
//! field seen by a port is the average of its left and right limits.
//! Two routes solve the same stationary problem:
//!
//! * [`solve_closed_form`]: the Green's-function result
//!   `t = 1 / (1 + (i/v_g) wᵀG w)`, `ξ = t G w` with `G = (E − H_eff)⁻¹`.
//!   It is evaluated in its Sherman-Morrison resummed form
//!   `ξ = (E − H_eff + (i/v_g) w wᵀ)⁻¹ w`, `t = 1 − (i/v_g) wᵀξ`, `r = t − 1`,
//!   which is identical wherever `G` exists and stays finite at the removable
//!   singularities where a bright site is exactly on resonance.
//! * [`solve_direct`]: the `(N + 2)`-unknown system in `(t, r, ξ)` taken
//!   straight from the delta-function jump conditions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{SiteNetwork, WaveguideCoupling};
use crate::scalar::Scalar;

/// Which scattering solver to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Solver {
    #[default]
    ClosedForm,
    Direct,
}

impl Solver {
    pub fn id(self) -> &'static str {
        match self {
            Solver::ClosedForm => "closed_form",
            Solver::Direct => "direct",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Solver {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_form" => Ok(Solver::ClosedForm),
            "direct" => Ok(Solver::Direct),
            other => Err(Error::Config(format!("unknown solver {other:?} (closed_form | direct)"))),
        }
    }
}

/// Absorbed flux split by loss channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelAbsorption<T> {
    pub dephasing: T,
    pub ohmic: T,
    pub sink: T,
}

/// Where the incident unit flux goes.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxLedger<T> {
    pub transmitted: T,
    pub reflected: T,
    /// `γ_n |ξ_n|² / v_g`
    pub absorbed_per_site: Vec<T>,
    pub absorbed_by_channel: ChannelAbsorption<T>,
}

impl<T: Scalar> FluxLedger<T> {
    pub fn absorbed_total(&self) -> T {
        self.absorbed_per_site.iter().copied().sum()
    }

    /// `1 − T − R − A`; zero for an exact solution.
    pub fn balance_residual(&self) -> T {
        T::one() - self.transmitted - self.reflected - self.absorbed_total()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSolution<T> {
    pub energy: T,
    pub t: Complex<T>,
    pub r: Complex<T>,
    /// Site amplitudes ξ_n.
    pub xi: Vec<Complex<T>>,
    pub flux: FluxLedger<T>,
}

/// `H_eff[n][n] = ε_n − iγ_n/2`, `H_eff[n][m] = J_nm`.
pub fn effective_hamiltonian<T: Scalar>(net: &SiteNetwork<T>) -> Result<Matrix<Complex<T>>> {
    net.validate()?;
    let n = net.n_sites();
    let half = T::lit(0.5);
    let mut h = Matrix::zeros(n);
    for a in 0..n {
        for b in 0..n {
            let v = if a == b {
                Complex::new(net.epsilon[a], -half * net.loss[a])
            } else {
                Complex::new(net.coupling[a][b], T::zero())
            };
            h.set(a, b, v);
        }
    }
    Ok(h)
}

/// A validated network + waveguide pair, ready to be solved at many energies.
#[derive(Debug, Clone)]
pub struct ScatteringProblem<'a, T> {
    net: &'a SiteNetwork<T>,
    h_eff: Matrix<Complex<T>>,
    w: Vec<T>,
    v_g: T,
}

impl<'a, T: Scalar> ScatteringProblem<'a, T> {
    pub fn new(net: &'a SiteNetwork<T>, wg: &WaveguideCoupling<T>) -> Result<Self> {
        let h_eff = effective_hamiltonian(net)?;
        wg.validate(net.n_sites())?;
        Ok(Self { net, h_eff, w: wg.coupling_vector(net.n_sites()), v_g: wg.v_g })
    }

    pub fn solve(&self, energy: T, solver: Solver) -> Result<ScatteringSolution<T>> {
        match solver {
            Solver::ClosedForm => self.closed_form(energy),
            Solver::Direct => self.direct(energy),
        }
    }

    pub fn closed_form(&self, energy: T) -> Result<ScatteringSolution<T>> {
        let n = self.net.n_sites();
        let i_over_vg = Complex::<T>::i() / Complex::from(self.v_g);
        let mut a = Matrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                a.set(r, c, i_over_vg * (self.w[r] * self.w[c]) - self.h_eff.get(r, c));
            }
            a.add(r, r, Complex::from(energy));
        }
        let rhs: Vec<Complex<T>> = self.w.iter().map(|&g| Complex::from(g)).collect();
        let xi = a.solve(&rhs).ok_or_else(|| pole(energy))?;
        let w_xi: Complex<T> = self.w.iter().zip(&xi).map(|(&g, &x)| x * g).sum();
        let t = Complex::<T>::one() - i_over_vg * w_xi;
        Ok(self.finish(energy, t, t - Complex::one(), xi))
    }

    pub fn direct(&self, energy: T) -> Result<ScatteringSolution<T>> {
        let n = self.net.n_sites();
        let i = Complex::<T>::i();
        let half = T::lit(0.5);
        let (row_t, row_r) = (0, 1);
        let site = |k: usize| k + 2;
        let mut a = Matrix::zeros(n + 2);
        let mut b = vec![Complex::zero(); n + 2];

        // Right-mover jump: −i v_g (t − 1) + Σ g ξ = 0
        a.set(row_t, 0, -i * self.v_g);
        b[row_t] = -i * self.v_g;
        // Left-mover jump: i v_g (0 − r) + Σ g ξ = 0
        a.set(row_r, 1, -i * self.v_g);
        for (k, &g) in self.w.iter().enumerate() {
            a.set(row_t, site(k), Complex::from(g));
            a.set(row_r, site(k), Complex::from(g));
        }

        // Site rows: (E − H_eff) ξ − g_n [(1 + t)/2 + r/2] = 0
        for k in 0..n {
            for m in 0..n {
                a.set(site(k), site(m), -self.h_eff.get(k, m));
            }
            a.add(site(k), site(k), Complex::from(energy));
            let g = self.w[k];
            a.set(site(k), 0, Complex::from(-half * g));
            a.set(site(k), 1, Complex::from(-half * g));
            b[site(k)] = Complex::from(half * g);
        }

        let x = a.solve(&b).ok_or_else(|| pole(energy))?;
        Ok(self.finish(energy, x[0], x[1], x[2..].to_vec()))
    }

    fn finish(&self, energy: T, t: Complex<T>, r: Complex<T>, xi: Vec<Complex<T>>) -> ScatteringSolution<T> {
        let per_site = |rate: &dyn Fn(usize) -> T| -> Vec<T> {
            xi.iter().enumerate().map(|(k, x)| rate(k) * x.norm_sqr() / self.v_g).collect()
        };
        let sum = |v: Vec<T>| v.into_iter().sum::<T>();
        let lb = &self.net.loss_breakdown;
        let flux = FluxLedger {
            transmitted: t.norm_sqr(),
            reflected: r.norm_sqr(),
            absorbed_per_site: per_site(&|k| self.net.loss[k]),
            absorbed_by_channel: ChannelAbsorption {
                dephasing: sum(per_site(&|k| lb[k].dephasing)),
                ohmic: sum(per_site(&|k| lb[k].ohmic)),
                sink: sum(per_site(&|k| lb[k].sink)),
            },
        };
        ScatteringSolution { energy, t, r, xi, flux }
    }
}

fn pole<T: Scalar>(energy: T) -> Error {
    Error::Pole { energy: energy.as_f64() }
}

/// Green's-function solution at probe energy `energy` (cm⁻¹).
pub fn solve_closed_form<T: Scalar>(
    net: &SiteNetwork<T>,
    wg: &WaveguideCoupling<T>,
    energy: T,
) -> Result<ScatteringSolution<T>> {
    ScatteringProblem::new(net, wg)?.closed_form(energy)
}

/// Direct solution of the jump-condition system; independent check on
/// [`solve_closed_form`].
pub fn solve_direct<T: Scalar>(
    net: &SiteNetwork<T>,
    wg: &WaveguideCoupling<T>,
    energy: T,
) -> Result<ScatteringSolution<T>> {
    ScatteringProblem::new(net, wg)?.direct(energy)
}
