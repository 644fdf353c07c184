//! Fano lineshape fitting.
//!
//! Model: `T(E) = t_bg · (q + x)² / (1 + x²)` with `x = 2 (E − e_res) / gamma_w`.
//! Minimised by damped Gauss-Newton (Levenberg-Marquardt) with analytic Jacobian.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;

pub const MIN_WINDOW_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoParams<T> {
    pub q: T,
    pub e_res: T,
    pub gamma_w: T,
    pub t_bg: T,
}

impl<T: Scalar> FanoParams<T> {
    pub fn new(q: T, e_res: T, gamma_w: T, t_bg: T) -> Self {
        Self { q, e_res, gamma_w, t_bg }
    }

    fn to_array(self) -> [T; 4] {
        [self.q, self.e_res, self.gamma_w, self.t_bg]
    }

    fn from_array(a: [T; 4]) -> Self {
        Self { q: a[0], e_res: a[1], gamma_w: a[2], t_bg: a[3] }
    }

    pub fn eval(&self, energy: T) -> T {
        self.eval_with_partials(energy).0
    }

    /// Model value and its partials w.r.t. `(q, e_res, gamma_w, t_bg)`.
    fn eval_with_partials(&self, energy: T) -> (T, [T; 4]) {
        let two = T::lit(2.0);
        let x = two * (energy - self.e_res) / self.gamma_w;
        let d = T::one() + x * x;
        let qx = self.q + x;
        let shape = qx * qx / d;
        let f = self.t_bg * shape;
        let df_dx = two * self.t_bg * qx * (T::one() - self.q * x) / (d * d);
        let partials = [two * self.t_bg * qx / d, df_dx * (-two / self.gamma_w), df_dx * (-x / self.gamma_w), shape];
        (f, partials)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoFit<T> {
    pub q: T,
    pub e_res: T,
    pub gamma_w: T,
    pub t_bg: T,
    /// Root-mean-square misfit over the window.
    pub residual: T,
    pub converged: bool,
    pub iterations: usize,
}

impl<T: Scalar> FanoFit<T> {
    pub fn params(&self) -> FanoParams<T> {
        FanoParams::new(self.q, self.e_res, self.gamma_w, self.t_bg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions<T> {
    pub max_iterations: usize,
    pub gradient_tolerance: T,
    pub step_tolerance: T,
    pub initial_damping: T,
}

impl<T: Scalar> Default for FitOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            gradient_tolerance: T::lit(1e-10),
            step_tolerance: T::lit(1e-12),
            initial_damping: T::lit(1e-3),
        }
    }
}

/// `Σ (T_model − T_data)²`.
pub fn fano_residual_sum<T: Scalar>(p: &FanoParams<T>, energies: &[T], values: &[T]) -> T {
    energies.iter().zip(values).map(|(&e, &y)| (p.eval(e) - y).powi(2)).sum()
}

/// Analytic gradient of [`fano_residual_sum`] w.r.t. `(q, e_res, gamma_w, t_bg)`.
pub fn fano_gradient<T: Scalar>(p: &FanoParams<T>, energies: &[T], values: &[T]) -> [T; 4] {
    let mut g = [T::zero(); 4];
    for (&e, &y) in energies.iter().zip(values) {
        let (f, d) = p.eval_with_partials(e);
        let r2 = T::lit(2.0) * (f - y);
        for k in 0..4 {
            g[k] = g[k] + r2 * d[k];
        }
    }
    g
}

/// Seeds from the window's extremum pair: `e_res` at the dip/peak midpoint,
/// `gamma_w` from their spacing, sign of `q` from which comes first, and
/// `t_bg` from the window edges.
pub fn seed_params<T: Scalar>(energies: &[T], values: &[T]) -> FanoParams<T> {
    let argext = |better: fn(T, T) -> bool| {
        (1..values.len()).fold(0, |best, i| if better(values[i], values[best]) { i } else { best })
    };
    let i_min = argext(|a, b| a < b);
    let i_max = argext(|a, b| a > b);
    let (e_min, e_max) = (energies[i_min], energies[i_max]);
    let span = energies[energies.len() - 1] - energies[0];
    let mut width = (e_max - e_min).abs();
    if width <= T::zero() {
        width = span / T::lit(4.0);
    }
    let q = if e_max > e_min { T::one() } else { -T::one() };
    let mut t_bg = (values[0] + values[values.len() - 1]) / T::lit(2.0);
    if !(t_bg > T::zero()) {
        t_bg = values[i_max].max(T::lit(1e-3)) / T::lit(2.0);
    }
    FanoParams::new(q, (e_min + e_max) / T::lit(2.0), width, t_bg)
}

/// Fits the transmission curve of `spec` restricted to `[window.0, window.1]`.
pub fn fit_fano<T: Scalar>(spec: &Spectrum<T>, window: (T, T), init: Option<FanoParams<T>>) -> Result<FanoFit<T>> {
    let (energies, values): (Vec<T>, Vec<T>) = spec
        .energies()
        .into_iter()
        .zip(spec.transmission.iter().copied())
        .filter(|(e, _)| *e >= window.0 && *e <= window.1)
        .unzip();
    if energies.len() < MIN_WINDOW_POINTS {
        return Err(Error::WindowTooSmall {
            lo: window.0.as_f64(),
            hi: window.1.as_f64(),
            points: energies.len(),
            min: MIN_WINDOW_POINTS,
        });
    }
    fit_fano_data(&energies, &values, init, &FitOptions::default())
}

pub fn fit_fano_data<T: Scalar>(
    energies: &[T],
    values: &[T],
    init: Option<FanoParams<T>>,
    opts: &FitOptions<T>,
) -> Result<FanoFit<T>> {
    fit_traced(energies, values, init, opts, |_| {})
}

fn fit_traced<T: Scalar>(
    energies: &[T],
    values: &[T],
    init: Option<FanoParams<T>>,
    opts: &FitOptions<T>,
    mut on_accept: impl FnMut(T),
) -> Result<FanoFit<T>> {
    let m = energies.len();
    if m < MIN_WINDOW_POINTS || values.len() != m {
        return Err(Error::WindowTooSmall {
            lo: energies.first().map_or(f64::NAN, |e| e.as_f64()),
            hi: energies.last().map_or(f64::NAN, |e| e.as_f64()),
            points: m.min(values.len()),
            min: MIN_WINDOW_POINTS,
        });
    }
    let mut p = init.unwrap_or_else(|| seed_params(energies, values));
    let m_t = T::from_usize(m).unwrap();
    let finish = |p: FanoParams<T>, converged: bool, iterations: usize| {
        let residual = (fano_residual_sum(&p, energies, values) / m_t).sqrt();
        FanoFit { q: p.q, e_res: p.e_res, gamma_w: p.gamma_w, t_bg: p.t_bg, residual, converged, iterations }
    };

    let (lo, hi) = values.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo <= T::lit(1e-12) * T::one().max(hi.abs()) {
        return Ok(finish(p, false, 0));
    }

    let mut cost = fano_residual_sum(&p, energies, values);
    let mut damping = opts.initial_damping;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let mut jtj = [[T::zero(); 4]; 4];
        let mut jtr = [T::zero(); 4];
        for (&e, &y) in energies.iter().zip(values) {
            let (f, d) = p.eval_with_partials(e);
            let r = f - y;
            for a in 0..4 {
                jtr[a] = jtr[a] + d[a] * r;
                for b in 0..4 {
                    jtj[a][b] = jtj[a][b] + d[a] * d[b];
                }
            }
        }
        let grad_norm = jtr.iter().map(|g| (T::lit(2.0) * *g).powi(2)).sum::<T>().sqrt();
        if grad_norm < opts.gradient_tolerance {
            converged = true;
            break;
        }

        let diag_floor = T::lit(1e-12) * (0..4).map(|k| jtj[k][k]).fold(T::zero(), T::max);
        let mut a = Matrix::zeros(4);
        for r in 0..4 {
            for c in 0..4 {
                a.set(r, c, jtj[r][c]);
            }
            a.add(r, r, damping * jtj[r][r].max(diag_floor).max(T::min_positive_value()));
        }
        let rhs: Vec<T> = jtr.iter().map(|g| -*g).collect();
        let Some(step) = a.solve(&rhs) else {
            damping = damping * T::lit(10.0);
            continue;
        };

        let current = p.to_array();
        let mut next = current;
        for k in 0..4 {
            next[k] = next[k] + step[k];
        }
        let step_norm = step.iter().map(|s| s.powi(2)).sum::<T>().sqrt();
        let param_norm = current.iter().map(|s| s.powi(2)).sum::<T>().sqrt();
        let tiny_step = step_norm <= opts.step_tolerance * (param_norm + opts.step_tolerance);

        let candidate = FanoParams::from_array(next);
        let new_cost = fano_residual_sum(&candidate, energies, values);
        if candidate.gamma_w > T::zero() && new_cost.is_finite() && new_cost <= cost {
            p = candidate;
            cost = new_cost;
            on_accept(cost);
            damping = (damping / T::lit(10.0)).max(T::lit(1e-15));
        } else {
            damping = damping * T::lit(10.0);
        }
        if tiny_step {
            converged = true;
            break;
        }
        if damping > T::lit(1e20) {
            break;
        }
    }
    Ok(finish(p, converged, iterations))
}
