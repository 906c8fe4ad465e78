//! Runge–Kutta–Fehlberg 4(5) integration with sampled output.

use crate::error::{Error, Result};

/// A (possibly time-dependent) vector field on `R^dim`.
pub trait VectorField {
    fn dim(&self) -> usize;
    /// Writes the derivative at `(t, x)` into `dx`.
    fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]);
}

/// Adapts a closure into a [`VectorField`].
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F> VectorField for FnField<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]) {
        (self.f)(t, x, dx)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Total integration time.
    pub length: f64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub init_step: f64,
    /// Step-size floor; 0 disables the check.
    pub min_step: f64,
    /// Take `init_step` every step with no error control.
    pub fixed_step: bool,
    /// Spacing of recorded samples.
    pub sample_interval: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            length: 100.0,
            eps_abs: 1e-4,
            eps_rel: 1e-4,
            init_step: 1e-4,
            min_step: 0.0,
            fixed_step: false,
            sample_interval: 0.1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("solver: {msg}")));
        if !(self.length > 0.0 && self.length.is_finite()) {
            return bad("length must be positive and finite");
        }
        if !(self.eps_abs >= 0.0 && self.eps_rel >= 0.0) || (self.eps_abs == 0.0 && self.eps_rel == 0.0)
        {
            return bad("eps_abs and eps_rel must be nonnegative and not both zero");
        }
        if !(self.init_step > 0.0 && self.init_step.is_finite()) {
            return bad("init_step must be positive");
        }
        if !(self.min_step >= 0.0 && self.min_step <= self.init_step) {
            return bad("min_step must lie in [0, init_step]");
        }
        if !(self.sample_interval > 0.0 && self.sample_interval.is_finite()) {
            return bad("sample_interval must be positive");
        }
        Ok(())
    }
}

/// Sampled solution: `times[k]` pairs with `state(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    dim: usize,
    times: Vec<f64>,
    data: Vec<f64>,
}

impl Trajectory {
    pub fn new(dim: usize) -> Self {
        Trajectory {
            dim,
            times: Vec::new(),
            data: Vec::new(),
        }
    }

    /// Appends a sample. Times must be strictly increasing.
    pub fn push(&mut self, t: f64, state: &[f64]) -> Result<()> {
        if state.len() != self.dim {
            return Err(Error::Config(format!(
                "sample has {} components, trajectory stores {}",
                state.len(),
                self.dim
            )));
        }
        if self.times.last().is_some_and(|&last| t <= last) {
            return Err(Error::Config(format!("sample time {t} is not increasing")));
        }
        self.times.push(t);
        self.data.extend_from_slice(state);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, k: usize) -> &[f64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn states(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn last_state(&self) -> Option<&[f64]> {
        (!self.is_empty()).then(|| self.state(self.len() - 1))
    }
}

// Fehlberg tableau.
const C: [f64; 6] = [0.0, 1.0 / 4.0, 3.0 / 8.0, 12.0 / 13.0, 1.0, 1.0 / 2.0];
const A: [[f64; 5]; 6] = [
    [0.0; 5],
    [1.0 / 4.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 32.0, 9.0 / 32.0, 0.0, 0.0, 0.0],
    [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0, 0.0, 0.0],
    [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0, 0.0],
    [-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0],
];
/// Fifth-order weights (propagated solution).
const B5: [f64; 6] = [
    16.0 / 135.0,
    0.0,
    6656.0 / 12825.0,
    28561.0 / 56430.0,
    -9.0 / 50.0,
    2.0 / 55.0,
];
/// Fourth-order weights (embedded estimate).
const B4: [f64; 6] = [25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Reusable stage buffers for one state dimension.
struct Stepper {
    k: [Vec<f64>; 6],
    stage: Vec<f64>,
}

impl Stepper {
    fn new(dim: usize) -> Self {
        Stepper {
            k: std::array::from_fn(|_| vec![0.0; dim]),
            stage: vec![0.0; dim],
        }
    }

    /// One Fehlberg step; writes the fifth-order solution and `y5 − y4`.
    fn step<F: VectorField + ?Sized>(
        &mut self,
        field: &F,
        t: f64,
        x: &[f64],
        h: f64,
        x_next: &mut [f64],
        err: &mut [f64],
    ) -> Result<()> {
        for s in 0..6 {
            for i in 0..x.len() {
                let mut acc = 0.0;
                for (r, a) in A[s][..s].iter().enumerate() {
                    acc += a * self.k[r][i];
                }
                self.stage[i] = x[i] + h * acc;
            }
            field.eval(t + C[s] * h, &self.stage, &mut self.k[s]);
            if self.k[s].iter().any(|v| !v.is_finite()) {
                return Err(Error::Divergence { t });
            }
        }
        for i in 0..x.len() {
            let mut hi = 0.0;
            let mut diff = 0.0;
            for s in 0..6 {
                hi += B5[s] * self.k[s][i];
                diff += (B5[s] - B4[s]) * self.k[s][i];
            }
            x_next[i] = x[i] + h * hi;
            err[i] = h * diff;
        }
        if x_next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t });
        }
        Ok(())
    }
}

/// A single Fehlberg 4(5) step from `(t, x)` with step `h`.
///
/// Returns the fifth-order solution and the difference between the fifth- and
/// fourth-order results.
pub fn rkf45_step<F: VectorField + ?Sized>(
    field: &F,
    t: f64,
    x: &[f64],
    h: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(h > 0.0) {
        return Err(Error::Config(format!("step size must be positive, got {h}")));
    }
    let mut stepper = Stepper::new(x.len());
    let mut next = vec![0.0; x.len()];
    let mut err = vec![0.0; x.len()];
    stepper.step(field, t, x, h, &mut next, &mut err)?;
    Ok((next, err))
}

/// Weighted RMS of `err_i / (eps_abs + eps_rel·|x_i|)`.
fn error_norm(err: &[f64], x: &[f64], cfg: &SolverConfig) -> f64 {
    if err.is_empty() {
        return 0.0;
    }
    let sum: f64 = err
        .iter()
        .zip(x)
        .map(|(e, v)| {
            let r = e / (cfg.eps_abs + cfg.eps_rel * v.abs());
            r * r
        })
        .sum();
    (sum / err.len() as f64).sqrt()
}

fn step_factor(err_norm: f64) -> f64 {
    if err_norm == 0.0 {
        MAX_FACTOR
    } else {
        (SAFETY * err_norm.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
    }
}

/// Integrates `field` from `x0` over `[0, cfg.length]`.
///
/// Step endpoints are forced onto the sampling grid `k·sample_interval`, and
/// the last sample sits exactly at `cfg.length`.
pub fn integrate<F: VectorField + ?Sized>(
    field: &F,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let dim = field.dim();
    if x0.len() != dim {
        return Err(Error::Config(format!(
            "initial state has {} components, field expects {dim}",
            x0.len()
        )));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("initial state is not finite".into()));
    }

    let mut traj = Trajectory::new(dim);
    traj.push(0.0, x0)?;

    let mut stepper = Stepper::new(dim);
    let mut x = x0.to_vec();
    let mut x_next = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    let mut t = 0.0;
    let mut h = cfg.init_step;
    let mut sample_index = 1u64;
    let next_sample = |k: u64| {
        let s = k as f64 * cfg.sample_interval;
        if s >= cfg.length - 1e-9 * cfg.sample_interval {
            cfg.length
        } else {
            s
        }
    };
    let mut target = next_sample(sample_index);

    while t < cfg.length {
        let h_try = if cfg.fixed_step { cfg.init_step } else { h };
        let remaining = target - t;
        let (h_use, hits_target) = if remaining <= h_try * (1.0 + 1e-9) {
            (remaining, true)
        } else {
            (h_try, false)
        };
        if !(h_use > f64::EPSILON * t.abs().max(1.0)) {
            return Err(Error::Stiffness { t, h: h_use });
        }
        stepper.step(field, t, &x, h_use, &mut x_next, &mut err)?;

        if !cfg.fixed_step {
            let norm = error_norm(&err, &x, cfg);
            if norm.is_nan() {
                return Err(Error::Divergence { t });
            }
            let proposed = h_use * step_factor(norm);
            if norm > 1.0 {
                if cfg.min_step > 0.0 && proposed < cfg.min_step {
                    return Err(Error::Stiffness { t, h: proposed });
                }
                h = proposed;
                continue;
            }
            // A step shortened to land on the grid should not shrink the next one.
            h = if hits_target { proposed.max(h) } else { proposed };
        }

        std::mem::swap(&mut x, &mut x_next);
        if hits_target {
            t = target;
            traj.push(t, &x)?;
            sample_index += 1;
            target = next_sample(sample_index);
        } else {
            t += h_use;
        }
    }
    Ok(traj)
}
