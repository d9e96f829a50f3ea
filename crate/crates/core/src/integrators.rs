//! Fixed-step RK4, Euler and Euler–Maruyama integration.

use std::io::Write;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Forcing, Phase, State2D, VectorField};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4,
    Euler,
    EulerMaruyama,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub method: Method,
    pub t_start: f64,
    pub t_end: f64,
    pub record_stride: usize,
}

impl IntegratorConfig {
    pub fn rk4(t_start: f64, t_end: f64, dt: f64) -> Self {
        Self {
            dt,
            method: Method::Rk4,
            t_start,
            t_end,
            record_stride: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {}", self.dt)));
        }
        if !self.t_start.is_finite() || !self.t_end.is_finite() || self.t_start == self.t_end {
            return Err(Error::InvalidParameter(format!(
                "time bounds must be finite and distinct, got [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter("record_stride must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of uniform steps and the signed step that exactly spans the interval.
    pub fn steps(&self) -> (usize, f64) {
        let span = self.t_end - self.t_start;
        let n = ((span.abs() / self.dt) - 1e-9).ceil().max(1.0) as usize;
        (n, span / n as f64)
    }
}

/// Sampled solution of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub seed: Option<u64>,
    pub forcing_id: String,
}

impl<S: Phase> Trajectory<S> {
    pub fn last(&self) -> (f64, S) {
        (*self.times.last().unwrap(), *self.states.last().unwrap())
    }

    pub fn write_csv<W: Write>(&self, w: &mut W, header: bool) -> Result<()> {
        if header {
            let cols: Vec<String> = (1..=S::DIM).map(|i| format!("x{i}")).collect();
            writeln!(w, "t,{},seed,forcing_id", cols.join(","))?;
        }
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        let id = csv_field(&self.forcing_id);
        for (t, x) in self.times.iter().zip(&self.states) {
            write!(w, "{t}")?;
            for i in 0..S::DIM {
                write!(w, ",{}", x.component(i))?;
            }
            writeln!(w, ",{seed},{id}")?;
        }
        Ok(())
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn rk4_step<M: VectorField>(
    model: &M,
    forcing: &(impl Forcing + ?Sized),
    t: f64,
    x: M::State,
    h: f64,
) -> M::State {
    let half = t + 0.5 * h;
    let p_mid = forcing.level(half);
    let k1 = model.rhs(x, forcing.level(t));
    let k2 = model.rhs(x + k1 * (0.5 * h), p_mid);
    let k3 = model.rhs(x + k2 * (0.5 * h), p_mid);
    let k4 = model.rhs(x + k3 * h, forcing.level(t + h));
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

pub fn euler_step<M: VectorField>(
    model: &M,
    forcing: &(impl Forcing + ?Sized),
    t: f64,
    x: M::State,
    h: f64,
) -> M::State {
    x + model.rhs(x, forcing.level(t)) * h
}

/// Deterministic integration with RK4 or Euler; `t_end < t_start` runs backward.
pub fn integrate_ode<M: VectorField>(
    model: &M,
    forcing: &(impl Forcing + ?Sized),
    x0: M::State,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<M::State>> {
    cfg.validate()?;
    let step = match cfg.method {
        Method::Rk4 => rk4_step::<M>,
        Method::Euler => euler_step::<M>,
        Method::EulerMaruyama => {
            return Err(Error::InvalidParameter(
                "integrate_ode needs a deterministic method".into(),
            ))
        }
    };
    let (n, h) = cfg.steps();
    let mut traj = Trajectory {
        times: Vec::with_capacity(n / cfg.record_stride + 2),
        states: Vec::with_capacity(n / cfg.record_stride + 2),
        seed: None,
        forcing_id: forcing.id(),
    };
    traj.times.push(cfg.t_start);
    traj.states.push(x0);
    let mut x = x0;
    for k in 0..n {
        let t = cfg.t_start + k as f64 * h;
        x = step(model, forcing, t, x, h);
        let t_next = if k + 1 == n { cfg.t_end } else { cfg.t_start + (k + 1) as f64 * h };
        if !x.is_finite() {
            return Err(Error::NonFiniteState { t: t_next });
        }
        if (k + 1) % cfg.record_stride == 0 || k + 1 == n {
            traj.times.push(t_next);
            traj.states.push(x);
        }
    }
    Ok(traj)
}

/// Endpoint of an RK4 run without recording samples.
pub fn rk4_endpoint<M: VectorField>(
    model: &M,
    forcing: &(impl Forcing + ?Sized),
    x0: M::State,
    t_start: f64,
    t_end: f64,
    dt: f64,
) -> Result<M::State> {
    let cfg = IntegratorConfig::rk4(t_start, t_end, dt);
    cfg.validate()?;
    let (n, h) = cfg.steps();
    let mut x = x0;
    for k in 0..n {
        x = rk4_step(model, forcing, t_start + k as f64 * h, x, h);
        if !x.is_finite() {
            return Err(Error::NonFiniteState { t: t_start + (k + 1) as f64 * h });
        }
    }
    Ok(x)
}

/// Additive noise `sigma * A * dW`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    pub sigma: f64,
    #[serde(rename = "A11")]
    pub a11: f64,
    #[serde(rename = "A12")]
    pub a12: f64,
    #[serde(rename = "A21")]
    pub a21: f64,
    #[serde(rename = "A22")]
    pub a22: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            sigma: 0.01,
            a11: 0.1263,
            a12: -0.0869,
            a21: 0.0,
            a22: 0.1008,
        }
    }
}

impl NoiseModel {
    /// Scalar noise of strength `sigma`.
    pub fn scalar(sigma: f64) -> Self {
        Self {
            sigma,
            a11: 1.0,
            a12: 0.0,
            a21: 0.0,
            a22: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if ![self.a11, self.a12, self.a21, self.a22].iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidParameter("noise matrix must be finite".into()));
        }
        Ok(())
    }

    /// `sigma^2 A A^T`, the increment covariance per unit time.
    pub fn covariance_rate(&self) -> [[f64; 2]; 2] {
        let s2 = self.sigma * self.sigma;
        [
            [
                s2 * (self.a11 * self.a11 + self.a12 * self.a12),
                s2 * (self.a11 * self.a21 + self.a12 * self.a22),
            ],
            [
                s2 * (self.a21 * self.a11 + self.a22 * self.a12),
                s2 * (self.a21 * self.a21 + self.a22 * self.a22),
            ],
        ]
    }
}

/// How a pair of standard normals maps to a state increment.
pub trait NoiseShape: Phase {
    fn kick(noise: &NoiseModel, xi: [f64; 2], scale: f64) -> Self;
}

impl NoiseShape for f64 {
    fn kick(noise: &NoiseModel, xi: [f64; 2], scale: f64) -> Self {
        noise.sigma * noise.a11 * xi[0] * scale
    }
}

impl NoiseShape for State2D {
    fn kick(noise: &NoiseModel, xi: [f64; 2], scale: f64) -> Self {
        let s = noise.sigma * scale;
        State2D::new(
            s * (noise.a11 * xi[0] + noise.a12 * xi[1]),
            s * (noise.a21 * xi[0] + noise.a22 * xi[1]),
        )
    }
}

/// Standard normal pairs from a ChaCha8 stream keyed by `seed`.
///
/// Each step consumes exactly two 64-bit words, so step `k` always reads
/// stream position `2k` regardless of how the run was chunked.
pub struct NormalStream {
    rng: ChaCha8Rng,
}

impl NormalStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream positioned at the start of step `step`.
    pub fn at_step(seed: u64, step: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_word_pos(4 * step as u128);
        Self { rng }
    }

    fn open_unit(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Box–Muller pair.
    pub fn next_pair(&mut self) -> [f64; 2] {
        let u1 = self.open_unit();
        let u2 = self.open_unit();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        [r * c, r * s]
    }
}

/// Euler–Maruyama integration. `sigma = 0` reproduces forward Euler exactly.
pub fn integrate_sde<M>(
    model: &M,
    forcing: &(impl Forcing + ?Sized),
    x0: M::State,
    noise: &NoiseModel,
    seed: u64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<M::State>>
where
    M: VectorField,
    M::State: NoiseShape,
{
    cfg.validate()?;
    noise.validate()?;
    if cfg.t_end < cfg.t_start {
        return Err(Error::InvalidParameter("stochastic integration runs forward only".into()));
    }
    let (n, h) = cfg.steps();
    let sqrt_h = h.sqrt();
    let mut stream = NormalStream::new(seed);
    let mut traj = Trajectory {
        times: vec![cfg.t_start],
        states: vec![x0],
        seed: Some(seed),
        forcing_id: forcing.id(),
    };
    let mut x = x0;
    for k in 0..n {
        let t = cfg.t_start + k as f64 * h;
        let xi = stream.next_pair();
        x = x + model.rhs(x, forcing.level(t)) * h + M::State::kick(noise, xi, sqrt_h);
        let t_next = if k + 1 == n { cfg.t_end } else { cfg.t_start + (k + 1) as f64 * h };
        if !x.is_finite() {
            return Err(Error::NonFiniteState { t: t_next });
        }
        if (k + 1) % cfg.record_stride == 0 || k + 1 == n {
            traj.times.push(t_next);
            traj.states.push(x);
        }
    }
    Ok(traj)
}
