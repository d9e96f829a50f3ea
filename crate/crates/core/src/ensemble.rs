//! Seeded Monte-Carlo ensembles with balanced tip/no-tip classes.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{EquilibriumSet, Forcing, State2D, VectorField};
use crate::integrators::{integrate_sde, rk4_endpoint, IntegratorConfig, Method, NoiseModel, Trajectory};
use crate::{Error, Result};

/// Deterministic tail used to settle each member into a basin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TipClassifier {
    pub r_class: f64,
    /// Years past the end of forcing.
    pub horizon: f64,
    pub dt: f64,
}

impl Default for TipClassifier {
    fn default() -> Self {
        Self {
            r_class: 0.05,
            horizon: 2000.0,
            dt: 0.1,
        }
    }
}

/// Settle `(t, x)` deterministically until `t_forcing_end + horizon` and report
/// whether it ends in the OFF ball (`true`) or the ON ball (`false`).
pub fn classify_tip<M>(
    model: &M,
    forcing: &(impl Forcing + ?Sized),
    t: f64,
    x: State2D,
    t_forcing_end: f64,
    eq: &EquilibriumSet,
    cls: &TipClassifier,
) -> Result<bool>
where
    M: VectorField<State = State2D>,
{
    let t_horizon = t_forcing_end + cls.horizon;
    let end = if t < t_horizon {
        match rk4_endpoint(model, forcing, x, t, t_horizon, cls.dt) {
            Ok(x) => x,
            Err(Error::NonFiniteState { .. }) => return Err(Error::Unresolved { t_horizon }),
            Err(e) => return Err(e),
        }
    } else {
        x
    };
    if end.distance(eq.off_state) <= cls.r_class {
        Ok(true)
    } else if end.distance(eq.on_state) <= cls.r_class {
        Ok(false)
    } else {
        Err(Error::Unresolved { t_horizon })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSpec {
    pub n_target_per_class: usize,
    pub x0: Option<State2D>,
    pub t_init: f64,
    /// Noise runs from `t_init` to here; the classifier tail takes over after.
    pub t_end: f64,
    pub dt: f64,
    /// Samples kept per trajectory: one every `record_stride` steps.
    pub record_stride: usize,
    pub noise: NoiseModel,
    pub base_seed: u64,
    pub max_draws: usize,
    pub batch_size: usize,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            n_target_per_class: 100,
            x0: None,
            t_init: 0.0,
            t_end: 600.0,
            dt: 0.1,
            record_stride: 10,
            noise: NoiseModel::default(),
            base_seed: 0,
            max_draws: 2000,
            batch_size: 64,
        }
    }
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_target_per_class == 0 {
            return Err(Error::InvalidParameter("ensemble.n_target_per_class must be >= 1".into()));
        }
        if self.max_draws < 2 * self.n_target_per_class {
            return Err(Error::InvalidParameter(
                "ensemble.max_draws must be at least 2 * n_target_per_class".into(),
            ));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidParameter("ensemble.batch_size must be >= 1".into()));
        }
        if !(self.t_end > self.t_init) {
            return Err(Error::InvalidParameter("ensemble.t_end must exceed t_init".into()));
        }
        self.cfg().validate()?;
        self.noise.validate()
    }

    fn cfg(&self) -> IntegratorConfig {
        IntegratorConfig {
            dt: self.dt,
            method: Method::EulerMaruyama,
            t_start: self.t_init,
            t_end: self.t_end,
            record_stride: self.record_stride,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledEnsemble {
    pub trajectories: Vec<Trajectory<State2D>>,
    pub labels: Vec<bool>,
    pub draws: usize,
    pub unresolved: usize,
}

impl LabeledEnsemble {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn write_labels_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "member_index,seed,tipped")?;
        for (i, (traj, &tip)) in self.trajectories.iter().zip(&self.labels).enumerate() {
            writeln!(w, "{},{},{}", i, traj.seed.unwrap_or_default(), u8::from(tip))?;
        }
        Ok(())
    }

    pub fn write_trajectories_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        for (i, traj) in self.trajectories.iter().enumerate() {
            traj.write_csv(w, i == 0)?;
        }
        Ok(())
    }
}

/// Draw members with seeds `base_seed, base_seed + 1, ...` and keep the first
/// `n_target_per_class` of each class in seed order. Members are simulated in
/// parallel batches but retained in seed order, so the result is independent
/// of scheduling.
pub fn build_balanced_ensemble<M>(
    model: &M,
    forcing: &(impl Forcing + ?Sized),
    t_forcing_end: f64,
    eq: &EquilibriumSet,
    spec: &EnsembleSpec,
    cls: &TipClassifier,
) -> Result<LabeledEnsemble>
where
    M: VectorField<State = State2D>,
{
    spec.validate()?;
    let x0 = spec.x0.unwrap_or(eq.on_state);
    let cfg = spec.cfg();
    let target = spec.n_target_per_class;
    let mut out = LabeledEnsemble {
        trajectories: Vec::with_capacity(2 * target),
        labels: Vec::with_capacity(2 * target),
        draws: 0,
        unresolved: 0,
    };
    let (mut n_tip, mut n_safe) = (0, 0);
    while out.draws < spec.max_draws && (n_tip < target || n_safe < target) {
        let batch = spec.batch_size.min(spec.max_draws - out.draws);
        let first = out.draws as u64;
        let results: Vec<Result<(Trajectory<State2D>, Option<bool>)>> = (0..batch as u64)
            .into_par_iter()
            .map(|i| {
                let seed = spec.base_seed.wrapping_add(first + i);
                let traj = integrate_sde(model, forcing, x0, &spec.noise, seed, &cfg)?;
                let (t, x) = traj.last();
                let label = match classify_tip(model, forcing, t, x, t_forcing_end, eq, cls) {
                    Ok(l) => Some(l),
                    Err(Error::Unresolved { .. }) => None,
                    Err(e) => return Err(e),
                };
                Ok((traj, label))
            })
            .collect();
        for r in results {
            out.draws += 1;
            let (traj, label) = match r {
                Ok(v) => v,
                Err(Error::NonFiniteState { .. }) => {
                    out.unresolved += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            match label {
                None => out.unresolved += 1,
                Some(true) if n_tip < target => {
                    n_tip += 1;
                    out.trajectories.push(traj);
                    out.labels.push(true);
                }
                Some(false) if n_safe < target => {
                    n_safe += 1;
                    out.trajectories.push(traj);
                    out.labels.push(false);
                }
                Some(_) => {}
            }
            if n_tip == target && n_safe == target {
                break;
            }
        }
    }
    if n_tip < target || n_safe < target {
        return Err(Error::ClassStarvation {
            draws: out.draws,
            tipped: n_tip,
            not_tipped: n_safe,
            target,
        });
    }
    Ok(out)
}
