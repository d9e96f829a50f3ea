use std::path::{Path, PathBuf};

use rtip_core::dynamics::{AmocParams, EquilibriumConfig, ExampleParams, HosingProfile, PhaseWindow, State2D};
use rtip_core::ensemble::{EnsembleSpec, TipClassifier};
use rtip_core::integrators::NoiseModel;
use rtip_core::pipeline::{AmocScenario, SkillSettings};
use rtip_core::threshold::ThresholdConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Example1d,
    #[default]
    Amoc3box,
}

/// Settings for the 1-D fold example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExampleBlock {
    pub p_plus: f64,
    pub theta: f64,
    pub sigma: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_stride: usize,
    /// Ramp rates of the deterministic sweep.
    pub deterministic_thetas: Vec<f64>,
    /// Stochastic members at `theta`.
    pub n_members: usize,
}

impl Default for ExampleBlock {
    fn default() -> Self {
        Self {
            p_plus: 1.7,
            theta: 0.08,
            sigma: 0.1,
            t_start: -200.0,
            t_end: 200.0,
            dt: 0.01,
            record_stride: 10,
            deterministic_thetas: vec![0.015, 0.08, 0.4],
            n_members: 20,
        }
    }
}

impl ExampleBlock {
    pub fn params(&self) -> ExampleParams {
        ExampleParams { p_plus: self.p_plus, theta: self.theta, sigma: self.sigma }
    }
}

/// Deterministic AMOC run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateBlock {
    /// Initial state; the ON state of the unforced system if absent.
    pub x0: Option<State2D>,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_stride: usize,
}

impl Default for SimulateBlock {
    fn default() -> Self {
        Self { x0: None, t_start: 0.0, t_end: 1600.0, dt: 0.1, record_stride: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FatemapBlock {
    pub t_init: Vec<f64>,
    pub n_n: usize,
    pub n_t: usize,
    pub dt: f64,
    /// Years past the end of forcing before the fate is read off.
    pub horizon: f64,
    /// Grid window; the equilibrium window if absent.
    pub window: Option<PhaseWindow>,
}

impl Default for FatemapBlock {
    fn default() -> Self {
        Self {
            t_init: vec![-200.0, -100.0, 0.0],
            n_n: 41,
            n_t: 41,
            dt: 0.1,
            horizon: 2000.0,
            window: None,
        }
    }
}

/// Ensemble settings; noise and seed come from their own top-level keys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleBlock {
    pub n_target_per_class: usize,
    pub x0: Option<State2D>,
    pub t_init: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_stride: usize,
    pub max_draws: usize,
    pub batch_size: usize,
}

impl Default for EnsembleBlock {
    fn default() -> Self {
        let s = EnsembleSpec::default();
        Self {
            n_target_per_class: s.n_target_per_class,
            x0: s.x0,
            t_init: s.t_init,
            t_end: s.t_end,
            dt: s.dt,
            record_stride: s.record_stride,
            max_draws: s.max_draws,
            batch_size: s.batch_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub base_seed: u64,
    pub output_dir: Option<PathBuf>,
    pub example: ExampleBlock,
    pub amoc: AmocParams,
    pub hosing: HosingProfile,
    pub noise: NoiseModel,
    pub equilibria: EquilibriumConfig,
    pub simulate: SimulateBlock,
    pub threshold: ThresholdConfig,
    /// Earliest snapshot of the `threshold` subcommand's history.
    pub threshold_t_start: f64,
    pub fatemap: FatemapBlock,
    pub ensemble: EnsembleBlock,
    pub classifier: TipClassifier,
    pub skill: SkillSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::default(),
            base_seed: 0,
            output_dir: None,
            example: ExampleBlock::default(),
            amoc: AmocParams::default(),
            hosing: HosingProfile::default(),
            noise: NoiseModel::default(),
            equilibria: EquilibriumConfig::default(),
            simulate: SimulateBlock::default(),
            threshold: ThresholdConfig::default(),
            threshold_t_start: 0.0,
            fatemap: FatemapBlock::default(),
            ensemble: EnsembleBlock::default(),
            classifier: TipClassifier::default(),
            skill: SkillSettings::default(),
        }
    }
}

fn config_err(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {msg}"))
}

fn check(key: &str, r: rtip_core::Result<()>) -> CliResult<()> {
    r.map_err(|e| config_err(key, e))
}

fn positive(key: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(config_err(key, format!("must be > 0, got {v}")))
    }
}

fn window_ok(key: &str, w: &PhaseWindow) -> CliResult<()> {
    if w.s_n_min < w.s_n_max && w.s_t_min < w.s_t_max {
        Ok(())
    } else {
        Err(config_err(key, "min must be below max on both axes"))
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> CliResult<()> {
        let ex = &self.example;
        check("example", ex.params().validate())?;
        positive("example.dt", ex.dt)?;
        if !(ex.t_end > ex.t_start) {
            return Err(config_err("example.t_end", "must exceed example.t_start"));
        }
        if ex.record_stride == 0 {
            return Err(config_err("example.record_stride", "must be >= 1"));
        }
        for &th in &ex.deterministic_thetas {
            if !(th >= 0.0) {
                return Err(config_err("example.deterministic_thetas", format!("must be >= 0, got {th}")));
            }
        }

        check("amoc", self.amoc.validate())?;
        check("hosing", self.hosing.validate())?;
        check("noise", self.noise.validate())?;
        positive("equilibria.h_jac", self.equilibria.h_jac)?;
        positive("equilibria.tol_eq", self.equilibria.tol_eq)?;
        if self.equilibria.seeds_per_axis < 2 {
            return Err(config_err("equilibria.seeds_per_axis", "must be >= 2"));
        }
        window_ok("equilibria.window", &self.equilibria.window)?;

        let sim = &self.simulate;
        positive("simulate.dt", sim.dt)?;
        if !(sim.t_end > sim.t_start) {
            return Err(config_err("simulate.t_end", "must exceed simulate.t_start"));
        }
        if sim.record_stride == 0 {
            return Err(config_err("simulate.record_stride", "must be >= 1"));
        }

        check("threshold", self.threshold.validate())?;
        window_ok("threshold.window", &self.threshold.window)?;
        if !self.threshold_t_start.is_finite() {
            return Err(config_err("threshold_t_start", "must be finite"));
        }

        let fm = &self.fatemap;
        if fm.t_init.is_empty() {
            return Err(config_err("fatemap.t_init", "must list at least one time"));
        }
        if fm.n_n < 2 || fm.n_t < 2 {
            return Err(config_err("fatemap.n_n", "grid needs at least 2 points per axis"));
        }
        positive("fatemap.dt", fm.dt)?;
        positive("fatemap.horizon", fm.horizon)?;
        if let Some(w) = &fm.window {
            window_ok("fatemap.window", w)?;
        }

        check("ensemble", self.ensemble_spec().validate())?;
        positive("classifier.r_class", self.classifier.r_class)?;
        positive("classifier.horizon", self.classifier.horizon)?;
        positive("classifier.dt", self.classifier.dt)?;
        positive("skill.return_rate_window", self.skill.return_rate_window)?;
        positive("skill.indicator_snapshot_dt", self.skill.indicator_snapshot_dt)?;
        Ok(())
    }

    pub fn scenario(&self) -> AmocScenario {
        AmocScenario {
            params: self.amoc,
            hosing: self.hosing,
            equilibria: self.equilibria,
            threshold: self.threshold,
        }
    }

    pub fn ensemble_spec(&self) -> EnsembleSpec {
        let e = &self.ensemble;
        EnsembleSpec {
            n_target_per_class: e.n_target_per_class,
            x0: e.x0,
            t_init: e.t_init,
            t_end: e.t_end,
            dt: e.dt,
            record_stride: e.record_stride,
            noise: self.noise,
            base_seed: self.base_seed,
            max_draws: e.max_draws,
            batch_size: e.batch_size,
        }
    }
}
