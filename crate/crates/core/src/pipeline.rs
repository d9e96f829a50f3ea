//! End-to-end AMOC skill experiment: equilibria, threshold history, balanced
//! ensemble, indicator series and skill report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{find_equilibria, AmocParams, EquilibriumConfig, EquilibriumSet, HosingProfile, State2D};
use crate::ensemble::{build_balanced_ensemble, EnsembleSpec, LabeledEnsemble, TipClassifier};
use crate::ews::{indicator_rtip, indicator_salinity, return_rate_sq, IndicatorId, IndicatorSeries, SalinityBox};
use crate::skill::{default_rule, skill_row, IndicatorRule, SkillReport};
use crate::threshold::{evolve_threshold_backward, seed_basin_boundary, ThresholdConfig, ThresholdHistory};
use crate::{Error, Result};

/// Parameters, forcing and numerical settings of one AMOC scenario.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AmocScenario {
    pub params: AmocParams,
    pub hosing: HosingProfile,
    pub equilibria: EquilibriumConfig,
    pub threshold: ThresholdConfig,
}

impl AmocScenario {
    pub fn with_plateau(t_plat: f64) -> Self {
        Self {
            hosing: HosingProfile::with_plateau(t_plat),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.hosing.validate()?;
        self.threshold.validate()
    }

    /// Equilibria of the future-limit system (`H = H0`).
    pub fn future_equilibria(&self) -> Result<EquilibriumSet> {
        find_equilibria(self.hosing.h0, &self.params, None, &self.equilibria)
    }

    /// Threshold history from the end of forcing back to `t_start`.
    pub fn threshold_history(&self, eq: &EquilibriumSet, t_start: f64) -> Result<ThresholdHistory> {
        let t_seed = self.hosing.end();
        let seed = seed_basin_boundary(self.hosing.h0, t_seed, &self.params, eq, &self.threshold)?;
        if t_start >= t_seed {
            return Ok(ThresholdHistory { curves: vec![seed] });
        }
        evolve_threshold_backward(&seed, &self.hosing, &self.params, eq.off_state, t_start, &self.threshold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SkillSettings {
    /// Return-rate window in years.
    pub return_rate_window: f64,
    /// Snapshot interval of the threshold history used for the R-tipping indicator.
    pub indicator_snapshot_dt: f64,
    #[serde(rename = "S_N")]
    pub rule_s_n: IndicatorRule,
    #[serde(rename = "S_T")]
    pub rule_s_t: IndicatorRule,
    #[serde(rename = "R_INDICATOR")]
    pub rule_r: IndicatorRule,
    #[serde(rename = "RETURN_RATE_SQ")]
    pub rule_rr: IndicatorRule,
}

impl Default for SkillSettings {
    fn default() -> Self {
        Self {
            return_rate_window: 200.0,
            indicator_snapshot_dt: 1.0,
            rule_s_n: default_rule(IndicatorId::SN),
            rule_s_t: default_rule(IndicatorId::ST),
            rule_r: default_rule(IndicatorId::RIndicator),
            rule_rr: default_rule(IndicatorId::ReturnRateSq),
        }
    }
}

impl SkillSettings {
    pub fn rule(&self, id: IndicatorId) -> &IndicatorRule {
        match id {
            IndicatorId::SN => &self.rule_s_n,
            IndicatorId::ST => &self.rule_s_t,
            IndicatorId::RIndicator => &self.rule_r,
            IndicatorId::ReturnRateSq => &self.rule_rr,
        }
    }
}

/// All four indicator series for an ensemble, on the trajectories' common time grid.
pub fn compute_indicators(
    ensemble: &LabeledEnsemble,
    history: &ThresholdHistory,
    off_state: State2D,
    tol_geo: f64,
    return_rate_window: f64,
) -> Result<Vec<IndicatorSeries>> {
    let times = ensemble
        .trajectories
        .first()
        .map(|t| t.times.clone())
        .ok_or_else(|| Error::InvalidParameter("empty ensemble".into()))?;
    if ensemble.trajectories.iter().any(|t| t.times != times) {
        return Err(Error::InvalidParameter("ensemble members use different time grids".into()));
    }
    let dt_sample = if times.len() > 1 { times[1] - times[0] } else { 1.0 };
    type Rows = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<Option<f64>>);
    let rows: Vec<Rows> = ensemble
        .trajectories
        .par_iter()
        .map(|traj| {
            let s_n = indicator_salinity(traj, SalinityBox::North);
            let s_t = indicator_salinity(traj, SalinityBox::Tropical);
            let r = indicator_rtip(traj, history, off_state, tol_geo)?;
            let rr = return_rate_sq(&s_n, dt_sample, return_rate_window)?;
            Ok((s_n, s_t, r, rr))
        })
        .collect::<Result<_>>()?;
    let wrap = |v: &[f64]| v.iter().map(|&x| Some(x)).collect::<Vec<_>>();
    let mut out: Vec<IndicatorSeries> = IndicatorId::ALL
        .iter()
        .map(|&id| IndicatorSeries { id, times: times.clone(), values: Vec::with_capacity(rows.len()) })
        .collect();
    for (s_n, s_t, r, rr) in rows {
        out[0].values.push(wrap(&s_n));
        out[1].values.push(wrap(&s_t));
        out[2].values.push(wrap(&r));
        out[3].values.push(rr);
    }
    Ok(out)
}

/// Skill rows for every indicator at every sample time.
pub fn skill_report(series: &[IndicatorSeries], labels: &[bool], settings: &SkillSettings) -> Result<SkillReport> {
    let mut rows = Vec::new();
    for s in series {
        let rule = settings.rule(s.id);
        let part: Vec<_> = (0..s.times.len())
            .into_par_iter()
            .map(|k| skill_row(s.id, s.times[k], &s.column(k), labels, rule))
            .collect::<Result<_>>()?;
        rows.extend(part);
    }
    Ok(SkillReport { rows })
}

#[derive(Debug, Clone)]
pub struct SkillRun {
    pub equilibria: EquilibriumSet,
    pub history: ThresholdHistory,
    pub ensemble: LabeledEnsemble,
    pub indicators: Vec<IndicatorSeries>,
    pub report: SkillReport,
}

/// The full skill experiment for one scenario and ensemble specification.
pub fn run_skill(
    scenario: &AmocScenario,
    spec: &EnsembleSpec,
    classifier: &TipClassifier,
    settings: &SkillSettings,
) -> Result<SkillRun> {
    scenario.validate()?;
    let eq = scenario.future_equilibria()?;
    let mut thr_scenario = *scenario;
    thr_scenario.threshold.snapshot_dt = settings.indicator_snapshot_dt;
    let history = thr_scenario.threshold_history(&eq, spec.t_init)?;
    let ensemble = build_balanced_ensemble(
        &scenario.params,
        &scenario.hosing,
        scenario.hosing.end(),
        &eq,
        spec,
        classifier,
    )?;
    let indicators = compute_indicators(
        &ensemble,
        &history,
        eq.off_state,
        scenario.threshold.tol_geo,
        settings.return_rate_window,
    )?;
    let report = skill_report(&indicators, &ensemble.labels, settings)?;
    Ok(SkillRun { equilibria: eq, history, ensemble, indicators, report })
}
