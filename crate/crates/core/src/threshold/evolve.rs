use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::ThresholdCurve;
use super::spline::resample_cubic;
use crate::dynamics::{AmocParams, EquilibriumSet, Forcing, HosingProfile, PhaseWindow, State2D};
use crate::integrators::rk4_step;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    /// Phase window of interest; the curve lives in this window enlarged by `enlarge`.
    pub window: PhaseWindow,
    pub enlarge: f64,
    /// Offset from the edge state along the stable eigenvector.
    pub epsilon: f64,
    /// Total arc length cap for the seeded manifold (split evenly between branches).
    pub arc_extent: f64,
    pub min_branch_arc: f64,
    pub dt: f64,
    pub reinterp_dt: f64,
    pub snapshot_dt: f64,
    pub target_spacing: f64,
    pub tol_geo: f64,
    pub max_seed_steps: usize,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            window: PhaseWindow::default(),
            enlarge: 2.0,
            epsilon: 1e-6,
            arc_extent: 20.0,
            min_branch_arc: 0.05,
            dt: 0.1,
            reinterp_dt: 1.0,
            snapshot_dt: 5.0,
            target_spacing: 0.01,
            tol_geo: 1e-9,
            max_seed_steps: 1_000_000,
        }
    }
}

impl ThresholdConfig {
    pub fn outer_window(&self) -> PhaseWindow {
        self.window.enlarged(self.enlarge)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("enlarge", self.enlarge),
            ("epsilon", self.epsilon),
            ("arc_extent", self.arc_extent),
            ("dt", self.dt),
            ("reinterp_dt", self.reinterp_dt),
            ("snapshot_dt", self.snapshot_dt),
            ("target_spacing", self.target_spacing),
            ("tol_geo", self.tol_geo),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("threshold.{name} must be > 0, got {v}")));
            }
        }
        if self.enlarge < 1.0 {
            return Err(Error::InvalidParameter("threshold.enlarge must be >= 1".into()));
        }
        let ratio = self.snapshot_dt / self.reinterp_dt;
        if (ratio - ratio.round()).abs() > 1e-9 || ratio.round() < 1.0 {
            return Err(Error::InvalidParameter(
                "threshold.snapshot_dt must be a positive multiple of reinterp_dt".into(),
            ));
        }
        Ok(())
    }
}

/// Stable manifold of the edge state under the frozen field at `h_final`,
/// as an ordered polyline from the end of the `+v_s` branch, through the edge
/// state, to the end of the `-v_s` branch, closed so that OFF lies outside.
pub fn seed_basin_boundary(
    h_final: f64,
    t_seed: f64,
    params: &AmocParams,
    eq: &EquilibriumSet,
    cfg: &ThresholdConfig,
) -> Result<ThresholdCurve> {
    cfg.validate()?;
    let outer = cfg.outer_window();
    let frozen = HosingProfile::constant(h_final);
    let v_s = eq.edge_eigen.stable.vector;
    let mut branches = Vec::with_capacity(2);
    for sign in [1.0, -1.0] {
        let mut x = eq.edge_state + v_s * (sign * cfg.epsilon);
        let mut pts = vec![x];
        let mut arc = 0.0;
        let mut steps = 0;
        loop {
            let next = rk4_step(params, &frozen, 0.0, x, -cfg.dt);
            if !next.is_finite() || !outer.contains(next) {
                break;
            }
            arc += next.distance(x);
            x = next;
            pts.push(x);
            steps += 1;
            if arc >= 0.5 * cfg.arc_extent || steps >= cfg.max_seed_steps {
                break;
            }
        }
        if arc < cfg.min_branch_arc {
            return Err(Error::DegenerateManifold(format!(
                "branch {sign:+} reached arc length {arc:.3e} before leaving the window"
            )));
        }
        branches.push(pts);
    }
    let mut points: Vec<State2D> = branches[0].iter().rev().copied().collect();
    points.push(eq.edge_state);
    points.extend(branches[1].iter().copied());
    let points = resample_cubic(&points, cfg.target_spacing);
    Ok(ThresholdCurve::open(t_seed, points).close_excluding(&outer, eq.off_state))
}

/// Time-ordered snapshots of the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdHistory {
    pub curves: Vec<ThresholdCurve>,
}

impl ThresholdHistory {
    pub fn times(&self) -> Vec<f64> {
        self.curves.iter().map(|c| c.t).collect()
    }

    /// Latest snapshot not later than `t`.
    pub fn at_or_before(&self, t: f64) -> Option<&ThresholdCurve> {
        let idx = self.curves.partition_point(|c| c.t <= t + 1e-9);
        idx.checked_sub(1).map(|i| &self.curves[i])
    }

    /// Snapshot nearest to `t`.
    pub fn nearest(&self, t: f64) -> Option<&ThresholdCurve> {
        self.curves
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "t,point_index,x1,x2")?;
        for c in &self.curves {
            for (i, p) in c.points.iter().enumerate() {
                writeln!(w, "{},{},{},{}", c.t, i, p.s_n, p.s_t)?;
            }
        }
        Ok(())
    }
}

/// Evolve `seed` backward under `forcing` down to `t_start`.
///
/// Every `reinterp_dt` the points that left the enlarged window (or blew up)
/// are dropped and the rest re-sampled at `target_spacing`. Snapshots are kept
/// every `snapshot_dt` counted back from `seed.t`, plus one at `t_start`.
pub fn evolve_threshold_backward(
    seed: &ThresholdCurve,
    forcing: &(impl Forcing + ?Sized),
    params: &AmocParams,
    off_state: State2D,
    t_start: f64,
    cfg: &ThresholdConfig,
) -> Result<ThresholdHistory> {
    cfg.validate()?;
    if !(t_start < seed.t) {
        return Err(Error::InvalidParameter(format!(
            "t_start ({t_start}) must precede the seed time ({})",
            seed.t
        )));
    }
    let outer = cfg.outer_window();
    let per_snapshot = (cfg.snapshot_dt / cfg.reinterp_dt).round() as usize;
    let mut curves = vec![seed.clone()];
    let mut points = seed.points.clone();
    let mut k = 0usize;
    loop {
        let t = seed.t - k as f64 * cfg.reinterp_dt;
        let t_next = (seed.t - (k + 1) as f64 * cfg.reinterp_dt).max(t_start);
        let span = t - t_next;
        let n = ((span / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
        let h = -span / n as f64;
        points = points
            .par_iter()
            .filter_map(|&x0| {
                let mut x = x0;
                for j in 0..n {
                    x = rk4_step(params, forcing, t + j as f64 * h, x, h);
                    if !x.is_finite() {
                        return None;
                    }
                }
                outer.contains(x).then_some(x)
            })
            .collect();
        if points.len() < 3 {
            return Err(Error::CurveCollapse { t: t_next, points: points.len() });
        }
        points = resample_cubic(&points, cfg.target_spacing);
        if points.len() < 3 {
            return Err(Error::CurveCollapse { t: t_next, points: points.len() });
        }
        k += 1;
        let done = t_next <= t_start;
        if k % per_snapshot == 0 || done {
            curves.push(ThresholdCurve::open(t_next, points.clone()).close_excluding(&outer, off_state));
        }
        if done {
            break;
        }
    }
    curves.reverse();
    Ok(ThresholdHistory { curves })
}
