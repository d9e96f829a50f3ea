use serde::{Deserialize, Serialize};

use super::geometry::{classify_crossing, even_odd_contains, point_segment_distance, Crossing};
use crate::dynamics::{PhaseWindow, State2D};
use crate::{Error, Result};

/// The R-tipping threshold at one instant.
///
/// `points` is the open threshold polyline. When `closed`, `closure` holds the
/// path along the window boundary from the last point back to the first that
/// turns the polyline into a region excluding the OFF state. Closure edges take
/// part in parity tests but not in distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCurve {
    pub t: f64,
    pub points: Vec<State2D>,
    pub closed: bool,
    pub closure: Vec<State2D>,
}

/// Attempts made by [`ThresholdCurve::is_inside`] before giving up.
const ANCHOR_RETRIES: usize = 8;

impl ThresholdCurve {
    pub fn open(t: f64, points: Vec<State2D>) -> Self {
        Self {
            t,
            points,
            closed: false,
            closure: Vec::new(),
        }
    }

    /// Close along `window`, choosing the side whose region excludes `off_state`.
    pub fn close_excluding(mut self, window: &PhaseWindow, off_state: State2D) -> Self {
        let (first, last) = match (self.points.first(), self.points.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return self,
        };
        let b_last = window.project_to_boundary(last);
        let b_first = window.project_to_boundary(first);
        let ccw = boundary_path(window, b_last, b_first, true);
        let cw = boundary_path(window, b_last, b_first, false);
        let polygon = |path: &[State2D]| -> Vec<State2D> {
            self.points.iter().chain(path).copied().collect()
        };
        let closure = if even_odd_contains(&polygon(&ccw), off_state) { cw } else { ccw };
        self.closure = closure;
        self.closed = true;
        self
    }

    /// Threshold edges, excluding the closure.
    pub fn edges(&self) -> impl Iterator<Item = (State2D, State2D)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// All edges of the closed polygon (or of the open polyline if not closed).
    pub fn parity_edges(&self) -> impl Iterator<Item = (State2D, State2D)> + '_ {
        let ring: Vec<State2D> = if self.closed {
            self.points.iter().chain(&self.closure).chain(self.points.first()).copied().collect()
        } else {
            self.points.clone()
        };
        (0..ring.len().saturating_sub(1)).map(move |i| (ring[i], ring[i + 1]))
    }

    /// Parity of transversal crossings of `[anchor, x]` with the curve.
    pub fn crossing_parity(&self, x: State2D, anchor: State2D, tol_geo: f64) -> Result<bool> {
        let mut odd = false;
        for (a, b) in self.parity_edges() {
            match classify_crossing(anchor, x, a, b, tol_geo) {
                Crossing::None => {}
                Crossing::Transversal => odd = !odd,
                Crossing::Degenerate => return Err(Error::DegenerateIntersection),
            }
        }
        Ok(odd)
    }

    /// Whether `x` lies in the region bounded by the threshold, by crossing
    /// parity of the segment from `off_state` to `x`. On a degenerate
    /// intersection the anchor is nudged by `10 tol_geo` in a rotating direction.
    pub fn is_inside(&self, x: State2D, off_state: State2D, tol_geo: f64) -> Result<bool> {
        if x == off_state {
            return Ok(false);
        }
        for k in 0..=ANCHOR_RETRIES {
            let anchor = if k == 0 {
                off_state
            } else {
                let angle = (k - 1) as f64 * std::f64::consts::TAU / ANCHOR_RETRIES as f64 + 0.3;
                off_state + State2D::new(angle.cos(), angle.sin()) * (10.0 * tol_geo * k as f64)
            };
            match self.crossing_parity(x, anchor, tol_geo) {
                Err(Error::DegenerateIntersection) => continue,
                other => return other,
            }
        }
        Err(Error::DegenerateIntersection)
    }

    /// Euclidean distance to the nearest threshold edge.
    pub fn distance(&self, x: State2D) -> f64 {
        if self.points.len() == 1 {
            return x.distance(self.points[0]);
        }
        self.edges()
            .map(|(a, b)| point_segment_distance(x, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Positive inside, negative outside, zero within `tol_geo` of the threshold.
    pub fn signed_distance(&self, x: State2D, off_state: State2D, tol_geo: f64) -> Result<f64> {
        let d = self.distance(x);
        if d <= tol_geo {
            return Ok(0.0);
        }
        match self.is_inside(x, off_state, tol_geo) {
            Ok(inside) => Ok(if inside { d } else { -d }),
            Err(e) => Err(e),
        }
    }

    pub fn arc_length(&self) -> f64 {
        self.edges().map(|(a, b)| a.distance(b)).sum()
    }
}

/// Boundary path from `from` to `to` (both on the window boundary), listing the
/// corners passed and ending at `to`.
fn boundary_path(window: &PhaseWindow, from: State2D, to: State2D, ccw: bool) -> Vec<State2D> {
    let per = window.perimeter();
    let corners = window.corners_ccw();
    let w = window.s_n_max - window.s_n_min;
    let h = window.s_t_max - window.s_t_min;
    let corner_pos = [0.0, w, w + h, 2.0 * w + h];
    let s0 = window.perimeter_coordinate(from);
    let s1 = window.perimeter_coordinate(to);
    let travel = if ccw { (s1 - s0).rem_euclid(per) } else { (s0 - s1).rem_euclid(per) };
    let mut passed: Vec<(f64, State2D)> = corner_pos
        .iter()
        .zip(corners)
        .filter_map(|(&c, p)| {
            let d = if ccw { (c - s0).rem_euclid(per) } else { (s0 - c).rem_euclid(per) };
            (d > 0.0 && d < travel).then_some((d, p))
        })
        .collect();
    passed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut path = vec![from];
    path.extend(passed.into_iter().map(|(_, p)| p));
    path.push(to);
    path.dedup();
    path
}
