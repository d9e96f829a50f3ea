use serde::{Deserialize, Serialize};

use super::amoc::{amoc_rhs, AmocParams};
use super::state::{Mat2, PhaseWindow, State2D};
use crate::{Error, Result};

/// Root finding and classification settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquilibriumConfig {
    pub h_jac: f64,
    pub tol_eq: f64,
    pub dedup_tol: f64,
    pub max_iter: usize,
    /// Seeds per axis of the default grid.
    pub seeds_per_axis: usize,
    pub window: PhaseWindow,
}

impl Default for EquilibriumConfig {
    fn default() -> Self {
        Self {
            h_jac: 1e-6,
            tol_eq: 1e-10,
            dedup_tol: 1e-6,
            max_iter: 100,
            seeds_per_axis: 5,
            window: PhaseWindow::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: State2D,
}

/// Eigen-decomposition at the saddle. The unstable vector points along the
/// branch of the unstable manifold that settles on ON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleEigen {
    pub stable: EigenPair,
    pub unstable: EigenPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSet {
    pub h: f64,
    pub on_state: State2D,
    pub off_state: State2D,
    pub edge_state: State2D,
    pub edge_eigen: SaddleEigen,
}

/// Central-difference Jacobian of `f` at `x`.
pub fn jacobian(f: impl Fn(State2D) -> State2D, x: State2D, h: f64) -> Mat2 {
    let dx = State2D::new(h, 0.0);
    let dy = State2D::new(0.0, h);
    let c1 = (f(x + dx) - f(x - dx)) * (0.5 / h);
    let c2 = (f(x + dy) - f(x - dy)) * (0.5 / h);
    Mat2 {
        a11: c1.s_n,
        a12: c2.s_n,
        a21: c1.s_t,
        a22: c2.s_t,
    }
}

/// Uniform `n x n` grid over the window, row-major in `s_t`.
pub fn default_seeds(window: &PhaseWindow, n: usize) -> Vec<State2D> {
    let n = n.max(2);
    let lerp = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    (0..n)
        .flat_map(|j| {
            (0..n).map(move |i| {
                State2D::new(
                    lerp(window.s_n_min, window.s_n_max, i),
                    lerp(window.s_t_min, window.s_t_max, j),
                )
            })
        })
        .collect()
}

fn newton(f: &impl Fn(State2D) -> State2D, seed: State2D, cfg: &EquilibriumConfig) -> Option<State2D> {
    let mut x = seed;
    let mut fx = f(x);
    for _ in 0..cfg.max_iter {
        if fx.norm() < 1e-2 * cfg.tol_eq {
            break;
        }
        let step = jacobian(f, x, cfg.h_jac).solve(fx)?;
        // Backtrack on the residual norm.
        let mut lambda = 1.0;
        loop {
            let trial = x - step * lambda;
            let ft = f(trial);
            if ft.is_finite() && ft.norm() < fx.norm() {
                x = trial;
                fx = ft;
                break;
            }
            lambda *= 0.5;
            if lambda < 1e-8 {
                return (fx.norm() < cfg.tol_eq).then_some(x);
            }
        }
    }
    (fx.norm() < cfg.tol_eq).then_some(x)
}

fn collect_roots(
    f: &impl Fn(State2D) -> State2D,
    seeds: &[State2D],
    cfg: &EquilibriumConfig,
) -> Vec<State2D> {
    let mut roots: Vec<State2D> = Vec::new();
    for &s in seeds {
        if let Some(r) = newton(f, s, cfg) {
            if !roots.iter().any(|o| o.distance(r) < cfg.dedup_tol) {
                roots.push(r);
            }
        }
    }
    roots
}

/// Forward RK4 under the frozen field long enough to reach an attractor.
fn settle(f: &impl Fn(State2D) -> State2D, mut x: State2D) -> State2D {
    let dt = 0.5;
    for _ in 0..40_000 {
        let k1 = f(x);
        let k2 = f(x + k1 * (0.5 * dt));
        let k3 = f(x + k2 * (0.5 * dt));
        let k4 = f(x + k3 * dt);
        let next = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        if !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

fn classify(
    f: &impl Fn(State2D) -> State2D,
    roots: &[State2D],
    h: f64,
    cfg: &EquilibriumConfig,
) -> Result<EquilibriumSet> {
    let mut stable = Vec::new();
    let mut saddles = Vec::new();
    for &r in roots {
        let j = jacobian(f, r, cfg.h_jac);
        let ev = j.eigenvalues();
        if ev[0].0 < 0.0 {
            stable.push(r);
        } else if ev[0].1 == 0.0 && ev[0].0 > 0.0 && ev[1].0 < 0.0 {
            saddles.push((r, j, ev[0].0, ev[1].0));
        }
    }
    if stable.len() < 2 || saddles.is_empty() {
        return Err(Error::ClassificationFailure(format!(
            "H = {h}: found {} stable roots and {} saddles among {} roots",
            stable.len(),
            saddles.len(),
            roots.len()
        )));
    }
    stable.sort_by(|a, b| a.s_n.total_cmp(&b.s_n));
    let on_state = *stable.last().unwrap();
    let off_state = stable[0];
    // With several saddles, take the one closest to the ON-OFF segment midpoint.
    let mid = (on_state + off_state) * 0.5;
    saddles.sort_by(|a, b| a.0.distance(mid).total_cmp(&b.0.distance(mid)));
    let (edge_state, j, mu_u, mu_s) = saddles[0];
    // The unstable branches curve, so orient v_u by where its branch settles.
    let mut v_u = j.eigenvector(mu_u);
    let end = settle(f, edge_state + v_u * 1e-4);
    if end.distance(off_state) < end.distance(on_state) {
        v_u = -v_u;
    }
    let mut v_s = j.eigenvector(mu_s);
    if v_s.s_t < 0.0 {
        v_s = -v_s;
    }
    Ok(EquilibriumSet {
        h,
        on_state,
        off_state,
        edge_state,
        edge_eigen: SaddleEigen {
            stable: EigenPair { value: mu_s, vector: v_s },
            unstable: EigenPair { value: mu_u, vector: v_u },
        },
    })
}

/// ON, OFF and edge states of the frozen AMOC model at hosing level `h`.
///
/// With `seeds = None` a grid of `cfg.seeds_per_axis`^2 points over the window is
/// used; if that misses a root needed for classification the grid is refined
/// (doubling the density, up to 65 per axis) before giving up.
pub fn find_equilibria(
    h: f64,
    params: &AmocParams,
    seeds: Option<&[State2D]>,
    cfg: &EquilibriumConfig,
) -> Result<EquilibriumSet> {
    let f = |x: State2D| amoc_rhs(x, h, params);
    if let Some(seeds) = seeds {
        let roots = collect_roots(&f, seeds, cfg);
        if roots.is_empty() {
            return Err(Error::ConvergenceFailure(format!(
                "H = {h}: Newton failed from all {} seeds",
                seeds.len()
            )));
        }
        return classify(&f, &roots, h, cfg);
    }
    let mut n = cfg.seeds_per_axis.max(2);
    let mut last_err;
    loop {
        let roots = collect_roots(&f, &default_seeds(&cfg.window, n), cfg);
        last_err = if roots.is_empty() {
            Error::ConvergenceFailure(format!("H = {h}: Newton failed from all {} seeds", n * n))
        } else {
            match classify(&f, &roots, h, cfg) {
                Ok(set) => return Ok(set),
                Err(e) => e,
            }
        };
        if n >= 65 {
            return Err(last_err);
        }
        n = 2 * n - 1;
    }
}
