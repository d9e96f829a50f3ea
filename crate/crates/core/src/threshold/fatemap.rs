use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{AmocParams, EquilibriumSet, Forcing, PhaseWindow, State2D};
use crate::integrators::rk4_endpoint;
use crate::Result;

/// Uniform grid over a window, row-major with `s_n` varying fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub window: PhaseWindow,
    pub n_n: usize,
    pub n_t: usize,
}

impl Grid {
    pub fn new(window: PhaseWindow, n_n: usize, n_t: usize) -> Self {
        Self { window, n_n: n_n.max(2), n_t: n_t.max(2) }
    }

    pub fn len(&self) -> usize {
        self.n_n * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize, j: usize) -> State2D {
        let w = &self.window;
        State2D::new(
            w.s_n_min + (w.s_n_max - w.s_n_min) * i as f64 / (self.n_n - 1) as f64,
            w.s_t_min + (w.s_t_max - w.s_t_min) * j as f64 / (self.n_t - 1) as f64,
        )
    }

    pub fn points(&self) -> Vec<State2D> {
        (0..self.n_t)
            .flat_map(|j| (0..self.n_n).map(move |i| (i, j)))
            .map(|(i, j)| self.point(i, j))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FateMap {
    pub t_init: f64,
    pub grid: Grid,
    pub tipped: Vec<bool>,
}

impl FateMap {
    /// Mask of grid points whose Chebyshev `radius`-neighbourhood has a single class.
    pub fn far_from_boundary(&self, radius: usize) -> Vec<bool> {
        let (nn, nt) = (self.grid.n_n, self.grid.n_t);
        let mut out = vec![true; self.tipped.len()];
        for j in 0..nt {
            for i in 0..nn {
                let c = self.tipped[j * nn + i];
                'scan: for jj in j.saturating_sub(radius)..=(j + radius).min(nt - 1) {
                    for ii in i.saturating_sub(radius)..=(i + radius).min(nn - 1) {
                        if self.tipped[jj * nn + ii] != c {
                            out[j * nn + i] = false;
                            break 'scan;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "x1,x2,tipped")?;
        for (p, &tip) in self.grid.points().iter().zip(&self.tipped) {
            writeln!(w, "{},{},{}", p.s_n, p.s_t, u8::from(tip))?;
        }
        Ok(())
    }
}

/// Tip/no-tip fate of each grid point started at `t_init` and run through
/// the forcing to `t_final`; a point tips if it ends nearer OFF than ON.
/// Points that blow up count as tipped.
pub fn grid_fate_map(
    t_init: f64,
    t_final: f64,
    forcing: &(impl Forcing + ?Sized),
    params: &AmocParams,
    eq: &EquilibriumSet,
    grid: &Grid,
    dt: f64,
) -> Result<FateMap> {
    let tipped = grid
        .points()
        .par_iter()
        .map(|&x0| match rk4_endpoint(params, forcing, x0, t_init, t_final, dt) {
            Ok(x) => Ok(x.distance(eq.off_state) < x.distance(eq.on_state)),
            Err(crate::Error::NonFiniteState { .. }) => Ok(true),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(FateMap { t_init, grid: *grid, tipped })
}
