use serde::{Deserialize, Serialize};

use super::VectorField;
use crate::{Error, Result};

/// Parameters of the scalar fold example `dx = f(x, p) dt + sigma dW`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExampleParams {
    pub p_plus: f64,
    pub theta: f64,
    pub sigma: f64,
}

impl Default for ExampleParams {
    fn default() -> Self {
        Self {
            p_plus: 1.7,
            theta: 0.08,
            sigma: 0.1,
        }
    }
}

impl ExampleParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_plus > 0.0) {
            return Err(Error::InvalidParameter(format!("p_plus must be > 0, got {}", self.p_plus)));
        }
        if !(self.theta >= 0.0) {
            return Err(Error::InvalidParameter(format!("theta must be >= 0, got {}", self.theta)));
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        Ok(())
    }
}

/// `-x^3/3 + x - p (p_plus - p)`.
pub fn example_rhs(x: f64, p: f64, p_plus: f64) -> f64 {
    -x * x * x / 3.0 + x - p * (p_plus - p)
}

impl VectorField for ExampleParams {
    type State = f64;

    fn rhs(&self, x: f64, level: f64) -> f64 {
        example_rhs(x, level, self.p_plus)
    }
}

/// Stable upper equilibrium of the frozen system at level `p`, found by Newton
/// iteration from `guess`. Returns `None` if the iteration leaves the upper
/// branch (`x > 1`) or fails to converge.
pub fn upper_equilibrium(p: f64, p_plus: f64, guess: f64) -> Option<f64> {
    let mut x = guess.max(1.0 + 1e-12);
    for _ in 0..200 {
        let g = example_rhs(x, p, p_plus);
        let dg = 1.0 - x * x;
        if dg >= 0.0 {
            return None;
        }
        let step = g / dg;
        x -= step;
        if !x.is_finite() || x <= 1.0 {
            return None;
        }
        if step.abs() < 1e-14 * x.abs().max(1.0) {
            return (example_rhs(x, p, p_plus).abs() < 1e-10).then_some(x);
        }
    }
    None
}

/// Whether the upper equilibrium can be continued over `p = 0..=p_plus`
/// on a uniform grid of `n_grid` intervals.
pub fn upper_branch_persists(p_plus: f64, n_grid: usize) -> bool {
    let n = n_grid.max(2);
    let mut x = 3f64.sqrt();
    for i in 0..=n {
        let p = p_plus * i as f64 / n as f64;
        match upper_equilibrium(p, p_plus, x) {
            Some(next) => x = next,
            None => return false,
        }
    }
    true
}

/// Largest `p_plus` in `[lo, hi]` for which the upper branch persists, by bisection.
pub fn critical_p_plus(lo: f64, hi: f64, n_grid: usize, tol: f64) -> Result<f64> {
    if !upper_branch_persists(lo, n_grid) || upper_branch_persists(hi, n_grid) {
        return Err(Error::InvalidParameter(format!(
            "bracket [{lo}, {hi}] does not straddle the loss of the upper branch"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if upper_branch_persists(m, n_grid) {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_values() {
        assert_eq!(example_rhs(0.0, 0.0, 1.7), 0.0);
        assert!(example_rhs(3f64.sqrt(), 0.0, 1.7).abs() < 1e-15);
        assert_eq!(example_rhs(0.0, 1.0, 1.7), -0.7);
    }

    #[test]
    fn upper_equilibrium_at_zero_forcing() {
        let x = upper_equilibrium(0.0, 1.7, 2.0).unwrap();
        assert!((x - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn branch_lost_above_fold() {
        assert!(upper_branch_persists(1.6, 1000));
        assert!(!upper_branch_persists(1.7, 1000));
    }

    #[test]
    fn critical_value_near_fold() {
        let pc = critical_p_plus(1.0, 2.0, 2000, 1e-6).unwrap();
        assert!((pc - (8.0f64 / 3.0).sqrt()).abs() < 5e-4, "{pc}");
    }

    #[test]
    fn bad_bracket_rejected() {
        assert!(critical_p_plus(1.7, 2.0, 100, 1e-6).is_err());
    }
}
