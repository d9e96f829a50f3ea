//! Forcing profiles, model vector fields and frozen-system equilibria.

mod amoc;
mod equilibria;
mod example;
mod forcing;
mod state;

pub use amoc::{
    amoc_q, amoc_rhs, indo_pacific_salinity, rhs_reversed_branch, rhs_forward_branch, AmocParams,
};
pub use equilibria::{
    default_seeds, find_equilibria, jacobian, EigenPair, EquilibriumConfig, EquilibriumSet,
    SaddleEigen,
};
pub use example::{
    critical_p_plus, example_rhs, upper_branch_persists, upper_equilibrium, ExampleParams,
};
pub use forcing::{eval_hosing, eval_tanh_ramp, Forcing, HosingProfile, TanhRampForcing};
pub use state::{Mat2, Phase, PhaseWindow, State2D};

/// An autonomous vector field `dx/dt = f(x, p)` driven by a scalar forcing level `p`.
pub trait VectorField: Sync {
    type State: Phase;

    fn rhs(&self, x: Self::State, level: f64) -> Self::State;
}
