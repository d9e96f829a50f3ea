use serde::{Deserialize, Serialize};

use super::state::State2D;
use super::VectorField;
use crate::{Error, Result};

/// Physical parameters of the three-box AMOC model.
///
/// Field names follow the conventional symbols; JSON keys use the symbol
/// spelling (`"V_N"`, `"F_T1"`, ...). Missing keys take the default values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AmocParams {
    #[serde(rename = "S0")]
    pub s0: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub mu: f64,
    #[serde(rename = "T_S")]
    pub t_s: f64,
    #[serde(rename = "T_0")]
    pub t_0: f64,
    pub gamma: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "K_N")]
    pub k_n: f64,
    #[serde(rename = "K_S")]
    pub k_s: f64,
    #[serde(rename = "S_S")]
    pub s_s: f64,
    #[serde(rename = "S_B")]
    pub s_b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "V_N")]
    pub v_n: f64,
    #[serde(rename = "V_T")]
    pub v_t: f64,
    #[serde(rename = "V_S")]
    pub v_s: f64,
    #[serde(rename = "V_IP")]
    pub v_ip: f64,
    #[serde(rename = "V_B")]
    pub v_b: f64,
    #[serde(rename = "F_N0")]
    pub f_n0: f64,
    #[serde(rename = "F_N1")]
    pub f_n1: f64,
    #[serde(rename = "F_T0")]
    pub f_t0: f64,
    #[serde(rename = "F_T1")]
    pub f_t1: f64,
}

impl Default for AmocParams {
    fn default() -> Self {
        Self {
            s0: 0.035,
            alpha: 0.12,
            beta: 790.0,
            lambda: 1.62e7,
            mu: 22e-8,
            t_s: 7.919,
            t_0: 3.87,
            gamma: 0.36,
            y: 3.15e7,
            k_n: 1.762e6,
            k_s: 1.872e6,
            s_s: 0.034427,
            s_b: 0.034538,
            c: 4.4735e16,
            v_n: 0.3683e17,
            v_t: 0.5418e17,
            v_s: 0.6097e17,
            v_ip: 1.4860e17,
            v_b: 9.9250e17,
            f_n0: 0.4860e6,
            f_n1: 0.1311e6,
            f_t0: -0.997e6,
            f_t1: 0.6961e6,
        }
    }
}

impl AmocParams {
    pub fn validate(&self) -> Result<()> {
        let vols = [
            ("V_N", self.v_n),
            ("V_T", self.v_t),
            ("V_S", self.v_s),
            ("V_IP", self.v_ip),
            ("V_B", self.v_b),
            ("Y", self.y),
        ];
        for (name, v) in vols {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        let denom = 1.0 + self.lambda * self.alpha * self.mu;
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::InvalidParameter("1 + lambda*alpha*mu must be nonzero".into()));
        }
        Ok(())
    }

    /// Raw salinity from a rescaled one.
    pub fn to_raw(&self, rescaled: f64) -> f64 {
        self.s0 + rescaled / 100.0
    }

    pub fn to_rescaled(&self, raw: f64) -> f64 {
        100.0 * (raw - self.s0)
    }

    /// Numerator of `q`; its sign selects the flow direction.
    fn q_numerator(&self, s_n_raw: f64) -> f64 {
        self.alpha * (self.t_s - self.t_0) + self.beta * (s_n_raw - self.s_s)
    }

    fn q_raw(&self, s_n_raw: f64) -> f64 {
        self.lambda * self.q_numerator(s_n_raw) / (1.0 + self.lambda * self.alpha * self.mu)
    }

    /// Indo-Pacific salinity (raw) recovered from salt conservation.
    fn s_ip_raw(&self, s_n: f64, s_t: f64) -> f64 {
        (self.c - (self.v_n * s_n + self.v_t * s_t + self.v_s * self.s_s + self.v_b * self.s_b)) / self.v_ip
    }

    /// Total salt content reconstructed from a state; equals `C` identically.
    pub fn total_salt(&self, s: State2D) -> f64 {
        let (s_n, s_t) = (self.to_raw(s.s_n), self.to_raw(s.s_t));
        self.v_n * s_n
            + self.v_t * s_t
            + self.v_s * self.s_s
            + self.v_b * self.s_b
            + self.v_ip * self.s_ip_raw(s_n, s_t)
    }
}

/// Overturning transport (m^3/s) at a rescaled state.
pub fn amoc_q(s: State2D, p: &AmocParams) -> f64 {
    p.q_raw(p.to_raw(s.s_n))
}

/// Rescaled Indo-Pacific salinity implied by conservation.
pub fn indo_pacific_salinity(s: State2D, p: &AmocParams) -> f64 {
    p.to_rescaled(p.s_ip_raw(p.to_raw(s.s_n), p.to_raw(s.s_t)))
}

fn fluxes(h: f64, p: &AmocParams) -> (f64, f64) {
    (p.f_n0 + p.f_n1 * h, p.f_t0 + p.f_t1 * h)
}

/// Vector field for northward overturning (`q >= 0`), evaluated with the given `q`.
pub fn rhs_forward_branch(s: State2D, h: f64, p: &AmocParams) -> State2D {
    let (s_n, s_t) = (p.to_raw(s.s_n), p.to_raw(s.s_t));
    let q = p.q_raw(s_n);
    let s_ip = p.s_ip_raw(s_n, s_t);
    let (f_n, f_t) = fluxes(h, p);
    let f1 = p.y * (q * (s_t - s_n) + p.k_n * (s_t - s_n) - f_n * p.s0) / p.v_n;
    let f2 = p.y
        * (q * (p.gamma * p.s_s + (1.0 - p.gamma) * s_ip - s_t)
            + p.k_s * (p.s_s - s_t)
            + p.k_n * (s_n - s_t)
            - f_t * p.s0)
        / p.v_t;
    State2D::new(100.0 * f1, 100.0 * f2)
}

/// Vector field for reversed overturning (`q < 0`).
pub fn rhs_reversed_branch(s: State2D, h: f64, p: &AmocParams) -> State2D {
    let (s_n, s_t) = (p.to_raw(s.s_n), p.to_raw(s.s_t));
    let aq = p.q_raw(s_n).abs();
    let (f_n, f_t) = fluxes(h, p);
    let f1 = p.y * (aq * (p.s_b - s_n) + p.k_n * (s_t - s_n) - f_n * p.s0) / p.v_n;
    let f2 = p.y * (aq * (s_n - s_t) + p.k_s * (p.s_s - s_t) + p.k_n * (s_n - s_t) - f_t * p.s0) / p.v_t;
    State2D::new(100.0 * f1, 100.0 * f2)
}

/// Time derivative of the rescaled salinities (per year) at hosing level `h`.
pub fn amoc_rhs(s: State2D, h: f64, p: &AmocParams) -> State2D {
    if p.q_numerator(p.to_raw(s.s_n)) >= 0.0 {
        rhs_forward_branch(s, h, p)
    } else {
        rhs_reversed_branch(s, h, p)
    }
}

impl VectorField for AmocParams {
    type State = State2D;

    fn rhs(&self, x: State2D, level: f64) -> State2D {
        amoc_rhs(x, level, self)
    }
}
