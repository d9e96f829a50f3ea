use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A time-parametrized scalar forcing level.
pub trait Forcing: Sync {
    fn level(&self, t: f64) -> f64;

    /// Short identifier written next to trajectories.
    fn id(&self) -> String;
}

/// Monotone ramp `(p_plus / 2) (tanh(theta t) + 1)` from 0 to `p_plus`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TanhRampForcing {
    pub p_plus: f64,
    pub theta: f64,
}

impl TanhRampForcing {
    pub fn new(p_plus: f64, theta: f64) -> Result<Self> {
        if !(p_plus > 0.0) {
            return Err(Error::InvalidParameter(format!("p_plus must be > 0, got {p_plus}")));
        }
        if !(theta >= 0.0) {
            return Err(Error::InvalidParameter(format!("theta must be >= 0, got {theta}")));
        }
        Ok(Self { p_plus, theta })
    }
}

pub fn eval_tanh_ramp(f: &TanhRampForcing, t: f64) -> f64 {
    // theta = 0 with infinite t would otherwise produce 0 * inf = NaN.
    let arg = if f.theta == 0.0 { 0.0 } else { f.theta * t };
    0.5 * f.p_plus * (arg.tanh() + 1.0)
}

impl Forcing for TanhRampForcing {
    fn level(&self, t: f64) -> f64 {
        eval_tanh_ramp(self, t)
    }

    fn id(&self) -> String {
        format!("tanh(p_plus={},theta={})", self.p_plus, self.theta)
    }
}

/// Piecewise-linear freshwater hosing: rise, plateau, fall, then back at `H0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HosingProfile {
    #[serde(rename = "H0")]
    pub h0: f64,
    #[serde(rename = "H_max")]
    pub h_max: f64,
    #[serde(rename = "T_rise")]
    pub t_rise: f64,
    #[serde(rename = "T_plat")]
    pub t_plat: f64,
    #[serde(rename = "T_fall")]
    pub t_fall: f64,
}

impl Default for HosingProfile {
    fn default() -> Self {
        Self {
            h0: 0.0,
            h_max: 0.38,
            t_rise: 100.0,
            t_plat: 300.0,
            t_fall: 200.0,
        }
    }
}

impl HosingProfile {
    /// Default profile with a different plateau duration.
    pub fn with_plateau(t_plat: f64) -> Self {
        Self {
            t_plat,
            ..Self::default()
        }
    }

    /// Forcing held at `h0` for all time.
    pub fn constant(h0: f64) -> Self {
        Self {
            h0,
            h_max: h0,
            t_rise: 0.0,
            t_plat: 0.0,
            t_fall: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("T_rise", self.t_rise), ("T_plat", self.t_plat), ("T_fall", self.t_fall)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !self.h0.is_finite() || !self.h_max.is_finite() {
            return Err(Error::InvalidParameter("hosing levels must be finite".into()));
        }
        Ok(())
    }

    /// Time after which the forcing is constant at `h0`.
    pub fn end(&self) -> f64 {
        self.t_rise + self.t_plat + self.t_fall
    }

    /// Largest slope magnitude of the profile.
    pub fn max_slope(&self) -> f64 {
        let dh = (self.h_max - self.h0).abs();
        let inv = |d: f64| if d > 0.0 { 1.0 / d } else { 0.0 };
        dh * inv(self.t_rise).max(inv(self.t_fall))
    }
}

pub fn eval_hosing(h: &HosingProfile, t: f64) -> f64 {
    let plat_end = h.t_rise + h.t_plat;
    if t <= 0.0 {
        h.h0
    } else if t < h.t_rise {
        h.h0 + (h.h_max - h.h0) * t / h.t_rise
    } else if t <= plat_end {
        h.h_max
    } else if t < h.end() {
        h.h_max - (h.h_max - h.h0) * (t - plat_end) / h.t_fall
    } else {
        h.h0
    }
}

impl Forcing for HosingProfile {
    fn level(&self, t: f64) -> f64 {
        eval_hosing(self, t)
    }

    fn id(&self) -> String {
        format!(
            "hosing(H0={},H_max={},T_rise={},T_plat={},T_fall={})",
            self.h0, self.h_max, self.t_rise, self.t_plat, self.t_fall
        )
    }
}
