//! Per-member indicator series: box salinities, the R-tipping indicator and
//! the squared return rate.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::State2D;
use crate::integrators::Trajectory;
use crate::threshold::ThresholdHistory;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IndicatorId {
    #[serde(rename = "S_N")]
    SN,
    #[serde(rename = "S_T")]
    ST,
    #[serde(rename = "R_INDICATOR")]
    RIndicator,
    #[serde(rename = "RETURN_RATE_SQ")]
    ReturnRateSq,
}

impl IndicatorId {
    pub const ALL: [IndicatorId; 4] = [Self::SN, Self::ST, Self::RIndicator, Self::ReturnRateSq];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::SN => "S_N",
            Self::ST => "S_T",
            Self::RIndicator => "R_INDICATOR",
            Self::ReturnRateSq => "RETURN_RATE_SQ",
        }
    }
}

impl fmt::Display for IndicatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IndicatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown indicator {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SalinityBox {
    North,
    Tropical,
}

/// One indicator for every member on a shared time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    pub id: IndicatorId,
    pub times: Vec<f64>,
    /// `values[member][time]`, `None` where undefined.
    pub values: Vec<Vec<Option<f64>>>,
}

impl IndicatorSeries {
    /// Values of all members at time index `k`.
    pub fn column(&self, k: usize) -> Vec<Option<f64>> {
        self.values.iter().map(|row| row[k]).collect()
    }

    pub fn write_csv<W: Write>(&self, w: &mut W, header: bool) -> Result<()> {
        if header {
            writeln!(w, "indicator_id,member_index,t,value")?;
        }
        for (m, row) in self.values.iter().enumerate() {
            for (t, v) in self.times.iter().zip(row) {
                match v {
                    Some(v) => writeln!(w, "{},{m},{t},{v}", self.id)?,
                    None => writeln!(w, "{},{m},{t},", self.id)?,
                }
            }
        }
        Ok(())
    }
}

pub fn indicator_salinity(traj: &Trajectory<State2D>, which: SalinityBox) -> Vec<f64> {
    traj.states
        .iter()
        .map(|s| match which {
            SalinityBox::North => s.s_n,
            SalinityBox::Tropical => s.s_t,
        })
        .collect()
}

/// Signed distance of each sample to the latest threshold snapshot not later than its time.
pub fn indicator_rtip(
    traj: &Trajectory<State2D>,
    history: &ThresholdHistory,
    off_state: State2D,
    tol_geo: f64,
) -> Result<Vec<f64>> {
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, &x)| {
            let curve = history.at_or_before(t).ok_or_else(|| {
                Error::InvalidParameter(format!("threshold history does not cover t = {t}"))
            })?;
            curve.signed_distance(x, off_state, tol_geo)
        })
        .collect()
}

/// Floor applied to the lag-1 coefficient before taking the logarithm.
pub const RHO_FLOOR: f64 = 1e-6;

/// Squared return rate of the trailing window ending at each sample.
///
/// Each window of `window` time units (samples `k - w ..= k`) is linearly
/// detrended, a lag-1 autoregression coefficient is fitted by least squares
/// and `alpha = -ln(max(rho, RHO_FLOOR)) / dt` is returned squared. Samples with
/// too short a history, or a window of variance below 1e-14, are `None`.
pub fn return_rate_sq(series: &[f64], dt: f64, window: f64) -> Result<Vec<Option<f64>>> {
    let w = (window / dt).round() as usize;
    if w + 1 < 10 {
        return Err(Error::InvalidParameter(format!(
            "return-rate window of {window} covers fewer than 10 samples"
        )));
    }
    let mut out = vec![None; series.len()];
    for k in w..series.len() {
        out[k] = window_return_rate_sq(&series[k - w..=k], dt);
    }
    Ok(out)
}

fn window_return_rate_sq(y: &[f64], dt: f64) -> Option<f64> {
    let n = y.len() as f64;
    let x_mean = (n - 1.0) / 2.0;
    let y_mean = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &v) in y.iter().enumerate() {
        let dx = i as f64 - x_mean;
        sxy += dx * (v - y_mean);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let r: Vec<f64> = y
        .iter()
        .enumerate()
        .map(|(i, &v)| v - y_mean - slope * (i as f64 - x_mean))
        .collect();
    let var = r.iter().map(|v| v * v).sum::<f64>() / n;
    if !(var >= 1e-14) {
        return None;
    }
    let num: f64 = r.windows(2).map(|p| p[0] * p[1]).sum();
    let den: f64 = r[..r.len() - 1].iter().map(|v| v * v).sum();
    let rho = (num / den).max(RHO_FLOOR);
    let alpha = -rho.ln() / dt;
    Some(alpha * alpha)
}
