//! ROC analysis of indicators as tip/no-tip classifiers.
//!
//! All statistics are computed from integer confusion counts, so AUC is the
//! exact normalized Mann–Whitney count and threshold selection involves no
//! floating-point ties.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::ews::IndicatorId;
use crate::{Error, Result};

/// Direction in which an indicator signals tipping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Predict tip when `value <= threshold`.
    TipWhenLow,
    /// Predict tip when `value >= threshold`.
    TipWhenHigh,
}

impl Orientation {
    pub fn predicts_tip(self, value: f64, threshold: f64) -> bool {
        match self {
            Self::TipWhenLow => value <= threshold,
            Self::TipWhenHigh => value >= threshold,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::TipWhenLow => Self::TipWhenHigh,
            Self::TipWhenHigh => Self::TipWhenLow,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub t: f64,
    pub orientation: Orientation,
    /// `(tp, fp)` per swept threshold, from nothing predicted to everything predicted.
    pub counts: Vec<(usize, usize)>,
    /// Threshold per point; the first and last are the infinite sentinels.
    pub thresholds: Vec<f64>,
    pub n_pos: usize,
    pub n_neg: usize,
}

impl RocCurve {
    /// `(FPR, TPR)` points.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.counts.iter().map(|&(tp, fp)| self.rates(tp, fp)).collect()
    }

    fn rates(&self, tp: usize, fp: usize) -> (f64, f64) {
        (fp as f64 / self.n_neg as f64, tp as f64 / self.n_pos as f64)
    }
}

/// Pairs with a value and a label; `None` values are dropped.
fn present(values: &[Option<f64>], labels: &[bool]) -> Result<Vec<(f64, bool)>> {
    if values.len() != labels.len() {
        return Err(Error::InvalidParameter(format!(
            "{} values for {} labels",
            values.len(),
            labels.len()
        )));
    }
    Ok(values
        .iter()
        .zip(labels)
        .filter_map(|(v, &l)| v.filter(|x| !x.is_nan()).map(|x| (x, l)))
        .collect())
}

/// Exact ROC curve sweeping every distinct value as a threshold, with a value
/// equal to the threshold counted as a predicted tip.
pub fn roc_at_time(
    t: f64,
    values: &[Option<f64>],
    labels: &[bool],
    orientation: Orientation,
) -> Result<RocCurve> {
    let mut data = present(values, labels)?;
    let n_pos = data.iter().filter(|d| d.1).count();
    let n_neg = data.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    // Order by decreasing "tip-ness" so lowering the bar admits members in order.
    match orientation {
        Orientation::TipWhenHigh => data.sort_by(|a, b| b.0.total_cmp(&a.0)),
        Orientation::TipWhenLow => data.sort_by(|a, b| a.0.total_cmp(&b.0)),
    }
    let (start, end) = match orientation {
        Orientation::TipWhenHigh => (f64::INFINITY, f64::NEG_INFINITY),
        Orientation::TipWhenLow => (f64::NEG_INFINITY, f64::INFINITY),
    };
    let mut counts = vec![(0, 0)];
    let mut thresholds = vec![start];
    let (mut tp, mut fp) = (0, 0);
    let mut i = 0;
    while i < data.len() {
        let v = data[i].0;
        while i < data.len() && data[i].0 == v {
            if data[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        counts.push((tp, fp));
        thresholds.push(v);
    }
    counts.push((tp, fp));
    thresholds.push(end);
    Ok(RocCurve { t, orientation, counts, thresholds, n_pos, n_neg })
}

/// Trapezoidal area under the curve.
pub fn auc(curve: &RocCurve) -> f64 {
    let twice: u128 = curve
        .counts
        .windows(2)
        .map(|w| ((w[1].1 - w[0].1) as u128) * ((w[1].0 + w[0].0) as u128))
        .sum();
    twice as f64 / (2 * curve.n_pos as u128 * curve.n_neg as u128) as f64
}

/// Normalized Mann–Whitney statistic with half credit for ties.
pub fn mann_whitney_auc(values: &[Option<f64>], labels: &[bool], orientation: Orientation) -> Result<f64> {
    let data = present(values, labels)?;
    let pos: Vec<f64> = data.iter().filter(|d| d.1).map(|d| d.0).collect();
    let neg: Vec<f64> = data.iter().filter(|d| !d.1).map(|d| d.0).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::SingleClass);
    }
    let mut twice: u128 = 0;
    for &p in &pos {
        for &n in &neg {
            let better = match orientation {
                Orientation::TipWhenHigh => p > n,
                Orientation::TipWhenLow => p < n,
            };
            twice += if better { 2 } else if p == n { 1 } else { 0 };
        }
    }
    Ok(twice as f64 / (2 * pos.len() as u128 * neg.len() as u128) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub index: usize,
    pub threshold: f64,
    pub tpr: f64,
    pub fpr: f64,
}

impl OperatingPoint {
    fn at(curve: &RocCurve, index: usize) -> Self {
        let (tp, fp) = curve.counts[index];
        let (fpr, tpr) = curve.rates(tp, fp);
        Self { index, threshold: curve.thresholds[index], tpr, fpr }
    }

    pub fn informedness(&self) -> f64 {
        self.tpr - self.fpr
    }
}

/// Scaled squared distance to `(0, 1)`: `(n_pos n_neg)^2 (FPR^2 + (1 - TPR)^2)`.
fn scaled_distance(curve: &RocCurve, (tp, fp): (usize, usize)) -> u128 {
    let a = fp as u128 * curve.n_pos as u128;
    let b = (curve.n_pos - tp) as u128 * curve.n_neg as u128;
    a * a + b * b
}

/// Point nearest `(0, 1)`; ties go to the higher TPR, then the lower index.
pub fn optimal_threshold(curve: &RocCurve) -> OperatingPoint {
    let mut best = 0;
    for i in 1..curve.counts.len() {
        let (d, db) = (scaled_distance(curve, curve.counts[i]), scaled_distance(curve, curve.counts[best]));
        if d < db || (d == db && curve.counts[i].0 > curve.counts[best].0) {
            best = i;
        }
    }
    OperatingPoint::at(curve, best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfusionStats {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    pub tpr: f64,
    pub fpr: f64,
    pub specificity: f64,
    /// `FN / (FN + TN)`; `None` when nothing is predicted negative.
    pub false_omission_rate: Option<f64>,
    pub informedness: f64,
}

impl ConfusionStats {
    fn from_counts(tp: usize, fp: usize, n_pos: usize, n_neg: usize) -> Self {
        let (fn_, tn) = (n_pos - tp, n_neg - fp);
        let tpr = tp as f64 / n_pos as f64;
        let fpr = fp as f64 / n_neg as f64;
        Self {
            tp,
            fp,
            tn,
            fn_,
            tpr,
            fpr,
            specificity: 1.0 - fpr,
            false_omission_rate: (fn_ + tn > 0).then(|| fn_ as f64 / (fn_ + tn) as f64),
            informedness: tpr - fpr,
        }
    }
}

/// Classification statistics at a given threshold.
pub fn fixed_threshold_stats(
    values: &[Option<f64>],
    labels: &[bool],
    threshold: f64,
    orientation: Orientation,
) -> Result<ConfusionStats> {
    let data = present(values, labels)?;
    let n_pos = data.iter().filter(|d| d.1).count();
    let n_neg = data.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let (mut tp, mut fp) = (0, 0);
    for &(v, l) in &data {
        if orientation.predicts_tip(v, threshold) {
            if l {
                tp += 1;
            } else {
                fp += 1;
            }
        }
    }
    Ok(ConfusionStats::from_counts(tp, fp, n_pos, n_neg))
}

/// Statistics at a swept point of the curve.
pub fn stats_at(curve: &RocCurve, index: usize) -> ConfusionStats {
    let (tp, fp) = curve.counts[index];
    ConfusionStats::from_counts(tp, fp, curve.n_pos, curve.n_neg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Constraint {
    MinSensitivity(f64),
    MinSpecificity(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedPoint {
    pub point: OperatingPoint,
    /// Specificity under a sensitivity constraint, sensitivity under a specificity one.
    pub achieved: f64,
    pub satisfied: bool,
}

/// Best point for the free metric subject to the constraint; ties go to the
/// better constrained metric, then the lower index. If no point satisfies the
/// constraint the point closest to satisfying it is returned with `satisfied = false`.
pub fn constrained_threshold(curve: &RocCurve, constraint: Constraint) -> ConstrainedPoint {
    // (constrained count, free count) with larger better, as exact integers.
    let key = |i: usize| -> (usize, usize) {
        let (tp, fp) = curve.counts[i];
        match constraint {
            Constraint::MinSensitivity(_) => (tp, curve.n_neg - fp),
            Constraint::MinSpecificity(_) => (curve.n_neg - fp, tp),
        }
    };
    let ok = |i: usize| -> bool {
        let (tp, fp) = curve.counts[i];
        match constraint {
            Constraint::MinSensitivity(l) => tp as f64 / curve.n_pos as f64 >= l,
            Constraint::MinSpecificity(l) => (curve.n_neg - fp) as f64 / curve.n_neg as f64 >= l,
        }
    };
    let n = curve.counts.len();
    let feasible: Vec<usize> = (0..n).filter(|&i| ok(i)).collect();
    let (index, satisfied) = if feasible.is_empty() {
        let i = (0..n).fold(0, |b, i| if key(i).0 > key(b).0 { i } else { b });
        (i, false)
    } else {
        let i = feasible.iter().copied().fold(feasible[0], |b, i| {
            let (ki, kb) = (key(i), key(b));
            if ki.1 > kb.1 || (ki.1 == kb.1 && ki.0 > kb.0) { i } else { b }
        });
        (i, true)
    };
    let point = OperatingPoint::at(curve, index);
    let achieved = match constraint {
        Constraint::MinSensitivity(_) => 1.0 - point.fpr,
        Constraint::MinSpecificity(_) => point.tpr,
    };
    ConstrainedPoint { point, achieved, satisfied }
}

/// Orientation and default fixed threshold for each indicator (rescaled units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndicatorRule {
    pub orientation: Orientation,
    pub fixed_threshold: Option<f64>,
}

pub fn default_rule(id: IndicatorId) -> IndicatorRule {
    match id {
        IndicatorId::SN => IndicatorRule { orientation: Orientation::TipWhenLow, fixed_threshold: Some(-0.1) },
        IndicatorId::ST => IndicatorRule { orientation: Orientation::TipWhenHigh, fixed_threshold: Some(0.16) },
        IndicatorId::RIndicator => IndicatorRule { orientation: Orientation::TipWhenLow, fixed_threshold: Some(0.0) },
        IndicatorId::ReturnRateSq => IndicatorRule { orientation: Orientation::TipWhenHigh, fixed_threshold: None },
    }
}

/// One row of a skill report; fields are `None` where undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkillRow {
    pub indicator: IndicatorId,
    pub t: f64,
    pub auc: Option<f64>,
    pub opt_threshold: Option<f64>,
    pub opt_tpr: Option<f64>,
    pub opt_fpr: Option<f64>,
    pub informedness: Option<f64>,
    pub false_omission_rate: Option<f64>,
    pub fixed_tpr: Option<f64>,
    pub fixed_fpr: Option<f64>,
    pub fixed_for: Option<f64>,
    pub constrained_spec_at_sens95: Option<f64>,
    pub constrained_sens_at_spec95: Option<f64>,
}

impl SkillRow {
    pub fn fixed_informedness(&self) -> Option<f64> {
        Some(self.fixed_tpr? - self.fixed_fpr?)
    }
}

/// Skill statistics for one indicator at one time.
pub fn skill_row(
    id: IndicatorId,
    t: f64,
    values: &[Option<f64>],
    labels: &[bool],
    rule: &IndicatorRule,
) -> Result<SkillRow> {
    let mut row = SkillRow {
        indicator: id,
        t,
        auc: None,
        opt_threshold: None,
        opt_tpr: None,
        opt_fpr: None,
        informedness: None,
        false_omission_rate: None,
        fixed_tpr: None,
        fixed_fpr: None,
        fixed_for: None,
        constrained_spec_at_sens95: None,
        constrained_sens_at_spec95: None,
    };
    let curve = match roc_at_time(t, values, labels, rule.orientation) {
        Ok(c) => c,
        Err(Error::SingleClass) => return Ok(row),
        Err(e) => return Err(e),
    };
    let opt = optimal_threshold(&curve);
    let opt_stats = stats_at(&curve, opt.index);
    row.auc = Some(auc(&curve));
    row.opt_threshold = Some(opt.threshold);
    row.opt_tpr = Some(opt.tpr);
    row.opt_fpr = Some(opt.fpr);
    row.informedness = Some(opt.informedness());
    row.false_omission_rate = opt_stats.false_omission_rate;
    if let Some(thr) = rule.fixed_threshold {
        let s = fixed_threshold_stats(values, labels, thr, rule.orientation)?;
        row.fixed_tpr = Some(s.tpr);
        row.fixed_fpr = Some(s.fpr);
        row.fixed_for = s.false_omission_rate;
    }
    row.constrained_spec_at_sens95 = Some(constrained_threshold(&curve, Constraint::MinSensitivity(0.95)).achieved);
    row.constrained_sens_at_spec95 = Some(constrained_threshold(&curve, Constraint::MinSpecificity(0.95)).achieved);
    Ok(row)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SkillReport {
    pub rows: Vec<SkillRow>,
}

impl SkillReport {
    pub fn series(&self, id: IndicatorId) -> impl Iterator<Item = &SkillRow> {
        self.rows.iter().filter(move |r| r.indicator == id)
    }

    pub fn at(&self, id: IndicatorId, t: f64) -> Option<&SkillRow> {
        self.series(id).find(|r| (r.t - t).abs() < 1e-9)
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(
            w,
            "indicator_id,t,auc,opt_threshold,opt_tpr,opt_fpr,informedness,for,fixed_tpr,fixed_fpr,fixed_for,constrained_spec_at_sens95,constrained_sens_at_spec95"
        )?;
        let f = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.indicator,
                r.t,
                f(r.auc),
                f(r.opt_threshold),
                f(r.opt_tpr),
                f(r.opt_fpr),
                f(r.informedness),
                f(r.false_omission_rate),
                f(r.fixed_tpr),
                f(r.fixed_fpr),
                f(r.fixed_for),
                f(r.constrained_spec_at_sens95),
                f(r.constrained_sens_at_spec95),
            )?;
        }
        Ok(())
    }
}
