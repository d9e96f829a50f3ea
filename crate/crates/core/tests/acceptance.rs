//! Acceptance suite. Prints one line per criterion and exits non-zero if any fails.
//!
//! Run with `cargo test -p rtip-core --test acceptance`.

use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rtip_core::dynamics::*;
use rtip_core::ensemble::{EnsembleSpec, TipClassifier};
use rtip_core::ews::IndicatorId;
use rtip_core::integrators::*;
use rtip_core::pipeline::{run_skill, AmocScenario, SkillRun, SkillSettings};
use rtip_core::skill::*;
use rtip_core::threshold::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn unforced_eq() -> EquilibriumSet {
    find_equilibria(0.0, &AmocParams::default(), None, &EquilibriumConfig::default()).unwrap()
}

fn hosing(t_plat: f64) -> HosingProfile {
    HosingProfile::with_plateau(t_plat)
}

// ---------------------------------------------------------------------------

fn example_regimes() -> Outcome {
    let start = Instant::now();
    let p_plus = 1.7;
    let mut detail = Vec::new();
    let mut ok = true;
    for (theta, expect_tip) in [(0.015, true), (0.4, false)] {
        let params = ExampleParams { p_plus, theta, sigma: 0.0 };
        let f = TanhRampForcing::new(p_plus, theta).unwrap();
        // |theta t| = 20 puts tanh within 1e-17 of its limits.
        let t_span = 20.0 / theta;
        let x0 = upper_equilibrium(f.level(-t_span), p_plus, 3f64.sqrt()).unwrap();
        let x = rk4_endpoint(&params, &f, x0, -t_span, t_span, 0.01).unwrap();
        let tipped = x < 0.0;
        ok &= tipped == expect_tip;
        detail.push(format!("theta={theta}: x_end={x:.4} tipped={tipped}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    outcome(ok, format!("{} ({elapsed:.2?})", detail.join("; ")))
}

fn fold_critical_value() -> Outcome {
    let pc = critical_p_plus(1.0, 2.0, 4000, 1e-7).unwrap();
    outcome((pc - 1.6330).abs() <= 0.0005, format!("p_c = {pc:.6}"))
}

fn amoc_deterministic() -> Outcome {
    let p = AmocParams::default();
    let eq = unforced_eq();
    let mut ok = true;
    let mut detail = Vec::new();
    for (t_plat, expect_tip) in [(300.0, false), (400.0, true)] {
        let start = Instant::now();
        let h = hosing(t_plat);
        let x = rk4_endpoint(&p, &h, eq.on_state, 0.0, h.end() + 2000.0, 0.1).unwrap();
        let elapsed = start.elapsed();
        let tipped = x.distance(eq.off_state) < x.distance(eq.on_state);
        ok &= tipped == expect_tip && elapsed < Duration::from_secs(1);
        detail.push(format!("T_plat={t_plat}: tipped={tipped} ({elapsed:.2?})"));
    }
    outcome(ok, detail.join("; "))
}

fn histories(eq: &EquilibriumSet, t_start: f64) -> Vec<(f64, ThresholdHistory)> {
    [300.0, 400.0]
        .into_iter()
        .map(|t_plat| {
            let scn = AmocScenario::with_plateau(t_plat);
            (t_plat, scn.threshold_history(eq, t_start).unwrap())
        })
        .collect()
}

fn containment(hist: &[(f64, ThresholdHistory)], eq: &EquilibriumSet) -> Outcome {
    let tol = ThresholdConfig::default().tol_geo;
    let mut ok = true;
    let mut detail = Vec::new();
    for (t_plat, h) in hist {
        let c = h.at_or_before(0.0).unwrap();
        let inside = c.is_inside(eq.on_state, eq.off_state, tol).unwrap();
        let d = c.signed_distance(eq.on_state, eq.off_state, tol).unwrap();
        ok &= inside == (*t_plat == 300.0);
        detail.push(format!("T_plat={t_plat}: ON inside={inside} (d={d:+.4})"));
    }
    outcome(ok, detail.join("; "))
}

fn sign_permanence(hist: &[(f64, ThresholdHistory)], eq: &EquilibriumSet) -> Outcome {
    let p = AmocParams::default();
    let tol = ThresholdConfig::default().tol_geo;
    let window = PhaseWindow::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut violations = 0;
    let mut checks = 0;
    for (t_plat, h) in hist {
        let forcing = hosing(*t_plat);
        for k in 0..20 {
            // Half over the whole window, half close to the ON state.
            let x0 = if k < 10 {
                State2D::new(
                    window.s_n_min + (window.s_n_max - window.s_n_min) * unit(&mut rng),
                    window.s_t_min + (window.s_t_max - window.s_t_min) * unit(&mut rng),
                )
            } else {
                eq.on_state + State2D::new(0.1 * unit(&mut rng) - 0.05, 0.1 * unit(&mut rng) - 0.05)
            };
            let traj = integrate_ode(&p, &forcing, x0, &IntegratorConfig::rk4(0.0, forcing.end(), 0.1)).unwrap();
            let mut sign = 0.0;
            for c in &h.curves {
                let idx = traj.times.partition_point(|&t| t < c.t - 1e-9);
                let x = traj.states[idx.min(traj.states.len() - 1)];
                let d = c.signed_distance(x, eq.off_state, tol).unwrap();
                checks += 1;
                if d == 0.0 {
                    continue;
                }
                if sign == 0.0 {
                    sign = d.signum();
                } else if d.signum() != sign {
                    violations += 1;
                }
            }
        }
    }
    outcome(violations == 0, format!("{violations} violations over {checks} snapshot checks (40 trajectories)"))
}

fn oracle_agreement(hist: &[(f64, ThresholdHistory)], eq: &EquilibriumSet) -> Outcome {
    let start = Instant::now();
    let p = AmocParams::default();
    let tol = ThresholdConfig::default().tol_geo;
    let grid = Grid::new(PhaseWindow::default(), 41, 41);
    let mut ok = true;
    let mut detail = Vec::new();
    for (t_plat, h) in hist {
        let forcing = hosing(*t_plat);
        for t in [0.0, 200.0, 400.0] {
            let fate = grid_fate_map(t, forcing.end() + 2000.0, &forcing, &p, eq, &grid, 0.1).unwrap();
            let far = fate.far_from_boundary(2);
            let curve = h.at_or_before(t).unwrap();
            let (mut agree, mut total) = (0, 0);
            for ((x, &tipped), &use_it) in grid.points().iter().zip(&fate.tipped).zip(&far) {
                if !use_it {
                    continue;
                }
                total += 1;
                let safe = curve.is_inside(*x, eq.off_state, tol).unwrap();
                if safe != tipped {
                    agree += 1;
                }
            }
            let frac = agree as f64 / total as f64;
            ok &= frac >= 0.99;
            detail.push(format!("T_plat={t_plat} t={t}: {:.2}% of {total}", 100.0 * frac));
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(300);
    outcome(ok, format!("{} ({elapsed:.1?})", detail.join("; ")))
}

fn pre_forcing_fate_maps(eq: &EquilibriumSet) -> Outcome {
    let p = AmocParams::default();
    let grid = Grid::new(PhaseWindow::default(), 41, 41);
    let frozen = HosingProfile::constant(0.0);
    let basin = grid_fate_map(0.0, 3000.0, &frozen, &p, eq, &grid, 0.1).unwrap();
    let on_basin: Vec<bool> = basin.tipped.iter().map(|t| !t).collect();
    let n_basin = on_basin.iter().filter(|b| **b).count();
    let mut ok = n_basin > 0;
    let mut detail = vec![format!("ON basin {n_basin} pts")];

    let long = hosing(400.0);
    for t_init in [-1500.0, -2000.0] {
        let fate = grid_fate_map(t_init, long.end() + 2000.0, &long, &p, eq, &grid, 0.1).unwrap();
        let tipped = fate.tipped.iter().zip(&on_basin).filter(|(t, b)| **b && **t).count();
        ok &= tipped == n_basin;
        detail.push(format!("T_plat=400 t_init={t_init}: {tipped}/{n_basin} tip"));
    }

    let short = hosing(300.0);
    let mut counts = Vec::new();
    for t_init in [0.0, -50.0, -100.0, -150.0, -200.0, -400.0, -800.0, -1500.0, -2000.0] {
        let fate = grid_fate_map(t_init, short.end() + 2000.0, &short, &p, eq, &grid, 0.1).unwrap();
        let safe = fate.tipped.iter().filter(|t| !**t).count();
        let x = rk4_endpoint(&p, &short, eq.on_state, t_init, short.end() + 2000.0, 0.1).unwrap();
        let on_safe = x.distance(eq.on_state) < x.distance(eq.off_state);
        ok &= safe > 0 && on_safe;
        counts.push(format!("{t_init}:{safe}{}", if on_safe { "" } else { "(ON tips!)" }));
    }
    detail.push(format!("T_plat=300 no-tip counts {}", counts.join(" ")));
    outcome(ok, detail.join("; "))
}

// ---------------------------------------------------------------------------

const BASE_SEEDS: [u64; 3] = [0, 1000, 2000];

fn skill_runs() -> (Vec<(u64, SkillRun)>, Duration) {
    let start = Instant::now();
    let scn = AmocScenario::default();
    let runs = BASE_SEEDS
        .iter()
        .map(|&seed| {
            let spec = EnsembleSpec { base_seed: seed, ..EnsembleSpec::default() };
            (seed, run_skill(&scn, &spec, &TipClassifier::default(), &SkillSettings::default()).unwrap())
        })
        .collect();
    (runs, start.elapsed())
}

fn auc_at(run: &SkillRun, id: IndicatorId, t: f64) -> Option<f64> {
    run.report.at(id, t).and_then(|r| r.auc)
}

fn first_crossing(run: &SkillRun, id: IndicatorId, level: f64) -> Option<f64> {
    run.report
        .series(id)
        .find(|r| r.auc.is_some_and(|a| a >= level))
        .map(|r| r.t)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "undefined".into())
}

fn skill_a(runs: &[(u64, SkillRun)]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (seed, run) in runs {
        let vals: Vec<String> = IndicatorId::ALL
            .iter()
            .map(|&id| {
                let a = auc_at(run, id, 100.0);
                ok &= a.is_some_and(|a| (0.4..=0.6).contains(&a));
                format!("{id}={}", fmt_opt(a))
            })
            .collect();
        detail.push(format!("seed {seed}: {}", vals.join(" ")));
    }
    outcome(ok, detail.join("; "))
}

fn skill_b(runs: &[(u64, SkillRun)]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (seed, run) in runs {
        let sn = auc_at(run, IndicatorId::SN, 400.0);
        let r = auc_at(run, IndicatorId::RIndicator, 400.0);
        ok &= sn.is_some_and(|a| a >= 0.95) && r.is_some_and(|a| a >= 0.95);
        detail.push(format!("seed {seed}: S_N={} R={}", fmt_opt(sn), fmt_opt(r)));
    }
    outcome(ok, detail.join("; "))
}

fn skill_c(runs: &[(u64, SkillRun)]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (seed, run) in runs {
        let aucs: Vec<f64> = run
            .report
            .series(IndicatorId::ReturnRateSq)
            .filter(|r| r.t <= 400.0)
            .filter_map(|r| r.auc)
            .collect();
        let lo = aucs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = aucs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ok &= !aucs.is_empty() && lo >= 0.3 && hi <= 0.7;
        detail.push(format!("seed {seed}: [{lo:.3}, {hi:.3}] over {} defined times", aucs.len()));
    }
    outcome(ok, detail.join("; "))
}

fn skill_d(runs: &[(u64, SkillRun)]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (seed, run) in runs {
        let sn = first_crossing(run, IndicatorId::SN, 0.75);
        let st = first_crossing(run, IndicatorId::ST, 0.75);
        let pass = matches!((sn, st), (Some(a), Some(b)) if b - a >= 50.0);
        ok &= pass;
        detail.push(format!("seed {seed}: S_N {sn:?} S_T {st:?}"));
    }
    outcome(ok, detail.join("; "))
}

fn iqr(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let x = p * (v.len() - 1) as f64;
        let (i, f) = (x.floor() as usize, x.fract());
        v[i] + f * (v[(i + 1).min(v.len() - 1)] - v[i])
    };
    q(0.75) - q(0.25)
}

fn normalized_threshold_range(run: &SkillRun, id: IndicatorId) -> f64 {
    let th: Vec<f64> = run
        .report
        .series(id)
        .filter(|r| (100.0..=400.0).contains(&r.t))
        .filter_map(|r| r.opt_threshold)
        .filter(|x| x.is_finite())
        .collect();
    let range = th.iter().copied().fold(f64::NEG_INFINITY, f64::max) - th.iter().copied().fold(f64::INFINITY, f64::min);
    let series = run.indicators.iter().find(|s| s.id == id).unwrap();
    let k = series.times.iter().position(|&t| (t - 400.0).abs() < 1e-9).unwrap();
    range / iqr(series.column(k).into_iter().flatten().collect())
}

fn threshold_stability(runs: &[(u64, SkillRun)]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (seed, run) in runs {
        let r = normalized_threshold_range(run, IndicatorId::RIndicator);
        let sn = normalized_threshold_range(run, IndicatorId::SN);
        ok &= r < sn;
        detail.push(format!("seed {seed}: R {r:.3} < S_N {sn:.3}"));
    }
    outcome(ok, detail.join("; "))
}

fn fixed_vs_optimal(runs: &[(u64, SkillRun)]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (seed, run) in runs {
        let r = run.report.at(IndicatorId::RIndicator, 400.0).unwrap();
        let gap_r = (r.informedness.unwrap() - r.fixed_informedness().unwrap()).abs();
        let gap_sn = run
            .report
            .series(IndicatorId::SN)
            .filter(|r| (200.0..=400.0).contains(&r.t))
            .filter_map(|r| Some(r.informedness? - r.fixed_informedness()?))
            .fold(f64::NEG_INFINITY, f64::max);
        ok &= gap_r <= 0.05 && gap_sn >= 0.05;
        detail.push(format!("seed {seed}: |R gap at 400|={gap_r:.3}, max S_N gap={gap_sn:.3}"));
    }
    outcome(ok, detail.join("; "))
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration oracle for the ROC operations.

struct Enumerated {
    /// Candidate thresholds in sweep order with (tp, fp).
    table: Vec<(f64, usize, usize)>,
    n_pos: usize,
    n_neg: usize,
}

fn enumerate(values: &[Option<f64>], labels: &[bool], o: Orientation) -> Option<Enumerated> {
    let data: Vec<(f64, bool)> = values.iter().zip(labels).filter_map(|(v, &l)| v.map(|x| (x, l))).collect();
    let n_pos = data.iter().filter(|d| d.1).count();
    let n_neg = data.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut cands: Vec<f64> = data.iter().map(|d| d.0).collect();
    cands.push(f64::INFINITY);
    cands.push(f64::NEG_INFINITY);
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let mut table: Vec<(f64, usize, usize)> = cands
        .into_iter()
        .map(|thr| {
            let tp = data.iter().filter(|d| d.1 && o.predicts_tip(d.0, thr)).count();
            let fp = data.iter().filter(|d| !d.1 && o.predicts_tip(d.0, thr)).count();
            (thr, tp, fp)
        })
        .collect();
    // Sweep order: from predicting least to predicting most.
    if o == Orientation::TipWhenHigh {
        table.reverse();
    }
    Some(Enumerated { table, n_pos, n_neg })
}

fn oracle_auc(values: &[Option<f64>], labels: &[bool], o: Orientation) -> (u128, u128) {
    let mut num = 0u128;
    let (mut np, mut nn) = (0u128, 0u128);
    for (i, (vi, &li)) in values.iter().zip(labels).enumerate() {
        let Some(vi) = vi else { continue };
        if li {
            np += 1;
        } else {
            nn += 1;
        }
        if !li {
            continue;
        }
        for (j, (vj, &lj)) in values.iter().zip(labels).enumerate() {
            let Some(vj) = vj else { continue };
            if i == j || lj {
                continue;
            }
            let better = match o {
                Orientation::TipWhenHigh => vi > vj,
                Orientation::TipWhenLow => vi < vj,
            };
            num += if better { 2 } else if vi == vj { 1 } else { 0 };
        }
    }
    (num, 2 * np * nn)
}

fn roc_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut failures = Vec::new();
    let mut checked = 0;
    while checked < 100 {
        let n = 2 + (rng.next_u64() % 11) as usize;
        let levels = 2 + rng.next_u64() % 6;
        let values: Vec<Option<f64>> = (0..n)
            .map(|_| (rng.next_u64() % 10 != 0).then(|| (rng.next_u64() % levels) as f64 * 0.5))
            .collect();
        let labels: Vec<bool> = (0..n).map(|_| rng.next_u64() % 2 == 0).collect();
        let o = if rng.next_u64() % 2 == 0 { Orientation::TipWhenHigh } else { Orientation::TipWhenLow };
        let Some(e) = enumerate(&values, &labels, o) else { continue };
        checked += 1;
        let curve = roc_at_time(0.0, &values, &labels, o).unwrap();

        let (num, den) = oracle_auc(&values, &labels, o);
        if auc(&curve) != num as f64 / den as f64 {
            failures.push(format!("auc #{checked}"));
        }

        // Optimal: minimize (fp n_pos)^2 + ((n_pos - tp) n_neg)^2, ties to higher tp, then first in sweep order.
        let dist = |tp: usize, fp: usize| {
            let a = (fp * e.n_pos) as u128;
            let b = ((e.n_pos - tp) * e.n_neg) as u128;
            a * a + b * b
        };
        let best = e
            .table
            .iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| {
                dist(a.1, a.2).cmp(&dist(b.1, b.2)).then(b.1.cmp(&a.1)).then(i.cmp(j))
            })
            .unwrap()
            .1;
        let opt = optimal_threshold(&curve);
        let got = curve.counts[opt.index];
        if (got.0, got.1, opt.threshold) != (best.1, best.2, best.0) {
            failures.push(format!("optimal #{checked}"));
        }

        // Fixed threshold at a random candidate or midpoint.
        let thr = (rng.next_u64() % (2 * levels + 2)) as f64 * 0.25 - 0.25;
        let s = fixed_threshold_stats(&values, &labels, thr, o).unwrap();
        let tp = values.iter().zip(&labels).filter(|(v, l)| **l && v.is_some_and(|x| o.predicts_tip(x, thr))).count();
        let fp = values.iter().zip(&labels).filter(|(v, l)| !**l && v.is_some_and(|x| o.predicts_tip(x, thr))).count();
        let (fn_, tn) = (e.n_pos - tp, e.n_neg - fp);
        let for_ = (fn_ + tn > 0).then(|| fn_ as f64 / (fn_ + tn) as f64);
        if (s.tp, s.fp) != (tp, fp)
            || s.tpr != tp as f64 / e.n_pos as f64
            || s.fpr != fp as f64 / e.n_neg as f64
            || s.false_omission_rate != for_
        {
            failures.push(format!("fixed #{checked}"));
        }

        // Constrained: best specificity with TPR >= 0.95, best sensitivity with specificity >= 0.95.
        let best_spec = e
            .table
            .iter()
            .filter(|r| r.1 as f64 / e.n_pos as f64 >= 0.95)
            .map(|r| e.n_neg - r.2)
            .max()
            .unwrap();
        let best_sens = e
            .table
            .iter()
            .filter(|r| (e.n_neg - r.2) as f64 / e.n_neg as f64 >= 0.95)
            .map(|r| r.1)
            .max()
            .unwrap();
        let a = constrained_threshold(&curve, Constraint::MinSensitivity(0.95));
        let b = constrained_threshold(&curve, Constraint::MinSpecificity(0.95));
        if a.achieved != 1.0 - (e.n_neg - best_spec) as f64 / e.n_neg as f64
            || b.achieved != best_sens as f64 / e.n_pos as f64
            || !a.satisfied
            || !b.satisfied
        {
            failures.push(format!("constrained #{checked}"));
        }
    }
    outcome(failures.is_empty(), format!("{checked} instances, mismatches: {failures:?}"))
}

fn sde_statistics(eq: &EquilibriumSet) -> Outcome {
    let p = AmocParams::default();
    let h = HosingProfile::constant(0.0);
    let noise = NoiseModel::default();
    let dt = 0.1;
    let cfg = IntegratorConfig { method: Method::EulerMaruyama, ..IntegratorConfig::rk4(0.0, dt, dt) };
    let drift = euler_step(&p, &h, 0.0, eq.on_state, dt);
    let n = 10_000;
    let incs: Vec<State2D> = (0..n)
        .map(|seed| integrate_sde(&p, &h, eq.on_state, &noise, seed, &cfg).unwrap().last().1 - drift)
        .collect();
    let mean = incs.iter().fold(State2D::default(), |a, &b| a + b) * (1.0 / n as f64);
    let mut cov = [[0.0; 2]; 2];
    for d in &incs {
        let d = *d - mean;
        let v = [d.s_n, d.s_t];
        for i in 0..2 {
            for j in 0..2 {
                cov[i][j] += v[i] * v[j] / (n - 1) as f64;
            }
        }
    }
    let target = noise.covariance_rate().map(|row| row.map(|x| x * dt));
    let frob = |m: [[f64; 2]; 2]| m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let diff = [[cov[0][0] - target[0][0], cov[0][1] - target[0][1]], [cov[1][0] - target[1][0], cov[1][1] - target[1][1]]];
    let rel = frob(diff) / frob(target);
    outcome(rel < 0.05, format!("relative Frobenius error {:.2}% (mean {:.1e}, {:.1e})", 100.0 * rel, mean.s_n, mean.s_t))
}

// ---------------------------------------------------------------------------

fn main() {
    let suite_start = Instant::now();
    let eq = unforced_eq();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut report = |name: &'static str, o: Outcome| {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((name, o));
    };

    report("1-D example tipping regimes", example_regimes());
    report("fold critical value", fold_critical_value());
    report("AMOC deterministic R-tipping", amoc_deterministic());
    let hist = histories(&eq, 0.0);
    report("threshold ON-state containment at t=0", containment(&hist, &eq));
    report("sign permanence", sign_permanence(&hist, &eq));
    report("threshold vs fate-map oracle", oracle_agreement(&hist, &eq));
    report("pre-forcing fate-map limits", pre_forcing_fate_maps(&eq));

    let (runs, elapsed) = skill_runs();
    let within = elapsed < Duration::from_secs(600);
    report("ensemble skill runtime", outcome(within, format!("3 balanced ensembles + skill in {elapsed:.1?}")));
    report("skill (a) AUC in [0.4,0.6] at t=100", skill_a(&runs));
    report("skill (b) AUC >= 0.95 at t=400 for S_N and R", skill_b(&runs));
    report("skill (c) return-rate AUC in [0.3,0.7] for t<=400", skill_c(&runs));
    report("skill (d) S_T AUC=0.75 crossing >= 50 y after S_N", skill_d(&runs));
    report("optimal-threshold stability", threshold_stability(&runs));
    report("fixed vs optimal informedness", fixed_vs_optimal(&runs));
    report("ROC unit oracles", roc_oracles());
    report("SDE increment statistics", sde_statistics(&eq));

    let failed: Vec<&str> = results.iter().filter(|r| !r.1.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} passed, {} failed ({:.1?})",
        results.len() - failed.len(),
        failed.len(),
        suite_start.elapsed()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
