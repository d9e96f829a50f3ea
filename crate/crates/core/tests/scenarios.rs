use rtip_core::dynamics::*;
use rtip_core::ensemble::{EnsembleSpec, TipClassifier};
use rtip_core::ews::IndicatorId;
use rtip_core::integrators::{integrate_ode, rk4_endpoint, IntegratorConfig};
use rtip_core::pipeline::{run_skill, AmocScenario, SkillSettings};

fn eq0() -> EquilibriumSet {
    find_equilibria(0.0, &AmocParams::default(), None, &EquilibriumConfig::default()).unwrap()
}

#[test]
fn on_state_is_fixed_without_forcing() {
    let eq = eq0();
    let h = HosingProfile::constant(0.0);
    let x = rk4_endpoint(&AmocParams::default(), &h, eq.on_state, 0.0, 1000.0, 0.1).unwrap();
    assert!(x.distance(eq.on_state) < 1e-8);
}

#[test]
fn edge_state_perturbations_reach_both_attractors() {
    let eq = eq0();
    let h = HosingProfile::constant(0.0);
    let v = eq.edge_eigen.unstable.vector;
    let p = AmocParams::default();
    let to_on = rk4_endpoint(&p, &h, eq.edge_state + v * 1e-4, 0.0, 5000.0, 0.1).unwrap();
    let to_off = rk4_endpoint(&p, &h, eq.edge_state - v * 1e-4, 0.0, 5000.0, 0.1).unwrap();
    assert!(to_on.distance(eq.on_state) < 1e-3, "{to_on:?}");
    assert!(to_off.distance(eq.off_state) < 1e-3, "{to_off:?}");
}

#[test]
fn short_plateau_keeps_northern_salinity_high() {
    let eq = eq0();
    let h = HosingProfile::with_plateau(300.0);
    let traj = integrate_ode(&AmocParams::default(), &h, eq.on_state, &IntegratorConfig::rk4(0.0, 3000.0, 0.1)).unwrap();
    assert!(traj.states.iter().all(|x| x.s_n > eq.off_state.s_n));
    assert!(traj.last().1.distance(eq.on_state) < 1e-3);
}

#[test]
fn ensemble_labels_match_final_indicator_sign() {
    let scn = AmocScenario::default();
    let spec = EnsembleSpec { n_target_per_class: 15, base_seed: 42, ..EnsembleSpec::default() };
    let settings = SkillSettings { indicator_snapshot_dt: 5.0, ..SkillSettings::default() };
    let run = run_skill(&scn, &spec, &TipClassifier::default(), &settings).unwrap();
    let r = run.indicators.iter().find(|s| s.id == IndicatorId::RIndicator).unwrap();
    let last = r.times.len() - 1;
    let col = r.column(last);
    let agree = col.iter().zip(&run.ensemble.labels).filter(|(v, &tip)| (v.unwrap() < 0.0) == tip).count();
    assert!(agree as f64 >= 0.99 * col.len() as f64, "{agree}/{}", col.len());

    // Some tipped members start inside and cross out.
    let crossed = run
        .ensemble
        .labels
        .iter()
        .enumerate()
        .filter(|(m, &tip)| tip && r.values[*m][0].unwrap() > 0.0 && r.values[*m][last].unwrap() < 0.0)
        .count();
    assert!(crossed > 0);

    // All members share one time grid, return rate missing only in its first window.
    let rr = run.indicators.iter().find(|s| s.id == IndicatorId::ReturnRateSq).unwrap();
    assert!(run.indicators.iter().all(|s| s.times == r.times));
    for (k, &t) in rr.times.iter().enumerate() {
        let defined = rr.column(k).iter().all(|v| v.is_some());
        assert_eq!(defined, t >= spec.t_init + settings.return_rate_window, "t={t}");
    }
}
