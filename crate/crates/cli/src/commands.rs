use std::io::Write;

use rtip_core::dynamics::{
    amoc_q, eval_hosing, find_equilibria, upper_equilibrium, EquilibriumSet, Forcing, TanhRampForcing,
};
use rtip_core::ensemble::build_balanced_ensemble;
use rtip_core::ews::IndicatorSeries;
use rtip_core::integrators::{integrate_ode, integrate_sde, IntegratorConfig, Method, NoiseModel};
use rtip_core::pipeline::{compute_indicators, run_skill};
use rtip_core::threshold::{grid_fate_map, Grid};

use crate::config::{ExperimentConfig, ModelKind};
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    Example1d,
    Simulate,
    Threshold,
    Fatemap,
    Ensemble,
    Indicators,
    Skill,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Example1d => "example1d",
            Subcommand::Simulate => "simulate",
            Subcommand::Threshold => "threshold",
            Subcommand::Fatemap => "fatemap",
            Subcommand::Ensemble => "ensemble",
            Subcommand::Indicators => "indicators",
            Subcommand::Skill => "skill",
        }
    }
}

pub fn run(cmd: Subcommand, cfg: &ExperimentConfig, out: &mut OutputDir) -> CliResult<()> {
    let needs_amoc = !matches!(cmd, Subcommand::Example1d | Subcommand::Simulate);
    if needs_amoc && cfg.model != ModelKind::Amoc3box {
        return Err(CliError::Config(format!("model: `{}` requires amoc3box", cmd.name())));
    }
    match cmd {
        Subcommand::Example1d => example1d(cfg, out),
        Subcommand::Simulate if cfg.model == ModelKind::Example1d => simulate_example(cfg, out),
        Subcommand::Simulate => simulate_amoc(cfg, out),
        Subcommand::Threshold => threshold(cfg, out),
        Subcommand::Fatemap => fatemap(cfg, out),
        Subcommand::Ensemble => ensemble(cfg, out),
        Subcommand::Indicators => indicators(cfg, out),
        Subcommand::Skill => skill(cfg, out),
    }
}

fn write_ramp(out: &mut OutputDir, f: &TanhRampForcing, t0: f64, t1: f64, dt: f64) -> CliResult<()> {
    out.csv("forcing.csv", |w| {
        writeln!(w, "t,p")?;
        let n = ((t1 - t0) / dt).round() as usize;
        for k in 0..=n {
            let t = t0 + (t1 - t0) * k as f64 / n as f64;
            writeln!(w, "{t},{}", f.level(t))?;
        }
        Ok(())
    })
}

fn example_start(f: &TanhRampForcing, t0: f64, p_plus: f64) -> CliResult<f64> {
    upper_equilibrium(f.level(t0), p_plus, 3f64.sqrt()).ok_or_else(|| {
        CliError::Core(rtip_core::Error::ConvergenceFailure(format!(
            "no upper equilibrium at p(t_start) = {}",
            f.level(t0)
        )))
    })
}

fn example1d(cfg: &ExperimentConfig, out: &mut OutputDir) -> CliResult<()> {
    let ex = &cfg.example;
    let params = ex.params();
    let ode = IntegratorConfig { record_stride: ex.record_stride, ..IntegratorConfig::rk4(ex.t_start, ex.t_end, ex.dt) };
    let mut runs = Vec::new();
    for &theta in &ex.deterministic_thetas {
        let f = TanhRampForcing::new(ex.p_plus, theta)?;
        let x0 = example_start(&f, ex.t_start, ex.p_plus)?;
        runs.push(integrate_ode(&params, &f, x0, &ode)?);
    }
    out.csv("example_deterministic.csv", |w| {
        for (i, r) in runs.iter().enumerate() {
            r.write_csv(w, i == 0)?;
        }
        Ok(())
    })?;

    let f = TanhRampForcing::new(ex.p_plus, ex.theta)?;
    let x0 = example_start(&f, ex.t_start, ex.p_plus)?;
    let sde = IntegratorConfig { method: Method::EulerMaruyama, ..ode };
    let noise = NoiseModel::scalar(ex.sigma);
    let members: Vec<_> = {
        use rayon::prelude::*;
        (0..ex.n_members as u64)
            .into_par_iter()
            .map(|i| integrate_sde(&params, &f, x0, &noise, cfg.base_seed + i, &sde))
            .collect::<rtip_core::Result<_>>()?
    };
    out.csv("example_ensemble.csv", |w| {
        writeln!(w, "t,x1,seed,forcing_id")?;
        for m in &members {
            m.write_csv(w, false)?;
        }
        Ok(())
    })?;
    write_ramp(out, &f, ex.t_start, ex.t_end, ex.dt * ex.record_stride as f64)
}

fn simulate_example(cfg: &ExperimentConfig, out: &mut OutputDir) -> CliResult<()> {
    let ex = &cfg.example;
    let f = TanhRampForcing::new(ex.p_plus, ex.theta)?;
    let x0 = example_start(&f, ex.t_start, ex.p_plus)?;
    let ode = IntegratorConfig { record_stride: ex.record_stride, ..IntegratorConfig::rk4(ex.t_start, ex.t_end, ex.dt) };
    let traj = integrate_ode(&ex.params(), &f, x0, &ode)?;
    out.csv("trajectory.csv", |w| traj.write_csv(w, true))?;
    write_ramp(out, &f, ex.t_start, ex.t_end, ex.dt * ex.record_stride as f64)
}

fn write_equilibria(out: &mut OutputDir, sets: &[EquilibriumSet]) -> CliResult<()> {
    out.csv("equilibria.csv", |w| {
        writeln!(w, "h,state,x1,x2")?;
        for eq in sets {
            for (name, x) in [("on", eq.on_state), ("off", eq.off_state), ("edge", eq.edge_state)] {
                writeln!(w, "{},{name},{},{}", eq.h, x.s_n, x.s_t)?;
            }
        }
        Ok(())
    })
}

fn simulate_amoc(cfg: &ExperimentConfig, out: &mut OutputDir) -> CliResult<()> {
    let scn = cfg.scenario();
    let sim = &cfg.simulate;
    let eq = scn.future_equilibria()?;
    let x0 = sim.x0.unwrap_or(eq.on_state);
    let ode = IntegratorConfig { record_stride: sim.record_stride, ..IntegratorConfig::rk4(sim.t_start, sim.t_end, sim.dt) };
    let traj = integrate_ode(&scn.params, &scn.hosing, x0, &ode)?;
    out.csv("trajectory.csv", |w| traj.write_csv(w, true))?;
    out.csv("response.csv", |w| {
        writeln!(w, "t,H,q_sv")?;
        for (&t, &x) in traj.times.iter().zip(&traj.states) {
            writeln!(w, "{t},{},{}", eval_hosing(&scn.hosing, t), amoc_q(x, &scn.params) * 1e-6)?;
        }
        Ok(())
    })?;
    let mut sets = vec![eq];
    if scn.hosing.h_max != scn.hosing.h0 {
        // Frozen equilibria at peak forcing may not be bistable.
        if let Ok(peak) = find_equilibria(scn.hosing.h_max, &scn.params, None, &scn.equilibria) {
            sets.push(peak);
        }
    }
    write_equilibria(out, &sets)
}

fn threshold(cfg: &ExperimentConfig, out: &mut OutputDir) -> CliResult<()> {
    let scn = cfg.scenario();
    let eq = scn.future_equilibria()?;
    let history = scn.threshold_history(&eq, cfg.threshold_t_start)?;
    out.csv("threshold_history.csv", |w| history.write_csv(w))?;
    write_equilibria(out, &[eq])
}

fn fatemap(cfg: &ExperimentConfig, out: &mut OutputDir) -> CliResult<()> {
    let scn = cfg.scenario();
    let fm = &cfg.fatemap;
    let eq = scn.future_equilibria()?;
    let grid = Grid::new(fm.window.unwrap_or(cfg.equilibria.window), fm.n_n, fm.n_t);
    let t_final = scn.hosing.end() + fm.horizon;
    let mut index = Vec::new();
    for (k, &t_init) in fm.t_init.iter().enumerate() {
        let map = grid_fate_map(t_init, t_final, &scn.hosing, &scn.params, &eq, &grid, fm.dt)?;
        let name = format!("fatemap_{k:03}.csv");
        out.csv(&name, |w| map.write_csv(w))?;
        index.push((name, t_init));
    }
    out.csv("fatemap_index.csv", |w| {
        writeln!(w, "file,t_init")?;
        for (name, t) in &index {
            writeln!(w, "{name},{t}")?;
        }
        Ok(())
    })?;
    write_equilibria(out, &[eq])
}

fn ensemble(cfg: &ExperimentConfig, out: &mut OutputDir) -> CliResult<()> {
    let scn = cfg.scenario();
    let eq = scn.future_equilibria()?;
    let ens = build_balanced_ensemble(
        &scn.params,
        &scn.hosing,
        scn.hosing.end(),
        &eq,
        &cfg.ensemble_spec(),
        &cfg.classifier,
    )?;
    eprintln!("ensemble: {} members from {} draws ({} unresolved)", ens.len(), ens.draws, ens.unresolved);
    out.csv("ensemble_trajectories.csv", |w| ens.write_trajectories_csv(w))?;
    out.csv("ensemble_labels.csv", |w| ens.write_labels_csv(w))
}

fn write_series(out: &mut OutputDir, series: &[IndicatorSeries]) -> CliResult<()> {
    out.csv("indicators.csv", |w| {
        for (i, s) in series.iter().enumerate() {
            s.write_csv(w, i == 0)?;
        }
        Ok(())
    })
}

fn indicators(cfg: &ExperimentConfig, out: &mut OutputDir) -> CliResult<()> {
    let mut scn = cfg.scenario();
    let spec = cfg.ensemble_spec();
    let eq = scn.future_equilibria()?;
    let ens = build_balanced_ensemble(&scn.params, &scn.hosing, scn.hosing.end(), &eq, &spec, &cfg.classifier)?;
    scn.threshold.snapshot_dt = cfg.skill.indicator_snapshot_dt;
    let history = scn.threshold_history(&eq, spec.t_init)?;
    let series = compute_indicators(&ens, &history, eq.off_state, scn.threshold.tol_geo, cfg.skill.return_rate_window)?;
    write_series(out, &series)?;
    out.csv("ensemble_labels.csv", |w| ens.write_labels_csv(w))
}

fn skill(cfg: &ExperimentConfig, out: &mut OutputDir) -> CliResult<()> {
    let run = run_skill(&cfg.scenario(), &cfg.ensemble_spec(), &cfg.classifier, &cfg.skill)?;
    eprintln!(
        "skill: {} members from {} draws ({} unresolved)",
        run.ensemble.len(),
        run.ensemble.draws,
        run.ensemble.unresolved
    );
    out.csv("skill_report.csv", |w| run.report.write_csv(w))?;
    write_series(out, &run.indicators)?;
    out.csv("ensemble_labels.csv", |w| run.ensemble.write_labels_csv(w))
}
