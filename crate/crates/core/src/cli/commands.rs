use std::path::PathBuf;

use super::output::{num, RunManifest, Table};
use super::CommonArgs;
use crate::config::{ConfigFile, SystemConfig};
use crate::correlations::{correlation_trace, DiscordOptions, Units};
use crate::error::{Error, Result};
use crate::metrics::{advantage_report, cluster_size_estimate};
use crate::protocols::{
    charge_sweep, parallel_baseline, qcbl_run, saturation_sweep, storage_decay, theta_bar, theta_grid,
};

const DEFAULT_GRID: usize = 200;
const DEFAULT_ADVANTAGE_NS: [usize; 5] = [3, 9, 12, 18, 36];

pub struct Context {
    pub file: ConfigFile,
    pub common: CommonArgs,
    pub subcommand: &'static str,
}

impl Context {
    fn system(&self) -> &SystemConfig {
        &self.file.system
    }

    fn path(&self, name: String) -> PathBuf {
        self.common.out.join(name)
    }

    fn grid(&self, from_file: Option<usize>) -> Result<usize> {
        let grid = self.common.grid.or(from_file).unwrap_or(DEFAULT_GRID);
        if grid < 2 {
            return Err(Error::Config(format!("grid must have at least 2 intervals, got {grid}")));
        }
        Ok(grid)
    }

    fn manifest(&self, outputs: &[&PathBuf]) -> RunManifest {
        let mut m = RunManifest::new(self.subcommand, self.system());
        if let Some(path) = &self.common.config {
            m = m.param("config_file", path.display());
        }
        m.outputs = outputs.iter().map(|p| (*p).clone()).collect();
        m
    }
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect()
}

pub fn cmd_charge(ctx: &Context, advantage: bool, ns: Option<&[usize]>) -> Result<()> {
    let config = ctx.system();
    let n = config.n_chargers;
    let grid = ctx.grid(ctx.file.charge.grid)?;
    let trace = charge_sweep(config, &theta_grid(n, grid))?;
    let path = ctx.path(format!("charge_N{n}.csv"));

    let mut ns: Vec<usize> = ns
        .map(<[usize]>::to_vec)
        .or_else(|| ctx.file.charge.advantage_ns.clone())
        .unwrap_or_else(|| DEFAULT_ADVANTAGE_NS.to_vec());
    ns.push(n);
    ns.sort_unstable();
    ns.dedup();
    let gamma_path = ctx.path("gamma_vs_n.csv".into());
    let outputs: Vec<&PathBuf> = if advantage { vec![&path, &gamma_path] } else { vec![&path] };
    let manifest = ctx.manifest(&outputs).param("grid", grid);

    let mut table = Table::new(&["theta", "tau_normalized", "e_b"]);
    for ((t, tn), e) in trace.theta.iter().zip(trace.tau_normalized()).zip(&trace.e_b) {
        table.push(vec![num(*t), num(tn), num(*e)]);
    }
    table.write(&path, &manifest, &[])?;
    let (theta_max, e_max) = trace.peak()?;
    println!(
        "N = {n}: e_B max {e_max:.6} at theta = {theta_max:.6} (theta/theta_bar = {:.6})",
        theta_max / theta_bar(n)
    );

    if advantage {
        let single = parallel_baseline(config, &theta_grid(1, grid))?;
        let mut table = Table::new(&["n", "gamma_measured", "gamma_sqrt_n"]);
        for &k in &ns {
            let system = SystemConfig {
                n_chargers: k,
                ..config.clone()
            };
            let collective = charge_sweep(&system, &theta_grid(k, grid))?;
            let report = advantage_report(&system, &collective, &single)?;
            let gamma = report.gamma_advantage;
            table.push(vec![k.to_string(), num(gamma), num((k as f64).sqrt())]);
            println!(
                "N = {k}: Gamma = {gamma:.6} (sqrt N = {:.6}), cluster estimate {}",
                (k as f64).sqrt(),
                cluster_size_estimate(gamma)
            );
        }
        table.write(&gamma_path, &manifest, &[])?;
    }
    Ok(())
}

pub fn cmd_ergotropy(ctx: &Context) -> Result<()> {
    let config = ctx.system();
    let n = config.n_chargers;
    let grid = ctx.grid(ctx.file.ergotropy.grid)?;
    let trace = charge_sweep(config, &theta_grid(n, grid))?;
    let e_max = trace.e_b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = config.epsilon * e_max;
    let path = ctx.path(format!("ergotropy_N{n}.csv"));
    let manifest = ctx.manifest(&[&path]).param("grid", grid);

    let ratio = trace.ergotropy_ratio.clone().unwrap_or_default();
    let mut table = Table::new(&[
        "theta",
        "tau_normalized",
        "e_b",
        "ergotropy",
        "ergotropy_ratio",
        "ergotropy_scaled",
    ]);
    for (k, tn) in trace.tau_normalized().into_iter().enumerate() {
        table.push(vec![
            num(trace.theta[k]),
            num(tn),
            num(trace.e_b[k]),
            num(trace.ergotropy[k]),
            num(ratio[k]),
            num(trace.ergotropy[k] / scale),
        ]);
    }
    let note = format!("ergotropy_scaled = ergotropy / (epsilon * e_b_max), e_b_max = {}", num(e_max));
    table.write(&path, &manifest, &[note])?;

    let at_bar = trace
        .tau_normalized()
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
        .map(|(k, _)| ratio[k])
        .unwrap_or(f64::NAN);
    println!("N = {n}: ergotropy ratio {at_bar:.6} at theta/theta_bar = 1");
    Ok(())
}

pub fn cmd_correlations(ctx: &Context, directions: Option<usize>) -> Result<()> {
    let config = ctx.system();
    let n = config.n_chargers;
    let grid = ctx.grid(ctx.file.correlations.grid)?;
    let options = DiscordOptions {
        directions: directions
            .or(ctx.file.correlations.discord_directions)
            .unwrap_or(DiscordOptions::default().directions),
        units: Units::Bits,
    };
    let units = ctx.common.units;
    let trace = correlation_trace(config, &theta_grid(n, grid), units, &options)?;
    let path = ctx.path(format!("correlations_N{n}.csv"));
    let manifest = ctx
        .manifest(&[&path])
        .param("grid", grid)
        .param("discord_directions", options.directions)
        .param("entropy_units", units)
        .param("discord_units", options.units);

    let mut table = Table::new(&[
        "theta",
        "e_b_pure",
        "e_b_mixed",
        "entropy",
        "discord_peak_normalized",
        "discord_raw",
    ]);
    for k in 0..trace.theta_samples.len() {
        table.push(vec![
            num(trace.theta_samples[k]),
            num(trace.e_b_pure[k]),
            num(trace.e_b_mixed[k]),
            num(trace.entropy[k]),
            num(trace.discord[k]),
            num(trace.discord_raw[k]),
        ]);
    }
    table.write(&path, &manifest, &[])?;
    let unconverged = trace.discord_converged.iter().filter(|c| !**c).count();
    if unconverged > 0 {
        eprintln!("warning: discord search did not converge at {unconverged} samples");
    }
    println!("N = {n}: {} samples written", trace.theta_samples.len());
    Ok(())
}

pub fn cmd_asymptotic(
    ctx: &Context,
    delta_min: Option<f64>,
    delta_max: Option<f64>,
    delta_steps: Option<usize>,
    iterations: Option<usize>,
) -> Result<()> {
    let config = ctx.system();
    let n = config.n_chargers;
    config.relaxation_times()?;
    let section = &ctx.file.asymptotic;
    let lo = delta_min.or(section.delta_min_s).unwrap_or(0.5);
    let hi = delta_max.or(section.delta_max_s).unwrap_or(30.0);
    let steps = delta_steps.or(section.delta_steps).unwrap_or(60);
    let iterations = iterations.or(section.iterations).unwrap_or(20);
    if !(lo >= 0.0 && hi >= lo) || steps == 0 {
        return Err(Error::Config(format!(
            "invalid delay sweep [{lo}, {hi}] with {steps} steps"
        )));
    }
    let sweep = saturation_sweep(config, &linspace(lo, hi, steps), iterations)?;

    let trace_path = ctx.path(format!("asymptotic_N{n}_trace.csv"));
    let summary_path = ctx.path(format!("asymptotic_N{n}_saturation.csv"));
    let manifest = ctx
        .manifest(&[&trace_path, &summary_path])
        .param("delta_min_s", lo)
        .param("delta_max_s", hi)
        .param("delta_steps", steps)
        .param("iterations", iterations);

    let mut trace = Table::new(&["delta_s", "iteration", "time_s", "e_b"]);
    let mut summary = Table::new(&[
        "delta_s",
        "e_b_saturation",
        "fit_e_b_delta",
        "fit_t_delta_s",
        "fit_relative_rms",
        "fit_converged",
        "monotone",
    ]);
    for run in &sweep.runs {
        for (k, e) in run.e_b_per_iteration.iter().enumerate() {
            let it = k + 1;
            trace.push(vec![num(run.delta), it.to_string(), num(it as f64 * run.delta), num(*e)]);
        }
        summary.push(vec![
            num(run.delta),
            num(run.saturation()),
            num(run.fit.amplitude),
            num(run.fit.time_constant),
            num(run.fit.relative_rms()),
            run.fit.converged.to_string(),
            run.monotone.to_string(),
        ]);
    }
    trace.write(&trace_path, &manifest, &[])?;
    let note = format!("unitary_max = {}", num(sweep.unitary_max));
    summary.write(&summary_path, &manifest, &[note])?;

    let (best_delta, best) = sweep.best();
    println!("unitary max e_B = {:.6}", sweep.unitary_max);
    println!(
        "best delay {best_delta:.4} s: e_B = {best:.6} ({:.1}% of unitary max), interior maximum: {}",
        100.0 * best / sweep.unitary_max,
        sweep.has_interior_maximum()
    );
    Ok(())
}

pub fn cmd_qcbl(ctx: &Context, storage: f64, storage_max: Option<f64>, storage_steps: Option<usize>) -> Result<()> {
    let config = ctx.system();
    let n = config.n_chargers;
    let j_bl = config.coupling_j_bl()?;
    let grid = ctx.grid(ctx.file.qcbl.grid)?;
    let xs = linspace(0.0, 1.0, grid + 1);
    let run = qcbl_run(config, &xs, storage)?;

    let discharge_path = ctx.path(format!("qcbl_N{n}_discharge.csv"));
    let storage_path = ctx.path(format!("qcbl_N{n}_storage.csv"));
    let t1_b = config.t1_battery_s;
    let outputs: Vec<&PathBuf> = if t1_b.is_some() {
        vec![&discharge_path, &storage_path]
    } else {
        vec![&discharge_path]
    };
    let mut manifest = ctx.manifest(&outputs).param("grid", grid).param("storage_s", storage);

    let mut table = Table::new(&["j_bl_tau", "tau_prime_s", "e_b", "e_l"]);
    for k in 0..xs.len() {
        table.push(vec![num(xs[k]), num(xs[k] / j_bl), num(run.e_b[k]), num(run.e_l[k])]);
    }

    let Some(t1_b) = t1_b else {
        table.write(&discharge_path, &manifest, &[])?;
        eprintln!("note: t1_battery_s is not set; skipping the storage sweep");
        return Ok(());
    };
    let section = &ctx.file.qcbl;
    let hi = storage_max.or(section.storage_max_s).unwrap_or(3.0 * t1_b);
    let steps = storage_steps.or(section.storage_steps).unwrap_or(31);
    if !(hi > 0.0) || steps < 4 {
        return Err(Error::Config(format!(
            "storage sweep needs a positive span and at least 4 steps, got {hi} s and {steps}"
        )));
    }
    manifest = manifest.param("storage_max_s", hi).param("storage_steps", steps);
    table.write(&discharge_path, &manifest, &[])?;

    let decay = storage_decay(config, &linspace(0.0, hi, steps))?;
    let mut table = Table::new(&["tau_s", "e_l", "e_l_fit"]);
    for (t, e) in decay.tau_s.iter().zip(&decay.e_l) {
        table.push(vec![num(*t), num(*e), num(decay.fit.evaluate(*t))]);
    }
    let note = format!(
        "fit e_l = a*exp(-tau_s/T_s) + c: a = {}, T_s = {}, c = {}, converged = {}",
        num(decay.fit.amplitude),
        num(decay.fit.time_constant),
        num(decay.fit.offset),
        decay.fit.converged
    );
    table.write(&storage_path, &manifest, &[note])?;
    if !decay.fit.converged {
        return Err(Error::Analysis("storage decay fit did not converge".into()));
    }
    println!("stored e_B = {:.6}, fitted T_s = {:.4} s", run.e_b_charged, decay.fit.time_constant);
    Ok(())
}
