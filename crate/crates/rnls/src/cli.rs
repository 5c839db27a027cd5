//! Command-line pipelines.
//!
//! Subcommands: `simulate`, `equivalence`, `blowup`, `virial`,
//! `convergence`, `groundstate`, `alpha`, `plot`. All but `alpha` and
//! `plot` take `--config <path>`; `alpha` takes `--gamma-min` and
//! `--omega`; `plot` takes `--csv`, `--columns` and optionally `--out`.
//!
//! Exit codes: 0 on success or a passing experiment, 2 when an experiment
//! verdict fails, 3 when `simulate` observes blow-up (informational), 1 on
//! error. Config-driven subcommands always write `run_summary.json` into
//! the output directory on exit codes 0/2/3.

use std::path::{Path, PathBuf};

use crate::diagnostics::{
    blowup_experiment, convergence_order, frame_equivalence, verify_balance_laws, verify_virial,
    ExperimentReport,
};
use crate::io::{load_config, write_snapshot, write_timeseries_csv, RunConfig, RunSummary};
use crate::model::alpha_omega;
use crate::propagators::{run, RunResult, RunStatus};

const USAGE: &str = "usage: rnls <simulate|equivalence|blowup|virial|convergence|groundstate|alpha|plot> [options]
  simulate|equivalence|blowup|virial|convergence|groundstate --config <path>
  alpha --gamma-min <value> --omega <value>
  plot --csv <path> --columns <a,b,...> [--out <path>]";

/// Entry point used by the binary; returns the process exit code.
pub fn cli_main(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn dispatch(args: &[String]) -> Result<i32, String> {
    let Some(cmd) = args.first() else {
        return Err(USAGE.to_string());
    };
    let rest = &args[1..];
    match cmd.as_str() {
        "simulate" => cmd_simulate(&config_for(rest)?),
        "equivalence" => cmd_equivalence(&config_for(rest)?),
        "blowup" => cmd_blowup(&config_for(rest)?),
        "virial" => cmd_virial(&config_for(rest)?),
        "convergence" => cmd_convergence(&config_for(rest)?),
        "groundstate" => cmd_groundstate(&config_for(rest)?),
        "alpha" => cmd_alpha(rest),
        "plot" => cmd_plot(rest),
        other => Err(format!("unknown subcommand {other:?}\n{USAGE}")),
    }
}

fn flag_value(args: &[String], name: &str) -> Result<Option<String>, String> {
    let mut found = None;
    let mut i = 0;
    while i < args.len() {
        if args[i] == name {
            let v = args
                .get(i + 1)
                .ok_or_else(|| format!("{name} requires a value"))?;
            found = Some(v.clone());
            i += 2;
        } else {
            i += 1;
        }
    }
    Ok(found)
}

fn config_for(args: &[String]) -> Result<RunConfig, String> {
    let path = flag_value(args, "--config")?
        .ok_or_else(|| format!("--config <path> is required\n{USAGE}"))?;
    load_config(Path::new(&path)).map_err(|e| e.to_string())
}

struct Pipeline {
    config: RunConfig,
    summary: RunSummary,
}

impl Pipeline {
    fn new(config: &RunConfig, status: &str) -> Result<Pipeline, String> {
        std::fs::create_dir_all(&config.output_dir)
            .map_err(|e| format!("cannot create output dir: {e}"))?;
        Ok(Pipeline {
            config: config.clone(),
            summary: RunSummary::new(status, config.echo.clone()),
        })
    }

    fn out(&self, name: &str) -> PathBuf {
        self.config.output_dir.join(name)
    }

    fn write_records(&mut self, name: &str, result: &RunResult) -> Result<(), String> {
        let path = self.out(name);
        write_timeseries_csv(&path, &result.records).map_err(|e| e.to_string())?;
        self.summary.add_file(&path).map_err(|e| e.to_string())?;
        Ok(())
    }

    fn write_field(&mut self, name: &str, result: &RunResult) -> Result<(), String> {
        let path = self.out(name);
        write_snapshot(&path, &result.final_field, result.t_final).map_err(|e| e.to_string())?;
        self.summary.add_file(&path).map_err(|e| e.to_string())?;
        Ok(())
    }

    fn finish(mut self, status: &str, exit: i32) -> Result<i32, String> {
        self.summary.status = status.to_string();
        self.summary
            .write(&self.config.output_dir)
            .map_err(|e| e.to_string())?;
        Ok(exit)
    }
}

fn status_str(status: RunStatus) -> &'static str {
    match status {
        RunStatus::Completed => "completed",
        RunStatus::BlowupDetected => "blowup_detected",
        RunStatus::Unresolved => "unresolved",
    }
}

fn print_report(report: &ExperimentReport) {
    for c in &report.checks {
        println!(
            "{}: {} residual={:.3e} tolerance={:.3e}",
            c.name,
            if c.pass { "pass" } else { "FAIL" },
            c.residual,
            c.tolerance
        );
    }
    for n in &report.notes {
        println!("note: {n}");
    }
}

fn prepare(config: &RunConfig) -> Result<(crate::ModelConfig, crate::ComplexField), String> {
    let grid = config.to_grid().map_err(|e| e.to_string())?;
    let model = config.to_model().map_err(|e| e.to_string())?;
    let psi0 = config
        .initial_field(&grid, &model)
        .map_err(|e| e.to_string())?;
    Ok((model, psi0))
}

fn cmd_simulate(config: &RunConfig) -> Result<i32, String> {
    let mut pipe = Pipeline::new(config, "running")?;
    let (model, psi0) = prepare(config)?;
    let result = run(&psi0, &model, &config.to_params()).map_err(|e| e.to_string())?;

    pipe.write_records("observables.csv", &result)?;
    pipe.write_field("final.rnls", &result)?;
    pipe.summary.residual("t_final", result.t_final);
    if let Some(t) = result.t_detect {
        pipe.summary.residual("t_detect", t);
    }
    println!(
        "simulate: {} at t = {:.6} ({} records)",
        status_str(result.status),
        result.t_final,
        result.records.len()
    );
    let exit = match result.status {
        RunStatus::BlowupDetected => 3,
        _ => 0,
    };
    pipe.finish(status_str(result.status), exit)
}

fn verdict_exit(pass: bool) -> i32 {
    if pass {
        0
    } else {
        2
    }
}

fn cmd_equivalence(config: &RunConfig) -> Result<i32, String> {
    let mut pipe = Pipeline::new(config, "running")?;
    let (model, psi0) = prepare(config)?;
    let outcome =
        frame_equivalence(&model, &psi0, &config.to_params(), 1e-4).map_err(|e| e.to_string())?;
    pipe.write_records("equivalence_lab.csv", &outcome.lab)?;
    pipe.write_records("equivalence_rotating.csv", &outcome.rotating)?;
    pipe.summary.absorb_report(&outcome.report);
    print_report(&outcome.report);
    let pass = outcome.report.passed();
    pipe.finish(if pass { "pass" } else { "fail" }, verdict_exit(pass))
}

fn cmd_blowup(config: &RunConfig) -> Result<i32, String> {
    let mut pipe = Pipeline::new(config, "running")?;
    let (model, psi0) = prepare(config)?;
    let outcome =
        blowup_experiment(&model, &psi0, &config.to_params()).map_err(|e| e.to_string())?;
    pipe.write_records("observables.csv", &outcome.run)?;
    pipe.summary.absorb_report(&outcome.report);
    if let Some(bound) = outcome.blowup.t_star_bound {
        pipe.summary.residual("t_star_bound", bound);
    }
    if let Some(alpha) = outcome.blowup.alpha_omega {
        pipe.summary.residual("alpha_omega", alpha);
    }
    if let Some(t) = outcome.run.t_detect {
        pipe.summary.residual("t_detect", t);
    }
    print_report(&outcome.report);
    let pass = outcome.report.passed();
    pipe.finish(if pass { "pass" } else { "fail" }, verdict_exit(pass))
}

fn cmd_virial(config: &RunConfig) -> Result<i32, String> {
    let mut pipe = Pipeline::new(config, "running")?;
    let (model, psi0) = prepare(config)?;
    let result = run(&psi0, &model, &config.to_params()).map_err(|e| e.to_string())?;
    pipe.write_records("observables.csv", &result)?;
    let virial = verify_virial(&result).map_err(|e| e.to_string())?;
    let balance = verify_balance_laws(&result);
    pipe.summary.absorb_report(&virial);
    pipe.summary.absorb_report(&balance);
    print_report(&virial);
    print_report(&balance);
    let pass = virial.passed() && balance.passed();
    pipe.finish(if pass { "pass" } else { "fail" }, verdict_exit(pass))
}

fn cmd_convergence(config: &RunConfig) -> Result<i32, String> {
    let mut pipe = Pipeline::new(config, "running")?;
    let (model, psi0) = prepare(config)?;
    let dt_list = [config.dt, config.dt / 2.0, config.dt / 4.0];
    let report = convergence_order(&model, &psi0, &config.to_params(), &dt_list)
        .map_err(|e| e.to_string())?;
    pipe.summary.absorb_report(&report);
    print_report(&report);
    let pass = report.passed();
    pipe.finish(if pass { "pass" } else { "fail" }, verdict_exit(pass))
}

fn cmd_groundstate(config: &RunConfig) -> Result<i32, String> {
    let mut pipe = Pipeline::new(config, "running")?;
    let grid = config.to_grid().map_err(|e| e.to_string())?;
    let model = config.to_model().map_err(|e| e.to_string())?;
    let psi = crate::propagators::imaginary_time_ground_state(&model, &grid, 1e-8)
        .map_err(|e| e.to_string())?;
    let record = crate::observables::compute_record(&psi, 0.0, &model);
    let path = pipe.out("ground_state.rnls");
    write_snapshot(&path, &psi, 0.0).map_err(|e| e.to_string())?;
    pipe.summary.add_file(&path).map_err(|e| e.to_string())?;
    pipe.summary.residual("energy_zero", record.energy_zero);
    pipe.summary.residual("mass", record.mass);
    println!("groundstate: E0 = {:.9}", record.energy_zero);
    pipe.finish("converged", 0)
}

fn cmd_alpha(args: &[String]) -> Result<i32, String> {
    let gamma_min: f64 = flag_value(args, "--gamma-min")?
        .ok_or("--gamma-min is required")?
        .parse()
        .map_err(|_| "--gamma-min must be a number".to_string())?;
    let omega: f64 = flag_value(args, "--omega")?
        .ok_or("--omega is required")?
        .parse()
        .map_err(|_| "--omega must be a number".to_string())?;
    let alpha = alpha_omega(gamma_min, omega).map_err(|e| e.to_string())?;
    println!("{alpha}");
    Ok(0)
}

fn cmd_plot(args: &[String]) -> Result<i32, String> {
    let csv = flag_value(args, "--csv")?.ok_or("--csv is required")?;
    let columns = flag_value(args, "--columns")?.ok_or("--columns is required")?;
    let cols: Vec<&str> = columns.split(',').map(|c| c.trim()).collect();
    let out = flag_value(args, "--out")?
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(&csv).with_extension("svg"));
    crate::io::render_svg_timeseries(Path::new(&csv), &cols, &out).map_err(|e| e.to_string())?;
    println!("wrote {}", out.display());
    Ok(0)
}
