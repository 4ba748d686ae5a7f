//! `reslab` — command-line front end: parse config, run the amplitude
//! computations, emit machine-readable CSV/JSON.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical failure.
//! Identical configs produce byte-identical output; parameter sweeps may
//! run threaded but always assemble results in input order.

mod config;
mod output;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use std::process::ExitCode;

use config::{OutputFormat, RunConfig, ScullySpec, TaylorSpec, ValidatedRun};
use reslab_core::acceptance;
use reslab_core::amplitudes::{evaluate_series, AmplitudeModel};
use reslab_core::analysis::deviation_report;
use reslab_core::casestudies::{
    causality_scan, scully_profile, taylor_profile, ProfileMode, ScullyParams, TaylorParams,
};
use reslab_core::parallel::map_ordered;
use reslab_core::{EngineError, ErrorKind, ModelTag, Resonance};

#[derive(Parser)]
#[command(
    name = "reslab",
    about = "Resonant decay amplitudes: exact half-line integrals vs their whole-line and complex-delta forms",
    version
)]
struct Cli {
    /// JSON run configuration (defaults are used when absent).
    #[arg(long, global = true)]
    config: Option<String>,

    /// Output file; stdout when absent. Overrides the config.
    #[arg(long, global = true)]
    out: Option<String>,

    /// Output format: csv or json. Overrides the config.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Worker threads for sweeps (1 = sequential; output identical either way).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Override the resonance position E_R.
    #[arg(long, global = true)]
    er: Option<f64>,

    /// Override the resonance width Gamma.
    #[arg(long, global = true)]
    gamma: Option<f64>,

    /// Override the first grid time.
    #[arg(long, global = true)]
    tmin: Option<f64>,

    /// Override the last grid time.
    #[arg(long, global = true)]
    tmax: Option<f64>,

    /// Override the grid point count.
    #[arg(long, global = true)]
    points: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitude series for each requested model.
    Amp,
    /// Deviation report: half-line vs full-line vs complex delta.
    Compare,
    /// Case studies: decaying wavefront (taylor) or field correlation (scully).
    Casestudy {
        /// Which case study: taylor or scully.
        which: String,
        /// JSON parameter file (built-in defaults when absent).
        #[arg(long)]
        params: Option<String>,
    },
    /// Sweep one parameter and emit a long-format table.
    Scan {
        /// Parameter to sweep: er or gamma.
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Logarithmic sweep spacing.
        #[arg(long, default_value_t = false)]
        log: bool,
    },
    /// Run the built-in verification suite (criteria 1-8) and exit 0 on success.
    Selftest,
}

fn apply_overrides(cfg: &mut RunConfig, cli: &Cli) {
    if let Some(er) = cli.er {
        cfg.resonance.e_r = er;
    }
    if let Some(gamma) = cli.gamma {
        cfg.resonance.gamma = gamma;
    }
    if let Some(tmin) = cli.tmin {
        cfg.time_grid.start = tmin;
    }
    if let Some(tmax) = cli.tmax {
        cfg.time_grid.stop = tmax;
    }
    if let Some(points) = cli.points {
        cfg.time_grid.points = points;
    }
    if let Some(path) = &cli.out {
        cfg.output.path = Some(path.clone());
    }
}

fn resolve_format(cfg: &RunConfig, cli: &Cli) -> Result<OutputFormat, EngineError> {
    match cli.format.as_deref() {
        None => Ok(cfg.output.format),
        Some("csv") => Ok(OutputFormat::Csv),
        Some("json") => Ok(OutputFormat::Json),
        Some(other) => Err(EngineError::validation(
            format!("unknown format '{other}' (csv|json)"),
            "cli",
        )),
    }
}

fn model_series(
    run: &ValidatedRun,
    threads: usize,
) -> Result<Vec<reslab_core::AmplitudeSeries>, EngineError> {
    let mut series = Vec::with_capacity(run.models.len());
    for tag in &run.models {
        let s = match tag {
            ModelTag::BwHalfline => evaluate_series(
                AmplitudeModel::BwHalfline(run.strategy),
                &run.form_factor,
                &run.resonance,
                &run.grid,
                &run.quadrature,
                threads,
            )?,
            ModelTag::BwFullline => evaluate_series(
                AmplitudeModel::BwFullline,
                &run.form_factor,
                &run.resonance,
                &run.grid,
                &run.quadrature,
                threads,
            )?,
            ModelTag::ComplexDelta => evaluate_series(
                AmplitudeModel::ComplexDelta,
                &run.form_factor,
                &run.resonance,
                &run.grid,
                &run.quadrature,
                threads,
            )?,
            ModelTag::Background => reslab_core::amplitudes::background_series(
                &run.form_factor,
                &run.resonance,
                &run.grid,
                &run.quadrature,
                threads,
            )?,
        };
        series.push(s);
    }
    Ok(series)
}

/// Computes one command's full output string; nothing is written until
/// this returns, so failed runs leave no partial files.
fn run(cli: &Cli) -> Result<(String, Option<String>), EngineError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    apply_overrides(&mut cfg, cli);
    let format = resolve_format(&cfg, cli)?;

    let rendered = match &cli.command {
        Command::Amp => {
            let run = cfg.validate()?;
            let series = model_series(&run, cli.threads)?;
            match format {
                OutputFormat::Csv => output::amp_csv(&series),
                OutputFormat::Json => output::amp_json(&series),
            }
        }
        Command::Compare => {
            let run = cfg.validate()?;
            let report = deviation_report(
                &run.form_factor,
                &run.resonance,
                &run.grid,
                &run.quadrature,
                cli.threads,
            )?;
            match format {
                OutputFormat::Csv => output::compare_csv(&report),
                OutputFormat::Json => output::compare_json(&report),
            }
        }
        Command::Casestudy { which, params } => match which.as_str() {
            "taylor" => {
                let spec: TaylorSpec = match params {
                    Some(path) => config::load_json(path, "taylor params")?,
                    None => TaylorSpec::default(),
                };
                let resonance = Resonance::new(spec.resonance.e_r, spec.resonance.gamma)?;
                let p = TaylorParams::new(
                    resonance,
                    Complex64::new(spec.prefactor.re, spec.prefactor.im),
                    spec.tau_grid.build()?,
                )?;
                let exact = taylor_profile(&p, ProfileMode::Exact, &cfg.quadrature, cli.threads)?;
                let wwa = taylor_profile(&p, ProfileMode::Wwa, &cfg.quadrature, cli.threads)?;
                match format {
                    OutputFormat::Csv => output::casestudy_csv(&[&exact, &wwa]),
                    OutputFormat::Json => output::casestudy_json(&[&exact, &wwa], None),
                }
            }
            "scully" => {
                let spec: ScullySpec = match params {
                    Some(path) => config::load_json(path, "scully params")?,
                    None => ScullySpec::default(),
                };
                let p = ScullyParams::new(
                    spec.omega,
                    spec.gamma,
                    spec.delta_r,
                    spec.c,
                    Complex64::new(spec.prefactor.re, spec.prefactor.im),
                )?;
                let taus = spec.tau_grid.build()?;
                let (exact, wwa) = scully_profile(&p, &taus, &cfg.quadrature, cli.threads)?;
                let causality = if taus.iter().any(|t| *t < 0.0) {
                    Some(causality_scan(&p, &taus, &cfg.quadrature, cli.threads)?)
                } else {
                    None
                };
                match format {
                    OutputFormat::Csv => output::casestudy_csv(&[&exact, &wwa]),
                    OutputFormat::Json => output::casestudy_json(&[&exact, &wwa], causality.as_ref()),
                }
            }
            other => {
                return Err(EngineError::validation(
                    format!("unknown case study '{other}' (taylor|scully)"),
                    "cli",
                ))
            }
        },
        Command::Scan {
            param,
            from,
            to,
            steps,
            log,
        } => {
            if *steps < 2 {
                return Err(EngineError::validation("steps must be >= 2", "scan"));
            }
            if !(from.is_finite() && to.is_finite()) || to <= from {
                return Err(EngineError::validation("need finite from < to", "scan"));
            }
            if *log && *from <= 0.0 {
                return Err(EngineError::validation(
                    "logarithmic sweep needs from > 0",
                    "scan",
                ));
            }
            let values: Vec<f64> = (0..*steps)
                .map(|i| {
                    let frac = i as f64 / (*steps as f64 - 1.0);
                    if *log {
                        from * (to / from).powf(frac)
                    } else {
                        from + (to - from) * frac
                    }
                })
                .collect();
            // validate the sweep en bloc before computing anything
            for v in &values {
                let mut probe = cfg.clone();
                match param.as_str() {
                    "er" => probe.resonance.e_r = *v,
                    "gamma" => probe.resonance.gamma = *v,
                    other => {
                        return Err(EngineError::validation(
                            format!("unknown sweep parameter '{other}' (er|gamma)"),
                            "scan",
                        ))
                    }
                }
                probe.validate()?;
            }
            let blocks: Vec<Result<(f64, Vec<reslab_core::AmplitudeSeries>), EngineError>> =
                map_ordered(&values, cli.threads, |v| {
                    let mut point_cfg = cfg.clone();
                    match param.as_str() {
                        "er" => point_cfg.resonance.e_r = *v,
                        _ => point_cfg.resonance.gamma = *v,
                    }
                    let run = point_cfg.validate()?;
                    Ok((*v, model_series(&run, 1)?))
                });
            let blocks: Result<Vec<_>, EngineError> = blocks.into_iter().collect();
            let blocks = blocks?;
            match format {
                OutputFormat::Csv => output::scan_csv(param, &blocks),
                OutputFormat::Json => output::scan_json(param, &blocks),
            }
        }
        Command::Selftest => {
            let results = acceptance::run_all();
            let mut out = String::new();
            let mut all = true;
            for r in &results {
                out.push_str(&r.status_line());
                out.push('\n');
                all &= r.passed;
            }
            out.push_str(&format!(
                "{}: {}/{} criteria passed\n",
                if all { "OK" } else { "FAILED" },
                results.iter().filter(|r| r.passed).count(),
                results.len()
            ));
            if !all {
                // report through the numerical-failure exit path
                print!("{out}");
                return Err(EngineError::nonconvergence(
                    "selftest criteria failed",
                    "selftest",
                ));
            }
            out
        }
    };

    Ok((rendered, cfg.output.path))
}

fn exit_code_for(err: &EngineError) -> u8 {
    match err.kind() {
        ErrorKind::QuadratureNonconvergence => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap usage problems are validation errors (exit 1); keep the
            // stderr line machine-parsable and put clap's text after it
            if e.use_stderr() {
                let first = e.to_string();
                let first_line = first.lines().next().unwrap_or("bad arguments");
                eprintln!("error kind=validation message=\"{first_line}\"");
                eprintln!("{first}");
                return ExitCode::from(1);
            }
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok((rendered, path)) => {
            match path {
                Some(p) => {
                    if let Err(io) = std::fs::write(&p, rendered) {
                        eprintln!("error kind=validation message=\"cannot write {p}: {io}\"");
                        return ExitCode::from(1);
                    }
                }
                None => print!("{rendered}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error kind={} message=\"{} [{}]\"", e.kind(), e.message(), e.context());
            ExitCode::from(exit_code_for(&e))
        }
    }
}
