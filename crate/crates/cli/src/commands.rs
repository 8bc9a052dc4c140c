use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use log::info;
use serde::Serialize;

use leadlag_core::filters::{empirical_gain, level_filter_len};
use leadlag_core::montecarlo::{run_mc_with_report, SCHEMA_VERSION};
use leadlag_core::simulate::default_maxlag;
use leadlag_core::{
    align_to_grid, base_filter, cascade, estimate_all_levels, hry_lag, read_csv, squared_gain_level,
    target_covariance_tables, CirculantSampler, Family, LagGrid, MCConfig, MCConfigFile, ModelFile,
};

use crate::output::{check_input, check_output, write_atomic};
use crate::{CliError, EstimateArgs, GainArgs, McArgs, ModelCheckArgs, SimulateArgs};

fn csv_error(err: csv::Error) -> CliError {
    CliError::Core(err.into())
}

fn json_error(err: serde_json::Error) -> CliError {
    CliError::Core(err.into())
}

pub fn gain(args: GainArgs) -> Result<(), CliError> {
    if args.level < 1 {
        return Err(CliError::Usage("--level must be at least 1".into()));
    }
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    if let Some(out) = &args.out {
        check_output(out, "out")?;
    }
    let family = Family::from(args.family);
    let filter = cascade(&base_filter(family), args.level)?;
    let write = |w: &mut dyn Write| -> Result<(), CliError> {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["schema_version", "lambda", "H_jL", "empirical"]).map_err(csv_error)?;
        for k in 0..args.points {
            let lambda = PI * k as f64 / (args.points - 1) as f64;
            csv.write_record([
                SCHEMA_VERSION.to_string(),
                lambda.to_string(),
                squared_gain_level(args.level, family.len(), lambda).to_string(),
                empirical_gain(&filter.coefficients, lambda).to_string(),
            ])
            .map_err(csv_error)?;
        }
        csv.flush().map_err(|e| CliError::Core(csv::Error::from(e).into()))
    };
    match &args.out {
        Some(out) => write_atomic(out, write),
        None => write(&mut std::io::stdout().lock()),
    }
}

pub fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    check_input(&args.model, "model")?;
    check_output(&args.out, "out")?;
    for path in [&args.ticks1, &args.ticks2].into_iter().flatten() {
        check_output(path, "ticks")?;
    }
    let file = ModelFile::load(&args.model)?;
    let model = file.model()?;
    let scheme = file.scheme()?;
    let tables = target_covariance_tables(&model, &scheme, default_maxlag(&model, scheme.n))?;
    let sampler = CirculantSampler::new(&tables, &scheme)?;
    let path = leadlag_core::simulate::draw(&sampler, &scheme, args.seed);
    let n = scheme.n;

    write_atomic(&args.out, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["schema_version", "k", "t_seconds", "r1", "r2", "miss1", "miss2"])
            .map_err(csv_error)?;
        for k in 0..=n {
            let value = |r: &[f64]| r.get(k).map(|x| x.to_string()).unwrap_or_default();
            csv.write_record([
                SCHEMA_VERSION.to_string(),
                k.to_string(),
                (k as f64 * scheme.tau).to_string(),
                value(&path.returns1),
                value(&path.returns2),
                (path.mask1[k] as u8).to_string(),
                (path.mask2[k] as u8).to_string(),
            ])
            .map_err(csv_error)?;
        }
        csv.flush().map_err(|e| CliError::Core(csv::Error::from(e).into()))
    })?;

    if let (Some(t1), Some(t2)) = (&args.ticks1, &args.ticks2) {
        for (out, returns, mask) in [(t1, &path.returns1, &path.mask1), (t2, &path.returns2, &path.mask2)] {
            write_atomic(out, |w| {
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(["timestamp", "price"]).map_err(csv_error)?;
                let mut level = 0.0;
                for k in 0..=n {
                    if k > 0 {
                        level += returns[k - 1];
                    }
                    if !mask[k] {
                        csv.write_record([(k as f64 * scheme.tau).to_string(), f64::exp(level).to_string()])
                            .map_err(csv_error)?;
                    }
                }
                csv.flush().map_err(|e| CliError::Core(csv::Error::from(e).into()))
            })?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CurvePoint {
    l: i64,
    rho: f64,
    rho_norm: f64,
}

#[derive(Serialize)]
struct LevelReport {
    j: usize,
    theta_hat_seconds: f64,
    lag_steps: i64,
    peak: f64,
    tie_broken: bool,
    degenerate: bool,
    curve: Vec<CurvePoint>,
}

#[derive(Serialize)]
struct BaselineReport {
    theta_hat_seconds: f64,
    lag_steps: i64,
    peak: f64,
}

#[derive(Serialize)]
struct EstimateReport {
    schema_version: u32,
    family: Family,
    tau_seconds: f64,
    t0_seconds: f64,
    n: usize,
    maxlag: usize,
    levels: Vec<LevelReport>,
    single_scale: BaselineReport,
}

fn check_feasible(family: Family, levels: usize, maxlag: usize, n: usize) -> Result<(), CliError> {
    leadlag_core::estimator::check_levels(family, levels, n)?;
    let needed = level_filter_len(family.len(), levels) + maxlag;
    if needed > n {
        return Err(CliError::Usage(format!(
            "--levels {levels} with --maxlag {maxlag} needs n >= {needed} increments, got n = {n}"
        )));
    }
    Ok(())
}

pub fn estimate(args: EstimateArgs) -> Result<(), CliError> {
    if !(args.tau > 0.0 && args.tau.is_finite()) {
        return Err(CliError::Usage(format!("--tau must be a positive number of seconds, got {}", args.tau)));
    }
    if args.levels < 1 {
        return Err(CliError::Usage("--levels must be at least 1".into()));
    }
    let family = Family::from(args.family);
    if let Some(n) = args.n {
        check_feasible(family, args.levels, args.maxlag, n)?;
    }
    check_input(&args.in1, "in1")?;
    check_input(&args.in2, "in2")?;
    check_output(&args.out, "out")?;

    let ticks1 = read_csv(&args.in1, args.scale.into())?;
    let ticks2 = read_csv(&args.in2, args.scale.into())?;
    let t0 = args
        .t0
        .unwrap_or_else(|| ticks1.timestamps()[0].max(ticks2.timestamps()[0]));
    let n = match args.n {
        Some(n) => n,
        None => {
            let end = ticks1.timestamps()[ticks1.len() - 1].min(ticks2.timestamps()[ticks2.len() - 1]);
            // Small slack so grid points that land on the last tick are kept.
            ((end - t0) / args.tau + 1e-9).floor().max(0.0) as usize
        }
    };
    check_feasible(family, args.levels, args.maxlag, n)?;

    let ret1 = align_to_grid(&ticks1, t0, args.tau, n)?;
    let ret2 = align_to_grid(&ticks2, t0, args.tau, n)?;
    let grid = LagGrid::symmetric(args.maxlag);
    let results = estimate_all_levels(&ret1, &ret2, family, args.levels, &grid)?;
    let baseline = hry_lag(&ret1, &ret2, &grid)?;

    let report = EstimateReport {
        schema_version: SCHEMA_VERSION,
        family,
        tau_seconds: args.tau,
        t0_seconds: t0,
        n,
        maxlag: args.maxlag,
        levels: results
            .into_iter()
            .map(|r| LevelReport {
                j: r.estimate.level,
                theta_hat_seconds: r.estimate.theta_seconds,
                lag_steps: r.estimate.lag_steps,
                peak: r.estimate.peak_value,
                tie_broken: r.estimate.tie_broken,
                degenerate: r.estimate.degenerate,
                curve: r
                    .curve
                    .lags
                    .iter()
                    .zip(r.curve.rho.iter().zip(&r.curve.rho_normalized))
                    .map(|(&l, (&rho, &rho_norm))| CurvePoint { l, rho, rho_norm })
                    .collect(),
            })
            .collect(),
        single_scale: BaselineReport {
            theta_hat_seconds: baseline.theta_seconds,
            lag_steps: baseline.lag_steps,
            peak: baseline.peak_value,
        },
    };
    write_atomic(&args.out, |w| serde_json::to_writer_pretty(w, &report).map_err(json_error))
}

pub fn mc(args: McArgs) -> Result<(), CliError> {
    check_output(&args.out, "out")?;
    if let Some(runs) = &args.runs {
        check_output(runs, "runs")?;
    }
    let config = match &args.config {
        Some(path) => {
            check_input(path, "config")?;
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Core(leadlag_core::Error::Io {
                    path: path.clone(),
                    source: e,
                })
            })?;
            let mut file: MCConfigFile = serde_json::from_str(&text).map_err(json_error)?;
            if let Some(reps) = args.reps {
                file.reps = reps;
            }
            if let Some(seed) = args.seed {
                file.seed = seed;
            }
            file.into_config()?
        }
        None => {
            let config = MCConfig::reference(args.pi, args.reps.unwrap_or(200), args.seed.unwrap_or(0));
            config.validate()?;
            config
        }
    };
    let start = Instant::now();
    let (summary, embedding) = run_mc_with_report(&config)?;
    info!(
        "{} replications in {:.1} s (circulant length {}, min eigenvalue {:e})",
        summary.replications,
        start.elapsed().as_secs_f64(),
        embedding.circulant_len,
        embedding.min_eigenvalue
    );
    write_atomic(&args.out, |w| summary.write_csv(w).map_err(CliError::Core))?;
    if let Some(runs) = &args.runs {
        write_atomic(runs, |w| serde_json::to_writer_pretty(w, &summary.runs).map_err(json_error))?;
    }
    if !summary.valid {
        return Err(CliError::Data(format!(
            "summary invalid: {} of {} replications failed",
            summary.failures, summary.replications
        )));
    }
    Ok(())
}

pub fn model_check(args: ModelCheckArgs) -> Result<(), CliError> {
    check_input(&args.model, "model")?;
    let file = ModelFile::load(&args.model)?;
    let model = file.model()?;
    let scheme = file.scheme()?;
    let maxlag = default_maxlag(&model, scheme.n);
    let tables = target_covariance_tables(&model, &scheme, maxlag)?;
    let sampler = CirculantSampler::new(&tables, &scheme)?;
    let report = sampler.report();
    println!("model admissible: all |R_j| <= 1 (J = {}, tau = {} s)", model.finest_level(), model.tau());
    for (j, level) in model.levels().iter().enumerate().filter(|(_, l)| l.correlation != 0.0) {
        println!(
            "  j = {}: R = {}, theta = {} s ({} grid units)",
            j + 1,
            level.correlation,
            level.lag,
            level.lag / model.tau()
        );
    }
    println!(
        "embedding: n = {}, covariance lags kept = {maxlag}, circulant length = {}, \
         min eigenvalue = {:e}, clipped = {}",
        scheme.n, report.circulant_len, report.min_eigenvalue, report.clipped
    );
    Ok(())
}
