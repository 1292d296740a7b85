//! Command-line frontend for the sensing experiments.
//!
//! Subcommands map one-to-one onto the experiment drivers; all
//! human-readable output goes to standard error, data goes to CSV files.
//! Exit codes: 0 success, 1 configuration error, 2 runtime error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use fas_sensing::detector::{
    detection_prob, optimal_threshold, simulate_detector, DetectorConfig, Hypothesis,
};
use fas_sensing::experiments::{
    convergence_experiment, run_campaign, sweep_delta, sweep_power, write_convergence_csv,
    write_curve_csv, write_trial_csv, ConvergenceRecord, ExperimentConfig, Scheme, TrialResult,
};
use fas_sensing::numerics::{ComplexVector, SeededRng};

#[derive(Parser)]
#[command(
    name = "fas-sensing",
    about = "Fluid-antenna spectrum sensing experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment config; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Trial-count override (Monte Carlo trials per sweep point, or
    /// detector trials for validate-detector).
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Output directory for CSV files.
    #[arg(long, global = true, default_value = "results")]
    out: PathBuf,

    /// Comma-separated scheme subset (FAS,FPA,RPA,EAS).
    #[arg(long, global = true, value_delimiter = ',')]
    schemes: Option<Vec<String>>,

    /// Cross-check analytical detection probabilities with the
    /// sample-level detector.
    #[arg(long, global = true)]
    empirical: bool,

    /// Record wall-clock seconds in trial CSVs (breaks byte-level
    /// reproducibility between runs).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full campaign: both sweeps, four CSV files.
    Run,
    /// Detection probability versus transmit power.
    SweepPower,
    /// Detection probability versus the false-alarm cap.
    SweepDelta,
    /// Optimizer convergence traces per antenna count.
    Convergence,
    /// Check the sample-level detector against the closed forms.
    ValidateDetector,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Usage and version always go to standard error.
            eprint!("{err}");
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    let config = match build_config(&cli) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    };

    match execute(&cli, &config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn build_config(cli: &Cli) -> fas_sensing::Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    match (&cli.command, cli.trials) {
        (Command::Convergence, Some(trials)) => config.convergence_trials = trials,
        (Command::ValidateDetector, _) => {}
        (_, Some(trials)) => config.trials = trials,
        _ => {}
    }
    if let Some(schemes) = &cli.schemes {
        config.schemes = schemes
            .iter()
            .map(|s| s.parse::<Scheme>())
            .collect::<fas_sensing::Result<Vec<Scheme>>>()?;
    }
    config.empirical |= cli.empirical;
    config.record_timing |= cli.timing;
    config.validate()?;
    Ok(config)
}

fn ensure_out_dir(out: &PathBuf) -> fas_sensing::Result<()> {
    std::fs::create_dir_all(out).map_err(|e| fas_sensing::Error::Io {
        path: out.clone(),
        source: e,
    })
}

fn execute(cli: &Cli, config: &ExperimentConfig) -> fas_sensing::Result<bool> {
    match cli.command {
        Command::Run => {
            let result = run_campaign(config, &cli.out)?;
            for path in &result.files {
                eprintln!("wrote {}", path.display());
            }
            report_empirical(config, &result.power_trials);
            report_empirical(config, &result.delta_trials);
            Ok(true)
        }
        Command::SweepPower => {
            ensure_out_dir(&cli.out)?;
            let (trials, curves) = sweep_power(config)?;
            let t = cli.out.join("power_trials.csv");
            write_trial_csv(&trials, &t)?;
            let c = cli.out.join("power_curves.csv");
            write_curve_csv(&curves, &c)?;
            eprintln!("wrote {}", t.display());
            eprintln!("wrote {}", c.display());
            report_empirical(config, &trials);
            Ok(true)
        }
        Command::SweepDelta => {
            ensure_out_dir(&cli.out)?;
            let (trials, curves) = sweep_delta(config)?;
            let t = cli.out.join("delta_trials.csv");
            write_trial_csv(&trials, &t)?;
            let c = cli.out.join("delta_curves.csv");
            write_curve_csv(&curves, &c)?;
            eprintln!("wrote {}", t.display());
            eprintln!("wrote {}", c.display());
            report_empirical(config, &trials);
            Ok(true)
        }
        Command::Convergence => {
            ensure_out_dir(&cli.out)?;
            let records = convergence_experiment(config)?;
            let path = cli.out.join("convergence_trace.csv");
            write_convergence_csv(&records, &path)?;
            eprintln!("wrote {}", path.display());
            report_convergence(config, &records);
            Ok(true)
        }
        Command::ValidateDetector => {
            let trials = cli.trials.unwrap_or(100_000);
            validate_detector(config, trials)
        }
    }
}

fn report_empirical(config: &ExperimentConfig, trials: &[TrialResult]) {
    if !config.empirical {
        return;
    }
    for &scheme in &config.schemes {
        let deviations: Vec<f64> = trials
            .iter()
            .filter(|r| r.scheme == scheme)
            .filter_map(|r| r.empirical_detection.map(|e| (e - r.detection_prob).abs()))
            .collect();
        if deviations.is_empty() {
            continue;
        }
        let max = deviations.iter().cloned().fold(0.0, f64::max);
        let mean = deviations.iter().sum::<f64>() / deviations.len() as f64;
        eprintln!("empirical check {scheme}: mean |emp - analytical| = {mean:.5}, max = {max:.5}");
    }
}

fn report_convergence(config: &ExperimentConfig, records: &[ConvergenceRecord]) {
    for &n in &config.convergence_antennas {
        let mut iterations: Vec<usize> = records
            .iter()
            .filter(|r| r.num_antennas == n)
            .map(|r| r.trace.iterations())
            .collect();
        if iterations.is_empty() {
            continue;
        }
        iterations.sort_unstable();
        let median = iterations[iterations.len() / 2];
        let mean_pd: f64 = records
            .iter()
            .filter(|r| r.num_antennas == n)
            .map(|r| r.trace.final_detection_prob())
            .sum::<f64>()
            / iterations.len() as f64;
        eprintln!(
            "n = {n}: median iterations to tolerance = {median}, mean converged pd = {mean_pd:.4}"
        );
    }
}

/// Empirical-versus-analytical detector checks: false-alarm calibration at
/// the configured cap, and detection probability at three reference SNRs.
/// Returns whether every check stayed within tolerance.
fn validate_detector(config: &ExperimentConfig, trials: usize) -> fas_sensing::Result<bool> {
    let scenario = &config.scenario;
    let detector = DetectorConfig::from_scenario(scenario)?;
    let threshold = optimal_threshold(&detector);
    let n = scenario.num_antennas;
    let w = ComplexVector::from_real(&vec![1.0 / (n as f64).sqrt(); n]);
    let mut ok = true;

    let h_any = ComplexVector::from_real(&vec![1e-6; n]);
    let base = SeededRng::new(config.seed, 0);
    let rate = simulate_detector(
        &h_any,
        &w,
        scenario.power,
        threshold,
        Hypothesis::Absent,
        &detector,
        trials,
        &base,
    )?;
    let pass = (rate - scenario.delta).abs() <= 0.01;
    ok &= pass;
    eprintln!(
        "{} false alarm: empirical {rate:.4}, cap {}, threshold {threshold:.6e} ({trials} trials)",
        if pass { "PASS" } else { "FAIL" },
        scenario.delta
    );

    for (i, gamma) in [0.05, 0.1, 0.3].into_iter().enumerate() {
        // Scale a flat channel so the beamformed SNR equals gamma.
        let amp = (gamma * scenario.noise_power / scenario.power).sqrt();
        let h = ComplexVector::from_real(&vec![amp / (n as f64).sqrt(); n]);
        let base = SeededRng::new(config.seed, 1 + i as u64);
        let rate = simulate_detector(
            &h,
            &w,
            scenario.power,
            threshold,
            Hypothesis::Present,
            &detector,
            trials,
            &base,
        )?;
        let analytical = detection_prob(threshold, gamma, &detector);
        let pass = (rate - analytical).abs() <= 0.02;
        ok &= pass;
        eprintln!(
            "{} detection at snr {gamma}: empirical {rate:.4}, analytical {analytical:.4}",
            if pass { "PASS" } else { "FAIL" }
        );
    }

    if !ok {
        eprintln!("detector validation exceeded tolerance");
    }
    Ok(ok)
}
