//! Seeded Monte Carlo campaigns: convergence traces, detection probability
//! against transmit power and against the false-alarm cap, with CSV
//! emission.
//!
//! Determinism contract: every emitted byte is a pure function of the
//! experiment configuration (master seed included). Trials run in parallel
//! on derived RNG streams and results are sorted before aggregation, so the
//! parallelism degree cannot change any output. Wall-clock timing is
//! therefore zeroed in CSV output unless `record_timing` is set.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{eas_design, fpa_design, rpa_design};
use crate::channel::{channel_vector, dbm_to_watts, sample_channel, ScenarioConfig};
use crate::detector::{detection_prob, simulate_detector, snr, DetectorConfig, Hypothesis};
use crate::error::{Error, Result};
use crate::numerics::{substream, SeededRng};
use crate::optimizer::{alternating_optimize, AOConfig, AOTrace, SensingDesign};

/// Stream labels for per-trial randomness; one purpose per label so trials
/// stay paired across schemes and sweep values.
mod stream {
    pub const CHANNEL: u64 = 0;
    pub const PLACEMENT: u64 = 1;
    pub const DETECTOR: u64 = 2;
}

/// Sensing scheme under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Scheme {
    /// Position-optimized fluid antennas.
    Fas,
    /// Fixed half-wavelength array.
    Fpa,
    /// Random feasible placement.
    Rpa,
    /// Exhaustive selection from the candidate grid.
    Eas,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Fas, Scheme::Fpa, Scheme::Rpa, Scheme::Eas];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Fas => "FAS",
            Scheme::Fpa => "FPA",
            Scheme::Rpa => "RPA",
            Scheme::Eas => "EAS",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FAS" => Ok(Scheme::Fas),
            "FPA" => Ok(Scheme::Fpa),
            "RPA" => Ok(Scheme::Rpa),
            "EAS" => Ok(Scheme::Eas),
            other => Err(Error::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Which scenario parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// Transmit power, swept in dBm.
    PowerDbm,
    /// Maximum false-alarm probability.
    Delta,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::PowerDbm => "P_dBm",
            SweepParam::Delta => "delta",
        }
    }
}

/// Campaign description: scenario, optimizer controls, trial budget, seed,
/// sweep grids, and schemes to include.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub ao: AOConfig,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<Scheme>,
    #[serde(default = "default_power_sweep")]
    pub power_sweep_dbm: Vec<f64>,
    #[serde(default = "default_delta_sweep")]
    pub delta_sweep: Vec<f64>,
    #[serde(default = "default_convergence_antennas")]
    pub convergence_antennas: Vec<usize>,
    #[serde(default = "default_convergence_trials")]
    pub convergence_trials: usize,
    /// Cross-check the analytical detection probability with the
    /// sample-level detector on every trial.
    #[serde(default)]
    pub empirical: bool,
    #[serde(default = "default_empirical_trials")]
    pub empirical_trials: usize,
    /// Emit measured wall-clock seconds instead of zeros. Off by default
    /// because timing breaks byte-level reproducibility.
    #[serde(default)]
    pub record_timing: bool,
}

fn default_trials() -> usize {
    100
}
fn default_seed() -> u64 {
    7
}
fn default_schemes() -> Vec<Scheme> {
    Scheme::ALL.to_vec()
}
fn default_power_sweep() -> Vec<f64> {
    (0..=10).map(|i| 2.0 * i as f64).collect()
}
fn default_delta_sweep() -> Vec<f64> {
    (1..=10).map(|i| 0.02 * i as f64).collect()
}
fn default_convergence_antennas() -> Vec<usize> {
    vec![2, 4, 6]
}
fn default_convergence_trials() -> usize {
    20
}
fn default_empirical_trials() -> usize {
    10_000
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            ao: AOConfig::default(),
            trials: default_trials(),
            seed: default_seed(),
            schemes: default_schemes(),
            power_sweep_dbm: default_power_sweep(),
            delta_sweep: default_delta_sweep(),
            convergence_antennas: default_convergence_antennas(),
            convergence_trials: default_convergence_trials(),
            empirical: false,
            empirical_trials: default_empirical_trials(),
            record_timing: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.ao.validate()?;
        if self.trials < 1 || self.convergence_trials < 1 {
            return Err(Error::Config("trial counts must be at least 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("at least one scheme is required".into()));
        }
        for &p in &self.power_sweep_dbm {
            if !p.is_finite() {
                return Err(Error::Config(format!("sweep power {p} dBm is not finite")));
            }
        }
        for &d in &self.delta_sweep {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::Config(format!("sweep delta {d} must lie in (0, 1)")));
            }
        }
        if self.convergence_antennas.iter().any(|&n| n < 2) {
            return Err(Error::Config(
                "convergence antenna counts must exceed 1".into(),
            ));
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Json {
            path: "<inline>".into(),
            source: e,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Metrics of one (sweep value, scheme, trial) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub sweep_param: SweepParam,
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub trial: u64,
    pub snr: f64,
    pub detection_prob: f64,
    /// Outer AO iterations (zero for the non-iterative schemes).
    pub iterations: usize,
    /// Measured wall-clock seconds; zeroed unless timing is recorded.
    pub seconds: f64,
    /// Sample-level detection rate, when the empirical cross-check ran.
    pub empirical_detection: Option<f64>,
}

/// Mean curve value at one sweep point for one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub mean_detection: f64,
    pub std_error: f64,
}

/// Convergence history of one (antenna count, trial) pair.
#[derive(Debug, Clone)]
pub struct ConvergenceRecord {
    pub num_antennas: usize,
    pub trial: u64,
    pub trace: AOTrace,
}

/// Build the scheme's design on one realization; returns the design and
/// the outer iterations it used.
fn design_for(
    scheme: Scheme,
    scenario: &ScenarioConfig,
    ao: &AOConfig,
    realization: &crate::channel::ChannelRealization,
    seed: u64,
    trial: u64,
) -> Result<(SensingDesign, usize)> {
    match scheme {
        Scheme::Fpa => Ok((fpa_design(scenario, realization)?, 0)),
        Scheme::Eas => Ok((eas_design(scenario, realization)?, 0)),
        Scheme::Rpa => {
            let mut rng = SeededRng::new(seed, substream(trial, stream::PLACEMENT));
            Ok((rpa_design(scenario, realization, &mut rng)?, 0))
        }
        Scheme::Fas => {
            let init = fpa_design(scenario, realization)?;
            let (design, trace) = alternating_optimize(realization, scenario, ao, &init)?;
            Ok((design, trace.iterations()))
        }
    }
}

/// Run one Monte Carlo trial of one scheme.
///
/// The channel realization is drawn from a stream keyed only by the trial
/// index, so every scheme (and every sweep value) sees the same channel at
/// the same trial index.
pub fn run_trial(config: &ExperimentConfig, scheme: Scheme, trial: u64) -> Result<TrialResult> {
    run_trial_at(
        config,
        &config.scenario,
        SweepParam::PowerDbm,
        watts_to_dbm(config.scenario.power),
        scheme,
        trial,
    )
}

fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts * 1e3).log10()
}

fn run_trial_at(
    config: &ExperimentConfig,
    scenario: &ScenarioConfig,
    sweep_param: SweepParam,
    sweep_value: f64,
    scheme: Scheme,
    trial: u64,
) -> Result<TrialResult> {
    let started = Instant::now();
    let mut channel_rng = SeededRng::new(config.seed, substream(trial, stream::CHANNEL));
    let realization = sample_channel(scenario, &mut channel_rng);
    let (design, iterations) = design_for(
        scheme,
        scenario,
        &config.ao,
        &realization,
        config.seed,
        trial,
    )?;

    let h = channel_vector(&design.positions, &realization, scenario.wavelength);
    let gamma = snr(&design.beamformer, &h, scenario.power, scenario.noise_power)?;
    let detector = DetectorConfig::from_scenario(scenario)?;
    let pd = detection_prob(design.threshold, gamma, &detector);

    let empirical_detection = if config.empirical {
        let base = SeededRng::new(config.seed, substream(trial, stream::DETECTOR));
        Some(simulate_detector(
            &h,
            &design.beamformer,
            scenario.power,
            design.threshold,
            Hypothesis::Present,
            &detector,
            config.empirical_trials,
            &base,
        )?)
    } else {
        None
    };

    let seconds = if config.record_timing {
        started.elapsed().as_secs_f64()
    } else {
        0.0
    };
    Ok(TrialResult {
        sweep_param,
        sweep_value,
        scheme,
        trial,
        snr: gamma,
        detection_prob: pd,
        iterations,
        seconds,
        empirical_detection,
    })
}

/// Apply a sweep value to the scenario.
fn scenario_at(base: &ScenarioConfig, param: SweepParam, value: f64) -> ScenarioConfig {
    let mut s = base.clone();
    match param {
        SweepParam::PowerDbm => s.power = dbm_to_watts(value),
        SweepParam::Delta => s.delta = value,
    }
    s
}

fn run_sweep(
    config: &ExperimentConfig,
    param: SweepParam,
    values: &[f64],
) -> Result<Vec<TrialResult>> {
    let mut cells = Vec::with_capacity(values.len() * config.schemes.len() * config.trials);
    for &value in values {
        for &scheme in &config.schemes {
            for trial in 0..config.trials as u64 {
                cells.push((value, scheme, trial));
            }
        }
    }
    let mut results = cells
        .into_par_iter()
        .map(|(value, scheme, trial)| {
            let scenario = scenario_at(&config.scenario, param, value);
            run_trial_at(config, &scenario, param, value, scheme, trial)
        })
        .collect::<Result<Vec<TrialResult>>>()?;
    sort_results(&mut results);
    Ok(results)
}

fn sort_results(results: &mut [TrialResult]) {
    results.sort_by(|a, b| {
        a.sweep_value
            .total_cmp(&b.sweep_value)
            .then(a.scheme.cmp(&b.scheme))
            .then(a.trial.cmp(&b.trial))
    });
}

/// Mean and standard error per (sweep value, scheme), from sorted trials.
pub fn aggregate_curves(results: &[TrialResult]) -> Vec<CurvePoint> {
    let mut points = Vec::new();
    let mut i = 0;
    while i < results.len() {
        let key = (results[i].sweep_value, results[i].scheme);
        let mut j = i;
        let mut sum = 0.0;
        while j < results.len() && results[j].sweep_value == key.0 && results[j].scheme == key.1 {
            sum += results[j].detection_prob;
            j += 1;
        }
        let count = (j - i) as f64;
        let mean = sum / count;
        let var = results[i..j]
            .iter()
            .map(|r| (r.detection_prob - mean).powi(2))
            .sum::<f64>()
            / (count - 1.0).max(1.0);
        points.push(CurvePoint {
            sweep_value: key.0,
            scheme: key.1,
            mean_detection: mean,
            std_error: (var / count).sqrt(),
        });
        i = j;
    }
    points
}

/// Detection probability versus transmit power.
pub fn sweep_power(config: &ExperimentConfig) -> Result<(Vec<TrialResult>, Vec<CurvePoint>)> {
    config.validate()?;
    let results = run_sweep(config, SweepParam::PowerDbm, &config.power_sweep_dbm)?;
    let curves = aggregate_curves(&results);
    Ok((results, curves))
}

/// Detection probability versus the false-alarm cap.
pub fn sweep_delta(config: &ExperimentConfig) -> Result<(Vec<TrialResult>, Vec<CurvePoint>)> {
    config.validate()?;
    let results = run_sweep(config, SweepParam::Delta, &config.delta_sweep)?;
    let curves = aggregate_curves(&results);
    Ok((results, curves))
}

/// Optimizer convergence traces per antenna count, on paired channel
/// realizations.
pub fn convergence_experiment(config: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    config.validate()?;
    let mut cells = Vec::new();
    for &n in &config.convergence_antennas {
        for trial in 0..config.convergence_trials as u64 {
            cells.push((n, trial));
        }
    }
    let mut records = cells
        .into_par_iter()
        .map(|(n, trial)| {
            let scenario = ScenarioConfig {
                num_antennas: n,
                ..config.scenario.clone()
            };
            scenario.validate()?;
            let mut channel_rng = SeededRng::new(config.seed, substream(trial, stream::CHANNEL));
            let realization = sample_channel(&scenario, &mut channel_rng);
            let init = fpa_design(&scenario, &realization)?;
            let (_, trace) = alternating_optimize(&realization, &scenario, &config.ao, &init)?;
            Ok(ConvergenceRecord {
                num_antennas: n,
                trial,
                trace,
            })
        })
        .collect::<Result<Vec<ConvergenceRecord>>>()?;
    records.sort_by(|a, b| {
        a.num_antennas
            .cmp(&b.num_antennas)
            .then(a.trial.cmp(&b.trial))
    });
    Ok(records)
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn write_all(path: &Path, text: &str) -> Result<()> {
    let mut file = create(path)?;
    file.write_all(text.as_bytes()).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Write per-trial rows: sweep_param, sweep_value, scheme, trial, gamma,
/// pd, iterations, seconds.
pub fn write_trial_csv(results: &[TrialResult], path: &Path) -> Result<()> {
    let mut text =
        String::from("sweep_param,sweep_value,scheme,trial,gamma,pd,iterations,seconds\n");
    for r in results {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.sweep_param.name(),
            r.sweep_value,
            r.scheme,
            r.trial,
            r.snr,
            r.detection_prob,
            r.iterations,
            r.seconds
        ));
    }
    write_all(path, &text)
}

/// Write curve rows: sweep_value, scheme, mean_pd, stderr.
pub fn write_curve_csv(points: &[CurvePoint], path: &Path) -> Result<()> {
    let mut text = String::from("sweep_value,scheme,mean_pd,stderr\n");
    for p in points {
        text.push_str(&format!(
            "{},{},{},{}\n",
            p.sweep_value, p.scheme, p.mean_detection, p.std_error
        ));
    }
    write_all(path, &text)
}

/// Write convergence traces: n_antennas, trial, iteration, gamma, pd.
pub fn write_convergence_csv(records: &[ConvergenceRecord], path: &Path) -> Result<()> {
    let mut text = String::from("n_antennas,trial,iteration,gamma,pd\n");
    for r in records {
        for (i, point) in r.trace.points().iter().enumerate() {
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                r.num_antennas, r.trial, i, point.snr, point.detection_prob
            ));
        }
    }
    write_all(path, &text)
}

/// Everything a full campaign produced: the written file paths plus the
/// in-memory results for both sweeps.
#[derive(Debug)]
pub struct CampaignResult {
    pub files: Vec<PathBuf>,
    pub power_trials: Vec<TrialResult>,
    pub power_curves: Vec<CurvePoint>,
    pub delta_trials: Vec<TrialResult>,
    pub delta_curves: Vec<CurvePoint>,
}

/// Run both sweeps and write the four campaign CSVs into `out_dir`.
pub fn run_campaign(config: &ExperimentConfig, out_dir: &Path) -> Result<CampaignResult> {
    config.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| Error::Io {
        path: out_dir.to_path_buf(),
        source: e,
    })?;

    let (power_trials, power_curves) = sweep_power(config)?;
    let p1 = out_dir.join("power_trials.csv");
    write_trial_csv(&power_trials, &p1)?;
    let p2 = out_dir.join("power_curves.csv");
    write_curve_csv(&power_curves, &p2)?;

    let (delta_trials, delta_curves) = sweep_delta(config)?;
    let p3 = out_dir.join("delta_trials.csv");
    write_trial_csv(&delta_trials, &p3)?;
    let p4 = out_dir.join("delta_curves.csv");
    write_curve_csv(&delta_curves, &p4)?;

    Ok(CampaignResult {
        files: vec![p1, p2, p3, p4],
        power_trials,
        power_curves,
        delta_trials,
        delta_curves,
    })
}
