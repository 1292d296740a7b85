//! Energy-detection statistics.
//!
//! The secondary user averages the power of K beamformed samples and
//! compares against a threshold. For large K the test statistic is
//! approximately Gaussian under both hypotheses, which yields closed forms
//! for the false-alarm and detection probabilities and for the threshold
//! that makes the false-alarm constraint active. A sample-level simulator
//! validates the Gaussian approximation empirically.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::ScenarioConfig;
use crate::error::{Error, Result};
use crate::numerics::{q_function, q_inverse, ComplexVector, SeededRng};

/// Sensing-slot parameters: sample count, noise power, false-alarm cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    num_samples: usize,
    noise_power: f64,
    max_false_alarm: f64,
}

impl DetectorConfig {
    pub fn new(num_samples: usize, noise_power: f64, max_false_alarm: f64) -> Result<Self> {
        if num_samples < 1 {
            return Err(Error::Config("sample count must be at least 1".into()));
        }
        if !(noise_power > 0.0 && noise_power.is_finite()) {
            return Err(Error::Config(format!(
                "noise power must be positive, got {noise_power}"
            )));
        }
        if !(max_false_alarm > 0.0 && max_false_alarm < 1.0) {
            return Err(Error::Config(format!(
                "false-alarm cap must lie in (0, 1), got {max_false_alarm}"
            )));
        }
        Ok(Self {
            num_samples,
            noise_power,
            max_false_alarm,
        })
    }

    pub fn from_scenario(scenario: &ScenarioConfig) -> Result<Self> {
        Self::new(scenario.num_samples, scenario.noise_power, scenario.delta)
    }

    pub fn num_samples(&self) -> usize {
        self.num_samples
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn max_false_alarm(&self) -> f64 {
        self.max_false_alarm
    }
}

/// Presence state of the primary transmitter in a simulated slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Noise only.
    Absent,
    /// Primary signal present.
    Present,
}

/// Post-beamforming SNR `P |w^H h|^2 / noise`.
///
/// The beamformer must be unit-norm (within 1e-9), otherwise the noise
/// normalization below would be wrong.
pub fn snr(w: &ComplexVector, h: &ComplexVector, power: f64, noise_power: f64) -> Result<f64> {
    let norm = w.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::UnnormalizedBeamformer { norm });
    }
    let gain = w.dot(h)?.norm_sqr();
    Ok(power * gain / noise_power)
}

/// Detection threshold that makes the false-alarm constraint active:
/// `noise * (1 + Qinv(delta) / sqrt(K))`.
pub fn optimal_threshold(cfg: &DetectorConfig) -> f64 {
    let z = q_inverse(cfg.max_false_alarm).expect("cap validated to lie in (0, 1)");
    cfg.noise_power * z / (cfg.num_samples as f64).sqrt() + cfg.noise_power
}

/// Probability that the noise-only statistic exceeds the threshold.
pub fn false_alarm_prob(threshold: f64, cfg: &DetectorConfig) -> f64 {
    let arg = (threshold - cfg.noise_power) / cfg.noise_power * (cfg.num_samples as f64).sqrt();
    q_limit(arg)
}

/// Probability that the signal-plus-noise statistic exceeds the threshold
/// at the given SNR.
pub fn detection_prob(threshold: f64, snr: f64, cfg: &DetectorConfig) -> f64 {
    let mean = cfg.noise_power * (1.0 + snr);
    let arg = (threshold - mean) / mean * (cfg.num_samples as f64).sqrt();
    q_limit(arg)
}

/// Q with its limits at the infinities, for threshold sweeps that push the
/// argument out of range.
fn q_limit(arg: f64) -> f64 {
    if arg == f64::INFINITY {
        0.0
    } else if arg == f64::NEG_INFINITY {
        1.0
    } else {
        q_function(arg).expect("finite argument")
    }
}

/// Empirical decision rate of the sample-level energy detector.
///
/// Each trial synthesizes K received vectors (CSCG noise across the N
/// antennas, plus the scaled channel under [`Hypothesis::Present`]), beamforms
/// them, averages the power, and decides "present" when the statistic
/// strictly exceeds the threshold. Trials run in parallel on independent
/// derived streams, so the rate does not depend on scheduling.
#[allow(clippy::too_many_arguments)]
pub fn simulate_detector(
    h: &ComplexVector,
    w: &ComplexVector,
    power: f64,
    threshold: f64,
    hypothesis: Hypothesis,
    cfg: &DetectorConfig,
    trials: usize,
    base_rng: &SeededRng,
) -> Result<f64> {
    let norm = w.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::UnnormalizedBeamformer { norm });
    }
    if w.len() != h.len() {
        return Err(Error::Dimension {
            what: "simulate_detector",
            expected: format!("{}", w.len()),
            got: format!("{}", h.len()),
        });
    }
    if trials < 1 {
        return Err(Error::Config("trial count must be at least 1".into()));
    }

    let amplitude = power.sqrt() * w.dot(h)?;
    let noise_scale = cfg.noise_power.sqrt();
    let detections: usize = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = base_rng.derive(trial);
            let statistic = sample_statistic(
                w,
                amplitude,
                noise_scale,
                hypothesis,
                cfg.num_samples,
                &mut rng,
            );
            usize::from(statistic > threshold)
        })
        .sum();
    Ok(detections as f64 / trials as f64)
}

/// One draw of the averaged-power statistic.
fn sample_statistic(
    w: &ComplexVector,
    amplitude: Complex64,
    noise_scale: f64,
    hypothesis: Hypothesis,
    num_samples: usize,
    rng: &mut SeededRng,
) -> f64 {
    let n = w.len();
    let mut acc = 0.0;
    for _ in 0..num_samples {
        // Beamformed noise: sum_i conj(w_i) n_i.
        let mut y = Complex64::ZERO;
        for i in 0..n {
            y += w[i].conj() * (rng.standard_complex() * noise_scale);
        }
        if hypothesis == Hypothesis::Present {
            y += amplitude * rng.standard_complex();
        }
        acc += y.norm_sqr();
    }
    acc / num_samples as f64
}
