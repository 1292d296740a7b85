//! Joint receive-beamforming and antenna-position optimization.
//!
//! The detection probability is maximized by alternating between the
//! closed-form matched beamformer and per-antenna position updates. Each
//! position update repeatedly maximizes a concave minorant of the
//! beamformed gain over an outer-linearized feasible set; because the
//! minorant is tangent at the anchor and the quadratic is isotropic, every
//! subproblem reduces to one Euclidean projection and the true objective
//! never decreases.

mod projection;
mod surrogate;

pub use projection::{linearized_spacing_halfspaces, project_onto_polyhedron, Halfspace};
pub use surrogate::{
    beta_bar, beta_bar_gradient, build_surrogate, decompose_gain, surrogate_value,
    GainDecomposition, SurrogateParams,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{channel_vector, ChannelRealization, Position, ScenarioConfig};
use crate::detector::{detection_prob, optimal_threshold, DetectorConfig};
use crate::error::{Error, Result};
use crate::numerics::ComplexVector;

/// Decision variables of one sensing design: antenna positions, unit-norm
/// receive beamformer, detection threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingDesign {
    pub positions: Vec<Position>,
    pub beamformer: ComplexVector,
    pub threshold: f64,
}

impl SensingDesign {
    /// Construct and validate against the scenario's region and spacing.
    pub fn new(
        positions: Vec<Position>,
        beamformer: ComplexVector,
        threshold: f64,
        scenario: &ScenarioConfig,
    ) -> Result<Self> {
        let design = Self {
            positions,
            beamformer,
            threshold,
        };
        design.validate(scenario)?;
        Ok(design)
    }

    pub fn validate(&self, scenario: &ScenarioConfig) -> Result<()> {
        let norm = self.beamformer.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::UnnormalizedBeamformer { norm });
        }
        if self.beamformer.len() != self.positions.len() {
            return Err(Error::Dimension {
                what: "sensing design",
                expected: format!("{} beamformer entries", self.positions.len()),
                got: format!("{}", self.beamformer.len()),
            });
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::Config(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        for (i, p) in self.positions.iter().enumerate() {
            if !p.is_finite() || !scenario.region.contains(*p) {
                return Err(Error::Config(format!(
                    "antenna {i} at ({}, {}) lies outside the region",
                    p.x, p.y
                )));
            }
        }
        for i in 0..self.positions.len() {
            for j in (i + 1)..self.positions.len() {
                let d = self.positions[i].distance_to(self.positions[j]);
                if d < scenario.min_spacing - 1e-9 {
                    return Err(Error::Config(format!(
                        "antennas {i} and {j} are {d} m apart, below the {} m minimum",
                        scenario.min_spacing
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Alternating-optimization controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AOConfig {
    /// Stop the outer loop when the detection probability improves by less
    /// than this.
    #[serde(default = "default_outer_tol")]
    pub outer_tol: f64,
    #[serde(default = "default_outer_max")]
    pub outer_max: usize,
    /// Stop a per-antenna update when the relative gain improvement drops
    /// below this.
    #[serde(default = "default_inner_tol")]
    pub inner_tol: f64,
    #[serde(default = "default_inner_max")]
    pub inner_max: usize,
}

fn default_outer_tol() -> f64 {
    1e-4
}
fn default_outer_max() -> usize {
    100
}
fn default_inner_tol() -> f64 {
    1e-6
}
fn default_inner_max() -> usize {
    20
}

impl Default for AOConfig {
    fn default() -> Self {
        Self {
            outer_tol: default_outer_tol(),
            outer_max: default_outer_max(),
            inner_tol: default_inner_tol(),
            inner_max: default_inner_max(),
        }
    }
}

impl AOConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.outer_tol > 0.0 && self.inner_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.outer_max < 1 || self.inner_max < 1 {
            return Err(Error::Config("iteration caps must be at least 1".into()));
        }
        Ok(())
    }
}

/// State recorded after each outer iteration (index 0 is the initializer).
#[derive(Debug, Clone)]
pub struct TracePoint {
    pub detection_prob: f64,
    pub snr: f64,
    pub positions: Vec<Position>,
}

/// Per-iteration history of one alternating-optimization run.
#[derive(Debug, Clone)]
pub struct AOTrace {
    points: Vec<TracePoint>,
}

impl AOTrace {
    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }

    /// Outer iterations performed (the initializer does not count).
    pub fn iterations(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn final_detection_prob(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.detection_prob)
    }

    /// True when the detection-probability sequence never drops by more
    /// than `slack`.
    pub fn is_non_decreasing(&self, slack: f64) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].detection_prob >= w[0].detection_prob - slack)
    }
}

/// Beamformed channel gain `|w^H h|^2` for the given layout.
pub fn channel_gain(
    positions: &[Position],
    realization: &ChannelRealization,
    w: &ComplexVector,
    wavelength: f64,
) -> f64 {
    let h = channel_vector(positions, realization, wavelength);
    w.dot(&h)
        .expect("beamformer length matches layout")
        .norm_sqr()
}

/// Matched filter `h / |h|`, the SNR-optimal unit-norm beamformer.
pub fn optimal_beamforming(h: &ComplexVector) -> Result<ComplexVector> {
    let norm = h.norm();
    if norm == 0.0 {
        return Err(Error::DegenerateChannel);
    }
    Ok(h.scaled(Complex64::new(1.0 / norm, 0.0)))
}

/// Matched beamformer with the degenerate-channel fallback to `e_1`.
fn beamformer_or_fallback(h: &ComplexVector) -> ComplexVector {
    optimal_beamforming(h).unwrap_or_else(|_| ComplexVector::basis(h.len(), 0))
}

/// One SCA run for antenna `n` with every other variable fixed.
///
/// Each step rebuilds the minorant at the current anchor, maximizes it by
/// projecting the Newton point onto the linearized feasible set, and
/// accepts the move unless numerical noise produced a decrease of the true
/// gain. Stops on relative gain stagnation or the iteration cap.
pub fn sca_update_antenna(
    n: usize,
    positions: &[Position],
    realization: &ChannelRealization,
    w: &ComplexVector,
    scenario: &ScenarioConfig,
    ao: &AOConfig,
) -> Result<Position> {
    let mut layout = positions.to_vec();
    let mut gain = channel_gain(&layout, realization, w, scenario.wavelength);
    for _ in 0..ao.inner_max {
        let anchor = layout[n];
        let params = build_surrogate(&layout, realization, w, n, anchor, scenario.wavelength);
        if params.curvature() <= 0.0 {
            // Zero curvature means zero gradient too: the surrogate is
            // constant and the anchor already maximizes it.
            break;
        }
        let (gx, gy) = beta_bar_gradient(anchor, &params);
        let newton = Position::new(
            anchor.x + gx / params.curvature(),
            anchor.y + gy / params.curvature(),
        );
        let halfspaces = linearized_spacing_halfspaces(n, &layout, scenario.min_spacing)?;
        let candidate = project_onto_polyhedron(newton, &scenario.region, &halfspaces)?;

        let mut trial = layout.clone();
        trial[n] = candidate;
        let new_gain = channel_gain(&trial, realization, w, scenario.wavelength);
        if new_gain < gain * (1.0 - 1e-12) {
            break;
        }
        let improvement = if gain > 0.0 {
            (new_gain - gain) / gain
        } else if new_gain > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        layout = trial;
        gain = new_gain;
        if improvement < ao.inner_tol {
            break;
        }
    }
    Ok(layout[n])
}

/// Alternating optimization of beamformer and antenna positions.
///
/// The threshold is fixed once from the false-alarm cap. Every outer
/// iteration refreshes the matched beamformer, sweeps one SCA update over
/// each antenna, and records the detection probability; the loop stops when
/// the improvement falls below the outer tolerance or the cap is reached.
pub fn alternating_optimize(
    realization: &ChannelRealization,
    scenario: &ScenarioConfig,
    ao: &AOConfig,
    init: &SensingDesign,
) -> Result<(SensingDesign, AOTrace)> {
    ao.validate()?;
    init.validate(scenario)?;
    let detector = DetectorConfig::from_scenario(scenario)?;
    let threshold = optimal_threshold(&detector);

    let mut positions = init.positions.clone();
    let mut h = channel_vector(&positions, realization, scenario.wavelength);
    let mut w = beamformer_or_fallback(&h);
    let mut snr = scenario.power * w.dot(&h)?.norm_sqr() / scenario.noise_power;
    let mut pd = detection_prob(threshold, snr, &detector);
    let mut points = vec![TracePoint {
        detection_prob: pd,
        snr,
        positions: positions.clone(),
    }];

    for _ in 0..ao.outer_max {
        for n in 0..positions.len() {
            positions[n] = sca_update_antenna(n, &positions, realization, &w, scenario, ao)?;
        }
        h = channel_vector(&positions, realization, scenario.wavelength);
        w = beamformer_or_fallback(&h);
        snr = scenario.power * w.dot(&h)?.norm_sqr() / scenario.noise_power;
        let new_pd = detection_prob(threshold, snr, &detector);
        points.push(TracePoint {
            detection_prob: new_pd,
            snr,
            positions: positions.clone(),
        });
        let improvement = new_pd - pd;
        pd = new_pd;
        if improvement < ao.outer_tol {
            break;
        }
    }

    let design = SensingDesign {
        positions,
        beamformer: w,
        threshold,
    };
    design.validate(scenario)?;
    Ok((design, AOTrace { points }))
}
