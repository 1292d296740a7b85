//! Benchmark array designs: fixed half-wavelength array, random feasible
//! placement, and exhaustive selection from a fixed candidate grid. All
//! three pair their layout with the matched beamformer and the
//! false-alarm-calibrated threshold.

use crate::channel::{channel_vector, ChannelRealization, Position, ScenarioConfig};
use crate::detector::{optimal_threshold, DetectorConfig};
use crate::error::{Error, Result};
use crate::numerics::{ComplexVector, SeededRng};
use crate::optimizer::SensingDesign;

/// The benchmark schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// Fixed positions, half-wavelength linear array.
    Fpa,
    /// Uniformly random feasible placement.
    Rpa,
    /// Exhaustive selection of N out of 2N fixed candidates.
    Eas,
}

/// Placement attempts before random placement gives up.
const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;

fn finish_design(
    positions: Vec<Position>,
    realization: &ChannelRealization,
    scenario: &ScenarioConfig,
) -> Result<SensingDesign> {
    let h = channel_vector(&positions, realization, scenario.wavelength);
    let beamformer = crate::optimizer::optimal_beamforming(&h)
        .unwrap_or_else(|_| ComplexVector::basis(positions.len(), 0));
    let detector = DetectorConfig::from_scenario(scenario)?;
    SensingDesign::new(
        positions,
        beamformer,
        optimal_threshold(&detector),
        scenario,
    )
}

/// Centered half-wavelength linear array on the x-axis.
pub fn fpa_positions(scenario: &ScenarioConfig) -> Result<Vec<Position>> {
    let n = scenario.num_antennas;
    let spacing = scenario.wavelength / 2.0;
    let extent = (n as f64 - 1.0) / 2.0 * spacing;
    if extent > scenario.region.half_width() + 1e-12 {
        return Err(Error::Config(format!(
            "fixed array of {n} antennas at {spacing} m spacing does not fit the region"
        )));
    }
    Ok((1..=n)
        .map(|i| Position::new((i as f64 - (n as f64 + 1.0) / 2.0) * spacing, 0.0))
        .collect())
}

/// Fixed-position design: half-wavelength array, matched beamformer,
/// calibrated threshold.
pub fn fpa_design(
    scenario: &ScenarioConfig,
    realization: &ChannelRealization,
) -> Result<SensingDesign> {
    finish_design(fpa_positions(scenario)?, realization, scenario)
}

/// Random-position design: positions drawn uniformly over the region,
/// rejecting whole configurations until the pairwise spacing holds.
pub fn rpa_design(
    scenario: &ScenarioConfig,
    realization: &ChannelRealization,
    rng: &mut SeededRng,
) -> Result<SensingDesign> {
    let n = scenario.num_antennas;
    let hw = scenario.region.half_width();
    for _ in 0..MAX_PLACEMENT_ATTEMPTS {
        let positions: Vec<Position> = (0..n)
            .map(|_| Position::new(rng.uniform_in(-hw, hw), rng.uniform_in(-hw, hw)))
            .collect();
        let feasible = (0..n).all(|i| {
            (i + 1..n).all(|j| positions[i].distance_to(positions[j]) >= scenario.min_spacing)
        });
        if feasible {
            return finish_design(positions, realization, scenario);
        }
    }
    Err(Error::Packing {
        attempts: MAX_PLACEMENT_ATTEMPTS,
    })
}

/// The 2N candidate positions for exhaustive selection: a centered
/// half-wavelength linear array that contains the fixed array as a
/// contiguous subset.
pub fn eas_candidates(scenario: &ScenarioConfig) -> Result<Vec<Position>> {
    let m = 2 * scenario.num_antennas;
    let spacing = scenario.wavelength / 2.0;
    let extent = (m as f64 - 1.0) / 2.0 * spacing;
    if extent > scenario.region.half_width() + 1e-12 {
        return Err(Error::Config(format!(
            "candidate grid of {m} positions at {spacing} m spacing does not fit the region"
        )));
    }
    Ok((1..=m)
        .map(|i| Position::new((i as f64 - (m as f64 + 1.0) / 2.0) * spacing, 0.0))
        .collect())
}

/// Exhaustive-selection design: evaluates the beamformed SNR of every
/// N-subset of the candidate grid and keeps the best, breaking ties toward
/// the lexicographically smallest index set.
pub fn eas_design(
    scenario: &ScenarioConfig,
    realization: &ChannelRealization,
) -> Result<SensingDesign> {
    let candidates = eas_candidates(scenario)?;
    let n = scenario.num_antennas;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for subset in Combinations::new(candidates.len(), n) {
        let positions: Vec<Position> = subset.iter().map(|&i| candidates[i]).collect();
        // With the matched beamformer the SNR is proportional to |h|^2.
        let gain = channel_vector(&positions, realization, scenario.wavelength).norm_sqr();
        if best.as_ref().is_none_or(|(g, _)| gain > *g) {
            best = Some((gain, subset));
        }
    }
    let (_, subset) = best.expect("at least one subset exists");
    finish_design(
        subset.iter().map(|&i| candidates[i]).collect(),
        realization,
        scenario,
    )
}

/// Lexicographic k-subsets of 0..n.
struct Combinations {
    n: usize,
    indices: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            indices: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.indices.clone();
        let k = self.indices.len();
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.indices[i] < self.n - (k - i) {
                self.indices[i] += 1;
                for j in (i + 1)..k {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                break;
            }
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_channel;

    #[test]
    fn fpa_reference_layout() {
        let scenario = ScenarioConfig::default();
        let positions = fpa_positions(&scenario).unwrap();
        let want = [-0.09375, -0.03125, 0.03125, 0.09375];
        assert_eq!(positions.len(), 4);
        for (p, x) in positions.iter().zip(want) {
            assert!((p.x - x).abs() < 1e-15);
            assert_eq!(p.y, 0.0);
        }
        // Adjacent spacing is exactly half a wavelength.
        for pair in positions.windows(2) {
            assert!((pair[0].distance_to(pair[1]) - 0.0625).abs() < 1e-15);
        }
    }

    #[test]
    fn fpa_design_is_valid() {
        let scenario = ScenarioConfig::default();
        let mut rng = SeededRng::new(1, 0);
        let real = sample_channel(&scenario, &mut rng);
        let design = fpa_design(&scenario, &real).unwrap();
        design.validate(&scenario).unwrap();
        assert!((design.beamformer.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fpa_rejects_oversized_array() {
        let scenario = ScenarioConfig {
            num_antennas: 20,
            ..ScenarioConfig::default()
        };
        assert!(fpa_positions(&scenario).is_err());
    }

    #[test]
    fn rpa_is_feasible_and_deterministic() {
        let scenario = ScenarioConfig::default();
        let mut rng = SeededRng::new(5, 0);
        let real = sample_channel(&scenario, &mut rng);
        for seed in 0..50 {
            let design = rpa_design(&scenario, &real, &mut SeededRng::new(seed, 1)).unwrap();
            design.validate(&scenario).unwrap();
            let again = rpa_design(&scenario, &real, &mut SeededRng::new(seed, 1)).unwrap();
            assert_eq!(design.positions, again.positions);
        }
    }

    #[test]
    fn rpa_covers_all_quadrants_uniformly() {
        let scenario = ScenarioConfig::default();
        let mut rng = SeededRng::new(3, 2);
        let real = sample_channel(&scenario, &mut rng);
        let draws = 20_000;
        let mut counts = [0usize; 4];
        let mut placement = SeededRng::new(9, 0);
        for _ in 0..draws {
            let design = rpa_design(&scenario, &real, &mut placement).unwrap();
            for p in &design.positions {
                let q = match (p.x >= 0.0, p.y >= 0.0) {
                    (true, true) => 0,
                    (false, true) => 1,
                    (false, false) => 2,
                    (true, false) => 3,
                };
                counts[q] += 1;
            }
        }
        let total: usize = counts.iter().sum();
        for c in counts {
            let share = c as f64 / total as f64;
            assert!(
                (share - 0.25).abs() < 0.05 * 0.25,
                "quadrant share {share} deviates from uniformity"
            );
        }
    }

    #[test]
    fn eas_candidates_contain_fpa_layout() {
        let scenario = ScenarioConfig::default();
        let candidates = eas_candidates(&scenario).unwrap();
        assert_eq!(candidates.len(), 8);
        let fpa = fpa_positions(&scenario).unwrap();
        for p in &fpa {
            assert!(candidates.iter().any(|c| c.distance_to(*p) < 1e-12));
        }
    }

    #[test]
    fn eas_enumerates_all_subsets() {
        assert_eq!(Combinations::new(8, 4).count(), 70);
        assert_eq!(Combinations::new(2, 1).count(), 2);
        let first = Combinations::new(5, 3).next().unwrap();
        assert_eq!(first, vec![0, 1, 2]);
    }

    #[test]
    fn eas_never_loses_to_fpa() {
        // The fixed array is one of the candidate subsets, so the
        // exhaustive search dominates it on every realization.
        let scenario = ScenarioConfig::default();
        let mut rng = SeededRng::new(8, 0);
        for _ in 0..100 {
            let real = sample_channel(&scenario, &mut rng);
            let fpa = fpa_design(&scenario, &real).unwrap();
            let eas = eas_design(&scenario, &real).unwrap();
            let g_fpa = channel_vector(&fpa.positions, &real, scenario.wavelength).norm_sqr();
            let g_eas = channel_vector(&eas.positions, &real, scenario.wavelength).norm_sqr();
            assert!(g_eas >= g_fpa, "EAS {g_eas} lost to FPA {g_fpa}");
        }
    }

    #[test]
    fn eas_design_is_valid() {
        let scenario = ScenarioConfig::default();
        let mut rng = SeededRng::new(9, 0);
        let real = sample_channel(&scenario, &mut rng);
        let design = eas_design(&scenario, &real).unwrap();
        design.validate(&scenario).unwrap();
    }
}
