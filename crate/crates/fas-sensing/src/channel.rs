//! Planar far-field channel model for the PU-SU link.
//!
//! The primary transmitter has one fixed antenna; the sensing receiver has N
//! movable antennas inside a square region. Moving an antenna changes only
//! the per-path phase, so the channel seen at position `t` is determined by
//! the path angles, the diagonal path gains, and the field-response phases
//! `exp(j 2pi/lambda * rho_l(t))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ComplexVector, SeededRng};

/// Speed of light in m/s, for wavelength-from-frequency conversion.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Antenna position in the receive region, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self { x: 0.0, y: 0.0 }
    }

    pub fn distance_to(&self, other: Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Square antenna region `[-A/2, A/2] x [-A/2, A/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    half_width: f64,
}

impl Region {
    /// Region from its full side length A.
    pub fn from_side(side: f64) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::Config(format!(
                "region side must be positive and finite, got {side}"
            )));
        }
        Ok(Self {
            half_width: side / 2.0,
        })
    }

    pub fn side(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn contains(&self, p: Position) -> bool {
        p.x.abs() <= self.half_width && p.y.abs() <= self.half_width
    }

    pub fn clamp(&self, p: Position) -> Position {
        Position {
            x: p.x.clamp(-self.half_width, self.half_width),
            y: p.y.clamp(-self.half_width, self.half_width),
        }
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.side())
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let side = f64::deserialize(d)?;
        Region::from_side(side).map_err(serde::de::Error::custom)
    }
}

/// Per-path elevation and azimuth, both in [0, pi] radians.
#[derive(Debug, Clone, PartialEq)]
pub struct PathAngles {
    elevation: Vec<f64>,
    azimuth: Vec<f64>,
}

impl PathAngles {
    pub fn new(elevation: Vec<f64>, azimuth: Vec<f64>) -> Result<Self> {
        if elevation.len() != azimuth.len() {
            return Err(Error::Dimension {
                what: "path angles",
                expected: format!("{} azimuths", elevation.len()),
                got: format!("{}", azimuth.len()),
            });
        }
        for &a in elevation.iter().chain(azimuth.iter()) {
            if !(0.0..=std::f64::consts::PI).contains(&a) {
                return Err(Error::Domain {
                    what: "path angles",
                    detail: format!("angle {a} outside [0, pi]"),
                });
            }
        }
        Ok(Self { elevation, azimuth })
    }

    pub fn num_paths(&self) -> usize {
        self.elevation.len()
    }

    pub fn elevation(&self, path: usize) -> f64 {
        self.elevation[path]
    }

    pub fn azimuth(&self, path: usize) -> f64 {
        self.azimuth[path]
    }
}

/// Diagonal of the path response matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGains {
    gains: Vec<Complex64>,
}

impl PathGains {
    pub fn new(gains: Vec<Complex64>) -> Self {
        Self { gains }
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    pub fn gain(&self, path: usize) -> Complex64 {
        self.gains[path]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.gains
    }
}

/// One sampled channel: path angles, diagonal gains, and the effective path
/// vector `sigma` (path response matrix times the all-ones transmit
/// response, which for a diagonal matrix is just its diagonal).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    angles: PathAngles,
    gains: PathGains,
    sigma: ComplexVector,
}

impl ChannelRealization {
    pub fn new(angles: PathAngles, gains: PathGains) -> Result<Self> {
        if angles.num_paths() != gains.len() {
            return Err(Error::Dimension {
                what: "channel realization",
                expected: format!("{} gains", angles.num_paths()),
                got: format!("{}", gains.len()),
            });
        }
        let sigma = ComplexVector::new(gains.as_slice().to_vec());
        Ok(Self {
            angles,
            gains,
            sigma,
        })
    }

    pub fn num_paths(&self) -> usize {
        self.angles.num_paths()
    }

    pub fn angles(&self) -> &PathAngles {
        &self.angles
    }

    pub fn gains(&self) -> &PathGains {
        &self.gains
    }

    /// Effective path vector `sigma`.
    pub fn sigma(&self) -> &ComplexVector {
        &self.sigma
    }
}

/// Physical and protocol parameters of one sensing scenario, all in linear
/// SI units. JSON input additionally accepts dB/dBm/GHz variants; see
/// [`ScenarioConfig::from_json_str`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioSpec")]
pub struct ScenarioConfig {
    /// Carrier wavelength, meters.
    #[serde(rename = "lambda_m")]
    pub wavelength: f64,
    /// PU-SU distance, meters.
    #[serde(rename = "d_m")]
    pub distance: f64,
    /// Reference distance for the path-loss model, meters.
    #[serde(rename = "d0_m")]
    pub ref_distance: f64,
    /// Average channel gain at the reference distance, linear.
    #[serde(rename = "g0")]
    pub ref_gain: f64,
    /// Path-loss exponent.
    #[serde(rename = "alpha")]
    pub path_loss_exponent: f64,
    /// Number of propagation paths (transmit = receive = L).
    #[serde(rename = "L")]
    pub num_paths: usize,
    /// Number of movable receive antennas.
    #[serde(rename = "N")]
    pub num_antennas: usize,
    /// Receive antenna region.
    #[serde(rename = "A_m")]
    pub region: Region,
    /// Minimum inter-antenna distance, meters.
    #[serde(rename = "D_m")]
    pub min_spacing: f64,
    /// PU transmit power, watts.
    #[serde(rename = "P_W")]
    pub power: f64,
    /// Noise power, watts.
    #[serde(rename = "noise_W")]
    pub noise_power: f64,
    /// Number of received signal samples per sensing slot.
    #[serde(rename = "K")]
    pub num_samples: usize,
    /// Maximum false alarm probability.
    pub delta: f64,
}

impl Default for ScenarioConfig {
    /// The reference scenario: 2.4 GHz carrier (wavelength fixed at the
    /// round 0.125 m), 250 m link, -40 dB gain at 1 m, exponent 2.8, four
    /// paths, four antennas in a 4-wavelength square with half-wavelength
    /// spacing, 10 dBm transmit power, -80 dBm noise, 1000 samples, 10%
    /// false-alarm cap.
    fn default() -> Self {
        let wavelength = 0.125;
        Self {
            wavelength,
            distance: 250.0,
            ref_distance: 1.0,
            ref_gain: 1e-4,
            path_loss_exponent: 2.8,
            num_paths: 4,
            num_antennas: 4,
            region: Region::from_side(4.0 * wavelength).expect("positive side"),
            min_spacing: wavelength / 2.0,
            power: 0.01,
            noise_power: 1e-11,
            num_samples: 1000,
            delta: 0.1,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda_m", self.wavelength),
            ("d_m", self.distance),
            ("d0_m", self.ref_distance),
            ("g0", self.ref_gain),
            ("D_m", self.min_spacing),
            ("P_W", self.power),
            ("noise_W", self.noise_power),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !self.path_loss_exponent.is_finite() {
            return Err(Error::Config("alpha must be finite".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.num_samples < 1 {
            return Err(Error::Config("K must be at least 1".into()));
        }
        if self.num_paths < 1 {
            return Err(Error::Config("L must be at least 1".into()));
        }
        if self.num_antennas < 2 {
            return Err(Error::Config(format!(
                "N must exceed 1, got {}",
                self.num_antennas
            )));
        }
        if self.min_spacing > self.region.side() {
            return Err(Error::Config(format!(
                "min spacing {} exceeds region side {}; no two antennas fit",
                self.min_spacing,
                self.region.side()
            )));
        }
        Ok(())
    }

    /// Parse from JSON, accepting SI keys and dB/dBm/GHz variants, then
    /// validate. Missing keys fall back to the reference scenario.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: ScenarioSpec = serde_json::from_str(text).map_err(|e| Error::Json {
            path: "<inline>".into(),
            source: e,
        })?;
        Self::try_from(spec)
    }

    /// Variance of each diagonal path gain under the configured path-loss
    /// law: `g0 (d/d0)^(-alpha) / L`.
    pub fn path_gain_variance(&self) -> f64 {
        self.ref_gain * (self.distance / self.ref_distance).powf(-self.path_loss_exponent)
            / self.num_paths as f64
    }
}

/// Raw JSON shape: every field optional, linear and dB forms both accepted.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioSpec {
    #[serde(rename = "fc_GHz")]
    carrier_ghz: Option<f64>,
    #[serde(rename = "lambda_m")]
    wavelength: Option<f64>,
    #[serde(rename = "d_m")]
    distance: Option<f64>,
    #[serde(rename = "d0_m")]
    ref_distance: Option<f64>,
    #[serde(rename = "g0")]
    ref_gain: Option<f64>,
    #[serde(rename = "g0_dB")]
    ref_gain_db: Option<f64>,
    #[serde(rename = "alpha")]
    path_loss_exponent: Option<f64>,
    #[serde(rename = "L")]
    num_paths: Option<usize>,
    #[serde(rename = "N")]
    num_antennas: Option<usize>,
    #[serde(rename = "A_m")]
    region_side: Option<f64>,
    #[serde(rename = "D_m")]
    min_spacing: Option<f64>,
    #[serde(rename = "P_W")]
    power: Option<f64>,
    #[serde(rename = "P_dBm")]
    power_dbm: Option<f64>,
    #[serde(rename = "noise_W")]
    noise: Option<f64>,
    #[serde(rename = "noise_dBm")]
    noise_dbm: Option<f64>,
    #[serde(rename = "K")]
    num_samples: Option<usize>,
    delta: Option<f64>,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm) * 1e-3
}

fn pick(
    name_a: &str,
    a: Option<f64>,
    name_b: &str,
    b: Option<f64>,
    convert_b: impl Fn(f64) -> f64,
    default: f64,
) -> Result<f64> {
    match (a, b) {
        (Some(_), Some(_)) => Err(Error::Config(format!(
            "give either {name_a} or {name_b}, not both"
        ))),
        (Some(v), None) => Ok(v),
        (None, Some(v)) => Ok(convert_b(v)),
        (None, None) => Ok(default),
    }
}

impl TryFrom<ScenarioSpec> for ScenarioConfig {
    type Error = Error;

    fn try_from(spec: ScenarioSpec) -> Result<Self> {
        let defaults = ScenarioConfig::default();
        let wavelength = pick(
            "lambda_m",
            spec.wavelength,
            "fc_GHz",
            spec.carrier_ghz,
            |ghz| SPEED_OF_LIGHT / (ghz * 1e9),
            defaults.wavelength,
        )?;
        let ref_gain = pick(
            "g0",
            spec.ref_gain,
            "g0_dB",
            spec.ref_gain_db,
            db_to_linear,
            defaults.ref_gain,
        )?;
        let power = pick(
            "P_W",
            spec.power,
            "P_dBm",
            spec.power_dbm,
            dbm_to_watts,
            defaults.power,
        )?;
        let noise_power = pick(
            "noise_W",
            spec.noise,
            "noise_dBm",
            spec.noise_dbm,
            dbm_to_watts,
            defaults.noise_power,
        )?;
        let config = ScenarioConfig {
            wavelength,
            distance: spec.distance.unwrap_or(defaults.distance),
            ref_distance: spec.ref_distance.unwrap_or(defaults.ref_distance),
            ref_gain,
            path_loss_exponent: spec
                .path_loss_exponent
                .unwrap_or(defaults.path_loss_exponent),
            num_paths: spec.num_paths.unwrap_or(defaults.num_paths),
            num_antennas: spec.num_antennas.unwrap_or(defaults.num_antennas),
            region: match spec.region_side {
                Some(side) => Region::from_side(side)?,
                None => Region::from_side(4.0 * wavelength)?,
            },
            min_spacing: spec.min_spacing.unwrap_or(wavelength / 2.0),
            power,
            noise_power,
            num_samples: spec.num_samples.unwrap_or(defaults.num_samples),
            delta: spec.delta.unwrap_or(defaults.delta),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Propagation distance difference of position `t` relative to the origin
/// on the given receive path: `x sin(theta) cos(phi) + y cos(theta)`.
///
/// `path` is zero-based; out-of-range indices are an error.
pub fn path_difference(t: Position, angles: &PathAngles, path: usize) -> Result<f64> {
    if path >= angles.num_paths() {
        return Err(Error::PathIndex {
            index: path,
            count: angles.num_paths(),
        });
    }
    let theta = angles.elevation(path);
    let phi = angles.azimuth(path);
    Ok(t.x * theta.sin() * phi.cos() + t.y * theta.cos())
}

/// Far-field response vector of one antenna position: unit-modulus entries
/// `exp(j 2pi/lambda * rho_l(t))`, one per receive path.
pub fn field_response_vector(t: Position, angles: &PathAngles, wavelength: f64) -> ComplexVector {
    let k = 2.0 * std::f64::consts::PI / wavelength;
    (0..angles.num_paths())
        .map(|l| {
            let rho = t.x * angles.elevation(l).sin() * angles.azimuth(l).cos()
                + t.y * angles.elevation(l).cos();
            Complex64::from_polar(1.0, k * rho)
        })
        .collect()
}

/// Field response matrix: column n is the response vector of antenna n.
pub fn field_response_matrix(
    positions: &[Position],
    angles: &PathAngles,
    wavelength: f64,
) -> ComplexMatrix {
    let columns: Vec<ComplexVector> = positions
        .iter()
        .map(|&t| field_response_vector(t, angles, wavelength))
        .collect();
    ComplexMatrix::from_columns(&columns).expect("response columns share the path count")
}

/// Channel vector seen across the antenna array: entry n is
/// `f(t_n)^H sigma`.
pub fn channel_vector(
    positions: &[Position],
    realization: &ChannelRealization,
    wavelength: f64,
) -> ComplexVector {
    let sigma = realization.sigma();
    positions
        .iter()
        .map(|&t| {
            field_response_vector(t, realization.angles(), wavelength)
                .dot(sigma)
                .expect("sigma length equals the path count")
        })
        .collect()
}

/// Draw one channel realization: per-path angles uniform on [0, pi] and
/// complex Gaussian diagonal gains with the configured path-loss variance.
pub fn sample_channel(config: &ScenarioConfig, rng: &mut SeededRng) -> ChannelRealization {
    let l = config.num_paths;
    let mut elevation = Vec::with_capacity(l);
    let mut azimuth = Vec::with_capacity(l);
    for _ in 0..l {
        elevation.push(rng.uniform_in(0.0, std::f64::consts::PI));
        azimuth.push(rng.uniform_in(0.0, std::f64::consts::PI));
    }
    let scale = config.path_gain_variance().sqrt();
    let gains: Vec<Complex64> = (0..l).map(|_| rng.standard_complex() * scale).collect();
    ChannelRealization::new(
        PathAngles::new(elevation, azimuth).expect("sampled angles lie in [0, pi]"),
        PathGains::new(gains),
    )
    .expect("angle and gain counts match by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn test_angles() -> PathAngles {
        PathAngles::new(
            vec![PI / 3.0, PI / 2.0, 0.4, 2.0],
            vec![PI / 4.0, 0.0, 1.1, 2.9],
        )
        .unwrap()
    }

    #[test]
    fn path_difference_at_origin_is_zero() {
        let angles = test_angles();
        for l in 0..angles.num_paths() {
            assert_eq!(
                path_difference(Position::origin(), &angles, l).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn path_difference_degenerates_to_x_projection() {
        // theta = pi/2, phi = 0: rho = x.
        let angles = PathAngles::new(vec![PI / 2.0], vec![0.0]).unwrap();
        let d = path_difference(Position::new(0.37, -1.9), &angles, 0).unwrap();
        assert!((d - 0.37).abs() < 1e-15);
    }

    #[test]
    fn path_difference_hand_evaluated() {
        // theta = pi/3, phi = pi/4, t = (0.1, 0.2):
        // 0.1 * sin(pi/3) * cos(pi/4) + 0.2 * cos(pi/3) = 0.161237...
        let angles = PathAngles::new(vec![PI / 3.0], vec![PI / 4.0]).unwrap();
        let d = path_difference(Position::new(0.1, 0.2), &angles, 0).unwrap();
        assert!((d - 0.161237).abs() < 1e-6, "d = {d}");
    }

    #[test]
    fn path_difference_rejects_bad_index() {
        let angles = test_angles();
        assert!(path_difference(Position::origin(), &angles, 4).is_err());
    }

    #[test]
    fn response_at_origin_is_all_ones() {
        let f = field_response_vector(Position::origin(), &test_angles(), 0.125);
        for l in 0..f.len() {
            assert!((f[l] - Complex64::ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn response_has_unit_modulus() {
        let f = field_response_vector(Position::new(0.21, -0.17), &test_angles(), 0.125);
        for l in 0..f.len() {
            assert!((f[l].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn half_wavelength_shift_flips_phase() {
        // theta = pi/2, phi = 0 puts the whole shift on x; x = lambda/2
        // gives phase pi.
        let lambda = 0.125;
        let angles = PathAngles::new(vec![PI / 2.0], vec![0.0]).unwrap();
        let f = field_response_vector(Position::new(lambda / 2.0, 0.0), &angles, lambda);
        assert!((f[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn response_matrix_columns_match_vectors() {
        let angles = test_angles();
        let positions = [
            Position::new(0.01, 0.02),
            Position::new(-0.2, 0.05),
            Position::new(0.11, -0.13),
        ];
        let m = field_response_matrix(&positions, &angles, 0.125);
        assert_eq!((m.rows(), m.cols()), (4, 3));
        for (j, &t) in positions.iter().enumerate() {
            let col = m.column(j);
            let v = field_response_vector(t, &angles, 0.125);
            for i in 0..4 {
                assert!((col[i] - v[i]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn channel_vector_at_origin_sums_gains() {
        let angles = test_angles();
        let gains = PathGains::new(vec![
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.3, 0.1),
            Complex64::new(0.0, -0.9),
            Complex64::new(0.2, 0.0),
        ]);
        let expect: Complex64 = gains.as_slice().iter().sum();
        let real = ChannelRealization::new(angles, gains).unwrap();
        let h = channel_vector(&[Position::origin(); 3], &real, 0.125);
        for n in 0..3 {
            assert!((h[n] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn channel_vector_single_path_is_conjugate_phase() {
        let lambda = 0.125;
        let angles = PathAngles::new(vec![PI / 3.0], vec![PI / 5.0]).unwrap();
        let real =
            ChannelRealization::new(angles.clone(), PathGains::new(vec![Complex64::ONE])).unwrap();
        let t = Position::new(0.04, -0.02);
        let h = channel_vector(&[t], &real, lambda);
        let rho = path_difference(t, &angles, 0).unwrap();
        let expect = Complex64::from_polar(1.0, -2.0 * PI / lambda * rho);
        assert!((h[0] - expect).norm() < 1e-13);
    }

    #[test]
    fn channel_vector_matches_matrix_product() {
        // Oracle: h = F^H Sigma 1 computed with the dense matrix ops.
        let mut rng = SeededRng::new(77, 0);
        let config = ScenarioConfig::default();
        let real = sample_channel(&config, &mut rng);
        let positions: Vec<Position> = (0..4)
            .map(|_| Position::new(rng.uniform_in(-0.25, 0.25), rng.uniform_in(-0.25, 0.25)))
            .collect();
        let h = channel_vector(&positions, &real, config.wavelength);

        let f = field_response_matrix(&positions, real.angles(), config.wavelength);
        let want = f.adjoint_matvec(real.sigma()).unwrap();
        for n in 0..4 {
            assert!((h[n] - want[n]).norm() < 1e-12);
        }
    }

    #[test]
    fn channel_vector_invariant_under_path_permutation() {
        let mut rng = SeededRng::new(3, 9);
        let config = ScenarioConfig::default();
        let real = sample_channel(&config, &mut rng);
        let positions = [Position::new(0.1, 0.2), Position::new(-0.05, 0.0)];
        let h = channel_vector(&positions, &real, config.wavelength);

        // Reverse the path order in angles and gains together.
        let l = real.num_paths();
        let angles = PathAngles::new(
            (0..l).rev().map(|i| real.angles().elevation(i)).collect(),
            (0..l).rev().map(|i| real.angles().azimuth(i)).collect(),
        )
        .unwrap();
        let gains = PathGains::new((0..l).rev().map(|i| real.gains().gain(i)).collect());
        let permuted = ChannelRealization::new(angles, gains).unwrap();
        let h2 = channel_vector(&positions, &permuted, config.wavelength);
        for n in 0..2 {
            assert!((h[n] - h2[n]).norm() < 1e-13);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let config = ScenarioConfig::default();
        let a = sample_channel(&config, &mut SeededRng::new(5, 2));
        let b = sample_channel(&config, &mut SeededRng::new(5, 2));
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_angles_stay_in_range() {
        let config = ScenarioConfig::default();
        let mut rng = SeededRng::new(8, 0);
        for _ in 0..10_000 {
            let real = sample_channel(&config, &mut rng);
            for l in 0..real.num_paths() {
                assert!((0.0..=PI).contains(&real.angles().elevation(l)));
                assert!((0.0..=PI).contains(&real.angles().azimuth(l)));
            }
        }
    }

    #[test]
    fn sampled_gain_variance_matches_path_loss() {
        let config = ScenarioConfig::default();
        let want = config.path_gain_variance();
        let mut rng = SeededRng::new(21, 0);
        let draws = 100_000;
        let mut acc = 0.0;
        for _ in 0..draws {
            let real = sample_channel(&config, &mut rng);
            acc += real.gains().gain(0).norm_sqr();
        }
        let got = acc / draws as f64;
        assert!(
            (got - want).abs() <= 0.02 * want,
            "sample variance {got}, expected {want}"
        );
    }

    #[test]
    fn default_config_is_valid_and_matches_reference_values() {
        let c = ScenarioConfig::default();
        c.validate().unwrap();
        assert_eq!(c.wavelength, 0.125);
        assert_eq!(c.min_spacing, 0.0625);
        assert_eq!(c.region.side(), 0.5);
        assert_eq!(c.power, 0.01);
        assert_eq!(c.noise_power, 1e-11);
        assert_eq!(c.num_samples, 1000);
        assert_eq!(c.delta, 0.1);
    }

    #[test]
    fn json_accepts_db_variants() {
        let c = ScenarioConfig::from_json_str(
            r#"{"P_dBm": 10, "noise_dBm": -80, "g0_dB": -40, "fc_GHz": 2.4}"#,
        )
        .unwrap();
        assert!((c.power - 0.01).abs() < 1e-15);
        assert!((c.noise_power - 1e-11).abs() < 1e-26);
        assert!((c.ref_gain - 1e-4).abs() < 1e-19);
        assert!((c.wavelength - SPEED_OF_LIGHT / 2.4e9).abs() < 1e-12);
    }

    #[test]
    fn json_rejects_conflicting_units() {
        assert!(ScenarioConfig::from_json_str(r#"{"P_W": 0.01, "P_dBm": 10}"#).is_err());
    }

    #[test]
    fn json_rejects_unknown_keys_and_bad_values() {
        assert!(ScenarioConfig::from_json_str(r#"{"powerr_W": 1}"#).is_err());
        assert!(ScenarioConfig::from_json_str(r#"{"delta": 1.5}"#).is_err());
        assert!(ScenarioConfig::from_json_str(r#"{"N": 1}"#).is_err());
    }

    #[test]
    fn response_phase_composes_additively() {
        // rho is linear in position, so responses multiply entrywise.
        let angles = test_angles();
        let lambda = 0.125;
        let mut rng = SeededRng::new(14, 1);
        for _ in 0..100 {
            let t = Position::new(rng.uniform_in(-0.25, 0.25), rng.uniform_in(-0.25, 0.25));
            let d = Position::new(rng.uniform_in(-0.1, 0.1), rng.uniform_in(-0.1, 0.1));
            let sum = field_response_vector(Position::new(t.x + d.x, t.y + d.y), &angles, lambda);
            let ft = field_response_vector(t, &angles, lambda);
            let fd = field_response_vector(d, &angles, lambda);
            for l in 0..angles.num_paths() {
                assert!((sum[l] - ft[l] * fd[l]).norm() < 1e-12);
            }
        }
    }
}
