//! Concave minorant of the beamformed channel gain in one antenna position.
//!
//! With every other antenna fixed, `|w^H h|^2` splits into a constant, a
//! quadratic form in the moving antenna's field response, and a linear
//! cross term. Linearizing the convex quadratic at the anchor folds the two
//! position-dependent pieces into a single phase sum `beta_bar`, and a
//! curvature bound on that sum yields a global concave lower bound whose
//! maximizer has closed form.

use crate::channel::{field_response_vector, ChannelRealization, PathAngles, Position};
use crate::numerics::{hermitian_quadratic_form, ComplexMatrix, ComplexVector};

/// Split of `|w^H h|^2` around antenna `n`: the gain of the other antennas
/// alone, the quadratic-form matrix for antenna n, and the cross-term
/// vector.
#[derive(Debug, Clone)]
pub struct GainDecomposition {
    /// Gain contributed by the fixed antennas alone.
    pub constant: f64,
    /// Hermitian PSD matrix of antenna n's quadratic term.
    pub psi: ComplexMatrix,
    /// Cross-term vector: the gain's linear part is `2 Re(f^H omega)`.
    pub omega: ComplexVector,
}

/// One SCA minorant, anchored at a feasible position of antenna n.
#[derive(Debug, Clone)]
pub struct SurrogateParams {
    anchor: Position,
    constant: f64,
    psi: ComplexMatrix,
    omega: ComplexVector,
    upsilon: ComplexVector,
    curvature: f64,
    anchor_quad: f64,
    angles: PathAngles,
    wavelength: f64,
}

impl SurrogateParams {
    pub fn anchor(&self) -> Position {
        self.anchor
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn psi(&self) -> &ComplexMatrix {
        &self.psi
    }

    pub fn omega(&self) -> &ComplexVector {
        &self.omega
    }

    /// Combined phase-sum coefficients.
    pub fn upsilon(&self) -> &ComplexVector {
        &self.upsilon
    }

    /// Curvature bound of the quadratic term.
    pub fn curvature(&self) -> f64 {
        self.curvature
    }

    /// Quadratic form of the anchor response, the correction term of the
    /// final bound.
    pub fn anchor_quad(&self) -> f64 {
        self.anchor_quad
    }

    pub fn angles(&self) -> &PathAngles {
        &self.angles
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }
}

/// Decompose `|w^H h|^2` around antenna `n`.
///
/// Writing `u = sum_j w_j f(t_j)` and `Phi = sigma sigma^H`, the gain is
/// `u^H Phi u`; splitting u into antenna n's share and the rest gives
/// `constant + f(t_n)^H Psi f(t_n) + 2 Re(f(t_n)^H Omega)` with
/// `Psi = |w_n|^2 Phi` and `Omega = conj(w_n) Phi u_rest`.
pub fn decompose_gain(
    positions: &[Position],
    realization: &ChannelRealization,
    w: &ComplexVector,
    n: usize,
    wavelength: f64,
) -> GainDecomposition {
    let sigma = realization.sigma();
    let paths = realization.num_paths();

    let mut u_rest = ComplexVector::zeros(paths);
    for (j, &t) in positions.iter().enumerate() {
        if j == n {
            continue;
        }
        let f = field_response_vector(t, realization.angles(), wavelength);
        u_rest = u_rest
            .add(&f.scaled(w[j]))
            .expect("responses share the path count");
    }

    // sigma^H u_rest collapses every Phi product to a scalar multiple of sigma.
    let s = sigma.dot(&u_rest).expect("path counts conform");
    let phi = sigma.outer(sigma);
    GainDecomposition {
        constant: s.norm_sqr(),
        psi: phi.scaled(w[n].norm_sqr()),
        omega: sigma.scaled(w[n].conj() * s),
    }
}

/// Build the minorant of `|w^H h|^2` in antenna n's position, anchored at
/// `anchor`.
pub fn build_surrogate(
    positions: &[Position],
    realization: &ChannelRealization,
    w: &ComplexVector,
    n: usize,
    anchor: Position,
    wavelength: f64,
) -> SurrogateParams {
    let decomposition = decompose_gain(positions, realization, w, n, wavelength);
    let f_anchor = field_response_vector(anchor, realization.angles(), wavelength);
    let upsilon = decomposition
        .psi
        .adjoint_matvec(&f_anchor)
        .expect("Psi is L x L")
        .add(&decomposition.omega)
        .expect("Omega has length L");
    let coeff_sum: f64 = upsilon.iter().map(|y| y.norm()).sum();
    let curvature = 16.0 * std::f64::consts::PI.powi(2) / wavelength.powi(2) * coeff_sum;
    let anchor_quad = hermitian_quadratic_form(&f_anchor, &decomposition.psi)
        .expect("conforming dimensions by construction");
    SurrogateParams {
        anchor,
        constant: decomposition.constant,
        psi: decomposition.psi,
        omega: decomposition.omega,
        upsilon,
        curvature,
        anchor_quad,
        angles: realization.angles().clone(),
        wavelength,
    }
}

/// Phase sum `beta_bar(t) = 2 sum_l |Y_l| cos(Pi_l(t))` with
/// `Pi_l(t) = (2 pi / lambda) rho_l(t) - arg(Y_l)`.
pub fn beta_bar(t: Position, params: &SurrogateParams) -> f64 {
    let k = 2.0 * std::f64::consts::PI / params.wavelength;
    let mut acc = 0.0;
    for l in 0..params.upsilon.len() {
        let y = params.upsilon[l];
        let rho = t.x * params.angles.elevation(l).sin() * params.angles.azimuth(l).cos()
            + t.y * params.angles.elevation(l).cos();
        acc += y.norm() * (k * rho - y.arg()).cos();
    }
    2.0 * acc
}

/// Gradient of [`beta_bar`] at `t`.
pub fn beta_bar_gradient(t: Position, params: &SurrogateParams) -> (f64, f64) {
    let k = 2.0 * std::f64::consts::PI / params.wavelength;
    let scale = 4.0 * std::f64::consts::PI / params.wavelength;
    let mut gx = 0.0;
    let mut gy = 0.0;
    for l in 0..params.upsilon.len() {
        let y = params.upsilon[l];
        let theta = params.angles.elevation(l);
        let phi = params.angles.azimuth(l);
        let rho = t.x * theta.sin() * phi.cos() + t.y * theta.cos();
        let s = y.norm() * (k * rho - y.arg()).sin();
        gx -= scale * theta.sin() * phi.cos() * s;
        gy -= scale * theta.cos() * s;
    }
    (gx, gy)
}

/// Concave lower bound of `|w^H h|^2` at position `t`: the second-order
/// bound of the phase sum around the anchor, plus the constant part, minus
/// the anchor's quadratic-form correction.
pub fn surrogate_value(t: Position, params: &SurrogateParams) -> f64 {
    let anchor = params.anchor;
    let (gx, gy) = beta_bar_gradient(anchor, params);
    let dx = t.x - anchor.x;
    let dy = t.y - anchor.y;
    let bound =
        beta_bar(anchor, params) + gx * dx + gy * dy - 0.5 * params.curvature * (dx * dx + dy * dy);
    bound + params.constant - params.anchor_quad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channel, PathGains, ScenarioConfig};
    use crate::numerics::SeededRng;
    use crate::optimizer::channel_gain;
    use num_complex::Complex64;

    /// Unit-scale random instance: O(1) gains so tolerances are meaningful.
    fn random_instance(
        rng: &mut SeededRng,
        n_antennas: usize,
        paths: usize,
    ) -> (Vec<Position>, ChannelRealization, ComplexVector, f64) {
        let wavelength = 0.125;
        let angles = PathAngles::new(
            (0..paths)
                .map(|_| rng.uniform_in(0.0, std::f64::consts::PI))
                .collect(),
            (0..paths)
                .map(|_| rng.uniform_in(0.0, std::f64::consts::PI))
                .collect(),
        )
        .unwrap();
        let gains = PathGains::new((0..paths).map(|_| rng.standard_complex()).collect());
        let realization = ChannelRealization::new(angles, gains).unwrap();
        let positions: Vec<Position> = (0..n_antennas)
            .map(|_| Position::new(rng.uniform_in(-0.25, 0.25), rng.uniform_in(-0.25, 0.25)))
            .collect();
        let raw: ComplexVector = (0..n_antennas).map(|_| rng.standard_complex()).collect();
        let w = raw.scaled(Complex64::new(1.0 / raw.norm(), 0.0));
        (positions, realization, w, wavelength)
    }

    #[test]
    fn decomposition_reconstructs_gain() {
        let mut rng = SeededRng::new(42, 0);
        for _ in 0..50 {
            let (positions, real, w, lambda) = random_instance(&mut rng, 4, 4);
            let truth = channel_gain(&positions, &real, &w, lambda);
            for n in 0..4 {
                let d = decompose_gain(&positions, &real, &w, n, lambda);
                let f = field_response_vector(positions[n], real.angles(), lambda);
                let quad = hermitian_quadratic_form(&f, &d.psi).unwrap();
                let cross = 2.0 * f.dot(&d.omega).unwrap().re;
                let recon = d.constant + quad + cross;
                assert!(
                    (recon - truth).abs() <= 1e-10 * truth.abs().max(1e-30),
                    "reconstruction {recon} vs gain {truth}"
                );
            }
        }
    }

    #[test]
    fn decomposition_single_antenna() {
        let mut rng = SeededRng::new(1, 1);
        let (positions, real, _, lambda) = random_instance(&mut rng, 1, 4);
        let w = ComplexVector::basis(1, 0);
        let d = decompose_gain(&positions, &real, &w, 0, lambda);
        assert_eq!(d.constant, 0.0);
        assert!(d.omega.norm() == 0.0);
        // Psi reduces to Phi itself for |w_1| = 1.
        let sigma = real.sigma();
        let phi = sigma.outer(sigma);
        assert_eq!(d.psi, phi);
    }

    #[test]
    fn decomposition_with_muted_antenna() {
        let mut rng = SeededRng::new(2, 1);
        let (positions, real, _, lambda) = random_instance(&mut rng, 3, 4);
        let w = ComplexVector::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ]);
        let d = decompose_gain(&positions, &real, &w, 0, lambda);
        assert_eq!(d.omega.norm(), 0.0);
        assert!(d.psi.matvec(real.sigma()).unwrap().norm() == 0.0);
        let truth = channel_gain(&positions, &real, &w, lambda);
        assert!((d.constant - truth).abs() <= 1e-12 * truth.max(1e-30));
    }

    #[test]
    fn surrogate_is_tangent_at_anchor() {
        let mut rng = SeededRng::new(7, 0);
        for _ in 0..50 {
            let (positions, real, w, lambda) = random_instance(&mut rng, 4, 4);
            for n in 0..4 {
                let params = build_surrogate(&positions, &real, &w, n, positions[n], lambda);
                let truth = channel_gain(&positions, &real, &w, lambda);
                let at_anchor = surrogate_value(positions[n], &params);
                assert!(
                    (at_anchor - truth).abs() <= 1e-10 * truth.abs().max(1e-30),
                    "tangency violated: {at_anchor} vs {truth}"
                );
            }
        }
    }

    #[test]
    fn surrogate_minorizes_gain() {
        let mut rng = SeededRng::new(8, 0);
        for _ in 0..20 {
            let (mut positions, real, w, lambda) = random_instance(&mut rng, 4, 4);
            let params = build_surrogate(&positions, &real, &w, 0, positions[0], lambda);
            for _ in 0..200 {
                let t = Position::new(rng.uniform_in(-0.25, 0.25), rng.uniform_in(-0.25, 0.25));
                positions[0] = t;
                let truth = channel_gain(&positions, &real, &w, lambda);
                let bound = surrogate_value(t, &params);
                assert!(
                    bound <= truth + 1e-9,
                    "minorant violated at ({}, {}): {bound} > {truth}",
                    t.x,
                    t.y
                );
            }
        }
    }

    #[test]
    fn degenerate_surrogate_is_constant() {
        // Zero gains kill Psi, Omega, and therefore Upsilon and curvature.
        let angles = PathAngles::new(vec![1.0, 2.0], vec![0.5, 1.5]).unwrap();
        let real = ChannelRealization::new(
            angles,
            PathGains::new(vec![Complex64::ZERO, Complex64::ZERO]),
        )
        .unwrap();
        let positions = [Position::origin(), Position::new(0.1, 0.0)];
        let w = ComplexVector::from_real(&[0.6, 0.8]);
        let params = build_surrogate(&positions, &real, &w, 0, positions[0], 0.125);
        assert_eq!(params.curvature(), 0.0);
        assert_eq!(params.upsilon().norm(), 0.0);
        let a = surrogate_value(Position::origin(), &params);
        let b = surrogate_value(Position::new(0.2, -0.1), &params);
        assert_eq!(a, b);
        assert_eq!(
            beta_bar_gradient(Position::new(0.03, 0.04), &params),
            (0.0, 0.0)
        );
    }

    #[test]
    fn curvature_single_path_formula() {
        // One path with |Y_1| = c gives curvature 16 pi^2 c / lambda^2.
        let mut rng = SeededRng::new(9, 0);
        let (positions, real, w, lambda) = random_instance(&mut rng, 2, 1);
        let params = build_surrogate(&positions, &real, &w, 0, positions[0], lambda);
        let c = params.upsilon()[0].norm();
        let want = 16.0 * std::f64::consts::PI.powi(2) * c / (lambda * lambda);
        assert!((params.curvature() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn surrogate_falls_off_quadratically() {
        let mut rng = SeededRng::new(10, 0);
        let (positions, real, w, lambda) = random_instance(&mut rng, 4, 4);
        let params = build_surrogate(&positions, &real, &w, 0, positions[0], lambda);
        assert!(params.curvature() > 0.0);
        let far = Position::new(1e3, -1e3);
        assert!(surrogate_value(far, &params) < -1e6);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = SeededRng::new(11, 0);
        let step = 1e-6;
        for _ in 0..100 {
            let (positions, real, w, lambda) = random_instance(&mut rng, 4, 4);
            let params = build_surrogate(&positions, &real, &w, 0, positions[0], lambda);
            let t = Position::new(rng.uniform_in(-0.25, 0.25), rng.uniform_in(-0.25, 0.25));
            let (gx, gy) = beta_bar_gradient(t, &params);
            let fdx = (beta_bar(Position::new(t.x + step, t.y), &params)
                - beta_bar(Position::new(t.x - step, t.y), &params))
                / (2.0 * step);
            let fdy = (beta_bar(Position::new(t.x, t.y + step), &params)
                - beta_bar(Position::new(t.x, t.y - step), &params))
                / (2.0 * step);
            let norm = gx.hypot(gy).max(1e-12);
            assert!(
                (gx - fdx).hypot(gy - fdy) <= 1e-6 * norm,
                "gradient ({gx}, {gy}) vs fd ({fdx}, {fdy})"
            );
        }
    }

    #[test]
    fn gradient_x_vanishes_for_vertical_paths() {
        // All elevations zero: rho depends only on y, so d/dx = 0.
        let angles = PathAngles::new(vec![0.0, 0.0], vec![0.3, 2.1]).unwrap();
        let real = ChannelRealization::new(
            angles,
            PathGains::new(vec![Complex64::new(1.0, 0.2), Complex64::new(-0.4, 0.9)]),
        )
        .unwrap();
        let positions = [Position::new(0.02, -0.07), Position::new(0.2, 0.2)];
        let w = ComplexVector::from_real(&[0.6, 0.8]);
        let params = build_surrogate(&positions, &real, &w, 0, positions[0], 0.125);
        let (gx, gy) = beta_bar_gradient(Position::new(0.11, 0.05), &params);
        assert_eq!(gx, 0.0);
        assert!(gy.abs() > 0.0);
    }

    #[test]
    fn surrogate_works_at_paper_scale() {
        // Same contracts with path-loss-scaled gains.
        let config = ScenarioConfig::default();
        let mut rng = SeededRng::new(12, 0);
        for _ in 0..10 {
            let real = sample_channel(&config, &mut rng);
            let mut positions: Vec<Position> = (0..4)
                .map(|_| Position::new(rng.uniform_in(-0.25, 0.25), rng.uniform_in(-0.25, 0.25)))
                .collect();
            let raw: ComplexVector = (0..4).map(|_| rng.standard_complex()).collect();
            let w = raw.scaled(Complex64::new(1.0 / raw.norm(), 0.0));
            let params = build_surrogate(&positions, &real, &w, 1, positions[1], config.wavelength);
            let truth = channel_gain(&positions, &real, &w, config.wavelength);
            let at_anchor = surrogate_value(positions[1], &params);
            assert!((at_anchor - truth).abs() <= 1e-10 * truth.abs().max(1e-300));
            for _ in 0..100 {
                let t = Position::new(rng.uniform_in(-0.25, 0.25), rng.uniform_in(-0.25, 0.25));
                positions[1] = t;
                let gain = channel_gain(&positions, &real, &w, config.wavelength);
                assert!(surrogate_value(t, &params) <= gain + 1e-9 * gain.max(1e-30));
            }
        }
    }
}
