//! Kernel of the Hölder-continuous fast finite-time stable differentiator:
//! the φ₁/φ₂ vector fields and Jacobian, the H-matrix, the 2×2 Lyapunov
//! machinery with its decay constants, gain robustness checks, and the
//! settling-time / residual-set bound evaluators.
//!
//! The Hölder exponent `p ∈ ]1,2[` drives every fractional power in the
//! design; the derived exponents live on [`HolderExponent`] so call sites
//! cannot mix them up.

use crate::lie::{Mat3, Vec3};
use nalgebra::Matrix2;
use thiserror::Error;

pub type Mat2 = Matrix2<f64>;

#[derive(Debug, Error)]
pub enum FftsError {
    #[error("Hölder exponent must lie strictly in ]1,2[, got {0}")]
    BadHolderExponent(f64),
    #[error("differentiator gains must be positive (Hurwitz), got k1={0}, k2={1}")]
    NotHurwitz(f64, f64),
    #[error("gain k3 must be positive, got {0}")]
    BadK3(f64),
    #[error("matrix must be symmetric positive definite")]
    NotPositiveDefinite,
    #[error("Jacobian of φ₁ is unbounded at the origin")]
    ZeroInput,
    #[error("exponent must lie strictly in ]0,1[, got {0}")]
    BadExponent(f64),
    #[error("direction vector must be nonzero")]
    ZeroMu,
}

/// Below this input norm the fractional power factor is treated as zero.
/// The net exponent on `‖e‖` in every product used here is positive, so the
/// continuous extension at the origin is exact; the cutoff only avoids
/// overflow of the intermediate negative power.
const POWER_CUTOFF: f64 = 1e-150;

/// `(eᵀe)^beta · e` with the continuous extension to zero at `e = 0`.
///
/// When `beta == 0` the factor is identically one (the Lipschitz limiting
/// case), including at the origin.
pub fn holder_scale(e: &Vec3, beta: f64) -> Vec3 {
    if beta == 0.0 {
        return *e;
    }
    let n = e.norm();
    if n < POWER_CUTOFF {
        return Vec3::zeros();
    }
    n.powf(2.0 * beta) * e
}

fn holder_factor(e: &Vec3, beta: f64) -> f64 {
    if beta == 0.0 {
        return 1.0;
    }
    let n = e.norm();
    if n < POWER_CUTOFF {
        return 0.0;
    }
    n.powf(2.0 * beta)
}

/// Hölder exponent `p` with `1 < p < 2`, plus the derived exponents used by
/// the differentiator and the observer/controller feedback shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderExponent {
    p: f64,
}

impl HolderExponent {
    pub fn new(p: f64) -> Result<Self, FftsError> {
        if !(p > 1.0 && p < 2.0) {
            return Err(FftsError::BadHolderExponent(p));
        }
        Ok(HolderExponent { p })
    }

    pub fn value(&self) -> f64 {
        self.p
    }

    /// `(1−p)/(3p−2)`, the power on `eᵀe` inside φ₁.
    pub fn phi1_power(&self) -> f64 {
        (1.0 - self.p) / (3.0 * self.p - 2.0)
    }

    /// `2(1−p)/(3p−2)`, the power on `eᵀe` in the last φ₂ term.
    pub fn phi2_power(&self) -> f64 {
        2.0 * (1.0 - self.p) / (3.0 * self.p - 2.0)
    }

    /// `(1−p)/p`, the power on `eᵀe` in the ψ-shaped feedback terms.
    pub fn psi_power(&self) -> f64 {
        (1.0 - self.p) / self.p
    }

    /// `1/p`, the Lyapunov decay exponent.
    pub fn lyapunov_alpha(&self) -> f64 {
        1.0 / self.p
    }

    /// `(p−1)/p`, the H-matrix gain in the ψ-term derivatives.
    pub fn h_gain(&self) -> f64 {
        (self.p - 1.0) / self.p
    }
}

/// Differentiator gains `(k1, k2, k3)`; positivity of `k1, k2` is exactly the
/// Hurwitz condition for the companion matrix `[[−k1, 1], [−k2, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffGains {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

impl DiffGains {
    pub fn new(k1: f64, k2: f64, k3: f64) -> Result<Self, FftsError> {
        if !(k1 > 0.0 && k2 > 0.0) {
            return Err(FftsError::NotHurwitz(k1, k2));
        }
        if !(k3 > 0.0) {
            return Err(FftsError::BadK3(k3));
        }
        Ok(DiffGains { k1, k2, k3 })
    }

    pub fn companion_matrix(&self) -> Mat2 {
        Mat2::new(-self.k1, 1.0, -self.k2, 0.0)
    }
}

/// `φ₁(e) = k₃ e + (eᵀe)^((1−p)/(3p−2)) e`, continuously extended to 0 at the
/// origin.
pub fn phi1(e: &Vec3, p: HolderExponent, k3: f64) -> Vec3 {
    phi1_raw(e, p.value(), k3)
}

/// `φ₂(e) = k₃² e + (2k₃(2p−1)/(3p−2)) (eᵀe)^((1−p)/(3p−2)) e
///        + (p/(3p−2)) (eᵀe)^(2(1−p)/(3p−2)) e`.
pub fn phi2(e: &Vec3, p: HolderExponent, k3: f64) -> Vec3 {
    phi2_raw(e, p.value(), k3)
}

/// φ₁ with a raw exponent, admitting the Lipschitz limiting case `p = 1`
/// where every power factor collapses to one.
pub fn phi1_raw(e: &Vec3, p: f64, k3: f64) -> Vec3 {
    k3 * e + holder_scale(e, (1.0 - p) / (3.0 * p - 2.0))
}

/// φ₂ with a raw exponent, admitting `p = 1`.
pub fn phi2_raw(e: &Vec3, p: f64, k3: f64) -> Vec3 {
    let q = 3.0 * p - 2.0;
    k3 * k3 * e
        + (2.0 * k3 * (2.0 * p - 1.0) / q) * holder_scale(e, (1.0 - p) / q)
        + (p / q) * holder_scale(e, 2.0 * (1.0 - p) / q)
}

/// Jacobian of φ₁:
/// `k₃ I + (eᵀe)^((1−p)/(3p−2)) [ I − (2(p−1)/(3p−2)) eeᵀ/(eᵀe) ]`.
///
/// Unbounded at the origin for `p ∈ ]1,2[`; callers must keep `e ≠ 0` and use
/// [`phi2`] where only the product `φ₁′ φ₁` is needed.
pub fn phi1_jacobian(e: &Vec3, p: HolderExponent, k3: f64) -> Result<Mat3, FftsError> {
    let n = e.norm();
    if n < POWER_CUTOFF {
        return Err(FftsError::ZeroInput);
    }
    let pv = p.value();
    let factor = holder_factor(e, p.phi1_power());
    let c = 2.0 * (pv - 1.0) / (3.0 * pv - 2.0);
    let outer = e * e.transpose() / (n * n);
    Ok(Mat3::identity() * k3 + factor * (Mat3::identity() - c * outer))
}

/// Extreme eigenvalues of the φ₁ Jacobian, in closed form:
/// max `k₃ + (eᵀe)^((1−p)/(3p−2))`, min `k₃ + (eᵀe)^(...) · p/(3p−2)`.
pub fn phi1_jacobian_eigen_extremes(e: &Vec3, p: HolderExponent, k3: f64) -> (f64, f64) {
    let factor = holder_factor(e, p.phi1_power());
    let pv = p.value();
    (
        k3 + factor * pv / (3.0 * pv - 2.0),
        k3 + factor,
    )
}

/// `H(x, k) = I − (2k/(xᵀx)) x xᵀ` for `x ≠ 0`, extended to `I` at `x = 0`.
///
/// Spectrum for `x ≠ 0` is `{1 − 2k, 1, 1}`.
pub fn h_matrix(x: &Vec3, k: f64) -> Mat3 {
    let n2 = x.dot(x);
    if n2 < POWER_CUTOFF * POWER_CUTOFF {
        return Mat3::identity();
    }
    Mat3::identity() - (2.0 * k / n2) * (x * x.transpose())
}

/// `(eᵀe + ε²)^beta · e`: the fractional power with its singular derivative
/// at the origin smoothed out. Identical to [`holder_scale`] up to relative
/// `O(ε²/‖e‖²)` away from the origin; used where the fractional fields get
/// differentiated rather than integrated.
pub fn holder_scale_regularized(e: &Vec3, beta: f64, epsilon: f64) -> Vec3 {
    if beta == 0.0 {
        return *e;
    }
    (e.dot(e) + epsilon * epsilon).powf(beta) * e
}

/// [`h_matrix`] with the direction discontinuity at the origin smoothed the
/// same way.
pub fn h_matrix_regularized(x: &Vec3, k: f64, epsilon: f64) -> Mat3 {
    Mat3::identity() - (2.0 * k / (x.dot(x) + epsilon * epsilon)) * (x * x.transpose())
}

/// The sliding-style composite `ψ = rate + κ [err + (errᵀerr)^((1−p)/p) err]`
/// shared by both observers and both tracking laws. Accepts a raw exponent so
/// the Lipschitz limiting case `p = 1` is representable.
pub fn psi_shape(err: &Vec3, rate: &Vec3, kappa: f64, p_raw: f64) -> Vec3 {
    rate + kappa * (err + holder_scale(err, (1.0 - p_raw) / p_raw))
}

/// Exact time derivative of the κ-bracket in [`psi_shape`] along `ėrr = rate`:
/// `κ [rate + (errᵀerr)^((1−p)/p) H(err, (p−1)/p) rate]`.
///
/// The fractional factor diverges as `err → 0` with `rate` fixed; at the
/// composite equilibrium both vanish together, and the power cutoff keeps the
/// evaluation finite at `err = 0` exactly.
pub fn psi_shape_rate(err: &Vec3, rate: &Vec3, kappa: f64, p_raw: f64) -> Vec3 {
    let factor = holder_factor(err, (1.0 - p_raw) / p_raw);
    kappa * (rate + factor * (h_matrix(err, (p_raw - 1.0) / p_raw) * rate))
}

/// Solution of the 2×2 Lyapunov equation `AᵀP + PA = −Q` for the companion
/// matrix of [`DiffGains`], with the eigenvalue extremes of both matrices.
#[derive(Debug, Clone, Copy)]
pub struct LyapunovPair {
    pub p_mat: Mat2,
    pub q_mat: Mat2,
    pub p_min: f64,
    pub p_max: f64,
    pub q_min: f64,
    pub q_max: f64,
}

fn sym2_eigen_extremes(m: &Mat2) -> (f64, f64) {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    (0.5 * (tr - disc), 0.5 * (tr + disc))
}

/// Residual tolerance accepted on `‖AᵀP + PA + Q‖`.
pub const LYAPUNOV_RESIDUAL_TOL: f64 = 1e-12;

/// Closed-form elimination solve of `AᵀP + PA = −Q` for `A = [[−k1,1],[−k2,0]]`.
///
/// For this companion form the component equations decouple:
/// `p12 = −q22/2`, `p11 = (q11/2 − k2 p12)/k1`, `p22 = (p11 − k1 p12 + q12)/k2`.
pub fn solve_lyapunov(gains: &DiffGains, q: &Mat2) -> Result<LyapunovPair, FftsError> {
    let (q_min, q_max) = sym2_eigen_extremes(q);
    if (q[(0, 1)] - q[(1, 0)]).abs() > 1e-12 || q_min <= 0.0 {
        return Err(FftsError::NotPositiveDefinite);
    }
    let (k1, k2) = (gains.k1, gains.k2);
    let p12 = -q[(1, 1)] / 2.0;
    let p11 = (q[(0, 0)] / 2.0 - k2 * p12) / k1;
    let p22 = (p11 - k1 * p12 + q[(0, 1)]) / k2;
    let p_mat = Mat2::new(p11, p12, p12, p22);

    let a = gains.companion_matrix();
    let residual = (a.transpose() * p_mat + p_mat * a + q).norm();
    debug_assert!(residual < LYAPUNOV_RESIDUAL_TOL);

    let (p_min, p_max) = sym2_eigen_extremes(&p_mat);
    if p_min <= 0.0 {
        return Err(FftsError::NotPositiveDefinite);
    }
    Ok(LyapunovPair {
        p_mat,
        q_mat: *q,
        p_min,
        p_max,
        q_min,
        q_max,
    })
}

/// Decay constants of the differentiator Lyapunov function:
/// `γ₁ = k₃ λmin(Q)/λmax(P)`,
/// `γ₂ = λmin(Q) λmin(P)^((p−1)/p) p / (λmax(P)(3p−2))`.
pub fn gamma_constants(pair: &LyapunovPair, k3: f64, p: HolderExponent) -> (f64, f64) {
    let pv = p.value();
    let gamma1 = k3 * pair.q_min / pair.p_max;
    let gamma2 =
        pair.q_min * pair.p_min.powf((pv - 1.0) / pv) * pv / (pair.p_max * (3.0 * pv - 2.0));
    (gamma1, gamma2)
}

/// Robustness report: whether `γ₁ ≥ λmax(P)/λmin(P)` (the condition under
/// which bounded perturbations and measurement noise lead to practical
/// finite-time stability), with the margin and the noise-induced perturbation
/// bounds on `‖φ₁(e+μ) − φ₁(e)‖` and `‖φ₂(e+μ) − φ₂(e)‖`.
#[derive(Debug, Clone, Copy)]
pub struct RobustnessReport {
    pub gamma1: f64,
    pub gamma2: f64,
    pub eigen_ratio: f64,
    /// `γ₁ − λmax(P)/λmin(P)`; non-negative iff the condition holds.
    pub margin: f64,
    pub passes: bool,
    /// `k₃` solving the condition with equality, as a tuning suggestion.
    pub k3_floor: f64,
    pub phi1_noise_bound: f64,
    pub phi2_noise_bound: f64,
}

/// Evaluates the perturbation-robustness gain condition and the noise bounds
/// for a noise amplitude `mu_bar ≥ 0`.
pub fn validate_robust_gains(
    pair: &LyapunovPair,
    k3: f64,
    p: HolderExponent,
    mu_bar: f64,
) -> RobustnessReport {
    let (gamma1, gamma2) = gamma_constants(pair, k3, p);
    let ratio = pair.p_max / pair.p_min;
    let pv = p.value();
    let a = 2.0 * (pv - 1.0) / (3.0 * pv - 2.0);
    let (phi1_noise_bound, phi2_noise_bound) = if mu_bar == 0.0 {
        (0.0, 0.0)
    } else {
        (
            k3 * mu_bar + 2f64.powf(a) * mu_bar.powf(1.0 - a),
            k3 * k3 * mu_bar
                + (2.0 * k3 * (2.0 * pv - 1.0) / (3.0 * pv - 2.0))
                    * 2f64.powf(a)
                    * mu_bar.powf(1.0 - a)
                + (pv / (3.0 * pv - 2.0)) * 2f64.powf(2.0 * a) * mu_bar.powf(1.0 - 2.0 * a),
        )
    };
    RobustnessReport {
        gamma1,
        gamma2,
        eigen_ratio: ratio,
        margin: gamma1 - ratio,
        passes: gamma1 >= ratio,
        k3_floor: ratio * pair.p_max / pair.q_min,
        phi1_noise_bound,
        phi2_noise_bound,
    }
}

/// Settling-time bound for `V̇ ≤ −λ₁V − λ₂V^α`:
/// `(1/(λ₁(1−α))) ln((λ₁ V₀^(1−α) + λ₂)/λ₂)`, falling back to the pure
/// finite-time bound `V₀^(1−α)/(λ₂(1−α))` when `λ₁ = 0`.
pub fn settling_time_bound(v0: f64, lambda1: f64, lambda2: f64, alpha: f64) -> Result<f64, FftsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FftsError::BadExponent(alpha));
    }
    if v0 <= 0.0 {
        return Ok(0.0);
    }
    let one_minus = 1.0 - alpha;
    if lambda1 > 0.0 {
        Ok((1.0 / (lambda1 * one_minus))
            * ((lambda1 * v0.powf(one_minus) + lambda2) / lambda2).ln())
    } else {
        Ok(v0.powf(one_minus) / (lambda2 * one_minus))
    }
}

/// Radius of the residual Lyapunov set under a persistent perturbation `η`:
/// `min{ η/((1−θ₀)λ₁), (η/((1−θ₀)λ₂))^(1/α) }`.
pub fn pfts_radius(
    lambda1: f64,
    lambda2: f64,
    alpha: f64,
    eta: f64,
    theta0: f64,
) -> Result<f64, FftsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FftsError::BadExponent(alpha));
    }
    if !(theta0 > 0.0 && theta0 < 1.0) {
        return Err(FftsError::BadExponent(theta0));
    }
    if eta == 0.0 {
        return Ok(0.0);
    }
    let slack = 1.0 - theta0;
    let a = eta / (slack * lambda1);
    let b = (eta / (slack * lambda2)).powf(1.0 / alpha);
    Ok(a.min(b))
}

/// `φ(x) = ‖Y(x)‖²` with `Y(x) = ‖x‖^(−2α) x − ‖x+μ‖^(−2α)(x+μ)`; the
/// objective whose global maximum sits at `x = −μ/2`.
pub fn noise_gap_objective(x: &Vec3, mu: &Vec3, alpha: f64) -> f64 {
    let term = |v: &Vec3| -> Vec3 {
        let n = v.norm();
        if n < POWER_CUTOFF {
            Vec3::zeros()
        } else {
            n.powf(-2.0 * alpha) * v
        }
    };
    let y = term(x) - term(&(x + mu));
    y.dot(&y)
}

/// Numerical maximization of [`noise_gap_objective`] over the plane spanned
/// by `μ` and one perpendicular direction (a critical-point analysis confines
/// the maximizer there): a coarse grid of `grid_resolution`² points within
/// radius `3‖μ‖`, then coordinate-wise golden-section refinement down to
/// `1e-4·‖μ‖`.
pub fn noise_gap_argmax(
    mu: &Vec3,
    alpha: f64,
    grid_resolution: usize,
) -> Result<Vec3, FftsError> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(FftsError::BadExponent(alpha));
    }
    let mu_norm = mu.norm();
    if mu_norm == 0.0 {
        return Err(FftsError::ZeroMu);
    }
    let u = mu / mu_norm;
    // Any unit vector perpendicular to μ.
    let seed = if u.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let v = (seed - u * seed.dot(&u)).normalize();

    let radius = 3.0 * mu_norm;
    let n = grid_resolution.max(3);
    let eval = |a: f64, b: f64| noise_gap_objective(&(a * u + b * v), mu, alpha);

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..n {
        let a = -radius + 2.0 * radius * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let b = -radius + 2.0 * radius * j as f64 / (n - 1) as f64;
            let val = eval(a, b);
            if val > best.0 {
                best = (val, a, b);
            }
        }
    }

    // Alternating 1-D golden-section passes around the grid optimum.
    let cell = 2.0 * radius / (n - 1) as f64;
    let tol = 1e-4 * mu_norm;
    let (mut a, mut b) = (best.1, best.2);
    for _ in 0..8 {
        a = golden_max(|t| eval(t, b), a - cell, a + cell, tol * 0.1);
        b = golden_max(|t| eval(a, t), b - cell, b + cell, tol * 0.1);
    }
    Ok(a * u + b * v)
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = 0.618_033_988_749_894_9;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p12() -> HolderExponent {
        HolderExponent::new(1.2).unwrap()
    }

    #[test]
    fn holder_exponent_bounds() {
        assert!(HolderExponent::new(1.0).is_err());
        assert!(HolderExponent::new(2.0).is_err());
        assert!(HolderExponent::new(1.5).is_ok());
    }

    #[test]
    fn phi1_zero_and_unit_norm() {
        let p = p12();
        assert_eq!(phi1(&Vec3::zeros(), p, 2.0), Vec3::zeros());
        // unit norm makes the power factor exactly one
        let e = Vec3::new(1.0, 0.0, 0.0);
        assert_relative_eq!(phi1(&e, p, 2.0), Vec3::new(3.0, 0.0, 0.0), epsilon = 1e-14);
    }

    #[test]
    fn phi1_high_precision_point() {
        let e = Vec3::new(2.0, 0.0, 0.0);
        let out = phi1(&e, p12(), 2.0);
        assert_relative_eq!(out.x, 5.681792830507429, epsilon = 1e-12);
        assert_eq!(out.y, 0.0);
    }

    #[test]
    fn phi2_zero_and_high_precision_point() {
        let p = p12();
        assert_eq!(phi2(&Vec3::zeros(), p, 2.0), Vec3::zeros());
        let out = phi2(&Vec3::new(2.0, 0.0, 0.0), p, 2.0);
        assert_relative_eq!(out.x, 14.946935078555823, epsilon = 1e-12);
    }

    #[test]
    fn phi1_jacobian_eigen_extremes_at_unit_input() {
        let (min, max) = phi1_jacobian_eigen_extremes(&Vec3::new(1.0, 0.0, 0.0), p12(), 2.0);
        assert_relative_eq!(max, 3.0, epsilon = 1e-14);
        assert_relative_eq!(min, 2.75, epsilon = 1e-14);
    }

    #[test]
    fn phi1_jacobian_rejects_origin() {
        assert!(matches!(
            phi1_jacobian(&Vec3::zeros(), p12(), 2.0),
            Err(FftsError::ZeroInput)
        ));
    }

    #[test]
    fn phi1_jacobian_matches_finite_differences() {
        let p = p12();
        let k3 = 2.0;
        let delta = 1e-7;
        let cases = [
            Vec3::new(0.3, -0.2, 0.15),
            Vec3::new(2.0, 1.0, -4.0),
            Vec3::new(-8.0, 0.1, 3.0),
        ];
        for e in cases {
            let jac = phi1_jacobian(&e, p, k3).unwrap();
            for axis in 0..3 {
                let mut step = Vec3::zeros();
                step[axis] = delta;
                let fd = (phi1(&(e + step), p, k3) - phi1(&(e - step), p, k3)) / (2.0 * delta);
                let col = jac.column(axis).into_owned();
                assert_relative_eq!(fd, col, max_relative = 1e-5, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn h_matrix_cases() {
        assert_eq!(h_matrix(&Vec3::zeros(), 0.3), Mat3::identity());
        let m = h_matrix(&Vec3::new(1.0, 0.0, 0.0), 1.0 / 6.0);
        let expected = Mat3::from_diagonal(&Vec3::new(2.0 / 3.0, 1.0, 1.0));
        assert_relative_eq!(m, expected, epsilon = 1e-14);
    }

    #[test]
    fn h_matrix_spectrum_is_one_minus_2k_and_ones() {
        let x = Vec3::new(0.3, -1.2, 0.7);
        let k = 0.21;
        let eig = nalgebra::SymmetricEigen::new(h_matrix(&x, k));
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(vals[0], 1.0 - 2.0 * k, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn lyapunov_solve_known_case() {
        let gains = DiffGains::new(3.0, 2.0, 2.0).unwrap();
        let pair = solve_lyapunov(&gains, &Mat2::identity()).unwrap();
        assert_relative_eq!(pair.p_mat, Mat2::new(0.5, -0.5, -0.5, 1.0), epsilon = 1e-14);
        assert_relative_eq!(pair.p_min, 0.190983005625053, epsilon = 1e-12);
        assert_relative_eq!(pair.p_max, 1.309016994374947, epsilon = 1e-12);
        let a = gains.companion_matrix();
        let residual = (a.transpose() * pair.p_mat + pair.p_mat * a + Mat2::identity()).norm();
        assert!(residual < LYAPUNOV_RESIDUAL_TOL);
    }

    #[test]
    fn lyapunov_rejects_non_hurwitz() {
        assert!(matches!(
            DiffGains::new(0.0, 2.0, 1.0),
            Err(FftsError::NotHurwitz(..))
        ));
    }

    #[test]
    fn gamma_constants_known_case() {
        let gains = DiffGains::new(3.0, 2.0, 2.0).unwrap();
        let pair = solve_lyapunov(&gains, &Mat2::identity()).unwrap();
        let (g1, g2) = gamma_constants(&pair, 2.0, p12());
        assert_relative_eq!(g1, 1.527864045000421, epsilon = 1e-12);
        assert!(g2 > 0.0);
        // p/(3p−2) factor at p = 1.2
        assert_relative_eq!(1.2 / (3.0 * 1.2 - 2.0), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn robustness_report_flags_small_k3_and_boundary() {
        let gains = DiffGains::new(3.0, 2.0, 2.0).unwrap();
        let pair = solve_lyapunov(&gains, &Mat2::identity()).unwrap();
        let report = validate_robust_gains(&pair, 2.0, p12(), 0.0);
        assert!(!report.passes);
        assert_relative_eq!(report.eigen_ratio, 6.854101966249686, epsilon = 1e-10);
        assert!(report.k3_floor > 2.0);
        // scaling k3 to the reported floor lands exactly on the boundary
        let at_floor = validate_robust_gains(&pair, report.k3_floor, p12(), 0.0);
        assert!(at_floor.passes);
        assert!(at_floor.margin.abs() < 1e-9);
        // zero-noise perturbation bounds vanish
        assert_eq!(report.phi1_noise_bound, 0.0);
        assert_eq!(report.phi2_noise_bound, 0.0);
    }

    #[test]
    fn settling_bound_cases() {
        assert_eq!(settling_time_bound(0.0, 1.0, 1.0, 0.5).unwrap(), 0.0);
        assert_relative_eq!(
            settling_time_bound(1.0, 1.0, 1.0, 0.5).unwrap(),
            2.0 * std::f64::consts::LN_2,
            epsilon = 1e-12
        );
        // λ1 → 0 limit agrees with the pure finite-time formula
        let with_small = settling_time_bound(2.0, 1e-8, 1.5, 0.4).unwrap();
        let without = settling_time_bound(2.0, 0.0, 1.5, 0.4).unwrap();
        assert_relative_eq!(with_small, without, epsilon = 1e-6);
        assert!(settling_time_bound(1.0, 1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn pfts_radius_cases() {
        assert_eq!(pfts_radius(1.0, 1.0, 0.5, 0.0, 0.5).unwrap(), 0.0);
        assert_relative_eq!(
            pfts_radius(1.0, 1.0, 0.5, 0.1, 0.5).unwrap(),
            0.04,
            epsilon = 1e-14
        );
        let lo = pfts_radius(1.0, 1.0, 0.5, 0.1, 0.5).unwrap();
        let hi = pfts_radius(1.0, 1.0, 0.5, 0.2, 0.5).unwrap();
        assert!(hi >= lo);
    }

    #[test]
    fn noise_argmax_axis_aligned() {
        let mu = Vec3::new(1.0, 0.0, 0.0);
        let x = noise_gap_argmax(&mu, 0.25, 400).unwrap();
        assert!((x - Vec3::new(-0.5, 0.0, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn noise_argmax_scaled_direction() {
        let mu = Vec3::new(0.0, 2.0, 0.0);
        let x = noise_gap_argmax(&mu, 0.1, 400).unwrap();
        assert!((x - Vec3::new(0.0, -1.0, 0.0)).norm() < 2e-3);
    }

    #[test]
    fn noise_gap_brute_force_never_beats_half_mu() {
        // dense random sampling against the analytic maximizer
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state = state.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            ((z ^ (z >> 31)) >> 11) as f64 / 9007199254740992.0
        };
        let mu = Vec3::new(0.7, -0.4, 1.1);
        let alpha = 0.3;
        let best = noise_gap_objective(&(-0.5 * mu), &mu, alpha);
        for _ in 0..100_000 {
            let x = Vec3::new(
                8.0 * next() - 4.0,
                8.0 * next() - 4.0,
                8.0 * next() - 4.0,
            );
            if x.norm() < 1e-9 || (x + mu).norm() < 1e-9 {
                continue;
            }
            assert!(noise_gap_objective(&x, &mu, alpha) <= best * (1.0 + 1e-12));
        }
    }

    #[test]
    fn noise_argmax_rejects_bad_inputs() {
        assert!(matches!(
            noise_gap_argmax(&Vec3::zeros(), 0.25, 100),
            Err(FftsError::ZeroMu)
        ));
        assert!(matches!(
            noise_gap_argmax(&Vec3::new(1.0, 0.0, 0.0), 0.6, 100),
            Err(FftsError::BadExponent(_))
        ));
    }

    #[test]
    fn limiting_case_keeps_product_identity() {
        // p = 1: φ₁ = (k₃+1)e and φ₂ = (k₃+1)²e = φ₁′φ₁ with constant Jacobian.
        let e = Vec3::new(0.4, -1.0, 2.0);
        let k3 = 2.0;
        assert_relative_eq!(phi1_raw(&e, 1.0, k3), 3.0 * e, epsilon = 1e-14);
        assert_relative_eq!(phi2_raw(&e, 1.0, k3), 9.0 * e, epsilon = 1e-14);
    }

    proptest! {
        // φ₂ = φ₁′ φ₁ pointwise
        #[test]
        fn phi2_is_jacobian_times_phi1(
            e in prop::array::uniform3(-1.0f64..1.0),
            scale in -3.0f64..3.0,
            pv in 1.01f64..1.99,
            k3 in 0.1f64..5.0,
        ) {
            let e = Vec3::from(e) * 10f64.powf(scale);
            prop_assume!(e.norm() > 1e-3);
            let p = HolderExponent::new(pv).unwrap();
            let lhs = phi2(&e, p, k3);
            let rhs = phi1_jacobian(&e, p, k3).unwrap() * phi1(&e, p, k3);
            prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
        }

        // numerically computed Jacobian spectrum matches the closed forms
        #[test]
        fn jacobian_spectrum_matches_closed_form(
            e in prop::array::uniform3(-5.0f64..5.0),
            pv in 1.01f64..1.99,
            k3 in 0.1f64..5.0,
        ) {
            let e = Vec3::from(e);
            prop_assume!(e.norm() > 1e-2);
            let p = HolderExponent::new(pv).unwrap();
            let jac = phi1_jacobian(&e, p, k3).unwrap();
            let eig = nalgebra::SymmetricEigen::new(jac);
            let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let (min, max) = phi1_jacobian_eigen_extremes(&e, p, k3);
            prop_assert!((vals[0] - min).abs() <= 1e-9 * min);
            prop_assert!((vals[2] - max).abs() <= 1e-9 * max);
        }

        // Lyapunov residual and positive definiteness over random Hurwitz gains
        #[test]
        fn lyapunov_residual_small_for_random_gains(
            k1 in 0.1f64..20.0,
            k2 in 0.1f64..20.0,
        ) {
            let gains = DiffGains::new(k1, k2, 1.0).unwrap();
            let pair = solve_lyapunov(&gains, &Mat2::identity()).unwrap();
            let a = gains.companion_matrix();
            let residual = (a.transpose() * pair.p_mat + pair.p_mat * a + Mat2::identity()).norm();
            prop_assert!(residual < LYAPUNOV_RESIDUAL_TOL);
            prop_assert!(pair.p_min > 0.0);
        }

        // x^(1/p) + y^(1/p) ≥ (x+y)^(1/p) for non-negative x, y
        #[test]
        fn subadditive_power_inequality(
            x in 0.0f64..1e6,
            y in 0.0f64..1e6,
            pv in 1.01f64..1.99,
        ) {
            let a = 1.0 / pv;
            prop_assert!(x.powf(a) + y.powf(a) + 1e-12 >= (x + y).powf(a));
        }

        // brute-force sampling never beats the analytic maximizer −μ/2
        #[test]
        fn noise_gap_maximum_at_half_mu(
            mu in prop::array::uniform3(-2.0f64..2.0),
            x in prop::array::uniform3(-5.0f64..5.0),
            alpha in 0.05f64..0.45,
        ) {
            let mu = Vec3::from(mu);
            prop_assume!(mu.norm() > 1e-2);
            let x = Vec3::from(x);
            prop_assume!(x.norm() > 1e-9 && (x + mu).norm() > 1e-9);
            let best = noise_gap_objective(&(-0.5 * mu), &mu, alpha);
            prop_assert!(noise_gap_objective(&x, &mu, alpha) <= best * (1.0 + 1e-9));
        }
    }
}
