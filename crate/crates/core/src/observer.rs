//! Extended state observers on SE(3): a translational observer estimating
//! position, velocity, and the lumped disturbance force, and a rotational
//! observer estimating attitude, angular velocity, and the lumped disturbance
//! torque. Both drive their estimation errors through the fast finite-time
//! stable differentiator structure of [`crate::ffts`], plus a κ-weighted
//! composite of the zeroth-order error.
//!
//! The right-hand sides here are pure evaluators; integration is owned by the
//! caller (the simulation harness advances observers with the same scheme and
//! step as the plant, propagating the attitude estimate through the
//! exponential map so it stays on SO(3)).

use crate::ffts::{
    gamma_constants, phi1_raw, phi2_raw, psi_shape, psi_shape_rate, solve_lyapunov, DiffGains,
    HolderExponent, LyapunovPair, Mat2,
};
use crate::lie::{morse_rate, morse_sk, Mat3, MorseGain, Rotation, Vec3};
use crate::sim::{dexpinv_so3, e3, LieAlgebra, LieState, RigidBodyState, GRAVITY};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObserverError {
    #[error("observer gains must be positive: k1={0}, k2={1}, k3={2}, kappa={3}")]
    InvalidGains(f64, f64, f64, f64),
    #[error("inertia matrix is not invertible")]
    BadInertia,
}

/// States of the translational observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationalEsoState {
    /// Estimated position (m).
    pub position: Vec3,
    /// Estimated inertial velocity (m/s).
    pub velocity: Vec3,
    /// Estimated disturbance force (N).
    pub force: Vec3,
}

impl TranslationalEsoState {
    /// Observer initialized at the true state and true disturbance.
    pub fn from_truth(state: &RigidBodyState, force_disturbance: &Vec3) -> Self {
        TranslationalEsoState {
            position: state.pose.position,
            velocity: state.v,
            force: *force_disturbance,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.position.iter().all(|x| x.is_finite())
            && self.velocity.iter().all(|x| x.is_finite())
            && self.force.iter().all(|x| x.is_finite())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TranslationalEsoRate {
    pub dposition: Vec3,
    pub dvelocity: Vec3,
    pub dforce: Vec3,
}

impl LieAlgebra for TranslationalEsoRate {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        let mut out = TranslationalEsoRate {
            dposition: Vec3::zeros(),
            dvelocity: Vec3::zeros(),
            dforce: Vec3::zeros(),
        };
        for (c, r) in terms {
            out.dposition += *c * r.dposition;
            out.dvelocity += *c * r.dvelocity;
            out.dforce += *c * r.dforce;
        }
        out
    }

    fn dexpinv(_u: &Self, k: &Self) -> Self {
        *k
    }
}

impl LieState for TranslationalEsoState {
    type Algebra = TranslationalEsoRate;

    fn advance(&self, u: &TranslationalEsoRate) -> Self {
        TranslationalEsoState {
            position: self.position + u.dposition,
            velocity: self.velocity + u.dvelocity,
            force: self.force + u.dforce,
        }
    }
}

/// States of the rotational observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationalEsoState {
    /// Estimated attitude.
    pub attitude: Rotation,
    /// Estimated body angular velocity (rad/s).
    pub angular: Vec3,
    /// Estimated disturbance torque (N·m).
    pub torque: Vec3,
}

impl RotationalEsoState {
    pub fn from_truth(state: &RigidBodyState, torque_disturbance: &Vec3) -> Self {
        RotationalEsoState {
            attitude: state.pose.rotation,
            angular: state.omega,
            torque: *torque_disturbance,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.attitude.matrix().iter().all(|x| x.is_finite())
            && self.angular.iter().all(|x| x.is_finite())
            && self.torque.iter().all(|x| x.is_finite())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RotationalEsoRate {
    /// Body rate of the attitude estimate: `d/dt R̂ = R̂ · hat(rot)`.
    pub rot: Vec3,
    pub dangular: Vec3,
    pub dtorque: Vec3,
}

impl LieAlgebra for RotationalEsoRate {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        let mut out = RotationalEsoRate {
            rot: Vec3::zeros(),
            dangular: Vec3::zeros(),
            dtorque: Vec3::zeros(),
        };
        for (c, r) in terms {
            out.rot += *c * r.rot;
            out.dangular += *c * r.dangular;
            out.dtorque += *c * r.dtorque;
        }
        out
    }

    fn dexpinv(u: &Self, k: &Self) -> Self {
        RotationalEsoRate {
            rot: dexpinv_so3(&u.rot, &k.rot),
            dangular: k.dangular,
            dtorque: k.dtorque,
        }
    }
}

impl LieState for RotationalEsoState {
    type Algebra = RotationalEsoRate;

    fn advance(&self, u: &RotationalEsoRate) -> Self {
        RotationalEsoState {
            attitude: self.attitude.compose(&crate::lie::exp_so3(&u.rot)),
            angular: self.angular + u.dangular,
            torque: self.torque + u.dtorque,
        }
    }
}

/// Gains of one observer channel. `morse` only enters the rotational
/// observer; `q_mat` is the free right-hand side of the Lyapunov equation
/// used by the constraint checks (identity unless deliberately rescaled).
#[derive(Debug, Clone, Copy)]
pub struct EsoGains {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub kappa: f64,
    pub p: HolderExponent,
    pub morse: MorseGain,
    pub q_mat: Mat2,
}

impl EsoGains {
    pub fn new(k1: f64, k2: f64, k3: f64, kappa: f64, p: HolderExponent, morse: MorseGain) -> Self {
        EsoGains {
            k1,
            k2,
            k3,
            kappa,
            p,
            morse,
            q_mat: Mat2::identity(),
        }
    }

    fn check_positive(&self) -> Result<(), ObserverError> {
        if self.k1 > 0.0 && self.k2 > 0.0 && self.k3 > 0.0 && self.kappa > 0.0 {
            Ok(())
        } else {
            Err(ObserverError::InvalidGains(
                self.k1, self.k2, self.k3, self.kappa,
            ))
        }
    }
}

/// Translational observer right-hand side.
///
/// With `e_b = b_meas − b̂`, `e_v = v_meas − v̂` and
/// `ψ = e_v + κ[e_b + (e_bᵀe_b)^((1−p)/p) e_b]`:
/// `d b̂ = v̂`,
/// `m d v̂ = m g e3 − f R e3 + m k₁ φ₁(ψ) + m κ[(e_bᵀe_b)^((1−p)/p) H e_v + e_v] + φ̂`,
/// `d φ̂ = m k₂ φ₂(ψ)`.
pub fn translational_eso_rhs(
    state: &TranslationalEsoState,
    meas_position: &Vec3,
    meas_velocity: &Vec3,
    meas_attitude: &Rotation,
    thrust: f64,
    gains: &EsoGains,
    mass: f64,
) -> Result<TranslationalEsoRate, ObserverError> {
    gains.check_positive()?;
    translational_rhs_raw(
        state,
        meas_position,
        meas_velocity,
        meas_attitude,
        thrust,
        gains,
        mass,
        gains.p.value(),
    )
}

/// The same observer structure evaluated at `p = 1`, where every fractional
/// power collapses and the feedback becomes Lipschitz; the in-family
/// asymptotic baseline.
pub fn limiting_translational_eso_rhs(
    state: &TranslationalEsoState,
    meas_position: &Vec3,
    meas_velocity: &Vec3,
    meas_attitude: &Rotation,
    thrust: f64,
    gains: &EsoGains,
    mass: f64,
) -> Result<TranslationalEsoRate, ObserverError> {
    gains.check_positive()?;
    translational_rhs_raw(
        state,
        meas_position,
        meas_velocity,
        meas_attitude,
        thrust,
        gains,
        mass,
        1.0,
    )
}

#[allow(clippy::too_many_arguments)]
fn translational_rhs_raw(
    state: &TranslationalEsoState,
    meas_position: &Vec3,
    meas_velocity: &Vec3,
    meas_attitude: &Rotation,
    thrust: f64,
    gains: &EsoGains,
    mass: f64,
    p_raw: f64,
) -> Result<TranslationalEsoRate, ObserverError> {
    let e_b = meas_position - state.position;
    let e_v = meas_velocity - state.velocity;
    let psi = psi_shape(&e_b, &e_v, gains.kappa, p_raw);
    let dvelocity = GRAVITY * e3() - (thrust / mass) * meas_attitude.rotate(&e3())
        + gains.k1 * phi1_raw(&psi, p_raw, gains.k3)
        + psi_shape_rate(&e_b, &e_v, gains.kappa, p_raw)
        + state.force / mass;
    Ok(TranslationalEsoRate {
        dposition: state.velocity,
        dvelocity,
        dforce: mass * gains.k2 * phi2_raw(&psi, p_raw, gains.k3),
    })
}

/// Rotational observer right-hand side.
///
/// With `E_R = R̂ᵀ R_meas`, `e_Ω = Ω_meas − E_Rᵀ Ω̂`, `e_R = s_K(E_R)`,
/// `e_w = d/dt e_R`, and `ψ = e_Ω + κ[e_R + (e_Rᵀe_R)^((1−p)/p) e_R]`:
/// `d R̂ = R̂ Ω̂^×`,
/// `d Ω̂ = E_R J⁻¹[(JΩ)×Ω + τ̂ + τ + k₁ J φ₁(ψ) + κ J ((e_Rᵀe_R)^(...) H e_w + e_w)]
///        + E_R e_Ω^× E_Rᵀ Ω̂`,
/// `d τ̂ = J k₂ φ₂(ψ)`.
pub fn rotational_eso_rhs(
    state: &RotationalEsoState,
    meas_attitude: &Rotation,
    meas_angular: &Vec3,
    control_torque: &Vec3,
    gains: &EsoGains,
    inertia: &Mat3,
) -> Result<RotationalEsoRate, ObserverError> {
    gains.check_positive()?;
    rotational_rhs_raw(
        state,
        meas_attitude,
        meas_angular,
        control_torque,
        gains,
        inertia,
        gains.p.value(),
    )
}

/// Rotational observer evaluated at the Lipschitz limit `p = 1`.
pub fn limiting_rotational_eso_rhs(
    state: &RotationalEsoState,
    meas_attitude: &Rotation,
    meas_angular: &Vec3,
    control_torque: &Vec3,
    gains: &EsoGains,
    inertia: &Mat3,
) -> Result<RotationalEsoRate, ObserverError> {
    gains.check_positive()?;
    rotational_rhs_raw(
        state,
        meas_attitude,
        meas_angular,
        control_torque,
        gains,
        inertia,
        1.0,
    )
}

fn rotational_rhs_raw(
    state: &RotationalEsoState,
    meas_attitude: &Rotation,
    meas_angular: &Vec3,
    control_torque: &Vec3,
    gains: &EsoGains,
    inertia: &Mat3,
    p_raw: f64,
) -> Result<RotationalEsoRate, ObserverError> {
    let inertia_inv = inertia.try_inverse().ok_or(ObserverError::BadInertia)?;
    let e_r_att = state.attitude.transpose().compose(meas_attitude);
    let e_omega = meas_angular - e_r_att.rotate_back(&state.angular);
    let e_r = morse_sk(&e_r_att, &gains.morse);
    let e_w = morse_rate(&e_r_att, &e_omega, &gains.morse);
    let psi = psi_shape(&e_r, &e_omega, gains.kappa, p_raw);

    let j_omega = inertia * meas_angular;
    let body_correction = j_omega.cross(meas_angular)
        + state.torque
        + control_torque
        + gains.k1 * (inertia * phi1_raw(&psi, p_raw, gains.k3))
        + inertia * psi_shape_rate(&e_r, &e_w, gains.kappa, p_raw);
    let transport = e_r_att.rotate(&e_omega.cross(&e_r_att.rotate_back(&state.angular)));
    let dangular = e_r_att.rotate(&(inertia_inv * body_correction)) + transport;

    Ok(RotationalEsoRate {
        rot: state.angular,
        dangular,
        dtorque: gains.k2 * (inertia * phi2_raw(&psi, p_raw, gains.k3)),
    })
}

/// Estimation errors of both observers against the true plant state and true
/// disturbances.
#[derive(Debug, Clone, Copy)]
pub struct EsoErrors {
    pub e_position: Vec3,
    pub e_velocity: Vec3,
    pub e_force: Vec3,
    /// Attitude estimation error `E_R = R̂ᵀ R`.
    pub attitude: Rotation,
    pub e_angular: Vec3,
    pub e_torque: Vec3,
}

pub fn compute_eso_errors(
    plant: &RigidBodyState,
    translational: &TranslationalEsoState,
    rotational: &RotationalEsoState,
    true_force: &Vec3,
    true_torque: &Vec3,
) -> EsoErrors {
    let attitude = rotational.attitude.transpose().compose(&plant.pose.rotation);
    EsoErrors {
        e_position: plant.pose.position - translational.position,
        e_velocity: plant.v - translational.velocity,
        e_force: true_force - translational.force,
        attitude,
        e_angular: plant.omega - attitude.rotate_back(&rotational.angular),
        e_torque: true_torque - rotational.torque,
    }
}

/// Gain-constraint report for one observer channel. `decay_margin` is the
/// left-hand side of the eigenvalue inequality specific to the channel
/// (translational: `γ₁ − 1/(k₃² λmin(P))`; rotational: `γ₁ − 1/(2k₃² λmin(P))`);
/// `big_gamma1/2` are the composite decay constants entering the settling-time
/// bound.
#[derive(Debug, Clone, Copy)]
pub struct EsoGainReport {
    pub hurwitz: bool,
    pub kappa_ok: bool,
    pub decay_ok: bool,
    pub decay_margin: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub big_gamma1: f64,
    pub big_gamma2: f64,
    pub pair: Option<LyapunovPair>,
}

impl EsoGainReport {
    pub fn passes(&self) -> bool {
        self.hurwitz && self.kappa_ok && self.decay_ok
    }

    fn failed(kappa_ok: bool) -> Self {
        EsoGainReport {
            hurwitz: false,
            kappa_ok,
            decay_ok: false,
            decay_margin: f64::NAN,
            gamma1: f64::NAN,
            gamma2: f64::NAN,
            big_gamma1: f64::NAN,
            big_gamma2: f64::NAN,
            pair: None,
        }
    }
}

/// Constraint evaluation for the translational observer:
/// Hurwitz gains, `γ₁ − 1/(k₃² λmin(P)) > 0`, `κ > 1/2`; the composite
/// constants are `Γ₁ = min{γ₁ − 1/(k₃² λmin(P)), 2κ − 1}` and
/// `Γ₂ = min{γ₂, 2κ}`.
pub fn validate_translational_gains(gains: &EsoGains) -> EsoGainReport {
    let kappa_ok = gains.kappa > 0.5;
    let diff = match DiffGains::new(gains.k1, gains.k2, gains.k3) {
        Ok(d) => d,
        Err(_) => return EsoGainReport::failed(kappa_ok),
    };
    let pair = match solve_lyapunov(&diff, &gains.q_mat) {
        Ok(p) => p,
        Err(_) => return EsoGainReport::failed(kappa_ok),
    };
    let (gamma1, gamma2) = gamma_constants(&pair, gains.k3, gains.p);
    let decay_margin = gamma1 - 1.0 / (gains.k3 * gains.k3 * pair.p_min);
    EsoGainReport {
        hurwitz: true,
        kappa_ok,
        decay_ok: decay_margin > 0.0,
        decay_margin,
        gamma1,
        gamma2,
        big_gamma1: decay_margin.min(2.0 * gains.kappa - 1.0),
        big_gamma2: gamma2.min(2.0 * gains.kappa),
        pair: Some(pair),
    }
}

/// Constraint evaluation for the rotational observer:
/// Hurwitz gains, `γ₁ − 1/(2k₃² λmin(P)) > 0`, `κ > 1/2`;
/// `Γ₁ = min{γ₁ − 1/(2k₃² λmin(P)), κ − 1/2}`, `Γ₂ = min{γ₂, κ}`.
pub fn validate_rotational_gains(gains: &EsoGains) -> EsoGainReport {
    let kappa_ok = gains.kappa > 0.5;
    let diff = match DiffGains::new(gains.k1, gains.k2, gains.k3) {
        Ok(d) => d,
        Err(_) => return EsoGainReport::failed(kappa_ok),
    };
    let pair = match solve_lyapunov(&diff, &gains.q_mat) {
        Ok(p) => p,
        Err(_) => return EsoGainReport::failed(kappa_ok),
    };
    let (gamma1, gamma2) = gamma_constants(&pair, gains.k3, gains.p);
    let decay_margin = gamma1 - 1.0 / (2.0 * gains.k3 * gains.k3 * pair.p_min);
    EsoGainReport {
        hurwitz: true,
        kappa_ok,
        decay_ok: decay_margin > 0.0,
        decay_margin,
        gamma1,
        gamma2,
        big_gamma1: decay_margin.min(gains.kappa - 0.5),
        big_gamma2: gamma2.min(gains.kappa),
        pair: Some(pair),
    }
}

/// Composite Lyapunov value of the translational estimation error,
/// `ζᵀ P ζ + e_bᵀ e_b` with `ζ = [φ₁(ψ)ᵀ, (e_φ/m)ᵀ]ᵀ` and the block-augmented
/// `P` (whose eigenvalue extremes equal the 2×2 ones).
pub fn translational_lyapunov(
    errors: &EsoErrors,
    gains: &EsoGains,
    pair: &LyapunovPair,
    mass: f64,
) -> f64 {
    let psi = psi_shape(
        &errors.e_position,
        &errors.e_velocity,
        gains.kappa,
        gains.p.value(),
    );
    let z1 = phi1_raw(&psi, gains.p.value(), gains.k3);
    let z2 = errors.e_force / mass;
    let p = &pair.p_mat;
    p[(0, 0)] * z1.dot(&z1)
        + 2.0 * p[(0, 1)] * z1.dot(&z2)
        + p[(1, 1)] * z2.dot(&z2)
        + errors.e_position.dot(&errors.e_position)
}

/// Composite Morse-Lyapunov value of the rotational estimation error,
/// `ζᵀ P ζ + ⟨K, I − E_R⟩` with `ζ = [φ₁(ψ)ᵀ, (J⁻¹e_τ)ᵀ]ᵀ`.
pub fn rotational_lyapunov(
    errors: &EsoErrors,
    gains: &EsoGains,
    pair: &LyapunovPair,
    inertia: &Mat3,
) -> f64 {
    let e_r = morse_sk(&errors.attitude, &gains.morse);
    let psi = psi_shape(&e_r, &errors.e_angular, gains.kappa, gains.p.value());
    let z1 = phi1_raw(&psi, gains.p.value(), gains.k3);
    let z2 = inertia
        .try_inverse()
        .unwrap_or_else(Mat3::zeros)
        * errors.e_torque;
    let p = &pair.p_mat;
    p[(0, 0)] * z1.dot(&z1)
        + 2.0 * p[(0, 1)] * z1.dot(&z2)
        + p[(1, 1)] * z2.dot(&z2)
        + crate::lie::morse_value(&errors.attitude, &gains.morse)
}
