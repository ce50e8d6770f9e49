//! Rigid-body plant dynamics, fixed-step integrators (a Munthe-Kaas RK4 and a
//! variational Lie-group step), exogenous disturbance profiles, measurement
//! noise, and the analytic reference trajectories.
//!
//! Axes follow the NED-style convention used throughout the crate: `e3` points
//! down, gravity is `+g e3`, and thrust enters the translational dynamics as
//! `−f R e3`.

use crate::lie::{exp_so3, hat, vee_skew_part, Mat3, Pose, Rotation, Vec3};
use thiserror::Error;

/// Standard gravity (m/s²).
pub const GRAVITY: f64 = 9.81;

/// Inertial "down" axis.
pub fn e3() -> Vec3 {
    Vec3::new(0.0, 0.0, 1.0)
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("mass must be positive, got {0}")]
    BadMass(f64),
    #[error("inertia matrix must be symmetric positive definite")]
    BadInertia,
    #[error("implicit attitude step did not converge within {0} Newton iterations")]
    NewtonDivergence(usize),
    #[error("disturbance switch times must be strictly increasing")]
    BadSwitchTimes,
}

/// Full plant state: pose on SE(3), inertial translational velocity, body
/// angular velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidBodyState {
    pub pose: Pose,
    /// Inertial translational velocity (m/s).
    pub v: Vec3,
    /// Body angular velocity (rad/s).
    pub omega: Vec3,
}

impl RigidBodyState {
    pub fn at_rest(pose: Pose) -> Self {
        RigidBodyState {
            pose,
            v: Vec3::zeros(),
            omega: Vec3::zeros(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.pose.position.iter().all(|x| x.is_finite())
            && self.v.iter().all(|x| x.is_finite())
            && self.omega.iter().all(|x| x.is_finite())
            && self.pose.rotation.matrix().iter().all(|x| x.is_finite())
    }
}

/// Mass and inertia of the vehicle.
#[derive(Debug, Clone, Copy)]
pub struct VehicleParams {
    mass: f64,
    inertia: Mat3,
    inertia_inv: Mat3,
}

impl VehicleParams {
    pub fn new(mass: f64, inertia: Mat3) -> Result<Self, SimError> {
        if !(mass > 0.0) {
            return Err(SimError::BadMass(mass));
        }
        if (inertia - inertia.transpose()).norm() > 1e-12 {
            return Err(SimError::BadInertia);
        }
        let eig = nalgebra::SymmetricEigen::new(inertia);
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(SimError::BadInertia);
        }
        let inertia_inv = inertia.try_inverse().ok_or(SimError::BadInertia)?;
        Ok(VehicleParams {
            mass,
            inertia,
            inertia_inv,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn inertia(&self) -> &Mat3 {
        &self.inertia
    }

    pub fn inertia_inv(&self) -> &Mat3 {
        &self.inertia_inv
    }
}

// ---------------------------------------------------------------------------
// Lie-state integration machinery
// ---------------------------------------------------------------------------

/// Element of the Lie algebra of a product of vector spaces and SO(3) factors.
/// Vector components pass through [`LieAlgebra::dexpinv`] unchanged; rotation
/// components receive the truncated inverse-dexp correction
/// `k + ½ u×k + (1/12) u×(u×k)` (the sign fits the right-multiplication
/// update `R·exp(û)` driven by body rates), which is enough for fourth order.
pub trait LieAlgebra: Sized {
    /// Linear combination `Σ cᵢ vᵢ`.
    fn combine(terms: &[(f64, &Self)]) -> Self;
    /// Componentwise truncated `dexp⁻¹_u(k)`.
    fn dexpinv(u: &Self, k: &Self) -> Self;
}

/// State on a product manifold of vector spaces and SO(3) factors: vectors
/// advance by addition, rotations by right multiplication with the exponential.
pub trait LieState: Clone {
    type Algebra: LieAlgebra;
    /// `self ⊕ u` with `u` an already-scaled algebra element.
    fn advance(&self, u: &Self::Algebra) -> Self;
}

/// dexp⁻¹ correction for a single SO(3) factor advanced as `R·exp(û)`.
pub fn dexpinv_so3(u: &Vec3, k: &Vec3) -> Vec3 {
    k + 0.5 * u.cross(k) + (1.0 / 12.0) * u.cross(&u.cross(k))
}

/// One classical RK4 step carried out in the Lie algebra (Munthe-Kaas
/// scheme): all stage increments are applied through the exponential, so SO(3)
/// factors stay on the group to machine precision.
pub fn rkmk4_step<S: LieState>(
    state: &S,
    t: f64,
    h: f64,
    rhs: impl Fn(f64, &S) -> S::Algebra,
) -> S {
    let k1 = rhs(t, state);
    let u2 = S::Algebra::combine(&[(0.5 * h, &k1)]);
    let k2 = rhs(t + 0.5 * h, &state.advance(&u2));
    let k2t = S::Algebra::dexpinv(&u2, &k2);
    let u3 = S::Algebra::combine(&[(0.5 * h, &k2t)]);
    let k3 = rhs(t + 0.5 * h, &state.advance(&u3));
    let k3t = S::Algebra::dexpinv(&u3, &k3);
    let u4 = S::Algebra::combine(&[(h, &k3t)]);
    let k4 = rhs(t + h, &state.advance(&u4));
    let k4t = S::Algebra::dexpinv(&u4, &k4);
    let theta = S::Algebra::combine(&[
        (h / 6.0, &k1),
        (h / 3.0, &k2t),
        (h / 3.0, &k3t),
        (h / 6.0, &k4t),
    ]);
    state.advance(&theta)
}

/// Tangent data of [`RigidBodyState`]: `rot` is the body rate driving
/// `Ṙ = R·hat(rot)`.
#[derive(Debug, Clone, Copy)]
pub struct RigidBodyRate {
    pub db: Vec3,
    pub dv: Vec3,
    pub rot: Vec3,
    pub domega: Vec3,
}

impl LieAlgebra for RigidBodyRate {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        let mut out = RigidBodyRate {
            db: Vec3::zeros(),
            dv: Vec3::zeros(),
            rot: Vec3::zeros(),
            domega: Vec3::zeros(),
        };
        for (c, r) in terms {
            out.db += *c * r.db;
            out.dv += *c * r.dv;
            out.rot += *c * r.rot;
            out.domega += *c * r.domega;
        }
        out
    }

    fn dexpinv(u: &Self, k: &Self) -> Self {
        RigidBodyRate {
            db: k.db,
            dv: k.dv,
            rot: dexpinv_so3(&u.rot, &k.rot),
            domega: k.domega,
        }
    }
}

impl LieState for RigidBodyState {
    type Algebra = RigidBodyRate;

    fn advance(&self, u: &RigidBodyRate) -> Self {
        RigidBodyState {
            pose: Pose::new(
                self.pose.rotation.compose(&exp_so3(&u.rot)),
                self.pose.position + u.db,
            ),
            v: self.v + u.dv,
            omega: self.omega + u.domega,
        }
    }
}

// ---------------------------------------------------------------------------
// Plant dynamics
// ---------------------------------------------------------------------------

/// Continuous rigid-body dynamics under scalar thrust `f` along the body
/// `e3` axis, body control torque `τ`, and exogenous force/torque
/// disturbances:
/// `ḃ = v`, `m v̇ = m g e3 − f R e3 + φ_D`, `Ṙ = R Ω̂`,
/// `J Ω̇ = (J Ω) × Ω + τ + τ_D`.
pub fn plant_rhs(
    state: &RigidBodyState,
    thrust: f64,
    torque: &Vec3,
    force_disturbance: &Vec3,
    torque_disturbance: &Vec3,
    params: &VehicleParams,
) -> RigidBodyRate {
    let r = &state.pose.rotation;
    let m = params.mass();
    let dv = GRAVITY * e3() - (thrust / m) * r.rotate(&e3()) + force_disturbance / m;
    let j_omega = params.inertia() * state.omega;
    let domega = params.inertia_inv() * (j_omega.cross(&state.omega) + torque + torque_disturbance);
    RigidBodyRate {
        db: state.v,
        dv,
        rot: state.omega,
        domega,
    }
}

/// One RK4 step of an arbitrary rigid-body vector field, with rotation
/// increments applied through the exponential at every stage.
pub fn rk4_step(
    state: &RigidBodyState,
    t: f64,
    h: f64,
    rhs: impl Fn(f64, &RigidBodyState) -> RigidBodyRate,
) -> RigidBodyState {
    rkmk4_step(state, t, h, rhs)
}

// ---------------------------------------------------------------------------
// Variational Lie-group step
// ---------------------------------------------------------------------------

/// Nonstandard moment tensor `J_d = ½ tr(J) I − J` used by the discrete
/// attitude update.
pub fn nonstandard_inertia(inertia: &Mat3) -> Mat3 {
    Mat3::identity() * (0.5 * inertia.trace()) - inertia
}

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITERS: usize = 50;

/// Solves the implicit attitude relation `vee(F J_d − J_d Fᵀ) = ℓ` for
/// `F = exp(ĝ)` by Newton iteration on `g`.
///
/// Using Rodrigues' formula the residual reduces to
/// `s(θ) J g + c(θ) (J_d g) × g − ℓ` with `s = sinθ/θ`, `c = (1−cosθ)/θ²`,
/// which avoids forming any matrix exponentials.
fn solve_attitude_step(ell: &Vec3, inertia: &Mat3, j_d: &Mat3) -> Result<Vec3, SimError> {
    let residual = |g: &Vec3| -> Vec3 {
        let theta = g.norm();
        let (s, c) = if theta < 1e-8 {
            (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
        } else {
            (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
        };
        s * (inertia * g) + c * (j_d * g).cross(g) - ell
    };

    // For small steps the equation is dominated by J g ≈ ℓ.
    let mut g = inertia
        .try_inverse()
        .ok_or(SimError::BadInertia)?
        * ell;
    for _ in 0..NEWTON_MAX_ITERS {
        let r = residual(&g);
        if r.norm() < NEWTON_TOL {
            return Ok(g);
        }
        // Numerical Jacobian: three central differences are plenty accurate
        // at this scale and keep the residual the single source of truth.
        let mut jac = Mat3::zeros();
        let step = 1e-7 * (1.0 + g.norm());
        for axis in 0..3 {
            let mut d = Vec3::zeros();
            d[axis] = step;
            let col = (residual(&(g + d)) - residual(&(g - d))) / (2.0 * step);
            jac.set_column(axis, &col);
        }
        let delta = jac
            .lu()
            .solve(&r)
            .ok_or(SimError::NewtonDivergence(NEWTON_MAX_ITERS))?;
        g -= delta;
    }
    let r = residual(&g);
    if r.norm() < NEWTON_TOL {
        Ok(g)
    } else {
        Err(SimError::NewtonDivergence(NEWTON_MAX_ITERS))
    }
}

/// One step of the structure-preserving variational integrator.
///
/// Attitude: `R⁺ = R F` with `F = exp(ĝ)` solving
/// `h (J Ω + (h/2) M)^× = F J_d − J_d Fᵀ`; momentum by the trapezoidal
/// discrete update `J Ω⁺ = Fᵀ (J Ω + (h/2) M) + (h/2) M⁺`; translation by a
/// leapfrog on `(b, v)`. Control inputs are held over the step; the
/// disturbances at the end of the step are passed separately so smooth
/// profiles keep their second-order accuracy.
#[allow(clippy::too_many_arguments)]
pub fn lgvi_step(
    state: &RigidBodyState,
    thrust: f64,
    torque: &Vec3,
    force_disturbance: &Vec3,
    torque_disturbance: &Vec3,
    force_disturbance_next: &Vec3,
    torque_disturbance_next: &Vec3,
    params: &VehicleParams,
    h: f64,
) -> Result<RigidBodyState, SimError> {
    let m = params.mass();
    let inertia = params.inertia();
    let j_d = nonstandard_inertia(inertia);

    let moment_k = torque + torque_disturbance;
    let ell = h * (inertia * state.omega + (h / 2.0) * moment_k);
    let g = solve_attitude_step(&ell, inertia, &j_d)?;
    let f_step = exp_so3(&g);
    let rotation_next = state.pose.rotation.compose(&f_step);

    let moment_next = torque + torque_disturbance_next;
    let j_omega_next =
        f_step.rotate_back(&(inertia * state.omega + (h / 2.0) * moment_k)) + (h / 2.0) * moment_next;
    let omega_next = params.inertia_inv() * j_omega_next;

    let force_k =
        m * GRAVITY * e3() - thrust * state.pose.rotation.rotate(&e3()) + force_disturbance;
    let position_next = state.pose.position + h * state.v + (h * h / (2.0 * m)) * force_k;
    let force_next = m * GRAVITY * e3() - thrust * rotation_next.rotate(&e3()) + force_disturbance_next;
    let v_next = state.v + (h / (2.0 * m)) * (force_k + force_next);

    Ok(RigidBodyState {
        pose: Pose::new(rotation_next, position_next),
        v: v_next,
        omega: omega_next,
    })
}

/// Relative attitude increment `g` with `R⁺ = R exp(ĝ)` for the last
/// variational step, exposed for measurement interpolation across a step.
pub fn lgvi_attitude_increment(
    state: &RigidBodyState,
    torque: &Vec3,
    torque_disturbance: &Vec3,
    params: &VehicleParams,
    h: f64,
) -> Result<Vec3, SimError> {
    let inertia = params.inertia();
    let j_d = nonstandard_inertia(inertia);
    let moment_k = torque + torque_disturbance;
    let ell = h * (inertia * state.omega + (h / 2.0) * moment_k);
    solve_attitude_step(&ell, inertia, &j_d)
}

// ---------------------------------------------------------------------------
// Disturbance profiles
// ---------------------------------------------------------------------------

/// Piecewise-constant signal: `initial` until the first switch time, then the
/// associated level, and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    pub initial: Vec3,
    /// `(switch time, level from that time on)`, strictly increasing in time.
    pub steps: Vec<(f64, Vec3)>,
}

impl PiecewiseConstant {
    pub fn constant(level: Vec3) -> Self {
        PiecewiseConstant {
            initial: level,
            steps: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for w in self.steps.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(SimError::BadSwitchTimes);
            }
        }
        Ok(())
    }

    pub fn at(&self, t: f64) -> Vec3 {
        let mut level = self.initial;
        for (switch, value) in &self.steps {
            if t >= *switch {
                level = *value;
            } else {
                break;
            }
        }
        level
    }
}

/// Sum of a constant offset and sinusoidal terms `amp·sin(freq·t)` (per-axis
/// amplitudes, shared angular frequency per term).
#[derive(Debug, Clone, PartialEq)]
pub struct SinusoidSum {
    pub offset: Vec3,
    pub terms: Vec<(Vec3, f64)>,
}

impl SinusoidSum {
    pub fn at(&self, t: f64) -> Vec3 {
        let mut out = self.offset;
        for (amp, freq) in &self.terms {
            out += amp * (freq * t).sin();
        }
        out
    }
}

/// Exogenous disturbance force/torque profile.
#[derive(Debug, Clone, PartialEq)]
pub enum DisturbanceModel {
    Zero,
    Step {
        force: PiecewiseConstant,
        torque: PiecewiseConstant,
    },
    Sinusoidal {
        force: SinusoidSum,
        torque: SinusoidSum,
    },
}

impl DisturbanceModel {
    /// `(φ_D, τ_D)` at time `t`.
    pub fn at(&self, t: f64) -> (Vec3, Vec3) {
        match self {
            DisturbanceModel::Zero => (Vec3::zeros(), Vec3::zeros()),
            DisturbanceModel::Step { force, torque } => (force.at(t), torque.at(t)),
            DisturbanceModel::Sinusoidal { force, torque } => (force.at(t), torque.at(t)),
        }
    }

    /// True when the profile is constant between switch times (so composite
    /// Lyapunov values are meaningful sample to sample).
    pub fn is_piecewise_constant(&self) -> bool {
        !matches!(self, DisturbanceModel::Sinusoidal { .. })
    }
}

/// Convenience alias for [`DisturbanceModel::at`].
pub fn disturbance_at(model: &DisturbanceModel, t: f64) -> (Vec3, Vec3) {
    model.at(t)
}

// ---------------------------------------------------------------------------
// Measurement noise
// ---------------------------------------------------------------------------

/// Noise intensities as power spectral densities; discretized per sample with
/// variance `PSD/h` (band-limited white-noise convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub psd_position: f64,
    pub psd_velocity: f64,
    pub psd_attitude: f64,
    pub psd_angular: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn quiet(seed: u64) -> Self {
        NoiseModel {
            psd_position: 0.0,
            psd_velocity: 0.0,
            psd_attitude: 0.0,
            psd_angular: 0.0,
            seed,
        }
    }

    pub fn is_quiet(&self) -> bool {
        self.psd_position == 0.0
            && self.psd_velocity == 0.0
            && self.psd_attitude == 0.0
            && self.psd_angular == 0.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        NoiseModel {
            psd_position: self.psd_position * factor,
            psd_velocity: self.psd_velocity * factor,
            psd_attitude: self.psd_attitude * factor,
            psd_angular: self.psd_angular * factor,
            seed: self.seed,
        }
    }
}

/// SplitMix64: tiny, seedable, and stable across platforms, so identical
/// seeds give bit-identical runs.
#[derive(Debug, Clone)]
pub struct DeterministicRng {
    state: u64,
}

impl DeterministicRng {
    pub fn new(seed: u64) -> Self {
        DeterministicRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `(0, 1]` (open at zero so logarithms are safe).
    pub fn uniform(&mut self) -> f64 {
        (((self.next_u64() >> 11) as f64) + 1.0) / 9007199254740992.0
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn normal_vec(&mut self, sigma: f64) -> Vec3 {
        Vec3::new(
            sigma * self.normal(),
            sigma * self.normal(),
            sigma * self.normal(),
        )
    }
}

/// Measured plant outputs after additive noise on the vector channels and a
/// multiplicative exponential perturbation on the attitude.
#[derive(Debug, Clone, Copy)]
pub struct Measurement {
    pub position: Vec3,
    pub velocity: Vec3,
    pub attitude: Rotation,
    pub angular: Vec3,
}

impl Measurement {
    pub fn exact(state: &RigidBodyState) -> Self {
        Measurement {
            position: state.pose.position,
            velocity: state.v,
            attitude: state.pose.rotation,
            angular: state.omega,
        }
    }
}

/// Per-sample noise vectors, held constant across integrator stages within a
/// step. Draw order is fixed (position, velocity, attitude, angular) so runs
/// are reproducible.
#[derive(Debug, Clone, Copy)]
pub struct NoiseSample {
    pub position: Vec3,
    pub velocity: Vec3,
    pub attitude: Vec3,
    pub angular: Vec3,
}

impl NoiseSample {
    pub fn zero() -> Self {
        NoiseSample {
            position: Vec3::zeros(),
            velocity: Vec3::zeros(),
            attitude: Vec3::zeros(),
            angular: Vec3::zeros(),
        }
    }

    pub fn draw(rng: &mut DeterministicRng, noise: &NoiseModel, h: f64) -> Self {
        let sigma = |psd: f64| (psd / h).sqrt();
        NoiseSample {
            position: rng.normal_vec(sigma(noise.psd_position)),
            velocity: rng.normal_vec(sigma(noise.psd_velocity)),
            attitude: rng.normal_vec(sigma(noise.psd_attitude)),
            angular: rng.normal_vec(sigma(noise.psd_angular)),
        }
    }

    pub fn apply(&self, state: &RigidBodyState) -> Measurement {
        Measurement {
            position: state.pose.position + self.position,
            velocity: state.v + self.velocity,
            attitude: state.pose.rotation.compose(&exp_so3(&self.attitude)),
            angular: state.omega + self.angular,
        }
    }
}

/// Noisy measurement of `state` using a freshly drawn sample.
pub fn apply_noise(
    state: &RigidBodyState,
    rng: &mut DeterministicRng,
    noise: &NoiseModel,
    h: f64,
) -> Measurement {
    NoiseSample::draw(rng, noise, h).apply(state)
}

// ---------------------------------------------------------------------------
// Reference trajectories
// ---------------------------------------------------------------------------

/// Analytic reference trajectories for the benchmark scenarios; altitude is
/// negative-z (down-positive axes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryRef {
    /// Fixed hover point at 3 m altitude.
    Hover,
    /// 10 m lateral swing at 0.05 Hz.
    SlowSwing,
    /// 5 m lateral swing at 0.25 Hz.
    FastSwing,
    /// 10 m circle at 0.25 Hz; the centripetal acceleration exceeds gravity.
    HighPitch,
    /// Helix-like climb used by the variational closed-loop scenario.
    LgviTrack,
}

impl TrajectoryRef {
    /// `(b_d, v_d, a_d)` at time `t`, with exact derivatives.
    pub fn at(&self, t: f64) -> (Vec3, Vec3, Vec3) {
        use std::f64::consts::PI;
        match self {
            TrajectoryRef::Hover => (Vec3::new(0.0, 0.0, -3.0), Vec3::zeros(), Vec3::zeros()),
            TrajectoryRef::SlowSwing => {
                let w = 0.1 * PI;
                (
                    Vec3::new(10.0 * (w * t).sin(), 0.0, -3.0),
                    Vec3::new(10.0 * w * (w * t).cos(), 0.0, 0.0),
                    Vec3::new(-10.0 * w * w * (w * t).sin(), 0.0, 0.0),
                )
            }
            TrajectoryRef::FastSwing => {
                let w = 0.5 * PI;
                (
                    Vec3::new(5.0 * (w * t).sin(), 0.0, -3.0),
                    Vec3::new(5.0 * w * (w * t).cos(), 0.0, 0.0),
                    Vec3::new(-5.0 * w * w * (w * t).sin(), 0.0, 0.0),
                )
            }
            TrajectoryRef::HighPitch => {
                let w = 0.5 * PI;
                (
                    Vec3::new(10.0 * (w * t).sin(), 10.0 * (w * t).cos(), -3.0),
                    Vec3::new(10.0 * w * (w * t).cos(), -10.0 * w * (w * t).sin(), 0.0),
                    Vec3::new(
                        -10.0 * w * w * (w * t).sin(),
                        -10.0 * w * w * (w * t).cos(),
                        0.0,
                    ),
                )
            }
            TrajectoryRef::LgviTrack => {
                let w = PI;
                (
                    Vec3::new(2.0 * (w * t).sin(), 2.0 * t, 2.0 * (w * t).sin()),
                    Vec3::new(2.0 * w * (w * t).cos(), 2.0, 2.0 * w * (w * t).cos()),
                    Vec3::new(-2.0 * w * w * (w * t).sin(), 0.0, -2.0 * w * w * (w * t).sin()),
                )
            }
        }
    }
}

/// Convenience alias for [`TrajectoryRef::at`].
pub fn reference_at(traj: &TrajectoryRef, t: f64) -> (Vec3, Vec3, Vec3) {
    traj.at(t)
}

/// Rotational kinetic energy `½ Ωᵀ J Ω`.
pub fn rotational_energy(state: &RigidBodyState, params: &VehicleParams) -> f64 {
    0.5 * state.omega.dot(&(params.inertia() * state.omega))
}

/// Skew part of `RᵀṘ` expressed as a vector; used by consistency checks.
pub fn body_rate_from_matrices(r: &Rotation, r_dot: &Mat3) -> Vec3 {
    vee_skew_part(&(r.matrix().transpose() * r_dot))
}

/// Hat-map re-export point for downstream crates that only pull in `sim`.
pub fn skew(v: &Vec3) -> Mat3 {
    hat(v)
}
