//! Deterministic coupled integration of plant + observers + tracking laws.
//!
//! One `run_scenario` call owns all of its state; the rejection flags choose
//! whether the disturbance estimates feed the control laws, while the
//! observers always run (their errors are what most scenarios measure).

use crate::scenario::{ConfigError, Integrator, Scenario, ThrustMode};
use adrc_core::controller::{
    attitude_adrc_torque, attitude_reference, attitude_tracking_lyapunov, thrust_decompose,
    thrust_norm, translational_adrc_force, translational_adrc_force_smoothed,
    translational_tracking_lyapunov, validate_ctrl_gains, AttitudeReference, CtrlError, CtrlState,
};
use adrc_core::ffts::{holder_scale, psi_shape, Mat2};
use adrc_core::lie::{exp_so3, morse_sk, principal_angle, Mat3, Pose, Rotation, Vec3};
use adrc_core::observer::{
    compute_eso_errors, rotational_eso_rhs, rotational_lyapunov, translational_eso_rhs,
    translational_lyapunov, validate_rotational_gains, validate_translational_gains, EsoGains,
    RotationalEsoRate, RotationalEsoState, TranslationalEsoRate, TranslationalEsoState,
};
use adrc_core::sim::{
    lgvi_attitude_increment, lgvi_step, plant_rhs, rkmk4_step, DeterministicRng, LieAlgebra,
    LieState, Measurement, NoiseSample, RigidBodyRate, RigidBodyState, VehicleParams,
};
use thiserror::Error;

/// Stencil step for differentiating the commanded attitude map (s).
const REF_DELTA: f64 = 1e-4;

/// Regularization of the fractional powers inside the commanded-attitude
/// map. The damping bracket of the force law amplifies velocity errors by
/// an unbounded factor as the position error crosses zero; realizing that
/// through a finite-bandwidth attitude loop sustains a micro limit cycle.
/// The smoothing caps the amplification in the frame construction only; the
/// applied force law stays exact, and both maps coincide at the origin and
/// away from it.
const REF_EPSILON: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("gain validation failed: {0}")]
    GainValidationFailed(String),
    #[error("state became non-finite at t = {t:.4} s")]
    NumericalBlowup { t: f64 },
    #[error("control law failed at start: {0}")]
    Control(#[from] CtrlError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("integrator failed at t = {t:.4} s: {message}")]
    Integrator { t: f64, message: String },
}

/// One sampled row of a run.
#[derive(Debug, Clone, Copy)]
pub struct Row {
    pub t: f64,
    pub position_err: Vec3,
    pub velocity_err: Vec3,
    /// Principal angle of the attitude tracking error.
    pub phi_q: f64,
    /// Norm of the angular-velocity tracking error.
    pub omega_err_norm: f64,
    pub e_position: Vec3,
    pub e_velocity: Vec3,
    pub e_force: Vec3,
    /// Principal angle of the attitude estimation error.
    pub phi_er: f64,
    pub e_angular: Vec3,
    pub e_torque: Vec3,
    pub thrust: f64,
    pub torque: Vec3,
    /// Composite tracking Lyapunov values; NaN when the true disturbance is
    /// not piecewise constant or a Lyapunov pair is unavailable.
    pub lyap_translational: f64,
    pub lyap_attitude: f64,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub name: String,
    pub rows: Vec<Row>,
    /// Worst orthonormality/determinant defect seen on the plant attitude and
    /// the observer's attitude estimate over the whole run.
    pub max_rotation_defect: f64,
}

impl RunRecord {
    /// Time series of one scalar error measure.
    pub fn series(&self, f: impl Fn(&Row) -> f64) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.t, f(r))).collect()
    }
}

#[derive(Clone)]
struct Coupled {
    plant: RigidBodyState,
    teso: TranslationalEsoState,
    reso: RotationalEsoState,
    psi_ai: Vec3,
}

struct CoupledRate {
    plant: RigidBodyRate,
    teso: TranslationalEsoRate,
    reso: RotationalEsoRate,
    dpsi: Vec3,
}

impl LieAlgebra for CoupledRate {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        let plant: Vec<(f64, &RigidBodyRate)> = terms.iter().map(|(c, r)| (*c, &r.plant)).collect();
        let teso: Vec<(f64, &TranslationalEsoRate)> =
            terms.iter().map(|(c, r)| (*c, &r.teso)).collect();
        let reso: Vec<(f64, &RotationalEsoRate)> =
            terms.iter().map(|(c, r)| (*c, &r.reso)).collect();
        let mut dpsi = Vec3::zeros();
        for (c, r) in terms {
            dpsi += *c * r.dpsi;
        }
        CoupledRate {
            plant: RigidBodyRate::combine(&plant),
            teso: TranslationalEsoRate::combine(&teso),
            reso: RotationalEsoRate::combine(&reso),
            dpsi,
        }
    }

    fn dexpinv(u: &Self, k: &Self) -> Self {
        CoupledRate {
            plant: RigidBodyRate::dexpinv(&u.plant, &k.plant),
            teso: TranslationalEsoRate::dexpinv(&u.teso, &k.teso),
            reso: RotationalEsoRate::dexpinv(&u.reso, &k.reso),
            dpsi: k.dpsi,
        }
    }
}

impl LieState for Coupled {
    type Algebra = CoupledRate;

    fn advance(&self, u: &CoupledRate) -> Self {
        Coupled {
            plant: self.plant.advance(&u.plant),
            teso: self.teso.advance(&u.teso),
            reso: self.reso.advance(&u.reso),
            psi_ai: self.psi_ai + u.dpsi,
        }
    }
}

/// Observer-side state advanced separately when the plant uses the
/// variational integrator.
#[derive(Clone)]
struct ObserverBlock {
    teso: TranslationalEsoState,
    reso: RotationalEsoState,
    psi_ai: Vec3,
}

struct ObserverBlockRate {
    teso: TranslationalEsoRate,
    reso: RotationalEsoRate,
    dpsi: Vec3,
}

impl LieAlgebra for ObserverBlockRate {
    fn combine(terms: &[(f64, &Self)]) -> Self {
        let teso: Vec<(f64, &TranslationalEsoRate)> =
            terms.iter().map(|(c, r)| (*c, &r.teso)).collect();
        let reso: Vec<(f64, &RotationalEsoRate)> =
            terms.iter().map(|(c, r)| (*c, &r.reso)).collect();
        let mut dpsi = Vec3::zeros();
        for (c, r) in terms {
            dpsi += *c * r.dpsi;
        }
        ObserverBlockRate {
            teso: TranslationalEsoRate::combine(&teso),
            reso: RotationalEsoRate::combine(&reso),
            dpsi,
        }
    }

    fn dexpinv(u: &Self, k: &Self) -> Self {
        ObserverBlockRate {
            teso: TranslationalEsoRate::dexpinv(&u.teso, &k.teso),
            reso: RotationalEsoRate::dexpinv(&u.reso, &k.reso),
            dpsi: k.dpsi,
        }
    }
}

impl LieState for ObserverBlock {
    type Algebra = ObserverBlockRate;

    fn advance(&self, u: &ObserverBlockRate) -> Self {
        ObserverBlock {
            teso: self.teso.advance(&u.teso),
            reso: self.reso.advance(&u.reso),
            psi_ai: self.psi_ai + u.dpsi,
        }
    }
}

struct ControlEval {
    thrust: f64,
    torque: Vec3,
    dpsi: Vec3,
    reference: AttitudeReference,
    attitude_err: Rotation,
    omega_err: Vec3,
    position_err: Vec3,
    velocity_err: Vec3,
}

struct Engine {
    sc: Scenario,
    params: VehicleParams,
    eso_t: EsoGains,
    eso_a: EsoGains,
    pair_t: Option<adrc_core::ffts::LyapunovPair>,
    pair_a: Option<adrc_core::ffts::LyapunovPair>,
}

impl Engine {
    fn new(sc: &Scenario) -> Result<Self, RunError> {
        sc.validate()?;
        let params = sc.vehicle()?;
        let mut eso_t = sc.eso_t;
        let mut eso_a = sc.eso_a;
        eso_t.q_mat = Mat2::identity() * sc.q_scale;
        eso_a.q_mat = Mat2::identity() * sc.q_scale;

        let rep_t = validate_translational_gains(&eso_t);
        let rep_a = validate_rotational_gains(&eso_a);
        let rep_c = validate_ctrl_gains(
            &sc.ctrl_t,
            &sc.ctrl_a,
            &rep_t,
            &rep_a,
            params.mass(),
            params.inertia(),
        );
        if !sc.override_gain_check && !(rep_t.passes() && rep_a.passes() && rep_c.passes()) {
            let mut reasons = Vec::new();
            if !rep_t.hurwitz {
                reasons.push("translational observer gains are not Hurwitz".to_string());
            }
            if !rep_t.kappa_ok {
                reasons.push(format!(
                    "translational observer kappa = {} is not > 1/2",
                    eso_t.kappa
                ));
            }
            if !rep_t.decay_ok {
                reasons.push("translational observer decay inequality fails".to_string());
            }
            if !rep_a.hurwitz {
                reasons.push("rotational observer gains are not Hurwitz".to_string());
            }
            if !rep_a.kappa_ok {
                reasons.push(format!(
                    "rotational observer kappa = {} is not > 1/2",
                    eso_a.kappa
                ));
            }
            if !rep_a.decay_ok {
                reasons.push("rotational observer decay inequality fails".to_string());
            }
            if !rep_c.t_damping_ok {
                reasons.push("force-law damping constraint fails".to_string());
            }
            if !rep_c.a_damping_ok {
                reasons.push("torque-law damping constraint fails".to_string());
            }
            if !rep_c.l_positive {
                reasons.push("shaping matrices must be positive diagonal".to_string());
            }
            return Err(RunError::GainValidationFailed(reasons.join("; ")));
        }

        Ok(Engine {
            sc: sc.clone(),
            params,
            eso_t,
            eso_a,
            pair_t: rep_t.pair,
            pair_a: rep_a.pair,
        })
    }

    fn control(
        &self,
        plant: &RigidBodyState,
        teso: &TranslationalEsoState,
        reso: &RotationalEsoState,
        psi_ai: &Vec3,
        t: f64,
        prev: Option<&AttitudeReference>,
    ) -> Result<ControlEval, CtrlError> {
        let sc = &self.sc;
        let (b_d, v_d, a_d) = sc.trajectory.at(t);
        let position_err = plant.pose.position - b_d;
        let velocity_err = plant.v - v_d;
        let force_est = if sc.reject_force {
            teso.force
        } else {
            Vec3::zeros()
        };
        let force_now = translational_adrc_force(
            &position_err,
            &velocity_err,
            &a_d,
            &force_est,
            &sc.ctrl_t,
            self.params.mass(),
        );

        // The commanded-attitude map is differentiated through a short
        // stencil. The tracking errors are held at their current values
        // across it: they are the slowly varying quantities of the closed
        // loop, while the reference terms and the disturbance-estimate drift
        // carry the fast, known motion of the commanded frame. Propagating
        // the absolute state against the moving reference instead injects
        // fake error rates; propagating it along the realized flow closes an
        // algebraic loop through the attitude with destabilizing gain.
        let m = self.params.mass();
        let thrust_now = match sc.thrust_mode {
            ThrustMode::Projection => thrust_decompose(&force_now, &plant.pose.rotation),
            ThrustMode::Norm => thrust_norm(&force_now),
        };
        let est_rate = if sc.reject_force {
            let e_b = plant.pose.position - teso.position;
            let e_v = plant.v - teso.velocity;
            let psi_t = psi_shape(&e_b, &e_v, self.eso_t.kappa, self.eso_t.p.value());
            m * self.eso_t.k2
                * adrc_core::ffts::phi2_raw(&psi_t, self.eso_t.p.value(), self.eso_t.k3)
        } else {
            Vec3::zeros()
        };
        let force_map = |s: f64| {
            let dt = s - t;
            let (_, _, ad) = sc.trajectory.at(s);
            translational_adrc_force_smoothed(
                &position_err,
                &velocity_err,
                &ad,
                &(force_est + dt * est_rate),
                &sc.ctrl_t,
                m,
                REF_EPSILON,
            )
        };
        let reference = match attitude_reference(force_map, &sc.heading, t, REF_DELTA, prev) {
            Ok(r) => r,
            // Hold the last commanded attitude through a degenerate instant.
            Err(e) => match prev {
                Some(p) => *p,
                None => return Err(e),
            },
        };
        let attitude_err = reference.rotation.transpose().compose(&plant.pose.rotation);
        let omega_err = plant.omega - attitude_err.rotate_back(&reference.omega);
        let torque_est = if sc.reject_torque {
            reso.torque
        } else {
            Vec3::zeros()
        };
        let ctrl_state = CtrlState {
            psi_integral: *psi_ai,
        };
        let (torque, dpsi) = attitude_adrc_torque(
            &attitude_err,
            &omega_err,
            &reference,
            &plant.omega,
            &torque_est,
            &ctrl_state,
            &sc.ctrl_a,
            self.params.inertia(),
        );
        Ok(ControlEval {
            thrust: thrust_now,
            torque,
            dpsi,
            reference,
            attitude_err,
            omega_err,
            position_err,
            velocity_err,
        })
    }

    fn row(&self, state: &Coupled, eval: &ControlEval, t: f64) -> Row {
        let (true_force, true_torque) = self.sc.disturbance.at(t);
        let errors = compute_eso_errors(
            &state.plant,
            &state.teso,
            &state.reso,
            &true_force,
            &true_torque,
        );
        let (lyap_t, lyap_a) = if self.sc.disturbance.is_piecewise_constant() {
            let vt = self.pair_t.map(|pair| {
                let observer_part =
                    translational_lyapunov(&errors, &self.eso_t, &pair, self.params.mass());
                translational_tracking_lyapunov(
                    &eval.position_err,
                    &eval.velocity_err,
                    observer_part,
                    &self.sc.ctrl_t,
                    self.params.mass(),
                )
            });
            let va = self.pair_a.map(|pair| {
                let observer_part =
                    rotational_lyapunov(&errors, &self.eso_a, &pair, self.params.inertia());
                attitude_tracking_lyapunov(
                    &eval.attitude_err,
                    &eval.omega_err,
                    &state.psi_ai,
                    observer_part,
                    &self.sc.ctrl_a,
                    self.params.inertia(),
                )
            });
            (vt.unwrap_or(f64::NAN), va.unwrap_or(f64::NAN))
        } else {
            (f64::NAN, f64::NAN)
        };
        Row {
            t,
            position_err: eval.position_err,
            velocity_err: eval.velocity_err,
            phi_q: principal_angle(&eval.attitude_err),
            omega_err_norm: eval.omega_err.norm(),
            e_position: errors.e_position,
            e_velocity: errors.e_velocity,
            e_force: errors.e_force,
            phi_er: principal_angle(&errors.attitude),
            e_angular: errors.e_angular,
            e_torque: errors.e_torque,
            thrust: eval.thrust,
            torque: eval.torque,
            lyap_translational: lyap_t,
            lyap_attitude: lyap_a,
        }
    }

    fn rk4_advance(
        &self,
        state: &Coupled,
        t: f64,
        h: f64,
        noise: Option<&NoiseSample>,
        prev: &AttitudeReference,
    ) -> Coupled {
        rkmk4_step(state, t, h, |time, s: &Coupled| {
            let eval = self
                .control(&s.plant, &s.teso, &s.reso, &s.psi_ai, time, Some(prev))
                .expect("control with fallback reference cannot fail");
            let (phi_d, tau_d) = self.sc.disturbance.at(time);
            let meas = match noise {
                Some(sample) => sample.apply(&s.plant),
                None => Measurement::exact(&s.plant),
            };
            CoupledRate {
                plant: plant_rhs(
                    &s.plant,
                    eval.thrust,
                    &eval.torque,
                    &phi_d,
                    &tau_d,
                    &self.params,
                ),
                teso: translational_eso_rhs(
                    &s.teso,
                    &meas.position,
                    &meas.velocity,
                    &meas.attitude,
                    eval.thrust,
                    &self.eso_t,
                    self.params.mass(),
                )
                .expect("positive observer gains"),
                reso: rotational_eso_rhs(
                    &s.reso,
                    &meas.attitude,
                    &meas.angular,
                    &eval.torque,
                    &self.eso_a,
                    self.params.inertia(),
                )
                .expect("positive observer gains"),
                dpsi: eval.dpsi,
            }
        })
    }

    fn lgvi_advance(
        &self,
        state: &Coupled,
        eval: &ControlEval,
        t: f64,
        h: f64,
        noise: Option<&NoiseSample>,
    ) -> Result<Coupled, RunError> {
        let (phi_d0, tau_d0) = self.sc.disturbance.at(t);
        let (phi_d1, tau_d1) = self.sc.disturbance.at(t + h);
        let increment = lgvi_attitude_increment(
            &state.plant,
            &eval.torque,
            &tau_d0,
            &self.params,
            h,
        )
        .map_err(|e| RunError::Integrator {
            t,
            message: e.to_string(),
        })?;
        let plant_next = lgvi_step(
            &state.plant,
            eval.thrust,
            &eval.torque,
            &phi_d0,
            &tau_d0,
            &phi_d1,
            &tau_d1,
            &self.params,
            h,
        )
        .map_err(|e| RunError::Integrator {
            t,
            message: e.to_string(),
        })?;

        // Observers and the control integral advance over the same step with
        // the control held and the plant outputs interpolated across the step
        // (linear in the vector channels, geodesic in attitude).
        let p0 = state.plant;
        let p1 = plant_next;
        let interp = |time: f64| -> Measurement {
            let s = ((time - t) / h).clamp(0.0, 1.0);
            let exact = Measurement {
                position: (1.0 - s) * p0.pose.position + s * p1.pose.position,
                velocity: (1.0 - s) * p0.v + s * p1.v,
                attitude: p0.pose.rotation.compose(&exp_so3(&(s * increment))),
                angular: (1.0 - s) * p0.omega + s * p1.omega,
            };
            match noise {
                Some(sample) => Measurement {
                    position: exact.position + sample.position,
                    velocity: exact.velocity + sample.velocity,
                    attitude: exact.attitude.compose(&exp_so3(&sample.attitude)),
                    angular: exact.angular + sample.angular,
                },
                None => exact,
            }
        };

        let block = ObserverBlock {
            teso: state.teso,
            reso: state.reso,
            psi_ai: state.psi_ai,
        };
        let ctrl_a = &self.sc.ctrl_a;
        let p_raw = ctrl_a.p.value();
        let l = Mat3::from_diagonal(&ctrl_a.l_diag);
        let reference = eval.reference;
        let next = rkmk4_step(&block, t, h, |time, b: &ObserverBlock| {
            let meas = interp(time);
            let attitude_err = reference.rotation.transpose().compose(&meas.attitude);
            let omega_err = meas.angular - attitude_err.rotate_back(&reference.omega);
            let s_k = morse_sk(&attitude_err, &ctrl_a.morse);
            let psi_a = psi_shape(&s_k, &omega_err, ctrl_a.kappa, p_raw);
            let dpsi = -(l * b.psi_ai) - l * holder_scale(&b.psi_ai, (1.0 - p_raw) / p_raw)
                + psi_a;
            ObserverBlockRate {
                teso: translational_eso_rhs(
                    &b.teso,
                    &meas.position,
                    &meas.velocity,
                    &meas.attitude,
                    eval.thrust,
                    &self.eso_t,
                    self.params.mass(),
                )
                .expect("positive observer gains"),
                reso: rotational_eso_rhs(
                    &b.reso,
                    &meas.attitude,
                    &meas.angular,
                    &eval.torque,
                    &self.eso_a,
                    self.params.inertia(),
                )
                .expect("positive observer gains"),
                dpsi,
            }
        });

        Ok(Coupled {
            plant: plant_next,
            teso: next.teso,
            reso: next.reso,
            psi_ai: next.psi_ai,
        })
    }
}

/// Runs one scenario to completion and returns the sampled record
/// (`floor(duration/h) + 1` rows including `t = 0`).
pub fn run_scenario(sc: &Scenario) -> Result<RunRecord, RunError> {
    let engine = Engine::new(sc)?;

    let plant = RigidBodyState {
        pose: Pose::new(exp_so3(&sc.initial.attitude), sc.initial.position),
        v: sc.initial.velocity,
        omega: sc.initial.omega,
    };
    let (phi_d0, tau_d0) = sc.disturbance.at(0.0);
    let mut state = Coupled {
        plant,
        teso: TranslationalEsoState::from_truth(&plant, &phi_d0),
        reso: RotationalEsoState::from_truth(&plant, &tau_d0),
        psi_ai: Vec3::zeros(),
    };

    let steps = (sc.duration / sc.h).floor() as usize;
    let mut rows = Vec::with_capacity(steps + 1);
    let mut rng = DeterministicRng::new(sc.seed);
    let quiet = sc.noise.is_quiet();
    let mut prev_ref: Option<AttitudeReference> = None;
    let mut max_defect: f64 = 0.0;

    for k in 0..=steps {
        let t = k as f64 * sc.h;
        max_defect = max_defect
            .max(state.plant.pose.rotation.defect())
            .max(state.reso.attitude.defect());
        let eval = engine
            .control(
                &state.plant,
                &state.teso,
                &state.reso,
                &state.psi_ai,
                t,
                prev_ref.as_ref(),
            )
            .map_err(RunError::Control)?;
        rows.push(engine.row(&state, &eval, t));
        prev_ref = Some(eval.reference);
        if k == steps {
            break;
        }

        let sample = if quiet {
            None
        } else {
            Some(NoiseSample::draw(&mut rng, &sc.noise, sc.h))
        };
        state = match sc.integrator {
            Integrator::Rk4 => engine.rk4_advance(
                &state,
                t,
                sc.h,
                sample.as_ref(),
                prev_ref.as_ref().expect("reference recorded above"),
            ),
            Integrator::Lgvi => {
                engine.lgvi_advance(&state, &eval, t, sc.h, sample.as_ref())?
            }
        };

        if !(state.plant.is_finite() && state.teso.is_finite() && state.reso.is_finite()) {
            return Err(RunError::NumericalBlowup { t: t + sc.h });
        }
    }

    Ok(RunRecord {
        name: sc.name.clone(),
        rows,
        max_rotation_defect: max_defect,
    })
}

/// Human-readable validation summary used by the CLI.
pub fn validation_report(sc: &Scenario) -> Result<(String, bool), RunError> {
    sc.validate()?;
    let params = sc.vehicle()?;
    let mut eso_t = sc.eso_t;
    let mut eso_a = sc.eso_a;
    eso_t.q_mat = Mat2::identity() * sc.q_scale;
    eso_a.q_mat = Mat2::identity() * sc.q_scale;
    let rep_t = validate_translational_gains(&eso_t);
    let rep_a = validate_rotational_gains(&eso_a);
    let rep_c = validate_ctrl_gains(
        &sc.ctrl_t,
        &sc.ctrl_a,
        &rep_t,
        &rep_a,
        params.mass(),
        params.inertia(),
    );
    let ok = rep_t.passes() && rep_a.passes() && rep_c.passes();
    let yesno = |b: bool| if b { "pass" } else { "FAIL" };
    let mut out = String::new();
    out.push_str(&format!(
        "translational observer: hurwitz {}, decay {} (margin {:.4}), kappa>1/2 {}\n",
        yesno(rep_t.hurwitz),
        yesno(rep_t.decay_ok),
        rep_t.decay_margin,
        yesno(rep_t.kappa_ok),
    ));
    out.push_str(&format!(
        "  gamma1 {:.4}, gamma2 {:.4}, Gamma1 {:.4}, Gamma2 {:.4}\n",
        rep_t.gamma1, rep_t.gamma2, rep_t.big_gamma1, rep_t.big_gamma2
    ));
    out.push_str(&format!(
        "rotational observer:    hurwitz {}, decay {} (margin {:.4}), kappa>1/2 {}\n",
        yesno(rep_a.hurwitz),
        yesno(rep_a.decay_ok),
        rep_a.decay_margin,
        yesno(rep_a.kappa_ok),
    ));
    out.push_str(&format!(
        "  gamma1 {:.4}, gamma2 {:.4}, Gamma1 {:.4}, Gamma2 {:.4}\n",
        rep_a.gamma1, rep_a.gamma2, rep_a.big_gamma1, rep_a.big_gamma2
    ));
    out.push_str(&format!(
        "force law damping:      {} (margin {:.4})\n",
        yesno(rep_c.t_damping_ok),
        rep_c.t_damping_margin
    ));
    out.push_str(&format!(
        "torque law damping:     {} (margin {:.4})\n",
        yesno(rep_c.a_damping_ok),
        rep_c.a_damping_margin
    ));
    out.push_str(&format!(
        "coupled force decay:    {} (margin {:.4}, needs observer Gamma1 > {:.4})\n",
        yesno(rep_c.t_coupled_ok),
        rep_c.t_coupled_margin,
        rep_c.t_required_decay
    ));
    out.push_str(&format!(
        "coupled torque decay:   {} (margin {:.4}, needs observer Gamma1 > {:.4})\n",
        yesno(rep_c.a_coupled_ok),
        rep_c.a_coupled_margin,
        rep_c.a_required_decay
    ));
    out.push_str(&format!(
        "tracking decay constants: Gamma_T ({:.4}, {:.4}), Gamma_A ({:.4}, {:.4})\n",
        rep_c.big_gamma_t1, rep_c.big_gamma_t2, rep_c.big_gamma_a1, rep_c.big_gamma_a2
    ));
    out.push_str(&format!(
        "hard gate: {}  (coupled inequalities are informational)\n",
        yesno(ok)
    ));
    Ok((out, ok))
}
