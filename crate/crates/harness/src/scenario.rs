//! Scenario definitions and the line-oriented `section.key = value` config
//! format. Every default equals a benchmark value, so an empty config file
//! reproduces the closed-loop tracking run; the observer-benchmark presets
//! are available both programmatically and through config keys.

use adrc_core::controller::{AttitudeCtrlGains, TranslationalCtrlGains};
use adrc_core::ffts::HolderExponent;
use adrc_core::lie::{Mat3, MorseGain, Vec3};
use adrc_core::observer::EsoGains;
use adrc_core::sim::{
    DisturbanceModel, NoiseModel, PiecewiseConstant, SinusoidSum, TrajectoryRef, VehicleParams,
};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Rk4,
    Lgvi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThrustMode {
    /// `f = φᵀ R e3`: project the commanded force onto the thrust axis.
    Projection,
    /// `f = ‖φ‖`: commit the full force magnitude regardless of attitude.
    Norm,
}

#[derive(Debug, Clone, Copy)]
pub struct InitialState {
    pub position: Vec3,
    pub velocity: Vec3,
    /// Exponential coordinates of the initial attitude.
    pub attitude: Vec3,
    pub omega: Vec3,
}

/// A complete experiment description.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub trajectory: TrajectoryRef,
    pub disturbance: DisturbanceModel,
    pub noise: NoiseModel,
    pub mass: f64,
    pub inertia_diag: Vec3,
    pub eso_t: EsoGains,
    pub eso_a: EsoGains,
    pub ctrl_t: TranslationalCtrlGains,
    pub ctrl_a: AttitudeCtrlGains,
    pub reject_force: bool,
    pub reject_torque: bool,
    pub integrator: Integrator,
    pub h: f64,
    pub duration: f64,
    pub seed: u64,
    pub override_gain_check: bool,
    pub thrust_mode: ThrustMode,
    pub heading: Vec3,
    pub initial: InitialState,
    /// Scales the identity right-hand side of both observer Lyapunov
    /// equations; affects constraint margins and the recorded Lyapunov
    /// columns, not the control laws themselves.
    pub q_scale: f64,
}

fn default_p() -> HolderExponent {
    HolderExponent::new(1.2).expect("default exponent")
}

fn default_morse() -> MorseGain {
    MorseGain::new(1.2, 1.1, 1.0).expect("default attitude-potential gains")
}

impl Scenario {
    /// Closed-loop tracking benchmark: variational integrator, sinusoidal
    /// disturbances, both rejection channels enabled.
    pub fn closed_loop_benchmark() -> Self {
        let p = default_p();
        Scenario {
            name: "adrc_both".to_string(),
            trajectory: TrajectoryRef::LgviTrack,
            disturbance: DisturbanceModel::Sinusoidal {
                force: SinusoidSum {
                    offset: Vec3::new(50.0, 50.0, 20.0),
                    terms: vec![
                        (Vec3::new(6.0, 3.0, 0.0), PI / 2.0),
                        (Vec3::new(0.5, 0.2, 0.0), PI),
                    ],
                },
                torque: SinusoidSum {
                    offset: Vec3::new(5.0, 3.0, -3.0),
                    terms: vec![
                        (Vec3::new(0.5, 1.0, 0.0), PI / 2.0),
                        (Vec3::new(0.1, 0.05, 0.0), PI),
                    ],
                },
            },
            noise: NoiseModel::quiet(1),
            mass: 4.34,
            inertia_diag: Vec3::new(0.0820, 0.0845, 0.1377),
            eso_t: EsoGains::new(5.0, 5.0, 3.0, 2.0, p, default_morse()),
            eso_a: EsoGains::new(5.0, 6.0, 3.0, 1.5, p, default_morse()),
            ctrl_t: TranslationalCtrlGains {
                k_d: 4.0,
                k_p: 2.0,
                kappa: 2.0,
                l_diag: Vec3::new(1.0, 1.0, 1.0),
                p,
            },
            ctrl_a: AttitudeCtrlGains {
                k_d: 3.0,
                k_p: 3.0,
                k_i: 0.1,
                kappa: 2.0,
                l_diag: Vec3::new(0.5, 0.5, 0.5),
                morse: default_morse(),
                p,
            },
            reject_force: true,
            reject_torque: true,
            integrator: Integrator::Lgvi,
            h: 0.005,
            duration: 5.0,
            seed: 1,
            override_gain_check: false,
            thrust_mode: ThrustMode::Projection,
            heading: Vec3::new(1.0, 0.0, 0.0),
            initial: InitialState {
                position: Vec3::new(0.0, 0.0, 3.0),
                velocity: Vec3::new(2.0 * PI, 0.0, 0.0),
                attitude: Vec3::zeros(),
                omega: Vec3::zeros(),
            },
            q_scale: 1.0,
        }
    }

    /// Observer benchmark: step disturbances, no rejection, fourth-order
    /// integrator. The observer κ gains replicate the published comparison
    /// runs and deliberately violate the κ > 1/2 constraint, so the scenario
    /// carries the override flag.
    pub fn observer_benchmark(trajectory: TrajectoryRef, noisy: bool) -> Self {
        let p = default_p();
        let mut scenario = Scenario::closed_loop_benchmark();
        scenario.name = format!(
            "observer_{}_{}",
            trajectory_key(&trajectory),
            if noisy { "noisy" } else { "clean" }
        );
        scenario.trajectory = trajectory;
        scenario.disturbance = DisturbanceModel::Step {
            force: PiecewiseConstant {
                initial: Vec3::new(5.0, 2.0, 0.0),
                steps: vec![(10.0, Vec3::new(9.0, 5.0, 0.0))],
            },
            torque: PiecewiseConstant {
                initial: Vec3::new(2.0, 0.0, 1.0),
                steps: vec![(15.0, Vec3::new(4.0, 0.0, 1.0))],
            },
        };
        scenario.noise = if noisy {
            NoiseModel {
                psd_position: 3e-8,
                psd_velocity: 3e-7,
                psd_attitude: 3e-8,
                psd_angular: 3e-7,
                seed: 1,
            }
        } else {
            NoiseModel::quiet(1)
        };
        scenario.eso_t = EsoGains::new(3.0, 2.0, 2.0, 0.1, p, default_morse());
        scenario.eso_a = EsoGains::new(5.0, 4.0, 2.0, 0.3, p, default_morse());
        scenario.ctrl_t = TranslationalCtrlGains {
            k_d: 16.0,
            k_p: 5.0,
            kappa: 2.0,
            l_diag: Vec3::new(1.0, 1.0, 1.0),
            p,
        };
        scenario.ctrl_a = AttitudeCtrlGains {
            k_d: 6.0,
            k_p: 12.0,
            k_i: 2.0,
            kappa: 2.0,
            l_diag: Vec3::new(1.0, 1.0, 1.0),
            morse: default_morse(),
            p,
        };
        scenario.reject_force = false;
        scenario.reject_torque = false;
        scenario.integrator = Integrator::Rk4;
        scenario.h = 1e-3;
        scenario.duration = 25.0;
        scenario.override_gain_check = true;
        scenario.initial = InitialState {
            position: Vec3::new(0.01, 0.0, 0.0),
            velocity: Vec3::new(5.0 * PI, 0.0, 0.0),
            attitude: Vec3::zeros(),
            omega: Vec3::zeros(),
        };
        scenario
    }

    pub fn vehicle(&self) -> Result<VehicleParams, ConfigError> {
        VehicleParams::new(self.mass, Mat3::from_diagonal(&self.inertia_diag))
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.h > 0.0) {
            return Err(ConfigError::Invalid("step size must be positive".into()));
        }
        if self.duration < self.h {
            return Err(ConfigError::Invalid(
                "duration must be at least one step".into(),
            ));
        }
        self.vehicle()?;
        if let DisturbanceModel::Step { force, torque } = &self.disturbance {
            force
                .validate()
                .and_then(|_| torque.validate())
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        Ok(())
    }
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario::closed_loop_benchmark()
    }
}

pub fn trajectory_key(t: &TrajectoryRef) -> &'static str {
    match t {
        TrajectoryRef::Hover => "hover",
        TrajectoryRef::SlowSwing => "slow_swing",
        TrajectoryRef::FastSwing => "fast_swing",
        TrajectoryRef::HighPitch => "high_pitch",
        TrajectoryRef::LgviTrack => "lgvi_track",
    }
}

// -- config parsing ----------------------------------------------------------

#[derive(Debug, Clone)]
struct RawValue {
    line: usize,
    text: String,
}

fn parse_lines(text: &str) -> Result<BTreeMap<String, RawValue>, ConfigError> {
    let mut out = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Malformed {
            line,
            text: trimmed.to_string(),
        })?;
        out.insert(
            key.trim().to_string(),
            RawValue {
                line,
                text: value.trim().to_string(),
            },
        );
    }
    Ok(out)
}

struct Fields {
    map: BTreeMap<String, RawValue>,
    consumed: Vec<String>,
}

impl Fields {
    fn take(&mut self, key: &str) -> Option<RawValue> {
        let v = self.map.get(key).cloned();
        if v.is_some() {
            self.consumed.push(key.to_string());
        }
        v
    }

    fn scalar(&mut self, key: &str, into: &mut f64) -> Result<(), ConfigError> {
        if let Some(raw) = self.take(key) {
            *into = raw.text.parse::<f64>().map_err(|e| ConfigError::BadValue {
                line: raw.line,
                key: key.to_string(),
                reason: e.to_string(),
            })?;
        }
        Ok(())
    }

    fn integer(&mut self, key: &str, into: &mut u64) -> Result<(), ConfigError> {
        if let Some(raw) = self.take(key) {
            *into = raw.text.parse::<u64>().map_err(|e| ConfigError::BadValue {
                line: raw.line,
                key: key.to_string(),
                reason: e.to_string(),
            })?;
        }
        Ok(())
    }

    fn boolean(&mut self, key: &str, into: &mut bool) -> Result<(), ConfigError> {
        if let Some(raw) = self.take(key) {
            *into = match raw.text.as_str() {
                "true" | "on" | "1" => true,
                "false" | "off" | "0" => false,
                other => {
                    return Err(ConfigError::BadValue {
                        line: raw.line,
                        key: key.to_string(),
                        reason: format!("expected true/false, got `{other}`"),
                    })
                }
            };
        }
        Ok(())
    }

    fn vector(&mut self, key: &str, into: &mut Vec3) -> Result<(), ConfigError> {
        if let Some(raw) = self.take(key) {
            *into = parse_vec3(&raw).map_err(|reason| ConfigError::BadValue {
                line: raw.line,
                key: key.to_string(),
                reason,
            })?;
        }
        Ok(())
    }
}

fn parse_vec3(raw: &RawValue) -> Result<Vec3, String> {
    let inner = raw
        .text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| "expected `[x, y, z]`".to_string())?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected 3 components, got {}", parts.len()));
    }
    let mut v = Vec3::zeros();
    for (i, p) in parts.iter().enumerate() {
        v[i] = p.parse::<f64>().map_err(|e| e.to_string())?;
    }
    Ok(v)
}

/// Parses a scenario config, starting from the closed-loop benchmark defaults
/// and overriding whatever keys appear.
pub fn parse_scenario(text: &str) -> Result<Scenario, ConfigError> {
    let map = parse_lines(text)?;
    let mut fields = Fields {
        map,
        consumed: Vec::new(),
    };
    let mut sc = Scenario::closed_loop_benchmark();
    sc.name = "scenario".to_string();

    if let Some(raw) = fields.take("run.integrator") {
        sc.integrator = match raw.text.as_str() {
            "rk4" => Integrator::Rk4,
            "lgvi" => Integrator::Lgvi,
            other => {
                return Err(ConfigError::BadValue {
                    line: raw.line,
                    key: "run.integrator".into(),
                    reason: format!("expected rk4|lgvi, got `{other}`"),
                })
            }
        };
    }
    if let Some(raw) = fields.take("run.thrust_mode") {
        sc.thrust_mode = match raw.text.as_str() {
            "projection" => ThrustMode::Projection,
            "norm" => ThrustMode::Norm,
            other => {
                return Err(ConfigError::BadValue {
                    line: raw.line,
                    key: "run.thrust_mode".into(),
                    reason: format!("expected projection|norm, got `{other}`"),
                })
            }
        };
    }
    if let Some(raw) = fields.take("run.name") {
        sc.name = raw.text.clone();
    }
    fields.scalar("run.h", &mut sc.h)?;
    fields.scalar("run.duration", &mut sc.duration)?;
    fields.integer("run.seed", &mut sc.seed)?;
    fields.boolean("run.override_gain_check", &mut sc.override_gain_check)?;
    fields.boolean("run.reject_force", &mut sc.reject_force)?;
    fields.boolean("run.reject_torque", &mut sc.reject_torque)?;

    if let Some(raw) = fields.take("trajectory.kind") {
        sc.trajectory = match raw.text.as_str() {
            "hover" => TrajectoryRef::Hover,
            "slow_swing" => TrajectoryRef::SlowSwing,
            "fast_swing" => TrajectoryRef::FastSwing,
            "high_pitch" => TrajectoryRef::HighPitch,
            "lgvi_track" => TrajectoryRef::LgviTrack,
            other => {
                return Err(ConfigError::BadValue {
                    line: raw.line,
                    key: "trajectory.kind".into(),
                    reason: format!("unknown trajectory `{other}`"),
                })
            }
        };
    }

    parse_disturbance(&mut fields, &mut sc)?;

    fields.scalar("vehicle.mass", &mut sc.mass)?;
    fields.vector("vehicle.inertia", &mut sc.inertia_diag)?;

    fields.scalar("noise.psd_position", &mut sc.noise.psd_position)?;
    fields.scalar("noise.psd_velocity", &mut sc.noise.psd_velocity)?;
    fields.scalar("noise.psd_attitude", &mut sc.noise.psd_attitude)?;
    fields.scalar("noise.psd_angular", &mut sc.noise.psd_angular)?;

    // shared Hölder exponent
    let mut p_raw = sc.ctrl_t.p.value();
    fields.scalar("gains.p", &mut p_raw)?;
    let p = HolderExponent::new(p_raw)
        .map_err(|e| ConfigError::Invalid(format!("gains.p: {e}")))?;
    sc.eso_t.p = p;
    sc.eso_a.p = p;
    sc.ctrl_t.p = p;
    sc.ctrl_a.p = p;
    fields.scalar("gains.q_scale", &mut sc.q_scale)?;

    fields.scalar("eso_t.k1", &mut sc.eso_t.k1)?;
    fields.scalar("eso_t.k2", &mut sc.eso_t.k2)?;
    fields.scalar("eso_t.k3", &mut sc.eso_t.k3)?;
    fields.scalar("eso_t.kappa", &mut sc.eso_t.kappa)?;
    fields.scalar("eso_a.k1", &mut sc.eso_a.k1)?;
    fields.scalar("eso_a.k2", &mut sc.eso_a.k2)?;
    fields.scalar("eso_a.k3", &mut sc.eso_a.k3)?;
    fields.scalar("eso_a.kappa", &mut sc.eso_a.kappa)?;
    let mut eso_morse = Vec3::new(1.2, 1.1, 1.0);
    fields.vector("eso_a.morse", &mut eso_morse)?;
    sc.eso_a.morse = MorseGain::new(eso_morse.x, eso_morse.y, eso_morse.z)
        .map_err(|e| ConfigError::Invalid(format!("eso_a.morse: {e}")))?;

    fields.scalar("ctrl_t.kd", &mut sc.ctrl_t.k_d)?;
    fields.scalar("ctrl_t.kp", &mut sc.ctrl_t.k_p)?;
    fields.scalar("ctrl_t.kappa", &mut sc.ctrl_t.kappa)?;
    fields.vector("ctrl_t.l", &mut sc.ctrl_t.l_diag)?;
    fields.scalar("ctrl_a.kd", &mut sc.ctrl_a.k_d)?;
    fields.scalar("ctrl_a.kp", &mut sc.ctrl_a.k_p)?;
    fields.scalar("ctrl_a.ki", &mut sc.ctrl_a.k_i)?;
    fields.scalar("ctrl_a.kappa", &mut sc.ctrl_a.kappa)?;
    fields.vector("ctrl_a.l", &mut sc.ctrl_a.l_diag)?;
    let mut ctrl_morse = Vec3::new(1.2, 1.1, 1.0);
    fields.vector("ctrl_a.morse", &mut ctrl_morse)?;
    sc.ctrl_a.morse = MorseGain::new(ctrl_morse.x, ctrl_morse.y, ctrl_morse.z)
        .map_err(|e| ConfigError::Invalid(format!("ctrl_a.morse: {e}")))?;
    fields.vector("ctrl.heading", &mut sc.heading)?;

    fields.vector("initial.position", &mut sc.initial.position)?;
    fields.vector("initial.velocity", &mut sc.initial.velocity)?;
    fields.vector("initial.attitude", &mut sc.initial.attitude)?;
    fields.vector("initial.omega", &mut sc.initial.omega)?;

    for (key, raw) in fields.map.iter() {
        if !fields.consumed.contains(key) {
            return Err(ConfigError::UnknownKey {
                line: raw.line,
                key: key.clone(),
            });
        }
    }

    sc.validate()?;
    Ok(sc)
}

fn parse_disturbance(fields: &mut Fields, sc: &mut Scenario) -> Result<(), ConfigError> {
    let kind = match fields.take("disturbance.kind") {
        Some(raw) => raw,
        None => {
            // keep the benchmark default but still consume any stray keys below
            RawValue {
                line: 0,
                text: String::new(),
            }
        }
    };
    match kind.text.as_str() {
        "" => {}
        "zero" => sc.disturbance = DisturbanceModel::Zero,
        "step" => {
            let mut force_initial = Vec3::new(5.0, 2.0, 0.0);
            let mut force_step_time = 10.0;
            let mut force_step_value = Vec3::new(9.0, 5.0, 0.0);
            let mut torque_initial = Vec3::new(2.0, 0.0, 1.0);
            let mut torque_step_time = 15.0;
            let mut torque_step_value = Vec3::new(4.0, 0.0, 1.0);
            fields.vector("disturbance.force_initial", &mut force_initial)?;
            fields.scalar("disturbance.force_step_time", &mut force_step_time)?;
            fields.vector("disturbance.force_step_value", &mut force_step_value)?;
            fields.vector("disturbance.torque_initial", &mut torque_initial)?;
            fields.scalar("disturbance.torque_step_time", &mut torque_step_time)?;
            fields.vector("disturbance.torque_step_value", &mut torque_step_value)?;
            sc.disturbance = DisturbanceModel::Step {
                force: PiecewiseConstant {
                    initial: force_initial,
                    steps: vec![(force_step_time, force_step_value)],
                },
                torque: PiecewiseConstant {
                    initial: torque_initial,
                    steps: vec![(torque_step_time, torque_step_value)],
                },
            };
        }
        "sinusoid" => {
            let mut force_offset = Vec3::new(50.0, 50.0, 20.0);
            let mut force_amp1 = Vec3::new(6.0, 3.0, 0.0);
            let mut force_freq1 = PI / 2.0;
            let mut force_amp2 = Vec3::new(0.5, 0.2, 0.0);
            let mut force_freq2 = PI;
            let mut torque_offset = Vec3::new(5.0, 3.0, -3.0);
            let mut torque_amp1 = Vec3::new(0.5, 1.0, 0.0);
            let mut torque_freq1 = PI / 2.0;
            let mut torque_amp2 = Vec3::new(0.1, 0.05, 0.0);
            let mut torque_freq2 = PI;
            fields.vector("disturbance.force_offset", &mut force_offset)?;
            fields.vector("disturbance.force_amp1", &mut force_amp1)?;
            fields.scalar("disturbance.force_freq1", &mut force_freq1)?;
            fields.vector("disturbance.force_amp2", &mut force_amp2)?;
            fields.scalar("disturbance.force_freq2", &mut force_freq2)?;
            fields.vector("disturbance.torque_offset", &mut torque_offset)?;
            fields.vector("disturbance.torque_amp1", &mut torque_amp1)?;
            fields.scalar("disturbance.torque_freq1", &mut torque_freq1)?;
            fields.vector("disturbance.torque_amp2", &mut torque_amp2)?;
            fields.scalar("disturbance.torque_freq2", &mut torque_freq2)?;
            sc.disturbance = DisturbanceModel::Sinusoidal {
                force: SinusoidSum {
                    offset: force_offset,
                    terms: vec![(force_amp1, force_freq1), (force_amp2, force_freq2)],
                },
                torque: SinusoidSum {
                    offset: torque_offset,
                    terms: vec![(torque_amp1, torque_freq1), (torque_amp2, torque_freq2)],
                },
            };
        }
        other => {
            return Err(ConfigError::BadValue {
                line: kind.line,
                key: "disturbance.kind".into(),
                reason: format!("expected zero|step|sinusoid, got `{other}`"),
            })
        }
    }
    Ok(())
}
