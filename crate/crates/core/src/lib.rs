//! Simulation library for disturbance estimation and rejection on SE(3).
//!
//! A rigid body with a body-fixed thrust axis is observed by two extended
//! state observers (translational and rotational) built on a Hölder-continuous
//! fast finite-time stable differentiator, and steered by tracking laws that
//! cancel the estimated disturbances. The crate provides:
//!
//! - [`lie`]: rotation primitives, hat/vee maps, the exponential map, and the
//!   Morse attitude-error machinery;
//! - [`ffts`]: the differentiator kernel (φ₁/φ₂ fields, Lyapunov machinery,
//!   settling-time bounds, gain robustness checks);
//! - [`observer`]: both extended state observers with gain validators;
//! - [`controller`]: force and torque tracking laws with disturbance
//!   rejection and attitude-reference generation;
//! - [`sim`]: plant dynamics, fixed-step geometric integrators, disturbance
//!   profiles, measurement noise, and reference trajectories.

pub mod controller;
pub mod ffts;
pub mod lie;
pub mod observer;
pub mod sim;
