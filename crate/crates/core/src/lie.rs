//! SO(3) primitives: hat/vee maps, the exponential map, and the Morse
//! attitude-error machinery (`s_K`, its value and rate, critical set,
//! membership in the set where the gradient bound holds).
//!
//! Everything here is a pure function of its inputs and safe to call from
//! any thread.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Tolerance on `‖RᵀR − I‖` and `|det R − 1|` for a matrix to count as a rotation.
pub const ROTATION_TOL: f64 = 1e-9;

/// Tolerance on `‖M + Mᵀ‖` for a matrix to count as skew-symmetric.
pub const SKEW_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("matrix is not skew-symmetric: ‖M + Mᵀ‖ = {asymmetry:.3e}")]
    NotSkew { asymmetry: f64 },
    #[error("matrix is not a rotation: orthonormality/determinant error {error:.3e}")]
    NotRotation { error: f64 },
    #[error("Morse gains must satisfy K1 > K2 > K3 >= 1, got ({0}, {1}, {2})")]
    BadMorseGain(f64, f64, f64),
}

/// A rotation matrix, kept orthonormal with unit determinant.
///
/// Products re-project onto the nearest rotation (polar decomposition) only
/// when accumulated drift exceeds [`ROTATION_TOL`]; the integrators in this
/// crate are structure-preserving, so that projection is a guard rather than
/// a correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(Mat3);

impl Rotation {
    pub fn identity() -> Self {
        Rotation(Mat3::identity())
    }

    /// Validates orthonormality and determinant before accepting the matrix.
    pub fn from_matrix(m: Mat3) -> Result<Self, LieError> {
        let err = rotation_defect(&m);
        if err > ROTATION_TOL {
            return Err(LieError::NotRotation { error: err });
        }
        Ok(Rotation(m))
    }

    /// Wraps a matrix that is known to be a rotation by construction,
    /// re-projecting if roundoff has pushed it past the tolerance.
    pub(crate) fn guarded(m: Mat3) -> Self {
        if rotation_defect(&m) > ROTATION_TOL {
            Rotation(nearest_rotation(&m))
        } else {
            Rotation(m)
        }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn transpose(&self) -> Rotation {
        Rotation(self.0.transpose())
    }

    /// `self · other`, guarded against drift.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation::guarded(self.0 * other.0)
    }

    /// Applies the rotation to a vector.
    pub fn rotate(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    /// Applies the inverse rotation to a vector.
    pub fn rotate_back(&self, v: &Vec3) -> Vec3 {
        self.0.transpose() * v
    }

    /// `‖RᵀR − I‖` plus determinant defect; zero for an exact rotation.
    pub fn defect(&self) -> f64 {
        rotation_defect(&self.0)
    }

    /// Nearest rotation in the Frobenius sense (polar projection).
    pub fn renormalized(&self) -> Rotation {
        Rotation(nearest_rotation(&self.0))
    }
}

fn rotation_defect(m: &Mat3) -> f64 {
    let ortho = (m.transpose() * m - Mat3::identity()).norm();
    let det = (m.determinant() - 1.0).abs();
    ortho.max(det)
}

fn nearest_rotation(m: &Mat3) -> Mat3 {
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd of 3x3 always yields u");
    let v_t = svd.v_t.expect("svd of 3x3 always yields v_t");
    let mut s = Mat3::identity();
    if (u * v_t).determinant() < 0.0 {
        s[(2, 2)] = -1.0;
    }
    u * s * v_t
}

/// A rigid-body pose: attitude plus position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub rotation: Rotation,
    /// Position of the body frame origin in the inertial frame (m).
    pub position: Vec3,
}

impl Pose {
    pub fn new(rotation: Rotation, position: Vec3) -> Self {
        Pose { rotation, position }
    }

    pub fn identity() -> Self {
        Pose {
            rotation: Rotation::identity(),
            position: Vec3::zeros(),
        }
    }

    /// Body-frame velocity `ν = Rᵀ v` for an inertial velocity `v`.
    pub fn body_velocity(&self, inertial_velocity: &Vec3) -> Vec3 {
        self.rotation.rotate_back(inertial_velocity)
    }
}

/// Diagonal gains of the attitude-error potential; ordered `K1 > K2 > K3 >= 1`
/// so the potential has isolated, non-degenerate critical points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseGain {
    k1: f64,
    k2: f64,
    k3: f64,
}

impl MorseGain {
    pub fn new(k1: f64, k2: f64, k3: f64) -> Result<Self, LieError> {
        if !(k1 > k2 && k2 > k3 && k3 >= 1.0) {
            return Err(LieError::BadMorseGain(k1, k2, k3));
        }
        Ok(MorseGain { k1, k2, k3 })
    }

    pub fn gains(&self) -> [f64; 3] {
        [self.k1, self.k2, self.k3]
    }

    pub fn as_matrix(&self) -> Mat3 {
        Mat3::from_diagonal(&Vec3::new(self.k1, self.k2, self.k3))
    }
}

/// Skew-symmetric matrix of `v`, so that `hat(v)·w = v × w`.
pub fn hat(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`hat`]; rejects matrices that are not skew within [`SKEW_TOL`].
pub fn vee(m: &Mat3) -> Result<Vec3, LieError> {
    let asymmetry = (m + m.transpose()).norm();
    if asymmetry >= SKEW_TOL {
        return Err(LieError::NotSkew { asymmetry });
    }
    Ok(vee_skew_part(m))
}

/// `vee` of the skew part `(M − Mᵀ)/2`, with no symmetry check. Used where the
/// argument is skew up to roundoff by construction.
pub fn vee_skew_part(m: &Mat3) -> Vec3 {
    Vec3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Rotation by angle `‖v‖` about axis `v/‖v‖` (Rodrigues formula).
///
/// Below `‖v‖ = 1e-8` the trigonometric coefficients are replaced by their
/// second-order series to avoid 0/0.
pub fn exp_so3(v: &Vec3) -> Rotation {
    let theta = v.norm();
    let vx = hat(v);
    let m = if theta < 1e-8 {
        Mat3::identity() + vx + vx * vx * 0.5
    } else {
        let s = theta.sin() / theta;
        let c = (1.0 - theta.cos()) / (theta * theta);
        Mat3::identity() + vx * s + vx * vx * c
    };
    Rotation::guarded(m)
}

/// Gradient-like field of the attitude potential: `s_K(R) = Σᵢ Kᵢ (Rᵀeᵢ) × eᵢ`.
///
/// Vanishes exactly on the four-element critical set returned by
/// [`morse_critical_rotations`].
pub fn morse_sk(r: &Rotation, k: &MorseGain) -> Vec3 {
    let m = r.matrix();
    let gains = k.gains();
    let mut out = Vec3::zeros();
    for i in 0..3 {
        let e_i = Vec3::ith_axis(i).into_inner();
        let col = m.transpose() * e_i;
        out += gains[i] * col.cross(&e_i);
    }
    out
}

/// Attitude-error potential `⟨K, I − R⟩ = tr(Kᵀ(I − R)) ≥ 0`, zero iff `R = I`.
pub fn morse_value(r: &Rotation, k: &MorseGain) -> f64 {
    let m = r.matrix();
    let gains = k.gains();
    gains[0] * (1.0 - m[(0, 0)]) + gains[1] * (1.0 - m[(1, 1)]) + gains[2] * (1.0 - m[(2, 2)])
}

/// Time derivative of `s_K` along the error kinematics `Ṙ = R ω̂`:
/// `Σᵢ Kᵢ eᵢ × (ω × Rᵀeᵢ)`.
pub fn morse_rate(r_err: &Rotation, omega_err: &Vec3, k: &MorseGain) -> Vec3 {
    let m = r_err.matrix();
    let gains = k.gains();
    let mut out = Vec3::zeros();
    for i in 0..3 {
        let e_i = Vec3::ith_axis(i).into_inner();
        let col = m.transpose() * e_i;
        out += gains[i] * e_i.cross(&omega_err.cross(&col));
    }
    out
}

/// Principal rotation angle `Φ = arccos((tr Q − 1)/2) ∈ [0, π]`.
///
/// The arccos argument is clamped to `[−1, 1]` to absorb roundoff.
pub fn principal_angle(q: &Rotation) -> f64 {
    let c = 0.5 * (q.matrix().trace() - 1.0);
    c.clamp(-1.0, 1.0).acos()
}

/// Membership in the closed set where `‖s_K(R)‖² ≥ ⟨K, I − R⟩` holds:
/// `Rᵢᵢ ≥ 0` and `Rᵢⱼ Rⱼᵢ ≤ 0` for all `i ≠ j` (non-strict, as defined).
pub fn in_set_s(r: &Rotation) -> bool {
    let m = r.matrix();
    for i in 0..3 {
        if m[(i, i)] < 0.0 {
            return false;
        }
        for j in 0..3 {
            if i != j && m[(i, j)] * m[(j, i)] > 0.0 {
                return false;
            }
        }
    }
    true
}

/// The four rotations where `s_K` vanishes: the identity and the three
/// half-turns about the coordinate axes.
pub fn morse_critical_rotations() -> [Rotation; 4] {
    let d = |a: f64, b: f64, c: f64| {
        Rotation::from_matrix(Mat3::from_diagonal(&Vec3::new(a, b, c))).expect("diagonal rotation")
    };
    [
        Rotation::identity(),
        d(1.0, -1.0, -1.0),
        d(-1.0, 1.0, -1.0),
        d(-1.0, -1.0, 1.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

    fn rot_z(angle: f64) -> Rotation {
        exp_so3(&Vec3::new(0.0, 0.0, angle))
    }

    fn k321() -> MorseGain {
        MorseGain::new(3.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn hat_of_zero_is_zero() {
        assert_eq!(hat(&Vec3::zeros()), Mat3::zeros());
    }

    #[test]
    fn hat_of_e1_matches_cross_product_matrix() {
        let m = hat(&Vec3::new(1.0, 0.0, 0.0));
        let expected = Mat3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0);
        assert_eq!(m, expected);
    }

    #[test]
    fn vee_rejects_non_skew() {
        let m = Mat3::identity();
        assert!(matches!(vee(&m), Err(LieError::NotSkew { .. })));
    }

    #[test]
    fn vee_of_zero_is_zero() {
        assert_eq!(vee(&Mat3::zeros()).unwrap(), Vec3::zeros());
    }

    #[test]
    fn vee_round_trips_hat() {
        let v = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(vee(&hat(&v)).unwrap(), v);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(exp_so3(&Vec3::zeros()), Rotation::identity());
    }

    #[test]
    fn exp_quarter_turn_about_z() {
        let r = rot_z(FRAC_PI_2);
        let expected = Mat3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert_relative_eq!(*r.matrix(), expected, epsilon = 1e-12);
    }

    #[test]
    fn morse_sk_vanishes_at_identity() {
        assert_eq!(morse_sk(&Rotation::identity(), &k321()), Vec3::zeros());
    }

    #[test]
    fn morse_sk_closed_form_about_z() {
        // (K1 + K2) sin θ e3 for a rotation about e3
        let s = morse_sk(&rot_z(FRAC_PI_6), &k321());
        assert_relative_eq!(s, Vec3::new(0.0, 0.0, 2.5), epsilon = 1e-12);
    }

    #[test]
    fn morse_sk_vanishes_on_critical_set() {
        for r in morse_critical_rotations() {
            assert!(morse_sk(&r, &k321()).norm() < 1e-12);
        }
    }

    #[test]
    fn morse_value_at_identity_is_zero() {
        assert_eq!(morse_value(&Rotation::identity(), &k321()), 0.0);
    }

    #[test]
    fn morse_value_closed_form_about_z() {
        let v = morse_value(&rot_z(FRAC_PI_6), &k321());
        assert_relative_eq!(v, 5.0 * (1.0 - FRAC_PI_6.cos()), epsilon = 1e-12);
        assert_relative_eq!(v, 0.669872981077807, epsilon = 1e-12);
    }

    #[test]
    fn morse_rate_zero_for_zero_rate() {
        let r = rot_z(0.7);
        assert_eq!(morse_rate(&r, &Vec3::zeros(), &k321()), Vec3::zeros());
    }

    #[test]
    fn morse_rate_closed_form_at_identity() {
        let rate = morse_rate(&Rotation::identity(), &Vec3::new(0.0, 0.0, 1.0), &k321());
        assert_relative_eq!(rate, Vec3::new(0.0, 0.0, 5.0), epsilon = 1e-12);
    }

    #[test]
    fn morse_rate_matches_central_difference() {
        let k = k321();
        let r = exp_so3(&Vec3::new(0.4, -0.2, 0.9));
        let omega = Vec3::new(0.3, -1.1, 0.5);
        let delta = 1e-6;
        let fwd = morse_sk(&r.compose(&exp_so3(&(omega * delta))), &k);
        let bwd = morse_sk(&r.compose(&exp_so3(&(-omega * delta))), &k);
        let fd = (fwd - bwd) / (2.0 * delta);
        let analytic = morse_rate(&r, &omega, &k);
        assert_relative_eq!(fd, analytic, epsilon = 1e-6);
    }

    #[test]
    fn principal_angle_cases() {
        assert_eq!(principal_angle(&Rotation::identity()), 0.0);
        assert_relative_eq!(principal_angle(&rot_z(FRAC_PI_2)), FRAC_PI_2, epsilon = 1e-12);
        let half_turn = morse_critical_rotations()[1];
        assert_relative_eq!(principal_angle(&half_turn), PI, epsilon = 1e-12);
    }

    #[test]
    fn set_s_membership() {
        assert!(in_set_s(&Rotation::identity()));
        assert!(in_set_s(&rot_z(FRAC_PI_6)));
        let m = Mat3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0));
        assert!(!in_set_s(&Rotation::from_matrix(m).unwrap()));
    }

    #[test]
    fn sk_vanishes_only_near_critical_set_on_grid() {
        // Sample axis-angle grid; s_K must vanish only close to the four
        // critical rotations.
        let k = k321();
        let axes = [
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(1.0, 1.0, 0.0).normalize(),
            Vec3::new(1.0, -1.0, 1.0).normalize(),
            Vec3::new(0.3, 0.5, -0.8).normalize(),
        ];
        let criticals = morse_critical_rotations();
        for axis in axes {
            for i in 1..60 {
                let angle = PI * i as f64 / 60.0;
                let r = exp_so3(&(axis * angle));
                let near_critical = criticals
                    .iter()
                    .any(|c| (r.matrix() - c.matrix()).norm() < 0.15);
                let norm = morse_sk(&r, &k).norm();
                if near_critical {
                    continue;
                }
                assert!(norm > 1e-3, "s_K unexpectedly small away from critical set");
            }
        }
        for c in criticals {
            assert!(morse_sk(&c, &k).norm() < 1e-9);
        }
    }

    #[test]
    fn morse_value_rate_identity_along_flows() {
        // d/dt ⟨K, I−R⟩ = Ωᵀ s_K(R) along Ṙ = RΩ̂, by central differences.
        let k = k321();
        let cases = [
            (Vec3::new(0.2, 0.1, -0.4), Vec3::new(1.0, -0.5, 0.25)),
            (Vec3::new(-1.0, 0.6, 0.8), Vec3::new(0.1, 0.9, -0.3)),
            (Vec3::new(0.0, 1.4, 0.3), Vec3::new(-0.7, 0.2, 1.1)),
        ];
        let delta = 1e-6;
        for (attitude, omega) in cases {
            let r = exp_so3(&attitude);
            let fwd = morse_value(&r.compose(&exp_so3(&(omega * delta))), &k);
            let bwd = morse_value(&r.compose(&exp_so3(&(-omega * delta))), &k);
            let fd = (fwd - bwd) / (2.0 * delta);
            let analytic = omega.dot(&morse_sk(&r, &k));
            assert_relative_eq!(fd, analytic, max_relative = 1e-5, epsilon = 1e-9);
        }
    }

    #[test]
    fn morse_gain_ordering_enforced() {
        assert!(MorseGain::new(3.0, 2.0, 1.0).is_ok());
        assert!(MorseGain::new(2.0, 2.0, 1.0).is_err());
        assert!(MorseGain::new(3.0, 2.0, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn hat_acts_as_cross_product(
            v in prop::array::uniform3(-10.0f64..10.0),
            w in prop::array::uniform3(-10.0f64..10.0),
        ) {
            let v = Vec3::from(v);
            let w = Vec3::from(w);
            let lhs = hat(&v) * w;
            let rhs = v.cross(&w);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + v.norm() * w.norm()));
        }

        #[test]
        fn hat_vee_round_trip(v in prop::array::uniform3(-100.0f64..100.0)) {
            let v = Vec3::from(v);
            let m = hat(&v);
            prop_assert!((hat(&vee(&m).unwrap()) - m).norm() < 1e-12 * (1.0 + v.norm()));
        }

        #[test]
        fn exp_satisfies_rotation_invariants(v in prop::array::uniform3(-10.0f64..10.0)) {
            let v = Vec3::from(v);
            let r = exp_so3(&v);
            prop_assert!(r.defect() < 1e-10);
            let inv = r.compose(&exp_so3(&-v));
            prop_assert!((inv.matrix() - Mat3::identity()).norm() < 1e-12);
        }

        #[test]
        fn sk_bound_holds_on_set_s(
            axis in prop::array::uniform3(-1.0f64..1.0),
            angle in 0.0f64..PI,
        ) {
            let axis = Vec3::from(axis);
            prop_assume!(axis.norm() > 1e-3);
            let r = exp_so3(&(axis.normalize() * angle));
            prop_assume!(in_set_s(&r));
            let k = k321();
            let s = morse_sk(&r, &k);
            prop_assert!(s.dot(&s) + 1e-12 >= morse_value(&r, &k));
        }
    }
}
