use nalgebra::{Matrix3, Vector3};

use super::{ik_se3_track, IkOptions, IkSolution};
use crate::error::{Error, Result};
use crate::liegroup::{hat3, orthonormalize, BackboneCurve, RigidPose};

pub const DEFAULT_ROD_STEPS: usize = 1000;

#[derive(Clone, Debug)]
pub struct RodSolution {
    /// `[ω(0); λ]`.
    pub params: [f64; 6],
    pub curve: BackboneCurve,
    pub solution: IkSolution,
}

#[derive(Clone, Copy)]
struct RodState {
    r: Matrix3<f64>,
    t: Vector3<f64>,
    w: Vector3<f64>,
}

fn rate(state: &RodState, lambda: &Vector3<f64>) -> (Matrix3<f64>, Vector3<f64>, Vector3<f64>) {
    let dr = state.r * hat3(&state.w);
    let dt: Vector3<f64> = state.r.column(2).into();
    let d1: Vector3<f64> = state.r.column(0).into();
    let d2: Vector3<f64> = state.r.column(1).into();
    let dw = Vector3::new(-lambda.dot(&d2), lambda.dot(&d1), 0.0);
    (dr, dt, dw)
}

fn advance(s: &RodState, k: &(Matrix3<f64>, Vector3<f64>, Vector3<f64>), h: f64) -> RodState {
    RodState {
        r: s.r + k.0 * h,
        t: s.t + k.1 * h,
        w: s.w + k.2 * h,
    }
}

/// Integrates the inextensible rod with initial rate `ω(0) = p[0..3]` and
/// constant multiplier `λ = p[3..6]` (world frame) over `[0, length]`.
/// Returns the end pose and, when `record` is set, the node samples of ω and
/// dω/ds for building a [`BackboneCurve`].
fn integrate(
    p: &[f64],
    length: f64,
    steps: usize,
    record: bool,
) -> (RigidPose, Vec<Vector3<f64>>, Vec<Vector3<f64>>) {
    let lambda = Vector3::new(p[3], p[4], p[5]);
    let mut s = RodState {
        r: Matrix3::identity(),
        t: Vector3::zeros(),
        w: Vector3::new(p[0], p[1], p[2]),
    };
    let ds = length / steps as f64;
    let mut omega = Vec::new();
    let mut omega_prime = Vec::new();
    let mut push = |s: &RodState| {
        if record {
            omega.push(s.w);
            omega_prime.push(rate(s, &lambda).2);
        }
    };
    push(&s);
    for _ in 0..steps {
        let k1 = rate(&s, &lambda);
        let k2 = rate(&advance(&s, &k1, 0.5 * ds), &lambda);
        let k3 = rate(&advance(&s, &k2, 0.5 * ds), &lambda);
        let k4 = rate(&advance(&s, &k3, ds), &lambda);
        let c = ds / 6.0;
        s = RodState {
            r: orthonormalize(&(s.r + (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) * c)),
            t: s.t + (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * c,
            w: s.w + (k1.2 + k2.2 * 2.0 + k3.2 * 2.0 + k4.2) * c,
        };
        push(&s);
    }
    let pose = RigidPose {
        rotation: s.r,
        translation: s.t,
    };
    (pose, omega, omega_prime)
}

/// End pose of the rod for shooting parameters `p = [ω(0); λ]`.
pub fn shoot(p: &[f64], length: f64, steps: usize) -> Result<RigidPose> {
    if p.len() != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            got: p.len(),
        });
    }
    if let Some(i) = p.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(integrate(p, length, steps, false).0)
}

/// Backbone of the rod for shooting parameters `p = [ω(0); λ]`.
pub fn rod_curve(p: &[f64], length: f64, steps: usize) -> Result<BackboneCurve> {
    shoot(p, length, steps)?;
    let (_, omega, omega_prime) = integrate(p, length, steps, true);
    BackboneCurve::from_rates(length, omega, omega_prime)
}

/// Options suited to shooting from the straight rod.
///
/// The straight rod is a singular configuration: end shortening is second
/// order in curvature, so the Jacobian loses a row there. Damping every
/// pseudoinverse by `1e-4` of the largest eigenvalue keeps the first steps
/// bounded and leads to the low-curvature solution branch.
pub fn rod_options() -> IkOptions {
    IkOptions {
        damping: 1e-4,
        damping_threshold: f64::INFINITY,
        ..IkOptions::default()
    }
}

/// Solves for the rod shape of length `length` whose end frame reaches
/// `desired`, starting from the straight rod.
pub fn rod_shooting(
    desired: &RigidPose,
    length: f64,
    steps: usize,
    opts: &IkOptions,
) -> Result<RodSolution> {
    if !(length > 0.0) || steps < 2 {
        return Err(Error::Invalid(
            "rod needs positive length and at least 2 steps".into(),
        ));
    }
    let straight = shoot(&[0.0; 6], length, steps)?;
    let distance = desired.translation.norm();
    if distance > length - opts.tol && straight.error_to(desired)?.norm() >= opts.tol {
        return Err(Error::Unreachable { distance, length });
    }
    let solution = ik_se3_track(|p| shoot(p, length, steps), &[0.0; 6], desired, opts)?;
    let mut params = [0.0; 6];
    params.copy_from_slice(&solution.params);
    let curve = rod_curve(&params, length, steps)?;
    Ok(RodSolution {
        params,
        curve,
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liegroup::Rotation;

    #[test]
    fn straight_target_returns_zero() {
        let target = RigidPose::from_translation(Vector3::new(0.0, 0.0, 15.0));
        let sol = rod_shooting(&target, 15.0, 200, &IkOptions::default()).unwrap();
        assert_eq!(sol.params, [0.0; 6]);
        assert_eq!(sol.solution.iterations, 0);
    }

    #[test]
    fn constant_curvature_rod_is_arc() {
        let k = 0.1;
        let (pose, _, _) = integrate(&[k, 0.0, 0.0, 0.0, 0.0, 0.0], 15.0, 1000, false);
        let expected = Vector3::new(
            0.0,
            ((k * 15.0_f64).cos() - 1.0) / k,
            (k * 15.0_f64).sin() / k,
        );
        assert!((pose.translation - expected).norm() < 1e-10);
    }

    #[test]
    fn arc_target_is_recovered() {
        let k = 0.08;
        let l = 15.0;
        let target = RigidPose::new(
            Rotation::exp(&Vector3::new(k * l, 0.0, 0.0)),
            Vector3::new(0.0, ((k * l).cos() - 1.0) / k, (k * l).sin() / k),
        );
        let sol = rod_shooting(&target, l, 1000, &rod_options()).unwrap();
        assert!(sol.solution.residual < 1e-8);
        let end = sol.curve.end().position;
        assert!((end - target.translation).norm() < 1e-6);
        assert!((sol.params[0] - k).abs() < 1e-6);
    }

    #[test]
    fn tilted_target_converges_to_low_curvature_branch() {
        let target = RigidPose::new(
            Rotation::from_fixed_xyz(0.1, 0.1, 0.1),
            Vector3::new(1.5, 1.5, 12.0),
        );
        let sol = rod_shooting(&target, 15.0, 1000, &rod_options()).unwrap();
        assert!(sol.solution.residual < 1e-8);
        assert!(sol.curve.curvature().iter().all(|&k| k < 0.5));
    }

    #[test]
    fn too_far_is_unreachable() {
        let target = RigidPose::from_translation(Vector3::new(0.0, 10.0, 12.0));
        assert!(matches!(
            rod_shooting(&target, 15.0, 100, &IkOptions::default()),
            Err(Error::Unreachable { .. })
        ));
    }
}
