//! Inverse kinematics over modal weights.
//!
//! Three iterations are provided: plain pseudoinverse steps toward a vector
//! target ([`ik_jacobian`]), the same with a null-space descent on `‖p‖²`
//! ([`ik_projected_gradient`]), and tracking of an SE(3) trajectory toward a
//! pose target ([`ik_se3_track`]). [`rod_shooting`] solves for an
//! inextensible backbone reaching a given end pose.

mod pinv;
mod rod;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liegroup::RigidPose;

pub use pinv::{pinv_weighted, pinv_weighted_with, Pseudoinverse, CONDITION_FLOOR};
pub use rod::{rod_curve, rod_options, rod_shooting, shoot, RodSolution, DEFAULT_ROD_STEPS};

#[derive(Clone, Debug, PartialEq)]
pub struct IkOptions {
    pub max_iters: usize,
    /// Termination threshold on `‖d_d − d‖` (or the pose-log norm).
    pub tol: f64,
    /// Relative centered-difference step.
    pub fd_step: f64,
    /// Fraction of the remaining gap requested per iteration.
    pub step_fraction: f64,
    /// Null-space descent gain, in (0, 1).
    pub alpha: f64,
    /// Damping added to `J W⁻¹ Jᵀ`, relative to its largest eigenvalue.
    pub damping: f64,
    /// Relative eigenvalue floor of `J W⁻¹ Jᵀ` that triggers damping.
    pub damping_threshold: f64,
    /// SPD weight for the pseudoinverse; identity when `None`.
    pub weight: Option<DMatrix<f64>>,
    pub trajectory_steps: usize,
    /// Trajectory time step; `1 / trajectory_steps` when `None`.
    pub dt: Option<f64>,
}

impl Default for IkOptions {
    fn default() -> Self {
        Self {
            max_iters: 500,
            tol: 1e-8,
            fd_step: 1e-6,
            step_fraction: 0.1,
            alpha: 0.1,
            damping: 1e-8,
            damping_threshold: CONDITION_FLOOR,
            weight: None,
            trajectory_steps: 100,
            dt: None,
        }
    }
}

impl IkOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(m.to_string()));
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if !(self.fd_step > 0.0) {
            return bad("fd_step must be positive");
        }
        if !(self.step_fraction > 0.0 && self.step_fraction <= 1.0) {
            return bad("step_fraction must lie in (0, 1]");
        }
        if !(self.damping > 0.0) {
            return bad("damping must be positive");
        }
        if !(self.damping_threshold >= 0.0) {
            return bad("damping_threshold must be non-negative");
        }
        if self.trajectory_steps == 0 {
            return bad("trajectory_steps must be at least 1");
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return bad("dt must be positive");
            }
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(1.0 / self.trajectory_steps as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub residual: f64,
    pub param_norm: f64,
    /// The pseudoinverse used on this iteration needed damping.
    pub damped: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IkSolution {
    pub params: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub trace: Vec<TraceRecord>,
}

/// Centered-difference Jacobian, column `j` probing `p ± hⱼ eⱼ` with
/// `hⱼ = fd_step · max(1, |pⱼ|)`. A failed probe is retried once with a
/// ten times smaller step before reporting `StateUndefined(j)`.
pub fn numerical_jacobian<F>(state: F, p: &[f64], fd_step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<DVector<f64>> + Sync,
{
    match jacobian_once(&state, p, fd_step) {
        Err(Error::StateUndefined(_)) => jacobian_once(&state, p, fd_step / 10.0),
        other => other,
    }
}

fn jacobian_once<F>(state: &F, p: &[f64], fd_step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<DVector<f64>> + Sync,
{
    let columns: Vec<DVector<f64>> = (0..p.len())
        .into_par_iter()
        .map(|j| {
            let h = fd_step * p[j].abs().max(1.0);
            let mut q = p.to_vec();
            q[j] = p[j] + h;
            let plus = state(&q).map_err(|_| Error::StateUndefined(j))?;
            q[j] = p[j] - h;
            let minus = state(&q).map_err(|_| Error::StateUndefined(j))?;
            Ok((plus - minus) / (2.0 * h))
        })
        .collect::<Result<_>>()?;
    if columns.is_empty() {
        let n = state(p)?.len();
        return Ok(DMatrix::zeros(n, 0));
    }
    Ok(DMatrix::from_columns(&columns))
}

fn check_start(p0: &[f64], opts: &IkOptions) -> Result<()> {
    opts.validate()?;
    if let Some(i) = p0.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

fn vector_ik<F>(
    state: F,
    p0: &[f64],
    target: &DVector<f64>,
    opts: &IkOptions,
    alpha: Option<f64>,
) -> Result<IkSolution>
where
    F: Fn(&[f64]) -> Result<DVector<f64>> + Sync,
{
    check_start(p0, opts)?;
    let mut p = DVector::from_column_slice(p0);
    let mut trace = Vec::new();
    let mut damped = false;
    for k in 0..=opts.max_iters {
        let d = state(p.as_slice())?;
        if d.len() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                got: d.len(),
            });
        }
        let gap = target - d;
        let residual = gap.norm();
        trace.push(TraceRecord {
            iteration: k,
            residual,
            param_norm: p.norm(),
            damped,
        });
        if residual < opts.tol {
            return Ok(IkSolution {
                params: p.as_slice().to_vec(),
                iterations: k,
                residual,
                trace,
            });
        }
        if k == opts.max_iters {
            return Err(Error::NoConvergence { residual, iters: k });
        }
        let j = numerical_jacobian(&state, p.as_slice(), opts.fd_step)?;
        let pinv = pinv_weighted_with(
            &j,
            opts.weight.as_ref(),
            opts.damping,
            opts.damping_threshold,
        )?;
        damped = pinv.damped;
        let mut step = &pinv.matrix * gap * opts.step_fraction;
        if let Some(alpha) = alpha {
            // −α Z ∇G with Z = I − J⁺J and G = pᵀp
            let grad = &p * 2.0;
            let z_grad = &grad - &pinv.matrix * (&j * &grad);
            step -= z_grad * alpha;
        }
        p += step;
    }
    unreachable!("loop returns on its last iteration")
}

/// Pseudoinverse iteration `p ← p + J⁺ · step_fraction · (d_d − d(p))`.
pub fn ik_jacobian<F>(
    state: F,
    p0: &[f64],
    target: &DVector<f64>,
    opts: &IkOptions,
) -> Result<IkSolution>
where
    F: Fn(&[f64]) -> Result<DVector<f64>> + Sync,
{
    vector_ik(state, p0, target, opts, None)
}

/// As [`ik_jacobian`] plus `−α (I − J⁺J) ∇G` with `G(p) = pᵀp`, which
/// drifts redundant weights toward small configurations.
pub fn ik_projected_gradient<F>(
    state: F,
    p0: &[f64],
    target: &DVector<f64>,
    opts: &IkOptions,
) -> Result<IkSolution>
where
    F: Fn(&[f64]) -> Result<DVector<f64>> + Sync,
{
    vector_ik(state, p0, target, opts, Some(opts.alpha))
}

/// 6×m Jacobian of the body-frame twist `log(g(p)⁻¹ g(q))∨` at `q = p`.
pub fn body_jacobian<F>(pose: F, p: &[f64], at: &RigidPose, fd_step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<RigidPose> + Sync,
{
    let inv = at.inverse();
    numerical_jacobian(
        |q| {
            Ok(DVector::from_column_slice(
                (inv * pose(q)?).log()?.0.as_slice(),
            ))
        },
        p,
        fd_step,
    )
}

/// Tracks `g_p(t) = g_p(0) exp(t X)`, `X = log(g_p(0)⁻¹ g_p(1))`, with the
/// velocity condition plus a log-error correction:
///
/// ```text
/// p ← p + J⁺ Ad(g⁻¹ g_p(t)) X Δt + J⁺ log(g⁻¹ g_p(t))∨
/// ```
///
/// `t` advances by `Δt` per iteration and is held at 1 once the trajectory
/// ends, after which only the correction acts.
pub fn ik_se3_track<F>(
    pose: F,
    p0: &[f64],
    target: &RigidPose,
    opts: &IkOptions,
) -> Result<IkSolution>
where
    F: Fn(&[f64]) -> Result<RigidPose> + Sync,
{
    check_start(p0, opts)?;
    let start = pose(p0)?;
    let x = start.error_to(target)?;
    let dt = opts.dt();
    let steps = opts.trajectory_steps;
    let mut p = DVector::from_column_slice(p0);
    let mut trace = Vec::new();
    let mut damped = false;
    for k in 0..=opts.max_iters {
        let g = pose(p.as_slice())?;
        let residual = g.error_to(target)?.norm();
        trace.push(TraceRecord {
            iteration: k,
            residual,
            param_norm: p.norm(),
            damped,
        });
        if residual < opts.tol {
            return Ok(IkSolution {
                params: p.as_slice().to_vec(),
                iterations: k,
                residual,
                trace,
            });
        }
        if k == opts.max_iters {
            return Err(Error::NoConvergence { residual, iters: k });
        }
        let t = (k as f64 * dt).min(1.0);
        let on_path = k < steps && t < 1.0;
        let desired = if !on_path {
            *target
        } else {
            start * RigidPose::exp(&x.scaled(t))
        };
        let j = body_jacobian(&pose, p.as_slice(), &g, opts.fd_step)?;
        let pinv = pinv_weighted_with(
            &j,
            opts.weight.as_ref(),
            opts.damping,
            opts.damping_threshold,
        )?;
        damped = pinv.damped;
        let rel = g.inverse() * desired;
        let mut v = rel.log()?.0;
        if on_path {
            v += rel.adjoint() * x.0 * dt;
        }
        p += &pinv.matrix * DVector::from_column_slice(v.as_slice());
    }
    unreachable!("loop returns on its last iteration")
}
