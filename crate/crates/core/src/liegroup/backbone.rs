//! Inextensible backbone curves integrated from a body angular-velocity
//! profile ω(s).
//!
//! The frame `R(s) = [d₁ d₂ d₃]` obeys `dR/ds = R ω̂` and the centerline
//! `dt/ds = R e₃`. Between stored samples, ω is a cubic Hermite interpolant of
//! the sampled ω and dω/ds, and positions/frames are obtained by a single
//! partial RK4 step from the panel start. Stored samples are produced by the
//! same step, so evaluation is continuous across panels.

use nalgebra::{Matrix3, Vector3};

use super::so3::{hat3, orthonormalize};
use crate::error::{Error, Result};

/// Curvature below which the Frenet normal is treated as undefined.
const NORMAL_EPS: f64 = 1e-9;

/// Position, frame and rates of a curve at one arclength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameSample {
    pub position: Vector3<f64>,
    pub rotation: Matrix3<f64>,
    pub omega: Vector3<f64>,
    pub omega_prime: Vector3<f64>,
}

impl FrameSample {
    pub fn tangent(&self) -> Vector3<f64> {
        self.rotation.column(2).into()
    }

    /// Curvature vector components `(ω₂, −ω₁)` in the (d₁, d₂) cross-section.
    pub fn curvature_components(&self) -> (f64, f64) {
        (self.omega.y, -self.omega.x)
    }

    pub fn curvature(&self) -> f64 {
        self.omega.x.hypot(self.omega.y)
    }

    /// Torsion of the Frenet frame: material twist rate plus the rotation
    /// rate of the curvature vector in the cross-section. `None` where the
    /// curvature vanishes.
    pub fn torsion(&self) -> Option<f64> {
        let (w1, w2) = (self.omega.x, self.omega.y);
        let k2 = w1 * w1 + w2 * w2;
        if k2.sqrt() < NORMAL_EPS {
            return None;
        }
        let (dw1, dw2) = (self.omega_prime.x, self.omega_prime.y);
        Some(self.omega.z + (w1 * dw2 - w2 * dw1) / k2)
    }

    /// Frenet frame `[n × t, n, t]` (right-handed, cross-section x₂ along n).
    pub fn frenet(&self) -> Option<Matrix3<f64>> {
        let kappa = self.curvature();
        if kappa < NORMAL_EPS {
            return None;
        }
        let (k1, k2) = self.curvature_components();
        let d1: Vector3<f64> = self.rotation.column(0).into();
        let d2: Vector3<f64> = self.rotation.column(1).into();
        let n = (d1 * k1 + d2 * k2) / kappa;
        let t = self.tangent();
        Some(Matrix3::from_columns(&[n.cross(&t), n, t]))
    }
}

/// Sampled arclength-parameterized curve with frames, curvature and torsion.
#[derive(Clone, Debug)]
pub struct BackboneCurve {
    length: f64,
    positions: Vec<Vector3<f64>>,
    frames: Vec<Matrix3<f64>>,
    omega: Vec<Vector3<f64>>,
    omega_prime: Vec<Vector3<f64>>,
}

fn hermite(
    w0: &Vector3<f64>,
    dw0: &Vector3<f64>,
    w1: &Vector3<f64>,
    dw1: &Vector3<f64>,
    panel: f64,
    u: f64,
) -> (Vector3<f64>, Vector3<f64>) {
    let u2 = u * u;
    let u3 = u2 * u;
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    let value = w0 * h00 + dw0 * (h10 * panel) + w1 * h01 + dw1 * (h11 * panel);
    let g00 = 6.0 * u2 - 6.0 * u;
    let g10 = 3.0 * u2 - 4.0 * u + 1.0;
    let g01 = -6.0 * u2 + 6.0 * u;
    let g11 = 3.0 * u2 - 2.0 * u;
    let slope = (w0 * g00 + w1 * g01) / panel + dw0 * g10 + dw1 * g11;
    (value, slope)
}

/// One RK4 step of length `ds` for (R, t) with rate `omega(σ)`, σ measured
/// from the step start.
fn rk4_step(
    rotation: &Matrix3<f64>,
    position: &Vector3<f64>,
    ds: f64,
    omega: impl Fn(f64) -> Vector3<f64>,
) -> (Matrix3<f64>, Vector3<f64>) {
    let e3 = Vector3::z();
    let half = 0.5 * ds;
    let w0 = hat3(&omega(0.0));
    let wm = hat3(&omega(half));
    let w1 = hat3(&omega(ds));

    let k1 = rotation * w0;
    let r2 = rotation + k1 * half;
    let k2 = r2 * wm;
    let r3 = rotation + k2 * half;
    let k3 = r3 * wm;
    let r4 = rotation + k3 * ds;
    let k4 = r4 * w1;

    let next_r = rotation + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (ds / 6.0);
    let dt = (rotation + r2 * 2.0 + r3 * 2.0 + r4) * e3 * (ds / 6.0);
    (orthonormalize(&next_r), position + dt)
}

impl BackboneCurve {
    /// Builds a curve from ω and dω/ds sampled at `steps + 1` uniform
    /// arclengths over `[0, length]`, starting at the identity pose.
    pub fn from_rates(
        length: f64,
        omega: Vec<Vector3<f64>>,
        omega_prime: Vec<Vector3<f64>>,
    ) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Invalid(format!(
                "curve length must be positive, got {length}"
            )));
        }
        if omega.len() < 3 || omega.len() != omega_prime.len() {
            return Err(Error::Invalid(
                "need at least 2 steps and matching rate samples".into(),
            ));
        }
        let mut curve = Self {
            length,
            positions: Vec::with_capacity(omega.len()),
            frames: Vec::with_capacity(omega.len()),
            omega,
            omega_prime,
        };
        curve.positions.push(Vector3::zeros());
        curve.frames.push(Matrix3::identity());
        let ds = curve.panel();
        for i in 0..curve.steps() {
            let (r, t) = curve.step_from(i, ds);
            curve.frames.push(r);
            curve.positions.push(t);
        }
        Ok(curve)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn steps(&self) -> usize {
        self.omega.len() - 1
    }

    pub fn panel(&self) -> f64 {
        self.length / self.steps() as f64
    }

    pub fn arclengths(&self) -> impl Iterator<Item = f64> + '_ {
        let ds = self.panel();
        (0..=self.steps()).map(move |i| i as f64 * ds)
    }

    pub fn positions(&self) -> &[Vector3<f64>] {
        &self.positions
    }

    pub fn frames(&self) -> &[Matrix3<f64>] {
        &self.frames
    }

    pub fn sample(&self, i: usize) -> FrameSample {
        FrameSample {
            position: self.positions[i],
            rotation: self.frames[i],
            omega: self.omega[i],
            omega_prime: self.omega_prime[i],
        }
    }

    pub fn curvature(&self) -> Vec<f64> {
        self.omega.iter().map(|w| w.x.hypot(w.y)).collect()
    }

    /// Frenet torsion at every sample, zero where the normal is undefined.
    pub fn torsion(&self) -> Vec<f64> {
        (0..=self.steps())
            .map(|i| self.sample(i).torsion().unwrap_or(0.0))
            .collect()
    }

    pub fn end(&self) -> FrameSample {
        self.sample(self.steps())
    }

    fn rate_on_panel(&self, i: usize, sigma: f64) -> (Vector3<f64>, Vector3<f64>) {
        let ds = self.panel();
        hermite(
            &self.omega[i],
            &self.omega_prime[i],
            &self.omega[i + 1],
            &self.omega_prime[i + 1],
            ds,
            sigma / ds,
        )
    }

    fn step_from(&self, i: usize, sigma: f64) -> (Matrix3<f64>, Vector3<f64>) {
        rk4_step(&self.frames[i], &self.positions[i], sigma, |d| {
            self.rate_on_panel(i, d).0
        })
    }

    /// Frame data at arclength `s`. Values outside `[0, L]` extrapolate the
    /// end panels.
    pub fn frame_at(&self, s: f64) -> FrameSample {
        let ds = self.panel();
        let i = ((s / ds).floor().max(0.0) as usize).min(self.steps() - 1);
        let sigma = s - i as f64 * ds;
        if sigma == 0.0 {
            return self.sample(i);
        }
        let (rotation, position) = self.step_from(i, sigma);
        let (omega, omega_prime) = self.rate_on_panel(i, sigma);
        FrameSample {
            position,
            rotation,
            omega,
            omega_prime,
        }
    }

    /// Same centerline with the frame re-based to have zero twist about the
    /// tangent (a rotation-minimizing frame), keeping the frame at s = 0.
    pub fn to_minimal_twist(&self) -> Result<Self> {
        let ds = self.panel();
        let mut psi = 0.0;
        let mut omega = Vec::with_capacity(self.omega.len());
        let mut omega_prime = Vec::with_capacity(self.omega.len());
        for i in 0..=self.steps() {
            if i > 0 {
                // exact integral of the Hermite interpolant of ω₃
                let (a, b) = (self.omega[i - 1].z, self.omega[i].z);
                let (da, db) = (self.omega_prime[i - 1].z, self.omega_prime[i].z);
                psi -= 0.5 * ds * (a + b) + ds * ds * (da - db) / 12.0;
            }
            let (c, s) = (psi.cos(), psi.sin());
            let w = self.omega[i];
            let dw = self.omega_prime[i];
            let dpsi = -w.z;
            // ω̃ = R_z(ψ)ᵀ ω − ω₃ e₃
            let x = c * w.x + s * w.y;
            let y = -s * w.x + c * w.y;
            let dx = c * dw.x + s * dw.y + dpsi * (-s * w.x + c * w.y);
            let dy = -s * dw.x + c * dw.y + dpsi * (-c * w.x - s * w.y);
            omega.push(Vector3::new(x, y, 0.0));
            omega_prime.push(Vector3::new(dx, dy, 0.0));
        }
        Self::from_rates(self.length, omega, omega_prime)
    }
}

/// Integrates a curve of length `length` from ω(s) with `steps` RK4 panels.
/// dω/ds is taken by central differences of `omega`.
pub fn integrate_backbone(
    omega: impl Fn(f64) -> Vector3<f64>,
    length: f64,
    steps: usize,
) -> Result<BackboneCurve> {
    let h = 1e-5 * length.max(1.0);
    integrate_backbone_with_rate(
        &omega,
        |s| (omega(s + h) - omega(s - h)) / (2.0 * h),
        length,
        steps,
    )
}

/// As [`integrate_backbone`] with an exact dω/ds.
pub fn integrate_backbone_with_rate(
    omega: impl Fn(f64) -> Vector3<f64>,
    omega_prime: impl Fn(f64) -> Vector3<f64>,
    length: f64,
    steps: usize,
) -> Result<BackboneCurve> {
    if steps < 2 {
        return Err(Error::Invalid(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    let ds = length / steps as f64;
    let w = (0..=steps).map(|i| omega(i as f64 * ds)).collect();
    let dw = (0..=steps).map(|i| omega_prime(i as f64 * ds)).collect();
    BackboneCurve::from_rates(length, w, dw)
}

/// Twist correction that turns a curve's Frenet frame into a globally
/// minimally twisting one aligned with the bottom plane.
#[derive(Clone, Debug)]
pub struct MinimalTwist {
    /// θ₁ at every curve sample: −∫₀ˢ τ.
    pub theta1: Vec<f64>,
    /// Signed angle carrying the Frenet normal at s = 0 onto the x₂ axis.
    pub theta2: f64,
}

impl MinimalTwist {
    pub fn angle(&self, i: usize) -> f64 {
        self.theta1[i] + self.theta2
    }
}

/// θ₁(s) = −∫₀ˢ τ by composite trapezoid over the curve samples, and θ₂
/// from the normal at the base. Fails with `UndefinedNormal` when κ(0) is
/// too small for the normal to exist; callers may fall back to θ₂ = 0.
pub fn minimal_twist_angle(curve: &BackboneCurve) -> Result<MinimalTwist> {
    let tau = curve.torsion();
    let ds = curve.panel();
    let mut theta1 = Vec::with_capacity(tau.len());
    let mut acc = 0.0;
    theta1.push(0.0);
    for w in tau.windows(2) {
        acc -= 0.5 * ds * (w[0] + w[1]);
        theta1.push(acc);
    }
    let base = curve.sample(0);
    let frenet = base
        .frenet()
        .ok_or_else(|| Error::UndefinedNormal(base.curvature()))?;
    let n = frenet.column(1);
    let phi = n.y.atan2(n.x);
    let theta2 = std::f64::consts::FRAC_PI_2 - phi;
    Ok(MinimalTwist { theta1, theta2 })
}
