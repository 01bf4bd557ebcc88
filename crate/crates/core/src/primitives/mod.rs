//! Closed-form locally volume-preserving deformation primitives.
//!
//! Each primitive maps ℝ³ → ℝ³ with an analytic deformation gradient of
//! unit determinant wherever it is valid.

pub mod bend;

use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::liegroup::{BackboneCurve, FrameSample};
use crate::modal::ModalFunction;
use crate::Point3;

pub use bend::{bend_partials, BendPartials, PlanarBackbone, KAPPA_SERIES};

/// Planar bend whose backbone lies in the y–z plane, optionally rotated about z.
#[derive(Clone, Debug, PartialEq)]
pub struct Bend2d {
    curvature: ModalFunction,
    plane_rotation: f64,
    rotation_is_parameter: bool,
    backbone: PlanarBackbone,
}

impl Bend2d {
    /// `length` is the arclength the backbone cache covers (usually the
    /// scale of the curvature modes).
    pub fn new(curvature: ModalFunction, length: f64) -> Self {
        let backbone = PlanarBackbone::new(&curvature, length);
        Self {
            curvature,
            plane_rotation: 0.0,
            rotation_is_parameter: false,
            backbone,
        }
    }

    pub fn with_plane_rotation(mut self, angle: f64, is_parameter: bool) -> Self {
        self.plane_rotation = angle;
        self.rotation_is_parameter = is_parameter;
        self
    }

    pub fn curvature(&self) -> &ModalFunction {
        &self.curvature
    }

    pub fn plane_rotation(&self) -> f64 {
        self.plane_rotation
    }

    pub fn length(&self) -> f64 {
        self.backbone.length()
    }

    /// Rescales the curvature modes to `length` and rebuilds the backbone.
    pub fn set_length(&mut self, length: f64) {
        self.curvature.rescale(length);
        self.backbone = PlanarBackbone::new(&self.curvature, length);
    }

    fn param_count(&self) -> usize {
        self.curvature.len() + usize::from(self.rotation_is_parameter)
    }

    fn to_plane(&self, x: &Point3) -> (Matrix3<f64>, Point3) {
        let rz = rot_z(self.plane_rotation);
        (rz, rz.transpose() * x)
    }

    pub fn frame_at(&self, s: f64) -> FrameSample {
        self.backbone.frame_at(&self.curvature, s)
    }
}

/// Bend about a sampled 3D backbone using the curve's own frames.
#[derive(Clone, Debug)]
pub struct Bend3d {
    backbone: Arc<BackboneCurve>,
}

impl Bend3d {
    pub fn new(backbone: Arc<BackboneCurve>) -> Self {
        Self { backbone }
    }

    pub fn backbone(&self) -> &BackboneCurve {
        &self.backbone
    }
}

impl PartialEq for Bend3d {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.backbone, &other.backbone)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Primitive {
    /// `(x₁/√r, x₂/√r, ∫₀^{x₃} r)` with `r = m_e′(x₃) > 0`.
    Elongation {
        rate: ModalFunction,
    },
    /// Rotation of each plane x₃ = const about z by `m_θ(x₃)`.
    Twist {
        angle: ModalFunction,
    },
    /// Translation of each plane by `(m_s1(x₃), m_s2(x₃))`.
    Shear {
        s1: ModalFunction,
        s2: ModalFunction,
    },
    Bend2d(Bend2d),
    Bend3d(Bend3d),
    /// Radial source: `ρ ↦ √(m_c(x₃) + ρ²)` in each plane.
    Source {
        strength: ModalFunction,
    },
}

fn rot_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn singular(x: &Point3) -> Error {
    Error::SingularInput {
        point: *x,
        stage: None,
    }
}

impl Primitive {
    pub fn elongation(rate: ModalFunction) -> Self {
        Primitive::Elongation { rate }
    }

    pub fn twist(angle: ModalFunction) -> Self {
        Primitive::Twist { angle }
    }

    pub fn shear(s1: ModalFunction, s2: ModalFunction) -> Self {
        Primitive::Shear { s1, s2 }
    }

    pub fn source(strength: ModalFunction) -> Self {
        Primitive::Source { strength }
    }

    pub fn is_bend(&self) -> bool {
        matches!(self, Primitive::Bend2d(_) | Primitive::Bend3d(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Primitive::Elongation { .. } => "elongation",
            Primitive::Twist { .. } => "twist",
            Primitive::Shear { .. } => "shear",
            Primitive::Bend2d(_) => "bend2d",
            Primitive::Bend3d(_) => "bend3d",
            Primitive::Source { .. } => "source",
        }
    }

    pub fn validity(&self, x: &Point3) -> bool {
        match self {
            Primitive::Elongation { rate } => rate.eval(x.z) > 0.0,
            Primitive::Twist { .. } | Primitive::Shear { .. } => true,
            Primitive::Bend2d(b) => {
                let (_, y) = b.to_plane(x);
                1.0 - 2.0 * b.curvature.eval(y.z) * y.y > 0.0
            }
            Primitive::Bend3d(b) => bend::tube_valid(&b.backbone.frame_at(x.z), x),
            Primitive::Source { strength } => {
                let m = strength.eval(x.z);
                let rho2 = x.x * x.x + x.y * x.y;
                if rho2 > 0.0 {
                    m + rho2 > 0.0
                } else {
                    // the axis is only admissible where the map is the identity
                    m == 0.0 && strength.deriv(x.z) == 0.0
                }
            }
        }
    }

    pub fn apply(&self, x: &Point3) -> Result<Point3> {
        if !self.validity(x) {
            return Err(singular(x));
        }
        let out = match self {
            Primitive::Elongation { rate } => {
                let r = rate.eval(x.z);
                let inv = 1.0 / r.sqrt();
                Vector3::new(x.x * inv, x.y * inv, rate.integral(x.z))
            }
            Primitive::Twist { angle } => {
                let (s, c) = angle.eval(x.z).sin_cos();
                Vector3::new(x.x * c - x.y * s, x.x * s + x.y * c, x.z)
            }
            Primitive::Shear { s1, s2 } => {
                Vector3::new(x.x + s1.eval(x.z), x.y + s2.eval(x.z), x.z)
            }
            Primitive::Bend2d(b) => {
                let (rz, y) = b.to_plane(x);
                rz * bend::tube_apply(&b.frame_at(y.z), &y)?
            }
            Primitive::Bend3d(b) => bend::tube_apply(&b.backbone.frame_at(x.z), x)?,
            Primitive::Source { strength } => {
                let rho2 = x.x * x.x + x.y * x.y;
                if rho2 == 0.0 {
                    *x
                } else {
                    let scale = ((strength.eval(x.z) + rho2) / rho2).sqrt();
                    Vector3::new(x.x * scale, x.y * scale, x.z)
                }
            }
        };
        Ok(out)
    }

    pub fn gradient(&self, x: &Point3) -> Result<Matrix3<f64>> {
        if !self.validity(x) {
            return Err(singular(x));
        }
        let g = match self {
            Primitive::Elongation { rate } => {
                let r = rate.eval(x.z);
                let dr = rate.deriv(x.z);
                let inv = 1.0 / r.sqrt();
                let c = -0.5 * dr * inv / r;
                Matrix3::new(inv, 0.0, c * x.x, 0.0, inv, c * x.y, 0.0, 0.0, r)
            }
            Primitive::Twist { angle } => {
                let (s, c) = angle.eval(x.z).sin_cos();
                let d = angle.deriv(x.z);
                Matrix3::new(
                    c,
                    -s,
                    -d * (x.x * s + x.y * c),
                    s,
                    c,
                    d * (x.x * c - x.y * s),
                    0.0,
                    0.0,
                    1.0,
                )
            }
            Primitive::Shear { s1, s2 } => Matrix3::new(
                1.0,
                0.0,
                s1.deriv(x.z),
                0.0,
                1.0,
                s2.deriv(x.z),
                0.0,
                0.0,
                1.0,
            ),
            Primitive::Bend2d(b) => {
                let (rz, y) = b.to_plane(x);
                rz * bend::tube_gradient(&b.frame_at(y.z), &y)? * rz.transpose()
            }
            Primitive::Bend3d(b) => bend::tube_gradient(&b.backbone.frame_at(x.z), x)?,
            Primitive::Source { strength } => {
                let rho2 = x.x * x.x + x.y * x.y;
                if rho2 == 0.0 {
                    return Ok(Matrix3::identity());
                }
                let m = strength.eval(x.z);
                let dm = strength.deriv(x.z);
                let big = (m + rho2).sqrt();
                let rho = rho2.sqrt();
                let a = big / rho;
                // ∂(R/ρ)/∂xᵢ = −xᵢ m / (R ρ³)
                let c = -m / (big * rho2 * rho);
                let dz = dm / (2.0 * big * rho);
                Matrix3::new(
                    a + c * x.x * x.x,
                    c * x.x * x.y,
                    dz * x.x,
                    c * x.x * x.y,
                    a + c * x.y * x.y,
                    dz * x.y,
                    0.0,
                    0.0,
                    1.0,
                )
            }
        };
        Ok(g)
    }

    pub fn param_count(&self) -> usize {
        match self {
            Primitive::Elongation { rate } => rate.len(),
            Primitive::Twist { angle } => angle.len(),
            Primitive::Shear { s1, s2 } => s1.len() + s2.len(),
            Primitive::Bend2d(b) => b.param_count(),
            Primitive::Bend3d(_) => 0,
            Primitive::Source { strength } => strength.len(),
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match self {
            Primitive::Elongation { rate: f }
            | Primitive::Twist { angle: f }
            | Primitive::Source { strength: f } => f.weights().to_vec(),
            Primitive::Shear { s1, s2 } => [s1.weights(), s2.weights()].concat(),
            Primitive::Bend2d(b) => {
                let mut p = b.curvature.weights().to_vec();
                if b.rotation_is_parameter {
                    p.push(b.plane_rotation);
                }
                p
            }
            Primitive::Bend3d(_) => Vec::new(),
        }
    }

    /// Overwrites this stage's free weights. `p.len()` must equal
    /// [`param_count`](Self::param_count).
    pub fn set_params(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.param_count() {
            return Err(Error::DimensionMismatch {
                expected: self.param_count(),
                got: p.len(),
            });
        }
        match self {
            Primitive::Elongation { rate: f }
            | Primitive::Twist { angle: f }
            | Primitive::Source { strength: f } => f.set_weights(p)?,
            Primitive::Shear { s1, s2 } => {
                let (a, b) = p.split_at(s1.len());
                s1.set_weights(a)?;
                s2.set_weights(b)?;
            }
            Primitive::Bend2d(b) => {
                let n = b.curvature.len();
                b.curvature.set_weights(&p[..n])?;
                if b.rotation_is_parameter {
                    b.plane_rotation = p[n];
                }
                b.backbone = PlanarBackbone::new(&b.curvature, b.backbone.length());
            }
            Primitive::Bend3d(_) => {}
        }
        Ok(())
    }
}
