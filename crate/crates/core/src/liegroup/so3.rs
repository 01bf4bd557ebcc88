use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Rotations whose angle is within this margin of π have no principal log.
pub const PI_MARGIN: f64 = 1e-6;

/// Maps ℝ³ onto so(3): `hat3(eᵢ) = Eᵢ`.
pub fn hat3(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`hat3`]. Rejects matrices that are not skew-symmetric.
pub fn vee3(m: &Matrix3<f64>) -> Result<Vector3<f64>> {
    let tol = 1e-12 * m.amax().max(1.0);
    let sym = m + m.transpose();
    if sym.amax() > tol {
        return Err(Error::NotSkew);
    }
    Ok(Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]))
}

fn skew_part(m: &Matrix3<f64>) -> Vector3<f64> {
    0.5 * Vector3::new(
        m[(2, 1)] - m[(1, 2)],
        m[(0, 2)] - m[(2, 0)],
        m[(1, 0)] - m[(0, 1)],
    )
}

/// Rodrigues' formula.
pub fn exp3(w: &Vector3<f64>) -> Matrix3<f64> {
    let theta2 = w.norm_squared();
    let theta = theta2.sqrt();
    let (a, b) = if theta < 1e-6 {
        (1.0 - theta2 / 6.0, 0.5 - theta2 / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    let k = hat3(w);
    Matrix3::identity() + k * a + k * k * b
}

/// Principal logarithm as a rotation vector.
pub fn log3(r: &Matrix3<f64>) -> Result<Vector3<f64>> {
    let s = skew_part(r);
    let sin_t = s.norm();
    let cos_t = 0.5 * (r.trace() - 1.0);
    let theta = sin_t.atan2(cos_t);
    if theta > std::f64::consts::PI - PI_MARGIN {
        return Err(Error::AngleNearPi(theta));
    }
    let scale = if theta < 1e-6 {
        1.0 + theta * theta / 6.0
    } else {
        theta / sin_t
    };
    Ok(s * scale)
}

/// Two Newton steps of the polar iteration `X ← (X + X⁻ᵀ)/2`, pulling a
/// nearly-orthogonal matrix back onto SO(3).
pub fn orthonormalize(m: &Matrix3<f64>) -> Matrix3<f64> {
    let mut x = *m;
    for _ in 0..2 {
        match x.try_inverse() {
            Some(inv) => x = 0.5 * (x + inv.transpose()),
            None => break,
        }
    }
    x
}

/// A validated rotation matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation(Matrix3<f64>);

impl Rotation {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let ortho = (m.transpose() * m - Matrix3::identity()).amax();
        let det = m.determinant();
        if ortho > Self::TOLERANCE || (det - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::Invalid(format!(
                "not a rotation: |RᵀR − I| = {ortho:e}, det = {det}"
            )));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn exp(w: &Vector3<f64>) -> Self {
        Self(exp3(w))
    }

    /// Successive rotations about the fixed x, y and z axes (in that order).
    pub fn from_fixed_xyz(rx: f64, ry: f64, rz: f64) -> Self {
        let r = exp3(&Vector3::new(0.0, 0.0, rz))
            * exp3(&Vector3::new(0.0, ry, 0.0))
            * exp3(&Vector3::new(rx, 0.0, 0.0));
        Self(r)
    }

    pub fn log(&self) -> Result<Vector3<f64>> {
        log3(&self.0)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Matrix3<f64> {
        self.0
    }
}
