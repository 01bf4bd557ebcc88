use std::ops::Mul;

use nalgebra::{Matrix3, Matrix4, Matrix6, Vector3, Vector6};

use super::so3::{exp3, hat3, log3, vee3, Rotation};
use crate::error::{Error, Result};

/// Lie-algebra coordinates of se(3), rotational part first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Twist6(pub Vector6<f64>);

impl Twist6 {
    pub fn new(rotational: Vector3<f64>, translational: Vector3<f64>) -> Self {
        Self(Vector6::new(
            rotational.x,
            rotational.y,
            rotational.z,
            translational.x,
            translational.y,
            translational.z,
        ))
    }

    pub fn rotational(&self) -> Vector3<f64> {
        self.0.fixed_rows::<3>(0).into()
    }

    pub fn translational(&self) -> Vector3<f64> {
        self.0.fixed_rows::<3>(3).into()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self(self.0 * t)
    }
}

/// `hat6(ẽᵢ) = Ẽᵢ`.
pub fn hat6(xi: &Vector6<f64>) -> Matrix4<f64> {
    let w = hat3(&xi.fixed_rows::<3>(0).into());
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&w);
    m[(0, 3)] = xi[3];
    m[(1, 3)] = xi[4];
    m[(2, 3)] = xi[5];
    m
}

pub fn vee6(m: &Matrix4<f64>) -> Result<Vector6<f64>> {
    if m.row(3).amax() > 1e-12 * m.amax().max(1.0) {
        return Err(Error::NotSkew);
    }
    let w = vee3(&m.fixed_view::<3, 3>(0, 0).into_owned())?;
    Ok(Vector6::new(w.x, w.y, w.z, m[(0, 3)], m[(1, 3)], m[(2, 3)]))
}

/// Element of SE(3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidPose {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl Default for RigidPose {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidPose {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Rotation, translation: Vector3<f64>) -> Self {
        Self {
            rotation: rotation.into_inner(),
            translation,
        }
    }

    pub fn from_translation(translation: Vector3<f64>) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation,
        }
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn act(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }

    pub fn exp(xi: &Twist6) -> Self {
        let w = xi.rotational();
        let v = xi.translational();
        let theta2 = w.norm_squared();
        let theta = theta2.sqrt();
        let (b, c) = if theta < 1e-4 {
            (0.5 - theta2 / 24.0, 1.0 / 6.0 - theta2 / 120.0)
        } else {
            (
                (1.0 - theta.cos()) / theta2,
                (theta - theta.sin()) / (theta2 * theta),
            )
        };
        let k = hat3(&w);
        let jac = Matrix3::identity() + k * b + k * k * c;
        Self {
            rotation: exp3(&w),
            translation: jac * v,
        }
    }

    /// Principal logarithm.
    pub fn log(&self) -> Result<Twist6> {
        let w = log3(&self.rotation)?;
        let theta2 = w.norm_squared();
        let theta = theta2.sqrt();
        let d = if theta < 1e-4 {
            1.0 / 12.0 + theta2 / 720.0
        } else {
            (1.0 - theta * theta.sin() / (2.0 * (1.0 - theta.cos()))) / theta2
        };
        let k = hat3(&w);
        let jac_inv = Matrix3::identity() - 0.5 * k + k * k * d;
        Ok(Twist6::new(w, jac_inv * self.translation))
    }

    /// Body-frame error twist `log(self⁻¹ · other)`.
    pub fn error_to(&self, other: &RigidPose) -> Result<Twist6> {
        (self.inverse() * *other).log()
    }

    pub fn adjoint(&self) -> Matrix6<f64> {
        adjoint(self)
    }
}

impl Mul for RigidPose {
    type Output = RigidPose;

    fn mul(self, rhs: RigidPose) -> RigidPose {
        RigidPose {
            rotation: self.rotation * rhs.rotation,
            translation: self.rotation * rhs.translation + self.translation,
        }
    }
}

/// `Ad(g) = [[R, 0], [t̂R, R]]`.
pub fn adjoint(g: &RigidPose) -> Matrix6<f64> {
    let mut m = Matrix6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&g.rotation);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(&g.rotation);
    m.fixed_view_mut::<3, 3>(3, 0)
        .copy_from(&(hat3(&g.translation) * g.rotation));
    m
}
