//! Case-study models, state extractors, and node-data comparison.

mod nodes;

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DVector, Vector3};

use crate::compose::CompositeDeformation;
use crate::error::{Error, Result};
use crate::liegroup::{BackboneCurve, RigidPose, Rotation};
use crate::mechanics::QuadratureDomain;
use crate::modal::{make_basis, BasisCase, ModalFunction};
use crate::primitives::{Bend2d, Bend3d, Primitive};
use crate::Point3;

pub use nodes::{
    error_metric, export_points, format_nodes, format_obj, ingest_nodes, parse_nodes, surface_ids,
    write_nodes, ErrorReport, ExportFormat, NodeError, NodeRole, NodeSet, NodeSource, Sampling,
    SurfaceGrid, SurfaceShape,
};

/// Inflatable cylindrical chamber (cm).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChamberGeometry {
    pub r_in: f64,
    pub wall: f64,
    pub h: f64,
}

impl Default for ChamberGeometry {
    fn default() -> Self {
        Self {
            r_in: 1.6,
            wall: 0.2,
            h: 10.0,
        }
    }
}

/// Slender rod (cm).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RodGeometry {
    pub h: f64,
    pub r: f64,
}

impl Default for RodGeometry {
    fn default() -> Self {
        Self { h: 15.0, r: 0.45 }
    }
}

/// Rectangular block with its bottom face centered at the origin (cm).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockGeometry {
    pub wx: f64,
    pub wy: f64,
    pub h: f64,
}

impl Default for BlockGeometry {
    fn default() -> Self {
        Self {
            wx: 3.0,
            wy: 3.0,
            h: 6.0,
        }
    }
}

fn positive(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(Error::Invalid(
            "geometry dimensions must be positive".into(),
        ))
    }
}

impl ChamberGeometry {
    pub fn validate(&self) -> Result<()> {
        positive(&[self.r_in, self.wall, self.h])
    }

    pub fn r_out(&self) -> f64 {
        self.r_in + self.wall
    }

    pub fn domain(&self) -> QuadratureDomain {
        QuadratureDomain::chamber_wall(self.r_in, self.r_out(), self.h)
    }

    /// Source primitive over the chamber height with the odd-sine basis.
    pub fn composite(&self) -> Result<CompositeDeformation> {
        self.validate()?;
        Ok(CompositeDeformation::new(vec![Primitive::source(
            make_basis(BasisCase::Chamber, self.h)?,
        )]))
    }
}

impl RodGeometry {
    pub fn validate(&self) -> Result<()> {
        positive(&[self.h, self.r])
    }

    pub fn domain(&self) -> QuadratureDomain {
        QuadratureDomain::rod(self.r, self.h)
    }

    /// Planar bend in the y–z plane with the rod sine basis.
    pub fn composite_2d(&self) -> Result<CompositeDeformation> {
        self.validate()?;
        let bend = Bend2d::new(make_basis(BasisCase::Rod2d, self.h)?, self.h);
        Ok(CompositeDeformation::new(vec![Primitive::Bend2d(bend)]))
    }

    /// Bend about a solved backbone.
    pub fn composite_3d(&self, curve: BackboneCurve) -> Result<CompositeDeformation> {
        self.validate()?;
        if (curve.length() - self.h).abs() > 1e-9 * self.h {
            return Err(Error::Invalid(format!(
                "backbone length {} differs from rod height {}",
                curve.length(),
                self.h
            )));
        }
        Ok(CompositeDeformation::new(vec![Primitive::Bend3d(
            Bend3d::new(Arc::new(curve)),
        )]))
    }
}

impl BlockGeometry {
    pub fn validate(&self) -> Result<()> {
        positive(&[self.wx, self.wy, self.h])
    }

    pub fn domain(&self) -> QuadratureDomain {
        QuadratureDomain::block(self.wx, self.wy, self.h)
    }

    /// Twist, stretch, shear, then a planar bend whose plane rotation is a
    /// free parameter. Weights are ordered `[tw, st, s1, s2, b1..b4, ro]`.
    pub fn composite(&self) -> Result<CompositeDeformation> {
        self.validate()?;
        let h = self.h;
        let bend =
            Bend2d::new(make_basis(BasisCase::BlockBend, h)?, h).with_plane_rotation(0.0, true);
        Ok(CompositeDeformation::new(vec![
            Primitive::twist(make_basis(BasisCase::BlockTwist, h)?),
            Primitive::elongation(make_basis(BasisCase::BlockStretchRate, h)?),
            Primitive::shear(
                make_basis(BasisCase::BlockShear, h)?,
                make_basis(BasisCase::BlockShear, h)?,
            ),
            Primitive::Bend2d(bend),
        ])
        .with_reference_height(h))
    }

    /// Top-plane pose after displacing its center by `displacement` and
    /// rotating it by fixed-axis angles about x, then y, then z.
    pub fn target(&self, displacement: Vector3<f64>, rotation: Vector3<f64>) -> RigidPose {
        RigidPose::new(
            Rotation::from_fixed_xyz(rotation.x, rotation.y, rotation.z),
            Vector3::new(0.0, 0.0, self.h) + displacement,
        )
    }
}

/// Rigid pose of the plane `x₃ = h` carried by `comp`, from its center and
/// two unit in-plane offsets.
pub fn top_plane_pose(comp: &CompositeDeformation, h: f64) -> Result<RigidPose> {
    let c = Point3::new(0.0, 0.0, h);
    let o = comp.apply(&c)?;
    let u = comp.apply(&(c + Vector3::x()))? - o;
    let v = comp.apply(&(c + Vector3::y()))? - o;
    let (lu, lv) = (u.norm(), v.norm());
    if (lu - 1.0).abs() > 1e-6 || (lv - 1.0).abs() > 1e-6 {
        return Err(Error::NonRigidTopPlane(lu, lv));
    }
    let r1 = u / lu;
    let r2 = (v - r1 * r1.dot(&v)).normalize();
    let r3 = r1.cross(&r2);
    Ok(RigidPose {
        rotation: nalgebra::Matrix3::from_columns(&[r1, r2, r3]),
        translation: o,
    })
}

/// `[t; log R]`, the vector state of a pose.
pub fn pose_vector(g: &RigidPose) -> Result<DVector<f64>> {
    let w = Rotation::new(g.rotation)?.log()?;
    let t = g.translation;
    Ok(DVector::from_vec(vec![t.x, t.y, t.z, w.x, w.y, w.z]))
}

/// Vector state of the block: the top-plane pose as `[t; log R]`.
pub fn block_state(comp: &CompositeDeformation, p: &[f64], h: f64) -> Result<DVector<f64>> {
    pose_vector(&top_plane_pose(&comp.with_params(p)?, h)?)
}

pub fn block_pose(comp: &CompositeDeformation, p: &[f64], h: f64) -> Result<RigidPose> {
    top_plane_pose(&comp.with_params(p)?, h)
}

/// Planar rod state `[t_y, t_z, θ_x]` of the top plane.
pub fn rod2d_state(comp: &CompositeDeformation, p: &[f64], h: f64) -> Result<DVector<f64>> {
    let v = pose_vector(&top_plane_pose(&comp.with_params(p)?, h)?)?;
    Ok(DVector::from_vec(vec![v[1], v[2], v[3]]))
}

/// `π ∫₀ᴸ m_c` without a sign check; the state used inside the chamber solve.
pub fn volume_change_unchecked(strength: &ModalFunction, length: f64) -> f64 {
    PI * (strength.integral(length) - strength.integral(0.0))
}

/// Enclosed-volume change of a cavity opened by a source of strength
/// `m_c` over `[0, L]`. Fails if `m_c` is negative anywhere on a fine
/// sampling of the interval.
pub fn chamber_volume_change(strength: &ModalFunction, length: f64) -> Result<f64> {
    const SAMPLES: usize = 1024;
    for i in 0..=SAMPLES {
        let x = length * i as f64 / SAMPLES as f64;
        if strength.eval(x) < -1e-12 {
            return Err(Error::NegativeCavity(x));
        }
    }
    Ok(volume_change_unchecked(strength, length))
}

/// Enclosed-volume change of the cavity whose wall is the cylinder
/// `ρ = r_in`, `0 ≤ x₃ ≤ h`, by the divergence theorem over the deformed
/// wall. End caps must stay in their planes, which holds for maps that keep
/// `x₃` fixed.
pub fn surface_volume_change(
    comp: &CompositeDeformation,
    r_in: f64,
    h: f64,
    n_theta: usize,
    n_z: usize,
) -> Result<f64> {
    let (dt, dz) = (2.0 * PI / n_theta as f64, h / n_z as f64);
    let mut rows = Vec::with_capacity(n_z);
    for j in 0..n_z {
        let z = (j as f64 + 0.5) * dz;
        let mut row = 0.0;
        for i in 0..n_theta {
            let (s, c) = ((i as f64 + 0.5) * dt).sin_cos();
            let x = Point3::new(r_in * c, r_in * s, z);
            let (y, f) = comp.apply_with_gradient(&x)?;
            let ft = f * Vector3::new(-r_in * s, r_in * c, 0.0);
            let fz = f.column(2).into_owned();
            let n = ft.cross(&fz);
            row += y.x * n.x + y.y * n.y;
        }
        rows.push(0.5 * row * dt * dz);
    }
    Ok(crate::mechanics::pairwise_sum(&rows) - PI * r_in * r_in * h)
}

/// Chamber state `[ΔV]` for source weights `p`.
pub fn chamber_state(comp: &CompositeDeformation, p: &[f64], h: f64) -> Result<DVector<f64>> {
    let comp = comp.with_params(p)?;
    let Some(Primitive::Source { strength }) = comp.stages().first() else {
        return Err(Error::Invalid(
            "chamber model must start with a source stage".into(),
        ));
    };
    Ok(DVector::from_vec(vec![volume_change_unchecked(
        strength, h,
    )]))
}

/// Volume actually driven into the chamber when a reservoir `vb` at
/// pressure `pb` is compressed to `pa` by injecting `vi`, by the ideal gas law.
pub fn gas_corrected_volume(vb: f64, pb: f64, pa: f64, vi: f64) -> Result<f64> {
    if !(pb > 0.0 && pa > 0.0) {
        return Err(Error::Invalid("pressures must be positive".into()));
    }
    let va = vb * pb / pa;
    Ok(vi - (vb - va))
}
