//! Builds the case model a config describes and runs its solve.

use nalgebra::{DMatrix, DVector, Vector3};

use isoprim_core::harness::{
    block_pose, block_state, chamber_state, gas_corrected_volume, pose_vector, rod2d_state,
    BlockGeometry, ChamberGeometry, RodGeometry, SurfaceGrid, SurfaceShape,
};
use isoprim_core::modal::{make_basis, BasisCase, BasisMode, ModalFunction};
use isoprim_core::primitives::Bend2d;
use isoprim_core::solver::{
    ik_jacobian, ik_projected_gradient, ik_se3_track, rod_curve, rod_shooting,
};
use isoprim_core::{
    CompositeDeformation, IkOptions, IkSolution, Primitive, QuadratureDomain, RigidPose, Rotation,
};

use crate::config::{Case, Config, Method};
use crate::error::CliError;

#[derive(Clone, Debug)]
pub enum Model {
    Block {
        geometry: BlockGeometry,
        comp: CompositeDeformation,
    },
    Chamber {
        geometry: ChamberGeometry,
        comp: CompositeDeformation,
    },
    Rod2d {
        geometry: RodGeometry,
        comp: CompositeDeformation,
    },
    Rod3d {
        geometry: RodGeometry,
        steps: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub solution: IkSolution,
    /// Norm of the pose log error for pose targets.
    pub pose_error: Option<f64>,
}

fn sines(ks: &[u32], length: f64) -> ModalFunction {
    ModalFunction::new(
        ks.iter()
            .map(|&k| BasisMode::Sine { k, scale: length })
            .collect(),
    )
}

fn block_stages(
    names: &[String],
    h: f64,
    bend: ModalFunction,
) -> Result<CompositeDeformation, CliError> {
    let mut stages = Vec::with_capacity(names.len());
    for name in names {
        stages.push(match name.as_str() {
            "twist" => Primitive::twist(make_basis(BasisCase::BlockTwist, h)?),
            "elongation" => Primitive::elongation(make_basis(BasisCase::BlockStretchRate, h)?),
            "shear" => Primitive::shear(
                make_basis(BasisCase::BlockShear, h)?,
                make_basis(BasisCase::BlockShear, h)?,
            ),
            "bend2d" => {
                Primitive::Bend2d(Bend2d::new(bend.clone(), h).with_plane_rotation(0.0, true))
            }
            other => return Err(CliError::Config(format!("unknown block stage `{other}`"))),
        });
    }
    let comp = CompositeDeformation::new(stages).with_reference_height(h);
    comp.validate_order()?;
    Ok(comp)
}

impl Model {
    pub fn build(cfg: &Config) -> Result<Self, CliError> {
        let g = &cfg.geometry;
        let ks = cfg.modes.sines.as_deref();
        Ok(match cfg.case {
            Case::Block => {
                let d = BlockGeometry::default();
                let geometry = BlockGeometry {
                    wx: g.wx.unwrap_or(d.wx),
                    wy: g.wy.unwrap_or(d.wy),
                    h: g.h.unwrap_or(d.h),
                };
                geometry.validate()?;
                let comp = match (&cfg.modes.stages, ks) {
                    (None, None) => geometry.composite()?,
                    (stages, ks) => {
                        let default = ["twist", "elongation", "shear", "bend2d"]
                            .map(String::from)
                            .to_vec();
                        let bend = match ks {
                            Some(ks) => sines(ks, geometry.h),
                            None => make_basis(BasisCase::BlockBend, geometry.h)?,
                        };
                        block_stages(stages.as_ref().unwrap_or(&default), geometry.h, bend)?
                    }
                };
                Model::Block { geometry, comp }
            }
            Case::Chamber => {
                let d = ChamberGeometry::default();
                let geometry = ChamberGeometry {
                    r_in: g.r_in.unwrap_or(d.r_in),
                    wall: g.wall.unwrap_or(d.wall),
                    h: g.h.unwrap_or(d.h),
                };
                let comp = match ks {
                    None => geometry.composite()?,
                    Some(ks) => {
                        geometry.validate()?;
                        CompositeDeformation::new(vec![Primitive::source(sines(ks, geometry.h))])
                    }
                };
                Model::Chamber { geometry, comp }
            }
            Case::Rod2d | Case::Rod3d => {
                let d = RodGeometry::default();
                let geometry = RodGeometry {
                    h: g.h.unwrap_or(d.h),
                    r: g.r.unwrap_or(d.r),
                };
                geometry.validate()?;
                if cfg.case == Case::Rod3d {
                    Model::Rod3d {
                        geometry,
                        steps: cfg.rod_steps(),
                    }
                } else {
                    let comp = match ks {
                        None => geometry.composite_2d()?,
                        Some(ks) => CompositeDeformation::new(vec![Primitive::Bend2d(
                            Bend2d::new(sines(ks, geometry.h), geometry.h),
                        )]),
                    };
                    Model::Rod2d { geometry, comp }
                }
            }
        })
    }

    pub fn case(&self) -> Case {
        match self {
            Model::Block { .. } => Case::Block,
            Model::Chamber { .. } => Case::Chamber,
            Model::Rod2d { .. } => Case::Rod2d,
            Model::Rod3d { .. } => Case::Rod3d,
        }
    }

    /// The modal composite, absent for the shooting-based 3D rod.
    pub fn composite(&self) -> Option<&CompositeDeformation> {
        match self {
            Model::Block { comp, .. } | Model::Chamber { comp, .. } | Model::Rod2d { comp, .. } => {
                Some(comp)
            }
            Model::Rod3d { .. } => None,
        }
    }

    pub fn param_count(&self) -> usize {
        self.composite().map_or(6, |c| c.param_count())
    }

    pub fn param_names(&self) -> Vec<String> {
        let Some(comp) = self.composite() else {
            return ["w1", "w2", "w3", "l1", "l2", "l3"]
                .map(String::from)
                .to_vec();
        };
        let mut names = Vec::new();
        for stage in comp.stages() {
            let n = stage.param_count();
            for j in 0..n {
                let plane =
                    matches!(stage, Primitive::Bend2d(_)) && j + 1 == n && n > stage_modes(stage);
                names.push(if plane {
                    format!("{}.ro", stage.name())
                } else {
                    format!("{}.{}", stage.name(), j + 1)
                });
            }
        }
        names
    }

    pub fn height(&self) -> f64 {
        match self {
            Model::Block { geometry, .. } => geometry.h,
            Model::Chamber { geometry, .. } => geometry.h,
            Model::Rod2d { geometry, .. } | Model::Rod3d { geometry, .. } => geometry.h,
        }
    }

    pub fn domain(&self) -> QuadratureDomain {
        match self {
            Model::Block { geometry, .. } => geometry.domain(),
            Model::Chamber { geometry, .. } => geometry.domain(),
            Model::Rod2d { geometry, .. } | Model::Rod3d { geometry, .. } => geometry.domain(),
        }
    }

    /// Visible outer surface as a structured grid.
    pub fn surface(&self, nu: usize, nv: usize) -> Result<SurfaceGrid, CliError> {
        Ok(match self {
            Model::Block { geometry: g, .. } => SurfaceGrid::block_sides(g.wx, g.wy, g.h, nu, nv)?,
            Model::Chamber { geometry: g, .. } => SurfaceGrid::cylinder(g.r_out(), g.h, nu, nv)?,
            Model::Rod2d { geometry: g, .. } | Model::Rod3d { geometry: g, .. } => {
                SurfaceGrid::cylinder(g.r, g.h, nu, nv)?
            }
        })
    }

    pub fn surface_shape(&self) -> SurfaceShape {
        match self {
            Model::Block { .. } => SurfaceShape::Box,
            _ => SurfaceShape::Tube,
        }
    }

    /// The deformation for parameters `p`.
    pub fn deformation(&self, p: &[f64]) -> Result<CompositeDeformation, CliError> {
        match self {
            Model::Rod3d { geometry, steps } => {
                if p.len() != 6 {
                    return Err(isoprim_core::Error::DimensionMismatch {
                        expected: 6,
                        got: p.len(),
                    }
                    .into());
                }
                Ok(geometry.composite_3d(rod_curve(p, geometry.h, *steps)?)?)
            }
            _ => Ok(self.composite().expect("modal case").with_params(p)?),
        }
    }

    fn target_pose(&self, cfg: &Config) -> RigidPose {
        let t = &cfg.targets;
        let [dx, dy, dz] = t.displacement.unwrap_or([0.0; 3]);
        let [rx, ry, rz] = t.rotation.unwrap_or([0.0; 3]);
        RigidPose::new(
            Rotation::from_fixed_xyz(rx, ry, rz),
            Vector3::new(0.0, 0.0, self.height()) + Vector3::new(dx, dy, dz),
        )
    }

    /// Chamber volume target after the optional gas correction (cm³).
    pub fn chamber_volume(cfg: &Config) -> Result<f64, CliError> {
        match (&cfg.targets.volume, &cfg.targets.gas) {
            (Some(v), None) => Ok(*v),
            (None, Some(g)) => Ok(gas_corrected_volume(g.vb, g.pb, g.pa, g.vi)?),
            _ => Err(CliError::Config(
                "chamber targets need exactly one of `volume` and `gas`".into(),
            )),
        }
    }

    pub fn solve(&self, cfg: &Config, weight: Option<DMatrix<f64>>) -> Result<Solved, CliError> {
        let method = cfg.method();
        let opts = IkOptions {
            weight,
            ..cfg.ik_options()
        };
        let m = self.param_count();
        let p0 = vec![0.0; m];
        let vector = |state: &(dyn Fn(&[f64]) -> isoprim_core::Result<DVector<f64>> + Sync),
                      d: &DVector<f64>| {
            let f = |p: &[f64]| state(p);
            match method {
                Method::Jacobian => ik_jacobian(f, &p0, d, &opts),
                Method::Projgrad => ik_projected_gradient(f, &p0, d, &opts),
                Method::Se3 => unreachable!("checked by validation"),
            }
        };
        Ok(match self {
            Model::Block { geometry, comp } => {
                let h = geometry.h;
                let target = self.target_pose(cfg);
                let solution = if method == Method::Se3 {
                    ik_se3_track(|p| block_pose(comp, p, h), &p0, &target, &opts)?
                } else {
                    vector(&|p| block_state(comp, p, h), &pose_vector(&target)?)?
                };
                let err = block_pose(comp, &solution.params, h)?
                    .error_to(&target)?
                    .norm();
                Solved {
                    solution,
                    pose_error: Some(err),
                }
            }
            Model::Chamber { geometry, comp } => {
                let d = DVector::from_vec(vec![Self::chamber_volume(cfg)?]);
                Solved {
                    solution: vector(&|p| chamber_state(comp, p, geometry.h), &d)?,
                    pose_error: None,
                }
            }
            Model::Rod2d { geometry, comp } => {
                let d = DVector::from_row_slice(&cfg.targets.state.unwrap_or_default());
                Solved {
                    solution: vector(&|p| rod2d_state(comp, p, geometry.h), &d)?,
                    pose_error: None,
                }
            }
            Model::Rod3d { geometry, steps } => {
                let target = self.target_pose(cfg);
                let rod = rod_shooting(&target, geometry.h, *steps, &opts)?;
                let end = rod.curve.end();
                let reached = RigidPose {
                    rotation: end.rotation,
                    translation: end.position,
                };
                let err = reached.error_to(&target)?.norm();
                Solved {
                    solution: rod.solution,
                    pose_error: Some(err),
                }
            }
        })
    }
}

fn stage_modes(stage: &Primitive) -> usize {
    match stage {
        Primitive::Bend2d(b) => b.curvature().len(),
        other => other.param_count(),
    }
}
