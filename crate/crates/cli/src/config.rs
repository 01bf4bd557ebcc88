//! TOML run configuration. See `configs/SCHEMA.md` for the full schema.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use isoprim_core::solver::{rod_options, DEFAULT_ROD_STEPS};
use isoprim_core::{IkOptions, Material};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Chamber,
    Rod2d,
    Rod3d,
    Block,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Chamber => "chamber",
            Case::Rod2d => "rod2d",
            Case::Rod3d => "rod3d",
            Case::Block => "block",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Jacobian,
    Projgrad,
    Se3,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Jacobian => "jacobian",
            Method::Projgrad => "projgrad",
            Method::Se3 => "se3",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub r_in: Option<f64>,
    pub wall: Option<f64>,
    pub h: Option<f64>,
    pub r: Option<f64>,
    pub wx: Option<f64>,
    pub wy: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub name: Option<String>,
    pub c10: Option<f64>,
    pub c01: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Modes {
    /// Sine wavenumbers of the case's sine family (chamber source, rod
    /// curvature, block bend).
    pub sines: Option<Vec<u32>>,
    /// Block stage order, innermost first.
    pub stages: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Solver {
    pub method: Option<Method>,
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
    pub fd_step: Option<f64>,
    pub step_fraction: Option<f64>,
    pub alpha: Option<f64>,
    pub damping: Option<f64>,
    pub damping_threshold: Option<f64>,
    pub trajectory_steps: Option<usize>,
    pub dt: Option<f64>,
    pub rod_steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    /// `identity`, `fit`, or a path to a weight-matrix CSV.
    #[serde(default = "default_weight_mode")]
    pub mode: String,
    pub samples: Option<usize>,
    #[serde(default = "default_magnitude")]
    pub magnitude: f64,
    /// Relative eigenvalue floor applied to a fitted matrix.
    pub floor: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_weight_mode() -> String {
    "identity".into()
}

fn default_magnitude() -> f64 {
    1e-3
}

impl Default for Weights {
    fn default() -> Self {
        Self {
            mode: default_weight_mode(),
            samples: None,
            magnitude: default_magnitude(),
            floor: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gas {
    pub vb: f64,
    pub pb: f64,
    pub pa: f64,
    pub vi: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Targets {
    /// Top-plane center displacement (cm).
    pub displacement: Option<[f64; 3]>,
    /// Fixed-axis top-plane rotation about x, then y, then z (rad).
    pub rotation: Option<[f64; 3]>,
    /// Chamber inflation volume (cm³).
    pub volume: Option<f64>,
    /// Chamber volume from a syringe reservoir by the ideal gas law.
    pub gas: Option<Gas>,
    /// Planar rod top-plane state `[t_y, t_z, θ_x]`.
    pub state: Option<[f64; 3]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub surface_grid: Option<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub case: Case,
    #[serde(default)]
    pub geometry: Geometry,
    #[serde(default)]
    pub material: MaterialConfig,
    #[serde(default)]
    pub modes: Modes,
    #[serde(default)]
    pub solver: Solver,
    #[serde(default)]
    pub weights: Weights,
    #[serde(default)]
    pub targets: Targets,
    #[serde(default)]
    pub output: Output,
}

impl FromStr for Config {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        toml::from_str(s).map_err(|e| CliError::Config(e.to_string()))
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn material(&self) -> Result<Material, CliError> {
        let m = &self.material;
        match (&m.name, m.c10, m.c01) {
            (Some(name), None, None) => {
                Material::by_name(name).ok_or_else(|| invalid(format!("unknown material `{name}`")))
            }
            (None, Some(c10), Some(c01)) => Ok(Material::new(c10, c01)?),
            (None, None, None) => Ok(Material::ECOFLEX_00_30),
            _ => Err(invalid(
                "material takes either `name` or both `c10` and `c01`",
            )),
        }
    }

    pub fn method(&self) -> Method {
        self.solver.method.unwrap_or(match self.case {
            Case::Rod3d => Method::Se3,
            _ => Method::Jacobian,
        })
    }

    pub fn rod_steps(&self) -> usize {
        self.solver.rod_steps.unwrap_or(DEFAULT_ROD_STEPS)
    }

    /// Solver options with unset keys at their defaults (the rod defaults
    /// for the 3D rod).
    pub fn ik_options(&self) -> IkOptions {
        let s = &self.solver;
        let base = match self.case {
            Case::Rod3d => rod_options(),
            _ => IkOptions::default(),
        };
        IkOptions {
            max_iters: s.max_iters.unwrap_or(base.max_iters),
            tol: s.tol.unwrap_or(base.tol),
            fd_step: s.fd_step.unwrap_or(base.fd_step),
            step_fraction: s.step_fraction.unwrap_or(base.step_fraction),
            alpha: s.alpha.unwrap_or(base.alpha),
            damping: s.damping.unwrap_or(base.damping),
            damping_threshold: s.damping_threshold.unwrap_or(base.damping_threshold),
            weight: None,
            trajectory_steps: s.trajectory_steps.unwrap_or(base.trajectory_steps),
            dt: s.dt.or(base.dt),
        }
    }

    /// Case-dependent checks that the schema cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.geometry;
        let allowed: &[&str] = match self.case {
            Case::Chamber => &["r_in", "wall", "h"],
            Case::Rod2d | Case::Rod3d => &["h", "r"],
            Case::Block => &["wx", "wy", "h"],
        };
        for (key, value) in [
            ("r_in", g.r_in),
            ("wall", g.wall),
            ("h", g.h),
            ("r", g.r),
            ("wx", g.wx),
            ("wy", g.wy),
        ] {
            if value.is_some() && !allowed.contains(&key) {
                return Err(invalid(format!(
                    "geometry.{key} does not apply to the {} case",
                    self.case
                )));
            }
        }
        self.material()?;
        self.ik_options().validate()?;

        let method = self.method();
        let ok = match self.case {
            Case::Block => true,
            Case::Chamber | Case::Rod2d => method != Method::Se3,
            Case::Rod3d => method == Method::Se3,
        };
        if !ok {
            return Err(invalid(format!(
                "solver `{method}` does not apply to the {} case",
                self.case
            )));
        }
        if self.modes.stages.is_some() && self.case != Case::Block {
            return Err(invalid("modes.stages applies to the block case only"));
        }
        if self.modes.sines.is_some() && self.case == Case::Rod3d {
            return Err(invalid("the 3D rod has no modal basis"));
        }
        if let Some(ks) = &self.modes.sines {
            if ks.is_empty() || ks.contains(&0) {
                return Err(invalid("modes.sines needs positive wavenumbers"));
            }
        }
        if self.case == Case::Rod3d && self.weights.mode != "identity" {
            return Err(invalid("the 3D rod shooting solve takes no weight matrix"));
        }

        let t = &self.targets;
        let given = |b: bool, name: &str| -> Result<(), CliError> {
            if b {
                Err(invalid(format!(
                    "targets.{name} does not apply to the {} case",
                    self.case
                )))
            } else {
                Ok(())
            }
        };
        match self.case {
            Case::Block | Case::Rod3d => {
                given(t.volume.is_some(), "volume")?;
                given(t.gas.is_some(), "gas")?;
                given(t.state.is_some(), "state")?;
                if t.displacement.is_none() && t.rotation.is_none() {
                    return Err(invalid("targets need `displacement` and/or `rotation`"));
                }
            }
            Case::Chamber => {
                given(t.displacement.is_some(), "displacement")?;
                given(t.rotation.is_some(), "rotation")?;
                given(t.state.is_some(), "state")?;
                if t.volume.is_some() == t.gas.is_some() {
                    return Err(invalid(
                        "chamber targets need exactly one of `volume` and `gas`",
                    ));
                }
            }
            Case::Rod2d => {
                given(t.displacement.is_some(), "displacement")?;
                given(t.rotation.is_some(), "rotation")?;
                given(t.volume.is_some(), "volume")?;
                given(t.gas.is_some(), "gas")?;
                if t.state.is_none() {
                    return Err(invalid("rod2d targets need `state`"));
                }
            }
        }
        if let Some([nu, nv]) = self.output.surface_grid {
            if nu < 2 || nv < 2 {
                return Err(invalid("output.surface_grid needs at least 2 × 2 points"));
            }
        }
        Ok(())
    }
}
