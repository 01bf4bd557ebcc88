//! Reduced-order kinematics for incompressible soft bodies.
//!
//! Large deformations are written as compositions of closed-form,
//! locally volume-preserving primitives (elongation, twist, shear, bending,
//! source). Each primitive is driven by scalar modal functions whose weights
//! are the degrees of freedom. Inverse kinematics over those weights drives a
//! body to satisfy kinematic boundary conditions, optionally weighted by a
//! Mooney-Rivlin strain energy fit.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compose;
pub mod error;
pub mod harness;
pub mod liegroup;
pub mod mechanics;
pub mod modal;
pub mod primitives;
pub mod solver;

pub use compose::CompositeDeformation;
pub use error::{Error, Result};
pub use liegroup::{BackboneCurve, RigidPose, Rotation, Twist6};
pub use mechanics::{Material, QuadratureDomain, WeightFit};
pub use modal::{BasisCase, BasisMode, ModalFunction};
pub use primitives::Primitive;
pub use solver::{IkOptions, IkSolution, TraceRecord};

/// Points and vectors in the reference/deformed configuration (cm).
pub type Point3 = nalgebra::Vector3<f64>;
pub type Matrix3 = nalgebra::Matrix3<f64>;
