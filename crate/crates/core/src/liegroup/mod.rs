//! SO(3)/SE(3) operators, backbone curves, and minimal-twist framing.
//!
//! Twist coordinates are ordered rotational first: ξ = (ω, v).

mod backbone;
mod se3;
mod so3;

pub use backbone::{
    integrate_backbone, integrate_backbone_with_rate, minimal_twist_angle, BackboneCurve,
    FrameSample, MinimalTwist,
};
pub use se3::{adjoint, hat6, vee6, RigidPose, Twist6};
pub use so3::{exp3, hat3, log3, orthonormalize, vee3, Rotation};
