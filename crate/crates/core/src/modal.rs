//! Scalar mode functions `m(x) = offset + Σ pᵢ φᵢ(x)`.
//!
//! Every primitive is parameterized by one or more of these. All modes have
//! closed-form derivatives and antiderivatives, so evaluation, differentiation
//! and integration from zero are exact.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A single basis function on the axial coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisMode {
    /// φ(x) = 1
    Constant,
    /// φ(x) = x
    Linear,
    /// φ(x) = sin(kπx/L)
    Sine { k: u32, scale: f64 },
    /// φ(x) = cos(kπx/L)
    Cosine { k: u32, scale: f64 },
    /// φ(x) = x(x − h), vanishing at both ends of [0, h]
    QuadraticBc { h: f64 },
}

impl BasisMode {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            BasisMode::Constant => 1.0,
            BasisMode::Linear => x,
            BasisMode::Sine { k, scale } => (f64::from(k) * PI * x / scale).sin(),
            BasisMode::Cosine { k, scale } => (f64::from(k) * PI * x / scale).cos(),
            BasisMode::QuadraticBc { h } => x * (x - h),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match *self {
            BasisMode::Constant => 0.0,
            BasisMode::Linear => 1.0,
            BasisMode::Sine { k, scale } => {
                let w = f64::from(k) * PI / scale;
                w * (w * x).cos()
            }
            BasisMode::Cosine { k, scale } => {
                let w = f64::from(k) * PI / scale;
                -w * (w * x).sin()
            }
            BasisMode::QuadraticBc { h } => 2.0 * x - h,
        }
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        match *self {
            BasisMode::Constant | BasisMode::Linear => 0.0,
            BasisMode::Sine { k, scale } => {
                let w = f64::from(k) * PI / scale;
                -w * w * (w * x).sin()
            }
            BasisMode::Cosine { k, scale } => {
                let w = f64::from(k) * PI / scale;
                -w * w * (w * x).cos()
            }
            BasisMode::QuadraticBc { .. } => 2.0,
        }
    }

    /// ∫₀ˣ φ(σ) dσ
    pub fn antideriv(&self, x: f64) -> f64 {
        match *self {
            BasisMode::Constant => x,
            BasisMode::Linear => 0.5 * x * x,
            BasisMode::Sine { k, scale } => {
                let w = f64::from(k) * PI / scale;
                // 1 − cos(wx) = 2 sin²(wx/2), free of cancellation near zero
                let s = (0.5 * w * x).sin();
                2.0 * s * s / w
            }
            BasisMode::Cosine { k, scale } => {
                let w = f64::from(k) * PI / scale;
                (w * x).sin() / w
            }
            BasisMode::QuadraticBc { h } => x * x * x / 3.0 - 0.5 * h * x * x,
        }
    }

    /// Same mode with its length scale replaced, where the mode has one.
    pub fn rescaled(&self, length: f64) -> Self {
        match *self {
            BasisMode::Sine { k, .. } => BasisMode::Sine { k, scale: length },
            BasisMode::Cosine { k, .. } => BasisMode::Cosine { k, scale: length },
            BasisMode::QuadraticBc { .. } => BasisMode::QuadraticBc { h: length },
            other => other,
        }
    }
}

/// `offset + Σ weights[i] · modes[i](x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalFunction {
    modes: Vec<BasisMode>,
    weights: Vec<f64>,
    offset: f64,
}

impl ModalFunction {
    /// Zero-weight function over the given modes.
    pub fn new(modes: Vec<BasisMode>) -> Self {
        let weights = vec![0.0; modes.len()];
        Self {
            modes,
            weights,
            offset: 0.0,
        }
    }

    pub fn with_weights(modes: Vec<BasisMode>, weights: Vec<f64>) -> Result<Self> {
        if modes.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: modes.len(),
                got: weights.len(),
            });
        }
        Ok(Self {
            modes,
            weights,
            offset: 0.0,
        })
    }

    /// Identically-constant function with no free weights.
    pub fn constant(value: f64) -> Self {
        Self {
            modes: Vec::new(),
            weights: Vec::new(),
            offset: value,
        }
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn modes(&self) -> &[BasisMode] {
        &self.modes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn set_weights(&mut self, weights: &[f64]) -> Result<()> {
        if weights.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: weights.len(),
            });
        }
        self.weights.copy_from_slice(weights);
        Ok(())
    }

    /// Replaces the length scale of every scaled mode.
    pub fn rescale(&mut self, length: f64) {
        for mode in &mut self.modes {
            *mode = mode.rescaled(length);
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.offset + self.weighted(|m| m.eval(x))
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.weighted(|m| m.deriv(x))
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        self.weighted(|m| m.second_deriv(x))
    }

    /// ∫₀ˣ m(σ) dσ, exact.
    pub fn integral(&self, x: f64) -> f64 {
        self.offset * x + self.weighted(|m| m.antideriv(x))
    }

    fn weighted(&self, f: impl Fn(&BasisMode) -> f64) -> f64 {
        self.modes
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w != 0.0)
            .map(|(m, w)| w * f(m))
            .sum()
    }
}

/// The per-case bases used by the chamber, rod and block models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisCase {
    /// Odd sines k = 1, 3, 5, 7, 9 over the chamber height.
    Chamber,
    /// Sines k = 1..6 over the rod length.
    Rod2d,
    /// Sines k = 1..4 over the block's bent arclength.
    BlockBend,
    /// Rate `1 + st·x(x − h)`.
    BlockStretchRate,
    /// Single linear mode `s·x` (one function per axis).
    BlockShear,
    /// Single linear mode `tw·x`.
    BlockTwist,
}

impl FromStr for BasisCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chamber" => Ok(BasisCase::Chamber),
            "rod2d" => Ok(BasisCase::Rod2d),
            "block-bend" => Ok(BasisCase::BlockBend),
            "block-stretch-rate" => Ok(BasisCase::BlockStretchRate),
            "block-shear" => Ok(BasisCase::BlockShear),
            "block-twist" => Ok(BasisCase::BlockTwist),
            other => Err(Error::Invalid(format!("unknown basis case `{other}`"))),
        }
    }
}

impl fmt::Display for BasisCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BasisCase::Chamber => "chamber",
            BasisCase::Rod2d => "rod2d",
            BasisCase::BlockBend => "block-bend",
            BasisCase::BlockStretchRate => "block-stretch-rate",
            BasisCase::BlockShear => "block-shear",
            BasisCase::BlockTwist => "block-twist",
        };
        f.write_str(s)
    }
}

fn sines(ks: impl IntoIterator<Item = u32>, scale: f64) -> Vec<BasisMode> {
    ks.into_iter()
        .map(|k| BasisMode::Sine { k, scale })
        .collect()
}

/// Builds the zero-weight basis for a case. `length` is the height (or
/// arclength) the boundary conditions are imposed over.
pub fn make_basis(case: BasisCase, length: f64) -> Result<ModalFunction> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Invalid(format!(
            "basis length must be positive, got {length}"
        )));
    }
    let f = match case {
        BasisCase::Chamber => ModalFunction::new(sines([1, 3, 5, 7, 9], length)),
        BasisCase::Rod2d => ModalFunction::new(sines(1..=6, length)),
        BasisCase::BlockBend => ModalFunction::new(sines(1..=4, length)),
        BasisCase::BlockStretchRate => {
            ModalFunction::new(vec![BasisMode::QuadraticBc { h: length }]).with_offset(1.0)
        }
        BasisCase::BlockShear | BasisCase::BlockTwist => {
            ModalFunction::new(vec![BasisMode::Linear])
        }
    };
    Ok(f)
}
