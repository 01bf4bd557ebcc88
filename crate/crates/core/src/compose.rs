//! Ordered composition of primitives.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::primitives::Primitive;
use crate::{Matrix3, Point3};

/// `f = fₙ ∘ … ∘ f₁`, stages stored innermost first.
///
/// When a reference height `h` is set, a trailing planar bend has its modal
/// scale tied to the stretched height: `m_e(h)` of the last elongation stage,
/// or `h` when there is none. The link is refreshed on every parameter update.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeDeformation {
    stages: Vec<Primitive>,
    reference_height: Option<f64>,
}

impl CompositeDeformation {
    pub fn new(stages: Vec<Primitive>) -> Self {
        Self {
            stages,
            reference_height: None,
        }
    }

    pub fn identity() -> Self {
        Self::new(Vec::new())
    }

    pub fn with_reference_height(mut self, h: f64) -> Self {
        self.reference_height = Some(h);
        self.relink();
        self
    }

    pub fn reference_height(&self) -> Option<f64> {
        self.reference_height
    }

    pub fn stages(&self) -> &[Primitive] {
        &self.stages
    }

    pub fn push(&mut self, stage: Primitive) {
        self.stages.push(stage);
        self.relink();
    }

    /// Fails with the index of the first stage that follows a bend.
    pub fn validate_order(&self) -> Result<()> {
        let mut seen_bend = false;
        for (i, s) in self.stages.iter().enumerate() {
            if seen_bend {
                return Err(Error::OrderViolation(i));
            }
            seen_bend = s.is_bend();
        }
        Ok(())
    }

    fn relink(&mut self) {
        let Some(h) = self.reference_height else {
            return;
        };
        let mut length = h;
        for stage in &mut self.stages {
            match stage {
                Primitive::Elongation { rate } => length = rate.integral(h),
                Primitive::Bend2d(b) if b.length() != length && length > 0.0 => {
                    b.set_length(length)
                }
                _ => {}
            }
        }
    }

    pub fn apply(&self, x: &Point3) -> Result<Point3> {
        let mut y = *x;
        for (i, s) in self.stages.iter().enumerate() {
            y = s.apply(&y).map_err(|e| e.with_stage(i))?;
        }
        Ok(y)
    }

    /// Chain-rule gradient `∇f₁ … ∇fₙ` (outermost on the left).
    pub fn gradient(&self, x: &Point3) -> Result<Matrix3> {
        Ok(self.apply_with_gradient(x)?.1)
    }

    pub fn apply_with_gradient(&self, x: &Point3) -> Result<(Point3, Matrix3)> {
        let mut y = *x;
        let mut g = Matrix3::identity();
        for (i, s) in self.stages.iter().enumerate() {
            let gi = s.gradient(&y).map_err(|e| e.with_stage(i))?;
            y = s.apply(&y).map_err(|e| e.with_stage(i))?;
            g = gi * g;
        }
        Ok((y, g))
    }

    pub fn is_valid(&self, x: &Point3) -> bool {
        self.apply(x).is_ok()
    }

    pub fn param_count(&self) -> usize {
        self.stages.iter().map(Primitive::param_count).sum()
    }

    /// Slice of the flattened parameter vector owned by each stage.
    pub fn param_ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.stages
            .iter()
            .map(|s| {
                let r = start..start + s.param_count();
                start = r.end;
                r
            })
            .collect()
    }

    pub fn params(&self) -> Vec<f64> {
        self.stages.iter().flat_map(Primitive::params).collect()
    }

    pub fn set_params(&mut self, p: &[f64]) -> Result<()> {
        let n = self.param_count();
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        let ranges = self.param_ranges();
        for (stage, r) in self.stages.iter_mut().zip(ranges) {
            stage.set_params(&p[r])?;
        }
        self.relink();
        Ok(())
    }

    /// Copy of this composite with new parameters; `self` is untouched.
    pub fn with_params(&self, p: &[f64]) -> Result<Self> {
        let mut out = self.clone();
        out.set_params(p)?;
        Ok(out)
    }
}
