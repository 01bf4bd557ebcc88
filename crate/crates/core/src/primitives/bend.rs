//! Bending about a backbone curve.
//!
//! A cross-section point `y = (x₁, x₂)` at arclength `s = x₃` is carried to
//! `a(s) + R(s) [z(y), 0]` where `R = [d₁ d₂ d₃]` is the backbone frame and
//! `z` offsets `y` along the unit curvature direction `k̂`:
//!
//! ```text
//! u = k̂·y,  ν(κ, u) = (1 − √(1 − 2κu)) / κ,  z = y + (ν − u) k̂
//! ```
//!
//! With the Frenet frame this is exactly `a + ν n + x₁ b` (β = x₁); with any
//! other frame adapted to the same centerline it equals that map composed
//! with a twist about the axis, so the Jacobian determinant is 1 either way:
//! the cross-section block contributes `1/√(1 − 2κu)` and the axial factor
//! `1 − κν = √(1 − 2κu)`.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::liegroup::FrameSample;
use crate::modal::ModalFunction;
use crate::Point3;

/// Below this curvature ν is evaluated by its three-term series.
pub const KAPPA_SERIES: f64 = 1e-6;

/// ν(κ, u) and its partials `∂ν/∂u`, `∂ν/∂κ`, for κ ≥ 0.
///
/// The closed form is rationalized to `2u / (1 + √(1 − 2κu))`, which has no
/// cancellation as κ → 0.
pub fn nu(kappa: f64, u: f64) -> (f64, f64, f64) {
    if kappa.abs() < KAPPA_SERIES {
        let v = u + 0.5 * kappa * u * u + 0.5 * kappa * kappa * u * u * u;
        let du = 1.0 + kappa * u + 1.5 * kappa * kappa * u * u;
        let dk = 0.5 * u * u + kappa * u * u * u;
        return (v, du, dk);
    }
    let root = (1.0 - 2.0 * kappa * u).sqrt();
    let v = 2.0 * u / (1.0 + root);
    (v, 1.0 / root, u * v / (root * (1.0 + root)))
}

/// The literal closed form `(1 − √(1 − 2κx₂))/κ`, kept for comparison with
/// the series branch.
pub fn nu_closed_form(kappa: f64, x2: f64) -> f64 {
    (1.0 - (1.0 - 2.0 * kappa * x2).sqrt()) / kappa
}

/// Analytic partials of the normal offset ν(x₁, x₂) and binormal offset
/// β(x₁, x₂) = x₁ for a signed curvature.
#[derive(Clone, Copy, Debug)]
pub struct BendPartials {
    pub nu: f64,
    pub dnu_dx1: f64,
    pub dnu_dx2: f64,
    pub dbeta_dx1: f64,
    pub dbeta_dx2: f64,
}

impl BendPartials {
    /// `(1 − κν)(∂ν/∂x₂ ∂β/∂x₁ − ∂ν/∂x₁ ∂β/∂x₂)`, identically 1 for a
    /// volume-preserving bend.
    pub fn volume_factor(&self, kappa: f64) -> f64 {
        (1.0 - kappa * self.nu) * (self.dnu_dx2 * self.dbeta_dx1 - self.dnu_dx1 * self.dbeta_dx2)
    }
}

pub fn bend_partials(kappa: f64, _x1: f64, x2: f64) -> BendPartials {
    // ν is odd under (κ, x₂) → (−κ, −x₂)
    let (v, dv) = if kappa >= 0.0 {
        let (v, du, _) = nu(kappa, x2);
        (v, du)
    } else {
        let (v, du, _) = nu(-kappa, -x2);
        (-v, du)
    };
    BendPartials {
        nu: v,
        dnu_dx1: 0.0,
        dnu_dx2: dv,
        dbeta_dx1: 1.0,
        dbeta_dx2: 0.0,
    }
}

/// `1 − 2 k·y > 0`: the cross-section point stays on the convex side of the
/// center of curvature.
pub(crate) fn tube_valid(frame: &FrameSample, x: &Point3) -> bool {
    let (k1, k2) = frame.curvature_components();
    1.0 - 2.0 * (k1 * x.x + k2 * x.y) > 0.0
}

struct CrossSection {
    z: Vector2<f64>,
    dz_dy: Matrix2<f64>,
    dz_ds: Vector2<f64>,
}

fn cross_section(frame: &FrameSample, y: Vector2<f64>) -> CrossSection {
    let (k1, k2) = frame.curvature_components();
    let k = Vector2::new(k1, k2);
    let dk = Vector2::new(frame.omega_prime.y, -frame.omega_prime.x);
    let kappa = k.norm();
    if kappa == 0.0 {
        // one-sided limit along dk
        let dz_ds = match dk.try_normalize(0.0) {
            Some(e) => dk * (0.5 * e.dot(&y).powi(2)),
            None => Vector2::zeros(),
        };
        return CrossSection {
            z: y,
            dz_dy: Matrix2::identity(),
            dz_ds,
        };
    }
    let khat = k / kappa;
    let u = khat.dot(&y);
    let (v, v_u, v_k) = nu(kappa, u);
    let z = y + khat * (v - u);
    let dz_dy = Matrix2::identity() + khat * khat.transpose() * (v_u - 1.0);

    let dkappa = khat.dot(&dk);
    let dkhat = (dk - khat * dkappa) / kappa;
    let du = dkhat.dot(&y);
    let dv = v_k * dkappa + v_u * du;
    let dz_ds = khat * (dv - du) + dkhat * (v - u);
    CrossSection { z, dz_dy, dz_ds }
}

pub(crate) fn tube_apply(frame: &FrameSample, x: &Point3) -> Result<Point3> {
    if !tube_valid(frame, x) {
        return Err(Error::SingularInput {
            point: *x,
            stage: None,
        });
    }
    let cs = cross_section(frame, Vector2::new(x.x, x.y));
    Ok(frame.position + frame.rotation * Vector3::new(cs.z.x, cs.z.y, 0.0))
}

pub(crate) fn tube_gradient(frame: &FrameSample, x: &Point3) -> Result<Matrix3<f64>> {
    if !tube_valid(frame, x) {
        return Err(Error::SingularInput {
            point: *x,
            stage: None,
        });
    }
    let cs = cross_section(frame, Vector2::new(x.x, x.y));
    let w = frame.omega;
    let (z1, z2) = (cs.z.x, cs.z.y);
    // frame-coordinate Jacobian; d/ds picks up R' = R ω̂ acting on [z, 0]
    let m = Matrix3::new(
        cs.dz_dy[(0, 0)],
        cs.dz_dy[(0, 1)],
        cs.dz_ds.x - w.z * z2,
        cs.dz_dy[(1, 0)],
        cs.dz_dy[(1, 1)],
        cs.dz_ds.y + w.z * z1,
        0.0,
        0.0,
        1.0 + w.x * z2 - w.y * z1,
    );
    Ok(frame.rotation * m)
}

/// Gauss-Legendre nodes and weights on [-1, 1].
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

const PLANAR_PANELS: usize = 64;

/// Planar backbone in the y–z plane recovered from a curvature profile.
///
/// The tangent angle θ(s) = ∫₀ˢ κ is exact; positions integrate
/// `(sin θ, cos θ)` by 5-point Gauss-Legendre per panel with cumulative sums
/// cached at panel nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarBackbone {
    length: f64,
    nodes: Vec<(f64, f64)>,
}

impl PlanarBackbone {
    pub fn new(curvature: &ModalFunction, length: f64) -> Self {
        let ds = length / PLANAR_PANELS as f64;
        let mut nodes = Vec::with_capacity(PLANAR_PANELS + 1);
        let mut acc = (0.0, 0.0);
        nodes.push(acc);
        for i in 0..PLANAR_PANELS {
            let (dy, dz) = Self::panel_integral(curvature, i as f64 * ds, ds);
            acc = (acc.0 + dy, acc.1 + dz);
            nodes.push(acc);
        }
        Self { length, nodes }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    fn panel_integral(curvature: &ModalFunction, start: f64, width: f64) -> (f64, f64) {
        let half = 0.5 * width;
        let mid = start + half;
        GL5.iter().fold((0.0, 0.0), |(y, z), (xi, w)| {
            let theta = curvature.integral(mid + half * xi);
            (y + w * half * theta.sin(), z + w * half * theta.cos())
        })
    }

    /// `(a_y, a_z)` at arclength `s`.
    pub fn position(&self, curvature: &ModalFunction, s: f64) -> (f64, f64) {
        let ds = self.length / PLANAR_PANELS as f64;
        let i = ((s / ds).floor().max(0.0) as usize).min(PLANAR_PANELS - 1);
        let start = i as f64 * ds;
        let (y0, z0) = self.nodes[i];
        if s == start {
            return (y0, z0);
        }
        let (dy, dz) = Self::panel_integral(curvature, start, s - start);
        (y0 + dy, z0 + dz)
    }

    /// Frame data at arclength `s`: `R = [e₁, n, t]` with `t = (0, sin θ, cos θ)`.
    pub fn frame_at(&self, curvature: &ModalFunction, s: f64) -> FrameSample {
        let theta = curvature.integral(s);
        let (sn, cs) = theta.sin_cos();
        let (ay, az) = self.position(curvature, s);
        FrameSample {
            position: Vector3::new(0.0, ay, az),
            rotation: Matrix3::new(1.0, 0.0, 0.0, 0.0, cs, sn, 0.0, -sn, cs),
            omega: Vector3::new(-curvature.eval(s), 0.0, 0.0),
            omega_prime: Vector3::new(-curvature.deriv(s), 0.0, 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::BasisMode;

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        for x2 in [-3.0, -1.2, 0.4, 2.0, 3.0] {
            for kappa in [KAPPA_SERIES, -KAPPA_SERIES] {
                let p = bend_partials(kappa, 0.0, x2);
                let just_above = bend_partials(kappa * (1.0 + 1e-9), 0.0, x2);
                assert!((p.nu - just_above.nu).abs() < 1e-10);
                assert!((p.nu - nu_closed_form(kappa, x2)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rationalized_form_matches_closed_form() {
        for (k, x2) in [(0.3, 1.1), (-0.4, 0.7), (0.05, -2.0)] {
            assert!((bend_partials(k, 0.0, x2).nu - nu_closed_form(k, x2)).abs() < 1e-13);
        }
    }

    #[test]
    fn nu_partials_match_differences() {
        for (k, u) in [(0.3, 0.9), (1e-3, 2.0), (2e-7, 1.5)] {
            let (_, du, dk) = nu(k, u);
            let h = 1e-6;
            let fu = (nu(k, u + h).0 - nu(k, u - h).0) / (2.0 * h);
            assert!((fu - du).abs() < 1e-7);
            if k > 1e-5 {
                let fk = (nu(k + h, u).0 - nu(k - h, u).0) / (2.0 * h);
                assert!((fk - dk).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn straight_planar_backbone_is_axis() {
        let c = ModalFunction::new(vec![BasisMode::Sine { k: 1, scale: 5.0 }]);
        let b = PlanarBackbone::new(&c, 5.0);
        for s in [0.0, 1.3, 5.0] {
            let (y, z) = b.position(&c, s);
            assert_eq!(y, 0.0);
            assert!((z - s).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_curvature_planar_backbone_is_arc() {
        let k = 0.25;
        let c = ModalFunction::constant(k);
        let b = PlanarBackbone::new(&c, 6.0);
        let s = 4.7;
        let (y, z) = b.position(&c, s);
        assert!((y - (1.0 - (k * s).cos()) / k).abs() < 1e-13);
        assert!((z - (k * s).sin() / k).abs() < 1e-13);
    }
}
