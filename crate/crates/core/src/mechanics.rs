//! Mooney-Rivlin strain energy over quadrature domains and the energy-fitted
//! weight matrix used by the pseudoinverse.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::compose::CompositeDeformation;
use crate::error::{Error, Result};
use crate::{Matrix3, Point3};

/// Two-term Mooney-Rivlin coefficients in kPa.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Material {
    pub c10: f64,
    pub c01: f64,
}

impl Material {
    pub const ECOFLEX_00_10: Material = Material {
        c10: 0.624,
        c01: 0.746,
    };
    pub const ECOFLEX_00_30: Material = Material { c10: 5.6, c01: 6.3 };
    pub const ECOFLEX_00_50: Material = Material {
        c10: 10.4,
        c01: 21.4,
    };
    pub const DRAGONSKIN_30: Material = Material {
        c10: 1.19,
        c01: 23.028,
    };

    pub fn new(c10: f64, c01: f64) -> Result<Self> {
        if !(c10.is_finite() && c01.is_finite()) {
            return Err(Error::Invalid(
                "material coefficients must be finite".into(),
            ));
        }
        Ok(Self { c10, c01 })
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().replace([' ', '_'], "-").as_str() {
            "ecoflex-00-10" => Some(Self::ECOFLEX_00_10),
            "ecoflex-00-30" => Some(Self::ECOFLEX_00_30),
            "ecoflex-00-50" => Some(Self::ECOFLEX_00_50),
            "dragonskin-30" => Some(Self::DRAGONSKIN_30),
            _ => None,
        }
    }
}

/// `(I₁, I₂, I₃)` of a symmetric tensor.
pub fn invariants(b: &Matrix3) -> Result<(f64, f64, f64)> {
    if (b - b.transpose()).amax() > 1e-8 {
        return Err(Error::NotSymmetric);
    }
    let tr = b.trace();
    let tr2 = (b * b).trace();
    Ok((tr, 0.5 * (tr * tr - tr2), b.determinant()))
}

/// `C₁₀(I₁ − 3) + C₀₁(I₂ − 3)` with `B = F Fᵀ`, for isochoric `F` only.
pub fn mr_density(f: &Matrix3, mat: &Material) -> Result<f64> {
    let det = f.determinant();
    if (det - 1.0).abs() > 1e-6 {
        return Err(Error::NotIsochoric(det));
    }
    let (i1, i2, _) = invariants(&(f * f.transpose()))?;
    Ok(mat.c10 * (i1 - 3.0) + mat.c01 * (i2 - 3.0))
}

/// Midpoint-rule grids over the case geometries (cm).
#[derive(Clone, Debug, PartialEq)]
pub enum QuadratureDomain {
    /// `[−wx/2, wx/2] × [−wy/2, wy/2] × [0, h]`.
    Block {
        wx: f64,
        wy: f64,
        h: f64,
        nx: usize,
        ny: usize,
        nz: usize,
    },
    /// Annulus `r_in ≤ ρ ≤ r_out`, `0 ≤ z ≤ h`.
    CylShell {
        r_in: f64,
        r_out: f64,
        h: f64,
        nr: usize,
        ntheta: usize,
        nh: usize,
    },
    /// Disk `ρ ≤ r`, `0 ≤ z ≤ h`.
    SolidCyl {
        r: f64,
        h: f64,
        nr: usize,
        ntheta: usize,
        nh: usize,
    },
}

fn midpoints(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let d = (hi - lo) / n as f64;
    (0..n).map(move |i| lo + (i as f64 + 0.5) * d)
}

impl QuadratureDomain {
    pub fn block(wx: f64, wy: f64, h: f64) -> Self {
        QuadratureDomain::Block {
            wx,
            wy,
            h,
            nx: 20,
            ny: 20,
            nz: 20,
        }
    }

    pub fn chamber_wall(r_in: f64, r_out: f64, h: f64) -> Self {
        QuadratureDomain::CylShell {
            r_in,
            r_out,
            h,
            nr: 8,
            ntheta: 32,
            nh: 40,
        }
    }

    pub fn rod(r: f64, h: f64) -> Self {
        QuadratureDomain::SolidCyl {
            r,
            h,
            nr: 12,
            ntheta: 16,
            nh: 60,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (dims, counts): (Vec<f64>, [usize; 3]) = match *self {
            QuadratureDomain::Block {
                wx,
                wy,
                h,
                nx,
                ny,
                nz,
            } => (vec![wx, wy, h], [nx, ny, nz]),
            QuadratureDomain::CylShell {
                r_in,
                r_out,
                h,
                nr,
                ntheta,
                nh,
            } => {
                if !(r_in >= 0.0 && r_out > r_in) {
                    return Err(Error::Invalid("shell needs 0 ≤ r_in < r_out".into()));
                }
                (vec![r_out, h], [nr, ntheta, nh])
            }
            QuadratureDomain::SolidCyl {
                r,
                h,
                nr,
                ntheta,
                nh,
            } => (vec![r, h], [nr, ntheta, nh]),
        };
        if dims.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::Invalid("domain dimensions must be positive".into()));
        }
        if counts.iter().any(|&n| n < 2) {
            return Err(Error::Invalid(
                "need at least 2 quadrature points per axis".into(),
            ));
        }
        Ok(())
    }

    /// Same domain with every point count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        let mut d = self.clone();
        match &mut d {
            QuadratureDomain::Block { nx, ny, nz, .. } => {
                *nx *= factor;
                *ny *= factor;
                *nz *= factor;
            }
            QuadratureDomain::CylShell { nr, ntheta, nh, .. }
            | QuadratureDomain::SolidCyl { nr, ntheta, nh, .. } => {
                *nr *= factor;
                *ntheta *= factor;
                *nh *= factor;
            }
        }
        d
    }

    /// Quadrature points with their volume weights.
    pub fn points(&self) -> Vec<(Point3, f64)> {
        match *self {
            QuadratureDomain::Block {
                wx,
                wy,
                h,
                nx,
                ny,
                nz,
            } => {
                let w = wx * wy * h / (nx * ny * nz) as f64;
                let mut out = Vec::with_capacity(nx * ny * nz);
                for z in midpoints(0.0, h, nz) {
                    for y in midpoints(-0.5 * wy, 0.5 * wy, ny) {
                        for x in midpoints(-0.5 * wx, 0.5 * wx, nx) {
                            out.push((Point3::new(x, y, z), w));
                        }
                    }
                }
                out
            }
            QuadratureDomain::CylShell {
                r_in,
                r_out,
                h,
                nr,
                ntheta,
                nh,
            } => cylinder(r_in, r_out, h, nr, ntheta, nh),
            QuadratureDomain::SolidCyl {
                r,
                h,
                nr,
                ntheta,
                nh,
            } => cylinder(0.0, r, h, nr, ntheta, nh),
        }
    }

    pub fn volume(&self) -> f64 {
        match *self {
            QuadratureDomain::Block { wx, wy, h, .. } => wx * wy * h,
            QuadratureDomain::CylShell { r_in, r_out, h, .. } => {
                PI * (r_out * r_out - r_in * r_in) * h
            }
            QuadratureDomain::SolidCyl { r, h, .. } => PI * r * r * h,
        }
    }
}

/// Cylindrical midpoint grid weighted by `ρ dρ dθ dz`.
fn cylinder(r0: f64, r1: f64, h: f64, nr: usize, nt: usize, nh: usize) -> Vec<(Point3, f64)> {
    let dr = (r1 - r0) / nr as f64;
    let dt = 2.0 * PI / nt as f64;
    let dz = h / nh as f64;
    let mut out = Vec::with_capacity(nr * nt * nh);
    for z in midpoints(0.0, h, nh) {
        for t in midpoints(0.0, 2.0 * PI, nt) {
            let (s, c) = t.sin_cos();
            for r in midpoints(r0, r1, nr) {
                out.push((Point3::new(r * c, r * s, z), r * dr * dt * dz));
            }
        }
    }
    out
}

/// Sum in a fixed binary-tree order, independent of thread scheduling.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n if n <= 8 => v.iter().sum(),
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `Σ Vᵢ ψᵢ` over the domain, in kPa·cm³.
pub fn total_energy(
    comp: &CompositeDeformation,
    domain: &QuadratureDomain,
    mat: &Material,
) -> Result<f64> {
    domain.validate()?;
    let terms: Vec<f64> = domain
        .points()
        .par_iter()
        .map(|(x, w)| {
            let f = comp.gradient(x)?;
            Ok(w * mr_density(&f, mat)?)
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

/// Result of fitting a quadratic form `pᵀ W p` to sampled energies.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFit {
    pub w: DMatrix<f64>,
    pub sample_count: usize,
    pub magnitude: f64,
    /// `‖A w − c‖₂` of the least-squares fit.
    pub residual: f64,
}

impl WeightFit {
    pub fn is_positive_definite(&self) -> bool {
        Cholesky::new(self.w.clone()).is_some()
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        SymmetricEigen::new(self.w.clone()).eigenvalues
    }

    /// `W` with every eigenvalue raised to at least `relative · λ_max`.
    ///
    /// A parameter whose energy has no quadratic term, such as a bend-plane
    /// angle, leaves a null direction that sampling noise can make slightly
    /// negative.
    pub fn floored(&self, relative: f64) -> Result<DMatrix<f64>> {
        if !(relative > 0.0 && relative.is_finite()) {
            return Err(Error::Invalid("eigenvalue floor must be positive".into()));
        }
        let eig = SymmetricEigen::new(self.w.clone());
        let max = eig.eigenvalues.max();
        if !(max > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let vals = eig.eigenvalues.map(|v| v.max(relative * max));
        let w = &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose();
        Ok((&w + w.transpose()) * 0.5)
    }
}

/// Symmetric basis index pairs: all diagonal entries first, then the
/// upper-triangle pairs in row order.
pub fn basis_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..m).map(|i| (i, i)).collect();
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

/// Fits `W` so that `pᵀ W p` matches `energy(p)` over `sample_count`
/// weight vectors drawn uniformly from `[−magnitude, magnitude]ᵐ` in
/// antithetic pairs `(p, −p)`.
pub fn fit_weight_matrix<E>(
    energy: E,
    m: usize,
    sample_count: usize,
    magnitude: f64,
    seed: u64,
) -> Result<WeightFit>
where
    E: Fn(&[f64]) -> Result<f64>,
{
    let pairs = basis_pairs(m);
    let k = pairs.len();
    if m == 0 {
        return Err(Error::Invalid("no parameters to weight".into()));
    }
    // each antithetic pair contributes one distinct row
    if sample_count < 2 * k {
        return Err(Error::Invalid(format!(
            "need at least {} energy samples for {m} parameters, got {sample_count}",
            2 * k
        )));
    }
    if !(magnitude > 0.0 && magnitude.is_finite()) {
        return Err(Error::Invalid("sample magnitude must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DMatrix::zeros(sample_count, k);
    let mut c = DVector::zeros(sample_count);
    let mut p: Vec<f64> = Vec::new();
    for row in 0..sample_count {
        // antithetic pairs (p, −p): odd-order terms of the energy cancel
        if row % 2 == 0 {
            p = (0..m)
                .map(|_| rng.random_range(-magnitude..=magnitude))
                .collect();
        } else {
            p.iter_mut().for_each(|v| *v = -*v);
        }
        for (col, &(i, j)) in pairs.iter().enumerate() {
            a[(row, col)] = if i == j {
                p[i] * p[i]
            } else {
                2.0 * p[i] * p[j]
            };
        }
        c[row] = energy(&p)?;
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd.rank(smax * 1e-10);
    if rank < k {
        return Err(Error::IllConditioned { rank, required: k });
    }
    let coef = svd
        .solve(&c, smax * 1e-10)
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let residual = (&a * &coef - &c).norm();
    let mut w = DMatrix::zeros(m, m);
    for (&(i, j), v) in pairs.iter().zip(coef.iter()) {
        w[(i, j)] = *v;
        w[(j, i)] = *v;
    }
    Ok(WeightFit {
        w,
        sample_count,
        magnitude,
        residual,
    })
}

/// [`fit_weight_matrix`] with the energy of `comp` over `domain`.
pub fn fit_composite_weights(
    comp: &CompositeDeformation,
    domain: &QuadratureDomain,
    mat: &Material,
    sample_count: usize,
    magnitude: f64,
    seed: u64,
) -> Result<WeightFit> {
    let base = comp.params();
    fit_weight_matrix(
        |dp| {
            let p: Vec<f64> = base.iter().zip(dp).map(|(a, b)| a + b).collect();
            total_energy(&comp.with_params(&p)?, domain, mat)
        },
        comp.param_count(),
        sample_count,
        magnitude,
        seed,
    )
}
