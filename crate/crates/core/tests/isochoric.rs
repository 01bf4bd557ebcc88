use std::sync::Arc;

use isoprim_core::harness::BlockGeometry;
use isoprim_core::liegroup::integrate_backbone;
use isoprim_core::modal::{make_basis, BasisCase, BasisMode, ModalFunction};
use isoprim_core::primitives::bend::{bend_partials, nu, KAPPA_SERIES};
use isoprim_core::primitives::{Bend2d, Bend3d};
use isoprim_core::{CompositeDeformation, Matrix3, Point3, Primitive};
use nalgebra::Vector3;
use proptest::prelude::*;

const H: f64 = 6.0;

fn weighted(case: BasisCase, w: &[f64]) -> ModalFunction {
    let mut f = make_basis(case, H).unwrap();
    f.set_weights(&w[..f.len()]).unwrap();
    f
}

fn sines(w: &[f64]) -> ModalFunction {
    let modes = (1..=w.len() as u32)
        .map(|k| BasisMode::Sine { k, scale: H })
        .collect();
    ModalFunction::with_weights(modes, w.to_vec()).unwrap()
}

fn primitive(kind: usize, w: &[f64]) -> Primitive {
    match kind {
        0 => Primitive::elongation(weighted(BasisCase::BlockStretchRate, w)),
        1 => Primitive::twist(sines(&w[..3])),
        2 => Primitive::shear(sines(&w[..2]), sines(&w[2..4])),
        3 => {
            Primitive::Bend2d(Bend2d::new(sines(&w[..4]), H).with_plane_rotation(10.0 * w[4], true))
        }
        4 => {
            let (a, b, c) = (w[0], w[1], w[2]);
            let curve = integrate_backbone(
                |s| Vector3::new(a + b * s / H, c * (s / H).sin(), 0.0),
                H,
                400,
            )
            .unwrap();
            Primitive::Bend3d(Bend3d::new(Arc::new(curve)))
        }
        _ => Primitive::source(sines(&w[..3])),
    }
}

fn fd_gradient(comp: &CompositeDeformation, x: &Point3) -> Matrix3 {
    let h = 1e-6;
    let mut f = Matrix3::zeros();
    for k in 0..3 {
        let mut e = Vector3::zeros();
        e[k] = h;
        let col = (comp.apply(&(x + e)).unwrap() - comp.apply(&(x - e)).unwrap()) / (2.0 * h);
        f.set_column(k, &col);
    }
    f
}

fn check(comp: &CompositeDeformation, x: &Point3) -> Result<(), TestCaseError> {
    prop_assume!(comp.is_valid(x));
    let f = comp.gradient(x).unwrap();
    prop_assert!(
        (f.determinant() - 1.0).abs() < 1e-8,
        "det {}",
        f.determinant()
    );
    let fd = fd_gradient(comp, x);
    let rel = (fd - f).norm() / f.norm();
    prop_assert!(rel < 1e-5, "fd mismatch {rel}");
    Ok(())
}

fn point() -> impl Strategy<Value = Point3> {
    (-1.5..1.5f64, -1.5..1.5f64, 0.0..H).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.05..0.05f64, 9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn primitives_preserve_volume(kind in 0usize..6, w in weights(), x in point()) {
        // the source is singular on its axis
        prop_assume!(kind != 5 || x.xy().norm() > 0.2);
        let comp = CompositeDeformation::new(vec![primitive(kind, &w)]);
        check(&comp, &x)?;
    }

    #[test]
    fn block_composite_preserves_volume(w in weights(), ro in -3.0..3.0f64, x in point()) {
        let g = BlockGeometry::default();
        let mut p = w.clone();
        p[8] = ro;
        let comp = g.composite().unwrap().with_params(&p).unwrap();
        check(&comp, &x)?;
    }

    #[test]
    fn bend_volume_factor_is_one(kappa in -0.3..0.3f64, x1 in -1.5..1.5f64, x2 in -1.5..1.5f64) {
        prop_assume!(1.0 - 2.0 * kappa * x2 > 0.0);
        let bp = bend_partials(kappa, x1, x2);
        prop_assert!((bp.volume_factor(kappa) - 1.0).abs() < 1e-8);
    }
}

#[test]
fn series_branch_matches_closed_form_at_switch() {
    for u in [-1.5, -0.3, 0.4, 1.5] {
        for kappa in [KAPPA_SERIES, -KAPPA_SERIES] {
            let series = nu(kappa * (1.0 - 1e-12), u).0;
            let exact = nu(kappa * (1.0 + 1e-12), u).0;
            assert!((series - exact).abs() < 1e-10, "u {u}: {series} vs {exact}");
        }
    }
}
