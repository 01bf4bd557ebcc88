//! Acceptance run: one pass/fail line per criterion, nonzero exit if any fail.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::{DMatrix, DVector, Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isoprim_core::harness::{
    block_pose, block_state, chamber_state, error_metric, format_nodes, parse_nodes, pose_vector,
    surface_volume_change, write_nodes, BlockGeometry, ChamberGeometry, NodeRole, NodeSet,
    NodeSource, RodGeometry,
};
use isoprim_core::liegroup::{
    hat3, hat6, integrate_backbone, minimal_twist_angle, vee3, vee6, Twist6,
};
use isoprim_core::mechanics::{fit_composite_weights, fit_weight_matrix, invariants, total_energy};
use isoprim_core::modal::{make_basis, BasisCase, BasisMode, ModalFunction};
use isoprim_core::primitives::bend::{bend_partials, nu, KAPPA_SERIES};
use isoprim_core::primitives::{Bend2d, Bend3d};
use isoprim_core::solver::{
    ik_jacobian, ik_se3_track, pinv_weighted, rod_options, rod_shooting, DEFAULT_ROD_STEPS,
};
use isoprim_core::{
    CompositeDeformation, IkOptions, Material, Matrix3, Point3, Primitive, RigidPose, Rotation,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

const H: f64 = 6.0;

fn sines(w: &[f64]) -> ModalFunction {
    let modes = (1..=w.len() as u32)
        .map(|k| BasisMode::Sine { k, scale: H })
        .collect();
    ModalFunction::with_weights(modes, w.to_vec()).unwrap()
}

fn primitive(kind: usize, w: &[f64]) -> Primitive {
    match kind {
        0 => {
            let mut f = make_basis(BasisCase::BlockStretchRate, H).unwrap();
            let n = f.len();
            f.set_weights(&w[..n]).unwrap();
            Primitive::elongation(f)
        }
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

const NAMES: [&str; 7] = [
    "elongation",
    "twist",
    "shear",
    "bend2d",
    "bend3d",
    "source",
    "block composite",
];

fn random_case(kind: usize, rng: &mut ChaCha8Rng) -> CompositeDeformation {
    let w: Vec<f64> = (0..9).map(|_| rng.random_range(-0.05..0.05)).collect();
    if kind < 6 {
        CompositeDeformation::new(vec![primitive(kind, &w)])
    } else {
        let mut p = w;
        p[8] = rng.random_range(-3.0..3.0);
        BlockGeometry::default()
            .composite()
            .unwrap()
            .with_params(&p)
            .unwrap()
    }
}

fn random_point(kind: usize, rng: &mut ChaCha8Rng) -> Point3 {
    loop {
        let x = Point3::new(
            rng.random_range(-1.5..1.5),
            rng.random_range(-1.5..1.5),
            rng.random_range(0.0..H),
        );
        // the source is singular on its axis
        if kind != 5 || x.xy().norm() > 0.2 {
            return x;
        }
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

/// Runs `visit` on 1000 valid points of each primitive and the block
/// composite, with fresh random weights every 50 points.
fn isochoric_samples(
    seed: u64,
    mut visit: impl FnMut(usize, &CompositeDeformation, &Point3, &Matrix3),
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for kind in 0..7 {
        let mut comp = random_case(kind, &mut rng);
        let mut count = 0;
        while count < 1000 {
            if count % 50 == 0 {
                comp = random_case(kind, &mut rng);
            }
            let x = random_point(kind, &mut rng);
            if !comp.is_valid(&x) {
                continue;
            }
            let f = comp.gradient(&x).unwrap();
            visit(kind, &comp, &x, &f);
            count += 1;
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst_det = [0.0f64; 7];
    let mut worst_fd = [0.0f64; 7];
    isochoric_samples(1, |kind, comp, x, f| {
        worst_det[kind] = worst_det[kind].max((f.determinant() - 1.0).abs());
        worst_fd[kind] = worst_fd[kind].max((fd_gradient(comp, x) - f).norm() / f.norm());
    });
    let elapsed = start.elapsed().as_secs_f64();
    for kind in 0..7 {
        ensure(worst_det[kind] < 1e-8, || {
            format!("{}: |det − 1| = {:e}", NAMES[kind], worst_det[kind])
        })?;
        ensure(worst_fd[kind] < 1e-5, || {
            format!("{}: fd relative error {:e}", NAMES[kind], worst_fd[kind])
        })?;
    }
    ensure(elapsed < 10.0, || format!("took {elapsed:.2} s"))?;
    let det = worst_det.iter().cloned().fold(0.0, f64::max);
    let fd = worst_fd.iter().cloned().fold(0.0, f64::max);
    Ok(format!(
        "7 × 1000 points, max |det − 1| {det:.1e}, max fd error {fd:.1e}, {elapsed:.2} s"
    ))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 1000 {
        let kappa = rng.random_range(-0.3..0.3);
        let (x1, x2) = (rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        if 1.0 - 2.0 * kappa * x2 <= 0.0 {
            continue;
        }
        worst = worst.max((bend_partials(kappa, x1, x2).volume_factor(kappa) - 1.0).abs());
        n += 1;
    }
    ensure(worst < 1e-8, || format!("volume factor off by {worst:e}"))?;
    let mut switch = 0.0f64;
    for u in [-1.5, -0.3, 0.4, 1.5] {
        for kappa in [KAPPA_SERIES, -KAPPA_SERIES] {
            let series = bend_partials(kappa * (1.0 - 1e-12), 0.0, u).nu;
            let exact = bend_partials(kappa * (1.0 + 1e-12), 0.0, u).nu;
            switch = switch.max((series - exact).abs());
            switch = switch.max(
                (nu(kappa.abs() * (1.0 - 1e-12), u).0 - nu(kappa.abs() * (1.0 + 1e-12), u).0).abs(),
            );
        }
    }
    ensure(switch < 1e-10, || format!("series vs exact {switch:e}"))?;
    Ok(format!(
        "max |factor − 1| {worst:.1e}, series/exact gap {switch:.1e}"
    ))
}

fn random_vec(rng: &mut ChaCha8Rng, r: f64) -> Vector3<f64> {
    Vector3::new(
        rng.random_range(-r..r),
        rng.random_range(-r..r),
        rng.random_range(-r..r),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (w, v) = (random_vec(&mut rng, 10.0), random_vec(&mut rng, 10.0));
        ensure(vee3(&hat3(&w)).unwrap() == w, || {
            "hat3/vee3 not exact".into()
        })?;
        let xi = Vector6::new(w.x, w.y, w.z, v.x, v.y, v.z);
        ensure(vee6(&hat6(&xi)).unwrap() == xi, || {
            "hat6/vee6 not exact".into()
        })?;
    }
    let mut adj = 0.0f64;
    let pose = |rng: &mut ChaCha8Rng| {
        RigidPose::exp(&Twist6::new(random_vec(rng, 1.5), random_vec(rng, 5.0)))
    };
    for _ in 0..100 {
        let (a, b) = (pose(&mut rng), pose(&mut rng));
        let rhs = a.adjoint() * b.adjoint();
        adj = adj.max((((a * b).adjoint() - rhs).amax()) / rhs.amax().max(1.0));
    }
    ensure(adj < 1e-10, || {
        format!("adjoint homomorphism off by {adj:e}")
    })?;
    let mut roundtrip = 0.0f64;
    let mut n = 0;
    while n < 100 {
        let w = random_vec(&mut rng, 1.7);
        if w.norm() >= PI - 1e-3 {
            continue;
        }
        let xi = Twist6::new(w, random_vec(&mut rng, 5.0));
        roundtrip = roundtrip.max((RigidPose::exp(&xi).log().unwrap().0 - xi.0).norm());
        n += 1;
    }
    ensure(roundtrip < 1e-9, || format!("exp/log off by {roundtrip:e}"))?;
    let (k, l) = (0.2, 10.0);
    let curve = integrate_backbone(|_| Vector3::new(k, 0.0, 0.0), l, 1000).unwrap();
    let want = Vector3::new(0.0, ((k * l).cos() - 1.0) / k, (k * l).sin() / k);
    let circle = (curve.end().position - want).norm();
    ensure(circle < 1e-8, || {
        format!("circle endpoint off by {circle:e}")
    })?;
    let planar = integrate_backbone(|s| Vector3::new(0.1 + 0.05 * s, 0.0, 0.0), 8.0, 400).unwrap();
    let theta = minimal_twist_angle(&planar)
        .unwrap()
        .theta1
        .iter()
        .fold(0.0f64, |m, t| m.max(t.abs()));
    ensure(theta < 1e-12, || format!("planar θ₁ reaches {theta:e}"))?;
    Ok(format!(
        "adjoint {adj:.1e}, exp/log {roundtrip:.1e}, circle {circle:.1e}, planar θ₁ {theta:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let g = BlockGeometry::default();
    let comp = g.composite().unwrap();
    let target = g.target(Vector3::new(0.6, 0.6, 0.6), Vector3::new(0.1, 0.1, 0.1));
    let opts = IkOptions::default();
    let mut report = Vec::new();
    for name in ["jacobian", "se3"] {
        let start = Instant::now();
        let sol = if name == "jacobian" {
            let d = pose_vector(&target).unwrap();
            ik_jacobian(|p| block_state(&comp, p, g.h), &[0.0; 9], &d, &opts)
        } else {
            ik_se3_track(|p| block_pose(&comp, p, g.h), &[0.0; 9], &target, &opts)
        }
        .map_err(|e| format!("{name}: {e}"))?;
        let secs = start.elapsed().as_secs_f64();
        let err = block_pose(&comp, &sol.params, g.h)
            .unwrap()
            .error_to(&target)
            .unwrap();
        let (et, er) = (err.translational().norm(), err.rotational().norm());
        ensure(et < 1e-6 && er < 1e-6, || {
            format!("{name}: pose error {et:e} cm, {er:e} rad")
        })?;
        ensure(sol.iterations <= 500, || {
            format!("{name}: {} iterations", sol.iterations)
        })?;
        ensure(secs < 1.0, || format!("{name}: {secs:.3} s"))?;
        report.push(format!(
            "{name} {} iters {:.1e} in {:.0} ms",
            sol.iterations,
            et.max(er),
            secs * 1e3
        ));
    }
    Ok(report.join(", "))
}

fn criterion_5() -> Outcome {
    let g = ChamberGeometry::default();
    let comp = g.composite().unwrap();
    let d = DVector::from_vec(vec![105.0]);
    let sol = ik_jacobian(
        |p| chamber_state(&comp, p, g.h),
        &[0.0; 5],
        &d,
        &IkOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let analytic = chamber_state(&comp, &sol.params, g.h).unwrap()[0];
    let oracle = surface_volume_change(
        &comp.with_params(&sol.params).unwrap(),
        g.r_in,
        g.h,
        128,
        800,
    )
    .unwrap();
    ensure((analytic - 105.0).abs() < 0.525, || {
        format!("analytic volume {analytic}")
    })?;
    ensure((oracle - 105.0).abs() < 0.525, || {
        format!("surface oracle {oracle}")
    })?;
    Ok(format!(
        "{} iters, analytic {analytic:.6} cm³, surface oracle {oracle:.4} cm³",
        sol.iterations
    ))
}

fn criterion_6() -> Outcome {
    let g = RodGeometry::default();
    let target = RigidPose::new(
        Rotation::from_fixed_xyz(0.1, 0.1, 0.1),
        Vector3::new(1.5, 1.5, g.h - 3.0),
    );
    let sol =
        rod_shooting(&target, g.h, DEFAULT_ROD_STEPS, &rod_options()).map_err(|e| e.to_string())?;
    let end = sol.curve.end();
    let reached = RigidPose {
        rotation: end.rotation,
        translation: end.position,
    };
    let err = reached.error_to(&target).unwrap().norm();
    ensure(err < 1e-6, || format!("pose-log error {err:e}"))?;
    let straight = RigidPose::from_translation(Vector3::new(0.0, 0.0, g.h));
    let zero = rod_shooting(&straight, g.h, DEFAULT_ROD_STEPS, &rod_options())
        .map_err(|e| e.to_string())?;
    ensure(zero.params == [0.0; 6], || {
        format!("straight target gave {:?}", zero.params)
    })?;
    Ok(format!(
        "{} iters, pose-log error {err:.1e}; straight target p = 0",
        sol.solution.iterations
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut inv, mut worst_gap) = (0.0f64, f64::INFINITY);
    for _ in 0..100 {
        let n = rng.random_range(1..=5);
        let m = rng.random_range(n + 1..=9);
        let j = DMatrix::from_fn(n, m, |_, _| rng.random_range(-1.0..1.0));
        let a = DMatrix::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
        let w = &a * a.transpose() + DMatrix::identity(m, m) * 0.1;
        let p = pinv_weighted(&j, Some(&w), 1e-8).map_err(|e| e.to_string())?;
        ensure(!p.damped, || "well-conditioned instance was damped".into())?;
        inv = inv.max((&j * &p.matrix - DMatrix::identity(n, n)).amax());
        let dp = &p.matrix * DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let cost = |x: &DVector<f64>| (x.transpose() * &w * x)[(0, 0)];
        let projector = DMatrix::identity(m, m) - &p.matrix * &j;
        let c0 = cost(&dp);
        for _ in 0..100 {
            let z = &projector * DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
            let gap = (cost(&(&dp + z)) - c0) / c0.max(1.0);
            worst_gap = worst_gap.min(gap);
        }
    }
    ensure(inv < 1e-8, || format!("JJ⁺ − I reaches {inv:e}"))?;
    ensure(worst_gap > -1e-12, || {
        format!(
            "a null-space perturbation lowered the W-norm by {:e}",
            -worst_gap
        )
    })?;
    Ok(format!(
        "100 instances, max |JJ⁺ − I| {inv:.1e}, min relative cost increase {worst_gap:.1e}"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = DMatrix::from_fn(9, 9, |_, _| rng.random_range(-1.0..1.0));
    let w0 = &a * a.transpose() + DMatrix::identity(9, 9);
    let energy = |p: &[f64]| {
        let v = DVector::from_row_slice(p);
        Ok((v.transpose() * &w0 * &v)[(0, 0)])
    };
    let fit = fit_weight_matrix(energy, 9, 180, 1e-2, 8).map_err(|e| e.to_string())?;
    let synthetic = (&fit.w - &w0).amax();
    ensure(synthetic < 1e-6, || {
        format!("synthetic W off by {synthetic:e}")
    })?;

    let g = BlockGeometry::default();
    let comp = g.composite().unwrap();
    let (domain, mat) = (g.domain(), Material::ECOFLEX_00_30);
    let fitted =
        fit_composite_weights(&comp, &domain, &mat, 200, 1e-3, 1).map_err(|e| e.to_string())?;
    let w = fitted.floored(1e-6).map_err(|e| e.to_string())?;
    let target = g.target(
        Vector3::new(0.06, 0.06, 0.06),
        Vector3::new(0.01, 0.01, 0.01),
    );
    let d = pose_vector(&target).unwrap();
    let state = |p: &[f64]| block_state(&comp, p, g.h);
    let solve = |weight| {
        let opts = IkOptions {
            weight,
            ..IkOptions::default()
        };
        let sol = ik_jacobian(state, &[0.0; 9], &d, &opts).map_err(|e| e.to_string())?;
        total_energy(&comp.with_params(&sol.params).unwrap(), &domain, &mat)
            .map_err(|e| e.to_string())
    };
    let (e_id, e_fit) = (solve(None)?, solve(Some(w))?);
    ensure(e_fit <= e_id, || {
        format!("fitted W energy {e_fit} > identity {e_id}")
    })?;
    Ok(format!(
        "synthetic W error {synthetic:.1e}; block energy fitted {e_fit:.4} ≤ identity {e_id:.4} (eigenvalue floor 1e-6)"
    ))
}

fn criterion_9() -> Outcome {
    let mat = Material::ECOFLEX_00_30;
    let (b, c, r) = (
        BlockGeometry::default(),
        ChamberGeometry::default(),
        RodGeometry::default(),
    );
    for (comp, domain) in [
        (b.composite().unwrap(), b.domain()),
        (c.composite().unwrap(), c.domain()),
        (r.composite_2d().unwrap(), r.domain()),
    ] {
        let e = total_energy(&comp, &domain, &mat).unwrap();
        ensure(e == 0.0, || format!("identity energy {e}"))?;
    }
    let mut i3 = 0.0f64;
    isochoric_samples(9, |_, _, _, f| {
        i3 = i3.max((invariants(&(f * f.transpose())).unwrap().2 - 1.0).abs());
    });
    ensure(i3 < 1e-8, || format!("|I₃ − 1| reaches {i3:e}"))?;
    let block = b
        .composite()
        .unwrap()
        .with_params(&[0.01, 0.001, 0.01, -0.01, 0.01, 0.005, -0.003, 0.002, 0.3]);
    let chamber = c
        .composite()
        .unwrap()
        .with_params(&[0.2, 0.05, 0.0, 0.0, 0.0]);
    let rod = r
        .composite_2d()
        .unwrap()
        .with_params(&[0.02, -0.01, 0.005, 0.0, 0.0, 0.0]);
    let mut changes = Vec::new();
    for (name, comp, domain) in [
        ("block", block, b.domain()),
        ("chamber", chamber, c.domain()),
        ("rod", rod, r.domain()),
    ] {
        let comp = comp.unwrap();
        let coarse = total_energy(&comp, &domain, &mat).unwrap();
        let fine = total_energy(&comp, &domain.refined(2), &mat).unwrap();
        let delta = ((fine - coarse) / coarse).abs();
        ensure(delta < 0.01, || {
            format!("{name}: refinement changes energy by {:.2}%", delta * 100.0)
        })?;
        changes.push(format!("{name} {:.3}%", delta * 100.0));
    }
    Ok(format!(
        "identity energy 0, max |I₃ − 1| {i3:.1e}, refinement {}",
        changes.join(" ")
    ))
}

fn random_nodes(rng: &mut ChaCha8Rng, n: usize, role: NodeRole) -> NodeSet {
    let pts = (0..n)
        .map(|_| {
            Point3::new(
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(0.0..10.0),
            )
        })
        .collect();
    NodeSet::numbered(pts, role, NodeSource::Fem)
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let o = random_nodes(&mut rng, 10, NodeRole::Reference);
    let a = random_nodes(&mut rng, 10, NodeRole::Deformed);
    let f = random_nodes(&mut rng, 10, NodeRole::Deformed);
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..10 {
        let e = a.points[i] - f.points[i];
        let d = a.points[i] - o.points[i];
        num += (e.x * e.x + e.y * e.y + e.z * e.z).sqrt().powi(2);
        den += (d.x * d.x + d.y * d.y + d.z * d.z).sqrt().powi(2);
    }
    let value = error_metric(&o, &a, &f).map_err(|e| e.to_string())?.value;
    ensure(value == (num / den).sqrt(), || {
        format!("metric {value} vs brute force {}", (num / den).sqrt())
    })?;

    let mut tricky = random_nodes(&mut rng, 200, NodeRole::Deformed);
    tricky.points[0] = Point3::new(0.1 + 0.2, -1.0 / 3.0, 1e-300);
    tricky.points[1] = Point3::new(f64::MAX, f64::MIN_POSITIVE, -0.0);
    let back = parse_nodes(&format_nodes(&tricky), NodeRole::Deformed, NodeSource::Fem)
        .map_err(|e| e.to_string())?;
    let exact = back.ids == tricky.ids
        && back
            .points
            .iter()
            .zip(&tricky.points)
            .all(|(p, q)| (0..3).all(|k| p[k].to_bits() == q[k].to_bits()));
    ensure(exact, || "CSV round-trip changed values".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (ours, theirs, reference) = (
        dir.path().join("ours.csv"),
        dir.path().join("theirs.csv"),
        dir.path().join("o.csv"),
    );
    write_nodes(&ours, &f).map_err(|e| e.to_string())?;
    write_nodes(&theirs, &f).map_err(|e| e.to_string())?;
    write_nodes(&reference, &o).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_isoprim"))
        .arg("compare")
        .args([&ours, &theirs, &reference])
        .arg("--report")
        .arg(dir.path().join("report.csv"))
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.success(), || {
        format!("compare failed: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    ensure(stdout.lines().any(|l| l.trim() == "E = 0"), || {
        format!("compare printed {stdout:?}")
    })?;
    Ok("metric equals brute force exactly, CSV round-trip bit-exact, compare prints E = 0".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("isochoric primitives", criterion_1),
        ("bend volume factor", criterion_2),
        ("Lie layer", criterion_3),
        ("block IK", criterion_4),
        ("chamber inflation", criterion_5),
        ("3D rod shooting", criterion_6),
        ("weighted pseudoinverse", criterion_7),
        ("weight-matrix fit", criterion_8),
        ("mechanics sanity", criterion_9),
        ("comparison machinery", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
