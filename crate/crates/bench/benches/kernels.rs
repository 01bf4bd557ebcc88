use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nalgebra::{DMatrix, Vector3};

use isoprim_core::harness::{block_pose, block_state, pose_vector, BlockGeometry, ChamberGeometry};
use isoprim_core::mechanics::total_energy;
use isoprim_core::solver::{
    ik_jacobian, ik_se3_track, pinv_weighted, rod_options, rod_shooting, shoot,
};
use isoprim_core::{IkOptions, Material, Point3, RigidPose, Rotation};

const BLOCK_P: [f64; 9] = [0.02, 0.01, 0.03, -0.02, 0.05, -0.01, 0.01, 0.0, 0.4];

fn gradient(c: &mut Criterion) {
    let comp = BlockGeometry::default()
        .composite()
        .unwrap()
        .with_params(&BLOCK_P)
        .unwrap();
    let x = Point3::new(0.7, -0.4, 3.1);
    c.bench_function("block composite apply", |b| {
        b.iter(|| comp.apply(black_box(&x)).unwrap())
    });
    c.bench_function("block composite gradient", |b| {
        b.iter(|| comp.gradient(black_box(&x)).unwrap())
    });
}

fn energy(c: &mut Criterion) {
    let g = BlockGeometry::default();
    let comp = g.composite().unwrap().with_params(&BLOCK_P).unwrap();
    let domain = g.domain();
    c.bench_function("block energy", |b| {
        b.iter(|| total_energy(&comp, &domain, &Material::ECOFLEX_00_30).unwrap())
    });
    let ch = ChamberGeometry::default();
    let chamber = ch
        .composite()
        .unwrap()
        .with_params(&[0.2, 0.05, 0.0, 0.0, 0.0])
        .unwrap();
    let domain = ch.domain();
    c.bench_function("chamber energy", |b| {
        b.iter(|| total_energy(&chamber, &domain, &Material::ECOFLEX_00_30).unwrap())
    });
}

fn pinv(c: &mut Criterion) {
    let j = DMatrix::from_fn(6, 9, |i, k| ((i * 9 + k) as f64 * 0.37).sin());
    let w = DMatrix::from_fn(9, 9, |i, k| if i == k { 2.0 } else { 0.1 });
    c.bench_function("weighted pinv 6x9", |b| {
        b.iter(|| pinv_weighted(black_box(&j), Some(&w), 1e-8).unwrap())
    });
}

fn ik(c: &mut Criterion) {
    let g = BlockGeometry::default();
    let comp = g.composite().unwrap();
    let target = g.target(Vector3::new(0.6, 0.6, 0.6), Vector3::new(0.1, 0.1, 0.1));
    let d = pose_vector(&target).unwrap();
    let opts = IkOptions::default();
    let mut group = c.benchmark_group("block ik");
    group.sample_size(10);
    group.bench_function("jacobian", |b| {
        b.iter(|| ik_jacobian(|p| block_state(&comp, p, g.h), &[0.0; 9], &d, &opts).unwrap())
    });
    group.bench_function("se3", |b| {
        b.iter(|| ik_se3_track(|p| block_pose(&comp, p, g.h), &[0.0; 9], &target, &opts).unwrap())
    });
    group.finish();
}

fn rod(c: &mut Criterion) {
    let p = [0.05, -0.02, 0.01, 0.1, 0.0, -0.1];
    c.bench_function("rod shoot 1000 steps", |b| {
        b.iter(|| shoot(black_box(&p), 15.0, 1000).unwrap())
    });
    let target = RigidPose::new(
        Rotation::from_fixed_xyz(0.1, 0.1, 0.1),
        Vector3::new(1.5, 1.5, 12.0),
    );
    let mut group = c.benchmark_group("rod");
    group.sample_size(10);
    group.bench_function("shooting solve", |b| {
        b.iter(|| rod_shooting(&target, 15.0, 1000, &rod_options()).unwrap())
    });
    group.finish();
}

criterion_group!(kernels, gradient, energy, pinv, ik, rod);
criterion_main!(kernels);
