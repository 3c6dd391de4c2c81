#![allow(dead_code)]

use bilin2::{Mat2, TolerancePolicy, Vec2};
use proptest::prelude::*;

pub fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

pub fn entry() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

pub fn mat() -> impl Strategy<Value = Mat2> {
    [entry(), entry(), entry(), entry()].prop_map(|[a, b, c, d]| Mat2::new(a, b, c, d))
}

pub fn vec2() -> impl Strategy<Value = Vec2> {
    (entry(), entry()).prop_map(|(x, y)| Vec2::new(x, y))
}

pub fn unit() -> impl Strategy<Value = Vec2> {
    (0.0..std::f64::consts::TAU).prop_map(|t| Vec2::new(t.cos(), t.sin()))
}

/// Similarity with condition number at most 20.
pub fn well_conditioned() -> impl Strategy<Value = Mat2> {
    mat().prop_filter("condition number above 20", |p| {
        p.det().abs() > 1e-2 && p.condition_number() <= 20.0
    })
}

pub fn conj(m: &Mat2, p: &Mat2) -> Mat2 {
    let p_inv = p.inverse(&tol()).unwrap();
    m.similar(p, &p_inv)
}

pub fn upper(a: f64, b: f64, c: f64) -> Mat2 {
    Mat2::new(a, b, 0.0, c)
}

/// Independent oracle for the gram determinant.
pub fn gram_oracle(b1: &Mat2, b2: &Mat2, z: Vec2) -> f64 {
    let c1 = b1.mul_vec(z);
    let c2 = b2.mul_vec(z);
    c1.x * c2.y - c1.y * c2.x
}

/// Angles in `[0, pi)` where the gram determinant changes sign on a sweep of
/// `n` half-circle directions, refined by bisection.
pub fn sweep_zero_angles(b1: &Mat2, b2: &Mat2, n: usize) -> Vec<f64> {
    let f = |t: f64| gram_oracle(b1, b2, Vec2::new(t.cos(), t.sin()));
    let step = std::f64::consts::PI / n as f64;
    let mut out = Vec::new();
    for k in 0..n {
        let (mut lo, mut hi) = (k as f64 * step, (k + 1) as f64 * step);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            out.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() || fhi == 0.0 {
            continue;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

/// Angular distance between the line at angle `t` and a unit direction.
pub fn line_angle_gap(t: f64, d: Vec2) -> f64 {
    Vec2::new(t.cos(), t.sin()).cross(d).abs().asin()
}
