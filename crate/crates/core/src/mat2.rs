//! Fixed-size 2-vector / 2×2-matrix arithmetic and the tolerance policy used
//! for every zero test in the crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Zero-test thresholds: `|x| <= abs_eps + rel_eps * scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    abs_eps: f64,
    rel_eps: f64,
}

impl TolerancePolicy {
    pub const DEFAULT_ABS: f64 = 1e-9;
    pub const DEFAULT_REL: f64 = 1e-9;

    pub fn new(abs_eps: f64, rel_eps: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(abs_eps) && ok(rel_eps) {
            Ok(Self { abs_eps, rel_eps })
        } else {
            Err(Error::InvalidTolerance {
                abs: abs_eps,
                rel: rel_eps,
            })
        }
    }

    pub fn abs_eps(&self) -> f64 {
        self.abs_eps
    }

    pub fn rel_eps(&self) -> f64 {
        self.rel_eps
    }

    /// Threshold below which a quantity of magnitude reference `scale` counts as zero.
    #[inline]
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_eps + self.rel_eps * scale.abs()
    }

    #[inline]
    pub fn is_zero(&self, x: f64, scale: f64) -> bool {
        x.abs() <= self.threshold(scale)
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            abs_eps: Self::DEFAULT_ABS,
            rel_eps: Self::DEFAULT_REL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Self = Self { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product, i.e. `det[self other]`.
    #[inline]
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.x, self.y]
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(v: [f64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl Add for Vec2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Real 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Mat2 {
    pub const IDENTITY: Self = Self::new(1.0, 0.0, 0.0, 1.0);
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);

    #[inline]
    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub const fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn from_cols(c1: Vec2, c2: Vec2) -> Self {
        Self::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn scalar(s: f64) -> Self {
        Self::new(s, 0.0, 0.0, s)
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.m11, self.m12], [self.m21, self.m22]]
    }

    /// Entries in row-major order; the vectorization used for independence tests.
    pub fn entries(&self) -> [f64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    pub fn col1(&self) -> Vec2 {
        Vec2::new(self.m11, self.m21)
    }

    pub fn col2(&self) -> Vec2 {
        Vec2::new(self.m12, self.m22)
    }

    pub fn row1(&self) -> Vec2 {
        Vec2::new(self.m11, self.m12)
    }

    pub fn row2(&self) -> Vec2 {
        Vec2::new(self.m21, self.m22)
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m11, self.m21, self.m12, self.m22)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }

    #[inline]
    pub fn mul_vec(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.m11 * v.x + self.m12 * v.y,
            self.m21 * v.x + self.m22 * v.y,
        )
    }

    /// Determinant zero test with the Hadamard bound (product of row norms) as scale.
    pub fn is_singular(&self, tol: &TolerancePolicy) -> bool {
        let scale = self.row1().norm() * self.row2().norm();
        tol.is_zero(self.det(), scale)
    }

    pub fn inverse(&self, tol: &TolerancePolicy) -> Result<Self> {
        if self.is_singular(tol) {
            return Err(Error::SingularMatrix);
        }
        let d = self.det();
        Ok(Self::new(
            self.m22 / d,
            -self.m12 / d,
            -self.m21 / d,
            self.m11 / d,
        ))
    }

    /// 2-norm condition number, `inf` for singular matrices.
    pub fn condition_number(&self) -> f64 {
        let f2 = self.entries().iter().map(|v| v * v).sum::<f64>();
        let d = self.det().abs();
        if d == 0.0 {
            return f64::INFINITY;
        }
        // singular values satisfy s1^2 + s2^2 = f2, s1 * s2 = d
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
        let s1_sq = 0.5 * (f2 + disc);
        let s2_sq = d * d / s1_sq;
        (s1_sq / s2_sq).sqrt()
    }

    /// `p * self * p_inv`.
    pub fn similar(&self, p: &Mat2, p_inv: &Mat2) -> Self {
        *p * *self * *p_inv
    }

    /// True when every entry of `self - other` passes the zero test at the scale of `self`.
    pub fn approx_eq(&self, other: &Mat2, tol: &TolerancePolicy) -> bool {
        let scale = self.norm().max(other.norm());
        self.entries()
            .iter()
            .zip(other.entries())
            .all(|(a, b)| tol.is_zero(a - b, scale))
    }
}

impl Add for Mat2 {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(
            self.m11 + r.m11,
            self.m12 + r.m12,
            self.m21 + r.m21,
            self.m22 + r.m22,
        )
    }
}

impl Sub for Mat2 {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(
            self.m11 - r.m11,
            self.m12 - r.m12,
            self.m21 - r.m21,
            self.m22 - r.m22,
        )
    }
}

impl Mul<f64> for Mat2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        self.mul_vec(v)
    }
}

impl Mul for Mat2 {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.m11 * r.m11 + self.m12 * r.m21,
            self.m11 * r.m12 + self.m12 * r.m22,
            self.m21 * r.m11 + self.m22 * r.m21,
            self.m21 * r.m12 + self.m22 * r.m22,
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m11, self.m12, self.m21, self.m22
        )
    }
}

/// Canonical unit representative of a line through the origin.
///
/// The first component is positive, or (when it is within tolerance of zero)
/// the second component is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction(Vec2);

impl Direction {
    pub fn vector(&self) -> Vec2 {
        self.0
    }

    /// Sine of the angle between the two lines; zero iff they coincide.
    pub fn distance(&self, other: &Direction) -> f64 {
        self.0.cross(other.0).abs()
    }

    /// Angle of the representative in `(-pi/2, pi/2]`.
    pub fn angle(&self) -> f64 {
        self.0.y.atan2(self.0.x)
    }

    pub fn contains(&self, v: Vec2, tol: &TolerancePolicy) -> bool {
        tol.is_zero(self.0.cross(v), v.norm())
    }

    pub fn to_array(&self) -> [f64; 2] {
        self.0.to_array()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn canonical_direction(v: Vec2, tol: &TolerancePolicy) -> Result<Direction> {
    let n = v.norm();
    if !n.is_finite() || tol.is_zero(n, 0.0) {
        return Err(Error::ZeroVector);
    }
    let u = v * (1.0 / n);
    let flip = if u.x.abs() > tol.abs_eps() {
        u.x < 0.0
    } else {
        u.y < 0.0
    };
    Ok(Direction(if flip { -u } else { u }))
}

/// Solves `m * x = y` by Cramer's rule.
pub fn solve2(m: &Mat2, y: Vec2, tol: &TolerancePolicy) -> Result<Vec2> {
    if m.is_singular(tol) {
        return Err(Error::SingularMatrix);
    }
    let d = m.det();
    Ok(Vec2::new(
        (y.x * m.m22 - m.m12 * y.y) / d,
        (m.m11 * y.y - m.m21 * y.x) / d,
    ))
}

/// Real eigen-structure of a 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenReport {
    /// Complex conjugate eigenvalues: no real eigenvector.
    None,
    /// Repeated eigenvalue with a single eigen-line (defective matrix).
    One(Direction),
    /// Two distinct real eigen-lines, ordered by decreasing eigenvalue.
    Two(Direction, Direction),
    /// Scalar multiple of the identity: every line is an eigen-line.
    Isotropic,
}

impl EigenReport {
    pub fn directions(&self) -> Vec<Direction> {
        match *self {
            EigenReport::One(d) => vec![d],
            EigenReport::Two(d1, d2) => vec![d1, d2],
            EigenReport::None | EigenReport::Isotropic => Vec::new(),
        }
    }
}

/// `true` when `m` is within tolerance of a multiple of the identity.
pub fn is_isotropic(m: &Mat2, tol: &TolerancePolicy) -> bool {
    let scale = m.norm();
    tol.is_zero(m.m12, scale) && tol.is_zero(m.m21, scale) && tol.is_zero(m.m11 - m.m22, scale)
}

/// Discriminant of the characteristic polynomial, `tr^2 - 4 det`, written
/// without the cancellation-prone trace term.
pub fn eigen_discriminant(m: &Mat2) -> f64 {
    let h = m.m11 - m.m22;
    h * h + 4.0 * m.m12 * m.m21
}

/// Null direction of a rank-one matrix, taken from the larger of its rows.
pub(crate) fn null_direction(n: &Mat2, tol: &TolerancePolicy) -> Option<Direction> {
    let from_row1 = Vec2::new(n.m12, -n.m11);
    let from_row2 = Vec2::new(n.m22, -n.m21);
    let v = if from_row1.norm_sq() >= from_row2.norm_sq() {
        from_row1
    } else {
        from_row2
    };
    canonical_direction(v, tol).ok()
}

pub fn real_eigen_directions(m: &Mat2, tol: &TolerancePolicy) -> EigenReport {
    if is_isotropic(m, tol) {
        return EigenReport::Isotropic;
    }
    let scale = m.norm();
    let disc = eigen_discriminant(m);
    let half_tr = 0.5 * m.trace();
    if tol.is_zero(disc, scale * scale) {
        let n = *m - Mat2::scalar(half_tr);
        return match null_direction(&n, tol) {
            Some(d) => EigenReport::One(d),
            None => EigenReport::Isotropic,
        };
    }
    if disc < 0.0 {
        return EigenReport::None;
    }
    let s = 0.5 * disc.sqrt();
    let hi = null_direction(&(*m - Mat2::scalar(half_tr + s)), tol);
    let lo = null_direction(&(*m - Mat2::scalar(half_tr - s)), tol);
    match (hi, lo) {
        (Some(a), Some(b)) => EigenReport::Two(a, b),
        (Some(a), None) | (None, Some(a)) => EigenReport::One(a),
        (None, None) => EigenReport::Isotropic,
    }
}

/// Eigen-residual `|d x (M d)|` of a unit direction; zero iff `d` is an eigenvector.
pub fn eigen_residual(m: &Mat2, d: &Direction) -> f64 {
    d.vector().cross(m.mul_vec(d.vector())).abs()
}

pub fn is_eigen_direction(m: &Mat2, d: &Direction, tol: &TolerancePolicy) -> bool {
    tol.is_zero(eigen_residual(m, d), m.norm())
}

/// Full-rank test on the 4-vectorized matrices by fully pivoted elimination.
pub fn linearly_independent(ms: &[Mat2], tol: &TolerancePolicy) -> bool {
    if ms.is_empty() || ms.len() > 4 {
        return false;
    }
    let scale = ms.iter().map(Mat2::norm).fold(0.0, f64::max);
    let mut rows: Vec<[f64; 4]> = ms.iter().map(Mat2::entries).collect();
    let mut cols: Vec<usize> = (0..4).collect();
    for k in 0..rows.len() {
        // pivot: largest remaining entry
        let mut best = (k, k, 0.0f64);
        for (r, row) in rows.iter().enumerate().skip(k) {
            for &c in &cols[k..] {
                if row[c].abs() > best.2 {
                    best = (r, c, row[c].abs());
                }
            }
        }
        if tol.is_zero(best.2, scale) {
            return false;
        }
        rows.swap(k, best.0);
        let ci = cols.iter().position(|&c| c == best.1).unwrap();
        cols.swap(k, ci);
        let pc = cols[k];
        let pivot = rows[k];
        for row in rows.iter_mut().skip(k + 1) {
            let f = row[pc] / pivot[pc];
            for c in 0..4 {
                row[c] -= f * pivot[c];
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn assert_line(d: &Direction, v: Vec2) {
        let e = canonical_direction(v, &tol()).unwrap();
        assert!(d.distance(&e) < 1e-12, "{d} vs {e}");
    }

    #[test]
    fn tolerance_rejects_nonpositive() {
        assert!(TolerancePolicy::new(0.0, 1e-9).is_err());
        assert!(TolerancePolicy::new(1e-9, -1.0).is_err());
        assert!(TolerancePolicy::new(f64::NAN, 1e-9).is_err());
        assert!(TolerancePolicy::new(1e-12, 1e-6).is_ok());
    }

    #[test]
    fn solve2_gram_example() {
        let m = Mat2::new(-2.0, 0.0, 2.0, -1.0);
        let u = solve2(&m, Vec2::new(-10.0, -6.0), &tol()).unwrap();
        assert_eq!(u, Vec2::new(5.0, 16.0));
    }

    #[test]
    fn solve2_identity_and_singular() {
        let y = Vec2::new(3.0, -7.0);
        assert_eq!(solve2(&Mat2::IDENTITY, y, &tol()).unwrap(), y);
        let rank1 = Mat2::new(1.0, 2.0, 2.0, 4.0);
        assert_eq!(solve2(&rank1, y, &tol()), Err(Error::SingularMatrix));
    }

    #[test]
    fn eigen_rotation_has_none() {
        let r = Mat2::new(0.0, -1.0, 1.0, 0.0);
        assert_eq!(real_eigen_directions(&r, &tol()), EigenReport::None);
    }

    #[test]
    fn eigen_two_directions() {
        let a = Mat2::new(5.0, 3.0, -4.0, -2.0);
        match real_eigen_directions(&a, &tol()) {
            EigenReport::Two(d1, d2) => {
                assert_line(&d1, Vec2::new(1.0, -1.0));
                assert_line(&d2, Vec2::new(3.0, -4.0));
            }
            other => panic!("expected two directions, got {other:?}"),
        }
    }

    #[test]
    fn eigen_isotropic_and_defective() {
        assert_eq!(
            real_eigen_directions(&Mat2::scalar(3.0), &tol()),
            EigenReport::Isotropic
        );
        let jordan = Mat2::new(2.0, 1.0, 0.0, 2.0);
        match real_eigen_directions(&jordan, &tol()) {
            EigenReport::One(d) => assert_line(&d, Vec2::new(1.0, 0.0)),
            other => panic!("expected one direction, got {other:?}"),
        }
    }

    #[test]
    fn independence_examples() {
        let a = Mat2::new(0.0, -1.0, 1.0, 0.0);
        let b1 = Mat2::new(1.0, -1.0, 0.0, 2.0);
        let b2 = Mat2::new(0.0, 0.0, 1.0, 0.0);
        assert!(linearly_independent(&[a, b1, b2], &tol()));
        assert!(!linearly_independent(&[b1, b1 * 2.0], &tol()));
        let basis = [
            Mat2::new(1.0, 0.0, 0.0, 0.0),
            Mat2::new(0.0, 1.0, 0.0, 0.0),
            Mat2::new(0.0, 0.0, 1.0, 0.0),
            Mat2::new(0.0, 0.0, 0.0, 1.0),
        ];
        assert!(linearly_independent(&basis, &tol()));
        assert!(!linearly_independent(&[], &tol()));
        assert!(!linearly_independent(&[Mat2::ZERO], &tol()));
    }

    #[test]
    fn canonical_direction_examples() {
        let t = tol();
        assert_eq!(
            canonical_direction(Vec2::new(0.0, -2.0), &t).unwrap().vector(),
            Vec2::new(0.0, 1.0)
        );
        let a = canonical_direction(Vec2::new(-1.0, 2.0), &t).unwrap();
        let b = canonical_direction(Vec2::new(2.0, -4.0), &t).unwrap();
        let s5 = 5f64.sqrt();
        assert_abs_diff_eq!(a.vector().x, 1.0 / s5, epsilon = 1e-15);
        assert_abs_diff_eq!(a.vector().y, -2.0 / s5, epsilon = 1e-15);
        assert_abs_diff_eq!(a.vector().x, b.vector().x, epsilon = 1e-15);
        assert_abs_diff_eq!(a.vector().y, b.vector().y, epsilon = 1e-15);
        let c = canonical_direction(Vec2::new(4.0, -3.0), &t).unwrap();
        assert_abs_diff_eq!(c.vector().x, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(c.vector().y, -0.6, epsilon = 1e-15);
        assert_eq!(
            canonical_direction(Vec2::ZERO, &t),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn condition_number_of_diagonal() {
        assert_abs_diff_eq!(
            Mat2::new(4.0, 0.0, 0.0, 0.5).condition_number(),
            8.0,
            epsilon = 1e-12
        );
        assert_eq!(Mat2::new(1.0, 2.0, 2.0, 4.0).condition_number(), f64::INFINITY);
    }
}
