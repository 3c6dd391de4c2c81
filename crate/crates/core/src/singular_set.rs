//! The steering gram form `det[B1 z  B2 z]` of an input pair and its real zero set.
//!
//! For `B1 = [a1 b1]`, `B2 = [a2 b2]` (columns) the determinant expands to the
//! binary quadratic form `a z1^2 + b z1 z2 + c z2^2` with
//! `a = det[a1 a2]`, `b = det[a1 b2] + det[b1 a2]`, `c = det[b1 b2]`.
//! Its zero set is the origin, one line, two lines, or the whole plane.

use crate::mat2::{canonical_direction, Direction, Mat2, TolerancePolicy, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticForm {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    #[inline]
    pub fn eval(&self, z: Vec2) -> f64 {
        self.a * z.x * z.x + self.b * z.x * z.y + self.c * z.y * z.y
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    /// `a^2 + b^2 + c^2`.
    pub fn coeff_norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c
    }

    /// Rebuilds a form from its values at `(1,0)`, `(0,1)` and `(1,1)`.
    pub fn from_probes(at_e1: f64, at_e2: f64, at_ones: f64) -> Self {
        Self::new(at_e1, at_ones - at_e1 - at_e2, at_e2)
    }
}

/// `det[B1 z  B2 z]` evaluated directly.
pub fn gram_det(b1: &Mat2, b2: &Mat2, z: Vec2) -> f64 {
    b1.mul_vec(z).cross(b2.mul_vec(z))
}

/// `|det[B1 z  B2 z]| / (|B1| |B2| |z|^2)`, a scale-free value in `[0, 1]`.
pub fn normalized_gram(b1: &Mat2, b2: &Mat2, z: Vec2) -> f64 {
    let denom = b1.norm() * b2.norm() * z.norm_sq();
    if denom == 0.0 {
        return 0.0;
    }
    gram_det(b1, b2, z).abs() / denom
}

pub fn gram_form(b1: &Mat2, b2: &Mat2) -> QuadraticForm {
    let (a1, be1) = (b1.col1(), b1.col2());
    let (a2, be2) = (b2.col1(), b2.col2());
    let q = QuadraticForm::new(a1.cross(a2), a1.cross(be2) + be1.cross(a2), be1.cross(be2));
    debug_assert!({
        let p = QuadraticForm::from_probes(
            gram_det(b1, b2, Vec2::new(1.0, 0.0)),
            gram_det(b1, b2, Vec2::new(0.0, 1.0)),
            gram_det(b1, b2, Vec2::new(1.0, 1.0)),
        );
        let s = 1e-9 * (1.0 + b1.norm() * b2.norm());
        (p.a - q.a).abs() <= s && (p.b - q.b).abs() <= s && (p.c - q.c).abs() <= s
    });
    q
}

/// Union of lines through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineUnion {
    PointOnly,
    OneLine(Direction),
    TwoLines(Direction, Direction),
    AllOfPlane,
}

impl LineUnion {
    pub fn lines(&self) -> Vec<Direction> {
        match *self {
            LineUnion::OneLine(d) => vec![d],
            LineUnion::TwoLines(d1, d2) => vec![d1, d2],
            LineUnion::PointOnly | LineUnion::AllOfPlane => Vec::new(),
        }
    }

    pub fn is_empty_of_lines(&self) -> bool {
        matches!(self, LineUnion::PointOnly)
    }

    /// Membership of a state, origin included.
    pub fn contains(&self, v: Vec2, tol: &TolerancePolicy) -> bool {
        match self {
            LineUnion::AllOfPlane => true,
            _ => tol.is_zero(v.norm(), 0.0) || self.lines().iter().any(|d| d.contains(v, tol)),
        }
    }

    /// Adds one line; already-present lines (within tolerance) are not duplicated.
    pub fn with_line(self, d: Direction, tol: &TolerancePolicy) -> LineUnion {
        let present = self.lines().iter().any(|e| tol.is_zero(e.distance(&d), 1.0));
        match self {
            LineUnion::AllOfPlane => self,
            _ if present => self,
            LineUnion::PointOnly => LineUnion::OneLine(d),
            LineUnion::OneLine(e) => ordered_pair(e, d),
            // three lines cannot be represented; the form's zero set never has them
            LineUnion::TwoLines(..) => self,
        }
    }

    /// Image of every line under `m` (e.g. mapping canonical coordinates back through `P^-1`).
    pub fn mapped(&self, m: &Mat2, tol: &TolerancePolicy) -> LineUnion {
        let map = |d: Direction| canonical_direction(m.mul_vec(d.vector()), tol).ok();
        match *self {
            LineUnion::OneLine(d) => map(d).map_or(LineUnion::PointOnly, LineUnion::OneLine),
            LineUnion::TwoLines(d1, d2) => match (map(d1), map(d2)) {
                (Some(e1), Some(e2)) => ordered_pair(e1, e2),
                (Some(e), None) | (None, Some(e)) => LineUnion::OneLine(e),
                (None, None) => LineUnion::PointOnly,
            },
            other => other,
        }
    }
}

/// Two lines listed by decreasing angle of their canonical representatives.
fn ordered_pair(d1: Direction, d2: Direction) -> LineUnion {
    if d1.angle() >= d2.angle() {
        LineUnion::TwoLines(d1, d2)
    } else {
        LineUnion::TwoLines(d2, d1)
    }
}

pub fn zero_lines(q: &QuadraticForm, tol: &TolerancePolicy) -> LineUnion {
    zero_lines_scaled(q, 0.0, tol)
}

/// Zero set of `q`; `magnitude` is the reference size of the coefficients
/// (for a gram form, `|B1| |B2|`) used by the identically-zero test.
pub fn zero_lines_scaled(q: &QuadraticForm, magnitude: f64, tol: &TolerancePolicy) -> LineUnion {
    let QuadraticForm { a, b, c } = *q;
    if [a, b, c].iter().all(|&v| tol.is_zero(v, magnitude)) {
        return LineUnion::AllOfPlane;
    }
    let disc = q.discriminant();
    if tol.is_zero(disc, q.coeff_norm_sq()) {
        // perfect square: a (z1 + b/(2a) z2)^2 or c (z2 + b/(2c) z1)^2
        let v = if a.abs() >= c.abs() {
            Vec2::new(-b, 2.0 * a)
        } else {
            Vec2::new(2.0 * c, -b)
        };
        return canonical_direction(v, tol).map_or(LineUnion::PointOnly, LineUnion::OneLine);
    }
    if disc < 0.0 {
        return LineUnion::PointOnly;
    }
    // Roots in slope t = z2/z1 of c t^2 + b t + a: t1 = h/c and t2 = a/h with
    // h = -(b + sign(b) sqrt(disc))/2, |h| >= sqrt(disc)/2 > 0. Written as
    // homogeneous directions no division (and no cancellation) is needed.
    let h = -0.5 * (b + b.signum() * disc.sqrt());
    let l1 = canonical_direction(Vec2::new(c, h), tol);
    let l2 = canonical_direction(Vec2::new(h, a), tol);
    match (l1, l2) {
        (Ok(d1), Ok(d2)) => ordered_pair(d1, d2),
        (Ok(d), Err(_)) | (Err(_), Ok(d)) => LineUnion::OneLine(d),
        _ => LineUnion::PointOnly,
    }
}

/// Zero lines of the gram form of a pair, with the identically-zero test scaled by `|B1| |B2|`.
pub fn gram_zero_lines(b1: &Mat2, b2: &Mat2, tol: &TolerancePolicy) -> LineUnion {
    zero_lines_scaled(&gram_form(b1, b2), b1.norm() * b2.norm(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn line(x: f64, y: f64) -> Direction {
        canonical_direction(Vec2::new(x, y), &tol()).unwrap()
    }

    fn same_lines(u: &LineUnion, expected: &[Direction]) -> bool {
        let got = u.lines();
        got.len() == expected.len()
            && expected
                .iter()
                .all(|e| got.iter().any(|g| g.distance(e) < 1e-12))
    }

    /// Probe oracle: values of det[B1 z B2 z] at three points.
    fn probe_form(b1: &Mat2, b2: &Mat2) -> QuadraticForm {
        let det_at = |z: Vec2| {
            let m = Mat2::from_cols(*b1 * z, *b2 * z);
            m.det()
        };
        QuadraticForm::from_probes(
            det_at(Vec2::new(1.0, 0.0)),
            det_at(Vec2::new(0.0, 1.0)),
            det_at(Vec2::new(1.0, 1.0)),
        )
    }

    #[test]
    fn gram_form_triangular_pair() {
        let b1 = Mat2::new(1.0, -1.0, 0.0, 2.0);
        let b2 = Mat2::new(6.0, 1.0, 0.0, 6.0);
        let probe = probe_form(&b1, &b2);
        assert_eq!(probe, QuadraticForm::new(0.0, -6.0, -8.0));
        assert_eq!(gram_form(&b1, &b2), probe);
    }

    #[test]
    fn gram_form_antidiagonal_pair() {
        let b1 = Mat2::new(0.0, 1.0, 1.0, 0.0);
        let b2 = Mat2::new(0.0, 2.0, -1.0, 0.0);
        let probe = probe_form(&b1, &b2);
        assert_eq!(probe, QuadraticForm::new(0.0, -3.0, 0.0));
        assert_eq!(gram_form(&b1, &b2), probe);
    }

    #[test]
    fn gram_form_first_row_pair_vanishes() {
        let e11 = Mat2::new(1.0, 0.0, 0.0, 0.0);
        let e12 = Mat2::new(0.0, 1.0, 0.0, 0.0);
        assert_eq!(gram_form(&e11, &e12), QuadraticForm::new(0.0, 0.0, 0.0));
        assert_eq!(gram_zero_lines(&e11, &e12, &tol()), LineUnion::AllOfPlane);
    }

    #[test]
    fn zero_lines_factored_form() {
        // -2 z2 (3 z1 + 4 z2)
        let u = zero_lines(&QuadraticForm::new(0.0, -6.0, -8.0), &tol());
        assert!(matches!(u, LineUnion::TwoLines(..)));
        assert!(same_lines(&u, &[line(1.0, 0.0), line(4.0, -3.0)]));
    }

    #[test]
    fn zero_lines_axes() {
        let u = zero_lines(&QuadraticForm::new(0.0, -3.0, 0.0), &tol());
        assert!(same_lines(&u, &[line(1.0, 0.0), line(0.0, 1.0)]));
    }

    #[test]
    fn zero_lines_definite_and_square() {
        assert_eq!(
            zero_lines(&QuadraticForm::new(1.0, 0.0, 1.0), &tol()),
            LineUnion::PointOnly
        );
        // (z1 - 2 z2)^2
        let u = zero_lines(&QuadraticForm::new(1.0, -4.0, 4.0), &tol());
        assert!(matches!(u, LineUnion::OneLine(_)));
        assert!(same_lines(&u, &[line(2.0, 1.0)]));
        // (3 z1 + z2)^2 with |c| < |a| branch swapped
        let u = zero_lines(&QuadraticForm::new(1.0, 6.0, 9.0), &tol());
        assert!(same_lines(&u, &[line(3.0, -1.0)]));
    }

    #[test]
    fn two_lines_are_ordered_by_angle() {
        let u = zero_lines(&QuadraticForm::new(1.0, 0.0, -1.0), &tol());
        match u {
            LineUnion::TwoLines(d1, d2) => {
                assert!(d1.distance(&line(1.0, 1.0)) < 1e-12);
                assert!(d2.distance(&line(1.0, -1.0)) < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn line_union_helpers() {
        let t = tol();
        let u = LineUnion::OneLine(line(1.0, 0.0));
        assert_eq!(u.with_line(line(2.0, 0.0), &t), u);
        let two = u.with_line(line(0.0, 1.0), &t);
        assert!(same_lines(&two, &[line(1.0, 0.0), line(0.0, 1.0)]));
        assert!(two.contains(Vec2::new(0.0, -3.0), &t));
        assert!(two.contains(Vec2::ZERO, &t));
        assert!(!two.contains(Vec2::new(1.0, 1.0), &t));
        let p_inv = Mat2::new(1.0, -1.0, -1.0, 2.0);
        let mapped = two.mapped(&p_inv, &t);
        assert!(same_lines(&mapped, &[line(1.0, -1.0), line(-1.0, 2.0)]));
    }
}
