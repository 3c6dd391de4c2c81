mod common;

use bilin2::mat2::linearly_independent;
use bilin2::singular_set::{gram_form, gram_zero_lines, LineUnion, QuadraticForm};
use bilin2::structure::common_real_eigenvector;
use bilin2::Vec2;
use common::{entry, gram_oracle, line_angle_gap, mat, sweep_zero_angles, tol, unit, vec2};
use proptest::prelude::*;

proptest! {
    #[test]
    fn closed_form_matches_probes(b1 in mat(), b2 in mat(), zs in prop::collection::vec(vec2(), 100)) {
        let q = gram_form(&b1, &b2);
        let probes = QuadraticForm::from_probes(
            gram_oracle(&b1, &b2, Vec2::new(1.0, 0.0)),
            gram_oracle(&b1, &b2, Vec2::new(0.0, 1.0)),
            gram_oracle(&b1, &b2, Vec2::new(1.0, 1.0)),
        );
        let scale = b1.norm() * b2.norm();
        prop_assert!((q.a - probes.a).abs() <= 1e-12 * (1.0 + scale));
        prop_assert!((q.b - probes.b).abs() <= 1e-12 * (1.0 + scale));
        prop_assert!((q.c - probes.c).abs() <= 1e-12 * (1.0 + scale));
        for z in zs {
            let diff = (q.eval(z) - gram_oracle(&b1, &b2, z)).abs();
            prop_assert!(diff <= tol().threshold(scale * z.norm_sq()));
        }
    }

    #[test]
    fn substitution_leaves_form_unchanged(b1 in mat(), b2 in mat(), c in entry()) {
        let q = gram_form(&b1, &b2);
        let qs = gram_form(&b1, &(b2 - b1 * c));
        let scale = b1.norm() * (b2.norm() + c.abs() * b1.norm());
        for (x, y) in [(q.a, qs.a), (q.b, qs.b), (q.c, qs.c)] {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + scale));
        }
    }

    #[test]
    fn no_common_eigenvector_means_nondegenerate_form(b1 in mat(), b2 in mat()) {
        prop_assume!(linearly_independent(&[b1, b2], &tol()));
        prop_assume!(matches!(common_real_eigenvector(&[b1, b2], &tol()), Ok(None)));
        prop_assert_ne!(gram_zero_lines(&b1, &b2, &tol()), LineUnion::AllOfPlane);
    }

    #[test]
    fn reported_lines_are_zeros(b1 in mat(), b2 in mat()) {
        let q = gram_form(&b1, &b2);
        let scale = b1.norm() * b2.norm();
        for d in gram_zero_lines(&b1, &b2, &tol()).lines() {
            prop_assert!(q.eval(d.vector()).abs() <= tol().threshold(scale));
        }
    }

    #[test]
    fn lines_contain_their_points(b1 in mat(), b2 in mat(), s in 0.1..10.0f64, z in unit()) {
        let lines = gram_zero_lines(&b1, &b2, &tol());
        for d in lines.lines() {
            prop_assert!(lines.contains(d.vector() * s, &tol()));
            prop_assert!(lines.contains(d.vector() * -s, &tol()));
        }
        prop_assert!(lines.contains(Vec2::ZERO, &tol()));
        if lines == LineUnion::PointOnly {
            prop_assert!(!lines.contains(z, &tol()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dense_sweep_finds_no_unreported_zero(b1 in mat(), b2 in mat()) {
        let lines = gram_zero_lines(&b1, &b2, &tol());
        prop_assume!(lines != LineUnion::AllOfPlane);
        let reported = lines.lines();
        for t in sweep_zero_angles(&b1, &b2, 10_000) {
            let gap = reported
                .iter()
                .map(|d| line_angle_gap(t, d.vector()))
                .fold(f64::INFINITY, f64::min);
            prop_assert!(gap <= 1e-6, "zero at angle {} is {} from every reported line", t, gap);
        }
    }
}
