//! Structural detection and canonical forms: common real eigenvectors,
//! simultaneous triangularization, the zero-bottom-row class, the
//! anti-diagonal class, and the input combination that removes a common
//! eigenvector from a drift triple.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mat2::{
    canonical_direction, eigen_discriminant, is_eigen_direction, null_direction,
    real_eigen_directions, Direction, EigenReport, Mat2, TolerancePolicy, Vec2,
};
use crate::singular_set::{gram_zero_lines, LineUnion};

/// Seed of the fallback search in [`combine_inputs`].
const COMBINE_SEED: u64 = 0x0005_eed0_c0b1_7e55;
const COMBINE_RANDOM_TRIES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormClass {
    None,
    UpperTriangular,
    ZeroBottomRow,
    AntiDiagonal,
}

/// Result of a structural detection: the similarity `x~ = P x` and the
/// canonical forms `P M P^-1` of the examined matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub common_eigenvector: Option<Direction>,
    pub transform: Option<Mat2>,
    pub transform_condition: Option<f64>,
    pub canonical_forms: Option<Vec<Mat2>>,
    pub form_class: FormClass,
}

impl StructureReport {
    pub fn empty() -> Self {
        Self {
            common_eigenvector: None,
            transform: None,
            transform_condition: None,
            canonical_forms: None,
            form_class: FormClass::None,
        }
    }

    /// `P^-1`, whose columns are the canonical basis in original coordinates.
    pub fn inverse_transform(&self, tol: &TolerancePolicy) -> Option<Mat2> {
        self.transform.and_then(|p| p.inverse(tol).ok())
    }
}

/// Candidate lines come from one member's real
/// eigenvectors and are then checked against every member.
pub fn common_real_eigenvector(ms: &[Mat2], tol: &TolerancePolicy) -> Result<Option<Direction>> {
    let reports: Vec<EigenReport> = ms.iter().map(|m| real_eigen_directions(m, tol)).collect();
    if reports.iter().any(|r| matches!(r, EigenReport::None)) {
        return Ok(None);
    }
    // Take candidates from the member whose eigenvectors are best separated;
    // any non-scalar member would do.
    let source = ms
        .iter()
        .zip(&reports)
        .filter(|(_, r)| !matches!(r, EigenReport::Isotropic))
        .map(|(m, r)| {
            let n = m.norm();
            let gap = match r {
                EigenReport::Two(..) => eigen_discriminant(m).abs() / (n * n),
                _ => -1.0,
            };
            (gap, r)
        })
        .max_by(|x, y| x.0.total_cmp(&y.0));
    let Some((_, report)) = source else {
        return Err(Error::AllIsotropic);
    };
    Ok(report
        .directions()
        .into_iter()
        .find(|d| ms.iter().all(|m| is_eigen_direction(m, d, tol))))
}

fn orthonormal_frame(d: &Direction) -> (Mat2, Mat2) {
    let v = d.vector();
    let p_inv = Mat2::from_cols(v, v.perp());
    (p_inv.transpose(), p_inv)
}

/// Conjugates every member into upper-triangular form using `P^-1 = [d, d^perp]`.
pub fn triangularize(ms: &[Mat2], d: &Direction, tol: &TolerancePolicy) -> Result<StructureReport> {
    if !ms.iter().all(|m| is_eigen_direction(m, d, tol)) {
        return Err(Error::NotCommonEigenvector);
    }
    let (p, p_inv) = orthonormal_frame(d);
    let forms: Vec<Mat2> = ms
        .iter()
        .map(|m| {
            let mut f = m.similar(&p, &p_inv);
            // (2,1) entry equals the signed eigen-residual, already tested
            f.m21 = 0.0;
            f
        })
        .collect();
    let form_class = if forms.iter().all(|f| tol.is_zero(f.m22, f.norm())) {
        FormClass::ZeroBottomRow
    } else {
        FormClass::UpperTriangular
    };
    Ok(StructureReport {
        common_eigenvector: Some(*d),
        transform: Some(p),
        transform_condition: Some(p.condition_number()),
        canonical_forms: Some(forms),
        form_class,
    })
}

/// `P M P^-1` for each member.
pub fn conjugate_all(ms: &[Mat2], p: &Mat2, tol: &TolerancePolicy) -> Result<Vec<Mat2>> {
    let p_inv = p.inverse(tol)?;
    Ok(ms.iter().map(|m| m.similar(p, &p_inv)).collect())
}

/// Report for a caller-chosen similarity, with the form class read off the
/// conjugated matrices.
pub fn report_for_transform(ms: &[Mat2], p: &Mat2, tol: &TolerancePolicy) -> Result<StructureReport> {
    let p_inv = p.inverse(tol)?;
    let forms: Vec<Mat2> = ms.iter().map(|m| m.similar(p, &p_inv)).collect();
    let zero = |v: f64, f: &Mat2| tol.is_zero(v, f.norm());
    let form_class = if forms.iter().all(|f| zero(f.m11, f) && zero(f.m22, f)) {
        FormClass::AntiDiagonal
    } else if forms.iter().all(|f| zero(f.m21, f)) {
        if forms.iter().all(|f| zero(f.m22, f)) {
            FormClass::ZeroBottomRow
        } else {
            FormClass::UpperTriangular
        }
    } else {
        FormClass::None
    };
    let common_eigenvector = match form_class {
        FormClass::UpperTriangular | FormClass::ZeroBottomRow => {
            canonical_direction(p_inv.col1(), tol).ok()
        }
        _ => None,
    };
    Ok(StructureReport {
        common_eigenvector,
        transform: Some(*p),
        transform_condition: Some(p.condition_number()),
        canonical_forms: Some(forms),
        form_class,
    })
}

fn left_null_direction(m: &Mat2, tol: &TolerancePolicy) -> Option<Direction> {
    null_direction(&m.transpose(), tol)
}

/// Detects a pair simultaneously similar to matrices with vanishing second rows.
///
/// Returns the common left null line `w` (`w^T B1 = w^T B2 = 0`) and an
/// orthogonal `P` with rows `(v, w)`.
pub fn zero_bottom_row_pair(b1: &Mat2, b2: &Mat2, tol: &TolerancePolicy) -> Option<(Direction, Mat2)> {
    if !b1.is_singular(tol) || !b2.is_singular(tol) {
        return None;
    }
    let w = match (left_null_direction(b1, tol), left_null_direction(b2, tol)) {
        (Some(w1), Some(w2)) => {
            if !tol.is_zero(w1.distance(&w2), 1.0) {
                return None;
            }
            w1
        }
        (Some(w), None) | (None, Some(w)) => w,
        (None, None) => return None,
    };
    let wv = w.vector();
    let v = Vec2::new(wv.y, -wv.x);
    let p = Mat2::from_rows([[v.x, v.y], [wv.x, wv.y]]);
    Some((w, p))
}

/// Report for a zero-bottom-row pair, conjugating every matrix in `ms`.
pub fn zero_bottom_row_report(ms: &[Mat2], p: &Mat2) -> StructureReport {
    let p_inv = p.transpose();
    let forms = ms.iter().map(|m| m.similar(p, &p_inv)).collect();
    StructureReport {
        common_eigenvector: None,
        transform: Some(*p),
        transform_condition: Some(p.condition_number()),
        canonical_forms: Some(forms),
        form_class: FormClass::ZeroBottomRow,
    }
}

/// Detects a trace-free pair simultaneously similar to anti-diagonal matrices.
///
/// Swap lines `v` must satisfy `B2 v ∈ span{B1 v}`, i.e. lie in the gram zero
/// set; for trace-free `B1`, `B1 (B1 v) = -det(B1) v` closes the swap.
pub fn antidiagonalize_pair(b1: &Mat2, b2: &Mat2, tol: &TolerancePolicy) -> Option<StructureReport> {
    if !tol.is_zero(b1.trace(), b1.norm()) || !tol.is_zero(b2.trace(), b2.norm()) {
        return None;
    }
    let candidates = match gram_zero_lines(b1, b2, tol) {
        LineUnion::PointOnly | LineUnion::AllOfPlane => return None,
        lines => lines.lines(),
    };
    for d in candidates {
        let v = d.vector();
        let w = b1.mul_vec(v);
        if tol.is_zero(v.cross(w), b1.norm()) {
            continue;
        }
        if !tol.is_zero(v.cross(b2.mul_vec(w)), b2.norm() * w.norm()) {
            continue;
        }
        let p_inv = Mat2::from_cols(v, w);
        let Ok(p) = p_inv.inverse(tol) else { continue };
        let mut forms = Vec::with_capacity(2);
        for m in [b1, b2] {
            let mut f = m.similar(&p, &p_inv);
            if !tol.is_zero(f.m11, f.norm()) || !tol.is_zero(f.m22, f.norm()) {
                break;
            }
            f.m11 = 0.0;
            f.m22 = 0.0;
            forms.push(f);
        }
        if forms.len() != 2 {
            continue;
        }
        return Some(StructureReport {
            common_eigenvector: None,
            transform: Some(p),
            transform_condition: Some(p.condition_number()),
            canonical_forms: Some(forms),
            form_class: FormClass::AntiDiagonal,
        });
    }
    None
}

/// Coefficients `(a~, b~)` such that `{a, b1, a~ b2 + b~ b3}` has no common
/// real eigenvector.
///
/// Tries `(1,0)`, `(0,1)`, `(1,1)`, then a fixed-seed batch of random pairs;
/// every candidate is certified by rerunning the eigenvector search.
pub fn combine_inputs(
    a: &Mat2,
    b1: &Mat2,
    b2: &Mat2,
    b3: &Mat2,
    tol: &TolerancePolicy,
) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(COMBINE_SEED);
    let random = (0..COMBINE_RANDOM_TRIES).map(move |_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let candidates = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)].into_iter().chain(random);
    for (x, y) in candidates {
        let combined = *b2 * x + *b3 * y;
        if matches!(common_real_eigenvector(&[*a, *b1, combined], tol), Ok(None)) {
            return Ok((x, y));
        }
    }
    Err(Error::NoCombinationFound)
}
