//! Controllability verdicts for two-dimensional multi-input bilinear systems
//!
//! ```text
//! x(k+1) = (A + u1(k) B1 + ... + um(k) Bm) x(k)     (with drift)
//! x(k+1) = (u1(k) B1 + ... + um(k) Bm) x(k)         (driftless)
//! ```
//!
//! With drift the system is controllable exactly when `A, B1, .., Bm` share no
//! real eigenvector. Driftless systems additionally need, for `m = 2`, that
//! the pair is not simultaneously anti-diagonalizable. Systems that fail the
//! test are nearly controllable when, after triangularizing on the shared
//! eigenvector, some input keeps a nonzero `(2,2)` entry (or, driftless
//! `m = 2`, when the pair is anti-diagonal); the excluded set of initial
//! states is then the zero set of the steering gram form. Otherwise the
//! shared eigen-line is the largest controllable region.

use crate::error::{Error, Result};
use crate::mat2::{linearly_independent, Direction, Mat2, TolerancePolicy};
use crate::singular_set::{gram_zero_lines, LineUnion};
use crate::structure::{
    antidiagonalize_pair, combine_inputs, common_real_eigenvector, triangularize,
    zero_bottom_row_pair, zero_bottom_row_report, StructureReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    WithDrift,
    Driftless,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilinearSystem {
    drift: Option<Mat2>,
    inputs: Vec<Mat2>,
    tol: TolerancePolicy,
}

impl BilinearSystem {
    pub fn with_drift(drift: Mat2, inputs: Vec<Mat2>, tol: TolerancePolicy) -> Result<Self> {
        Self::validated(Some(drift), inputs, tol)
    }

    pub fn driftless(inputs: Vec<Mat2>, tol: TolerancePolicy) -> Result<Self> {
        Self::validated(None, inputs, tol)
    }

    fn validated(drift: Option<Mat2>, inputs: Vec<Mat2>, tol: TolerancePolicy) -> Result<Self> {
        let sys = Self { drift, inputs, tol };
        let m = sys.m();
        let (lo, hi) = match sys.kind() {
            SystemKind::WithDrift => (2, 3),
            SystemKind::Driftless => (2, 4),
        };
        if m < lo || m > hi {
            return Err(Error::InvalidSystem(format!(
                "{m} input matrices given; expected between {lo} and {hi}"
            )));
        }
        if let Some(i) = sys.matrices().iter().position(|b| !b.is_finite()) {
            return Err(Error::InvalidSystem(format!(
                "matrix {i} has a non-finite entry"
            )));
        }
        if !linearly_independent(&sys.matrices(), &tol) {
            return Err(Error::InvalidSystem(
                "linearly dependent inputs: the system matrices must be linearly independent"
                    .into(),
            ));
        }
        Ok(sys)
    }

    pub fn kind(&self) -> SystemKind {
        if self.drift.is_some() {
            SystemKind::WithDrift
        } else {
            SystemKind::Driftless
        }
    }

    pub fn drift(&self) -> Option<&Mat2> {
        self.drift.as_ref()
    }

    pub fn inputs(&self) -> &[Mat2] {
        &self.inputs
    }

    pub fn m(&self) -> usize {
        self.inputs.len()
    }

    pub fn tol(&self) -> &TolerancePolicy {
        &self.tol
    }

    /// Drift (when present) followed by the inputs.
    pub fn matrices(&self) -> Vec<Mat2> {
        self.drift.iter().chain(&self.inputs).copied().collect()
    }

    /// `A + sum u_i B_i` (drift omitted for driftless systems).
    pub fn closed_loop(&self, u: &[f64]) -> Result<Mat2> {
        if u.len() != self.m() {
            return Err(Error::ArityMismatch {
                expected: self.m(),
                got: u.len(),
            });
        }
        Ok(self
            .inputs
            .iter()
            .zip(u)
            .fold(self.drift.unwrap_or(Mat2::ZERO), |acc, (b, &ui)| acc + *b * ui))
    }

    /// The system in coordinates `x~ = P x`.
    pub fn conjugated(&self, p: &Mat2) -> Result<Self> {
        let p_inv = p.inverse(&self.tol)?;
        let conj = |m: &Mat2| m.similar(p, &p_inv);
        Self::validated(
            self.drift.as_ref().map(conj),
            self.inputs.iter().map(conj).collect(),
            self.tol,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlClass {
    Controllable,
    NearlyControllable,
    Uncontrollable,
}

impl ControlClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ControlClass::Controllable => "controllable",
            ControlClass::NearlyControllable => "nearly-controllable",
            ControlClass::Uncontrollable => "uncontrollable",
        }
    }
}

/// An input held at a constant value (0-based index).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinnedInput {
    pub index: usize,
    pub value: f64,
}

/// Two inputs driven by one effective control: `u_j = a~ v`, `u_k = b~ v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputCombination {
    pub indices: (usize, usize),
    pub coefficients: (f64, f64),
}

/// How the original inputs are reduced to the two effective inputs used for steering.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Reduction {
    pub pinned: Vec<PinnedInput>,
    pub combination: Option<InputCombination>,
}

/// Two-input system obtained by applying a [`Reduction`], with the affine map
/// `u = offset + v1 * columns[0] + v2 * columns[1]` back to the original controls.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveSystem {
    pub system: BilinearSystem,
    columns: [Vec<f64>; 2],
    offset: Vec<f64>,
}

impl EffectiveSystem {
    pub fn lift(&self, v: [f64; 2]) -> Vec<f64> {
        self.offset
            .iter()
            .zip(&self.columns[0])
            .zip(&self.columns[1])
            .map(|((o, c0), c1)| o + v[0] * c0 + v[1] * c1)
            .collect()
    }
}

impl Reduction {
    pub fn is_identity(&self) -> bool {
        self.pinned.is_empty() && self.combination.is_none()
    }

    pub fn effective(&self, sys: &BilinearSystem) -> Result<EffectiveSystem> {
        let m = sys.m();
        let mut offset = vec![0.0; m];
        for p in &self.pinned {
            if p.index >= m {
                return Err(Error::InvalidSystem(format!("pinned input {} out of range", p.index)));
            }
            offset[p.index] = p.value;
        }
        let is_pinned = |i: usize| self.pinned.iter().any(|p| p.index == i);
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for i in (0..m).filter(|&i| !is_pinned(i)) {
            let mut col = vec![0.0; m];
            match self.combination {
                Some(c) if i == c.indices.0.min(c.indices.1) => {
                    col[c.indices.0] = c.coefficients.0;
                    col[c.indices.1] = c.coefficients.1;
                }
                Some(c) if i == c.indices.0.max(c.indices.1) => continue,
                _ => col[i] = 1.0,
            }
            columns.push(col);
        }
        let [c0, c1]: [Vec<f64>; 2] = columns.try_into().map_err(|cols: Vec<Vec<f64>>| {
            Error::InvalidSystem(format!("reduction leaves {} effective inputs", cols.len()))
        })?;
        let combine = |col: &[f64]| {
            sys.inputs()
                .iter()
                .zip(col)
                .fold(Mat2::ZERO, |acc, (b, &w)| acc + *b * w)
        };
        let inputs = vec![combine(&c0), combine(&c1)];
        let has_drift = sys.drift().is_some() || self.pinned.iter().any(|p| p.value != 0.0);
        let system = if has_drift {
            let drift = sys.drift().copied().unwrap_or(Mat2::ZERO) + combine(&offset);
            BilinearSystem::with_drift(drift, inputs, *sys.tol())?
        } else {
            BilinearSystem::driftless(inputs, *sys.tol())?
        };
        Ok(EffectiveSystem {
            system,
            columns: [c0, c1],
            offset,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub class: ControlClass,
    /// Initial states the certificate cannot steer; the origin alone for
    /// controllable systems, the whole plane for uncontrollable ones.
    pub excluded_initial: LineUnion,
    pub excluded_terminal: LineUnion,
    /// Invariant common eigen-line of an uncontrollable system.
    pub largest_region: Option<Direction>,
    pub structure: Option<StructureReport>,
    pub reduction: Reduction,
}

impl Verdict {
    fn controllable(structure: Option<StructureReport>, reduction: Reduction) -> Self {
        Self {
            class: ControlClass::Controllable,
            excluded_initial: LineUnion::PointOnly,
            excluded_terminal: LineUnion::PointOnly,
            largest_region: None,
            structure,
            reduction,
        }
    }
}

pub fn analyze(sys: &BilinearSystem) -> Result<Verdict> {
    let tol = sys.tol();
    let bs = sys.inputs();
    match (sys.kind(), sys.m()) {
        (SystemKind::WithDrift, _) => match common_real_eigenvector(&sys.matrices(), tol)? {
            None => {
                let reduction = if sys.m() == 3 {
                    let a = sys.drift().expect("drift system");
                    let coefficients = combine_inputs(a, &bs[0], &bs[1], &bs[2], tol)?;
                    Reduction {
                        pinned: Vec::new(),
                        combination: Some(InputCombination {
                            indices: (1, 2),
                            coefficients,
                        }),
                    }
                } else {
                    Reduction::default()
                };
                let structure = zero_bottom_row_structure(sys, &reduction)?;
                Ok(Verdict::controllable(structure, reduction))
            }
            Some(d) => triangular_verdict(sys, d),
        },
        (SystemKind::Driftless, 2) => match common_real_eigenvector(bs, tol)? {
            None => match antidiagonalize_pair(&bs[0], &bs[1], tol) {
                None => Ok(Verdict::controllable(None, Reduction::default())),
                Some(report) => Ok(Verdict {
                    class: ControlClass::NearlyControllable,
                    excluded_initial: gram_zero_lines(&bs[0], &bs[1], tol),
                    excluded_terminal: LineUnion::PointOnly,
                    largest_region: None,
                    structure: Some(report),
                    reduction: Reduction::default(),
                }),
            },
            Some(d) => triangular_verdict(sys, d),
        },
        (SystemKind::Driftless, 3) => match common_real_eigenvector(bs, tol)? {
            None => {
                // u1 = 1 turns B1 into a drift term with two remaining inputs
                let reduction = Reduction {
                    pinned: vec![PinnedInput { index: 0, value: 1.0 }],
                    combination: None,
                };
                let structure = zero_bottom_row_structure(sys, &reduction)?;
                Ok(Verdict::controllable(structure, reduction))
            }
            Some(d) => triangular_verdict(sys, d),
        },
        (SystemKind::Driftless, _) => {
            // four independent matrices span all of R^{2x2}: no common eigenvector
            let coefficients = combine_inputs(&bs[0], &bs[1], &bs[2], &bs[3], tol)?;
            let reduction = Reduction {
                pinned: vec![PinnedInput { index: 0, value: 1.0 }],
                combination: Some(InputCombination {
                    indices: (2, 3),
                    coefficients,
                }),
            };
            let structure = zero_bottom_row_structure(sys, &reduction)?;
            Ok(Verdict::controllable(structure, reduction))
        }
    }
}

/// Structure report when the effective input pair of a controllable drift
/// system falls in the zero-bottom-row class.
fn zero_bottom_row_structure(
    sys: &BilinearSystem,
    reduction: &Reduction,
) -> Result<Option<StructureReport>> {
    let eff = reduction.effective(sys)?;
    let bs = eff.system.inputs();
    Ok(zero_bottom_row_pair(&bs[0], &bs[1], sys.tol())
        .map(|(_, p)| zero_bottom_row_report(&eff.system.matrices(), &p)))
}

fn triangular_verdict(sys: &BilinearSystem, d: Direction) -> Result<Verdict> {
    let tol = sys.tol();
    let report = triangularize(&sys.matrices(), &d, tol)?;
    let skip = usize::from(sys.drift().is_some());
    let forms = report.canonical_forms.as_deref().unwrap_or_default();
    let active = forms[skip..].iter().any(|f| !tol.is_zero(f.m22, f.norm()));
    if !active {
        return Ok(Verdict {
            class: ControlClass::Uncontrollable,
            excluded_initial: LineUnion::AllOfPlane,
            excluded_terminal: LineUnion::PointOnly,
            largest_region: Some(d),
            structure: Some(report),
            reduction: Reduction::default(),
        });
    }
    let bs = sys.inputs();
    let m = bs.len();
    let (i, j, lines) = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, gram_zero_lines(&bs[i], &bs[j], tol)))
        .find(|(_, _, lines)| *lines != LineUnion::AllOfPlane)
        .ok_or_else(|| Error::InvalidSystem("no input pair with a nondegenerate gram form".into()))?;
    let pinned = (0..m)
        .filter(|&k| k != i && k != j)
        .map(|index| PinnedInput { index, value: 0.0 })
        .collect();
    Ok(Verdict {
        class: ControlClass::NearlyControllable,
        excluded_initial: lines.with_line(d, tol),
        excluded_terminal: LineUnion::PointOnly,
        largest_region: None,
        structure: Some(report),
        reduction: Reduction {
            pinned,
            combination: None,
        },
    })
}

/// Excluded initial set `E` of a nearly controllable system, in original coordinates.
pub fn excluded_set(sys: &BilinearSystem) -> Result<LineUnion> {
    let verdict = analyze(sys)?;
    if verdict.class != ControlClass::NearlyControllable {
        return Err(Error::NotNearlyControllable);
    }
    Ok(verdict.excluded_initial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::{canonical_direction, Vec2};
    use crate::structure::FormClass;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn line(x: f64, y: f64) -> Direction {
        canonical_direction(Vec2::new(x, y), &tol()).unwrap()
    }

    fn has_lines(u: &LineUnion, expected: &[Direction]) -> bool {
        let got = u.lines();
        got.len() == expected.len()
            && expected.iter().all(|e| got.iter().any(|g| g.distance(e) < 1e-9))
    }

    fn ex1() -> BilinearSystem {
        BilinearSystem::with_drift(
            Mat2::new(0.0, -1.0, 1.0, 0.0),
            vec![Mat2::new(1.0, -1.0, 0.0, 2.0), Mat2::new(0.0, 0.0, 1.0, 0.0)],
            tol(),
        )
        .unwrap()
    }

    fn ex2() -> BilinearSystem {
        BilinearSystem::with_drift(
            Mat2::new(5.0, 3.0, -4.0, -2.0),
            vec![Mat2::new(0.0, -1.0, 2.0, 3.0), Mat2::new(7.0, 1.0, -1.0, 5.0)],
            tol(),
        )
        .unwrap()
    }

    fn ex3() -> BilinearSystem {
        BilinearSystem::driftless(
            vec![Mat2::new(-1.0, 0.0, 3.0, 1.0), Mat2::new(4.0, 3.0, -6.0, -4.0)],
            tol(),
        )
        .unwrap()
    }

    #[test]
    fn ingestion_rejects_bad_systems() {
        let b = Mat2::new(1.0, 2.0, 3.0, 4.0);
        let err = BilinearSystem::driftless(vec![b, b * 2.0], tol()).unwrap_err();
        assert!(err.to_string().contains("linearly dependent inputs"));
        assert!(BilinearSystem::driftless(vec![b], tol()).is_err());
        let four = vec![Mat2::IDENTITY; 4];
        assert!(BilinearSystem::with_drift(b, four, tol()).is_err());
        let nan = Mat2::new(f64::NAN, 0.0, 0.0, 1.0);
        assert!(BilinearSystem::driftless(vec![b, nan], tol()).is_err());
    }

    #[test]
    fn example_one_is_controllable() {
        let v = analyze(&ex1()).unwrap();
        assert_eq!(v.class, ControlClass::Controllable);
        assert!(v.reduction.is_identity());
        assert!(v.structure.is_none());
    }

    #[test]
    fn example_two_is_nearly_controllable() {
        let v = analyze(&ex2()).unwrap();
        assert_eq!(v.class, ControlClass::NearlyControllable);
        let s = v.structure.unwrap();
        assert_eq!(s.form_class, FormClass::UpperTriangular);
        assert!(s.common_eigenvector.unwrap().distance(&line(1.0, -1.0)) < 1e-12);
        assert!(has_lines(&v.excluded_initial, &[line(1.0, -1.0), line(4.0, -7.0)]));
    }

    #[test]
    fn example_three_is_antidiagonal() {
        let v = analyze(&ex3()).unwrap();
        assert_eq!(v.class, ControlClass::NearlyControllable);
        assert_eq!(v.structure.unwrap().form_class, FormClass::AntiDiagonal);
        assert!(has_lines(&v.excluded_initial, &[line(1.0, -1.0), line(-1.0, 2.0)]));
        assert!(has_lines(&excluded_set(&ex3()).unwrap(), &[line(1.0, -1.0), line(-1.0, 2.0)]));
    }

    #[test]
    fn antidiagonal_forms_have_axis_excluded_set() {
        let sys = BilinearSystem::driftless(
            vec![Mat2::new(0.0, 1.0, 1.0, 0.0), Mat2::new(0.0, 2.0, -1.0, 0.0)],
            tol(),
        )
        .unwrap();
        let e = excluded_set(&sys).unwrap();
        assert!(has_lines(&e, &[line(1.0, 0.0), line(0.0, 1.0)]));
    }

    #[test]
    fn triangular_without_bottom_entries_is_uncontrollable() {
        let sys = BilinearSystem::with_drift(
            Mat2::new(1.0, 2.0, 0.0, 3.0),
            vec![Mat2::new(1.0, 0.0, 0.0, 0.0), Mat2::new(0.0, 1.0, 0.0, 0.0)],
            tol(),
        )
        .unwrap();
        let v = analyze(&sys).unwrap();
        assert_eq!(v.class, ControlClass::Uncontrollable);
        assert!(v.largest_region.unwrap().distance(&line(1.0, 0.0)) < 1e-15);
        assert_eq!(excluded_set(&sys), Err(Error::NotNearlyControllable));
    }

    #[test]
    fn driftless_four_inputs_always_controllable() {
        let sys = BilinearSystem::driftless(
            vec![
                Mat2::new(1.0, 0.0, 0.0, 0.0),
                Mat2::new(0.0, 1.0, 0.0, 0.0),
                Mat2::new(0.0, 0.0, 1.0, 0.0),
                Mat2::new(0.0, 0.0, 0.0, 1.0),
            ],
            tol(),
        )
        .unwrap();
        let v = analyze(&sys).unwrap();
        assert_eq!(v.class, ControlClass::Controllable);
        assert_eq!(v.reduction.pinned, vec![PinnedInput { index: 0, value: 1.0 }]);
        let eff = v.reduction.effective(&sys).unwrap();
        assert_eq!(eff.system.kind(), SystemKind::WithDrift);
        assert_eq!(eff.system.m(), 2);
        let (a, b) = v.reduction.combination.unwrap().coefficients;
        assert_eq!(eff.lift([2.0, 3.0]), vec![1.0, 2.0, 3.0 * a, 3.0 * b]);
    }

    #[test]
    fn driftless_three_inputs() {
        // no common eigenvector
        let sys = BilinearSystem::driftless(
            vec![
                Mat2::new(0.0, -1.0, 1.0, 0.0),
                Mat2::new(1.0, 0.0, 0.0, 0.0),
                Mat2::new(0.0, 1.0, 0.0, 0.0),
            ],
            tol(),
        )
        .unwrap();
        let v = analyze(&sys).unwrap();
        assert_eq!(v.class, ControlClass::Controllable);
        // remaining pair (E11, E12) has zero bottom rows
        assert_eq!(v.structure.unwrap().form_class, FormClass::ZeroBottomRow);

        let tri = |x: f64, y: f64, z: f64| Mat2::new(x, y, 0.0, z);
        let nc = BilinearSystem::driftless(
            vec![tri(1.0, 0.0, 0.0), tri(0.0, 1.0, 0.0), tri(0.0, 0.0, 1.0)],
            tol(),
        )
        .unwrap();
        let v = analyze(&nc).unwrap();
        assert_eq!(v.class, ControlClass::NearlyControllable);
        // pair (0,1) has an identically vanishing form, (0,2) is the first usable one
        assert_eq!(v.reduction.pinned, vec![PinnedInput { index: 1, value: 0.0 }]);
        assert!(has_lines(&v.excluded_initial, &[line(1.0, 0.0), line(0.0, 1.0)]));

        let un = BilinearSystem::driftless(
            vec![tri(1.0, 0.0, 0.0), tri(0.0, 1.0, 0.0), tri(1.0, 1.0, 0.0)],
            tol(),
        );
        // three matrices inside a two-dimensional space: rejected at ingestion
        assert!(un.is_err());
    }

    #[test]
    fn substitution_leaves_excluded_set_unchanged() {
        let sys = ex2();
        let bs = sys.inputs();
        let forms = triangularize(&sys.matrices(), &line(1.0, -1.0), &tol())
            .unwrap()
            .canonical_forms
            .unwrap();
        let ratio = forms[2].m22 / forms[1].m22;
        let subst = BilinearSystem::with_drift(
            *sys.drift().unwrap(),
            vec![bs[0], bs[1] - bs[0] * ratio],
            tol(),
        )
        .unwrap();
        let e0 = excluded_set(&sys).unwrap();
        let e1 = excluded_set(&subst).unwrap();
        assert!(has_lines(&e1, &e0.lines()));
    }

    #[test]
    fn conjugation_preserves_class() {
        let p0 = Mat2::new(1.5, 0.3, -0.2, 0.8);
        for sys in [ex1(), ex2(), ex3()] {
            let c = sys.conjugated(&p0).unwrap();
            assert_eq!(analyze(&sys).unwrap().class, analyze(&c).unwrap().class);
        }
    }
}
