//! Control synthesis.
//!
//! Off the gram zero set a single step suffices: `[u1; u2] = [B1 ξ  B2 ξ]^-1 (η - A ξ)`.
//! On it, one escape step first moves the state to a point where the gram
//! determinant is bounded away from zero. Pairs whose matrices share a left
//! null vector never leave the zero set and are steered by the two-step
//! construction in the frame where both inputs have vanishing second rows.

use crate::classify::{analyze, BilinearSystem, ControlClass, Verdict};
use crate::error::{Error, Result};
use crate::mat2::{solve2, Mat2, Vec2};
use crate::simulate::verify_plan;
use crate::singular_set::normalized_gram;
use crate::structure::zero_bottom_row_pair;

/// Escape successors must reach `|normalized gram| >= ESCAPE_MARGIN_FACTOR * abs_eps`.
pub const ESCAPE_MARGIN_FACTOR: f64 = 1e3;
/// Relative landing tolerance every returned plan is checked against.
pub const LANDING_REL: f64 = 1e-6;
pub const LANDING_ABS: f64 = 1e-9;

const DRIFT_ESCAPE: [[f64; 2]; 5] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 3.0]];
const DRIFTLESS_ESCAPE: [[f64; 2]; 5] = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 3.0], [1.0, -1.0]];
const PRESTEP_CONSTANTS: [f64; 2] = [1.0, 2.0];
/// A transformed state needs the pre-step when its first component or
/// `A21 x1 + A22 x2` is below this fraction of its natural scale.
const PRESTEP_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlPlan {
    /// `steps[k]` holds `(u_1(k), .., u_m(k))`.
    pub steps: Vec<Vec<f64>>,
}

impl ControlPlan {
    pub fn new(steps: Vec<Vec<f64>>) -> Self {
        Self { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.steps.iter().flatten().all(|u| u.is_finite())
    }
}

fn input_pair(sys: &BilinearSystem) -> Result<(Mat2, Mat2)> {
    match sys.inputs() {
        [b1, b2] => Ok((*b1, *b2)),
        bs => Err(Error::ArityMismatch {
            expected: 2,
            got: bs.len(),
        }),
    }
}

fn escape_margin(sys: &BilinearSystem) -> f64 {
    ESCAPE_MARGIN_FACTOR * sys.tol().abs_eps()
}

fn landing_tol(eta: Vec2) -> f64 {
    LANDING_REL * eta.norm() + LANDING_ABS
}

/// Single-step control for a two-input system, `None` when `[B1 ξ  B2 ξ]` is singular.
pub fn one_step(sys: &BilinearSystem, xi: Vec2, eta: Vec2) -> Result<Option<[f64; 2]>> {
    let (b1, b2) = input_pair(sys)?;
    let rhs = match sys.drift() {
        Some(a) => eta - a.mul_vec(xi),
        None => eta,
    };
    let gram = Mat2::from_cols(b1.mul_vec(xi), b2.mul_vec(xi));
    match solve2(&gram, rhs, sys.tol()) {
        Ok(u) if u.is_finite() => Ok(Some(u.to_array())),
        _ => Ok(None),
    }
}

/// Best fixed candidate control moving `xi` off the gram zero set.
pub fn escape_step(sys: &BilinearSystem, xi: Vec2) -> Result<([f64; 2], Vec2)> {
    let (b1, b2) = input_pair(sys)?;
    let candidates = match sys.drift() {
        Some(_) => &DRIFT_ESCAPE,
        None => &DRIFTLESS_ESCAPE,
    };
    let margin = escape_margin(sys);
    let mut best: Option<([f64; 2], Vec2, f64)> = None;
    for u in candidates {
        let next = sys.closed_loop(u)?.mul_vec(xi);
        let g = normalized_gram(&b1, &b2, next);
        if g >= margin && best.map_or(true, |(_, _, bg)| g > bg) {
            best = Some((*u, next, g));
        }
    }
    best.map(|(u, next, _)| (u, next)).ok_or(Error::EscapeFailed)
}

fn prestep_score(x: Vec2, a21: f64, a22: f64) -> f64 {
    let n = x.norm();
    if n == 0.0 {
        return 0.0;
    }
    let s = a21 * x.x + a22 * x.y;
    (x.x.abs() / n).min(s.abs() / (a21.hypot(a22) * n))
}

/// Two-step transfer (three with a pre-step) for a drift system whose input
/// pair is similar to matrices with zero second rows.
pub fn canonical_steer(sys: &BilinearSystem, xi: Vec2, eta: Vec2) -> Result<ControlPlan> {
    let tol = sys.tol();
    let a = *sys.drift().ok_or(Error::NotCanonicalClass)?;
    let (b1, b2) = input_pair(sys)?;
    let (_, p) = zero_bottom_row_pair(&b1, &b2, tol).ok_or(Error::NotCanonicalClass)?;
    if tol.is_zero(xi.norm(), 0.0) {
        return Err(Error::ZeroState);
    }
    let p_inv = p.transpose();
    let at = a.similar(&p, &p_inv);
    let (b1t, b2t) = (b1.similar(&p, &p_inv), b2.similar(&p, &p_inv));
    let (a21, a22) = (at.m21, at.m22);
    if tol.is_zero(a21, at.norm()) {
        return Err(Error::NotCanonicalClass);
    }
    // top row of the closed loop: u_bar = g u + (A11, A12)
    let g = Mat2::new(b1t.m11, b2t.m11, b1t.m12, b2t.m12);
    let g_inv = g.inverse(tol).map_err(|_| Error::SingularSubstitution)?;
    let offset = Vec2::new(at.m11, at.m12);

    let mut x = p.mul_vec(xi);
    let target = p.mul_vec(eta);
    let mut bar_steps: Vec<Vec2> = Vec::with_capacity(3);
    if prestep_score(x, a21, a22) < PRESTEP_MARGIN {
        let s = a21 * x.x + a22 * x.y;
        let (c, z) = PRESTEP_CONSTANTS
            .iter()
            .map(|&c| (c, Vec2::new(c * x.y, s)))
            .find(|&(_, z)| prestep_score(z, a21, a22) >= PRESTEP_MARGIN)
            .ok_or(Error::NotCanonicalClass)?;
        bar_steps.push(Vec2::new(0.0, c));
        x = z;
    }
    let s = a21 * x.x + a22 * x.y;
    let r = target.y - a22 * s;
    if tol.is_zero(r, target.y.abs() + (a22 * s).abs()) {
        bar_steps.push(Vec2::ZERO);
        bar_steps.push(Vec2::new(0.0, target.x / s));
    } else {
        bar_steps.push(Vec2::new(r / (a21 * x.x), 0.0));
        bar_steps.push(Vec2::new(a21 * target.x / r, 0.0));
    }
    let plan = ControlPlan::new(
        bar_steps
            .into_iter()
            .map(|ub| g_inv.mul_vec(ub - offset).to_array().to_vec())
            .collect(),
    );
    let check = verify_plan(sys, xi, eta, &plan, 0.0);
    if check.error_norm > landing_tol(eta) {
        return Err(Error::VerificationFailed {
            residual: check.error_norm,
        });
    }
    Ok(plan)
}

/// Candidate plans, in preference order, for a controllable two-input system.
fn controllable_candidates(sys: &BilinearSystem, xi: Vec2, eta: Vec2) -> Result<Vec<Vec<[f64; 2]>>> {
    let (b1, b2) = input_pair(sys)?;
    if sys.drift().is_some() && zero_bottom_row_pair(&b1, &b2, sys.tol()).is_some() {
        let plan = canonical_steer(sys, xi, eta)?;
        return Ok(vec![plan.steps.iter().map(|u| [u[0], u[1]]).collect()]);
    }
    let mut out = Vec::new();
    if normalized_gram(&b1, &b2, xi) >= escape_margin(sys) {
        if let Some(u) = one_step(sys, xi, eta)? {
            out.push(vec![u]);
        }
    }
    match escape_step(sys, xi) {
        Ok((u0, next)) => {
            if let Some(u1) = one_step(sys, next, eta)? {
                out.push(vec![u0, u1]);
            }
        }
        Err(Error::EscapeFailed) => {
            if let Some((mut steps, next)) = double_escape(sys, xi)? {
                if let Some(u) = one_step(sys, next, eta)? {
                    steps.push(u);
                    out.push(steps);
                }
            }
        }
        Err(e) => return Err(e),
    }
    if out.is_empty() {
        return Err(Error::EscapeFailed);
    }
    Ok(out)
}

/// Two escape steps for states whose whole one-step successor set
/// `A ξ + span{B1 ξ, B2 ξ}` lies on a gram zero line (e.g. `A ξ = B2 ξ = 0`).
/// That line cannot be invariant without a common eigenvector, so some
/// nonzero successor escapes on the next step.
fn double_escape(sys: &BilinearSystem, xi: Vec2) -> Result<Option<(Vec<[f64; 2]>, Vec2)>> {
    let (b1, b2) = input_pair(sys)?;
    let candidates = match sys.drift() {
        Some(_) => &DRIFT_ESCAPE,
        None => &DRIFTLESS_ESCAPE,
    };
    let mut best: Option<(Vec<[f64; 2]>, Vec2, f64)> = None;
    for u0 in candidates {
        let mid = sys.closed_loop(u0)?.mul_vec(xi);
        if sys.tol().is_zero(mid.norm(), xi.norm()) {
            continue;
        }
        if let Ok((u1, next)) = escape_step(sys, mid) {
            let g = normalized_gram(&b1, &b2, next);
            if best.as_ref().map_or(true, |(_, _, bg)| g > *bg) {
                best = Some((vec![*u0, u1], next, g));
            }
        }
    }
    Ok(best.map(|(steps, next, _)| (steps, next)))
}

/// Plan transferring `xi` to `eta`, checked by simulation before it is returned.
pub fn plan_transfer(sys: &BilinearSystem, xi: Vec2, eta: Vec2) -> Result<ControlPlan> {
    let verdict = analyze(sys)?;
    plan_with_verdict(sys, &verdict, xi, eta)
}

/// [`plan_transfer`] with a verdict computed beforehand.
pub fn plan_with_verdict(sys: &BilinearSystem, verdict: &Verdict, xi: Vec2, eta: Vec2) -> Result<ControlPlan> {
    let tol = sys.tol();
    let eff = verdict.reduction.effective(sys)?;
    let candidates = match verdict.class {
        ControlClass::Uncontrollable => return Err(Error::NotControllablePair),
        ControlClass::Controllable => {
            if tol.is_zero(xi.norm(), 0.0) || tol.is_zero(eta.norm(), 0.0) {
                return Err(Error::ZeroState);
            }
            controllable_candidates(&eff.system, xi, eta)?
        }
        ControlClass::NearlyControllable => {
            if verdict.excluded_initial.contains(xi, tol) {
                return Err(Error::InExcludedSet);
            }
            match one_step(&eff.system, xi, eta)? {
                Some(u) => vec![vec![u]],
                None => return Err(Error::InExcludedSet),
            }
        }
    };
    let mut residual = f64::INFINITY;
    for steps in candidates {
        let plan = ControlPlan::new(steps.into_iter().map(|v| eff.lift(v)).collect());
        if !plan.is_finite() {
            continue;
        }
        let check = verify_plan(sys, xi, eta, &plan, 0.0);
        if check.error_norm <= landing_tol(eta) {
            return Ok(plan);
        }
        residual = residual.min(check.error_norm);
    }
    Err(Error::VerificationFailed { residual })
}
