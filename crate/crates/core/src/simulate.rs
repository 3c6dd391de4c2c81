//! Forward simulation, plan verification and a randomized reachability oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classify::BilinearSystem;
use crate::error::Result;
use crate::mat2::Vec2;
use crate::singular_set::LineUnion;
use crate::steer::ControlPlan;

pub const DEFAULT_ORACLE_SEED: u64 = 42;
/// Controls drawn by the oracle are uniform on `[-ORACLE_CONTROL_BOUND, ORACLE_CONTROL_BOUND]`.
pub const ORACLE_CONTROL_BOUND: f64 = 3.0;
pub const ORACLE_MAX_STEPS: usize = 3;
/// Eigenvalues of the sample covariance below `COVARIANCE_RANK_REL * lambda_max` count as zero.
pub const COVARIANCE_RANK_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `x(0), .., x(K)`.
    pub states: Vec<Vec2>,
    pub controls: ControlPlan,
}

impl Trajectory {
    pub fn terminal(&self) -> Vec2 {
        *self.states.last().expect("trajectory holds the initial state")
    }
}

pub fn step(sys: &BilinearSystem, x: Vec2, u: &[f64]) -> Result<Vec2> {
    Ok(sys.closed_loop(u)?.mul_vec(x))
}

pub fn run(sys: &BilinearSystem, x0: Vec2, plan: &ControlPlan) -> Result<Trajectory> {
    let mut states = Vec::with_capacity(plan.len() + 1);
    states.push(x0);
    let mut x = x0;
    for u in &plan.steps {
        x = step(sys, x, u)?;
        states.push(x);
    }
    Ok(Trajectory {
        states,
        controls: plan.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub pass: bool,
    pub error_norm: f64,
}

/// Passes when `|x(K) - eta| <= tol * (1 + |eta|)`. Plans with the wrong
/// arity fail with an infinite error.
pub fn verify_plan(sys: &BilinearSystem, xi: Vec2, eta: Vec2, plan: &ControlPlan, tol: f64) -> Verification {
    match run(sys, xi, plan) {
        Ok(t) => {
            let error_norm = (t.terminal() - eta).norm();
            Verification {
                pass: error_norm <= tol * (1.0 + eta.norm()),
                error_norm,
            }
        }
        Err(_) => Verification {
            pass: false,
            error_norm: f64::INFINITY,
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub samples: Vec<Vec2>,
    pub covariance_rank: usize,
}

/// Terminal states of `trials` random plans of length 1 to 3 started at `xi`.
///
/// Trial `t` draws from its own ChaCha8 stream, so the report depends only
/// on `(seed, trials)` and not on thread scheduling.
pub fn reachability_oracle(sys: &BilinearSystem, xi: Vec2, trials: usize, seed: u64) -> OracleReport {
    let samples: Vec<Vec2> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let len = rng.gen_range(1..=ORACLE_MAX_STEPS);
            let mut x = xi;
            for _ in 0..len {
                let u: Vec<f64> = (0..sys.m())
                    .map(|_| rng.gen_range(-ORACLE_CONTROL_BOUND..=ORACLE_CONTROL_BOUND))
                    .collect();
                x = step(sys, x, &u).expect("oracle controls match the system arity");
            }
            x
        })
        .collect();
    let covariance_rank = covariance_rank(&samples, COVARIANCE_RANK_REL);
    OracleReport {
        samples,
        covariance_rank,
    }
}

/// Numerical rank of the sample covariance: eigenvalues above `rel * lambda_max`.
pub fn covariance_rank(samples: &[Vec2], rel: f64) -> usize {
    let finite: Vec<Vec2> = samples.iter().copied().filter(|s| s.is_finite()).collect();
    if finite.len() < 2 {
        return 0;
    }
    let n = finite.len() as f64;
    let mean = finite.iter().fold(Vec2::ZERO, |acc, &s| acc + s) * (1.0 / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for s in &finite {
        let d = *s - mean;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    let (sxx, sxy, syy) = (sxx / n, sxy / n, syy / n);
    let half_gap = (0.5 * (sxx - syy)).hypot(sxy);
    let lambda_max = 0.5 * (sxx + syy) + half_gap;
    if lambda_max <= 0.0 {
        return 0;
    }
    // det / lambda_max avoids cancellation in the small eigenvalue
    let lambda_min = (sxx * syy - sxy * sxy) / lambda_max;
    if lambda_min > rel * lambda_max {
        2
    } else {
        1
    }
}

/// Number of samples lying on the excluded set (origin included).
pub fn excluded_set_hits(samples: &[Vec2], set: &LineUnion, sys: &BilinearSystem) -> usize {
    samples.iter().filter(|&&s| set.contains(s, sys.tol())).count()
}
