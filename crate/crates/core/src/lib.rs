//! Controllability analysis and control synthesis for two-dimensional
//! multi-input discrete-time bilinear systems.
//!
//! ```
//! use bilin2::{analyze, plan_transfer, BilinearSystem, ControlClass, Mat2, TolerancePolicy, Vec2};
//!
//! let sys = BilinearSystem::with_drift(
//!     Mat2::new(0.0, -1.0, 1.0, 0.0),
//!     vec![Mat2::new(1.0, -1.0, 0.0, 2.0), Mat2::new(0.0, 0.0, 1.0, 0.0)],
//!     TolerancePolicy::default(),
//! )
//! .unwrap();
//! assert_eq!(analyze(&sys).unwrap().class, ControlClass::Controllable);
//! let plan = plan_transfer(&sys, Vec2::new(1.0, 1.0), Vec2::new(-11.0, -7.0)).unwrap();
//! assert_eq!(plan.len(), 2);
//! ```

pub mod classify;
pub mod error;
pub mod mat2;
pub mod simulate;
pub mod singular_set;
pub mod steer;
pub mod structure;

pub use classify::{
    analyze, excluded_set, BilinearSystem, ControlClass, EffectiveSystem, InputCombination,
    PinnedInput, Reduction, SystemKind, Verdict,
};
pub use error::{Error, Result};
pub use mat2::{canonical_direction, Direction, Mat2, TolerancePolicy, Vec2};
pub use simulate::{reachability_oracle, run, step, verify_plan, OracleReport, Trajectory, Verification};
pub use singular_set::{gram_form, gram_zero_lines, LineUnion, QuadraticForm};
pub use steer::{canonical_steer, escape_step, one_step, plan_transfer, plan_with_verdict, ControlPlan};
pub use structure::{FormClass, StructureReport};
