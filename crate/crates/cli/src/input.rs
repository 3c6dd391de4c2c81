//! System and plan file ingestion.

use std::path::Path;

use bilin2::{BilinearSystem, ControlPlan, Mat2, TolerancePolicy, Vec2};
use serde::Deserialize;

use crate::CliError;

pub const ENV_TOL_ABS: &str = "BILIN2_TOL_ABS";
pub const ENV_TOL_REL: &str = "BILIN2_TOL_REL";

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Drift,
    Driftless,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceSpec {
    abs: f64,
    rel: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    kind: Kind,
    #[serde(rename = "A")]
    a: Option<[[f64; 2]; 2]>,
    #[serde(rename = "B")]
    b: Vec<[[f64; 2]; 2]>,
    tolerance: Option<ToleranceSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PlanFile {
    Wrapped { steps: Vec<Vec<f64>> },
    Bare(Vec<Vec<f64>>),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn env_override(name: &str, current: f64) -> Result<f64, CliError> {
    match std::env::var(name) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{name}: cannot parse {raw:?} as a number"))),
        Err(_) => Ok(current),
    }
}

pub fn parse_system(text: &str, origin: &str) -> Result<BilinearSystem, CliError> {
    let file: SystemFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
    let (abs, rel) = file
        .tolerance
        .map_or((TolerancePolicy::DEFAULT_ABS, TolerancePolicy::DEFAULT_REL), |t| (t.abs, t.rel));
    let abs = env_override(ENV_TOL_ABS, abs)?;
    let rel = env_override(ENV_TOL_REL, rel)?;
    let tol = TolerancePolicy::new(abs, rel).map_err(|e| CliError::Input(format!("{origin}: field `tolerance`: {e}")))?;
    let inputs: Vec<Mat2> = file.b.iter().map(|&rows| Mat2::from_rows(rows)).collect();
    let sys = match (file.kind, file.a) {
        (Kind::Drift, Some(a)) => BilinearSystem::with_drift(Mat2::from_rows(a), inputs, tol),
        (Kind::Drift, None) => {
            return Err(CliError::Input(format!("{origin}: field `A` is required for kind \"drift\"")))
        }
        (Kind::Driftless, None) => BilinearSystem::driftless(inputs, tol),
        (Kind::Driftless, Some(_)) => {
            return Err(CliError::Input(format!(
                "{origin}: field `A` must be absent for kind \"driftless\""
            )))
        }
    };
    sys.map_err(|e| CliError::Input(format!("{origin}: field `B`: {e}")))
}

pub fn load_system(path: &Path) -> Result<BilinearSystem, CliError> {
    parse_system(&read(path)?, &path.display().to_string())
}

pub fn load_plan(path: &Path) -> Result<ControlPlan, CliError> {
    let plan: PlanFile = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let steps = match plan {
        PlanFile::Wrapped { steps } | PlanFile::Bare(steps) => steps,
    };
    Ok(ControlPlan::new(steps))
}

/// Parses `"x1,x2"`.
pub fn parse_state(s: &str) -> Result<Vec2, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y] = parts[..] else {
        return Err(format!("expected two comma-separated numbers, got {s:?}"));
    };
    let parse = |p: &str| p.parse::<f64>().map_err(|_| format!("{p:?} is not a number"));
    let v = Vec2::new(parse(x)?, parse(y)?);
    if !v.is_finite() {
        return Err(format!("state {s:?} is not finite"));
    }
    Ok(v)
}
