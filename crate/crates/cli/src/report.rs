//! JSON shapes printed by the subcommands.

use bilin2::{ControlClass, Direction, FormClass, LineUnion, Mat2, Verdict};
use serde::Serialize;

/// Largest numerator/denominator tried when looking for an integer form of a line.
const MAX_INTEGER_ENTRY: i64 = 99;
const INTEGER_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct LineJson {
    pub direction: [f64; 2],
    /// `"(p,q)"` when the line is spanned by a small integer vector.
    pub integer: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct PinnedJson {
    /// 1-based input index.
    pub input: usize,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct CombinationJson {
    pub inputs: [usize; 2],
    pub coefficients: [f64; 2],
}

#[derive(Debug, Serialize)]
pub struct ReductionJson {
    pub pinned: Vec<PinnedJson>,
    pub combination: Option<CombinationJson>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeJson {
    pub class: &'static str,
    pub excluded_initial: Option<Vec<LineJson>>,
    pub excluded_terminal: Vec<LineJson>,
    pub largest_region: Option<LineJson>,
    pub transform: Option<[[f64; 2]; 2]>,
    pub canonical_forms: Option<Vec<[[f64; 2]; 2]>>,
    pub form_class: Option<&'static str>,
    pub reduction: ReductionJson,
}

#[derive(Debug, Serialize)]
pub struct SteerJson {
    pub steps: Vec<Vec<f64>>,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct RefusalJson {
    pub error: &'static str,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct OracleJson {
    pub samples: Vec<[f64; 2]>,
    pub covariance_rank: usize,
    pub excluded_set_hits: Option<usize>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Smallest integer vector spanning `d`, if one with entries up to 99 matches
/// the unit direction within 1e-9.
pub fn integer_form(d: &Direction) -> Option<String> {
    let v = d.vector();
    for q in 1..=MAX_INTEGER_ENTRY {
        for swapped in [false, true] {
            let (a, b) = if swapped { (v.y, v.x) } else { (v.x, v.y) };
            if a.abs() < INTEGER_MATCH_TOL {
                continue;
            }
            let p = (b / a * q as f64).round();
            if p.abs() > MAX_INTEGER_ENTRY as f64 {
                continue;
            }
            let (ix, iy) = if swapped { (p as i64, q) } else { (q, p as i64) };
            let g = gcd(ix, iy);
            let s = if (ix as f64) * v.x + (iy as f64) * v.y < 0.0 { -1 } else { 1 };
            let (ix, iy) = (s * ix / g, s * iy / g);
            let norm = ((ix * ix + iy * iy) as f64).sqrt();
            if (ix as f64 / norm - v.x).abs() <= INTEGER_MATCH_TOL
                && (iy as f64 / norm - v.y).abs() <= INTEGER_MATCH_TOL
            {
                return Some(format!("({ix},{iy})"));
            }
        }
    }
    None
}

pub fn line_json(d: &Direction) -> LineJson {
    LineJson {
        direction: d.to_array(),
        integer: integer_form(d),
    }
}

fn lines_json(u: &LineUnion) -> Vec<LineJson> {
    u.lines().iter().map(line_json).collect()
}

fn form_class_str(c: FormClass) -> Option<&'static str> {
    match c {
        FormClass::None => None,
        FormClass::UpperTriangular => Some("upper-triangular"),
        FormClass::ZeroBottomRow => Some("zero-bottom-row"),
        FormClass::AntiDiagonal => Some("anti-diagonal"),
    }
}

fn rows(m: &Mat2) -> [[f64; 2]; 2] {
    m.rows()
}

pub fn analyze_json(v: &Verdict) -> AnalyzeJson {
    let structure = v.structure.as_ref();
    AnalyzeJson {
        class: v.class.as_str(),
        // the uncontrollable verdict certifies no steerable initial state
        excluded_initial: match v.class {
            ControlClass::Uncontrollable => None,
            _ => Some(lines_json(&v.excluded_initial)),
        },
        excluded_terminal: lines_json(&v.excluded_terminal),
        largest_region: v.largest_region.as_ref().map(line_json),
        transform: structure.and_then(|s| s.transform).as_ref().map(rows),
        canonical_forms: structure
            .and_then(|s| s.canonical_forms.as_ref())
            .map(|fs| fs.iter().map(rows).collect()),
        form_class: structure.and_then(|s| form_class_str(s.form_class)),
        reduction: ReductionJson {
            pinned: v
                .reduction
                .pinned
                .iter()
                .map(|p| PinnedJson {
                    input: p.index + 1,
                    value: p.value,
                })
                .collect(),
            combination: v.reduction.combination.map(|c| CombinationJson {
                inputs: [c.indices.0 + 1, c.indices.1 + 1],
                coefficients: [c.coefficients.0, c.coefficients.1],
            }),
        },
    }
}

fn fmt_line(d: &Direction) -> String {
    let [x, y] = d.to_array();
    match integer_form(d) {
        Some(i) => format!("span{i}"),
        None => format!("span({x:.6},{y:.6})"),
    }
}

/// Plain-text rendering of a verdict.
pub fn analyze_text(v: &Verdict) -> String {
    let mut out = format!("class: {}\n", v.class.as_str());
    if let Some(s) = &v.structure {
        if let Some(c) = form_class_str(s.form_class) {
            out.push_str(&format!("structure: {c}\n"));
        }
        if let Some(p) = s.transform {
            out.push_str(&format!("transform P: {p}\n"));
        }
        for (k, f) in s.canonical_forms.iter().flatten().enumerate() {
            out.push_str(&format!("canonical form {k}: {f}\n"));
        }
    }
    match v.class {
        ControlClass::NearlyControllable => {
            let lines: Vec<String> = v.excluded_initial.lines().iter().map(fmt_line).collect();
            out.push_str(&format!("excluded initial states: {}\n", lines.join(" u ")));
        }
        ControlClass::Uncontrollable => {
            if let Some(d) = &v.largest_region {
                out.push_str(&format!("largest controllable region: {}\n", fmt_line(d)));
            }
        }
        ControlClass::Controllable => {}
    }
    for p in &v.reduction.pinned {
        out.push_str(&format!("pinned: u{} = {}\n", p.index + 1, p.value));
    }
    if let Some(c) = v.reduction.combination {
        out.push_str(&format!(
            "combined: u{} = {} v, u{} = {} v\n",
            c.indices.0 + 1,
            c.coefficients.0,
            c.indices.1 + 1,
            c.coefficients.1
        ));
    }
    out
}
