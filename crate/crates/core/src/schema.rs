//! File schemas shared with the `apdelay` CLI: the problem file, the
//! structured reports, and CSV exports.
//!
//! All emitted text is byte-deterministic: object keys are sorted, floats
//! are printed with 17 significant digits in lowercase e-notation, and
//! every document carries `schema_version: 1`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::apfun::{
    parse_rational, rational_string, BasisRef, BeurlingReport, Frequency, GeneratorBasis,
    SampledSignal, TrigPolynomial,
};
use crate::chroots::{DelaySystem, DelayTerm, RootSet, SigmaIWindow};
use crate::error::{Error, Result};
use crate::massera::{CertificateOutcome, ConditionReport, ForcedProblem, SolutionBundle};
use crate::simulate::Trajectory;
use crate::{C64, CMat64, CVec64};

pub const SCHEMA_VERSION: u64 = 1;

/// 17 significant digits, lowercase e-notation; round-trips every f64.
pub fn fmt_float(x: f64) -> String {
    // normalize the sign of zero so equal values print identically
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{:.16e}", x)
}

/// Render a JSON value deterministically: sorted keys, fixed float format,
/// two-space indentation, trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&fmt_float(n.as_f64().expect("numeric JSON value")));
            }
        }
        Value::String(s) => {
            out.push_str(&Value::String(s.clone()).to_string());
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                write_value(item, indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_value(&map[*key], indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push('}');
        }
    }
}

fn push_indent(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

// ---------------------------------------------------------------------------
// problem file

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub schema_version: u64,
    pub generators: Vec<GeneratorSpec>,
    pub system: SystemSpec,
    pub forcing: ForcingSpec,
    #[serde(default)]
    pub options: OptionsSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub delta: f64,
    /// Row-major complex matrix; entries are [re, im] pairs.
    pub a: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub eta: f64,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForcingSpec {
    pub dim: usize,
    #[serde(default)]
    pub terms: Vec<ForcingTermSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForcingTermSpec {
    /// Exact rational coordinates over the generator list, as "p/q" strings.
    pub coords: Vec<String>,
    pub coeff: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
}

fn matrix_from_spec(rows: &[Vec<[f64; 2]>], what: &str) -> Result<CMat64> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid(format!("{what} must be a nonempty square matrix")));
    }
    Ok(CMat64::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

fn matrix_to_spec(m: &CMat64) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile> {
        let file: ProblemFile = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("problem file parse error: {e}")))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Invalid(format!(
                "unsupported schema_version {}, expected {SCHEMA_VERSION}",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("problem file serializes"))
    }

    /// Validate and build the in-memory problem.
    pub fn to_problem(&self) -> Result<(ForcedProblem<f64>, BasisRef)> {
        let basis = GeneratorBasis::new(
            self.generators
                .iter()
                .map(|g| (g.name.clone(), g.value))
                .collect(),
        )?;
        let a = matrix_from_spec(&self.system.a, "system.a")?;
        let dim = a.nrows();
        let mut terms = Vec::with_capacity(self.system.terms.len());
        for t in &self.system.terms {
            let matrix = matrix_from_spec(&t.matrix, "term matrix")?;
            if matrix.nrows() != dim {
                return Err(Error::DimMismatch { expected: dim, got: matrix.nrows() });
            }
            terms.push(DelayTerm { eta: t.eta, matrix });
        }
        let sys = DelaySystem::new(a, terms, self.system.delta)?;
        if self.forcing.dim != dim {
            return Err(Error::DimMismatch { expected: dim, got: self.forcing.dim });
        }
        let mut f_terms = Vec::with_capacity(self.forcing.terms.len());
        for t in &self.forcing.terms {
            if t.coords.len() != basis.len() {
                return Err(Error::BasisMismatch);
            }
            let coords = t
                .coords
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            let freq = Frequency::new(&basis, coords)?;
            if t.coeff.len() != dim {
                return Err(Error::DimMismatch { expected: dim, got: t.coeff.len() });
            }
            let coeff = CVec64::from_iterator(dim, t.coeff.iter().map(|c| C64::new(c[0], c[1])));
            f_terms.push((freq, coeff));
        }
        let f = TrigPolynomial::new(&basis, dim, f_terms)?;
        let p = ForcedProblem::new(sys, f)?;
        Ok((p, basis))
    }

    /// Schema form of an in-memory problem (options left empty).
    pub fn from_problem(p: &ForcedProblem<f64>) -> ProblemFile {
        let basis = p.forcing().basis();
        ProblemFile {
            schema_version: SCHEMA_VERSION,
            generators: basis
                .generators()
                .iter()
                .map(|g| GeneratorSpec { name: g.name.clone(), value: g.value })
                .collect(),
            system: SystemSpec {
                delta: p.sys().delta(),
                a: matrix_to_spec(p.sys().a()),
                terms: p
                    .sys()
                    .terms()
                    .iter()
                    .map(|t| TermSpec { eta: t.eta, matrix: matrix_to_spec(&t.matrix) })
                    .collect(),
            },
            forcing: ForcingSpec {
                dim: p.forcing().dim(),
                terms: p
                    .forcing()
                    .terms()
                    .iter()
                    .map(|(freq, coeff)| ForcingTermSpec {
                        coords: freq.coords().iter().map(rational_string).collect(),
                        coeff: coeff.iter().map(|z| [z.re, z.im]).collect(),
                    })
                    .collect(),
            },
            options: OptionsSpec::default(),
        }
    }
}

// ---------------------------------------------------------------------------
// report payloads

fn frequency_value(freq: &Frequency) -> Value {
    json!({
        "coords": freq.coords().iter().map(rational_string).collect::<Vec<_>>(),
        "value": freq.value(),
    })
}

fn trig_poly_value(u: &TrigPolynomial<f64>) -> Value {
    json!({
        "dim": u.dim(),
        "terms": u.terms().iter().map(|(freq, coeff)| json!({
            "coords": freq.coords().iter().map(rational_string).collect::<Vec<_>>(),
            "value": freq.value(),
            "coeff": coeff.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn report(command: &str, payload: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "result": payload,
    })
}

pub fn roots_report(set: &RootSet) -> Value {
    report(
        "roots",
        json!({
            "region": {
                "re_min": set.region.re_min,
                "re_max": set.region.re_max,
                "im_min": set.region.im_min,
                "im_max": set.region.im_max,
            },
            "total_count": set.total_count,
            "roots": set.roots.iter().map(|r| json!({
                "re": r.re,
                "im": r.im,
                "multiplicity": r.multiplicity,
                "residual": r.det_residual,
            })).collect::<Vec<_>>(),
        }),
    )
}

pub fn sigma_i_report(w: &SigmaIWindow) -> Value {
    report(
        "sigma-i",
        json!({
            "xi_max": w.xi_max,
            "axis_tol": w.axis_tol,
            "strip_half_width": w.strip_half_width,
            "points": w.points,
            "near_axis": w.near_axis,
        }),
    )
}

pub fn check_report(r: &ConditionReport) -> Value {
    report(
        "check",
        json!({
            "xi_max": r.xi_max,
            "axis_tol": r.axis_tol,
            "sigma_i_window": r.sigma_i_window,
            "resonances": r.resonances.iter().map(frequency_value).collect::<Vec<_>>(),
            "thm12": {
                "sigma_i_minus_spf_finite_in_window": r.thm12.sigma_i_minus_spf_finite_in_window,
                "spf_countable": r.thm12.spf_countable,
                "c0_free": r.thm12.c0_free,
                "verdict": r.thm12.verdict,
            },
            "thm20": {
                "circle_distance": r.thm20.circle_distance,
                "separated": r.thm20.separated,
            },
            "thm21": {
                "circle_spf_countable": r.thm21.circle_spf_countable,
                "verdict": r.thm21.verdict,
            },
            "solvable_directly": r.solvable_directly,
            "notes": r.notes,
        }),
    )
}

pub fn solve_report(b: &SolutionBundle<f64>) -> Value {
    report(
        "solve",
        json!({
            "solution": trig_poly_value(&b.u),
            "classical_residual": b.classical_residual,
            "mild_residual": b.mild_residual,
            "spectral_check": b.spectral_check,
            "per_frequency_conditioning": b.per_frequency_conditioning.iter().map(
                |(freq, cond)| json!({
                    "coords": freq.coords().iter().map(rational_string).collect::<Vec<_>>(),
                    "value": freq.value(),
                    "condition": cond,
                })
            ).collect::<Vec<_>>(),
        }),
    )
}

pub fn decompose_report(u1: &TrigPolynomial<f64>, u2: &TrigPolynomial<f64>) -> Value {
    report(
        "decompose",
        json!({
            "u1": trig_poly_value(u1),
            "u2": trig_poly_value(u2),
        }),
    )
}

pub fn certify_report(outcome: &CertificateOutcome) -> Value {
    let payload = match outcome {
        CertificateOutcome::Certified(cert) => json!({
            "certified": true,
            "qp_order": cert.qp_order,
            "k": cert.k,
            "integer_basis": cert.integer_basis.iter().map(frequency_value).collect::<Vec<_>>(),
            "statement": cert.statement,
        }),
        CertificateOutcome::Refused { reason } => json!({
            "certified": false,
            "reason": reason,
        }),
    };
    report("certify", payload)
}

pub fn simulate_report(traj: &Trajectory<f64>, deviation: f64) -> Value {
    report(
        "simulate",
        json!({
            "t0": traj.t0,
            "dt": traj.dt,
            "steps": traj.len().saturating_sub(1),
            "deviation": deviation,
        }),
    )
}

pub fn spectrum_report(r: &BeurlingReport, grid: &[f64]) -> Value {
    report(
        "spectrum",
        json!({
            "detections": r.detections,
            "grid": grid,
            "responses": r.responses,
            "sup_norm": r.sup_norm,
            "truncation_tail_bound": r.truncation_tail_bound,
        }),
    )
}

// ---------------------------------------------------------------------------
// CSV

pub fn root_set_csv(set: &RootSet) -> String {
    let mut out = String::from("re,im,multiplicity,residual\n");
    for r in &set.roots {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(r.re),
            fmt_float(r.im),
            r.multiplicity,
            fmt_float(r.det_residual)
        ));
    }
    out
}

pub fn trajectory_csv(traj: &Trajectory<f64>) -> String {
    let dim = traj.dim();
    let mut out = String::from("t");
    for i in 1..=dim {
        out.push_str(&format!(",re_{i},im_{i}"));
    }
    out.push('\n');
    for (i, v) in traj.values.iter().enumerate() {
        out.push_str(&fmt_float(traj.time(i)));
        for z in v.iter() {
            out.push_str(&format!(",{},{}", fmt_float(z.re), fmt_float(z.im)));
        }
        out.push('\n');
    }
    out
}

/// Parse a sampled signal from CSV with columns t, re_1, im_1, …; the time
/// column must be uniform.
pub fn parse_signal_csv(text: &str) -> Result<SampledSignal<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Invalid("empty signal CSV".into()))?;
    let cols = header.split(',').count();
    if cols < 3 || (cols - 1) % 2 != 0 {
        return Err(Error::Invalid(
            "signal CSV needs columns t, re_1, im_1, ...".into(),
        ));
    }
    let dim = (cols - 1) / 2;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols {
            return Err(Error::Invalid(format!(
                "signal CSV row {} has {} fields, expected {cols}",
                row + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("bad number {s:?} in signal CSV row {}", row + 2)))
        };
        times.push(parse(fields[0])?);
        let v = CVec64::from_iterator(
            dim,
            (0..dim).map(|k| {
                C64::new(
                    parse(fields[1 + 2 * k]).unwrap_or(f64::NAN),
                    parse(fields[2 + 2 * k]).unwrap_or(f64::NAN),
                )
            }),
        );
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid(format!(
                "bad number in signal CSV row {}",
                row + 2
            )));
        }
        values.push(v);
    }
    if times.len() < 2 {
        return Err(Error::Invalid("signal CSV needs at least two samples".into()));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(Error::Invalid("signal CSV time column must increase".into()));
    }
    for (i, pair) in times.windows(2).enumerate() {
        if ((pair[1] - pair[0]) - dt).abs() > 1e-9 * dt.max(1.0) {
            return Err(Error::Invalid(format!(
                "signal CSV time column is not uniform near row {}",
                i + 3
            )));
        }
    }
    SampledSignal::new(times[0], dt, values)
}
