//! The `hermsurf` command line.
//!
//! Exit status: 0 when every assertion holds, 1 when a check fails, 2 for
//! malformed input or invalid parameters.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constructions::{self, Configuration, Pick};
use crate::cubicnf::{self, Dichotomy};
use crate::error::Error;
use crate::field::FieldCtx;
use crate::forms;
use crate::hermitian::{HermitianMatrix, HermitianSurface, PlaneClass};
use crate::io;
use crate::projspace::Pg3;
use crate::verify::{self, AuditScope, CubicSurveyParams, ReportHeader};

#[derive(Debug, Parser)]
#[command(name = "hermsurf", version, about = "Point counts on Hermitian surfaces of PG(3, q²)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// The surface lives in PG(3, q²).
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Largest accepted q.
    #[arg(long, global = true, default_value_t = 8)]
    pub q_ceiling: u32,
    /// Hermitian matrix as JSON (inline or a file path); defaults to the identity.
    #[arg(long, global = true)]
    pub matrix: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of surface points on V(F).
    Count {
        /// Form JSON, inline or a file path.
        #[arg(long)]
        form: String,
    },
    /// Generator, secant or tangent, with the book profile.
    ClassifyLine {
        /// Two spanning points as JSON.
        #[arg(long)]
        line: String,
    },
    /// Tangent or non-tangent, with the point of tangency.
    ClassifyPlane {
        /// Dual coordinates as JSON.
        #[arg(long)]
        plane: String,
    },
    /// Every plane through a line.
    Book {
        #[arg(long)]
        line: String,
    },
    /// Build an extremal plane configuration and count it.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long, default_value_t = 3)]
        d: u32,
        /// Randomize the choices made by the construction.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Normal form of a cubic through a line, its invariant and T_ℓ.
    Nf {
        #[arg(long)]
        form: String,
        #[arg(long)]
        line: String,
        /// A second contained line skew to the first, for the dichotomy check.
        #[arg(long)]
        line2: Option<String>,
    },
    /// Run a verification survey.
    Verify {
        #[arg(value_enum)]
        survey: SurveyKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cubic samples, or per-kind samples for a sampled structure audit.
        #[arg(long)]
        samples: Option<u64>,
        /// Assert the top-two dichotomy for every q.
        #[arg(long)]
        strict_conjecture: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Sorensen,
    Second,
    GeneratorBook,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SurveyKind {
    Structure,
    Quadrics,
    Triples,
    Cubics,
}

/// A finished command: the report text and whether its checks held.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn read_arg(s: &str) -> Result<String, Error> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(s.to_string())
    } else {
        Ok(std::fs::read_to_string(s)?)
    }
}

fn surface(c: &Common) -> Result<HermitianSurface, Error> {
    let q = c.q.ok_or_else(|| Error::OutOfRange("--q is required".into()))?;
    if q > c.q_ceiling {
        return Err(Error::OutOfRange(format!("q = {q} exceeds the ceiling {}", c.q_ceiling)));
    }
    if c.jobs == 0 {
        return Err(Error::OutOfRange("--jobs must be at least 1".into()));
    }
    let f = Arc::new(FieldCtx::new(q)?);
    let m = match &c.matrix {
        Some(m) => io::parse_matrix(&f, &read_arg(m)?)?,
        None => HermitianMatrix::canonical(4)?,
    };
    Ok(HermitianSurface::new(Pg3::new(f), m))
}

fn csv_cell(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// Top-level fields as `key,value` rows.
fn flat_csv(v: &Value) -> String {
    let mut out = String::from("key,value\n");
    if let Value::Object(m) = v {
        for (k, x) in m {
            out.push_str(&format!("{k},{}\n", csv_cell(x)));
        }
    }
    out
}

fn emit(format: Format, v: Value, passed: bool) -> Outcome {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&v).expect("report serializes") + "\n",
        Format::Csv => flat_csv(&v),
    };
    Outcome { text, passed }
}

fn configuration_json(s: &HermitianSurface, c: &Configuration) -> Result<(Value, bool), Error> {
    let f = s.field();
    let measured = c.measured_count(s)?;
    let v = json!({
        "header": ReportHeader::new(f),
        "kind": c.kind,
        "planes": c.planes.iter().map(|p| io::plane_json(f, p)).collect::<Vec<_>>(),
        "lines": c.lines.iter().map(|l| io::line_json(f, l)).collect::<Vec<_>>(),
        "points": c.points.iter().map(|p| io::point_json(f, p)).collect::<Vec<_>>(),
        "form": io::form_to_json(f, &c.form),
        "expected_count": c.expected_count,
        "measured_count": measured,
    });
    Ok((v, measured == c.expected_count))
}

/// Runs one parsed invocation.
pub fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let c = &cli.common;
    let s = surface(c)?;
    let f = s.field().clone();
    let g = s.space();
    let header = ReportHeader::new(&f);
    let fmt = c.format;
    Ok(match &cli.command {
        Command::Count { form } => {
            let form = io::parse_form(&f, &read_arg(form)?)?;
            let n = forms::intersection_count(&form, &s)?;
            emit(fmt, json!({"header": header, "degree": form.degree(), "count": n}), true)
        }
        Command::ClassifyLine { line } => {
            let l = io::parse_line(g, &read_arg(line)?)?;
            let class = s.classify_line(&l)?;
            let v = json!({
                "header": header,
                "line": io::line_json(&f, &l),
                "class": class,
                "surface_points": s.line_count(&l),
                "book": s.book_profile(&l)?,
            });
            emit(fmt, v, true)
        }
        Command::ClassifyPlane { plane } => {
            let pl = io::parse_plane(g, &read_arg(plane)?)?;
            let point = match s.classify_plane(&pl)? {
                PlaneClass::Tangent(p) => Some(io::point_json(&f, &p)),
                PlaneClass::NonTangent => None,
            };
            let v = json!({
                "header": header,
                "plane": io::plane_json(&f, &pl),
                "tangent": point.is_some(),
                "point_of_tangency": point,
                "pole": io::point_json(&f, &s.pole(&pl)?),
                "surface_points": s.plane_count(&pl),
            });
            emit(fmt, v, true)
        }
        Command::Book { line } => {
            let l = io::parse_line(g, &read_arg(line)?)?;
            let planes = g
                .book_of_planes(&l)
                .iter()
                .map(|pl| -> Result<Value, Error> {
                    Ok(json!({
                        "plane": io::plane_json(&f, pl),
                        "tangent": s.is_tangent_plane(pl)?,
                        "surface_points": s.plane_count(pl),
                    }))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let v = json!({
                "header": header,
                "axis": io::line_json(&f, &l),
                "class": s.classify_line(&l)?,
                "profile": s.book_profile(&l)?,
                "planes": planes,
            });
            emit(fmt, v, true)
        }
        Command::Construct { kind, d, seed } => {
            let pick = seed.map_or(Pick::First, Pick::Seeded);
            let conf = match kind {
                ConstructKind::Sorensen => constructions::sorensen(&s, *d, pick)?,
                ConstructKind::Second => constructions::second_best(&s, pick)?,
                ConstructKind::GeneratorBook => constructions::generator_book(&s, *d, pick)?,
            };
            let (v, ok) = configuration_json(&s, &conf)?;
            emit(fmt, v, ok)
        }
        Command::Nf { form, line, line2 } => {
            let form = io::parse_form(&f, &read_arg(form)?)?;
            let l = io::parse_line(g, &read_arg(line)?)?;
            let nf = cubicnf::normal_form(&form, g, &l)?;
            let te = cubicnf::t_ell(&form, g, &l)?;
            let det = if nf.even { None } else { Some(cubicnf::det_mf(&f, &nf)?.display(&f)) };
            let coeffs: serde_json::Map<String, Value> = [("A", &nf.a), ("B", &nf.b), ("C", &nf.c), ("D", &nf.d), ("E", &nf.e), ("K", &nf.k)]
                .into_iter()
                .map(|(k, b)| (k.to_string(), json!(b.display(&f))))
                .collect();
            let book: Vec<Value> = te
                .planes
                .iter()
                .map(|p| json!({"plane": io::plane_json(&f, &p.plane), "residual": p.residual.display(&f), "kind": p.kind}))
                .collect();
            let mut passed = !te.bound_applies() || te.members.len() <= 5;
            let dichotomy = match line2 {
                None => Value::Null,
                Some(l2) => {
                    let l2 = io::parse_line(g, &read_arg(l2)?)?;
                    match cubicnf::dichotomy_check(&form, g, &l, &l2) {
                        Ok(Dichotomy::InvariantNonzero) => json!({"result": "invariant-nonzero"}),
                        Ok(Dichotomy::Reducible(fs)) => json!({
                            "result": "reducible",
                            "factors": fs.iter().map(|(p, m)| json!({"plane": io::plane_json(&f, p), "multiplicity": m})).collect::<Vec<_>>(),
                        }),
                        Ok(Dichotomy::DoubleLine(dl)) => json!({"result": "double-line", "line": io::line_json(&f, &dl)}),
                        Err(Error::Consistency(msg)) => {
                            passed = false;
                            json!({"result": "unresolved", "detail": msg})
                        }
                        Err(e) => return Err(e),
                    }
                }
            };
            let v = json!({
                "header": header,
                "axis": io::line_json(&f, &l),
                "even": nf.even,
                "coefficients": coeffs,
                "det_mf": det,
                "invariant": te.invariant.display(&f),
                "invariant_nonzero": te.invariant_nonzero,
                "irreducible": te.irreducible,
                "bound_applies": te.bound_applies(),
                "t_ell": te.members.iter().map(|p| io::plane_json(&f, p)).collect::<Vec<_>>(),
                "t_ell_size": te.members.len(),
                "book": book,
                "dichotomy": dichotomy,
            });
            emit(fmt, v, passed)
        }
        Command::Verify { survey, seed, samples, strict_conjecture } => {
            let jobs = c.jobs;
            let report = match survey {
                SurveyKind::Structure => {
                    let scope = match samples {
                        None if f.q() <= 3 => AuditScope::Full,
                        n => AuditScope::Sampled { seed: *seed, per_kind: n.unwrap_or(2000) as usize },
                    };
                    let r = verify::structure_audit(&s, scope, jobs)?;
                    let text = match fmt {
                        Format::Json => r.to_json(),
                        Format::Csv => r.to_csv(),
                    };
                    return Ok(Outcome { text, passed: r.passed() });
                }
                SurveyKind::Quadrics => verify::exhaustive_quadrics(&s, jobs)?,
                SurveyKind::Triples => verify::elx_survey(&s, jobs)?,
                SurveyKind::Cubics => verify::cubic_survey(
                    &s,
                    CubicSurveyParams {
                        samples: samples.unwrap_or(1000),
                        seed: *seed,
                        jobs,
                        strict_conjecture: *strict_conjecture,
                    },
                )?,
            };
            let text = match fmt {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            Outcome { text, passed: report.passed() }
        }
    })
}

/// Parses `args` (including the program name), runs, writes the report and
/// returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let written = match &cli.common.out {
        Some(p) => std::fs::write(p, &outcome.text),
        None => stdout.write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    if outcome.passed {
        0
    } else {
        let _ = writeln!(stderr, "check failed");
        1
    }
}

pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
