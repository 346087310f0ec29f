//! Verification harness: cubic profiles, conditional bounds and surveys.
//!
//! Every survey is deterministic in its parameters. Work is sharded with
//! rayon over a pool of `jobs` threads, results are collected in index order
//! and merged sequentially, so the worker count never changes a report.

use std::collections::{BTreeMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{generator_book_count, second_best_count, sorensen_count};
use crate::cubicnf::t_ell;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, MODULUS_TABLE_VERSION};
use crate::forms::{self, HomogeneousForm};
use crate::hermitian::{HermitianSurface, LineClass};
use crate::io::FormJson;
use crate::projspace::{ProjLine, ProjPlane};
use crate::sample::{self, Stratum};

/// Provenance block at the top of every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportHeader {
    pub tool: &'static str,
    pub version: &'static str,
    pub modulus_table: &'static str,
    pub q: u32,
    pub modulus: String,
}

impl ReportHeader {
    pub fn new(f: &FieldCtx) -> Self {
        ReportHeader {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            modulus_table: MODULUS_TABLE_VERSION,
            q: f.q(),
            modulus: f.modulus_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub count: usize,
    pub label: String,
    pub form: FormJson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyReport {
    pub header: ReportHeader,
    pub survey: &'static str,
    pub q: u32,
    pub d: u32,
    pub samples: u64,
    pub seed: Option<u64>,
    pub mode: Mode,
    pub histogram: BTreeMap<usize, u64>,
    pub max_count: usize,
    pub witnesses: Vec<Witness>,
    pub violations: Vec<String>,
    pub observations: BTreeMap<String, Value>,
}

impl SurveyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// The histogram as `count,frequency` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("count,frequency\n");
        for (c, n) in &self.histogram {
            out.push_str(&format!("{c},{n}\n"));
        }
        out
    }
}

fn par_map<T, F>(jobs: usize, n: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..n).into_par_iter().map(&work).collect()))
}

fn require_nondegenerate(s: &HermitianSurface) -> Result<()> {
    if s.is_degenerate() {
        Err(Error::Degenerate(s.rank()))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------- profiles

/// Invariant of the normal form along a contained generator, and `|T_ℓ|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantStatus {
    pub axis: ProjLine,
    pub even: bool,
    pub nonzero: bool,
    pub t_ell: usize,
    /// Whether the `|T_ℓ| ≤ 5` hypotheses hold (nonzero, and irreducible in even characteristic).
    pub bound_applies: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicProfile {
    pub intersection_count: usize,
    /// Linear factors with multiplicity and whether each plane is tangent.
    pub linear_factors: Vec<(ProjPlane, u32, bool)>,
    pub contains_plane: bool,
    pub reducible: bool,
    pub all_linear_factors_tangent: bool,
    pub contains_non_tangent_plane: bool,
    pub generators_contained: Vec<ProjLine>,
    pub has_skew_generator_pair: bool,
    /// Largest number of distinct planes of `V(F)` through one contained generator.
    pub max_planes_through_generator: usize,
    /// Only searched for irreducible cubics.
    pub double_lines: Vec<ProjLine>,
    pub invariant: Option<InvariantStatus>,
}

pub fn profile_cubic(form: &HomogeneousForm, s: &HermitianSurface) -> Result<CubicProfile> {
    require_nondegenerate(s)?;
    if form.degree() != 3 {
        return Err(Error::WrongDegree { expected: 3, got: form.degree() });
    }
    let g = s.space();
    let count = forms::intersection_count(form, s)?;
    let mask = forms::zero_mask(form, s)?;
    let factors: Vec<(ProjPlane, u32, bool)> = forms::linear_factors(form, g)?
        .into_iter()
        .map(|(pl, m)| Ok((pl, m, s.is_tangent_plane(&pl)?)))
        .collect::<Result<_>>()?;
    let reducible = !factors.is_empty();
    let gens = s.generators()?;
    let generators_contained: Vec<ProjLine> = s
        .generator_slots()?
        .iter()
        .zip(gens)
        .filter(|(slots, _)| slots.iter().all(|&i| mask[i as usize]))
        .map(|(_, l)| *l)
        .collect();
    let skew_pair = generators_contained.iter().enumerate().find_map(|(i, a)| {
        generators_contained[i + 1..].iter().find(|b| g.are_skew(a, b)).map(|b| (*a, *b))
    });
    let max_planes_through_generator = generators_contained
        .iter()
        .map(|l| factors.iter().filter(|(pl, _, _)| g.line_in_plane(l, pl)).count())
        .max()
        .unwrap_or(0);
    let double_lines = if reducible { Vec::new() } else { forms::double_lines(form, g)? };
    let invariant = match (reducible, skew_pair.map(|p| p.0).or(generators_contained.first().copied())) {
        (false, Some(axis)) => {
            let rep = t_ell(form, g, &axis)?;
            Some(InvariantStatus {
                axis,
                even: rep.even,
                nonzero: rep.invariant_nonzero,
                t_ell: rep.members.len(),
                bound_applies: rep.bound_applies(),
            })
        }
        _ => None,
    };
    Ok(CubicProfile {
        intersection_count: count,
        contains_plane: reducible,
        reducible,
        all_linear_factors_tangent: reducible && factors.iter().all(|f| f.2),
        contains_non_tangent_plane: factors.iter().any(|f| !f.2),
        linear_factors: factors,
        has_skew_generator_pair: skew_pair.is_some(),
        generators_contained,
        max_planes_through_generator,
        double_lines,
        invariant,
    })
}

/// Which clause of the tangent-factor bound a reducible cubic satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReducibleBranch {
    /// Exactly `3(q³+q²−q)+q+1`.
    Top,
    /// At most `3(q³+q²−q)+1`.
    SecondPlace,
    /// Above `3(q³+q²−q)+1` but at most `3q³+2q²+2`.
    QuadricClause,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub id: &'static str,
    pub bound: usize,
    pub count: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<ReducibleBranch>,
}

/// Checks every degree-3 bound whose hypotheses hold for the profile.
///
/// Returns nothing for `q < 3`, where `d ≤ q` fails.
pub fn assert_conditional_bounds(p: &CubicProfile, q: u32) -> Vec<BoundCheck> {
    if q < 3 {
        return Vec::new();
    }
    let qq = q as usize;
    let q3 = qq * qq * qq;
    let q2 = qq * qq;
    let n = p.intersection_count;
    let mut out = Vec::new();
    let mut check = |id: &'static str, bound: usize| out.push(BoundCheck { id, bound, count: n, pass: n <= bound, branch: None });
    let irreducible = !p.reducible;
    if q > 2 && p.generators_contained.is_empty() {
        check("no-generator", 3 * (q3 + qq + 1));
    }
    if !p.generators_contained.is_empty() && !p.has_skew_generator_pair && !p.contains_plane {
        check("no-skew-pair", 2 * q3 + 3 * q2 + 1);
    }
    if p.contains_non_tangent_plane {
        check("non-tangent-plane", 3 * q3 + 2 * q2 - qq + 2);
    }
    if p.max_planes_through_generator >= 2 {
        check("generator-book-planes", 3 * q3 + 2 * q2 + 1);
    }
    if irreducible && !p.double_lines.is_empty() {
        check("double-line", 3 * q3 + 2 * q2 + 1);
    }
    if let (true, Some(inv)) = (irreducible, &p.invariant) {
        let t = inv.t_ell;
        // 2q³ + (2t+1)q² − 2q(t−1) + 1, ordered to stay non-negative
        check("conic-planes", 2 * q3 + (2 * t + 1) * q2 + 2 * qq + 1 - 2 * qq * t);
        if inv.bound_applies {
            out.push(BoundCheck { id: "t-ell", bound: 5, count: t, pass: t <= 5, branch: None });
        }
        if p.has_skew_generator_pair && !inv.nonzero {
            let ok = !p.double_lines.is_empty();
            out.push(BoundCheck { id: "skew-dichotomy", bound: 0, count: p.double_lines.len(), pass: ok, branch: None });
        }
    }
    if p.reducible && p.all_linear_factors_tangent {
        let top = sorensen_count(q, 3);
        let second = second_best_count(q);
        let quad = 3 * q3 + 2 * q2 + 2;
        let branch = if n == top {
            ReducibleBranch::Top
        } else if n <= second {
            ReducibleBranch::SecondPlace
        } else if n <= quad {
            ReducibleBranch::QuadricClause
        } else {
            ReducibleBranch::Violated
        };
        out.push(BoundCheck {
            id: "tangent-factors",
            bound: quad.max(second),
            count: n,
            pass: branch != ReducibleBranch::Violated,
            branch: Some(branch),
        });
    }
    out
}

fn witness(f: &FieldCtx, count: usize, label: impl Into<String>, form: &HomogeneousForm) -> Witness {
    Witness { count, label: label.into(), form: FormJson::from_form(f, form) }
}

const WITNESS_CAP: usize = 8;

// ---------------------------------------------------------------- quadrics

/// Every projective quadric over GF(4) against the Hermitian surface of PG(3, 4).
///
/// Asserts the maximum `2q³+2q²−q+1`, the empty gap above `2q³+q²+1`, that
/// every maximizer is a pair of tangent planes through a secant, and that the
/// number of maximizers is `#secants · C(q+1, 2)`.
pub fn exhaustive_quadrics(s: &HermitianSurface, jobs: usize) -> Result<SurveyReport> {
    require_nondegenerate(s)?;
    let f = s.field().clone();
    let q = f.q();
    if q != 2 {
        return Err(Error::OutOfRange(format!("exhaustive quadric enumeration needs q = 2, got {q}")));
    }
    let monos = forms::monomials::<4>(2);
    let nm = monos.len();
    let order = f.order() as usize;
    // monomial values, point-major
    let table: Vec<crate::FieldElement> = s
        .points()
        .iter()
        .flat_map(|p| {
            let x = *p.coords();
            let f = &f;
            monos.iter().map(move |e| (0..4).fold(crate::FieldElement::ONE, |acc, i| f.mul(acc, f.pow(x[i], e[i] as u64))))
                .collect::<Vec<_>>()
        })
        .collect();
    let qq = q as usize;
    let top = 2 * qq * qq * qq + 2 * qq * qq - qq + 1;
    let gap_floor = 2 * qq * qq * qq + qq * qq + 1;
    let total = order.pow(nm as u32);
    const BLOCK: usize = 1 << 12;
    let blocks = total.div_ceil(BLOCK);
    let decode = |v: usize| -> Vec<crate::FieldElement> {
        (0..nm).map(|i| crate::FieldElement::from_raw(((v / order.pow(i as u32)) % order) as u32)).collect()
    };
    let results = par_map(jobs, blocks, |b| {
        let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
        let mut high: Vec<(usize, usize)> = Vec::new();
        for v in b * BLOCK..((b + 1) * BLOCK).min(total) {
            let c = decode(v);
            match c.iter().find(|x| !x.is_zero()) {
                Some(x) if x.is_one() => {}
                _ => continue,
            }
            let n = table
                .chunks_exact(nm)
                .filter(|row| row.iter().zip(&c).fold(crate::FieldElement::ZERO, |acc, (m, k)| f.add(acc, f.mul(*m, *k))).is_zero())
                .count();
            *hist.entry(n).or_default() += 1;
            if n > gap_floor {
                high.push((n, v));
            }
        }
        (hist, high)
    })?;
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    let mut high = Vec::new();
    for (h, hi) in results {
        for (k, n) in h {
            *hist.entry(k).or_default() += n;
        }
        high.extend(hi);
    }
    let visited: u64 = hist.values().sum();
    let mut violations = Vec::new();
    let expected_forms = (total as u64 - 1) / (order as u64 - 1);
    if visited != expected_forms {
        violations.push(format!("visited {visited} forms, expected {expected_forms}"));
    }
    let max_count = hist.keys().next_back().copied().unwrap_or(0);
    if max_count != top {
        violations.push(format!("maximum {max_count}, expected {top}"));
    }
    for (&k, _) in hist.range(gap_floor + 1..top) {
        violations.push(format!("value {k} lies strictly between {gap_floor} and {top}"));
    }
    let g = s.space();
    let mut witnesses = Vec::new();
    let mut maximizers = 0u64;
    for &(n, v) in &high {
        let form = HomogeneousForm::from_terms(&f, 2, monos.iter().copied().zip(decode(v)))?;
        if n != top {
            violations.push(format!("form {} has {n} points", form.display(&f)));
            continue;
        }
        maximizers += 1;
        let factors = forms::linear_factors(&form, g)?;
        let ok = match factors.as_slice() {
            [(a, 1), (b, 1)] => {
                s.is_tangent_plane(a)? && s.is_tangent_plane(b)? && s.classify_line(&g.meet_planes(a, b)?)? == LineClass::Secant
            }
            _ => false,
        };
        if !ok {
            violations.push(format!("maximizer {} is not two tangent planes through a secant", form.display(&f)));
        }
        if witnesses.len() < WITNESS_CAP {
            witnesses.push(witness(&f, n, "two-tangent-planes", &form));
        }
    }
    let secants = g.lines().filter(|l| s.line_count(l) == qq + 1).count() as u64;
    let expected_max = secants * (qq as u64 + 1) * qq as u64 / 2;
    if maximizers != expected_max {
        violations.push(format!("{maximizers} maximizers, expected {expected_max}"));
    }
    let mut observations = BTreeMap::new();
    observations.insert("maximizers".into(), json!(maximizers));
    observations.insert("secant_lines".into(), json!(secants));
    observations.insert("gap".into(), json!([gap_floor, top]));
    observations.insert(
        "second_value".into(),
        json!(hist.keys().rev().nth(1).copied()),
    );
    Ok(SurveyReport {
        header: ReportHeader::new(&f),
        survey: "quadrics",
        q,
        d: 2,
        samples: visited,
        seed: None,
        mode: Mode::Exhaustive,
        histogram: hist,
        max_count,
        witnesses,
        violations,
        observations,
    })
}

// ---------------------------------------------------------------- cubics

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubicSurveyParams {
    pub samples: u64,
    pub seed: u64,
    pub jobs: usize,
    /// Assert the top-two dichotomy also for `q < 8`.
    pub strict_conjecture: bool,
}

struct CubicOutcome {
    stratum: Stratum,
    form: HomogeneousForm,
    count: usize,
    checks: Vec<BoundCheck>,
    structure: Option<String>,
    error: Option<String>,
}

/// Whether `V(F)` is three tangent planes through a common secant.
fn is_top_structure(s: &HermitianSurface, p: &CubicProfile) -> Result<bool> {
    let g = s.space();
    let planes: Vec<ProjPlane> = p.linear_factors.iter().filter(|x| x.1 == 1).map(|x| x.0).collect();
    if planes.len() != 3 || !p.all_linear_factors_tangent {
        return Ok(false);
    }
    let l = g.meet_planes(&planes[0], &planes[1])?;
    Ok(g.line_in_plane(&l, &planes[2]) && s.classify_line(&l)? == LineClass::Secant)
}

/// Three distinct tangent planes, pairwise secants, meeting the surface in one common point.
fn is_second_structure(s: &HermitianSurface, p: &CubicProfile) -> Result<bool> {
    let g = s.space();
    let planes: Vec<ProjPlane> = p.linear_factors.iter().filter(|x| x.1 == 1).map(|x| x.0).collect();
    if planes.len() != 3 || !p.all_linear_factors_tangent {
        return Ok(false);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if s.classify_line(&g.meet_planes(&planes[i], &planes[j])?)? != LineClass::Secant {
            return Ok(false);
        }
    }
    let common = s.points().iter().filter(|x| planes.iter().all(|pl| g.point_on_plane(x, pl))).count();
    Ok(common == 1)
}

fn survey_one(s: &HermitianSurface, params: &CubicSurveyParams, i: u64, assert_top: bool) -> CubicOutcome {
    let q = s.q();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(i);
    let stratum = sample::stratum_of(i);
    let mut run = || -> Result<(HomogeneousForm, usize, Vec<BoundCheck>, Option<String>)> {
        let form = sample::stratum_cubic(s, stratum, &mut rng)?;
        let p = profile_cubic(&form, s)?;
        let checks = assert_conditional_bounds(&p, q);
        let n = p.intersection_count;
        let top = sorensen_count(q, 3);
        let second = second_best_count(q);
        let mut structure = None;
        if assert_top {
            if n > top || (n > second && n < top) {
                structure = Some(format!("count {n} outside {{{top}}} ∪ [0, {second}]"));
            } else if n == top && !is_top_structure(s, &p)? {
                structure = Some(format!("count {top} without three tangent planes through a secant"));
            } else if n == second && !is_second_structure(s, &p)? {
                structure = Some(format!("count {second} without the second-place plane triple"));
            }
        }
        Ok((form, n, checks, structure))
    };
    match run() {
        Ok((form, count, checks, structure)) => CubicOutcome { stratum, form, count, checks, structure, error: None },
        Err(e) => CubicOutcome {
            stratum,
            form: HomogeneousForm::zero(3),
            count: 0,
            checks: Vec::new(),
            structure: None,
            error: Some(e.to_string()),
        },
    }
}

/// Seeded cubics from the structured strata, each profiled and checked
/// against every applicable conditional bound.
///
/// For `q ≥ 8` (or with `strict_conjecture`) the top-two dichotomy and the
/// structure of the extremal cubics are asserted; otherwise they are only
/// reported.
pub fn cubic_survey(s: &HermitianSurface, params: CubicSurveyParams) -> Result<SurveyReport> {
    require_nondegenerate(s)?;
    let f = s.field().clone();
    let q = f.q();
    if q < 3 {
        return Err(Error::OutOfRange(format!("cubic survey needs d = 3 <= q, got q = {q}")));
    }
    s.generator_slots()?;
    let assert_top = q >= 8 || params.strict_conjecture;
    let outcomes = par_map(params.jobs, params.samples as usize, |i| survey_one(s, &params, i as u64, assert_top))?;

    let top = sorensen_count(q, 3);
    let second = second_best_count(q);
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut strata: BTreeMap<&'static str, (u64, usize)> = BTreeMap::new();
    let mut bounds: BTreeMap<&'static str, (u64, u64)> = BTreeMap::new();
    let mut branches: BTreeMap<String, u64> = BTreeMap::new();
    let mut t_ell_hist: BTreeMap<usize, u64> = BTreeMap::new();
    let mut conjecture_outside = 0u64;
    let mut witnesses: BTreeMap<usize, Vec<Witness>> = BTreeMap::new();
    for (i, o) in outcomes.iter().enumerate() {
        if let Some(e) = &o.error {
            violations.push(format!("sample {i} ({}): {e}", o.stratum.name()));
            continue;
        }
        *hist.entry(o.count).or_default() += 1;
        let st = strata.entry(o.stratum.name()).or_default();
        st.0 += 1;
        st.1 = st.1.max(o.count);
        for c in &o.checks {
            let b = bounds.entry(c.id).or_default();
            b.0 += 1;
            if !c.pass {
                b.1 += 1;
                violations.push(format!("sample {i} ({}): {} bound {} exceeded by {}", o.stratum.name(), c.id, c.bound, c.count));
            }
            if let Some(br) = c.branch {
                *branches.entry(serde_json::to_value(br)?.as_str().unwrap_or_default().to_string()).or_default() += 1;
            }
            if c.id == "t-ell" {
                *t_ell_hist.entry(c.count).or_default() += 1;
            }
        }
        if let Some(msg) = &o.structure {
            violations.push(format!("sample {i} ({}): {msg}", o.stratum.name()));
        }
        if o.count > top || (o.count > second && o.count < top) {
            conjecture_outside += 1;
        }
        if o.stratum == Stratum::SorensenWitness && o.count != top {
            violations.push(format!("sample {i}: three tangent planes through a secant gave {} instead of {top}", o.count));
        }
        if o.stratum == Stratum::SecondBestWitness && o.count != second {
            violations.push(format!("sample {i}: second-place construction gave {} instead of {second}", o.count));
        }
        let w = witnesses.entry(o.count).or_default();
        if w.len() < WITNESS_CAP {
            w.push(witness(&f, o.count, format!("sample {i} ({})", o.stratum.name()), &o.form));
        }
    }
    let max_count = hist.keys().next_back().copied().unwrap_or(0);
    let top_two: Vec<usize> = hist.keys().rev().take(2).copied().collect();
    let witnesses: Vec<Witness> =
        top_two.iter().flat_map(|c| witnesses.remove(c).unwrap_or_default()).collect();
    let mut observations = BTreeMap::new();
    observations.insert(
        "strata".into(),
        json!(strata.iter().map(|(k, v)| (k.to_string(), json!({"samples": v.0, "max": v.1}))).collect::<BTreeMap<_, _>>()),
    );
    observations.insert(
        "bounds".into(),
        json!(bounds.iter().map(|(k, v)| (k.to_string(), json!({"applied": v.0, "failed": v.1}))).collect::<BTreeMap<_, _>>()),
    );
    observations.insert("tangent_factor_branches".into(), json!(branches));
    observations.insert("t_ell_sizes".into(), json!(t_ell_hist));
    observations.insert(
        "top_two".into(),
        json!({
            "asserted": assert_top,
            "top": top,
            "second": second,
            "samples_outside": conjecture_outside,
            "top_present": hist.contains_key(&top),
        }),
    );
    Ok(SurveyReport {
        header: ReportHeader::new(&f),
        survey: "cubics",
        q,
        d: 3,
        samples: params.samples,
        seed: Some(params.seed),
        mode: Mode::Random,
        histogram: hist,
        max_count,
        witnesses,
        violations,
        observations,
    })
}

// ---------------------------------------------------------------- plane triples

#[derive(Default)]
struct TripleTally {
    hist: BTreeMap<usize, u64>,
    triples: u64,
    secant_tangent: (u64, usize, usize),
    generator_axis: (u64, usize, usize),
    mixed: (u64, usize),
    cross_checked: u64,
    violations: Vec<String>,
    witnesses: Vec<(usize, String, [usize; 3])>,
    keys: Vec<u64>,
}

/// Every unordered triple of distinct planes through a common line.
///
/// Asserts that `3(q³+q²−q)+1` never occurs, that secant-axis triples of
/// tangent planes give exactly `3(q³+q²−q)+q+1`, generator-axis triples give
/// exactly `3q³+q²+1`, and triples with a non-tangent plane stay at most
/// `3q³+2q²+1`. Every 1009th triple is recounted from its cubic form.
pub fn elx_survey(s: &HermitianSurface, jobs: usize) -> Result<SurveyReport> {
    require_nondegenerate(s)?;
    let f = s.field().clone();
    let q = f.q();
    if q > 4 {
        return Err(Error::OutOfRange(format!("triple enumeration is limited to q <= 4, got {q}")));
    }
    let g = s.space();
    let qq = q as usize;
    let words = s.points().len().div_ceil(64);
    let mut bits = vec![0u64; g.num_planes() * words];
    let mut tangent = vec![false; g.num_planes()];
    for (k, pl) in g.planes().enumerate() {
        tangent[k] = s.is_tangent_plane(&pl)?;
        for p in g.points_on_plane(&pl) {
            if let Some(slot) = s.slot_of(&p) {
                bits[k * words + slot / 64] |= 1 << (slot % 64);
            }
        }
    }
    let top = sorensen_count(q, 3);
    let second = second_best_count(q);
    let gen_value = generator_book_count(q, 3);
    let mixed_bound = 3 * qq * qq * qq + 2 * qq * qq + 1;
    let dedupe = g.num_lines() <= 10_000;
    let book_len = qq * qq + 1;
    let per_line = (book_len * (book_len - 1) * (book_len - 2) / 6) as u64;
    let tallies = par_map(jobs, g.num_lines(), |li| -> Result<TripleTally> {
        let l = g.line_at(li);
        let class = s.classify_line(&l)?;
        let book: Vec<usize> = g.book_of_planes(&l).iter().map(|pl| g.plane_index(pl)).collect();
        let mut t = TripleTally::default();
        let mut local = 0u64;
        for a in 0..book.len() {
            for b in a + 1..book.len() {
                for c in b + 1..book.len() {
                    let idx = [book[a], book[b], book[c]];
                    let n: usize = (0..words)
                        .map(|w| (bits[idx[0] * words + w] | bits[idx[1] * words + w] | bits[idx[2] * words + w]).count_ones() as usize)
                        .sum();
                    *t.hist.entry(n).or_default() += 1;
                    t.triples += 1;
                    if dedupe {
                        let mut k = idx;
                        k.sort_unstable();
                        t.keys.push(((k[0] as u64) << 40) | ((k[1] as u64) << 20) | k[2] as u64);
                    }
                    let all_tangent = idx.iter().all(|&i| tangent[i]);
                    let label = match (class, all_tangent) {
                        (LineClass::Secant, true) => {
                            t.secant_tangent.0 += 1;
                            t.secant_tangent.1 = t.secant_tangent.1.max(n);
                            t.secant_tangent.2 = if t.secant_tangent.0 == 1 { n } else { t.secant_tangent.2.min(n) };
                            if n != top {
                                t.violations.push(format!("secant-axis tangent triple {idx:?} has {n} points"));
                            }
                            "secant-axis"
                        }
                        (LineClass::Generator, _) => {
                            t.generator_axis.0 += 1;
                            t.generator_axis.1 = t.generator_axis.1.max(n);
                            t.generator_axis.2 = if t.generator_axis.0 == 1 { n } else { t.generator_axis.2.min(n) };
                            if n != gen_value {
                                t.violations.push(format!("generator-axis triple {idx:?} has {n} points"));
                            }
                            "generator-axis"
                        }
                        _ => {
                            t.mixed.0 += 1;
                            t.mixed.1 = t.mixed.1.max(n);
                            if !all_tangent && n > mixed_bound {
                                t.violations.push(format!("triple {idx:?} with a non-tangent plane has {n} points"));
                            }
                            "mixed"
                        }
                    };
                    if n == second {
                        t.violations.push(format!("triple {idx:?} attains {second}"));
                    }
                    if t.witnesses.iter().all(|w| w.1 != label) {
                        t.witnesses.push((n, label.to_string(), idx));
                    }
                    if (li as u64 * per_line + local).is_multiple_of(1009) {
                        let planes = idx.map(|i| g.plane_at(i));
                        let form = HomogeneousForm::of_planes(&f, &planes);
                        let m = forms::intersection_count(&form, s)?;
                        t.cross_checked += 1;
                        if m != n {
                            t.violations.push(format!("triple {idx:?}: bitset count {n}, form count {m}"));
                        }
                    }
                    local += 1;
                }
            }
        }
        Ok(t)
    })?;
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut triples = 0u64;
    let mut sec = (0u64, 0usize);
    let mut gen = (0u64, 0usize);
    let mut mixed = (0u64, 0usize);
    let mut cross = 0u64;
    let mut seen: HashSet<u64> = HashSet::new();
    let mut duplicates = 0u64;
    let mut wit: BTreeMap<String, (usize, [usize; 3])> = BTreeMap::new();
    for t in tallies {
        let t = t?;
        for (k, n) in t.hist {
            *hist.entry(k).or_default() += n;
        }
        triples += t.triples;
        sec = (sec.0 + t.secant_tangent.0, sec.1.max(t.secant_tangent.1));
        gen = (gen.0 + t.generator_axis.0, gen.1.max(t.generator_axis.1));
        mixed = (mixed.0 + t.mixed.0, mixed.1.max(t.mixed.1));
        cross += t.cross_checked;
        violations.extend(t.violations);
        for k in t.keys {
            if !seen.insert(k) {
                duplicates += 1;
            }
        }
        for (n, label, idx) in t.witnesses {
            let e = wit.entry(label).or_insert((n, idx));
            if n > e.0 {
                *e = (n, idx);
            }
        }
    }
    if duplicates > 0 {
        violations.push(format!("{duplicates} triples were enumerated under two axes"));
    }
    for (v, what) in [(top, "three tangent planes through a secant"), (gen_value, "three planes through a generator")] {
        if !hist.contains_key(&v) {
            violations.push(format!("value {v} ({what}) never occurs"));
        }
    }
    let witnesses = wit
        .iter()
        .map(|(label, (n, idx))| witness(&f, *n, label.clone(), &HomogeneousForm::of_planes(&f, &idx.map(|i| g.plane_at(i)))))
        .collect();
    let max_count = hist.keys().next_back().copied().unwrap_or(0);
    let mut observations = BTreeMap::new();
    observations.insert("secant_axis_tangent_triples".into(), json!({"triples": sec.0, "max": sec.1}));
    observations.insert("generator_axis_triples".into(), json!({"triples": gen.0, "max": gen.1}));
    observations.insert("other_triples".into(), json!({"triples": mixed.0, "max": mixed.1, "bound": mixed_bound}));
    observations.insert("absent_value".into(), json!(second));
    observations.insert("cross_checked".into(), json!(cross));
    observations.insert("deduplicated".into(), json!(dedupe));
    Ok(SurveyReport {
        header: ReportHeader::new(&f),
        survey: "triples",
        q,
        d: 3,
        samples: triples,
        seed: None,
        mode: Mode::Exhaustive,
        histogram: hist,
        max_count,
        witnesses,
        violations,
        observations,
    })
}

// ---------------------------------------------------------------- structure

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub header: ReportHeader,
    pub mode: Mode,
    pub seed: Option<u64>,
    pub surface_points: usize,
    pub lines_checked: usize,
    /// Line class name to number of lines, and the book profile seen for it.
    pub line_classes: BTreeMap<String, usize>,
    pub book_profiles: BTreeMap<String, (usize, usize)>,
    pub planes_checked: usize,
    pub plane_sections: BTreeMap<usize, usize>,
    pub points_checked: usize,
    pub plane_pairs_checked: usize,
    pub meet_classes: BTreeMap<String, usize>,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,key,value\n");
        for (k, v) in &self.line_classes {
            out.push_str(&format!("line,{k},{v}\n"));
        }
        for (k, v) in &self.plane_sections {
            out.push_str(&format!("plane,{k},{v}\n"));
        }
        for (k, v) in &self.meet_classes {
            out.push_str(&format!("meet,{k},{v}\n"));
        }
        out
    }
}

/// How many objects a sampled audit looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditScope {
    Full,
    Sampled { seed: u64, per_kind: usize },
}

/// Line, plane and surface-point indices, and plane index pairs.
type AuditTargets = (Vec<usize>, Vec<usize>, Vec<usize>, Vec<(usize, usize)>);

fn class_name(c: LineClass) -> &'static str {
    match c {
        LineClass::Generator => "generator",
        LineClass::Secant => "secant",
        LineClass::Tangent => "tangent",
    }
}

/// Replays the incidence facts of a non-degenerate Hermitian surface: line
/// and plane spectra, book profiles, the lines through a surface point, the
/// classes of meets of two planes, and the book-sum identity
/// `Σ_{Π ⊃ ℓ} |Π ∩ V₂| = q²·|ℓ ∩ V₂| + |V₂|`.
pub fn structure_audit(s: &HermitianSurface, scope: AuditScope, jobs: usize) -> Result<StructureReport> {
    require_nondegenerate(s)?;
    let f = s.field().clone();
    let g = s.space();
    let qq = f.q() as usize;
    let q2 = qq * qq;
    let q3 = q2 * qq;
    let n_surface = s.points().len();
    let mut violations = Vec::new();
    if n_surface != (q3 + 1) * (q2 + 1) {
        violations.push(format!("surface has {n_surface} points"));
    }
    let (line_ids, plane_ids, point_ids, pairs): AuditTargets = match scope {
        AuditScope::Full => {
            let np = g.num_planes();
            (
                (0..g.num_lines()).collect(),
                (0..np).collect(),
                (0..n_surface).collect(),
                (0..np).flat_map(|a| (a + 1..np).map(move |b| (a, b))).collect(),
            )
        }
        AuditScope::Sampled { seed, per_kind } => {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let np = g.num_planes();
            let lines = (0..per_kind).map(|_| rng.gen_range(0..g.num_lines())).collect();
            let planes = (0..per_kind).map(|_| rng.gen_range(0..np)).collect();
            let points = (0..per_kind).map(|_| rng.gen_range(0..n_surface)).collect();
            let pairs = (0..per_kind)
                .map(|_| loop {
                    let (a, b) = (rng.gen_range(0..np), rng.gen_range(0..np));
                    if a != b {
                        break (a.min(b), a.max(b));
                    }
                })
                .collect();
            (lines, planes, points, pairs)
        }
    };

    let line_results = par_map(jobs, line_ids.len(), |i| -> Result<(LineClass, (usize, usize), Option<String>)> {
        let l = g.line_at(line_ids[i]);
        let n = s.line_count(&l);
        let class = s.classify_line(&l)?;
        let mut issue = None;
        if ![1, qq + 1, q2 + 1].contains(&n) {
            issue = Some(format!("line {} meets the surface in {n} points", line_ids[i]));
        }
        let prof = match s.book_profile(&l) {
            Ok(p) => (p.tangent, p.non_tangent),
            Err(e) => {
                issue = Some(format!("line {}: {e}", line_ids[i]));
                (0, 0)
            }
        };
        let sum: usize = g.book_of_planes(&l).iter().map(|pl| s.plane_count(pl)).sum();
        if sum != q2 * n + n_surface {
            issue = Some(format!("line {}: book sum {sum}, expected {}", line_ids[i], q2 * n + n_surface));
        }
        Ok((class, prof, issue))
    })?;
    let mut line_classes = BTreeMap::new();
    let mut book_profiles: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in line_results {
        let (class, prof, issue) = r?;
        *line_classes.entry(class_name(class).to_string()).or_insert(0) += 1;
        let seen = book_profiles.entry(class_name(class).to_string()).or_insert(prof);
        if *seen != prof {
            violations.push(format!("{} lines have book profiles {seen:?} and {prof:?}", class_name(class)));
        }
        violations.extend(issue);
    }
    if scope == AuditScope::Full {
        let gens = s.generators()?.len();
        if line_classes.get("generator").copied().unwrap_or(0) != gens || gens != (q3 + 1) * (qq + 1) {
            violations.push(format!("generator count {gens}, expected {}", (q3 + 1) * (qq + 1)));
        }
    }

    let plane_results = par_map(jobs, plane_ids.len(), |i| -> Result<(usize, Option<String>)> {
        let pl = g.plane_at(plane_ids[i]);
        let n = s.plane_count(&pl);
        let tangent = s.is_tangent_plane(&pl)?;
        let expected = if tangent { q3 + q2 + 1 } else { q3 + 1 };
        Ok((n, (n != expected).then(|| format!("plane {} has {n} points, tangent = {tangent}", plane_ids[i]))))
    })?;
    let mut plane_sections = BTreeMap::new();
    for r in plane_results {
        let (n, issue) = r?;
        *plane_sections.entry(n).or_insert(0) += 1;
        violations.extend(issue);
    }

    let point_results = par_map(jobs, point_ids.len(), |i| s.tangent_point_line_tally(&s.points()[point_ids[i]]).err())?;
    violations.extend(point_results.into_iter().flatten().map(|e| format!("tangent point tally: {e}")));

    let tangent: Vec<bool> = if scope == AuditScope::Full {
        g.planes().map(|pl| s.is_tangent_plane(&pl)).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let is_tangent = |i: usize| -> Result<bool> {
        match tangent.get(i) {
            Some(&t) => Ok(t),
            None => s.is_tangent_plane(&g.plane_at(i)),
        }
    };
    let chunk = 4096;
    let pair_results = par_map(jobs, pairs.len().div_ceil(chunk), |c| -> Result<(BTreeMap<String, usize>, Vec<String>)> {
        let mut classes = BTreeMap::new();
        let mut issues = Vec::new();
        for &(a, b) in &pairs[c * chunk..((c + 1) * chunk).min(pairs.len())] {
            let (ta, tb) = (is_tangent(a)?, is_tangent(b)?);
            let l = g.meet_planes(&g.plane_at(a), &g.plane_at(b))?;
            let class = s.classify_line(&l)?;
            let allowed = match (ta, tb) {
                (true, true) => class != LineClass::Tangent,
                _ => class != LineClass::Generator,
            };
            let key = format!("{}-{}:{}", if ta { "tangent" } else { "non-tangent" }, if tb { "tangent" } else { "non-tangent" }, class_name(class));
            let key = if ta != tb { key.replace("tangent-non-tangent", "non-tangent-tangent") } else { key };
            *classes.entry(key).or_insert(0) += 1;
            if !allowed {
                issues.push(format!("planes {a} and {b} (tangent {ta}, {tb}) meet in a {} line", class_name(class)));
            }
        }
        Ok((classes, issues))
    })?;
    let mut meet_classes = BTreeMap::new();
    for r in pair_results {
        let (classes, issues) = r?;
        for (k, v) in classes {
            *meet_classes.entry(k).or_insert(0) += v;
        }
        violations.extend(issues);
    }
    Ok(StructureReport {
        header: ReportHeader::new(&f),
        mode: if scope == AuditScope::Full { Mode::Exhaustive } else { Mode::Random },
        seed: match scope {
            AuditScope::Full => None,
            AuditScope::Sampled { seed, .. } => Some(seed),
        },
        surface_points: n_surface,
        lines_checked: line_ids.len(),
        line_classes,
        book_profiles,
        planes_checked: plane_ids.len(),
        plane_sections,
        points_checked: point_ids.len(),
        plane_pairs_checked: pairs.len(),
        meet_classes,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projspace::Pg3;
    use std::sync::Arc;

    fn surface(q: u32) -> HermitianSurface {
        HermitianSurface::canonical(Pg3::new(Arc::new(FieldCtx::new(q).unwrap())), 4).unwrap()
    }

    #[test]
    fn quadrics_at_q2() {
        let r = exhaustive_quadrics(&surface(2), 1).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.samples, 349_525);
        assert_eq!(r.max_count, 23);
        assert!(!r.histogram.contains_key(&22));
    }

    #[test]
    fn quadrics_reject_other_q() {
        assert!(matches!(exhaustive_quadrics(&surface(3), 1), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn triples_at_q2_and_q3() {
        for q in [2, 3] {
            let r = elx_survey(&surface(q), 1).unwrap();
            assert!(r.passed(), "q={q}: {:?}", &r.violations[..r.violations.len().min(5)]);
            assert_eq!(r.max_count, sorensen_count(q, 3));
            assert!(!r.histogram.contains_key(&second_best_count(q)));
        }
    }

    #[test]
    fn cubic_survey_small() {
        let s = surface(3);
        let params = CubicSurveyParams { samples: 60, seed: 5, jobs: 1, strict_conjecture: true };
        let r = cubic_survey(&s, params).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.max_count, sorensen_count(3, 3));
        let again = cubic_survey(&s, CubicSurveyParams { jobs: 2, ..params }).unwrap();
        assert_eq!(r.to_json(), again.to_json());
    }

    #[test]
    fn structure_full_q2_sampled_q3() {
        let r = structure_audit(&surface(2), AuditScope::Full, 1).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.surface_points, 45);
        assert_eq!(r.line_classes["generator"], 27);
        let r = structure_audit(&surface(3), AuditScope::Sampled { seed: 1, per_kind: 200 }, 1).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }
}
