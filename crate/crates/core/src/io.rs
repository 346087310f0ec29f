//! JSON encodings of forms and incidence objects.
//!
//! Field elements are written with [`FieldCtx::format`]. Points and planes are
//! 4-arrays of element strings, lines are pairs of points.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::forms::HomogeneousForm;
use crate::hermitian::HermitianMatrix;
use crate::linalg::{Mat4, Vec4};
use crate::projspace::{Pg3, ProjLine, ProjPlane, ProjPoint};

pub type VecJson = [String; 4];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: [u32; 4],
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub q: u32,
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

impl FormJson {
    pub fn from_form(f: &FieldCtx, form: &HomogeneousForm) -> Self {
        FormJson {
            q: f.q(),
            degree: form.degree(),
            terms: form
                .terms()
                .iter()
                .map(|(e, &c)| TermJson { exp: e.map(u32::from), c: f.format(c) })
                .collect(),
        }
    }

    /// Rejects a mismatched `q`, exponents that do not sum to the degree and
    /// repeated exponents.
    pub fn to_form(&self, f: &FieldCtx) -> Result<HomogeneousForm> {
        if self.q != f.q() {
            return Err(Error::InvalidForm(format!("form is over q = {}, expected {}", self.q, f.q())));
        }
        let mut seen = BTreeSet::new();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exp.iter().sum::<u32>() != self.degree {
                return Err(Error::InvalidForm(format!("exponent {:?} does not sum to {}", t.exp, self.degree)));
            }
            if !seen.insert(t.exp) {
                return Err(Error::InvalidForm(format!("duplicate exponent {:?}", t.exp)));
            }
            let exp = t.exp.map(|x| x as u8);
            terms.push((exp, f.parse(&t.c)?));
        }
        HomogeneousForm::from_terms(f, self.degree, terms)
    }
}

pub fn form_to_json(f: &FieldCtx, form: &HomogeneousForm) -> serde_json::Value {
    serde_json::to_value(FormJson::from_form(f, form)).expect("plain data serializes")
}

pub fn parse_form(f: &FieldCtx, text: &str) -> Result<HomogeneousForm> {
    let j: FormJson = serde_json::from_str(text)?;
    j.to_form(f)
}

pub fn vec_json(f: &FieldCtx, v: &Vec4) -> VecJson {
    v.map(|x| f.format(x))
}

pub fn parse_vec(f: &FieldCtx, v: &VecJson) -> Result<Vec4> {
    let mut out = [crate::FieldElement::ZERO; 4];
    for (o, s) in out.iter_mut().zip(v) {
        *o = f.parse(s)?;
    }
    Ok(out)
}

pub fn point_json(f: &FieldCtx, p: &ProjPoint) -> VecJson {
    vec_json(f, p.coords())
}

pub fn plane_json(f: &FieldCtx, pl: &ProjPlane) -> VecJson {
    vec_json(f, pl.dual())
}

pub fn line_json(f: &FieldCtx, l: &ProjLine) -> [VecJson; 2] {
    l.rows().map(|r| vec_json(f, &r))
}

pub fn parse_point(space: &Pg3, text: &str) -> Result<ProjPoint> {
    let v: VecJson = serde_json::from_str(text)?;
    space.point(parse_vec(space.field(), &v)?)
}

pub fn parse_plane(space: &Pg3, text: &str) -> Result<ProjPlane> {
    let v: VecJson = serde_json::from_str(text)?;
    space.plane(parse_vec(space.field(), &v)?)
}

/// Any two spanning points are accepted; the result is canonical.
pub fn parse_line(space: &Pg3, text: &str) -> Result<ProjLine> {
    let [a, b]: [VecJson; 2] = serde_json::from_str(text)?;
    let f = space.field();
    space.line(parse_vec(f, &a)?, parse_vec(f, &b)?)
}

pub fn matrix_json(f: &FieldCtx, m: &HermitianMatrix) -> [VecJson; 4] {
    m.entries().map(|r| vec_json(f, &r))
}

pub fn parse_matrix(f: &FieldCtx, text: &str) -> Result<HermitianMatrix> {
    let rows: [VecJson; 4] = serde_json::from_str(text)?;
    let mut m: Mat4 = [[crate::FieldElement::ZERO; 4]; 4];
    for (i, r) in rows.iter().enumerate() {
        m[i] = parse_vec(f, r)?;
    }
    HermitianMatrix::new(f, m)
}
