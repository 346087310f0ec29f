//! Homogeneous forms over GF(q²) in 2, 3 or 4 variables.
//!
//! A form is a degree together with a sparse map from exponent tuples to
//! nonzero coefficients. The zero form of any degree is representable (it is
//! what restriction returns when a plane divides `F`); operations that need a
//! genuine surface reject it with [`Error::ZeroForm`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::hermitian::HermitianSurface;
use crate::linalg::Vec4;
use crate::projspace::{Pg3, ProjLine, ProjPlane, ProjPoint, Projectivity};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form<const N: usize> {
    degree: u32,
    terms: BTreeMap<[u8; N], FieldElement>,
}

pub type HomogeneousForm = Form<4>;
pub type TernaryForm = Form<3>;
pub type BinaryForm = Form<2>;

/// Exponent tuples of total degree `d` in `N` variables, `x0^d` first.
pub fn monomials<const N: usize>(d: u32) -> Vec<[u8; N]> {
    fn rec<const N: usize>(pos: usize, left: u32, cur: &mut [u8; N], out: &mut Vec<[u8; N]>) {
        if pos == N - 1 {
            cur[pos] = left as u8;
            out.push(*cur);
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e as u8;
            rec(pos + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, d, &mut [0u8; N], &mut out);
    out
}

impl<const N: usize> Form<N> {
    pub fn zero(degree: u32) -> Self {
        Form { degree, terms: BTreeMap::new() }
    }

    /// Builds a form from `(exponent, coefficient)` pairs, adding repeated
    /// exponents and dropping zero coefficients.
    pub fn from_terms(
        f: &FieldCtx,
        degree: u32,
        terms: impl IntoIterator<Item = ([u8; N], FieldElement)>,
    ) -> Result<Self> {
        let mut out = Form::zero(degree);
        for (e, c) in terms {
            f.check(c)?;
            let sum: u32 = e.iter().map(|&x| x as u32).sum();
            if sum != degree {
                return Err(Error::InvalidForm(format!("exponent {e:?} does not sum to degree {degree}")));
            }
            out.add_term(f, e, c);
        }
        Ok(out)
    }

    pub fn monomial(exp: [u8; N], c: FieldElement) -> Self {
        let degree = exp.iter().map(|&x| x as u32).sum();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Form { degree, terms }
    }

    /// `Σ c_i x_i`.
    pub fn linear(coeffs: [FieldElement; N]) -> Self {
        let mut terms = BTreeMap::new();
        for (i, &c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = [0u8; N];
                e[i] = 1;
                terms.insert(e, c);
            }
        }
        Form { degree: 1, terms }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial([0; N], c)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<[u8; N], FieldElement> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u8; N]) -> FieldElement {
        self.terms.get(e).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, f: &FieldCtx, e: [u8; N], c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert(FieldElement::ZERO);
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, f: &FieldCtx, other: &Self) -> Result<Self> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::WrongDegree { expected: self.degree, got: other.degree });
        }
        let mut out = if self.is_zero() { Form::zero(other.degree) } else { self.clone() };
        for (&e, &c) in &other.terms {
            out.add_term(f, e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, f: &FieldCtx, other: &Self) -> Result<Self> {
        self.add(f, &other.scale(f, f.neg(FieldElement::ONE)))
    }

    pub fn scale(&self, f: &FieldCtx, c: FieldElement) -> Self {
        if c.is_zero() {
            return Form::zero(self.degree);
        }
        Form { degree: self.degree, terms: self.terms.iter().map(|(&e, &x)| (e, f.mul(x, c))).collect() }
    }

    pub fn mul(&self, f: &FieldCtx, other: &Self) -> Self {
        let mut out = Form::zero(self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: [u8; N] = std::array::from_fn(|i| a[i] + b[i]);
                out.add_term(f, e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, f: &FieldCtx, k: u32) -> Self {
        let mut out = Self::constant(FieldElement::ONE);
        for _ in 0..k {
            out = out.mul(f, self);
        }
        out
    }

    pub fn product<'a>(f: &FieldCtx, forms: impl IntoIterator<Item = &'a Self>) -> Self {
        forms.into_iter().fold(Self::constant(FieldElement::ONE), |acc, g| acc.mul(f, g))
    }

    pub fn evaluate(&self, f: &FieldCtx, x: &[FieldElement; N]) -> FieldElement {
        let d = self.degree as usize;
        let powers: Vec<Vec<FieldElement>> = x
            .iter()
            .map(|&xi| {
                let mut p = Vec::with_capacity(d + 1);
                p.push(FieldElement::ONE);
                for k in 0..d {
                    p.push(f.mul(p[k], xi));
                }
                p
            })
            .collect();
        let mut acc = FieldElement::ZERO;
        for (e, &c) in &self.terms {
            let mut m = c;
            for i in 0..N {
                if e[i] > 0 {
                    m = f.mul(m, powers[i][e[i] as usize]);
                }
            }
            acc = f.add(acc, m);
        }
        acc
    }

    /// Substitutes `x_i = Σ_j images[i][j] y_j`.
    pub fn substitute<const M: usize>(&self, f: &FieldCtx, images: &[[FieldElement; M]; N]) -> Form<M> {
        let d = self.degree;
        let mut powers: Vec<Vec<Form<M>>> = Vec::with_capacity(N);
        for img in images {
            let lin = Form::<M>::linear(*img);
            let mut row = vec![Form::<M>::constant(FieldElement::ONE)];
            for k in 0..d as usize {
                let next = row[k].mul(f, &lin);
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Form::<M>::zero(d);
        for (e, &c) in &self.terms {
            let mut m = Form::<M>::constant(c);
            for i in 0..N {
                if e[i] > 0 {
                    m = m.mul(f, &powers[i][e[i] as usize]);
                }
            }
            for (k, v) in m.terms {
                out.add_term(f, k, v);
            }
        }
        out
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, f: &FieldCtx, i: usize) -> Self {
        let mut out = Form::zero(self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] -= 1;
            out.add_term(f, e2, f.mul(c, f.from_int(e[i] as i64)));
        }
        out
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    ///
    /// Division by a single polynomial under lex order never stalls on a
    /// multiple of `g`, so a stall proves non-divisibility.
    pub fn div_exact(&self, f: &FieldCtx, g: &Self) -> Option<Self> {
        let (&lg, &cg) = g.terms.last_key_value()?;
        if self.degree < g.degree {
            return self.is_zero().then(|| Form::zero(0));
        }
        let inv = f.inv(cg).ok()?;
        let mut r = self.clone();
        let mut quot = Form::zero(self.degree - g.degree);
        while let Some((&e, &c)) = r.terms.last_key_value() {
            if (0..N).any(|i| e[i] < lg[i]) {
                return None;
            }
            let m: [u8; N] = std::array::from_fn(|i| e[i] - lg[i]);
            let coef = f.mul(c, inv);
            quot.add_term(f, m, coef);
            for (b, &cb) in &g.terms {
                let e2: [u8; N] = std::array::from_fn(|i| m[i] + b[i]);
                r.add_term(f, e2, f.neg(f.mul(coef, cb)));
            }
        }
        Some(quot)
    }

    /// Human-readable rendering such as `x0^2*x1 + (t+1)*x3^3`.
    pub fn display(&self, f: &FieldCtx) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (e, &c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("x{i}") } else { format!("x{i}^{x}") })
                .collect();
            let cs = f.format(c);
            match (c.is_one(), mono.is_empty()) {
                (_, true) => s.push_str(&cs),
                (true, false) => {}
                (false, false) => {
                    if cs.contains('+') {
                        let _ = write!(s, "({cs})*");
                    } else {
                        let _ = write!(s, "{cs}*");
                    }
                }
            }
            s.push_str(&mono.join("*"));
        }
        s
    }
}

impl HomogeneousForm {
    /// The linear form of a plane.
    pub fn of_plane(pl: &ProjPlane) -> Self {
        Self::linear(*pl.dual())
    }

    /// Product of the linear forms of the planes.
    pub fn of_planes(f: &FieldCtx, planes: &[ProjPlane]) -> Self {
        let lin: Vec<Self> = planes.iter().map(Self::of_plane).collect();
        Self::product(f, &lin)
    }

    pub fn eval_point(&self, f: &FieldCtx, p: &ProjPoint) -> FieldElement {
        self.evaluate(f, p.coords())
    }

    /// `F(M y)`.
    pub fn pullback(&self, f: &FieldCtx, m: &Projectivity) -> Self {
        self.substitute(f, m.matrix())
    }
}

/// Values of every monomial of one degree at a fixed list of points.
#[derive(Debug)]
pub struct EvalTable {
    degree: u32,
    monomials: Vec<[u8; 4]>,
    index: BTreeMap<[u8; 4], usize>,
    /// Point-major: `values[p * monomials.len() + m]`.
    values: Vec<FieldElement>,
    points: usize,
}

impl EvalTable {
    pub fn new(f: &FieldCtx, points: &[ProjPoint], degree: u32) -> Self {
        let monomials = monomials::<4>(degree);
        let index = monomials.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let d = degree as usize;
        let mut values = Vec::with_capacity(points.len() * monomials.len());
        for p in points {
            let powers: Vec<Vec<FieldElement>> = p
                .coords()
                .iter()
                .map(|&x| {
                    let mut v = vec![FieldElement::ONE];
                    for k in 0..d {
                        v.push(f.mul(v[k], x));
                    }
                    v
                })
                .collect();
            for e in &monomials {
                let mut m = FieldElement::ONE;
                for i in 0..4 {
                    m = f.mul(m, powers[i][e[i] as usize]);
                }
                values.push(m);
            }
        }
        EvalTable { degree, monomials, index, values, points: points.len() }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    /// Calls `visit(i)` for every point `i` where the form vanishes.
    fn for_each_zero(&self, f: &FieldCtx, form: &HomogeneousForm, mut visit: impl FnMut(usize)) {
        assert_eq!(form.degree(), self.degree, "table degree mismatch");
        let nm = self.monomials.len();
        let coeffs: Vec<(usize, FieldElement)> = form.terms().iter().map(|(e, &c)| (self.index[e], c)).collect();
        for (i, row) in self.values.chunks_exact(nm).enumerate() {
            let mut acc = FieldElement::ZERO;
            for &(m, c) in &coeffs {
                acc = f.add(acc, f.mul(c, row[m]));
            }
            if acc.is_zero() {
                visit(i);
            }
        }
    }

    pub fn count_zeros(&self, f: &FieldCtx, form: &HomogeneousForm) -> usize {
        let mut n = 0;
        self.for_each_zero(f, form, |_| n += 1);
        n
    }

    /// Zero pattern of the form over the table's points.
    pub fn zero_mask(&self, f: &FieldCtx, form: &HomogeneousForm) -> Vec<bool> {
        let mut mask = vec![false; self.points];
        self.for_each_zero(f, form, |i| mask[i] = true);
        mask
    }
}

/// `|V(F) ∩ V₂|`.
pub fn intersection_count(form: &HomogeneousForm, surface: &HermitianSurface) -> Result<usize> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    Ok(surface.eval_table(form.degree()).count_zeros(surface.field(), form))
}

/// Which surface points (in cache order) lie on `V(F)`.
pub fn zero_mask(form: &HomogeneousForm, surface: &HermitianSurface) -> Result<Vec<bool>> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    Ok(surface.eval_table(form.degree()).zero_mask(surface.field(), form))
}

/// Number of zeros of `F` in all of PG(3, q²).
pub fn projective_zero_count(form: &HomogeneousForm, space: &Pg3) -> usize {
    let f = space.field();
    space.points().filter(|p| form.eval_point(f, p).is_zero()).count()
}

/// `F` restricted to the plane along its fixed basis (see [`Pg3::plane_basis`]).
pub fn restrict_to_plane(form: &HomogeneousForm, space: &Pg3, pl: &ProjPlane) -> TernaryForm {
    let b = space.plane_basis(pl);
    let images: [[FieldElement; 3]; 4] = std::array::from_fn(|i| [b[0][i], b[1][i], b[2][i]]);
    form.substitute(space.field(), &images)
}

/// `F(u x + w y)` for the two RREF rows of the line.
pub fn restrict_to_line(form: &HomogeneousForm, space: &Pg3, l: &ProjLine) -> BinaryForm {
    restrict_to_span(form, space.field(), &l.rows()[0], &l.rows()[1])
}

fn restrict_to_span(form: &HomogeneousForm, f: &FieldCtx, u: &Vec4, w: &Vec4) -> BinaryForm {
    let images: [[FieldElement; 2]; 4] = std::array::from_fn(|i| [u[i], w[i]]);
    form.substitute(f, &images)
}

pub fn line_on_form(form: &HomogeneousForm, space: &Pg3, l: &ProjLine) -> bool {
    restrict_to_line(form, space, l).is_zero()
}

/// Largest `m` with every term of the pulled-back form of degree at least `m`
/// in `x2, x3`, after moving `l` to `V(x2, x3)`.
pub fn line_multiplicity(form: &HomogeneousForm, space: &Pg3, l: &ProjLine) -> Result<u32> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    if !line_on_form(form, space, l) {
        return Err(Error::LineNotOnForm);
    }
    let m = space.adapted_coords(l, None)?;
    Ok(valuation_x2x3(&form.pullback(space.field(), &m)))
}

pub(crate) fn valuation_x2x3(g: &HomogeneousForm) -> u32 {
    g.terms().keys().map(|e| (e[2] + e[3]) as u32).min().unwrap_or(u32::MAX)
}

/// Whether `F` vanishes on the line spanned by `u` and `w`.
///
/// With `d + 1 <= s + 1` distinct points the check is exact by evaluation.
fn vanishes_on_span(form: &HomogeneousForm, f: &FieldCtx, u: &Vec4, w: &Vec4) -> bool {
    let d = form.degree() as usize;
    if d + 1 > f.order() as usize + 1 {
        return restrict_to_span(form, f, u, w).is_zero();
    }
    if !form.evaluate(f, w).is_zero() {
        return false;
    }
    f.elements().take(d).all(|c| {
        let x: Vec4 = std::array::from_fn(|k| f.add(u[k], f.mul(c, w[k])));
        form.evaluate(f, &x).is_zero()
    })
}

/// Planes whose linear form divides `F`, with multiplicities, in plane order.
///
/// Every plane is covered: planes are searched by the pivot of their dual
/// vector and by the values `h_j` of its free coordinates. The basis point
/// `e_j - h_j e_k` must be a zero of `F`, and so must the lines joining basis
/// points; survivors are confirmed by exact restriction.
pub fn linear_factors(form: &HomogeneousForm, space: &Pg3) -> Result<Vec<(ProjPlane, u32)>> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    let f = space.field();
    let mut out = Vec::new();
    for k in 0..4 {
        let fixed: Vec<Vec4> = (0..k)
            .map(|j| {
                let mut e = [FieldElement::ZERO; 4];
                e[j] = FieldElement::ONE;
                e
            })
            .collect();
        if fixed.iter().any(|v| !form.evaluate(f, v).is_zero()) {
            continue;
        }
        if !(0..fixed.len()).all(|a| (a + 1..fixed.len()).all(|b| vanishes_on_span(form, f, &fixed[a], &fixed[b]))) {
            continue;
        }
        let free: Vec<usize> = (k + 1..4).collect();
        let candidates: Vec<Vec<FieldElement>> = free
            .iter()
            .map(|&j| {
                f.elements()
                    .filter(|&h| form.evaluate(f, &basis_vector(f, j, k, h)).is_zero())
                    .collect()
            })
            .collect();
        let mut chosen = fixed.clone();
        let mut hs = Vec::new();
        search(form, space, k, &free, &candidates, &mut chosen, &mut hs, &mut out)?;
    }
    Ok(out)
}

fn basis_vector(f: &FieldCtx, j: usize, k: usize, h: FieldElement) -> Vec4 {
    let mut v = [FieldElement::ZERO; 4];
    v[j] = FieldElement::ONE;
    v[k] = f.neg(h);
    v
}

#[allow(clippy::too_many_arguments)]
fn search(
    form: &HomogeneousForm,
    space: &Pg3,
    k: usize,
    free: &[usize],
    candidates: &[Vec<FieldElement>],
    chosen: &mut Vec<Vec4>,
    hs: &mut Vec<FieldElement>,
    out: &mut Vec<(ProjPlane, u32)>,
) -> Result<()> {
    let f = space.field();
    let depth = hs.len();
    if depth == free.len() {
        let mut dual = [FieldElement::ZERO; 4];
        dual[k] = FieldElement::ONE;
        for (&j, &h) in free.iter().zip(hs.iter()) {
            dual[j] = h;
        }
        let pl = space.plane(dual)?;
        if restrict_to_plane(form, space, &pl).is_zero() {
            let lin = HomogeneousForm::of_plane(&pl);
            let mut mult = 0;
            let mut g = form.clone();
            while let Some(next) = g.div_exact(f, &lin) {
                mult += 1;
                g = next;
                if g.degree() == 0 {
                    break;
                }
            }
            out.push((pl, mult));
        }
        return Ok(());
    }
    let j = free[depth];
    for &h in &candidates[depth] {
        let v = basis_vector(f, j, k, h);
        if chosen.iter().all(|u| vanishes_on_span(form, f, u, &v)) {
            chosen.push(v);
            hs.push(h);
            search(form, space, k, free, candidates, chosen, hs, out)?;
            hs.pop();
            chosen.pop();
        }
    }
    Ok(())
}

/// A uniformly random nonzero form of the given degree.
pub fn random_form(f: &FieldCtx, degree: u32, seed: u64) -> HomogeneousForm {
    random_form_with(f, degree, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Draws coefficients in monomial order, redrawing the all-zero outcome.
pub fn random_form_with<R: Rng>(f: &FieldCtx, degree: u32, rng: &mut R) -> HomogeneousForm {
    let monos = monomials::<4>(degree);
    loop {
        let terms = monos.iter().map(|&e| (e, FieldElement::from_raw(rng.gen_range(0..f.order()))));
        let g = Form::from_terms(f, degree, terms).expect("monomials have the right degree");
        if !g.is_zero() {
            return g;
        }
    }
}

/// A uniformly random form (possibly zero) supported on the given exponents.
pub fn random_form_on<R: Rng>(f: &FieldCtx, degree: u32, exps: &[[u8; 4]], rng: &mut R) -> HomogeneousForm {
    let terms = exps.iter().map(|&e| (e, FieldElement::from_raw(rng.gen_range(0..f.order()))));
    Form::from_terms(f, degree, terms).expect("exponents have the right degree")
}

/// A uniformly random nonzero field element.
pub fn random_nonzero<R: Rng>(f: &FieldCtx, rng: &mut R) -> FieldElement {
    FieldElement::from_raw(rng.gen_range(1..f.order()))
}

pub fn random_element<R: Rng>(f: &FieldCtx, rng: &mut R) -> FieldElement {
    FieldElement::from_raw(rng.gen_range(0..f.order()))
}

/// Points where `F` and all its partial derivatives vanish, among `candidates`.
pub fn singular_points_among(
    form: &HomogeneousForm,
    f: &FieldCtx,
    candidates: impl IntoIterator<Item = ProjPoint>,
) -> Vec<ProjPoint> {
    let grads: Vec<HomogeneousForm> = (0..4).map(|i| form.derivative(f, i)).collect();
    candidates
        .into_iter()
        .filter(|p| form.eval_point(f, p).is_zero() && grads.iter().all(|g| g.eval_point(f, p).is_zero()))
        .collect()
}

/// Lines along which `V(F)` is singular, i.e. lines of multiplicity at least 2.
///
/// A form of degree `d <= s` lies in the square of a line's ideal iff it and
/// its gradient vanish at every point of the line. Any line meets the four
/// coordinate planes in at least two distinct points, so the candidate lines
/// are spanned by pairs of singular points on those planes.
pub fn double_lines(form: &HomogeneousForm, space: &Pg3) -> Result<Vec<ProjLine>> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    let f = space.field();
    if form.degree() as usize > f.order() as usize {
        return Err(Error::OutOfRange("degree exceeds the field order".into()));
    }
    let mut cand: Vec<ProjPoint> = Vec::new();
    for k in 0..4 {
        let pl = space.coordinate_plane(k);
        cand.extend(singular_points_among(form, f, space.points_on_plane(&pl)));
    }
    cand.sort_by_key(|p| space.point_index(p));
    cand.dedup();
    let grads: Vec<HomogeneousForm> = (0..4).map(|i| form.derivative(f, i)).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (i, a) in cand.iter().enumerate() {
        for b in &cand[i + 1..] {
            let l = space.line_through(a, b)?;
            let idx = space.line_index(&l);
            if !seen.insert(idx) {
                continue;
            }
            let all_singular = space.points_on_line(&l).iter().all(|p| {
                form.eval_point(f, p).is_zero() && grads.iter().all(|g| g.eval_point(f, p).is_zero())
            });
            if all_singular {
                out.push(l);
            }
        }
    }
    out.sort_by_key(|l| space.line_index(l));
    Ok(out)
}

/// Univariate polynomials, little-endian coefficient vectors without trailing zeros.
mod upoly {
    use crate::field::{FieldCtx, FieldElement};

    pub fn trim(mut a: Vec<FieldElement>) -> Vec<FieldElement> {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn rem(f: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = f.inv(b[db]).expect("divisor is trimmed");
        while r.len() > db {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - db;
            if !lead.is_zero() {
                let c = f.mul(lead, inv);
                for (i, &bi) in b.iter().enumerate() {
                    r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
                }
            }
            r.pop();
        }
        trim(r)
    }

    pub fn monic(f: &FieldCtx, a: Vec<FieldElement>) -> Vec<FieldElement> {
        match a.last() {
            None => a,
            Some(&l) => {
                let inv = f.inv(l).unwrap();
                a.into_iter().map(|c| f.mul(c, inv)).collect()
            }
        }
    }

    pub fn gcd(f: &FieldCtx, a: Vec<FieldElement>, b: Vec<FieldElement>) -> Vec<FieldElement> {
        let (mut a, mut b) = (trim(a), trim(b));
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        monic(f, a)
    }
}

impl BinaryForm {
    /// `B(x, 1)` as a little-endian coefficient vector in `x`.
    fn dehomogenize(&self) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; self.degree as usize + 1];
        for (e, &c) in &self.terms {
            v[e[0] as usize] = c;
        }
        upoly::trim(v)
    }

    fn homogenize(poly: &[FieldElement], degree: u32) -> Self {
        let mut terms = BTreeMap::new();
        for (i, &c) in poly.iter().enumerate() {
            if !c.is_zero() {
                terms.insert([i as u8, (degree as usize - i) as u8], c);
            }
        }
        Form { degree, terms }
    }

    /// Monic (in `x` after removing powers of `y`) greatest common divisor.
    pub fn gcd(&self, f: &FieldCtx, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = (self.dehomogenize(), other.dehomogenize());
        let y_pow = (self.degree as usize + 1 - a.len()).min(other.degree as usize + 1 - b.len());
        let g = upoly::gcd(f, a, b);
        let degree = (g.len() - 1 + y_pow) as u32;
        Self::homogenize(&g, degree)
    }

    /// No repeated linear factor over the algebraic closure.
    ///
    /// A factor `l` with `l² | B` divides both partial derivatives; conversely a
    /// simple factor dividing `B_x` and `B_y` would divide `l_x C` and `l_y C`
    /// with `B = l C`, forcing `l | C`. This works in every characteristic.
    pub fn is_squarefree(&self, f: &FieldCtx) -> bool {
        if self.is_zero() {
            return false;
        }
        let g = self.gcd(f, &self.derivative(f, 0)).gcd(f, &self.derivative(f, 1));
        g.degree() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn setup(q: u32) -> (Arc<FieldCtx>, Pg3) {
        let f = Arc::new(FieldCtx::new(q).unwrap());
        (f.clone(), Pg3::new(f))
    }

    fn mono(f: &FieldCtx, e: [u8; 4], c: i64) -> HomogeneousForm {
        Form::monomial(e, f.from_int(c))
    }

    fn sum(f: &FieldCtx, parts: &[HomogeneousForm]) -> HomogeneousForm {
        parts.iter().skip(1).fold(parts[0].clone(), |acc, g| acc.add(f, g).unwrap())
    }

    #[test]
    fn evaluate_examples() {
        let (f, g) = setup(2);
        let x0c = mono(&f, [3, 0, 0, 0], 1);
        assert!(x0c.eval_point(&f, &g.point_at(g.num_points() - 1)).is_zero());
        let p = g.point([0, 1, 0, 0].map(|x| f.from_int(x))).unwrap();
        assert!(x0c.eval_point(&f, &p).is_zero());
        assert!(x0c.eval_point(&f, &g.point_at(0)).is_one());
        let xyz = mono(&f, [1, 1, 1, 0], 1);
        let ones = g.point([1, 1, 1, 1].map(|x| f.from_int(x))).unwrap();
        assert!(xyz.eval_point(&f, &ones).is_one());
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials::<4>(3).len(), 20);
        assert_eq!(monomials::<4>(2).len(), 10);
        assert_eq!(monomials::<3>(2).len(), 6);
        assert_eq!(monomials::<4>(3)[0], [3, 0, 0, 0]);
    }

    #[test]
    fn intersection_examples() {
        let s = HermitianSurface::standard(2).unwrap();
        let f = s.field().clone();
        let tangent = sum(&f, &[mono(&f, [1, 0, 0, 0], 1), mono(&f, [0, 1, 0, 0], 1)]);
        assert_eq!(intersection_count(&tangent, &s).unwrap(), 13);
        assert_eq!(intersection_count(&mono(&f, [1, 0, 0, 0], 1), &s).unwrap(), 9);
        assert!(matches!(intersection_count(&Form::zero(3), &s), Err(Error::ZeroForm)));
    }

    #[test]
    fn restriction_examples() {
        let (f, g) = setup(3);
        let x0 = mono(&f, [1, 0, 0, 0], 1);
        let prod = x0.mul(&f, &random_form(&f, 2, 4));
        assert!(restrict_to_plane(&prod, &g, &g.coordinate_plane(0)).is_zero());
        let x1c = mono(&f, [0, 3, 0, 0], 1);
        let r = restrict_to_plane(&x1c, &g, &g.coordinate_plane(0));
        assert!(!r.is_zero());
        assert_eq!(r.degree(), 3);
    }

    #[test]
    fn restriction_compatible_with_evaluation() {
        let (f, g) = setup(3);
        let form = random_form(&f, 3, 11);
        for pl in g.planes().step_by(37) {
            let t = restrict_to_plane(&form, &g, &pl);
            let b = g.plane_basis(&pl);
            for y in [[1, 0, 0], [1, 2, 5], [0, 1, 7], [3, 3, 1]] {
                let y = y.map(FieldElement::from_raw);
                let x: Vec4 = std::array::from_fn(|i| {
                    (0..3).fold(FieldElement::ZERO, |acc, j| f.add(acc, f.mul(y[j], b[j][i])))
                });
                assert_eq!(form.evaluate(&f, &x), t.evaluate(&f, &y));
            }
        }
    }

    #[test]
    fn linear_factor_examples() {
        let (f, g) = setup(2);
        let x0x0x1 = mono(&f, [2, 1, 0, 0], 1);
        assert_eq!(
            linear_factors(&x0x0x1, &g).unwrap(),
            vec![(g.coordinate_plane(0), 2), (g.coordinate_plane(1), 1)]
        );
        let herm = sum(
            &f,
            &[mono(&f, [3, 0, 0, 0], 1), mono(&f, [0, 3, 0, 0], 1), mono(&f, [0, 0, 3, 0], 1), mono(&f, [0, 0, 0, 3], 1)],
        );
        assert!(linear_factors(&herm, &g).unwrap().is_empty());
        let brute: Vec<_> = g.planes().filter(|pl| restrict_to_plane(&herm, &g, pl).is_zero()).collect();
        assert!(brute.is_empty());
    }

    #[test]
    fn linear_factors_match_plane_scan() {
        for q in [2u32, 3] {
            let (f, g) = setup(q);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for trial in 0..12 {
                let h = loop {
                    let h = random_form_with(&f, 1, &mut rng);
                    if !h.is_zero() {
                        break h;
                    }
                };
                let form = match trial % 3 {
                    0 => h.mul(&f, &random_form_with(&f, 2, &mut rng)),
                    1 => h.mul(&f, &h).mul(&f, &random_form_with(&f, 1, &mut rng)),
                    _ => random_form_with(&f, 3, &mut rng),
                };
                let fast: Vec<ProjPlane> = linear_factors(&form, &g).unwrap().into_iter().map(|(p, _)| p).collect();
                let brute: Vec<ProjPlane> = g.planes().filter(|pl| restrict_to_plane(&form, &g, pl).is_zero()).collect();
                assert_eq!(fast, brute);
                if trial % 3 != 2 {
                    let hp = g.plane(std::array::from_fn(|i| h.coeff(&{
                        let mut e = [0u8; 4];
                        e[i] = 1;
                        e
                    })))
                    .unwrap();
                    assert!(fast.contains(&hp));
                }
            }
        }
    }

    #[test]
    fn line_on_form_examples() {
        let (f, g) = setup(2);
        let l = g.coordinate_line(2, 3);
        let a = sum(&f, &[mono(&f, [2, 0, 1, 0], 1), mono(&f, [0, 2, 0, 1], 1)]);
        assert!(line_on_form(&a, &g, &l));
        assert!(!line_on_form(&mono(&f, [3, 0, 0, 0], 1), &g, &l));
        let planes: Vec<_> = g.book_of_planes(&l).into_iter().take(3).collect();
        assert!(line_on_form(&HomogeneousForm::of_planes(&f, &planes), &g, &l));
    }

    #[test]
    fn line_on_form_matches_point_check() {
        for q in [2u32, 3] {
            let (f, g) = setup(q);
            let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
            for _ in 0..20 {
                let form = random_form_with(&f, 3, &mut rng);
                for l in g.lines().step_by(13) {
                    let by_points = g.points_on_line(&l).iter().all(|p| form.eval_point(&f, p).is_zero());
                    assert_eq!(line_on_form(&form, &g, &l), by_points);
                }
            }
        }
    }

    #[test]
    fn multiplicity_examples() {
        let (f, g) = setup(3);
        let l = g.coordinate_line(2, 3);
        let d = sum(&f, &[mono(&f, [0, 0, 2, 0], 1), mono(&f, [0, 0, 1, 1], 2)]);
        let e = mono(&f, [0, 0, 0, 2], 1);
        let x0 = mono(&f, [1, 0, 0, 0], 2);
        let x1 = mono(&f, [0, 1, 0, 0], 2);
        let form = d.mul(&f, &x0).add(&f, &e.mul(&f, &x1)).unwrap();
        assert_eq!(line_multiplicity(&form, &g, &l).unwrap(), 2);
        let a = sum(&f, &[mono(&f, [2, 0, 1, 0], 1), mono(&f, [0, 2, 0, 1], 1)]);
        assert_eq!(line_multiplicity(&a, &g, &l).unwrap(), 1);
        let b = sum(&f, &[mono(&f, [1, 0, 2, 0], 1), mono(&f, [0, 0, 0, 3], 1)]);
        assert_eq!(line_multiplicity(&b, &g, &l).unwrap(), 2);
        assert!(matches!(line_multiplicity(&mono(&f, [3, 0, 0, 0], 1), &g, &l), Err(Error::LineNotOnForm)));
    }

    #[test]
    fn multiplicity_independent_of_adapted_map() {
        let (f, g) = setup(3);
        let l = g.coordinate_line(2, 3);
        let b = sum(&f, &[mono(&f, [1, 0, 2, 0], 1), mono(&f, [0, 1, 1, 1], 1)]);
        let m1 = g.adapted_coords(&l, None).unwrap();
        let other = g.line([0, 0, 1, 0].map(|x| f.from_int(x)), [1, 0, 0, 1].map(|x| f.from_int(x))).unwrap();
        let m2 = g.adapted_coords(&l, Some(&other)).unwrap();
        assert_eq!(valuation_x2x3(&b.pullback(&f, &m1)), valuation_x2x3(&b.pullback(&f, &m2)));
    }

    #[test]
    fn pullback_round_trip() {
        let (f, g) = setup(3);
        let form = random_form(&f, 3, 9);
        let id = g.identity();
        assert_eq!(form.pullback(&f, &id), form);
        let l = g.line([1, 2, 0, 1].map(|x| f.from_int(x)), [0, 1, 1, 1].map(|x| f.from_int(x))).unwrap();
        let m = g.adapted_coords(&l, None).unwrap();
        let back = form.pullback(&f, &m).pullback(&f, &g.inverse(&m));
        assert_eq!(back, form);
    }

    #[test]
    fn random_form_is_deterministic() {
        let f = FieldCtx::new(4).unwrap();
        let a = random_form(&f, 3, 42);
        assert_eq!(a, random_form(&f, 3, 42));
        assert!(a.num_terms() <= 20 && !a.is_zero());
    }

    #[test]
    fn division() {
        let (f, g) = setup(3);
        let a = random_form(&f, 2, 1);
        let b = random_form(&f, 1, 2);
        let p = a.mul(&f, &b);
        assert_eq!(p.div_exact(&f, &b).unwrap(), a);
        assert_eq!(p.div_exact(&f, &a).unwrap(), b);
        let c = random_form(&f, 3, 3);
        let x0 = mono(&f, [1, 0, 0, 0], 1);
        if !restrict_to_plane(&c, &g, &g.coordinate_plane(0)).is_zero() {
            assert!(c.div_exact(&f, &x0).is_none());
        }
    }

    #[test]
    fn binary_gcd_and_squarefree() {
        let f = FieldCtx::new(2).unwrap();
        let x = BinaryForm::linear([f.one(), f.zero()]);
        let y = BinaryForm::linear([f.zero(), f.one()]);
        let xy = BinaryForm::linear([f.one(), f.one()]);
        assert!(x.mul(&f, &y).mul(&f, &xy).is_squarefree(&f));
        assert!(!x.mul(&f, &x).mul(&f, &y).is_squarefree(&f));
        assert!(!xy.mul(&f, &xy).is_squarefree(&f));
        assert!(!y.mul(&f, &y).is_squarefree(&f));
        let g = x.mul(&f, &y).mul(&f, &y).gcd(&f, &y.mul(&f, &xy));
        assert_eq!(g, y);
        let f3 = FieldCtx::new(3).unwrap();
        let x = BinaryForm::linear([f3.one(), f3.zero()]);
        let y = BinaryForm::linear([f3.zero(), f3.one()]);
        let cube = x.add(&f3, &y).unwrap().pow(&f3, 3);
        assert!(!cube.is_squarefree(&f3));
        let q = x.mul(&f3, &x).add(&f3, &y.mul(&f3, &y)).unwrap();
        assert!(q.is_squarefree(&f3));
    }

    #[test]
    fn double_line_detection() {
        let (f, g) = setup(2);
        let b = sum(&f, &[mono(&f, [1, 0, 2, 0], 1), mono(&f, [0, 1, 0, 2], 1)]);
        assert_eq!(double_lines(&b, &g).unwrap(), vec![g.coordinate_line(2, 3)]);
        let smooth = sum(
            &f,
            &[mono(&f, [3, 0, 0, 0], 1), mono(&f, [0, 3, 0, 0], 1), mono(&f, [0, 0, 3, 0], 1), mono(&f, [0, 0, 0, 3], 1)],
        );
        assert!(double_lines(&smooth, &g).unwrap().is_empty());
        for l in g.lines().step_by(29) {
            let on = line_on_form(&b, &g, &l);
            let double = on && line_multiplicity(&b, &g, &l).unwrap() >= 2;
            assert_eq!(double, l == g.coordinate_line(2, 3));
        }
    }
}
