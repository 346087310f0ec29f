//! Cubic surfaces through a line in normal position.
//!
//! After moving a line `ℓ ⊂ V(F)` to `V(x2, x3)` a cubic reads
//! `A x0² + B' x0x1 + C x1² + D' x0 + E' x1 + K` with `A, B', C` linear,
//! `D', E'` quadratic and `K` cubic in `x2, x3`. In odd characteristic the
//! stored `B, D, E` are `B'/2, D'/2, E'/2`, so that the symmetric matrix
//! `[[A,B,D],[B,C,E],[D,E,K]]` is the Gram matrix of `F` as a conic in
//! `x0, x1` over `GF(q²)(x2, x3)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::forms::{self, BinaryForm, HomogeneousForm, TernaryForm};
use crate::projspace::{Pg3, ProjLine, ProjPlane, Projectivity};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicNF {
    pub a: BinaryForm,
    pub b: BinaryForm,
    pub c: BinaryForm,
    pub d: BinaryForm,
    pub e: BinaryForm,
    pub k: BinaryForm,
    pub even: bool,
}

fn half(f: &FieldCtx) -> FieldElement {
    f.inv(f.from_int(2)).expect("odd characteristic")
}

/// Coefficients of a cubic already in normal position (`V(x2,x3) ⊂ V(g)`).
pub fn split_normal_position(f: &FieldCtx, g: &HomogeneousForm) -> Result<CubicNF> {
    if g.degree() != 3 {
        return Err(Error::WrongDegree { expected: 3, got: g.degree() });
    }
    if g.is_zero() {
        return Err(Error::ZeroForm);
    }
    let mut parts: [Vec<([u8; 2], FieldElement)>; 6] = Default::default();
    for (&e, &c) in g.terms() {
        let slot = match (e[0], e[1]) {
            (2, 0) => 0,
            (1, 1) => 1,
            (0, 2) => 2,
            (1, 0) => 3,
            (0, 1) => 4,
            (0, 0) => 5,
            _ => return Err(Error::LineNotOnForm),
        };
        parts[slot].push(([e[2], e[3]], c));
    }
    let even = f.is_even_char();
    let degs = [1, 1, 1, 2, 2, 3];
    let mut out: Vec<BinaryForm> = Vec::with_capacity(6);
    for (i, terms) in parts.into_iter().enumerate() {
        let form = BinaryForm::from_terms(f, degs[i], terms)?;
        out.push(if !even && matches!(i, 1 | 3 | 4) { form.scale(f, half(f)) } else { form });
    }
    let mut it = out.into_iter();
    Ok(CubicNF {
        a: it.next().unwrap(),
        b: it.next().unwrap(),
        c: it.next().unwrap(),
        d: it.next().unwrap(),
        e: it.next().unwrap(),
        k: it.next().unwrap(),
        even,
    })
}

/// Normal form of `F` along `l`, with the projectivity used.
pub fn normal_form_with(
    form: &HomogeneousForm,
    space: &Pg3,
    l: &ProjLine,
    l2: Option<&ProjLine>,
) -> Result<(CubicNF, Projectivity)> {
    if form.degree() != 3 {
        return Err(Error::WrongDegree { expected: 3, got: form.degree() });
    }
    if !forms::line_on_form(form, space, l) {
        return Err(Error::LineNotOnForm);
    }
    let m = space.adapted_coords(l, l2)?;
    let g = form.pullback(space.field(), &m);
    Ok((split_normal_position(space.field(), &g)?, m))
}

pub fn normal_form(form: &HomogeneousForm, space: &Pg3, l: &ProjLine) -> Result<CubicNF> {
    Ok(normal_form_with(form, space, l, None)?.0)
}

fn lift(b: &BinaryForm, pattern: [u8; 2], c: FieldElement, f: &FieldCtx) -> HomogeneousForm {
    let terms = b.terms().iter().map(|(e, &v)| ([pattern[0], pattern[1], e[0], e[1]], f.mul(v, c)));
    HomogeneousForm::from_terms(f, 3, terms).expect("degrees add up")
}

impl CubicNF {
    /// Re-expands the normal form into the cubic in adapted coordinates.
    pub fn reconstruct(&self, f: &FieldCtx) -> HomogeneousForm {
        let two = if self.even { FieldElement::ONE } else { f.from_int(2) };
        let parts = [
            lift(&self.a, [2, 0], FieldElement::ONE, f),
            lift(&self.b, [1, 1], two, f),
            lift(&self.c, [0, 2], FieldElement::ONE, f),
            lift(&self.d, [1, 0], two, f),
            lift(&self.e, [0, 1], two, f),
            lift(&self.k, [0, 0], FieldElement::ONE, f),
        ];
        parts.iter().fold(HomogeneousForm::zero(3), |acc, p| acc.add(f, p).unwrap())
    }

    /// The symmetric matrix `[[A,B,D],[B,C,E],[D,E,K]]`.
    pub fn matrix(&self) -> [[BinaryForm; 3]; 3] {
        [
            [self.a.clone(), self.b.clone(), self.d.clone()],
            [self.b.clone(), self.c.clone(), self.e.clone()],
            [self.d.clone(), self.e.clone(), self.k.clone()],
        ]
    }

    /// The normal form with the roles of `x0` and `x1` exchanged.
    pub fn swapped(&self) -> CubicNF {
        CubicNF {
            a: self.c.clone(),
            b: self.b.clone(),
            c: self.a.clone(),
            d: self.e.clone(),
            e: self.d.clone(),
            k: self.k.clone(),
            even: self.even,
        }
    }

    /// `det M_F` in odd characteristic, `AE² + BDE + CD² + B²K` in even.
    pub fn invariant(&self, f: &FieldCtx) -> BinaryForm {
        if self.even {
            quintic_invariant(f, self).expect("even characteristic")
        } else {
            det_mf(f, self).expect("odd characteristic")
        }
    }
}

/// `ACK + 2BDE − AE² − CD² − B²K`.
pub fn det_mf(f: &FieldCtx, nf: &CubicNF) -> Result<BinaryForm> {
    if nf.even {
        return Err(Error::WrongCharacteristic("odd"));
    }
    let CubicNF { a, b, c, d, e, k, .. } = nf;
    let two = f.from_int(2);
    let ack = a.mul(f, c).mul(f, k);
    let bde = b.mul(f, d).mul(f, e).scale(f, two);
    let ae2 = a.mul(f, e).mul(f, e);
    let cd2 = c.mul(f, d).mul(f, d);
    let b2k = b.mul(f, b).mul(f, k);
    ack.add(f, &bde)?.sub(f, &ae2)?.sub(f, &cd2)?.sub(f, &b2k)
}

/// `AE² + BDE + CD² + B²K`.
pub fn quintic_invariant(f: &FieldCtx, nf: &CubicNF) -> Result<BinaryForm> {
    if !nf.even {
        return Err(Error::WrongCharacteristic("even"));
    }
    let CubicNF { a, b, c, d, e, k, .. } = nf;
    let ae2 = a.mul(f, e).mul(f, e);
    let bde = b.mul(f, d).mul(f, e);
    let cd2 = c.mul(f, d).mul(f, d);
    let b2k = b.mul(f, b).mul(f, k);
    ae2.add(f, &bde)?.add(f, &cd2)?.add(f, &b2k)
}

/// Whether the conic `V(g)` is a union of lines over the algebraic closure.
///
/// Variables are `(y0, y1, y2)`. In odd characteristic this is the vanishing
/// of the Gram determinant. In even characteristic `g` is a square iff its
/// cross terms vanish, and otherwise the only candidate singular point is
/// `[e : d : b]`, which lies on `g` iff `ae² + bde + cd² + kb² = 0`.
pub fn conic_is_line_union(f: &FieldCtx, g: &TernaryForm) -> Result<bool> {
    if g.degree() != 2 {
        return Err(Error::WrongDegree { expected: 2, got: g.degree() });
    }
    if g.is_zero() {
        return Err(Error::ZeroForm);
    }
    let a = g.coeff(&[2, 0, 0]);
    let b = g.coeff(&[1, 1, 0]);
    let c = g.coeff(&[0, 2, 0]);
    let d = g.coeff(&[1, 0, 1]);
    let e = g.coeff(&[0, 1, 1]);
    let k = g.coeff(&[0, 0, 2]);
    if f.is_even_char() {
        if b.is_zero() && d.is_zero() && e.is_zero() {
            return Ok(true);
        }
        let terms = [
            f.mul(a, f.mul(e, e)),
            f.mul(b, f.mul(d, e)),
            f.mul(c, f.mul(d, d)),
            f.mul(k, f.mul(b, b)),
        ];
        Ok(terms.into_iter().fold(FieldElement::ZERO, |acc, x| f.add(acc, x)).is_zero())
    } else {
        let h = half(f);
        let (b, d, e) = (f.mul(b, h), f.mul(d, h), f.mul(e, h));
        let m = [[a, b, d], [b, c, e], [d, e, k]];
        Ok(det3(f, &m).is_zero())
    }
}

fn det3(f: &FieldCtx, m: &[[FieldElement; 3]; 3]) -> FieldElement {
    let minor = |i: usize, j: usize, k: usize, l: usize| f.sub(f.mul(m[1][i], m[2][j]), f.mul(m[1][k], m[2][l]));
    let t0 = f.mul(m[0][0], minor(1, 2, 2, 1));
    let t1 = f.mul(m[0][1], minor(0, 2, 2, 0));
    let t2 = f.mul(m[0][2], minor(0, 1, 1, 0));
    f.add(f.sub(t0, t1), t2)
}

/// How the residual conic of a book plane was classified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualKind {
    /// The plane lies in `V(F)`.
    Contained,
    LineUnion,
    Irreducible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BookPlaneReport {
    pub plane: ProjPlane,
    pub residual: TernaryForm,
    pub kind: ResidualKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TEllReport {
    pub axis: ProjLine,
    /// Book planes whose section is a union of lines.
    pub members: Vec<ProjPlane>,
    pub planes: Vec<BookPlaneReport>,
    pub invariant: BinaryForm,
    pub invariant_nonzero: bool,
    /// `F` has no linear factor; for a cubic this is irreducibility over `GF(q²)`.
    pub irreducible: bool,
    pub even: bool,
}

impl TEllReport {
    /// Whether the hypotheses of the `|T_ℓ| ≤ 5` bound hold.
    pub fn bound_applies(&self) -> bool {
        self.invariant_nonzero && (!self.even || self.irreducible)
    }
}

/// Book planes of `l` on which `V(F)` cuts a union of lines.
///
/// Each plane is parametrized by the rows of `l` and one more point `w`, so
/// the restriction is divisible by the last variable and the quotient is the
/// residual conic.
pub fn t_ell(form: &HomogeneousForm, space: &Pg3, l: &ProjLine) -> Result<TEllReport> {
    let f = space.field();
    let nf = normal_form(form, space, l)?;
    let invariant = nf.invariant(f);
    let irreducible = forms::linear_factors(form, space)?.is_empty();
    let t = TernaryForm::monomial([0, 0, 1], FieldElement::ONE);
    let [r0, r1] = *l.rows();
    let mut planes = Vec::new();
    for pl in space.book_of_planes(l) {
        let w = space
            .points_on_plane(&pl)
            .into_iter()
            .find(|p| !space.point_on_line(p, l))
            .expect("plane is larger than its axis");
        let w = *w.coords();
        let images: [[FieldElement; 3]; 4] = std::array::from_fn(|i| [r0[i], r1[i], w[i]]);
        let restricted = form.substitute(f, &images);
        let (residual, kind) = if restricted.is_zero() {
            (TernaryForm::zero(2), ResidualKind::Contained)
        } else {
            let g = restricted
                .div_exact(f, &t)
                .ok_or_else(|| Error::Consistency("axis is not a component of the plane section".into()))?;
            let kind = if conic_is_line_union(f, &g)? { ResidualKind::LineUnion } else { ResidualKind::Irreducible };
            (g, kind)
        };
        planes.push(BookPlaneReport { plane: pl, residual, kind });
    }
    let members = planes.iter().filter(|p| p.kind != ResidualKind::Irreducible).map(|p| p.plane).collect();
    Ok(TEllReport {
        axis: *l,
        members,
        planes,
        invariant_nonzero: !invariant.is_zero(),
        invariant,
        irreducible,
        even: nf.even,
    })
}

/// Exact quotients `(AE − BD)/(AC − B²)` and `(CD − BE)/(AC − B²)`, if both exist.
pub fn divides_check(f: &FieldCtx, nf: &CubicNF) -> Option<(BinaryForm, BinaryForm)> {
    let CubicNF { a, b, c, d, e, .. } = nf;
    let disc = a.mul(f, c).sub(f, &b.mul(f, b)).ok()?;
    let num1 = a.mul(f, e).sub(f, &b.mul(f, d)).ok()?;
    let num2 = c.mul(f, d).sub(f, &b.mul(f, e)).ok()?;
    Some((num1.div_exact(f, &disc)?, num2.div_exact(f, &disc)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    Reducible(Vec<(ProjPlane, u32)>),
    DoubleLine(ProjLine),
    InvariantNonzero,
}

/// For a cubic through skew lines `l1, l2`: when the invariant of the normal
/// form with `l1 = V(x0,x1)` and `l2 = V(x2,x3)` vanishes, `F` must be
/// reducible or contain a double line. Anything else is a consistency error.
pub fn dichotomy_check(form: &HomogeneousForm, space: &Pg3, l1: &ProjLine, l2: &ProjLine) -> Result<Dichotomy> {
    if !forms::line_on_form(form, space, l1) || !forms::line_on_form(form, space, l2) {
        return Err(Error::LineNotOnForm);
    }
    let (nf, _) = normal_form_with(form, space, l2, Some(l1))?;
    if !nf.k.is_zero() {
        return Err(Error::Consistency("second line not in position V(x0, x1)".into()));
    }
    if !nf.invariant(space.field()).is_zero() {
        return Ok(Dichotomy::InvariantNonzero);
    }
    let factors = forms::linear_factors(form, space)?;
    if !factors.is_empty() {
        return Ok(Dichotomy::Reducible(factors));
    }
    if let Some(l) = forms::double_lines(form, space)?.into_iter().next() {
        return Ok(Dichotomy::DoubleLine(l));
    }
    Err(Error::Consistency(format!(
        "invariant vanishes but {} is neither reducible nor singular along a line",
        form.display(space.field())
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn setup(q: u32) -> (Arc<FieldCtx>, Pg3) {
        let f = Arc::new(FieldCtx::new(q).unwrap());
        (f.clone(), Pg3::new(f))
    }

    fn form(f: &FieldCtx, terms: &[([u8; 4], i64)]) -> HomogeneousForm {
        HomogeneousForm::from_terms(f, 3, terms.iter().map(|&(e, c)| (e, f.from_int(c)))).unwrap()
    }

    fn bin(f: &FieldCtx, d: u32, terms: &[([u8; 2], i64)]) -> BinaryForm {
        BinaryForm::from_terms(f, d, terms.iter().map(|&(e, c)| (e, f.from_int(c)))).unwrap()
    }

    /// Leibniz expansion over the six permutations.
    fn leibniz(f: &FieldCtx, m: &[[BinaryForm; 3]; 3]) -> BinaryForm {
        let perms = [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)];
        let mut acc = BinaryForm::zero(5);
        for (p, sign) in perms {
            let t = m[0][p[0]].mul(f, &m[1][p[1]]).mul(f, &m[2][p[2]]).scale(f, f.from_int(sign));
            acc = acc.add(f, &t).unwrap();
        }
        acc
    }

    #[test]
    fn even_normal_form_example() {
        let (f, g) = setup(2);
        let cubic = form(&f, &[([2, 0, 1, 0], 1), ([0, 2, 0, 1], 1)]);
        let nf = normal_form(&cubic, &g, &g.coordinate_line(2, 3)).unwrap();
        assert_eq!(nf.a, bin(&f, 1, &[([1, 0], 1)]));
        assert!(nf.b.is_zero() && nf.d.is_zero() && nf.e.is_zero() && nf.k.is_zero());
        assert_eq!(nf.c, bin(&f, 1, &[([0, 1], 1)]));
        assert!(quintic_invariant(&f, &nf).unwrap().is_zero());
        assert!(det_mf(&f, &nf).is_err());
    }

    #[test]
    fn split_keeps_coefficients_with_empty_leading_parts() {
        // regression: an optimiser bug once corrupted these coefficients
        let f = FieldCtx::new(3).unwrap();
        let fe = |v| f.element(v).unwrap();
        let terms = [
            ([0, 1, 0, 2], 6),
            ([0, 1, 1, 1], 7),
            ([0, 1, 2, 0], 5),
            ([1, 0, 0, 2], 7),
            ([1, 0, 1, 1], 7),
            ([1, 0, 2, 0], 8),
        ];
        let g = HomogeneousForm::from_terms(&f, 3, terms.iter().map(|&(e, v)| (e, fe(v)))).unwrap();
        let nf = split_normal_position(&f, &g).unwrap();
        assert!(nf.a.is_zero() && nf.b.is_zero() && nf.c.is_zero() && nf.k.is_zero());
        assert_eq!(nf.reconstruct(&f), g);
    }

    #[test]
    fn odd_normal_form_halves_cross_terms() {
        let (f, g) = setup(3);
        let cubic = form(&f, &[([2, 0, 1, 0], 1), ([1, 0, 0, 2], 2)]);
        let nf = normal_form(&cubic, &g, &g.coordinate_line(2, 3)).unwrap();
        assert_eq!(nf.a, bin(&f, 1, &[([1, 0], 1)]));
        assert_eq!(nf.d, bin(&f, 2, &[([0, 2], 1)]));
        assert!(nf.b.is_zero() && nf.c.is_zero() && nf.e.is_zero() && nf.k.is_zero());
        assert_eq!(nf.reconstruct(&f), cubic);
        assert!(quintic_invariant(&f, &nf).is_err());
        let miss = form(&f, &[([3, 0, 0, 0], 1)]);
        assert!(matches!(normal_form(&miss, &g, &g.coordinate_line(2, 3)), Err(Error::LineNotOnForm)));
    }

    #[test]
    fn determinant_examples() {
        let (f, _) = setup(3);
        let x2 = bin(&f, 1, &[([1, 0], 1)]);
        let x3 = bin(&f, 1, &[([0, 1], 1)]);
        let mut nf = CubicNF {
            a: x2.clone(),
            b: BinaryForm::zero(1),
            c: x3.clone(),
            d: BinaryForm::zero(2),
            e: BinaryForm::zero(2),
            k: BinaryForm::zero(3),
            even: false,
        };
        assert!(det_mf(&f, &nf).unwrap().is_zero());
        nf.d = x3.mul(&f, &x3);
        let det = det_mf(&f, &nf).unwrap();
        assert_eq!(det, bin(&f, 5, &[([0, 5], -1)]));
        assert_eq!(det, leibniz(&f, &nf.matrix()));
        assert_eq!(det_mf(&f, &nf.swapped()).unwrap(), det);

        let (f2, _) = setup(2);
        let x2 = bin(&f2, 1, &[([1, 0], 1)]);
        let x3 = bin(&f2, 1, &[([0, 1], 1)]);
        let nf = CubicNF {
            a: x2,
            b: BinaryForm::zero(1),
            c: x3.clone(),
            d: x3.mul(&f2, &x3),
            e: BinaryForm::zero(2),
            k: BinaryForm::zero(3),
            even: true,
        };
        assert_eq!(quintic_invariant(&f2, &nf).unwrap(), bin(&f2, 5, &[([0, 5], 1)]));
    }

    #[test]
    fn determinant_matches_leibniz_on_random_cubics() {
        let (f, g) = setup(3);
        let l = g.coordinate_line(2, 3);
        for seed in 0..50 {
            let mut cubic = forms::random_form(&f, 3, seed);
            for e in [[3, 0, 0, 0], [2, 1, 0, 0], [1, 2, 0, 0], [0, 3, 0, 0]] {
                cubic = cubic.sub(&f, &HomogeneousForm::monomial(e, cubic.coeff(&e))).unwrap();
            }
            let nf = normal_form(&cubic, &g, &l).unwrap();
            assert_eq!(nf.reconstruct(&f), cubic);
            assert_eq!(det_mf(&f, &nf).unwrap(), leibniz(&f, &nf.matrix()));
        }
    }

    #[test]
    fn conic_examples() {
        let f4 = FieldCtx::new(2).unwrap();
        let xy = TernaryForm::monomial([1, 1, 0], f4.one());
        assert!(conic_is_line_union(&f4, &xy).unwrap());
        let g = TernaryForm::from_terms(&f4, 2, [([2, 0, 0], f4.one()), ([1, 1, 0], f4.one()), ([0, 2, 0], f4.one())]).unwrap();
        assert!(conic_is_line_union(&f4, &g).unwrap());
        let t = f4.t();
        let l1 = TernaryForm::linear([f4.one(), t, f4.zero()]);
        let l2 = TernaryForm::linear([f4.one(), f4.add(t, f4.one()), f4.zero()]);
        assert_eq!(l1.mul(&f4, &l2), g);
        let smooth2 = TernaryForm::from_terms(&f4, 2, [([1, 0, 1], f4.one()), ([0, 2, 0], f4.one())]).unwrap();
        assert!(!conic_is_line_union(&f4, &smooth2).unwrap());

        let f9 = FieldCtx::new(3).unwrap();
        let smooth = TernaryForm::from_terms(&f9, 2, [([1, 0, 1], f9.one()), ([0, 2, 0], f9.from_int(-1))]).unwrap();
        assert!(!conic_is_line_union(&f9, &smooth).unwrap());
        assert!(conic_is_line_union(&f9, &TernaryForm::monomial([1, 1, 0], f9.one())).unwrap());
        assert!(conic_is_line_union(&f9, &TernaryForm::monomial([2, 0, 0], f9.one())).unwrap());
        assert!(matches!(conic_is_line_union(&f9, &TernaryForm::zero(2)), Err(Error::ZeroForm)));
    }

    #[test]
    fn conic_test_against_point_counts() {
        // Products of lines are always recognised. For random conics, an
        // irreducible one has exactly s+1 rational points, and 1 or 2s+1
        // points force a line pair.
        for q in [2u32, 3] {
            let f = FieldCtx::new(q).unwrap();
            let s = f.order() as usize;
            let lines: Vec<TernaryForm> = {
                let mut v = Vec::new();
                for a in f.elements() {
                    for b in f.elements() {
                        v.push(TernaryForm::linear([f.one(), a, b]));
                    }
                    v.push(TernaryForm::linear([f.zero(), f.one(), a]));
                }
                v.push(TernaryForm::linear([f.zero(), f.zero(), f.one()]));
                v
            };
            for (i, l1) in lines.iter().enumerate().step_by(3) {
                for l2 in lines[i..].iter().step_by(5) {
                    assert!(conic_is_line_union(&f, &l1.mul(&f, l2)).unwrap());
                }
            }
            let pts: Vec<[FieldElement; 3]> = lines.iter().map(|l| {
                let c = l.terms();
                let mut v = [FieldElement::ZERO; 3];
                for (e, &x) in c {
                    v[e.iter().position(|&k| k == 1).unwrap()] = x;
                }
                v
            }).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
            let monos = forms::monomials::<3>(2);
            for _ in 0..300 {
                let g = TernaryForm::from_terms(&f, 2, monos.iter().map(|&e| (e, forms::random_element(&f, &mut rng)))).unwrap();
                if g.is_zero() {
                    continue;
                }
                let n = pts.iter().filter(|x| g.evaluate(&f, x).is_zero()).count();
                let union = conic_is_line_union(&f, &g).unwrap();
                if !union {
                    assert_eq!(n, s + 1, "{}", g.display(&f));
                }
                if n == 1 || n == 2 * s + 1 {
                    assert!(union, "{}", g.display(&f));
                }
            }
        }
    }

    #[test]
    fn t_ell_of_plane_triple_is_whole_book() {
        let (f, g) = setup(2);
        let l = g.coordinate_line(2, 3);
        let planes: Vec<_> = g.book_of_planes(&l).into_iter().take(3).collect();
        let cubic = HomogeneousForm::of_planes(&f, &planes);
        let rep = t_ell(&cubic, &g, &l).unwrap();
        assert_eq!(rep.members.len(), 5);
        assert!(!rep.invariant_nonzero);
        assert!(!rep.irreducible);
        assert_eq!(rep.planes.iter().filter(|p| p.kind == ResidualKind::Contained).count(), 3);
    }

    #[test]
    fn t_ell_bound_on_random_cubics() {
        for q in [3u32, 4] {
            let (f, g) = setup(q);
            let l = g.coordinate_line(2, 3);
            for seed in 0..20 {
                let mut cubic = forms::random_form(&f, 3, 1000 + seed);
                for e in [[3, 0, 0, 0], [2, 1, 0, 0], [1, 2, 0, 0], [0, 3, 0, 0]] {
                    cubic = cubic.sub(&f, &HomogeneousForm::monomial(e, cubic.coeff(&e))).unwrap();
                }
                let rep = t_ell(&cubic, &g, &l).unwrap();
                if rep.bound_applies() {
                    assert!(rep.members.len() <= 5, "{}", cubic.display(&f));
                }
            }
        }
    }

    #[test]
    fn dichotomy_examples() {
        for q in [2u32, 3] {
            let (f, g) = setup(q);
            let l1 = g.coordinate_line(0, 1);
            let l2 = g.coordinate_line(2, 3);
            let cubic = form(&f, &[([2, 0, 1, 0], 1)]);
            assert!(matches!(dichotomy_check(&cubic, &g, &l1, &l2).unwrap(), Dichotomy::Reducible(_)));
            // D x0 + E x1 with D, E coprime quadrics in x2, x3
            let de = form(&f, &[([1, 0, 2, 0], 1), ([1, 0, 0, 2], 1), ([0, 1, 1, 1], 1)]);
            match dichotomy_check(&de, &g, &l1, &l2).unwrap() {
                Dichotomy::DoubleLine(l) => assert_eq!(l, l2),
                Dichotomy::Reducible(_) => {}
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn divides_on_constructed_example() {
        let (f, _) = setup(3);
        let x2 = bin(&f, 1, &[([1, 0], 1)]);
        let x3 = bin(&f, 1, &[([0, 1], 1)]);
        // a double line V(x0 + x2, x1 + x3): F = A X² + 2B XY + C Y²
        let nf = CubicNF {
            a: x2.clone(),
            b: BinaryForm::zero(1),
            c: x3.clone(),
            d: x2.mul(&f, &x2),
            e: x3.mul(&f, &x3),
            k: x2.mul(&f, &x2).mul(&f, &x2).add(&f, &x3.mul(&f, &x3).mul(&f, &x3)).unwrap(),
            even: false,
        };
        assert!(det_mf(&f, &nf).unwrap().is_zero());
        let (u, v) = divides_check(&f, &nf).unwrap();
        assert_eq!((u, v), (x3, x2));
    }
}
