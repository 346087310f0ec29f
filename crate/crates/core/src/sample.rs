//! Seeded samplers for projectivities, lines and structured cubics.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::constructions::{self, Pick};
use crate::error::Result;
use crate::field::{FieldCtx, FieldElement};
use crate::forms::{self, BinaryForm, HomogeneousForm};
use crate::hermitian::HermitianSurface;
use crate::linalg::{self, Mat4};
use crate::projspace::{Pg3, ProjLine, ProjPlane, ProjPoint, Projectivity};

pub fn random_projectivity<R: Rng>(space: &Pg3, rng: &mut R) -> Projectivity {
    let f = space.field();
    loop {
        let m: Mat4 = std::array::from_fn(|_| std::array::from_fn(|_| forms::random_element(f, rng)));
        if let Ok(p) = space.projectivity(m) {
            return p;
        }
    }
}

pub fn random_point<R: Rng>(space: &Pg3, rng: &mut R) -> ProjPoint {
    space.point_at(rng.gen_range(0..space.num_points()))
}

pub fn random_plane<R: Rng>(space: &Pg3, rng: &mut R) -> ProjPlane {
    space.plane_at(rng.gen_range(0..space.num_planes()))
}

pub fn random_line<R: Rng>(space: &Pg3, rng: &mut R) -> ProjLine {
    space.line_at(rng.gen_range(0..space.num_lines()))
}

/// Exponents of degree `d` whose `(x2, x3)`-degree is at least `lo` and whose
/// `(x0, x1)`-degree is at least `lo01`.
pub fn exponents_vanishing(d: u32, lo: u8, lo01: u8) -> Vec<[u8; 4]> {
    forms::monomials::<4>(d).into_iter().filter(|e| e[2] + e[3] >= lo && e[0] + e[1] >= lo01).collect()
}

/// A random nonzero form supported on `exps`.
fn random_nonzero_on<R: Rng>(f: &FieldCtx, d: u32, exps: &[[u8; 4]], rng: &mut R) -> HomogeneousForm {
    loop {
        let g = forms::random_form_on(f, d, exps, rng);
        if !g.is_zero() {
            return g;
        }
    }
}

/// `F(x) = G(M⁻¹x)`, so that `V(F) = M(V(G))`.
pub fn transport(space: &Pg3, g: &HomogeneousForm, m: &Projectivity) -> HomogeneousForm {
    g.pullback(space.field(), &space.inverse(m))
}

/// Which structured family a survey cubic was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stratum {
    SorensenWitness,
    SecondBestWitness,
    GeneratorBookWitness,
    Uniform,
    PlaneTriple,
    PlaneQuadric,
    Generator,
    SkewGenerators,
    DoubleGenerator,
    PencilTriple,
}

impl Stratum {
    pub fn name(&self) -> &'static str {
        match self {
            Stratum::SorensenWitness => "sorensen-witness",
            Stratum::SecondBestWitness => "second-best-witness",
            Stratum::GeneratorBookWitness => "generator-book-witness",
            Stratum::Uniform => "uniform",
            Stratum::PlaneTriple => "plane-triple",
            Stratum::PlaneQuadric => "plane-quadric",
            Stratum::Generator => "generator",
            Stratum::SkewGenerators => "skew-generators",
            Stratum::DoubleGenerator => "double-generator",
            Stratum::PencilTriple => "pencil-triple",
        }
    }
}

/// Stratum of the `index`-th cubic of a survey: three fixed witnesses, then a
/// round robin over the seven random families.
pub fn stratum_of(index: u64) -> Stratum {
    match index {
        0 => Stratum::SorensenWitness,
        1 => Stratum::SecondBestWitness,
        2 => Stratum::GeneratorBookWitness,
        i => match (i - 3) % 7 {
            0 => Stratum::Uniform,
            1 => Stratum::PlaneTriple,
            2 => Stratum::PlaneQuadric,
            3 => Stratum::Generator,
            4 => Stratum::SkewGenerators,
            5 => Stratum::DoubleGenerator,
            _ => Stratum::PencilTriple,
        },
    }
}

/// Cubic from the given stratum. The witness strata need `3 <= q + 1`.
pub fn stratum_cubic<R: Rng>(s: &HermitianSurface, stratum: Stratum, rng: &mut R) -> Result<HomogeneousForm> {
    let g = s.space();
    let f = s.field();
    let seed = rng.gen::<u64>();
    let in_chart = |exps: &[[u8; 4]], rng: &mut R, l: &ProjLine, l2: Option<&ProjLine>| -> Result<HomogeneousForm> {
        let m = g.adapted_coords(l, l2)?;
        Ok(transport(g, &random_nonzero_on(f, 3, exps, rng), &m))
    };
    Ok(match stratum {
        Stratum::SorensenWitness => constructions::sorensen(s, 3, Pick::Seeded(seed))?.form,
        Stratum::SecondBestWitness => constructions::second_best(s, Pick::Seeded(seed))?.form,
        Stratum::GeneratorBookWitness => constructions::generator_book(s, 3, Pick::Seeded(seed))?.form,
        Stratum::Uniform => forms::random_form_with(f, 3, rng),
        Stratum::PlaneTriple => {
            let planes: Vec<ProjPlane> = (0..3).map(|_| random_plane(g, rng)).collect();
            HomogeneousForm::of_planes(f, &planes)
        }
        Stratum::PlaneQuadric => {
            let pl = random_plane(g, rng);
            HomogeneousForm::of_plane(&pl).mul(f, &forms::random_form_with(f, 2, rng))
        }
        Stratum::Generator => {
            let l = *s.generators()?.choose(rng).expect("surface has generators");
            in_chart(&exponents_vanishing(3, 1, 0), rng, &l, None)?
        }
        Stratum::SkewGenerators => {
            let (l1, l2) = skew_generators(s, rng)?;
            in_chart(&exponents_vanishing(3, 1, 1), rng, &l1, Some(&l2))?
        }
        Stratum::DoubleGenerator => {
            let l = *s.generators()?.choose(rng).expect("surface has generators");
            in_chart(&exponents_vanishing(3, 2, 0), rng, &l, None)?
        }
        Stratum::PencilTriple => {
            let l = random_line(g, rng);
            let book = g.book_of_planes(&l);
            let planes: Vec<ProjPlane> = book.choose_multiple(rng, 3).copied().collect();
            HomogeneousForm::of_planes(f, &planes)
        }
    })
}

/// Two skew generators, the first uniform, the second uniform among those
/// skew to it.
pub fn skew_generators<R: Rng>(s: &HermitianSurface, rng: &mut R) -> Result<(ProjLine, ProjLine)> {
    let gens = s.generators()?;
    let l1 = *gens.choose(rng).expect("surface has generators");
    loop {
        let l2 = *gens.choose(rng).expect("surface has generators");
        if s.space().are_skew(&l1, &l2) {
            return Ok((l1, l2));
        }
    }
}

/// Cubics in normal position for a skew pair whose invariant vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantZeroFamily {
    /// `D x0 + E x1`: double along `V(x2, x3)`.
    LinearInX,
    /// `A x0² + B x0x1 + C x1²`: double along `V(x0, x1)`.
    QuadraticInX,
    /// `A X² + B XY + C Y²` with `X = x0 + u`, `Y = x1 + v`: double along `V(X, Y)`.
    ShiftedQuadratic,
    /// `(αx0 + βx1)(δx0 + εx1 + ψ)`: reducible.
    Product,
}

impl InvariantZeroFamily {
    pub const ALL: [InvariantZeroFamily; 4] = [
        InvariantZeroFamily::LinearInX,
        InvariantZeroFamily::QuadraticInX,
        InvariantZeroFamily::ShiftedQuadratic,
        InvariantZeroFamily::Product,
    ];
}

fn bin_random<R: Rng>(f: &FieldCtx, d: u32, rng: &mut R) -> BinaryForm {
    BinaryForm::from_terms(f, d, forms::monomials::<2>(d).into_iter().map(|e| (e, forms::random_element(f, rng))))
        .expect("degrees match")
}

/// Lifts a binary form in `(x2, x3)` times `x0^i x1^j`.
fn lift(f: &FieldCtx, b: &BinaryForm, i: u8, j: u8) -> HomogeneousForm {
    HomogeneousForm::from_terms(f, b.degree() + (i + j) as u32, b.terms().iter().map(|(e, &c)| ([i, j, e[0], e[1]], c)))
        .expect("degrees match")
}

fn xvar(f: &FieldCtx, i: usize) -> HomogeneousForm {
    let mut c = [FieldElement::ZERO; 4];
    c[i] = f.one();
    HomogeneousForm::linear(c)
}

/// A member of the family in normal position, vanishing on `V(x0,x1)` and
/// `V(x2,x3)`, not identically zero.
pub fn invariant_zero_normal<R: Rng>(f: &FieldCtx, family: InvariantZeroFamily, rng: &mut R) -> HomogeneousForm {
    loop {
        let g = match family {
            InvariantZeroFamily::LinearInX => {
                lift(f, &bin_random(f, 2, rng), 1, 0).add(f, &lift(f, &bin_random(f, 2, rng), 0, 1)).unwrap()
            }
            InvariantZeroFamily::QuadraticInX => [(2, 0), (1, 1), (0, 2)]
                .iter()
                .map(|&(i, j)| lift(f, &bin_random(f, 1, rng), i, j))
                .fold(HomogeneousForm::zero(3), |acc, t| acc.add(f, &t).unwrap()),
            InvariantZeroFamily::ShiftedQuadratic => shifted_quadratic(f, rng),
            InvariantZeroFamily::Product => {
                let first = HomogeneousForm::linear([
                    forms::random_element(f, rng),
                    forms::random_element(f, rng),
                    FieldElement::ZERO,
                    FieldElement::ZERO,
                ]);
                let second = lift(f, &bin_random(f, 1, rng), 1, 0)
                    .add(f, &lift(f, &bin_random(f, 1, rng), 0, 1))
                    .unwrap()
                    .add(f, &lift(f, &bin_random(f, 2, rng), 0, 0))
                    .unwrap();
                first.mul(f, &second)
            }
        };
        if !g.is_zero() {
            return g;
        }
    }
}

/// `A X² + B XY + C Y²` where `(A, B, C)` is a random vector in the kernel of
/// `(A, B, C) ↦ A u² + B uv + C v²`, so that the pure `(x2, x3)` part vanishes.
fn shifted_quadratic<R: Rng>(f: &FieldCtx, rng: &mut R) -> HomogeneousForm {
    let u = bin_random(f, 1, rng);
    let v = bin_random(f, 1, rng);
    let squares = [u.mul(f, &u), u.mul(f, &v), v.mul(f, &v)];
    // unknowns: (A, B, C) each linear in x2, x3, coefficients [x2, x3]
    let x2 = BinaryForm::monomial([1, 0], f.one());
    let x3 = BinaryForm::monomial([0, 1], f.one());
    let mut columns: Vec<BinaryForm> = Vec::with_capacity(6);
    for sq in &squares {
        columns.push(sq.mul(f, &x2));
        columns.push(sq.mul(f, &x3));
    }
    let cubic_monos = forms::monomials::<2>(3);
    let rows: Vec<[FieldElement; 6]> =
        cubic_monos.iter().map(|e| std::array::from_fn(|j| columns[j].coeff(e))).collect();
    let kernel = linalg::null_space(f, &rows);
    let mut sol = [FieldElement::ZERO; 6];
    for k in &kernel {
        let c = forms::random_element(f, rng);
        for j in 0..6 {
            sol[j] = f.add(sol[j], f.mul(c, k[j]));
        }
    }
    let coef = |j: usize| {
        BinaryForm::from_terms(f, 1, [([1, 0], sol[2 * j]), ([0, 1], sol[2 * j + 1])]).expect("linear")
    };
    let x = xvar(f, 0).add(f, &lift(f, &u, 0, 0)).unwrap();
    let y = xvar(f, 1).add(f, &lift(f, &v, 0, 0)).unwrap();
    let terms = [
        lift(f, &coef(0), 0, 0).mul(f, &x.mul(f, &x)),
        lift(f, &coef(1), 0, 0).mul(f, &x.mul(f, &y)),
        lift(f, &coef(2), 0, 0).mul(f, &y.mul(f, &y)),
    ];
    terms.iter().fold(HomogeneousForm::zero(3), |acc, t| acc.add(f, t).unwrap())
}

/// An invariant-zero cubic moved to a random position, with the images of
/// `V(x0, x1)` and `V(x2, x3)`.
pub fn invariant_zero_sample<R: Rng>(
    space: &Pg3,
    family: InvariantZeroFamily,
    rng: &mut R,
) -> (HomogeneousForm, ProjLine, ProjLine) {
    let g = invariant_zero_normal(space.field(), family, rng);
    let m = random_projectivity(space, rng);
    let l1 = space.apply_line(&m, &space.coordinate_line(0, 1));
    let l2 = space.apply_line(&m, &space.coordinate_line(2, 3));
    (transport(space, &g, &m), l1, l2)
}

/// A random cubic through `V(x2, x3)`.
pub fn cubic_through_axis<R: Rng>(f: &FieldCtx, rng: &mut R) -> HomogeneousForm {
    random_nonzero_on(f, 3, &exponents_vanishing(3, 1, 0), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubicnf::{self, Dichotomy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn strata_round_robin() {
        assert_eq!(stratum_of(0), Stratum::SorensenWitness);
        assert_eq!(stratum_of(3), Stratum::Uniform);
        assert_eq!(stratum_of(9), Stratum::PencilTriple);
        assert_eq!(stratum_of(10), Stratum::Uniform);
    }

    #[test]
    fn generator_strata_contain_their_lines() {
        let s = HermitianSurface::standard(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for st in [Stratum::Generator, Stratum::SkewGenerators, Stratum::DoubleGenerator] {
            for _ in 0..5 {
                let c = stratum_cubic(&s, st, &mut rng).unwrap();
                let mask = forms::zero_mask(&c, &s).unwrap();
                let on = s.generator_slots().unwrap().iter().filter(|sl| sl.iter().all(|&i| mask[i as usize])).count();
                assert!(on >= if st == Stratum::SkewGenerators { 2 } else { 1 });
            }
        }
    }

    #[test]
    fn invariant_zero_families_have_zero_invariant() {
        for q in [3u32, 4] {
            let f = Arc::new(FieldCtx::new(q).unwrap());
            let g = Pg3::new(f.clone());
            let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
            for fam in InvariantZeroFamily::ALL {
                for _ in 0..10 {
                    let nf_form = invariant_zero_normal(&f, fam, &mut rng);
                    let nf = cubicnf::split_normal_position(&f, &nf_form).unwrap();
                    assert!(nf.k.is_zero());
                    assert!(nf.invariant(&f).is_zero(), "{fam:?}: {}", nf_form.display(&f));
                    let (c, l1, l2) = invariant_zero_sample(&g, fam, &mut rng);
                    let d = cubicnf::dichotomy_check(&c, &g, &l1, &l2).unwrap();
                    assert!(matches!(d, Dichotomy::Reducible(_) | Dichotomy::DoubleLine(_)), "{fam:?}");
                }
            }
        }
    }

    #[test]
    fn random_projectivity_is_invertible() {
        let f = Arc::new(FieldCtx::new(2).unwrap());
        let g = Pg3::new(f);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let m = random_projectivity(&g, &mut rng);
            let id = g.compose(&m, &g.inverse(&m));
            assert_eq!(id, g.identity());
        }
    }
}
