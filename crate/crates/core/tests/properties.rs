use std::sync::OnceLock;

use hermsurf::cubicnf::{self, Dichotomy};
use hermsurf::forms;
use hermsurf::sample::{self, InvariantZeroFamily};
use hermsurf::{FieldCtx, FieldElement, HermitianSurface, HomogeneousForm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

fn fields() -> &'static [FieldCtx] {
    static F: OnceLock<Vec<FieldCtx>> = OnceLock::new();
    F.get_or_init(|| QS.iter().map(|&q| FieldCtx::new(q).unwrap()).collect())
}

fn surfaces() -> &'static [HermitianSurface] {
    static S: OnceLock<Vec<HermitianSurface>> = OnceLock::new();
    S.get_or_init(|| (2..=4).map(|q| HermitianSurface::standard(q).unwrap()).collect())
}

fn surface(q: u32) -> &'static HermitianSurface {
    &surfaces()[q as usize - 2]
}

fn elem(f: &FieldCtx, raw: u32) -> FieldElement {
    f.element(raw % f.order()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 7000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(k in 0..QS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[k];
        let (a, b, c) = (elem(f, a), elem(f, b), elem(f, c));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(k in 0..QS.len(), a in any::<u32>(), b in any::<u32>()) {
        let f = &fields()[k];
        let (a, b) = (elem(f, a), elem(f, b));
        prop_assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
        prop_assert_eq!(f.conj(f.add(a, b)), f.add(f.conj(a), f.conj(b)));
        prop_assert_eq!(f.conj(f.conj(a)), a);
        prop_assert_eq!(f.conj(a), f.pow(a, f.q() as u64));
        let n = f.norm(a);
        prop_assert_eq!(f.conj(n), n);
    }

    #[test]
    fn serre_bound(q in 2u32..=3, d in 1u32..=4, seed in any::<u64>()) {
        prop_assume!(d <= q * q);
        let s = surface(q);
        let g = forms::random_form(s.field(), d, seed);
        prop_assume!(!g.is_zero());
        let size = (q * q) as usize;
        prop_assert!(forms::projective_zero_count(&g, s.space()) <= d as usize * size * size + size + 1);
    }

    #[test]
    fn plane_factor_never_decreases_the_count(q in 2u32..=4, d in 1u32..=2, seed in any::<u64>(), plane in any::<usize>()) {
        let s = surface(q);
        let f = s.field();
        let g = forms::random_form(f, d, seed);
        let pl = s.space().plane_at(plane % s.space().num_planes());
        let h = g.mul(f, &HomogeneousForm::of_plane(&pl));
        prop_assert!(forms::intersection_count(&h, s).unwrap() >= forms::intersection_count(&g, s).unwrap());
    }

    #[test]
    fn book_sum_identity(q in 2u32..=4, line in any::<usize>()) {
        let s = surface(q);
        let g = s.space();
        let l = g.line_at(line % g.num_lines());
        let sum: usize = g.book_of_planes(&l).iter().map(|pl| s.plane_count(pl)).sum();
        let q2 = (q * q) as usize;
        prop_assert_eq!(sum, q2 * s.line_count(&l) + s.points().len());
    }

    #[test]
    fn membership_ignores_scaling(q in 2u32..=4, point in any::<usize>(), c in any::<u32>()) {
        let s = surface(q);
        let f = s.field();
        let g = s.space();
        let c = f.element(1 + c % (f.order() - 1)).unwrap();
        let p = g.point_at(point % g.num_points());
        let scaled = g.point(p.coords().map(|x| f.mul(c, x))).unwrap();
        prop_assert_eq!(s.contains(&p), s.contains(&scaled));
        prop_assert_eq!(s.contains(&p), s.matrix().value(f, p.coords()).is_zero());
    }

    #[test]
    fn linear_factor_of_a_product_is_found(q in 2u32..=3, seed in any::<u64>(), plane in any::<usize>()) {
        let s = surface(q);
        let (f, g) = (s.field(), s.space());
        let quad = forms::random_form(f, 2, seed);
        prop_assume!(!quad.is_zero());
        let pl = g.plane_at(plane % g.num_planes());
        let h = quad.mul(f, &HomogeneousForm::of_plane(&pl));
        let factors = forms::linear_factors(&h, g).unwrap();
        prop_assert!(factors.iter().any(|(p, m)| *p == pl && *m >= 1));
    }

    #[test]
    fn transport_moves_zero_sets(q in 2u32..=3, seed in any::<u64>()) {
        let s = surface(q);
        let (f, g) = (s.field(), s.space());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = forms::random_form_with(f, 3, &mut rng);
        let m = sample::random_projectivity(g, &mut rng);
        let moved = sample::transport(g, &form, &m);
        for p in g.points().step_by(17) {
            let image = g.apply(&m, &p);
            prop_assert_eq!(form.eval_point(f, &p).is_zero(), moved.eval_point(f, &image).is_zero());
        }
    }
}

#[test]
fn normal_form_reconstructs_the_pulled_back_cubic() {
    for q in [3, 4] {
        let s = surface(q);
        let (f, g) = (s.field(), s.space());
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        for _ in 0..1000 {
            let l = sample::random_line(g, &mut rng);
            let m = g.adapted_coords(&l, None).unwrap();
            let form = sample::transport(g, &sample::cubic_through_axis(f, &mut rng), &m);
            let (nf, used) = cubicnf::normal_form_with(&form, g, &l, None).unwrap();
            assert_eq!(nf.reconstruct(f), form.pullback(f, &used), "q={q} {}", form.display(f));
        }
    }
}

#[test]
fn vanishing_determinant_survives_substitution_in_x0_x1() {
    let s = surface(3);
    let (f, g) = (s.field(), s.space());
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 300 {
        let family = InvariantZeroFamily::ALL[checked % 4];
        let form = sample::invariant_zero_normal(f, family, &mut rng);
        let nf = cubicnf::split_normal_position(f, &form).unwrap();
        assert!(cubicnf::det_mf(f, &nf).unwrap().is_zero());
        let [a, b, c, d]: [FieldElement; 4] = std::array::from_fn(|_| forms::random_element(f, &mut rng));
        if f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
            continue;
        }
        let (o, z) = (f.one(), f.zero());
        let p = g.projectivity([[a, b, z, z], [c, d, z, z], [z, z, o, z], [z, z, z, o]]).unwrap();
        let moved = cubicnf::split_normal_position(f, &form.pullback(f, &p)).unwrap();
        assert!(cubicnf::det_mf(f, &moved).unwrap().is_zero());
        checked += 1;
    }
}

#[test]
fn discriminant_divides_for_invariant_zero_cubics() {
    let s = surface(3);
    let f = s.field();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut qualified = 0;
    for i in 0..4000 {
        let form = sample::invariant_zero_normal(f, InvariantZeroFamily::ALL[i % 4], &mut rng);
        let nf = cubicnf::split_normal_position(f, &form).unwrap();
        assert!(nf.k.is_zero());
        let disc = nf.a.mul(f, &nf.c).sub(f, &nf.b.mul(f, &nf.b)).unwrap();
        if nf.a.is_zero() || disc.is_zero() || !disc.is_squarefree(f) {
            continue;
        }
        let (u, v) = cubicnf::divides_check(f, &nf).expect("AC - B² divides AE - BD and CD - BE");
        let ae_bd = nf.a.mul(f, &nf.e).sub(f, &nf.b.mul(f, &nf.d)).unwrap();
        let cd_be = nf.c.mul(f, &nf.d).sub(f, &nf.b.mul(f, &nf.e)).unwrap();
        assert_eq!(u.mul(f, &disc), ae_bd);
        assert_eq!(v.mul(f, &disc), cd_be);
        qualified += 1;
    }
    assert!(qualified >= 200, "only {qualified} qualifying samples");
}

#[test]
fn dichotomy_never_leaves_its_three_states() {
    for q in [3, 4] {
        let s = surface(q);
        let g = s.space();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + q as u64);
        let mut zero = 0;
        for i in 0..10_000 {
            let (form, l1, l2) = if i % 2 == 0 {
                sample::invariant_zero_sample(g, InvariantZeroFamily::ALL[(i / 2) % 4], &mut rng)
            } else {
                let (l1, l2) = sample::skew_generators(s, &mut rng).unwrap();
                let m = g.adapted_coords(&l2, Some(&l1)).unwrap();
                let normal = forms::random_form_on(s.field(), 3, &sample::exponents_vanishing(3, 1, 1), &mut rng);
                if normal.is_zero() {
                    continue;
                }
                (sample::transport(g, &normal, &m), l1, l2)
            };
            match cubicnf::dichotomy_check(&form, g, &l1, &l2) {
                Ok(Dichotomy::InvariantNonzero) => {}
                Ok(Dichotomy::Reducible(_) | Dichotomy::DoubleLine(_)) => zero += 1,
                Err(e) => panic!("q={q} sample {i}: {e}"),
            }
        }
        assert!(zero >= 5000, "q={q}: only {zero} invariant-zero samples");
    }
}

#[test]
fn constructions_with_random_picks() {
    for q in [2, 3, 4] {
        let s = surface(q);
        for seed in 0..5 {
            let pick = hermsurf::constructions::Pick::Seeded(seed);
            let confs = [
                hermsurf::constructions::sorensen(s, 3, pick).unwrap(),
                hermsurf::constructions::second_best(s, pick).unwrap(),
                hermsurf::constructions::generator_book(s, 3, pick).unwrap(),
            ];
            for c in confs {
                assert_eq!(c.measured_count(s).unwrap(), c.expected_count, "q={q} {:?}", c.kind);
            }
        }
    }
}
