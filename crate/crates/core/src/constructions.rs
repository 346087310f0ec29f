//! Plane configurations with known intersection counts.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{self, HomogeneousForm};
use crate::hermitian::{HermitianSurface, LineClass};
use crate::projspace::{ProjLine, ProjPlane, ProjPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigKind {
    Sorensen,
    SecondBest,
    GeneratorBook,
}

/// How choices are made: the first valid object in enumeration order, or a
/// seeded random valid object.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pick {
    First,
    Seeded(u64),
}

impl Pick {
    fn rng(&self) -> Option<ChaCha8Rng> {
        match self {
            Pick::First => None,
            Pick::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(*s)),
        }
    }
}

fn choose<T: Copy>(items: &[T], n: usize, rng: &mut Option<ChaCha8Rng>) -> Vec<T> {
    match rng {
        None => items.iter().take(n).copied().collect(),
        Some(r) => items.choose_multiple(r, n).copied().collect(),
    }
}

#[derive(Clone, Debug)]
pub struct Configuration {
    pub kind: ConfigKind,
    pub planes: Vec<ProjPlane>,
    /// Lines used by the construction (common axis, or the pairwise meets).
    pub lines: Vec<ProjLine>,
    /// Distinguished points (the common point of the second-best planes).
    pub points: Vec<ProjPoint>,
    pub form: HomogeneousForm,
    pub expected_count: usize,
}

impl Configuration {
    pub fn measured_count(&self, s: &HermitianSurface) -> Result<usize> {
        forms::intersection_count(&self.form, s)
    }
}

/// `d(q³ + q² − q) + q + 1`.
pub fn sorensen_count(q: u32, d: u32) -> usize {
    let (q, d) = (q as usize, d as usize);
    d * (q * q * q + q * q - q) + q + 1
}

/// `3(q³ + q² − q) + 1`.
pub fn second_best_count(q: u32) -> usize {
    let q = q as usize;
    3 * (q * q * q + q * q - q) + 1
}

/// `d q³ + q² + 1`.
pub fn generator_book_count(q: u32, d: u32) -> usize {
    let (q, d) = (q as usize, d as usize);
    d * q * q * q + q * q + 1
}

fn secants(s: &HermitianSurface, rng: &mut Option<ChaCha8Rng>) -> Result<ProjLine> {
    let g = s.space();
    let q = s.q() as usize;
    match rng {
        None => g.lines().find(|l| s.line_count(l) == q + 1).ok_or(Error::Construction("no secant".into())),
        Some(r) => {
            use rand::Rng;
            loop {
                let l = g.line_at(r.gen_range(0..g.num_lines()));
                if s.line_count(&l) == q + 1 {
                    return Ok(l);
                }
            }
        }
    }
}

/// `d` tangent planes through a common secant.
pub fn sorensen(s: &HermitianSurface, d: u32, pick: Pick) -> Result<Configuration> {
    let q = s.q();
    if s.is_degenerate() {
        return Err(Error::Degenerate(s.rank()));
    }
    if !(2..=q + 1).contains(&d) {
        return Err(Error::OutOfRange(format!("d = {d} must lie in 2..={}", q + 1)));
    }
    let mut rng = pick.rng();
    let axis = secants(s, &mut rng)?;
    let tangent: Vec<ProjPlane> = s
        .space()
        .book_of_planes(&axis)
        .into_iter()
        .filter(|pl| s.is_tangent_plane(pl).unwrap_or(false))
        .collect();
    let mut planes = choose(&tangent, d as usize, &mut rng);
    planes.sort_by_key(|p| s.space().plane_index(p));
    Ok(Configuration {
        kind: ConfigKind::Sorensen,
        form: HomogeneousForm::of_planes(s.field(), &planes),
        planes,
        lines: vec![axis],
        points: vec![],
        expected_count: sorensen_count(q, d),
    })
}

/// `d` planes from the book of a generator.
pub fn generator_book(s: &HermitianSurface, d: u32, pick: Pick) -> Result<Configuration> {
    let q = s.q();
    if !(2..=q * q + 1).contains(&d) {
        return Err(Error::OutOfRange(format!("d = {d} must lie in 2..={}", q * q + 1)));
    }
    let mut rng = pick.rng();
    let gens = s.generators()?;
    let axis = choose(gens, 1, &mut rng)[0];
    let book = s.space().book_of_planes(&axis);
    let mut planes = choose(&book, d as usize, &mut rng);
    planes.sort_by_key(|p| s.space().plane_index(p));
    Ok(Configuration {
        kind: ConfigKind::GeneratorBook,
        form: HomogeneousForm::of_planes(s.field(), &planes),
        planes,
        lines: vec![axis],
        points: vec![],
        expected_count: generator_book_count(q, d),
    })
}

/// Three tangent planes through a surface point `P`, pairwise meeting in
/// secants, whose common line-free intersection with the surface is `{P}`.
///
/// Steps: `Π` the tangent plane at `P`; generators `ℓ1, ℓ2, ℓ3 ⊂ Π` through
/// `P`; a secant `ℓ` through `P`; `Π1 = ⟨ℓ, ℓ1⟩`, `Π2 = ⟨ℓ, ℓ2⟩`; a line
/// `ℓ13 ⊂ Π1` through `P` other than `ℓ1` and `ℓ`; `Π3 = ⟨ℓ13, ℓ3⟩`.
pub fn second_best(s: &HermitianSurface, pick: Pick) -> Result<Configuration> {
    let g = s.space();
    let q = s.q();
    let mut rng = pick.rng();
    let fail = |m: &str| Error::Construction(m.to_string());

    let p = choose(s.points(), 1, &mut rng)[0];
    let pi = s.polar_plane(&p)?;
    let gens_at_p: Vec<ProjLine> = g
        .pencil(&p, &pi)
        .into_iter()
        .filter(|l| s.line_count(l) == (q * q + 1) as usize)
        .collect();
    if gens_at_p.len() < 3 {
        return Err(fail("fewer than three generators through the point"));
    }
    let chosen = choose(&gens_at_p, 3, &mut rng);
    let (l1, l2, l3) = (chosen[0], chosen[1], chosen[2]);
    let outside: Vec<ProjLine> = g.lines_through_point(&p).into_iter().filter(|l| !g.line_in_plane(l, &pi)).collect();
    let ell = choose(&outside, 1, &mut rng)[0];
    if s.classify_line(&ell)? != LineClass::Secant {
        return Err(fail("line through the point outside its tangent plane is not a secant"));
    }
    let pi1 = g.plane_of_lines(&ell, &l1)?;
    let pi2 = g.plane_of_lines(&ell, &l2)?;
    let cand13: Vec<ProjLine> = g
        .pencil(&p, &pi1)
        .into_iter()
        .filter(|l| *l != l1 && *l != ell && !g.line_in_plane(l, &pi))
        .collect();
    if cand13.is_empty() {
        return Err(fail("no admissible line through the point in the first plane"));
    }
    let l13 = choose(&cand13, 1, &mut rng)[0];
    let pi3 = g.plane_of_lines(&l13, &l3)?;

    let planes = vec![pi1, pi2, pi3];
    let meets = [g.meet_planes(&pi1, &pi2)?, g.meet_planes(&pi1, &pi3)?, g.meet_planes(&pi2, &pi3)?];
    for m in &meets {
        if s.classify_line(m)? != LineClass::Secant {
            return Err(Error::Consistency(format!("pairwise meet {m:?} is not a secant")));
        }
    }
    if meets[0] == meets[1] || meets[0] == meets[2] || meets[1] == meets[2] {
        return Err(Error::Consistency("pairwise meets are not distinct".into()));
    }
    for pl in &planes {
        if !s.is_tangent_plane(pl)? {
            return Err(Error::Consistency(format!("{pl:?} is not tangent")));
        }
    }
    let triple: Vec<ProjPoint> = s
        .points()
        .iter()
        .filter(|x| planes.iter().all(|pl| g.point_on_plane(x, pl)))
        .copied()
        .collect();
    if triple != vec![p] {
        return Err(Error::Consistency(format!("common surface points {triple:?} differ from {{P}}")));
    }
    Ok(Configuration {
        kind: ConfigKind::SecondBest,
        form: HomogeneousForm::of_planes(s.field(), &planes),
        planes,
        lines: meets.to_vec(),
        points: vec![p],
        expected_count: second_best_count(q),
    })
}
