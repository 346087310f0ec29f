//! Lines, planes and books of planes relative to the Hermitian surface.
use hermsurf::{HermitianSurface, LineClass, PlaneClass};

fn main() -> hermsurf::Result<()> {
    let s = HermitianSurface::standard(2)?;
    let g = s.space();

    let mut tally = std::collections::BTreeMap::new();
    for l in g.lines() {
        *tally.entry(s.classify_line(&l)?).or_insert(0) += 1;
    }
    println!("line classes over GF(4): {tally:?}");

    for class in [LineClass::Generator, LineClass::Secant, LineClass::Tangent] {
        let l = g.lines().find(|l| s.classify_line(l).ok() == Some(class)).expect("every class occurs");
        let b = s.book_profile(&l)?;
        println!("{class:?} axis: {} tangent, {} non-tangent planes in its book", b.tangent, b.non_tangent);
    }

    let (mut tangent, mut other) = (0, 0);
    for pl in g.planes() {
        match s.classify_plane(&pl)? {
            PlaneClass::Tangent(p) => {
                tangent += 1;
                assert_eq!(s.polar_plane(&p)?, pl);
            }
            PlaneClass::NonTangent => other += 1,
        }
    }
    println!("{tangent} tangent planes, {other} non-tangent planes");

    let p = s.points()[0];
    println!("lines through a surface point: {:?}", s.tangent_point_line_tally(&p)?);
    Ok(())
}
