//! Count the surface points on V(F) for a plane, a quadric and a random cubic.
use hermsurf::{forms, FieldElement, HermitianSurface, HomogeneousForm};

fn main() -> hermsurf::Result<()> {
    let s = HermitianSurface::standard(2)?;
    let f = s.field();
    println!("|V2| over GF(4): {}", s.points().len());

    let one = FieldElement::ONE;
    let z = FieldElement::ZERO;
    let plane = HomogeneousForm::linear([one, one, z, z]);
    println!("x0 + x1: {} points", forms::intersection_count(&plane, &s)?);

    let quadric = HomogeneousForm::from_terms(f, 2, [([1, 1, 0, 0], one), ([0, 0, 1, 1], one)])?;
    println!("{}: {} points", quadric.display(f), forms::intersection_count(&quadric, &s)?);

    let s3 = HermitianSurface::standard(3)?;
    for seed in 0..3 {
        let g = forms::random_form(s3.field(), 3, seed);
        println!("random cubic #{seed} over GF(9): {} points", forms::intersection_count(&g, &s3)?);
    }
    Ok(())
}
