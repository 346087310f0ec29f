//! The three plane configurations: tangent planes through a secant, the
//! second-place triple, and planes through a generator.
use hermsurf::constructions::{generator_book, second_best, sorensen, Pick};
use hermsurf::HermitianSurface;

fn main() -> hermsurf::Result<()> {
    for q in [2, 3, 4] {
        let s = HermitianSurface::standard(q)?;
        let a = sorensen(&s, 3.min(q + 1), Pick::First)?;
        let b = second_best(&s, Pick::First)?;
        let c = generator_book(&s, 3, Pick::Seeded(7))?;
        for conf in [a, b, c] {
            println!(
                "q={q} {:?}: {} planes, expected {}, measured {}",
                conf.kind,
                conf.planes.len(),
                conf.expected_count,
                conf.measured_count(&s)?
            );
        }
    }
    Ok(())
}
