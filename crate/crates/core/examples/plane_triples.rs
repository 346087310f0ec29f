//! Every triple of planes through a common line, at q = 2 and q = 3.
use hermsurf::verify::elx_survey;
use hermsurf::HermitianSurface;

fn main() -> hermsurf::Result<()> {
    for q in [2, 3] {
        let r = elx_survey(&HermitianSurface::standard(q)?, 1)?;
        let top: Vec<_> = r.histogram.iter().rev().take(4).collect();
        println!("q={q}: {} triples, top values {top:?}", r.samples);
        println!("  value {} absent, violations {}", r.observations["absent_value"], r.violations.len());
    }
    Ok(())
}
