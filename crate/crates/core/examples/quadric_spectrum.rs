//! All 349,525 quadrics of PG(3, 4) against the Hermitian surface.
use hermsurf::verify::exhaustive_quadrics;
use hermsurf::HermitianSurface;

fn main() -> hermsurf::Result<()> {
    let s = HermitianSurface::standard(2)?;
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let r = exhaustive_quadrics(&s, jobs)?;
    for (count, n) in &r.histogram {
        println!("{count:>3} {n}");
    }
    println!("max {} ; maximizers {} ; violations {}", r.max_count, r.observations["maximizers"], r.violations.len());
    Ok(())
}
