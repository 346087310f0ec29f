//! Incidence audit: full at q = 2 and 3, sampled at q = 4.
use hermsurf::verify::{structure_audit, AuditScope};
use hermsurf::HermitianSurface;

fn main() -> hermsurf::Result<()> {
    for (q, scope) in [
        (2, AuditScope::Full),
        (3, AuditScope::Full),
        (4, AuditScope::Sampled { seed: 1, per_kind: 1000 }),
    ] {
        let r = structure_audit(&HermitianSurface::standard(q)?, scope, 1)?;
        println!("q={q}: |V2| = {}, lines {:?}", r.surface_points, r.line_classes);
        println!("  books {:?}", r.book_profiles);
        println!("  plane sections {:?}, violations {}", r.plane_sections, r.violations.len());
    }
    Ok(())
}
