//! A non-canonical Hermitian matrix and a degenerate one.
use std::sync::Arc;

use hermsurf::{FieldCtx, HermitianMatrix, HermitianSurface, Pg3};

fn main() -> hermsurf::Result<()> {
    let f = Arc::new(FieldCtx::new(2)?);
    let (o, z, t) = (f.one(), f.zero(), f.t());
    let tc = f.conj(t);
    // off-diagonal entries conjugate in pairs, diagonal in GF(q)
    let m = HermitianMatrix::new(&f, [[o, t, z, z], [tc, z, z, z], [z, z, z, o], [z, z, o, z]])?;
    let s = HermitianSurface::new(Pg3::new(f.clone()), m);
    println!("rank {}, {} points", s.rank(), s.points().len());

    for rank in 1..=3 {
        let d = HermitianSurface::canonical(Pg3::new(f.clone()), rank)?;
        println!("canonical rank {rank}: {} points, degenerate = {}", d.points().len(), d.is_degenerate());
    }
    Ok(())
}
