//! A cubic through a line in normal position: the coefficient forms, the
//! invariant, the book planes with degenerate sections, and the dichotomy
//! for an invariant-zero cubic through two skew lines.
use hermsurf::cubicnf::{dichotomy_check, normal_form, t_ell};
use hermsurf::sample::{cubic_through_axis, invariant_zero_sample, InvariantZeroFamily};
use hermsurf::HermitianSurface;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hermsurf::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [3, 4] {
        let s = HermitianSurface::standard(q)?;
        let (f, g) = (s.field(), s.space());
        let axis = g.coordinate_line(2, 3);
        let cubic = cubic_through_axis(f, &mut rng);
        let nf = normal_form(&cubic, g, &axis)?;
        println!("q={q} F = {}", cubic.display(f));
        println!("  A = {}, B = {}, C = {}", nf.a.display(f), nf.b.display(f), nf.c.display(f));
        println!("  D = {}, E = {}, K = {}", nf.d.display(f), nf.e.display(f), nf.k.display(f));
        let t = t_ell(&cubic, g, &axis)?;
        println!("  invariant {} ; |T_l| = {} (bound applies: {})", t.invariant.display(f), t.members.len(), t.bound_applies());

        let (h, l1, l2) = invariant_zero_sample(g, InvariantZeroFamily::Product, &mut rng);
        println!("  invariant-zero cubic resolves to {:?}", dichotomy_check(&h, g, &l1, &l2)?);
    }
    Ok(())
}
