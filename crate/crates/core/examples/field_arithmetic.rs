//! Arithmetic in GF(q²): conjugation, norms and the fixed subfield.
use hermsurf::FieldCtx;

fn main() -> hermsurf::Result<()> {
    let f = FieldCtx::new(3)?;
    println!("GF({}) = GF(3)[t]/({})", f.order(), f.modulus_string());
    let a = f.parse("t+2")?;
    let b = f.parse("2t")?;
    println!("a = {}, b = {}", f.format(a), f.format(b));
    println!("a*b = {}", f.format(f.mul(a, b)));
    println!("1/a = {}", f.format(f.inv(a)?));
    println!("conj(a) = a^q = {}", f.format(f.conj(a)));
    // the norm lands in GF(q)
    let n = f.norm(a);
    println!("norm(a) = {} (in GF(q): {})", f.format(n), f.in_subfield(n));
    let sub: Vec<String> = f.subfield().into_iter().map(|x| f.format(x)).collect();
    println!("GF(q) = {{{}}}", sub.join(", "));
    Ok(())
}
