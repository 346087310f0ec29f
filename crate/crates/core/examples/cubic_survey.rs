//! Seeded cubics from the structured strata, checked against the
//! conditional bounds. Pass a sample count as the first argument.
use hermsurf::verify::{cubic_survey, CubicSurveyParams};
use hermsurf::HermitianSurface;

fn main() -> hermsurf::Result<()> {
    let samples = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    let s = HermitianSurface::standard(3)?;
    let r = cubic_survey(&s, CubicSurveyParams { samples, seed: 0, jobs: 1, strict_conjecture: false })?;
    let top: Vec<_> = r.histogram.iter().rev().take(5).collect();
    println!("{samples} cubics over GF(9); top counts {top:?}");
    println!("{}", serde_json::to_string_pretty(&r.observations["bounds"])?);
    println!("violations: {}", r.violations.len());
    Ok(())
}
