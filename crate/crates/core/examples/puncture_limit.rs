//! Limit data, extrapolated limit grading and classification near a puncture.

use rug::Rational;
use zerolocus::degeneration::{limit_data, limit_grading, puncture_zero_locus, xi_obstruction, LimitConfig};
use zerolocus::fixtures::{fix_b, fix_b_trivial, fix_c, fix_d};

fn main() -> zerolocus::Result<()> {
    let config = LimitConfig::default();
    for germ in [fix_b(), fix_c()] {
        let data = limit_data(&germ)?;
        let limit = limit_grading(&germ, &data, &config)?;
        let coords: Vec<f64> = limit.coordinates.iter().map(|c| c.to_f64()).collect();
        println!(
            "{}: limit coordinates {coords:?}, error {:.2e}, exact {:?}, obstruction norm {}",
            germ.name,
            limit.error,
            limit.exact.as_ref().map(|t| t.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            xi_obstruction(&germ, &data, &limit).norm()
        );
    }
    let r = Rational::from((1, 4));
    for germ in [fix_b(), fix_b_trivial(), fix_c(), fix_d()] {
        let c = puncture_zero_locus(&germ, &r, &config)?;
        println!("{}: {}", germ.name, c.kind.label());
    }
    Ok(())
}
