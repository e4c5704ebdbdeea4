//! Exact zero locus of FIX-A near the base point, then a numerical scan of a larger disk.

use rug::Rational;
use zerolocus::fixtures::{fix_a, fix_a_shifted};
use zerolocus::interior::{extension_class, interior_zero_locus, zero_scan, ScanConfig};
use zerolocus::Scalar;

fn main() -> zerolocus::Result<()> {
    let germ = fix_a();
    let s = Scalar::frac(1, 10);
    let y = germ.grading_at(&s)?;
    println!("lift of Y(1/10): {:?}", germ.shape().lift_of(y.matrix()).iter().map(|x| x.to_string()).collect::<Vec<_>>());
    let class = extension_class(&germ, &Scalar::frac(1, 4), None)?;
    println!("extension class at 1/4: {:?}", class.reduced);

    let d = interior_zero_locus(&germ, &Rational::from((1, 5)))?;
    println!("r = 1/5: {:?}, roots {:?}, certified up to {}", d.kind, d.roots.iter().map(|r| r.center.to_string()).collect::<Vec<_>>(), d.certified_radius);

    let report = zero_scan(&germ, 0.7, &ScanConfig::default())?;
    println!("scan of |s| < 0.7 over {} samples:", report.samples.len());
    for c in &report.candidates {
        println!("  {} (confirmed {}, kind {:?})", c.exact.as_deref().unwrap_or("?"), c.confirmed, c.local_kind);
    }

    match interior_zero_locus(&fix_a_shifted(), &Rational::from((1, 5))) {
        Err(e) => println!("shifted base point: {e}"),
        Ok(d) => println!("shifted base point: {:?}", d.kind),
    }
    Ok(())
}
