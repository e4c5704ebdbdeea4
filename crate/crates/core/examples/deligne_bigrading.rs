//! Deligne bigrading, grading and delta-splitting of the limit structure of FIX-C.

use zerolocus::degeneration::validate_admissibility;
use zerolocus::fixtures::fix_c;
use zerolocus::mhs::{deligne_bigrading, deligne_grading, delta_splitting, MixedHodgeStructure};

fn main() -> zerolocus::Result<()> {
    let germ = fix_c();
    let limit = validate_admissibility(&germ)?.limit_mhs;
    let b = deligne_bigrading(&limit)?;
    for ((p, q), s) in b.pieces() {
        let basis: Vec<Vec<String>> = s.basis().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
        println!("I^({p},{q}) = span {basis:?}");
    }
    println!("R-split: {}", b.is_real_split());
    let y = deligne_grading(&limit)?;
    println!("Deligne grading is real: {}", y.is_real());

    let split = delta_splitting(&limit)?;
    println!("delta = {:?}", (0..3).map(|i| split.delta.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
    let hat = MixedHodgeStructure::new(split.f_hat, limit.w)?;
    println!("after exp(-i delta): R-split = {}", deligne_bigrading(&hat)?.is_real_split());
    Ok(())
}
