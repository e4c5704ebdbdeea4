//! `Ψ(ad Γ₀)Γ₋₁` against the matrix-logarithm form of the same transport.

use zerolocus::fixtures::unit;
use zerolocus::nilpotent::{bch_transport, psi_series};

fn main() -> zerolocus::Result<()> {
    let u = unit(3, 1, 2);
    let v = unit(3, 2, 0);
    let psi = psi_series(&u, &v)?;
    let bch = bch_transport(&u, &v)?;
    println!("Psi(ad E(1<-2)) E(2<-0):");
    for i in 0..3 {
        println!("  {:?}", psi.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    println!("equals log(exp(u + v) exp(-u)): {}", psi == bch);
    Ok(())
}
