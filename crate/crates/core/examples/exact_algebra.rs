//! Gaussian rationals, exact subspaces and nilpotent exponentials.

use zerolocus::fixtures::unit;
use zerolocus::{ExactMatrix, Scalar, Subspace};

fn main() -> zerolocus::Result<()> {
    let a: Scalar = "-3/2+1/7*i".parse()?;
    let b = Scalar::gauss((1, 3), (2, 5));
    println!("a = {a}, b = {b}, a*b = {}, a/b = {}", &a * &b, &a / &b);
    println!("\"2/4\" is rejected: {}", "2/4".parse::<Scalar>().unwrap_err());

    // subspaces are stored in reduced echelon form, so equality is representation equality
    let u = Subspace::span(3, &[vec![Scalar::one(), Scalar::i(), Scalar::zero()]], &());
    let v = Subspace::span(3, &[vec![Scalar::i(), Scalar::int(-1), Scalar::zero()]], &());
    println!("span(e0 + i e1) == span(i e0 - e1): {}", u == v);
    println!("conjugate is real: {}, intersection with it has dim {}", u.conj().is_real(), u.intersect(&u.conj())?.dim());

    let x = unit(3, 1, 2).add_ref(&unit(3, 2, 0));
    let g = x.exp_nilpotent()?;
    println!("exp(E(1<-2) + E(2<-0)) =");
    for i in 0..3 {
        println!("  {:?}", g.row(i).iter().map(|s| s.to_string()).collect::<Vec<_>>());
    }
    let back: ExactMatrix = g.log_unipotent()?;
    println!("log recovers the generator: {}", back == x);
    Ok(())
}
