//! Monodromy and relative weight filtrations, including a germ where the latter does not exist.

use zerolocus::filtration::{monodromy_weight_filtration, relative_weight_filtration};
use zerolocus::fixtures::{two_step_weight, unit};

fn main() -> zerolocus::Result<()> {
    let n = unit(3, 2, 1).add_ref(&unit(3, 1, 0));
    let m = monodromy_weight_filtration(&n, 0)?;
    println!("monodromy weight filtration of a 3x3 Jordan block:");
    for (k, s) in m.steps() {
        println!("  M_{k}: dim {}", s.dim());
    }

    let w = two_step_weight(3);
    let rel = relative_weight_filtration(&unit(3, 2, 1), &w)?;
    println!("N = E(2<-1): relative filtration with lift {:?}", rel.lift.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    for (k, s) in rel.m.steps() {
        println!("  M_{k}: dim {}", s.dim());
    }

    match relative_weight_filtration(&unit(3, 1, 0), &w) {
        Ok(_) => println!("N = E(1<-0): unexpectedly admissible"),
        Err(e) => println!("N = E(1<-0): {e}"),
    }
    Ok(())
}
