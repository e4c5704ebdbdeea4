//! CSV traces of the grading along two vertical rays toward the puncture of FIX-C.

use zerolocus::degeneration::LimitConfig;
use zerolocus::fixtures::fix_c;
use zerolocus::io::emit_ray_trace;

fn main() -> zerolocus::Result<()> {
    let germ = fix_c();
    for x in [0.0, 0.5] {
        let config = LimitConfig {
            x,
            precision: 128,
            ..LimitConfig::default()
        };
        println!("# ray Re z = {x}");
        print!("{}", emit_ray_trace(&germ, &config)?);
    }
    Ok(())
}
