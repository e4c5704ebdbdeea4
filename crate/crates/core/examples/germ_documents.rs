//! Germ documents and result documents, the same path the command-line tool takes.

use zerolocus::fixtures::fix_a;
use zerolocus::io::{parse_germ, run_command, Command, GermDocument, RunConfig};
use zerolocus::Scalar;

fn main() -> zerolocus::Result<()> {
    let doc = GermDocument::from_interior(&fix_a(), "isolated zeros at 2s in Z + iZ")?;
    let text = doc.to_json();
    println!("{text}");
    assert_eq!(parse_germ(&text, true)?, doc);

    let config = RunConfig {
        point: Some(Scalar::frac(1, 10)),
        timing: false,
        ..RunConfig::default()
    };
    let result = run_command(Command::GradingAt, text.as_bytes(), true, &config);
    println!("grading-at 1/10 -> exit {}, lift {}", result.exit_code, result.outcome["lift"]);

    let broken = text.replace("\"radius\": \"1\"", "\"radius\": \"2/2\"");
    let result = run_command(Command::Validate, broken.as_bytes(), true, &config);
    println!("non-reduced radius -> exit {}, {:?}", result.exit_code, result.error);
    Ok(())
}
