//! Writes the built-in germs as JSON documents: `cargo run --example write_corpus -- <dir>`.

use std::path::PathBuf;
use zerolocus::io::corpus;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("fixtures/corpus"));
    std::fs::create_dir_all(&dir)?;
    for doc in corpus()? {
        let path = dir.join(format!("{}.json", doc.metadata.name));
        std::fs::write(&path, doc.to_json())?;
        println!("{}", path.display());
    }
    Ok(())
}
