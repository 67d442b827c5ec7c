//! Writes the synthetic trial data and a matching `ontorec.toml`.
//!
//! ```text
//! cargo run -p ontorec --example synthetic_fixture -- out/ [seed]
//! ```

use std::path::PathBuf;

use ontorec::synthetic::Fixture;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "fixture".into()));
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2002);
    let f = Fixture::generate(seed);
    f.write_to(&dir)?;
    let config = format!(
        r#"[paths]
kb = "kb.jsonl"
corpus_manifest = "corpus/manifest.jsonl"
training = "training.jsonl"
logs = "logs.jsonl"
model = "model.json"
papers = "papers.jsonl"

[bootstrap]
reference_date = "{start}"

[replay]
start = "{start}"
weeks = {weeks}
"#,
        start = f.start,
        weeks = f.weeks
    );
    std::fs::write(dir.join("ontorec.toml"), config)?;
    println!("wrote fixture (seed {seed}) to {}", dir.display());
    Ok(())
}
