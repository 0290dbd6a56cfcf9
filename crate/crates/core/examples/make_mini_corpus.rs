//! Regenerates the bundled mini-corpus: `cargo run -p fluency-core --example
//! make_mini_corpus -- data/mini-corpus`.

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "data/mini-corpus".into());
    let manifest = fluency_core::synth::write_mini_corpus(std::path::Path::new(&dir))?;
    println!("{}", manifest.display());
    Ok(())
}
