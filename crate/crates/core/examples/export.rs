//! JSON and Graphviz output for complexes and presentations.
//!
//!     cargo run --example export -- /tmp/out

use std::path::PathBuf;

use spectacular::builder::{build_stage, BuildRecipe, BuildStage};
use spectacular::presentations::{materialize_hs, GraphicalPresentation};
use spectacular::TwoComplex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;

    let k = build_stage(&BuildRecipe::default(), BuildStage::K2)?;
    let json = serde_json::to_string(&k)?;
    let back: TwoComplex = serde_json::from_str(&json)?;
    assert_eq!(back, k);
    std::fs::write(dir.join("k2.json"), &json)?;
    std::fs::write(dir.join("k2.dot"), k.to_dot())?;

    let p = materialize_hs(&k, &[1, 2], &[])?;
    let json = serde_json::to_string_pretty(&p)?;
    let back: GraphicalPresentation = serde_json::from_str(&json)?;
    assert_eq!(back.relators().len(), p.relators().len());
    std::fs::write(dir.join("h.json"), json)?;
    std::fs::write(dir.join("h.dot"), p.to_dot())?;
    println!("wrote k2.json, k2.dot, h.json, h.dot to {}", dir.display());
    Ok(())
}
