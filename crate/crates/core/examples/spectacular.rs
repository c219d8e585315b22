//! The default spectacular complex and its seven conditions.
//!
//!     cargo run --release --example spectacular

use spectacular::builder::{build_spectacular, BuildRecipe};
use spectacular::complexes::{branch_separation, verify_spectacular, TwoComplex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (k, report) = build_spectacular(&BuildRecipe::default())?;
    println!(
        "V = {}, E = {}, F = {}, girth {}, branch separation {}",
        k.vertex_count(),
        k.edge_count(),
        k.polygon_count(),
        k.girth(),
        branch_separation(&k).0
    );
    print!("{}", report.to_text());

    // a lone polygon is too short relative to its own girth
    let report = verify_spectacular(&TwoComplex::single_polygon(13));
    println!("13-gon fails conditions {:?}", report.failed_conditions());
    Ok(())
}
