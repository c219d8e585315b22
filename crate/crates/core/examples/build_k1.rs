//! The complexes attached to a conjugacy class, for a few (d, q).
//!
//!     cargo run --example build_k1

use spectacular::builder::{build_k1, build_k2, check_triples, BuildRecipe};
use spectacular::homology;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (q, d) in [(2, 3), (3, 4), (4, 3), (4, 5), (8, 7)] {
        let recipe = BuildRecipe::for_order(q, d)?;
        let k = build_k1(&recipe)?;
        let triples = check_triples(&k);
        println!(
            "d = {d}, q = {q}: V = {}, E = {}, F = {} (expected {}), {}, triples ok: {}",
            k.vertex_count(),
            k.edge_count(),
            k.polygon_count(),
            recipe.expected_polygons(),
            homology(&k).summary(),
            triples.holds
        );
    }

    let k1 = build_k1(&BuildRecipe::default())?;
    let k2 = build_k2(&k1, 0)?;
    println!(
        "K2 at vertex 0: F = {}, {}",
        k2.polygon_count(),
        homology(&k2).summary()
    );
    Ok(())
}
