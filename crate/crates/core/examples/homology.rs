//! Integral homology through Smith normal form.
//!
//!     cargo run --example homology

use spectacular::builder::{build_k1, BuildRecipe};
use spectacular::complexes::{subdivide_edges, SimpleGraph, TwoComplex};
use spectacular::homology::{boundary_matrices, homology, smith_normal_form, IntMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&m);
    println!("invariant factors: {:?}", snf.diagonal);
    assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.diagonal_matrix());

    // one hexagon on a graph with three extra chords: each chord is a free H1 class
    let g = SimpleGraph::new(
        6,
        vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 4), (2, 5)],
    )?;
    let hexagon = TwoComplex::new(g, vec![vec![0, 1, 2, 3, 4, 5]])?;
    println!("hexagon with chords: {}", homology(&hexagon).summary());

    let k = build_k1(&BuildRecipe::for_order(3, 4)?)?;
    println!("K1 for (4, 3): {}", homology(&k).summary());
    let (d1, d2) = boundary_matrices(&k);
    println!(
        "  boundary maps {}x{} and {}x{}",
        d1.rows(),
        d1.cols(),
        d2.rows(),
        d2.cols()
    );
    println!(
        "  after subdividing edges in 3: {}",
        homology(&subdivide_edges(&k, 3)?).summary()
    );
    Ok(())
}
