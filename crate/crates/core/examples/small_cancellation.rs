//! Pieces, C'(1/6) checks and the all-degree certificate for H(S).
//!
//!     cargo run --release --example small_cancellation

use spectacular::builder::{build_stage, BuildRecipe, BuildStage};
use spectacular::complexes::SimpleGraph;
use spectacular::presentations::{
    certify_c16_family, check_c16, materialize_hs, max_piece_length, tautological_labelling, GraphicalPresentation,
    LabelSet,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (labels, square) = tautological_labelling(&SimpleGraph::cycle(4));
    let (two, three) = (square.degree_subdivision(2)?, square.degree_subdivision(-3)?);
    let piece = max_piece_length(&two, &three);
    let word = piece.word.map(|w| labels.format_word(&w)).unwrap_or_default();
    println!("square at degrees 2 and -3: longest piece {} ({word})", piece.length);

    let labels = LabelSet::new(["a", "b", "c", "d"])?;
    let words = [
        labels.parse_word("a b ~a ~b c d ~c ~d")?,
        labels.parse_word("a b ~a ~b d c ~d ~c")?,
    ];
    let p = GraphicalPresentation::from_words(labels, &words)?;
    print!("{}", check_c16(&p).to_text());

    let k = build_stage(&BuildRecipe::default(), BuildStage::Full)?;
    let h = materialize_hs(&k, &[1, 2, 3], &[2])?;
    println!(
        "H(S) truncated to window 1..3 with S = {{2}}: {} relators",
        h.relators().len()
    );
    print!("{}", check_c16(&h).to_text());
    print!("{}", certify_c16_family(&k)?.to_text());
    Ok(())
}
