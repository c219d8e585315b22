//! Dehn reduction in H(S) and the set of n with a1^n ... ag^n = 1.
//!
//!     cargo run --release --example word_problem

use spectacular::builder::{build_stage, BuildRecipe, BuildStage};
use spectacular::presentations::{materialize_hs, Word};
use spectacular::wordproblem::{girth_cycle_tuple, kernel_witness_check, r_invariant, DehnReducer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = build_stage(&BuildRecipe::default(), BuildStage::Full)?;
    let window: Vec<i64> = (1..=6).collect();
    let tuple = girth_cycle_tuple(&k)?;

    let p = materialize_hs(&k, &window, &[2, 5])?;
    let reducer = DehnReducer::new(&p)?;
    for n in [1, 2, 5] {
        let w = Word::power_product(&tuple, n);
        let trace = reducer.reduce(&w);
        println!(
            "n = {n:>2}: length {} -> {} in {} steps",
            w.len(),
            trace.final_word.len(),
            trace.steps.len()
        );
    }
    let w = p.labels().parse_word("a1 a2 ~a1")?;
    print!("{}", reducer.reduce(&w).view(p.labels()).to_text());

    print!(
        "{}",
        r_invariant(&k, &window, &[2, 5], &tuple, (-6, 6), 1024)?.to_text()
    );
    let witness = kernel_witness_check(&k, &window, &[2], &[2, 3], 1024)?;
    println!("H({{2}}) -> H({{2, 3}}) has kernel: {}", witness.passed);
    Ok(())
}
