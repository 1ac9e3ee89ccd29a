//! Dimension of sets given by forbidden patterns, allowed symbols,
//! automata and unions.
//!
//!     cargo run --example hausdorff_dimension

use galedim::dimension::{dim_search, hausdorff_sum, stability_check, SetDescription};
use galedim::{Exponent, NiceCoverDescriptor};

fn main() -> galedim::Result<()> {
    let ternary = NiceCoverDescriptor::symbolic(3)?;
    let middle_thirds = SetDescription::forbid_symbol(3, 1);
    let e = dim_search(&ternary, &middle_thirds, 40)?;
    println!("middle thirds: {:.12} ({}), log2/log3 = {:.12}", e.estimate, e.label, 2f64.ln() / 3f64.ln());
    println!("  bracket [{:.6}, {:.6}], count slope {:.6}", e.lower, e.upper, e.log_count);

    // The uniform cover at level n has total s-mass exactly 1 at s = log2/log3.
    for n in [1, 10, 40] {
        println!("  H-sum at level {n}: {}", hausdorff_sum(&ternary, &middle_thirds, Exponent::log_ratio(2, 3), n)?);
    }

    let square = NiceCoverDescriptor::cube(2, 3)?;
    let carpet = SetDescription::forbid_symbol(9, 4);
    println!("Sierpiński carpet: {:.12}", dim_search(&square, &carpet, 30)?.estimate);

    let binary = NiceCoverDescriptor::symbolic(2)?;
    let golden: SetDescription = r#"{"mode": "forbidden", "base": 2, "patterns": ["11"]}"#.parse()?;
    println!("no two consecutive ones: {:.12} (log2 φ = {:.12})", dim_search(&binary, &golden, 40)?.estimate, ((1.0 + 5f64.sqrt()) / 2.0).log2());

    // Finite stability: dim(A ∪ B) = max(dim A, dim B).
    let b = SetDescription::Forbidden { base: 2, patterns: vec!["00".into(), "111".into()], prefixes: vec![] };
    let r = stability_check(&binary, &[golden, b], 40)?;
    println!("union {:.9}, components {:?}, difference {:.2e}", r.union, r.components, r.difference);
    Ok(())
}
