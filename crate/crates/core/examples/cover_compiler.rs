//! Converting between covers and supergales in both directions.
//!
//!     cargo run --example cover_compiler

use galedim::compiler::{cover_to_supergale, kraft_sum, refine_to_nice, supergale_to_cover, Antichain};
use galedim::gale::{exact_tolerance, validate_supergale, Gale};
use galedim::{Exponent, NiceCoverDescriptor, PointRep, Rat};

fn main() -> galedim::Result<()> {
    let cover = NiceCoverDescriptor::symbolic(2)?;
    let s = Rat::new(1, 1);

    // A prefix code and its Kraft sum.
    let codewords = ["00", "01", "100"].iter().map(|t| cover.parse_address(t)).collect::<galedim::Result<Vec<_>>>()?;
    let targets = Antichain::new(codewords)?;
    let kraft = kraft_sum(&cover, &targets, Exponent::Rational(s))?;
    println!("Kraft sum at s = {s}: {kraft}");

    // Cover to supergale: worth exactly 1 on every target.
    let k = 0;
    let gale = cover_to_supergale(&cover, &targets, s, k)?;
    println!("{}", validate_supergale(&gale, 5, &exact_tolerance())?);
    for w in targets.elements() {
        println!("  d({w}) = {}", gale.value(w));
    }
    println!("{}", gale.to_json());

    // Supergale back to cover: the nodes where capital beats 2^k·d(root).
    let back = supergale_to_cover(&gale, k, 4)?;
    let back_kraft = kraft_sum(&cover, &back.antichain, Exponent::Rational(s))?;
    println!("extracted {} elements, Kraft sum {back_kraft}, complete: {}", back.antichain.len(), back.complete);

    // Raw balls in the unit interval refined to cover elements.
    let line = NiceCoverDescriptor::cube(1, 2)?;
    let balls = [(PointRep::Coordinates(vec![Rat::new(7, 16)]), Rat::new(1, 16))];
    let refined = refine_to_nice(&line, &balls, 1)?;
    for a in &refined.elements {
        println!("ball (7/16 ± 1/16) is covered by element {a} at level {}", a.level());
    }
    Ok(())
}
