//! Nice covers: addresses, diameters, membership and the axiom checker.
//!
//!     cargo run --example cover_axioms

use galedim::cover::{children, diam, representation, validate_nice_axioms};
use galedim::{NiceCoverDescriptor, PointRep, Rat};

fn main() -> galedim::Result<()> {
    let cantor = NiceCoverDescriptor::symbolic(3)?;
    let square = NiceCoverDescriptor::cube(2, 2)?;

    for cover in [&cantor, &square] {
        println!("{cover}: branching {}, c = {}, ζ = {}", cover.branching(), cover.c(), cover.zeta());
        let report = validate_nice_axioms(cover, 5);
        println!("{report}");
    }

    // Addresses are digit strings; level-m elements have diameter radix^-m.
    let u = square.parse_address("31")?;
    let sides: Vec<String> = square.element_box(&u)?.iter().map(|(lo, hi)| format!("[{lo}, {hi})")).collect();
    println!("element {u} of {square}: box {}, diam {}", sides.join(" × "), diam(&square, &u)?);
    for child in children(&square, &u)? {
        println!("  child {child}");
    }

    // A point of the unit square and the nested elements containing it.
    let x = PointRep::Coordinates(vec![Rat::new(5, 7), Rat::new(1, 3)]);
    for (level, a) in representation(&square, &x, 6)?.iter().enumerate() {
        let name = if a.is_root() { "root".to_string() } else { a.to_string() };
        println!("level {level}: {name:<6} contains x: {}", square.contains(a, &x)?);
    }
    Ok(())
}
