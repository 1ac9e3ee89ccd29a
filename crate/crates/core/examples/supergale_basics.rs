//! Tabulated supergales: exact validation, equality checking, combination
//! and success along a point.
//!
//!     cargo run --example supergale_basics

use galedim::gale::{combine, evaluate_success, exact_tolerance, gale_equality_report, validate_supergale, Gale, SupergaleTable};
use galedim::{Address, NiceCoverDescriptor, PointRep, Rat, Surd};
use num_rational::BigRational;

fn main() -> galedim::Result<()> {
    let cover = NiceCoverDescriptor::symbolic(2)?;
    let s = Rat::new(1, 2);

    // Bets everything on the symbol 0 for eight rounds: each win multiplies
    // the stake by 2^s.
    let greedy = SupergaleTable::all_in(cover.clone(), 0, s, 8)?;
    println!("{}", validate_supergale(&greedy, 10, &exact_tolerance())?);
    println!("{}", gale_equality_report(&greedy, 10, &exact_tolerance())?);

    // Hand-written table: sibling values must satisfy d(0)+d(1) <= 2^s·d(root).
    let mut table = SupergaleTable::new(cover.clone(), s, galedim::gale::Extension::Zero);
    table.insert(Address::root(), Surd::one())?;
    table.insert(cover.parse_address("0")?, Surd::power(2, s))?;
    table.insert(cover.parse_address("1")?, Surd::zero())?;
    let report = validate_supergale(&table, 3, &exact_tolerance())?;
    println!("hand-written table passes: {}", report.passed());

    // Convex combinations of supergales are supergales.
    let half = BigRational::new(1.into(), 2.into());
    let mix = combine(&[(half.clone(), &greedy), (half, &table)])?;
    println!("mixture passes: {}", validate_supergale(&mix, 10, &exact_tolerance())?.passed());

    // Capital along 0^ω grows like 2^{m s}; along a random stream it dies.
    let thresholds = [Surd::from_integer(4)];
    for point in [PointRep::constant(0), PointRep::Stream { seed: 7 }] {
        let trace = evaluate_success(&greedy, &point, 8, &thresholds)?;
        println!("{}: max {} ≈ {:.4}, first level above 4: {:?}", point.id(), trace.max(), trace.max().to_f64(), trace.first_exceeding(&thresholds[0]));
    }
    println!("root capital {}", greedy.root_capital());
    Ok(())
}
