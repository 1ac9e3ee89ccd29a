//! Gales certify upper bounds: a gale built from level-n covers of a set
//! succeeds on its points once s exceeds the dimension.
//!
//!     cargo run --example correspondence

use galedim::dimension::{combined_set_gale, gale_upper_bound, SetCoverGale, SetDescription};
use galedim::exact::rat_near;
use galedim::NiceCoverDescriptor;

fn main() -> galedim::Result<()> {
    let cover = NiceCoverDescriptor::symbolic(3)?;
    let set = SetDescription::forbid_symbol(3, 1);
    let dim = 2f64.ln() / 3f64.ln();

    for (label, s) in [("above", rat_near(dim + 0.02, 1000, true)), ("below", rat_near(dim - 0.05, 1000, false))] {
        let gale = SetCoverGale::new(&cover, &set, s, 40)?;
        let report = gale_upper_bound(&gale, &set, 64, 40, &[1, 4], 1, 6)?;
        println!("s = {s} ({label} the dimension): Kraft {:.3e}", gale.kraft().to_f64());
        for row in &report.rows {
            // one level-40 gale gains only a bounded factor; larger k needs deeper levels
            println!("  k = {}: {:.0}% of sampled points win 2^k·capital", row.k, 100.0 * row.relative);
        }
        println!("  {}", report.note);
    }

    // A weighted sum of set gales at increasing levels, one per threshold k.
    let s = rat_near(dim + 0.05, 100, true);
    let (sum, schedule) = combined_set_gale(&cover, &set, s, 1, 4, 120)?;
    println!("combined gale at s = {s}: {} terms, schedule {schedule:?}", sum.len());
    Ok(())
}
