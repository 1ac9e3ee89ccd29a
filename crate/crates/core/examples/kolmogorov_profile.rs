//! Complexity profiles of points and the dimension they suggest, using a
//! compressor, an exact oracle and the gale-based search.
//!
//!     cargo run --release --example kolmogorov_profile

use galedim::complexity::{
    cdim_point_estimate, cdim_via_gales, kr_profile, CdimOptions, DeflateEstimator, LengthOracle,
};
use galedim::{NiceCoverDescriptor, PointRep, Rat};

fn main() -> galedim::Result<()> {
    let cover = NiceCoverDescriptor::symbolic(2)?;
    let deflate = DeflateEstimator::default();

    for point in [PointRep::constant(0), "word:/011".parse()?, PointRep::Stream { seed: 1 }] {
        let profile = kr_profile(&cover, &point, 1, 2048, &deflate)?;
        let est = cdim_point_estimate(&profile, Rat::new(1, 2))?;
        println!("{:<10} deflate estimate {:.4} (tail from r = {})", point.id(), est.estimate, est.tail_start);
    }

    // An oracle that charges α bits per symbol: the estimate recovers α.
    let alpha = Rat::new(2, 5);
    let oracle = LengthOracle { alpha };
    let point = PointRep::Stream { seed: 2 };
    let profile = kr_profile(&cover, &point, 1, 512, &oracle)?;
    print!("{}", profile.table().lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    let est = cdim_point_estimate(&profile, Rat::new(1, 2))?;
    println!("length oracle α = {alpha}: estimate {:.4}", est.estimate);

    let grid: Vec<Rat> = (1..=20).map(|i| Rat::new(i, 20)).collect();
    let report = cdim_via_gales(&cover, &point, &grid, 512, &oracle, &CdimOptions::default())?;
    println!("gale search: least succeeding s = {:?}, profile lower value {:.4}", report.upper, report.lower);
    Ok(())
}
