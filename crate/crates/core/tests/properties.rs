//! Randomised properties. Each case draws a seed and builds its inputs with
//! the crate's own generators, so failures shrink to a single reproducible seed.

use galedim::compiler::{cover_to_supergale, kraft_sum, maximal_antichain, supergale_to_cover};
use galedim::complexity::{counting_bounds, enumeration_to_supergale};
use galedim::dimension::{dim_search, SetDescription};
use galedim::gale::{default_tolerance, exact_tolerance, validate_supergale, Gale};
use galedim::random::{random_address, random_antichain, random_enumeration, random_sft, random_supergale};
use galedim::{Address, Exponent, NiceCoverDescriptor, Rat, Surd};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn covers() -> Vec<NiceCoverDescriptor> {
    vec![
        NiceCoverDescriptor::symbolic(2).unwrap(),
        NiceCoverDescriptor::symbolic(3).unwrap(),
        NiceCoverDescriptor::cube(2, 2).unwrap(),
    ]
}

fn pow2(k: i64) -> Surd {
    let p = BigInt::one() << k.unsigned_abs() as usize;
    Surd::from_rational(if k >= 0 { BigRational::from_integer(p) } else { BigRational::new(BigInt::one(), p) })
}

fn all_addresses(b: u32, depth: usize) -> Vec<Address> {
    let mut out = vec![Address::root()];
    let mut frontier = vec![Address::root()];
    for _ in 0..depth {
        frontier = frontier.iter().flat_map(|a| (0..b as u8).map(move |s| a.child(s))).collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn dim(cover: &NiceCoverDescriptor, set: &SetDescription) -> f64 {
    let e = dim_search(cover, set, 30).unwrap();
    if e.empty {
        f64::NEG_INFINITY
    } else {
        e.estimate
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn surd_text_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = [2u64, 3, 6, 12][rng.gen_range(0..4)];
        let mut x = Surd::zero();
        for _ in 0..rng.gen_range(1..5) {
            let e = Rat::new(rng.gen_range(-7..8), rng.gen_range(1..7));
            let c = BigRational::new(BigInt::from(rng.gen_range(-50..50)), BigInt::from(rng.gen_range(1..20)));
            x += &Surd::power(base, e).scale(&c);
        }
        let back: Surd = x.to_string().parse().unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(back.cmp_exact(&x), std::cmp::Ordering::Equal);
    }

    #[test]
    fn surd_order_agrees_with_floats_when_separated(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Surd::power(3, Rat::new(rng.gen_range(-20..20), rng.gen_range(1..9)));
        let b = Surd::power(3, Rat::new(rng.gen_range(-20..20), rng.gen_range(1..9)));
        let (fa, fb) = (a.to_f64(), b.to_f64());
        if (fa - fb).abs() > 1e-9 * fa.max(fb) {
            prop_assert_eq!(a < b, fa < fb);
        }
    }

    #[test]
    fn maximal_antichain_matches_brute_force(seed in any::<u64>(), n in 0usize..120) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = &covers()[rng.gen_range(0..3)];
        let addrs: Vec<Address> = (0..n).map(|_| random_address(&mut rng, cover, 0, 5)).collect();
        let fast: Vec<Address> = maximal_antichain(&addrs).elements().cloned().collect();
        let mut brute: Vec<Address> =
            addrs.iter().filter(|a| !addrs.iter().any(|b| b.is_proper_prefix_of(a))).cloned().collect();
        brute.sort();
        brute.dedup();
        prop_assert_eq!(fast, brute);
    }

    #[test]
    fn compiled_gales_are_exact_supergales(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = &covers()[rng.gen_range(0..3)];
        let target = random_antichain(&mut rng, cover, 6, 12);
        let s = Rat::new(rng.gen_range(1..=4), 4) * Rat::from_integer(cover.ambient_dimension() as i64);
        let kraft = kraft_sum(cover, &target, Exponent::Rational(s)).unwrap();
        // the largest label for which compilation is always permitted
        let mut k = 0i64;
        while kraft < pow2(-(k + 1)) {
            k += 1;
        }
        while kraft >= pow2(-k) && k > -64 {
            k -= 1;
        }
        let d = cover_to_supergale(cover, &target, s, k).unwrap();
        prop_assert!(validate_supergale(&d, target.max_level() + 2, &exact_tolerance()).unwrap().passed());
        for w in target.elements() {
            prop_assert_eq!(d.value(w), Surd::one());
        }
        prop_assert!(d.root_capital() <= Surd::power(cover.c() as u64, Rat::one() + s) * kraft);
    }

    #[test]
    fn extraction_matches_brute_force_on_small_supports(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = &covers()[rng.gen_range(0..2)];
        let s = [Rat::new(1, 2), Rat::new(1, 1), Rat::new(1, 3)][rng.gen_range(0..3)];
        let gale = random_supergale(&mut rng, cover, s, 4, 15);
        prop_assume!(!gale.root_capital().is_zero());
        let k = rng.gen_range(0..3);
        let depth = gale.support_depth() + 1;
        let ex = supergale_to_cover(&gale, k, depth).unwrap();
        let kraft = kraft_sum(cover, &ex.antichain, Exponent::Rational(s)).unwrap();
        prop_assert!(kraft <= pow2(-k));
        if ex.complete {
            let threshold = gale.root_capital() * pow2(k);
            let winners: Vec<Address> = all_addresses(cover.branching(), depth)
                .into_iter()
                .filter(|u| gale.value(u) > threshold)
                .collect();
            let brute: Vec<Address> = maximal_antichain(&winners).elements().cloned().collect();
            let got: Vec<Address> = ex.antichain.elements().cloned().collect();
            prop_assert_eq!(got, brute);
        }
    }

    #[test]
    fn enumerations_compile_to_supergales(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = &covers()[rng.gen_range(0..3)];
        let count = rng.gen_range(1..40);
        let e = random_enumeration(&mut rng, cover, count, 10);
        let s_prime = Rat::new(rng.gen_range(0..4), 4) * Rat::from_integer(cover.ambient_dimension() as i64);
        let s = s_prime + Rat::new(1, 4);
        let d = enumeration_to_supergale(cover, &e, s, s_prime).unwrap();
        prop_assert!(validate_supergale(&d, d.support_depth() + 1, &default_tolerance()).unwrap().passed());
    }

    #[test]
    fn counting_bound_holds_for_random_supergales(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = &covers()[rng.gen_range(0..3)];
        let s = Rat::new(rng.gen_range(1..=4), 4);
        let gale = random_supergale(&mut rng, cover, s, 6, 60);
        prop_assume!(!gale.root_capital().is_zero());
        let rows = counting_bounds(&gale, &[0, 1, 2, 3], &[1, 2, 4, 8]).unwrap();
        for row in rows {
            prop_assert!(row.holds, "{:?}", row);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dimension_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = rng.gen_range(2..=3u32);
        let cover = NiceCoverDescriptor::symbolic(base).unwrap();
        let a = random_sft(&mut rng, base, 3, 3);
        let b = random_sft(&mut rng, base, 3, 3);
        let (da, db) = (dim(&cover, &a), dim(&cover, &b));
        let union = SetDescription::Union { sets: vec![a.clone(), b.clone()] };
        let du = dim(&cover, &union);
        prop_assert!(du >= da.max(db) - 1e-9, "union {du} vs {da}, {db}");
        prop_assert!(du <= 1.0 + 1e-12);
        // forbidding more can only shrink the set
        let (SetDescription::Forbidden { patterns: pa, .. }, SetDescription::Forbidden { patterns: pb, .. }) = (&a, &b)
        else {
            unreachable!()
        };
        let both = SetDescription::Forbidden { base, patterns: [pa.clone(), pb.clone()].concat(), prefixes: Vec::new() };
        prop_assert!(dim(&cover, &both) <= da.min(db) + 1e-9);
    }
}
