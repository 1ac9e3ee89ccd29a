//! Seedable generators for antichains, supergales, closed sets and
//! enumerations. Used by the property tests and the examples.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::compiler::{maximal_antichain, Antichain};
use crate::complexity::Enumeration;
use crate::cover::{Address, NiceCoverDescriptor};
use crate::dimension::SetDescription;
use crate::exact::{Rat, Surd};
use crate::gale::{Extension, SupergaleTable};

/// Uniform address with level in `min_level..=max_level`.
pub fn random_address<R: Rng>(rng: &mut R, cover: &NiceCoverDescriptor, min_level: usize, max_level: usize) -> Address {
    let level = rng.gen_range(min_level..=max_level);
    let b = cover.branching();
    Address::from_symbols((0..level).map(|_| rng.gen_range(0..b) as u8).collect())
}

/// Nonempty antichain: the maximal elements of up to `max_size` random
/// addresses of level `1..=max_depth`.
pub fn random_antichain<R: Rng>(rng: &mut R, cover: &NiceCoverDescriptor, max_depth: usize, max_size: usize) -> Antichain {
    let n = rng.gen_range(1..=max_size.max(1));
    let addrs: Vec<Address> = (0..n).map(|_| random_address(rng, cover, 1, max_depth.max(1))).collect();
    maximal_antichain(&addrs)
}

/// A valid supergale with random support of at most `max_nodes` stored nodes.
///
/// Each expanded node passes on a random fraction of `d(U)·radix^s`, split
/// among its children by random integer weights.
pub fn random_supergale<R: Rng>(
    rng: &mut R,
    cover: &NiceCoverDescriptor,
    s: Rat,
    depth: usize,
    max_nodes: usize,
) -> SupergaleTable {
    let extension = if rng.gen_bool(0.5) { Extension::Zero } else { Extension::UniformSplit };
    let mut table = SupergaleTable::new(cover.clone(), s, extension);
    let growth = Surd::power(cover.radix(), s);
    let root_value = Surd::from_rat(Rat::new(rng.gen_range(1..=8), rng.gen_range(1..=4)));
    table.insert(Address::root(), root_value.clone()).expect("root is valid");
    let mut frontier = vec![(Address::root(), root_value)];
    let b = cover.branching() as usize;
    while let Some((node, value)) = frontier.pop() {
        if node.level() >= depth || table.len() + b > max_nodes || (!node.is_root() && rng.gen_bool(0.4)) {
            continue;
        }
        let keep = if rng.gen_bool(0.5) { Rat::from_integer(1) } else { Rat::new(rng.gen_range(0..=4), 4) };
        let budget = (&value * &growth).scale(&rat(keep));
        let weights: Vec<i64> = (0..b).map(|_| rng.gen_range(0..=3)).collect();
        let total: i64 = weights.iter().sum();
        for (sym, w) in weights.iter().enumerate() {
            let v = if total == 0 { Surd::zero() } else { budget.scale(&rat(Rat::new(*w, total))) };
            let child = node.child(sym as u8);
            table.insert(child.clone(), v.clone()).expect("child of a valid node");
            frontier.push((child, v));
        }
    }
    table
}

fn rat(r: Rat) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Forbidden-pattern set with up to `max_patterns` patterns of length `1..=max_len`.
pub fn random_sft<R: Rng>(rng: &mut R, base: u32, max_patterns: usize, max_len: usize) -> SetDescription {
    let n = rng.gen_range(1..=max_patterns.max(1));
    let patterns = (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.max(1));
            Address::from_symbols((0..len).map(|_| rng.gen_range(0..base) as u8).collect()).to_string()
        })
        .collect();
    SetDescription::Forbidden { base, patterns, prefixes: Vec::new() }
}

/// `count` random addresses of level `1..=max_depth` with zero budgets.
pub fn random_enumeration<R: Rng>(rng: &mut R, cover: &NiceCoverDescriptor, count: usize, max_depth: usize) -> Enumeration {
    let mut pairs: Vec<(Address, f64)> =
        (0..count).map(|_| (random_address(rng, cover, 1, max_depth.max(1)), 0.0)).collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    pairs.dedup_by(|a, b| a.0 == b.0);
    Enumeration { pairs }
}
