//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use std::ops::RangeInclusive;

use affmon::{AffineMonoid, IntegerMatrix, LatticeMap};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter()
        .map(|x| i64::try_from(x).expect("small entry"))
        .collect()
}

pub fn random_vector(rng: &mut TestRng, d: usize, range: RangeInclusive<i64>) -> Vec<BigInt> {
    (0..d)
        .map(|_| BigInt::from(rng.gen_range(range.clone())))
        .collect()
}

pub fn random_vectors(
    rng: &mut TestRng,
    d: usize,
    count: usize,
    range: RangeInclusive<i64>,
) -> Vec<Vec<BigInt>> {
    (0..count)
        .map(|_| random_vector(rng, d, range.clone()))
        .collect()
}

/// A nonzero sharp monoid with generators drawn from `range`.
pub fn random_sharp(
    rng: &mut TestRng,
    dims: RangeInclusive<usize>,
    max_gens: usize,
    range: RangeInclusive<i64>,
) -> AffineMonoid {
    loop {
        let d = rng.gen_range(dims.clone());
        let k = rng.gen_range(1..=max_gens);
        let m = AffineMonoid::new(d, random_vectors(rng, d, k, range.clone())).unwrap();
        if !m.is_zero() && m.is_sharp() {
            return m;
        }
    }
}

/// The saturation of a random sharp monoid, with at most `max_hilbert`
/// Hilbert basis elements.
pub fn random_fs(
    rng: &mut TestRng,
    dims: RangeInclusive<usize>,
    max_gens: usize,
    range: RangeInclusive<i64>,
    max_hilbert: usize,
) -> AffineMonoid {
    loop {
        let m = random_sharp(rng, dims.clone(), max_gens, range.clone()).saturation();
        if m.generators().len() <= max_hilbert {
            return m;
        }
    }
}

/// A random integer matrix with `rows` rows and `cols` columns.
pub fn random_matrix(
    rng: &mut TestRng,
    rows: usize,
    cols: usize,
    range: RangeInclusive<i64>,
) -> IntegerMatrix {
    IntegerMatrix::from_rows(cols, &random_vectors(rng, cols, rows, range)).unwrap()
}

/// A local map out of `source` into the saturation of the monoid generated
/// by the images and `extras` random vectors, or `None` when that target is
/// not sharp or the map is not local.
pub fn random_local_map(
    rng: &mut TestRng,
    source: &AffineMonoid,
    target_dim: usize,
    range: RangeInclusive<i64>,
    extras: usize,
    extra_range: RangeInclusive<i64>,
) -> Option<LatticeMap> {
    let matrix = random_matrix(rng, target_dim, source.ambient_dim(), range);
    let mut gens: Vec<Vec<BigInt>> = source
        .generators()
        .iter()
        .map(|g| matrix.mul_vec(g))
        .collect();
    gens.extend(random_vectors(rng, target_dim, extras, extra_range));
    let target = AffineMonoid::new(target_dim, gens).unwrap();
    if !target.is_sharp() {
        return None;
    }
    let map = LatticeMap::new(source.clone(), target.saturation(), matrix).unwrap();
    map.is_local().then_some(map)
}
