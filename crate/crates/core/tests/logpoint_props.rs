mod common;

use affmon::logpoint::{
    diagonal_rank_condition, image_generates, is_strict_chart, kummer_strict_condition,
    pushout_chart, ChartMorphism,
};
use affmon::{AffineMonoid, IntegerMatrix, LatticeMap};
use common::{random_fs, random_local_map, rng, TestRng};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

/// A random unimodular matrix and its inverse, as products of elementary
/// row operations.
fn unimodular(rng: &mut TestRng, d: usize) -> (IntegerMatrix, IntegerMatrix) {
    let mut u = IntegerMatrix::identity(d);
    let mut inv = IntegerMatrix::identity(d);
    if d < 2 {
        return (u, inv);
    }
    for _ in 0..4 {
        let i = rng.gen_range(0..d);
        let j = (i + rng.gen_range(1..d)) % d;
        let k = rng.gen_range(-2..=2);
        let mut e = IntegerMatrix::identity(d);
        let mut e_inv = IntegerMatrix::identity(d);
        e[(i, j)] = BigInt::from(k);
        e_inv[(i, j)] = BigInt::from(-k);
        u = &e * &u;
        inv = &inv * &e_inv;
    }
    (u, inv)
}

/// A chart morphism into some sharp saturated target, or `None`.
fn random_chart(rng: &mut TestRng) -> Option<ChartMorphism> {
    let n = random_fs(rng, 1..=3, 4, -1..=2, 5);
    let t = rng.gen_range(1..=3);
    let extras = rng.gen_range(0..=1);
    let map = random_local_map(rng, &n, t, -1..=2, extras, -1..=2)?;
    ChartMorphism::new(map).ok()
}

/// `V·Z` and the strict chart `V·Z -> Z` given by `V^-1`.
fn strict_into(rng: &mut TestRng, z: &AffineMonoid) -> ChartMorphism {
    let (v, v_inv) = unimodular(rng, z.ambient_dim());
    let x = AffineMonoid::new(
        z.ambient_dim(),
        z.generators().iter().map(|g| v.mul_vec(g)).collect(),
    )
    .unwrap();
    ChartMorphism::new(LatticeMap::new(x, z.clone(), v_inv).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strict_charts_satisfy_both_conditions(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let phi = random_chart(&mut rng);
        prop_assume!(phi.is_some());
        let phi = phi.unwrap();
        let iso = strict_into(&mut rng, phi.map().target());
        prop_assert!(is_strict_chart(&iso));
        for m in [&phi, &iso] {
            if is_strict_chart(m) {
                prop_assert!(diagonal_rank_condition(m));
                prop_assert!(kummer_strict_condition(m));
            }
        }
    }

    #[test]
    fn strictness_characterised(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let phi = random_chart(&mut rng);
        prop_assume!(phi.is_some());
        let phi = phi.unwrap();
        let iso = strict_into(&mut rng, phi.map().target());
        for m in [&phi, &iso] {
            let criterion = kummer_strict_condition(m) && m.map().is_injective() && image_generates(m.map());
            prop_assert_eq!(criterion, is_strict_chart(m));
        }
    }

    #[test]
    fn fiber_charts_are_fs(seed in any::<u64>(), strict_first in any::<bool>()) {
        let mut rng = rng(seed);
        let t = random_chart(&mut rng);
        prop_assume!(t.is_some());
        let t = t.unwrap();
        let s = strict_into(&mut rng, t.map().target());
        let w = if strict_first { pushout_chart(&s, &t) } else { pushout_chart(&t, &s) }.unwrap();
        prop_assert!(w.is_sharp());
        prop_assert!(w.is_saturated());
        prop_assert_eq!(w.gp_rank(), t.map().source().gp_rank());
    }
}
