//! Log points and their morphisms at the level of charts.
//!
//! An fs log point is represented by its sharp saturated chart monoid and a
//! morphism of log points by a local map of charts. Strictness becomes
//! "the chart map is an isomorphism".

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::Error;
use crate::intlin::{cokernel_invariants, rational_rank, IntegerMatrix};
use crate::monoid::{fiber_product_saturated, AffineMonoid, LatticeMap};
use crate::pushout::{pushout_group_invariants, PushoutData};

/// A sharp saturated chart monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPoint {
    monoid: AffineMonoid,
}

impl ChartPoint {
    pub fn new(monoid: AffineMonoid) -> Result<Self, Error> {
        if !monoid.is_sharp() {
            return Err(Error::NotSharp("the chart monoid".into()));
        }
        if !monoid.is_saturated() {
            return Err(Error::NotSaturated("the chart monoid".into()));
        }
        Ok(ChartPoint { monoid })
    }

    pub fn monoid(&self) -> &AffineMonoid {
        &self.monoid
    }
}

/// A local map between chart monoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMorphism {
    map: LatticeMap,
}

impl ChartMorphism {
    pub fn new(map: LatticeMap) -> Result<Self, Error> {
        ChartPoint::new(map.source().clone())?;
        ChartPoint::new(map.target().clone())?;
        if !map.is_local() {
            return Err(Error::NotLocal("the chart morphism".into()));
        }
        Ok(ChartMorphism { map })
    }

    pub fn map(&self) -> &LatticeMap {
        &self.map
    }
}

/// Whether the images of the source generators generate the target monoid.
pub fn image_generates(map: &LatticeMap) -> bool {
    let images: Vec<Vec<BigInt>> = map
        .source()
        .generators()
        .iter()
        .map(|g| map.apply(g))
        .collect();
    let image = AffineMonoid::new(map.target().ambient_dim(), images).expect("image dimension");
    map.target().generators().iter().all(|g| image.contains(g))
}

/// Monoid isomorphism: bijective on groupifications and onto the target monoid.
pub fn is_isomorphism(map: &LatticeMap) -> bool {
    let gp = map.gp_coordinate_matrix();
    if gp.rows() != gp.cols() {
        return false;
    }
    if gp.rows() > 0 && !gp.determinant().abs().eq(&BigInt::from(1)) {
        return false;
    }
    image_generates(map)
}

pub fn is_strict_chart(phi: &ChartMorphism) -> bool {
    is_isomorphism(&phi.map)
}

/// `(rank of the self-push-out group, 2·rank(target gp) − rank(φ^gp))`.
pub fn self_pushout_ranks(phi: &LatticeMap) -> (usize, usize) {
    let data = PushoutData::new(phi.clone(), phi.clone()).expect("same source");
    let lhs = pushout_group_invariants(&data).free_rank;
    let rhs = 2 * phi.target().gp_rank() - rational_rank(&phi.gp_matrix());
    (lhs, rhs)
}

/// The cokernel of `φ^gp` is torsion, i.e. `φ^gp` is rationally surjective.
pub fn diagonal_rank_condition(phi: &ChartMorphism) -> bool {
    let (lhs, rhs) = self_pushout_ranks(&phi.map);
    assert_eq!(lhs, rhs, "rank of the self-push-out group");
    cokernel_invariants(&phi.map.gp_coordinate_matrix()).free_rank == 0
}

/// `φ^gp` is surjective: its cokernel is torsion-free of rank zero.
pub fn kummer_strict_condition(phi: &ChartMorphism) -> bool {
    let surjective = cokernel_invariants(&phi.map.gp_coordinate_matrix()).is_trivial();
    if surjective && phi.map.is_injective() && image_generates(&phi.map) {
        assert!(
            is_strict_chart(phi),
            "a bijective gp map onto generators is strict"
        );
    }
    surjective
}

/// The chart `M_X ×_{M_Z} M_Y` of the fiber product of two log points over
/// a third, provided one of the two maps is strict. The result is checked
/// to be isomorphic to the other factor by the projection.
pub fn pushout_chart(s: &ChartMorphism, t: &ChartMorphism) -> Result<AffineMonoid, Error> {
    if s.map.target() != t.map.target() {
        return Err(Error::MismatchedTargets);
    }
    let s_strict = is_strict_chart(s);
    let t_strict = is_strict_chart(t);
    if !s_strict && !t_strict {
        return Err(Error::NoStrictMorphism);
    }
    let w = fiber_product_saturated(&s.map, &t.map)?;
    let dx = s.map.source().ambient_dim();
    let dy = t.map.source().ambient_dim();
    let (other, projection) = if s_strict {
        (t.map.source(), projection(dx, dy, false))
    } else {
        (s.map.source(), projection(dx, dy, true))
    };
    let p = LatticeMap::new(w.clone(), other.clone(), projection)?;
    if !is_isomorphism(&p) {
        return Err(Error::VerificationFailed(
            "the projection of the fiber product is not an isomorphism".into(),
        ));
    }
    if !w.is_sharp() || !w.is_saturated() {
        return Err(Error::VerificationFailed(
            "the fiber product is not sharp and saturated".into(),
        ));
    }
    Ok(w)
}

/// Projection `Z^(dx+dy) -> Z^dx` (first) or `-> Z^dy` (second).
fn projection(dx: usize, dy: usize, first: bool) -> IntegerMatrix {
    let (rows, offset) = if first { (dx, 0) } else { (dy, dx) };
    let vectors: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut r = vec![BigInt::from(0); dx + dy];
            r[offset + i] = BigInt::from(1);
            r
        })
        .collect();
    IntegerMatrix::from_rows(dx + dy, &vectors).expect("projection")
}
