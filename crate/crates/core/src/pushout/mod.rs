//! Push-outs `M ⨿_N L` of affine monoids, held as the diagram `M <- N -> L`.
//!
//! The push-out itself is never presented. Its sharpness, the locality of
//! the insertions and quasi-integrality are decided from the diagram, and a
//! bounded congruence closure ([`oracle`]) is available as an independent check.

pub mod oracle;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;
use crate::hilbert::{self, Graded};
use crate::intlin::{
    self, cokernel_invariants, is_zero_vec, AbelianGroupInvariants, IntegerMatrix,
};
use crate::monoid::{AffineMonoid, LatticeMap};

pub use oracle::{bounded_pushout_oracle, Absorption, FinitePushoutApprox, Pair};

/// The diagram `M <-f- N -g-> L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutData {
    f: LatticeMap,
    g: LatticeMap,
}

impl PushoutData {
    pub fn new(f: LatticeMap, g: LatticeMap) -> Result<Self, Error> {
        if f.source() != g.source() {
            return Err(Error::MismatchedSources);
        }
        Ok(PushoutData { f, g })
    }

    pub fn f(&self) -> &LatticeMap {
        &self.f
    }

    pub fn g(&self) -> &LatticeMap {
        &self.g
    }

    pub fn n(&self) -> &AffineMonoid {
        self.f.source()
    }

    pub fn m(&self) -> &AffineMonoid {
        self.f.target()
    }

    pub fn l(&self) -> &AffineMonoid {
        self.g.target()
    }
}

/// Hypotheses under which the push-out is sharp with local insertions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PushoutValidation {
    pub m_sharp: bool,
    pub n_sharp: bool,
    pub l_sharp: bool,
    pub f_local: bool,
    pub g_local: bool,
}

impl PushoutValidation {
    pub fn all_hold(&self) -> bool {
        self.m_sharp && self.n_sharp && self.l_sharp && self.f_local && self.g_local
    }
}

pub fn validate_pushout(data: &PushoutData) -> PushoutValidation {
    PushoutValidation {
        m_sharp: data.m().is_sharp(),
        n_sharp: data.n().is_sharp(),
        l_sharp: data.l().is_sharp(),
        f_local: data.f.is_local(),
        g_local: data.g.is_local(),
    }
}

/// Invariants of the push-out group `(M^gp ⊕ L^gp) / N^gp`, with `n`
/// embedded as `(f(n), -g(n))`.
pub fn pushout_group_invariants(data: &PushoutData) -> AbelianGroupInvariants {
    let f = data.f.gp_coordinate_matrix();
    let g = data.g.gp_coordinate_matrix();
    cokernel_invariants(&f.vstack(&g.negated()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    QuasiIntegral,
    NotQuasiIntegral,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::QuasiIntegral => "quasi_integral",
            Verdict::NotQuasiIntegral => "not_quasi_integral",
            Verdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIntegralityReport {
    pub verdict: Verdict,
    /// `n ∈ N^gp` (ambient coordinates) with `f(n) ∈ M`, `-g(n) ∈ L` and a
    /// nonzero image; present exactly when the verdict is negative.
    pub witness: Option<Vec<BigInt>>,
}

const MULTIPLE_LIMIT: u32 = 8;

/// Decides quasi-integrality of `M ⨿_N L`.
///
/// The push-out fails to be quasi-integral iff some `n ∈ N^gp` has
/// `f(n) ∈ M`, `-g(n) ∈ L` and `(f(n), g(n)) ≠ 0`. For saturated `M`, `L`
/// these conditions cut out the lattice points of a rational cone `K`, and it
/// suffices to inspect a lattice basis of its lineality space and its Hilbert
/// basis. Otherwise the cone is only a relaxation: an empty relaxation still
/// proves quasi-integrality, and candidates are confirmed by testing small
/// multiples against the monoids themselves.
pub fn quasi_integrality(data: &PushoutData) -> QuasiIntegralityReport {
    let n = data.n();
    let r = n.gp_rank();
    if r == 0 {
        return QuasiIntegralityReport {
            verdict: Verdict::QuasiIntegral,
            witness: None,
        };
    }
    let f = data.f.gp_matrix();
    let g = data.g.gp_matrix();
    let mut inequalities: Vec<Vec<BigInt>> = Vec::new();
    for lambda in data.m().dual_facets() {
        inequalities.push(f.transpose().mul_vec(&lambda));
    }
    for mu in data.l().dual_facets() {
        inequalities.push(g.negated().transpose().mul_vec(&mu));
    }
    let points = hilbert::cone_lattice_points(&inequalities, r)
        .expect("the cone modulo its lineality space is salient");
    let nonzero_image = |z: &[BigInt]| !is_zero_vec(&f.mul_vec(z)) || !is_zero_vec(&g.mul_vec(z));

    let basis = n.gp_matrix();
    let mut candidates: Vec<Graded> = Vec::new();
    for l in points.lineality.iter().filter(|l| nonzero_image(l)) {
        for v in [l.clone(), intlin::neg(l)] {
            candidates.push(Graded {
                degree: BigInt::zero(),
                vector: v,
            });
        }
    }
    candidates.extend(
        points
            .hilbert_basis
            .into_iter()
            .filter(|h| nonzero_image(&h.vector)),
    );
    if candidates.is_empty() {
        return QuasiIntegralityReport {
            verdict: Verdict::QuasiIntegral,
            witness: None,
        };
    }

    let exact = data.m().is_saturated() && data.l().is_saturated();
    let passes = |z: &[BigInt]| {
        data.m().contains(&f.mul_vec(z)) && data.l().contains(&intlin::neg(&g.mul_vec(z)))
    };
    let multiples = if exact { 1 } else { MULTIPLE_LIMIT };
    let mut found: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    for c in &candidates {
        for a in 1..=multiples {
            let a = BigInt::from(a);
            let z = intlin::scale(&a, &c.vector);
            if exact || passes(&z) {
                found.push((&c.degree * &a, basis.mul_vec(&z)));
                break;
            }
        }
    }
    found.sort();
    match found.into_iter().next() {
        Some((_, w)) => QuasiIntegralityReport {
            verdict: Verdict::NotQuasiIntegral,
            witness: Some(w),
        },
        None => QuasiIntegralityReport {
            verdict: Verdict::Unknown,
            witness: None,
        },
    }
}

fn check_nonqi_hypotheses(i1: &LatticeMap, i2: &LatticeMap) -> Result<(), Error> {
    if i1.source() != i2.source() {
        return Err(Error::MismatchedSources);
    }
    let n = i1.source();
    if !n.is_sharp() {
        return Err(Error::NotSharp("N".into()));
    }
    if !n.is_saturated() {
        return Err(Error::NotSaturated("N".into()));
    }
    for (name, map) in [("i1", i1), ("i2", i2)] {
        if map.is_injective() {
            return Err(Error::InjectiveMap(name.into()));
        }
    }
    for (name, map) in [("i1", i1), ("i2", i2)] {
        if !map.is_local() {
            return Err(Error::NotLocal(name.into()));
        }
    }
    Ok(())
}

/// First of `±z` (for the first Hermite kernel vector `z`) outside `excluded`.
///
/// One of them always qualifies: `excluded` is sharp and `z ≠ 0`.
fn kernel_vector_outside(map: &LatticeMap, excluded: &AffineMonoid) -> Vec<BigInt> {
    let z = map
        .gp_kernel()
        .into_iter()
        .next()
        .expect("non-injective map");
    if !excluded.contains(&z) {
        return z;
    }
    let minus = intlin::neg(&z);
    assert!(
        !excluded.contains(&minus),
        "a sharp monoid has no nonzero units"
    );
    minus
}

/// `n1 ∈ ker(i1^gp) \ N` and `n2 ∈ ker(i2^gp) \ <N, -n1>^sat`.
pub fn kernel_witnesses(
    i1: &LatticeMap,
    i2: &LatticeMap,
) -> Result<(Vec<BigInt>, Vec<BigInt>), Error> {
    check_nonqi_hypotheses(i1, i2)?;
    let n = i1.source();
    let n1 = kernel_vector_outside(i1, n);
    let l1 = n.adjoin_negative_sat(&n1)?;
    let n2 = kernel_vector_outside(i2, &l1);
    Ok((n1, n2))
}

/// A monoid `N ⊆ L ⊆ N^gp` making both push-outs along `N -> L` fail
/// quasi-integrality, with the data that certifies it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonQiExtension {
    pub n1: Vec<BigInt>,
    pub n2: Vec<BigInt>,
    pub extension: AffineMonoid,
    pub inclusion: LatticeMap,
    /// Verdicts for the push-outs of `i1` and `i2` along the inclusion.
    pub reports: [QuasiIntegralityReport; 2],
}

/// `L = <N, -n1, -n2>^sat` for the kernel witnesses of `i1`, `i2`, verified
/// to be sharp, saturated, squeezed between `N` and `N^gp`, and to make both
/// push-outs non-quasi-integral.
pub fn nonqi_extension(i1: &LatticeMap, i2: &LatticeMap) -> Result<NonQiExtension, Error> {
    check_nonqi_hypotheses(i1, i2)?;
    for (name, m) in [
        ("the target of i1", i1.target()),
        ("the target of i2", i2.target()),
    ] {
        if !m.is_sharp() {
            return Err(Error::NotSharp(name.into()));
        }
        if !m.is_saturated() {
            return Err(Error::NotSaturated(name.into()));
        }
    }
    let (n1, n2) = kernel_witnesses(i1, i2)?;
    let n = i1.source();
    let mut gens = n.generators().to_vec();
    gens.push(intlin::neg(&n1));
    gens.push(intlin::neg(&n2));
    let l = AffineMonoid::new(n.ambient_dim(), gens)?.saturation();

    if !n.generators().iter().all(|x| l.contains(x)) {
        return Err(Error::VerificationFailed("N is not contained in L".into()));
    }
    if l.gp_basis() != n.gp_basis() {
        return Err(Error::VerificationFailed("L^gp differs from N^gp".into()));
    }
    if !l.is_sharp() {
        return Err(Error::VerificationFailed("L is not sharp".into()));
    }
    if !l.is_saturated() {
        return Err(Error::VerificationFailed("L is not saturated".into()));
    }
    let inclusion = LatticeMap::new(
        n.clone(),
        l.clone(),
        IntegerMatrix::identity(n.ambient_dim()),
    )?;
    let mut reports = Vec::with_capacity(2);
    for (name, map) in [("i1", i1), ("i2", i2)] {
        let data = PushoutData::new(map.clone(), inclusion.clone())?;
        let report = quasi_integrality(&data);
        if report.verdict != Verdict::NotQuasiIntegral {
            return Err(Error::VerificationFailed(format!(
                "the push-out along {name} is {}",
                report.verdict
            )));
        }
        reports.push(report);
    }
    let reports: [QuasiIntegralityReport; 2] = reports.try_into().expect("two reports");
    Ok(NonQiExtension {
        n1,
        n2,
        extension: l,
        inclusion,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::to_big;

    fn mon(d: usize, gens: &[&[i64]]) -> AffineMonoid {
        AffineMonoid::from_i64(d, gens).unwrap()
    }

    fn map(source: &AffineMonoid, target: &AffineMonoid, rows: &[&[i64]]) -> LatticeMap {
        LatticeMap::new(
            source.clone(),
            target.clone(),
            IntegerMatrix::from_i64_rows(source.ambient_dim(), rows).unwrap(),
        )
        .unwrap()
    }

    fn half_cone() -> AffineMonoid {
        mon(2, &[&[1, 0], &[-1, 1]])
    }

    fn sum_diagram() -> PushoutData {
        let n2 = AffineMonoid::free(2);
        let n = AffineMonoid::free(1);
        let l = half_cone();
        PushoutData::new(
            map(&n2, &n, &[&[1, 1]]),
            LatticeMap::new(n2, l, IntegerMatrix::identity(2)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_pushout(&sum_diagram()).all_hold());
        let n = AffineMonoid::free(1);
        let zero = map(&n, &n, &[&[0]]);
        let v = validate_pushout(&PushoutData::new(zero, LatticeMap::identity(n)).unwrap());
        assert!(!v.f_local && v.g_local);
        let z = AffineMonoid::zero(1);
        let id = LatticeMap::identity(z);
        assert!(validate_pushout(&PushoutData::new(id.clone(), id).unwrap()).all_hold());
    }

    #[test]
    fn mismatched_sources() {
        let n = AffineMonoid::free(1);
        let n2 = AffineMonoid::free(2);
        assert_eq!(
            PushoutData::new(LatticeMap::identity(n), LatticeMap::identity(n2)),
            Err(Error::MismatchedSources)
        );
    }

    #[test]
    fn group_invariants() {
        let z = AffineMonoid::zero(1);
        let n2 = AffineMonoid::free(2);
        let n = AffineMonoid::free(1);
        let data = PushoutData::new(map(&z, &n2, &[&[0], &[0]]), map(&z, &n, &[&[0]])).unwrap();
        let inv = pushout_group_invariants(&data);
        assert_eq!((inv.free_rank, inv.torsion.len()), (3, 0));

        let id = LatticeMap::identity(n2.clone());
        let inv = pushout_group_invariants(&PushoutData::new(id.clone(), id).unwrap());
        assert_eq!((inv.free_rank, inv.torsion.len()), (2, 0));

        let double = map(&n, &n, &[&[2]]);
        let inv = pushout_group_invariants(&PushoutData::new(double.clone(), double).unwrap());
        assert_eq!(inv.free_rank, 1);
        assert_eq!(inv.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn quasi_integrality_examples() {
        let z = AffineMonoid::zero(1);
        let n = AffineMonoid::free(1);
        let data = PushoutData::new(map(&z, &n, &[&[0]]), map(&z, &n, &[&[0]])).unwrap();
        assert_eq!(quasi_integrality(&data).verdict, Verdict::QuasiIntegral);

        let report = quasi_integrality(&sum_diagram());
        assert_eq!(report.verdict, Verdict::NotQuasiIntegral);
        assert_eq!(report.witness, Some(to_big(&[1, -1])));

        let id = LatticeMap::identity(n);
        let report = quasi_integrality(&PushoutData::new(id.clone(), id).unwrap());
        assert_eq!(report.verdict, Verdict::QuasiIntegral);
        assert_eq!(report.witness, None);
    }

    #[test]
    fn quasi_integrality_with_units_in_k() {
        // N = Z, f = g = 0 into N: every n satisfies the cone conditions but
        // all images vanish
        let z = mon(1, &[&[1], &[-1]]);
        let n = AffineMonoid::free(1);
        let zero = map(&z, &n, &[&[0]]);
        let report = quasi_integrality(&PushoutData::new(zero.clone(), zero).unwrap());
        assert_eq!(report.verdict, Verdict::QuasiIntegral);

        // N = Z into Z on both sides: the push-out is Z, a group
        let id = LatticeMap::identity(z.clone());
        let report = quasi_integrality(&PushoutData::new(id.clone(), id).unwrap());
        assert_eq!(report.verdict, Verdict::NotQuasiIntegral);
        assert_eq!(report.witness, Some(to_big(&[-1])));
    }

    #[test]
    fn unsaturated_targets() {
        let n = AffineMonoid::free(1);
        let m = mon(1, &[&[2], &[3]]);
        let l = mon(1, &[&[1], &[-1]]);
        // f(1) = 2 lies in M and -g(1) = -1 in the group L
        let data = PushoutData::new(map(&n, &m, &[&[2]]), map(&n, &l, &[&[1]])).unwrap();
        let report = quasi_integrality(&data);
        assert_eq!(report.verdict, Verdict::NotQuasiIntegral);
        assert_eq!(report.witness, Some(to_big(&[1])));

        let data = PushoutData::new(map(&n, &m, &[&[2]]), map(&n, &n, &[&[1]])).unwrap();
        assert_eq!(quasi_integrality(&data).verdict, Verdict::QuasiIntegral);
    }

    #[test]
    fn kernel_witness_examples() {
        let n2 = AffineMonoid::free(2);
        let n = AffineMonoid::free(1);
        let sum = map(&n2, &n, &[&[1, 1]]);
        assert_eq!(
            kernel_witnesses(&sum, &sum).unwrap(),
            (to_big(&[1, -1]), to_big(&[1, -1]))
        );
        let other = map(&n2, &n, &[&[2, 1]]);
        assert_eq!(
            kernel_witnesses(&sum, &other).unwrap(),
            (to_big(&[1, -1]), to_big(&[1, -2]))
        );
        let diag = map(&n, &n2, &[&[1], &[1]]);
        assert_eq!(
            kernel_witnesses(&diag, &diag),
            Err(Error::InjectiveMap("i1".into()))
        );
    }

    #[test]
    fn extension_examples() {
        let n2 = AffineMonoid::free(2);
        let n = AffineMonoid::free(1);
        let sum = map(&n2, &n, &[&[1, 1]]);
        let ext = nonqi_extension(&sum, &sum).unwrap();
        assert_eq!(ext.extension.generator_set(), half_cone().generator_set());
        for r in &ext.reports {
            assert_eq!(r.witness, Some(to_big(&[1, -1])));
        }

        let other = map(&n2, &n, &[&[2, 1]]);
        let ext = nonqi_extension(&sum, &other).unwrap();
        assert_eq!(ext.extension.generator_set(), half_cone().generator_set());
        assert_eq!(ext.reports[1].witness, Some(to_big(&[1, -2])));

        let diag = map(&n, &n2, &[&[1], &[1]]);
        assert_eq!(
            nonqi_extension(&diag, &diag),
            Err(Error::InjectiveMap("i1".into()))
        );
    }
}
