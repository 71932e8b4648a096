//! Affine monoids: finitely generated submonoids of `Z^d`.
//!
//! Every monoid represented here is integral (it sits inside a lattice), so
//! its groupification is the sublattice spanned by the generators and
//! "fine" holds by construction. "fs" coincides with [`AffineMonoid::is_saturated`].

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::cone::{self, ConeDescription};
use crate::error::Error;
use crate::hilbert;
use crate::intlin::{
    self, dot, hermite_normal_form, is_zero_vec, kernel_basis, solve_linear, IntegerMatrix,
};

/// Generators with multiplicities whose sum is the queried element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    /// `(generator index, multiplicity >= 1)`, sorted by index.
    pub coefficients: Vec<(usize, BigInt)>,
}

impl MembershipCertificate {
    pub fn evaluate(&self, monoid: &AffineMonoid) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); monoid.ambient_dim()];
        for (i, k) in &self.coefficients {
            out = intlin::add(&out, &intlin::scale(k, &monoid.generators()[*i]));
        }
        out
    }

    pub fn total_multiplicity(&self) -> BigInt {
        self.coefficients.iter().map(|(_, k)| k).sum()
    }
}

#[derive(Clone, Debug)]
struct SearchPlan {
    grading: Vec<BigInt>,
    free: Vec<usize>,
    free_degree: Vec<BigInt>,
    unit: Vec<usize>,
    unit_matrix: IntegerMatrix,
    /// constraints of cone(free[i..] ∪ unit), for i = 0..=free.len()
    suffix: Vec<Vec<Vec<BigInt>>>,
    /// strictly positive relation among the unit generators
    positive_relation: Vec<BigInt>,
}

#[derive(Clone, Debug, Default)]
struct Cache {
    gp_basis: OnceLock<Vec<Vec<BigInt>>>,
    cone: OnceLock<ConeDescription>,
    plan: OnceLock<SearchPlan>,
    units: OnceLock<Vec<Vec<BigInt>>>,
}

/// A finitely generated submonoid of `Z^ambient_dim`.
#[derive(Clone)]
pub struct AffineMonoid {
    ambient_dim: usize,
    generators: Vec<Vec<BigInt>>,
    cache: Cache,
}

impl PartialEq for AffineMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.generators == other.generators
    }
}

impl Eq for AffineMonoid {}

impl fmt::Debug for AffineMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineMonoid(Z^{}, <", self.ambient_dim)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = g.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, ">)")
    }
}

impl AffineMonoid {
    /// Zero vectors and repeated generators are dropped; order is otherwise kept.
    pub fn new(ambient_dim: usize, generators: Vec<Vec<BigInt>>) -> Result<Self, Error> {
        let mut gens: Vec<Vec<BigInt>> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: g.len(),
                });
            }
            if is_zero_vec(&g) || gens.contains(&g) {
                continue;
            }
            gens.push(g);
        }
        Ok(AffineMonoid {
            ambient_dim,
            generators: gens,
            cache: Cache::default(),
        })
    }

    pub fn from_i64(ambient_dim: usize, generators: &[&[i64]]) -> Result<Self, Error> {
        Self::new(
            ambient_dim,
            generators.iter().map(|g| intlin::to_big(g)).collect(),
        )
    }

    /// `N^d` with its standard generators.
    pub fn free(d: usize) -> Self {
        let gens = IntegerMatrix::identity(d).row_vectors();
        Self::new(d, gens).expect("standard basis")
    }

    pub fn zero(d: usize) -> Self {
        Self::new(d, Vec::new()).expect("empty generator list")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators as a sorted list, for order-insensitive comparisons.
    pub fn generator_set(&self) -> Vec<Vec<BigInt>> {
        let mut g = self.generators.clone();
        g.sort();
        g
    }

    /// Hermite basis of the groupification.
    pub fn gp_basis(&self) -> &[Vec<BigInt>] {
        self.cache.gp_basis.get_or_init(|| {
            if self.generators.is_empty() {
                return Vec::new();
            }
            let (h, _) = hermite_normal_form(
                &IntegerMatrix::from_rows(self.ambient_dim, &self.generators).expect("generators"),
            );
            h.row_vectors()
                .into_iter()
                .filter(|r| !is_zero_vec(r))
                .collect()
        })
    }

    pub fn gp_rank(&self) -> usize {
        self.gp_basis().len()
    }

    /// The groupification basis as the columns of a matrix.
    pub fn gp_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_columns(self.ambient_dim, self.gp_basis()).expect("gp basis")
    }

    /// Whether `v` lies in the groupification.
    pub fn in_gp(&self, v: &[BigInt]) -> bool {
        in_lattice(self.gp_basis(), self.ambient_dim, v)
    }

    /// Coordinates of a groupification element in [`Self::gp_basis`].
    pub fn gp_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        solve_linear(&self.gp_matrix(), v).ok().flatten()
    }

    pub(crate) fn cone(&self) -> &ConeDescription {
        self.cache
            .cone
            .get_or_init(|| cone::describe(&self.generators, self.ambient_dim))
    }

    /// Facet normals of the cone, followed by both signs of each equation
    /// of its span.
    pub fn dual_facets(&self) -> Vec<Vec<BigInt>> {
        self.cone().constraints()
    }

    fn plan(&self) -> &SearchPlan {
        self.cache.plan.get_or_init(|| {
            let cone = self.cone();
            let grading = cone.facet_sum(self.ambient_dim);
            let (unit, free): (Vec<usize>, Vec<usize>) =
                (0..self.generators.len()).partition(|&i| {
                    cone.facets
                        .iter()
                        .all(|f| dot(f, &self.generators[i]).is_zero())
                });
            let free_degree = free
                .iter()
                .map(|&i| dot(&grading, &self.generators[i]))
                .collect();
            let unit_vectors: Vec<Vec<BigInt>> =
                unit.iter().map(|&i| self.generators[i].clone()).collect();
            let suffix = (0..=free.len())
                .map(|k| {
                    let mut part: Vec<Vec<BigInt>> = free[k..]
                        .iter()
                        .map(|&i| self.generators[i].clone())
                        .collect();
                    part.extend(unit_vectors.iter().cloned());
                    cone::describe(&part, self.ambient_dim).constraints()
                })
                .collect();
            let unit_matrix = IntegerMatrix::from_columns(self.ambient_dim, &unit_vectors)
                .expect("unit generators");
            let positive_relation = positive_relation(&unit_matrix);
            SearchPlan {
                grading,
                free,
                free_degree,
                unit,
                unit_matrix,
                suffix,
                positive_relation,
            }
        })
    }

    /// Decides whether `x` is a nonnegative integer combination of the
    /// generators and returns such a combination.
    ///
    /// Generators spanning the unit face are handled as a lattice; the
    /// remaining ones are searched depth first, bounded by a grading that
    /// vanishes on units and pruned by the cones of the remaining generators.
    pub fn member(&self, x: &[BigInt]) -> Result<Option<MembershipCertificate>, Error> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: x.len(),
            });
        }
        if is_zero_vec(x) {
            return Ok(Some(MembershipCertificate {
                coefficients: Vec::new(),
            }));
        }
        let plan = self.plan();
        if !satisfies(&plan.suffix[0], x) {
            return Ok(None);
        }
        let mut counts = vec![BigInt::zero(); plan.free.len()];
        let mut failed = HashSet::new();
        let Some(unit_part) = self.search(plan, 0, x.to_vec(), &mut counts, &mut failed) else {
            return Ok(None);
        };
        let mut unit_part = unit_part;
        if let Some(shift) = unit_part
            .iter()
            .zip(&plan.positive_relation)
            .filter(|(a, _)| a.is_negative())
            .map(|(a, p)| (-a).div_ceil(p))
            .max()
        {
            for (a, p) in unit_part.iter_mut().zip(&plan.positive_relation) {
                *a += &shift * p;
            }
        }
        let mut coefficients: Vec<(usize, BigInt)> = plan
            .free
            .iter()
            .copied()
            .zip(counts)
            .chain(plan.unit.iter().copied().zip(unit_part))
            .filter(|(_, k)| k.is_positive())
            .collect();
        coefficients.sort();
        Ok(Some(MembershipCertificate { coefficients }))
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        matches!(self.member(x), Ok(Some(_)))
    }

    fn search(
        &self,
        plan: &SearchPlan,
        level: usize,
        rem: Vec<BigInt>,
        counts: &mut [BigInt],
        failed: &mut HashSet<(usize, Vec<BigInt>)>,
    ) -> Option<Vec<BigInt>> {
        if level == plan.free.len() {
            if plan.unit.is_empty() {
                return is_zero_vec(&rem).then(Vec::new);
            }
            return solve_linear(&plan.unit_matrix, &rem).ok().flatten();
        }
        if failed.contains(&(level, rem.clone())) {
            return None;
        }
        let g = &self.generators[plan.free[level]];
        let mut hi = dot(&plan.grading, &rem).div_floor(&plan.free_degree[level]);
        let mut lo = BigInt::zero();
        for mu in &plan.suffix[level + 1] {
            let a = dot(mu, &rem);
            let b = dot(mu, g);
            if b.is_positive() {
                hi = hi.min(a.div_floor(&b));
            } else if b.is_negative() {
                lo = lo.max(a.div_ceil(&b));
            } else if a.is_negative() {
                hi = BigInt::from(-1);
            }
        }
        let mut c = hi;
        while c >= lo {
            let next = intlin::sub(&rem, &intlin::scale(&c, g));
            counts[level] = c.clone();
            if let Some(u) = self.search(plan, level + 1, next, counts, failed) {
                return Some(u);
            }
            c -= 1;
        }
        counts[level] = BigInt::zero();
        failed.insert((level, rem));
        None
    }

    /// Hermite basis of the unit group, spanned by the generators whose
    /// negatives are members.
    pub fn unit_generators(&self) -> &[Vec<BigInt>] {
        self.cache.units.get_or_init(|| {
            let invertible: Vec<Vec<BigInt>> = self
                .generators
                .iter()
                .filter(|g| self.contains(&intlin::neg(g)))
                .cloned()
                .collect();
            if invertible.is_empty() {
                return Vec::new();
            }
            let (h, _) = hermite_normal_form(
                &IntegerMatrix::from_rows(self.ambient_dim, &invertible).expect("units"),
            );
            h.row_vectors()
                .into_iter()
                .filter(|r| !is_zero_vec(r))
                .collect()
        })
    }

    /// Whether `v` lies in the unit group.
    pub fn is_unit(&self, v: &[BigInt]) -> bool {
        in_lattice(self.unit_generators(), self.ambient_dim, v)
    }

    pub fn is_sharp(&self) -> bool {
        self.unit_generators().is_empty()
    }

    /// Sum of the facet normals, which is at least one on every nonzero
    /// generator of a sharp monoid. `None` when the monoid is not sharp.
    pub fn positive_grading(&self) -> Option<Vec<BigInt>> {
        if !self.is_sharp() {
            return None;
        }
        Some(self.cone().facet_sum(self.ambient_dim))
    }

    /// `cone(M) ∩ M^gp`, presented by its Hilbert basis (plus a basis of the
    /// unit group with both signs when the cone contains a line).
    pub fn saturation(&self) -> AffineMonoid {
        if self.is_zero() {
            return self.clone();
        }
        if self.is_sharp() {
            let hb = hilbert::hilbert_basis(&self.generators, self.gp_basis())
                .expect("the cone of a sharp monoid is salient");
            return AffineMonoid::new(self.ambient_dim, hb).expect("saturation generators");
        }
        let basis = self.gp_matrix();
        let inequalities: Vec<Vec<BigInt>> = self
            .cone()
            .facets
            .iter()
            .map(|f| basis.transpose().mul_vec(f))
            .collect();
        let points = hilbert::cone_lattice_points(&inequalities, self.gp_rank())
            .expect("quotient by the lineality space is salient");
        let mut gens = Vec::new();
        for l in &points.lineality {
            let v = basis.mul_vec(l);
            gens.push(intlin::neg(&v));
            gens.push(v);
        }
        gens.extend(
            points
                .hilbert_basis
                .iter()
                .map(|g| basis.mul_vec(&g.vector)),
        );
        AffineMonoid::new(self.ambient_dim, gens).expect("saturation generators")
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation()
            .generators()
            .iter()
            .all(|g| self.contains(g))
    }

    /// `<M, -n>^sat` for `n ∈ M^gp \ M`; sharp whenever `M` is sharp and saturated.
    pub fn adjoin_negative_sat(&self, n: &[BigInt]) -> Result<AffineMonoid, Error> {
        if n.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: n.len(),
            });
        }
        if !self.is_sharp() {
            return Err(Error::NotSharp("the monoid".into()));
        }
        if !self.is_saturated() {
            return Err(Error::NotSaturated("the monoid".into()));
        }
        if !self.in_gp(n) {
            return Err(Error::NotInGroupification);
        }
        if self.contains(n) {
            return Err(Error::AlreadyInMonoid);
        }
        let mut gens = self.generators.clone();
        gens.push(intlin::neg(n));
        let out = AffineMonoid::new(self.ambient_dim, gens)?.saturation();
        assert!(
            out.is_sharp(),
            "adjoining -n to a sharp saturated monoid stays sharp"
        );
        Ok(out)
    }
}

fn satisfies(constraints: &[Vec<BigInt>], x: &[BigInt]) -> bool {
    constraints.iter().all(|c| !dot(c, x).is_negative())
}

pub(crate) fn in_lattice(basis: &[Vec<BigInt>], dim: usize, v: &[BigInt]) -> bool {
    if basis.is_empty() {
        return is_zero_vec(v);
    }
    let m = IntegerMatrix::from_columns(dim, basis).expect("lattice basis");
    matches!(solve_linear(&m, v), Ok(Some(_)))
}

/// A vector `c >= 1` with `A c = 0`, for a matrix whose columns span a
/// linear space as a cone. Empty for an empty matrix.
fn positive_relation(a: &IntegerMatrix) -> Vec<BigInt> {
    let n = a.cols();
    if n == 0 {
        return Vec::new();
    }
    let mut rows = IntegerMatrix::identity(n).row_vectors();
    for r in a.row_vectors() {
        rows.push(intlin::neg(&r));
        rows.push(r);
    }
    let rays = cone::rays_from_inequalities(&rows, n);
    let mut sum = vec![BigInt::zero(); n];
    for r in &rays {
        sum = intlin::add(&sum, r);
    }
    debug_assert!(sum.iter().all(|x| x.is_positive()));
    sum
}

/// A monoid morphism given by an integer matrix on the ambient lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    source: AffineMonoid,
    target: AffineMonoid,
    matrix: IntegerMatrix,
}

impl LatticeMap {
    /// Checks that every source generator lands in the target monoid.
    pub fn new(
        source: AffineMonoid,
        target: AffineMonoid,
        matrix: IntegerMatrix,
    ) -> Result<Self, Error> {
        if matrix.rows() != target.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: target.ambient_dim(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: source.ambient_dim(),
                found: matrix.cols(),
            });
        }
        for (index, g) in source.generators().iter().enumerate() {
            if !target.contains(&matrix.mul_vec(g)) {
                return Err(Error::ImageNotInTarget { index });
            }
        }
        Ok(LatticeMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(monoid: AffineMonoid) -> Self {
        let m = IntegerMatrix::identity(monoid.ambient_dim());
        LatticeMap {
            source: monoid.clone(),
            target: monoid,
            matrix: m,
        }
    }

    pub fn source(&self) -> &AffineMonoid {
        &self.source
    }

    pub fn target(&self) -> &AffineMonoid {
        &self.target
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    /// The map on groupifications in source gp-basis coordinates, with
    /// values in the ambient target lattice.
    pub fn gp_matrix(&self) -> IntegerMatrix {
        &self.matrix * &self.source.gp_matrix()
    }

    /// The map on groupifications in gp-basis coordinates on both sides.
    pub fn gp_coordinate_matrix(&self) -> IntegerMatrix {
        let images = self.gp_matrix();
        let target_basis = self.target.gp_matrix();
        let cols: Vec<Vec<BigInt>> = images
            .column_vectors()
            .iter()
            .map(|c| {
                solve_linear(&target_basis, c)
                    .expect("dimensions agree")
                    .expect("images lie in the target groupification")
            })
            .collect();
        IntegerMatrix::from_columns(self.target.gp_rank(), &cols).expect("gp coordinates")
    }

    /// Preimage of the target units meets the source exactly in its units.
    pub fn is_local(&self) -> bool {
        let source_units = self.source.unit_generators();
        let maps_units = source_units
            .iter()
            .all(|u| self.target.is_unit(&self.apply(u)));
        if !maps_units {
            return false;
        }
        self.source
            .generators()
            .iter()
            .filter(|g| !self.source.is_unit(g))
            .all(|g| !self.target.is_unit(&self.apply(g)))
    }

    /// Injectivity on the groupification, which for integral monoids is
    /// injectivity of the monoid map.
    pub fn is_injective(&self) -> bool {
        kernel_basis(&self.gp_matrix()).is_empty()
    }

    /// Hermite basis of `ker(f^gp)`, as ambient source vectors.
    pub fn gp_kernel(&self) -> Vec<Vec<BigInt>> {
        let basis = self.source.gp_matrix();
        let k = kernel_basis(&self.gp_matrix());
        if k.is_empty() {
            return k;
        }
        let ambient: Vec<Vec<BigInt>> = k.iter().map(|z| basis.mul_vec(z)).collect();
        let (h, _) = hermite_normal_form(
            &IntegerMatrix::from_rows(self.source.ambient_dim(), &ambient).expect("kernel"),
        );
        h.row_vectors()
            .into_iter()
            .filter(|r| !is_zero_vec(r))
            .collect()
    }
}

/// `{(x, y) ∈ M_X × M_Y : φ(x) = ψ(y)}` for saturated sharp sources,
/// presented by its Hilbert basis inside `Z^(dx + dy)`.
pub fn fiber_product_saturated(phi: &LatticeMap, psi: &LatticeMap) -> Result<AffineMonoid, Error> {
    if phi.target() != psi.target() {
        return Err(Error::MismatchedTargets);
    }
    for (name, m) in [
        ("the first source", phi.source()),
        ("the second source", psi.source()),
    ] {
        if !m.is_sharp() {
            return Err(Error::NotSharp(name.into()));
        }
        if !m.is_saturated() {
            return Err(Error::NotSaturated(name.into()));
        }
    }
    let (x, y) = (phi.source(), psi.source());
    let (dx, dy) = (x.ambient_dim(), y.ambient_dim());
    let (rx, ry) = (x.gp_rank(), y.gp_rank());
    let bx = x.gp_matrix();
    let by = y.gp_matrix();

    // lattice {(a, b) : φ(Bx a) = ψ(By b)} in gp coordinates
    let relation = phi.gp_matrix().hstack(&psi.gp_matrix().negated());
    let lattice = kernel_basis(&relation);
    let q = lattice.len();
    if q == 0 {
        return AffineMonoid::new(dx + dy, Vec::new());
    }
    let k = IntegerMatrix::from_columns(rx + ry, &lattice)?;
    let top = k.select_rows(0..rx);
    let bottom = k.select_rows(rx..rx + ry);
    let embed_x = &bx * &top;
    let embed_y = &by * &bottom;
    let mut inequalities: Vec<Vec<BigInt>> = Vec::new();
    for f in &x.cone().facets {
        inequalities.push(embed_x.transpose().mul_vec(f));
    }
    for f in &y.cone().facets {
        inequalities.push(embed_y.transpose().mul_vec(f));
    }
    let points = hilbert::cone_lattice_points(&inequalities, q)?;
    if !points.lineality.is_empty() {
        return Err(Error::NonSalientCone);
    }
    let embed = embed_x.vstack(&embed_y);
    let gens = points
        .hilbert_basis
        .iter()
        .map(|g| embed.mul_vec(&g.vector))
        .collect();
    AffineMonoid::new(dx + dy, gens)
}
