//! Hilbert bases of rational cones intersected with lattices.
//!
//! The cone is moved into coordinates where the lattice is standard and the
//! cone full-dimensional, triangulated by placing its rays one at a time,
//! and the lattice points of each half-open fundamental parallelepiped are
//! listed from the Smith form of the simplex. Irreducible candidates form
//! the Hilbert basis.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cone::{self, ConeDescription};
use crate::error::Error;
use crate::intlin::{
    self, dot, hermite_normal_form, is_zero_vec, kernel_basis, primitive, smith_normal_form,
    solve_linear, IntegerMatrix,
};

/// A cone point together with a positive degree used for ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Graded {
    pub degree: BigInt,
    pub vector: Vec<BigInt>,
}

/// Minimal generating set of `cone(rays) ∩ lattice`.
///
/// `lattice_basis` spans the lattice (it need not be independent). The cone
/// must be salient; rays outside the rational span of the lattice are
/// rejected.
pub fn hilbert_basis(
    rays: &[Vec<BigInt>],
    lattice_basis: &[Vec<BigInt>],
) -> Result<Vec<Vec<BigInt>>, Error> {
    Ok(graded_hilbert_basis(rays, lattice_basis)?
        .into_iter()
        .map(|g| g.vector)
        .collect())
}

/// Lattice points of `{z ∈ Z^q : <a, z> >= 0 for all rows a}`.
pub(crate) struct ConeLatticePoints {
    /// Basis of the lineality lattice.
    pub lineality: Vec<Vec<BigInt>>,
    /// Hilbert basis of a complement of the lineality lattice, lifted to `Z^q`.
    pub hilbert_basis: Vec<Graded>,
}

pub(crate) fn cone_lattice_points(
    inequalities: &[Vec<BigInt>],
    q: usize,
) -> Result<ConeLatticePoints, Error> {
    let rows: Vec<Vec<BigInt>> = inequalities
        .iter()
        .filter(|r| !is_zero_vec(r))
        .cloned()
        .collect();
    let lineality = if rows.is_empty() {
        IntegerMatrix::identity(q).row_vectors()
    } else {
        kernel_basis(&IntegerMatrix::from_rows(q, &rows)?)
    };
    let u = lineality.len();
    if u == q {
        return Ok(ConeLatticePoints {
            lineality,
            hilbert_basis: Vec::new(),
        });
    }
    let complement: Vec<Vec<BigInt>> = if u == 0 {
        IntegerMatrix::identity(q).row_vectors()
    } else {
        let snf = smith_normal_form(&IntegerMatrix::from_rows(q, &lineality)?);
        (u..q).map(|i| snf.v.row(i)).collect()
    };
    let quotient_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| complement.iter().map(|c| dot(r, c)).collect())
        .collect();
    let p = q - u;
    let rays = cone::rays_from_inequalities(&quotient_rows, p);
    let lift = IntegerMatrix::from_columns(q, &complement)?;
    let mut hb: Vec<Graded> =
        graded_hilbert_basis(&rays, &IntegerMatrix::identity(p).row_vectors())?
            .into_iter()
            .map(|g| Graded {
                degree: g.degree,
                vector: lift.mul_vec(&g.vector),
            })
            .collect();
    hb.sort_by(|a, b| {
        a.degree
            .cmp(&b.degree)
            .then_with(|| a.vector.cmp(&b.vector))
    });
    Ok(ConeLatticePoints {
        lineality,
        hilbert_basis: hb,
    })
}

pub(crate) fn graded_hilbert_basis(
    rays: &[Vec<BigInt>],
    lattice_basis: &[Vec<BigInt>],
) -> Result<Vec<Graded>, Error> {
    let Some(dim) = rays.first().or(lattice_basis.first()).map(Vec::len) else {
        return Ok(Vec::new());
    };
    for v in rays.iter().chain(lattice_basis) {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    let rays: Vec<&Vec<BigInt>> = rays.iter().filter(|r| !is_zero_vec(r)).collect();
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    if lattice_basis.is_empty() {
        return Err(Error::RayOutsideLattice);
    }

    // independent lattice basis
    let (h, _) = hermite_normal_form(&IntegerMatrix::from_rows(dim, lattice_basis)?);
    let basis: Vec<Vec<BigInt>> = h
        .row_vectors()
        .into_iter()
        .filter(|r| !is_zero_vec(r))
        .collect();
    let k = basis.len();
    let basis_cols = IntegerMatrix::from_columns(dim, &basis)?;

    // rays in lattice coordinates, scaled to primitive integer vectors
    let mut coords: Vec<Vec<BigInt>> = Vec::new();
    for r in &rays {
        let y = intlin::solve_rational(&basis_cols, r).ok_or(Error::RayOutsideLattice)?;
        let denom = y.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let v: Vec<BigInt> = y.iter().map(|q| q.numer() * (&denom / q.denom())).collect();
        coords.push(primitive(&v));
    }

    // restrict to the saturated sublattice spanned by the rays
    let annihilator = kernel_basis(&IntegerMatrix::from_rows(k, &coords)?);
    let span_basis = kernel_basis(&IntegerMatrix::from_rows(k, &annihilator)?);
    let s = span_basis.len();
    let span_cols = IntegerMatrix::from_columns(k, &span_basis)?;
    let mut local: Vec<Vec<BigInt>> = Vec::new();
    for c in &coords {
        let z = solve_linear(&span_cols, c)?.expect("ray lies in its own span");
        let z = primitive(&z);
        if !local.contains(&z) {
            local.push(z);
        }
    }

    let description = cone::describe(&local, s);
    let rank = intlin::rational_rank(&IntegerMatrix::from_rows(s, &description.facets)?);
    if rank < s {
        return Err(Error::NonSalientCone);
    }
    let degree_form = description.facet_sum(s);

    let mut candidates: BTreeSet<Vec<BigInt>> = local.iter().cloned().collect();
    for simplex in placing_triangulation(&local, s) {
        let columns: Vec<Vec<BigInt>> = simplex.iter().map(|&i| local[i].clone()).collect();
        for p in parallelepiped_points(&IntegerMatrix::from_columns(s, &columns)?) {
            if !is_zero_vec(&p) {
                candidates.insert(p);
            }
        }
    }

    // lift local coordinates back to the ambient lattice
    let to_ambient = &basis_cols * &span_cols;
    let mut graded: Vec<(Graded, Vec<BigInt>)> = candidates
        .into_iter()
        .map(|z| {
            let value = facet_values(&description, &z);
            (
                Graded {
                    degree: dot(&degree_form, &z),
                    vector: to_ambient.mul_vec(&z),
                },
                value,
            )
        })
        .collect();
    graded.sort_by(|a, b| {
        a.0.degree
            .cmp(&b.0.degree)
            .then_with(|| a.0.vector.cmp(&b.0.vector))
    });

    // x is reducible iff x - h stays in the cone for an earlier basis element h
    let mut basis_out: Vec<(Graded, Vec<BigInt>)> = Vec::new();
    for (g, values) in graded {
        let reducible = basis_out
            .iter()
            .any(|(h, hv)| h.degree < g.degree && values.iter().zip(hv).all(|(a, b)| a >= b));
        if !reducible {
            basis_out.push((g, values));
        }
    }
    Ok(basis_out.into_iter().map(|(g, _)| g).collect())
}

fn facet_values(description: &ConeDescription, z: &[BigInt]) -> Vec<BigInt> {
    description.facets.iter().map(|f| dot(f, z)).collect()
}

/// Placing triangulation of a full-dimensional cone in `Q^dim`.
///
/// The first `dim` independent rays (in order) form the initial simplex;
/// every further ray is joined to the boundary facets it sees.
pub(crate) fn placing_triangulation(rays: &[Vec<BigInt>], dim: usize) -> Vec<Vec<usize>> {
    let mut initial: Vec<usize> = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        let mut rows: Vec<Vec<BigInt>> = initial.iter().map(|&j| rays[j].clone()).collect();
        rows.push(r.clone());
        if intlin::rational_rank(&IntegerMatrix::from_rows(dim, &rows).expect("rows")) == rows.len()
        {
            initial.push(i);
        }
        if initial.len() == dim {
            break;
        }
    }
    assert_eq!(initial.len(), dim, "rays must span the space");
    let mut simplices = vec![initial.clone()];

    for (i, r) in rays.iter().enumerate() {
        if initial.contains(&i) {
            continue;
        }
        // facets of the triangulation that lie on exactly one simplex
        let mut faces: HashMap<Vec<usize>, (usize, usize, u32)> = HashMap::new();
        for (si, simplex) in simplices.iter().enumerate() {
            for &drop in simplex {
                let face: Vec<usize> = simplex.iter().copied().filter(|&v| v != drop).collect();
                faces
                    .entry(face)
                    .and_modify(|e| e.2 += 1)
                    .or_insert((si, drop, 1));
            }
        }
        let mut boundary: Vec<(Vec<usize>, usize)> = faces
            .into_iter()
            .filter(|(_, (_, _, count))| *count == 1)
            .map(|(face, (_, opposite, _))| (face, opposite))
            .collect();
        boundary.sort();
        let mut added = Vec::new();
        for (face, opposite) in boundary {
            let rows: Vec<Vec<BigInt>> = face.iter().map(|&j| rays[j].clone()).collect();
            let normal = if dim == 1 {
                vec![BigInt::one()]
            } else {
                let ker = kernel_basis(&IntegerMatrix::from_rows(dim, &rows).expect("face rows"));
                debug_assert_eq!(ker.len(), 1);
                ker[0].clone()
            };
            let side = dot(&normal, &rays[opposite]);
            let here = dot(&normal, r);
            if (side.is_positive() && here.is_negative())
                || (side.is_negative() && here.is_positive())
            {
                let mut s = face.clone();
                s.push(i);
                s.sort();
                added.push(s);
            }
        }
        simplices.extend(added);
    }
    simplices
}

/// Lattice points of the half-open parallelepiped spanned by the columns of
/// an invertible square matrix.
pub(crate) fn parallelepiped_points(a: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let n = a.cols();
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let big = diag.last().cloned().unwrap_or_else(BigInt::one);
    let mut out = Vec::new();
    let mut digits = vec![BigInt::zero(); n];
    loop {
        // t = Q * (digits / diag), scaled by `big`
        let w: Vec<BigInt> = digits
            .iter()
            .zip(&diag)
            .map(|(a, d)| a * (&big / d))
            .collect();
        let t: Vec<BigInt> = snf
            .v_inv
            .mul_vec(&w)
            .iter()
            .map(|x| x.mod_floor(&big))
            .collect();
        let x: Vec<BigInt> = a.mul_vec(&t).iter().map(|x| x / &big).collect();
        out.push(x);
        // advance the mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            digits[pos] += 1;
            if digits[pos] < diag[pos] {
                break;
            }
            digits[pos] = BigInt::zero();
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::to_big;

    fn vs(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| to_big(r)).collect()
    }

    fn sorted(mut v: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
        v.sort();
        v
    }

    #[test]
    fn smooth_cone() {
        let hb = hilbert_basis(&vs(&[&[1, 0], &[0, 1]]), &vs(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(sorted(hb), vs(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn planar_cones() {
        let z2 = vs(&[&[1, 0], &[0, 1]]);
        let hb = hilbert_basis(&vs(&[&[1, 0], &[1, 2]]), &z2).unwrap();
        assert_eq!(hb, vs(&[&[1, 0], &[1, 1], &[1, 2]]));
        let hb = hilbert_basis(&vs(&[&[1, 0], &[1, 3]]), &z2).unwrap();
        assert_eq!(hb, vs(&[&[1, 0], &[1, 1], &[1, 2], &[1, 3]]));
    }

    #[test]
    fn non_primitive_rays() {
        let z2 = vs(&[&[1, 0], &[0, 1]]);
        let hb = hilbert_basis(&vs(&[&[2, 0], &[0, 3]]), &z2).unwrap();
        assert_eq!(sorted(hb), vs(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn sublattice() {
        // cone = Q_{>=0}, lattice 2Z
        let hb = hilbert_basis(&vs(&[&[2], &[3]]), &vs(&[&[2]])).unwrap();
        assert_eq!(hb, vs(&[&[2]]));
    }

    #[test]
    fn lower_dimensional_cone() {
        let z3 = vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let hb = hilbert_basis(&vs(&[&[1, 1, 0], &[1, -1, 0]]), &z3).unwrap();
        assert_eq!(sorted(hb), vs(&[&[1, -1, 0], &[1, 0, 0], &[1, 1, 0]]));
    }

    #[test]
    fn errors() {
        let z1 = vs(&[&[1]]);
        assert_eq!(
            hilbert_basis(&vs(&[&[1], &[-1]]), &z1),
            Err(Error::NonSalientCone)
        );
        assert_eq!(
            hilbert_basis(&vs(&[&[1, 1]]), &vs(&[&[1, 0]])),
            Err(Error::RayOutsideLattice)
        );
        assert!(hilbert_basis(&[], &z1).unwrap().is_empty());
    }

    #[test]
    fn parallelepiped_counts_determinant() {
        let a = IntegerMatrix::from_i64_rows(2, &[&[1, 1], &[0, 3]]).unwrap();
        let pts = parallelepiped_points(&a);
        assert_eq!(pts.len(), 3);
        assert!(pts.contains(&to_big(&[0, 0])));
        assert!(pts.contains(&to_big(&[1, 1])));
        assert!(pts.contains(&to_big(&[1, 2])));
    }

    #[test]
    fn triangulation_of_square_cone() {
        let rays = vs(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let t = placing_triangulation(&rays, 3);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn square_cone_hilbert_basis() {
        let rays = vs(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let z3 = vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let hb = hilbert_basis(&rays, &z3).unwrap();
        assert_eq!(
            sorted(hb),
            vs(&[&[-1, 0, 1], &[0, -1, 1], &[0, 0, 1], &[0, 1, 1], &[1, 0, 1]])
        );
    }
}
