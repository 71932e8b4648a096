//! Inequality descriptions of rational polyhedral cones.
//!
//! A cone is given by generating vectors; [`describe`] produces the
//! irredundant description `{x : f(x) >= 0 for every facet f, e(x) = 0 for
//! every equation e}` by Fourier–Motzkin elimination of the conic
//! multipliers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intlin::{self, dot, is_zero_vec, primitive, IntegerMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDescription {
    /// Primitive facet normals, each taken inside the linear span of the cone.
    pub facets: Vec<Vec<BigInt>>,
    /// Basis of the orthogonal complement of the span (in Hermite form).
    pub equations: Vec<Vec<BigInt>>,
    /// Dimension of the span.
    pub dim: usize,
}

impl ConeDescription {
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero())
            && self.facets.iter().all(|f| !dot(f, x).is_negative())
    }

    /// Facets followed by the equations with both signs.
    pub fn constraints(&self) -> Vec<Vec<BigInt>> {
        let mut out = self.facets.clone();
        for e in &self.equations {
            out.push(e.clone());
            out.push(intlin::neg(e));
        }
        out
    }

    /// Sum of the facet normals: nonnegative on the cone and zero exactly on
    /// its lineality space.
    pub fn facet_sum(&self, ambient_dim: usize) -> Vec<BigInt> {
        let mut s = vec![BigInt::zero(); ambient_dim];
        for f in &self.facets {
            s = intlin::add(&s, f);
        }
        s
    }
}

/// Irredundant description of `cone(vectors) ⊆ Q^dim`.
pub fn describe(vectors: &[Vec<BigInt>], dim: usize) -> ConeDescription {
    let vectors: Vec<Vec<BigInt>> = vectors
        .iter()
        .filter(|v| !is_zero_vec(v))
        .cloned()
        .collect();
    let span_rank = if vectors.is_empty() {
        0
    } else {
        intlin::rational_rank(&IntegerMatrix::from_rows(dim, &vectors).expect("cone vectors"))
    };
    let equations = if vectors.is_empty() {
        intlin::kernel_basis(&IntegerMatrix::zeros(0, dim))
    } else {
        intlin::kernel_basis(&IntegerMatrix::from_rows(dim, &vectors).expect("cone vectors"))
    };
    if span_rank == 0 {
        return ConeDescription {
            facets: Vec::new(),
            equations,
            dim: 0,
        };
    }

    let mut facets: Vec<Vec<BigInt>> = Vec::new();
    for raw in fourier_motzkin(&vectors, dim) {
        let Some(normal) = project_onto_span(&raw, &equations) else {
            continue;
        };
        if facets.contains(&normal) {
            continue;
        }
        let tight: Vec<Vec<BigInt>> = vectors
            .iter()
            .filter(|v| dot(&normal, v).is_zero())
            .cloned()
            .collect();
        let tight_rank = if tight.is_empty() {
            0
        } else {
            intlin::rational_rank(&IntegerMatrix::from_rows(dim, &tight).expect("tight rows"))
        };
        if tight_rank + 1 == span_rank {
            facets.push(normal);
        }
    }
    facets.sort();
    ConeDescription {
        facets,
        equations,
        dim: span_rank,
    }
}

/// Generators of the cone `{x : r(x) >= 0 for every row r}`.
///
/// By Farkas duality this cone is generated by the facet normals of
/// `cone(rows)` together with both signs of its equations.
pub fn rays_from_inequalities(rows: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    describe(rows, dim).constraints()
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

fn popcount(h: &[u64]) -> u32 {
    h.iter().map(|w| w.count_ones()).sum()
}

/// Eliminates the multipliers `c` from `x = V c, c >= 0` and returns the
/// resulting inequalities on `x` (possibly redundant, possibly duplicates
/// modulo the span equations).
fn fourier_motzkin(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let n = vectors.len();
    let width = dim + n;
    let words = n.div_ceil(64).max(1);

    let mut eqs: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut row = vec![BigInt::zero(); width];
            row[i] = BigInt::one();
            for (j, v) in vectors.iter().enumerate() {
                row[dim + j] = -&v[i];
            }
            row
        })
        .collect();
    let mut ineqs: Vec<(Vec<BigInt>, Vec<u64>)> = (0..n)
        .map(|j| {
            let mut row = vec![BigInt::zero(); width];
            row[dim + j] = BigInt::one();
            let mut hist = vec![0u64; words];
            hist[j / 64] |= 1 << (j % 64);
            (row, hist)
        })
        .collect();

    // Substitute away every multiplier that some equation pins down.
    let mut gone = vec![false; n];
    for (j, g) in gone.iter_mut().enumerate() {
        let col = dim + j;
        let Some(p) = eqs.iter().position(|e| !e[col].is_zero()) else {
            continue;
        };
        let piv = eqs.swap_remove(p);
        let a = piv[col].clone();
        for e in eqs.iter_mut() {
            if e[col].is_zero() {
                continue;
            }
            let b = e[col].clone();
            for (x, y) in e.iter_mut().zip(&piv) {
                *x = &a * &*x - &b * y;
            }
            normalize(e);
        }
        for (r, _) in ineqs.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let b = r[col].clone();
            let (ka, kb) = if a.is_positive() {
                (a.clone(), b)
            } else {
                (-&a, -b)
            };
            for (x, y) in r.iter_mut().zip(&piv) {
                *x = &ka * &*x - &kb * y;
            }
            normalize(r);
        }
        *g = true;
    }

    let mut steps = 0u32;
    loop {
        let mut best: Option<(usize, usize)> = None;
        for (j, g) in gone.iter_mut().enumerate() {
            if *g {
                continue;
            }
            let col = dim + j;
            let pos = ineqs.iter().filter(|(r, _)| r[col].is_positive()).count();
            let neg = ineqs.iter().filter(|(r, _)| r[col].is_negative()).count();
            if pos + neg == 0 {
                *g = true;
                continue;
            }
            let cost = pos * neg;
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some((j, cost));
            }
        }
        let Some((j, _)) = best else {
            break;
        };
        let col = dim + j;
        steps += 1;
        let mut next: Vec<(Vec<BigInt>, Vec<u64>)> = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for item in ineqs.drain(..) {
            if item.0[col].is_positive() {
                pos.push(item);
            } else if item.0[col].is_negative() {
                neg.push(item);
            } else {
                next.push(item);
            }
        }
        for (p, hp) in &pos {
            for (q, hq) in &neg {
                let hist: Vec<u64> = hp.iter().zip(hq).map(|(a, b)| a | b).collect();
                if popcount(&hist) > steps + 1 {
                    continue;
                }
                let a = &p[col];
                let b = -&q[col];
                let mut row: Vec<BigInt> = p.iter().zip(q).map(|(x, y)| &b * x + a * y).collect();
                normalize(&mut row);
                if is_zero_vec(&row) {
                    continue;
                }
                next.push((row, hist));
            }
        }
        // keep one copy of each row, preferring the shortest history
        let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
        let mut dedup: Vec<(Vec<BigInt>, Vec<u64>)> = Vec::new();
        for (row, hist) in next {
            match seen.get(&row) {
                Some(&k) => {
                    if popcount(&hist) < popcount(&dedup[k].1) {
                        dedup[k].1 = hist;
                    }
                }
                None => {
                    seen.insert(row.clone(), dedup.len());
                    dedup.push((row, hist));
                }
            }
        }
        ineqs = dedup;
        gone[j] = true;
    }

    ineqs
        .into_iter()
        .map(|(r, _)| r[..dim].to_vec())
        .filter(|r| !is_zero_vec(r))
        .collect()
}

/// Orthogonal projection onto the span cut out by `equations`, scaled to a
/// primitive integer vector. `None` if the projection vanishes.
fn project_onto_span(v: &[BigInt], equations: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    if equations.is_empty() {
        return if is_zero_vec(v) {
            None
        } else {
            Some(primitive(v))
        };
    }
    let k = equations.len();
    let mut gram = IntegerMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = dot(&equations[i], &equations[j]);
        }
    }
    let rhs: Vec<BigInt> = equations.iter().map(|e| dot(e, v)).collect();
    let y = intlin::solve_rational(&gram, &rhs).expect("gram matrix is invertible");
    let denom = y.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| x * &denom).collect();
    for (e, q) in equations.iter().zip(&y) {
        let coeff = q.numer() * (&denom / q.denom());
        for (o, ei) in out.iter_mut().zip(e) {
            *o -= &coeff * ei;
        }
    }
    if is_zero_vec(&out) {
        None
    } else {
        Some(primitive(&out))
    }
}
