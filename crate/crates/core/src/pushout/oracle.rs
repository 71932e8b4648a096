//! Bounded congruence closure for `M ⨿_N L`.
//!
//! The push-out is the quotient of `M ⊕ L` by the congruence generated by
//! `(m + f(ν), l) ~ (m, l + g(ν))`. Pairs whose generator multiplicity is at
//! most the bound are enumerated and joined whenever both sides of a relation
//! lie in the ball; the partition is then closed under translation by ball
//! elements, as far as the translates stay in the ball. Every join found is a
//! true equality in the push-out, so positive answers (merges, absorptions)
//! are sound; negative answers only hold within the ball.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use petgraph::unionfind::UnionFind;

use crate::intlin::{self, is_zero_vec};
use crate::monoid::AffineMonoid;

use super::PushoutData;

/// An element `(m, l)` of `M ⊕ L`.
pub type Pair = (Vec<BigInt>, Vec<BigInt>);

/// `a + b ~ a` with `b` outside the class of zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Absorption {
    pub a: Pair,
    pub b: Pair,
}

#[derive(Clone, Debug)]
pub struct FinitePushoutApprox {
    bound: usize,
    nodes: Vec<Pair>,
    degree: Vec<usize>,
    index: HashMap<Pair, usize>,
    class: Vec<usize>,
    adjacency: Vec<Vec<usize>>,
    zero: usize,
    m_generators: Vec<Vec<BigInt>>,
    l_generators: Vec<Vec<BigInt>>,
}

/// Elements of `M` of generator multiplicity at most `bound`, with their
/// minimal multiplicity, in breadth-first order.
fn ball(monoid: &AffineMonoid, bound: usize) -> Vec<(Vec<BigInt>, usize)> {
    let zero = vec![BigInt::from(0); monoid.ambient_dim()];
    let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::from([(zero.clone(), 0)]);
    let mut order = vec![(zero, 0)];
    let mut start = 0;
    for k in 1..=bound {
        let end = order.len();
        for i in start..end {
            for g in monoid.generators() {
                let v = intlin::add(&order[i].0, g);
                if !seen.contains_key(&v) {
                    seen.insert(v.clone(), k);
                    order.push((v, k));
                }
            }
        }
        start = end;
    }
    order
}

pub fn bounded_pushout_oracle(data: &PushoutData, bound: usize) -> FinitePushoutApprox {
    let ball_m = ball(data.m(), bound);
    let ball_l = ball(data.l(), bound);
    let l_lookup: HashMap<&[BigInt], usize> =
        ball_l.iter().map(|(v, k)| (v.as_slice(), *k)).collect();

    let mut entries: Vec<(usize, Pair)> = Vec::new();
    for (m, dm) in &ball_m {
        for (l, dl) in &ball_l {
            if dm + dl <= bound {
                entries.push((dm + dl, (m.clone(), l.clone())));
            }
        }
    }
    entries.sort();
    let (degree, nodes): (Vec<usize>, Vec<Pair>) = entries.into_iter().unzip();
    let index: HashMap<Pair, usize> = nodes
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();

    let images: Vec<(Vec<BigInt>, Vec<BigInt>)> = data
        .n()
        .generators()
        .iter()
        .map(|nu| (data.f().apply(nu), data.g().apply(nu)))
        .collect();
    let mut uf = UnionFind::<usize>::new(nodes.len());
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for (j, (m, l2)) in nodes.iter().enumerate() {
        for (fv, gv) in &images {
            let l = intlin::sub(l2, gv);
            if !l_lookup.contains_key(l.as_slice()) {
                continue;
            }
            let key = (intlin::add(m, fv), l);
            if let Some(&i) = index.get(&key) {
                if i != j {
                    uf.union(i, j);
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
    }
    close_under_translation(&nodes, &index, &mut uf);
    let labels = uf.into_labeling();
    // canonical class id: smallest node index in the class
    let mut first: HashMap<usize, usize> = HashMap::new();
    let class: Vec<usize> = labels
        .iter()
        .enumerate()
        .map(|(i, root)| *first.entry(*root).or_insert(i))
        .collect();
    for a in &mut adjacency {
        a.sort_unstable();
        a.dedup();
    }
    let zero = index[&(
        vec![BigInt::from(0); data.m().ambient_dim()],
        vec![BigInt::from(0); data.l().ambient_dim()],
    )];
    FinitePushoutApprox {
        bound,
        nodes,
        degree,
        index,
        class,
        adjacency,
        zero,
        m_generators: data.m().generators().to_vec(),
        l_generators: data.l().generators().to_vec(),
    }
}

/// Joins `p + s` and `q + s` whenever `p ~ q` and both translates are
/// nodes, until nothing changes.
fn close_under_translation(
    nodes: &[Pair],
    index: &HashMap<Pair, usize>,
    uf: &mut UnionFind<usize>,
) {
    let shifts: Vec<Vec<(usize, usize)>> = nodes
        .iter()
        .skip(1)
        .map(|s| {
            nodes
                .iter()
                .enumerate()
                .filter_map(|(i, p)| index.get(&add_pairs(p, s)).map(|&j| (i, j)))
                .collect()
        })
        .filter(|t: &Vec<(usize, usize)>| t.len() > 1)
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for translate in &shifts {
            let mut image_of_class: HashMap<usize, usize> = HashMap::new();
            for &(i, j) in translate {
                let root = uf.find_mut(i);
                match image_of_class.get(&root) {
                    Some(&k) => changed |= uf.union(k, j),
                    None => {
                        image_of_class.insert(root, j);
                    }
                }
            }
        }
    }
}

fn add_pairs(a: &Pair, b: &Pair) -> Pair {
    (intlin::add(&a.0, &b.0), intlin::add(&a.1, &b.1))
}

impl FinitePushoutApprox {
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn class_count(&self) -> usize {
        self.class
            .iter()
            .enumerate()
            .filter(|(i, c)| i == *c)
            .count()
    }

    /// Class id of a pair inside the ball.
    pub fn class_of(&self, p: &Pair) -> Option<usize> {
        self.index.get(p).map(|&i| self.class[i])
    }

    /// `None` when either pair lies outside the ball.
    pub fn classes_equal(&self, p: &Pair, q: &Pair) -> Option<bool> {
        Some(self.class_of(p)? == self.class_of(q)?)
    }

    pub fn zero_class_size(&self) -> usize {
        let z = self.class[self.zero];
        self.class.iter().filter(|&&c| c == z).count()
    }

    /// Classes as lists of pairs, in enumeration order.
    pub fn partition(&self) -> Vec<Vec<Pair>> {
        let mut groups: Vec<Vec<Pair>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for (i, &c) in self.class.iter().enumerate() {
            let k = *slot.entry(c).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(self.nodes[i].clone());
        }
        groups
    }

    /// Pairs `(a, b)` of nodes whose sum stays in the ball, `a` ranging
    /// first.
    fn summable(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.nodes.len()).flat_map(move |a| {
            let room = self.bound - self.degree[a];
            (0..self.nodes.len())
                .take_while(move |&b| self.degree[b] <= room)
                .map(move |b| {
                    let s = self.index[&add_pairs(&self.nodes[a], &self.nodes[b])];
                    (a, b, s)
                })
        })
    }

    pub fn find_absorption(&self) -> Option<Absorption> {
        let z = self.class[self.zero];
        self.summable()
            .find(|&(a, b, s)| self.class[b] != z && self.class[s] == self.class[a])
            .map(|(a, b, _)| Absorption {
                a: self.nodes[a].clone(),
                b: self.nodes[b].clone(),
            })
    }

    pub fn exists_absorption(&self) -> bool {
        self.find_absorption().is_some()
    }

    /// Nonzero classes `a`, `b` with `a + b` in the class of zero.
    pub fn sharpness_violation(&self) -> Option<(Pair, Pair)> {
        let z = self.class[self.zero];
        self.summable()
            .find(|&(a, b, s)| self.class[a] != z && self.class[b] != z && self.class[s] == z)
            .map(|(a, b, _)| (self.nodes[a].clone(), self.nodes[b].clone()))
    }

    /// A generator of `M` or `L` whose image lies in the class of zero.
    pub fn locality_violation(&self) -> Option<Pair> {
        let z = self.class[self.zero];
        let zm = vec![BigInt::from(0); self.nodes[self.zero].0.len()];
        let zl = vec![BigInt::from(0); self.nodes[self.zero].1.len()];
        let images = self
            .m_generators
            .iter()
            .map(|m| (m.clone(), zl.clone()))
            .chain(self.l_generators.iter().map(|l| (zm.clone(), l.clone())));
        images
            .filter(|p| !is_zero_vec(&p.0) || !is_zero_vec(&p.1))
            .find(|p| self.class_of(p) == Some(z))
    }

    /// A shortest chain of single relations joining `p` to `q`. Classes
    /// joined only by translation have no such chain inside the ball.
    pub fn relation_path(&self, p: &Pair, q: &Pair) -> Option<Vec<Pair>> {
        let start = *self.index.get(p)?;
        let goal = *self.index.get(q)?;
        let mut prev = vec![usize::MAX; self.nodes.len()];
        prev[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            if i == goal {
                let mut path = vec![self.nodes[goal].clone()];
                let mut k = goal;
                while k != start {
                    k = prev[k];
                    path.push(self.nodes[k].clone());
                }
                path.reverse();
                return Some(path);
            }
            for &j in &self.adjacency[i] {
                if prev[j] == usize::MAX {
                    prev[j] = i;
                    queue.push_back(j);
                }
            }
        }
        None
    }
}
