//! Finite permutation groups by full enumeration.
//!
//! Products use the right-action convention: `p * q` applies `p` first and
//! then `q`, so `x^(pq) = (x^p)^q`. With this convention the assignment of
//! the 3x3 matrices in [`crate::represent`] to the generators of `PSL(2,7)`
//! is a homomorphism.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::exactmat::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("image list {0:?} is not a bijection")]
    NotBijection(Vec<usize>),
    #[error("generator acts on {found} points, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("closure exceeded {0} elements")]
    TooLarge(usize),
}

/// Bijection of `{0, .., n-1}` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(GroupError::NotBijection(images));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Permutation given by disjoint cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                if x >= n || next >= n {
                    return Err(GroupError::NotBijection(images));
                }
                images[x] = next;
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Permutation::identity(self.degree());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `g^-1 * self * g`
    pub fn conjugate_by(&self, g: &Permutation) -> Self {
        &(&g.inverse() * self) * g
    }

    /// Nontrivial cycles, each starting at its least point, sorted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let fixed = self.degree() - lens.iter().sum::<usize>();
        lens.extend(std::iter::repeat_n(1, fixed));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| acc.lcm(&c.len()))
    }

    /// Disjoint-cycle notation with a custom point label; `()` for the
    /// identity.
    pub fn cycle_string(&self, label: impl Fn(usize) -> String) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(|&x| label(x)).collect::<Vec<_>>().join(" ")))
            .collect()
    }

    /// Permutation matrix acting on row vectors: coordinate `i` moves to
    /// coordinate `self(i)`.
    pub fn to_matrix(&self) -> IntMatrix {
        let n = self.degree();
        IntMatrix::from_fn(n, n, |i, j| BigInt::from((self.images[i] == j) as i64))
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Applies `self` first, then `rhs`.
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "permutation degree mismatch");
        Permutation { images: self.images.iter().map(|&x| rhs.images[x]).collect() }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string(|x| x.to_string()))
    }
}

/// Label of a point of the projective line over F_7: `0..=6`, then `inf`.
pub fn projective_label(x: usize) -> String {
    if x == INFINITY {
        "inf".into()
    } else {
        x.to_string()
    }
}

/// Index of the point at infinity on the projective line over F_7.
pub const INFINITY: usize = 7;

/// The Moebius map `x -> (a x + b) / (c x + d)` over F_7.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Moebius {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Moebius {
    fn inv_mod7(x: u64) -> u64 {
        (1..7).find(|y| (x * y) % 7 == 1).expect("nonzero residue")
    }

    pub fn eval(&self, x: usize) -> usize {
        let (a, b, c, d) = (self.a % 7, self.b % 7, self.c % 7, self.d % 7);
        if x == INFINITY {
            return if c == 0 { INFINITY } else { ((a * Self::inv_mod7(c)) % 7) as usize };
        }
        let x = x as u64;
        let den = (c * x + d) % 7;
        if den == 0 {
            INFINITY
        } else {
            (((a * x + b) % 7) * Self::inv_mod7(den) % 7) as usize
        }
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::new((0..8).map(|x| self.eval(x)).collect()).expect("invertible Moebius map")
    }
}

/// The generators `x -> x + 1`, `x -> 2x`, `x -> -1/x` of `PSL(2,7)` on
/// the eight points of the projective line.
pub fn psl2_7_generators() -> [Permutation; 3] {
    [
        Moebius { a: 1, b: 1, c: 0, d: 1 }.to_permutation(),
        Moebius { a: 2, b: 0, c: 0, d: 1 }.to_permutation(),
        Moebius { a: 0, b: 6, c: 1, d: 0 }.to_permutation(),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub representative: Permutation,
    pub size: usize,
    pub element_order: usize,
    #[serde(skip)]
    pub elements: Vec<Permutation>,
}

/// A permutation group with all elements enumerated (sorted ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

impl PermutationGroup {
    pub fn generate(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        Self::generate_bounded(degree, generators, DEFAULT_GROUP_BOUND)
    }

    /// Breadth-first closure under right multiplication by generators.
    pub fn generate_bounded(degree: usize, generators: Vec<Permutation>, bound: usize) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = &x * g;
                if seen.insert(y.clone()) {
                    if seen.len() > bound {
                        return Err(GroupError::TooLarge(bound));
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(PermutationGroup { degree, generators, elements })
    }

    /// Wraps an element list already known to be closed.
    fn from_closed_elements(degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        let generators = elements.iter().filter(|p| !p.is_identity()).cloned().collect();
        PermutationGroup { degree, generators, elements }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_closed_elements(degree, vec![Permutation::identity(degree)])
    }

    /// Cyclic group generated by an `n`-cycle on `n` points.
    pub fn cyclic(n: usize) -> Self {
        let cycle: Vec<usize> = (0..n).collect();
        let g = Permutation::from_cycles(n, &[&cycle]).expect("valid cycle");
        Self::generate(n, vec![g]).expect("cyclic group is small")
    }

    pub fn psl2_7() -> Self {
        Self::generate(8, psl2_7_generators().to_vec()).expect("PSL(2,7) has 168 elements")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| self.generators.iter().all(|b| a * b == b * a))
    }

    pub fn element_order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for p in &self.elements {
            *hist.entry(p.order()).or_insert(0) += 1;
        }
        hist
    }

    /// Conjugacy classes sorted by representative, each represented by its
    /// least element.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let mut assigned: HashSet<&Permutation> = HashSet::new();
        let mut classes = Vec::new();
        for x in &self.elements {
            if assigned.contains(x) {
                continue;
            }
            let class: BTreeSet<Permutation> = self.elements.iter().map(|g| x.conjugate_by(g)).collect();
            for y in &class {
                let idx = self.elements.binary_search(y).expect("conjugate lies in the group");
                assigned.insert(&self.elements[idx]);
            }
            classes.push(ConjugacyClass {
                representative: x.clone(),
                size: class.len(),
                element_order: x.order(),
                elements: class.into_iter().collect(),
            });
        }
        classes
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> PermutationGroup {
        let central: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|z| self.generators.iter().all(|g| (*z * g) == (g * *z)))
            .cloned()
            .collect();
        Self::from_closed_elements(self.degree, central)
    }

    /// Normal subgroups, found as unions of conjugacy classes containing
    /// the identity that are closed under multiplication.
    pub fn normal_subgroups(&self) -> Vec<Vec<Permutation>> {
        let classes = self.conjugacy_classes();
        let (identity_class, others): (Vec<_>, Vec<_>) = classes.iter().partition(|c| c.representative.is_identity());
        let mut found = Vec::new();
        for mask in 0u64..(1 << others.len()) {
            let size: usize = 1 + others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.size).sum::<usize>();
            if !self.order().is_multiple_of(size) {
                continue;
            }
            let mut members: Vec<Permutation> = identity_class[0].elements.clone();
            for (i, c) in others.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    members.extend(c.elements.iter().cloned());
                }
            }
            members.sort();
            let closed = members.iter().all(|a| members.iter().all(|b| members.binary_search(&(a * b)).is_ok()));
            if closed {
                found.push(members);
            }
        }
        found
    }

    pub fn is_simple(&self) -> bool {
        self.order() > 1 && self.normal_subgroups().len() == 2
    }
}

/// Orbits of the group generated by `gens` on `{0, .., points-1}`, each
/// sorted, listed by least point.
pub fn orbits(gens: &[Permutation], points: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; points];
    let mut out = Vec::new();
    for start in 0..points {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                    stack.push(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}
