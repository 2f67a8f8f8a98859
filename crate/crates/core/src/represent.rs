//! Matrix groups over Q(ζ7), the 3-dimensional representation of L2(7),
//! polynomial substitution, the Klein quartic and invariant forms.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{CycloError, CycloNum};
use crate::exec::{self, Exec};
use crate::permgrp::Permutation;

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("closure exceeded {0} elements; the generators are probably wrong")]
    ClosureTooLarge(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("element order exceeds {0}")]
    OrderTooLarge(u32),
    #[error("generator assignment does not extend to a homomorphism")]
    NotAHomomorphism,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloMatrix {
    dim: usize,
    entries: Vec<CycloNum>,
}

impl CycloMatrix {
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { CycloNum::one() } else { CycloNum::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> CycloNum) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        CycloMatrix { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<CycloNum>>) -> Result<Self, RepError> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(RepError::DimensionMismatch { expected: dim, found: r.len() });
        }
        Ok(CycloMatrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(entries: Vec<CycloNum>) -> Self {
        let dim = entries.len();
        Self::from_fn(dim, |i, j| if i == j { entries[i].clone() } else { CycloNum::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.entries[i * self.dim + j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self == &self.transpose()
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.dim)
    }

    pub fn scale(&self, s: &CycloNum) -> Self {
        CycloMatrix { dim: self.dim, entries: self.entries.iter().map(|e| e * s).collect() }
    }

    pub fn checked_mul(&self, rhs: &CycloMatrix) -> Result<CycloMatrix, RepError> {
        if self.dim != rhs.dim {
            return Err(RepError::DimensionMismatch { expected: self.dim, found: rhs.dim });
        }
        let n = self.dim;
        Ok(Self::from_fn(n, |i, j| {
            (0..n).fold(CycloNum::zero(), |acc, k| &acc + &(self.get(i, k) * rhs.get(k, j)))
        }))
    }

    pub fn trace(&self) -> CycloNum {
        (0..self.dim).fold(CycloNum::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Determinant of the principal submatrix on `idx` by cofactor expansion.
    fn minor(&self, idx: &[usize]) -> CycloNum {
        match idx.len() {
            0 => CycloNum::one(),
            1 => self.get(idx[0], idx[0]).clone(),
            _ => self.det_rows_cols(idx, idx),
        }
    }

    fn det_rows_cols(&self, rows: &[usize], cols: &[usize]) -> CycloNum {
        if rows.len() == 1 {
            return self.get(rows[0], cols[0]).clone();
        }
        let mut acc = CycloNum::zero();
        for (k, &c) in cols.iter().enumerate() {
            let e = self.get(rows[0], c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = e * &self.det_rows_cols(&rows[1..], &rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    pub fn det(&self) -> CycloNum {
        let all: Vec<usize> = (0..self.dim).collect();
        self.minor(&all)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<CycloMatrix, RepError> {
        let n = self.dim;
        let mut a: Vec<Vec<CycloNum>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut inv: Vec<Vec<CycloNum>> = Self::identity(n).rows();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(RepError::Singular)?;
            a.swap(col, p);
            inv.swap(col, p);
            let s = a[col][col].inverse()?;
            a[col] = a[col].iter().map(|x| x * &s).collect();
            inv[col] = inv[col].iter().map(|x| x * &s).collect();
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                a[r] = a[r].iter().zip(&a[col]).map(|(x, y)| x - &(&f * y)).collect();
                inv[r] = inv[r].iter().zip(&inv[col]).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        CycloMatrix::from_rows(inv)
    }

    pub fn rows(&self) -> Vec<Vec<CycloNum>> {
        (0..self.dim).map(|i| self.entries[i * self.dim..(i + 1) * self.dim].to_vec()).collect()
    }

    pub fn pow(&self, mut e: u32) -> CycloMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order, searched up to `limit`.
    pub fn order(&self, limit: u32) -> Result<u32, RepError> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_identity() {
                return Ok(k);
            }
            p = &p * self;
        }
        Err(RepError::OrderTooLarge(limit))
    }

    /// Block diagonal `[1] + self`.
    pub fn with_trivial_summand(&self) -> CycloMatrix {
        Self::from_fn(self.dim + 1, |i, j| match (i, j) {
            (0, 0) => CycloNum::one(),
            (0, _) | (_, 0) => CycloNum::zero(),
            _ => self.get(i - 1, j - 1).clone(),
        })
    }

    /// Coefficients `e_k` of `det(1 - tM) = sum (-1)^k e_k t^k`: sums of
    /// principal k-minors.
    pub fn principal_minor_sums(&self) -> Vec<CycloNum> {
        let n = self.dim;
        let mut sums = vec![CycloNum::zero(); n + 1];
        for mask in 0u32..1 << n {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            sums[idx.len()] = &sums[idx.len()] + &self.minor(&idx);
        }
        sums
    }
}

impl std::ops::Mul for &CycloMatrix {
    type Output = CycloMatrix;
    fn mul(self, rhs: &CycloMatrix) -> CycloMatrix {
        self.checked_mul(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Display for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(CycloNum::pretty).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Images of α: x -> x+1, β: x -> 2x, γ: x -> -1/x in the 3-dimensional
/// representation: diag(ζ, ζ^2, ζ^4), the cyclic shift, and
/// (-1/√-7) times the circulant built from a = ζ^2-ζ^5, b = ζ-ζ^6,
/// c = ζ^4-ζ^3.
pub fn v3_generators() -> [CycloMatrix; 3] {
    let z = CycloNum::zeta_pow;
    let alpha = CycloMatrix::diagonal(vec![z(1), z(2), z(4)]);
    let one = CycloNum::one;
    let zero = CycloNum::zero;
    let beta = CycloMatrix::from_rows(vec![
        vec![zero(), zero(), one()],
        vec![one(), zero(), zero()],
        vec![zero(), one(), zero()],
    ])
    .expect("square");
    let a = &z(2) - &z(5);
    let b = &z(1) - &z(6);
    let c = &z(4) - &z(3);
    let prefactor = (-&CycloNum::sqrt_minus7()).inverse().expect("nonzero");
    let gamma = CycloMatrix::from_rows(vec![
        vec![a.clone(), b.clone(), c.clone()],
        vec![b.clone(), c.clone(), a.clone()],
        vec![c, a, b],
    ])
    .expect("square")
    .scale(&prefactor);
    [alpha, beta, gamma]
}

/// The same generators acting on `V1 + V3`, with the trivial summand as
/// coordinate 0.
pub fn v1_plus_v3_generators() -> [CycloMatrix; 3] {
    v3_generators().map(|m| m.with_trivial_summand())
}

pub fn matrix_group_closure(gens: &[CycloMatrix]) -> Result<Vec<CycloMatrix>, RepError> {
    matrix_group_closure_bounded(gens, DEFAULT_CLOSURE_BOUND)
}

/// Breadth-first closure under right multiplication by the generators, in
/// discovery order starting from the identity.
pub fn matrix_group_closure_bounded(gens: &[CycloMatrix], bound: usize) -> Result<Vec<CycloMatrix>, RepError> {
    let Some(first) = gens.first() else {
        return Ok(vec![]);
    };
    let dim = first.dim();
    if let Some(g) = gens.iter().find(|g| g.dim() != dim) {
        return Err(RepError::DimensionMismatch { expected: dim, found: g.dim() });
    }
    for g in gens {
        if g.det().is_zero() {
            return Err(RepError::Singular);
        }
    }
    let id = CycloMatrix::identity(dim);
    let mut seen: HashSet<CycloMatrix> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = &m * g;
            if seen.insert(next.clone()) {
                if seen.len() > bound {
                    return Err(RepError::ClosureTooLarge(bound));
                }
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

/// Pairs `(p, M)` closed under `(p, M)(q, N) = (pq, MN)`, where `pq`
/// applies `p` first. Fails if some permutation receives two matrices,
/// i.e. the generator assignment is not a homomorphism.
pub fn paired_closure(
    perms: &[Permutation],
    mats: &[CycloMatrix],
    bound: usize,
) -> Result<Vec<(Permutation, CycloMatrix)>, RepError> {
    if perms.len() != mats.len() || perms.is_empty() {
        return Err(RepError::DimensionMismatch { expected: perms.len(), found: mats.len() });
    }
    let id = (Permutation::identity(perms[0].degree()), CycloMatrix::identity(mats[0].dim()));
    let mut map: HashMap<Permutation, CycloMatrix> = HashMap::from([(id.0.clone(), id.1.clone())]);
    let mut queue = VecDeque::from([id]);
    while let Some((p, m)) = queue.pop_front() {
        for (q, n) in perms.iter().zip(mats) {
            let pq = &p * q;
            let mn = &m * n;
            match map.get(&pq) {
                Some(existing) if existing != &mn => return Err(RepError::NotAHomomorphism),
                Some(_) => {}
                None => {
                    if map.len() >= bound {
                        return Err(RepError::ClosureTooLarge(bound));
                    }
                    map.insert(pq.clone(), mn.clone());
                    queue.push_back((pq, mn));
                }
            }
        }
    }
    // injectivity: distinct permutations must receive distinct matrices
    let distinct: HashSet<&CycloMatrix> = map.values().collect();
    if distinct.len() != map.len() {
        return Err(RepError::NotAHomomorphism);
    }
    let mut pairs: Vec<_> = map.into_iter().collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(pairs)
}

/// Exponent vector ordered so that iteration visits the graded
/// lexicographically largest monomial first (x0 > x1 > ...).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree `d` in `n` variables, leading first.
pub fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    fn go(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            go(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, d, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, CycloNum>,
}

impl CycloPolynomial {
    pub fn zero(nvars: usize) -> Self {
        CycloPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: CycloNum) -> Self {
        Self::term(nvars, vec![0; nvars], c)
    }

    pub fn term(nvars: usize, exponents: Vec<u32>, c: CycloNum) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(exponents), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(nvars, e, CycloNum::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, CycloNum)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycloNum)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> CycloNum {
        self.terms.get(&Monomial(exponents.to_vec())).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &CycloNum)> {
        self.terms.iter().next()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, x) in &self.terms {
            p.add_term(m.clone(), x * c);
        }
        p
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.inverse().expect("stored coefficients are nonzero")),
            None => self.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CycloNum::from_int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut p = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.0.iter().zip(&b.0).map(|(i, j)| i + j).collect();
                p.add_term(Monomial(e), x * y);
            }
        }
        p
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[var] -= 1;
            p.add_term(Monomial(e), c.scale_int(&BigInt::from(k)));
        }
        p
    }

    /// Inserts the variables at positions `offset..` of an `nvars`-variable
    /// ring.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        assert!(offset + self.nvars <= nvars, "embedding does not fit");
        let mut p = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            e[offset..offset + self.nvars].copy_from_slice(&m.0);
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Human-readable form using the given variable names.
    pub fn pretty(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let vars: Vec<String> = m
                .0
                .iter()
                .zip(names)
                .filter(|(e, _)| **e > 0)
                .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
                .collect();
            let coeff = c.pretty();
            let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
            out.push(match (vars.is_empty(), coeff.as_str()) {
                (true, _) => coeff,
                (false, "1") => vars.join("*"),
                (false, "-1") => format!("-{}", vars.join("*")),
                (false, _) => format!("{coeff}*{}", vars.join("*")),
            });
        }
        out.join(" + ")
    }
}

/// Conventional variable names: `x1 x2 x3` for three variables, `x0 .. x3`
/// for four.
pub fn variable_names(nvars: usize) -> Vec<String> {
    let start = if nvars == 3 { 1 } else { 0 };
    (start..start + nvars).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for CycloPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, c) in &self.terms {
            let e: Vec<String> = m.0.iter().map(ToString::to_string).collect();
            writeln!(f, "{c} : {}", e.join(" "))?;
        }
        Ok(())
    }
}

impl CycloPolynomial {
    /// Parses `coeff : e0 e1 ..` lines for a ring with `nvars` variables.
    pub fn parse(nvars: usize, s: &str) -> Result<Self, RepError> {
        let mut p = Self::zero(nvars);
        for (ln, line) in s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = |msg: String| RepError::Parse { line: ln + 1, msg };
            let (c, e) = line.split_once(':').ok_or_else(|| err("missing ':'".into()))?;
            let c = CycloNum::from_str(c.trim()).map_err(|e| err(e.to_string()))?;
            let e: Vec<u32> = e
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err("bad exponent".into()))?;
            if e.len() != nvars {
                return Err(err(format!("expected {nvars} exponents")));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }
}

/// `x1 x2^3 + x2 x3^3 + x3 x1^3` in three variables.
pub fn klein_quartic() -> CycloPolynomial {
    let one = CycloNum::one;
    CycloPolynomial::from_terms(3, [(vec![1, 3, 0], one()), (vec![0, 1, 3], one()), (vec![3, 0, 1], one())])
}

/// The sextic `5 x1^2 x2^2 x3^2 - x1^5 x2 - x2^5 x3 - x3^5 x1`.
pub fn klein_sextic() -> CycloPolynomial {
    let n = CycloNum::from_int;
    CycloPolynomial::from_terms(
        3,
        [(vec![2, 2, 2], n(5)), (vec![5, 1, 0], n(-1)), (vec![0, 5, 1], n(-1)), (vec![1, 0, 5], n(-1))],
    )
}

/// Substitutes `x_i -> sum_j m[i][j] x_j`.
pub fn act_on_polynomial(m: &CycloMatrix, p: &CycloPolynomial) -> Result<CycloPolynomial, RepError> {
    if m.dim() != p.nvars() {
        return Err(RepError::DimensionMismatch { expected: p.nvars(), found: m.dim() });
    }
    let mut images = MonomialImages::new(m);
    let mut out = CycloPolynomial::zero(p.nvars());
    for (mono, c) in p.terms() {
        out = out.add(&images.image(&mono.0).scale(c));
    }
    Ok(out)
}

/// Returns `λ` with `m . p = λ p`, if it exists.
pub fn invariance_scalar(m: &CycloMatrix, p: &CycloPolynomial) -> Result<Option<CycloNum>, RepError> {
    let q = act_on_polynomial(m, p)?;
    let Some((lead, c)) = p.leading_term() else {
        return Ok(Some(CycloNum::one()));
    };
    let lambda = q.coefficient(&lead.0).div(c)?;
    Ok((q == p.scale(&lambda)).then_some(lambda))
}

/// Memoized images of monomials under one substitution.
struct MonomialImages {
    linear: Vec<CycloPolynomial>,
    cache: HashMap<Vec<u32>, CycloPolynomial>,
}

impl MonomialImages {
    fn new(m: &CycloMatrix) -> Self {
        let n = m.dim();
        let linear = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                CycloPolynomial::from_terms(
                    n,
                    (0..n).map(|j| {
                        e.iter_mut().for_each(|x| *x = 0);
                        e[j] = 1;
                        (e.clone(), m.get(i, j).clone())
                    }),
                )
            })
            .collect();
        MonomialImages { linear, cache: HashMap::new() }
    }

    fn image(&mut self, e: &[u32]) -> CycloPolynomial {
        if let Some(p) = self.cache.get(e) {
            return p.clone();
        }
        let n = self.linear.len();
        let result = match e.iter().position(|&x| x > 0) {
            None => CycloPolynomial::constant(n, CycloNum::one()),
            Some(k) => {
                let mut rest = e.to_vec();
                rest[k] -= 1;
                let prev = self.image(&rest);
                prev.mul(&self.linear[k])
            }
        };
        self.cache.insert(e.to_vec(), result.clone());
        result
    }
}

/// Determinant of the matrix of second partial derivatives of a
/// three-variable polynomial.
pub fn hessian(p: &CycloPolynomial) -> Result<CycloPolynomial, RepError> {
    if p.nvars() != 3 {
        return Err(RepError::DimensionMismatch { expected: 3, found: p.nvars() });
    }
    let d: Vec<Vec<CycloPolynomial>> =
        (0..3).map(|i| (0..3).map(|j| p.derivative(i).derivative(j)).collect()).collect();
    let minor = |c1: usize, c2: usize| d[1][c1].mul(&d[2][c2]).sub(&d[1][c2].mul(&d[2][c1]));
    Ok(d[0][0].mul(&minor(1, 2)).sub(&d[0][1].mul(&minor(0, 2))).add(&d[0][2].mul(&minor(0, 1))))
}

/// Group average of every degree-`d` monomial, as rows of coefficients
/// over `monomials(n, d)`.
pub fn reynolds_matrix(group: &[CycloMatrix], d: u32, exec: Exec) -> Vec<Vec<CycloNum>> {
    let n = group.first().map_or(0, CycloMatrix::dim);
    let basis = monomials(n, d);
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let chunk = 8;
    let chunks = group.len().div_ceil(chunk);
    let partials = exec::map_range(exec, 0..chunks, |c| {
        let mut acc = vec![vec![CycloNum::zero(); basis.len()]; basis.len()];
        for g in &group[c * chunk..((c + 1) * chunk).min(group.len())] {
            let mut images = MonomialImages::new(g);
            for (row, m) in basis.iter().enumerate() {
                for (mono, coeff) in images.image(&m.0).terms() {
                    let col = index[mono];
                    acc[row][col] = &acc[row][col] + coeff;
                }
            }
        }
        acc
    });
    let mut total = vec![vec![CycloNum::zero(); basis.len()]; basis.len()];
    for part in partials {
        for (trow, prow) in total.iter_mut().zip(part) {
            for (t, p) in trow.iter_mut().zip(prow) {
                *t = &*t + &p;
            }
        }
    }
    let inv = CycloNum::from_int(group.len() as i64).inverse().expect("nonempty group");
    total.into_iter().map(|row| row.into_iter().map(|x| &x * &inv).collect()).collect()
}

/// Reduced row echelon form over Q(ζ7); returns the nonzero rows.
pub fn row_reduce(mut rows: Vec<Vec<CycloNum>>) -> Vec<Vec<CycloNum>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let s = rows[rank][col].inverse().expect("nonzero pivot");
        rows[rank] = rows[rank].iter().map(|x| x * &s).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot = rows[rank].clone();
                rows[r] = rows[r].iter().zip(&pivot).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSpace {
    pub nvars: usize,
    pub degree: u32,
    pub basis: Vec<CycloPolynomial>,
}

impl InvariantSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn invariant_dimension(group: &[CycloMatrix], d: u32) -> InvariantSpace {
    invariant_dimension_with(group, d, Exec::default())
}

/// Invariant forms of degree `d`: the row space of the averaging operator
/// on monomials, returned in reduced echelon form (leading coefficient 1,
/// graded lex order).
pub fn invariant_dimension_with(group: &[CycloMatrix], d: u32, exec: Exec) -> InvariantSpace {
    let n = group.first().map_or(0, CycloMatrix::dim);
    let basis = monomials(n, d);
    let rows = row_reduce(reynolds_matrix(group, d, exec));
    let basis = rows
        .into_iter()
        .map(|r| CycloPolynomial::from_terms(n, basis.iter().zip(r).map(|(m, c)| (m.0.clone(), c))))
        .collect();
    InvariantSpace { nvars: n, degree: d, basis }
}

/// Average over the group of the `t^k` coefficients of `1/det(1 - t g)`,
/// for `k = 0..=max_degree`.
pub fn molien_coefficients(group: &[CycloMatrix], max_degree: usize, exec: Exec) -> Vec<CycloNum> {
    let series = exec::map_slice(exec, group, |g| {
        let e = g.principal_minor_sums();
        let a: Vec<CycloNum> =
            (0..=max_degree).map(|k| e.get(k).map_or_else(CycloNum::zero, |x| if k % 2 == 0 { x.clone() } else { -x })).collect();
        let mut b = vec![CycloNum::one()];
        for k in 1..=max_degree {
            let s = (1..=k).fold(CycloNum::zero(), |acc, j| &acc + &(&a[j] * &b[k - j]));
            b.push(-&s);
        }
        b
    });
    let inv = CycloNum::from_int(group.len() as i64).inverse().expect("nonempty group");
    (0..=max_degree)
        .map(|k| &series.iter().fold(CycloNum::zero(), |acc, s| &acc + &s[k]) * &inv)
        .collect()
}

/// Trace of the matrices in one class, identified by (order, trace).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTrace {
    pub element_order: u32,
    pub size: usize,
    pub trace: CycloNum,
}

/// Partitions a finite matrix group by (element order, trace) and reports
/// each part, ordered by element order and then by first appearance.
pub fn character_of(group: &[CycloMatrix]) -> Result<Vec<ClassTrace>, RepError> {
    let mut out: Vec<ClassTrace> = Vec::new();
    let limit = group.len() as u32;
    for g in group {
        let element_order = g.order(limit.max(1))?;
        let trace = g.trace();
        match out.iter_mut().find(|c| c.element_order == element_order && c.trace == trace) {
            Some(c) => c.size += 1,
            None => out.push(ClassTrace { element_order, size: 1, trace }),
        }
    }
    out.sort_by_key(|c| c.element_order);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgrp::{psl2_7_generators, PermutationGroup};
    use std::sync::OnceLock;

    fn v3_group() -> &'static Vec<CycloMatrix> {
        static G: OnceLock<Vec<CycloMatrix>> = OnceLock::new();
        G.get_or_init(|| matrix_group_closure(&v3_generators()).unwrap())
    }

    fn v13_group() -> &'static Vec<CycloMatrix> {
        static G: OnceLock<Vec<CycloMatrix>> = OnceLock::new();
        G.get_or_init(|| v3_group().iter().map(CycloMatrix::with_trivial_summand).collect())
    }

    fn n(k: i64) -> CycloNum {
        CycloNum::from_int(k)
    }

    #[test]
    fn generator_orders_and_shapes() {
        let [a, b, g] = v3_generators();
        assert_eq!(a.order(100).unwrap(), 7);
        assert_eq!(b.order(100).unwrap(), 3);
        assert_eq!(g.order(100).unwrap(), 2);
        assert!(a.det().is_one());
        assert!(g.det().is_one());
        assert!(g.is_symmetric());
        // β^{-1} α β = α^2, matching the permutation relation
        assert_eq!(&(&b.inverse().unwrap() * &a) * &b, a.pow(2));
    }

    #[test]
    fn closures() {
        assert_eq!(v3_group().len(), 168);
        let [a, _, _] = v3_generators();
        assert_eq!(matrix_group_closure(&[a]).unwrap().len(), 7);
        assert_eq!(matrix_group_closure(&[CycloMatrix::identity(3)]).unwrap().len(), 1);
        let big = CycloMatrix::diagonal(vec![n(2), n(1), n(1)]);
        assert_eq!(matrix_group_closure_bounded(&[big], 50), Err(RepError::ClosureTooLarge(50)));
    }

    #[test]
    fn matrices_match_permutations() {
        let perms = psl2_7_generators();
        let pairs = paired_closure(&perms, &v3_generators(), DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(pairs.len(), 168);
        assert_eq!(PermutationGroup::psl2_7().order(), 168);
        // swapping α and β breaks the assignment
        let [a, b, g] = v3_generators();
        assert_eq!(
            paired_closure(&perms, &[b, a, g], DEFAULT_CLOSURE_BOUND),
            Err(RepError::NotAHomomorphism)
        );
    }

    #[test]
    fn quartic_invariance() {
        let [a, b, g] = v3_generators();
        let f = klein_quartic();
        let x1x2_3 = CycloPolynomial::term(3, vec![1, 3, 0], n(1));
        assert_eq!(act_on_polynomial(&a, &x1x2_3).unwrap(), x1x2_3);
        assert_eq!(act_on_polynomial(&b, &f).unwrap(), f);
        assert_eq!(act_on_polynomial(&g, &f).unwrap(), f);
        assert_eq!(invariance_scalar(&g, &f).unwrap(), Some(n(1)));
        for m in v3_group() {
            assert_eq!(act_on_polynomial(m, &f).unwrap(), f);
        }
        let x1 = CycloPolynomial::var(3, 0);
        assert_eq!(invariance_scalar(&a, &x1).unwrap(), Some(CycloNum::zeta()));
        assert_eq!(invariance_scalar(&g, &x1).unwrap(), None);
        assert!(matches!(
            act_on_polynomial(&CycloMatrix::identity(4), &f),
            Err(RepError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hessians() {
        let h = hessian(&klein_quartic()).unwrap();
        assert_eq!(h, klein_sextic().scale(&n(54)));
        for m in v3_generators() {
            assert_eq!(act_on_polynomial(&m, &h).unwrap(), h);
        }
        let sq = CycloPolynomial::from_terms(3, (0..3).map(|i| {
            let mut e = vec![0; 3];
            e[i] = 2;
            (e, n(1))
        }));
        assert_eq!(hessian(&sq).unwrap(), CycloPolynomial::constant(3, n(8)));
        assert!(hessian(&CycloPolynomial::term(3, vec![3, 0, 0], n(1))).unwrap().is_zero());
    }

    #[test]
    fn invariant_forms_in_three_variables() {
        for d in 1..=3 {
            assert_eq!(invariant_dimension(v3_group(), d).dimension(), 0, "degree {d}");
        }
        let quartics = invariant_dimension(v3_group(), 4);
        assert_eq!(quartics.basis, vec![klein_quartic()]);
    }

    #[test]
    fn invariant_forms_in_four_variables() {
        let space = invariant_dimension(v13_group(), 4);
        let x0 = CycloPolynomial::term(4, vec![4, 0, 0, 0], n(1));
        assert_eq!(space.basis, vec![x0, klein_quartic().embed(4, 1)]);
    }

    #[test]
    fn molien_agrees_with_averaging() {
        let molien = molien_coefficients(v3_group(), 6, Exec::default());
        let expected = [1, 0, 0, 0, 1, 0, 1];
        for d in 0..=6u32 {
            assert_eq!(molien[d as usize], n(expected[d as usize]), "degree {d}");
            assert_eq!(
                invariant_dimension(v3_group(), d).dimension(),
                expected[d as usize] as usize,
                "degree {d}"
            );
        }
        let molien4 = molien_coefficients(v13_group(), 4, Exec::default());
        for d in 0..=4u32 {
            let dim = invariant_dimension(v13_group(), d).dimension();
            assert_eq!(molien4[d as usize], n(dim as i64), "degree {d}");
        }
    }

    #[test]
    fn sextic_invariant_is_the_hessian() {
        let space = invariant_dimension(v3_group(), 6);
        assert_eq!(space.basis, vec![klein_sextic().monic()]);
    }

    #[test]
    fn reynolds_is_idempotent() {
        for d in [2, 4] {
            let p = reynolds_matrix(v3_group(), d, Exec::default());
            let k = p.len();
            for i in 0..k {
                for j in 0..k {
                    let s = (0..k).fold(CycloNum::zero(), |acc, l| &acc + &(&p[i][l] * &p[l][j]));
                    assert_eq!(s, p[i][j]);
                }
            }
        }
        assert_eq!(
            reynolds_matrix(v3_group(), 4, Exec::Sequential),
            reynolds_matrix(v3_group(), 4, Exec::Parallel)
        );
    }

    #[test]
    fn traces() {
        let classes = character_of(v3_group()).unwrap();
        let sizes: Vec<(u32, usize)> = classes.iter().map(|c| (c.element_order, c.size)).collect();
        assert_eq!(sizes, vec![(1, 1), (2, 21), (3, 56), (4, 42), (7, 24), (7, 24)]);
        assert_eq!(classes[0].trace, n(3));
        assert_eq!(classes[1].trace, n(-1));
        assert_eq!(classes[2].trace, n(0));
        assert_eq!(classes[3].trace, n(1));
        let s = CycloNum::sqrt_minus7();
        let half = CycloNum::from_rational(&num_rational::BigRational::new(1.into(), 2.into()));
        let w = &(&s - &n(1)) * &half;
        let pair = [classes[4].trace.clone(), classes[5].trace.clone()];
        assert!(pair.contains(&w) && pair.contains(&w.conj()));
        let [a, _, _] = v3_generators();
        assert_eq!(a.trace(), w);
    }

    #[test]
    fn polynomial_serialization_round_trip() {
        let h = hessian(&klein_quartic()).unwrap();
        assert_eq!(CycloPolynomial::parse(3, &h.to_string()).unwrap(), h);
        assert!(CycloPolynomial::parse(3, "1 0 0 0 0 0 : 1 2").is_err());
        assert_eq!(klein_quartic().pretty(&["x1", "x2", "x3"]), "x1^3*x3 + x1*x2^3 + x2*x3^3");
    }

    #[test]
    fn monomial_listing() {
        let m = monomials(3, 2);
        let e: Vec<Vec<u32>> = m.iter().map(|x| x.0.clone()).collect();
        assert_eq!(e, vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]]);
        assert_eq!(monomials(4, 6).len(), 84);
    }
}
