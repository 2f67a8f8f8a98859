//! Binary linear codes of length at most 32 and the extended Golay code.
//!
//! A codeword is a bit mask: bit `i` is coordinate `i`. The Golay code is
//! built as the extended quadratic-residue code of length 23, so
//! coordinates `0..=22` are the residues mod 23 and coordinate 23 is the
//! extension point.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::exec::{self, Exec};
use crate::permgrp::Permutation;

pub const GOLAY_LENGTH: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("code length {0} is outside 1..=32")]
    BadLength(usize),
    #[error("generator row {0} is linearly dependent on the previous rows")]
    DependentRow(usize),
    #[error("generator row {row} has bits beyond length {length}")]
    RowTooWide { row: usize, length: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    bits: u32,
    weight: u32,
}

impl Codeword {
    pub fn new(bits: u32) -> Self {
        Codeword { bits, weight: bits.count_ones() }
    }

    pub fn from_support(support: &[usize]) -> Self {
        Self::new(support.iter().fold(0, |acc, &i| acc | 1 << i))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn weight(self) -> u32 {
        self.weight
    }

    pub fn contains(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn support(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    pub fn xor(self, other: Codeword) -> Codeword {
        Codeword::new(self.bits ^ other.bits)
    }

    pub fn intersection_size(self, other: Codeword) -> u32 {
        (self.bits & other.bits).count_ones()
    }

    /// Moves coordinate `i` to coordinate `p(i)`.
    pub fn permute(self, p: &Permutation) -> Codeword {
        let mut out = 0u32;
        for i in 0..p.degree() {
            if self.contains(i) {
                out |= 1 << p.apply(i);
            }
        }
        Codeword::new(out)
    }
}

impl Serialize for Codeword {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.support().serialize(s)
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.support().iter().map(ToString::to_string).collect();
        write!(f, "[{}]", s.join(", "))
    }
}

/// Binary linear code with a reduced row echelon generator matrix.
#[derive(Clone, Debug)]
pub struct BinaryCode {
    length: usize,
    generator: Vec<Codeword>,
    words: OnceLock<Vec<Codeword>>,
}

impl PartialEq for BinaryCode {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length && self.generator == other.generator
    }
}

impl Eq for BinaryCode {}

/// Reduced row echelon form over GF(2), pivot = lowest set coordinate.
/// Returns the nonzero rows sorted by pivot, or the index of the first
/// dependent input row.
fn reduce(rows: &[u32]) -> (Vec<u32>, Option<usize>) {
    let mut pivots: Vec<u32> = Vec::new();
    let mut first_dependent = None;
    for (idx, &row) in rows.iter().enumerate() {
        let mut r = row;
        for &p in &pivots {
            let lead = p.trailing_zeros();
            if r >> lead & 1 == 1 {
                r ^= p;
            }
        }
        if r == 0 {
            first_dependent.get_or_insert(idx);
            continue;
        }
        let lead = r.trailing_zeros();
        for p in pivots.iter_mut() {
            if *p >> lead & 1 == 1 {
                *p ^= r;
            }
        }
        pivots.push(r);
    }
    pivots.sort_by_key(|p| p.trailing_zeros());
    (pivots, first_dependent)
}

impl BinaryCode {
    fn check_rows(length: usize, rows: &[u32]) -> Result<(), CodeError> {
        if length == 0 || length > 32 {
            return Err(CodeError::BadLength(length));
        }
        let mask = if length == 32 { u32::MAX } else { (1u32 << length) - 1 };
        match rows.iter().position(|r| r & !mask != 0) {
            Some(row) => Err(CodeError::RowTooWide { row, length }),
            None => Ok(()),
        }
    }

    /// Code generated by linearly independent rows.
    pub fn from_generators(length: usize, rows: &[u32]) -> Result<Self, CodeError> {
        Self::check_rows(length, rows)?;
        let (reduced, dependent) = reduce(rows);
        if let Some(row) = dependent {
            return Err(CodeError::DependentRow(row));
        }
        Ok(Self::from_reduced(length, reduced))
    }

    /// Code spanned by arbitrary rows; dependent rows are dropped.
    pub fn span(length: usize, rows: &[u32]) -> Result<Self, CodeError> {
        Self::check_rows(length, rows)?;
        Ok(Self::from_reduced(length, reduce(rows).0))
    }

    fn from_reduced(length: usize, reduced: Vec<u32>) -> Self {
        BinaryCode { length, generator: reduced.into_iter().map(Codeword::new).collect(), words: OnceLock::new() }
    }

    pub fn zero(length: usize) -> Self {
        Self::span(length, &[]).expect("valid length")
    }

    /// `{0, all-ones}`.
    pub fn repetition(length: usize) -> Self {
        let ones = if length == 32 { u32::MAX } else { (1u32 << length) - 1 };
        Self::span(length, &[ones]).expect("valid length")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Codeword] {
        &self.generator
    }

    pub fn all_ones(&self) -> Codeword {
        Codeword::new(if self.length == 32 { u32::MAX } else { (1u32 << self.length) - 1 })
    }

    /// All `2^k` codewords; word `m` is the sum of the generator rows
    /// selected by the bits of the message index `m`.
    pub fn codewords(&self) -> &[Codeword] {
        self.words.get_or_init(|| {
            let k = self.dimension();
            assert!(k <= 24, "refusing to enumerate 2^{k} codewords");
            let mut words = Vec::with_capacity(1 << k);
            words.push(Codeword::new(0));
            for g in &self.generator {
                let existing = words.len();
                for i in 0..existing {
                    let w = words[i].xor(*g);
                    words.push(w);
                }
            }
            words
        })
    }

    pub fn contains(&self, word: Codeword) -> bool {
        let mut r = word.bits();
        for g in &self.generator {
            let lead = g.bits().trailing_zeros();
            if r >> lead & 1 == 1 {
                r ^= g.bits();
            }
        }
        r == 0
    }

    pub fn weight_enumerator(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for w in self.codewords() {
            *out.entry(w.weight()).or_insert(0) += 1;
        }
        out
    }

    pub fn minimum_distance(&self) -> Option<u32> {
        self.codewords().iter().map(|w| w.weight()).filter(|&w| w > 0).min()
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.generator.iter().all(|a| self.generator.iter().all(|b| a.intersection_size(*b) % 2 == 0))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dimension() == self.length && self.is_self_orthogonal()
    }

    pub fn is_doubly_even(&self) -> bool {
        self.codewords().iter().all(|w| w.weight() % 4 == 0)
    }

    /// Weight-8 codewords in enumeration order.
    pub fn octads(&self) -> Vec<Codeword> {
        self.codewords().iter().copied().filter(|w| w.weight() == 8).collect()
    }

    pub fn without_row(&self, index: usize) -> BinaryCode {
        let rows: Vec<u32> =
            self.generator.iter().enumerate().filter(|(i, _)| *i != index).map(|(_, g)| g.bits()).collect();
        Self::span(self.length, &rows).expect("subset of valid rows")
    }

    pub fn generator_bits(&self) -> Vec<u32> {
        self.generator.iter().map(|g| g.bits()).collect()
    }
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.length, self.dimension())?;
        for g in &self.generator {
            let row: String = (0..self.length).map(|i| if g.contains(i) { '1' } else { '0' }).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl FromStr for BinaryCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(CodeError::Parse { line: 1, msg: "empty input".into() })?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| CodeError::Parse { line: hl + 1, msg: "expected \"n k\"".into() })?;
        let [n, k] = nums[..] else {
            return Err(CodeError::Parse { line: hl + 1, msg: "expected \"n k\"".into() });
        };
        if n == 0 || n > 32 {
            return Err(CodeError::BadLength(n));
        }
        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, line) = lines.next().ok_or(CodeError::Parse { line: 0, msg: "too few generator rows".into() })?;
            let line = line.trim();
            if line.len() != n {
                return Err(CodeError::Parse { line: ln + 1, msg: format!("expected {n} characters") });
            }
            let mut bits = 0u32;
            for (i, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => bits |= 1 << i,
                    _ => return Err(CodeError::Parse { line: ln + 1, msg: format!("bad character {ch:?}") }),
                }
            }
            rows.push(bits);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(CodeError::Parse { line: ln + 1, msg: "trailing data".into() });
        }
        BinaryCode::from_generators(n, &rows)
    }
}

pub fn quadratic_residues_mod_23() -> BTreeSet<usize> {
    (1..23).map(|x| x * x % 23).collect()
}

/// Structural facts checked for the Golay code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeProfile {
    pub length: usize,
    pub dimension: usize,
    pub self_dual: bool,
    pub doubly_even: bool,
    pub minimum_distance: Option<u32>,
    pub weight_enumerator: BTreeMap<u32, u64>,
}

impl CodeProfile {
    pub fn of(code: &BinaryCode) -> Self {
        CodeProfile {
            length: code.length(),
            dimension: code.dimension(),
            self_dual: code.is_self_dual(),
            doubly_even: code.is_doubly_even(),
            minimum_distance: code.minimum_distance(),
            weight_enumerator: code.weight_enumerator(),
        }
    }

    pub fn is_golay(&self) -> bool {
        self.length == 24
            && self.dimension == 12
            && self.self_dual
            && self.doubly_even
            && self.minimum_distance == Some(8)
    }
}

/// Extended binary Golay code: cyclic shifts of the quadratic-residue
/// indicator mod 23, each extended by an overall parity bit.
///
/// Panics if the result fails the structural self-check, which can only
/// mean a bug here.
pub fn build_golay() -> BinaryCode {
    let residues = quadratic_residues_mod_23();
    let rows: Vec<u32> = (0..23)
        .map(|shift| {
            let w: u32 = residues.iter().fold(0, |acc, q| acc | 1 << ((q + shift) % 23));
            let parity = w.count_ones() & 1;
            w | parity << 23
        })
        .collect();
    let code = BinaryCode::span(GOLAY_LENGTH, &rows).expect("length 24 is valid");
    let profile = CodeProfile::of(&code);
    assert!(profile.is_golay(), "Golay construction failed its self-check: {profile:?}");
    code
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinerReport {
    pub holds: bool,
    pub incidence_total: u64,
    pub five_sets: u64,
    pub min_count: u64,
    pub max_count: u64,
}

/// All 5-element subsets of `{0, .., n-1}` as masks, in lexicographic
/// order.
pub fn five_subsets(n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for e in d + 1..n {
                        out.push(1 << a | 1 << b | 1 << c | 1 << d | 1 << e);
                    }
                }
            }
        }
    }
    out
}

pub fn verify_steiner(code: &BinaryCode) -> SteinerReport {
    verify_steiner_with(code, Exec::default())
}

/// Counts, for every 5-subset of coordinates, the weight-8 codewords
/// containing it. The design property holds when every count is 1.
pub fn verify_steiner_with(code: &BinaryCode, exec: Exec) -> SteinerReport {
    let octads: Vec<u32> = code.octads().iter().map(|o| o.bits()).collect();
    let sets = five_subsets(code.length());
    let counts = exec::map_slice(exec, &sets, |&s| octads.iter().filter(|&&o| o & s == s).count() as u64);
    let min_count = counts.iter().copied().min().unwrap_or(0);
    let max_count = counts.iter().copied().max().unwrap_or(0);
    SteinerReport {
        holds: !counts.is_empty() && min_count == 1 && max_count == 1,
        incidence_total: counts.iter().sum(),
        five_sets: counts.len() as u64,
        min_count,
        max_count,
    }
}

pub fn octad_intersection_census(code: &BinaryCode) -> BTreeSet<u32> {
    octad_intersection_census_with(code, Exec::default())
}

/// Sizes `|O1 & O2|` over unordered pairs of distinct octads.
pub fn octad_intersection_census_with(code: &BinaryCode, exec: Exec) -> BTreeSet<u32> {
    let octads = code.octads();
    let per_row = exec::map_range(exec, 0..octads.len(), |i| {
        octads[i + 1..].iter().map(|o| octads[i].intersection_size(*o)).collect::<BTreeSet<u32>>()
    });
    per_row.into_iter().flatten().collect()
}

/// Whether permuting coordinates maps every generator row into the code.
pub fn is_automorphism(p: &Permutation, code: &BinaryCode) -> bool {
    p.degree() == code.length() && code.generator().iter().all(|g| code.contains(g.permute(p)))
}

/// Image of `x -> x + 1` on the residue coordinates, fixing coordinate 23.
pub fn qr_shift() -> Permutation {
    Permutation::new((0..24).map(|i| if i == 23 { 23 } else { (i + 1) % 23 }).collect()).expect("bijection")
}

/// First transposition `(i j)` in lexicographic order that is not an
/// automorphism of the code.
pub fn non_automorphic_transposition(code: &BinaryCode) -> Option<(usize, usize)> {
    let n = code.length();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| {
        let t = Permutation::from_cycles(n, &[&[i, j]]).expect("valid transposition");
        !is_automorphism(&t, code)
    })
}

/// First triple of pairwise disjoint octads (in enumeration order) that
/// partitions the coordinates.
pub fn find_trio(code: &BinaryCode) -> Option<[Codeword; 3]> {
    let octads = code.octads();
    let all = code.all_ones();
    for (i, &a) in octads.iter().enumerate() {
        for &b in &octads[i + 1..] {
            if a.intersection_size(b) != 0 {
                continue;
            }
            let c = Codeword::new(all.bits() & !(a.bits() | b.bits()));
            if c.weight() == 8 && code.contains(c) {
                return Some([a, b, c]);
            }
        }
    }
    None
}
