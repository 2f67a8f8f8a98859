//! Integral lattices given by a rational basis inside a fixed ambient
//! integer form.
//!
//! Niemeier lattices follow the negative-definite sign convention, so the
//! root lattice A1^24 has ambient form `-2 I`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmat::{
    hermite_normal_form, integer_kernel, parse_rational, rational_kernel, serde_int, smith_normal_form, IntMatrix,
    MatrixError, RatMatrix,
};
use crate::gf2code::{find_trio, BinaryCode, Codeword};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("ambient form is not symmetric")]
    AsymmetricForm,
    #[error("basis rows are linearly dependent")]
    DependentBasis,
    #[error("basis has {found} coordinates, ambient dimension is {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("Gram matrix is not integral")]
    NonIntegralGram,
    #[error("glue vector {index} pairs non-integrally with {with}")]
    NonIntegralPairing { index: usize, with: String },
    #[error("glue vector {index} has odd self-product {norm}")]
    OddNorm { index: usize, norm: BigRational },
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("matrix {index} is not an isometry: basis vector {witness} changes its pairings")]
    NotAnIsometry { index: usize, witness: usize },
    #[error("matrix {index} does not map the lattice onto itself (determinant {det})")]
    NotInvertible { index: usize, det: BigInt },
    #[error("no trio of octads found")]
    NoTrio,
    #[error("no octad found")]
    NoOctad,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient_gram: IntMatrix,
    basis: RatMatrix,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn dot_form(u: &[BigRational], g: &IntMatrix, v: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, a) in u.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in v.iter().enumerate() {
            let gij = g.get(i, j);
            if !b.is_zero() && !gij.is_zero() {
                acc += a * b * BigRational::from_integer(gij.clone());
            }
        }
    }
    acc
}

/// Canonical basis of the Z-span of rational rows: Hermite form after
/// scaling by the denominator lcm.
fn saturate_rows(rows: &RatMatrix) -> RatMatrix {
    let (int, d) = rows.clear_denominators();
    let hnf = hermite_normal_form(&int);
    hnf.to_rational().scale(&BigRational::new(BigInt::one(), d))
}

impl Lattice {
    pub fn new(ambient_gram: IntMatrix, basis: RatMatrix) -> Result<Self, LatticeError> {
        if !ambient_gram.is_square() {
            return Err(MatrixError::NotSquare { rows: ambient_gram.rows(), cols: ambient_gram.cols() }.into());
        }
        if !ambient_gram.is_symmetric() {
            return Err(LatticeError::AsymmetricForm);
        }
        if basis.cols() != ambient_gram.rows() {
            return Err(LatticeError::Dimension { expected: ambient_gram.rows(), found: basis.cols() });
        }
        if basis.rank() != basis.rows() {
            return Err(LatticeError::DependentBasis);
        }
        let l = Lattice { ambient_gram, basis };
        l.rational_gram().to_integer().ok_or(LatticeError::NonIntegralGram)?;
        Ok(l)
    }

    /// The lattice spanned by arbitrary rational rows, with canonical basis.
    pub fn spanned_by(ambient_gram: IntMatrix, rows: &RatMatrix) -> Result<Self, LatticeError> {
        Self::new(ambient_gram, saturate_rows(rows))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_gram.rows()
    }

    pub fn ambient_gram(&self) -> &IntMatrix {
        &self.ambient_gram
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn pairing(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        dot_form(u, &self.ambient_gram, v)
    }

    fn rational_gram(&self) -> RatMatrix {
        let b = self.basis.row_vecs();
        RatMatrix::from_fn(b.len(), b.len(), |i, j| dot_form(&b[i], &self.ambient_gram, &b[j]))
    }

    pub fn gram(&self) -> IntMatrix {
        self.rational_gram().to_integer().expect("Gram integrality is checked on construction")
    }

    pub fn is_even(&self) -> bool {
        let g = self.gram();
        (0..g.rows()).all(|i| g.get(i, i).is_even())
    }

    pub fn abs_det(&self) -> BigInt {
        self.gram().det().expect("Gram is square").abs()
    }

    /// All leading principal minors of `-Gram` are positive.
    pub fn is_negative_definite(&self) -> bool {
        let g = -&self.gram();
        (1..=g.rows()).all(|k| {
            let minor = IntMatrix::from_fn(k, k, |i, j| g.get(i, j).clone());
            minor.det().expect("square").is_positive()
        })
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup, LatticeError> {
        let g = self.gram();
        let factors = smith_normal_form(&g).invariant_factors();
        if factors.len() < g.rows() || factors.iter().any(Zero::is_zero) {
            return Err(LatticeError::Degenerate);
        }
        Ok(DiscriminantGroup { invariant_factors: factors.into_iter().filter(|f| !f.is_one()).collect() })
    }

    /// Whether both lattices have the same ambient form and the same
    /// canonical basis.
    pub fn same_lattice(&self, other: &Lattice) -> bool {
        self.ambient_gram == other.ambient_gram && saturate_rows(&self.basis) == saturate_rows(&other.basis)
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(&RatMatrix::from_rows(v.len(), vec![v.to_vec()]))
            .is_some_and(|c| c.is_integral())
    }

    /// Coordinates of the rows of `vectors` in this lattice's basis, if
    /// they lie in its rational span.
    pub fn coordinates(&self, vectors: &RatMatrix) -> Option<RatMatrix> {
        solve_left(&self.basis, vectors)
    }

    /// Index of a sublattice of full rank in `self`.
    pub fn index_of(&self, sub: &Lattice) -> Option<BigInt> {
        if sub.rank() != self.rank() {
            return None;
        }
        let c = self.coordinates(&sub.basis)?.to_integer()?;
        Some(c.det().ok()?.abs())
    }
}

/// Solves `X * basis = vectors` for independent `basis` rows.
fn solve_left(basis: &RatMatrix, vectors: &RatMatrix) -> Option<RatMatrix> {
    let r = basis.rows();
    let n = basis.cols();
    // augmented system with unknowns as columns: basis^T x = v^T
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..r).map(|i| basis.get(i, j).clone()).collect();
            row.extend((0..vectors.rows()).map(|k| vectors.get(k, j).clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..r {
        let p = (prow..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(prow, p);
        let inv = a[prow][col].recip();
        a[prow] = a[prow].iter().map(|x| x * &inv).collect();
        for i in 0..n {
            if i != prow && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot = a[prow].clone();
                a[i] = a[i].iter().zip(&pivot).map(|(x, y)| x - &f * y).collect();
            }
        }
        pivots.push(prow);
        prow += 1;
    }
    // inconsistent rows mean some vector is outside the span
    if a[prow..].iter().any(|row| row[r..].iter().any(|x| !x.is_zero())) {
        return None;
    }
    Some(RatMatrix::from_fn(vectors.rows(), r, |k, i| a[pivots[i]][r + k].clone()))
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.ambient_dim())?;
        for i in 0..self.ambient_dim() {
            let row: Vec<String> = self.ambient_gram.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        writeln!(f, "{}", self.rank())?;
        for i in 0..self.rank() {
            let row: Vec<String> = self.basis.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Lattice {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next_rows = |count: usize, width: usize| -> Result<Vec<Vec<BigRational>>, LatticeError> {
            (0..count)
                .map(|_| {
                    let (ln, line) =
                        lines.next().ok_or(LatticeError::Parse { line: 0, msg: "unexpected end of input".into() })?;
                    let row: Vec<BigRational> = line
                        .split_whitespace()
                        .map(|t| parse_rational(t).ok_or(LatticeError::Parse { line: ln + 1, msg: format!("bad entry {t:?}") }))
                        .collect::<Result<_, _>>()?;
                    if width != usize::MAX && row.len() != width {
                        return Err(LatticeError::Parse { line: ln + 1, msg: format!("expected {width} entries") });
                    }
                    Ok(row)
                })
                .collect()
        };
        let header = |rows: Vec<Vec<BigRational>>| -> Result<usize, LatticeError> {
            match rows.as_slice() {
                [r] if r.len() == 1 && r[0].is_integer() && !r[0].is_negative() => {
                    usize::try_from(r[0].to_integer()).map_err(|_| LatticeError::Parse { line: 0, msg: "bad count".into() })
                }
                _ => Err(LatticeError::Parse { line: 0, msg: "expected a single count".into() }),
            }
        };
        let n = header(next_rows(1, usize::MAX)?)?;
        let gram = next_rows(n, n)?;
        let gram = RatMatrix::from_rows(n, gram).to_integer().ok_or(LatticeError::NonIntegralGram)?;
        let r = header(next_rows(1, usize::MAX)?)?;
        let basis = RatMatrix::from_rows(n, next_rows(r, n)?);
        Lattice::new(gram, basis)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantGroup {
    /// Nontrivial invariant factors `d1 | d2 | ...`.
    #[serde(serialize_with = "serde_int::many")]
    pub invariant_factors: Vec<BigInt>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn factors_i64(&self) -> Vec<i64> {
        self.invariant_factors.iter().map(|f| i64::try_from(f).expect("small factor")).collect()
    }
}

/// Ambient form `-2 I` on 24 coordinates with the standard basis.
pub fn root_lattice_a1_24() -> Lattice {
    let g = IntMatrix::identity(24).scale(&BigInt::from(-2));
    Lattice::new(g, IntMatrix::identity(24).to_rational()).expect("valid root lattice")
}

/// Adds glue vectors to `base`. Each glue vector must pair integrally with
/// the base and with every glue vector, and have even self-product.
pub fn overlattice_from_glue(base: &Lattice, glue: &RatMatrix) -> Result<Lattice, LatticeError> {
    if glue.rows() == 0 {
        return Ok(base.clone());
    }
    if glue.cols() != base.ambient_dim() {
        return Err(LatticeError::Dimension { expected: base.ambient_dim(), found: glue.cols() });
    }
    let glue_rows = glue.row_vecs();
    let base_rows = base.basis.row_vecs();
    for (index, g) in glue_rows.iter().enumerate() {
        if let Some(j) = base_rows.iter().position(|b| !base.pairing(g, b).is_integer()) {
            return Err(LatticeError::NonIntegralPairing { index, with: format!("base vector {j}") });
        }
        if let Some(j) = glue_rows.iter().position(|h| !base.pairing(g, h).is_integer()) {
            return Err(LatticeError::NonIntegralPairing { index, with: format!("glue vector {j}") });
        }
        let norm = base.pairing(g, g);
        if !(norm.clone() / rat(2, 1)).is_integer() {
            return Err(LatticeError::OddNorm { index, norm });
        }
    }
    Lattice::spanned_by(base.ambient_gram.clone(), &base.basis.stack(glue))
}

/// `(1/2) * indicator(word)` in ambient coordinates.
pub fn half_indicator(word: Codeword, length: usize) -> Vec<BigRational> {
    (0..length).map(|i| if word.contains(i) { rat(1, 2) } else { BigRational::zero() }).collect()
}

/// `A1^24` glued by half the indicator vectors of the code's generators.
pub fn niemeier_a1_24(code: &BinaryCode) -> Result<Lattice, LatticeError> {
    let base = root_lattice_a1_24();
    let glue = RatMatrix::from_rows(24, code.generator().iter().map(|w| half_indicator(*w, 24)).collect());
    overlattice_from_glue(&base, &glue)
}

/// Primitive sublattice fixed by every matrix, where a matrix acts on
/// basis coordinates of row vectors (`x -> x M`).
pub fn fixed_sublattice(l: &Lattice, isometries: &[IntMatrix]) -> Result<Lattice, LatticeError> {
    let r = l.rank();
    let g = l.gram();
    let mut stacked: Option<IntMatrix> = None;
    for (index, m) in isometries.iter().enumerate() {
        if m.rows() != r || m.cols() != r {
            return Err(LatticeError::Dimension { expected: r, found: m.rows() });
        }
        let image = &(m * &g) * &m.transpose();
        if image != g {
            let witness = (0..r).find(|&i| image.row(i) != g.row(i)).expect("rows differ");
            return Err(LatticeError::NotAnIsometry { index, witness });
        }
        let det = m.det()?;
        if det.abs() != BigInt::one() {
            return Err(LatticeError::NotInvertible { index, det });
        }
        let block = (m - &IntMatrix::identity(r)).transpose();
        stacked = Some(match stacked {
            None => block,
            Some(s) => s.stack(&block)?,
        });
    }
    let kernel = match stacked {
        None => IntMatrix::identity(r).to_rational(),
        Some(s) => integer_kernel(&s),
    };
    Lattice::new(l.ambient_gram.clone(), &kernel * &l.basis)
}

/// `l` intersected with the rational span of the rows of `w`.
pub fn intersect_with_subspace(l: &Lattice, w: &RatMatrix) -> Result<Lattice, LatticeError> {
    if w.cols() != l.ambient_dim() {
        return Err(LatticeError::Dimension { expected: l.ambient_dim(), found: w.cols() });
    }
    // rows of `k` span the orthogonal complement of span(w) for the dot product
    let k = rational_kernel(w);
    if k.rows() == 0 {
        return Ok(l.clone());
    }
    let constraints = &k * &l.basis.transpose();
    let coeffs = integer_kernel(&constraints.clear_denominators().0);
    Lattice::new(l.ambient_gram.clone(), &coeffs * &l.basis)
}

/// Indicator vectors of the parts of a partition of the coordinates.
pub fn orbit_indicators(partition: &[Vec<usize>], n: usize) -> RatMatrix {
    RatMatrix::from_rows(
        n,
        partition
            .iter()
            .map(|part| (0..n).map(|i| if part.contains(&i) { rat(1, 1) } else { rat(0, 1) }).collect())
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KeyLemmaCase {
    /// Orbit sizes 14, 1, 1, 7, 1.
    Star,
    /// Orbit sizes 8, 7, 1, 7, 1.
    DoubleStar,
}

impl KeyLemmaCase {
    pub fn expected_gram(self) -> IntMatrix {
        match self {
            KeyLemmaCase::Star => IntMatrix::from_rows([
                [-8, -1, -1, 0, 0],
                [-1, -2, 0, 0, 0],
                [-1, 0, -2, 0, 0],
                [0, 0, 0, -4, -1],
                [0, 0, 0, -1, -2],
            ]),
            KeyLemmaCase::DoubleStar => IntMatrix::from_rows([
                [-4, 0, 0, 0, 0],
                [0, -4, -1, 0, 0],
                [0, -1, -2, 0, 0],
                [0, 0, 0, -4, -1],
                [0, 0, 0, -1, -2],
            ]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KeyLemmaCase::Star => "star",
            KeyLemmaCase::DoubleStar => "double-star",
        }
    }
}

/// The invariant lattice of a five-orbit configuration of the 24 roots.
#[derive(Clone, Debug, Serialize)]
pub struct KeyLemmaReport {
    pub case: KeyLemmaCase,
    /// Orbits as sorted coordinate lists.
    pub partition: Vec<Vec<usize>>,
    #[serde(skip)]
    pub basis: RatMatrix,
    #[serde(serialize_with = "serde_int::matrix")]
    pub gram: IntMatrix,
    pub gram_matches: bool,
    #[serde(serialize_with = "serde_int::one")]
    pub abs_det: BigInt,
    #[serde(serialize_with = "serde_int::many")]
    pub invariant_factors: Vec<BigInt>,
    pub negative_definite: bool,
    /// Subsets `I` of `{1..5}` (1-based) whose orbit union is a codeword.
    pub glue_subsets: Vec<Vec<usize>>,
    /// The five basis vectors span exactly `N` intersected with the span of
    /// the orbit indicators.
    pub basis_equals_intersection: bool,
    /// The orbit sums and the half-sums over glue subsets generate the
    /// same lattice as the intersection.
    pub glue_generates_intersection: bool,
}

fn support_of(partition: &[Vec<usize>], subset: u32) -> Codeword {
    let mut bits = 0u32;
    for (i, part) in partition.iter().enumerate() {
        if subset >> i & 1 == 1 {
            for &j in part {
                bits |= 1 << j;
            }
        }
    }
    Codeword::new(bits)
}

fn sum_rows(parts: &[&[usize]], weight: BigRational) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); 24];
    for part in parts {
        for &j in *part {
            v[j] = &v[j] + &weight;
        }
    }
    v
}

/// Builds the configuration for one case from the code.
///
/// Star: the first octad `O` in enumeration order, `p = min O`, and the
/// two smallest coordinates `q < r` outside `O`; orbits are
/// `R - (O + {q, r})`, `{q}`, `{r}`, `O - {p}`, `{p}` and the basis is
/// `((b1+b2+b3)/2, b2, b3, (b4+b5)/2, b5)` with `b_i` the orbit sums.
///
/// DoubleStar: the first trio `(O1, O2, O3)`, `p2 = min O2`,
/// `p3 = min O3`; orbits are `O1`, `O2 - {p2}`, `{p2}`, `O3 - {p3}`,
/// `{p3}` and the basis is `(O1/2, O2/2, r_p2, O3/2, r_p3)`.
pub fn key_lemma_case(code: &BinaryCode, case: KeyLemmaCase) -> Result<KeyLemmaReport, LatticeError> {
    let partition: Vec<Vec<usize>> = match case {
        KeyLemmaCase::Star => {
            let o = *code.octads().first().ok_or(LatticeError::NoOctad)?;
            let inside = o.support();
            let p = inside[0];
            let outside: Vec<usize> = (0..24).filter(|&i| !o.contains(i)).collect();
            let (q, r) = (outside[0], outside[1]);
            vec![
                outside[2..].to_vec(),
                vec![q],
                vec![r],
                inside.iter().copied().filter(|&x| x != p).collect(),
                vec![p],
            ]
        }
        KeyLemmaCase::DoubleStar => {
            let [o1, o2, o3] = find_trio(code).ok_or(LatticeError::NoTrio)?;
            let (s2, s3) = (o2.support(), o3.support());
            vec![o1.support(), s2[1..].to_vec(), vec![s2[0]], s3[1..].to_vec(), vec![s3[0]]]
        }
    };
    let half = rat(1, 2);
    let one = rat(1, 1);
    let p = &partition;
    let basis_rows = match case {
        KeyLemmaCase::Star => vec![
            sum_rows(&[&p[0], &p[1], &p[2]], half.clone()),
            sum_rows(&[&p[1]], one.clone()),
            sum_rows(&[&p[2]], one.clone()),
            sum_rows(&[&p[3], &p[4]], half.clone()),
            sum_rows(&[&p[4]], one.clone()),
        ],
        KeyLemmaCase::DoubleStar => vec![
            sum_rows(&[&p[0]], half.clone()),
            sum_rows(&[&p[1], &p[2]], half.clone()),
            sum_rows(&[&p[2]], one.clone()),
            sum_rows(&[&p[3], &p[4]], half.clone()),
            sum_rows(&[&p[4]], one.clone()),
        ],
    };
    let basis = RatMatrix::from_rows(24, basis_rows);
    let niemeier = niemeier_a1_24(code)?;
    let b_lattice = Lattice::new(niemeier.ambient_gram.clone(), basis.clone())?;
    let gram = b_lattice.gram();
    let abs_det = b_lattice.abs_det();
    let invariant_factors = b_lattice.discriminant_group()?.invariant_factors;

    let glue_subsets: Vec<Vec<usize>> = (0u32..32)
        .filter(|&s| code.contains(support_of(&partition, s)))
        .map(|s| (0..5).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();

    let intersection = intersect_with_subspace(&niemeier, &orbit_indicators(&partition, 24))?;
    let all_in_n = (0..5).all(|i| niemeier.contains(basis.row(i)));
    let basis_equals_intersection = all_in_n && b_lattice.same_lattice(&intersection);

    let mut generators: Vec<Vec<BigRational>> = (0..5).map(|i| sum_rows(&[&partition[i]], one.clone())).collect();
    for s in &glue_subsets {
        let parts: Vec<&[usize]> = s.iter().map(|&i| partition[i - 1].as_slice()).collect();
        generators.push(sum_rows(&parts, half.clone()));
    }
    let glued = Lattice::spanned_by(niemeier.ambient_gram.clone(), &RatMatrix::from_rows(24, generators))?;
    let glue_generates_intersection = glued.same_lattice(&intersection);

    Ok(KeyLemmaReport {
        case,
        gram_matches: gram == case.expected_gram(),
        negative_definite: b_lattice.is_negative_definite(),
        partition,
        basis,
        gram,
        abs_det,
        invariant_factors,
        glue_subsets,
        basis_equals_intersection,
        glue_generates_intersection,
    })
}

/// Permutation matrix of a coordinate permutation, acting on row vectors.
pub fn permutation_isometry(images: &[usize]) -> IntMatrix {
    let n = images.len();
    IntMatrix::from_fn(n, n, |i, j| if images[i] == j { BigInt::one() } else { BigInt::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2code::build_golay;
    use crate::permgrp::{orbits, Permutation};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn golay() -> &'static BinaryCode {
        static C: OnceLock<BinaryCode> = OnceLock::new();
        C.get_or_init(build_golay)
    }

    fn niemeier() -> &'static Lattice {
        static N: OnceLock<Lattice> = OnceLock::new();
        N.get_or_init(|| niemeier_a1_24(golay()).unwrap())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn root_lattice() {
        let a = root_lattice_a1_24();
        assert_eq!(a.gram(), IntMatrix::identity(24).scale(&BigInt::from(-2)));
        assert_eq!(a.abs_det(), BigInt::from(1u64 << 24));
        assert!(a.is_even());
        assert_eq!(a.discriminant_group().unwrap().invariant_factors, ints(&[2; 24]));
    }

    #[test]
    fn niemeier_lattice() {
        let n = niemeier();
        assert_eq!(n.rank(), 24);
        assert!(n.is_even());
        assert_eq!(n.abs_det(), BigInt::one());
        assert!(n.is_negative_definite());
        assert!(n.discriminant_group().unwrap().invariant_factors.is_empty());
        let a = root_lattice_a1_24();
        assert_eq!(n.index_of(&a), Some(BigInt::from(4096)));
    }

    #[test]
    fn glue_checks() {
        let a = root_lattice_a1_24();
        assert!(overlattice_from_glue(&a, &RatMatrix::zeros(0, 24)).unwrap().same_lattice(&a));
        let dodecad = golay().codewords().iter().copied().find(|w| w.weight() == 12).unwrap();
        let g = RatMatrix::from_rows(24, vec![half_indicator(dodecad, 24)]);
        let l = overlattice_from_glue(&a, &g).unwrap();
        assert_eq!(l.pairing(g.row(0), g.row(0)), rat(-6, 1));
        assert_eq!(l.abs_det(), BigInt::from(1u64 << 22));
        let odd = RatMatrix::from_rows(24, vec![half_indicator(Codeword::from_support(&[0, 1]), 24)]);
        assert!(matches!(overlattice_from_glue(&a, &odd), Err(LatticeError::OddNorm { index: 0, .. })));
        let quarter = RatMatrix::from_rows(24, vec![(0..24).map(|i| if i == 0 { rat(1, 4) } else { rat(0, 1) }).collect()]);
        assert!(matches!(overlattice_from_glue(&a, &quarter), Err(LatticeError::NonIntegralPairing { index: 0, .. })));
    }

    #[test]
    fn fixed_sublattices() {
        let a = root_lattice_a1_24();
        assert!(fixed_sublattice(&a, &[IntMatrix::identity(24)]).unwrap().same_lattice(&a));
        let p = Permutation::from_cycles(24, &[&[0, 1, 2], &[3, 4]]).unwrap();
        let f = fixed_sublattice(&a, &[p.to_matrix()]).unwrap();
        let orbit_list = orbits(std::slice::from_ref(&p), 24);
        assert_eq!(f.rank(), orbit_list.len());
        let mut diag: Vec<BigInt> = f.gram().diagonal_entries();
        diag.sort();
        let mut expected: Vec<BigInt> = orbit_list.iter().map(|o| BigInt::from(-2 * o.len() as i64)).collect();
        expected.sort();
        assert_eq!(diag, expected);
        assert!(f.gram().is_diagonal());
        // cycle type (7)^3 (1)^3 leaves six orbits
        let seven: Vec<Vec<usize>> = (0..3).map(|k| (7 * k..7 * k + 7).collect()).collect();
        let refs: Vec<&[usize]> = seven.iter().map(Vec::as_slice).collect();
        let q = Permutation::from_cycles(24, &refs).unwrap();
        assert_eq!(fixed_sublattice(&a, &[q.to_matrix()]).unwrap().rank(), 6);
        let bad = IntMatrix::identity(24).scale(&BigInt::from(2));
        assert!(matches!(fixed_sublattice(&a, &[bad]), Err(LatticeError::NotAnIsometry { index: 0, witness: 0 })));
    }

    #[test]
    fn fixed_sublattice_is_primitive() {
        let p = Permutation::from_cycles(24, &[&[0, 1, 2, 3, 4, 5, 6], &[7, 8]]).unwrap();
        let a = root_lattice_a1_24();
        let f = fixed_sublattice(&a, &[p.to_matrix()]).unwrap();
        let coords = a.coordinates(f.basis()).unwrap().to_integer().unwrap();
        let factors = smith_normal_form(&coords).invariant_factors();
        assert!(factors.iter().all(|x| x.is_one()));
    }

    #[test]
    fn subspace_intersections() {
        let a = root_lattice_a1_24();
        let full = IntMatrix::identity(24).to_rational();
        assert!(intersect_with_subspace(&a, &full).unwrap().same_lattice(&a));
        let w = RatMatrix::from_rows(24, vec![(0..24).map(|i| rat((i < 2) as i64, 1)).collect()]);
        let l = intersect_with_subspace(&a, &w).unwrap();
        assert_eq!(l.rank(), 1);
        assert_eq!(l.gram(), IntMatrix::from_rows([[-4]]));
    }

    #[test]
    fn key_lemma_star() {
        let r = key_lemma_case(golay(), KeyLemmaCase::Star).unwrap();
        assert_eq!(r.partition.iter().map(Vec::len).collect::<Vec<_>>(), vec![14, 1, 1, 7, 1]);
        assert!(r.gram_matches);
        assert_eq!(r.gram, KeyLemmaCase::Star.expected_gram());
        assert_eq!(r.abs_det, BigInt::from(196));
        assert_eq!(r.invariant_factors, ints(&[7, 28]));
        assert!(r.negative_definite);
        assert_eq!(r.glue_subsets, vec![vec![], vec![1, 2, 3], vec![4, 5], vec![1, 2, 3, 4, 5]]);
        assert!(r.basis_equals_intersection);
        assert!(r.glue_generates_intersection);
        let n = niemeier();
        let inter = intersect_with_subspace(n, &orbit_indicators(&r.partition, 24)).unwrap();
        assert_eq!(inter.rank(), 5);
        assert_eq!(inter.abs_det(), BigInt::from(196));
    }

    #[test]
    fn key_lemma_double_star() {
        let r = key_lemma_case(golay(), KeyLemmaCase::DoubleStar).unwrap();
        assert_eq!(r.partition.iter().map(Vec::len).collect::<Vec<_>>(), vec![8, 7, 1, 7, 1]);
        assert!(r.gram_matches);
        assert_eq!(r.abs_det, BigInt::from(196));
        assert_eq!(r.invariant_factors, ints(&[7, 28]));
        assert!(r.negative_definite);
        assert!(r.basis_equals_intersection);
        assert!(r.glue_generates_intersection);
        assert!(r.glue_subsets.contains(&vec![1]));
        assert!(r.glue_subsets.contains(&vec![2, 3]));
        assert!(r.glue_subsets.contains(&vec![4, 5]));
    }

    #[test]
    fn broken_code_breaks_key_lemma() {
        // dropping a generator loses the glue vector (b1 + b2 + b3)/2
        let sub = golay().without_row(0);
        let r = key_lemma_case(&sub, KeyLemmaCase::Star).unwrap();
        assert!(!r.basis_equals_intersection);
        assert_eq!(r.glue_subsets, vec![vec![], vec![4, 5]]);
    }

    #[test]
    fn text_round_trip() {
        let r = key_lemma_case(golay(), KeyLemmaCase::Star).unwrap();
        let l = Lattice::new(niemeier().ambient_gram().clone(), r.basis.clone()).unwrap();
        let parsed: Lattice = l.to_string().parse().unwrap();
        assert_eq!(parsed, l);
        assert!("2\n1 0\n0 1\n1\n1/2 0\n".parse::<Lattice>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn index_determinant_law(mask in 0u32..4096) {
            let rows: Vec<Vec<BigRational>> = golay()
                .generator()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, w)| half_indicator(*w, 24))
                .collect();
            let a = root_lattice_a1_24();
            let l = overlattice_from_glue(&a, &RatMatrix::from_rows(24, rows)).unwrap();
            let index = l.index_of(&a).unwrap();
            prop_assert_eq!(index.clone(), BigInt::from(1u64 << mask.count_ones()));
            prop_assert_eq!(a.abs_det(), &index * &index * l.abs_det());
        }
    }
}
