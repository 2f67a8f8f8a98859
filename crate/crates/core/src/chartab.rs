//! Character table of L2(7) and fixed-locus Euler numbers of symplectic
//! automorphisms of K3 surfaces, stored as data and validated on load.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::CycloNum;
use crate::permgrp::{psl2_7_generators, ConjugacyClass, PermutationGroup};

pub const GROUP_ORDER: i64 = 168;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("rows {0} and {1} violate orthogonality")]
    RowOrthogonality(usize, usize),
    #[error("columns {0} and {1} violate orthogonality")]
    ColumnOrthogonality(usize, usize),
    #[error("class sizes sum to {0}, not the group order")]
    ClassSizes(i64),
    #[error("squared degrees sum to {0}, not the group order")]
    DegreeSum(i64),
    #[error("identity column does not match the degrees")]
    IdentityColumn,
    #[error("trace equation for order {order} is {found:?}, expected {expected:?}")]
    TraceEquation { order: u32, found: TraceEquation, expected: TraceEquation },
    #[error("table shape is inconsistent")]
    Shape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub label: &'static str,
    pub element_order: u32,
    pub size: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub classes: Vec<ClassInfo>,
    pub degrees: Vec<i64>,
    pub rows: Vec<Vec<CycloNum>>,
}

/// `(-1 + sqrt(-7)) / 2` with the Gauss-sum branch of the square root.
pub fn b7() -> CycloNum {
    let half = CycloNum::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)));
    &(&CycloNum::sqrt_minus7() - &CycloNum::one()) * &half
}

fn raw_table() -> CharacterTable {
    let classes = vec![
        ClassInfo { label: "1A", element_order: 1, size: 1 },
        ClassInfo { label: "2A", element_order: 2, size: 21 },
        ClassInfo { label: "3A", element_order: 3, size: 56 },
        ClassInfo { label: "4A", element_order: 4, size: 42 },
        ClassInfo { label: "7A", element_order: 7, size: 24 },
        ClassInfo { label: "7B", element_order: 7, size: 24 },
    ];
    let n = |k: i64| CycloNum::from_int(k);
    let w = b7();
    let wbar = w.conj();
    let rows = vec![
        vec![n(1), n(1), n(1), n(1), n(1), n(1)],
        vec![n(3), n(-1), n(0), n(1), w.clone(), wbar.clone()],
        vec![n(3), n(-1), n(0), n(1), wbar, w],
        vec![n(6), n(2), n(0), n(0), n(-1), n(-1)],
        vec![n(7), n(-1), n(1), n(-1), n(0), n(0)],
        vec![n(8), n(0), n(-1), n(0), n(1), n(1)],
    ];
    CharacterTable { classes, degrees: vec![1, 3, 3, 6, 7, 8], rows }
}

/// Coefficients on `(n1, n2 = n3, n4, n5, n6)` and right-hand side of the
/// trace identity `tr(g | S) = euler(g) - 4` for one element order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEquation {
    pub coefficients: [i64; 5],
    pub rhs: i64,
}

/// The four trace identities the table has to reproduce, for element
/// orders 2, 3, 4, 7.
pub fn expected_trace_equations() -> [(u32, TraceEquation); 4] {
    [
        (2, TraceEquation { coefficients: [1, -2, 2, -1, 0], rhs: 4 }),
        (3, TraceEquation { coefficients: [1, 0, 0, 1, -1], rhs: 2 }),
        (4, TraceEquation { coefficients: [1, 2, 0, -1, 0], rhs: 0 }),
        (7, TraceEquation { coefficients: [1, -1, -1, 0, 1], rhs: -1 }),
    ]
}

impl CharacterTable {
    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// First class with the given element order.
    pub fn class_of_order(&self, order: u32) -> Option<usize> {
        self.classes.iter().position(|c| c.element_order == order)
    }

    pub fn value(&self, row: usize, class: usize) -> &CycloNum {
        &self.rows[row][class]
    }

    /// `(1/|G|) sum size(c) chi(c) conj(psi(c))`.
    pub fn inner_product(&self, chi: &[CycloNum], psi: &[CycloNum]) -> BigRational {
        let total = self
            .classes
            .iter()
            .zip(chi.iter().zip(psi))
            .fold(CycloNum::zero(), |acc, (c, (x, y))| &acc + &(x * &y.conj()).scale_int(&BigInt::from(c.size)));
        let total = total.to_rational().expect("hermitian pairing of characters is rational");
        total / BigRational::from_integer(BigInt::from(GROUP_ORDER))
    }

    pub fn column_product(&self, a: usize, b: usize) -> CycloNum {
        self.rows.iter().fold(CycloNum::zero(), |acc, r| &acc + &(&r[a] * &r[b].conj()))
    }

    /// Trace identity for one class: the multiplicities of the two
    /// 3-dimensional characters are merged.
    pub fn trace_equation(&self, class: usize, euler: i64) -> Option<TraceEquation> {
        let int = |x: &CycloNum| x.to_integer().and_then(|v| i64::try_from(v).ok());
        let merged = &self.rows[1][class] + &self.rows[2][class];
        Some(TraceEquation {
            coefficients: [
                int(&self.rows[0][class])?,
                int(&merged)?,
                int(&self.rows[3][class])?,
                int(&self.rows[4][class])?,
                int(&self.rows[5][class])?,
            ],
            rhs: euler - 4,
        })
    }

    pub fn validate(&self) -> Result<(), TableError> {
        let k = self.classes.len();
        if self.rows.len() != k || self.degrees.len() != k || self.rows.iter().any(|r| r.len() != k) {
            return Err(TableError::Shape);
        }
        let class_total: i64 = self.classes.iter().map(|c| c.size).sum();
        if class_total != GROUP_ORDER {
            return Err(TableError::ClassSizes(class_total));
        }
        let deg_total: i64 = self.degrees.iter().map(|d| d * d).sum();
        if deg_total != GROUP_ORDER {
            return Err(TableError::DegreeSum(deg_total));
        }
        let identity = self.class_of_order(1).ok_or(TableError::IdentityColumn)?;
        if self.rows.iter().zip(&self.degrees).any(|(r, d)| r[identity] != CycloNum::from_int(*d)) {
            return Err(TableError::IdentityColumn);
        }
        for i in 0..k {
            for j in 0..k {
                let expected = if i == j { BigRational::one() } else { BigRational::zero() };
                if self.inner_product(&self.rows[i], &self.rows[j]) != expected {
                    return Err(TableError::RowOrthogonality(i, j));
                }
                let expected = if i == j {
                    CycloNum::from_rational(&BigRational::new(GROUP_ORDER.into(), self.classes[i].size.into()))
                } else {
                    CycloNum::zero()
                };
                if self.column_product(i, j) != expected {
                    return Err(TableError::ColumnOrthogonality(i, j));
                }
            }
        }
        let euler = nikulin_euler_table();
        for (order, expected) in expected_trace_equations() {
            let class = self.class_of_order(order).ok_or(TableError::Shape)?;
            let e = euler.get(order).ok_or(TableError::Shape)?;
            let found = self.trace_equation(class, e).ok_or(TableError::Shape)?;
            if found != expected {
                return Err(TableError::TraceEquation { order, found, expected });
            }
        }
        Ok(())
    }

    /// Aligned text rendering.
    pub fn render(&self) -> String {
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec![String::new()];
        header.extend(self.classes.iter().map(|c| c.label.to_string()));
        grid.push(header);
        let mut sizes = vec!["size".to_string()];
        sizes.extend(self.classes.iter().map(|c| c.size.to_string()));
        grid.push(sizes);
        for (i, r) in self.rows.iter().enumerate() {
            let mut line = vec![format!("chi{}", i + 1)];
            line.extend(r.iter().map(|x| if x == &b7() { "b7".into() } else if x == &b7().conj() { "b7*".into() } else { x.pretty() }));
            grid.push(line);
        }
        let widths: Vec<usize> = (0..grid[0].len()).map(|j| grid.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in grid {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out.push_str("b7 = (-1 + sqrt(-7))/2, b7* its conjugate\n");
        out
    }
}

impl fmt::Display for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The stored table, checked against orthogonality, the degree sum and
/// the four trace identities.
///
/// Panics if the stored data fails validation.
pub fn validated_table() -> CharacterTable {
    let t = raw_table();
    if let Err(e) = t.validate() {
        panic!("stored character table is corrupt: {e}");
    }
    t
}

/// Euler number of the fixed locus of a symplectic automorphism of a K3
/// surface, by element order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NikulinEulerTable(BTreeMap<u32, i64>);

impl NikulinEulerTable {
    pub fn get(&self, order: u32) -> Option<i64> {
        self.0.get(&order).copied()
    }

    pub fn entries(&self) -> &BTreeMap<u32, i64> {
        &self.0
    }
}

pub fn nikulin_euler_table() -> NikulinEulerTable {
    NikulinEulerTable(BTreeMap::from([(1, 24), (2, 8), (3, 6), (4, 4), (5, 4), (6, 2), (7, 3), (8, 2)]))
}

/// Conjugacy classes of the permutation model of L2(7) with table labels.
/// 7A is the class of `x -> x + 1`, whose 3-dimensional trace is b7.
pub fn label_permutation_classes(group: &PermutationGroup) -> Vec<(&'static str, ConjugacyClass)> {
    let [alpha, _, _] = psl2_7_generators();
    let table = raw_table();
    group
        .conjugacy_classes()
        .into_iter()
        .map(|c| {
            let label = match c.element_order {
                7 if c.elements.contains(&alpha) => "7A",
                7 => "7B",
                o => table.classes[table.class_of_order(o as u32).expect("known order")].label,
            };
            (label, c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::represent::{character_of, matrix_group_closure, v3_generators};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn table_validates() {
        let t = validated_table();
        assert_eq!(t.degrees, vec![1, 3, 3, 6, 7, 8]);
        let order2 = t.class_index("2A").unwrap();
        let col: Vec<CycloNum> = t.rows.iter().map(|r| r[order2].clone()).collect();
        assert_eq!(col, [1, -1, -1, 2, -1, 0].map(CycloNum::from_int).to_vec());
        let (a, b) = (t.class_index("7A").unwrap(), t.class_index("7B").unwrap());
        assert_eq!(t.value(1, a), &b7());
        assert_eq!(t.value(1, b), &b7().conj());
        for i in 3..6 {
            assert_eq!(t.value(i, a), t.value(i, b));
        }
    }

    #[test]
    fn inner_products() {
        let t = validated_table();
        assert_eq!(t.inner_product(&t.rows[1], &t.rows[1]), q(1));
        assert_eq!(t.inner_product(&t.rows[1], &t.rows[2]), q(0));
        assert_eq!(t.inner_product(&t.rows[0], &t.rows[0]), q(1));
    }

    #[test]
    fn corrupted_tables_are_rejected() {
        let mut t = raw_table();
        t.rows[4][1] = CycloNum::from_int(1);
        assert!(t.validate().is_err());
        let mut t = raw_table();
        t.classes[1].size = 20;
        assert_eq!(t.validate(), Err(TableError::ClassSizes(167)));
        let mut t = raw_table();
        t.rows.swap(4, 5);
        assert!(t.validate().is_err());
    }

    #[test]
    fn trace_equations_match() {
        let t = validated_table();
        let euler = nikulin_euler_table();
        for (order, expected) in expected_trace_equations() {
            let c = t.class_of_order(order).unwrap();
            assert_eq!(t.trace_equation(c, euler.get(order).unwrap()).unwrap(), expected);
        }
        assert_eq!(euler.entries().len(), 8);
        assert_eq!(euler.get(1), Some(24));
        assert_eq!(euler.get(9), None);
    }

    #[test]
    fn matrix_traces_match_second_row() {
        let t = validated_table();
        let group = matrix_group_closure(&v3_generators()).unwrap();
        let traces = character_of(&group).unwrap();
        for c in &traces {
            let matching: Vec<usize> = (0..6)
                .filter(|&j| {
                    t.classes[j].element_order == c.element_order
                        && t.classes[j].size == c.size as i64
                        && t.value(1, j) == &c.trace
                })
                .collect();
            assert_eq!(matching.len(), 1, "class of order {}", c.element_order);
        }
    }

    #[test]
    fn permutation_classes_are_labelled() {
        let g = PermutationGroup::psl2_7();
        let labelled = label_permutation_classes(&g);
        let t = validated_table();
        let mut seen: Vec<&str> = labelled.iter().map(|(l, _)| *l).collect();
        seen.sort();
        assert_eq!(seen, vec!["1A", "2A", "3A", "4A", "7A", "7B"]);
        for (label, class) in &labelled {
            let info = &t.classes[t.class_index(label).unwrap()];
            assert_eq!(info.size as usize, class.size);
            assert_eq!(info.element_order as usize, class.element_order);
        }
    }
}
