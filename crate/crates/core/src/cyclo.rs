//! Exact arithmetic in the 7th cyclotomic field Q(ζ).
//!
//! Elements are stored in the basis `1, ζ, .., ζ^5`; `ζ^6` is rewritten as
//! `-(1 + ζ + .. + ζ^5)`. Coefficients share one positive denominator, kept
//! coprime to the numerators, so equal elements have identical storage.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactmat::parse_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {0} is not a unit mod 7")]
    NotAUnit(i64),
    #[error("cannot parse cyclotomic number: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloNum {
    num: [BigInt; 6],
    den: BigInt,
}

impl CycloNum {
    /// Builds from seven integer coefficients of `1, ζ, .., ζ^6` over a
    /// common denominator.
    fn reduce7(c: [BigInt; 7], den: BigInt) -> Self {
        let [c0, c1, c2, c3, c4, c5, c6] = c;
        let num = [c0 - &c6, c1 - &c6, c2 - &c6, c3 - &c6, c4 - &c6, c5 - &c6];
        Self::normalized(num, den)
    }

    fn normalized(mut num: [BigInt; 6], mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for n in num.iter_mut() {
                *n = -&*n;
            }
        }
        let g = num.iter().fold(den.clone(), |g, n| g.gcd(n));
        if !g.is_one() {
            den /= &g;
            for n in num.iter_mut() {
                *n /= &g;
            }
        }
        CycloNum { num, den }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        let mut num: [BigInt; 6] = Default::default();
        num[0] = n.into();
        CycloNum { num, den: BigInt::one() }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let mut num: [BigInt; 6] = Default::default();
        num[0] = q.numer().clone();
        Self::normalized(num, q.denom().clone())
    }

    pub fn from_coeffs(coeffs: &[BigRational; 6]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = coeffs.clone().map(|c| c.numer() * (&den / c.denom()));
        Self::normalized(num, den)
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let mut c: [BigInt; 7] = Default::default();
        c[k.rem_euclid(7) as usize] = BigInt::one();
        Self::reduce7(c, BigInt::one())
    }

    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// The Gauss sum `ζ + ζ^2 + ζ^4 - ζ^3 - ζ^5 - ζ^6`, a square root of -7.
    pub fn sqrt_minus7() -> Self {
        let mut x = Self::zero();
        for k in [1, 2, 4] {
            x = &x + &Self::zeta_pow(k);
        }
        for k in [3, 5, 6] {
            x = &x - &Self::zeta_pow(k);
        }
        x
    }

    pub fn coeffs(&self) -> [BigRational; 6] {
        self.num.clone().map(|n| BigRational::new(n, self.den.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.den.is_one()).then(|| self.num[0].clone())
    }

    /// Substitutes `ζ -> ζ^k`.
    pub fn galois(&self, k: i64) -> Result<Self, CycloError> {
        let k7 = k.rem_euclid(7);
        if k7 == 0 {
            return Err(CycloError::NotAUnit(k));
        }
        let mut c: [BigInt; 7] = Default::default();
        for (i, n) in self.num.iter().enumerate() {
            c[(i as i64 * k7 % 7) as usize] += n;
        }
        Ok(Self::reduce7(c, self.den.clone()))
    }

    /// Complex conjugation, `ζ -> ζ^6`.
    pub fn conj(&self) -> Self {
        self.galois(6).expect("6 is a unit")
    }

    /// Product of all six Galois conjugates, a rational number.
    pub fn norm(&self) -> BigRational {
        let mut p = self.clone();
        for k in 2..7 {
            p = &p * &self.galois(k).expect("unit");
        }
        p.to_rational().expect("norm lies in Q")
    }

    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let mut others = Self::one();
        for k in 2..7 {
            others = &others * &self.galois(k).expect("unit");
        }
        let n = (self * &others).to_rational().expect("norm lies in Q");
        Ok(&others * &Self::from_rational(&n.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, CycloError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        Self::normalized(self.num.clone().map(|n| n * k), self.den.clone())
    }

    /// Human-readable form such as `-1/2 + 1/2*z^3`.
    pub fn pretty(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let term = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "z".to_string(),
                (1, false) => format!("{mag}*z"),
                (_, true) => format!("z^{i}"),
                (_, false) => format!("{mag}*z^{i}"),
            };
            parts.push((sign, term));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (sign, term)) in parts.into_iter().enumerate() {
            match (k, sign) {
                (0, "-") => out.push('-'),
                (0, _) => {}
                (_, s) => out.push_str(&format!(" {s} ")),
            }
            out.push_str(&term);
        }
        out
    }
}

impl Default for CycloNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        if self.den == rhs.den {
            let num = std::array::from_fn(|i| &self.num[i] + &rhs.num[i]);
            return CycloNum::normalized(num, self.den.clone());
        }
        let num = std::array::from_fn(|i| &self.num[i] * &rhs.den + &rhs.num[i] * &self.den);
        CycloNum::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self + &-rhs
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { num: self.num.clone().map(|n| -n), den: self.den.clone() }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        if self.is_zero() || rhs.is_zero() {
            return CycloNum::zero();
        }
        let mut c: [BigInt; 7] = Default::default();
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    c[(i + j) % 7] += a * b;
                }
            }
        }
        CycloNum::reduce7(c, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs().iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for CycloNum {
    type Err = CycloError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens.len() != 6 {
            return Err(CycloError::Parse(format!("expected 6 coefficients, found {}", tokens.len())));
        }
        let mut coeffs: [BigRational; 6] = Default::default();
        for (slot, t) in coeffs.iter_mut().zip(tokens) {
            *slot = parse_rational(t).ok_or_else(|| CycloError::Parse(format!("bad rational {t:?}")))?;
        }
        Ok(Self::from_coeffs(&coeffs))
    }
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(n: i64) -> CycloNum {
        CycloNum::from_int(n)
    }

    #[test]
    fn basic_identities() {
        let z = CycloNum::zeta();
        assert!((&z * &CycloNum::zeta_pow(6)).is_one());
        let total = (0..7).fold(CycloNum::zero(), |acc, k| &acc + &CycloNum::zeta_pow(k));
        assert!(total.is_zero());
        assert_eq!(z.pow(7), CycloNum::one());
        assert_eq!(CycloNum::zeta_pow(-1), CycloNum::zeta_pow(6));
    }

    /// Polynomials over Q as coefficient vectors, lowest degree first.
    fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let mut quot = vec![BigRational::zero(); r.len().max(1)];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let f = r.last().unwrap() / b.last().unwrap();
            for (i, c) in b.iter().enumerate() {
                r[i + shift] = &r[i + shift] - &f * c;
            }
            quot[shift] = f;
            r = trim(r);
        }
        (quot, r)
    }

    fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + x * y;
            }
        }
        trim(out)
    }

    fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let z = BigRational::zero();
        trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
    }

    /// Inverse of `a` modulo the 7th cyclotomic polynomial by the extended
    /// Euclidean algorithm in the power basis.
    fn ext_gcd_inverse(a: &[BigRational]) -> Vec<BigRational> {
        let phi: Vec<BigRational> = (0..7).map(|_| q(1, 1)).collect();
        let (mut r0, mut r1) = (phi, trim(a.to_vec()));
        let (mut t0, mut t1) = (vec![], vec![q(1, 1)]);
        while r1.len() > 1 {
            let (quot, rem) = poly_divmod(&r0, &r1);
            let t2 = poly_sub(&t0, &poly_mul(&quot, &t1));
            r0 = std::mem::replace(&mut r1, rem);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let c = r1[0].clone();
        let t: Vec<BigRational> = t1.iter().map(|x| x / &c).collect();
        let phi: Vec<BigRational> = (0..7).map(|_| q(1, 1)).collect();
        poly_divmod(&t, &phi).1
    }

    #[test]
    fn inverse_matches_ext_gcd_oracle() {
        let x = &int(1) - &CycloNum::zeta();
        let inv = x.inverse().unwrap();
        assert!((&inv * &x).is_one());
        let oracle = ext_gcd_inverse(&[q(1, 1), q(-1, 1)]);
        let mut coeffs: [BigRational; 6] = Default::default();
        for (i, c) in oracle.into_iter().enumerate() {
            coeffs[i] = c;
        }
        assert_eq!(inv, CycloNum::from_coeffs(&coeffs));
        assert_eq!(x.norm(), q(7, 1));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(CycloNum::zero().inverse(), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn gauss_sum() {
        let s = CycloNum::sqrt_minus7();
        assert_eq!(&s * &s, int(-7));
        assert!((&s + &s.galois(3).unwrap()).is_zero());
        assert_eq!(s.galois(2).unwrap(), s);
        assert_eq!(s.galois(4).unwrap(), s);
        assert_eq!(s.conj(), -&s);
        let a = &CycloNum::zeta_pow(2) - &CycloNum::zeta_pow(5);
        let b = &CycloNum::zeta_pow(1) - &CycloNum::zeta_pow(6);
        let c = &CycloNum::zeta_pow(4) - &CycloNum::zeta_pow(3);
        assert_eq!(&(&a + &b) + &c, s);
    }

    #[test]
    fn galois_examples() {
        let z = CycloNum::zeta();
        assert_eq!(z.galois(2).unwrap(), CycloNum::zeta_pow(2));
        assert_eq!(z.galois(1).unwrap(), z);
        assert_eq!(z.galois(14), Err(CycloError::NotAUnit(14)));
        assert_eq!(z.galois(-1).unwrap(), CycloNum::zeta_pow(6));
    }

    #[test]
    fn serialization_round_trip() {
        let x = CycloNum::from_coeffs(&[q(1, 2), q(0, 1), q(-3, 4), q(0, 1), q(5, 1), q(0, 1)]);
        assert_eq!(x.to_string(), "1/2 0 -3/4 0 5 0");
        assert_eq!(x.to_string().parse::<CycloNum>().unwrap(), x);
        assert!("1 2 3".parse::<CycloNum>().is_err());
        assert_eq!(x.pretty(), "1/2 - 3/4*z^2 + 5*z^4");
        assert_eq!(CycloNum::zero().pretty(), "0");
    }

    fn arb_cyclo() -> impl Strategy<Value = CycloNum> {
        (proptest::array::uniform6(-6i64..=6), 1i64..=5).prop_map(|(c, d)| {
            CycloNum::from_coeffs(&c.map(|n| q(n, d)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(x in arb_cyclo(), y in arb_cyclo(), z in arb_cyclo()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !x.is_zero() {
                prop_assert!((&x * &x.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn galois_is_ring_automorphism(x in arb_cyclo(), y in arb_cyclo(), k in 1i64..7) {
            let g = |v: &CycloNum| v.galois(k).unwrap();
            prop_assert_eq!(g(&(&x * &y)), &g(&x) * &g(&y));
            prop_assert_eq!(g(&(&x + &y)), &g(&x) + &g(&y));
        }

        #[test]
        fn serialization_round_trips(x in arb_cyclo()) {
            prop_assert_eq!(x.to_string().parse::<CycloNum>().unwrap(), x);
        }
    }
}
