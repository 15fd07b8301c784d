//! Numerical Néron–Severi data of a smooth projective surface.
//!
//! A [`SurfaceLattice`] is a Gram matrix on a chosen basis of the algebraic
//! classes, the canonical class `K` in that basis, the topological Euler
//! number `c₂`, and optionally the characteristic of the ground field.
//! Construction only checks shapes; [`SurfaceLattice::validate`] checks the
//! geometric constraints (symmetry, Hodge index, Noether integrality), so
//! that invalid data can be built and rejected explicitly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

/// A rational divisor class, written in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass {
    #[serde(with = "rational::string_vec")]
    coords: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(coords: Vec<Rational>) -> Self {
        DivisorClass { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivisorClass::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(rho: usize) -> Self {
        DivisorClass::new(vec![Rational::zero(); rho])
    }

    /// The `i`-th basis vector of a rank-`rho` lattice.
    pub fn basis(rho: usize, i: usize) -> Self {
        let mut d = DivisorClass::zero(rho);
        d.coords[i] = int(1);
        d
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// True iff every coordinate has denominator 1.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(rational::is_integer)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        DivisorClass::new(self.coords.iter().map(|c| c * k).collect())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "divisor classes from lattices of different rank"
        );
        DivisorClass::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(rational::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for DivisorClass {
            type Output = DivisorClass;
            fn $method(self, rhs: DivisorClass) -> DivisorClass {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

/// Inertia of a symmetric form: numbers of positive, zero and negative
/// eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl Signature {
    /// The Hodge-index signature `(1, 0, rho - 1)`.
    pub fn hodge(rho: usize) -> Self {
        Signature {
            positive: 1,
            zero: 0,
            negative: rho - 1,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.zero, self.negative)
    }
}

/// Numerical model of a smooth projective surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson", into = "LatticeJson")]
pub struct SurfaceLattice {
    gram: Vec<Vec<i64>>,
    canonical: DivisorClass,
    c2: i64,
    char_p: Option<u64>,
}

impl SurfaceLattice {
    /// Builds a lattice after checking shapes only. `K` must be integral and
    /// of length `rho`; symmetry and signature are checked by [`Self::validate`].
    pub fn new(gram: Vec<Vec<i64>>, canonical: DivisorClass, c2: i64, char_p: Option<u64>) -> Result<Self> {
        let rho = gram.len();
        if rho == 0 {
            return Err(Error::EmptyLattice);
        }
        if gram.iter().any(|row| row.len() != rho) {
            return Err(Error::NonSquareGram);
        }
        if canonical.len() != rho {
            return Err(Error::DimensionMismatch {
                expected: rho,
                found: canonical.len(),
            });
        }
        if !canonical.is_integral() {
            return Err(Error::NonIntegralCanonical);
        }
        Ok(SurfaceLattice {
            gram,
            canonical,
            c2,
            char_p,
        })
    }

    /// Picard rank `ρ` of a Picard-rank-one surface with `H² = h`, `K = k·H`.
    pub fn rank_one(h: i64, k: i64, c2: i64) -> Self {
        SurfaceLattice::new(vec![vec![h]], DivisorClass::from_ints(&[k]), c2, None)
            .expect("rank-one lattice data is well formed")
    }

    /// Numerical model of `C₁ × C₂` with `g(C_i) = g_i`.
    ///
    /// Basis: `f₁ = [C₁ × pt]`, `f₂ = [pt × C₂]`, with `f₁² = f₂² = 0` and
    /// `f₁·f₂ = 1`. Adjunction gives `K·f₁ = 2g₁ − 2` and `K·f₂ = 2g₂ − 2`,
    /// hence `K = (2g₂ − 2) f₁ + (2g₁ − 2) f₂`; `c₂ = (2 − 2g₁)(2 − 2g₂)`.
    pub fn product_surface(g1: u32, g2: u32) -> Self {
        let (a, b) = (2 * g1 as i64 - 2, 2 * g2 as i64 - 2);
        SurfaceLattice::new(
            vec![vec![0, 1], vec![1, 0]],
            DivisorClass::from_ints(&[b, a]),
            a * b,
            None,
        )
        .expect("product lattice data is well formed")
    }

    pub fn with_char_p(mut self, p: Option<u64>) -> Self {
        self.char_p = p;
        self
    }

    pub fn rho(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn c2(&self) -> i64 {
        self.c2
    }

    pub fn char_p(&self) -> Option<u64> {
        self.char_p
    }

    pub fn check_dim(&self, d: &DivisorClass) -> Result<()> {
        if d.len() == self.rho() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rho(),
                found: d.len(),
            })
        }
    }

    /// Intersection product `aᵀ · gram · b`.
    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rational> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        if a.is_integral() && b.is_integral() {
            let mut acc = BigInt::zero();
            for (i, ai) in a.coords().iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                let mut row = BigInt::zero();
                for (j, bj) in b.coords().iter().enumerate() {
                    if self.gram[i][j] != 0 && !bj.is_zero() {
                        row += bj.numer() * self.gram[i][j];
                    }
                }
                acc += ai.numer() * row;
            }
            return Ok(Rational::from_integer(acc));
        }
        let mut acc = Rational::zero();
        for (i, ai) in a.coords().iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let mut row = Rational::zero();
            for (j, bj) in b.coords().iter().enumerate() {
                if self.gram[i][j] != 0 && !bj.is_zero() {
                    row += bj * int(self.gram[i][j]);
                }
            }
            acc += ai * row;
        }
        Ok(acc)
    }

    pub fn square(&self, a: &DivisorClass) -> Result<Rational> {
        self.pair(a, a)
    }

    /// `H·H`, or an error unless it is positive.
    pub fn polarization_square(&self, h: &DivisorClass) -> Result<Rational> {
        let hh = self.square(h)?;
        if hh.is_positive() {
            Ok(hh)
        } else {
            Err(Error::NonPositivePolarization(hh))
        }
    }

    pub fn k_squared(&self) -> Rational {
        self.square(&self.canonical).expect("K has lattice rank")
    }

    /// `χ(O_X) = (K² + c₂)/12`.
    pub fn chi_structure_sheaf(&self) -> Rational {
        (self.k_squared() + int(self.c2)) / int(12)
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        let n = self.rho();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.gram[i][j] != self.gram[j][i])
    }

    /// Exact inertia of the Gram matrix.
    pub fn signature(&self) -> Result<Signature> {
        if let Some((i, j)) = self.first_asymmetry() {
            return Err(Error::NonSymmetricGram(i, j));
        }
        let m: Vec<Vec<Rational>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&x| int(x)).collect())
            .collect();
        Ok(symmetric_inertia(m))
    }

    /// Checks symmetry, the Hodge-index signature `(1, 0, ρ−1)` and Noether
    /// integrality of `(K² + c₂)/12`.
    pub fn validate(&self) -> Result<()> {
        let sig = self.signature()?;
        if sig != Signature::hodge(self.rho()) {
            return Err(Error::HodgeIndex(sig));
        }
        let k2 = self.k_squared();
        let total = k2.to_integer() + num_bigint::BigInt::from(self.c2);
        let total: i64 = total.try_into().unwrap_or(i64::MAX);
        if total.rem_euclid(12) != 0 {
            return Err(Error::Noether(total));
        }
        Ok(())
    }
}

/// Inertia of a symmetric rational matrix by symmetric Gaussian elimination.
///
/// Pivots on a nonzero diagonal entry of the remaining block. When the whole
/// remaining diagonal vanishes but some `a_ij ≠ 0`, the substitution
/// `e_i ← e_i + e_j` produces the diagonal entry `2·a_ij ≠ 0` (hyperbolic
/// split) and elimination continues.
pub fn symmetric_inertia(mut m: Vec<Vec<Rational>>) -> Signature {
    let n = m.len();
    let mut sig = Signature {
        positive: 0,
        zero: 0,
        negative: 0,
    };
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let pivot = match active.iter().copied().find(|&i| !m[i][i].is_zero()) {
            Some(p) => p,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !m[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else {
                    sig.zero += active.len();
                    break;
                };
                // row_i += row_j, then col_i += col_j
                let row_j = m[j].clone();
                for (x, y) in m[i].iter_mut().zip(row_j) {
                    *x += y;
                }
                for row in m.iter_mut() {
                    let v = row[j].clone();
                    row[i] += v;
                }
                i
            }
        };
        let p = m[pivot][pivot].clone();
        if p.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        active.retain(|&i| i != pivot);
        for &i in &active {
            if m[i][pivot].is_zero() {
                continue;
            }
            let factor = &m[i][pivot] / &p;
            for &j in &active {
                let delta = &factor * &m[pivot][j];
                m[i][j] -= delta;
            }
            m[i][pivot] = Rational::zero();
        }
        for &i in &active {
            m[pivot][i] = Rational::zero();
        }
    }
    sig
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeJson {
    rho: usize,
    gram: Vec<Vec<i64>>,
    #[serde(rename = "K")]
    k: Vec<i64>,
    c2: i64,
    #[serde(default)]
    char_p: Option<u64>,
}

impl TryFrom<LatticeJson> for SurfaceLattice {
    type Error = Error;
    fn try_from(j: LatticeJson) -> Result<Self> {
        if j.rho != j.gram.len() {
            return Err(Error::DimensionMismatch {
                expected: j.rho,
                found: j.gram.len(),
            });
        }
        SurfaceLattice::new(j.gram, DivisorClass::from_ints(&j.k), j.c2, j.char_p)
    }
}

impl From<SurfaceLattice> for LatticeJson {
    fn from(l: SurfaceLattice) -> Self {
        LatticeJson {
            rho: l.rho(),
            k: l
                .canonical
                .coords()
                .iter()
                .map(|c| c.to_integer().try_into().expect("K coordinate fits in i64"))
                .collect(),
            gram: l.gram,
            c2: l.c2,
            char_p: l.char_p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn hyperbolic() -> SurfaceLattice {
        SurfaceLattice::new(
            vec![vec![0, 1], vec![1, 0]],
            DivisorClass::from_ints(&[0, 0]),
            0,
            None,
        )
        .unwrap()
    }

    fn diag(entries: &[i64]) -> SurfaceLattice {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
            .collect();
        SurfaceLattice::new(gram, DivisorClass::zero(n).clone(), 0, None).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let l = hyperbolic();
        let f1 = DivisorClass::basis(2, 0);
        let f2 = DivisorClass::basis(2, 1);
        assert_eq!(l.pair(&f1, &f2).unwrap(), int(1));
        assert_eq!(l.pair(&f1, &f1).unwrap(), int(0));
        let p = SurfaceLattice::product_surface(2, 2);
        assert_eq!(p.k_squared(), int(8));
    }

    #[test]
    fn pairing_dimension_mismatch() {
        let l = hyperbolic();
        let err = l
            .pair(&DivisorClass::from_ints(&[1]), &DivisorClass::from_ints(&[1, 0]))
            .unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn signature_examples() {
        let sig = |p, z, n| Signature {
            positive: p,
            zero: z,
            negative: n,
        };
        assert_eq!(diag(&[1, -1]).signature().unwrap(), sig(1, 0, 1));
        assert_eq!(hyperbolic().signature().unwrap(), sig(1, 0, 1));
        let bad = diag(&[1, 1]);
        assert_eq!(bad.signature().unwrap(), sig(2, 0, 0));
        let err = bad.validate().unwrap_err();
        assert_eq!(err.to_string(), "signature (2,0,0) violates Hodge index");
    }

    #[test]
    fn signature_with_degenerate_and_hyperbolic_blocks() {
        // U ⊕ (0) ⊕ (-2)
        let l = SurfaceLattice::new(
            vec![
                vec![0, 1, 0, 0],
                vec![1, 0, 0, 0],
                vec![0, 0, 0, 0],
                vec![0, 0, 0, -2],
            ],
            DivisorClass::zero(4),
            0,
            None,
        )
        .unwrap();
        assert_eq!(
            l.signature().unwrap(),
            Signature {
                positive: 1,
                zero: 1,
                negative: 2
            }
        );
    }

    #[test]
    fn non_symmetric_gram_is_an_error() {
        let l = SurfaceLattice::new(vec![vec![1, 2], vec![0, -1]], DivisorClass::zero(2), 0, None)
            .unwrap();
        assert_eq!(l.signature().unwrap_err(), Error::NonSymmetricGram(0, 1));
        assert!(l.validate().is_err());
    }

    #[test]
    fn noether_violation_is_rejected() {
        let l = SurfaceLattice::rank_one(1, -3, 4);
        assert_eq!(l.validate().unwrap_err(), Error::Noether(13));
    }

    #[test]
    fn product_surface_examples() {
        let p = SurfaceLattice::product_surface(2, 2);
        assert_eq!(p.canonical(), &DivisorClass::from_ints(&[2, 2]));
        assert_eq!(p.c2(), 4);
        assert_eq!(p.chi_structure_sheaf(), int(1));

        let p = SurfaceLattice::product_surface(1, 1);
        assert_eq!(p.canonical(), &DivisorClass::from_ints(&[0, 0]));
        assert_eq!(p.c2(), 0);

        let p = SurfaceLattice::product_surface(0, 2);
        assert_eq!(p.canonical(), &DivisorClass::from_ints(&[2, -2]));
        assert_eq!(p.k_squared(), int(-8));
        assert_eq!(p.c2(), -4);
        assert_eq!(p.chi_structure_sheaf(), int(-1));
    }

    #[test]
    fn product_surfaces_are_valid() {
        for g1 in 0..=20 {
            for g2 in 0..=20 {
                SurfaceLattice::product_surface(g1, g2).validate().unwrap();
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let l = SurfaceLattice::rank_one(1, 3, 3).with_char_p(Some(2));
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"rho":1,"gram":[[1]],"K":[3],"c2":3,"char_p":2}"#);
        let back: SurfaceLattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        let bad = r#"{"rho":2,"gram":[[1]],"K":[3],"c2":3,"char_p":null}"#;
        assert!(serde_json::from_str::<SurfaceLattice>(bad).is_err());
    }

    #[test]
    fn divisor_integrality_flag() {
        assert!(DivisorClass::from_ints(&[1, -2]).is_integral());
        assert!(!DivisorClass::new(vec![frac(1, 2), int(0)]).is_integral());
    }
}
