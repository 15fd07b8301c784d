//! Chern characters `(ch₀, ch₁, ch₂)` of objects on a surface lattice.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::rational::{self, int, Rational};

/// Chern character of a sheaf or complex. `ch0` may be zero or negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernVector {
    pub ch0: i64,
    pub ch1: DivisorClass,
    #[serde(with = "rational::string")]
    pub ch2: Rational,
}

/// A slope value: a rational, or `+∞` for objects of rank zero.
///
/// `+∞` orders above every rational. It supports comparison only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Rational),
    PosInfinity,
}

impl Slope {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Slope::Finite(r) => Some(r),
            Slope::PosInfinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Slope::PosInfinity)
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::Finite(a), Slope::Finite(b)) => a.cmp(b),
            (Slope::Finite(_), Slope::PosInfinity) => Ordering::Less,
            (Slope::PosInfinity, Slope::Finite(_)) => Ordering::Greater,
            (Slope::PosInfinity, Slope::PosInfinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => f.write_str(&rational::format(r)),
            Slope::PosInfinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl ChernVector {
    pub fn new(ch0: i64, ch1: DivisorClass, ch2: Rational) -> Self {
        ChernVector { ch0, ch1, ch2 }
    }

    pub fn zero(rho: usize) -> Self {
        ChernVector::new(0, DivisorClass::zero(rho), Rational::zero())
    }

    /// Class of a skyscraper sheaf of a point: `(0, 0, 1)`.
    pub fn point(rho: usize) -> Self {
        ChernVector::new(0, DivisorClass::zero(rho), int(1))
    }

    /// `(r, c₁, (c₁² − 2c₂)/2)`.
    pub fn from_chern_classes(
        lattice: &SurfaceLattice,
        rank: i64,
        c1: DivisorClass,
        c2: &Rational,
    ) -> Result<Self> {
        let c1sq = lattice.square(&c1)?;
        Ok(ChernVector::new(rank, c1, (c1sq - int(2) * c2) / int(2)))
    }

    /// `ch(O(L)) = (1, L, L²/2)`.
    pub fn line_bundle(lattice: &SurfaceLattice, l: DivisorClass) -> Result<Self> {
        ChernVector::from_chern_classes(lattice, 1, l, &Rational::zero())
    }

    pub fn rank(&self) -> i64 {
        self.ch0
    }

    fn check(&self, lattice: &SurfaceLattice) -> Result<()> {
        lattice.check_dim(&self.ch1)
    }

    /// `ch^D = e^{−D}·ch = (ch₀, ch₁ − D·ch₀, ch₂ − D·ch₁ + (D²/2)·ch₀)`.
    pub fn twist(&self, lattice: &SurfaceLattice, d: &DivisorClass) -> Result<Self> {
        self.check(lattice)?;
        let r = int(self.ch0);
        let d_ch1 = lattice.pair(d, &self.ch1)?;
        let d_sq = lattice.square(d)?;
        Ok(ChernVector::new(
            self.ch0,
            &self.ch1 - &d.scale(&r),
            &self.ch2 - d_ch1 + d_sq * r / int(2),
        ))
    }

    /// `ch(E ⊗ O(L))`, i.e. the twist by `−L`.
    pub fn tensor_line(&self, lattice: &SurfaceLattice, l: &DivisorClass) -> Result<Self> {
        self.twist(lattice, &-l)
    }

    /// `ch(E*) = (ch₀, −ch₁, ch₂)`.
    pub fn dual(&self) -> Self {
        ChernVector::new(self.ch0, -&self.ch1, self.ch2.clone())
    }

    pub fn scale(&self, n: i64) -> Self {
        ChernVector::new(self.ch0 * n, self.ch1.scale(&int(n)), &self.ch2 * int(n))
    }

    /// `Δ = ch₁² − 2·ch₀·ch₂`.
    pub fn discriminant(&self, lattice: &SurfaceLattice) -> Result<Rational> {
        Ok(lattice.square(&self.ch1)? - int(2 * self.ch0) * &self.ch2)
    }

    /// `Δ̄_H = (H·ch₁)² − 2·H²·ch₀·ch₂`; requires `H² > 0`.
    pub fn gen_discriminant(&self, lattice: &SurfaceLattice, h: &DivisorClass) -> Result<Rational> {
        let hh = lattice.polarization_square(h)?;
        let hc = lattice.pair(h, &self.ch1)?;
        Ok(&hc * &hc - int(2) * hh * int(self.ch0) * &self.ch2)
    }

    /// `H·ch₁` (the degree against `H`).
    pub fn degree(&self, lattice: &SurfaceLattice, h: &DivisorClass) -> Result<Rational> {
        lattice.pair(h, &self.ch1)
    }

    /// Twisted slope `H·ch₁^D / (H²·ch₀^D)`, `+∞` in rank zero.
    ///
    /// With `D = 0` this is the usual `μ_H = H·ch₁/ch₀` divided by the
    /// positive constant `H²`; both induce the same order.
    pub fn slope(&self, lattice: &SurfaceLattice, h: &DivisorClass, d: &DivisorClass) -> Result<Slope> {
        let hh = lattice.polarization_square(h)?;
        self.check(lattice)?;
        lattice.check_dim(d)?;
        if self.ch0 == 0 {
            return Ok(Slope::PosInfinity);
        }
        let twisted = &self.ch1 - &d.scale(&int(self.ch0));
        let num = lattice.pair(h, &twisted)?;
        Ok(Slope::Finite(num / (hh * int(self.ch0))))
    }

    /// `μ_H = H·ch₁ / ch₀`, `+∞` in rank zero.
    pub fn mu(&self, lattice: &SurfaceLattice, h: &DivisorClass) -> Result<Slope> {
        lattice.polarization_square(h)?;
        if self.ch0 == 0 {
            return Ok(Slope::PosInfinity);
        }
        Ok(Slope::Finite(lattice.pair(h, &self.ch1)? / int(self.ch0)))
    }

    /// Riemann–Roch: `χ = ch₂ − K·ch₁/2 + ch₀·(K² + c₂)/12`.
    pub fn euler_char(&self, lattice: &SurfaceLattice) -> Result<Rational> {
        let k_ch1 = lattice.pair(lattice.canonical(), &self.ch1)?;
        Ok(&self.ch2 - k_ch1 / int(2) + int(self.ch0) * lattice.chi_structure_sheaf())
    }
}

impl fmt::Display for ChernVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.ch0, self.ch1, rational::format(&self.ch2))
    }
}

impl Add for &ChernVector {
    type Output = ChernVector;
    fn add(self, rhs: &ChernVector) -> ChernVector {
        ChernVector::new(self.ch0 + rhs.ch0, &self.ch1 + &rhs.ch1, &self.ch2 + &rhs.ch2)
    }
}

impl Sub for &ChernVector {
    type Output = ChernVector;
    fn sub(self, rhs: &ChernVector) -> ChernVector {
        ChernVector::new(self.ch0 - rhs.ch0, &self.ch1 - &rhs.ch1, &self.ch2 - &rhs.ch2)
    }
}

impl Neg for &ChernVector {
    type Output = ChernVector;
    fn neg(self) -> ChernVector {
        ChernVector::new(-self.ch0, -&self.ch1, -&self.ch2)
    }
}

impl Neg for ChernVector {
    type Output = ChernVector;
    fn neg(self) -> ChernVector {
        -&self
    }
}

/// Parses `"ch0,c_1,...,c_rho,ch2"` (entries are integers or `a/b`).
pub fn parse_inline(s: &str, rho: usize) -> Result<ChernVector> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != rho + 2 {
        return Err(Error::Parse(format!(
            "expected {} comma-separated entries (ch0, {} ch1 coordinates, ch2), found {}",
            rho + 2,
            rho,
            parts.len()
        )));
    }
    let ch0 = rational::parse(parts[0])?;
    if !rational::is_integer(&ch0) {
        return Err(Error::Parse(format!("ch0 must be an integer, found {}", parts[0])));
    }
    let ch0: i64 = ch0
        .to_integer()
        .try_into()
        .map_err(|_| Error::Parse("ch0 out of range".into()))?;
    let ch1 = parts[1..=rho]
        .iter()
        .map(|p| rational::parse(p))
        .collect::<Result<Vec<_>>>()?;
    let ch2 = rational::parse(parts[rho + 1])?;
    Ok(ChernVector::new(ch0, DivisorClass::new(ch1), ch2))
}
