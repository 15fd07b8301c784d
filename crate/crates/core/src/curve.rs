//! Curve-side models: Harder–Narasimhan profiles, split bundles
//! `⊕ O(aᵢ)` on the projective line, tensor-slope bounds, sections and the
//! multiplication map on sections in genus 0.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RowEchelon;
use crate::rational::{frac, int, Rational};

/// HN factors `(rank, degree)` with strictly decreasing slopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, i64)>", into = "Vec<(u32, i64)>")]
pub struct HnProfile {
    factors: Vec<(u32, i64)>,
}

impl HnProfile {
    pub fn new(factors: Vec<(u32, i64)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("HN profile must be nonempty".into()));
        }
        if factors.iter().any(|&(r, _)| r == 0) {
            return Err(Error::InvalidArgument("HN factor of rank 0".into()));
        }
        let slopes: Vec<Rational> = factors.iter().map(|&(r, d)| frac(d, r as i64)).collect();
        if slopes.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidArgument(
                "HN slopes must be strictly decreasing".into(),
            ));
        }
        Ok(HnProfile { factors })
    }

    pub fn factors(&self) -> &[(u32, i64)] {
        &self.factors
    }

    /// `(μ⁺, μ⁻)`: slopes of the first and last factor.
    pub fn mu_extremes(&self) -> (Rational, Rational) {
        let slope = |&(r, d): &(u32, i64)| frac(d, r as i64);
        (
            slope(self.factors.first().unwrap()),
            slope(self.factors.last().unwrap()),
        )
    }

    pub fn mu_plus(&self) -> Rational {
        self.mu_extremes().0
    }

    pub fn mu_minus(&self) -> Rational {
        self.mu_extremes().1
    }
}

impl TryFrom<Vec<(u32, i64)>> for HnProfile {
    type Error = Error;
    fn try_from(v: Vec<(u32, i64)>) -> Result<Self> {
        HnProfile::new(v)
    }
}

impl From<HnProfile> for Vec<(u32, i64)> {
    fn from(p: HnProfile) -> Self {
        p.factors
    }
}

/// `⊕ O(aᵢ)` on `P¹`; degrees kept sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SplitBundle {
    degrees: Vec<i64>,
}

impl SplitBundle {
    pub fn new(mut degrees: Vec<i64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidArgument("split bundle must have a summand".into()));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplitBundle { degrees })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// Equal degrees grouped, ranks = multiplicities, slopes decreasing.
    pub fn hn_profile(&self) -> HnProfile {
        let mut groups: BTreeMap<i64, u32> = BTreeMap::new();
        for &a in &self.degrees {
            *groups.entry(a).or_default() += 1;
        }
        let factors = groups
            .into_iter()
            .rev()
            .map(|(a, m)| (m, a * m as i64))
            .collect();
        HnProfile::new(factors).expect("grouped degrees give decreasing slopes")
    }

    /// `O(a) ⊗ O(b) = O(a + b)` over all pairs of summands.
    pub fn tensor(&self, other: &SplitBundle) -> SplitBundle {
        let degrees = self
            .degrees
            .iter()
            .flat_map(|a| other.degrees.iter().map(move |b| a + b))
            .collect();
        SplitBundle::new(degrees).unwrap()
    }

    /// `m`-fold tensor power (`m ≥ 1`).
    pub fn tensor_power(&self, m: u32) -> SplitBundle {
        assert!(m >= 1, "tensor power needs m ≥ 1");
        (1..m).fold(self.clone(), |acc, _| acc.tensor(self))
    }

    /// `h⁰ = Σ max(aᵢ + 1, 0)`.
    pub fn h0(&self) -> i64 {
        self.degrees.iter().map(|&a| (a + 1).max(0)).sum()
    }
}

impl TryFrom<Vec<i64>> for SplitBundle {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        SplitBundle::new(v)
    }
}

impl From<SplitBundle> for Vec<i64> {
    fn from(b: SplitBundle) -> Self {
        b.degrees
    }
}

/// Riemann–Roch lower bound `deg − rank·(g − 1)` for `h⁰`.
pub fn rr_lower_bound(deg: i64, rank: i64, g: i64) -> i64 {
    deg - rank * (g - 1)
}

/// Evaluation of the tensor-product slope bounds for one triple of profiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorBounds {
    /// `μ⁺(E⊗F) − μ⁺(E) − μ⁺(F)`, expected in `[0, g]`.
    #[serde(with = "crate::rational::string")]
    pub plus_gap: Rational,
    /// `μ⁻(E⊗F) − μ⁻(E) − μ⁻(F)`, expected in `[−g, 0]`.
    #[serde(with = "crate::rational::string")]
    pub minus_gap: Rational,
    pub upper_holds: bool,
    pub lower_holds: bool,
    /// `μ⁻(⊗ᵐE) ≥ m·μ⁻(E) − (m − 1)g` when a power profile was supplied.
    pub power_holds: Option<bool>,
}

/// Checks the two sandwich inequalities, and optionally the tensor-power
/// bound for a supplied `(m, HN(⊗ᵐE))`. `e_tensor_f` comes from an oracle
/// (e.g. [`SplitBundle::tensor`] in genus 0).
pub fn check_tensor_bounds(
    e: &HnProfile,
    f: &HnProfile,
    e_tensor_f: &HnProfile,
    g: u32,
    power: Option<(u32, &HnProfile)>,
) -> TensorBounds {
    let g = int(g as i64);
    let plus_gap = e_tensor_f.mu_plus() - e.mu_plus() - f.mu_plus();
    let minus_gap = e_tensor_f.mu_minus() - e.mu_minus() - f.mu_minus();
    TensorBounds {
        upper_holds: !plus_gap.is_negative() && plus_gap <= g,
        lower_holds: -&g <= minus_gap && !minus_gap.is_positive(),
        power_holds: power.map(|(m, pm)| power_bound_holds(e, pm, m, &g)),
        plus_gap,
        minus_gap,
    }
}

fn power_bound_holds(e: &HnProfile, power: &HnProfile, m: u32, g: &Rational) -> bool {
    let m = int(m as i64);
    power.mu_minus() >= &m * e.mu_minus() - (m - int(1)) * g
}

/// Surjectivity of `H⁰(E) ⊗ H⁰(F) → H⁰(E ⊗ F)` on `P¹` for split bundles
/// with all degrees `≥ 0`, decided by an exact rank computation.
///
/// The map is block diagonal over summand pairs `(i, j)`; each block is the
/// multiplication of binary forms of degrees `aᵢ` and `bⱼ`, written in
/// monomial bases. Each block's image is built row by row (one row per pair
/// of monomials) and its rank compared with `aᵢ + bⱼ + 1`.
pub fn butler_surjectivity_g0(e: &SplitBundle, f: &SplitBundle) -> Result<bool> {
    if e.degrees.iter().chain(&f.degrees).any(|&a| a < 0) {
        return Err(Error::Hypothesis(
            "all summand degrees must be non-negative (μ⁻ ≥ 0 in genus 0)".into(),
        ));
    }
    let mut total_rank = 0usize;
    let mut target_dim = 0usize;
    for &a in &e.degrees {
        for &b in &f.degrees {
            let (a, b) = (a as usize, b as usize);
            let width = a + b + 1;
            target_dim += width;
            total_rank += multiplication_block_rank(a, b);
        }
    }
    Ok(total_rank == target_dim)
}

/// Rank of `Sym^a ⊗ Sym^b → Sym^{a+b}` in monomial bases
/// `x^i y^{a−i} ⊗ x^j y^{b−j} ↦ x^{i+j} y^{a+b−i−j}`.
pub fn multiplication_block_rank(a: usize, b: usize) -> usize {
    let width = a + b + 1;
    let mut ech = RowEchelon::new(width);
    'outer: for i in 0..=a {
        for j in 0..=b {
            let mut row = vec![Rational::zero(); width];
            row[i + j] = int(1);
            ech.insert(row);
            if ech.is_full() {
                break 'outer;
            }
        }
    }
    ech.rank()
}

/// `P(m) = d·m − g + 1`, together with whether `d·m > 2g − 2` (the range
/// where it is the full `h⁰`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertPointDim {
    pub value: i64,
    pub in_nonspecial_range: bool,
}

pub fn hilbert_point_dim(d: i64, g: i64, m: i64) -> Result<HilbertPointDim> {
    if g < 0 || m <= 0 {
        return Err(Error::InvalidArgument(format!(
            "need g ≥ 0 and m > 0, got g = {g}, m = {m}"
        )));
    }
    Ok(HilbertPointDim {
        value: d * m - g + 1,
        in_nonspecial_range: d * m > 2 * g - 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sb(d: &[i64]) -> SplitBundle {
        SplitBundle::new(d.to_vec()).unwrap()
    }

    fn hn(f: &[(u32, i64)]) -> HnProfile {
        HnProfile::new(f.to_vec()).unwrap()
    }

    #[test]
    fn mu_extremes_examples() {
        assert_eq!(hn(&[(1, 3), (1, 1)]).mu_extremes(), (int(3), int(1)));
        assert_eq!(hn(&[(2, 1)]).mu_extremes(), (frac(1, 2), frac(1, 2)));
        let p = sb(&[1, 1, 3]).hn_profile();
        assert_eq!(p, hn(&[(1, 3), (2, 2)]));
        assert_eq!(p.mu_extremes(), (int(3), int(1)));
    }

    #[test]
    fn profile_validation() {
        assert!(HnProfile::new(vec![]).is_err());
        assert!(HnProfile::new(vec![(1, 1), (1, 1)]).is_err());
        assert!(HnProfile::new(vec![(1, 1), (2, 3)]).is_err());
        assert!(HnProfile::new(vec![(0, 1)]).is_err());
        assert!(serde_json::from_str::<HnProfile>("[[1,1],[1,2]]").is_err());
    }

    #[test]
    fn hn_of_split_examples() {
        assert_eq!(sb(&[2, 2, 5]).hn_profile(), hn(&[(1, 5), (2, 4)]));
        assert_eq!(sb(&[0]).hn_profile(), hn(&[(1, 0)]));
        assert_eq!(sb(&[-1, 3]).hn_profile(), hn(&[(1, 3), (1, -1)]));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(sb(&[1, 3]).tensor(&sb(&[2])), sb(&[3, 5]));
        assert_eq!(sb(&[0, 1]).tensor(&sb(&[0, 1])), sb(&[0, 1, 1, 2]));
        let e = sb(&[1, 3]);
        let f = sb(&[2]);
        assert_eq!(
            e.tensor(&f).hn_profile().mu_plus(),
            e.hn_profile().mu_plus() + f.hn_profile().mu_plus()
        );
    }

    #[test]
    fn tensor_bound_examples() {
        let triv = hn(&[(1, 0)]);
        for g in 0..4 {
            let b = check_tensor_bounds(&triv, &triv, &triv, g, None);
            assert_eq!(b.plus_gap, int(0));
            assert_eq!(b.minus_gap, int(0));
            assert!(b.upper_holds && b.lower_holds);
            assert_eq!(b.power_holds, None);
        }
        let e = sb(&[0, 2]);
        let cube = e.tensor_power(3);
        assert_eq!(cube.hn_profile().mu_minus(), int(0));
        for g in 0..5 {
            let b = check_tensor_bounds(
                &e.hn_profile(),
                &e.hn_profile(),
                &e.tensor(&e).hn_profile(),
                g,
                Some((3, &cube.hn_profile())),
            );
            assert_eq!(b.power_holds, Some(true));
        }
        // a profile violating the upper sandwich at g = 0
        let b = check_tensor_bounds(&triv, &triv, &hn(&[(1, 1)]), 0, None);
        assert!(!b.upper_holds);
        assert!(!b.lower_holds);
    }

    #[test]
    fn h0_examples() {
        assert_eq!(sb(&[2]).h0(), 3);
        assert_eq!(rr_lower_bound(2, 1, 0), 3);
        assert_eq!(sb(&[-5]).h0(), 0);
        assert_eq!(rr_lower_bound(-5, 1, 0), -4);
        assert_eq!(sb(&[0, 1]).h0(), 3);
        assert_eq!(rr_lower_bound(1, 2, 0), 3);
    }

    #[test]
    fn butler_examples() {
        assert_eq!(multiplication_block_rank(1, 1), 3);
        assert!(butler_surjectivity_g0(&sb(&[1]), &sb(&[1])).unwrap());
        assert!(butler_surjectivity_g0(&sb(&[0]), &sb(&[7])).unwrap());
        assert_eq!(multiplication_block_rank(3, 2), 6);
        assert!(butler_surjectivity_g0(&sb(&[3]), &sb(&[2])).unwrap());
        assert!(butler_surjectivity_g0(&sb(&[-1]), &sb(&[2])).is_err());
    }

    #[test]
    fn hilbert_point_examples() {
        assert_eq!(hilbert_point_dim(5, 2, 1).unwrap().value, 4);
        assert_eq!(hilbert_point_dim(1, 0, 1).unwrap().value, 2);
        assert_eq!(hilbert_point_dim(3, 1, 2).unwrap().value, 6);
        let low = hilbert_point_dim(1, 3, 1).unwrap();
        assert!(!low.in_nonspecial_range);
        assert_eq!(low.value, -1);
        assert!(hilbert_point_dim(1, 0, 0).is_err());
    }
}
