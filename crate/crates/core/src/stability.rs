//! Bogomolov-type numerics: discriminant signs, the decomposition of `Δ`
//! along a two-step filtration, walls for perturbed polarizations, and the
//! numerical side of the Reider and Sun positivity criteria.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chern::ChernVector;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::rational::{self, int, Rational};

/// True iff `Δ(v) ≥ 0`. Whether `v` is the class of a semistable sheaf is
/// the caller's assertion.
pub fn bogomolov_holds(lattice: &SurfaceLattice, v: &ChernVector) -> Result<bool> {
    Ok(!v.discriminant(lattice)?.is_negative())
}

fn check_subobject_ranks(v: &ChernVector, v0: &ChernVector) -> Result<()> {
    let (r, r0) = (v.ch0, v0.ch0);
    if r <= 0 || r0 <= 0 || r0 >= r {
        return Err(Error::Rank(format!(
            "need 0 < rank(sub) < rank(total), got {r0} and {r}"
        )));
    }
    Ok(())
}

/// `ξ = r·c₁(v₀) − r₀·c₁(v)` for a subobject class `v₀` of `v`.
pub fn xi(v: &ChernVector, v0: &ChernVector) -> Result<DivisorClass> {
    check_subobject_ranks(v, v0)?;
    if v.ch1.len() != v0.ch1.len() {
        return Err(Error::DimensionMismatch {
            expected: v.ch1.len(),
            found: v0.ch1.len(),
        });
    }
    Ok(&v0.ch1.scale(&int(v.ch0)) - &v.ch1.scale(&int(v0.ch0)))
}

/// `Δ(v) − (r/r₀)Δ(v₀) − (r/r₁)Δ(v₁) + ξ²/(r₀r₁)` with `v₁ = v − v₀`.
///
/// The decomposition identity says this is always zero; the function
/// evaluates it literally so the identity can be checked.
pub fn discriminant_identity_defect(
    lattice: &SurfaceLattice,
    v: &ChernVector,
    v0: &ChernVector,
) -> Result<Rational> {
    let xi = xi(v, v0)?;
    let v1 = v - v0;
    let (r, r0, r1) = (int(v.ch0), int(v0.ch0), int(v1.ch0));
    let delta = v.discriminant(lattice)?;
    let delta0 = v0.discriminant(lattice)?;
    let delta1 = v1.discriminant(lattice)?;
    let xi_sq = lattice.square(&xi)?;
    Ok(delta - &r / &r0 * delta0 - &r / &r1 * delta1 + xi_sq / (r0 * r1))
}

/// Solutions `t` of `(H + tF)·ξ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolarizationWall {
    At(Rational),
    /// Both `H·ξ` and `F·ξ` vanish: every `t` works.
    Everywhere,
    Never,
}

pub fn polarization_wall(
    lattice: &SurfaceLattice,
    h: &DivisorClass,
    f: &DivisorClass,
    xi: &DivisorClass,
) -> Result<PolarizationWall> {
    let h_xi = lattice.pair(h, xi)?;
    let f_xi = lattice.pair(f, xi)?;
    Ok(if !f_xi.is_zero() {
        PolarizationWall::At(-h_xi / f_xi)
    } else if h_xi.is_zero() {
        PolarizationWall::Everywhere
    } else {
        PolarizationWall::Never
    })
}

/// Integral classes `D` in a coordinate box with
/// `0 ≤ L·D`, `L·D − d ≤ D² < L·D/2 < d`, sorted lexicographically.
///
/// `L·D ≥ 0` is the numerical shadow of `L` nef and `D` effective. The last
/// coordinate is not scanned but solved from `0 ≤ L·D < 2d`. Requires
/// `L² > 4d`.
pub fn reider_exceptions(
    lattice: &SurfaceLattice,
    l: &DivisorClass,
    d: i64,
    bounds: &[(i64, i64)],
) -> Result<Vec<DivisorClass>> {
    lattice.check_dim(l)?;
    if d < 1 {
        return Err(Error::InvalidArgument(format!("d must be at least 1, got {d}")));
    }
    if bounds.len() != lattice.rho() {
        return Err(Error::DimensionMismatch {
            expected: lattice.rho(),
            found: bounds.len(),
        });
    }
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return Err(Error::InvalidArgument("empty search box".into()));
    }
    let l_sq = lattice.square(l)?;
    if l_sq <= int(4 * d) {
        return Err(Error::Hypothesis(format!(
            "L² = {} is not greater than 4d = {}",
            rational::format(&l_sq),
            4 * d
        )));
    }

    let rho = lattice.rho();
    let l_dot: Vec<Rational> = (0..rho)
        .map(|i| lattice.pair(l, &DivisorClass::basis(rho, i)))
        .collect::<Result<_>>()?;
    let two_d = int(2 * d);

    let scan_prefix = |prefix: &[i64]| -> Vec<DivisorClass> {
        let partial: Rational = prefix
            .iter()
            .zip(&l_dot)
            .map(|(&x, ld)| ld * int(x))
            .sum();
        let (lo, hi) = bounds[rho - 1];
        let Some((lo, hi)) = last_coordinate_range(&partial, &l_dot[rho - 1], &two_d, lo, hi) else {
            return Vec::new();
        };
        (lo..=hi)
            .filter_map(|x| {
                let mut coords = prefix.to_vec();
                coords.push(x);
                let cand = DivisorClass::from_ints(&coords);
                let ld = lattice.pair(l, &cand).ok()?;
                let dd = lattice.square(&cand).ok()?;
                reider_inequalities(&ld, &dd, d).then_some(cand)
            })
            .collect()
    };

    let mut out: Vec<DivisorClass> = if rho == 1 {
        scan_prefix(&[])
    } else {
        let (lo0, hi0) = bounds[0];
        (lo0..=hi0)
            .into_par_iter()
            .flat_map_iter(|x0| {
                let mut found = Vec::new();
                for_each_point(&bounds[1..rho - 1], &mut |rest| {
                    let mut prefix = Vec::with_capacity(rho - 1);
                    prefix.push(x0);
                    prefix.extend_from_slice(rest);
                    found.extend(scan_prefix(&prefix));
                });
                found
            })
            .collect()
    };
    out.sort();
    Ok(out)
}

/// The three displayed inequalities plus `L·D ≥ 0`.
pub fn reider_inequalities(ld: &Rational, dd: &Rational, d: i64) -> bool {
    let d = int(d);
    !ld.is_negative() && &(ld - &d) <= dd && dd * int(2) < *ld && ld < &(d * int(2))
}

/// Integer range for the last coordinate `x` of `D` such that
/// `0 ≤ partial + λ·x < 2d`, clipped to `[lo, hi]`.
fn last_coordinate_range(
    partial: &Rational,
    lambda: &Rational,
    two_d: &Rational,
    lo: i64,
    hi: i64,
) -> Option<(i64, i64)> {
    if lambda.is_zero() {
        return (!partial.is_negative() && partial < two_d).then_some((lo, hi));
    }
    // x ∈ [a, b) when λ > 0, x ∈ (b, a] when λ < 0, with a = −partial/λ, b = (2d − partial)/λ
    let a = -partial / lambda;
    let b = (two_d - partial) / lambda;
    let (min, max) = if lambda.is_positive() {
        (rational::ceil(&a), strict_upper(&b))
    } else {
        (strict_lower(&b), rational::floor(&a))
    };
    let min = i64::try_from(min).unwrap_or(i64::MIN).max(lo);
    let max = i64::try_from(max).unwrap_or(i64::MAX).min(hi);
    (min <= max).then_some((min, max))
}

/// Largest integer strictly below `x`.
fn strict_upper(x: &Rational) -> num_bigint::BigInt {
    rational::ceil(x) - 1
}

/// Smallest integer strictly above `x`.
fn strict_lower(x: &Rational) -> num_bigint::BigInt {
    rational::floor(x) + 1
}

fn for_each_point(bounds: &[(i64, i64)], f: &mut impl FnMut(&[i64])) {
    fn rec(bounds: &[(i64, i64)], cur: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
        match bounds.split_first() {
            None => f(cur),
            Some((&(lo, hi), rest)) => {
                for x in lo..=hi {
                    cur.push(x);
                    rec(rest, cur, f);
                    cur.pop();
                }
            }
        }
    }
    rec(bounds, &mut Vec::with_capacity(bounds.len()), f);
}

/// Thresholds on `l` for the vanishing `H¹(E(K + lH)) = 0` and for global
/// generation of `E(K + lH)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SunThresholds {
    #[serde(with = "rational::string")]
    pub vanishing: Rational,
    #[serde(with = "rational::string")]
    pub global_generation: Rational,
}

/// `l_vanishing = (Δ̄_H − μ_H)/H²` with `μ_H = H·ch₁/ch₀`, and
/// `l_globgen = 2·ch₀ + l_vanishing`. Requires `ch₀ ≥ 2` and `H² > 0`.
pub fn sun_thresholds(
    lattice: &SurfaceLattice,
    v: &ChernVector,
    h: &DivisorClass,
) -> Result<SunThresholds> {
    if v.ch0 < 2 {
        return Err(Error::Rank(format!("rank must be at least 2, got {}", v.ch0)));
    }
    let hh = lattice.polarization_square(h)?;
    let gen_delta = v.gen_discriminant(lattice, h)?;
    let mu = lattice.pair(h, &v.ch1)? / int(v.ch0);
    let vanishing = (gen_delta - mu) / hh;
    Ok(SunThresholds {
        global_generation: int(2 * v.ch0) + &vanishing,
        vanishing,
    })
}
