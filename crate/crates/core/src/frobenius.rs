//! Chern character of the Frobenius pushforward `F_*L` of a line bundle on
//! a surface, via Grothendieck–Riemann–Roch, and the resulting
//! discriminant `Δ(F_*L) = (p⁴ − p²)(2c₂ − K²)/12`.

use num_traits::Signed;
use serde::Serialize;

use crate::chern::ChernVector;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::rational::{self, frac, int, Rational};

fn check_p(p: i64) -> Result<()> {
    if p <= 0 {
        return Err(Error::InvalidArgument(format!("p must be positive, got {p}")));
    }
    Ok(())
}

pub fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `ch(F_*L)` for the `p`-th power Frobenius:
///
/// - `ch₀ = p²`
/// - `ch₁ = (p² − p)/2 · K + p·c₁(L)`
/// - `ch₂ = (1 − p²)/12 · (K² + c₂) + (p² − p)/4 · K² + (p − 1)/2 · K·c₁(L) + c₁(L)²/2`
///
/// `p = 1` is accepted and returns `ch(L)`.
pub fn pushforward_ch(lattice: &SurfaceLattice, p: i64, c1l: &DivisorClass) -> Result<ChernVector> {
    check_p(p)?;
    lattice.check_dim(c1l)?;
    if !c1l.is_integral() {
        return Err(Error::InvalidArgument(format!("c₁(L) = {c1l} is not integral")));
    }
    let k = lattice.canonical();
    let k_sq = lattice.k_squared();
    let p2 = p * p;
    let ch1 = &k.scale(&frac(p2 - p, 2)) + &c1l.scale(&int(p));
    let ch2 = frac(1 - p2, 12) * (&k_sq + int(lattice.c2()))
        + frac(p2 - p, 4) * &k_sq
        + frac(p - 1, 2) * lattice.pair(k, c1l)?
        + lattice.square(c1l)? / int(2);
    Ok(ChernVector::new(p2, ch1, ch2))
}

/// `(p⁴ − p²)/12 · (2c₂ − K²)`; independent of the line bundle.
pub fn delta_closed_form(lattice: &SurfaceLattice, p: i64) -> Result<Rational> {
    check_p(p)?;
    let p2 = int(p * p);
    Ok((&p2 * &p2 - &p2) / int(12) * (int(2 * lattice.c2()) - lattice.k_squared()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisFlags {
    #[serde(with = "rational::string")]
    pub k_dot_h: Rational,
    pub k_dot_h_positive: bool,
    #[serde(with = "rational::string")]
    pub k_squared: Rational,
    pub c2: i64,
    pub k_squared_exceeds_2c2: bool,
    /// μ_H-semistability of Ω¹ cannot be decided from numerical data.
    pub cotangent_semistable: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub p: i64,
    pub p_is_prime: bool,
    pub hypotheses: HypothesisFlags,
    pub pushforward: ChernVector,
    #[serde(with = "rational::string")]
    pub discriminant: Rational,
    #[serde(with = "rational::string")]
    pub closed_form: Rational,
    pub violates_bogomolov: bool,
    pub warnings: Vec<String>,
}

pub const CALLER_ASSERTED: &str = "caller-asserted, not verifiable numerically";

/// Hypothesis arithmetic and the discriminant of `F_*L`. Requires `H² > 0`.
pub fn counterexample_report(
    lattice: &SurfaceLattice,
    p: i64,
    h: &DivisorClass,
    c1l: &DivisorClass,
) -> Result<CounterexampleReport> {
    lattice.polarization_square(h)?;
    let pushforward = pushforward_ch(lattice, p, c1l)?;
    let discriminant = pushforward.discriminant(lattice)?;
    let closed_form = delta_closed_form(lattice, p)?;
    let k_dot_h = lattice.pair(lattice.canonical(), h)?;
    let k_squared = lattice.k_squared();
    let mut warnings = Vec::new();
    if !is_prime(p) {
        warnings.push(format!("p = {p} is not prime; the formulas are evaluated formally"));
    }
    if let Some(q) = lattice.char_p() {
        if q as i64 != p {
            warnings.push(format!("lattice characteristic {q} differs from p = {p}"));
        }
    }
    Ok(CounterexampleReport {
        p,
        p_is_prime: is_prime(p),
        hypotheses: HypothesisFlags {
            k_dot_h_positive: k_dot_h.is_positive(),
            k_dot_h,
            k_squared_exceeds_2c2: k_squared > int(2 * lattice.c2()),
            k_squared,
            c2: lattice.c2(),
            cotangent_semistable: CALLER_ASSERTED,
        },
        violates_bogomolov: discriminant.is_negative(),
        pushforward,
        discriminant,
        closed_form,
        warnings,
    })
}
