//! Tilt stability on a surface.
//!
//! For `α > 0`, `β ∈ Q`, an ample class `H` and a rational twist `D`, the
//! central charge of a class `v` is
//!
//! ```text
//! Z(v) = (α²H²/2)·ch₀^B − ch₂^B + i·H·ch₁^B,    B = βH + D.
//! ```
//!
//! A (numerical) wall for `v` with respect to `w` is the locus in the
//! `(β, α)` half-plane where the tilt slopes `−Re Z/Im Z` of `v` and `w`
//! agree. Writing `(r, c, s) = (ch₀, H·ch₁^D, ch₂^D)` and `h = H²`, clearing
//! denominators in `Re Z(v)·Im Z(w) = Re Z(w)·Im Z(v)` gives
//!
//! ```text
//! (h/2)(r c' − r' c)(α² + β²) + h(s r' − s' r)·β + (s' c − s c') = 0,
//! ```
//!
//! so walls are semicircles centred on the `β`-axis, or vertical lines.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chern::{ChernVector, Slope};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::rational::{self, int, Rational};

/// Point `(α, β)` of the upper half-plane together with `H` and `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltParams {
    alpha: Rational,
    beta: Rational,
    h: DivisorClass,
    d: DivisorClass,
}

impl TiltParams {
    pub fn new(
        lattice: &SurfaceLattice,
        alpha: Rational,
        beta: Rational,
        h: DivisorClass,
        d: DivisorClass,
    ) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "alpha must be positive, got {}",
                rational::format(&alpha)
            )));
        }
        lattice.polarization_square(&h)?;
        lattice.check_dim(&d)?;
        Ok(TiltParams { alpha, beta, h, d })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn polarization(&self) -> &DivisorClass {
        &self.h
    }

    pub fn twist_class(&self) -> &DivisorClass {
        &self.d
    }

    /// `B = βH + D`.
    pub fn b_field(&self) -> DivisorClass {
        &self.h.scale(&self.beta) + &self.d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeValue {
    #[serde(with = "rational::string")]
    pub re: Rational,
    #[serde(with = "rational::string")]
    pub im: Rational,
}

/// Which half of the torsion pair `(T, F)` a semistable sheaf class lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeartSide {
    Torsion,
    Free,
    /// Twisted slope exactly zero: in `F` by the `≤ 0` rule, flagged apart.
    ZeroSlopeBoundary,
}

/// Outcome of checking `Z(E) ∈ {r·e^{iπφ} : r > 0, 0 < φ ≤ 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Positivity {
    OkInterior,
    OkBoundaryNegativeReal,
    Violation,
}

/// Classifies a `μ_{H,βH+D}`-semistable sheaf class by the sign of its
/// twisted slope.
pub fn heart_side(lattice: &SurfaceLattice, v: &ChernVector, params: &TiltParams) -> Result<HeartSide> {
    let slope = v.slope(lattice, &params.h, &params.b_field())?;
    Ok(match slope {
        Slope::PosInfinity => HeartSide::Torsion,
        Slope::Finite(s) if s.is_positive() => HeartSide::Torsion,
        Slope::Finite(s) if s.is_zero() => HeartSide::ZeroSlopeBoundary,
        Slope::Finite(_) => HeartSide::Free,
    })
}

pub fn central_charge(lattice: &SurfaceLattice, v: &ChernVector, params: &TiltParams) -> Result<ChargeValue> {
    let alpha_sq = &params.alpha * &params.alpha;
    central_charge_at(lattice, v, &alpha_sq, &params.beta, &params.h, &params.d)
}

/// Central charge evaluated from `α²` directly, so that points with
/// irrational `α` but rational `α²` can be handled exactly.
pub fn central_charge_at(
    lattice: &SurfaceLattice,
    v: &ChernVector,
    alpha_sq: &Rational,
    beta: &Rational,
    h: &DivisorClass,
    d: &DivisorClass,
) -> Result<ChargeValue> {
    let hh = lattice.polarization_square(h)?;
    let b = &h.scale(beta) + d;
    let t = v.twist(lattice, &b)?;
    Ok(ChargeValue {
        re: alpha_sq * hh * int(t.ch0) / int(2) - &t.ch2,
        im: lattice.pair(h, &t.ch1)?,
    })
}

fn slope_of(z: &ChargeValue) -> Slope {
    if z.im.is_zero() {
        Slope::PosInfinity
    } else {
        Slope::Finite(-&z.re / &z.im)
    }
}

/// `ν = −Re Z / Im Z`, or `+∞` when `Im Z = 0`.
pub fn tilt_slope(lattice: &SurfaceLattice, v: &ChernVector, params: &TiltParams) -> Result<Slope> {
    Ok(slope_of(&central_charge(lattice, v, params)?))
}

pub fn tilt_slope_at(
    lattice: &SurfaceLattice,
    v: &ChernVector,
    alpha_sq: &Rational,
    beta: &Rational,
    h: &DivisorClass,
    d: &DivisorClass,
) -> Result<Slope> {
    Ok(slope_of(&central_charge_at(lattice, v, alpha_sq, beta, h, d)?))
}

/// Checks the positivity property for a class asserted to lie in the
/// tilted heart (shifted objects passed as negated classes).
pub fn positivity_check(lattice: &SurfaceLattice, v: &ChernVector, params: &TiltParams) -> Result<Positivity> {
    let z = central_charge(lattice, v, params)?;
    Ok(if z.im.is_positive() {
        Positivity::OkInterior
    } else if z.im.is_zero() && z.re.is_negative() {
        Positivity::OkBoundaryNegativeReal
    } else {
        Positivity::Violation
    })
}

/// `cq·(α² + β²) + cl·β + cc = 0`, scaled so the leading nonzero
/// coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Wall {
    #[serde(with = "rational::string")]
    pub cq: Rational,
    #[serde(with = "rational::string")]
    pub cl: Rational,
    #[serde(with = "rational::string")]
    pub cc: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WallKind {
    Circle,
    Line,
}

impl Wall {
    pub fn kind(&self) -> WallKind {
        if self.cq.is_zero() {
            WallKind::Line
        } else {
            WallKind::Circle
        }
    }

    /// Centre of a circle, or the `β` of a vertical line.
    pub fn center_beta(&self) -> Rational {
        match self.kind() {
            WallKind::Circle => -&self.cl / (int(2) * &self.cq),
            WallKind::Line => -&self.cc / &self.cl,
        }
    }

    /// Squared radius of a circle; `None` for lines.
    pub fn radius_sq(&self) -> Option<Rational> {
        match self.kind() {
            WallKind::Circle => {
                let c = self.center_beta();
                Some(&c * &c - &self.cc / &self.cq)
            }
            WallKind::Line => None,
        }
    }

    pub fn evaluate(&self, alpha_sq: &Rational, beta: &Rational) -> Rational {
        &self.cq * (alpha_sq + beta * beta) + &self.cl * beta + &self.cc
    }

    /// `α²` of the point of the wall above `β` (may be `≤ 0` if there is
    /// none with `α > 0`).
    pub fn alpha_sq_at(&self, beta: &Rational) -> Option<Rational> {
        match self.kind() {
            WallKind::Circle => {
                let r2 = self.radius_sq()?;
                let dx = beta - self.center_beta();
                Some(r2 - &dx * &dx)
            }
            WallKind::Line => None,
        }
    }

    /// True iff the two walls share a point with `α > 0` without coinciding.
    pub fn crosses(&self, other: &Wall) -> bool {
        if self == other {
            return false;
        }
        match (self.kind(), other.kind()) {
            (WallKind::Circle, WallKind::Circle) => {
                // subtracting the normalized equations eliminates α²
                let dl = &self.cl - &other.cl;
                let dc = &self.cc - &other.cc;
                if dl.is_zero() {
                    return false;
                }
                let beta = -dc / dl;
                self.alpha_sq_at(&beta).is_some_and(|a2| a2.is_positive())
            }
            (WallKind::Circle, WallKind::Line) => self
                .alpha_sq_at(&other.center_beta())
                .is_some_and(|a2| a2.is_positive()),
            (WallKind::Line, WallKind::Circle) => other.crosses(self),
            (WallKind::Line, WallKind::Line) => false,
        }
    }

    fn normalized(cq: Rational, cl: Rational, cc: Rational) -> Option<Wall> {
        let lead = [&cq, &cl, &cc].into_iter().find(|x| !x.is_zero())?.clone();
        Some(Wall {
            cq: cq / &lead,
            cl: cl / &lead,
            cc: cc / &lead,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WallLocus {
    Wall(Wall),
    /// The classes are proportional in `(ch₀, H·ch₁^D, ch₂^D)`: every point
    /// is on the wall.
    Degenerate,
    /// The equation has no real solution.
    Empty,
}

/// Projection `(ch₀, H·ch₁^D, ch₂^D)` that the central charge sees.
fn charge_data(
    lattice: &SurfaceLattice,
    v: &ChernVector,
    h: &DivisorClass,
    d: &DivisorClass,
) -> Result<(Rational, Rational, Rational)> {
    let t = v.twist(lattice, d)?;
    Ok((int(t.ch0), lattice.pair(h, &t.ch1)?, t.ch2))
}

fn wall_from_data(
    hh: &Rational,
    (r, c, s): &(Rational, Rational, Rational),
    (r1, c1, s1): &(Rational, Rational, Rational),
) -> WallLocus {
    let x = r * c1 - r1 * c;
    let y = s * r1 - s1 * r;
    let z = s1 * c - s * c1;
    let cq = hh * &x / int(2);
    let cl = hh * &y;
    match Wall::normalized(cq, cl, z) {
        None => WallLocus::Degenerate,
        Some(w) => match w.kind() {
            WallKind::Line if w.cl.is_zero() => WallLocus::Empty,
            WallKind::Circle if w.radius_sq().is_some_and(|r2| r2.is_negative()) => WallLocus::Empty,
            _ => WallLocus::Wall(w),
        },
    }
}

/// Locus where `ν(v) = ν(w)` in the `(β, α)` plane for fixed `H`, `D`.
pub fn wall_equation(
    lattice: &SurfaceLattice,
    v: &ChernVector,
    w: &ChernVector,
    h: &DivisorClass,
    d: &DivisorClass,
) -> Result<WallLocus> {
    let hh = lattice.polarization_square(h)?;
    let dv = charge_data(lattice, v, h, d)?;
    let dw = charge_data(lattice, w, h, d)?;
    Ok(wall_from_data(&hh, &dv, &dw))
}

/// A wall together with the class `w` producing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudoWall {
    pub wall: Wall,
    pub destabilizer: ChernVector,
}

/// Closed `β`-interval `[lo, hi]`; empty when `lo > hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaRegion {
    pub lo: Rational,
    pub hi: Rational,
}

impl BetaRegion {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        BetaRegion { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

/// Open interval with optional ends.
#[derive(Clone, Debug)]
struct OpenInterval {
    lo: Option<Rational>,
    hi: Option<Rational>,
}

impl OpenInterval {
    fn full() -> Self {
        OpenInterval { lo: None, hi: None }
    }

    fn empty() -> Self {
        OpenInterval {
            lo: Some(int(1)),
            hi: Some(int(0)),
        }
    }

    fn is_empty(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(l), Some(h)) if l >= h)
    }

    /// Intersect with `{β : a − b·β > 0}`.
    fn restrict_positive(&mut self, a: &Rational, b: &Rational) {
        if b.is_zero() {
            if !a.is_positive() {
                *self = OpenInterval::empty();
            }
            return;
        }
        let root = a / b;
        if b.is_positive() {
            if self.hi.as_ref().is_none_or(|h| &root < h) {
                self.hi = Some(root);
            }
        } else if self.lo.as_ref().is_none_or(|l| &root > l) {
            self.lo = Some(root);
        }
    }
}

/// Closed bounds for an unknown `x`, accumulated from `a·x + b ≥ 0`.
#[derive(Clone, Debug, Default)]
struct LinearBounds {
    lo: Option<Rational>,
    hi: Option<Rational>,
    infeasible: bool,
}

impl LinearBounds {
    fn require_nonneg(&mut self, a: &Rational, b: &Rational) {
        if a.is_zero() {
            if b.is_negative() {
                self.infeasible = true;
            }
            return;
        }
        let root = -b / a;
        if a.is_positive() {
            if self.lo.as_ref().is_none_or(|l| &root > l) {
                self.lo = Some(root);
            }
        } else if self.hi.as_ref().is_none_or(|h| &root < h) {
            self.hi = Some(root);
        }
    }
}

/// `x < R` for `R = sqrt(r2) ≥ 0`, decided exactly.
fn lt_sqrt(x: &Rational, r2: &Rational) -> bool {
    x.is_negative() || &(x * x) < r2
}

/// `x ≥ R` for `R = sqrt(r2) ≥ 0`, decided exactly.
fn ge_sqrt(x: &Rational, r2: &Rational) -> bool {
    !x.is_negative() && &(x * x) >= r2
}

/// Enumerates pseudo-walls for `v` on a Picard-rank-one lattice.
///
/// Candidates are integral classes `w = (r', k·e, s')` (`e` the lattice
/// generator, `s' ∈ k²e²/2 + Z`) with `0 < |r'| ≤ rank_cap` and
/// `Δ(w) ≥ 0`, `Δ(v − w) ≥ 0`. A candidate is kept when its wall is a
/// circle or line meeting `{α > 0, β ∈ region}` along which
/// `0 < Im Z(w) < Im Z(v)` holds, i.e. both `w` and `v − w` stay in the
/// heart on the whole wall. The last condition is what makes the search
/// finite. Output is deduplicated by wall (keeping the smallest
/// destabilizer) and sorted by centre, then squared radius.
pub fn pseudo_walls(
    lattice: &SurfaceLattice,
    v: &ChernVector,
    h: &DivisorClass,
    d: &DivisorClass,
    rank_cap: u32,
    region: &BetaRegion,
) -> Result<Vec<PseudoWall>> {
    if lattice.rho() != 1 {
        return Err(Error::InvalidArgument(format!(
            "pseudo-wall search needs a Picard-rank-one lattice, got rank {}",
            lattice.rho()
        )));
    }
    let hh = lattice.polarization_square(h)?;
    lattice.check_dim(&v.ch1)?;
    lattice.check_dim(d)?;
    let delta = v.discriminant(lattice)?;
    if delta.is_negative() {
        return Err(Error::Hypothesis(format!(
            "Δ(v) = {} < 0: no finiteness guarantee for walls",
            rational::format(&delta)
        )));
    }
    if rank_cap == 0 {
        return Err(Error::InvalidArgument("rank cap must be positive".into()));
    }
    if region.is_empty() {
        return Ok(Vec::new());
    }

    let search = WallSearch::new(lattice, v, h, d, hh, region)?;
    let cap = rank_cap as i64;
    let ranks: Vec<i64> = (-cap..=cap).filter(|&r| r != 0).collect();
    let tasks: Vec<(i64, i64)> = ranks
        .iter()
        .flat_map(|&r1| search.degree_range(r1).map(move |k| (r1, k)))
        .collect();

    let found: Vec<PseudoWall> = tasks
        .par_iter()
        .map(|&(r1, k)| search.scan(r1, k))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut by_wall: BTreeMap<Wall, ChernVector> = BTreeMap::new();
    for pw in found {
        match by_wall.get(&pw.wall) {
            Some(prev) if destabilizer_key(prev) <= destabilizer_key(&pw.destabilizer) => {}
            _ => {
                by_wall.insert(pw.wall, pw.destabilizer);
            }
        }
    }
    let mut out: Vec<PseudoWall> = by_wall
        .into_iter()
        .map(|(wall, destabilizer)| PseudoWall { wall, destabilizer })
        .collect();
    out.sort_by(|a, b| wall_order(&a.wall, &b.wall));
    Ok(out)
}

fn destabilizer_key(w: &ChernVector) -> (i64, bool, Vec<Rational>, Rational) {
    (w.ch0.abs(), w.ch0 < 0, w.ch1.coords().to_vec(), w.ch2.clone())
}

/// Centre, then squared radius; lines sort after circles with the same centre.
pub fn wall_order(a: &Wall, b: &Wall) -> Ordering {
    a.center_beta()
        .cmp(&b.center_beta())
        .then_with(|| match (a.radius_sq(), b.radius_sq()) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
        .then_with(|| a.cmp(b))
}

struct WallSearch<'a> {
    lattice: &'a SurfaceLattice,
    v: &'a ChernVector,
    hh: Rational,
    region: &'a BetaRegion,
    /// `e²` for the generator `e`.
    gen_sq: Rational,
    /// `H·e`.
    h_gen: Rational,
    /// `D·e` and `D²`.
    d_gen: Rational,
    d_sq: Rational,
    /// `(ch₀, H·ch₁^D, ch₂^D)` of `v`.
    data_v: (Rational, Rational, Rational),
    h_d: Rational,
}

impl<'a> WallSearch<'a> {
    fn new(
        lattice: &'a SurfaceLattice,
        v: &'a ChernVector,
        h: &DivisorClass,
        d: &DivisorClass,
        hh: Rational,
        region: &'a BetaRegion,
    ) -> Result<Self> {
        let e = DivisorClass::basis(1, 0);
        Ok(WallSearch {
            lattice,
            v,
            gen_sq: lattice.square(&e)?,
            h_gen: lattice.pair(h, &e)?,
            d_gen: lattice.pair(d, &e)?,
            d_sq: lattice.square(d)?,
            data_v: charge_data(lattice, v, h, d)?,
            h_d: lattice.pair(h, d)?,
            hh,
            region,
        })
    }

    /// `(ch₀, H·ch₁^D, ch₂^D)` of `w = (r1, k·e, s1)`.
    fn data_w(&self, r1: i64, k: i64, s1: &Rational) -> (Rational, Rational, Rational) {
        let r1q = int(r1);
        let c = int(k) * &self.h_gen - &r1q * &self.h_d;
        let s = s1 - int(k) * &self.d_gen + &self.d_sq * &r1q / int(2);
        (r1q, c, s)
    }

    /// `{β : 0 < Im Z(w) < Im Z(v)}` for a `w` of rank `r1` with
    /// `H·ch₁^D(w) = c1`.
    fn heart_interval(&self, r1: i64, c1: &Rational) -> OpenInterval {
        let (r, c, _) = &self.data_v;
        let mut iv = OpenInterval::full();
        // Im Z(w) = c1 − β·r1·h
        iv.restrict_positive(c1, &(int(r1) * &self.hh));
        // Im Z(v) − Im Z(w) = (c − c1) − β·(r − r1)·h
        iv.restrict_positive(&(c - c1), &((r - int(r1)) * &self.hh));
        iv
    }

    /// Candidate `k` (with `ch₁(w) = k·e`) for which
    /// `0 < Im Z(w) < Im Z(v)` can hold somewhere on the region.
    fn degree_range(&self, r1: i64) -> std::ops::RangeInclusive<i64> {
        let (r, c, _) = &self.data_v;
        let r1q = int(r1);
        let ends = [&self.region.lo, &self.region.hi];
        // H·ch₁^D(w) ∈ (β·r1·h, c − β·(r − r1)·h) for some β in the region
        let lower = ends.iter().map(|b| *b * &r1q * &self.hh).min().unwrap();
        let upper = ends
            .iter()
            .map(|b| c - *b * (r - &r1q) * &self.hh)
            .max()
            .unwrap();
        // H·ch₁^D(w) = k·(H·e) − r1·(H·D)
        let shift = &r1q * &self.h_d;
        let (a, b) = ((lower + &shift) / &self.h_gen, (upper + &shift) / &self.h_gen);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let lo = i64::try_from(rational::floor(&a)).unwrap_or(i64::MIN);
        let hi = i64::try_from(rational::ceil(&b)).unwrap_or(i64::MAX);
        lo..=hi
    }

    fn scan(&self, r1: i64, k: i64) -> Result<Vec<PseudoWall>> {
        let lattice = self.lattice;
        let (r, c, s) = &self.data_v;
        let r1q = int(r1);
        let (_, c1, _) = self.data_w(r1, k, &Rational::zero());
        let iv = self.heart_interval(r1, &c1);
        if iv.is_empty() {
            return Ok(Vec::new());
        }

        let v = self.v;
        let kq = int(k);
        let w_c1_sq = &kq * &kq * &self.gen_sq;
        let cv = &v.ch1.coords()[0];
        let diff = cv - &kq;
        let quotient_c1_sq = &diff * &diff * &self.gen_sq;
        let r_minus = int(v.ch0) - &r1q;

        let mut bounds = LinearBounds::default();
        // Δ(w) = k²e² − 2·r1·s1 ≥ 0
        bounds.require_nonneg(&(int(-2) * &r1q), &w_c1_sq);
        // Δ(v − w) = (c_v − k)²e² − 2(r − r1)(s_v − s1) ≥ 0
        bounds.require_nonneg(
            &(int(2) * &r_minus),
            &(&quotient_c1_sq - int(2) * &r_minus * &v.ch2),
        );
        // centre = (s1_D·r − s_D·r1)/X must lie in the heart interval
        let x = r * &c1 - &r1q * c;
        if !x.is_zero() {
            // s1_D = s1 + offset
            let offset = self.data_w(r1, k, &Rational::zero()).2;
            let slope = r / &x;
            let intercept = (&offset * r - s * &r1q) / &x;
            if let Some(lo) = &iv.lo {
                bounds.require_nonneg(&slope, &(&intercept - lo));
            }
            if let Some(hi) = &iv.hi {
                bounds.require_nonneg(&-&slope, &(hi - &intercept));
            }
            if r.is_zero() {
                if let (Some(lo), Some(hi)) = (&iv.lo, &iv.hi) {
                    // centre is fixed; the radius² = centre² − 2Z/(hX) is
                    // linear in s1 and must fit in the interval
                    let centre = &intercept;
                    let half = (hi - lo) / int(2);
                    // Z = s1_D·c − s·c1, so radius² = centre² − 2(s1·c + offset·c − s·c1)/(hX)
                    let denom = &self.hh * &x;
                    let a = int(-2) * c / &denom;
                    let b = centre * centre - int(2) * (&offset * c - s * &c1) / &denom;
                    bounds.require_nonneg(&a, &b);
                    bounds.require_nonneg(&-&a, &(&half * &half - &b));
                }
            }
        }
        if bounds.infeasible {
            return Ok(Vec::new());
        }
        let (Some(lo), Some(hi)) = (&bounds.lo, &bounds.hi) else {
            return Err(Error::Hypothesis(format!(
                "destabilizer search is unbounded for rank {r1}, degree {k}"
            )));
        };
        if lo > hi {
            return Ok(Vec::new());
        }
        // s1 = k²e²/2 + t with t ∈ Z
        let base = &w_c1_sq / int(2);
        let t_lo = rational::ceil(&(lo - &base));
        let t_hi = rational::floor(&(hi - &base));
        let mut out = Vec::new();
        let mut t = t_lo;
        while t <= t_hi {
            let s1 = &base + Rational::from_integer(t.clone());
            t += BigInt::one();
            let w = ChernVector::new(r1, DivisorClass::from_ints(&[k]), s1.clone());
            if w.discriminant(lattice)?.is_negative() || (v - &w).discriminant(lattice)?.is_negative() {
                continue;
            }
            let data_w = self.data_w(r1, k, &s1);
            let WallLocus::Wall(wall) = wall_from_data(&self.hh, &self.data_v, &data_w) else {
                continue;
            };
            if self.admissible(&wall, &iv) {
                out.push(PseudoWall { wall, destabilizer: w });
            }
        }
        Ok(out)
    }

    /// Wall meets `{α > 0, β ∈ region}` and lies over the heart interval.
    fn admissible(&self, wall: &Wall, iv: &OpenInterval) -> bool {
        let (lo, hi) = (&self.region.lo, &self.region.hi);
        let centre = wall.center_beta();
        match wall.radius_sq() {
            None => {
                let inside_iv = iv.lo.as_ref().is_none_or(|l| &centre > l)
                    && iv.hi.as_ref().is_none_or(|h| &centre < h);
                inside_iv && &centre >= lo && &centre <= hi
            }
            Some(r2) => {
                if !r2.is_positive() {
                    return false;
                }
                let meets_region = lt_sqrt(&(&centre - hi), &r2) && lt_sqrt(&(lo - &centre), &r2);
                let within_lo = iv.lo.as_ref().is_none_or(|l| ge_sqrt(&(&centre - l), &r2));
                let within_hi = iv.hi.as_ref().is_none_or(|h| ge_sqrt(&(h - &centre), &r2));
                meets_region && within_lo && within_hi
            }
        }
    }
}

/// CSV rendering of walls:
/// `kind,center_beta,radius_sq,cq,cl,cc,w_ch0,w_ch1,w_ch2`, plus
/// `center_beta_float,radius_sq_float` when `float` is set. `radius_sq` is
/// empty for lines; `w_ch1` coordinates are `;`-separated.
pub fn walls_csv(walls: &[PseudoWall], float: bool) -> String {
    let mut out = String::from("kind,center_beta,radius_sq,cq,cl,cc,w_ch0,w_ch1,w_ch2");
    if float {
        out.push_str(",center_beta_float,radius_sq_float");
    }
    out.push('\n');
    for pw in walls {
        let wall = &pw.wall;
        let kind = match wall.kind() {
            WallKind::Circle => "circle",
            WallKind::Line => "line",
        };
        let centre = wall.center_beta();
        let r2 = wall.radius_sq();
        let w = &pw.destabilizer;
        let ch1: Vec<String> = w.ch1.coords().iter().map(rational::format).collect();
        let _ = write!(
            out,
            "{kind},{},{},{},{},{},{},{},{}",
            rational::format(&centre),
            r2.as_ref().map(rational::format).unwrap_or_default(),
            rational::format(&wall.cq),
            rational::format(&wall.cl),
            rational::format(&wall.cc),
            w.ch0,
            ch1.join(";"),
            rational::format(&w.ch2),
        );
        if float {
            let _ = write!(
                out,
                ",{},{}",
                rational::to_decimal(&centre),
                r2.as_ref().map(rational::to_decimal).unwrap_or_default()
            );
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn p2() -> SurfaceLattice {
        SurfaceLattice::rank_one(1, -3, 3)
    }

    fn h() -> DivisorClass {
        DivisorClass::from_ints(&[1])
    }

    fn zero() -> DivisorClass {
        DivisorClass::zero(1)
    }

    fn cv(r: i64, c: i64, s: Rational) -> ChernVector {
        ChernVector::new(r, DivisorClass::from_ints(&[c]), s)
    }

    fn params(alpha: Rational, beta: Rational) -> TiltParams {
        TiltParams::new(&p2(), alpha, beta, h(), zero()).unwrap()
    }

    #[test]
    fn params_validation() {
        let l = p2();
        assert!(TiltParams::new(&l, int(0), int(0), h(), zero()).is_err());
        assert!(TiltParams::new(&l, int(1), int(0), zero(), zero()).is_err());
    }

    #[test]
    fn heart_side_examples() {
        let l = p2();
        let o = cv(1, 0, int(0));
        assert_eq!(heart_side(&l, &o, &params(int(1), int(-1))).unwrap(), HeartSide::Torsion);
        assert_eq!(heart_side(&l, &o, &params(int(1), int(1))).unwrap(), HeartSide::Free);
        assert_eq!(
            heart_side(&l, &o, &params(int(1), int(0))).unwrap(),
            HeartSide::ZeroSlopeBoundary
        );
        assert_eq!(
            heart_side(&l, &cv(0, 1, int(0)), &params(int(3), int(7))).unwrap(),
            HeartSide::Torsion
        );
    }

    #[test]
    fn central_charge_examples() {
        let l = p2();
        let z = central_charge(&l, &cv(1, 0, int(0)), &params(int(1), int(-1))).unwrap();
        assert_eq!((z.re, z.im), (int(0), int(1)));
        let z = central_charge(&l, &ChernVector::point(1), &params(frac(2, 3), frac(5, 7))).unwrap();
        assert_eq!((z.re, z.im), (int(-1), int(0)));
        // v = (1, 0, −1): Re = (α² − β²)/2 + 1, Im = −β
        for (a, b) in [(frac(1, 2), frac(-3, 4)), (int(2), int(1)), (frac(7, 5), int(0))] {
            let z = central_charge(&l, &cv(1, 0, int(-1)), &params(a.clone(), b.clone())).unwrap();
            assert_eq!(z.re, (&a * &a - &b * &b) / int(2) + int(1));
            assert_eq!(z.im, -b);
        }
    }

    #[test]
    fn tilt_slope_examples() {
        let l = p2();
        assert_eq!(
            tilt_slope(&l, &cv(1, 0, int(0)), &params(int(1), int(-1))).unwrap(),
            Slope::Finite(int(0))
        );
        assert_eq!(
            tilt_slope(&l, &ChernVector::point(1), &params(int(1), int(-1))).unwrap(),
            Slope::PosInfinity
        );
        assert_eq!(
            tilt_slope(&l, &cv(1, 0, int(-1)), &params(int(1), int(-1))).unwrap(),
            Slope::Finite(int(-1))
        );
    }

    #[test]
    fn positivity_examples() {
        let l = p2();
        let o = cv(1, 0, int(0));
        assert_eq!(
            positivity_check(&l, &-&o, &params(int(1), int(0))).unwrap(),
            Positivity::OkBoundaryNegativeReal
        );
        assert_eq!(
            positivity_check(&l, &ChernVector::point(1), &params(int(1), int(0))).unwrap(),
            Positivity::OkBoundaryNegativeReal
        );
        assert_eq!(
            positivity_check(&l, &-&o, &params(int(1), int(1))).unwrap(),
            Positivity::OkInterior
        );
        assert_eq!(
            positivity_check(&l, &o, &params(int(1), int(1))).unwrap(),
            Positivity::Violation
        );
    }

    #[test]
    fn wall_equation_examples() {
        let l = p2();
        let v = cv(1, 0, int(-1));
        let w = cv(1, -1, frac(1, 2));
        let WallLocus::Wall(wall) = wall_equation(&l, &v, &w, &h(), &zero()).unwrap() else {
            panic!("expected a wall");
        };
        assert_eq!(wall, Wall { cq: int(1), cl: int(3), cc: int(2) });
        assert_eq!(wall.kind(), WallKind::Circle);
        assert_eq!(wall.center_beta(), frac(-3, 2));
        assert_eq!(wall.radius_sq(), Some(frac(1, 4)));

        assert_eq!(
            wall_equation(&l, &v, &v.scale(2), &h(), &zero()).unwrap(),
            WallLocus::Degenerate
        );
    }

    #[test]
    fn rank_zero_destabilizer_wall_matches_sign_change_scan() {
        // v = O, w = (0, H, c): X = 1, so the locus is a circle.
        let l = p2();
        let v = cv(1, 0, int(0));
        let w = cv(0, 1, frac(-1, 2));
        let WallLocus::Wall(wall) = wall_equation(&l, &v, &w, &h(), &zero()).unwrap() else {
            panic!("expected a wall");
        };
        assert_eq!(wall.kind(), WallKind::Circle);
        // scan a grid: sign of ν(v) − ν(w) flips exactly across the wall
        let mut checked = 0;
        for bi in -40..=-1 {
            let beta = frac(bi, 10);
            for ai in 1..=40 {
                let alpha = frac(ai, 10);
                let a2 = &alpha * &alpha;
                let p = TiltParams::new(&l, alpha, beta.clone(), h(), zero()).unwrap();
                let zv = central_charge(&l, &v, &p).unwrap();
                let zw = central_charge(&l, &w, &p).unwrap();
                let cross = &zv.re * &zw.im - &zw.re * &zv.im;
                let side = wall.evaluate(&a2, &beta);
                // cross is a nonzero multiple of the wall polynomial
                assert_eq!(rational::sign(&cross).abs(), rational::sign(&side).abs());
                checked += 1;
            }
        }
        assert_eq!(checked, 1600);
    }

    #[test]
    fn crossing_detection() {
        let a = Wall { cq: int(1), cl: int(3), cc: int(2) }; // centre −3/2, r² 1/4
        let b = Wall { cq: int(1), cl: int(4), cc: int(3) }; // centre −2, r² 1
        let c = Wall { cq: int(1), cl: int(6), cc: int(8) }; // centre −3, r² 1
        let d = Wall { cq: int(1), cl: int(2), cc: frac(1, 2) }; // centre −1, r² 1/2
        assert!(!a.crosses(&b), "internally tangent at α = 0 only");
        assert!(!a.crosses(&c));
        assert!(a.crosses(&d));
        assert!(d.crosses(&a));
        assert!(!a.crosses(&a));
        let line = Wall { cq: int(0), cl: int(1), cc: int(2) }; // β = −2
        assert!(b.crosses(&line));
        assert!(line.crosses(&b));
        assert!(!a.crosses(&line));
        assert!(!c.crosses(&line));
    }

    #[test]
    fn pseudo_walls_example() {
        let l = p2();
        let v = cv(1, 0, int(-1));
        let walls =
            pseudo_walls(&l, &v, &h(), &zero(), 2, &BetaRegion::new(int(-3), int(0))).unwrap();
        let target = Wall { cq: int(1), cl: int(3), cc: int(2) };
        assert!(walls.iter().any(|pw| pw.wall == target));
        let pw = walls.iter().find(|pw| pw.wall == target).unwrap();
        assert_eq!(pw.destabilizer, cv(1, -1, frac(1, 2)));
    }

    #[test]
    fn pseudo_walls_line_bundle_is_empty() {
        let l = p2();
        for k in -2..=2 {
            let v = ChernVector::line_bundle(&l, DivisorClass::from_ints(&[k])).unwrap();
            for cap in 1..=3 {
                let walls =
                    pseudo_walls(&l, &v, &h(), &zero(), cap, &BetaRegion::new(int(-5), int(5)))
                        .unwrap();
                assert!(walls.is_empty(), "k={k} cap={cap}: {walls:?}");
            }
        }
    }

    #[test]
    fn pseudo_walls_errors_and_empty_region() {
        let l = p2();
        let v = cv(1, 0, int(-1));
        assert!(pseudo_walls(&l, &v, &h(), &zero(), 2, &BetaRegion::new(int(0), int(-1)))
            .unwrap()
            .is_empty());
        let bad = cv(4, 3, int(2));
        assert!(matches!(
            pseudo_walls(&l, &bad, &h(), &zero(), 2, &BetaRegion::new(int(-1), int(0))),
            Err(Error::Hypothesis(_))
        ));
        let prod = SurfaceLattice::product_surface(1, 1);
        let v2 = ChernVector::new(1, DivisorClass::zero(2), int(-1));
        assert!(matches!(
            pseudo_walls(
                &prod,
                &v2,
                &DivisorClass::from_ints(&[1, 1]),
                &DivisorClass::zero(2),
                2,
                &BetaRegion::new(int(-1), int(0))
            ),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn csv_row() {
        let pw = PseudoWall {
            wall: Wall { cq: int(1), cl: int(3), cc: int(2) },
            destabilizer: cv(1, -1, frac(1, 2)),
        };
        let csv = walls_csv(std::slice::from_ref(&pw), false);
        assert_eq!(
            csv,
            "kind,center_beta,radius_sq,cq,cl,cc,w_ch0,w_ch1,w_ch2\ncircle,-3/2,1/4,1,3,2,1,-1,1/2\n"
        );
        let csv = walls_csv(&[pw], true);
        assert!(csv.lines().nth(1).unwrap().ends_with(",-1.5,0.25"));
    }
}
