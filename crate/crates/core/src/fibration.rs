//! Bookkeeping for a surface `X` fibred over a curve `Y` with fibre class
//! `F` of genus `g`: slope-inequality defect, the right-hand side of the
//! relative Bogomolov inequality, and the `m`-expansion of
//!
//! ```text
//! S_m = h⁰(E_y(mH))·(c₁(E(mH)))² − 2r·deg(E_y(mH))·deg c₁(π_*E(mH)).
//! ```
//!
//! Over a curve base every pushed-forward class is a number, so all
//! quantities here are rationals. `h⁰(E_y(mH))` is replaced by its
//! Riemann–Roch value, as it is not determined by numerical data.

use num_traits::Signed;
use serde::Serialize;

use crate::chern::ChernVector;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationData {
    surface: SurfaceLattice,
    fiber: DivisorClass,
    fiber_genus: u32,
    base_genus: u32,
}

impl FibrationData {
    /// Checks `F` integral, `F² = 0` and `K·F = 2g − 2`.
    pub fn new(surface: SurfaceLattice, fiber: DivisorClass, fiber_genus: u32, base_genus: u32) -> Result<Self> {
        surface.check_dim(&fiber)?;
        if !fiber.is_integral() {
            return Err(Error::InvalidArgument(format!("fibre class {fiber} is not integral")));
        }
        let ff = surface.square(&fiber)?;
        if ff != int(0) {
            return Err(Error::InvalidArgument(format!(
                "fibre class has F² = {}, expected 0",
                rational::format(&ff)
            )));
        }
        let kf = surface.pair(surface.canonical(), &fiber)?;
        let expected = 2 * fiber_genus as i64 - 2;
        if kf != int(expected) {
            return Err(Error::InvalidArgument(format!(
                "adjunction fails: K·F = {}, expected 2g − 2 = {expected}",
                rational::format(&kf)
            )));
        }
        Ok(FibrationData {
            surface,
            fiber,
            fiber_genus,
            base_genus,
        })
    }

    /// `C₁ × C₂ → C₂`: fibre `f₁ = [C₁ × pt]` of genus `g₁` over a base of
    /// genus `g₂`.
    pub fn product(g1: u32, g2: u32) -> Self {
        FibrationData::new(
            SurfaceLattice::product_surface(g1, g2),
            DivisorClass::from_ints(&[1, 0]),
            g1,
            g2,
        )
        .expect("product fibration is consistent")
    }

    /// On a product fibration, the class `[pt × C₂]` of a horizontal section.
    pub fn product_section() -> DivisorClass {
        DivisorClass::from_ints(&[0, 1])
    }

    pub fn surface(&self) -> &SurfaceLattice {
        &self.surface
    }

    pub fn fiber(&self) -> &DivisorClass {
        &self.fiber
    }

    pub fn fiber_genus(&self) -> u32 {
        self.fiber_genus
    }

    pub fn base_genus(&self) -> u32 {
        self.base_genus
    }

    fn g_minus_one(&self) -> Rational {
        int(self.fiber_genus as i64 - 1)
    }

    /// `deg K_Y = 2g_Y − 2`.
    fn base_canonical_degree(&self) -> Rational {
        int(2 * self.base_genus as i64 - 2)
    }

    /// `K_{X/Y} = K − (2g_Y − 2)·F`.
    pub fn relative_canonical(&self) -> DivisorClass {
        self.surface.canonical() - &self.fiber.scale(&self.base_canonical_degree())
    }

    /// `deg H_y = H·F`, required positive.
    fn fiber_degree(&self, h: &DivisorClass) -> Result<Rational> {
        let hf = self.surface.pair(h, &self.fiber)?;
        if !hf.is_positive() {
            return Err(Error::Hypothesis(format!(
                "H·F = {} must be positive",
                rational::format(&hf)
            )));
        }
        Ok(hf)
    }

    /// `(K² + c₂)`, the degree of `c₁²(X) + c₂(X)`.
    fn noether_number(&self) -> Rational {
        self.surface.k_squared() + int(self.surface.c2())
    }
}

fn positive_rank(v: &ChernVector) -> Result<Rational> {
    if v.ch0 <= 0 {
        return Err(Error::Rank(format!("rank must be positive, got {}", v.ch0)));
    }
    Ok(int(v.ch0))
}

/// `(H·F)(H·K_{X/Y}) − (g − 1)H²`.
pub fn slope_defect(fd: &FibrationData, h: &DivisorClass) -> Result<Rational> {
    let lat = &fd.surface;
    let hf = fd.fiber_degree(h)?;
    let hk = lat.pair(h, &fd.relative_canonical())?;
    Ok(hf * hk - fd.g_minus_one() * lat.square(h)?)
}

/// The three pieces of the relative Bogomolov bound and their combination
/// `chern_term − degree_term − base_term`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelBogTerms {
    /// `(r²/6)(K² + c₂) − r·c₁·K_{X/Y}`
    #[serde(with = "rational::string")]
    pub chern_term: Rational,
    /// `(r/(H·F))·((c₁·F)(H·K_{X/Y}) − (2g − 2)(H·c₁))`
    #[serde(with = "rational::string")]
    pub degree_term: Rational,
    /// `r²(g − 1)(2g_Y − 2)`
    #[serde(with = "rational::string")]
    pub base_term: Rational,
    #[serde(with = "rational::string")]
    pub total: Rational,
}

pub fn rel_bog_terms(fd: &FibrationData, v: &ChernVector, h: &DivisorClass) -> Result<RelBogTerms> {
    let lat = &fd.surface;
    let r = positive_rank(v)?;
    let hf = fd.fiber_degree(h)?;
    let krel = fd.relative_canonical();
    let deg_ey = lat.pair(&v.ch1, &fd.fiber)?;
    let hk = lat.pair(h, &krel)?;
    let hc = lat.pair(h, &v.ch1)?;
    let two_g_minus_two = int(2) * fd.g_minus_one();

    let chern_term = &r * &r / int(6) * fd.noether_number() - &r * lat.pair(&v.ch1, &krel)?;
    let degree_term = &r / &hf * (deg_ey * hk - two_g_minus_two * hc);
    let base_term = &r * &r * fd.g_minus_one() * fd.base_canonical_degree();
    let total = &chern_term - &degree_term - &base_term;
    Ok(RelBogTerms {
        chern_term,
        degree_term,
        base_term,
        total,
    })
}

/// Right-hand side of the relative Bogomolov inequality `Δ(E) ≥ rhs`.
pub fn rel_bog_rhs(fd: &FibrationData, v: &ChernVector, h: &DivisorClass) -> Result<Rational> {
    Ok(rel_bog_terms(fd, v, h)?.total)
}

/// Coefficients of `deg ch₁(π_*E(mH)) = q2·m² + q1·m + q0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quadratic {
    #[serde(with = "rational::string")]
    pub q2: Rational,
    #[serde(with = "rational::string")]
    pub q1: Rational,
    #[serde(with = "rational::string")]
    pub q0: Rational,
}

impl Quadratic {
    pub fn eval(&self, m: &Rational) -> Rational {
        (&self.q2 * m + &self.q1) * m + &self.q0
    }
}

/// From Grothendieck–Riemann–Roch along `π`:
///
/// - `q2 = r·H²/2`
/// - `q1 = H·(c₁ − (r/2)K_{X/Y})`
/// - `q0 = ch₂ − c₁·K_{X/Y}/2 + (r/12)(K² + c₂) − (r(g − 1)/2)(2g_Y − 2)`
pub fn pushforward_ch1_poly(fd: &FibrationData, v: &ChernVector, h: &DivisorClass) -> Result<Quadratic> {
    let lat = &fd.surface;
    fd.fiber_degree(h)?;
    lat.check_dim(&v.ch1)?;
    let r = int(v.ch0);
    let krel = fd.relative_canonical();
    let half_r_krel = krel.scale(&(&r / int(2)));
    Ok(Quadratic {
        q2: &r * lat.square(h)? / int(2),
        q1: lat.pair(h, &(&v.ch1 - &half_r_krel))?,
        q0: &v.ch2 - lat.pair(&v.ch1, &krel)? / int(2) + &r / int(12) * fd.noether_number()
            - &r * fd.g_minus_one() / int(2) * fd.base_canonical_degree(),
    })
}

/// Coefficient of `m²` in `S_m`: `r³·((H·F)(H·K_{X/Y}) − (g − 1)H²)`.
pub fn s_m_quadratic_coeff(fd: &FibrationData, v: &ChernVector, h: &DivisorClass) -> Result<Rational> {
    let r = positive_rank(v)?;
    Ok(&r * &r * &r * slope_defect(fd, h)?)
}

/// Coefficient of `m` in `S_m`:
///
/// ```text
/// r(H·F)·(c₁² − 2r·ch₂ + r·c₁·K_{X/Y} − (r²/6)(K² + c₂))
///   + r³(g − 1)(H·F)(2g_Y − 2)
///   + r²((c₁·F)(H·K_{X/Y}) − (2g − 2)(H·c₁))
/// ```
pub fn s_m_linear_coeff(fd: &FibrationData, v: &ChernVector, h: &DivisorClass) -> Result<Rational> {
    let lat = &fd.surface;
    let r = positive_rank(v)?;
    let hf = fd.fiber_degree(h)?;
    let krel = fd.relative_canonical();
    let c1_sq = lat.square(&v.ch1)?;
    let c1_krel = lat.pair(&v.ch1, &krel)?;
    let deg_ey = lat.pair(&v.ch1, &fd.fiber)?;
    let hk = lat.pair(h, &krel)?;
    let hc = lat.pair(h, &v.ch1)?;

    let first = &r * &hf
        * (c1_sq - int(2) * &r * &v.ch2 + &r * c1_krel - &r * &r / int(6) * fd.noether_number());
    let second = &r * &r * &r * fd.g_minus_one() * &hf * fd.base_canonical_degree();
    let third = &r * &r * (deg_ey * hk - int(2) * fd.g_minus_one() * hc);
    Ok(first + second + third)
}

/// Everything the fibration subcommand reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationReport {
    #[serde(with = "rational::string")]
    pub fiber_degree: Rational,
    pub relative_canonical: DivisorClass,
    #[serde(with = "rational::string")]
    pub slope_defect: Rational,
    pub defect_is_zero: bool,
    pub rel_bog: RelBogTerms,
    #[serde(with = "rational::string")]
    pub discriminant: Rational,
    /// `Δ − rhs`; nonnegative is what the inequality asserts when the
    /// defect vanishes.
    #[serde(with = "rational::string")]
    pub discriminant_minus_rhs: Rational,
    pub pushforward_ch1: Quadratic,
    #[serde(with = "rational::string")]
    pub s_m_quadratic: Rational,
    #[serde(with = "rational::string")]
    pub s_m_linear: Rational,
    /// `deg E_y + r(1 − g)`, standing in for `h⁰(E_y)`.
    #[serde(with = "rational::string")]
    pub fiber_euler_char: Rational,
    pub note: &'static str,
}

pub fn report(fd: &FibrationData, v: &ChernVector, h: &DivisorClass) -> Result<FibrationReport> {
    let lat = &fd.surface;
    let rel_bog = rel_bog_terms(fd, v, h)?;
    let discriminant = v.discriminant(lat)?;
    let defect = slope_defect(fd, h)?;
    let deg_ey = lat.pair(&v.ch1, &fd.fiber)?;
    Ok(FibrationReport {
        fiber_degree: fd.fiber_degree(h)?,
        relative_canonical: fd.relative_canonical(),
        defect_is_zero: defect == int(0),
        slope_defect: defect,
        discriminant_minus_rhs: &discriminant - &rel_bog.total,
        discriminant,
        rel_bog,
        pushforward_ch1: pushforward_ch1_poly(fd, v, h)?,
        s_m_quadratic: s_m_quadratic_coeff(fd, v, h)?,
        s_m_linear: s_m_linear_coeff(fd, v, h)?,
        fiber_euler_char: deg_ey + int(v.ch0) * (int(1) - int(fd.fiber_genus as i64)),
        note: "χ used for h⁰",
    })
}
