//! Random valid lattices and independently coded oracles shared by the
//! integration test targets.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use stabkit::rational::{int, Rational};
use stabkit::{ChernVector, DivisorClass, SurfaceLattice};

/// Integer Gram form `a·G·b` computed without the library.
pub fn form(gram: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let mut s = 0;
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            s += a[i] * g * b[j];
        }
    }
    s
}

/// A random lattice of signature `(1, 0, ρ − 1)`: either `⟨a⟩ ⊕ negative
/// diagonal` or `hyperbolic(m) ⊕ negative diagonal`, mixed by a few
/// unimodular basis changes. `K` is random and `c₂` is chosen to satisfy
/// Noether's congruence.
pub fn random_lattice(rng: &mut StdRng, max_rho: usize) -> SurfaceLattice {
    let rho = rng.gen_range(1..=max_rho);
    let mut g = vec![vec![0i64; rho]; rho];
    let start = if rho >= 2 && rng.gen_bool(0.4) {
        let m = rng.gen_range(1..=3);
        g[0][1] = m;
        g[1][0] = m;
        2
    } else {
        g[0][0] = rng.gen_range(1..=5);
        1
    };
    for (i, row) in g.iter_mut().enumerate().skip(start) {
        row[i] = -rng.gen_range(1..=4);
    }
    if rho >= 2 {
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..rho);
            let j = (i + rng.gen_range(1..rho)) % rho;
            let t = if rng.gen_bool(0.5) { 1 } else { -1 };
            // e_i ← e_i + t·e_j
            for row in g.iter_mut() {
                row[i] += t * row[j];
            }
            let rj = g[j].clone();
            for (x, y) in g[i].iter_mut().zip(rj) {
                *x += t * y;
            }
        }
    }
    let k: Vec<i64> = (0..rho).map(|_| rng.gen_range(-3..=3)).collect();
    let k2 = form(&g, &k, &k);
    let c2 = (-k2).rem_euclid(12) + 12 * rng.gen_range(-2..=2);
    let lat = SurfaceLattice::new(g, DivisorClass::from_ints(&k), c2, None).unwrap();
    lat.validate().expect("generator produces valid lattices");
    lat
}

pub fn random_class(rng: &mut StdRng, rho: usize, bound: i64) -> Vec<i64> {
    (0..rho).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Random integral `H` with `H² > 0`, by rejection.
pub fn random_polarization(rng: &mut StdRng, lat: &SurfaceLattice) -> Vec<i64> {
    loop {
        let h = random_class(rng, lat.rho(), 3);
        if form(lat.gram(), &h, &h) > 0 {
            return h;
        }
    }
}

/// Integral Chern vector with `ch₂ ∈ ch₁²/2 + Z`.
pub fn random_chern(rng: &mut StdRng, lat: &SurfaceLattice, rank: i64, bound: i64) -> ChernVector {
    let c1 = random_class(rng, lat.rho(), bound);
    let half_sq = Rational::new(form(lat.gram(), &c1, &c1).into(), 2.into());
    ChernVector::new(rank, DivisorClass::from_ints(&c1), half_sq + int(rng.gen_range(-bound..=bound)))
}

/// Slopes of the summands of a split bundle: `(μ⁺, μ⁻)` are just the
/// extreme degrees.
pub fn split_extremes(degrees: &[i64]) -> (i64, i64) {
    (*degrees.iter().max().unwrap(), *degrees.iter().min().unwrap())
}

/// All multisets of size `1..=max_len` from `lo..=hi`.
pub fn degree_multisets(max_len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn go(len: usize, from: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in from..=hi {
            cur.push(x);
            go(len, x, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=max_len {
        go(len, lo, hi, &mut Vec::new(), &mut out);
    }
    out
}

/// Reider exceptions by scanning every point of the box and testing the
/// four inequalities directly.
pub fn reider_brute_force(gram: &[Vec<i64>], l: &[i64], d: i64, bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut point: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        let ld = form(gram, l, &point);
        let dd = form(gram, &point, &point);
        if 0 <= ld && ld - d <= dd && 2 * dd < ld && ld < 2 * d {
            out.push(point.clone());
        }
        let mut i = 0;
        loop {
            if i == point.len() {
                out.sort();
                return out;
            }
            if point[i] < bounds[i].1 {
                point[i] += 1;
                break;
            }
            point[i] = bounds[i].0;
            i += 1;
        }
    }
}

/// `S(m)` for `m = 0, 1, 2, 3` evaluated from its definition (with `χ` in
/// place of `h⁰` on the fibre), and the pushforward degree obtained from
/// `ch·td(T_π)` with `td₁ = −K_{X/Y}/2`,
/// `td₂ = (K² + c₂)/12 − (2g − 2)(2g_Y − 2)/4`.
pub struct SmOracle {
    pub values: Vec<Rational>,
    pub pushforward: Vec<Rational>,
}

pub fn s_m_oracle(
    lat: &SurfaceLattice,
    fiber: &DivisorClass,
    g: i64,
    gy: i64,
    v: &ChernVector,
    h: &DivisorClass,
) -> SmOracle {
    let r = int(v.ch0);
    let k = lat.canonical();
    let k_base = int(2 * gy - 2);
    let krel = k - &fiber.scale(&k_base);
    let td2 = (lat.k_squared() + int(lat.c2())) / int(12) - int((2 * g - 2) * (2 * gy - 2)) / int(4);
    let mut values = Vec::new();
    let mut pushforward = Vec::new();
    for m in 0..4 {
        let mh = h.scale(&int(m));
        let e = v.tensor_line(lat, &mh).unwrap();
        let deg_fiber = lat.pair(&e.ch1, fiber).unwrap();
        let chi_fiber = &deg_fiber + &r * int(1 - g);
        let push = &e.ch2 - lat.pair(&e.ch1, &krel).unwrap() / int(2) + &r * &td2;
        let s = &chi_fiber * lat.square(&e.ch1).unwrap() - int(2) * &r * &deg_fiber * &push;
        values.push(s);
        pushforward.push(push);
    }
    SmOracle { values, pushforward }
}

/// Coefficients `[c0, c1, c2, c3]` of the cubic through `(m, y_m)`,
/// `m = 0..=3`, by Newton forward differences.
pub fn cubic_coefficients(y: &[Rational]) -> [Rational; 4] {
    let d1: Vec<Rational> = y.windows(2).map(|w| &w[1] - &w[0]).collect();
    let d2: Vec<Rational> = d1.windows(2).map(|w| &w[1] - &w[0]).collect();
    let d3 = &d2[1] - &d2[0];
    // y(m) = y0 + d1₀·m + d2₀·m(m−1)/2 + d3·m(m−1)(m−2)/6
    let a3 = &d3 / int(6);
    let a2 = &d2[0] / int(2) - &d3 / int(2);
    let a1 = &d1[0] - &d2[0] / int(2) + &d3 / int(3);
    [y[0].clone(), a1, a2, a3]
}
