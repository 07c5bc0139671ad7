//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use gradval::exact_fields::{Fe, Field};
use gradval::graded_core::{GElem, GPoly, GradedField};
use gradval::valued_series::{SPoly, Series, SeriesField};
use gradval::value_groups::{HullVector, Rat};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn h(x: Rat) -> HullVector {
    HullVector(vec![x])
}

pub fn hi(x: i64) -> HullVector {
    HullVector::from_ints(&[x])
}

pub fn laurent(p: u64) -> SeriesField {
    SeriesField::laurent(Field::prime(p).unwrap(), &["t"])
}

pub fn nonzero_mod(r: &mut impl Rng, p: u64) -> u64 {
    r.gen_range(1..p)
}

/// Exact series `Σ c_k t^k` from `(k, c)` pairs over `GF(p)`.
pub fn series(e: &SeriesField, terms: &[(i64, u64)]) -> Series {
    e.from_terms(terms.iter().map(|(k, c)| (hi(*k), Fe::Mod(*c))), None).unwrap()
}

/// Random exact series with lowest term exactly at `low` and further terms
/// in `(low, low + span]`.
pub fn series_from(r: &mut impl Rng, e: &SeriesField, p: u64, low: i64, span: i64) -> Series {
    let mut terms = vec![(low, nonzero_mod(r, p))];
    for k in low + 1..=low + span {
        if r.gen_bool(0.4) {
            terms.push((k, r.gen_range(0..p)));
        }
    }
    series(e, &terms)
}

/// Random exact series with all terms strictly above `bound`.
pub fn series_above(r: &mut impl Rng, e: &SeriesField, p: u64, bound: Rat, span: i64) -> Series {
    let start = bound.floor().to_integer() + 1;
    let mut terms = Vec::new();
    for k in start..start + span {
        if r.gen_bool(0.3) {
            terms.push((k, r.gen_range(0..p)));
        }
    }
    series(e, &terms)
}

/// Random polynomial with `a_0 a_n != 0` and arbitrary coefficient values.
pub fn random_poly(r: &mut impl Rng, e: &SeriesField, p: u64, n: usize) -> (SPoly, Vec<Option<i64>>) {
    let mut f = Vec::new();
    let mut vals = Vec::new();
    for i in 0..=n {
        if i == 0 || i == n || r.gen_bool(0.6) {
            let v = r.gen_range(-3..6);
            f.push(series_from(r, e, p, v, 3));
            vals.push(Some(v));
        } else {
            f.push(e.zero());
            vals.push(None);
        }
    }
    (f, vals)
}

/// Random `λ`-polynomial of degree `n` (with `nλ` integral): every
/// coefficient lies on or above the line through `(n, v_n)` of slope `-λ`,
/// and both ends lie on it.
pub fn random_lambda_poly(r: &mut impl Rng, e: &SeriesField, p: u64, n: usize, lambda: Rat) -> SPoly {
    let vn = r.gen_range(-2..3i64);
    let mut f = Vec::new();
    for i in 0..=n {
        let bound = Rat::from(vn) + lambda * Rat::from((n - i) as i64);
        let mut c = series_above(r, e, p, bound, 4);
        let on_line = i == 0 || i == n || r.gen_bool(0.5);
        if bound.is_integer() && on_line {
            let m = e.monomial(Fe::Mod(nonzero_mod(r, p)), &h(bound)).unwrap();
            c = e.add(&c, &m);
        }
        f.push(c);
    }
    f
}

/// Number of segments of the lower convex hull of `{(i, v_i)}`, by the
/// monotone chain with collinear points merged.
pub fn hull_segments(vals: &[Option<i64>]) -> usize {
    let pts: Vec<(i64, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i as i64, v)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.len() - 1
}

// ---- dense polynomials over GF(p) as Vec<u64>, low degree first ----

pub fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

pub fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = fp_trim(a.to_vec());
    let b = fp_trim(b.to_vec());
    let lead = fp_inv(*b.last().unwrap(), p);
    while a.len() >= b.len() {
        let q = a.last().unwrap() * lead % p;
        let s = a.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            a[s + i] = (a[s + i] + p - q * c % p) % p;
        }
        a = fp_trim(a);
    }
    a
}

pub fn fp_gcd_is_one(a: &[u64], b: &[u64], p: u64) -> bool {
    let (mut x, mut y) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x.len() == 1
}

pub fn fp_eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, c| (acc * x + c) % p)
}

pub fn fp_deriv(a: &[u64], p: u64) -> Vec<u64> {
    fp_trim(a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect())
}

/// Irreducibility by trial division through every monic polynomial of
/// degree at most `deg/2`.
pub fn fp_irreducible(a: &[u64], p: u64) -> bool {
    let a = fp_trim(a.to_vec());
    let n = a.len() - 1;
    if n == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                g.push(k % p);
                k /= p;
            }
            g.push(1);
            if fp_rem(&a, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

pub fn random_fp_poly(r: &mut impl Rng, p: u64, deg: usize, monic: bool) -> Vec<u64> {
    let mut a: Vec<u64> = (0..deg).map(|_| r.gen_range(0..p)).collect();
    a.push(if monic { 1 } else { nonzero_mod(r, p) });
    a
}

pub fn random_irreducible(r: &mut impl Rng, p: u64, deg: usize) -> Vec<u64> {
    loop {
        let a = random_fp_poly(r, p, deg, true);
        if fp_irreducible(&a, p) {
            return a;
        }
    }
}

pub fn to_fe(a: &[u64]) -> Vec<Fe> {
    a.iter().map(|c| Fe::Mod(*c)).collect()
}

/// `Σ L_j X^(bj) π^(a(d - j))` for `λ = a/b`: the homogenization of
/// `L(Y)` under `Y = X^b/π^a`.
pub fn homogenize(g: &GradedField, l: &[u64], lambda: Rat) -> GPoly {
    let (a, b) = (*lambda.numer(), *lambda.denom() as usize);
    let d = l.len() as i64 - 1;
    let mut out = vec![g.zero(); b * (l.len() - 1) + 1];
    for (j, c) in l.iter().enumerate() {
        if *c != 0 {
            out[b * j] = g.monomial(Fe::Mod(*c), &hi(a * (d - j as i64))).unwrap();
        }
    }
    out
}

/// Coefficient lift of a graded polynomial plus random terms above the
/// line `v(a_n) + (n - i)λ`.
pub fn lift_with_noise(
    r: &mut impl Rng,
    e: &SeriesField,
    p: u64,
    f: &GPoly,
    lambda: Rat,
) -> SPoly {
    let n = f.len() - 1;
    let vn = f[n].grade().unwrap().coords()[0];
    (0..=n)
        .map(|i| {
            let bound = vn + lambda * Rat::from((n - i) as i64);
            let noise = series_above(r, e, p, bound, 5);
            e.add(&e.lift(&f[i]), &noise)
        })
        .collect()
}

// ---- truncated power series over GF(p), independent of the library ----

pub fn ps_mul(a: &[u64], b: &[u64], p: u64, n: usize) -> Vec<u64> {
    let mut out = vec![0; n];
    for (i, x) in a.iter().enumerate().take(n) {
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// `f(a)` for `f` with power-series coefficients, truncated to `n` terms.
pub fn ps_eval(f: &[Vec<u64>], a: &[u64], p: u64, n: usize) -> Vec<u64> {
    let mut acc = vec![0; n];
    for c in f.iter().rev() {
        acc = ps_mul(&acc, a, p, n);
        for (k, x) in c.iter().enumerate().take(n) {
            acc[k] = (acc[k] + x) % p;
        }
    }
    acc
}

/// Root of `f` with `a ≡ b mod t`, by solving for one coefficient at a time.
pub fn ps_root(f: &[Vec<u64>], b: u64, p: u64, n: usize) -> Vec<u64> {
    let res: Vec<u64> = f.iter().map(|c| c.first().copied().unwrap_or(0)).collect();
    let d = fp_eval(&fp_deriv(&res, p), b, p);
    let dinv = fp_inv(d, p);
    let mut a = vec![0; n];
    a[0] = b;
    for k in 1..n {
        let v = ps_eval(f, &a, p, k + 1)[k];
        a[k] = (p - v) % p * dinv % p;
    }
    a
}

pub fn ps_to_series(e: &SeriesField, c: &[u64]) -> Series {
    e.from_terms(
        c.iter().enumerate().map(|(k, x)| (hi(k as i64), Fe::Mod(*x))),
        None,
    )
    .unwrap()
}

pub fn coeff_at(x: &Series, k: i64) -> u64 {
    match x.terms.get(&hi(k)) {
        Some(Fe::Mod(c)) => *c,
        Some(other) => panic!("unexpected coefficient {:?}", other),
        None => 0,
    }
}

pub fn homogeneous_grade(x: &GElem) -> Option<HullVector> {
    x.grade().cloned()
}
