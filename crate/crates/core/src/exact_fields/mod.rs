//! Exact residue-level fields: `GF(p)`, towers of simple algebraic extensions
//! `base[a]/(m(a))` over `GF(p)` or `QQ`, and `QQ` itself.
//!
//! A [`Field`] is a cheap shared handle; elements ([`Fe`]) carry no reference
//! to their field and every operation goes through the field handle.

mod factor;
mod hom;
mod poly;
mod roots;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use factor::{Factorization, frobenius_orbit};
pub use hom::FieldHom;
pub use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to field {0}")]
    MixedFields(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {0} is not irreducible")]
    Reducible(String),
    #[error("modulus must be monic of degree at least 2")]
    BadModulus,
    #[error("unsupported over {0}: {1}")]
    Unsupported(String, String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("field {0} is not finite")]
    NotFinite(String),
}

/// Field element in canonical form.
///
/// `Mod` lives in `GF(p)` with representative in `0..p`; `Rat` is a reduced
/// rational; `Ext` is the coefficient vector (low to high, trailing zeros
/// trimmed) over the base of an extension level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fe {
    Mod(u64),
    Rat(BigRational),
    Ext(Vec<Fe>),
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum FieldDesc {
    Prime(u64),
    Rationals,
    /// `base[var] / (modulus)`, modulus monic and irreducible over `base`.
    Extension {
        base: Field,
        modulus: Poly,
        var: String,
    },
}

#[derive(Debug, Clone, Eq, Hash)]
pub struct Field(Arc<FieldDesc>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, k)` with `n = p^k`, when `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut k = 0;
    let mut r = n;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r == 1 {
        Some((p, k))
    } else {
        None
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u128, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

const VAR_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

impl Field {
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldDesc::Prime(p))))
    }

    pub fn rationals() -> Field {
        Field(Arc::new(FieldDesc::Rationals))
    }

    /// `GF(q)` presented as `GF(p)[a]/(m)` with the given modulus
    /// (coefficients low to high as integers), or `GF(p)` when `q` is prime.
    pub fn galois(q: u64, modulus: Option<&[i64]>) -> Result<Field, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        let base = Field::prime(p)?;
        if k == 1 {
            return Ok(base);
        }
        let m = match modulus {
            Some(m) => Poly::new(m.iter().map(|&c| base.from_int(c)).collect()),
            None => factor::find_irreducible(&base, k as usize),
        };
        if m.degree() != Some(k as usize) {
            return Err(FieldError::BadModulus);
        }
        base.extension(m, None)
    }

    /// Simple extension `self[var]/(modulus)`. The modulus must be monic and
    /// irreducible; irreducibility is verified by factoring over finite
    /// bases and by a square-class test for quadratic steps over `QQ`.
    pub fn extension(&self, modulus: Poly, var: Option<&str>) -> Result<Field, FieldError> {
        let deg = modulus.degree().ok_or(FieldError::BadModulus)?;
        if deg < 2 || !self.is_one(modulus.lead().unwrap()) {
            return Err(FieldError::BadModulus);
        }
        if self.is_finite() {
            let fac = self.factor(&modulus)?;
            if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
                return Err(FieldError::Reducible(self.poly_to_string(&modulus, "X")));
            }
        } else {
            // Only quadratic steps X^2 - d with rational d are supported over QQ.
            let d = self.quadratic_radicand(&modulus).ok_or_else(|| {
                FieldError::Unsupported(
                    self.to_string(),
                    "extensions of QQ-towers must be X^2 - d with rational d".into(),
                )
            })?;
            if self.rational_is_square(&d) {
                return Err(FieldError::Reducible(self.poly_to_string(&modulus, "X")));
            }
        }
        let name = match var {
            Some(v) => v.to_string(),
            None => {
                if self.is_finite() {
                    VAR_NAMES[self.depth().min(VAR_NAMES.len() - 1)].to_string()
                } else {
                    let d = self.quadratic_radicand(&modulus).unwrap();
                    format!("sqrt({})", d)
                }
            }
        };
        Ok(Field(Arc::new(FieldDesc::Extension {
            base: self.clone(),
            modulus,
            var: name,
        })))
    }

    /// `QQ(sqrt(d_1), ..., sqrt(d_k))`.
    pub fn multi_quadratic(radicands: &[i64]) -> Result<Field, FieldError> {
        let mut f = Field::rationals();
        for &d in radicands {
            let m = Poly::new(vec![f.from_int(-d), f.zero(), f.one()]);
            f = f.extension(m, None)?;
        }
        Ok(f)
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.0
    }

    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            FieldDesc::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&Poly> {
        match &*self.0 {
            FieldDesc::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn var(&self) -> Option<&str> {
        match &*self.0 {
            FieldDesc::Extension { var, .. } => Some(var),
            _ => None,
        }
    }

    /// Number of extension levels above the prime field.
    pub fn depth(&self) -> usize {
        match self.base() {
            Some(b) => 1 + b.depth(),
            None => 0,
        }
    }

    /// Fields of the tower from the prime field up to `self`.
    pub fn tower(&self) -> Vec<Field> {
        let mut v = vec![self.clone()];
        while let Some(b) = v.last().unwrap().base().cloned() {
            v.push(b);
        }
        v.reverse();
        v
    }

    pub fn prime_field(&self) -> Field {
        self.tower()[0].clone()
    }

    /// `true` when `sub` is one of the levels of this tower (including self).
    pub fn has_level(&self, sub: &Field) -> bool {
        self.tower().iter().any(|f| f == sub)
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldDesc::Prime(p) => *p,
            FieldDesc::Rationals => 0,
            FieldDesc::Extension { base, .. } => base.characteristic(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> usize {
        match &*self.0 {
            FieldDesc::Extension { base, modulus, .. } => {
                base.absolute_degree() * modulus.degree().unwrap()
            }
            _ => 1,
        }
    }

    /// `[self : sub]`, when `sub` is a level of this tower.
    pub fn degree_over(&self, sub: &Field) -> Option<usize> {
        if self == sub {
            return Some(1);
        }
        match &*self.0 {
            FieldDesc::Extension { base, modulus, .. } => {
                base.degree_over(sub).map(|d| d * modulus.degree().unwrap())
            }
            _ => None,
        }
    }

    pub fn cardinality(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        Some((self.characteristic() as u128).pow(self.absolute_degree() as u32))
    }

    pub fn zero(&self) -> Fe {
        match &*self.0 {
            FieldDesc::Prime(_) => Fe::Mod(0),
            FieldDesc::Rationals => Fe::Rat(BigRational::zero()),
            FieldDesc::Extension { .. } => Fe::Ext(vec![]),
        }
    }

    pub fn one(&self) -> Fe {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Fe {
        match &*self.0 {
            FieldDesc::Prime(p) => Fe::Mod(n.rem_euclid(*p as i64) as u64),
            FieldDesc::Rationals => Fe::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldDesc::Extension { base, .. } => self.lift_base(base.from_int(n)),
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Fe, FieldError> {
        match &*self.0 {
            FieldDesc::Prime(_) => {
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                self.div(&n, &d)
            }
            FieldDesc::Rationals => Ok(Fe::Rat(r.clone())),
            FieldDesc::Extension { base, .. } => Ok(self.lift_base(base.from_rational(r)?)),
        }
    }

    fn from_bigint(&self, n: &BigInt) -> Fe {
        match &*self.0 {
            FieldDesc::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Fe::Mod(r.to_u64().unwrap())
            }
            _ => self.from_rational(&BigRational::from_integer(n.clone())).unwrap(),
        }
    }

    /// Embed an element of the immediate base field.
    fn lift_base(&self, b: Fe) -> Fe {
        let base = self.base().expect("extension level");
        if base.is_zero(&b) {
            Fe::Ext(vec![])
        } else {
            Fe::Ext(vec![b])
        }
    }

    /// Embed an element of the tower level `sub` into `self`.
    pub fn embed(&self, sub: &Field, a: &Fe) -> Option<Fe> {
        if self == sub {
            return Some(a.clone());
        }
        let base = self.base()?;
        let inner = base.embed(sub, a)?;
        Some(self.lift_base(inner))
    }

    /// The generator of the top extension level.
    pub fn generator(&self) -> Option<Fe> {
        let base = self.base()?;
        Some(Fe::Ext(vec![base.zero(), base.one()]))
    }

    /// Generators of every extension level, embedded in `self`, bottom first.
    pub fn level_generators(&self) -> Vec<Fe> {
        self.tower()
            .iter()
            .skip(1)
            .map(|lvl| self.embed(lvl, &lvl.generator().unwrap()).unwrap())
            .collect()
    }

    pub fn is_zero(&self, a: &Fe) -> bool {
        match a {
            Fe::Mod(x) => *x == 0,
            Fe::Rat(r) => r.is_zero(),
            Fe::Ext(v) => v.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Fe) -> bool {
        *a == self.one()
    }

    /// Checks that `a` is a canonical element of this field.
    pub fn check(&self, a: &Fe) -> Result<(), FieldError> {
        let ok = match (&*self.0, a) {
            (FieldDesc::Prime(p), Fe::Mod(x)) => x < p,
            (FieldDesc::Rationals, Fe::Rat(_)) => true,
            (FieldDesc::Extension { base, modulus, .. }, Fe::Ext(v)) => {
                v.len() <= modulus.degree().unwrap()
                    && v.last().map_or(true, |l| !base.is_zero(l))
                    && v.iter().all(|c| base.check(c).is_ok())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(FieldError::MixedFields(self.to_string()))
        }
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        match (&*self.0, a, b) {
            (FieldDesc::Prime(p), Fe::Mod(x), Fe::Mod(y)) => Fe::Mod((x + y) % p),
            (FieldDesc::Rationals, Fe::Rat(x), Fe::Rat(y)) => Fe::Rat(x + y),
            (FieldDesc::Extension { base, .. }, Fe::Ext(x), Fe::Ext(y)) => {
                Fe::Ext(poly::vec_add(base, x, y))
            }
            _ => panic!("mixed field elements in {}", self),
        }
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        match (&*self.0, a) {
            (FieldDesc::Prime(p), Fe::Mod(x)) => Fe::Mod((p - x) % p),
            (FieldDesc::Rationals, Fe::Rat(x)) => Fe::Rat(-x),
            (FieldDesc::Extension { base, .. }, Fe::Ext(x)) => {
                Fe::Ext(x.iter().map(|c| base.neg(c)).collect())
            }
            _ => panic!("mixed field elements in {}", self),
        }
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        match (&*self.0, a, b) {
            (FieldDesc::Prime(p), Fe::Mod(x), Fe::Mod(y)) => Fe::Mod(mul_mod(*x, *y, *p)),
            (FieldDesc::Rationals, Fe::Rat(x), Fe::Rat(y)) => Fe::Rat(x * y),
            (FieldDesc::Extension { base, modulus, .. }, Fe::Ext(x), Fe::Ext(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Fe::Ext(vec![]);
                }
                let prod = poly::vec_mul(base, x, y);
                Fe::Ext(poly::vec_rem_monic(base, prod, &modulus.0))
            }
            _ => panic!("mixed field elements in {}", self),
        }
    }

    pub fn inv(&self, a: &Fe) -> Result<Fe, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match (&*self.0, a) {
            (FieldDesc::Prime(p), Fe::Mod(x)) => Fe::Mod(pow_mod(*x, (*p - 2) as u128, *p)),
            (FieldDesc::Rationals, Fe::Rat(x)) => Fe::Rat(x.recip()),
            (FieldDesc::Extension { base, modulus, .. }, Fe::Ext(x)) => {
                // s*x + t*m = g with g a nonzero constant
                let (g, s, _) = base.pxgcd(&Poly::new(x.clone()), modulus);
                let c = base.inv(&g.0[0])?;
                let s = base.pscale(&s, &c);
                Fe::Ext(s.0)
            }
            _ => panic!("mixed field elements in {}", self),
        })
    }

    pub fn div(&self, a: &Fe, b: &Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Fe, mut e: u128) -> Fe {
        if let (FieldDesc::Prime(p), Fe::Mod(x)) = (&*self.0, a) {
            return Fe::Mod(pow_mod(*x, e, *p));
        }
        let mut base = a.clone();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }

    /// Integer power, negative exponents allowed for nonzero `a`.
    pub fn powi(&self, a: &Fe, e: i64) -> Result<Fe, FieldError> {
        if e >= 0 {
            Ok(self.pow(a, e as u128))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs() as u128))
        }
    }

    /// Coordinates of `a` over the tower level `sub`, in the power basis of
    /// the intermediate generators (lowest level varies fastest).
    pub fn coords_over(&self, sub: &Field, a: &Fe) -> Vec<Fe> {
        if self == sub {
            return vec![a.clone()];
        }
        let (base, modulus) = match &*self.0 {
            FieldDesc::Extension { base, modulus, .. } => (base, modulus),
            _ => panic!("{} is not a level of {}", sub, self),
        };
        let n = modulus.degree().unwrap();
        let v = match a {
            Fe::Ext(v) => v,
            _ => panic!("mixed field elements in {}", self),
        };
        let mut out = Vec::new();
        for i in 0..n {
            let c = v.get(i).cloned().unwrap_or_else(|| base.zero());
            out.extend(base.coords_over(sub, &c));
        }
        out
    }

    pub fn from_coords(&self, sub: &Field, coords: &[Fe]) -> Fe {
        if self == sub {
            return coords[0].clone();
        }
        let (base, modulus) = match &*self.0 {
            FieldDesc::Extension { base, modulus, .. } => (base, modulus),
            _ => panic!("{} is not a level of {}", sub, self),
        };
        let n = modulus.degree().unwrap();
        let chunk = coords.len() / n;
        let mut v: Vec<Fe> = coords.chunks(chunk).map(|c| base.from_coords(sub, c)).collect();
        while v.last().map_or(false, |c| base.is_zero(c)) {
            v.pop();
        }
        Fe::Ext(v)
    }

    /// All elements of a finite field, in a fixed order. Intended for small
    /// fields only.
    pub fn elements(&self) -> Result<Vec<Fe>, FieldError> {
        match &*self.0 {
            FieldDesc::Prime(p) => Ok((0..*p).map(Fe::Mod).collect()),
            FieldDesc::Rationals => Err(FieldError::NotFinite(self.to_string())),
            FieldDesc::Extension { base, modulus, .. } => {
                let be = base.elements()?;
                let n = modulus.degree().unwrap();
                let mut out = vec![vec![]];
                for _ in 0..n {
                    let mut next = Vec::with_capacity(out.len() * be.len());
                    for v in &out {
                        for b in &be {
                            let mut w: Vec<Fe> = v.clone();
                            w.push(b.clone());
                            next.push(w);
                        }
                    }
                    out = next;
                }
                Ok(out
                    .into_iter()
                    .map(|mut v| {
                        while v.last().map_or(false, |c| base.is_zero(c)) {
                            v.pop();
                        }
                        Fe::Ext(v)
                    })
                    .collect())
            }
        }
    }

    /// Multiplicative order of a nonzero element of a finite field.
    pub fn multiplicative_order(&self, a: &Fe) -> Option<u128> {
        let q = self.cardinality()?;
        if self.is_zero(a) {
            return None;
        }
        let n = q - 1;
        let mut ord = n;
        for (pr, _) in factor_u128(n) {
            while ord % pr == 0 && self.is_one(&self.pow(a, ord / pr)) {
                ord /= pr;
            }
        }
        Some(ord)
    }

    /// A generator of the multiplicative group of a finite field.
    pub fn primitive_element(&self) -> Option<Fe> {
        let q = self.cardinality()?;
        let mut gen = 0u64;
        loop {
            let cand = self.element_from_index(gen);
            gen += 1;
            if !self.is_zero(&cand) && self.multiplicative_order(&cand) == Some(q - 1) {
                return Some(cand);
            }
        }
    }

    /// Element whose base-p digits are the prime-field coordinates.
    pub(crate) fn element_from_index(&self, mut idx: u64) -> Fe {
        let p = self.characteristic();
        let prime = self.prime_field();
        let n = self.absolute_degree();
        let mut coords = Vec::with_capacity(n);
        for _ in 0..n {
            coords.push(Fe::Mod(idx % p));
            idx /= p;
        }
        self.from_coords(&prime, &coords)
    }

    /// A primitive `n`-th root of unity, if the field has one.
    pub fn primitive_root_of_unity(&self, n: u64) -> Option<Fe> {
        if n == 1 {
            return Some(self.one());
        }
        match self.cardinality() {
            Some(q) => {
                if (q - 1) % n as u128 != 0 {
                    return None;
                }
                let g = self.primitive_element()?;
                Some(self.pow(&g, (q - 1) / n as u128))
            }
            None => {
                if n == 2 {
                    Some(self.from_int(-1))
                } else {
                    // search the small units of the tower
                    self.small_units().into_iter().find(|z| {
                        self.is_one(&self.pow(z, n as u128))
                            && (1..n).all(|k| !self.is_one(&self.pow(z, k as u128)))
                    })
                }
            }
        }
    }

    fn small_units(&self) -> Vec<Fe> {
        let gens = self.level_generators();
        let mut out = vec![self.one(), self.from_int(-1)];
        for g in gens {
            for s in [-1i64, 1] {
                out.push(self.mul(&self.from_int(s), &g));
            }
        }
        out
    }

    /// The rational number underlying a constant of a `QQ`-tower.
    pub fn as_rational(&self, a: &Fe) -> Option<BigRational> {
        match a {
            Fe::Rat(r) => Some(r.clone()),
            Fe::Ext(v) => match v.len() {
                0 => Some(BigRational::zero()),
                1 => self.base()?.as_rational(&v[0]),
                _ => None,
            },
            Fe::Mod(_) => None,
        }
    }

    fn quadratic_radicand(&self, m: &Poly) -> Option<BigRational> {
        if m.degree() != Some(2) || !self.is_zero(&m.0[1]) {
            return None;
        }
        let d = self.as_rational(&self.neg(&m.0[0]))?;
        if d.is_zero() {
            None
        } else {
            Some(d)
        }
    }

    /// Radicands of a multi-quadratic `QQ`-tower, bottom first.
    fn radicands(&self) -> Vec<BigRational> {
        self.tower()
            .iter()
            .skip(1)
            .filter_map(|l| l.base().unwrap().quadratic_radicand(l.modulus().unwrap()))
            .collect()
    }

    /// Kummer test: a rational `d` is a square in `QQ(sqrt(d_1), ...)` iff
    /// `d * prod_{i in S} d_i` is a rational square for some subset `S`.
    fn rational_is_square(&self, d: &BigRational) -> bool {
        let rads = self.radicands();
        (0u32..(1 << rads.len())).any(|mask| {
            let mut x = d.clone();
            for (i, r) in rads.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    x *= r;
                }
            }
            is_rational_square(&x)
        })
    }

    /// Formats an element using the generator names of the tower.
    pub fn format(&self, a: &Fe) -> String {
        match (&*self.0, a) {
            (FieldDesc::Prime(_), Fe::Mod(x)) => x.to_string(),
            (FieldDesc::Rationals, Fe::Rat(r)) => r.to_string(),
            (FieldDesc::Extension { base, var, .. }, Fe::Ext(v)) => {
                if v.is_empty() {
                    return "0".into();
                }
                let mut parts = Vec::new();
                for (i, c) in v.iter().enumerate() {
                    if base.is_zero(c) {
                        continue;
                    }
                    let cs = base.format(c);
                    let atomic = !cs.contains(['+', ' ']) && !cs[1..].contains('-');
                    let coef = if atomic { cs } else { format!("({})", cs) };
                    parts.push(match i {
                        0 => coef,
                        _ => {
                            let mono = if i == 1 { var.clone() } else { format!("{}^{}", var, i) };
                            if base.is_one(c) {
                                mono
                            } else {
                                format!("{}*{}", coef, mono)
                            }
                        }
                    });
                }
                parts.join(" + ")
            }
            _ => panic!("mixed field elements in {}", self),
        }
    }

    pub fn poly_to_string(&self, f: &Poly, var: &str) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in f.0.iter().enumerate().rev() {
            if self.is_zero(c) {
                continue;
            }
            let cs = self.format(c);
            let atomic = !cs.contains(['+', ' ']) && !cs[1..].contains('-');
            let coef = if atomic { cs } else { format!("({})", cs) };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{}^{}", var, i),
            };
            parts.push(if mono.is_empty() {
                coef
            } else if self.is_one(c) {
                mono
            } else {
                format!("{}*{}", coef, mono)
            });
        }
        parts.join(" + ")
    }
}

fn is_rational_square(x: &BigRational) -> bool {
    if x.is_negative() {
        return false;
    }
    let n = x.numer();
    let d = x.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    &(&sn * &sn) == n && &(&sd * &sd) == d
}

pub(crate) fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldDesc::Prime(p) => write!(f, "GF({})", p),
            FieldDesc::Rationals => write!(f, "QQ"),
            FieldDesc::Extension { base, modulus, var } => {
                if let FieldDesc::Prime(p) = &*base.0 {
                    if var == "a" {
                        return write!(
                            f,
                            "GF({}^{}; m={})",
                            p,
                            modulus.degree().unwrap(),
                            base.poly_to_string(modulus, "X")
                        );
                    }
                }
                if !self.is_finite() && var.starts_with("sqrt(") {
                    let rads: Vec<String> =
                        self.radicands().iter().map(|r| format!("sqrt({})", r)).collect();
                    if self.tower().iter().skip(1).all(|l| l.var().unwrap().starts_with("sqrt(")) {
                        return write!(f, "QQ({})", rads.join(", "));
                    }
                }
                write!(f, "{}[{}: {}]", base, var, base.poly_to_string(modulus, "X"))
            }
        }
    }
}
