//! Dense univariate polynomials over a [`Field`].

use super::{Fe, Field, FieldError};

/// Coefficients low to high; trailing zeros are trimmed by the constructors
/// and by every arithmetic routine, so the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(pub Vec<Fe>);

fn trim(v: &mut Vec<Fe>) {
    while let Some(l) = v.last() {
        let zero = match l {
            Fe::Mod(x) => *x == 0,
            Fe::Rat(r) => num_traits::Zero::is_zero(r),
            Fe::Ext(e) => e.is_empty(),
        };
        if zero {
            v.pop();
        } else {
            break;
        }
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        trim(&mut coeffs);
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Fe> {
        self.0.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&Fe> {
        self.0.get(i)
    }
}

pub(crate) fn vec_add(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let mut out: Vec<Fe> = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn vec_mul(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder modulo a monic polynomial.
pub(crate) fn vec_rem_monic(f: &Field, mut a: Vec<Fe>, m: &[Fe]) -> Vec<Fe> {
    let d = m.len() - 1;
    while a.len() > d {
        let lead = a.pop().unwrap();
        if f.is_zero(&lead) {
            continue;
        }
        let shift = a.len() - d;
        for (i, c) in m.iter().take(d).enumerate() {
            a[shift + i] = f.sub(&a[shift + i], &f.mul(&lead, c));
        }
    }
    trim(&mut a);
    a
}

impl Field {
    pub fn padd(&self, a: &Poly, b: &Poly) -> Poly {
        Poly(vec_add(self, &a.0, &b.0))
    }

    pub fn pneg(&self, a: &Poly) -> Poly {
        Poly(a.0.iter().map(|c| self.neg(c)).collect())
    }

    pub fn psub(&self, a: &Poly, b: &Poly) -> Poly {
        self.padd(a, &self.pneg(b))
    }

    pub fn pmul(&self, a: &Poly, b: &Poly) -> Poly {
        Poly(vec_mul(self, &a.0, &b.0))
    }

    pub fn pscale(&self, a: &Poly, c: &Fe) -> Poly {
        Poly::new(a.0.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn pconst(&self, c: Fe) -> Poly {
        Poly::new(vec![c])
    }

    /// `X^n`.
    pub fn pmonomial(&self, n: usize) -> Poly {
        let mut v = vec![self.zero(); n];
        v.push(self.one());
        Poly(v)
    }

    /// `X - c`.
    pub fn plinear(&self, c: &Fe) -> Poly {
        Poly::new(vec![self.neg(c), self.one()])
    }

    pub fn pmonic(&self, a: &Poly) -> Poly {
        match a.lead() {
            Some(l) => self.pscale(a, &self.inv(l).unwrap()),
            None => Poly::zero(),
        }
    }

    pub fn pdivrem(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly), FieldError> {
        let db = b.degree().ok_or(FieldError::DivisionByZero)?;
        let linv = self.inv(b.lead().unwrap())?;
        let mut r = a.0.clone();
        if r.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut q = vec![self.zero(); r.len() - db];
        while r.len() > db {
            let lead = r.pop().unwrap();
            if self.is_zero(&lead) {
                continue;
            }
            let c = self.mul(&lead, &linv);
            let shift = r.len() - db;
            q[shift] = c.clone();
            for (i, bc) in b.0.iter().take(db).enumerate() {
                r[shift + i] = self.sub(&r[shift + i], &self.mul(&c, bc));
            }
        }
        trim(&mut r);
        Ok((Poly::new(q), Poly(r)))
    }

    pub fn prem(&self, a: &Poly, b: &Poly) -> Poly {
        self.pdivrem(a, b).expect("nonzero divisor").1
    }

    pub fn pdiv_exact(&self, a: &Poly, b: &Poly) -> Poly {
        let (q, r) = self.pdivrem(a, b).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn pgcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.prem(&x, &y);
            x = y;
            y = r;
        }
        self.pmonic(&x)
    }

    /// `(g, s, t)` with `s*a + t*b = g`, `g` monic gcd.
    pub fn pxgcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.pconst(self.one()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), self.pconst(self.one()));
        while !r1.is_zero() {
            let (q, r) = self.pdivrem(&r0, &r1).unwrap();
            let s = self.psub(&s0, &self.pmul(&q, &s1));
            let t = self.psub(&t0, &self.pmul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead() {
            Some(l) => {
                let li = self.inv(l).unwrap();
                (self.pscale(&r0, &li), self.pscale(&s0, &li), self.pscale(&t0, &li))
            }
            None => (r0, s0, t0),
        }
    }

    pub fn pderiv(&self, a: &Poly) -> Poly {
        Poly::new(
            a.0.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.mul(&self.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn peval(&self, a: &Poly, x: &Fe) -> Fe {
        a.0.iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    pub fn ppow_mod(&self, a: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.prem(a, m);
        let mut r = self.prem(&self.pconst(self.one()), m);
        while e > 0 {
            if e & 1 == 1 {
                r = self.prem(&self.pmul(&r, &base), m);
            }
            base = self.prem(&self.pmul(&base, &base), m);
            e >>= 1;
        }
        r
    }

    pub fn ppow(&self, a: &Poly, e: usize) -> Poly {
        (0..e).fold(self.pconst(self.one()), |acc, _| self.pmul(&acc, a))
    }

    /// `f(g(X))`.
    pub fn pcompose(&self, f: &Poly, g: &Poly) -> Poly {
        f.0.iter()
            .rev()
            .fold(Poly::zero(), |acc, c| self.padd(&self.pmul(&acc, g), &self.pconst(c.clone())))
    }

    /// Resultant via the Euclidean remainder sequence.
    pub fn presultant(&self, a: &Poly, b: &Poly) -> Fe {
        let (Some(mut da), Some(mut db)) = (a.degree(), b.degree()) else {
            return self.zero();
        };
        let (mut a, mut b) = (a.clone(), b.clone());
        let mut res = self.one();
        loop {
            if db == 0 {
                return self.mul(&res, &self.pow(&b.0[0], da as u128));
            }
            let r = self.prem(&a, &b);
            let Some(dr) = r.degree() else {
                return self.zero();
            };
            // res(a,b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
            if da % 2 == 1 && db % 2 == 1 {
                res = self.neg(&res);
            }
            res = self.mul(&res, &self.pow(b.lead().unwrap(), (da - dr) as u128));
            a = b;
            b = r;
            da = db;
            db = dr;
        }
    }

    /// Roots in the field by exhaustive search (finite fields only).
    pub fn proots_enum(&self, a: &Poly) -> Result<Vec<Fe>, FieldError> {
        Ok(self
            .elements()?
            .into_iter()
            .filter(|x| self.is_zero(&self.peval(a, x)))
            .collect())
    }
}
