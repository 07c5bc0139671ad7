//! Radicals and small linear algebra.

use num_rational::BigRational;
use num_traits::Signed;

use super::{Fe, Field, FieldDesc, FieldError, Poly};

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl Field {
    /// A square root of `a`, if one exists in the field.
    pub fn sqrt(&self, a: &Fe) -> Result<Option<Fe>, FieldError> {
        if self.is_zero(a) {
            return Ok(Some(self.zero()));
        }
        if self.is_finite() {
            let f = Poly::new(vec![self.neg(a), self.zero(), self.one()]);
            return Ok(self.proots(&f)?.into_iter().next());
        }
        Ok(self.sqrt_char0(a))
    }

    fn sqrt_char0(&self, a: &Fe) -> Option<Fe> {
        match (self.desc(), a) {
            (FieldDesc::Rationals, Fe::Rat(r)) => rational_sqrt(r).map(Fe::Rat),
            (FieldDesc::Extension { base, modulus, .. }, Fe::Ext(v)) => {
                let d = base.neg(&modulus.0[0]);
                let x = v.first().cloned().unwrap_or_else(|| base.zero());
                let y = v.get(1).cloned().unwrap_or_else(|| base.zero());
                let pack = |u: Fe, w: Fe| Fe::Ext(Poly::new(vec![u, w]).0);
                let mut cands = Vec::new();
                if base.is_zero(&y) {
                    if let Some(u) = base.sqrt_char0(&x) {
                        cands.push(pack(u, base.zero()));
                    }
                    if let Some(w) = base.sqrt_char0(&base.div(&x, &d).ok()?) {
                        cands.push(pack(base.zero(), w));
                    }
                } else {
                    // (u + w r)^2 = x + y r with r^2 = d
                    let disc = base.sub(&base.mul(&x, &x), &base.mul(&d, &base.mul(&y, &y)));
                    if let Some(s) = base.sqrt_char0(&disc) {
                        let half = base.inv(&base.from_int(2)).ok()?;
                        for sg in [s.clone(), base.neg(&s)] {
                            let u2 = base.mul(&base.add(&x, &sg), &half);
                            if let Some(u) = base.sqrt_char0(&u2) {
                                if base.is_zero(&u) {
                                    continue;
                                }
                                let w = base.div(&y, &base.mul(&base.from_int(2), &u)).ok()?;
                                cands.push(pack(u, w));
                            }
                        }
                    }
                }
                cands.into_iter().find(|c| self.mul(c, c) == *a)
            }
            _ => None,
        }
    }

    /// All `n`-th roots of `a` in the field, sorted. Over characteristic 0
    /// only powers of two are supported.
    pub fn nth_roots(&self, a: &Fe, n: u64) -> Result<Vec<Fe>, FieldError> {
        if n == 1 {
            return Ok(vec![a.clone()]);
        }
        if self.is_finite() {
            let mut c = vec![self.zero(); n as usize + 1];
            c[0] = self.neg(a);
            c[n as usize] = self.one();
            return self.proots(&Poly::new(c));
        }
        if !n.is_power_of_two() {
            return Err(FieldError::Unsupported(
                self.to_string(),
                format!("{}-th roots in characteristic 0", n),
            ));
        }
        let mut cur = vec![a.clone()];
        let mut k = n;
        while k > 1 {
            let mut next = Vec::new();
            for c in &cur {
                if let Some(s) = self.sqrt_char0(c) {
                    if self.is_zero(&s) {
                        next.push(s);
                    } else {
                        next.push(self.neg(&s));
                        next.push(s);
                    }
                }
            }
            cur = next;
            k /= 2;
        }
        cur.sort();
        cur.dedup();
        Ok(cur)
    }

    /// Monic quadratic over a characteristic-0 tower: its roots, if any.
    pub(crate) fn quadratic_roots(&self, f: &Poly) -> Option<Vec<Fe>> {
        let (c, b) = (&f.0[0], &f.0[1]);
        let half = self.inv(&self.from_int(2)).ok()?;
        let hb = self.mul(b, &half);
        let disc = self.sub(&self.mul(&hb, &hb), c);
        let s = self.sqrt_char0(&disc)?;
        let mut r = vec![self.sub(&s, &hb), self.sub(&self.neg(&s), &hb)];
        r.sort();
        r.dedup();
        Some(r)
    }

    /// Basis of the right kernel `{x : M x = 0}` of a matrix given by rows,
    /// in reduced form (each vector has a 1 at its own free column).
    pub fn kernel(&self, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
        let mut m: Vec<Vec<Fe>> = rows.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..m.len()).find(|&i| !self.is_zero(&m[i][c])) else {
                continue;
            };
            m.swap(r, p);
            let inv = self.inv(&m[r][c]).unwrap();
            m[r] = m[r].iter().map(|x| self.mul(x, &inv)).collect();
            for i in 0..m.len() {
                if i != r && !self.is_zero(&m[i][c]) {
                    let f = m[i][c].clone();
                    m[i] = (0..ncols)
                        .map(|k| self.sub(&m[i][k], &self.mul(&f, &m[r][k])))
                        .collect();
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut out = Vec::new();
        for free in (0..ncols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.zero(); ncols];
            v[free] = self.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = self.neg(&m[i][free]);
            }
            out.push(v);
        }
        out
    }
}
