//! Complete factorization over finite fields: squarefree decomposition,
//! distinct-degree splitting, then equal-degree splitting (Cantor-Zassenhaus,
//! with the trace map in characteristic 2). Linear factors over fields of at
//! most 64 elements are split by plain root enumeration instead.

use super::{Fe, Field, FieldError, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    /// Monic irreducible factors with multiplicity, sorted.
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self, f: &Field) -> Poly {
        let mut acc = f.pconst(self.unit.clone());
        for (g, m) in &self.factors {
            acc = f.pmul(&acc, &f.ppow(g, *m));
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Small deterministic generator for the splitting trials.
struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

impl Field {
    /// `a^(1/p)` in a finite field of characteristic `p`.
    pub fn pth_root(&self, a: &Fe) -> Fe {
        let q = self.cardinality().expect("finite field");
        self.pow(a, q / self.characteristic() as u128)
    }

    pub fn factor(&self, f: &Poly) -> Result<Factorization, FieldError> {
        let lead = f.lead().ok_or(FieldError::ZeroPolynomial)?.clone();
        let monic = self.pmonic(f);
        if monic.degree() == Some(0) {
            return Ok(Factorization { unit: lead, factors: vec![] });
        }
        if !self.is_finite() {
            if monic.degree() == Some(1) {
                return Ok(Factorization { unit: lead, factors: vec![(monic, 1)] });
            }
            if monic.degree() == Some(2) {
                let factors = match self.quadratic_roots(&monic) {
                    Some(r) if r.len() == 1 => vec![(self.plinear(&r[0]), 2)],
                    Some(r) => {
                        let mut v: Vec<(Poly, usize)> =
                            r.iter().map(|x| (self.plinear(x), 1)).collect();
                        v.sort();
                        v
                    }
                    None => vec![(monic, 1)],
                };
                return Ok(Factorization { unit: lead, factors });
            }
            return Err(FieldError::Unsupported(
                self.to_string(),
                "factorization of degree >= 3 over characteristic 0".into(),
            ));
        }
        let mut factors: Vec<(Poly, usize)> = Vec::new();
        for (sqf, mult) in self.squarefree_decomposition(&monic) {
            for (g, d) in self.distinct_degree(&sqf) {
                for h in self.equal_degree(&g, d) {
                    factors.push((h, mult));
                }
            }
        }
        factors.sort();
        // merge equal factors that came from different squarefree layers
        let mut merged: Vec<(Poly, usize)> = Vec::new();
        for (g, m) in factors {
            match merged.last_mut() {
                Some((h, k)) if *h == g => *k += m,
                _ => merged.push((g, m)),
            }
        }
        Ok(Factorization { unit: lead, factors: merged })
    }

    pub fn is_irreducible(&self, f: &Poly) -> Result<bool, FieldError> {
        Ok(self.factor(f)?.is_irreducible())
    }

    /// Roots in the field, without multiplicity, sorted.
    pub fn proots(&self, f: &Poly) -> Result<Vec<Fe>, FieldError> {
        let fac = self.factor(f)?;
        let mut r: Vec<Fe> = fac
            .factors
            .iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, _)| self.neg(&g.0[0]))
            .collect();
        r.sort();
        Ok(r)
    }

    /// `[(g_i, i)]` with `f = prod g_i^i`, each `g_i` squarefree (monic input).
    fn squarefree_decomposition(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let p = self.characteristic() as usize;
        let one = self.pconst(self.one());
        let mut out = Vec::new();
        let df = self.pderiv(f);
        if df.is_zero() {
            // f is a p-th power
            let root = self.poly_pth_root(f);
            for (g, m) in self.squarefree_decomposition(&root) {
                out.push((g, m * p));
            }
            return out;
        }
        let mut c = self.pgcd(f, &df);
        let mut w = self.pdiv_exact(f, &c);
        let mut i = 1;
        while w != one {
            let y = self.pgcd(&w, &c);
            let fac = self.pdiv_exact(&w, &y);
            if fac != one {
                out.push((fac, i));
            }
            w = y;
            c = self.pdiv_exact(&c, &w);
            i += 1;
        }
        if c != one {
            let root = self.poly_pth_root(&c);
            for (g, m) in self.squarefree_decomposition(&root) {
                out.push((g, m * p));
            }
        }
        out
    }

    fn poly_pth_root(&self, f: &Poly) -> Poly {
        let p = self.characteristic() as usize;
        Poly::new(f.0.iter().step_by(p).map(|c| self.pth_root(c)).collect())
    }

    /// Splits a squarefree monic polynomial into products of irreducibles
    /// of equal degree.
    fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let q = self.cardinality().unwrap();
        let x = self.pmonomial(1);
        let one = self.pconst(self.one());
        let mut out = Vec::new();
        let mut rest = f.clone();
        let mut h = self.prem(&x, &rest);
        let mut d = 1;
        while rest.degree().unwrap_or(0) >= 2 * d {
            h = self.ppow_mod(&h, q, &rest);
            let g = self.pgcd(&self.psub(&h, &x), &rest);
            if g != one {
                rest = self.pdiv_exact(&rest, &g);
                h = self.prem(&h, &rest);
                out.push((g, d));
            }
            d += 1;
        }
        if rest.degree().unwrap_or(0) > 0 {
            let dr = rest.degree().unwrap();
            out.push((rest, dr));
        }
        out
    }

    fn equal_degree(&self, f: &Poly, d: usize) -> Vec<Poly> {
        let n = f.degree().unwrap();
        if n == d {
            return vec![f.clone()];
        }
        let q = self.cardinality().unwrap();
        if d == 1 && q <= 64 {
            let mut roots = self.proots_enum(f).unwrap();
            roots.sort();
            return roots.iter().map(|r| self.plinear(r)).collect();
        }
        let mut rng = XorShift(0x9E37_79B9_7F4A_7C15 ^ (n as u64) << 8 ^ d as u64);
        let one = self.pconst(self.one());
        loop {
            let a = Poly::new(
                (0..n)
                    .map(|_| self.element_from_index(rng.next() % q.min(u64::MAX as u128) as u64))
                    .collect(),
            );
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if self.characteristic() == 2 {
                // trace map T(a) = a + a^2 + ... + a^(2^(k d - 1))
                let k = self.absolute_degree() * d;
                let mut t = self.prem(&a, f);
                let mut acc = t.clone();
                for _ in 1..k {
                    t = self.prem(&self.pmul(&t, &t), f);
                    acc = self.padd(&acc, &t);
                }
                acc
            } else {
                let e = (q.pow(d as u32) - 1) / 2;
                self.psub(&self.ppow_mod(&a, e, f), &one)
            };
            let g = self.pgcd(&b, f);
            if g != one && g.degree() < f.degree() {
                let h = self.pdiv_exact(f, &g);
                let mut out = self.equal_degree(&g, d);
                out.extend(self.equal_degree(&h, d));
                out.sort();
                return out;
            }
        }
    }
}

/// The first monic irreducible of degree `k` over a finite field, in index order.
pub(crate) fn find_irreducible(base: &Field, k: usize) -> Poly {
    let q = base.cardinality().unwrap() as u64;
    let mut idx = 0u64;
    loop {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut r = idx;
        for _ in 0..k {
            coeffs.push(base.element_from_index(r % q));
            r /= q;
        }
        coeffs.push(base.one());
        let f = Poly::new(coeffs);
        if !base.is_zero(&f.0[0]) && base.is_irreducible(&f).unwrap() {
            return f;
        }
        idx += 1;
    }
}

/// Conjugates `a, a^p, a^(p^2), ...` of a finite-field element.
pub fn frobenius_orbit(field: &Field, a: &Fe) -> Result<Vec<Fe>, FieldError> {
    if !field.is_finite() {
        return Err(FieldError::NotFinite(field.to_string()));
    }
    let p = field.characteristic() as u128;
    let mut out = vec![a.clone()];
    let mut x = field.pow(a, p);
    while x != *a {
        out.push(x.clone());
        x = field.pow(&x, p);
    }
    Ok(out)
}
