//! Iterated Laurent series `k((t_1))...((t_m))` and their monomial
//! extensions `k'((t^Γ))` for lattices `Γ ⊇ Z^m`.
//!
//! Coordinate 0 of a grade belongs to the outermost (dominant) variable. A
//! series is a finite map grade -> coefficient together with a lexicographic
//! cutoff `P`: coefficients at grades `>= P` are unknown. `None` means the
//! series is exact.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exact_fields::{Fe, Field, FieldError};
use crate::graded_core::{GElem, GradedError, GradedField, MonomialMap};
use crate::value_groups::{ramification_order, HullVector, Lattice, Rat, Value};

pub const DEFAULT_PRECISION: i64 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("valuation is indeterminate: no known term below the cutoff {0}")]
    Indeterminate(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("grade {0} is not in the value group")]
    NotInLattice(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesField {
    residue: Field,
    lattice: Lattice,
    /// Variable names in text order, innermost first; `vars[k]` carries
    /// coordinate `m - 1 - k`.
    vars: Vec<String>,
    prec: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Series {
    pub terms: BTreeMap<HullVector, Fe>,
    pub cutoff: Option<HullVector>,
}

fn min_cut(a: &Option<HullVector>, b: &Option<HullVector>) -> Option<HullVector> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

impl Series {
    pub fn is_exact(&self) -> bool {
        self.cutoff.is_none()
    }

    pub fn leading(&self) -> Option<(&HullVector, &Fe)> {
        self.terms.iter().next()
    }

    /// True when every coefficient below `p` is known to vanish.
    pub fn known_zero_below(&self, p: &HullVector) -> bool {
        self.terms.keys().next().map_or(true, |g| g >= p)
            && self.cutoff.as_ref().map_or(true, |c| c >= p)
    }

    /// Lowest grade that may carry a nonzero coefficient; `None` for exact 0.
    fn low(&self) -> Option<HullVector> {
        self.terms.keys().next().cloned().or_else(|| self.cutoff.clone())
    }
}

impl SeriesField {
    /// `residue((t_1))...((t_m))` with the given variable names, innermost first.
    pub fn laurent(residue: Field, vars: &[&str]) -> Self {
        let m = vars.len();
        SeriesField {
            residue,
            lattice: Lattice::standard(m),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            prec: DEFAULT_PRECISION,
        }
    }

    /// Monomial field `residue((t^Γ))` over the same variables as `self`.
    pub fn with_data(&self, residue: Field, lattice: Lattice) -> Self {
        SeriesField {
            residue,
            lattice,
            vars: self.vars.clone(),
            prec: self.prec,
        }
    }

    pub fn with_precision(mut self, n: i64) -> Self {
        self.prec = n;
        self
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn residue(&self) -> &Field {
        &self.residue
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Coordinate carried by a variable name.
    pub fn var_coordinate(&self, name: &str) -> Option<usize> {
        let k = self.vars.iter().position(|v| v == name)?;
        Some(self.rank() - 1 - k)
    }

    /// The associated graded field `GE`.
    pub fn graded(&self) -> GradedField {
        GradedField::new(self.residue.clone(), self.lattice.clone())
    }

    /// Default cutoff `(N, ..., N)`.
    pub fn default_cutoff(&self) -> HullVector {
        HullVector::splat(self.rank(), Rat::from(self.prec))
    }

    pub fn zero(&self) -> Series {
        Series::default()
    }

    pub fn one(&self) -> Series {
        self.constant(self.residue.one())
    }

    pub fn constant(&self, c: Fe) -> Series {
        self.term(c, HullVector::zero(self.rank()))
    }

    fn term(&self, c: Fe, g: HullVector) -> Series {
        let mut terms = BTreeMap::new();
        if !self.residue.is_zero(&c) {
            terms.insert(g, c);
        }
        Series { terms, cutoff: None }
    }

    pub fn monomial(&self, c: Fe, g: &HullVector) -> Result<Series, SeriesError> {
        if !self.lattice.contains(g) {
            return Err(SeriesError::NotInLattice(g.to_string()));
        }
        Ok(self.term(c, g.clone()))
    }

    /// The variable carrying coordinate `i`.
    pub fn var(&self, i: usize) -> Series {
        self.term(self.residue.one(), HullVector::unit(self.rank(), i, 1, 1))
    }

    /// Builds a series, dropping zero coefficients and terms at or above the
    /// cutoff.
    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = (HullVector, Fe)>,
        cutoff: Option<HullVector>,
    ) -> Result<Series, SeriesError> {
        let mut out = Series { terms: BTreeMap::new(), cutoff: cutoff.clone() };
        for (g, c) in terms {
            if !self.lattice.contains(&g) {
                return Err(SeriesError::NotInLattice(g.to_string()));
            }
            self.residue.check(&c)?;
            if cutoff.as_ref().map_or(false, |p| g >= *p) {
                continue;
            }
            let v = match out.terms.get(&g) {
                Some(a) => self.residue.add(a, &c),
                None => c,
            };
            if self.residue.is_zero(&v) {
                out.terms.remove(&g);
            } else {
                out.terms.insert(g, v);
            }
        }
        Ok(out)
    }

    pub fn contains(&self, x: &Series) -> bool {
        x.terms
            .iter()
            .all(|(g, c)| self.lattice.contains(g) && self.residue.check(c).is_ok())
    }

    pub fn valuation(&self, x: &Series) -> Result<Value, SeriesError> {
        match (x.leading(), &x.cutoff) {
            (Some((g, _)), _) => Ok(Value::Finite(g.clone())),
            (None, None) => Ok(Value::Top),
            (None, Some(c)) => Err(SeriesError::Indeterminate(c.to_string())),
        }
    }

    /// Leading term as a homogeneous element of `GE`.
    pub fn residue_image(&self, x: &Series) -> Result<GElem, SeriesError> {
        match x.leading() {
            Some((g, c)) => Ok(self.graded().monomial(c.clone(), g)?),
            None => match &x.cutoff {
                Some(c) => Err(SeriesError::Indeterminate(c.to_string())),
                None => Err(SeriesError::DivisionByZero),
            },
        }
    }

    /// Lift of a graded element: each homogeneous term becomes a monomial.
    pub fn lift(&self, x: &GElem) -> Series {
        Series { terms: x.0.clone(), cutoff: None }
    }

    pub fn truncate(&self, x: &Series, p: &HullVector) -> Series {
        let cutoff = min_cut(&x.cutoff, &Some(p.clone()));
        let c = cutoff.as_ref().unwrap();
        Series {
            terms: x.terms.range(..c.clone()).map(|(g, v)| (g.clone(), v.clone())).collect(),
            cutoff,
        }
    }

    /// Equality on every grade known in both series.
    pub fn agree_to_precision(&self, x: &Series, y: &Series) -> bool {
        let d = self.sub(x, y);
        d.terms.is_empty()
    }

    pub fn add(&self, x: &Series, y: &Series) -> Series {
        let cutoff = min_cut(&x.cutoff, &y.cutoff);
        let mut terms = BTreeMap::new();
        for (g, c) in x.terms.iter().chain(y.terms.iter()) {
            if cutoff.as_ref().map_or(false, |p| g >= p) {
                continue;
            }
            let v = match terms.get(g) {
                Some(a) => self.residue.add(a, c),
                None => c.clone(),
            };
            if self.residue.is_zero(&v) {
                terms.remove(g);
            } else {
                terms.insert(g.clone(), v);
            }
        }
        Series { terms, cutoff }
    }

    pub fn neg(&self, x: &Series) -> Series {
        Series {
            terms: x.terms.iter().map(|(g, c)| (g.clone(), self.residue.neg(c))).collect(),
            cutoff: x.cutoff.clone(),
        }
    }

    pub fn sub(&self, x: &Series, y: &Series) -> Series {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &Series, c: &Fe) -> Series {
        if self.residue.is_zero(c) {
            return Series { terms: BTreeMap::new(), cutoff: x.cutoff.clone() };
        }
        Series {
            terms: x.terms.iter().map(|(g, a)| (g.clone(), self.residue.mul(a, c))).collect(),
            cutoff: x.cutoff.clone(),
        }
    }

    /// Multiplication by the monomial `y^g` (shift of all grades).
    pub fn shift(&self, x: &Series, g: &HullVector) -> Series {
        Series {
            terms: x.terms.iter().map(|(h, a)| (h.add(g), a.clone())).collect(),
            cutoff: x.cutoff.as_ref().map(|c| c.add(g)),
        }
    }

    pub fn mul(&self, x: &Series, y: &Series) -> Series {
        let (lx, ly) = match (x.low(), y.low()) {
            (Some(a), Some(b)) => (a, b),
            _ => return self.zero(),
        };
        let cx = x.cutoff.as_ref().map(|c| c.add(&ly));
        let cy = y.cutoff.as_ref().map(|c| c.add(&lx));
        let cutoff = min_cut(&cx, &cy);
        let mut terms: BTreeMap<HullVector, Fe> = BTreeMap::new();
        for (g, a) in &x.terms {
            for (h, b) in &y.terms {
                let k = g.add(h);
                if cutoff.as_ref().map_or(false, |p| k >= *p) {
                    break;
                }
                let p = self.residue.mul(a, b);
                match terms.entry(k) {
                    Entry::Occupied(mut o) => {
                        let v = self.residue.add(o.get(), &p);
                        *o.get_mut() = v;
                    }
                    Entry::Vacant(v) => {
                        v.insert(p);
                    }
                }
            }
        }
        terms.retain(|_, c| !self.residue.is_zero(c));
        Series { terms, cutoff }
    }

    pub fn pow(&self, x: &Series, e: u32) -> Series {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, x);
        }
        r
    }

    /// Largest relative cutoff `<= r` reachable by multiples of `mu > 0`: when
    /// `k·mu` can never pass `r`, the cutoff collapses to
    /// `(0, ..., 0, N, ..., N)` starting at the leading index of `mu`.
    pub fn reachable(&self, r: &HullVector, mu: &HullVector) -> HullVector {
        let i = mu.leading_index().expect("positive increment");
        match r.coords()[..i].iter().find(|c| **c != Rat::from(0)) {
            Some(c) if *c > Rat::from(0) => {
                let mut v = vec![Rat::from(0); self.rank()];
                for c in v.iter_mut().skip(i) {
                    *c = Rat::from(self.prec);
                }
                HullVector(v)
            }
            _ => r.clone(),
        }
    }

    /// Inverse, accurate below the absolute cutoff `target` (default cutoff
    /// when `None`), further limited by the precision of `x`.
    pub fn inv(&self, x: &Series, target: Option<&HullVector>) -> Result<Series, SeriesError> {
        let (g, a) = match x.leading() {
            Some((g, a)) => (g.clone(), a.clone()),
            None => {
                return Err(match &x.cutoff {
                    Some(c) => SeriesError::Indeterminate(c.to_string()),
                    None => SeriesError::DivisionByZero,
                })
            }
        };
        let ainv = self.residue.inv(&a)?;
        // x = a y^g (1 + u)
        let mut u = self.scale(&self.shift(x, &g.neg()), &ainv);
        u.terms.remove(&HullVector::zero(self.rank()));
        let target = target.cloned().unwrap_or_else(|| self.default_cutoff());
        let mut rel = target.add(&g);
        if let Some(c) = &u.cutoff {
            rel = rel.min(c.clone());
        }
        if u.terms.is_empty() {
            let mut r = self.term(ainv, g.neg());
            if u.cutoff.is_some() {
                r.cutoff = Some(rel.sub(&g));
            }
            return Ok(r);
        }
        let mu = u.leading().unwrap().0.clone();
        let rel = self.reachable(&rel, &mu);
        let u = Series { terms: u.terms, cutoff: None };
        let one = self.one();
        let mut w = one.clone();
        loop {
            let next = self.truncate(&self.sub(&one, &self.mul(&u, &w)), &rel);
            let next = Series { terms: next.terms, cutoff: None };
            if next == w {
                break;
            }
            w = next;
        }
        w.cutoff = Some(rel);
        Ok(self.scale(&self.shift(&w, &g.neg()), &ainv))
    }

    pub fn div(
        &self,
        x: &Series,
        y: &Series,
        target: Option<&HullVector>,
    ) -> Result<Series, SeriesError> {
        let vx = x.low().unwrap_or_else(|| HullVector::zero(self.rank()));
        let t = target.cloned().unwrap_or_else(|| self.default_cutoff());
        Ok(self.mul(x, &self.inv(y, Some(&t.sub(&vx)))?))
    }

    /// `E(t_i^(1/e))`: the lattice grows by `e_i/e`, the residue is unchanged.
    pub fn adjoin_ramified(&self, i: usize, e: u64) -> Result<SeriesExtension, SeriesError> {
        if e == 0 || i >= self.rank() {
            return Err(SeriesError::Invalid("adjoin_ramified needs e >= 1 and a valid variable".into()));
        }
        let h = HullVector::unit(self.rank(), i, 1, e as i64);
        let top = self.with_data(self.residue.clone(), self.lattice.extend(&[h.clone()]));
        // degree of the irreducible factor of X^e - t_i picked up by the root
        let degree = ramification_order(&h, &self.lattice) as usize;
        SeriesExtension::new(self, &top, degree)
    }

    /// Inertial extension with a larger residue field (`self.residue` must be
    /// a level of `residue`).
    pub fn make_inertial(&self, residue: &Field) -> Result<SeriesExtension, SeriesError> {
        let degree = residue.degree_over(&self.residue).ok_or_else(|| {
            SeriesError::Invalid(format!("{} does not contain {}", residue, self.residue))
        })?;
        let top = self.with_data(residue.clone(), self.lattice.clone());
        SeriesExtension::new(self, &top, degree)
    }

    // ---- text ----

    fn monomial_string(&self, g: &HullVector) -> String {
        let m = self.rank();
        let mut parts = Vec::new();
        for (k, v) in self.vars.iter().enumerate() {
            let c = g.coords()[m - 1 - k];
            if c == Rat::from(0) {
                continue;
            }
            parts.push(if c == Rat::from(1) {
                v.clone()
            } else if c.is_integer() && c > Rat::from(0) {
                format!("{}^{}", v, c)
            } else {
                format!("{}^({})", v, c)
            });
        }
        parts.join("*")
    }

    pub fn format(&self, x: &Series) -> String {
        let mut parts = Vec::new();
        for (g, c) in &x.terms {
            let mono = self.monomial_string(g);
            let cs = self.residue.format(c);
            let atomic = !cs.contains(['+', ' ']) && !cs[1..].contains('-');
            let cs = if atomic { cs } else { format!("({})", cs) };
            parts.push(if mono.is_empty() {
                cs
            } else if self.residue.is_one(c) {
                mono
            } else {
                format!("{}*{}", cs, mono)
            });
        }
        if let Some(c) = &x.cutoff {
            let mono = self.monomial_string(c);
            parts.push(format!("O({})", if mono.is_empty() { "1".into() } else { mono }));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Polynomials over a series field, coefficients lowest degree first.
pub type SPoly = Vec<Series>;

impl SeriesField {
    /// Drops trailing coefficients that are exactly zero.
    pub fn ptrim(&self, mut f: SPoly) -> SPoly {
        while f.last().map_or(false, |c| c.terms.is_empty() && c.is_exact()) {
            f.pop();
        }
        f
    }

    pub fn padd(&self, f: &[Series], g: &[Series]) -> SPoly {
        let z = self.zero();
        (0..f.len().max(g.len()))
            .map(|i| self.add(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z)))
            .collect()
    }

    pub fn psub(&self, f: &[Series], g: &[Series]) -> SPoly {
        let z = self.zero();
        (0..f.len().max(g.len()))
            .map(|i| self.sub(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z)))
            .collect()
    }

    pub fn pmul(&self, f: &[Series], g: &[Series]) -> SPoly {
        if f.is_empty() || g.is_empty() {
            return vec![];
        }
        let mut out = vec![self.zero(); f.len() + g.len() - 1];
        for (i, a) in f.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(a, b));
            }
        }
        out
    }

    pub fn pscale(&self, f: &[Series], c: &Series) -> SPoly {
        f.iter().map(|a| self.mul(a, c)).collect()
    }

    pub fn peval(&self, f: &[Series], x: &Series) -> Series {
        f.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    pub fn pderiv(&self, f: &[Series]) -> SPoly {
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.scale(c, &self.residue.from_int(i as i64)))
            .collect()
    }

    pub fn ptruncate(&self, f: &[Series], p: &HullVector) -> SPoly {
        f.iter().map(|c| self.truncate(c, p)).collect()
    }

    /// Division by `b` whose leading coefficient is taken to be 1.
    pub fn pdivrem_monic(&self, a: &[Series], b: &[Series]) -> (SPoly, SPoly) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (vec![], a.to_vec());
        }
        let mut r = a.to_vec();
        let mut q = vec![self.zero(); a.len() - db];
        for i in (db..a.len()).rev() {
            let c = r[i].clone();
            for (j, bj) in b.iter().enumerate().take(db) {
                r[i - db + j] = self.sub(&r[i - db + j], &self.mul(&c, bj));
            }
            q[i - db] = c;
        }
        r.truncate(db);
        (q, r)
    }

    pub fn pformat(&self, f: &[Series]) -> String {
        let parts: Vec<String> = f
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !(c.terms.is_empty() && c.is_exact()))
            .map(|(i, c)| {
                let cs = self.format(c);
                let cs = if c.terms.len() + c.cutoff.is_some() as usize > 1 {
                    format!("({})", cs)
                } else {
                    cs
                };
                let x = match i {
                    0 => return cs,
                    1 => "X".to_string(),
                    _ => format!("X^{}", i),
                };
                if *c == self.one() {
                    x
                } else {
                    format!("{}*{}", cs, x)
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for SeriesField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)?;
        for v in &self.vars {
            write!(f, "(({}))", v)?;
        }
        if self.lattice != Lattice::standard(self.rank()) {
            write!(f, " with value group {}", self.lattice)?;
        }
        Ok(())
    }
}

/// Ring map between series fields induced by a monomial map of the graded
/// data; the cutoff is unchanged because grades are preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMap {
    pub source: SeriesField,
    pub target: SeriesField,
    pub map: MonomialMap,
}

impl SeriesMap {
    pub fn new(source: &SeriesField, target: &SeriesField, map: MonomialMap) -> Self {
        assert_eq!(map.source, source.graded());
        assert_eq!(map.target, target.graded());
        SeriesMap { source: source.clone(), target: target.clone(), map }
    }

    pub fn identity(f: &SeriesField) -> Self {
        SeriesMap::new(f, f, MonomialMap::identity(&f.graded()))
    }

    pub fn apply(&self, x: &Series) -> Series {
        Series {
            terms: x.terms.iter().map(|(g, c)| (g.clone(), self.map.apply_term(g, c))).collect(),
            cutoff: x.cutoff.clone(),
        }
    }

    pub fn apply_poly(&self, f: &[Series]) -> Vec<Series> {
        f.iter().map(|c| self.apply(c)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SeriesMap) -> SeriesMap {
        SeriesMap::new(&other.source, &self.target, self.map.compose(&other.map))
    }
}

/// Finite extension of series fields with its degree as computed from the
/// defining polynomials.
#[derive(Debug, Clone)]
pub struct SeriesExtension {
    pub base: SeriesField,
    pub top: SeriesField,
    pub embed: SeriesMap,
    pub degree: usize,
}

impl SeriesExtension {
    fn new(base: &SeriesField, top: &SeriesField, degree: usize) -> Result<Self, SeriesError> {
        let map = MonomialMap::inclusion(&base.graded(), &top.graded())
            .ok_or_else(|| SeriesError::Invalid("not an extension".into()))?;
        Ok(SeriesExtension {
            base: base.clone(),
            top: top.clone(),
            embed: SeriesMap::new(base, top, map),
            degree,
        })
    }

    pub fn from_map(embed: SeriesMap, degree: usize) -> Self {
        SeriesExtension {
            base: embed.source.clone(),
            top: embed.target.clone(),
            embed,
            degree,
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SeriesExtension) -> SeriesExtension {
        SeriesExtension {
            base: self.base.clone(),
            top: next.top.clone(),
            embed: next.embed.compose(&self.embed),
            degree: self.degree * next.degree,
        }
    }

    pub fn residue_degree(&self) -> usize {
        self.top.residue.degree_over(&self.base.residue).expect("residue tower")
    }

    pub fn ramification_index(&self) -> u64 {
        self.base.lattice.index_in(&self.top.lattice)
    }

    /// `[K:E] = [K̄:Ē]·|Γ_K:Γ_E|`.
    pub fn fundamental_equality(&self) -> bool {
        self.degree == self.residue_degree() * self.ramification_index() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> HullVector {
        HullVector::from_ints(x)
    }

    #[test]
    fn valuation_axioms_on_examples() {
        let e = SeriesField::laurent(Field::prime(5).unwrap(), &["t1", "t2"]);
        let t1 = e.var(1);
        let t2 = e.var(0);
        let p = e.mul(&t1, &t2);
        assert_eq!(e.valuation(&p).unwrap(), Value::Finite(v(&[1, 1])));
        let x = e.var(1);
        let y = e.mul(&t1, &t1);
        assert_eq!(e.valuation(&e.add(&x, &y)).unwrap(), Value::Finite(v(&[0, 1])));
        assert_eq!(e.valuation(&e.zero()).unwrap(), Value::Top);
    }

    #[test]
    fn geometric_series() {
        let e = SeriesField::laurent(Field::prime(7).unwrap(), &["t"]);
        let x = e.sub(&e.one(), &e.var(0));
        let w = e.inv(&x, None).unwrap();
        assert_eq!(w.terms.len(), 24);
        assert!(w.terms.values().all(|c| e.residue().is_one(c)));
        assert_eq!(w.cutoff, Some(v(&[24])));
        let prod = e.mul(&x, &w);
        assert!(e.agree_to_precision(&prod, &e.one()));
        assert_eq!(e.format(&e.truncate(&w, &v(&[3]))), "1 + t + t^2 + O(t^3)");
    }

    #[test]
    fn rank_two_inverse_collapses() {
        let e = SeriesField::laurent(Field::prime(3).unwrap(), &["t1", "t2"]);
        let x = e.sub(&e.one(), &e.var(1));
        let w = e.inv(&x, None).unwrap();
        assert_eq!(w.cutoff, Some(v(&[0, 24])));
        assert!(e.agree_to_precision(&e.mul(&x, &w), &e.one()));
    }

    #[test]
    fn ramified_and_inertial() {
        let e = SeriesField::laurent(Field::prime(3).unwrap(), &["t"]);
        let k = e.adjoin_ramified(0, 2).unwrap();
        assert_eq!(k.top.lattice(), &Lattice::diagonal(&[2]));
        let k2 = k.then(&k.top.adjoin_ramified(0, 3).unwrap());
        assert_eq!(k2.top.lattice(), &Lattice::diagonal(&[6]));
        assert!(k2.fundamental_equality());
        let trivial = e.adjoin_ramified(0, 1).unwrap();
        assert_eq!(trivial.degree, 1);
        let f5 = SeriesField::laurent(Field::prime(5).unwrap(), &["t"]);
        let gf25 = Field::galois(25, None).unwrap();
        let i = f5.make_inertial(&gf25).unwrap();
        let both = i.then(&i.top.adjoin_ramified(0, 2).unwrap());
        assert_eq!(both.degree, 4);
        assert!(both.fundamental_equality());
    }

    #[test]
    fn residue_image_examples() {
        let e = SeriesField::laurent(Field::prime(7).unwrap(), &["t"]);
        let x = e.from_terms([(v(&[1]), Fe::Mod(3)), (v(&[2]), Fe::Mod(5))], None).unwrap();
        let g = e.residue_image(&x).unwrap();
        assert_eq!(e.graded().format(&g), "3*<1>");
    }
}
