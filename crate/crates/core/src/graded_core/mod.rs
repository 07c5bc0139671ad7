//! Graded fields in monomial presentation: `F = F0[y^γ : γ ∈ Γ_F]` with
//! `y^γ y^δ = y^(γ+δ)`. Homogeneous elements are `c·y^γ`; elements are finite
//! sums of those.

mod extension;
mod ops;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exact_fields::{Fe, Field, FieldError, FieldHom, Poly};
use crate::value_groups::{HullVector, Lattice};

pub use extension::{ExtensionFlags, GradedExtension, SimpleExtension};
pub(crate) use extension::descend;
pub use ops::{
    artin_schreier_p, graded_norm, hilbert90_witness, homog_factor, kummer_recognize,
    ArtinSchreier, HomogFactorization, Kummer,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial is not homogenizable")]
    NotHomogenizable,
    #[error("grade {0} is not in the value lattice")]
    NotInLattice(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial {0} is reducible")]
    Reducible(String),
    #[error("extension is not Galois with the given group")]
    NotGalois,
    #[error("norm of the element is not 1")]
    NormNotOne,
    #[error("no primitive {0}-th root of unity in the residue field")]
    NoRootOfUnity(u64),
    #[error("characteristic divides {0}")]
    CharDivides(u64),
    #[error("{0}")]
    Unsupported(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// Finite sum of homogeneous terms, keyed by grade; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GElem(pub BTreeMap<HullVector, Fe>);

/// Polynomial over a graded field, coefficients low to high, trimmed.
pub type GPoly = Vec<GElem>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedField {
    f0: Field,
    lattice: Lattice,
}

pub fn format_grade(g: &HullVector) -> String {
    g.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

impl GElem {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.0.len() <= 1
    }

    /// Grade of a nonzero homogeneous element.
    pub fn grade(&self) -> Option<&HullVector> {
        match self.0.len() {
            1 => self.0.keys().next(),
            _ => None,
        }
    }

    /// Least grade present and its coefficient.
    pub fn lowest(&self) -> Option<(&HullVector, &Fe)> {
        self.0.iter().next()
    }

    pub fn coeff(&self, g: &HullVector) -> Option<&Fe> {
        self.0.get(g)
    }
}

impl GradedField {
    pub fn new(f0: Field, lattice: Lattice) -> Self {
        GradedField { f0, lattice }
    }

    pub fn f0(&self) -> &Field {
        &self.f0
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn zero(&self) -> GElem {
        GElem::default()
    }

    pub fn one(&self) -> GElem {
        self.constant(self.f0.one())
    }

    pub fn constant(&self, c: Fe) -> GElem {
        self.term(c, HullVector::zero(self.rank()))
    }

    /// `c·y^γ` without a lattice check.
    fn term(&self, c: Fe, g: HullVector) -> GElem {
        let mut m = BTreeMap::new();
        if !self.f0.is_zero(&c) {
            m.insert(g, c);
        }
        GElem(m)
    }

    /// `c·y^γ`, with `γ` required to lie in `Γ_F`.
    pub fn monomial(&self, c: Fe, g: &HullVector) -> Result<GElem, GradedError> {
        if !self.lattice.contains(g) {
            return Err(GradedError::NotInLattice(format_grade(g)));
        }
        Ok(self.term(c, g.clone()))
    }

    pub fn contains(&self, x: &GElem) -> bool {
        x.0.iter()
            .all(|(g, c)| self.lattice.contains(g) && self.f0.check(c).is_ok() && !self.f0.is_zero(c))
    }

    pub fn add(&self, x: &GElem, y: &GElem) -> GElem {
        let mut out = x.0.clone();
        for (g, c) in &y.0 {
            let v = match out.get(g) {
                Some(a) => self.f0.add(a, c),
                None => c.clone(),
            };
            if self.f0.is_zero(&v) {
                out.remove(g);
            } else {
                out.insert(g.clone(), v);
            }
        }
        GElem(out)
    }

    pub fn neg(&self, x: &GElem) -> GElem {
        GElem(x.0.iter().map(|(g, c)| (g.clone(), self.f0.neg(c))).collect())
    }

    pub fn sub(&self, x: &GElem, y: &GElem) -> GElem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &GElem, y: &GElem) -> GElem {
        let mut out: BTreeMap<HullVector, Fe> = BTreeMap::new();
        for (g, a) in &x.0 {
            for (h, b) in &y.0 {
                let k = g.add(h);
                let p = self.f0.mul(a, b);
                let v = match out.get(&k) {
                    Some(c) => self.f0.add(c, &p),
                    None => p,
                };
                if self.f0.is_zero(&v) {
                    out.remove(&k);
                } else {
                    out.insert(k, v);
                }
            }
        }
        GElem(out)
    }

    pub fn scale(&self, x: &GElem, c: &Fe) -> GElem {
        self.mul(x, &self.constant(c.clone()))
    }

    /// Inverse of a nonzero homogeneous element.
    pub fn inv(&self, x: &GElem) -> Result<GElem, GradedError> {
        let (g, c) = match (x.is_homogeneous(), x.lowest()) {
            (true, Some(t)) => t,
            _ => return Err(GradedError::NotHomogeneous),
        };
        Ok(self.term(self.f0.inv(c)?, g.neg()))
    }

    pub fn div(&self, x: &GElem, y: &GElem) -> Result<GElem, GradedError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &GElem, e: i64) -> Result<GElem, GradedError> {
        let base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut r = self.one();
        for _ in 0..e.unsigned_abs() {
            r = self.mul(&r, &base);
        }
        Ok(r)
    }

    pub fn format(&self, x: &GElem) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.0.iter()
            .map(|(g, c)| {
                let cs = self.f0.format(c);
                let cs = if cs.contains(' ') { format!("({})", cs) } else { cs };
                format!("{}*<{}>", cs, format_grade(g))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    // ---- polynomials ----

    pub fn ptrim(&self, mut f: GPoly) -> GPoly {
        while f.last().map_or(false, |c| c.is_zero()) {
            f.pop();
        }
        f
    }

    pub fn pdegree(f: &GPoly) -> Option<usize> {
        f.iter().rposition(|c| !c.is_zero())
    }

    pub fn padd(&self, f: &GPoly, g: &GPoly) -> GPoly {
        let n = f.len().max(g.len());
        let z = self.zero();
        self.ptrim(
            (0..n)
                .map(|i| self.add(f.get(i).unwrap_or(&z), g.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn pmul(&self, f: &GPoly, g: &GPoly) -> GPoly {
        if f.is_empty() || g.is_empty() {
            return vec![];
        }
        let mut out = vec![self.zero(); f.len() + g.len() - 1];
        for (i, a) in f.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(a, b));
            }
        }
        self.ptrim(out)
    }

    pub fn peval(&self, f: &GPoly, x: &GElem) -> GElem {
        f.iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// Monic polynomial `f / lc(f)`; the leading coefficient must be homogeneous.
    pub fn pmonic(&self, f: &GPoly) -> Result<GPoly, GradedError> {
        let f = self.ptrim(f.clone());
        let lc = f.last().ok_or(GradedError::ZeroPolynomial)?;
        let inv = self.inv(lc)?;
        Ok(f.iter().map(|c| self.mul(c, &inv)).collect())
    }

    /// The `λ` for which `f` is homogeneous in `F[X]^(λ)`: every nonzero
    /// coefficient homogeneous and `gr(a_i) + iλ` constant. A single-term
    /// polynomial is homogenizable for every `λ`; zero is returned then.
    pub fn is_homogenizable(&self, f: &GPoly) -> Option<HullVector> {
        let terms: Vec<(usize, &HullVector)> = f
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c.grade().map(|g| (i, g)))
            .collect::<Option<_>>()?;
        let (&(i0, g0), &(i1, g1)) = (terms.first()?, terms.last()?);
        if i0 == i1 {
            return Some(HullVector::zero(self.rank()));
        }
        let lambda = g0.sub(g1).scale(crate::value_groups::Rat::new(1, (i1 - i0) as i64));
        let target = g0.add(&lambda.scale_int(i0 as i64));
        terms
            .iter()
            .all(|(i, g)| g.add(&lambda.scale_int(*i as i64)) == target)
            .then_some(lambda)
    }

    pub fn is_homogenizable_at(&self, f: &GPoly, lambda: &HullVector) -> bool {
        let mut target: Option<HullVector> = None;
        for (i, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let Some(g) = c.grade() else { return false };
            let v = g.add(&lambda.scale_int(i as i64));
            match &target {
                None => target = Some(v),
                Some(t) if *t != v => return false,
                _ => {}
            }
        }
        true
    }

    pub fn pformat(&self, f: &GPoly) -> String {
        let parts: Vec<String> = f
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let cs = self.format(c);
                let cs = if c.0.len() > 1 { format!("({})", cs) } else { cs };
                match i {
                    0 => cs,
                    1 => format!("{}*X", cs),
                    _ => format!("{}*X^{}", cs, i),
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Polynomial with constant coefficients from `F0[X]`.
    pub fn pconst(&self, f: &Poly) -> GPoly {
        f.0.iter().map(|c| self.constant(c.clone())).collect()
    }
}

impl fmt::Display for GradedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.f0, self.lattice)
    }
}

/// Grade-preserving ring map `F -> M` given by a residue field map `ρ` and a
/// character `χ` on `Γ_F`: `c·y^γ ↦ ρ(c)·χ(γ)·y^γ`. `chi[j]` is the value on
/// the `j`-th basis vector of `Γ_F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialMap {
    pub source: GradedField,
    pub target: GradedField,
    pub residue: FieldHom,
    pub chi: Vec<Fe>,
}

impl MonomialMap {
    pub fn identity(f: &GradedField) -> Self {
        MonomialMap {
            source: f.clone(),
            target: f.clone(),
            residue: FieldHom::identity(&f.f0),
            chi: vec![f.f0.one(); f.rank()],
        }
    }

    /// Inclusion of `F` into `M` when `F0` is a tower level of `M0` and
    /// `Γ_F ⊆ Γ_M`.
    pub fn inclusion(f: &GradedField, m: &GradedField) -> Option<Self> {
        if !f.lattice.is_sublattice_of(&m.lattice) {
            return None;
        }
        Some(MonomialMap {
            source: f.clone(),
            target: m.clone(),
            residue: FieldHom::inclusion(&f.f0, &m.f0)?,
            chi: vec![m.f0.one(); f.rank()],
        })
    }

    /// `χ(γ)` for `γ ∈ Γ_source`.
    pub fn character(&self, g: &HullVector) -> Fe {
        let t = &self.target.f0;
        let n = self
            .source
            .lattice
            .coords(g)
            .unwrap_or_else(|| panic!("grade {} outside the source lattice", g));
        n.iter().zip(&self.chi).fold(t.one(), |acc, (&k, c)| {
            t.mul(&acc, &t.powi(c, k).expect("character values are units"))
        })
    }

    pub fn apply_term(&self, g: &HullVector, c: &Fe) -> Fe {
        self.target.f0.mul(&self.residue.apply(c), &self.character(g))
    }

    pub fn apply(&self, x: &GElem) -> GElem {
        let mut out = BTreeMap::new();
        for (g, c) in &x.0 {
            out.insert(g.clone(), self.apply_term(g, c));
        }
        GElem(out)
    }

    pub fn apply_poly(&self, f: &GPoly) -> GPoly {
        f.iter().map(|c| self.apply(c)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        let chi = other
            .source
            .lattice
            .basis()
            .iter()
            .zip(&other.chi)
            .map(|(b, c)| self.apply_term(b, c))
            .collect();
        MonomialMap {
            source: other.source.clone(),
            target: self.target.clone(),
            residue: self.residue.compose(&other.residue),
            chi,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == MonomialMap::identity(&self.source)
    }

    /// Order of an automorphism, up to `bound`.
    pub fn order(&self, bound: usize) -> Option<usize> {
        let mut cur = self.clone();
        for k in 1..=bound {
            if cur.is_identity() {
                return Some(k);
            }
            cur = self.compose(&cur);
        }
        None
    }

    /// Preimage of an element of the target, when the residue map is a tower
    /// inclusion.
    pub fn preimage(&self, x: &GElem) -> Option<GElem> {
        let (s0, t0) = (&self.source.f0, &self.target.f0);
        let mut out = BTreeMap::new();
        for (g, c) in &x.0 {
            if !self.source.lattice.contains(g) {
                return None;
            }
            let c = t0.div(c, &self.character(g)).ok()?;
            let coords = t0.coords_over(s0, &c);
            if coords[1..].iter().any(|z| !s0.is_zero(z)) {
                return None;
            }
            out.insert(g.clone(), coords[0].clone());
        }
        Some(GElem(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value_groups::Rat;

    fn gf(p: u64) -> GradedField {
        GradedField::new(Field::prime(p).unwrap(), Lattice::standard(1))
    }

    fn mono(f: &GradedField, c: i64, g: Rat) -> GElem {
        f.term(f.f0.from_int(c), HullVector(vec![g]))
    }

    #[test]
    fn homogenizable_examples() {
        let f = gf(3);
        let t = mono(&f, 1, Rat::from(1));
        let one = f.one();
        // X^2 - t
        let p = vec![f.neg(&t), f.zero(), one.clone()];
        assert_eq!(f.is_homogenizable(&p), Some(HullVector(vec![Rat::new(1, 2)])));
        // X^2 - X - 1
        let q = vec![f.neg(&one), f.neg(&one), one.clone()];
        assert_eq!(f.is_homogenizable(&q), Some(HullVector::zero(1)));
        // X^2 + tX + 1
        let r = vec![one.clone(), t.clone(), one];
        assert_eq!(f.is_homogenizable(&r), None);
    }

    #[test]
    fn arithmetic_and_format() {
        let f = gf(7);
        let x = f.add(&mono(&f, 3, Rat::new(1, 2)), &mono(&f, 1, Rat::from(2)));
        assert_eq!(f.format(&x), "3*<1/2> + 1*<2>");
        let h = mono(&f, 3, Rat::new(1, 2));
        let hi = f.inv(&h).unwrap();
        assert_eq!(f.mul(&h, &hi), f.one());
        assert!(f.inv(&x).is_err());
    }
}
