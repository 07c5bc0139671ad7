//! Newton polygons, `λ`-polynomials and their graded residues, Hensel
//! lifting of coprime residue splits and simple roots, and the extension
//! builders on the valued side.

mod build;
mod lift;

use thiserror::Error;

use crate::exact_fields::FieldError;
use crate::graded_core::{GPoly, GradedError, GradedField};
use crate::valued_series::{SPoly, Series, SeriesError, SeriesExtension, SeriesField};
use crate::value_groups::{HullVector, Rat};

pub use build::{
    build_purely_wild, build_root_extension, tame_correspond, tame_from_polys, RootExtension,
    TameExtension, WildExtension,
};
pub use lift::{hensel_factor, hensel_root, HenselFactors};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenselError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("constant and leading coefficients must be nonzero")]
    ZeroEnd,
    #[error("coefficient of X^{0} has an indeterminate valuation")]
    Indeterminate(usize),
    #[error("not a λ-polynomial")]
    NotLambda,
    #[error("invalid residue split: {0}")]
    BadSplit(String),
    #[error("residue factors are not coprime")]
    NotCoprime,
    #[error("residue root is not simple")]
    NotSimple,
    #[error("precision exhausted after {0} iterations")]
    PrecisionExhausted(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("extension is not tame")]
    NotTame,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal: {0}")]
    Internal(String),
}

/// Lower Newton polygon of `{(i, v(a_i))}`. `slopes` lists the root values
/// `λ` of the segments from left to right with their widths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonData {
    pub vertices: Vec<(usize, HullVector)>,
    pub slopes: Vec<(HullVector, usize)>,
}

impl NewtonData {
    pub fn single_slope(&self) -> bool {
        self.slopes.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaPolynomial {
    pub base: SeriesField,
    pub coeffs: SPoly,
    pub lambda: HullVector,
    pub residue: GPoly,
}

impl LambdaPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `v(a_n) + (n - i)λ`, the line the coefficients must not undercut.
    pub fn bound(&self, i: usize) -> HullVector {
        let vn = self.coeffs.last().unwrap().leading().unwrap().0;
        vn.add(&self.lambda.scale_int((self.degree() - i) as i64))
    }
}

fn known_value(x: &Series, i: usize) -> Result<Option<HullVector>, HenselError> {
    match x.leading() {
        Some((g, _)) => Ok(Some(g.clone())),
        None if x.is_exact() => Ok(None),
        None => Err(HenselError::Indeterminate(i)),
    }
}

fn ends(f: &[Series]) -> Result<(usize, HullVector, HullVector), HenselError> {
    let n = f.len().checked_sub(1).ok_or(HenselError::ZeroEnd)?;
    let v0 = known_value(&f[0], 0)?.ok_or(HenselError::ZeroEnd)?;
    let vn = known_value(&f[n], n)?.ok_or(HenselError::ZeroEnd)?;
    Ok((n, v0, vn))
}

pub fn newton_polygon(e: &SeriesField, f: &[Series]) -> Result<NewtonData, HenselError> {
    let f = e.ptrim(f.to_vec());
    ends(&f)?;
    let mut pts: Vec<(usize, HullVector)> = Vec::new();
    let mut unknown = Vec::new();
    for (i, c) in f.iter().enumerate() {
        match c.leading() {
            Some((g, _)) => pts.push((i, g.clone())),
            None => {
                if let Some(p) = &c.cutoff {
                    unknown.push((i, p.clone()));
                }
            }
        }
    }
    // (b is on or above the segment a..c) iff (vb-va)(ic-ia) >= (vc-va)(ib-ia)
    let above = |a: &(usize, HullVector), b: &(usize, HullVector), c: &(usize, HullVector)| {
        b.1.sub(&a.1).scale_int((c.0 - a.0) as i64) >= c.1.sub(&a.1).scale_int((b.0 - a.0) as i64)
    };
    let mut hull: Vec<(usize, HullVector)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 && above(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) {
            hull.pop();
        }
        hull.push(p);
    }
    for (i, cut) in unknown {
        let k = hull.iter().position(|(j, _)| *j > i).unwrap();
        let (a, c) = (&hull[k - 1], &hull[k]);
        let line = a.1.add(&c.1.sub(&a.1).scale(Rat::new((i - a.0) as i64, (c.0 - a.0) as i64)));
        if cut < line {
            return Err(HenselError::Indeterminate(i));
        }
    }
    let slopes = hull
        .windows(2)
        .map(|w| {
            let width = w[1].0 - w[0].0;
            (w[0].1.sub(&w[1].1).scale(Rat::new(1, width as i64)), width)
        })
        .collect();
    Ok(NewtonData { vertices: hull, slopes })
}

/// `(v(a_0) - v(a_n)) / n`.
pub fn lambda_of(e: &SeriesField, f: &[Series]) -> Result<HullVector, HenselError> {
    let (n, v0, vn) = ends(&e.ptrim(f.to_vec()))?;
    if n == 0 {
        return Err(HenselError::Unsupported("constant polynomial".into()));
    }
    Ok(v0.sub(&vn).scale(Rat::new(1, n as i64)))
}

/// Checks `v(a_i) >= (n - i)λ + v(a_n)` for a prescribed `λ` and extracts
/// the residue `f̃^(λ)`.
pub fn certify(
    e: &SeriesField,
    f: &[Series],
    lambda: &HullVector,
) -> Result<Option<LambdaPolynomial>, HenselError> {
    let f = e.ptrim(f.to_vec());
    let (n, _, vn) = ends(&f)?;
    let ge = e.graded();
    let mut residue = Vec::with_capacity(n + 1);
    for (i, c) in f.iter().enumerate() {
        let bound = vn.add(&lambda.scale_int((n - i) as i64));
        if let Some((g, _)) = c.leading() {
            if *g < bound {
                return Ok(None);
            }
        }
        if c.cutoff.as_ref().map_or(false, |p| *p <= bound) {
            return Err(HenselError::Indeterminate(i));
        }
        residue.push(match c.terms.get(&bound) {
            Some(a) => ge.monomial(a.clone(), &bound)?,
            None => ge.zero(),
        });
    }
    Ok(Some(LambdaPolynomial {
        base: e.clone(),
        coeffs: f,
        lambda: lambda.clone(),
        residue,
    }))
}

pub fn is_lambda_polynomial(
    e: &SeriesField,
    f: &[Series],
) -> Result<Option<LambdaPolynomial>, HenselError> {
    let lambda = lambda_of(e, f)?;
    certify(e, f, &lambda)
}

pub fn residue_poly(f: &LambdaPolynomial) -> GPoly {
    f.residue.clone()
}

/// Splits off `X^k` where `a_0 = ... = a_(k-1) = 0` exactly.
pub fn strip_x_power(f: &[Series]) -> (usize, SPoly) {
    let k = f.iter().take_while(|c| c.terms.is_empty() && c.is_exact()).count();
    (k, f[k..].to_vec())
}

/// `h = f(cX) / (a_n c^n)` over the extension field `k.top`, for `c` of
/// value exactly `λ`.
pub fn monicize(
    f: &LambdaPolynomial,
    k: &SeriesExtension,
    c: &Series,
) -> Result<SPoly, HenselError> {
    let kf = &k.top;
    if kf.valuation(c)?.finite() != Some(&f.lambda) {
        return Err(HenselError::Unsupported("v(c) must equal λ".into()));
    }
    let n = f.degree();
    let a: SPoly = k.embed.apply_poly(&f.coeffs);
    let vn = a[n].leading().unwrap().0.clone();
    let an_inv = kf.inv(&a[n], Some(&kf.default_cutoff().sub(&vn)))?;
    let cinv = kf.inv(c, None)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut cpow = kf.one();
    for i in (0..n).rev() {
        cpow = kf.mul(&cpow, &cinv);
        out.push(kf.mul(&kf.mul(&a[i], &an_inv), &cpow));
    }
    out.reverse();
    out.push(kf.one());
    Ok(out)
}

/// `Γ_E + Zλ` with the residue field unchanged.
pub(crate) fn ramified_for(
    e: &SeriesField,
    lambda: &HullVector,
) -> Result<SeriesExtension, HenselError> {
    let top = e.with_data(e.residue().clone(), e.lattice().extend(&[lambda.clone()]));
    let map = crate::graded_core::MonomialMap::inclusion(&e.graded(), &top.graded())
        .ok_or_else(|| HenselError::Internal("lattice inclusion".into()))?;
    let degree = e.lattice().index_in(top.lattice()) as usize;
    Ok(SeriesExtension::from_map(
        crate::valued_series::SeriesMap::new(e, &top, map),
        degree,
    ))
}

/// Grade-0 part of a homogeneous graded element.
pub(crate) fn grade_zero(g: &GradedField, x: &crate::graded_core::GElem) -> Result<crate::exact_fields::Fe, HenselError> {
    if x.is_zero() {
        return Ok(g.f0().zero());
    }
    x.coeff(&HullVector::zero(g.rank()))
        .filter(|_| x.is_homogeneous())
        .cloned()
        .ok_or_else(|| HenselError::Internal("expected a grade-0 element".into()))
}
