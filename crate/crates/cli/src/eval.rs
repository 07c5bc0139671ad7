//! Evaluation of parsed expressions into the library's value types.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use gradval::crossed_products::{AElem, CrossedProduct};
use gradval::exact_fields::{Fe, Field, FieldError, Poly};
use gradval::graded_core::{GElem, GPoly, GradedField};
use gradval::valued_series::{SPoly, Series, SeriesField};
use gradval::value_groups::{HullVector, Rat};

use crate::parse::{BaseSpec, Expr, FieldSpec};

pub type EvalResult<T> = Result<T, String>;

pub trait Ring {
    type E: Clone;

    fn int(&self, n: &BigInt) -> EvalResult<Self::E>;
    fn var(&self, name: &str) -> EvalResult<Self::E>;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn div(&self, a: &Self::E, b: &Self::E) -> EvalResult<Self::E>;
    /// `a^n` for a negative integer `n`.
    fn pow_neg(&self, a: &Self::E, n: u64) -> EvalResult<Self::E> {
        let inv = self.div(&self.int(&BigInt::one())?, a)?;
        Ok(pow_u64(self, &inv, n))
    }
    /// Powers that are not plain integers.
    fn pow_special(&self, base: &Expr, a: &Self::E, e: &[Rat]) -> EvalResult<Self::E> {
        let _ = (base, a);
        Err(format!("unsupported exponent {}", exponent_string(e)))
    }
    /// `base^(k_1, ..., k_m)`; the base is not evaluated first.
    fn pow_vector(&self, base: &Expr, e: &[Rat]) -> EvalResult<Self::E> {
        let _ = base;
        Err(format!("vector exponent ({}) is not allowed here", exponent_string(e)))
    }
    fn grade(&self, g: &[Rat]) -> EvalResult<Self::E> {
        let _ = g;
        Err("graded monomials <...> are not allowed here".into())
    }
    fn big_o(&self, a: &Self::E) -> EvalResult<Self::E> {
        let _ = a;
        Err("precision markers O(...) are not allowed here".into())
    }
}

fn exponent_string(e: &[Rat]) -> String {
    e.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
}

fn pow_u64<R: Ring + ?Sized>(r: &R, a: &R::E, mut n: u64) -> R::E {
    let mut acc: Option<R::E> = None;
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = Some(match acc {
                Some(x) => r.mul(&x, &base),
                None => base.clone(),
            });
        }
        n >>= 1;
        if n > 0 {
            base = r.mul(&base, &base);
        }
    }
    match acc {
        Some(x) => x,
        None => r.int(&BigInt::one()).expect("one"),
    }
}

pub fn eval<R: Ring>(r: &R, e: &Expr) -> EvalResult<R::E> {
    Ok(match e {
        Expr::Int(s) => r.int(&s.parse::<BigInt>().map_err(|e| e.to_string())?)?,
        Expr::Var(v) => r.var(v)?,
        Expr::Grade(g) => r.grade(g)?,
        Expr::Neg(a) => r.neg(&eval(r, a)?),
        Expr::Add(a, b) => r.add(&eval(r, a)?, &eval(r, b)?),
        Expr::Sub(a, b) => r.add(&eval(r, a)?, &r.neg(&eval(r, b)?)),
        Expr::Mul(a, b) => r.mul(&eval(r, a)?, &eval(r, b)?),
        Expr::Div(a, b) => r.div(&eval(r, a)?, &eval(r, b)?)?,
        Expr::BigO(a) => r.big_o(&eval(r, a)?)?,
        Expr::Pow(base, ex) if ex.len() > 1 => r.pow_vector(base, ex)?,
        Expr::Pow(base, ex) => {
            let a = eval(r, base)?;
            match ex.as_slice() {
                [n] if n.is_integer() => {
                    let n = *n.numer();
                    if n >= 0 {
                        pow_u64(r, &a, n as u64)
                    } else {
                        r.pow_neg(&a, n.unsigned_abs())?
                    }
                }
                _ => r.pow_special(base, &a, ex)?,
            }
        }
    })
}

fn bigrat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Generator of the tower level named `name`, embedded in `f`.
pub fn field_var(f: &Field, name: &str) -> Option<Fe> {
    f.tower()
        .iter()
        .find(|l| l.var() == Some(name))
        .and_then(|l| f.embed(l, &l.generator()?))
}

fn field_err(e: FieldError) -> String {
    e.to_string()
}

// ---- field elements ----

pub struct FieldRing<'a>(pub &'a Field);

impl Ring for FieldRing<'_> {
    type E = Fe;

    fn int(&self, n: &BigInt) -> EvalResult<Fe> {
        self.0.from_rational(&bigrat(n)).map_err(field_err)
    }

    fn var(&self, name: &str) -> EvalResult<Fe> {
        field_var(self.0, name).ok_or_else(|| format!("unknown variable '{}' in {}", name, self.0))
    }

    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        self.0.add(a, b)
    }

    fn neg(&self, a: &Fe) -> Fe {
        self.0.neg(a)
    }

    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        self.0.mul(a, b)
    }

    fn div(&self, a: &Fe, b: &Fe) -> EvalResult<Fe> {
        self.0.div(a, b).map_err(field_err)
    }
}

// ---- polynomials in X over a field ----

pub struct PolyRing<'a>(pub &'a Field);

impl Ring for PolyRing<'_> {
    type E = Poly;

    fn int(&self, n: &BigInt) -> EvalResult<Poly> {
        Ok(self.0.pconst(FieldRing(self.0).int(n)?))
    }

    fn var(&self, name: &str) -> EvalResult<Poly> {
        if name == "X" {
            return Ok(self.0.pmonomial(1));
        }
        Ok(self.0.pconst(FieldRing(self.0).var(name)?))
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.0.padd(a, b)
    }

    fn neg(&self, a: &Poly) -> Poly {
        self.0.pneg(a)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.0.pmul(a, b)
    }

    fn div(&self, a: &Poly, b: &Poly) -> EvalResult<Poly> {
        match b.degree() {
            Some(0) => Ok(self.0.pscale(a, &self.0.inv(b.lead().unwrap()).map_err(field_err)?)),
            None => Err("division by zero".into()),
            _ => Err("division by a non-constant polynomial".into()),
        }
    }
}

// ---- polynomials in X over a Laurent series field ----

pub struct SeriesRing<'a>(pub &'a SeriesField);

impl SeriesRing<'_> {
    fn constant_of<'b>(&self, a: &'b SPoly, what: &str) -> EvalResult<&'b Series> {
        match a.len() {
            1 => Ok(&a[0]),
            0 => Err(format!("{} of zero", what)),
            _ => Err(format!("{} of a polynomial in X", what)),
        }
    }

    fn monomial_grade(&self, x: &Series, what: &str) -> EvalResult<HullVector> {
        let e = self.0;
        match x.terms.iter().next() {
            Some((g, c)) if x.terms.len() == 1 && x.is_exact() && e.residue().is_one(c) => Ok(g.clone()),
            _ => Err(format!("{} must be a monomial", what)),
        }
    }
}

impl Ring for SeriesRing<'_> {
    type E = SPoly;

    fn int(&self, n: &BigInt) -> EvalResult<SPoly> {
        let c = FieldRing(self.0.residue()).int(n)?;
        Ok(self.0.ptrim(vec![self.0.constant(c)]))
    }

    fn var(&self, name: &str) -> EvalResult<SPoly> {
        let e = self.0;
        if name == "X" {
            return Ok(vec![e.zero(), e.one()]);
        }
        if let Some(k) = e.var_coordinate(name) {
            return Ok(vec![e.var(k)]);
        }
        match field_var(e.residue(), name) {
            Some(c) => Ok(vec![e.constant(c)]),
            None => Err(format!("unknown variable '{}' over {}", name, e)),
        }
    }

    fn grade(&self, g: &[Rat]) -> EvalResult<SPoly> {
        let e = self.0;
        if g.len() != e.rank() {
            return Err(format!("grade of rank {} over a field of rank {}", g.len(), e.rank()));
        }
        Ok(vec![e.monomial(e.residue().one(), &HullVector(g.to_vec())).map_err(|x| x.to_string())?])
    }

    fn add(&self, a: &SPoly, b: &SPoly) -> SPoly {
        self.0.ptrim(self.0.padd(a, b))
    }

    fn neg(&self, a: &SPoly) -> SPoly {
        a.iter().map(|c| self.0.neg(c)).collect()
    }

    fn mul(&self, a: &SPoly, b: &SPoly) -> SPoly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        self.0.ptrim(self.0.pmul(a, b))
    }

    fn div(&self, a: &SPoly, b: &SPoly) -> EvalResult<SPoly> {
        let d = self.constant_of(b, "division")?;
        let inv = self.0.inv(d, None).map_err(|x| x.to_string())?;
        Ok(self.0.ptrim(self.0.pscale(a, &inv)))
    }

    fn pow_special(&self, _: &Expr, a: &SPoly, e: &[Rat]) -> EvalResult<SPoly> {
        let x = self.constant_of(a, "fractional power")?;
        let g = self.monomial_grade(x, "base of a fractional power")?;
        let s = self.0;
        Ok(vec![s.monomial(s.residue().one(), &g.scale(e[0])).map_err(|x| x.to_string())?])
    }

    fn big_o(&self, a: &SPoly) -> EvalResult<SPoly> {
        let x = self.constant_of(a, "O(...)")?;
        let g = self.monomial_grade(x, "argument of O(...)")?;
        Ok(vec![Series { terms: Default::default(), cutoff: Some(g) }])
    }
}

// ---- polynomials in X over a graded field ----

pub struct GradedRing<'a> {
    pub field: &'a GradedField,
    /// Series variable names, innermost first; `t^g` means `<g>` on its
    /// coordinate.
    pub vars: &'a [String],
    pub bindings: Vec<(String, GElem)>,
}

impl<'a> GradedRing<'a> {
    pub fn new(field: &'a GradedField, vars: &'a [String]) -> Self {
        GradedRing { field, vars, bindings: vec![] }
    }

    fn single<'b>(&self, a: &'b GPoly, what: &str) -> EvalResult<&'b GElem> {
        match a.len() {
            1 => Ok(&a[0]),
            0 => Err(format!("{} of zero", what)),
            _ => Err(format!("{} of a polynomial in X", what)),
        }
    }
}

impl Ring for GradedRing<'_> {
    type E = GPoly;

    fn int(&self, n: &BigInt) -> EvalResult<GPoly> {
        let c = FieldRing(self.field.f0()).int(n)?;
        Ok(self.field.ptrim(vec![self.field.constant(c)]))
    }

    fn var(&self, name: &str) -> EvalResult<GPoly> {
        let g = self.field;
        if name == "X" {
            return Ok(vec![g.zero(), g.one()]);
        }
        if let Some((_, x)) = self.bindings.iter().find(|(n, _)| n == name) {
            return Ok(g.ptrim(vec![x.clone()]));
        }
        if let Some(k) = self.vars.iter().position(|v| v == name) {
            let m = g.rank();
            if m == self.vars.len() {
                let h = HullVector::unit(m, m - 1 - k, 1, 1);
                return Ok(vec![g.monomial(g.f0().one(), &h).map_err(|x| x.to_string())?]);
            }
        }
        match field_var(g.f0(), name) {
            Some(c) => Ok(vec![g.constant(c)]),
            None => Err(format!("unknown variable '{}' over the graded field", name)),
        }
    }

    fn grade(&self, h: &[Rat]) -> EvalResult<GPoly> {
        let g = self.field;
        if h.len() != g.rank() {
            return Err(format!("grade of rank {} over a field of rank {}", h.len(), g.rank()));
        }
        Ok(vec![g.monomial(g.f0().one(), &HullVector(h.to_vec())).map_err(|x| x.to_string())?])
    }

    fn add(&self, a: &GPoly, b: &GPoly) -> GPoly {
        self.field.padd(a, b)
    }

    fn neg(&self, a: &GPoly) -> GPoly {
        a.iter().map(|c| self.field.neg(c)).collect()
    }

    fn mul(&self, a: &GPoly, b: &GPoly) -> GPoly {
        self.field.pmul(a, b)
    }

    fn div(&self, a: &GPoly, b: &GPoly) -> EvalResult<GPoly> {
        let d = self.single(b, "division")?;
        let inv = self.field.inv(d).map_err(|x| x.to_string())?;
        Ok(self.field.ptrim(a.iter().map(|c| self.field.mul(c, &inv)).collect()))
    }

    fn pow_special(&self, _: &Expr, a: &GPoly, e: &[Rat]) -> EvalResult<GPoly> {
        let x = self.single(a, "fractional power")?;
        let g = self.field;
        match x.0.iter().next() {
            Some((h, c)) if x.0.len() == 1 && g.f0().is_one(c) => {
                Ok(vec![g.monomial(g.f0().one(), &h.scale(e[0])).map_err(|x| x.to_string())?])
            }
            _ => Err("fractional powers need a monomial base".into()),
        }
    }
}

// ---- crossed product elements ----

pub struct AlgebraRing<'a>(pub &'a CrossedProduct);

impl AlgebraRing<'_> {
    fn t_power(&self, k: &[Rat]) -> EvalResult<AElem> {
        let a = self.0;
        if k.len() != a.rank() || !k.iter().all(|x| x.is_integer()) {
            return Err(format!("t needs {} integer exponents", a.rank()));
        }
        Ok(a.t(&k.iter().map(|x| *x.numer()).collect::<Vec<_>>()))
    }
}

impl Ring for AlgebraRing<'_> {
    type E = AElem;

    fn int(&self, n: &BigInt) -> EvalResult<AElem> {
        Ok(self.0.scalar(FieldRing(self.0.n0()).int(n)?))
    }

    fn var(&self, name: &str) -> EvalResult<AElem> {
        let a = self.0;
        let m = a.rank();
        if name == "t" {
            return if m == 1 { Ok(a.t(&[1])) } else { Err("use t1, ..., tm or t^(k1,...,km)".into()) };
        }
        for (prefix, is_z) in [("z", true), ("t", false)] {
            if let Some(i) = name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok()) {
                if i == 0 || i > m {
                    return Err(format!("{} is out of range 1..{}", name, m));
                }
                return Ok(if is_z {
                    a.z(i - 1)
                } else {
                    let mut k = vec![0; m];
                    k[i - 1] = 1;
                    a.t(&k)
                });
            }
        }
        match field_var(a.n0(), name) {
            Some(c) => Ok(a.scalar(c)),
            None => Err(format!("unknown variable '{}' in the algebra", name)),
        }
    }

    fn add(&self, a: &AElem, b: &AElem) -> AElem {
        self.0.add(a, b)
    }

    fn neg(&self, a: &AElem) -> AElem {
        self.0.neg(a)
    }

    fn mul(&self, a: &AElem, b: &AElem) -> AElem {
        self.0.mul(a, b)
    }

    fn div(&self, a: &AElem, b: &AElem) -> EvalResult<AElem> {
        Ok(self.0.mul(a, &self.0.inv(b).map_err(|x| x.to_string())?))
    }

    fn pow_vector(&self, base: &Expr, e: &[Rat]) -> EvalResult<AElem> {
        match base {
            Expr::Var(v) if v == "t" => self.t_power(e),
            _ => Err("only t takes a vector exponent".into()),
        }
    }
}

// ---- fields ----

pub fn build_base(spec: &BaseSpec) -> EvalResult<Field> {
    match spec {
        BaseSpec::Gf { p, k, modulus } => {
            let q = p.checked_pow(*k).ok_or("field is too large")?;
            match modulus {
                None => Field::galois(q, None).map_err(field_err),
                Some(m) => {
                    let fp = Field::prime(*p).map_err(field_err)?;
                    let poly = eval(&PolyRing(&fp), m)?;
                    let coeffs: Vec<i64> = poly
                        .0
                        .iter()
                        .map(|c| match c {
                            Fe::Mod(v) => *v as i64,
                            _ => unreachable!("prime field element"),
                        })
                        .collect();
                    if *k == 1 {
                        return Err("a modulus needs an exponent k >= 2".into());
                    }
                    Field::galois(q, Some(&coeffs)).map_err(field_err)
                }
            }
        }
        BaseSpec::Rationals { radicands } => Field::multi_quadratic(radicands).map_err(field_err),
        BaseSpec::Tower { base, var, modulus } => {
            let b = build_base(base)?;
            let poly = eval(&PolyRing(&b), modulus)?;
            b.extension(poly, Some(var)).map_err(field_err)
        }
    }
}

pub fn build_series_field(spec: &FieldSpec, prec: i64) -> EvalResult<SeriesField> {
    let f = build_base(&spec.base)?;
    if spec.vars.is_empty() {
        return Err(format!("{} has no series variable; append ((t))", f));
    }
    let mut seen = spec.vars.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != spec.vars.len() || spec.vars.iter().any(|v| v == "X" || field_var(&f, v).is_some()) {
        return Err("series variables must be distinct and differ from X and the field generators".into());
    }
    let names: Vec<&str> = spec.vars.iter().map(|s| s.as_str()).collect();
    Ok(SeriesField::laurent(f, &names).with_precision(prec))
}

/// Parses a rational given as a JSON number or a string such as `"-3/4"`.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    if d == 0 {
        None
    } else {
        Some(Rat::new(n, d))
    }
}

/// Rank-one vectors print as a bare rational, others as `(a, b, ...)`.
pub fn hull_string(h: &HullVector) -> String {
    match h.coords() {
        [x] => x.to_string(),
        _ => h.to_string(),
    }
}

/// Parses the output of [`hull_string`] (or the parenthesized form).
pub fn parse_hull(s: &str, rank: usize) -> EvalResult<HullVector> {
    let h = match rat_from_str(s) {
        Some(x) => HullVector(vec![x]),
        None => s.parse::<HullVector>().map_err(|_| format!("cannot read '{}' as a value vector", s))?,
    };
    if h.rank() != rank {
        return Err(format!("'{}' has rank {}, expected {}", s, h.rank(), rank));
    }
    Ok(h)
}
