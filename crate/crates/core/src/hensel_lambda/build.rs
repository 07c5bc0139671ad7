use crate::graded_core::{
    homog_factor, ExtensionFlags, GPoly, GradedExtension, MonomialMap, SimpleExtension,
};
use crate::valued_series::{SPoly, Series, SeriesError, SeriesExtension, SeriesField, SeriesMap};
use crate::value_groups::{ramification_order, Rat, Value};

use super::{certify, hensel_root, is_lambda_polynomial, HenselError};

/// `K = E[a]` for a root `a` of a `λ`-polynomial with irreducible residue.
#[derive(Debug, Clone)]
pub struct RootExtension {
    pub ext: SeriesExtension,
    pub graded: GradedExtension,
    pub poly: SPoly,
    pub root: Series,
    pub flags: ExtensionFlags,
}

#[derive(Debug, Clone)]
pub struct WildExtension {
    pub ext: SeriesExtension,
    pub root: Series,
    pub flags: ExtensionFlags,
}

#[derive(Debug, Clone)]
pub struct TameExtension {
    pub ext: SeriesExtension,
    pub graded: GradedExtension,
    pub automorphisms: Vec<SeriesMap>,
    pub generators: Vec<Series>,
    pub galois: bool,
    pub flags: ExtensionFlags,
}

fn series_extension(
    e: &SeriesField,
    graded: &GradedExtension,
    degree: usize,
) -> (SeriesField, SeriesExtension) {
    let k = e.with_data(graded.top.f0().clone(), graded.top.lattice().clone());
    let map = SeriesMap::new(e, &k, graded.embed.clone());
    (k, SeriesExtension::from_map(map, degree))
}

fn check_degrees(ext: &SeriesExtension, flags: &ExtensionFlags) -> Result<(), HenselError> {
    if !ext.fundamental_equality()
        || ext.residue_degree() != flags.residue_degree
        || ext.ramification_index() != flags.ramification_index
    {
        return Err(HenselError::DimensionMismatch(format!(
            "[K:E] = {} but residue degree {} and index {}",
            ext.degree,
            ext.residue_degree(),
            ext.ramification_index()
        )));
    }
    Ok(())
}

/// Adjoins a root of `f` whose graded residue is irreducible: `GK = GE[ã]`
/// and `[K:E] = deg f`.
pub fn build_root_extension(e: &SeriesField, f: &[Series]) -> Result<RootExtension, HenselError> {
    let lp = is_lambda_polynomial(e, f)?.ok_or(HenselError::NotLambda)?;
    let ge = e.graded();
    let n = lp.degree();
    let fac = homog_factor(&ge, &lp.residue)?;
    if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
        return Err(HenselError::Graded(crate::graded_core::GradedError::Reducible(
            ge.pformat(&lp.residue),
        )));
    }
    let graded = GradedExtension::from_step(SimpleExtension::new(&ge, &lp.residue)?);
    let (k, ext) = series_extension(e, &graded, n);
    let fk = ext.embed.apply_poly(&lp.coeffs);
    let lpk = certify(&k, &fk, &lp.lambda)?
        .ok_or_else(|| HenselError::Internal("image is not a λ-polynomial".into()))?;
    let b = graded.generator().unwrap();
    let root = match hensel_root(&lpk, &b) {
        Ok(a) => a,
        Err(HenselError::NotSimple) => {
            // inseparable residue: only monomial lifts have the monomial root
            let a = k.lift(&b);
            let v = k.peval(&fk, &a);
            if !(v.terms.is_empty() && v.is_exact()) {
                return Err(HenselError::Unsupported(
                    "root of a non-monomial lift with inseparable residue".into(),
                ));
            }
            a
        }
        Err(err) => return Err(err),
    };
    let flags = graded.classify();
    check_degrees(&ext, &flags)?;
    Ok(RootExtension { ext, graded, poly: lp.coeffs, root, flags })
}

/// `K = E(b^(1/p^n))` for `b` whose value is not divisible in `Γ_E`; the
/// root is the termwise `p^n`-th root.
pub fn build_purely_wild(e: &SeriesField, b: &Series, n: u32) -> Result<WildExtension, HenselError> {
    let p = e.residue().characteristic();
    if p == 0 {
        return Err(HenselError::Unsupported("purely wild extensions need characteristic p".into()));
    }
    let q = p.pow(n);
    let Value::Finite(gamma) = e.valuation(b)? else {
        return Err(HenselError::ZeroEnd);
    };
    let h = gamma.scale(Rat::new(1, q as i64));
    let ord = ramification_order(&h, e.lattice());
    if ord != q {
        return Err(HenselError::DimensionMismatch(format!(
            "v(b)/{} has order {} modulo the value group",
            q, ord
        )));
    }
    let top = e.with_data(e.residue().clone(), e.lattice().extend(&[h]));
    let map = MonomialMap::inclusion(&e.graded(), &top.graded())
        .ok_or_else(|| HenselError::Internal("lattice inclusion".into()))?;
    let ext = SeriesExtension::from_map(SeriesMap::new(e, &top, map), q as usize);
    let scale = Rat::new(1, q as i64);
    let mut terms = Vec::new();
    for (g, c) in &b.terms {
        let mut r = c.clone();
        for _ in 0..n {
            r = e.residue().pth_root(&r);
        }
        terms.push((g.scale(scale), r));
    }
    let root = top
        .from_terms(terms, b.cutoff.as_ref().map(|c| c.scale(scale)))
        .map_err(|err| match err {
            SeriesError::NotInLattice(_) => {
                HenselError::Unsupported("root has terms outside Γ_K".into())
            }
            other => other.into(),
        })?;
    if !top.agree_to_precision(&top.pow(&root, q as u32), &ext.embed.apply(b)) {
        return Err(HenselError::Internal("root does not satisfy X^q = b".into()));
    }
    let flags = GradedExtension::from_inclusion(&e.graded(), &top.graded())
        .unwrap()
        .classify();
    if !flags.purely_wild {
        return Err(HenselError::Internal("classification is not purely wild".into()));
    }
    check_degrees(&ext, &flags)?;
    Ok(WildExtension { ext, root, flags })
}

/// The tame extension `K` of `E` with `GK = L`, with the Galois action of
/// `L/GE` realized on series.
pub fn tame_correspond(e: &SeriesField, l: &GradedExtension) -> Result<TameExtension, HenselError> {
    if l.base != e.graded() {
        return Err(HenselError::Internal("graded extension is not over GE".into()));
    }
    let flags = l.classify();
    if !flags.tame {
        return Err(HenselError::NotTame);
    }
    let (k, ext) = series_extension(e, l, l.degree());
    check_degrees(&ext, &flags)?;
    let mut automorphisms = Vec::new();
    for sigma in l.automorphisms()? {
        if sigma.compose(&l.embed) != l.embed {
            return Err(HenselError::Internal("automorphism moves the base".into()));
        }
        automorphisms.push(SeriesMap::new(&k, &k, sigma));
    }
    let generators = l.generators().iter().map(|x| k.lift(x)).collect();
    Ok(TameExtension {
        galois: automorphisms.len() == ext.degree,
        ext,
        graded: l.clone(),
        automorphisms,
        generators,
        flags,
    })
}

/// Tame extension generated by roots of the given graded polynomials.
pub fn tame_from_polys(e: &SeriesField, polys: &[GPoly]) -> Result<TameExtension, HenselError> {
    tame_correspond(e, &GradedExtension::adjoin(&e.graded(), polys)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::{Fe, Field};
    use crate::value_groups::HullVector;

    fn v(x: &[i64]) -> HullVector {
        HullVector::from_ints(x)
    }

    #[test]
    fn root_extension_examples() {
        let e = SeriesField::laurent(Field::prime(3).unwrap(), &["t"]);
        let f = vec![e.neg(&e.var(0)), e.zero(), e.one()];
        let r = build_root_extension(&e, &f).unwrap();
        assert_eq!(r.flags.ramification_index, 2);
        assert!(r.flags.totally_ramified);
        let e5 = SeriesField::laurent(Field::prime(5).unwrap(), &["t"]);
        let f = vec![e5.constant(Fe::Mod(3)), e5.zero(), e5.one()];
        let r = build_root_extension(&e5, &f).unwrap();
        assert_eq!(r.flags.residue_degree, 2);
        let two_t = e5.from_terms([(v(&[1]), Fe::Mod(2)), (v(&[3]), Fe::Mod(1))], None).unwrap();
        let f = vec![e5.neg(&two_t), e5.zero(), e5.one()];
        let r = build_root_extension(&e5, &f).unwrap();
        assert_eq!((r.flags.residue_degree, r.flags.ramification_index), (1, 2));
        let k = &r.ext.top;
        let fk = r.ext.embed.apply_poly(&f);
        assert!(k.peval(&fk, &r.root).known_zero_below(&v(&[24])));
    }

    #[test]
    fn purely_wild_examples() {
        for (p, n) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2)] {
            let e = SeriesField::laurent(Field::prime(p).unwrap(), &["t"]);
            let w = build_purely_wild(&e, &e.var(0), n).unwrap();
            assert_eq!(w.ext.degree as u64, p.pow(n));
            assert!(w.ext.fundamental_equality());
        }
        let gf4 = Field::galois(4, None).unwrap();
        let e = SeriesField::laurent(gf4.clone(), &["t"]);
        let w = gf4.generator().unwrap();
        let b = e.monomial(w, &v(&[1])).unwrap();
        let k = build_purely_wild(&e, &b, 1).unwrap();
        assert_eq!(k.flags.ramification_index, 2);
        let e3 = SeriesField::laurent(Field::prime(3).unwrap(), &["t"]);
        let t3 = e3.monomial(Fe::Mod(1), &v(&[3])).unwrap();
        assert!(matches!(
            build_purely_wild(&e3, &t3, 1),
            Err(HenselError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn tame_examples() {
        let e = SeriesField::laurent(Field::prime(5).unwrap(), &["t"]);
        let ge = e.graded();
        let tt = ge.monomial(Fe::Mod(1), &v(&[1])).unwrap();
        let k = tame_from_polys(&e, &[vec![ge.neg(&tt), ge.zero(), ge.one()]]).unwrap();
        assert!(k.galois);
        assert_eq!(k.automorphisms.len(), 2);
        let x = &k.generators[0];
        let images: Vec<Series> = k.automorphisms.iter().map(|s| s.apply(x)).collect();
        assert!(images.contains(&k.ext.top.neg(x)));
        let inert = vec![ge.constant(Fe::Mod(3)), ge.zero(), ge.one()];
        let cube = vec![ge.neg(&tt), ge.zero(), ge.zero(), ge.one()];
        let k = tame_from_polys(&e, &[inert, cube]).unwrap();
        assert_eq!(k.ext.degree, 6);
        assert_eq!((k.flags.residue_degree, k.flags.ramification_index), (2, 3));
    }
}
