use crate::exact_fields::Poly;
use crate::graded_core::{descend, GElem, GPoly};
use crate::valued_series::{SPoly, Series, SeriesField};
use crate::value_groups::HullVector;

use super::{certify, grade_zero, monicize, ramified_for, HenselError, LambdaPolynomial};

const MAX_ITERATIONS: usize = 64;

#[derive(Debug, Clone)]
pub struct HenselFactors {
    pub g: LambdaPolynomial,
    pub h: LambdaPolynomial,
    /// Cutoff of the monic lift; `None` when the factorization is exact.
    pub precision: Option<HullVector>,
    pub iterations: usize,
}

/// Smallest positive grade among the terms of the given series.
fn min_positive<'a>(rank: usize, xs: impl IntoIterator<Item = &'a Series>) -> Option<HullVector> {
    let zero = HullVector::zero(rank);
    xs.into_iter()
        .flat_map(|x| x.terms.keys())
        .filter(|g| **g > zero)
        .min()
        .cloned()
}

fn drop_known_zero_top(mut f: SPoly, keep: usize) -> SPoly {
    while f.len() > keep && f.last().map_or(false, |c| c.terms.is_empty()) {
        f.pop();
    }
    f
}

fn lift_const(k: &SeriesField, p: &Poly) -> SPoly {
    p.0.iter().map(|c| k.constant(c.clone())).collect()
}

fn as_poly(k: &SeriesField, f: &[GElem]) -> Result<Poly, HenselError> {
    let g = k.graded();
    Ok(Poly::new(f.iter().map(|c| grade_zero(&g, c)).collect::<Result<_, _>>()?))
}

/// Lifts a coprime split `f̃^(λ) = ℓ·m` to `f = g·h` over the base field.
pub fn hensel_factor(
    f: &LambdaPolynomial,
    l: &GPoly,
    m: &GPoly,
) -> Result<HenselFactors, HenselError> {
    let e = &f.base;
    let ge = e.graded();
    let (l, m) = (ge.ptrim(l.clone()), ge.ptrim(m.clone()));
    if l.is_empty() || m.is_empty() || ge.pmul(&l, &m) != ge.ptrim(f.residue.clone()) {
        return Err(HenselError::BadSplit("ℓ·m differs from the residue".into()));
    }
    let (dl, dm) = (l.len() - 1, m.len() - 1);
    let lambda = &f.lambda;
    if dl == 0 || dm == 0 {
        return trivial_split(f, &l, &m);
    }
    for p in [&l, &m] {
        if !ge.is_homogenizable_at(p, lambda) {
            return Err(HenselError::BadSplit("factor is not λ-homogenizable".into()));
        }
    }
    let (_, lt) = descend(&ge, &ge.pmonic(&l)?, lambda)?;
    let (_, mt) = descend(&ge, &ge.pmonic(&m)?, lambda)?;
    if ge.f0().is_zero(&ge.f0().presultant(&lt, &mt)) {
        return Err(HenselError::NotCoprime);
    }

    let kx = ramified_for(e, lambda)?;
    let k = &kx.top;
    let gk = k.graded();
    let c = k.monomial(k.residue().one(), lambda)?;
    let big_h = monicize(f, &kx, &c)?;
    // residues of ℓ(cX)/(ℓ_top c^dl) and m(cX)/(m_top c^dm) in K̄[X]
    let normalize = |p: &GPoly| -> Result<Poly, HenselError> {
        let d = p.len() - 1;
        let top = gk.mul(&p[d], &gk.monomial(k.residue().one(), &lambda.scale_int(d as i64))?);
        let top_inv = gk.inv(&top)?;
        let cs: Vec<GElem> = p
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let y = gk.monomial(k.residue().one(), &lambda.scale_int(i as i64))?;
                Ok(gk.mul(&gk.mul(a, &y), &top_inv))
            })
            .collect::<Result<_, HenselError>>()?;
        as_poly(k, &cs)
    };
    let (l0, m0) = (normalize(&l)?, normalize(&m)?);
    let f0 = k.residue();
    let h0 = Poly::new(
        big_h
            .iter()
            .map(|x| x.terms.get(&HullVector::zero(k.rank())).cloned().unwrap_or_else(|| f0.zero()))
            .collect(),
    );
    if f0.pmul(&l0, &m0) != h0 {
        return Err(HenselError::Internal("normalized split does not reduce to h".into()));
    }
    let (one, s0, t0) = f0.pxgcd(&l0, &m0);
    if one != f0.pconst(f0.one()) {
        return Err(HenselError::NotCoprime);
    }

    let mut p = k.default_cutoff();
    for x in &big_h {
        if let Some(cut) = &x.cutoff {
            p = p.min(cut.clone());
        }
    }
    if let Some(mu) = min_positive(k.rank(), &big_h) {
        p = k.reachable(&p, &mu);
    }

    let (mut g, mut h) = (lift_const(k, &l0), lift_const(k, &m0));
    let (mut s, mut t) = (lift_const(k, &s0), lift_const(k, &t0));
    // Working precision doubles from the lowest grade of the first error.
    // Between steps the approximants are treated as exact polynomials; the
    // final error check against h certifies them.
    let forget = |x: &SPoly| -> SPoly {
        x.iter().map(|c| Series { terms: c.terms.clone(), cutoff: None }).collect()
    };
    let mut w = p.clone();
    let mut step: Option<HullVector> = None;
    let mut iterations = 0;
    loop {
        let err = k.psub(&big_h, &k.pmul(&g, &h));
        if err.iter().all(|x| x.known_zero_below(&p)) {
            break;
        }
        if iterations == MAX_ITERATIONS {
            return Err(HenselError::PrecisionExhausted(iterations));
        }
        iterations += 1;
        if step.is_none() {
            step = err.iter().filter_map(|x| x.leading().map(|(g, _)| g.clone())).min();
        }
        if let Some(mu) = &step {
            if w < p || iterations == 1 {
                let doubled = mu.scale_int(1i64 << iterations.min(40));
                w = if doubled < p { doubled } else { p.clone() };
            }
        }
        let tr = |x: SPoly| k.ptruncate(&x, &w);
        let err = tr(err);
        let (q, r) = k.pdivrem_monic(&tr(k.pmul(&s, &err)), &h);
        let g1 = tr(k.padd(&g, &k.padd(&k.pmul(&t, &err), &k.pmul(&q, &g))));
        let mut h1 = tr(k.padd(&h, &r));
        h1[dm] = k.one();
        let g1 = drop_known_zero_top(g1, dl + 1);
        let b = tr(k.psub(&k.padd(&k.pmul(&s, &g1), &k.pmul(&t, &h1)), &[k.one()]));
        let (cq, d) = k.pdivrem_monic(&tr(k.pmul(&s, &b)), &h1);
        s = drop_known_zero_top(tr(k.psub(&s, &d)), dm.max(1));
        t = drop_known_zero_top(
            tr(k.psub(&t, &k.padd(&k.pmul(&t, &b), &k.pmul(&cq, &g1)))),
            dl.max(1),
        );
        s = forget(&s);
        t = forget(&t);
        g = forget(&g1);
        h = forget(&h1);
    }
    if g.len() != dl + 1 {
        return Err(HenselError::Internal("lifted factor has the wrong degree".into()));
    }
    // a factorization is exact when the known terms already multiply to h
    let (ge_, he_) = (forget(&g), forget(&h));
    let exact = big_h.iter().all(|x| x.is_exact())
        && k.psub(&big_h, &k.pmul(&ge_, &he_)).iter().all(|x| x.terms.is_empty());
    if exact {
        g = ge_;
        h = he_;
    } else {
        g = k.ptruncate(&g, &p);
        h = k.ptruncate(&h, &p);
    }

    // g = α c^dl G(X/c), h = (a_n/α) c^dm H(X/c)
    let alpha = e.lift(&l[dl]);
    let an = f.coeffs.last().unwrap();
    let beta = e.mul(an, &e.inv(&alpha, None)?);
    let demonic = |poly: &SPoly, lead: &Series, d: usize| -> Result<SPoly, HenselError> {
        let lead_k = kx.embed.apply(lead);
        let mut out = Vec::with_capacity(d + 1);
        for (i, x) in poly.iter().enumerate() {
            let ci = k.monomial(k.residue().one(), &lambda.scale_int((d - i) as i64))?;
            let y = k.mul(&k.mul(&lead_k, x), &ci);
            if y.terms.keys().any(|g| !e.lattice().contains(g)) {
                return Err(HenselError::Internal("factor does not descend to the base".into()));
            }
            out.push(y);
        }
        Ok(out)
    };
    let gp = demonic(&g, &alpha, dl)?;
    let hp = demonic(&h, &beta, dm)?;
    let gl = certify(e, &gp, lambda)?.ok_or_else(|| HenselError::Internal("g is not a λ-polynomial".into()))?;
    let hl = certify(e, &hp, lambda)?.ok_or_else(|| HenselError::Internal("h is not a λ-polynomial".into()))?;
    if gl.residue != l || hl.residue != m {
        return Err(HenselError::Internal("lifted residues differ from the split".into()));
    }
    Ok(HenselFactors {
        g: gl,
        h: hl,
        precision: if exact { None } else { Some(p) },
        iterations,
    })
}

fn trivial_split(
    f: &LambdaPolynomial,
    l: &GPoly,
    m: &GPoly,
) -> Result<HenselFactors, HenselError> {
    let e = &f.base;
    let (unit, unit_is_l) = if l.len() == 1 { (&l[0], true) } else { (&m[0], false) };
    if !unit.is_homogeneous() {
        return Err(HenselError::BadSplit("constant factor is not homogeneous".into()));
    }
    let u = e.lift(unit);
    let uinv = e.inv(&u, None)?;
    let rest: SPoly = f.coeffs.iter().map(|a| e.mul(a, &uinv)).collect();
    let cu = certify(e, &[u], &f.lambda)?.unwrap();
    let cr = certify(e, &rest, &f.lambda)?
        .ok_or_else(|| HenselError::Internal("cofactor is not a λ-polynomial".into()))?;
    let (g, h) = if unit_is_l { (cu, cr) } else { (cr, cu) };
    Ok(HenselFactors { g, h, precision: None, iterations: 0 })
}

/// Lifts a simple root `b` of `f̃^(λ)` to a root `a` of `f` with `ã = b`.
pub fn hensel_root(f: &LambdaPolynomial, b: &GElem) -> Result<Series, HenselError> {
    let e = &f.base;
    let ge = e.graded();
    if !b.is_zero() && (!b.is_homogeneous() || b.grade() != Some(&f.lambda)) {
        return Err(HenselError::BadSplit("root must be homogeneous of grade λ".into()));
    }
    if !ge.peval(&f.residue, b).is_zero() {
        return Err(HenselError::BadSplit("not a root of the residue".into()));
    }
    let deriv: GPoly = f
        .residue
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ge.scale(c, &ge.f0().from_int(i as i64)))
        .collect();
    if ge.peval(&deriv, b).is_zero() {
        return Err(HenselError::NotSimple);
    }
    let mut r = e.default_cutoff();
    let mut rel_terms = Vec::new();
    for (i, c) in f.coeffs.iter().enumerate() {
        let bound = f.bound(i);
        if let Some(cut) = &c.cutoff {
            r = r.min(cut.sub(&bound));
        }
        rel_terms.push(Series {
            terms: c.terms.iter().map(|(g, v)| (g.sub(&bound), v.clone())).collect(),
            cutoff: None,
        });
    }
    if let Some(mu) = min_positive(e.rank(), &rel_terms) {
        r = e.reachable(&r, &mu);
    }
    let pa = f.lambda.add(&r);
    let target = r.add(&f.bound(0));
    let fd = e.pderiv(&f.coeffs);
    let mut a = e.lift(b);
    for _ in 0..=MAX_ITERATIONS {
        let fa = e.peval(&f.coeffs, &a);
        if fa.terms.is_empty() && fa.is_exact() {
            return Ok(a);
        }
        if fa.known_zero_below(&target) {
            return Ok(e.truncate(&a, &pa));
        }
        let dfa = e.peval(&fd, &a);
        let delta = e.div(&fa, &dfa, Some(&pa))?;
        a = e.truncate(&e.sub(&a, &delta), &pa);
    }
    Err(HenselError::PrecisionExhausted(MAX_ITERATIONS))
}

#[cfg(test)]
mod tests {
    use super::super::is_lambda_polynomial;
    use super::*;
    use crate::exact_fields::{Fe, Field};

    fn ser(e: &SeriesField, cs: &[(i64, i64)]) -> Series {
        e.from_terms(
            cs.iter().map(|&(g, c)| (HullVector::from_ints(&[g]), e.residue().from_int(c))),
            None,
        )
        .unwrap()
    }

    #[test]
    fn square_root_of_one_plus_t() {
        let e = SeriesField::laurent(Field::prime(3).unwrap(), &["t"]);
        let ge = e.graded();
        let f = vec![ser(&e, &[(0, -1), (1, -1)]), e.zero(), e.one()];
        let lp = is_lambda_polynomial(&e, &f).unwrap().unwrap();
        let one = ge.one();
        let l = vec![ge.neg(&one), one.clone()];
        let m = vec![one.clone(), one.clone()];
        let fac = hensel_factor(&lp, &l, &m).unwrap();
        let prod = e.pmul(&fac.g.coeffs, &fac.h.coeffs);
        for (x, y) in prod.iter().zip(&f) {
            assert!(e.agree_to_precision(x, y));
        }
        // root of g squares to 1 + t
        let r = e.neg(&fac.g.coeffs[0]);
        let sq = e.mul(&r, &r);
        assert!(e.agree_to_precision(&sq, &ser(&e, &[(0, 1), (1, 1)])));
        assert_eq!(sq.cutoff, Some(HullVector::from_ints(&[24])));
        let a = hensel_root(&lp, &one).unwrap();
        assert!(e.agree_to_precision(&a, &r));
    }

    #[test]
    fn exact_split_terminates_immediately() {
        let e = SeriesField::laurent(Field::prime(5).unwrap(), &["t"]);
        let ge = e.graded();
        let f = vec![ser(&e, &[(2, -1)]), e.zero(), e.zero(), e.zero(), e.one()];
        let lp = is_lambda_polynomial(&e, &f).unwrap().unwrap();
        let tt = ge.monomial(Fe::Mod(1), &HullVector::from_ints(&[1])).unwrap();
        let l = vec![ge.neg(&tt), ge.zero(), ge.one()];
        let m = vec![tt.clone(), ge.zero(), ge.one()];
        let fac = hensel_factor(&lp, &l, &m).unwrap();
        assert_eq!(fac.precision, None);
        assert_eq!(e.pformat(&fac.g.coeffs), "X^2 + 4*t");
        assert_eq!(e.pformat(&fac.h.coeffs), "X^2 + t");
    }

    #[test]
    fn cubic_root_lift() {
        let e = SeriesField::laurent(Field::prime(5).unwrap(), &["t"]);
        let f = vec![ser(&e, &[(1, -1)]), e.constant(Fe::Mod(4)), e.zero(), e.one()];
        assert!(is_lambda_polynomial(&e, &f).unwrap().is_none());
        let lp = certify(&e, &f, &HullVector::from_ints(&[0])).unwrap().unwrap();
        let a = hensel_root(&lp, &e.graded().zero()).unwrap();
        let a3 = e.sub(&e.pow(&a, 3), &a);
        assert!(e.agree_to_precision(&a3, &e.var(0)));
        assert_eq!(e.format(&e.truncate(&a, &HullVector::from_ints(&[4]))), "4*t + 4*t^3 + O(t^4)");
    }
}
