use crate::exact_fields::{Fe, Poly};
use crate::value_groups::HullVector;

use super::extension::descend;
use super::{GElem, GPoly, GradedError, GradedExtension, GradedField, MonomialMap, SimpleExtension};

/// `f = unit · ∏ h_i^(m_i)` with monic irreducible `λ`-homogenizable `h_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogFactorization {
    pub unit: GElem,
    pub lambda: HullVector,
    pub factors: Vec<(GPoly, usize)>,
}

impl HomogFactorization {
    pub fn expand(&self, f: &GradedField) -> GPoly {
        let mut acc = vec![self.unit.clone()];
        for (h, m) in &self.factors {
            for _ in 0..*m {
                acc = f.pmul(&acc, h);
            }
        }
        acc
    }
}

/// Unique factorization of a homogenizable polynomial: strip `X^k`, descend
/// to `F0[Y]` through `Y = X^e/π`, factor there and substitute back.
pub fn homog_factor(f: &GradedField, poly: &GPoly) -> Result<HomogFactorization, GradedError> {
    let poly = f.ptrim(poly.clone());
    let n = GradedField::pdegree(&poly).ok_or(GradedError::ZeroPolynomial)?;
    let lambda = f.is_homogenizable(&poly).ok_or(GradedError::NotHomogenizable)?;
    let unit = poly[n].clone();
    let monic = f.pmonic(&poly)?;
    let k = monic.iter().position(|c| !c.is_zero()).unwrap();
    let mut factors = Vec::new();
    if k > 0 {
        factors.push((vec![f.zero(), f.one()], k));
    }
    if n > k {
        let g: GPoly = monic[k..].to_vec();
        let (e, gt) = descend(f, &g, &lambda)?;
        let fac = f.f0().factor(&gt)?;
        let pi = lambda.scale_int(e as i64);
        for (q, m) in fac.factors {
            let delta = q.degree().unwrap();
            let mut h = vec![f.zero(); e as usize * delta + 1];
            for (j, c) in q.0.iter().enumerate() {
                h[e as usize * j] = f.monomial(c.clone(), &pi.scale_int((delta - j) as i64))?;
            }
            let h = f.ptrim(h);
            if (GradedField::pdegree(&h).unwrap() as u64) % e != 0
                || !f.is_homogenizable_at(&h, &lambda)
            {
                return Err(GradedError::Internal("factor shape".into()));
            }
            factors.push((h, m));
        }
    }
    factors.sort();
    let out = HomogFactorization { unit, lambda, factors };
    if out.expand(f) != poly {
        return Err(GradedError::Internal("factorization does not reproduce input".into()));
    }
    Ok(out)
}

fn check_cyclic(ext: &GradedExtension, sigma: &MonomialMap) -> Result<usize, GradedError> {
    let n = ext.degree();
    if sigma.source != ext.top || sigma.target != ext.top || sigma.order(n) != Some(n) {
        return Err(GradedError::NotGalois);
    }
    if sigma.compose(&ext.embed) != ext.embed {
        return Err(GradedError::NotGalois);
    }
    Ok(n)
}

/// `N_{L/F}(x) = ∏ σ^i(x)` for a generator `σ` of a cyclic `L/F`, returned as
/// an element of `F`.
pub fn graded_norm(
    ext: &GradedExtension,
    sigma: &MonomialMap,
    x: &GElem,
) -> Result<GElem, GradedError> {
    let n = check_cyclic(ext, sigma)?;
    let l = &ext.top;
    let mut acc = l.one();
    let mut cur = x.clone();
    for _ in 0..n {
        acc = l.mul(&acc, &cur);
        cur = sigma.apply(&cur);
    }
    ext.embed
        .preimage(&acc)
        .ok_or_else(|| GradedError::Internal("norm outside the base".into()))
}

/// Homogeneous `y` with `x·σ(y) = y`, for homogeneous `x` of norm 1.
///
/// The equation is `F0`-linear on each homogeneous component; grades are
/// tried over coset representatives of `Γ_L/Γ_F` in increasing order.
pub fn hilbert90_witness(
    ext: &GradedExtension,
    sigma: &MonomialMap,
    x: &GElem,
) -> Result<GElem, GradedError> {
    check_cyclic(ext, sigma)?;
    if !x.is_homogeneous() || x.is_zero() {
        return Err(GradedError::NotHomogeneous);
    }
    if graded_norm(ext, sigma, x)? != ext.base.one() {
        return Err(GradedError::NormNotOne);
    }
    let (l, f) = (&ext.top, &ext.base);
    let (l0, f0) = (l.f0(), f.f0());
    let x0 = x
        .coeff(&HullVector::zero(l.rank()))
        .ok_or(GradedError::NormNotOne)?
        .clone();
    let dim = l0.degree_over(f0).unwrap();
    let basis: Vec<Fe> = (0..dim)
        .map(|i| {
            let mut v = vec![f0.zero(); dim];
            v[i] = f0.one();
            l0.from_coords(f0, &v)
        })
        .collect();
    for delta in f.lattice().coset_representatives(l.lattice()) {
        let psi = sigma.character(&delta);
        let cols: Vec<Vec<Fe>> = basis
            .iter()
            .map(|b| {
                let img = l0.mul(&l0.mul(&x0, &psi), &sigma.residue.apply(b));
                l0.coords_over(f0, &l0.sub(b, &img))
            })
            .collect();
        let rows: Vec<Vec<Fe>> = (0..dim)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        if let Some(v) = f0.kernel(&rows, dim).into_iter().next() {
            let y = l.monomial(l0.from_coords(f0, &v), &delta)?;
            if l.mul(x, &sigma.apply(&y)) != y {
                return Err(GradedError::Internal("witness check".into()));
            }
            return Ok(y);
        }
    }
    Err(GradedError::Internal("no Hilbert 90 witness".into()))
}

/// Result of Kummer recognition: `L = F[x]`, `x^m = b`, `σ(x) = ζ x`.
#[derive(Debug, Clone)]
pub struct Kummer {
    pub m: u64,
    /// `a = b^(n/m)`.
    pub b: GElem,
    pub zeta: Fe,
    pub ext: GradedExtension,
    pub sigma: MonomialMap,
}

/// Recognizes `F[a^(1/n)]` as the cyclic extension `F[b^(1/m)]`, where `m`
/// is `n` divided by the largest `d | n` for which `a` is a `d`-th power.
pub fn kummer_recognize(f: &GradedField, a: &GElem, n: u64) -> Result<Kummer, GradedError> {
    let f0 = f.f0();
    let p = f0.characteristic();
    if n == 0 || (p > 0 && n % p == 0) {
        return Err(GradedError::CharDivides(n));
    }
    let zeta_n = f0
        .primitive_root_of_unity(n)
        .ok_or(GradedError::NoRootOfUnity(n))?;
    let (g, c) = match (a.is_homogeneous(), a.lowest()) {
        (true, Some((g, c))) => (g.clone(), c.clone()),
        _ => return Err(GradedError::NotHomogeneous),
    };
    let mut divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    divisors.reverse();
    for d in divisors {
        let gd = g.scale(crate::value_groups::Rat::new(1, d as i64));
        if !f.lattice().contains(&gd) {
            continue;
        }
        let Some(root) = f0.nth_roots(&c, d)?.into_iter().next() else {
            continue;
        };
        let b = f.monomial(root, &gd)?;
        let m = n / d;
        let zeta = f0.pow(&zeta_n, d as u128);
        if m == 1 {
            return Ok(Kummer {
                m,
                b,
                zeta,
                ext: GradedExtension::trivial(f),
                sigma: MonomialMap::identity(f),
            });
        }
        let mut poly = vec![f.zero(); m as usize + 1];
        poly[0] = f.neg(&b);
        poly[m as usize] = f.one();
        let step = SimpleExtension::new(f, &poly)
            .map_err(|e| GradedError::Internal(format!("Kummer polynomial: {}", e)))?;
        let l = step.top.clone();
        let zl = l.constant(step.embed.residue.apply(&zeta));
        let sigma = step.extend_hom(&step.embed, &l.mul(&zl, &step.root))?;
        let ext = GradedExtension::from_step(step);
        if sigma.order(m as usize) != Some(m as usize) {
            return Err(GradedError::Internal("Kummer generator order".into()));
        }
        return Ok(Kummer { m, b, zeta, ext, sigma });
    }
    unreachable!("d = 1 always succeeds")
}

#[derive(Debug, Clone)]
pub enum ArtinSchreier {
    /// `X^p - X - a` has the root given in `F0`.
    Splits(Fe),
    /// Degree-`p` inertial extension with `σ(x) = x + 1`.
    Cyclic {
        ext: GradedExtension,
        sigma: MonomialMap,
    },
}

pub fn artin_schreier_p(f: &GradedField, a: &Fe) -> Result<ArtinSchreier, GradedError> {
    let f0 = f.f0();
    let p = f0.characteristic();
    if p == 0 {
        return Err(GradedError::Unsupported(
            "Artin-Schreier extensions need positive characteristic".into(),
        ));
    }
    let mut c = vec![f0.zero(); p as usize + 1];
    c[0] = f0.neg(a);
    c[1] = f0.from_int(-1);
    c[p as usize] = f0.one();
    let poly = Poly::new(c);
    if let Some(r) = f0.proots(&poly)?.into_iter().next() {
        return Ok(ArtinSchreier::Splits(r));
    }
    let step = SimpleExtension::new(f, &f.pconst(&poly))?;
    let l = step.top.clone();
    let sigma = step.extend_hom(&step.embed, &l.add(&step.root, &l.one()))?;
    Ok(ArtinSchreier::Cyclic {
        ext: GradedExtension::from_step(step),
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::Field;
    use crate::value_groups::{Lattice, Rat};

    fn gf(q: u64) -> GradedField {
        GradedField::new(Field::galois(q, None).unwrap(), Lattice::standard(1))
    }

    fn t(f: &GradedField, c: i64, num: i64, den: i64) -> GElem {
        f.monomial(f.f0().from_int(c), &HullVector(vec![Rat::new(num, den)])).unwrap()
    }

    #[test]
    fn factor_x4_minus_t2() {
        let f = gf(5);
        let p = vec![f.neg(&t(&f, 1, 2, 1)), f.zero(), f.zero(), f.zero(), f.one()];
        let fac = homog_factor(&f, &p).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert!(fac.factors.iter().all(|(h, m)| h.len() == 3 && *m == 1));
        assert_eq!(fac.lambda, HullVector(vec![Rat::new(1, 2)]));
        // X^2 - t over GF(3) is irreducible
        let f3 = gf(3);
        let q = vec![f3.neg(&t(&f3, 1, 1, 1)), f3.zero(), f3.one()];
        assert_eq!(homog_factor(&f3, &q).unwrap().factors, vec![(q, 1)]);
    }

    #[test]
    fn norm_and_hilbert90_ramified() {
        let f = gf(5);
        let k = kummer_recognize(&f, &t(&f, 1, 1, 1), 2).unwrap();
        assert_eq!(k.m, 2);
        let x = k.ext.generator().unwrap();
        assert_eq!(graded_norm(&k.ext, &k.sigma, &x).unwrap(), f.neg(&t(&f, 1, 1, 1)));
        let l = &k.ext.top;
        let minus = l.constant(l.f0().from_int(-1));
        let y = hilbert90_witness(&k.ext, &k.sigma, &minus).unwrap();
        assert_eq!(l.mul(&minus, &k.sigma.apply(&y)), y);
        assert_eq!(y.grade(), Some(&HullVector(vec![Rat::new(1, 2)])));
    }

    #[test]
    fn kummer_examples() {
        let f = gf(5);
        let k = kummer_recognize(&f, &t(&f, 1, 1, 1), 4).unwrap();
        assert_eq!(k.m, 4);
        assert!(k.ext.classify().totally_ramified);
        let k = kummer_recognize(&f, &f.one(), 4).unwrap();
        assert_eq!(k.m, 1);
        let k = kummer_recognize(&f, &t(&f, 2, 0, 1), 4).unwrap();
        assert_eq!(k.m, 4);
        assert!(k.ext.classify().inertial);
        assert_eq!(k.ext.top.f0().cardinality(), Some(625));
    }

    #[test]
    fn artin_schreier_cases() {
        let f = gf(3);
        let one = f.f0().one();
        match artin_schreier_p(&f, &one).unwrap() {
            ArtinSchreier::Cyclic { ext, sigma } => {
                assert_eq!(ext.degree(), 3);
                assert!(ext.classify().inertial);
                assert_eq!(sigma.order(3), Some(3));
            }
            _ => panic!("X^3 - X - 1 is irreducible over GF(3)"),
        }
        assert!(matches!(
            artin_schreier_p(&f, &f.f0().zero()).unwrap(),
            ArtinSchreier::Splits(_)
        ));
    }
}
