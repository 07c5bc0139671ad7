use crate::exact_fields::{Fe, FieldHom, Poly};
use crate::value_groups::{ramification_order, HullVector};

use super::{ops, GElem, GPoly, GradedError, GradedField, MonomialMap};

/// `L = F[X]/(g)` for a monic irreducible `λ`-homogenizable `g`, presented
/// again in monomial form.
///
/// With `e = ord(λ + Γ_F)`, `π = y^(eλ)` and `θ = X^e/π`, one has
/// `L0 = F0[θ]`, `Γ_L = Γ_F + Zλ`. The basis monomials of `Γ_L` are the
/// products `y_F^(γ_l)·X^(k_l)`, which makes the section of `L`
/// multiplicative; base monomials then embed with a power of `θ` as twist.
#[derive(Debug, Clone)]
pub struct SimpleExtension {
    pub base: GradedField,
    pub top: GradedField,
    pub embed: MonomialMap,
    pub poly: GPoly,
    pub lambda: HullVector,
    pub e: u64,
    /// `g̃ ∈ F0[Y]` with `g = π^d g̃(X^e/π)`.
    pub residue_poly: Poly,
    pub theta: Fe,
    pub root: GElem,
    decomp: Vec<(HullVector, i64)>,
}

/// Descends a monic `λ`-homogenizable `g` with `g(0) != 0` to `F0[Y]`.
pub(crate) fn descend(
    f: &GradedField,
    g: &GPoly,
    lambda: &HullVector,
) -> Result<(u64, Poly), GradedError> {
    let n = GradedField::pdegree(g).ok_or(GradedError::ZeroPolynomial)?;
    let e = ramification_order(lambda, f.lattice());
    if n as u64 % e != 0 {
        return Err(GradedError::Internal(format!(
            "degree {} not divisible by ramification order {}",
            n, e
        )));
    }
    let e_us = e as usize;
    let d = n / e_us;
    let mut cs = Vec::with_capacity(d + 1);
    for (i, c) in g.iter().enumerate() {
        if c.is_zero() {
            if i % e_us == 0 {
                cs.push(f.f0().zero());
            }
            continue;
        }
        if i % e_us != 0 {
            return Err(GradedError::NotHomogenizable);
        }
        let want = lambda.scale_int((n - i) as i64);
        match c.lowest() {
            Some((gr, coef)) if *gr == want && c.is_homogeneous() => cs.push(coef.clone()),
            _ => return Err(GradedError::NotHomogenizable),
        }
    }
    Ok((e, Poly::new(cs)))
}

impl SimpleExtension {
    pub fn new(base: &GradedField, g: &GPoly) -> Result<Self, GradedError> {
        let g = base.pmonic(g)?;
        let n = GradedField::pdegree(&g).ok_or(GradedError::ZeroPolynomial)?;
        if n == 0 {
            return Err(GradedError::Reducible(base.pformat(&g)));
        }
        let lambda = base.is_homogenizable(&g).ok_or(GradedError::NotHomogenizable)?;
        if n > 1 && g[0].is_zero() {
            return Err(GradedError::Reducible(base.pformat(&g)));
        }
        let (e, gt) = descend(base, &g, &lambda)?;
        let d = gt.degree().unwrap();
        let f0 = base.f0();
        let (top0, theta) = if d >= 2 {
            if f0.is_finite() && !f0.is_irreducible(&gt)? {
                return Err(GradedError::Reducible(base.pformat(&g)));
            }
            if !f0.is_finite() && d == 2 && !f0.is_zero(&gt.0[1]) {
                // complete the square: θ = s - b/2 with s^2 = b^2/4 - c
                let hb = f0.div(&gt.0[1], &f0.from_int(2))?;
                let disc = f0.sub(&f0.mul(&hb, &hb), &gt.0[0]);
                let m = Poly::new(vec![f0.neg(&disc), f0.zero(), f0.one()]);
                let top0 = f0.extension(m, None).map_err(|err| match err {
                    crate::exact_fields::FieldError::Reducible(_) => {
                        GradedError::Reducible(base.pformat(&g))
                    }
                    other => other.into(),
                })?;
                let th = top0.sub(&top0.generator().unwrap(), &top0.embed(f0, &hb).unwrap());
                (top0, th)
            } else {
                let top0 = f0.extension(gt.clone(), None).map_err(|err| match err {
                    crate::exact_fields::FieldError::Reducible(_) => {
                        GradedError::Reducible(base.pformat(&g))
                    }
                    other => other.into(),
                })?;
                let th = top0.generator().unwrap();
                (top0, th)
            }
        } else {
            (f0.clone(), f0.neg(&gt.0[0]))
        };
        let top = GradedField::new(top0.clone(), base.lattice().extend(&[lambda.clone()]));
        let decomp: Vec<(HullVector, i64)> = top
            .lattice()
            .basis()
            .iter()
            .map(|b| {
                (0..e as i64)
                    .map(|k| (b.sub(&lambda.scale_int(k)), k))
                    .find(|(gm, _)| base.lattice().contains(gm))
                    .expect("basis vector of Γ_F + Zλ")
            })
            .collect();
        let kfun = |h: &HullVector| -> i64 {
            let n = top.lattice().coords(h).expect("grade in Γ_L");
            n.iter().zip(&decomp).map(|(a, (_, k))| a * k).sum()
        };
        let ei = e as i64;
        let mut chi = Vec::new();
        for b in base.lattice().basis() {
            let k = kfun(b);
            debug_assert_eq!(k % ei, 0);
            chi.push(top0.powi(&theta, -k / ei)?);
        }
        let kl = kfun(&lambda);
        if (1 - kl) % ei != 0 {
            return Err(GradedError::Internal("section exponent not integral".into()));
        }
        let root = top.monomial(top0.powi(&theta, (1 - kl) / ei)?, &lambda)?;
        let residue = FieldHom::inclusion(f0, &top0)
            .ok_or_else(|| GradedError::Internal("residue inclusion".into()))?;
        let embed = MonomialMap {
            source: base.clone(),
            target: top.clone(),
            residue,
            chi,
        };
        let check = top.peval(&embed.apply_poly(&g), &root);
        if !check.is_zero() {
            return Err(GradedError::Internal(format!(
                "root does not satisfy {}",
                base.pformat(&g)
            )));
        }
        Ok(SimpleExtension {
            base: base.clone(),
            top,
            embed,
            poly: g,
            lambda,
            e,
            residue_poly: gt,
            theta,
            root,
            decomp,
        })
    }

    pub fn degree(&self) -> usize {
        GradedField::pdegree(&self.poly).unwrap()
    }

    fn new_level(&self) -> bool {
        self.residue_poly.degree().unwrap() >= 2
    }

    /// Roots of `τ(g)` in the target of `τ` (all homogeneous of grade `λ`).
    pub fn roots_under(&self, tau: &MonomialMap) -> Result<Vec<GElem>, GradedError> {
        let m = &tau.target;
        if !m.lattice().contains(&self.lambda) {
            return Ok(vec![]);
        }
        let n = self.degree();
        let img = tau.apply_poly(&self.poly);
        let mut cs = Vec::with_capacity(n + 1);
        for (i, c) in img.iter().enumerate() {
            cs.push(match c.lowest() {
                None => m.f0().zero(),
                Some((g, coef)) => {
                    debug_assert_eq!(*g, self.lambda.scale_int((n - i) as i64));
                    coef.clone()
                }
            });
        }
        let z = Poly::new(cs);
        let mut roots = m.f0().proots(&z)?;
        roots.sort();
        roots
            .into_iter()
            .map(|c| m.monomial(c, &self.lambda))
            .collect()
    }

    /// Extends `τ: F -> M` to `L -> M` sending the root to `z`, a root of `τ(g)`.
    pub fn extend_hom(&self, tau: &MonomialMap, z: &GElem) -> Result<MonomialMap, GradedError> {
        let m = &tau.target;
        let mut images = tau.residue.images.clone();
        if self.new_level() {
            let pi = self.base.monomial(self.base.f0().one(), &self.lambda.scale_int(self.e as i64))?;
            let th = m.div(&m.pow(z, self.e as i64)?, &tau.apply(&pi))?;
            let c = th
                .coeff(&HullVector::zero(m.rank()))
                .filter(|_| th.is_homogeneous())
                .ok_or_else(|| GradedError::Internal("θ image not of grade 0".into()))?;
            images.push(c.clone());
        }
        let residue = FieldHom {
            source: self.top.f0().clone(),
            target: m.f0().clone(),
            images,
        };
        if !residue.is_well_defined() {
            return Err(GradedError::Internal("residue map not well defined".into()));
        }
        let mut chi = Vec::new();
        for (b, (gm, k)) in self.top.lattice().basis().iter().zip(&self.decomp) {
            let w = m.mul(
                &tau.apply(&self.base.monomial(self.base.f0().one(), gm)?),
                &m.pow(z, *k)?,
            );
            chi.push(
                w.coeff(b)
                    .filter(|_| w.is_homogeneous())
                    .ok_or_else(|| GradedError::Internal("basis monomial image".into()))?
                    .clone(),
            );
        }
        let out = MonomialMap {
            source: self.top.clone(),
            target: m.clone(),
            residue,
            chi,
        };
        if out.apply(&self.root) != *z {
            return Err(GradedError::Internal("extended map misses the root".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionFlags {
    pub degree: usize,
    pub residue_degree: usize,
    pub ramification_index: u64,
    pub inertial: bool,
    pub totally_ramified: bool,
    pub tame: bool,
    pub purely_wild: bool,
}

/// Finite graded extension `base -> top`, optionally built as a tower of
/// simple extensions.
#[derive(Debug, Clone)]
pub struct GradedExtension {
    pub base: GradedField,
    pub top: GradedField,
    pub embed: MonomialMap,
    pub steps: Vec<SimpleExtension>,
}

impl GradedExtension {
    pub fn trivial(f: &GradedField) -> Self {
        GradedExtension {
            base: f.clone(),
            top: f.clone(),
            embed: MonomialMap::identity(f),
            steps: vec![],
        }
    }

    /// Extension given only by residue and lattice growth (inclusion map).
    pub fn from_inclusion(base: &GradedField, top: &GradedField) -> Option<Self> {
        Some(GradedExtension {
            base: base.clone(),
            top: top.clone(),
            embed: MonomialMap::inclusion(base, top)?,
            steps: vec![],
        })
    }

    pub fn from_step(s: SimpleExtension) -> Self {
        GradedExtension {
            base: s.base.clone(),
            top: s.top.clone(),
            embed: s.embed.clone(),
            steps: vec![s],
        }
    }

    /// Adjoins one root of each polynomial (coefficients in `base`) in turn.
    /// At each stage an irreducible factor over the current top is used;
    /// polynomials that already have a root are skipped.
    pub fn adjoin(base: &GradedField, polys: &[GPoly]) -> Result<Self, GradedError> {
        let mut ext = GradedExtension::trivial(base);
        for p in polys {
            let q = ext.embed.apply_poly(p);
            let fac = ops::homog_factor(&ext.top, &q)?;
            let Some((g, _)) = fac.factors.iter().find(|(g, _)| g.len() > 2) else {
                continue;
            };
            let step = SimpleExtension::new(&ext.top, g)?;
            ext = ext.then(step);
        }
        Ok(ext)
    }

    /// Appends a simple extension of the current top.
    pub fn then(mut self, s: SimpleExtension) -> Self {
        assert!(s.base == self.top);
        self.embed = s.embed.compose(&self.embed);
        self.top = s.top.clone();
        self.steps.push(s);
        self
    }

    pub fn residue_degree(&self) -> usize {
        self.top
            .f0()
            .degree_over(self.base.f0())
            .expect("residue field of the base is a level of the top")
    }

    pub fn ramification_index(&self) -> u64 {
        self.base.lattice().index_in(self.top.lattice())
    }

    /// `[L:F]`: product of the step degrees, or the field data when the
    /// extension has no tower.
    pub fn degree(&self) -> usize {
        if self.steps.is_empty() {
            self.residue_degree() * self.ramification_index() as usize
        } else {
            self.steps.iter().map(|s| s.degree()).product()
        }
    }

    pub fn classify(&self) -> ExtensionFlags {
        let d = self.residue_degree();
        let e = self.ramification_index();
        let p = self.base.f0().characteristic();
        // finite and characteristic-0 residue fields are perfect
        let separable = true;
        let p_power = p > 0 && {
            let mut x = e;
            while x % p == 0 {
                x /= p;
            }
            x == 1
        };
        ExtensionFlags {
            degree: self.degree(),
            residue_degree: d,
            ramification_index: e,
            inertial: e == 1 && separable,
            totally_ramified: d == 1,
            tame: separable && (p == 0 || e % p != 0),
            purely_wild: p > 0 && d == 1 && p_power,
        }
    }

    /// All graded homomorphisms `top -> M` restricting to `base_map` on the base.
    pub fn homs_into(&self, base_map: &MonomialMap) -> Result<Vec<MonomialMap>, GradedError> {
        let mut cur = vec![base_map.clone()];
        for s in &self.steps {
            let mut next = Vec::new();
            for tau in &cur {
                for z in s.roots_under(tau)? {
                    next.push(s.extend_hom(tau, &z)?);
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Graded automorphisms of `top` fixing `base`.
    pub fn automorphisms(&self) -> Result<Vec<MonomialMap>, GradedError> {
        if self.steps.is_empty() && self.degree() > 1 {
            return Err(GradedError::Unsupported(
                "automorphisms need a tower presentation".into(),
            ));
        }
        self.homs_into(&self.embed)
    }

    pub fn is_galois(&self) -> Result<bool, GradedError> {
        Ok(self.automorphisms()?.len() == self.degree())
    }

    /// Image of the last adjoined root in `top`.
    pub fn generator(&self) -> Option<GElem> {
        let s = self.steps.last()?;
        Some(s.root.clone())
    }

    /// Images in `top` of all adjoined roots.
    pub fn generators(&self) -> Vec<GElem> {
        let mut out = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            let mut x = s.root.clone();
            for later in &self.steps[i + 1..] {
                x = later.embed.apply(&x);
            }
            out.push(x);
        }
        out
    }

    /// Rational grade of `λ` for each step.
    pub fn step_lambdas(&self) -> Vec<HullVector> {
        self.steps.iter().map(|s| s.lambda.clone()).collect()
    }
}
