use num_integer::Integer;

use crate::exact_fields::{Fe, Field, FieldHom};
use crate::value_groups::{quotient_structure, ramification_order, HullVector, Lattice};

use super::{AElem, CrossedError, CrossedProduct};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// `[A:F]`.
    pub dimension: usize,
    /// `[A0:F0]`.
    pub a0_degree: usize,
    /// `|Γ_A:Γ_F|`.
    pub gamma_index: u64,
    /// Invariant factors of `Γ_A/Γ_F`.
    pub quotient: Vec<u64>,
    pub fundamental_equality: bool,
    pub semiramified: bool,
    pub inertially_split: bool,
    pub nicely_semiramified: bool,
    /// Generators `w_k = c_k z^(j_k)` of a totally ramified maximal subfield.
    pub totally_ramified_subfield: Option<Vec<AElem>>,
}

#[derive(Debug, Clone)]
pub struct ThetaMap {
    /// `(γ + Γ_F, θ(γ + Γ_F))` with `γ` reduced modulo `Z^m`.
    pub entries: Vec<(HullVector, FieldHom)>,
    pub matches_sigmas: bool,
    pub homomorphism: bool,
    pub isomorphism: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubfieldReport {
    /// `[K:F] = [K0:F0]·|Γ_K:Γ_F|`.
    pub dimension: usize,
    /// `[K:F]` as the rank of the monomial spanning set.
    pub dimension_by_rank: usize,
    pub residue_degree: usize,
    pub ramification_index: u64,
    pub quotient: Vec<u64>,
    pub maximal: bool,
    pub inertial: bool,
    pub totally_ramified: bool,
    pub automorphisms: usize,
    pub galois: bool,
    pub abelian: bool,
    pub cyclic: bool,
    pub elementary_abelian: bool,
    pub exponent: u64,
}

fn rank_over(e0: &Field, n0: &Field, vecs: &[Vec<Fe>]) -> usize {
    let _ = n0;
    match vecs.first() {
        None => 0,
        Some(v) => v.len() - e0.kernel(vecs, v.len()).len(),
    }
}

fn coords(alg: &CrossedProduct, x: &Fe) -> Vec<Fe> {
    alg.n0().coords_over(alg.e0(), x)
}

/// `E0`-basis of `E0[gens] ⊆ N0`.
fn subfield_basis(alg: &CrossedProduct, gens: &[Fe]) -> Vec<Fe> {
    let (n0, e0) = (alg.n0(), alg.e0());
    let mut basis = vec![n0.one()];
    let mut rows = vec![coords(alg, &n0.one())];
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            for g in gens {
                let x = n0.mul(&basis[i], g);
                let mut trial = rows.clone();
                trial.push(coords(alg, &x));
                if rank_over(e0, n0, &trial) > rows.len() {
                    rows = trial;
                    basis.push(x);
                    changed = true;
                }
            }
        }
    }
    basis
}

fn in_span(alg: &CrossedProduct, basis: &[Fe], x: &Fe) -> bool {
    let mut rows: Vec<Vec<Fe>> = basis.iter().map(|b| coords(alg, b)).collect();
    let r = rank_over(alg.e0(), alg.n0(), &rows);
    rows.push(coords(alg, x));
    rank_over(alg.e0(), alg.n0(), &rows) == r
}

fn fixed_by_group(alg: &CrossedProduct, c: &Fe) -> bool {
    alg.data.sigmas.iter().all(|s| s.apply(c) == *c)
}

fn monomial(alg: &CrossedProduct, c: Fe, j: &[u32]) -> AElem {
    alg.term(c, j, &vec![0; alg.rank()])
}

fn orders_of(alg: &CrossedProduct, grades: &[HullVector]) -> Vec<u64> {
    let std = Lattice::standard(alg.rank());
    grades.iter().map(|g| ramification_order(g, &std)).collect()
}

/// All exponent vectors `α` with `0 <= α_k < ords_k`.
fn boxed(ords: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for o in ords {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u64>| {
                (0..*o).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn power_product(alg: &CrossedProduct, ws: &[AElem], alpha: &[u64]) -> AElem {
    ws.iter()
        .zip(alpha)
        .fold(alg.one(), |acc, (w, e)| alg.mul(&acc, &alg.pow(w, *e)))
}

fn commute(alg: &CrossedProduct, x: &AElem, y: &AElem) -> bool {
    alg.mul(x, y) == alg.mul(y, x)
}

fn is_integral(g: &HullVector) -> bool {
    g.coords().iter().all(|c| c.is_integer())
}

/// Searches `w_k = c_k z^(j_k)`, `c_k ∈ W`, generating a commutative
/// subalgebra with `Γ_T/Γ_F = Γ_A/Γ_F` and all `w_k^(ord_k) ∈ F`: a totally
/// ramified maximal subfield.
fn totally_ramified_search(
    alg: &CrossedProduct,
    quotient_len: usize,
    witnesses: &[Fe],
) -> Option<Vec<AElem>> {
    let size = alg.group().len();
    if witnesses.is_empty() {
        return None;
    }
    let nonzero: Vec<&Vec<u32>> = alg.group().iter().filter(|j| j.iter().any(|e| *e > 0)).collect();
    let mut tuples: Vec<Vec<&Vec<u32>>> = vec![vec![]];
    for _ in 0..quotient_len {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                nonzero.iter().map(move |j| {
                    let mut u = t.clone();
                    u.push(*j);
                    u
                })
            })
            .collect();
    }
    for js in tuples {
        let grades: Vec<HullVector> = js.iter().map(|j| alg.grade_of(&((*j).clone(), vec![0; alg.rank()]))).collect();
        let ords = orders_of(alg, &grades);
        if ords.iter().product::<u64>() as usize != size {
            continue;
        }
        let std = Lattice::standard(alg.rank());
        let reps: std::collections::BTreeSet<HullVector> = boxed(&ords)
            .iter()
            .map(|a| {
                let g = grades
                    .iter()
                    .zip(a)
                    .fold(HullVector::zero(alg.rank()), |acc, (g, e)| acc.add(&g.scale_int(*e as i64)));
                std.reduce(&g)
            })
            .collect();
        if reps.len() != size {
            continue;
        }
        let mut choice = vec![0usize; js.len()];
        'coef: loop {
            let ws: Vec<AElem> = js
                .iter()
                .zip(&choice)
                .map(|(j, c)| monomial(alg, witnesses[*c].clone(), j))
                .collect();
            let ok = (0..ws.len()).all(|a| (0..a).all(|b| commute(alg, &ws[a], &ws[b])))
                && ws.iter().zip(&ords).all(|(w, o)| {
                    let p = alg.pow(w, *o);
                    matches!(p.single(), Some(((j, _), c)) if j.iter().all(|e| *e == 0) && fixed_by_group(alg, c))
                });
            if ok {
                return Some(ws);
            }
            for slot in choice.iter_mut() {
                *slot += 1;
                if *slot < witnesses.len() {
                    continue 'coef;
                }
                *slot = 0;
            }
            break;
        }
    }
    None
}

/// `±1`, `±g` and `±g·h` for level generators `g, h` of `N0`.
pub fn default_witness_set(alg: &CrossedProduct) -> Vec<Fe> {
    let n0 = alg.n0();
    let gens = n0.level_generators();
    let mut base = vec![n0.one()];
    base.extend(gens.iter().cloned());
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            base.push(n0.mul(&gens[i], &gens[j]));
        }
    }
    let mut out = Vec::new();
    for x in base {
        let nx = n0.neg(&x);
        if !out.contains(&x) {
            out.push(x);
        }
        if !out.contains(&nx) {
            out.push(nx);
        }
    }
    out
}

pub fn classify_algebra(
    alg: &CrossedProduct,
    witnesses: Option<&[Fe]>,
) -> Result<Classification, CrossedError> {
    let size = alg.group().len();
    let d = alg.n0().degree_over(alg.e0()).unwrap();
    let std = Lattice::standard(alg.rank());
    let gamma_a = std.extend(alg.grades());
    let gamma_index = std.index_in(&gamma_a);
    let quotient = quotient_structure(alg.grades(), &std).invariant_factors;
    let j0 = alg
        .group()
        .iter()
        .filter(|j| is_integral(&alg.grade_of(&((*j).clone(), vec![0; alg.rank()]))))
        .count();
    let a0_degree = j0 * d;
    let dimension = size * d;
    let semiramified = j0 == 1 && d as u64 == gamma_index;
    let inertially_split = semiramified && d == size;
    let default_w;
    let w = match witnesses {
        Some(w) => w,
        None => {
            default_w = default_witness_set(alg);
            &default_w
        }
    };
    let totally_ramified_subfield = if semiramified {
        totally_ramified_search(alg, quotient.len(), w)
    } else {
        None
    };
    Ok(Classification {
        dimension,
        a0_degree,
        gamma_index,
        quotient,
        fundamental_equality: dimension == a0_degree * gamma_index as usize,
        semiramified,
        inertially_split,
        nicely_semiramified: inertially_split && totally_ramified_subfield.is_some(),
        totally_ramified_subfield,
    })
}

/// `θ(γ + Γ_F): c ↦ x c x^(-1)` for units `x = z^j` of grade `γ`.
pub fn compute_theta(alg: &CrossedProduct) -> Result<ThetaMap, CrossedError> {
    let cls = classify_algebra(alg, Some(&[]))?;
    if !cls.semiramified {
        return Err(CrossedError::NotSemiramified);
    }
    let n0 = alg.n0();
    let std = Lattice::standard(alg.rank());
    let gens = n0.level_generators();
    let mut by_j = Vec::new();
    for j in alg.group() {
        let x = monomial(alg, n0.one(), j);
        let xi = alg.inv(&x)?;
        let mut images = Vec::new();
        for g in &gens {
            let y = alg.mul(&alg.mul(&x, &alg.scalar(g.clone())), &xi);
            match y.single() {
                Some(((jj, k), c)) if jj.iter().all(|e| *e == 0) && k.iter().all(|e| *e == 0) => {
                    images.push(c.clone())
                }
                _ => return Err(CrossedError::Unsupported("conjugate leaves N0".into())),
            }
        }
        let h = FieldHom { source: n0.clone(), target: n0.clone(), images };
        let grade = std.reduce(&alg.grade_of(&(j.clone(), vec![0; alg.rank()])));
        by_j.push((j.clone(), grade, h));
    }
    let find = |j: &[u32]| by_j.iter().find(|(k, _, _)| k == j).map(|(_, _, h)| h).unwrap();
    let m = alg.rank();
    let matches_sigmas = (0..m).all(|i| {
        let mut j = vec![0; m];
        j[i] = 1 % alg.data.orders[i] as u32;
        find(&j).images == alg.data.sigmas[i].images
    });
    let homomorphism = alg.group().iter().all(|a| {
        alg.group().iter().all(|b| {
            let s: Vec<u32> = a
                .iter()
                .zip(b)
                .zip(&alg.data.orders)
                .map(|((x, y), r)| (x + y) % *r as u32)
                .collect();
            find(&s).images == find(a).compose(find(b)).images
        })
    });
    let distinct: std::collections::HashSet<_> = by_j.iter().map(|(_, _, h)| h.images.clone()).collect();
    let isomorphism = homomorphism
        && distinct.len() == by_j.len()
        && by_j.len() == alg.n0().degree_over(alg.e0()).unwrap();
    Ok(ThetaMap {
        entries: by_j.into_iter().map(|(_, g, h)| (g, h)).collect(),
        matches_sigmas,
        homomorphism,
        isomorphism,
    })
}

/// `u'_ij = u_ij·σ_i(a_j)a_j^(-1)·(σ_j(a_i)a_i^(-1))^(-1)`: the commutators
/// of `z'_i = a_i z_i`.
pub fn rescaled_commutators(alg: &CrossedProduct, a: &[Fe]) -> Result<Vec<Vec<Fe>>, CrossedError> {
    let n0 = alg.n0();
    let m = alg.rank();
    let s = &alg.data.sigmas;
    let mut out = vec![vec![n0.one(); m]; m];
    for i in 0..m {
        for j in 0..m {
            let x = n0.div(&s[i].apply(&a[j]), &a[j])?;
            let y = n0.div(&s[j].apply(&a[i]), &a[i])?;
            out[i][j] = n0.div(&n0.mul(&alg.data.u[i][j], &x), &y)?;
        }
    }
    Ok(out)
}

/// First `(a_1, ..., a_m) ∈ W^m` making every rescaled commutator trivial.
pub fn dec_witness_search(
    alg: &CrossedProduct,
    witnesses: &[Fe],
) -> Result<Option<Vec<Fe>>, CrossedError> {
    let n0 = alg.n0();
    let w: Vec<&Fe> = witnesses.iter().filter(|x| !n0.is_zero(x)).collect();
    if w.is_empty() {
        return Err(CrossedError::EmptyWitnessSet);
    }
    let m = alg.rank();
    let mut choice = vec![0usize; m];
    loop {
        let a: Vec<Fe> = choice.iter().map(|c| w[*c].clone()).collect();
        let u = rescaled_commutators(alg, &a)?;
        if u.iter().flatten().all(|x| n0.is_one(x)) {
            return Ok(Some(a));
        }
        let mut advanced = false;
        for slot in choice.iter_mut() {
            *slot += 1;
            if *slot < w.len() {
                advanced = true;
                break;
            }
            *slot = 0;
        }
        if !advanced {
            return Ok(None);
        }
    }
}

#[derive(Clone)]
struct Auto {
    rho: FieldHom,
    zeta: Vec<Fe>,
}

pub fn verify_subfield_claims(
    alg: &CrossedProduct,
    gens: &[AElem],
) -> Result<SubfieldReport, CrossedError> {
    let n0 = alg.n0();
    let e0 = alg.e0();
    let m = alg.rank();
    for (a, x) in gens.iter().enumerate() {
        if x.single().is_none() {
            return Err(CrossedError::Unsupported("generators must be monomials".into()));
        }
        for y in &gens[..a] {
            if !commute(alg, x, y) {
                return Err(CrossedError::NotCommutative);
            }
        }
    }
    let mut scalars = Vec::new();
    let mut ws = Vec::new();
    for x in gens {
        let ((j, _), c) = x.single().unwrap();
        if j.iter().all(|e| *e == 0) {
            scalars.push(c.clone());
        } else {
            ws.push(x.clone());
        }
    }
    let grades: Vec<HullVector> = ws.iter().map(|w| alg.grade(w).unwrap()).collect();
    let ords = orders_of(alg, &grades);
    let grade_zero_coef = |x: &AElem| -> Result<Fe, CrossedError> {
        match x.single() {
            Some(((j, _), c)) if j.iter().all(|e| *e == 0) => Ok(c.clone()),
            _ => Err(CrossedError::NotSemiramified),
        }
    };
    let mut relations = Vec::new();
    for alpha in boxed(&ords) {
        let p = power_product(alg, &ws, &alpha);
        if is_integral(&alg.grade(&p).unwrap()) {
            relations.push((alpha, grade_zero_coef(&p)?));
        }
    }
    let mut k0_gens = scalars.clone();
    k0_gens.extend(relations.iter().map(|(_, c)| c.clone()));
    let k0 = subfield_basis(alg, &k0_gens);
    let residue_degree = k0.len();
    let std = Lattice::standard(m);
    let gamma_k = std.extend(&grades);
    let ramification_index = std.index_in(&gamma_k);
    let quotient = quotient_structure(&grades, &std).invariant_factors;
    let dimension = residue_degree * ramification_index as usize;

    // rank of {b·w^α} with coordinates (j, coords over E0), t-powers dropped
    let d = n0.degree_over(e0).unwrap();
    let index_of = |j: &[u32]| alg.group().iter().position(|g| g.as_slice() == j).unwrap();
    let mut rows = Vec::new();
    for alpha in boxed(&ords) {
        let p = power_product(alg, &ws, &alpha);
        for b in &k0 {
            let q = alg.mul(&alg.scalar(b.clone()), &p);
            let ((j, _), c) = q.single().unwrap();
            let mut row = vec![e0.zero(); alg.group().len() * d];
            let base = index_of(j) * d;
            for (i, x) in coords(alg, c).into_iter().enumerate() {
                row[base + i] = x;
            }
            rows.push(row);
        }
    }
    let dimension_by_rank = rank_over(e0, n0, &rows);

    // automorphisms (ρ, ζ): ρ on K0, w_k ↦ ζ_k w_k
    let mut rhos: Vec<FieldHom> = Vec::new();
    for j in alg.group() {
        let s = alg.sigma(j);
        if !rhos.iter().any(|r| k0.iter().all(|b| r.apply(b) == s.apply(b))) {
            rhos.push(s.clone());
        }
    }
    let tops: Vec<Fe> = ws
        .iter()
        .zip(&ords)
        .map(|(w, o)| grade_zero_coef(&alg.pow(w, *o)))
        .collect::<Result<_, _>>()?;
    let mut autos: Vec<Auto> = Vec::new();
    for rho in &rhos {
        let mut cands: Vec<Vec<Fe>> = Vec::new();
        for (c, o) in tops.iter().zip(&ords) {
            let target = n0.div(&rho.apply(c), c)?;
            let roots: Vec<Fe> = n0
                .nth_roots(&target, *o)?
                .into_iter()
                .filter(|z| in_span(alg, &k0, z))
                .collect();
            cands.push(roots);
        }
        let mut combos: Vec<Vec<Fe>> = vec![vec![]];
        for c in &cands {
            combos = combos
                .into_iter()
                .flat_map(|p| {
                    c.iter().map(move |z| {
                        let mut q = p.clone();
                        q.push(z.clone());
                        q
                    })
                })
                .collect();
        }
        for zeta in combos {
            let ok = relations.iter().all(|(alpha, c)| {
                let f = zeta
                    .iter()
                    .zip(alpha)
                    .fold(n0.one(), |acc, (z, e)| n0.mul(&acc, &n0.pow(z, *e as u128)));
                rho.apply(c) == n0.mul(&f, c)
            });
            if ok {
                autos.push(Auto { rho: rho.clone(), zeta });
            }
        }
    }
    let same = |a: &Auto, b: &Auto| a.zeta == b.zeta && k0.iter().all(|x| a.rho.apply(x) == b.rho.apply(x));
    let compose = |a: &Auto, b: &Auto| Auto {
        rho: a.rho.compose(&b.rho),
        zeta: a
            .zeta
            .iter()
            .zip(&b.zeta)
            .map(|(za, zb)| n0.mul(&a.rho.apply(zb), za))
            .collect(),
    };
    let id = Auto { rho: FieldHom::identity(n0), zeta: vec![n0.one(); ws.len()] };
    let order_of = |a: &Auto| -> u64 {
        let mut x = a.clone();
        let mut k = 1;
        while !same(&x, &id) && k <= autos.len() as u64 {
            x = compose(&x, a);
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = autos.iter().map(order_of).collect();
    let exponent = orders.iter().fold(1u64, |acc, o| acc.lcm(o));
    let abelian = autos
        .iter()
        .all(|a| autos.iter().all(|b| same(&compose(a, b), &compose(b, a))));
    let count = autos.len();
    let exp_prime = exponent > 1 && (2..exponent).all(|p| exponent % p != 0);
    Ok(SubfieldReport {
        dimension,
        dimension_by_rank,
        residue_degree,
        ramification_index,
        quotient,
        maximal: dimension == alg.group().len(),
        inertial: ramification_index == 1,
        totally_ramified: residue_degree == 1,
        automorphisms: count,
        galois: count == dimension,
        abelian,
        cyclic: orders.iter().any(|o| *o as usize == count),
        elementary_abelian: abelian && (count == 1 || exp_prime),
        exponent,
    })
}
