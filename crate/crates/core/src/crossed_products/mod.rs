//! Abelian crossed products `A = ⊕ N0·F·z_1^(j_1)···z_m^(j_m)` over the
//! graded field `F = E0[t^k : k ∈ Z^m]`, with
//!
//! * `z_i c = σ_i(c) z_i` for `c ∈ N0`,
//! * `z_i z_j = u_ij z_j z_i`,
//! * `z_i^(r_i) = b_i t^(r_i γ_i)`.
//!
//! Elements are stored in the normal form `c·t^k·z^j` with `0 <= j_i < r_i`.

mod analysis;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::exact_fields::{Fe, Field, FieldError, FieldHom};
use crate::value_groups::{HullVector, Rat};

pub use analysis::{
    classify_algebra, compute_theta, dec_witness_search, default_witness_set,
    rescaled_commutators, verify_subfield_claims, Classification, SubfieldReport, ThetaMap,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossedError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid data: {0}")]
    Invalid(String),
    #[error("multiplication is not associative on {0}")]
    NotAssociative(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("algebra is not semiramified")]
    NotSemiramified,
    #[error("generators do not commute")]
    NotCommutative,
    #[error("empty witness set")]
    EmptyWitnessSet,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedProductData {
    pub e0: Field,
    pub n0: Field,
    pub orders: Vec<u64>,
    pub sigmas: Vec<FieldHom>,
    pub u: Vec<Vec<Fe>>,
    pub b: Vec<Fe>,
    /// Grades of the `z_i`; `None` means `γ_i = e_i / r_i`.
    pub grades: Option<Vec<HullVector>>,
}

/// Key of a normal monomial: exponents `j` of the `z_i` and central `k ∈ Z^m`.
pub type MonoKey = (Vec<u32>, Vec<i64>);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AElem(pub BTreeMap<MonoKey, Fe>);

impl AElem {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn single(&self) -> Option<(&MonoKey, &Fe)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }
}

#[derive(Debug, Clone)]
pub struct CrossedProduct {
    pub data: CrossedProductData,
    grades: Vec<HullVector>,
    group: Vec<Vec<u32>>,
    sigma_pow: HashMap<Vec<u32>, FieldHom>,
    table: HashMap<(Vec<u32>, Vec<u32>), (Fe, Vec<u32>, Vec<i64>)>,
}

fn hom_eq(a: &FieldHom, b: &FieldHom) -> bool {
    a.images == b.images
}

impl CrossedProduct {
    pub fn build(data: CrossedProductData) -> Result<Self, CrossedError> {
        let m = data.orders.len();
        let n0 = &data.n0;
        if m == 0 || data.sigmas.len() != m || data.b.len() != m || data.u.len() != m {
            return Err(CrossedError::Invalid("inconsistent number of generators".into()));
        }
        let size: u64 = data.orders.iter().product();
        if n0.degree_over(&data.e0) != Some(size as usize) {
            return Err(CrossedError::Invalid(format!(
                "[N0:E0] must equal |G| = {}",
                size
            )));
        }
        for (i, s) in data.sigmas.iter().enumerate() {
            if s.source != *n0 || s.target != *n0 || !s.is_well_defined() {
                return Err(CrossedError::Invalid(format!("σ_{} is not an automorphism of N0", i + 1)));
            }
            if !s.fixes(&data.e0) {
                return Err(CrossedError::Invalid(format!("σ_{} moves E0", i + 1)));
            }
            if s.order(size as usize) != Some(data.orders[i] as usize) {
                return Err(CrossedError::Invalid(format!("σ_{} does not have order r_{}", i + 1, i + 1)));
            }
            for t in &data.sigmas[..i] {
                if !hom_eq(&s.compose(t), &t.compose(s)) {
                    return Err(CrossedError::Invalid("the σ_i do not commute".into()));
                }
            }
        }
        for i in 0..m {
            if data.u[i].len() != m {
                return Err(CrossedError::Invalid("U must be m×m".into()));
            }
            if !n0.is_one(&data.u[i][i]) {
                return Err(CrossedError::Invalid("u_ii must be 1".into()));
            }
            for j in 0..m {
                n0.check(&data.u[i][j])?;
                if n0.mul(&data.u[i][j], &data.u[j][i]) != n0.one() {
                    return Err(CrossedError::Invalid("u_ji must be u_ij^-1".into()));
                }
            }
            n0.check(&data.b[i])?;
            if n0.is_zero(&data.b[i]) {
                return Err(CrossedError::Invalid("b_i must be nonzero".into()));
            }
        }
        let grades = match &data.grades {
            Some(g) => g.clone(),
            None => (0..m)
                .map(|i| HullVector::unit(m, i, 1, data.orders[i] as i64))
                .collect(),
        };
        if grades.len() != m || grades.iter().any(|g| g.rank() != m) {
            return Err(CrossedError::Invalid("grades must be m vectors of rank m".into()));
        }
        for (g, r) in grades.iter().zip(&data.orders) {
            if !g.scale_int(*r as i64).coords().iter().all(|c| c.is_integer()) {
                return Err(CrossedError::Invalid("r_i γ_i must be integral".into()));
            }
        }
        let mut group = vec![vec![]];
        for r in &data.orders {
            group = group
                .into_iter()
                .flat_map(|p: Vec<u32>| {
                    (0..*r as u32).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let mut sigma_pow = HashMap::new();
        for j in &group {
            let mut h = FieldHom::identity(n0);
            for (i, e) in j.iter().enumerate() {
                for _ in 0..*e {
                    h = data.sigmas[i].compose(&h);
                }
            }
            sigma_pow.insert(j.clone(), h);
        }
        let distinct: std::collections::HashSet<_> =
            sigma_pow.values().map(|h| h.images.clone()).collect();
        if distinct.len() != group.len() {
            return Err(CrossedError::Invalid("the σ_i do not generate a group of order |G|".into()));
        }
        let mut alg = CrossedProduct {
            data,
            grades,
            group,
            sigma_pow,
            table: HashMap::new(),
        };
        alg.fill_table();
        alg.check_associative()?;
        Ok(alg)
    }

    pub fn rank(&self) -> usize {
        self.data.orders.len()
    }

    pub fn n0(&self) -> &Field {
        &self.data.n0
    }

    pub fn e0(&self) -> &Field {
        &self.data.e0
    }

    pub fn group(&self) -> &[Vec<u32>] {
        &self.group
    }

    pub fn grades(&self) -> &[HullVector] {
        &self.grades
    }

    /// `σ^j = σ_1^(j_1)···σ_m^(j_m)`.
    pub fn sigma(&self, j: &[u32]) -> &FieldHom {
        &self.sigma_pow[j]
    }

    pub fn grade_of(&self, key: &MonoKey) -> HullVector {
        let m = self.rank();
        let mut g = HullVector(key.1.iter().map(|x| Rat::from(*x)).collect());
        for (i, e) in key.0.iter().enumerate() {
            g = g.add(&self.grades[i].scale_int(*e as i64));
        }
        debug_assert_eq!(g.rank(), m);
        g
    }

    /// `z^a · z_i` in normal form: `(coefficient, exponents, central shift)`.
    fn right_mul_gen(&self, j: &[u32], i: usize) -> (Fe, Vec<u32>, Vec<i64>) {
        let n0 = self.n0();
        let m = self.rank();
        let mut coef = n0.one();
        let prefix = |upto: usize| -> Vec<u32> {
            (0..m).map(|x| if x < upto { j[x] } else { 0 }).collect()
        };
        for a in (i + 1..m).rev() {
            // Π_{s < j_a} σ_a^s(u_{a,i})
            let mut w = n0.one();
            let mut cur = self.data.u[a][i].clone();
            for _ in 0..j[a] {
                w = n0.mul(&w, &cur);
                cur = self.data.sigmas[a].apply(&cur);
            }
            coef = n0.mul(&coef, &self.sigma(&prefix(a)).apply(&w));
        }
        let mut out = j.to_vec();
        let mut k = vec![0i64; m];
        if j[i] as u64 + 1 == self.data.orders[i] {
            out[i] = 0;
            coef = n0.mul(&coef, &self.sigma(&prefix(i)).apply(&self.data.b[i]));
            let shift = self.grades[i].scale_int(self.data.orders[i] as i64);
            k = shift.coords().iter().map(|c| c.to_integer()).collect();
        } else {
            out[i] += 1;
        }
        (coef, out, k)
    }

    fn fill_table(&mut self) {
        let n0 = self.n0().clone();
        let m = self.rank();
        let mut table = HashMap::new();
        for a in &self.group {
            for b in &self.group {
                let mut coef = n0.one();
                let mut j = a.clone();
                let mut k = vec![0i64; m];
                for (i, e) in b.iter().enumerate() {
                    for _ in 0..*e {
                        let (c, nj, dk) = self.right_mul_gen(&j, i);
                        coef = n0.mul(&coef, &c);
                        j = nj;
                        for (x, d) in k.iter_mut().zip(dk) {
                            *x += d;
                        }
                    }
                }
                table.insert((a.clone(), b.clone()), (coef, j, k));
            }
        }
        self.table = table;
    }

    fn check_associative(&self) -> Result<(), CrossedError> {
        let n0 = self.n0();
        let mut coefs = vec![n0.one()];
        coefs.extend(n0.level_generators());
        let g = coefs.last().unwrap().clone();
        for a in &self.group {
            for b in &self.group {
                for c in &self.group {
                    let x = self.term(g.clone(), a, &vec![0; self.rank()]);
                    let y = self.term(g.clone(), b, &vec![0; self.rank()]);
                    let z = self.term(n0.one(), c, &vec![0; self.rank()]);
                    let l = self.mul(&self.mul(&x, &y), &z);
                    let r = self.mul(&x, &self.mul(&y, &z));
                    if l != r {
                        return Err(CrossedError::NotAssociative(format!(
                            "z^{:?}, z^{:?}, z^{:?}",
                            a, b, c
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    // ---- elements ----

    pub fn zero(&self) -> AElem {
        AElem::default()
    }

    pub fn term(&self, c: Fe, j: &[u32], k: &[i64]) -> AElem {
        let mut map = BTreeMap::new();
        if !self.n0().is_zero(&c) {
            map.insert((j.to_vec(), k.to_vec()), c);
        }
        AElem(map)
    }

    pub fn one(&self) -> AElem {
        self.scalar(self.n0().one())
    }

    pub fn scalar(&self, c: Fe) -> AElem {
        let m = self.rank();
        self.term(c, &vec![0; m], &vec![0; m])
    }

    /// The generator `z_i`.
    pub fn z(&self, i: usize) -> AElem {
        let m = self.rank();
        let mut j = vec![0; m];
        j[i] = 1;
        self.term(self.n0().one(), &j, &vec![0; m])
    }

    /// The central monomial `t^k`.
    pub fn t(&self, k: &[i64]) -> AElem {
        self.term(self.n0().one(), &vec![0; self.rank()], k)
    }

    pub fn add(&self, x: &AElem, y: &AElem) -> AElem {
        let n0 = self.n0();
        let mut out = x.0.clone();
        for (key, c) in &y.0 {
            let v = match out.get(key) {
                Some(a) => n0.add(a, c),
                None => c.clone(),
            };
            if n0.is_zero(&v) {
                out.remove(key);
            } else {
                out.insert(key.clone(), v);
            }
        }
        AElem(out)
    }

    pub fn neg(&self, x: &AElem) -> AElem {
        AElem(x.0.iter().map(|(k, c)| (k.clone(), self.n0().neg(c))).collect())
    }

    pub fn sub(&self, x: &AElem, y: &AElem) -> AElem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &AElem, y: &AElem) -> AElem {
        let n0 = self.n0();
        let mut out: BTreeMap<MonoKey, Fe> = BTreeMap::new();
        for ((ja, ka), ca) in &x.0 {
            let sig = self.sigma(ja);
            for ((jb, kb), cb) in &y.0 {
                let (tc, j, tk) = &self.table[&(ja.clone(), jb.clone())];
                let c = n0.mul(&n0.mul(ca, &sig.apply(cb)), tc);
                let k: Vec<i64> = ka.iter().zip(kb).zip(tk).map(|((a, b), d)| a + b + d).collect();
                let key = (j.clone(), k);
                let v = match out.get(&key) {
                    Some(p) => n0.add(p, &c),
                    None => c,
                };
                if n0.is_zero(&v) {
                    out.remove(&key);
                } else {
                    out.insert(key, v);
                }
            }
        }
        AElem(out)
    }

    pub fn pow(&self, x: &AElem, e: u64) -> AElem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    pub fn is_homogeneous(&self, x: &AElem) -> bool {
        let mut grades = x.0.keys().map(|k| self.grade_of(k));
        match grades.next() {
            Some(g) => grades.all(|h| h == g),
            None => true,
        }
    }

    pub fn grade(&self, x: &AElem) -> Option<HullVector> {
        if x.is_zero() || !self.is_homogeneous(x) {
            return None;
        }
        Some(self.grade_of(x.0.keys().next().unwrap()))
    }

    /// Inverse of a monomial `c t^k z^j`: `x^(R-1)·(x^R)^(-1)` where `x^R`
    /// is the first power without `z`-part.
    pub fn inv(&self, x: &AElem) -> Result<AElem, CrossedError> {
        let n0 = self.n0();
        if x.single().is_none() {
            return Err(CrossedError::Unsupported("inverse of a non-monomial".into()));
        }
        let mut p = x.clone();
        let mut prev = self.one();
        for _ in 0..self.group.len() {
            let ((j, k), c) = p.single().ok_or(CrossedError::NotInvertible)?;
            if j.iter().all(|e| *e == 0) {
                let kinv: Vec<i64> = k.iter().map(|v| -v).collect();
                let base = self.term(n0.inv(c)?, j, &kinv);
                return Ok(self.mul(&prev, &base));
            }
            prev = p.clone();
            p = self.mul(&p, x);
        }
        Err(CrossedError::NotInvertible)
    }

    pub fn format(&self, x: &AElem) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let n0 = self.n0();
        x.0.iter()
            .map(|((j, k), c)| {
                let mut parts = vec![];
                let cs = n0.format(c);
                parts.push(if cs.contains(' ') { format!("({})", cs) } else { cs });
                if k.iter().any(|v| *v != 0) {
                    parts.push(format!(
                        "t^({})",
                        k.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                    ));
                }
                for (i, e) in j.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => parts.push(format!("z{}", i + 1)),
                        _ => parts.push(format!("z{}^{}", i + 1, e)),
                    }
                }
                parts.join("*")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Cyclic algebra `(N0((t))/E0((t)), Frobenius^s, b·t)` over a finite field
/// with `[N0:E0] = r` and `γ = 1/r`.
pub fn cyclic_algebra(e0: &Field, n0: &Field, b: Fe) -> Result<CrossedProduct, CrossedError> {
    let r = n0
        .degree_over(e0)
        .ok_or_else(|| CrossedError::Invalid("E0 is not a level of N0".into()))?;
    let q = e0.cardinality().ok_or_else(|| CrossedError::Unsupported("cyclic algebras need finite fields".into()))?;
    let p = e0.characteristic() as u128;
    let mut s = 0u32;
    let mut x = 1u128;
    while x < q {
        x *= p;
        s += 1;
    }
    let sigma = FieldHom::frobenius(n0, s)?;
    CrossedProduct::build(CrossedProductData {
        e0: e0.clone(),
        n0: n0.clone(),
        orders: vec![r as u64],
        sigmas: vec![sigma],
        u: vec![vec![n0.one()]],
        b: vec![b],
        grades: None,
    })
}

/// Crossed product over `Q(√d_1, ..., √d_m)` with `σ_i` flipping `√d_i`, all
/// `r_i = 2`.
pub fn multiquadratic_algebra(
    radicands: &[i64],
    u: Vec<Vec<Fe>>,
    b: Vec<Fe>,
) -> Result<CrossedProduct, CrossedError> {
    let n0 = Field::multi_quadratic(radicands)?;
    let m = radicands.len();
    CrossedProduct::build(CrossedProductData {
        e0: Field::rationals(),
        n0: n0.clone(),
        orders: vec![2; m],
        sigmas: (0..m).map(|i| FieldHom::sign_flip(&n0, 1 << i)).collect(),
        u,
        b,
        grades: None,
    })
}
