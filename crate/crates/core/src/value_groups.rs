//! Value groups `Z^m` with lexicographic order, their divisible hulls `Q^m`,
//! full-rank lattices inside `Q^m` and finite quotients between them.
//!
//! Coordinates are always written dominant-first: the first coordinate has
//! the highest weight in the lexicographic order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub type Rat = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("generators do not span a full-rank lattice in Q^{0}")]
    NotFullRank(usize),
    #[error("cannot parse value vector `{0}`")]
    Parse(String),
}

/// Element of `Z^m` or the symbol `inf` exceeding every vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValueVector {
    Finite(Vec<i64>),
    Top,
}

impl ValueVector {
    pub fn add(&self, other: &ValueVector) -> Result<ValueVector, ValueError> {
        match (self, other) {
            (ValueVector::Finite(a), ValueVector::Finite(b)) => {
                if a.len() != b.len() {
                    return Err(ValueError::RankMismatch(a.len(), b.len()));
                }
                Ok(ValueVector::Finite(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => Ok(ValueVector::Top),
        }
    }
}

/// Lexicographic comparison, `Top` maximal.
pub fn lex_compare(a: &ValueVector, b: &ValueVector) -> Result<Ordering, ValueError> {
    match (a, b) {
        (ValueVector::Top, ValueVector::Top) => Ok(Ordering::Equal),
        (ValueVector::Top, _) => Ok(Ordering::Greater),
        (_, ValueVector::Top) => Ok(Ordering::Less),
        (ValueVector::Finite(x), ValueVector::Finite(y)) => {
            if x.len() != y.len() {
                return Err(ValueError::RankMismatch(x.len(), y.len()));
            }
            Ok(x.cmp(y))
        }
    }
}

/// Element of the divisible hull `Q^m`. The derived order is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HullVector(pub Vec<Rat>);

impl HullVector {
    pub fn zero(rank: usize) -> Self {
        HullVector(vec![Rat::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        HullVector(v.iter().map(|&x| Rat::from_integer(x)).collect())
    }

    /// Unit vector `e_i` scaled by `num/den`.
    pub fn unit(rank: usize, i: usize, num: i64, den: i64) -> Self {
        let mut v = vec![Rat::zero(); rank];
        v[i] = Rat::new(num, den);
        HullVector(v)
    }

    /// Same value in every coordinate.
    pub fn splat(rank: usize, x: Rat) -> Self {
        HullVector(vec![x; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &HullVector) -> HullVector {
        debug_assert_eq!(self.rank(), other.rank());
        HullVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &HullVector) -> HullVector {
        debug_assert_eq!(self.rank(), other.rank());
        HullVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> HullVector {
        HullVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: Rat) -> HullVector {
        HullVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn scale_int(&self, k: i64) -> HullVector {
        self.scale(Rat::from_integer(k))
    }

    /// `true` when `self > 0` in the lexicographic order.
    pub fn is_positive(&self) -> bool {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(c) => c.is_positive(),
            None => false,
        }
    }

    /// Index of the first nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator_lcm(&self) -> i64 {
        self.0.iter().fold(1i64, |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for HullVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// A value of a valuation: a finite hull vector or `inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Finite(HullVector),
    Top,
}

impl Value {
    pub fn finite(&self) -> Option<&HullVector> {
        match self {
            Value::Finite(h) => Some(h),
            Value::Top => None,
        }
    }

    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a.add(b)),
            _ => Value::Top,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(h) => write!(f, "{}", h),
            Value::Top => write!(f, "inf"),
        }
    }
}

fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for Value {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" {
            return Ok(Value::Top);
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ValueError::Parse(s.to_string()))?;
        let coords = inner
            .split(',')
            .map(|p| parse_rat(p).ok_or_else(|| ValueError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Value::Finite(HullVector(coords)))
    }
}

impl FromStr for HullVector {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<Value>()? {
            Value::Finite(h) => Ok(h),
            Value::Top => Err(ValueError::Parse(s.to_string())),
        }
    }
}

/// Full-rank lattice in `Q^m`, stored by an upper-triangular (row echelon)
/// basis with positive pivots on the diagonal and off-diagonal entries
/// reduced modulo the pivot below them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: Vec<HullVector>,
}

impl Lattice {
    pub fn standard(rank: usize) -> Self {
        Lattice {
            basis: (0..rank).map(|i| HullVector::unit(rank, i, 1, 1)).collect(),
        }
    }

    /// `(1/d_0)Z x ... x (1/d_{m-1})Z`.
    pub fn diagonal(denominators: &[i64]) -> Self {
        let m = denominators.len();
        Lattice {
            basis: denominators
                .iter()
                .enumerate()
                .map(|(i, &d)| HullVector::unit(m, i, 1, d))
                .collect(),
        }
    }

    /// Lattice spanned by `gens`; errors unless it has full rank.
    pub fn from_generators(rank: usize, gens: &[HullVector]) -> Result<Self, ValueError> {
        for g in gens {
            if g.rank() != rank {
                return Err(ValueError::RankMismatch(rank, g.rank()));
            }
        }
        let den = gens.iter().fold(1i64, |acc, g| acc.lcm(&g.denominator_lcm()));
        let rows: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| {
                g.0.iter()
                    .map(|c| (c * Rat::from_integer(den)).to_integer() as i128)
                    .collect()
            })
            .collect();
        let h = hermite_rows(rows, rank);
        if h.len() != rank {
            return Err(ValueError::NotFullRank(rank));
        }
        let basis = h
            .into_iter()
            .map(|row| HullVector(row.into_iter().map(|x| Rat::new(x as i64, den)).collect()))
            .collect();
        Ok(Lattice { basis })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[HullVector] {
        &self.basis
    }

    /// Rational coordinates of `h` with respect to the echelon basis.
    pub fn rational_coords(&self, h: &HullVector) -> Vec<Rat> {
        let m = self.rank();
        let mut rest = h.clone();
        let mut out = vec![Rat::zero(); m];
        for i in 0..m {
            let c = rest.0[i] / self.basis[i].0[i];
            out[i] = c;
            rest = rest.sub(&self.basis[i].scale(c));
        }
        out
    }

    /// Integer coordinates of `h`, or `None` when `h` is not in the lattice.
    pub fn coords(&self, h: &HullVector) -> Option<Vec<i64>> {
        self.rational_coords(h)
            .into_iter()
            .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
            .collect()
    }

    pub fn contains(&self, h: &HullVector) -> bool {
        self.coords(h).is_some()
    }

    pub fn combine(&self, coords: &[i64]) -> HullVector {
        let mut acc = HullVector::zero(self.rank());
        for (c, b) in coords.iter().zip(&self.basis) {
            acc = acc.add(&b.scale_int(*c));
        }
        acc
    }

    /// Canonical representative of `h` modulo the lattice.
    pub fn reduce(&self, h: &HullVector) -> HullVector {
        let mut rest = h.clone();
        for i in 0..self.rank() {
            let q = (rest.0[i] / self.basis[i].0[i]).floor();
            rest = rest.sub(&self.basis[i].scale(q));
        }
        rest
    }

    /// Absolute value of the determinant of the basis.
    pub fn covolume(&self) -> Rat {
        self.basis
            .iter()
            .enumerate()
            .fold(Rat::from_integer(1), |acc, (i, b)| acc * b.0[i])
    }

    /// `|sup : self|`, assuming `self ⊆ sup`.
    pub fn index_in(&self, sup: &Lattice) -> u64 {
        let r = self.covolume() / sup.covolume();
        debug_assert!(r.is_integer());
        r.to_integer() as u64
    }

    pub fn is_sublattice_of(&self, sup: &Lattice) -> bool {
        self.basis.iter().all(|b| sup.contains(b))
    }

    /// Lattice generated by `self` and extra vectors.
    pub fn extend(&self, extra: &[HullVector]) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend_from_slice(extra);
        Lattice::from_generators(self.rank(), &gens).expect("extension of a full-rank lattice")
    }

    /// Coset representatives of `sup / self` in canonical reduced form,
    /// sorted lexicographically. Assumes `self ⊆ sup`.
    pub fn coset_representatives(&self, sup: &Lattice) -> Vec<HullVector> {
        let mut seen = std::collections::BTreeSet::new();
        let mut queue = vec![HullVector::zero(self.rank())];
        seen.insert(HullVector::zero(self.rank()));
        while let Some(h) = queue.pop() {
            for b in sup.basis() {
                let n = self.reduce(&h.add(b));
                if seen.insert(n.clone()) {
                    queue.push(n);
                }
            }
        }
        seen.into_iter().collect()
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", b)?;
        }
        write!(f, ">")
    }
}

/// Least `e >= 1` with `e*h` in the lattice.
pub fn ramification_order(h: &HullVector, lattice: &Lattice) -> u64 {
    lattice
        .rational_coords(h)
        .iter()
        .fold(1i64, |acc, c| acc.lcm(c.denom())) as u64
}

/// Finite abelian group `(lattice + <generators>) / lattice`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuotient {
    pub generators: Vec<HullVector>,
    /// `d_1 | d_2 | ... | d_r`, all greater than one.
    pub invariant_factors: Vec<u64>,
}

impl FiniteQuotient {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() <= 1
    }
}

/// Invariant factors of the quotient generated by `generators` modulo `lattice`.
pub fn quotient_structure(generators: &[HullVector], lattice: &Lattice) -> FiniteQuotient {
    let m = lattice.rank();
    let coords: Vec<Vec<Rat>> = generators.iter().map(|g| lattice.rational_coords(g)).collect();
    let den = coords
        .iter()
        .flatten()
        .fold(1i64, |acc, c| acc.lcm(c.denom()));
    let mut rows: Vec<Vec<i128>> = coords
        .iter()
        .map(|c| c.iter().map(|x| (x * Rat::from_integer(den)).to_integer() as i128).collect())
        .collect();
    for i in 0..m {
        let mut r = vec![0i128; m];
        r[i] = den as i128;
        rows.push(r);
    }
    // rows of h span M; the quotient is M / den*Z^m.
    let h = hermite_rows(rows, m);
    // C = den * h^{-1}; h is upper triangular with positive pivots.
    let c = scaled_upper_inverse(&h, den as i128);
    let mut invariant_factors: Vec<u64> = smith_diagonal(c)
        .into_iter()
        .map(|d| d.unsigned_abs() as u64)
        .filter(|&d| d > 1)
        .collect();
    invariant_factors.sort_unstable();
    FiniteQuotient {
        generators: generators.to_vec(),
        invariant_factors,
    }
}

/// Row-style Hermite normal form; returns the nonzero rows, upper triangular.
fn hermite_rows(mut rows: Vec<Vec<i128>>, ncols: usize) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    for col in 0..ncols {
        // gcd-eliminate column `col` among the remaining rows
        loop {
            let mut pivot: Option<usize> = None;
            for (i, r) in rows.iter().enumerate() {
                if r[col] != 0 && pivot.map_or(true, |p| r[col].abs() < rows[p][col].abs()) {
                    pivot = Some(i);
                }
            }
            let Some(p) = pivot else { break };
            let mut done = true;
            let prow = rows[p].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i != p && r[col] != 0 {
                    let q = r[col].div_euclid(prow[col]);
                    for (x, y) in r.iter_mut().zip(&prow) {
                        *x -= q * y;
                    }
                    if r[col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let mut row = rows.swap_remove(p);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                out.push(row);
                break;
            }
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
    }
    // reduce entries above pivots
    for i in 0..out.len() {
        let piv_col = (0..ncols).find(|&c| out[i][c] != 0).unwrap();
        let prow = out[i].clone();
        for r in out.iter_mut().take(i) {
            let q = r[piv_col].div_euclid(prow[piv_col]);
            for (x, y) in r.iter_mut().zip(&prow) {
                *x -= q * y;
            }
        }
    }
    out
}

/// `scale * h^{-1}` for an upper-triangular integer matrix whose inverse
/// times `scale` is integral.
fn scaled_upper_inverse(h: &[Vec<i128>], scale: i128) -> Vec<Vec<i128>> {
    let m = h.len();
    let hr: Vec<Vec<Rat>> = h
        .iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(x as i64)).collect())
        .collect();
    let mut inv = vec![vec![Rat::zero(); m]; m];
    for i in (0..m).rev() {
        inv[i][i] = Rat::from_integer(1) / hr[i][i];
        for j in (i + 1)..m {
            let mut s = Rat::zero();
            for k in (i + 1)..=j {
                s += hr[i][k] * inv[k][j];
            }
            inv[i][j] = -s / hr[i][i];
        }
    }
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    let y = x * Rat::from_integer(scale as i64);
                    debug_assert!(y.is_integer());
                    y.to_integer() as i128
                })
                .collect()
        })
        .collect()
}

/// Diagonal of the Smith normal form of an integer matrix.
pub(crate) fn smith_diagonal(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pick smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for r in a.iter_mut() {
            r.swap(t, bj);
        }
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in (t + 1)..rows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in (t + 1)..cols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for r in a.iter_mut().skip(t) {
                        r[j] -= q * r[t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // divisibility: pivot must divide the rest of the block
                let mut bad = None;
                'outer: for i in (t + 1)..rows {
                    for j in (t + 1)..cols {
                        if a[i][j] % p != 0 {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            let v = a[i][j];
                            a[t][j] += v;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/col t into the pivot
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for r in a.iter_mut() {
                r.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}
