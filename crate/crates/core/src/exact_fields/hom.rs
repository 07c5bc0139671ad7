use super::{Fe, Field, FieldDesc, FieldError};

/// Field homomorphism `source -> target` given by the images of the
/// generators of every extension level of `source` (bottom first). The prime
/// field maps canonically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldHom {
    pub source: Field,
    pub target: Field,
    pub images: Vec<Fe>,
}

impl FieldHom {
    pub fn identity(f: &Field) -> Self {
        FieldHom {
            source: f.clone(),
            target: f.clone(),
            images: f.level_generators(),
        }
    }

    /// Inclusion of the tower level `sub` into `top`.
    pub fn inclusion(sub: &Field, top: &Field) -> Option<Self> {
        if !top.has_level(sub) {
            return None;
        }
        Some(FieldHom {
            source: sub.clone(),
            target: top.clone(),
            images: sub
                .level_generators()
                .iter()
                .map(|g| top.embed(sub, g).unwrap())
                .collect(),
        })
    }

    /// `x -> x^(p^j)` on a finite field.
    pub fn frobenius(f: &Field, j: u32) -> Result<Self, FieldError> {
        let q = f.characteristic() as u128;
        if q == 0 {
            return Err(FieldError::NotFinite(f.to_string()));
        }
        let e = q.pow(j);
        Ok(FieldHom {
            source: f.clone(),
            target: f.clone(),
            images: f.level_generators().iter().map(|g| f.pow(g, e)).collect(),
        })
    }

    /// On a multi-quadratic tower: `sqrt(d_i) -> -sqrt(d_i)` for the levels
    /// set in `mask` (bit `i` is level `i`, bottom first).
    pub fn sign_flip(f: &Field, mask: u32) -> Self {
        FieldHom {
            source: f.clone(),
            target: f.clone(),
            images: f
                .level_generators()
                .iter()
                .enumerate()
                .map(|(i, g)| if mask & (1 << i) != 0 { f.neg(g) } else { g.clone() })
                .collect(),
        }
    }

    pub fn apply(&self, a: &Fe) -> Fe {
        apply_level(&self.source, &self.target, &self.images, a)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FieldHom) -> FieldHom {
        assert!(other.target == self.source);
        FieldHom {
            source: other.source.clone(),
            target: self.target.clone(),
            images: other.images.iter().map(|x| self.apply(x)).collect(),
        }
    }

    /// Checks that the images satisfy the defining relations.
    pub fn is_well_defined(&self) -> bool {
        let tower = self.source.tower();
        tower.iter().skip(1).enumerate().all(|(i, lvl)| {
            let m = lvl.modulus().unwrap();
            let base = lvl.base().unwrap();
            let lower = &self.images[..i];
            let val = m.0.iter().rev().fold(self.target.zero(), |acc, c| {
                let c = apply_level(base, &self.target, lower, c);
                self.target.add(&self.target.mul(&acc, &self.images[i]), &c)
            });
            self.target.is_zero(&val)
        })
    }

    /// Order as an automorphism (`None` when not an endomorphism or > `bound`).
    pub fn order(&self, bound: usize) -> Option<usize> {
        if self.source != self.target {
            return None;
        }
        let id = FieldHom::identity(&self.source);
        let mut cur = self.clone();
        for k in 1..=bound {
            if cur == id {
                return Some(k);
            }
            cur = self.compose(&cur);
        }
        None
    }

    /// `true` when every element of the level `sub` is fixed.
    pub fn fixes(&self, sub: &Field) -> bool {
        sub.level_generators().iter().all(|g| {
            let x = self.source.embed(sub, g).unwrap();
            Some(self.apply(&x)) == self.target.embed(sub, g)
        })
    }
}

fn apply_level(src: &Field, tgt: &Field, images: &[Fe], a: &Fe) -> Fe {
    match (src.desc(), a) {
        (FieldDesc::Prime(_), Fe::Mod(x)) => tgt.from_int(*x as i64),
        (FieldDesc::Rationals, Fe::Rat(r)) => tgt.from_rational(r).unwrap(),
        (FieldDesc::Extension { base, .. }, Fe::Ext(v)) => {
            let (lower, top) = images.split_at(images.len() - 1);
            let g = &top[0];
            v.iter().rev().fold(tgt.zero(), |acc, c| {
                let c = apply_level(base, tgt, lower, c);
                tgt.add(&tgt.mul(&acc, g), &c)
            })
        }
        _ => panic!("element does not belong to {}", src),
    }
}
