use std::collections::BTreeMap;
use std::sync::Arc;

use crate::gmod::{FiniteGroup, GLattice};

use super::KoszulError;

pub type Exponent = Vec<i64>;

/// Integral Laurent polynomial in `n` variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    pub terms: BTreeMap<Exponent, i64>,
}

impl LaurentPoly {
    pub fn monomial(v: Exponent, c: i64) -> Self {
        let mut p = LaurentPoly::default();
        p.add_term(v, c).expect("single term cannot overflow");
        p
    }

    pub fn add_term(&mut self, v: Exponent, c: i64) -> Result<(), KoszulError> {
        add_entry(&mut self.terms, v, c)
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly, KoszulError> {
        let mut out = self.clone();
        for (v, &c) in &other.terms {
            out.add_term(v.clone(), c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, KoszulError> {
        let mut out = LaurentPoly::default();
        for (v, &a) in &self.terms {
            for (w, &b) in &other.terms {
                out.add_term(
                    add_exponents(v, w)?,
                    a.checked_mul(b).ok_or(KoszulError::Overflow)?,
                )?;
            }
        }
        Ok(out)
    }

    /// Value at `x = 1`.
    pub fn augment(&self) -> Result<i64, KoszulError> {
        self.terms.values().try_fold(0i64, |acc, &c| {
            acc.checked_add(c).ok_or(KoszulError::Overflow)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `s_k(x) = 1 + x + … + x^{k-1}` for `k > 0`, `-(x^{-1} + … + x^k)` for `k < 0`, `0` for `k = 0`,
/// so that `(x - 1) s_k(x) = x^k - 1`. Returned as `(exponent, coefficient)` pairs.
pub fn geometric_terms(k: i64) -> impl Iterator<Item = (i64, i64)> {
    let (range, sign) = if k >= 0 { (0..k, 1) } else { (k..0, -1) };
    range.map(move |e| (e, sign))
}

/// The group ring `Z[L ⋊ G]`: the lattice action data needed to multiply `x^v g`.
#[derive(Clone, Debug)]
pub struct TwistedAlgebra {
    group: Arc<FiniteGroup>,
    rank: usize,
    mats: Vec<Vec<i64>>,
}

impl TwistedAlgebra {
    pub fn new(lattice: &GLattice) -> Result<Self, KoszulError> {
        let mats = lattice
            .actions()
            .iter()
            .map(|a| a.to_i64().ok_or(KoszulError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(TwistedAlgebra {
            group: lattice.group().clone(),
            rank: lattice.rank(),
            mats,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `A_g v`.
    pub fn act(&self, g: usize, v: &[i64]) -> Result<Exponent, KoszulError> {
        let n = self.rank;
        let a = &self.mats[g];
        (0..n)
            .map(|i| {
                (0..n).try_fold(0i64, |acc, j| {
                    a[i * n + j]
                        .checked_mul(v[j])
                        .and_then(|t| acc.checked_add(t))
                        .ok_or(KoszulError::Overflow)
                })
            })
            .collect()
    }

    /// `(x^v g)(x^w h) = x^{v + A_g w} gh`.
    pub fn mul_monomials(
        &self,
        (v, g): (&[i64], usize),
        (w, h): (&[i64], usize),
    ) -> Result<(Exponent, usize), KoszulError> {
        Ok((add_exponents(v, &self.act(g, w)?)?, self.group.mul(g, h)))
    }

    pub fn mul(
        &self,
        a: &TwistedElement,
        b: &TwistedElement,
    ) -> Result<TwistedElement, KoszulError> {
        let mut out = TwistedElement::default();
        for ((v, g), &c) in &a.terms {
            for ((w, h), &d) in &b.terms {
                let key = self.mul_monomials((v, *g), (w, *h))?;
                add_entry(
                    &mut out.terms,
                    key,
                    c.checked_mul(d).ok_or(KoszulError::Overflow)?,
                )?;
            }
        }
        Ok(out)
    }
}

/// Element of `Z[L ⋊ G]` as a combination of `x^v g`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwistedElement {
    pub terms: BTreeMap<(Exponent, usize), i64>,
}

impl TwistedElement {
    pub fn monomial(v: Exponent, g: usize, c: i64) -> Self {
        let mut e = TwistedElement::default();
        if c != 0 {
            e.terms.insert((v, g), c);
        }
        e
    }

    /// Image in `Z[G]` under `x ↦ 1`, indexed by group element.
    pub fn augment(&self, order: usize) -> Result<Vec<i64>, KoszulError> {
        let mut out = vec![0i64; order];
        for ((_, g), &c) in &self.terms {
            out[*g] = out[*g].checked_add(c).ok_or(KoszulError::Overflow)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn add_exponents(v: &[i64], w: &[i64]) -> Result<Exponent, KoszulError> {
    v.iter()
        .zip(w)
        .map(|(a, b)| a.checked_add(*b).ok_or(KoszulError::Overflow))
        .collect()
}

/// Adds `c` at `key`, dropping entries that cancel.
pub(crate) fn add_entry<K: Ord>(
    map: &mut BTreeMap<K, i64>,
    key: K,
    c: i64,
) -> Result<(), KoszulError> {
    if c == 0 {
        return Ok(());
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get().checked_add(c).ok_or(KoszulError::Overflow)?;
            if s == 0 {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::IntMatrix;

    #[test]
    fn geometric_sum_identity() {
        for k in -5..=5 {
            let s = LaurentPoly {
                terms: geometric_terms(k).map(|(e, c)| (vec![e], c)).collect(),
            };
            let x_minus_1 = LaurentPoly::monomial(vec![1], 1)
                .add(&LaurentPoly::monomial(vec![0], -1))
                .unwrap();
            let mut expect = LaurentPoly::monomial(vec![k], 1);
            expect.add_term(vec![0], -1).unwrap();
            assert_eq!(x_minus_1.mul(&s).unwrap(), expect, "k = {k}");
        }
    }

    #[test]
    fn twisted_multiplication_is_associative() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let l = GLattice::from_generators(
            g,
            2,
            &[(1, IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]))],
        )
        .unwrap();
        let alg = TwistedAlgebra::new(&l).unwrap();
        let a = TwistedElement::monomial(vec![1, 2], 1, 3);
        let b = TwistedElement::monomial(vec![-1, 0], 3, 1);
        let c = TwistedElement::monomial(vec![0, 5], 2, -2);
        let ab_c = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
        // g x = x^{A_g e_1} g
        let gx = alg
            .mul(
                &TwistedElement::monomial(vec![0, 0], 1, 1),
                &TwistedElement::monomial(vec![1, 0], 0, 1),
            )
            .unwrap();
        assert_eq!(gx, TwistedElement::monomial(vec![0, 1], 1, 1));
    }
}
