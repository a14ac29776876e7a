use std::collections::BTreeMap;

use crate::gmod::{subset_index, subsets};

use super::algebra::{add_entry, geometric_terms, Exponent};
use super::KoszulError;

/// Subsets of `0..n` as bitmasks.
pub type Subset = u32;

/// Chain of the Koszul complex: coefficients of `x^v e_J`, keyed by `(J, v)`.
pub type KoszulChain = BTreeMap<(Subset, Exponent), i64>;

/// Koszul resolution of `Z` over `Z[x_1^{±1}, …, x_n^{±1}]` with
/// `d e_J = Σ_k (-1)^k (x_{j_k} - 1) e_{J \ j_k}` (positions `k` counted from 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KoszulResolution {
    n: usize,
}

impl KoszulResolution {
    pub fn new(n: usize) -> Self {
        assert!(n < 32, "rank too large");
        KoszulResolution { n }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Lexicographic index of `J` among the `|J|`-subsets.
    pub fn index(&self, j: Subset) -> usize {
        subset_index(self.n, &mask_to_vec(j))
    }

    /// Bitmask of the `idx`-th `q`-subset.
    pub fn subset(&self, q: usize, idx: usize) -> Subset {
        vec_to_mask(&subsets(self.n, q)[idx])
    }

    /// `d(x^v e_J)`.
    pub fn d_term(
        &self,
        v: &[i64],
        j: Subset,
        c: i64,
        out: &mut KoszulChain,
    ) -> Result<(), KoszulError> {
        for (k, i) in mask_to_vec(j).into_iter().enumerate() {
            let sign = if k % 2 == 0 { c } else { -c };
            let rest = j & !(1 << i);
            let mut up = v.to_vec();
            up[i] = up[i].checked_add(1).ok_or(KoszulError::Overflow)?;
            add_entry(out, (rest, up), sign)?;
            add_entry(out, (rest, v.to_vec()), -sign)?;
        }
        Ok(())
    }

    pub fn d(&self, chain: &KoszulChain) -> Result<KoszulChain, KoszulError> {
        let mut out = KoszulChain::new();
        for ((j, v), &c) in chain {
            self.d_term(v, *j, c, &mut out)?;
        }
        Ok(out)
    }

    /// Contracting homotopy:
    /// `h(x^v e_J) = Σ_{i < min J} s_{v_i}(x_i) x_{i+1}^{v_{i+1}} ⋯ x_n^{v_n} e_{{i} ∪ J}`.
    pub fn h_term(
        &self,
        v: &[i64],
        j: Subset,
        c: i64,
        out: &mut KoszulChain,
    ) -> Result<(), KoszulError> {
        let min = if j == 0 {
            self.n
        } else {
            j.trailing_zeros() as usize
        };
        for i in 0..min {
            let mut w = v.to_vec();
            for x in w.iter_mut().take(i) {
                *x = 0;
            }
            for (e, s) in geometric_terms(v[i]) {
                w[i] = e;
                add_entry(out, (j | (1 << i), w.clone()), s * c)?;
            }
        }
        Ok(())
    }

    pub fn h(&self, chain: &KoszulChain) -> Result<KoszulChain, KoszulError> {
        let mut out = KoszulChain::new();
        for ((j, v), &c) in chain {
            self.h_term(v, *j, c, &mut out)?;
        }
        Ok(out)
    }

    /// `ε`: sum of the coefficients on `e_∅`.
    pub fn augment(&self, chain: &KoszulChain) -> Result<i64, KoszulError> {
        chain
            .iter()
            .filter(|((j, _), _)| *j == 0)
            .try_fold(0i64, |acc, (_, &c)| {
                acc.checked_add(c).ok_or(KoszulError::Overflow)
            })
    }

    /// `e_∅` with exponent 0, the image of `1` under `η`.
    pub fn unit(&self) -> KoszulChain {
        let mut out = KoszulChain::new();
        out.insert((0, vec![0; self.n]), 1);
        out
    }
}

pub fn mask_to_vec(j: Subset) -> Vec<usize> {
    (0..32).filter(|&i| j & (1 << i) != 0).collect()
}

pub fn vec_to_mask(s: &[usize]) -> Subset {
    s.iter().fold(0, |m, &i| m | (1 << i))
}
