use crate::gmod::{binomial, IntMatrix};

use super::algebra::{add_entry, add_exponents, TwistedAlgebra};
use super::complex::{KoszulChain, KoszulResolution};
use super::KoszulError;

/// Semilinear chain map `φ_g` on the Koszul complex lifting the identity of `Z`,
/// with `φ_g(x^v c) = x^{A_g v} φ_g(c)`. Built degree by degree as `φ(e_J) = h(φ(d e_J))`.
#[derive(Clone, Debug)]
pub struct GActionChainData {
    pub g: usize,
    /// `images[q][idx]` is `φ_g(e_J)` for the `idx`-th `q`-subset `J`.
    pub images: Vec<Vec<KoszulChain>>,
}

impl GActionChainData {
    pub fn new(alg: &TwistedAlgebra, k: &KoszulResolution, g: usize) -> Result<Self, KoszulError> {
        let n = k.rank();
        let mut data = GActionChainData {
            g,
            images: vec![vec![k.unit()]],
        };
        for q in 1..=n {
            let mut level = Vec::with_capacity(binomial(n, q));
            for idx in 0..binomial(n, q) {
                let mut gen = KoszulChain::new();
                gen.insert((k.subset(q, idx), vec![0; n]), 1);
                let below = data.apply(alg, k, &k.d(&gen)?)?;
                level.push(k.h(&below)?);
            }
            data.images.push(level);
        }
        Ok(data)
    }

    /// `φ_g` on an arbitrary chain.
    pub fn apply(
        &self,
        alg: &TwistedAlgebra,
        k: &KoszulResolution,
        chain: &KoszulChain,
    ) -> Result<KoszulChain, KoszulError> {
        let mut out = KoszulChain::new();
        for ((j, v), &c) in chain {
            let q = j.count_ones() as usize;
            let shift = alg.act(self.g, v)?;
            for ((j2, w), &d) in &self.images[q][k.index(*j)] {
                add_entry(
                    &mut out,
                    (*j2, add_exponents(w, &shift)?),
                    c.checked_mul(d).ok_or(KoszulError::Overflow)?,
                )?;
            }
        }
        Ok(out)
    }

    /// Image of `φ_g` in degree `q` after setting `x = 1`; equals `Λ^q A_g`.
    pub fn leading_term(&self, k: &KoszulResolution, q: usize) -> Result<IntMatrix, KoszulError> {
        let size = binomial(k.rank(), q);
        let mut rows = vec![vec![0i64; size]; size];
        for (col, img) in self.images[q].iter().enumerate() {
            for ((j, _), &c) in img {
                let r = k.index(*j);
                rows[r][col] = rows[r][col].checked_add(c).ok_or(KoszulError::Overflow)?;
            }
        }
        Ok(IntMatrix::from_rows(&rows))
    }

    /// `dφ - φd` on the degree-`q` generators; all zero for a chain map.
    pub fn defect(
        &self,
        alg: &TwistedAlgebra,
        k: &KoszulResolution,
        q: usize,
    ) -> Result<Vec<KoszulChain>, KoszulError> {
        let n = k.rank();
        (0..binomial(n, q))
            .map(|idx| {
                let mut gen = KoszulChain::new();
                gen.insert((k.subset(q, idx), vec![0; n]), 1);
                let mut out = k.d(&self.images[q][idx])?;
                for (key, c) in self.apply(alg, k, &k.d(&gen)?)? {
                    add_entry(&mut out, key, -c)?;
                }
                Ok(out)
            })
            .collect()
    }
}
