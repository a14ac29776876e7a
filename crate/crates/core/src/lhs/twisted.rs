use std::collections::BTreeMap;

use crate::gcoh::GResolution;
use crate::gmod::{binomial, GLattice};
use crate::koszul::{add_entry, Exponent, KoszulChain, KoszulResolution, Subset, TwistedAlgebra};

use super::LhsError;

/// Element of a free `ZΓ`-module on generators `(β, J)`: coefficients of `x^v g · (β, J)`,
/// keyed by `(β, J, v, g)`.
pub type FreeChain = BTreeMap<(usize, Subset, Exponent, usize), i64>;

/// One term of a differential after setting `x = 1`: `coeff · g · target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AugTerm {
    pub target: usize,
    pub g: usize,
    pub coeff: i64,
}

/// Free resolution of `Z` over `Z[L ⋊ G]` on generators `C_{p,q} = B_p ⊗ Λ^q`, with
/// differential `D = Σ_k D_k`, `D_k: C_{p,q} -> C_{p-k, q+k-1}`, built by perturbation
/// from a `G`-resolution and the Koszul resolution of `L`.
///
/// Generator `(β, J)` of `C_{p,q}` has index `β · C(n, q) + index(J)`.
#[derive(Clone, Debug)]
pub struct TwistedResolution {
    lattice: GLattice,
    alg: TwistedAlgebra,
    koszul: KoszulResolution,
    gres: GResolution,
    degree: usize,
    /// `(k, p, q) -> D_k` on every generator of `C_{p,q}`, for `k >= 1`.
    components: BTreeMap<(usize, usize, usize), Vec<FreeChain>>,
    augmented: BTreeMap<(usize, usize, usize), Vec<Vec<AugTerm>>>,
}

impl TwistedResolution {
    /// Builds every `C_{p,q}` with `p + q <= degree`. The `G`-resolution must reach `degree`.
    pub fn build(lattice: &GLattice, gres: GResolution, degree: usize) -> Result<Self, LhsError> {
        if gres.length() < degree {
            return Err(LhsError::DegreeBeyondTruncation {
                degree,
                max: gres.length(),
            });
        }
        if **gres.group() != **lattice.group() {
            return Err(LhsError::GroupMismatch);
        }
        let n = lattice.rank();
        let mut res = TwistedResolution {
            lattice: lattice.clone(),
            alg: TwistedAlgebra::new(lattice)?,
            koszul: KoszulResolution::new(n),
            gres,
            degree,
            components: BTreeMap::new(),
            augmented: BTreeMap::new(),
        };
        for k in 1..=degree {
            for p in k..=degree {
                for q in 0..=n.min(degree - p) {
                    if q + k - 1 > n {
                        continue;
                    }
                    let gens = res.gres.rank(p) * binomial(n, q);
                    let mut out = Vec::with_capacity(gens);
                    for gen in 0..gens {
                        out.push(res.compute_component(k, p, q, gen)?);
                    }
                    res.components.insert((k, p, q), out);
                }
            }
        }
        let keys: Vec<_> = res.components.keys().copied().collect();
        for key in keys {
            let aug = res.augment_component(key);
            res.augmented.insert(key, aug);
        }
        Ok(res)
    }

    pub fn lattice(&self) -> &GLattice {
        &self.lattice
    }

    pub fn g_resolution(&self) -> &GResolution {
        &self.gres
    }

    pub fn rank(&self) -> usize {
        self.koszul.rank()
    }

    /// Highest total degree `p + q` with generators.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of generators of `C_{p,q}`.
    pub fn generators(&self, p: usize, q: usize) -> usize {
        if q > self.rank() || p > self.gres.length() {
            return 0;
        }
        self.gres.rank(p) * binomial(self.rank(), q)
    }

    fn split(&self, q: usize, gen: usize) -> (usize, Subset) {
        let c = binomial(self.rank(), q);
        (gen / c, self.koszul.subset(q, gen % c))
    }

    fn join(&self, beta: usize, j: Subset) -> usize {
        beta * binomial(self.rank(), j.count_ones() as usize) + self.koszul.index(j)
    }

    fn generator(&self, q: usize, gen: usize) -> FreeChain {
        let (beta, j) = self.split(q, gen);
        let mut c = FreeChain::new();
        c.insert((beta, j, vec![0; self.rank()], 0), 1);
        c
    }

    /// `D_k` on generator `gen` of `C_{p,q}`, as stored.
    pub fn component(&self, k: usize, p: usize, q: usize, gen: usize) -> Option<&FreeChain> {
        self.components.get(&(k, p, q)).map(|v| &v[gen])
    }

    /// `D_k` on every generator of `C_{p,q}` with `x = 1`, targets indexed in `C_{p-k, q+k-1}`.
    /// `None` when the component is zero or outside the build range.
    pub fn augmented(&self, k: usize, p: usize, q: usize) -> Option<&[Vec<AugTerm>]> {
        self.augmented.get(&(k, p, q)).map(|v| v.as_slice())
    }

    fn augment_component(&self, key: (usize, usize, usize)) -> Vec<Vec<AugTerm>> {
        self.components[&key]
            .iter()
            .map(|chain| {
                let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
                for ((beta, j, _, g), &c) in chain {
                    *acc.entry((self.join(*beta, *j), *g)).or_default() += c;
                }
                acc.into_iter()
                    .filter(|&(_, c)| c != 0)
                    .map(|((target, g), coeff)| AugTerm { target, g, coeff })
                    .collect()
            })
            .collect()
    }

    /// `D_0` (the Koszul differential extended `ZΓ`-linearly).
    pub fn apply_d0(&self, chain: &FreeChain) -> Result<FreeChain, LhsError> {
        let mut out = FreeChain::new();
        for ((beta, j, v, g), &c) in chain {
            let mut kc = KoszulChain::new();
            self.koszul.d_term(&vec![0; self.rank()], *j, 1, &mut kc)?;
            for ((j2, w), d) in kc {
                let (v2, g2) = self.alg.mul_monomials((v, *g), (&w, 0))?;
                add_entry(&mut out, (*beta, j2, v2, g2), mul(c, d)?)?;
            }
        }
        Ok(out)
    }

    /// `D_k` for `k >= 1`, extended `ZΓ`-linearly from the stored generator values.
    /// `p` is the filtration degree of `chain`.
    pub fn apply_dk(&self, k: usize, p: usize, chain: &FreeChain) -> Result<FreeChain, LhsError> {
        let mut out = FreeChain::new();
        for ((beta, j, v, g), &c) in chain {
            let q = j.count_ones() as usize;
            let Some(images) = self.components.get(&(k, p, q)) else {
                continue;
            };
            for ((b2, j2, w, h), &d) in &images[self.join(*beta, *j)] {
                let (v2, g2) = self.alg.mul_monomials((v, *g), (w, *h))?;
                add_entry(&mut out, (*b2, *j2, v2, g2), mul(c, d)?)?;
            }
        }
        Ok(out)
    }

    /// Column contracting homotopy: on `x^v g (β, J) = g x^{A_g^{-1} v} (β, J)` apply the
    /// Koszul homotopy to the `L`-part and move `g` back to the left.
    pub fn column_homotopy(&self, chain: &FreeChain) -> Result<FreeChain, LhsError> {
        let group = self.alg.group().clone();
        let mut out = FreeChain::new();
        for ((beta, j, v, g), &c) in chain {
            let w = self.alg.act(group.inv(*g), v)?;
            let mut kc = KoszulChain::new();
            self.koszul.h_term(&w, *j, c, &mut kc)?;
            for ((j2, w2), d) in kc {
                add_entry(&mut out, (*beta, j2, self.alg.act(*g, &w2)?, *g), d)?;
            }
        }
        Ok(out)
    }

    fn compute_component(
        &self,
        k: usize,
        p: usize,
        q: usize,
        gen: usize,
    ) -> Result<FreeChain, LhsError> {
        let u = self.generator(q, gen);
        if k == 1 && q == 0 {
            let (beta, _) = self.split(0, gen);
            let mut out = FreeChain::new();
            for t in self.gres.boundary(p, beta) {
                add_entry(&mut out, (t.target, 0, vec![0; self.rank()], t.g), t.coeff)?;
            }
            return Ok(out);
        }
        // Z = D_k D_0 u + Σ_{0<i<k} D_i D_{k-i} u, then D_k u = -h(Z)
        let mut z = if q > 0 {
            self.apply_dk(k, p, &self.apply_d0(&u)?)?
        } else {
            FreeChain::new()
        };
        for i in 1..k {
            let inner = self.apply_dk(k - i, p, &u)?;
            for (key, c) in self.apply_dk(i, p - k + i, &inner)? {
                add_entry(&mut z, key, c)?;
            }
        }
        if q + k == 2 {
            let order = self.alg.group().order();
            let mut eps = vec![0i64; self.gres.rank(p - k) * order];
            for ((beta, _, _, g), &c) in &z {
                eps[beta * order + g] += c;
            }
            if eps.iter().any(|&x| x != 0) {
                return Err(LhsError::RecursionFailure { k, p, q });
            }
        }
        let mut out = FreeChain::new();
        for (key, c) in self.column_homotopy(&z)? {
            add_entry(&mut out, key, -c)?;
        }
        Ok(out)
    }

    /// `Σ_{i+j=k} D_i D_j u = 0` on every generator with all terms inside the build range.
    pub fn verify_square_zero(&self) -> Result<bool, LhsError> {
        let n = self.rank();
        for p in 0..=self.degree {
            for q in 0..=n.min(self.degree - p) {
                for gen in 0..self.generators(p, q) {
                    let u = self.generator(q, gen);
                    for k in 0..=p {
                        if q + k < 2 || q + k - 2 > n {
                            continue;
                        }
                        let mut acc = FreeChain::new();
                        for i in 0..=k {
                            let first = if k - i == 0 {
                                self.apply_d0(&u)?
                            } else {
                                self.apply_dk(k - i, p, &u)?
                            };
                            let second = if i == 0 {
                                self.apply_d0(&first)?
                            } else {
                                self.apply_dk(i, p - (k - i), &first)?
                            };
                            for (key, c) in second {
                                add_entry(&mut acc, key, c)?;
                            }
                        }
                        if !acc.is_empty() {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

fn mul(a: i64, b: i64) -> Result<i64, LhsError> {
    a.checked_mul(b).ok_or(LhsError::Overflow)
}
