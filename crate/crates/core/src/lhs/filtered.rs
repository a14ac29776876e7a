use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::exactlin::{Matrix, Subquotient};
use crate::gmod::FGModule;

use super::{LhsError, TwistedResolution};

/// Cochains `T^{p,q} = Hom_Γ(C_{p,q}, M) = M^{gens(p,q)}` for a module on which `L` acts
/// trivially, with `δ = f ∘ D` split into components `δ_k: T^{p-k, q+k-1} -> T^{p,q}`.
///
/// Layout of `T^{p,q}`: generator `(β, J)` occupies rows `(β · C(n,q) + J) · dim M ..`, which
/// matches the cochains of `Hom(Λ^q L, M)` on the same `G`-resolution.
#[derive(Clone, Debug)]
pub struct FilteredComplex<'a> {
    res: &'a TwistedResolution,
    module: FGModule,
    blocks: BTreeMap<(usize, usize, usize), Matrix>,
}

impl<'a> FilteredComplex<'a> {
    pub fn new(res: &'a TwistedResolution, module: FGModule) -> Result<Self, LhsError> {
        if **module.group() != **res.lattice().group() {
            return Err(LhsError::GroupMismatch);
        }
        let d = module.dim();
        let mut blocks = BTreeMap::new();
        let n = res.rank();
        for p in 1..=res.degree() {
            for q in 0..=n.min(res.degree() - p) {
                for k in 1..=p {
                    let Some(aug) = res.augmented(k, p, q) else {
                        continue;
                    };
                    let src = res.generators(p - k, q + k - 1);
                    let mut m = Matrix::zeros(module.field(), aug.len() * d, src * d);
                    for (gen, terms) in aug.iter().enumerate() {
                        for t in terms {
                            m.add_block_i64(gen * d, t.target * d, module.action(t.g), t.coeff);
                        }
                    }
                    if !m.is_zero() {
                        blocks.insert((k, p, q), m);
                    }
                }
            }
        }
        Ok(FilteredComplex {
            res,
            module,
            blocks,
        })
    }

    pub fn resolution(&self) -> &TwistedResolution {
        self.res
    }

    pub fn module(&self) -> &FGModule {
        &self.module
    }

    /// Highest total degree with cochains.
    pub fn degree(&self) -> usize {
        self.res.degree()
    }

    pub fn cell_dim(&self, p: usize, q: usize) -> usize {
        self.res.generators(p, q) * self.module.dim()
    }

    /// Filtration degrees `p` with a nonzero cell in total degree `n`.
    pub fn cells(&self, n: usize) -> RangeInclusive<usize> {
        n.saturating_sub(self.res.rank())..=n
    }

    pub fn total_dim(&self, n: usize) -> usize {
        self.cells(n).map(|p| self.cell_dim(p, n - p)).sum()
    }

    /// `δ_k: T^{p-k, q+k-1} -> T^{p,q}`; `None` when zero.
    pub fn block(&self, k: usize, p: usize, q: usize) -> Option<&Matrix> {
        self.blocks.get(&(k, p, q))
    }

    /// `δ` from cells `src` of `T^n` to cells `dst` of `T^{n+1}` (cells given by `p`).
    pub fn window(&self, n: usize, src: &[usize], dst: &[usize]) -> Matrix {
        let f = self.module.field();
        let src_dims: Vec<usize> = src.iter().map(|&p| self.cell_dim(p, n - p)).collect();
        let dst_dims: Vec<usize> = dst.iter().map(|&p| self.cell_dim(p, n + 1 - p)).collect();
        let mut m = Matrix::zeros(f, dst_dims.iter().sum(), src_dims.iter().sum());
        let mut r0 = 0;
        for (a, &pd) in dst.iter().enumerate() {
            let mut c0 = 0;
            for (b, &ps) in src.iter().enumerate() {
                if pd > ps {
                    if let Some(blk) = self.block(pd - ps, pd, n + 1 - pd) {
                        m.set_block(r0, c0, blk);
                    }
                }
                c0 += src_dims[b];
            }
            r0 += dst_dims[a];
        }
        m
    }

    /// Total differential `T^n -> T^{n+1}`, cells in increasing `p`.
    pub fn total_differential(&self, n: usize) -> Result<Matrix, LhsError> {
        if n + 1 > self.degree() {
            return Err(LhsError::DegreeBeyondTruncation {
                degree: n + 1,
                max: self.degree(),
            });
        }
        let src: Vec<usize> = self.cells(n).collect();
        let dst: Vec<usize> = self.cells(n + 1).collect();
        Ok(self.window(n, &src, &dst))
    }

    /// `dim H^n(Γ, M)` from ranks of the total differential.
    pub fn total_cohomology_dim(&self, n: usize) -> Result<usize, LhsError> {
        let out = self.total_differential(n)?.rank();
        let inc = if n == 0 {
            0
        } else {
            self.total_differential(n - 1)?.rank()
        };
        Ok(self.total_dim(n) - out - inc)
    }

    /// `H^n(Γ, M)` as a subquotient of `T^n`.
    pub fn total_cohomology(&self, n: usize) -> Result<Subquotient, LhsError> {
        let cycles = self.total_differential(n)?.kernel();
        let boundaries = if n == 0 {
            Matrix::zeros(self.module.field(), self.total_dim(0), 0)
        } else {
            self.total_differential(n - 1)?
        };
        Ok(Subquotient::new(&cycles, &boundaries)?)
    }

    /// `dim E_2^{p,q}` from the ranks of `δ_1` alone, without reference to group cohomology.
    pub fn e2_dim_from_d1(&self, p: usize, q: usize) -> usize {
        let out = self.block(1, p + 1, q).map_or(0, |m| m.rank());
        let inc = if p == 0 {
            0
        } else {
            self.block(1, p, q).map_or(0, |m| m.rank())
        };
        self.cell_dim(p, q) - out - inc
    }

    /// `δ ∘ δ = 0` on every pair of consecutive total degrees in range.
    pub fn is_complex(&self) -> Result<bool, LhsError> {
        for n in 0..self.degree().saturating_sub(1) {
            let dd = self
                .total_differential(n + 1)?
                .mul(&self.total_differential(n)?);
            if !dd.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
