use crate::exactlin::{FieldSpec, Matrix};
use crate::gmod::{
    binomial, inclusion_prime, inclusion_second, projection_prime, projection_second, FGModule,
    GLattice, IntMatrix, WedgeDecomposition, WedgeOrder,
};

use super::DecompError;

/// A lattice `L = L' ⊕ L''` with both summands kept, over a field, with the wedge ordering
/// used to identify `Λ^n L` with `⊕ Λ^i L' ⊗ Λ^j L''`.
#[derive(Clone, Debug)]
pub struct Split {
    pub prime: GLattice,
    pub second: GLattice,
    pub sum: GLattice,
    pub field: FieldSpec,
    pub order: WedgeOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Prime,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecompKind {
    /// `C'^r_j` on `Hom(Λ^i L', Λ^{i+r-1} L')`.
    CPrime {
        r: usize,
        i: usize,
        j: usize,
    },
    /// `C''^r_i` on `Hom(Λ^j L'', Λ^{j+r-1} L'')`.
    CSecond {
        r: usize,
        i: usize,
        j: usize,
    },
    /// `D'^r` on `Hom(Λ^i L, Λ^{i+r-1} L)`.
    DPrime {
        r: usize,
        i: usize,
    },
    DSecond {
        r: usize,
        j: usize,
    },
}

/// A linear map between `Hom` modules, in the `Hom` coordinates of `FGModule::hom`.
#[derive(Clone, Debug)]
pub struct DecompMap {
    pub kind: DecompKind,
    pub source: FGModule,
    pub target: FGModule,
    pub matrix: Matrix,
    pub equivariant: bool,
}

impl DecompMap {
    fn new(kind: DecompKind, source: FGModule, target: FGModule, matrix: Matrix) -> Self {
        let equivariant = source.is_equivariant_map(&target, &matrix);
        DecompMap {
            kind,
            source,
            target,
            matrix,
            equivariant,
        }
    }
}

/// Matrix of `f ↦ post · f · pre` in `Hom` coordinates (`f(e_a)_b` at `a · rows(f) + b`).
pub fn hom_operator(post: &Matrix, pre: &Matrix) -> Matrix {
    pre.transpose().kron(post)
}

/// Matrix of an arbitrary linear `f ↦ op(f)` from `Hom(F^a, F^b)` to `Hom(F^c, F^d)`.
fn operator(
    field: FieldSpec,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    op: impl Fn(&Matrix) -> Matrix,
) -> Matrix {
    let mut out = Matrix::zeros(field, c * d, a * b);
    for x in 0..a {
        for y in 0..b {
            let mut f = Matrix::zeros(field, b, a);
            f.set(y, x, field.one());
            let img = op(&f);
            for u in 0..c {
                for v in 0..d {
                    let e = img.get(v, u);
                    if !field.is_zero(&e) {
                        out.set(u * d + v, x * b + y, e);
                    }
                }
            }
        }
    }
    out
}

impl Split {
    pub fn new(
        prime: GLattice,
        second: GLattice,
        field: FieldSpec,
        order: WedgeOrder,
    ) -> Result<Self, DecompError> {
        let sum = prime.direct_sum(&second)?;
        Ok(Split {
            prime,
            second,
            sum,
            field,
            order,
        })
    }

    /// Checks that a declared sum is exactly block diagonal with the given summands.
    pub fn declared(
        sum: GLattice,
        prime: GLattice,
        second: GLattice,
        field: FieldSpec,
        order: WedgeOrder,
    ) -> Result<Self, DecompError> {
        let expected = prime.direct_sum(&second)?;
        if expected.rank() != sum.rank() || expected.actions() != sum.actions() {
            return Err(DecompError::NotBlockDiagonal);
        }
        Ok(Split {
            prime,
            second,
            sum,
            field,
            order,
        })
    }

    pub fn with_order(&self, order: WedgeOrder) -> Self {
        Split {
            order,
            ..self.clone()
        }
    }

    pub fn lattice(&self, side: Side) -> &GLattice {
        match side {
            Side::Prime => &self.prime,
            Side::Second => &self.second,
        }
    }

    fn wedge(&self, l: &GLattice, t: usize) -> FGModule {
        FGModule::from_lattice(&l.wedge_power(t), self.field)
    }

    /// `Hom(Λ^a X, Λ^b X)`.
    pub fn hom_module(&self, l: &GLattice, a: usize, b: usize) -> Result<FGModule, DecompError> {
        Ok(FGModule::hom(&self.wedge(l, a), &self.wedge(l, b))?)
    }

    fn decomposition(&self, n: usize) -> WedgeDecomposition {
        WedgeDecomposition::new(self.prime.rank(), self.second.rank(), n, self.order)
    }

    /// Columns of the decomposition isomorphism of `Λ^n L` spanning summand `(i, j)`.
    fn summand_columns(&self, i: usize, j: usize) -> Matrix {
        let n = i + j;
        let dec = self.decomposition(n);
        let dim = binomial(self.sum.rank(), n);
        match dec.summand(i, j) {
            Some((off, d)) => {
                let idx: Vec<usize> = (off..off + d).collect();
                dec.iso.to_field(self.field).select_columns(&idx)
            }
            None => {
                let d = binomial(self.prime.rank(), i) * binomial(self.second.rank(), j);
                Matrix::zeros(self.field, dim, d)
            }
        }
    }

    /// `C'^r_j(f)(x ⊗ y) = f(x) ⊗ y` on the summand `Λ^i L' ⊗ Λ^j L''`, zero elsewhere.
    pub fn c_prime(&self, r: usize, i: usize, j: usize) -> Result<DecompMap, DecompError> {
        assert!(r >= 1);
        let (n1, n2) = (self.prime.rank(), self.second.rank());
        let b = i + r - 1;
        let source = self.hom_module(&self.prime, i, b)?;
        let target = self.hom_module(&self.sum, i + j, b + j)?;
        let s_src = self.summand_columns(i, j);
        let s_tgt = self.summand_columns(b, j);
        let id = Matrix::identity(self.field, binomial(n2, j));
        let (da, db) = (binomial(n1, i), binomial(n1, b));
        let (dc, dd) = (s_src.rows(), s_tgt.rows());
        let m = operator(self.field, da, db, dc, dd, |f| {
            s_tgt.mul(&f.kron(&id)).mul(&s_src.transpose())
        });
        Ok(DecompMap::new(
            DecompKind::CPrime { r, i, j },
            source,
            target,
            m,
        ))
    }

    /// `C''^r_i(f)(x ⊗ y) = x ⊗ f(y)` on the summand `Λ^i L' ⊗ Λ^j L''`, zero elsewhere.
    pub fn c_second(&self, r: usize, i: usize, j: usize) -> Result<DecompMap, DecompError> {
        assert!(r >= 1);
        let (n1, n2) = (self.prime.rank(), self.second.rank());
        let b = j + r - 1;
        let source = self.hom_module(&self.second, j, b)?;
        let target = self.hom_module(&self.sum, i + j, i + b)?;
        let s_src = self.summand_columns(i, j);
        let s_tgt = self.summand_columns(i, b);
        let id = Matrix::identity(self.field, binomial(n1, i));
        let (da, db) = (binomial(n2, j), binomial(n2, b));
        let (dc, dd) = (s_src.rows(), s_tgt.rows());
        let m = operator(self.field, da, db, dc, dd, |f| {
            s_tgt.mul(&id.kron(f)).mul(&s_src.transpose())
        });
        Ok(DecompMap::new(
            DecompKind::CSecond { r, i, j },
            source,
            target,
            m,
        ))
    }

    /// `D'^r(f)(x) = Λ^{i+r-1} p'(f(x ⊗ 1))`.
    pub fn d_prime(&self, r: usize, i: usize) -> Result<DecompMap, DecompError> {
        assert!(r >= 1);
        let b = i + r - 1;
        let source = self.hom_module(&self.sum, i, b)?;
        let target = self.hom_module(&self.prime, i, b)?;
        let x_to_sum = self.summand_columns(i, 0);
        let p = projection_prime(self.prime.rank(), self.second.rank())
            .compound(b)
            .to_field(self.field);
        let m = hom_operator(&p, &x_to_sum);
        Ok(DecompMap::new(
            DecompKind::DPrime { r, i },
            source,
            target,
            m,
        ))
    }

    /// `D''^r(f)(y) = Λ^{j+r-1} p''(f(1 ⊗ y))`.
    pub fn d_second(&self, r: usize, j: usize) -> Result<DecompMap, DecompError> {
        assert!(r >= 1);
        let b = j + r - 1;
        let source = self.hom_module(&self.sum, j, b)?;
        let target = self.hom_module(&self.second, j, b)?;
        let y_to_sum = self.summand_columns(0, j);
        let p = projection_second(self.prime.rank(), self.second.rank())
            .compound(b)
            .to_field(self.field);
        let m = hom_operator(&p, &y_to_sum);
        Ok(DecompMap::new(
            DecompKind::DSecond { r, j },
            source,
            target,
            m,
        ))
    }

    pub fn c_map(
        &self,
        side: Side,
        r: usize,
        i: usize,
        j: usize,
    ) -> Result<DecompMap, DecompError> {
        match side {
            Side::Prime => self.c_prime(r, i, j),
            Side::Second => self.c_second(r, i, j),
        }
    }

    /// `D^r` on `Hom(Λ^a L, Λ^{a+r-1} L)` towards the chosen summand.
    pub fn d_map(&self, side: Side, r: usize, a: usize) -> Result<DecompMap, DecompError> {
        match side {
            Side::Prime => self.d_prime(r, a),
            Side::Second => self.d_second(r, a),
        }
    }

    fn inclusion(&self, side: Side) -> IntMatrix {
        match side {
            Side::Prime => inclusion_prime(self.prime.rank(), self.second.rank()),
            Side::Second => inclusion_second(self.prime.rank(), self.second.rank()),
        }
    }

    fn projection(&self, side: Side) -> IntMatrix {
        match side {
            Side::Prime => projection_prime(self.prime.rank(), self.second.rank()),
            Side::Second => projection_second(self.prime.rank(), self.second.rank()),
        }
    }

    /// `p^* ∘ ι_*`: `f ↦ Λ^{a+r-1} ι ∘ f ∘ Λ^a p`, built from compound matrices only.
    pub fn c_zero_factored(&self, side: Side, r: usize, a: usize) -> Matrix {
        let b = a + r - 1;
        let post = self.inclusion(side).compound(b).to_field(self.field);
        let pre = self.projection(side).compound(a).to_field(self.field);
        hom_operator(&post, &pre)
    }

    /// `p_* ∘ ι^*`: `f ↦ Λ^{a+r-1} p ∘ f ∘ Λ^a ι`.
    pub fn d_factored(&self, side: Side, r: usize, a: usize) -> Matrix {
        let b = a + r - 1;
        let post = self.projection(side).compound(b).to_field(self.field);
        let pre = self.inclusion(side).compound(a).to_field(self.field);
        hom_operator(&post, &pre)
    }

    /// `f ↦ f ∘ Λ^t p` from `Hom(Λ^t X, M)` to `Hom(Λ^t L, M)` (inflation along `L -> X`).
    pub fn pull_back_projection(&self, side: Side, t: usize, m: &FGModule) -> Matrix {
        let pre = self.projection(side).compound(t).to_field(self.field);
        hom_operator(&Matrix::identity(self.field, m.dim()), &pre)
    }

    /// `f ↦ f ∘ Λ^t ι` from `Hom(Λ^t L, M)` to `Hom(Λ^t X, M)` (restriction along `X -> L`).
    pub fn pull_back_inclusion(&self, side: Side, t: usize, m: &FGModule) -> Matrix {
        let pre = self.inclusion(side).compound(t).to_field(self.field);
        hom_operator(&Matrix::identity(self.field, m.dim()), &pre)
    }
}

/// Outcome of the matrix identities relating the `C`/`D` maps to `ι`, `p`.
#[derive(Clone, Debug, Default)]
pub struct FactorizationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// For `1 <= r <= max_r` and all wedge degrees: equivariance of every `C`, `D` map,
/// `C^r_0 = p^* ∘ ι_*`, `D^r = p_* ∘ ι^*` and `D^r ∘ C^r_0 = id`, on both sides.
pub fn verify_factorizations(
    split: &Split,
    max_r: usize,
) -> Result<FactorizationReport, DecompError> {
    let mut rep = FactorizationReport::default();
    let (n1, n2) = (split.prime.rank(), split.second.rank());
    for r in 1..=max_r {
        for i in 0..=n1 {
            for j in 0..=n2 {
                let c1 = split.c_prime(r, i, j)?;
                rep.check(c1.equivariant, || {
                    format!("C'^{r}_{j} on degree {i} is not equivariant")
                });
                let c2 = split.c_second(r, i, j)?;
                rep.check(c2.equivariant, || {
                    format!("C''^{r}_{i} on degree {j} is not equivariant")
                });
            }
        }
        for (side, rank, name) in [(Side::Prime, n1, "'"), (Side::Second, n2, "''")] {
            for a in 0..=rank {
                let c0 = split.c_map(
                    side,
                    r,
                    if side == Side::Prime { a } else { 0 },
                    if side == Side::Prime { 0 } else { a },
                )?;
                rep.check(c0.matrix == split.c_zero_factored(side, r, a), || {
                    format!("C{name}^{r}_0 on degree {a} differs from p^* ∘ ι_*")
                });
                let d = split.d_map(side, r, a)?;
                rep.check(d.equivariant, || {
                    format!("D{name}^{r} on degree {a} is not equivariant")
                });
                rep.check(d.matrix == split.d_factored(side, r, a), || {
                    format!("D{name}^{r} on degree {a} differs from p_* ∘ ι^*")
                });
                rep.check(d.matrix.mul(&c0.matrix).is_identity(), || {
                    format!("D{name}^{r} ∘ C{name}^{r}_0 is not the identity on degree {a}")
                });
            }
        }
    }
    Ok(rep)
}
