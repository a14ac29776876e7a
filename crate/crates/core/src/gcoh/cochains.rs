use crate::exactlin::{induced_map, Matrix, Subquotient};
use crate::gmod::{FGModule, GroupHom};

use super::{GCohError, GResolution, ResolutionKind};

/// `δ: Hom_G(B_s, M) -> Hom_G(B_{s+1}, M)`, with `Hom_G(B_s, M) = M^{rank_s}`.
pub fn coboundary(res: &GResolution, module: &FGModule, s: usize) -> Result<Matrix, GCohError> {
    check_group(res, module)?;
    if s + 1 > res.length() {
        return Err(GCohError::DegreeOutOfRange {
            degree: s + 1,
            max: res.length(),
        });
    }
    let d = module.dim();
    let mut out = Matrix::zeros(module.field(), res.rank(s + 1) * d, res.rank(s) * d);
    for gen in 0..res.rank(s + 1) {
        for t in res.boundary(s + 1, gen) {
            out.add_block_i64(gen * d, t.target * d, module.action(t.g), t.coeff);
        }
    }
    Ok(out)
}

/// `H^s(G, M)` as `ker δ_s / im δ_{s-1}` inside the degree-`s` cochains.
pub fn cohomology(
    res: &GResolution,
    module: &FGModule,
    s: usize,
) -> Result<Subquotient, GCohError> {
    let cycles = coboundary(res, module, s)?.kernel();
    let boundaries = if s == 0 {
        Matrix::zeros(module.field(), module.dim() * res.rank(0), 0)
    } else {
        coboundary(res, module, s - 1)?
    };
    Ok(Subquotient::new(&cycles, &boundaries)?)
}

/// Block-diagonal action of a module map on degree-`s` cochains.
pub fn cochain_map(res: &GResolution, f: &Matrix, s: usize) -> Matrix {
    let r = res.rank(s);
    let mut out = Matrix::zeros(f.field(), r * f.rows(), r * f.cols());
    for gen in 0..r {
        out.set_block(gen * f.rows(), gen * f.cols(), f);
    }
    out
}

/// `f_*: H^s(G, A) -> H^s(G, B)` in cohomology coordinates.
pub fn induced_on_cohomology(
    res: &GResolution,
    a: &FGModule,
    b: &FGModule,
    f: &Matrix,
    s: usize,
) -> Result<Matrix, GCohError> {
    if !a.is_equivariant_map(b, f) {
        return Err(GCohError::NotEquivariant);
    }
    let src = cohomology(res, a, s)?;
    let dst = cohomology(res, b, s)?;
    Ok(induced_map(&cochain_map(res, f, s), &src, &dst)?)
}

/// A cohomology class, kept with a cocycle representative.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub degree: usize,
    pub coords: Matrix,
    pub representative: Matrix,
}

impl CohomologyClass {
    pub fn from_cocycle(
        h: &Subquotient,
        degree: usize,
        cocycle: Matrix,
    ) -> Result<Self, GCohError> {
        let coords = h.coordinates(&cocycle)?;
        Ok(CohomologyClass {
            degree,
            coords,
            representative: cocycle,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

/// `Hom(Y, Z) ⊗ Hom(X, Y) -> Hom(X, Z)`, `a ⊗ b ↦ a ∘ b`, in `Hom` coordinates
/// (`Hom(U, V)` index `u * dim V + v`, tensor index `i * dim B + j`).
pub fn composition_pairing(
    field: crate::exactlin::FieldSpec,
    dx: usize,
    dy: usize,
    dz: usize,
) -> Matrix {
    let db = dx * dy;
    let mut p = Matrix::zeros(field, dx * dz, dy * dz * db);
    for k in 0..dx {
        for i in 0..dy {
            for m in 0..dz {
                let a = i * dz + m;
                let b = k * dy + i;
                p.add_i64(k * dz + m, a * db + b, 1);
            }
        }
    }
    p
}

/// Cup product through an equivariant pairing `P: A ⊗ B -> C`.
///
/// On the bar resolution `(x ∪ y)[g_1|…|g_{p+q}] = P(x[g_1|…|g_p] ⊗ (g_1⋯g_p)·y[g_{p+1}|…])`.
/// On the periodic resolution of `C_n = <T>` it uses the diagonal
/// `e_{p+q} ↦ e_p ⊗ e_q` (`p` even), `e_p ⊗ T e_q` (`p` odd, `q` even),
/// `Σ_{0<=a<b<n} T^a e_p ⊗ T^b e_q` (both odd).
pub fn cup_product(
    res: &GResolution,
    a: &FGModule,
    x: &Matrix,
    p: usize,
    b: &FGModule,
    y: &Matrix,
    q: usize,
    pairing: &Matrix,
) -> Result<Matrix, GCohError> {
    if p + q > res.length() {
        return Err(GCohError::DegreeOutOfRange {
            degree: p + q,
            max: res.length(),
        });
    }
    let (da, db) = (a.dim(), b.dim());
    let dc = pairing.rows();
    if pairing.cols() != da * db || x.rows() != res.rank(p) * da || y.rows() != res.rank(q) * db {
        return Err(GCohError::ShapeMismatch);
    }
    let group = res.group();
    if res.kind() == ResolutionKind::PeriodicCyclic {
        let n = group.order();
        let gen = if n > 1 { 1 } else { 0 };
        let mut sum = Matrix::zeros(x.field(), da * db, 1);
        if p % 2 == 0 {
            sum = x.kron(y);
        } else if q % 2 == 0 {
            sum = x.kron(&b.action(gen).mul(y));
        } else {
            for i in 0..n {
                let xa = a.action(group.pow(gen, i)).mul(x);
                for j in i + 1..n {
                    sum = sum.add(&xa.kron(&b.action(group.pow(gen, j)).mul(y)));
                }
            }
        }
        return Ok(pairing.mul(&sum));
    }
    let mut out = Matrix::zeros(x.field(), res.rank(p + q) * dc, 1);
    for gen in 0..res.rank(p + q) {
        let tuple = res.bar_tuple(p + q, gen);
        let xi = res.bar_index(&tuple[..p]);
        let yi = res.bar_index(&tuple[p..]);
        let prod = tuple[..p].iter().fold(0, |acc, &g| group.mul(acc, g));
        let xa = x.submatrix(xi * da..(xi + 1) * da, 0..1);
        let yb = b
            .action(prod)
            .mul(&y.submatrix(yi * db..(yi + 1) * db, 0..1));
        let c = pairing.mul(&xa.kron(&yb));
        out.set_block(gen * dc, 0, &c);
    }
    Ok(out)
}

/// Checks `P (ρ_A(g) ⊗ ρ_B(g)) = ρ_C(g) P`.
pub fn is_equivariant_pairing(a: &FGModule, b: &FGModule, c: &FGModule, pairing: &Matrix) -> bool {
    (0..a.group().order())
        .all(|g| pairing.mul(&a.action(g).kron(b.action(g))) == c.action(g).mul(pairing))
}

/// Cochain-level restriction `Hom_G(B_s G, M) -> Hom_H(B_s H, σ^*M)` on bar resolutions.
pub fn restriction_cochain_map(
    sigma: &GroupHom,
    res_h: &GResolution,
    res_g: &GResolution,
    module: &FGModule,
    s: usize,
) -> Result<Matrix, GCohError> {
    if res_h.kind() != ResolutionKind::NormalizedBar
        || res_g.kind() != ResolutionKind::NormalizedBar
    {
        return Err(GCohError::NeedsBar);
    }
    if **sigma.source() != **res_h.group() || **sigma.target() != **res_g.group() {
        return Err(GCohError::GroupMismatch);
    }
    let d = module.dim();
    let id = Matrix::identity(module.field(), d);
    let mut out = Matrix::zeros(module.field(), res_h.rank(s) * d, res_g.rank(s) * d);
    for gen in 0..res_h.rank(s) {
        let image: Vec<usize> = res_h
            .bar_tuple(s, gen)
            .iter()
            .map(|&h| sigma.apply(h))
            .collect();
        if image.contains(&0) {
            continue;
        }
        out.set_block(gen * d, res_g.bar_index(&image) * d, &id);
    }
    Ok(out)
}

/// `σ^*: H^s(G, M) -> H^s(H, σ^*M)` in cohomology coordinates.
pub fn restriction_on_cohomology(
    sigma: &GroupHom,
    res_h: &GResolution,
    res_g: &GResolution,
    module: &FGModule,
    s: usize,
) -> Result<Matrix, GCohError> {
    let pulled = module.restrict_along(sigma)?;
    let src = cohomology(res_g, module, s)?;
    let dst = cohomology(res_h, &pulled, s)?;
    let f = restriction_cochain_map(sigma, res_h, res_g, module, s)?;
    Ok(induced_map(&f, &src, &dst)?)
}

fn check_group(res: &GResolution, module: &FGModule) -> Result<(), GCohError> {
    if **res.group() != **module.group() {
        return Err(GCohError::GroupMismatch);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exactlin::FieldSpec;
    use crate::gmod::{FiniteGroup, GLattice, IntMatrix};

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn sign_c2(field: FieldSpec) -> FGModule {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let l = GLattice::new(g, 1, vec![IntMatrix::identity(1), IntMatrix::diag(&[-1])]).unwrap();
        FGModule::from_lattice(&l, field)
    }

    #[test]
    fn c2_trivial_f2_is_one_dimensional_everywhere() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let triv = FGModule::trivial(g.clone(), f2(), 1);
        for res in [
            GResolution::bar(g.clone(), 5).unwrap(),
            GResolution::periodic(g.clone(), 5).unwrap(),
        ] {
            for s in 0..5 {
                assert_eq!(cohomology(&res, &triv, s).unwrap().dim(), 1, "degree {s}");
            }
        }
    }

    #[test]
    fn c3_rotation_over_q_has_no_cohomology() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]);
        let l = GLattice::from_generators(g.clone(), 2, &[(1, rot)]).unwrap();
        let m = FGModule::from_lattice(&l, FieldSpec::rationals());
        let res = GResolution::bar(g, 4).unwrap();
        for s in 0..4 {
            assert_eq!(cohomology(&res, &m, s).unwrap().dim(), 0);
        }
    }

    #[test]
    fn sign_module_over_q_and_f3() {
        for field in [FieldSpec::rationals(), FieldSpec::prime(3).unwrap()] {
            let m = sign_c2(field);
            let res = GResolution::periodic(m.group().clone(), 5).unwrap();
            for s in 0..5 {
                assert_eq!(cohomology(&res, &m, s).unwrap().dim(), 0);
            }
        }
    }

    #[test]
    fn degree_zero_is_invariants() {
        let g = Arc::new(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)));
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let l =
            GLattice::from_generators(g.clone(), 2, &[(1, swap), (2, IntMatrix::diag(&[-1, -1]))])
                .unwrap();
        for field in [f2(), FieldSpec::rationals()] {
            let m = FGModule::from_lattice(&l, field);
            let res = GResolution::bar(g.clone(), 2).unwrap();
            assert_eq!(
                cohomology(&res, &m, 0).unwrap().dim(),
                m.invariants().cols()
            );
        }
    }

    #[test]
    fn bar_and_periodic_agree_on_c4() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let l = GLattice::from_generators(
            g.clone(),
            2,
            &[(1, IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]))],
        )
        .unwrap();
        for field in [f2(), FieldSpec::prime(3).unwrap(), FieldSpec::rationals()] {
            let m = FGModule::from_lattice(&l, field);
            let bar = GResolution::bar(g.clone(), 4).unwrap();
            let per = GResolution::periodic(g.clone(), 4).unwrap();
            for s in 0..4 {
                assert_eq!(
                    cohomology(&bar, &m, s).unwrap().dim(),
                    cohomology(&per, &m, s).unwrap().dim(),
                    "{field} degree {s}"
                );
            }
        }
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let g = Arc::new(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)));
        let m = FGModule::trivial(g.clone(), FieldSpec::rationals(), 2);
        let res = GResolution::bar(g, 4).unwrap();
        for s in 0..3 {
            let dd = coboundary(&res, &m, s + 1)
                .unwrap()
                .mul(&coboundary(&res, &m, s).unwrap());
            assert!(dd.is_zero());
        }
    }

    #[test]
    fn restriction_to_a_factor_has_rank_one() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let v4 = Arc::new(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)));
        // (a, b) has index 2a + b; include the first factor
        let sigma = GroupHom::new(c2.clone(), v4.clone(), vec![0, 2]).unwrap();
        let triv = FGModule::trivial(v4.clone(), f2(), 1);
        let rh = GResolution::bar(c2, 2).unwrap();
        let rg = GResolution::bar(v4, 2).unwrap();
        let r = restriction_on_cohomology(&sigma, &rh, &rg, &triv, 1).unwrap();
        assert_eq!((r.rows(), r.cols()), (1, 2));
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn cup_square_of_the_c2_generator_is_nonzero_over_f2() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let triv = FGModule::trivial(g.clone(), f2(), 1);
        let res = GResolution::bar(g, 3).unwrap();
        let h1 = cohomology(&res, &triv, 1).unwrap();
        let x = h1.reps().column(0);
        let pairing = Matrix::identity(f2(), 1);
        assert!(is_equivariant_pairing(&triv, &triv, &triv, &pairing));
        let sq = cup_product(&res, &triv, &x, 1, &triv, &x, 1, &pairing).unwrap();
        let h2 = cohomology(&res, &triv, 2).unwrap();
        assert!(!CohomologyClass::from_cocycle(&h2, 2, sq).unwrap().is_zero());
    }

    #[test]
    fn composition_pairing_multiplies_matrices() {
        let f = FieldSpec::rationals();
        // Hom(U, V) coordinate u * dim V + v holds the (v, u) matrix entry
        let to_hom = |m: &Matrix| {
            let mut out = Matrix::zeros(f, m.rows() * m.cols(), 1);
            for u in 0..m.cols() {
                for v in 0..m.rows() {
                    out.set(u * m.rows() + v, 0, m.get(v, u));
                }
            }
            out
        };
        let a = Matrix::from_rows_i64(f, &[vec![1, 2, 0], vec![0, 1, 3]]); // Y(3) -> Z(2)
        let b = Matrix::from_rows_i64(f, &[vec![1, 0], vec![2, 1], vec![0, 5]]); // X(2) -> Y(3)
        let p = composition_pairing(f, 2, 3, 2);
        assert_eq!(p.mul(&to_hom(&a).kron(&to_hom(&b))), to_hom(&a.mul(&b)));
    }
}
