use std::sync::Arc;

use lhslab::decomp::{
    collapse_criteria, scan_lattice, verify_coefficient_factorization, verify_factorizations,
    verify_low_pages_vanish, verify_page_compatibility, verify_projection_formula,
    verify_restriction_surjectivity, verify_sum_formula, Side, Split, SplitResolutions, Verdict,
};
use lhslab::exactlin::{FieldSpec, Matrix};
use lhslab::gcoh::GResolution;
use lhslab::gmod::{FGModule, FiniteGroup, GLattice, IntMatrix, ModuleSpec, WedgeOrder};
use lhslab::lhs::TwistedResolution;

fn f2() -> FieldSpec {
    FieldSpec::prime(2).unwrap()
}

fn f3() -> FieldSpec {
    FieldSpec::prime(3).unwrap()
}

fn c2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

fn v4() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)))
}

fn lattice(g: Arc<FiniteGroup>, rank: usize, gens: &[(usize, Vec<Vec<i64>>)]) -> GLattice {
    let gens: Vec<(usize, IntMatrix)> = gens
        .iter()
        .map(|(g, m)| (*g, IntMatrix::from_rows(m)))
        .collect();
    GLattice::from_generators(g, rank, &gens).unwrap()
}

fn sign() -> GLattice {
    lattice(c2(), 1, &[(1, vec![vec![-1]])])
}

fn swap() -> GLattice {
    lattice(c2(), 2, &[(1, vec![vec![0, 1], vec![1, 0]])])
}

fn rotation() -> GLattice {
    lattice(
        Arc::new(FiniteGroup::cyclic(3)),
        2,
        &[(1, vec![vec![0, -1], vec![1, -1]])],
    )
}

fn v4_pair() -> (GLattice, GLattice) {
    let a = lattice(
        v4(),
        2,
        &[
            (1, vec![vec![0, 1], vec![1, 0]]),
            (2, vec![vec![-1, 0], vec![0, -1]]),
        ],
    );
    let b = lattice(v4(), 1, &[(1, vec![vec![-1]]), (2, vec![vec![1]])]);
    (a, b)
}

fn pairs() -> Vec<(GLattice, GLattice)> {
    vec![
        (sign(), sign()),
        (swap(), sign()),
        (sign(), GLattice::trivial(c2(), 1)),
        (
            rotation(),
            GLattice::trivial(Arc::new(FiniteGroup::cyclic(3)), 1),
        ),
        v4_pair(),
    ]
}

fn resolutions(split: &Split, degree: usize) -> SplitResolutions {
    let gres = GResolution::preferred(split.sum.group().clone(), degree).unwrap();
    SplitResolutions::build(split, &gres, degree).unwrap()
}

#[test]
fn factorizations_hold_in_both_orders() {
    for (a, b) in pairs() {
        for field in [f2(), f3(), FieldSpec::rationals()] {
            for order in [WedgeOrder::PrimeFirst, WedgeOrder::SecondFirst] {
                let split = Split::new(a.clone(), b.clone(), field, order).unwrap();
                let rep = verify_factorizations(&split, 3).unwrap();
                assert!(rep.passed(), "{:?}", rep.failures);
                assert!(rep.checked > 0);
            }
        }
    }
}

#[test]
fn summand_of_rank_zero_gives_identities() {
    let split = Split::new(
        swap(),
        GLattice::trivial(c2(), 0),
        f3(),
        WedgeOrder::PrimeFirst,
    )
    .unwrap();
    for r in 1..=3 {
        for i in 0..=2 {
            let c = split.c_prime(r, i, 0).unwrap();
            assert!(c.matrix.is_identity());
            assert!(split.d_prime(r, i).unwrap().matrix.is_identity());
        }
    }
}

#[test]
fn wedge_square_of_rank_one_is_zero() {
    let split = Split::new(sign(), sign(), f3(), WedgeOrder::PrimeFirst).unwrap();
    let c = split.c_prime(2, 1, 0).unwrap();
    assert_eq!(c.source.dim(), 0);
    assert_eq!(c.matrix.cols(), 0);
}

#[test]
fn first_d_map_sends_identity_to_identity() {
    let (a, b) = v4_pair();
    let split = Split::new(a, b, f3(), WedgeOrder::PrimeFirst).unwrap();
    for t in 0..=2 {
        let d = split.d_prime(1, t).unwrap();
        let n = split.sum.wedge_power(t).rank();
        let m = split.prime.wedge_power(t).rank();
        let id_sum = Matrix::identity(f3(), n);
        let id_prime = Matrix::identity(f3(), m);
        let flat = |x: &Matrix| {
            let mut v = Matrix::zeros(f3(), x.rows() * x.cols(), 1);
            for a in 0..x.cols() {
                for b in 0..x.rows() {
                    v.set(a * x.rows() + b, 0, x.get(b, a));
                }
            }
            v
        };
        assert_eq!(d.matrix.mul(&flat(&id_sum)), flat(&id_prime));
    }
}

#[test]
fn declared_sum_must_be_block_diagonal() {
    let sum = swap();
    assert!(Split::declared(sum, sign(), sign(), f2(), WedgeOrder::PrimeFirst).is_err());
    let sum = lattice(c2(), 2, &[(1, vec![vec![-1, 0], vec![0, -1]])]);
    assert!(Split::declared(sum, sign(), sign(), f2(), WedgeOrder::PrimeFirst).is_ok());
}

#[test]
fn sum_formula_for_sign_plus_sign() {
    for field in [f2(), FieldSpec::rationals()] {
        let split = Split::new(sign(), sign(), field, WedgeOrder::PrimeFirst).unwrap();
        let res = resolutions(&split, 4);
        let rep = verify_sum_formula(&split, &res, 2, 2).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.lhs.is_zero() && rep.rhs.is_zero());
    }
}

#[test]
fn sum_and_projection_formulas_on_pairs() {
    for (a, b) in pairs() {
        for field in [f2(), f3()] {
            let split = Split::new(a.clone(), b.clone(), field, WedgeOrder::PrimeFirst).unwrap();
            let res = resolutions(&split, 4);
            for t in 1..=split.sum.rank().min(2) {
                for r in 2..=3 {
                    let s = verify_sum_formula(&split, &res, t, r).unwrap();
                    assert!(!matches!(s.verdict, Verdict::Fail(_)), "{:?}", s.verdict);
                    let p = verify_projection_formula(&split, &res, t, r).unwrap();
                    assert!(!matches!(p.verdict, Verdict::Fail(_)), "{:?}", p.verdict);
                }
            }
        }
    }
}

#[test]
fn page_compatibility_and_coefficient_maps() {
    for (a, b) in pairs() {
        let split = Split::new(a, b, f2(), WedgeOrder::PrimeFirst).unwrap();
        let res = resolutions(&split, 5);
        for side in [Side::Prime, Side::Second] {
            for i in 0..=2 {
                let rep = verify_page_compatibility(&split, &res, side, i, 2).unwrap();
                assert_eq!(rep.verdict, Verdict::Pass);
            }
            for spec in ["triv", "wedge:1"] {
                let m = ModuleSpec::parse(spec)
                    .unwrap()
                    .eval(&split.sum, f2())
                    .unwrap();
                for s in 0..=1 {
                    for t in 1..=2 {
                        let rep =
                            verify_coefficient_factorization(&split, &res, side, &m, s, t).unwrap();
                        assert_eq!(rep.verdict, Verdict::Pass, "{spec} s={s} t={t}");
                    }
                }
            }
        }
    }
}

#[test]
fn collapse_criteria_agree_for_prime_cyclic() {
    let probes = vec![ModuleSpec::Triv, ModuleSpec::Wedge(1)];
    for (l, field) in [
        (swap(), f2()),
        (sign(), f2()),
        (rotation(), f3()),
        (swap(), FieldSpec::rationals()),
    ] {
        let gres = GResolution::preferred(l.group().clone(), 5).unwrap();
        let res = TwistedResolution::build(&l, gres, 5).unwrap();
        for t in 0..=l.rank() {
            let rep = collapse_criteria(&res, field, t, 3, &probes).unwrap();
            assert!(rep.consistent);
            assert!(rep.edges_zero && rep.dims_equal && rep.rows_vanish);
        }
    }
}

#[test]
fn restriction_surjectivity_transfers() {
    let probes = vec![ModuleSpec::Triv, ModuleSpec::Wedge(1)];
    for (a, b) in pairs() {
        let split = Split::new(a, b, f2(), WedgeOrder::PrimeFirst).unwrap();
        let res = resolutions(&split, 4);
        for t in 0..=2 {
            let rep = verify_restriction_surjectivity(&split, &res, t, &probes).unwrap();
            assert_eq!(rep.verdict, Verdict::Pass);
        }
    }
}

#[test]
fn second_page_vanishes_mod_three() {
    let gres = GResolution::preferred(rotation().group().clone(), 4).unwrap();
    let res = TwistedResolution::build(&rotation(), gres, 4).unwrap();
    let rep = verify_low_pages_vanish(&res, f3(), &[ModuleSpec::Triv]).unwrap();
    assert_eq!(rep.pages, vec![2]);
    assert_eq!(rep.verdict, Verdict::Pass);
    let rep = verify_low_pages_vanish(&res, f2(), &[]).unwrap();
    assert!(rep.pages.is_empty());
}

#[test]
fn scan_of_swap_lattice_is_all_zero() {
    let gres = GResolution::preferred(c2(), 4).unwrap();
    let res = TwistedResolution::build(&swap(), gres, 4).unwrap();
    let row = scan_lattice(&res, f2(), 3, 3).unwrap();
    assert!(row.first_nonzero.is_none());
    assert_eq!(row.statuses.len(), 3);
}

#[test]
fn hom_module_dimensions() {
    let split = Split::new(swap(), sign(), f2(), WedgeOrder::PrimeFirst).unwrap();
    let m: FGModule = split.hom_module(&split.sum, 1, 2).unwrap();
    assert_eq!(m.dim(), 9);
}
