use std::sync::Arc;

use lhslab::gmod::{FiniteGroup, GLattice, IntMatrix};
use lhslab::koszul::{GActionChainData, KoszulChain, KoszulResolution, TwistedAlgebra};
use proptest::prelude::*;

fn chain(n: usize) -> impl Strategy<Value = KoszulChain> {
    let term = (
        0u32..(1 << n),
        prop::collection::vec(-4i64..=4, n),
        -3i64..=3,
    );
    prop::collection::vec(term, 0..6).prop_map(|terms| {
        let mut c = KoszulChain::new();
        for (j, v, coeff) in terms {
            if coeff != 0 {
                *c.entry((j, v)).or_default() += coeff;
            }
        }
        c.retain(|_, x| *x != 0);
        c
    })
}

fn sum(a: &KoszulChain, b: &KoszulChain, sign: i64) -> KoszulChain {
    let mut out = a.clone();
    for (k, &c) in b {
        *out.entry(k.clone()).or_default() += sign * c;
    }
    out.retain(|_, x| *x != 0);
    out
}

fn sized_chain() -> impl Strategy<Value = (usize, KoszulChain)> {
    (1usize..=5).prop_flat_map(|n| (Just(n), chain(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn d_squares_to_zero((n, c) in sized_chain()) {
        let k = KoszulResolution::new(n);
        prop_assert!(k.d(&k.d(&c).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn augmentation_kills_boundaries((n, c) in sized_chain()) {
        let k = KoszulResolution::new(n);
        prop_assert_eq!(k.augment(&k.d(&c).unwrap()).unwrap(), 0);
    }

    #[test]
    fn homotopy_contracts((n, c) in sized_chain()) {
        let k = KoszulResolution::new(n);
        let dh = k.d(&k.h(&c).unwrap()).unwrap();
        let hd = k.h(&k.d(&c).unwrap()).unwrap();
        let lhs = sum(&dh, &hd, 1);
        let mut rhs = c.clone();
        let e = k.augment(&c).unwrap();
        if e != 0 {
            *rhs.entry((0, vec![0; n])).or_default() -= e;
            rhs.retain(|_, x| *x != 0);
        }
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn group_action_chain_map_has_exterior_power_leading_term() {
    let c4 = Arc::new(FiniteGroup::cyclic(4));
    let v4 = Arc::new(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)));
    let lattices = vec![
        GLattice::from_generators(
            c4,
            3,
            &[(
                1,
                IntMatrix::from_rows(&[vec![0, -1, 0], vec![1, 0, 0], vec![0, 0, -1]]),
            )],
        )
        .unwrap(),
        GLattice::from_generators(
            v4,
            3,
            &[
                (
                    1,
                    IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
                ),
                (
                    2,
                    IntMatrix::from_rows(&[vec![-1, 0, 1], vec![0, -1, 1], vec![0, 0, 1]]),
                ),
            ],
        )
        .unwrap(),
    ];
    for l in lattices {
        let alg = TwistedAlgebra::new(&l).unwrap();
        let k = KoszulResolution::new(l.rank());
        for g in 0..l.group().order() {
            let phi = GActionChainData::new(&alg, &k, g).unwrap();
            for q in 0..=l.rank() {
                assert_eq!(
                    phi.leading_term(&k, q).unwrap(),
                    l.action(g).compound(q),
                    "g={g} q={q}"
                );
                if q > 0 {
                    assert!(phi
                        .defect(&alg, &k, q)
                        .unwrap()
                        .iter()
                        .all(|c| c.is_empty()));
                }
            }
        }
    }
}

#[test]
fn rank_one_sign_action() {
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let l = GLattice::new(c2, 1, vec![IntMatrix::identity(1), IntMatrix::diag(&[-1])]).unwrap();
    let alg = TwistedAlgebra::new(&l).unwrap();
    let k = KoszulResolution::new(1);
    let phi = GActionChainData::new(&alg, &k, 1).unwrap();
    let mut expect = KoszulChain::new();
    expect.insert((1, vec![-1]), -1);
    assert_eq!(phi.images[1][0], expect);
}
