//! Scans random `C2 × C2`-lattices that are extensions of sign characters, over `F2`.
//!
//! `cargo run --release -p lhslab-core --example probe -- [count] [seed]`

use std::sync::Arc;

use lhslab::decomp::scan_lattice;
use lhslab::exactlin::FieldSpec;
use lhslab::gcoh::GResolution;
use lhslab::gmod::{FiniteGroup, GLattice, IntMatrix};
use lhslab::lhs::TwistedResolution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Upper triangular `a`, `b` with diagonal characters, solving `a² = b² = 1`, `ab = ba`
/// entry by entry above the diagonal.
fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1 } else { -1 };
    let da: Vec<i64> = (0..n).map(|_| sign(rng)).collect();
    let db: Vec<i64> = (0..n).map(|_| sign(rng)).collect();
    let mut a = vec![vec![0; n]; n];
    let mut b = vec![vec![0; n]; n];
    for i in 0..n {
        a[i][i] = da[i];
        b[i][i] = db[i];
        for j in i + 1..n {
            let options: Vec<(i64, i64)> = (-1..=1)
                .flat_map(|x| (-1..=1).map(move |y| (x, y)))
                .filter(|&(x, y)| {
                    (da[i] + da[j]) * x == 0
                        && (db[i] + db[j]) * y == 0
                        && (da[i] - da[j]) * y == (db[i] - db[j]) * x
                })
                .collect();
            let (x, y) = options[rng.gen_range(0..options.len())];
            a[i][j] = x;
            b[i][j] = y;
        }
    }
    (a, b)
}

fn main() {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(40);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let f2 = FieldSpec::prime(2).unwrap();
    let v4 = Arc::new(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..count {
        let n = rng.gen_range(2..=4);
        let (a, b) = random_pair(&mut rng, n);
        let gens = [(1, IntMatrix::from_rows(&a)), (2, IntMatrix::from_rows(&b))];
        let Ok(l) = GLattice::from_generators(v4.clone(), n, &gens) else {
            println!("{k}: not a lattice {a:?} {b:?}");
            continue;
        };
        let degree = n + 2;
        let gres = GResolution::preferred(l.group().clone(), degree).unwrap();
        let res = TwistedResolution::build(&l, gres, degree).unwrap();
        let row = scan_lattice(&res, f2, 4, degree - 1).unwrap();
        println!(
            "{k}: rank {n} a={a:?} b={b:?} first nonzero {:?}",
            row.first_nonzero
        );
    }
}
