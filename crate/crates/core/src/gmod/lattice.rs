use std::sync::Arc;

use num_traits::{One, Signed};

use super::intmat::{binomial, subset_index, subsets, IntMatrix};
use super::{FiniteGroup, GModError, GroupHom};

/// A finite-rank integral `ZG`-lattice: one invertible integer matrix per group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    group: Arc<FiniteGroup>,
    rank: usize,
    action: Vec<IntMatrix>,
}

impl GLattice {
    /// Validates `A_e = I`, `A_g A_h = A_{gh}` and `det A_g = ±1`.
    pub fn new(
        group: Arc<FiniteGroup>,
        rank: usize,
        action: Vec<IntMatrix>,
    ) -> Result<Self, GModError> {
        if action.len() != group.order() {
            return Err(GModError::NotALattice(format!(
                "{} matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, a) in action.iter().enumerate() {
            if a.rows() != rank || a.cols() != rank {
                return Err(GModError::NotALattice(format!(
                    "matrix for {g} is not {rank}x{rank}"
                )));
            }
            if !a.det().abs().is_one() {
                return Err(GModError::NotALattice(format!(
                    "matrix for {g} is not unimodular"
                )));
            }
        }
        if action[0] != IntMatrix::identity(rank) {
            return Err(GModError::NotALattice(
                "identity does not act trivially".into(),
            ));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if action[g].mul(&action[h]) != action[group.mul(g, h)] {
                    return Err(GModError::NotALattice(format!(
                        "A_{g} A_{h} != A_{}",
                        group.mul(g, h)
                    )));
                }
            }
        }
        Ok(GLattice {
            group,
            rank,
            action,
        })
    }

    /// Extends matrices given on a generating set to the whole group, then validates.
    pub fn from_generators(
        group: Arc<FiniteGroup>,
        rank: usize,
        generators: &[(usize, IntMatrix)],
    ) -> Result<Self, GModError> {
        let m = group.order();
        let mut known: Vec<Option<IntMatrix>> = vec![None; m];
        known[0] = Some(IntMatrix::identity(rank));
        for (g, a) in generators {
            if *g >= m {
                return Err(GModError::NotALattice(format!("element {g} out of range")));
            }
            if a.rows() != rank || a.cols() != rank {
                return Err(GModError::NotALattice(format!(
                    "matrix for {g} is not {rank}x{rank}"
                )));
            }
        }
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            let ax = known[x].clone().expect("frontier elements are known");
            for (g, a) in generators {
                let y = group.mul(x, *g);
                let ay = ax.mul(a);
                match &known[y] {
                    Some(prev) if *prev != ay => {
                        return Err(GModError::NotALattice(format!(
                            "generator matrices are inconsistent at element {y}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        known[y] = Some(ay);
                        frontier.push(y);
                    }
                }
            }
        }
        let action = known
            .into_iter()
            .enumerate()
            .map(|(g, a)| {
                a.ok_or_else(|| GModError::NotALattice(format!("element {g} is not generated")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, rank, action)
    }

    /// The lattice `Z^rank` with trivial action.
    pub fn trivial(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let action = vec![IntMatrix::identity(rank); group.order()];
        GLattice {
            group,
            rank,
            action,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    /// `Λ^t L` on the lexicographic basis of `t`-subsets; zero lattice when `t > rank`.
    pub fn wedge_power(&self, t: usize) -> GLattice {
        let action = self.action.iter().map(|a| a.compound(t)).collect();
        GLattice {
            group: self.group.clone(),
            rank: binomial(self.rank, t),
            action,
        }
    }

    /// Block-diagonal sum; basis of `self` first.
    pub fn direct_sum(&self, other: &GLattice) -> Result<GLattice, GModError> {
        if self.group != other.group {
            return Err(GModError::GroupMismatch);
        }
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| IntMatrix::block_diag(a, b))
            .collect();
        Ok(GLattice {
            group: self.group.clone(),
            rank: self.rank + other.rank,
            action,
        })
    }

    /// Pulls the action back along `sigma: H -> G`.
    pub fn restrict_along(&self, sigma: &GroupHom) -> Result<GLattice, GModError> {
        if **sigma.target() != *self.group {
            return Err(GModError::GroupMismatch);
        }
        let h = sigma.source().clone();
        let action = (0..h.order())
            .map(|x| self.action[sigma.apply(x)].clone())
            .collect();
        Ok(GLattice {
            group: h,
            rank: self.rank,
            action,
        })
    }
}

/// Which summand's basis vectors come first when forming `x ∧ y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WedgeOrder {
    /// `e_I ⊗ f_J ↦ e_I ∧ f_J`.
    PrimeFirst,
    /// `e_I ⊗ f_J ↦ f_J ∧ e_I = (-1)^{|I||J|} e_I ∧ f_J`.
    SecondFirst,
}

/// Explicit isomorphism `⊕_{i+j=n} Λ^i L' ⊗ Λ^j L'' -> Λ^n (L' ⊕ L'')`.
///
/// Summands are ordered by decreasing `i`; inside a summand the basis is
/// `(I, J) -> idx(I) * C(n'', j) + idx(J)`.
#[derive(Clone, Debug)]
pub struct WedgeDecomposition {
    pub n: usize,
    pub rank_prime: usize,
    pub rank_second: usize,
    pub order: WedgeOrder,
    /// `(i, j, offset, dim)` for each nonzero summand.
    pub summands: Vec<(usize, usize, usize, usize)>,
    /// Columns: summand basis; rows: `Λ^n L` basis. A signed permutation matrix.
    pub iso: IntMatrix,
}

impl WedgeDecomposition {
    pub fn new(rank_prime: usize, rank_second: usize, n: usize, order: WedgeOrder) -> Self {
        let total = rank_prime + rank_second;
        let dim = binomial(total, n);
        let mut iso = IntMatrix::zeros(dim, dim);
        let mut summands = Vec::new();
        let mut offset = 0;
        for i in (0..=n).rev() {
            let j = n - i;
            let (a, b) = (subsets(rank_prime, i), subsets(rank_second, j));
            if a.is_empty() || b.is_empty() {
                continue;
            }
            let d = a.len() * b.len();
            for (ia, sa) in a.iter().enumerate() {
                for (ib, sb) in b.iter().enumerate() {
                    let mut s: Vec<usize> = sa.clone();
                    s.extend(sb.iter().map(|&x| x + rank_prime));
                    let row = subset_index(total, &s);
                    let sign = match order {
                        WedgeOrder::PrimeFirst => 1,
                        WedgeOrder::SecondFirst if (i * j) % 2 == 1 => -1,
                        WedgeOrder::SecondFirst => 1,
                    };
                    iso.set(row, offset + ia * b.len() + ib, sign.into());
                }
            }
            summands.push((i, j, offset, d));
            offset += d;
        }
        debug_assert_eq!(offset, dim);
        WedgeDecomposition {
            n,
            rank_prime,
            rank_second,
            order,
            summands,
            iso,
        }
    }

    pub fn summand(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        self.summands
            .iter()
            .find(|s| s.0 == i && s.1 == j)
            .map(|s| (s.2, s.3))
    }

    /// Block action `⊕ Λ^i A'_g ⊗ Λ^j A''_g` for one group element.
    pub fn block_action(&self, prime: &GLattice, second: &GLattice, g: usize) -> IntMatrix {
        let dim = self.iso.rows();
        let mut out = IntMatrix::zeros(dim, dim);
        for &(i, j, off, _) in &self.summands {
            let a = prime.action(g).compound(i);
            let b = second.action(g).compound(j);
            for r1 in 0..a.rows() {
                for c1 in 0..a.cols() {
                    for r2 in 0..b.rows() {
                        for c2 in 0..b.cols() {
                            out.set(
                                off + r1 * b.rows() + r2,
                                off + c1 * b.cols() + c2,
                                a.get(r1, c1) * b.get(r2, c2),
                            );
                        }
                    }
                }
            }
        }
        out
    }

    /// `Λ^n A_g · iso = iso · block(g)` for every `g`.
    pub fn is_equivariant(&self, prime: &GLattice, second: &GLattice) -> bool {
        let Ok(sum) = prime.direct_sum(second) else {
            return false;
        };
        (0..prime.group().order()).all(|g| {
            sum.action(g).compound(self.n).mul(&self.iso)
                == self.iso.mul(&self.block_action(prime, second, g))
        })
    }
}

/// Inclusion `L' -> L' ⊕ L''` (first block) as an integer matrix.
pub fn inclusion_prime(rank_prime: usize, rank_second: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rank_prime + rank_second, rank_prime);
    for i in 0..rank_prime {
        m.set(i, i, One::one());
    }
    m
}

pub fn inclusion_second(rank_prime: usize, rank_second: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rank_prime + rank_second, rank_second);
    for i in 0..rank_second {
        m.set(rank_prime + i, i, One::one());
    }
    m
}

pub fn projection_prime(rank_prime: usize, rank_second: usize) -> IntMatrix {
    inclusion_prime(rank_prime, rank_second).transpose()
}

pub fn projection_second(rank_prime: usize, rank_second: usize) -> IntMatrix {
    inclusion_second(rank_prime, rank_second).transpose()
}
