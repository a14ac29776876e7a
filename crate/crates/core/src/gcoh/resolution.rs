use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactlin::{FieldSpec, Matrix};
use crate::gmod::FiniteGroup;

use super::GCohError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResolutionKind {
    NormalizedBar,
    PeriodicCyclic,
}

/// `∂(gen) = Σ coeff · g · target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub g: usize,
    pub target: usize,
    pub coeff: i64,
}

/// A free `ZG`-resolution of the trivial module, truncated at degree `N`.
#[derive(Clone, Debug)]
pub struct GResolution {
    group: Arc<FiniteGroup>,
    kind: ResolutionKind,
    ranks: Vec<usize>,
    /// `diff[s][gen]` for `s in 1..=N`; `diff[0]` is empty.
    diff: Vec<Vec<Vec<Term>>>,
}

impl GResolution {
    /// Normalized bar resolution: degree-`s` generators are tuples of non-identity elements.
    pub fn bar(group: Arc<FiniteGroup>, n: usize) -> Result<Self, GCohError> {
        if n < 1 {
            return Err(GCohError::BadTruncation(n));
        }
        let m = group.order();
        let ranks: Vec<usize> = (0..=n).map(|s| (m - 1).pow(s as u32)).collect();
        let mut diff = vec![Vec::new()];
        for s in 1..=n {
            let mut gens = Vec::with_capacity(ranks[s]);
            for idx in 0..ranks[s] {
                let tuple = bar_tuple(m, s, idx);
                let mut terms = Vec::new();
                // g1 · [g2 | ... | gs]
                terms.push(Term {
                    g: tuple[0],
                    target: bar_index(m, &tuple[1..]),
                    coeff: 1,
                });
                for i in 0..s - 1 {
                    let prod = group.mul(tuple[i], tuple[i + 1]);
                    if prod == 0 {
                        continue;
                    }
                    let mut t = tuple[..i].to_vec();
                    t.push(prod);
                    t.extend_from_slice(&tuple[i + 2..]);
                    terms.push(Term {
                        g: 0,
                        target: bar_index(m, &t),
                        coeff: if (i + 1) % 2 == 0 { 1 } else { -1 },
                    });
                }
                terms.push(Term {
                    g: 0,
                    target: bar_index(m, &tuple[..s - 1]),
                    coeff: if s % 2 == 0 { 1 } else { -1 },
                });
                gens.push(merge_terms(terms));
            }
            diff.push(gens);
        }
        Ok(GResolution {
            group,
            kind: ResolutionKind::NormalizedBar,
            ranks,
            diff,
        })
    }

    /// Rank-one periodic resolution of a cyclic group: `g - 1` in odd degrees, the norm in even ones.
    pub fn periodic(group: Arc<FiniteGroup>, n: usize) -> Result<Self, GCohError> {
        if n < 1 {
            return Err(GCohError::BadTruncation(n));
        }
        let Some(order) = group.cyclic_order() else {
            return Err(GCohError::NotCyclic);
        };
        let gen = if order > 1 { 1 } else { 0 };
        let mut diff = vec![Vec::new()];
        for s in 1..=n {
            let terms = if s % 2 == 1 {
                merge_terms(vec![
                    Term {
                        g: gen,
                        target: 0,
                        coeff: 1,
                    },
                    Term {
                        g: 0,
                        target: 0,
                        coeff: -1,
                    },
                ])
            } else {
                (0..order)
                    .map(|k| Term {
                        g: group.pow(gen, k),
                        target: 0,
                        coeff: 1,
                    })
                    .collect()
            };
            diff.push(vec![terms]);
        }
        Ok(GResolution {
            group,
            kind: ResolutionKind::PeriodicCyclic,
            ranks: vec![1; n + 1],
            diff,
        })
    }

    /// Periodic for cyclic-tagged groups, bar otherwise.
    pub fn preferred(group: Arc<FiniteGroup>, n: usize) -> Result<Self, GCohError> {
        if group.cyclic_order().is_some() {
            Self::periodic(group, n)
        } else {
            Self::bar(group, n)
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn kind(&self) -> ResolutionKind {
        self.kind
    }

    /// Highest degree with generators.
    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, s: usize) -> usize {
        self.ranks[s]
    }

    /// Boundary of generator `gen` in degree `s >= 1`.
    pub fn boundary(&self, s: usize, gen: usize) -> &[Term] {
        &self.diff[s][gen]
    }

    /// Bar tuple of a generator (bar resolutions only).
    pub fn bar_tuple(&self, s: usize, gen: usize) -> Vec<usize> {
        assert_eq!(
            self.kind,
            ResolutionKind::NormalizedBar,
            "not a bar resolution"
        );
        bar_tuple(self.group.order(), s, gen)
    }

    pub fn bar_index(&self, tuple: &[usize]) -> usize {
        bar_index(self.group.order(), tuple)
    }

    /// `∂_{s-1} ∘ ∂_s = 0` in `ZG`, for every `s` in range.
    pub fn is_complex(&self) -> bool {
        (2..=self.length()).all(|s| {
            (0..self.ranks[s]).all(|gen| {
                let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
                for t in self.boundary(s, gen) {
                    for u in self.boundary(s - 1, t.target) {
                        *acc.entry((self.group.mul(t.g, u.g), u.target)).or_default() +=
                            t.coeff * u.coeff;
                    }
                }
                acc.values().all(|&c| c == 0)
            })
        })
    }

    /// `∂_s` as an `F`-linear map `F[G]^{rank_s} -> F[G]^{rank_{s-1}}`; coordinate `gen * |G| + h`.
    pub fn expanded_differential(&self, s: usize, field: FieldSpec) -> Matrix {
        let m = self.group.order();
        let mut out = Matrix::zeros(field, self.ranks[s - 1] * m, self.ranks[s] * m);
        for gen in 0..self.ranks[s] {
            for h in 0..m {
                for t in self.boundary(s, gen) {
                    out.add_i64(t.target * m + self.group.mul(h, t.g), gen * m + h, t.coeff);
                }
            }
        }
        out
    }

    /// Checks that `coker ∂_1 ≅ F`, i.e. `H_0 = F` after expanding over the field.
    pub fn augmentation_exact(&self, field: FieldSpec) -> bool {
        let d1 = self.expanded_differential(1, field);
        self.ranks[0] * self.group.order() - d1.rank() == 1
    }
}

fn merge_terms(terms: Vec<Term>) -> Vec<Term> {
    let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for t in terms {
        *acc.entry((t.target, t.g)).or_default() += t.coeff;
    }
    acc.into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|((target, g), coeff)| Term { g, target, coeff })
        .collect()
}

fn bar_tuple(m: usize, s: usize, mut idx: usize) -> Vec<usize> {
    let base = m - 1;
    let mut out = vec![0; s];
    for i in (0..s).rev() {
        out[i] = idx % base + 1;
        idx /= base;
    }
    out
}

fn bar_index(m: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * (m - 1) + (g - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_ranks() {
        let g = Arc::new(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)));
        let r = GResolution::bar(g, 4).unwrap();
        assert_eq!(
            (0..=4).map(|s| r.rank(s)).collect::<Vec<_>>(),
            vec![1, 3, 9, 27, 81]
        );
        assert!(r.is_complex());
        assert!(r.augmentation_exact(FieldSpec::prime(2).unwrap()));
    }

    #[test]
    fn bar_tuple_index_round_trip() {
        for idx in 0..27 {
            assert_eq!(bar_index(4, &bar_tuple(4, 3, idx)), idx);
        }
    }

    #[test]
    fn periodic_c4_is_a_complex() {
        let r = GResolution::periodic(Arc::new(FiniteGroup::cyclic(4)), 6).unwrap();
        assert!(r.is_complex());
        assert!(r.augmentation_exact(FieldSpec::rationals()));
    }

    #[test]
    fn periodic_needs_cyclic_tag() {
        let g = Arc::new(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)));
        assert!(matches!(
            GResolution::periodic(g, 3),
            Err(GCohError::NotCyclic)
        ));
        assert!(matches!(
            GResolution::bar(Arc::new(FiniteGroup::cyclic(2)), 0),
            Err(GCohError::BadTruncation(0))
        ));
    }

    #[test]
    fn bar_of_s3_is_a_complex() {
        // S3 as permutations of {0,1,2}, identity first
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        let g = Arc::new(FiniteGroup::from_table(table).unwrap());
        let r = GResolution::bar(g, 4).unwrap();
        assert!(r.is_complex());
    }
}
