use std::sync::Arc;

use super::GModError;

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// `Some(n)` when the group is tagged cyclic of order `n` with generator `1`.
    cyclic: Option<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table (closure, identity at 0, inverses, associativity).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GModError> {
        let m = table.len();
        if m == 0 {
            return Err(GModError::NotAGroup("empty table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(GModError::NotAGroup(format!(
                    "row {a} has length {}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= m) {
                return Err(GModError::NotAGroup(format!("entry {bad} out of range")));
            }
            if table[0][a] != a || row[0] != a {
                return Err(GModError::NotAGroup("element 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![usize::MAX; m];
        for a in 0..m {
            match (0..m).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inverse[a] = b,
                None => return Err(GModError::NotAGroup(format!("element {a} has no inverse"))),
            }
        }
        for a in 0..m {
            for b in 0..m {
                let ab = table[a][b];
                for c in 0..m {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GModError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            inverse,
            cyclic: None,
        })
    }

    /// Cyclic group of order `n`; element `k` is `g^k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs positive order");
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup {
            table,
            inverse,
            cyclic: Some(n),
        }
    }

    /// Tags a table group as cyclic, checking that element 1 generates it.
    pub fn with_cyclic_tag(mut self) -> Result<Self, GModError> {
        let m = self.order();
        if m == 1 {
            self.cyclic = Some(1);
            return Ok(self);
        }
        if self.element_order(1) != m {
            return Err(GModError::NotAGroup("element 1 does not generate".into()));
        }
        self.cyclic = Some(m);
        Ok(self)
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (m, n) = (self.order(), other.order());
        let table = (0..m * n)
            .map(|x| {
                (0..m * n)
                    .map(|y| self.mul(x / n, y / n) * n + other.mul(x % n, y % n))
                    .collect()
            })
            .collect();
        let inverse = (0..m * n)
            .map(|x| self.inv(x / n) * n + other.inv(x % n))
            .collect();
        FiniteGroup {
            table,
            inverse,
            cyclic: None,
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn cyclic_order(&self) -> Option<usize> {
        self.cyclic
    }

    /// `g^k` for `k >= 0`.
    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// A group homomorphism `source -> target`, verified on the full table.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: Vec<usize>,
    ) -> Result<Self, GModError> {
        if images.len() != source.order() || images.iter().any(|&x| x >= target.order()) {
            return Err(GModError::NotAHomomorphism);
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(GModError::NotAHomomorphism);
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let images = (0..g.order()).collect();
        GroupHom {
            source: g.clone(),
            target: g,
            images,
        }
    }

    pub fn trivial(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Self {
        let images = vec![0; source.order()];
        GroupHom {
            source,
            target,
            images,
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, h: usize) -> usize {
        self.images[h]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_basics() {
        let c4 = FiniteGroup::cyclic(4);
        assert_eq!(c4.order(), 4);
        assert_eq!(c4.element_order(1), 4);
        assert_eq!(c4.element_order(2), 2);
        assert_eq!(c4.inv(1), 3);
        assert!(FiniteGroup::from_table(c4.table().to_vec()).is_ok());
    }

    #[test]
    fn klein_four_is_not_cyclic() {
        let c2 = FiniteGroup::cyclic(2);
        let v4 = c2.product(&c2);
        assert!(v4.is_abelian());
        assert!((1..4).all(|g| v4.element_order(g) == 2));
        assert!(v4.clone().with_cyclic_tag().is_err());
        assert!(FiniteGroup::from_table(v4.table().to_vec()).is_ok());
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![]).is_err());
    }

    #[test]
    fn homomorphism_checks() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        assert!(GroupHom::new(c2.clone(), c4.clone(), vec![0, 2]).is_ok());
        assert!(GroupHom::new(c2.clone(), c4.clone(), vec![0, 1]).is_err());
        assert!(GroupHom::new(c4, c2, vec![0, 1, 0, 1]).is_ok());
    }
}
