use std::fmt;
use std::sync::Arc;

use crate::exactlin::{FieldSpec, Matrix};

use super::{FiniteGroup, GLattice, GModError, GroupHom};

/// A finite-dimensional `FG`-module: one invertible matrix per group element.
///
/// These are exactly the coefficient modules on which the lattice acts trivially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGModule {
    group: Arc<FiniteGroup>,
    field: FieldSpec,
    dim: usize,
    action: Vec<Matrix>,
}

impl FGModule {
    /// Validates the representation property on every pair of elements.
    pub fn new(
        group: Arc<FiniteGroup>,
        field: FieldSpec,
        action: Vec<Matrix>,
    ) -> Result<Self, GModError> {
        if action.len() != group.order() {
            return Err(GModError::NotARepresentation(
                "wrong number of matrices".into(),
            ));
        }
        let dim = action[0].rows();
        for a in &action {
            if a.rows() != dim || a.cols() != dim || a.field() != field {
                return Err(GModError::NotARepresentation(
                    "matrix shape or field mismatch".into(),
                ));
            }
        }
        if !action[0].is_identity() {
            return Err(GModError::NotARepresentation(
                "identity does not act trivially".into(),
            ));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if action[g].mul(&action[h]) != action[group.mul(g, h)] {
                    return Err(GModError::NotARepresentation(format!(
                        "rho({g}) rho({h}) mismatch"
                    )));
                }
            }
        }
        Ok(FGModule {
            group,
            field,
            dim,
            action,
        })
    }

    pub fn trivial(group: Arc<FiniteGroup>, field: FieldSpec, dim: usize) -> Self {
        let action = vec![Matrix::identity(field, dim); group.order()];
        FGModule {
            group,
            field,
            dim,
            action,
        }
    }

    /// `L ⊗ F`.
    pub fn from_lattice(lattice: &GLattice, field: FieldSpec) -> Self {
        let action = lattice
            .actions()
            .iter()
            .map(|a| a.to_field(field))
            .collect();
        FGModule {
            group: lattice.group().clone(),
            field,
            dim: lattice.rank(),
            action,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    fn check_compatible(&self, other: &FGModule) -> Result<(), GModError> {
        if self.field != other.field {
            return Err(GModError::FieldMismatch);
        }
        if self.group != other.group {
            return Err(GModError::GroupMismatch);
        }
        Ok(())
    }

    /// `Hom_F(A, B)` with `g·f = g ∘ f ∘ g⁻¹`. Coordinate of `f` at `a * dim B + b` is `f(e_a)_b`.
    pub fn hom(a: &FGModule, b: &FGModule) -> Result<FGModule, GModError> {
        a.check_compatible(b)?;
        let g = &a.group;
        let action = (0..g.order())
            .map(|x| a.action[g.inv(x)].transpose().kron(&b.action[x]))
            .collect();
        Ok(FGModule {
            group: g.clone(),
            field: a.field,
            dim: a.dim * b.dim,
            action,
        })
    }

    pub fn dual(&self) -> FGModule {
        let triv = FGModule::trivial(self.group.clone(), self.field, 1);
        FGModule::hom(self, &triv).expect("same group and field")
    }

    /// Coordinate of `a ⊗ b` at `a * dim B + b`.
    pub fn tensor(a: &FGModule, b: &FGModule) -> Result<FGModule, GModError> {
        a.check_compatible(b)?;
        let action = a
            .action
            .iter()
            .zip(&b.action)
            .map(|(x, y)| x.kron(y))
            .collect();
        Ok(FGModule {
            group: a.group.clone(),
            field: a.field,
            dim: a.dim * b.dim,
            action,
        })
    }

    pub fn direct_sum(a: &FGModule, b: &FGModule) -> Result<FGModule, GModError> {
        a.check_compatible(b)?;
        let f = a.field;
        let action = a
            .action
            .iter()
            .zip(&b.action)
            .map(|(x, y)| {
                let mut m = Matrix::zeros(f, a.dim + b.dim, a.dim + b.dim);
                m.set_block(0, 0, x);
                m.set_block(a.dim, a.dim, y);
                m
            })
            .collect();
        Ok(FGModule {
            group: a.group.clone(),
            field: f,
            dim: a.dim + b.dim,
            action,
        })
    }

    /// Pullback `σ^* M` along `σ: H -> G`.
    pub fn restrict_along(&self, sigma: &GroupHom) -> Result<FGModule, GModError> {
        if **sigma.target() != *self.group {
            return Err(GModError::GroupMismatch);
        }
        let action = (0..sigma.source().order())
            .map(|h| self.action[sigma.apply(h)].clone())
            .collect();
        Ok(FGModule {
            group: sigma.source().clone(),
            field: self.field,
            dim: self.dim,
            action,
        })
    }

    /// Checks `T ρ_self(g) = ρ_target(g) T` for every `g`.
    pub fn is_equivariant_map(&self, target: &FGModule, t: &Matrix) -> bool {
        t.rows() == target.dim
            && t.cols() == self.dim
            && (0..self.group.order()).all(|g| t.mul(&self.action[g]) == target.action[g].mul(t))
    }

    /// Invariants `M^G`, as a basis (columns): kernel of the stacked `ρ(g) - I`.
    pub fn invariants(&self) -> Matrix {
        let id = Matrix::identity(self.field, self.dim);
        let blocks: Vec<Matrix> = self.action.iter().map(|a| a.sub(&id)).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::vstack(self.field, self.dim, &refs).kernel()
    }
}

/// Expression for a coefficient module built from a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleSpec {
    Triv,
    Wedge(usize),
    Dual(Box<ModuleSpec>),
    Hom(Box<ModuleSpec>, Box<ModuleSpec>),
    Tensor(Box<ModuleSpec>, Box<ModuleSpec>),
    DirectSum(Box<ModuleSpec>, Box<ModuleSpec>),
}

impl ModuleSpec {
    /// Parses `triv | wedge:t | dual(S) | hom(S,S) | tensor(S,S) | sum(S,S)`.
    pub fn parse(s: &str) -> Result<Self, GModError> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (spec, rest) = parse_expr(&cleaned)?;
        if !rest.is_empty() {
            return Err(GModError::BadSpec(format!("trailing input `{rest}`")));
        }
        Ok(spec)
    }

    pub fn eval(&self, lattice: &GLattice, field: FieldSpec) -> Result<FGModule, GModError> {
        Ok(match self {
            ModuleSpec::Triv => FGModule::trivial(lattice.group().clone(), field, 1),
            ModuleSpec::Wedge(t) => FGModule::from_lattice(&lattice.wedge_power(*t), field),
            ModuleSpec::Dual(e) => e.eval(lattice, field)?.dual(),
            ModuleSpec::Hom(a, b) => {
                FGModule::hom(&a.eval(lattice, field)?, &b.eval(lattice, field)?)?
            }
            ModuleSpec::Tensor(a, b) => {
                FGModule::tensor(&a.eval(lattice, field)?, &b.eval(lattice, field)?)?
            }
            ModuleSpec::DirectSum(a, b) => {
                FGModule::direct_sum(&a.eval(lattice, field)?, &b.eval(lattice, field)?)?
            }
        })
    }
}

fn parse_expr(s: &str) -> Result<(ModuleSpec, &str), GModError> {
    if let Some(rest) = s.strip_prefix("triv") {
        return Ok((ModuleSpec::Triv, rest));
    }
    if let Some(rest) = s.strip_prefix("wedge:") {
        let end = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        let t = rest[..end]
            .parse()
            .map_err(|_| GModError::BadSpec("wedge needs a degree".into()))?;
        return Ok((ModuleSpec::Wedge(t), &rest[end..]));
    }
    if let Some(rest) = s.strip_prefix("dual(") {
        let (e, rest) = parse_expr(rest)?;
        let rest = rest
            .strip_prefix(')')
            .ok_or_else(|| GModError::BadSpec("expected `)`".into()))?;
        return Ok((ModuleSpec::Dual(Box::new(e)), rest));
    }
    for (name, ctor) in [
        ("hom(", ModuleSpec::Hom as fn(_, _) -> _),
        ("tensor(", ModuleSpec::Tensor),
        ("sum(", ModuleSpec::DirectSum),
    ] {
        if let Some(rest) = s.strip_prefix(name) {
            let (a, rest) = parse_expr(rest)?;
            let rest = rest
                .strip_prefix(',')
                .ok_or_else(|| GModError::BadSpec("expected `,`".into()))?;
            let (b, rest) = parse_expr(rest)?;
            let rest = rest
                .strip_prefix(')')
                .ok_or_else(|| GModError::BadSpec("expected `)`".into()))?;
            return Ok((ctor(Box::new(a), Box::new(b)), rest));
        }
    }
    Err(GModError::BadSpec(format!("cannot parse `{s}`")))
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleSpec::Triv => write!(f, "triv"),
            ModuleSpec::Wedge(t) => write!(f, "wedge:{t}"),
            ModuleSpec::Dual(e) => write!(f, "dual({e})"),
            ModuleSpec::Hom(a, b) => write!(f, "hom({a},{b})"),
            ModuleSpec::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            ModuleSpec::DirectSum(a, b) => write!(f, "sum({a},{b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::IntMatrix;

    fn swap_lattice() -> GLattice {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        GLattice::from_generators(
            c2,
            2,
            &[(1, IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]))],
        )
        .unwrap()
    }

    #[test]
    fn hom_of_trivials_is_trivial() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let f = FieldSpec::prime(3).unwrap();
        let t = FGModule::trivial(g.clone(), f, 1);
        assert_eq!(FGModule::hom(&t, &t).unwrap(), t);
    }

    #[test]
    fn hom_from_trivial_is_postcomposition() {
        let l = swap_lattice();
        let f = FieldSpec::rationals();
        let m = FGModule::from_lattice(&l, f);
        let t = FGModule::trivial(l.group().clone(), f, 1);
        let h = FGModule::hom(&t, &m).unwrap();
        assert_eq!(h.action(1), m.action(1));
    }

    #[test]
    fn hom_dimension() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let l = GLattice::from_generators(c2, 3, &[(1, IntMatrix::diag(&[-1, 1, -1]))]).unwrap();
        let f = FieldSpec::prime(2).unwrap();
        let spec = ModuleSpec::parse("hom(wedge:1, wedge:2)").unwrap();
        assert_eq!(spec.eval(&l, f).unwrap().dim(), 9);
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "triv",
            "wedge:2",
            "dual(wedge:1)",
            "hom(wedge:1,tensor(triv,wedge:3))",
            "sum(triv,dual(triv))",
        ] {
            assert_eq!(ModuleSpec::parse(s).unwrap().to_string(), s);
        }
        assert!(ModuleSpec::parse("wedge").is_err());
        assert!(ModuleSpec::parse("hom(triv)").is_err());
        assert!(ModuleSpec::parse("triv triv").is_err());
    }

    #[test]
    fn double_dual_is_identity_in_coordinates() {
        let l = swap_lattice();
        let f = FieldSpec::prime(3).unwrap();
        let m = FGModule::from_lattice(&l, f);
        assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn invariants_of_swap() {
        let l = swap_lattice();
        let m = FGModule::from_lattice(&l, FieldSpec::rationals());
        assert_eq!(m.invariants().cols(), 1);
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let l = swap_lattice();
        let a = FGModule::from_lattice(&l, FieldSpec::rationals());
        let b = FGModule::from_lattice(&l, FieldSpec::prime(2).unwrap());
        assert_eq!(FGModule::hom(&a, &b), Err(GModError::FieldMismatch));
    }
}
