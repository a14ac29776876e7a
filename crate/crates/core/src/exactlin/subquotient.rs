use super::{FieldSpec, LinAlgError, Matrix};

/// A presented subquotient `U / W` of an ambient coordinate space, with chosen
/// coset representatives and a coordinate map.
#[derive(Clone, Debug)]
pub struct Subquotient {
    field: FieldSpec,
    ambient: usize,
    u_basis: Matrix,
    w_basis: Matrix,
    reps: Matrix,
    /// Rows of `[w_basis | reps]` forming an invertible square block.
    solver_rows: Vec<usize>,
    /// Inverse of that block.
    solver: Matrix,
}

impl Subquotient {
    /// `U / W` from spanning sets (columns). Fails if `W` is not contained in `U`.
    pub fn new(u_span: &Matrix, w_span: &Matrix) -> Result<Self, LinAlgError> {
        let field = u_span.field();
        let ambient = u_span.rows();
        if w_span.rows() != ambient {
            return Err(LinAlgError::DimensionMismatch {
                expected: ambient,
                found: w_span.rows(),
            });
        }
        let u_basis = u_span.column_basis();
        let combined = Matrix::hstack(field, ambient, &[w_span, &u_basis]);
        let (_, pivots) = combined.rref();
        if pivots.len() != u_basis.cols() {
            return Err(LinAlgError::InclusionViolation);
        }
        let w_cols: Vec<usize> = pivots
            .iter()
            .copied()
            .filter(|&c| c < w_span.cols())
            .collect();
        let rep_cols: Vec<usize> = pivots
            .iter()
            .copied()
            .filter(|&c| c >= w_span.cols())
            .collect();
        let w_basis = combined.select_columns(&w_cols);
        let reps = combined.select_columns(&rep_cols);
        let both = Matrix::hstack(field, ambient, &[&w_basis, &reps]);
        let (_, rows) = both.transpose().rref();
        let solver = both
            .select_rows(&rows)
            .inverse()
            .expect("pivot rows of an independent family form an invertible block");
        Ok(Subquotient {
            field,
            ambient,
            u_basis,
            w_basis,
            reps,
            solver_rows: rows,
            solver,
        })
    }

    /// The whole subspace spanned by `u_span`, modulo nothing.
    pub fn subspace(u_span: &Matrix) -> Self {
        let w = Matrix::zeros(u_span.field(), u_span.rows(), 0);
        Self::new(u_span, &w).expect("zero subspace is always included")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn u_basis(&self) -> &Matrix {
        &self.u_basis
    }

    pub fn w_basis(&self) -> &Matrix {
        &self.w_basis
    }

    pub fn reps(&self) -> &Matrix {
        &self.reps
    }

    /// Coordinates in `U / W` of every column of `v`. Fails if a column is not in `U`.
    pub fn coordinates(&self, v: &Matrix) -> Result<Matrix, LinAlgError> {
        if v.rows() != self.ambient {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.ambient,
                found: v.rows(),
            });
        }
        let k = self.w_basis.cols();
        let full = self.solver.mul(&v.select_rows(&self.solver_rows));
        let both = Matrix::hstack(self.field, self.ambient, &[&self.w_basis, &self.reps]);
        if both.mul(&full) != *v {
            return Err(LinAlgError::NotInSubspace);
        }
        Ok(full.submatrix(k..full.rows(), 0..v.cols()))
    }

    /// Representative vectors for coordinate columns.
    pub fn lift(&self, coords: &Matrix) -> Matrix {
        self.reps.mul(coords)
    }

    pub fn contains(&self, v: &Matrix) -> bool {
        self.coordinates(v).is_ok()
    }

    /// True when `v` lies in `W`, i.e. is zero in the quotient.
    pub fn is_trivial(&self, v: &Matrix) -> bool {
        matches!(self.coordinates(v), Ok(c) if c.is_zero())
    }
}

/// Matrix of the map `src -> dst` induced by an ambient map `f`.
pub fn induced_map(
    f: &Matrix,
    src: &Subquotient,
    dst: &Subquotient,
) -> Result<Matrix, LinAlgError> {
    if f.cols() != src.ambient_dim() || f.rows() != dst.ambient_dim() {
        return Err(LinAlgError::DimensionMismatch {
            expected: src.ambient_dim(),
            found: f.cols(),
        });
    }
    let w_image = f.mul(src.w_basis());
    match dst.coordinates(&w_image) {
        Ok(c) if c.is_zero() => {}
        _ => return Err(LinAlgError::NotWellDefined),
    }
    dst.coordinates(&f.mul(src.reps()))
        .map_err(|_| LinAlgError::NotWellDefined)
}
