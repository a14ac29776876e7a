use std::fmt;
use std::ops::Range;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{inv_mod, reduce_i64, FieldKind, FieldSpec, Scalar};
use super::LinAlgError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Store {
    Mod(Vec<u32>),
    Rat(Vec<BigRational>),
}

/// Dense matrix over a `FieldSpec`, stored row-major.
///
/// Vectors are matrices with one column; subspaces are matrices whose columns span them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    store: Store,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        let store = match field.kind() {
            FieldKind::Prime(_) => Store::Mod(vec![0; rows * cols]),
            FieldKind::Rationals => Store::Rat(vec![BigRational::zero(); rows * cols]),
        };
        Matrix {
            field,
            rows,
            cols,
            store,
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from row-major integer entries.
    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        let store = match field.kind() {
            FieldKind::Prime(p) => Store::Mod(entries.iter().map(|&v| reduce_i64(v, p)).collect()),
            FieldKind::Rationals => Store::Rat(
                entries
                    .iter()
                    .map(|&v| BigRational::from_integer(v.into()))
                    .collect(),
            ),
        };
        Matrix {
            field,
            rows,
            cols,
            store,
        }
    }

    pub fn from_rows_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let flat: Vec<i64> = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().copied()
            })
            .collect();
        Self::from_i64(field, r, c, &flat)
    }

    pub fn from_fn_i64(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut flat = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                flat.push(f(i, j));
            }
        }
        Self::from_i64(field, rows, cols, &flat)
    }

    pub fn from_scalars(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        let store = match field.kind() {
            FieldKind::Prime(_) => Store::Mod(
                entries
                    .into_iter()
                    .map(|s| match s {
                        Scalar::Mod(v) => v,
                        Scalar::Rat(_) => panic!("rational scalar in prime field"),
                    })
                    .collect(),
            ),
            FieldKind::Rationals => Store::Rat(
                entries
                    .into_iter()
                    .map(|s| match s {
                        Scalar::Rat(v) => v,
                        Scalar::Mod(_) => panic!("modular scalar in rational field"),
                    })
                    .collect(),
            ),
        };
        Matrix {
            field,
            rows,
            cols,
            store,
        }
    }

    pub fn column_vector(field: FieldSpec, entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        Self::from_scalars(field, n, 1, entries)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let k = i * self.cols + j;
        match &self.store {
            Store::Mod(d) => Scalar::Mod(d[k]),
            Store::Rat(d) => Scalar::Rat(d[k].clone()),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let k = i * self.cols + j;
        match (&mut self.store, v) {
            (Store::Mod(d), Scalar::Mod(v)) => d[k] = v,
            (Store::Rat(d), Scalar::Rat(v)) => d[k] = v,
            _ => panic!("scalar does not belong to {}", self.field),
        }
    }

    /// `self[i][j] += c * v`, with `c` an integer.
    pub fn add_i64(&mut self, i: usize, j: usize, c: i64) {
        let k = i * self.cols + j;
        match (&mut self.store, self.field.kind()) {
            (Store::Mod(d), FieldKind::Prime(p)) => {
                d[k] = ((d[k] as u64 + reduce_i64(c, p) as u64) % p as u64) as u32
            }
            (Store::Rat(d), _) => d[k] += BigRational::from_integer(c.into()),
            _ => unreachable!(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Mod(d) => d.iter().all(|&v| v == 0),
            Store::Rat(d) => d.iter().all(|v| v.is_zero()),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.field, self.rows)
    }

    fn check_field(&self, other: &Matrix) {
        assert_eq!(self.field, other.field, "field mismatch");
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.check_field(other);
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let (n, m, k) = (self.rows, other.cols, self.cols);
        let mut out = Matrix::zeros(self.field, n, m);
        match (&self.store, &other.store, &mut out.store, self.field.kind()) {
            (Store::Mod(a), Store::Mod(b), Store::Mod(c), FieldKind::Prime(p)) => {
                let p = p as u64;
                let mut acc = vec![0u64; m];
                for i in 0..n {
                    acc.iter_mut().for_each(|x| *x = 0);
                    for l in 0..k {
                        let av = a[i * k + l] as u64;
                        if av == 0 {
                            continue;
                        }
                        let brow = &b[l * m..(l + 1) * m];
                        for (x, &bv) in acc.iter_mut().zip(brow) {
                            *x = (*x + av * bv as u64) % p;
                        }
                    }
                    for (j, x) in acc.iter().enumerate() {
                        c[i * m + j] = *x as u32;
                    }
                }
            }
            (Store::Rat(a), Store::Rat(b), Store::Rat(c), _) => {
                for i in 0..n {
                    for l in 0..k {
                        let av = &a[i * k + l];
                        if av.is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            let bv = &b[l * m + j];
                            if !bv.is_zero() {
                                c[i * m + j] += av * bv;
                            }
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }

    fn zip_with(&self, other: &Matrix, sign: i64) -> Matrix {
        self.check_field(other);
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        let mut out = self.clone();
        match (&mut out.store, &other.store, self.field.kind()) {
            (Store::Mod(a), Store::Mod(b), FieldKind::Prime(p)) => {
                let s = reduce_i64(sign, p) as u64;
                for (x, &y) in a.iter_mut().zip(b) {
                    *x = ((*x as u64 + s * y as u64) % p as u64) as u32;
                }
            }
            (Store::Rat(a), Store::Rat(b), _) => {
                for (x, y) in a.iter_mut().zip(b) {
                    if sign == 1 {
                        *x += y;
                    } else {
                        *x -= y;
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, 1)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, -1)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut out = self.clone();
        match (&mut out.store, c, self.field.kind()) {
            (Store::Mod(a), Scalar::Mod(c), FieldKind::Prime(p)) => {
                for x in a.iter_mut() {
                    *x = ((*x as u64 * *c as u64) % p as u64) as u32;
                }
            }
            (Store::Rat(a), Scalar::Rat(c), _) => {
                for x in a.iter_mut() {
                    *x *= c;
                }
            }
            _ => panic!("scalar does not belong to {}", self.field),
        }
        out
    }

    pub fn scale_i64(&self, c: i64) -> Matrix {
        self.scale(&self.field.from_i64(c))
    }

    pub fn neg(&self) -> Matrix {
        self.scale_i64(-1)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Kronecker product; row index `(i, k) -> i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        self.check_field(other);
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(&a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !f.is_zero(&b) {
                            out.set(i * other.rows + k, j * other.cols + l, f.mul(&a, &b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Concatenates matrices side by side. All must have `rows` rows.
    pub fn hstack(field: FieldSpec, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut c0 = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "row mismatch in hstack");
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        out
    }

    pub fn vstack(field: FieldSpec, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut r0 = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "column mismatch in vstack");
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        out
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Matrix {
        assert!(
            rows.end <= self.rows && cols.end <= self.cols,
            "submatrix out of range"
        );
        let mut out = Matrix::zeros(self.field, rows.len(), cols.len());
        match (&mut out.store, &self.store) {
            (Store::Mod(o), Store::Mod(s)) => {
                for (oi, i) in rows.clone().enumerate() {
                    o[oi * cols.len()..(oi + 1) * cols.len()]
                        .copy_from_slice(&s[i * self.cols + cols.start..i * self.cols + cols.end]);
                }
            }
            (Store::Rat(o), Store::Rat(s)) => {
                for (oi, i) in rows.clone().enumerate() {
                    o[oi * cols.len()..(oi + 1) * cols.len()]
                        .clone_from_slice(&s[i * self.cols + cols.start..i * self.cols + cols.end]);
                }
            }
            _ => unreachable!(),
        }
        out
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.submatrix(0..self.rows, j..j + 1)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for (oj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, oj, self.get(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, idx.len(), self.cols);
        for (oi, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(oi, j, self.get(i, j));
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        self.check_field(block);
        assert!(
            r0 + block.rows <= self.rows && c0 + block.cols <= self.cols,
            "block out of range"
        );
        match (&mut self.store, &block.store) {
            (Store::Mod(d), Store::Mod(b)) => {
                for i in 0..block.rows {
                    let dst = (r0 + i) * self.cols + c0;
                    d[dst..dst + block.cols]
                        .copy_from_slice(&b[i * block.cols..(i + 1) * block.cols]);
                }
            }
            (Store::Rat(d), Store::Rat(b)) => {
                for i in 0..block.rows {
                    let dst = (r0 + i) * self.cols + c0;
                    d[dst..dst + block.cols]
                        .clone_from_slice(&b[i * block.cols..(i + 1) * block.cols]);
                }
            }
            _ => unreachable!(),
        }
    }

    /// `self[r0.., c0..] += c * block`.
    pub fn add_block_i64(&mut self, r0: usize, c0: usize, block: &Matrix, c: i64) {
        self.check_field(block);
        assert!(
            r0 + block.rows <= self.rows && c0 + block.cols <= self.cols,
            "block out of range"
        );
        match (&mut self.store, &block.store, self.field.kind()) {
            (Store::Mod(d), Store::Mod(b), FieldKind::Prime(p)) => {
                let s = reduce_i64(c, p) as u64;
                if s == 0 {
                    return;
                }
                for i in 0..block.rows {
                    let dst = (r0 + i) * self.cols + c0;
                    for (x, &y) in d[dst..dst + block.cols]
                        .iter_mut()
                        .zip(&b[i * block.cols..(i + 1) * block.cols])
                    {
                        *x = ((*x as u64 + s * y as u64) % p as u64) as u32;
                    }
                }
            }
            (Store::Rat(d), Store::Rat(b), _) => {
                let s = BigRational::from_integer(c.into());
                for i in 0..block.rows {
                    let dst = (r0 + i) * self.cols + c0;
                    for (x, y) in d[dst..dst + block.cols]
                        .iter_mut()
                        .zip(&b[i * block.cols..(i + 1) * block.cols])
                    {
                        if !y.is_zero() {
                            *x += &s * y;
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// In-place Gauss-Jordan (`full`) or forward elimination. Returns pivot columns.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        match (&mut self.store, self.field.kind()) {
            (Store::Mod(d), FieldKind::Prime(p)) => {
                let mut r = 0;
                for c in 0..cols {
                    if r == rows {
                        break;
                    }
                    let Some(piv) = (r..rows).find(|&i| d[i * cols + c] != 0) else {
                        continue;
                    };
                    if piv != r {
                        for j in c..cols {
                            d.swap(piv * cols + j, r * cols + j);
                        }
                    }
                    let inv = inv_mod(d[r * cols + c], p) as u64;
                    if inv != 1 {
                        for x in &mut d[r * cols + c..(r + 1) * cols] {
                            *x = (*x as u64 * inv % p as u64) as u32;
                        }
                    }
                    let start = if full { 0 } else { r + 1 };
                    for i in start..rows {
                        if i == r {
                            continue;
                        }
                        let a = d[i * cols + c];
                        if a == 0 {
                            continue;
                        }
                        let (pivot_row, target) = if i < r {
                            let (lo, hi) = d.split_at_mut(r * cols);
                            (&hi[c..cols], &mut lo[i * cols + c..(i + 1) * cols])
                        } else {
                            let (lo, hi) = d.split_at_mut(i * cols);
                            (&lo[r * cols + c..(r + 1) * cols], &mut hi[c..cols])
                        };
                        if p == 2 {
                            for (x, &y) in target.iter_mut().zip(pivot_row) {
                                *x ^= y;
                            }
                        } else {
                            let f = (p - a) as u64;
                            for (x, &y) in target.iter_mut().zip(pivot_row) {
                                if y != 0 {
                                    *x = ((*x as u64 + f * y as u64) % p as u64) as u32;
                                }
                            }
                        }
                    }
                    pivots.push(c);
                    r += 1;
                }
            }
            (Store::Rat(d), _) => {
                let mut r = 0;
                for c in 0..cols {
                    if r == rows {
                        break;
                    }
                    let Some(piv) = (r..rows).find(|&i| !d[i * cols + c].is_zero()) else {
                        continue;
                    };
                    if piv != r {
                        for j in c..cols {
                            d.swap(piv * cols + j, r * cols + j);
                        }
                    }
                    let inv = d[r * cols + c].recip();
                    if !inv.is_one() {
                        for x in &mut d[r * cols + c..(r + 1) * cols] {
                            *x *= &inv;
                        }
                    }
                    let pivot_row: Vec<BigRational> = d[r * cols + c..(r + 1) * cols].to_vec();
                    let start = if full { 0 } else { r + 1 };
                    for i in start..rows {
                        if i == r || d[i * cols + c].is_zero() {
                            continue;
                        }
                        let a = d[i * cols + c].clone();
                        for (x, y) in d[i * cols + c..(i + 1) * cols].iter_mut().zip(&pivot_row) {
                            if !y.is_zero() {
                                *x -= &a * y;
                            }
                        }
                    }
                    pivots.push(c);
                    r += 1;
                }
            }
            _ => unreachable!(),
        }
        pivots
    }

    /// Basis of the null space, as columns.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = self.field;
        let mut out = Matrix::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, fc);
                if !f.is_zero(&v) {
                    out.set(pc, k, f.neg(&v));
                }
            }
        }
        out
    }

    /// Solves `self * X = B` for every column of `B` at once.
    pub fn solve_many(&self, b: &Matrix) -> Result<Matrix, LinAlgError> {
        self.check_field(b);
        if b.rows != self.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows,
                found: b.rows,
            });
        }
        let aug = Matrix::hstack(self.field, self.rows, &[self, b]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Err(LinAlgError::NoSolution);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Ok(x)
    }

    /// Solves `self * x = b`; `NoSolution` when `b` is not in the column space.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix, LinAlgError> {
        assert_eq!(b.cols, 1, "solve expects a column vector");
        self.solve_many(b)
    }

    /// Independent columns spanning the same space (pivot columns, in order).
    pub fn column_basis(&self) -> Matrix {
        let mut m = self.clone();
        let pivots = m.eliminate(false);
        self.select_columns(&pivots)
    }

    /// Canonical form of the column space: the nonzero rows of rref(transpose).
    pub fn column_space_canonical(&self) -> Matrix {
        let (r, pivots) = self.transpose().rref();
        r.submatrix(0..pivots.len(), 0..self.rows)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Matrix::hstack(self.field, n, &[self, &Matrix::identity(self.field, n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    /// Entries as integers, when every entry has one. Residues mod p are returned in `0..p`.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        match &self.store {
            Store::Mod(d) => Some(d.iter().map(|&v| v as i64).collect()),
            Store::Rat(d) => d
                .iter()
                .map(|v| {
                    if v.is_integer() {
                        i64::try_from(v.to_integer()).ok()
                    } else {
                        None
                    }
                })
                .collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
