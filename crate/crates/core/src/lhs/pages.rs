use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

use crate::exactlin::{Matrix, Subquotient};
use crate::gcoh;
use crate::gmod::FGModule;

use super::{FilteredComplex, LhsError};

/// One cell `E_r^{p,q}`, presented inside `E_2^{p,q}` coordinates, with the data needed to
/// lift classes to window cocycles.
#[derive(Clone, Debug)]
pub struct PageCell {
    pub sub: Subquotient,
    /// Kernel basis of the window map (cells `p..p+r` of `T^n`); `None` on page 2.
    window_kernel: Option<Matrix>,
    window_cells: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SpectralPage {
    pub r: usize,
    pub cells: BTreeMap<(usize, usize), Subquotient>,
    /// `d_r^{p,q}: E_r^{p,q} -> E_r^{p+r, q-r+1}` in page coordinates.
    pub differentials: BTreeMap<(usize, usize), Matrix>,
}

impl PageCell {
    pub fn window_kernel(&self) -> Option<&Matrix> {
        self.window_kernel.as_ref()
    }
}

impl SpectralPage {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.cells.get(&(p, q)).map_or(0, |c| c.dim())
    }

    pub fn all_differentials_zero(&self) -> bool {
        self.differentials.values().all(|m| m.is_zero())
    }
}

/// The spectral sequence of a filtered complex, with `E_2` identified with the group
/// cohomology `H^p(G, Hom(Λ^q L, M))` computed on the same `G`-resolution.
///
/// Page cells exist for `p + q <= degree - 1` and differentials for `p + q <= degree - 2`,
/// where `degree` is the build degree of the resolution.
pub struct SpectralSequence<'a> {
    complex: FilteredComplex<'a>,
    e2: BTreeMap<(usize, usize), Subquotient>,
    hom_modules: Vec<FGModule>,
    /// Sign `s` with `δ_1 = s · δ_A` on row `q`.
    row_signs: BTreeMap<usize, i64>,
    cache: RefCell<BTreeMap<(usize, usize, usize), Rc<PageCell>>>,
}

impl<'a> SpectralSequence<'a> {
    /// Sets up `E_2` and checks it against the independent group-cohomology engine.
    pub fn new(complex: FilteredComplex<'a>) -> Result<Self, LhsError> {
        let res = complex.resolution();
        let gres = res.g_resolution();
        let lattice = res.lattice();
        let field = complex.module().field();
        let n = res.rank();
        let top = complex.degree().saturating_sub(1);
        let hom_modules = (0..=n)
            .map(|q| {
                FGModule::hom(
                    &FGModule::from_lattice(&lattice.wedge_power(q), field),
                    complex.module(),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut e2 = BTreeMap::new();
        let mut row_signs = BTreeMap::new();
        for q in 0..=n.min(top) {
            for p in 0..=top - q {
                let engine_a = gcoh::coboundary(gres, &hom_modules[q], p)?;
                let engine_b = complex
                    .block(1, p + 1, q)
                    .cloned()
                    .unwrap_or_else(|| Matrix::zeros(field, engine_a.rows(), engine_a.cols()));
                if engine_b.rows() != engine_a.rows() || engine_b.cols() != engine_a.cols() {
                    return Err(LhsError::EngineMismatch(format!("δ_1 shape at ({p},{q})")));
                }
                if !engine_a.is_zero() {
                    let sign = if engine_b == engine_a {
                        1
                    } else if engine_b == engine_a.neg() {
                        -1
                    } else {
                        return Err(LhsError::EngineMismatch(format!(
                            "δ_1 differs from the bar coboundary at ({p},{q})"
                        )));
                    };
                    if *row_signs.entry(q).or_insert(sign) != sign {
                        return Err(LhsError::EngineMismatch(format!(
                            "inconsistent δ_1 sign on row {q}"
                        )));
                    }
                } else if !engine_b.is_zero() {
                    return Err(LhsError::EngineMismatch(format!(
                        "δ_1 nonzero where the coboundary vanishes at ({p},{q})"
                    )));
                }
                let h = gcoh::cohomology(gres, &hom_modules[q], p)?;
                let dim_b = engine_b_e2_dim(&complex, p, q, &engine_b);
                if dim_b != h.dim() {
                    return Err(LhsError::EngineMismatch(format!(
                        "E_2^{{{p},{q}}}: engine B {dim_b}, engine A {}",
                        h.dim()
                    )));
                }
                e2.insert((p, q), h);
            }
        }
        Ok(SpectralSequence {
            complex,
            e2,
            hom_modules,
            row_signs,
            cache: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn complex(&self) -> &FilteredComplex<'a> {
        &self.complex
    }

    /// Highest total degree with page cells.
    pub fn top_degree(&self) -> usize {
        self.complex.degree().saturating_sub(1)
    }

    /// `Hom(Λ^q L, M)`, the coefficients of row `q` on page 2.
    pub fn row_module(&self, q: usize) -> &FGModule {
        &self.hom_modules[q]
    }

    pub fn row_sign(&self, q: usize) -> Option<i64> {
        self.row_signs.get(&q).copied()
    }

    fn check_cell(&self, p: usize, q: usize) -> Result<(), LhsError> {
        if p + q > self.top_degree() {
            return Err(LhsError::DegreeBeyondTruncation {
                degree: p + q,
                max: self.top_degree(),
            });
        }
        Ok(())
    }

    /// `E_2^{p,q}` as a subquotient of the cochains `T^{p,q}`; `None` above row `rank L`.
    pub fn e2(&self, p: usize, q: usize) -> Result<Option<&Subquotient>, LhsError> {
        self.check_cell(p, q)?;
        Ok(self.e2.get(&(p, q)))
    }

    fn e2_dim(&self, p: usize, q: usize) -> usize {
        self.e2.get(&(p, q)).map_or(0, |s| s.dim())
    }

    /// `E_r^{p,q}` for `r >= 2`, in `E_2` coordinates.
    pub fn cell(&self, r: usize, p: usize, q: usize) -> Result<Rc<PageCell>, LhsError> {
        assert!(r >= 2, "pages start at 2");
        self.check_cell(p, q)?;
        if let Some(c) = self.cache.borrow().get(&(r, p, q)) {
            return Ok(c.clone());
        }
        let cell = Rc::new(self.compute_cell(r, p, q)?);
        self.cache.borrow_mut().insert((r, p, q), cell.clone());
        Ok(cell)
    }

    fn compute_cell(&self, r: usize, p: usize, q: usize) -> Result<PageCell, LhsError> {
        let dim = self.e2_dim(p, q);
        let field = self.complex.module().field();
        if r == 2 || dim == 0 {
            return Ok(PageCell {
                sub: Subquotient::subspace(&Matrix::identity(field, dim)),
                window_kernel: None,
                window_cells: vec![p],
            });
        }
        let e2 = &self.e2[&(p, q)];
        let n = p + q;
        let rank = self.complex.resolution().rank();
        // cycles: cells p..p+r of T^n with δ vanishing in cells p..p+r of T^{n+1}
        let src: Vec<usize> = (p..=(p + r - 1).min(n)).collect();
        let dst: Vec<usize> = (p..=(p + r - 1).min(n + 1))
            .filter(|&c| n + 1 - c <= rank)
            .collect();
        let kernel = self.complex.window(n, &src, &dst).kernel();
        let head = kernel.submatrix(0..self.complex.cell_dim(p, q), 0..kernel.cols());
        let u = e2.coordinates(&head)?;
        // boundaries: δ of cells p-r+1..p-1 of T^{n-1} vanishing in those cells of T^n
        let w = if p == 0 {
            Matrix::zeros(field, dim, 0)
        } else {
            let lo = (p + 1).saturating_sub(r);
            let src_b: Vec<usize> = (lo..p).filter(|&c| n - 1 - c <= rank).collect();
            let dst_b: Vec<usize> = (lo..p).filter(|&c| n - c <= rank).collect();
            let kb = self.complex.window(n - 1, &src_b, &dst_b).kernel();
            let image = self.complex.window(n - 1, &src_b, &[p]).mul(&kb);
            e2.coordinates(&image)?
        };
        Ok(PageCell {
            sub: Subquotient::new(&u, &w)?,
            window_kernel: Some(kernel),
            window_cells: src,
        })
    }

    /// A window cocycle whose `p`-cell represents the `E_2` class with coordinates `c`,
    /// provided that class survives to page `r`.
    pub fn lift(
        &self,
        r: usize,
        p: usize,
        q: usize,
        coords: &Matrix,
    ) -> Result<(Vec<usize>, Matrix), LhsError> {
        let cell = self.cell(r, p, q)?;
        let e2 = &self.e2[&(p, q)];
        let u0 = e2.lift(coords);
        let Some(kernel) = &cell.window_kernel else {
            return Ok((vec![p], u0));
        };
        let head_rows = self.complex.cell_dim(p, q);
        let head = kernel.submatrix(0..head_rows, 0..kernel.cols());
        let field = self.complex.module().field();
        let system = match self.complex.block(1, p, q) {
            Some(b) => Matrix::hstack(field, head_rows, &[&head, b]),
            None => head,
        };
        let sol = system
            .solve(&u0)
            .map_err(|_| LhsError::NotOnPage { r, p, q })?;
        let a = sol.submatrix(0..kernel.cols(), 0..1);
        Ok((cell.window_cells.clone(), kernel.mul(&a)))
    }

    /// Cell `target` of `δx` for a window cochain `x` on cells `cells` of `T^n`.
    pub fn push(&self, n: usize, cells: &[usize], x: &Matrix, target: usize) -> Matrix {
        self.complex.window(n, cells, &[target]).mul(x)
    }

    /// `d_r^{p,q}` in page coordinates.
    pub fn differential(&self, r: usize, p: usize, q: usize) -> Result<Matrix, LhsError> {
        self.check_cell(p, q + 1)?;
        let src = self.cell(r, p, q)?;
        let field = self.complex.module().field();
        if q + 1 < r {
            return Ok(Matrix::zeros(field, 0, src.sub.dim()));
        }
        let (tp, tq) = (p + r, q + 1 - r);
        let dst = self.cell(r, tp, tq)?;
        let mut out = Matrix::zeros(field, dst.sub.dim(), src.sub.dim());
        if dst.sub.dim() == 0 {
            return Ok(out);
        }
        for j in 0..src.sub.dim() {
            let y = self.apply_to_coords(r, p, q, &src.sub.reps().column(j))?;
            let c = dst.sub.coordinates(&y)?;
            out.set_block(0, j, &c);
        }
        Ok(out)
    }

    /// `d_r` of an `E_2` class surviving to page `r`, returned in `E_2^{p+r, q-r+1}` coordinates.
    pub fn apply_to_coords(
        &self,
        r: usize,
        p: usize,
        q: usize,
        coords: &Matrix,
    ) -> Result<Matrix, LhsError> {
        let (cells, x) = self.lift(r, p, q, coords)?;
        let (tp, tq) = (p + r, q + 1 - r);
        let y = self.push(p + q, &cells, &x, tp);
        match self.e2.get(&(tp, tq)) {
            Some(e2) => Ok(e2.coordinates(&y)?),
            None => Ok(Matrix::zeros(self.complex.module().field(), 0, 1)),
        }
    }

    /// `E_∞^{p,q}`: page `max(p, q+1) + 1`, after which no differential enters or leaves.
    pub fn e_infinity(&self, p: usize, q: usize) -> Result<Rc<PageCell>, LhsError> {
        self.cell(p.max(q + 1) + 1, p, q)
    }

    /// Pages `2..=max_page` on cells with `p + q <= max_total`, with audits: `d_r ∘ d_r = 0` and
    /// `dim E_{r+1} = dim E_r - rank(out) - rank(in)` wherever both differentials are in range.
    pub fn run(&self, max_page: usize, max_total: usize) -> Result<Vec<SpectralPage>, LhsError> {
        if max_total > self.top_degree() {
            return Err(LhsError::DegreeBeyondTruncation {
                degree: max_total,
                max: self.top_degree(),
            });
        }
        let rank = self.complex.resolution().rank();
        let diff_top = max_total.min(self.top_degree().saturating_sub(1));
        let mut pages: Vec<SpectralPage> = Vec::new();
        for r in 2..=max_page {
            let mut page = SpectralPage {
                r,
                cells: BTreeMap::new(),
                differentials: BTreeMap::new(),
            };
            for n in 0..=max_total {
                for q in 0..=rank.min(n) {
                    let p = n - q;
                    page.cells.insert((p, q), self.cell(r, p, q)?.sub.clone());
                    if n <= diff_top {
                        page.differentials
                            .insert((p, q), self.differential(r, p, q)?);
                    }
                }
            }
            for (&(p, q), d) in &page.differentials {
                if q + 1 < r {
                    continue;
                }
                if let Some(next) = page.differentials.get(&(p + r, q + 1 - r)) {
                    if !next.mul(d).is_zero() {
                        return Err(LhsError::EngineMismatch(format!(
                            "d_{r} ∘ d_{r} ≠ 0 at ({p},{q})"
                        )));
                    }
                }
            }
            if let Some(prev) = pages.last() {
                audit_page(prev, &page)?;
            }
            pages.push(page);
        }
        Ok(pages)
    }

    /// `(Σ_{p+q=n} dim E_∞^{p,q}, dim H^n(Γ, M))`.
    pub fn abutment(&self, n: usize) -> Result<(usize, usize), LhsError> {
        let rank = self.complex.resolution().rank();
        let mut graded = 0;
        for q in 0..=rank.min(n) {
            graded += self.e_infinity(n - q, q)?.sub.dim();
        }
        Ok((graded, self.complex.total_cohomology_dim(n)?))
    }
}

fn engine_b_e2_dim(complex: &FilteredComplex<'_>, p: usize, q: usize, out: &Matrix) -> usize {
    let incoming = if p == 0 {
        0
    } else {
        complex.block(1, p, q).map_or(0, |m| m.rank())
    };
    complex.cell_dim(p, q) - out.rank() - incoming
}

fn audit_page(prev: &SpectralPage, next: &SpectralPage) -> Result<(), LhsError> {
    let r = prev.r;
    for (&(p, q), cell) in &next.cells {
        let Some(out) = prev.differentials.get(&(p, q)) else {
            continue;
        };
        let incoming = if p >= r && prev.cells.contains_key(&(p - r, q + r - 1)) {
            match prev.differentials.get(&(p - r, q + r - 1)) {
                Some(m) => m.rank(),
                None => continue,
            }
        } else {
            0
        };
        let expect = prev.dim(p, q) - out.rank() - incoming;
        if cell.dim() != expect {
            return Err(LhsError::EngineMismatch(format!(
                "dim E_{}^{{{p},{q}}} = {} but homology of E_{r} gives {expect}",
                r + 1,
                cell.dim()
            )));
        }
    }
    Ok(())
}
