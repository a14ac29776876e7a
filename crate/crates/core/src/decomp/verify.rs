use crate::exactlin::{FieldSpec, Matrix, Subquotient};
use crate::gcoh::{self, GResolution};
use crate::gmod::FGModule;
use crate::lhs::{char_class, ClassStatus, FilteredComplex, SpectralSequence, TwistedResolution};

use super::{DecompError, Side, Split, Verdict};

/// Twisted resolutions of `L`, `L'` and `L''` on one shared `G`-resolution.
pub struct SplitResolutions {
    pub sum: TwistedResolution,
    pub prime: TwistedResolution,
    pub second: TwistedResolution,
}

impl SplitResolutions {
    pub fn build(split: &Split, gres: &GResolution, degree: usize) -> Result<Self, DecompError> {
        Ok(SplitResolutions {
            sum: TwistedResolution::build(&split.sum, gres.clone(), degree)?,
            prime: TwistedResolution::build(&split.prime, gres.clone(), degree)?,
            second: TwistedResolution::build(&split.second, gres.clone(), degree)?,
        })
    }

    pub fn side(&self, side: Side) -> &TwistedResolution {
        match side {
            Side::Prime => &self.prime,
            Side::Second => &self.second,
        }
    }

    fn gres(&self) -> &GResolution {
        self.sum.g_resolution()
    }
}

pub(super) fn module_seq(
    res: &TwistedResolution,
    m: FGModule,
) -> Result<SpectralSequence<'_>, DecompError> {
    Ok(SpectralSequence::new(FilteredComplex::new(res, m)?)?)
}

/// The sequence with coefficients `Λ^t X`; `None` when `t > rank X`.
pub(super) fn wedge_seq(
    res: &TwistedResolution,
    t: usize,
    field: FieldSpec,
) -> Result<Option<SpectralSequence<'_>>, DecompError> {
    if t > res.rank() {
        return Ok(None);
    }
    let m = FGModule::from_lattice(&res.lattice().wedge_power(t), field);
    Ok(Some(module_seq(res, m)?))
}

fn zeros(field: FieldSpec, dst: Option<&Subquotient>) -> Matrix {
    Matrix::zeros(field, dst.map_or(0, |d| d.dim()), 1)
}

/// Pushes `E_2` coordinates through the cochain map of a coefficient map.
fn transport(
    gres: &GResolution,
    field: FieldSpec,
    src: Option<&Subquotient>,
    coords: &Matrix,
    map: &Matrix,
    p: usize,
    dst: Option<&Subquotient>,
) -> Result<Matrix, DecompError> {
    let (Some(src), Some(dst)) = (src, dst) else {
        return Ok(zeros(field, dst));
    };
    if coords.rows() == 0 || src.dim() == 0 {
        return Ok(zeros(field, Some(dst)));
    }
    let cochain = gcoh::cochain_map(gres, map, p).mul(&src.lift(coords));
    Ok(dst.coordinates(&cochain)?)
}

/// Page-`r` coordinates of an `E_2` class, or a message if it is not on page `r`.
fn to_page(
    seq: &SpectralSequence<'_>,
    r: usize,
    p: usize,
    q: usize,
    e2: &Matrix,
) -> Result<Result<Matrix, String>, DecompError> {
    let cell = seq.cell(r, p, q)?;
    Ok(cell
        .sub
        .coordinates(e2)
        .map_err(|_| format!("class is not on page {r} at ({p},{q})")))
}

/// Both sides of the sum formula for `v_r^t(L)`, in page-`r` coordinates of
/// `E_r^{r, t-r+1}(Λ^t L)`.
#[derive(Clone, Debug)]
pub struct SumFormulaReport {
    pub t: usize,
    pub r: usize,
    pub lhs: Matrix,
    pub rhs: Matrix,
    /// The sum restricted to `i + j = t - r`.
    pub reduced: Matrix,
    pub verdict: Verdict,
}

/// `v_r^t(L) = Σ_{i+j=t} (C'^r_j)_* v_r^i(L') + (-1)^i (C''^r_i)_* v_r^j(L'')`, given that all
/// classes of `L'`, `L''` of degree `<= t` vanish below page `r`.
pub fn verify_sum_formula(
    split: &Split,
    res: &SplitResolutions,
    t: usize,
    r: usize,
) -> Result<SumFormulaReport, DecompError> {
    assert!(r >= 2);
    let field = split.field;
    let empty = Matrix::zeros(field, 0, 1);
    let mut report = SumFormulaReport {
        t,
        r,
        lhs: empty.clone(),
        rhs: empty.clone(),
        reduced: empty,
        verdict: Verdict::Pass,
    };
    if t > split.sum.rank() || r > t + 1 {
        return Ok(report);
    }
    let q = t + 1 - r;
    let Some(seq) = wedge_seq(&res.sum, t, field)? else {
        return Ok(report);
    };
    let dst = seq.e2(r, q)?;
    let mut rhs = zeros(field, dst);
    let mut reduced = rhs.clone();
    for (side, name) in [(Side::Prime, "L'"), (Side::Second, "L''")] {
        let x_res = res.side(side);
        for m in 0..=t.min(x_res.rank()) {
            let Some(x_seq) = wedge_seq(x_res, m, field)? else {
                continue;
            };
            let v = char_class(&x_seq, m, r, None)?;
            if let ClassStatus::UndefinedBelow(k) = v.status {
                report.verdict = Verdict::Hypothesis(format!("v_{k}^{m}({name}) ≠ 0"));
                return Ok(report);
            }
            if m + 1 == r && v.status == ClassStatus::Nonzero {
                report.verdict = Verdict::Fail(format!(
                    "v_{r}^{m}({name}) ≠ 0 although its target lies in row 0"
                ));
                return Ok(report);
            }
            if m + 1 < r || v.status == ClassStatus::Zero && v.e2_coords.is_zero() {
                continue;
            }
            let other = t - m;
            let a = m + 1 - r;
            let (map, sign) = match side {
                Side::Prime => (split.c_prime(r, a, other)?, 1),
                Side::Second => (
                    split.c_second(r, other, a)?,
                    if other % 2 == 0 { 1 } else { -1 },
                ),
            };
            let img = transport(
                res.gres(),
                field,
                x_seq.e2(r, a)?,
                &v.e2_coords,
                &map.matrix,
                r,
                dst,
            )?
            .scale_i64(sign);
            rhs = rhs.add(&img);
            if m >= r {
                reduced = reduced.add(&img);
            }
        }
    }
    let v = char_class(&seq, t, r, None)?;
    if let ClassStatus::UndefinedBelow(k) = v.status {
        report.verdict = Verdict::Fail(format!(
            "v_{k}^{t}(L) ≠ 0 although the summands' classes vanish"
        ));
        return Ok(report);
    }
    report.lhs = v.page_coords.clone();
    report.verdict = match (
        to_page(&seq, r, r, q, &rhs)?,
        to_page(&seq, r, r, q, &reduced)?,
    ) {
        (Ok(a), Ok(b)) => {
            report.rhs = a;
            report.reduced = b;
            if report.lhs != report.rhs {
                Verdict::Fail(format!(
                    "v_{r}^{t}(L) differs from the sum over the summands"
                ))
            } else if report.rhs != report.reduced {
                Verdict::Fail(format!(
                    "reduced sum for v_{r}^{t} differs from the full sum"
                ))
            } else {
                Verdict::Pass
            }
        }
        (Err(e), _) | (_, Err(e)) => Verdict::Fail(format!("right side: {e}")),
    };
    Ok(report)
}

/// `v_r^t(X) = D^r_*(v_r^t(L))` for `X = L', L''`, in page-`r` coordinates of the summand.
#[derive(Clone, Debug)]
pub struct ProjectionReport {
    pub t: usize,
    pub r: usize,
    /// `(v_r^t(X), D^r_* v_r^t(L))` for each summand with `t <= rank X`.
    pub sides: Vec<(Side, Matrix, Matrix)>,
    pub verdict: Verdict,
}

pub fn verify_projection_formula(
    split: &Split,
    res: &SplitResolutions,
    t: usize,
    r: usize,
) -> Result<ProjectionReport, DecompError> {
    assert!(r >= 2);
    let field = split.field;
    let mut report = ProjectionReport {
        t,
        r,
        sides: Vec::new(),
        verdict: Verdict::Pass,
    };
    if t > split.sum.rank() || r > t + 1 {
        return Ok(report);
    }
    let q = t + 1 - r;
    let Some(seq) = wedge_seq(&res.sum, t, field)? else {
        return Ok(report);
    };
    let v = char_class(&seq, t, r, None)?;
    if let ClassStatus::UndefinedBelow(k) = v.status {
        report.verdict = Verdict::Hypothesis(format!("v_{k}^{t}(L) ≠ 0"));
        return Ok(report);
    }
    for (side, name) in [(Side::Prime, "L'"), (Side::Second, "L''")] {
        let Some(x_seq) = wedge_seq(res.side(side), t, field)? else {
            continue;
        };
        let w = char_class(&x_seq, t, r, None)?;
        if let ClassStatus::UndefinedBelow(k) = w.status {
            report.verdict = Verdict::Fail(format!(
                "v_{k}^{t}({name}) ≠ 0 although v(L) vanishes below page {r}"
            ));
            return Ok(report);
        }
        let map = split.d_map(side, r, q)?;
        let img = transport(
            res.gres(),
            field,
            seq.e2(r, q)?,
            &v.e2_coords,
            &map.matrix,
            r,
            x_seq.e2(r, q)?,
        )?;
        match to_page(&x_seq, r, r, q, &img)? {
            Ok(page) => {
                if page != w.page_coords {
                    report.verdict =
                        Verdict::Fail(format!("v_{r}^{t}({name}) ≠ D_*(v_{r}^{t}(L))"));
                }
                report.sides.push((side, w.page_coords.clone(), page));
            }
            Err(e) => report.verdict = Verdict::Fail(format!("image in {name}: {e}")),
        }
        if !report.verdict.is_pass() {
            return Ok(report);
        }
    }
    Ok(report)
}

/// `d_r^{0,i} ∘ C^1_{0*} = C^r_{0*} ∘ d_r^{0,i}(X)` and `d_r^{0,i}(X) ∘ D^1_* = D^r_* ∘ d_r^{0,i}`,
/// as matrices on page-`r` coordinates, with coefficients `Λ^i` of each lattice.
#[derive(Clone, Debug)]
pub struct PageCompatibilityReport {
    pub side: Side,
    pub i: usize,
    pub r: usize,
    pub c_lhs: Matrix,
    pub c_rhs: Matrix,
    pub d_lhs: Matrix,
    pub d_rhs: Matrix,
    pub verdict: Verdict,
}

fn c_zero(split: &Split, side: Side, r: usize, a: usize) -> Result<Matrix, DecompError> {
    Ok(match side {
        Side::Prime => split.c_prime(r, a, 0)?.matrix,
        Side::Second => split.c_second(r, 0, a)?.matrix,
    })
}

fn stable_to_page(
    seq: &SpectralSequence<'_>,
    r: usize,
    p: usize,
    q: usize,
) -> Result<bool, DecompError> {
    let e2 = seq.e2(p, q)?.map_or(0, |s| s.dim());
    Ok(seq.cell(r, p, q)?.sub.dim() == e2)
}

pub fn verify_page_compatibility(
    split: &Split,
    res: &SplitResolutions,
    side: Side,
    i: usize,
    r: usize,
) -> Result<PageCompatibilityReport, DecompError> {
    assert!(r >= 2);
    let field = split.field;
    let empty = Matrix::zeros(field, 0, 0);
    let mut report = PageCompatibilityReport {
        side,
        i,
        r,
        c_lhs: empty.clone(),
        c_rhs: empty.clone(),
        d_lhs: empty.clone(),
        d_rhs: empty,
        verdict: Verdict::Pass,
    };
    let x_res = res.side(side);
    if r > i + 1 {
        return Ok(report);
    }
    let (Some(x_seq), Some(seq)) = (wedge_seq(x_res, i, field)?, wedge_seq(&res.sum, i, field)?)
    else {
        return Ok(report);
    };
    let a = i + 1 - r;
    for (s, name) in [(&x_seq, "summand"), (&seq, "sum")] {
        if !stable_to_page(s, r, 0, i)? || !stable_to_page(s, r, r, a)? {
            report.verdict = Verdict::Hypothesis(format!(
                "E_{r} ≠ E_2 for the {name} at (0,{i}) or ({r},{a})"
            ));
            return Ok(report);
        }
    }
    let gres = res.gres();
    let c1 = c_zero(split, side, 1, i)?;
    let cr = c_zero(split, side, r, a)?;
    let d1 = split.d_map(side, 1, i)?.matrix;
    let dr = split.d_map(side, r, a)?.matrix;
    let page_matrix =
        |cols: Vec<Matrix>, s: &SpectralSequence<'_>| -> Result<Matrix, DecompError> {
            let cell = s.cell(r, r, a)?;
            let mut out = Matrix::zeros(field, cell.sub.dim(), cols.len());
            for (j, c) in cols.iter().enumerate() {
                let page = cell
                    .sub
                    .coordinates(c)
                    .map_err(|_| crate::lhs::LhsError::NotOnPage { r, p: r, q: a })?;
                out.set_block(0, j, &page);
            }
            Ok(out)
        };
    let (mut cl, mut cr_cols, mut dl, mut dr_cols) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let x_src = x_seq.cell(r, 0, i)?;
    for j in 0..x_src.sub.dim() {
        let e = x_src.sub.reps().column(j);
        let pushed = transport(gres, field, x_seq.e2(0, i)?, &e, &c1, 0, seq.e2(0, i)?)?;
        cl.push(seq.apply_to_coords(r, 0, i, &pushed)?);
        let d = x_seq.apply_to_coords(r, 0, i, &e)?;
        cr_cols.push(transport(
            gres,
            field,
            x_seq.e2(r, a)?,
            &d,
            &cr,
            r,
            seq.e2(r, a)?,
        )?);
    }
    let src = seq.cell(r, 0, i)?;
    for j in 0..src.sub.dim() {
        let e = src.sub.reps().column(j);
        let pulled = transport(gres, field, seq.e2(0, i)?, &e, &d1, 0, x_seq.e2(0, i)?)?;
        dl.push(x_seq.apply_to_coords(r, 0, i, &pulled)?);
        let d = seq.apply_to_coords(r, 0, i, &e)?;
        dr_cols.push(transport(
            gres,
            field,
            seq.e2(r, a)?,
            &d,
            &dr,
            r,
            x_seq.e2(r, a)?,
        )?);
    }
    report.c_lhs = page_matrix(cl, &seq)?;
    report.c_rhs = page_matrix(cr_cols, &seq)?;
    report.d_lhs = page_matrix(dl, &x_seq)?;
    report.d_rhs = page_matrix(dr_cols, &x_seq)?;
    if report.c_lhs != report.c_rhs {
        report.verdict = Verdict::Fail(format!("d_{r} ∘ C^1_0 ≠ C^{r}_0 ∘ d_{r} on (0,{i})"));
    } else if report.d_lhs != report.d_rhs {
        report.verdict = Verdict::Fail(format!("d_{r} ∘ D^1 ≠ D^{r} ∘ d_{r} on (0,{i})"));
    }
    Ok(report)
}

/// `d_2^{s,t}(X) = φ^* ∘ d_2^{s,t} ∘ π^*` in `E_2` coordinates, where `π^*` and `φ^*` are the
/// coefficient maps induced by `Λ^t p` and `Λ^{t-1} ι`.
#[derive(Clone, Debug)]
pub struct CoefficientFactorizationReport {
    pub side: Side,
    pub s: usize,
    pub t: usize,
    pub direct: Matrix,
    pub composite: Matrix,
    pub verdict: Verdict,
}

pub fn verify_coefficient_factorization(
    split: &Split,
    res: &SplitResolutions,
    side: Side,
    module: &FGModule,
    s: usize,
    t: usize,
) -> Result<CoefficientFactorizationReport, DecompError> {
    let field = split.field;
    let empty = Matrix::zeros(field, 0, 0);
    let mut report = CoefficientFactorizationReport {
        side,
        s,
        t,
        direct: empty.clone(),
        composite: empty,
        verdict: Verdict::Pass,
    };
    let x_res = res.side(side);
    if t == 0 || t > x_res.rank() {
        return Ok(report);
    }
    let x_seq = module_seq(x_res, module.clone())?;
    let seq = module_seq(&res.sum, module.clone())?;
    let gres = res.gres();
    let inflate = split.pull_back_projection(side, t, module);
    let restrict = split.pull_back_inclusion(side, t - 1, module);
    let src = x_seq.e2(s, t)?.map_or(0, |e| e.dim());
    let dst = x_seq.e2(s + 2, t - 1)?.map_or(0, |e| e.dim());
    let mut direct = Matrix::zeros(field, dst, src);
    let mut composite = Matrix::zeros(field, dst, src);
    for j in 0..src {
        let mut e = Matrix::zeros(field, src, 1);
        e.set(j, 0, field.one());
        direct.set_block(0, j, &x_seq.apply_to_coords(2, s, t, &e)?);
        let up = transport(gres, field, x_seq.e2(s, t)?, &e, &inflate, s, seq.e2(s, t)?)?;
        let d = seq.apply_to_coords(2, s, t, &up)?;
        let down = transport(
            gres,
            field,
            seq.e2(s + 2, t - 1)?,
            &d,
            &restrict,
            s + 2,
            x_seq.e2(s + 2, t - 1)?,
        )?;
        composite.set_block(0, j, &down);
    }
    if direct != composite {
        report.verdict = Verdict::Fail(format!(
            "d_2^{{{s},{t}}} of the summand differs from φ^* ∘ d_2 ∘ π^*"
        ));
    }
    report.direct = direct;
    report.composite = composite;
    Ok(report)
}
