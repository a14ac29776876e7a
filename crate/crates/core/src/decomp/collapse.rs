use crate::exactlin::FieldSpec;
use crate::gmod::{FGModule, ModuleSpec};
use crate::lhs::{char_class, ClassStatus, SpectralSequence, TwistedResolution};

use super::verify::{module_seq, wedge_seq};
use super::{DecompError, Split, SplitResolutions, Verdict};

/// Three views of the vanishing of the row-`t` differentials up to page `max_page`:
/// (i) edge classes, (ii) `dim E_{max_page+1}^{0,t} = dim E_2^{0,t}` for `Λ^t L`,
/// (iii) all row-`t` differentials on the probed coefficient modules.
#[derive(Clone, Debug)]
pub struct CollapseReport {
    pub t: usize,
    pub max_page: usize,
    pub statuses: Vec<(usize, ClassStatus)>,
    pub edges_zero: bool,
    pub e2_dim: usize,
    pub last_dim: usize,
    pub dims_equal: bool,
    pub rows_vanish: bool,
    /// `(module, r, s)` for every nonzero `d_r^{s,t}` found.
    pub nonzero_rows: Vec<(String, usize, usize)>,
    pub consistent: bool,
}

/// `dim E_∞^{0,t} = dim E_2^{0,t}`, i.e. restriction to `L` is onto the invariants in degree `t`.
pub fn edge_surjective(seq: &SpectralSequence<'_>, t: usize) -> Result<bool, DecompError> {
    let Some(e2) = seq.e2(0, t)? else {
        return Ok(true);
    };
    Ok(seq.e_infinity(0, t)?.sub.dim() == e2.dim())
}

fn row_nonzero(
    seq: &SpectralSequence<'_>,
    t: usize,
    pages: std::ops::RangeInclusive<usize>,
) -> Result<Vec<(usize, usize)>, DecompError> {
    let mut out = Vec::new();
    for r in pages {
        let mut s = 0;
        while s + t < seq.top_degree() {
            if !seq.differential(r, s, t)?.is_zero() {
                out.push((r, s));
            }
            s += 1;
        }
    }
    Ok(out)
}

pub fn collapse_criteria(
    res: &TwistedResolution,
    field: FieldSpec,
    t: usize,
    max_page: usize,
    probes: &[ModuleSpec],
) -> Result<CollapseReport, DecompError> {
    let top = max_page.min(t + 1);
    let mut report = CollapseReport {
        t,
        max_page: top,
        statuses: Vec::new(),
        edges_zero: true,
        e2_dim: 0,
        last_dim: 0,
        dims_equal: true,
        rows_vanish: true,
        nonzero_rows: Vec::new(),
        consistent: true,
    };
    let Some(seq) = wedge_seq(res, t, field)? else {
        return Ok(report);
    };
    if top < 2 {
        return Ok(report);
    }
    for r in 2..=top {
        let v = char_class(&seq, t, r, None)?;
        report.statuses.push((r, v.status));
        if v.status != ClassStatus::Zero {
            report.edges_zero = false;
            break;
        }
    }
    report.e2_dim = seq.e2(0, t)?.map_or(0, |e| e.dim());
    report.last_dim = seq.cell(top + 1, 0, t)?.sub.dim();
    report.dims_equal = report.e2_dim == report.last_dim;
    let mut modules = vec![(format!("wedge:{t}"), None)];
    modules.extend(probes.iter().map(|p| (p.to_string(), Some(p))));
    for (name, spec) in modules {
        let found = match spec {
            None => row_nonzero(&seq, t, 2..=top)?,
            Some(p) => {
                let m = p.eval(res.lattice(), field)?;
                row_nonzero(&module_seq(res, m)?, t, 2..=top)?
            }
        };
        for (r, s) in found {
            report.rows_vanish = false;
            report.nonzero_rows.push((name.clone(), r, s));
        }
    }
    report.consistent =
        report.edges_zero == report.dims_equal && report.dims_equal == report.rows_vanish;
    Ok(report)
}

/// Surjectivity of restriction to the lattice for `L'`, `L''` and `L`, and the implications
/// between them in both directions.
#[derive(Clone, Debug)]
pub struct RestrictionSurjectivityReport {
    pub t: usize,
    /// Edge surjectivity with coefficients `Λ^m X`, for `m = 0..=t`.
    pub prime: Vec<bool>,
    pub second: Vec<bool>,
    pub sum: Vec<bool>,
    /// `(module, L, L', L'')` surjectivity in degree `t` for each probe.
    pub probes: Vec<(String, bool, bool, bool)>,
    pub verdict: Verdict,
}

pub fn verify_restriction_surjectivity(
    split: &Split,
    res: &SplitResolutions,
    t: usize,
    probes: &[ModuleSpec],
) -> Result<RestrictionSurjectivityReport, DecompError> {
    let field = split.field;
    let edge = |r: &TwistedResolution, m: usize| -> Result<bool, DecompError> {
        match wedge_seq(r, m, field)? {
            Some(seq) => edge_surjective(&seq, m),
            None => Ok(true),
        }
    };
    let mut report = RestrictionSurjectivityReport {
        t,
        prime: Vec::new(),
        second: Vec::new(),
        sum: Vec::new(),
        probes: Vec::new(),
        verdict: Verdict::Pass,
    };
    for m in 0..=t {
        report.prime.push(edge(&res.prime, m)?);
        report.second.push(edge(&res.second, m)?);
        report.sum.push(edge(&res.sum, m)?);
    }
    let mut modules: Vec<(String, FGModule)> = Vec::new();
    for p in probes {
        modules.push((p.to_string(), p.eval(&split.sum, field)?));
    }
    for (name, m) in modules {
        let surj = |r: &TwistedResolution| -> Result<bool, DecompError> {
            edge_surjective(&module_seq(r, m.clone())?, t)
        };
        report
            .probes
            .push((name, surj(&res.sum)?, surj(&res.prime)?, surj(&res.second)?));
    }
    let summands_onto = report.prime.iter().chain(&report.second).all(|&b| b);
    if summands_onto && !(report.sum.iter().all(|&b| b) && report.probes.iter().all(|p| p.1)) {
        report.verdict = Verdict::Fail("summands are onto in degrees <= t but L is not".into());
    }
    let sum_onto = report.sum[t];
    if sum_onto && !(report.prime[t] && report.second[t]) {
        report.verdict = Verdict::Fail(format!("L is onto in degree {t} but a summand is not"));
    }
    for (name, l, a, b) in &report.probes {
        if *l && !(*a && *b) {
            report.verdict = Verdict::Fail(format!(
                "L is onto in degree {t} for {name} but a summand is not"
            ));
        }
    }
    Ok(report)
}

/// In characteristic `p > 0`, `d_r = 0` for every `2 <= r < p`.
#[derive(Clone, Debug)]
pub struct LowPagesReport {
    pub characteristic: u32,
    pub pages: Vec<usize>,
    pub nonzero: Vec<(String, usize, usize, usize)>,
    pub verdict: Verdict,
}

pub fn verify_low_pages_vanish(
    res: &TwistedResolution,
    field: FieldSpec,
    probes: &[ModuleSpec],
) -> Result<LowPagesReport, DecompError> {
    let p = field.characteristic() as usize;
    let pages: Vec<usize> = if p == 0 { Vec::new() } else { (2..p).collect() };
    let mut report = LowPagesReport {
        characteristic: field.characteristic(),
        pages: pages.clone(),
        nonzero: Vec::new(),
        verdict: Verdict::Pass,
    };
    if pages.is_empty() {
        return Ok(report);
    }
    let mut modules: Vec<ModuleSpec> = (0..=res.rank()).map(ModuleSpec::Wedge).collect();
    modules.extend(probes.iter().cloned());
    for spec in modules {
        let seq = module_seq(res, spec.eval(res.lattice(), field)?)?;
        for &r in &pages {
            for n in 0..seq.top_degree() {
                for q in 0..=n.min(res.rank()) {
                    if !seq.differential(r, n - q, q)?.is_zero() {
                        report.nonzero.push((spec.to_string(), r, n - q, q));
                    }
                }
            }
        }
    }
    if let Some((m, r, s, q)) = report.nonzero.first() {
        report.verdict = Verdict::Fail(format!(
            "d_{r}^{{{s},{q}}} ≠ 0 for {m} below the characteristic"
        ));
    }
    Ok(report)
}

/// Statuses of `v_r^t(L)` for `t <= min(rank, max_total - 1)` and `2 <= r <= min(max_page, t + 1)`.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub statuses: Vec<(usize, usize, ClassStatus)>,
    /// First `(t, r)` with a nonzero class.
    pub first_nonzero: Option<(usize, usize)>,
}

/// Needs a resolution built to degree at least `max_total + 1`.
pub fn scan_lattice(
    res: &TwistedResolution,
    field: FieldSpec,
    max_page: usize,
    max_total: usize,
) -> Result<ScanRow, DecompError> {
    let mut row = ScanRow {
        statuses: Vec::new(),
        first_nonzero: None,
    };
    for t in 1..=res.rank().min(max_total.saturating_sub(1)) {
        let Some(seq) = wedge_seq(res, t, field)? else {
            continue;
        };
        for r in 2..=max_page.min(t + 1) {
            let v = char_class(&seq, t, r, None)?;
            row.statuses.push((t, r, v.status));
            if v.status != ClassStatus::Zero {
                if v.status == ClassStatus::Nonzero && row.first_nonzero.is_none() {
                    row.first_nonzero = Some((t, r));
                }
                break;
            }
        }
    }
    Ok(row)
}
