use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::Matrix;
use crate::gcoh;
use crate::gmod::binomial;

use super::{LhsError, SpectralSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassStatus {
    Zero,
    Nonzero,
    /// `v_k^t ≠ 0` for this `k` below the requested page, so `v_r^t` is undefined.
    UndefinedBelow(usize),
}

/// `v_r^t(L) = d_r^{0,t}([id])` with coefficients `Λ^t L ⊗ F`.
#[derive(Clone, Debug)]
pub struct CharClass {
    pub t: usize,
    pub r: usize,
    pub status: ClassStatus,
    /// Cocycle in `T^{k, t-k+1}` for the page `k` where the computation stopped.
    pub representative: Matrix,
    /// Its coordinates in `E_2^{k, t-k+1} = H^k(G, Hom(Λ^{t-k+1} L, Λ^t L))`.
    pub e2_coords: Matrix,
    /// Its coordinates on page `k`.
    pub page_coords: Matrix,
}

/// The identity of `Λ^t L` as a cochain in `T^{0,t}` with coefficients `Λ^t L ⊗ F`.
pub fn identity_class(seq: &SpectralSequence<'_>, t: usize) -> Result<Matrix, LhsError> {
    let complex = seq.complex();
    let n = complex.resolution().rank();
    let dim = binomial(n, t);
    if complex.module().dim() != dim || t > n {
        return Err(LhsError::WrongCoefficients);
    }
    let field = complex.module().field();
    let mut z = Matrix::zeros(field, dim * dim, 1);
    for j in 0..dim {
        z.set(j * dim + j, 0, field.one());
    }
    if let Some(d1) = complex.block(1, 1, t) {
        if !d1.mul(&z).is_zero() {
            return Err(LhsError::EngineMismatch(
                "identity class is not G-invariant".into(),
            ));
        }
    }
    Ok(z)
}

/// Computes `v_r^t` by following the identity class through pages `2..=r`. With a seed, the
/// window lifts are perturbed by random cycles; the result must not depend on it.
pub fn char_class(
    seq: &SpectralSequence<'_>,
    t: usize,
    r: usize,
    seed: Option<u64>,
) -> Result<CharClass, LhsError> {
    assert!(r >= 2, "characteristic classes start on page 2");
    let z = identity_class(seq, t)?;
    let field = seq.complex().module().field();
    let e2 = seq.e2(0, t)?.ok_or(LhsError::WrongCoefficients)?;
    let z_coords = e2.coordinates(&z)?;
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let zero = |k: usize| {
        CharClass {
            t,
            r,
            status: ClassStatus::Zero,
            representative: Matrix::zeros(field, 0, 1),
            e2_coords: Matrix::zeros(field, 0, 1),
            page_coords: Matrix::zeros(field, 0, 1),
        }
        .with_page(k)
    };
    let mut last = zero(r);
    for k in 2..=r {
        if k > t + 1 {
            return Ok(zero(r));
        }
        let (tp, tq) = (k, t + 1 - k);
        let (cells, x) = seq.lift(k, 0, t, &z_coords)?;
        let x = match rng.as_mut() {
            Some(rng) => perturb(seq, k, 0, t, x, rng)?,
            None => x,
        };
        let y = seq.push(t, &cells, &x, tp);
        let coords = match seq.e2(tp, tq)? {
            Some(e) => e.coordinates(&y)?,
            None => Matrix::zeros(field, 0, 1),
        };
        let page = seq.cell(k, tp, tq)?.sub.coordinates(&coords)?;
        let nonzero = !page.is_zero();
        last = CharClass {
            t,
            r,
            status: if nonzero {
                ClassStatus::Nonzero
            } else {
                ClassStatus::Zero
            },
            representative: y,
            e2_coords: coords,
            page_coords: page,
        };
        if nonzero && k < r {
            last.status = ClassStatus::UndefinedBelow(k);
            return Ok(last);
        }
    }
    Ok(last)
}

impl CharClass {
    fn with_page(self, r: usize) -> Self {
        CharClass { r, ..self }
    }
}

/// Adds a random cycle that is invisible on the first cell of the window.
fn perturb(
    seq: &SpectralSequence<'_>,
    r: usize,
    p: usize,
    q: usize,
    x: Matrix,
    rng: &mut ChaCha8Rng,
) -> Result<Matrix, LhsError> {
    let Some(kernel) = seq.cell(r, p, q)?.window_kernel().cloned() else {
        return Ok(x);
    };
    let head = kernel.submatrix(0..seq.complex().cell_dim(p, q), 0..kernel.cols());
    let free = head.kernel();
    if free.cols() == 0 {
        return Ok(x);
    }
    let field = x.field();
    let coeffs: Vec<i64> = (0..free.cols()).map(|_| rng.gen_range(-3..=3)).collect();
    let v = Matrix::from_i64(field, free.cols(), 1, &coeffs);
    Ok(x.add(&kernel.mul(&free.mul(&v))))
}

/// Runs `char_class` deterministically and with `reruns` random seeds; statuses and page
/// coordinates must agree.
pub fn char_class_checked(
    seq: &SpectralSequence<'_>,
    t: usize,
    r: usize,
    reruns: u64,
) -> Result<CharClass, LhsError> {
    let base = char_class(seq, t, r, None)?;
    for seed in 1..=reruns {
        let other = char_class(seq, t, r, Some(seed))?;
        if other.status != base.status || other.page_coords != base.page_coords {
            return Err(LhsError::EngineMismatch(format!(
                "v_{r}^{t} depends on the choice of correction (seed {seed})"
            )));
        }
    }
    Ok(base)
}

/// `θ: E_r^{s,0}(Hom(Λ^t L, M)) -> E_r^{s,t}(M)`, the identity on `E_2` coordinates followed by
/// projection to page `r`. `row0` is the sequence for `Hom(Λ^t L, M)`; `seq` the one for `M`.
pub fn theta(
    seq: &SpectralSequence<'_>,
    row0: &SpectralSequence<'_>,
    s: usize,
    t: usize,
    r: usize,
) -> Result<Matrix, LhsError> {
    let field = seq.complex().module().field();
    let (Some(e2_src), Some(e2_dst)) = (row0.e2(s, 0)?, seq.e2(s, t)?) else {
        return Ok(Matrix::zeros(field, 0, 0));
    };
    let src = row0.cell(r, s, 0)?;
    let dst = seq.cell(r, s, t)?;
    let mut out = Matrix::zeros(field, dst.sub.dim(), src.sub.dim());
    for j in 0..src.sub.dim() {
        let cochain = e2_src.lift(&src.sub.reps().column(j));
        let c = e2_dst.coordinates(&cochain)?;
        let page = dst.sub.coordinates(&c).map_err(|_| {
            LhsError::HypothesisFailure(format!("θ is not defined at ({s},{t}) on page {r}"))
        })?;
        out.set_block(0, j, &page);
    }
    Ok(out)
}

/// `d_2(x)` against `(-1)^s x · v_2^t` for every basis class `x` of `E_2^{s,t}(M)`.
#[derive(Clone, Debug)]
pub struct SahCheck {
    pub s: usize,
    pub t: usize,
    /// `(d_2 x, (-1)^s x · v)` in `E_2^{s+2, t-1}` coordinates, one pair per basis class.
    pub pairs: Vec<(Matrix, Matrix)>,
}

impl SahCheck {
    /// True when `d_2 x = σ (-1)^s x · v` for all pairs, for the given global sign `σ`.
    pub fn holds_with(&self, sigma: i64) -> bool {
        self.pairs.iter().all(|(l, r)| *l == r.scale_i64(sigma))
    }
}

/// `vseq` is the sequence for `Λ^t L` on the same
/// resolution, from which `v_2^t` is computed.
pub fn verify_sah_product(
    seq: &SpectralSequence<'_>,
    vseq: &SpectralSequence<'_>,
    s: usize,
    t: usize,
) -> Result<SahCheck, LhsError> {
    let field = seq.complex().module().field();
    let mut check = SahCheck {
        s,
        t,
        pairs: Vec::new(),
    };
    let Some(src) = seq.e2(s, t)? else {
        return Ok(check);
    };
    if t == 0 || src.dim() == 0 {
        return Ok(check);
    }
    let v = char_class(vseq, t, 2, None)?;
    let gres = seq.complex().resolution().g_resolution();
    let n = seq.complex().resolution().rank();
    let dm = seq.complex().module().dim();
    let a = seq.row_module(t);
    let b = vseq.row_module(t - 1);
    let c = seq.row_module(t - 1);
    let pairing = gcoh::composition_pairing(field, binomial(n, t - 1), binomial(n, t), dm);
    if !gcoh::is_equivariant_pairing(a, b, c, &pairing) {
        return Err(LhsError::EngineMismatch(
            "composition pairing is not equivariant".into(),
        ));
    }
    let target = seq.e2(s + 2, t - 1)?;
    let v_rep = if v.representative.rows() == 0 {
        Matrix::zeros(field, gres.rank(2) * b.dim(), 1)
    } else {
        v.representative.clone()
    };
    for j in 0..src.dim() {
        let mut e = Matrix::zeros(field, src.dim(), 1);
        e.set(j, 0, field.one());
        let lhs = seq.apply_to_coords(2, s, t, &e)?;
        let x = src.lift(&e);
        let prod = gcoh::cup_product(gres, a, &x, s, b, &v_rep, 2, &pairing)?;
        let rhs = match target {
            Some(tg) => tg.coordinates(&prod)?,
            None => Matrix::zeros(field, 0, 1),
        };
        let sign = if s % 2 == 0 { 1 } else { -1 };
        check.pairs.push((lhs, rhs.scale_i64(sign)));
    }
    Ok(check)
}

/// A global sign `σ` under which every check holds, preferring `+1`.
pub fn sah_sign(checks: &[SahCheck]) -> Option<i64> {
    [1, -1]
        .into_iter()
        .find(|&sigma| checks.iter().all(|c| c.holds_with(sigma)))
}
