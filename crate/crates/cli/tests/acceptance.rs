//! Acceptance suite. Run with `cargo test -p lhslab-cli --test acceptance -- --nocapture` to see
//! one line per criterion. Criterion 10 is exploratory and never fails the suite on its own.

use std::time::{Duration, Instant};

use lhslab::decomp::{
    collapse_criteria, verify_factorizations, verify_low_pages_vanish, verify_projection_formula,
    verify_sum_formula, Split, SplitResolutions, Verdict,
};
use lhslab::exactlin::FieldSpec;
use lhslab::gcoh::{cohomology, GResolution};
use lhslab::gmod::{FGModule, GLattice, ModuleSpec, WedgeOrder};
use lhslab::koszul::{KoszulChain, KoszulResolution};
use lhslab::lhs::{
    sah_sign, verify_sah_product, FilteredComplex, SpectralSequence, TwistedResolution,
};
use lhslab_cli::catalog::{Catalog, GroupDescriptor};
use lhslab_cli::commands::{engine_a_table, engine_b_table, scan_report, GroupFilter, ScanArgs};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

/// Collapse-criteria consistency records gathered by criteria 1 to 5.
#[derive(Default)]
struct Runs {
    total: usize,
    inconsistent: Vec<String>,
}

impl Runs {
    fn record(
        &mut self,
        res: &TwistedResolution,
        field: FieldSpec,
        label: &str,
    ) -> Result<(), String> {
        let probes = [ModuleSpec::Triv, ModuleSpec::Wedge(1)];
        let top = res.lattice().rank().min(res.degree().saturating_sub(2));
        for t in 0..=top {
            let c = collapse_criteria(res, field, t, 4, &probes)
                .map_err(|e| format!("{label}: {e}"))?;
            self.total += 1;
            if !c.consistent {
                self.inconsistent.push(format!("{label} t={t}"));
            }
        }
        Ok(())
    }
}

fn f(p: u32) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn twisted(l: &GLattice, degree: usize) -> Result<TwistedResolution, String> {
    let gres = GResolution::preferred(l.group().clone(), degree).map_err(|e| e.to_string())?;
    TwistedResolution::build(l, gres, degree).map_err(|e| e.to_string())
}

fn sequence<'a>(
    res: &'a TwistedResolution,
    spec: &ModuleSpec,
    field: FieldSpec,
) -> Result<SpectralSequence<'a>, String> {
    let m = spec.eval(res.lattice(), field).map_err(|e| e.to_string())?;
    let c = FilteredComplex::new(res, m).map_err(|e| e.to_string())?;
    SpectralSequence::new(c).map_err(|e| e.to_string())
}

fn probes(rank: usize) -> Vec<ModuleSpec> {
    let mut v: Vec<ModuleSpec> = (0..=rank).map(ModuleSpec::Wedge).collect();
    for s in ["triv", "dual(wedge:1)", "hom(wedge:1,wedge:1)"] {
        let m = ModuleSpec::parse(s).unwrap();
        if !v.contains(&m) {
            v.push(m);
        }
    }
    v
}

fn splits(cat: &Catalog, field: FieldSpec) -> Vec<(String, Split, bool)> {
    cat.declared_pairs()
        .into_iter()
        .map(|(sum, a, b)| {
            let (_, split) = cat.split(&a, &b, field, WedgeOrder::PrimeFirst).unwrap();
            let table = matches!(cat.entry(&sum).unwrap().group, GroupDescriptor::Table(_));
            (sum, split, table)
        })
        .collect()
}

fn split_resolutions(split: &Split, degree: usize) -> Result<SplitResolutions, String> {
    let gres =
        GResolution::preferred(split.sum.group().clone(), degree).map_err(|e| e.to_string())?;
    SplitResolutions::build(split, &gres, degree).map_err(|e| e.to_string())
}

/// For `G = C2, C3`: all `d_r` vanish for `2 <= r <= 4` and `dim H^n = Σ dim E_2` for `n <= 4`.
fn prime_cyclic_collapse(cat: &Catalog, runs: &mut Runs) -> Check {
    let mut count = 0;
    for e in cat.entries() {
        let p = match e.group {
            GroupDescriptor::Cyclic(n @ (2 | 3)) if e.rank <= 3 => n as u32,
            _ => continue,
        };
        let l = cat.lattice(&e.name).unwrap();
        let res = twisted(l, 5)?;
        for field in [f(p), FieldSpec::rationals()] {
            for spec in probes(l.rank()) {
                let seq = sequence(&res, &spec, field)?;
                let pages = seq.run(4, 4).map_err(|e| e.to_string())?;
                if let Some(pg) = pages.iter().find(|pg| !pg.all_differentials_zero()) {
                    return Err(format!("{} {field} {spec}: d_{} ≠ 0", e.name, pg.r));
                }
                for n in 0..=4 {
                    let (graded, total) = seq.abutment(n).map_err(|e| e.to_string())?;
                    let e2: usize = (0..=n.min(l.rank()))
                        .map(|q| seq.e2(n - q, q).unwrap().map_or(0, |s| s.dim()))
                        .sum();
                    if graded != total || e2 != total {
                        return Err(format!(
                            "{} {field} {spec}: n={n} E2 {e2} E∞ {graded} H {total}",
                            e.name
                        ));
                    }
                }
                count += 1;
            }
            runs.record(&res, field, &format!("c1 {} {field}", e.name))?;
        }
    }
    Ok(format!("{count} (lattice, field, module) runs"))
}

/// `C2` acting on `Z` by sign: `Γ ≅ Z/2 ∗ Z/2`, so `H^n = H^n(C2) ⊕ H^n(C2)` for `n >= 1`.
fn dihedral(cat: &Catalog) -> Check {
    let l = cat.lattice("c2-sign").unwrap();
    let res = twisted(l, 5)?;
    let seq = sequence(&res, &ModuleSpec::Triv, f(2))?;
    let bar = GResolution::bar(l.group().clone(), 5).map_err(|e| e.to_string())?;
    let triv = FGModule::trivial(l.group().clone(), f(2), 1);
    let mut dims = Vec::new();
    for n in 0..=3 {
        let computed = seq
            .complex()
            .total_cohomology_dim(n)
            .map_err(|e| e.to_string())?;
        let c2 = cohomology(&bar, &triv, n).map_err(|e| e.to_string())?.dim();
        let oracle = if n == 0 { 1 } else { 2 * c2 };
        if computed != oracle {
            return Err(format!("H^{n}: {computed} vs oracle {oracle}"));
        }
        dims.push(computed);
    }
    if dims != [1, 2, 2, 2] {
        return Err(format!("dims {dims:?}"));
    }
    Ok(format!("dims {dims:?}"))
}

/// Over `F3`, `d_2 = 0` everywhere for the `C3` and `C9` lattices.
fn below_characteristic(cat: &Catalog, runs: &mut Runs) -> Check {
    let mut count = 0;
    for e in cat.entries() {
        if !matches!(e.group, GroupDescriptor::Cyclic(3 | 9)) {
            continue;
        }
        let l = cat.lattice(&e.name).unwrap();
        let res = twisted(l, 5)?;
        let extra = probes(l.rank());
        let rep = verify_low_pages_vanish(&res, f(3), &extra).map_err(|e| e.to_string())?;
        if rep.pages != [2] || rep.verdict != Verdict::Pass {
            return Err(format!("{}: {:?}", e.name, rep.verdict));
        }
        runs.record(&res, f(3), &format!("c3 {}", e.name))?;
        count += 1;
    }
    Ok(format!("{count} lattices"))
}

fn sum_formula(cat: &Catalog, runs: &mut Runs) -> Check {
    let mut passed = 0;
    let mut table = 0;
    let mut nonzero = 0;
    let mut skipped = Vec::new();
    for (name, split, is_table) in splits(cat, f(2)) {
        let top = split.sum.rank().min(3);
        let res = split_resolutions(&split, top + 2)?;
        let mut all = true;
        for t in 1..=top {
            let rep = verify_sum_formula(&split, &res, t, 2).map_err(|e| e.to_string())?;
            nonzero += !rep.lhs.is_zero() as usize;
            match &rep.verdict {
                Verdict::Pass if rep.reduced == rep.lhs => {}
                Verdict::Pass => return Err(format!("{name} t={t}: reduced form differs")),
                Verdict::Fail(m) => return Err(format!("{name} t={t}: {m}")),
                Verdict::Hypothesis(m) => {
                    skipped.push(format!("{name} t={t}: {m}"));
                    all = false;
                }
            }
        }
        runs.record(&res.sum, f(2), &format!("c4 {name}"))?;
        if all {
            passed += 1;
            table += is_table as usize;
        }
    }
    if passed < 5 || table == 0 {
        return Err(format!(
            "only {passed} pairs ({table} over C2×C2) passed; skipped {skipped:?}"
        ));
    }
    Ok(format!(
        "{passed} pairs, {table} over C2×C2, {nonzero} nonzero classes, {} hypothesis skips",
        skipped.len()
    ))
}

fn projection_formula(cat: &Catalog, runs: &mut Runs) -> Check {
    let mut passed = 0;
    for (name, split, _) in splits(cat, f(2)) {
        let top = split.sum.rank().min(3);
        let res = split_resolutions(&split, top + 2)?;
        let mut all = true;
        for t in 1..=top {
            match verify_projection_formula(&split, &res, t, 2)
                .map_err(|e| e.to_string())?
                .verdict
            {
                Verdict::Pass => {}
                Verdict::Fail(m) => return Err(format!("{name} t={t}: {m}")),
                Verdict::Hypothesis(_) => all = false,
            }
        }
        runs.record(&res.prime, f(2), &format!("c5 {name} L'"))?;
        runs.record(&res.second, f(2), &format!("c5 {name} L''"))?;
        passed += all as usize;
    }
    if passed < 5 {
        return Err(format!("only {passed} pairs passed"));
    }
    Ok(format!("{passed} pairs"))
}

/// `d_2 x = σ (-1)^s x · v_2^t` with one global sign `σ` per field, `s + t <= 3`.
fn product_formula(cat: &Catalog) -> Check {
    let mut summary = Vec::new();
    for p in [2, 3] {
        let field = f(p);
        let mut checks = Vec::new();
        for entry in cat.entries() {
            let l = cat.lattice(&entry.name).unwrap();
            let res = twisted(l, 5)?;
            for t in 1..=l.rank().min(3) {
                let vseq = sequence(&res, &ModuleSpec::Wedge(t), field)?;
                for spec in ["triv", "wedge:1", "dual(wedge:1)"] {
                    let seq = sequence(&res, &ModuleSpec::parse(spec).unwrap(), field)?;
                    for s in 0..=3 - t {
                        checks.push(
                            verify_sah_product(&seq, &vseq, s, t)
                                .map_err(|e| format!("{}: {e}", entry.name))?,
                        );
                    }
                }
            }
        }
        let classes: usize = checks.iter().map(|c| c.pairs.len()).sum();
        match sah_sign(&checks) {
            Some(sigma) => summary.push(format!("{field}: {classes} classes, σ = {sigma}")),
            None => return Err(format!("{field}: no global sign fits")),
        }
    }
    Ok(summary.join("; "))
}

fn engines_agree(cat: &Catalog) -> Check {
    let mut count = 0;
    for e in cat.entries() {
        let l = cat.lattice(&e.name).unwrap();
        for field in [f(2), f(3), FieldSpec::rationals()] {
            for spec in ["triv", "wedge:1", "dual(wedge:1)"] {
                let m = ModuleSpec::parse(spec).unwrap();
                let a = engine_a_table(l, field, &m, 4).map_err(|e| e.to_string())?;
                let b = engine_b_table(l, field, &m, 4).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("{} {field} {spec}: {a:?} vs {b:?}", e.name));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} tables"))
}

fn random_chain(rng: &mut ChaCha8Rng, n: usize, q: usize) -> KoszulChain {
    let subsets: Vec<u32> = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == q)
        .collect();
    let mut c = KoszulChain::new();
    for _ in 0..rng.gen_range(1..=4) {
        let j = subsets[rng.gen_range(0..subsets.len())];
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let coeff = rng.gen_range(-3..=3);
        if coeff != 0 {
            *c.entry((j, v)).or_insert(0) += coeff;
        }
    }
    c.retain(|_, x| *x != 0);
    c
}

fn combine(a: &KoszulChain, b: &KoszulChain, sign: i64) -> KoszulChain {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(k.clone()).or_insert(0) += sign * v;
    }
    out.retain(|_, x| *x != 0);
    out
}

fn infrastructure(cat: &Catalog) -> Check {
    let mut resolutions = 0;
    for e in cat.entries() {
        let res = twisted(cat.lattice(&e.name).unwrap(), 4)?;
        if !res.verify_square_zero().map_err(|e| e.to_string())? {
            return Err(format!("{}: D ∘ D ≠ 0", e.name));
        }
        resolutions += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut probes = 0;
    for n in 1..=4 {
        let k = KoszulResolution::new(n);
        for q in 0..=n {
            for _ in 0..100 {
                let c = random_chain(&mut rng, n, q);
                let dh = k
                    .d(&k.h(&c).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let hd = k
                    .h(&k.d(&c).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let mut expected = c.clone();
                let eps = k.augment(&c).map_err(|e| e.to_string())?;
                if eps != 0 {
                    expected = combine(&expected, &k.unit(), -eps);
                }
                if combine(&dh, &hd, 1) != expected {
                    return Err(format!("dh + hd ≠ id - ηε for n={n} q={q}: {c:?}"));
                }
                probes += 1;
            }
        }
    }
    let mut maps = 0;
    for field in [f(2), f(3), FieldSpec::rationals()] {
        for (name, split, _) in splits(cat, field) {
            for order in [WedgeOrder::PrimeFirst, WedgeOrder::SecondFirst] {
                let s = split.with_order(order);
                let rep = verify_factorizations(&s, 3).map_err(|e| e.to_string())?;
                if !rep.passed() {
                    return Err(format!("{name} {field}: {:?}", rep.failures));
                }
                for r in 1..=3 {
                    for i in 0..=s.prime.rank() {
                        let d = s.d_prime(r, i).map_err(|e| e.to_string())?;
                        let c = s.c_prime(r, i, 0).map_err(|e| e.to_string())?;
                        if !d.matrix.mul(&c.matrix).is_identity() {
                            return Err(format!(
                                "{name} {field}: D'^{r} ∘ C'^{r}_0 ≠ id on degree {i}"
                            ));
                        }
                    }
                }
                maps += rep.checked;
            }
        }
    }
    Ok(format!(
        "{resolutions} resolutions, {probes} homotopy probes, {maps} map identities"
    ))
}

fn exploratory_scan(cat: &Catalog) -> Check {
    let args = ScanArgs {
        field: f(2),
        max_rank: 4,
        max_order: 4,
        max_page: 4,
        max_total: 5,
        group: Some(GroupFilter::Table),
    };
    let report = scan_report(cat, &args).map_err(|e| e.to_string())?;
    let hits = report.statuses["hits"].as_array().unwrap().len();
    let rows = report.tables["evidence"].as_array().unwrap().len();
    if let Verdict::Fail(m) = &report.verdicts["replay"] {
        return Err(format!("replay failed: {m}"));
    }
    if hits == 0 {
        Ok(format!(
            "{rows} C2×C2 lattices, no nonzero class within bounds"
        ))
    } else {
        Ok(format!(
            "{rows} C2×C2 lattices, {hits} nonzero classes, all replays pass"
        ))
    }
}

fn run(n: usize, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over the {}s limit", limit.as_secs())),
        Err(d) => (false, d),
    };
    let status = if ok { "PASS" } else { "FAIL" };
    println!(
        "criterion {n}: {status} ({:.2}s / {}s) {detail}",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

#[test]
fn acceptance() {
    let cat = Catalog::starter().unwrap();
    let mut runs = Runs::default();
    let secs = Duration::from_secs;
    let mut gating = vec![
        run(1, secs(120), || prime_cyclic_collapse(&cat, &mut runs)),
        run(2, secs(10), || dihedral(&cat)),
        run(3, secs(120), || below_characteristic(&cat, &mut runs)),
        run(4, secs(300), || sum_formula(&cat, &mut runs)),
        run(5, secs(120), || projection_formula(&cat, &mut runs)),
        run(6, secs(300), || product_formula(&cat)),
        run(7, secs(300), || engines_agree(&cat)),
        run(8, secs(120), || infrastructure(&cat)),
    ];
    gating.push(run(9, secs(60), || {
        if runs.total == 0 {
            Err("no runs recorded".into())
        } else if runs.inconsistent.is_empty() {
            Ok(format!("{} runs consistent", runs.total))
        } else {
            Err(format!("inconsistent: {:?}", runs.inconsistent))
        }
    }));
    let explored = run(10, secs(1800), || exploratory_scan(&cat));
    if !explored {
        println!("criterion 10 is exploratory; its result does not gate the suite");
    }
    let failed: Vec<usize> = gating
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
