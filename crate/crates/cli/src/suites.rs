//! The verification suites behind the subcommands and `report`.

use std::collections::BTreeMap;

use clap::ValueEnum;
use foundations::{HilbertSeries, LaurentPoly};
use hypertoric::arrangement::subsets_of_size;
use hypertoric::convolution::{verify_quiver_relations, BTilde, Coefficients};
use hypertoric::cyclic::{kappa, osz_verify, var_side, verify_cyclic_combinatorics, Side};
use hypertoric::extcalc::{ext_closed_form, ext_hom_complex, ext_oracle, GradedRanks};
use hypertoric::kzero::{gl11_change_of_basis, gl11_matches_delta, verify_canonical_axioms, K0Data, LMatrix};
use hypertoric::stdmod::{
    b_side_delta_multiplicities, delta_multiplicities, projective_graded_dim, projective_resolution, standard_module,
    verify_resolution,
};
use hypertoric::strands::{d_squared_zero, homology_block, verify_ext_strands};
use hypertoric::{format_subset, PolarizedArrangement, SignVector};

use crate::table::Table;
use crate::CliError;

/// Everything a suite needs to know about the run.
pub struct Ctx {
    pub arr: PolarizedArrangement,
    /// side of a cyclic arrangement, when known
    pub side: Option<Side>,
    /// true when the arrangement is the left arrangement of `(n, k)`
    pub left_cyclic: bool,
    pub max_deg: i64,
    pub coeffs: Coefficients,
}

#[derive(Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub failures: Vec<String>,
}

fn b(x: bool) -> String {
    x.to_string()
}

/// `𝒫` in `+ < −` string order.
fn p_sorted(arr: &PolarizedArrangement) -> Vec<SignVector> {
    arr.regions().bounded_feasible.iter().copied().collect()
}

fn coeffs_to(series: &HilbertSeries, hi: i64) -> String {
    series.coefficients(0, hi).iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn algebra(ctx: &Ctx) -> Result<BTilde<'_>, CliError> {
    BTilde::new(&ctx.arr, ctx.coeffs).map_err(|e| CliError::Failure(e.to_string()))
}

fn fail(e: impl ToString) -> CliError {
    CliError::Failure(e.to_string())
}

pub fn regions(ctx: &Ctx) -> Result<Outcome, CliError> {
    let a = &ctx.arr;
    let mut t = Table::new("regions", &["alpha", "feasible", "bounded", "in_P", "basis"]);
    let mut out = Outcome::default();
    let mut all = SignVector::all(a.n());
    all.sort_by_key(|s| s.to_string());
    for g in all {
        let (fe, bo) = (a.is_feasible(&g), a.is_bounded(&g));
        if fe != a.is_feasible_lp(&g) || bo != a.is_bounded_lp(&g) {
            out.failures.push(format!("{g}: classification disagrees with the LP"));
        }
        let basis = if a.in_p(&g) { format_subset(a.x_of(&g).map_err(fail)?) } else { "-".into() };
        t.push(vec![g.to_string(), b(fe), b(bo), b(a.in_p(&g)), basis]);
    }
    out.tables.push(t);
    Ok(out)
}

pub fn order(ctx: &Ctx) -> Result<Outcome, CliError> {
    let a = &ctx.arr;
    let d = a.gale_dual().map_err(fail)?;
    let hasse: Vec<_> = a.hasse_edges();
    let mut t = Table::new("order", &["lower", "upper", "lower_basis", "upper_basis", "cover"]);
    let mut out = Outcome::default();
    let p = p_sorted(a);
    for lo in &p {
        for hi in &p {
            if a.leq(hi, lo) != d.leq(lo, hi) {
                out.failures.push(format!("order not reversed by Gale duality at {lo}, {hi}"));
            }
            if a.lt(lo, hi) {
                let (xl, xh) = (a.x_of(lo).map_err(fail)?, a.x_of(hi).map_err(fail)?);
                t.push(vec![lo.to_string(), hi.to_string(), format_subset(xl), format_subset(xh), b(hasse.contains(&(xl, xh)))]);
            }
        }
    }
    out.tables.push(t);
    Ok(out)
}

pub fn dims(ctx: &Ctx) -> Result<Outcome, CliError> {
    let alg = algebra(ctx)?;
    let mut out = Outcome::default();
    let rel = verify_quiver_relations(&alg);
    out.failures.extend(rel.failures.iter().map(|f| format!("{}: {}", f.family, f.detail)));
    let mut t = Table::new("graded_dims", &["alpha", "beta", "dim_q", "coefficients"]);
    let p = p_sorted(&ctx.arr);
    for x in &p {
        for y in &p {
            let series = alg.graded_dim(x, y).map_err(fail)?;
            let h = alg.hom_space(x, y).map_err(fail)?;
            for d in 0..=ctx.max_deg {
                if h.basis_in_degree(d).len() as i64 != series.coefficient(d) {
                    out.failures.push(format!("e_{x} B e_{y}: monomial count differs from the series in degree {d}"));
                }
            }
            t.push(vec![x.to_string(), y.to_string(), series.to_string(), coeffs_to(&series, ctx.max_deg)]);
        }
    }
    out.tables.push(t);
    let mut r = Table::new("relations", &["family", "instances"]);
    for (name, c) in [("B1", rel.b1_checked), ("B2", rel.b2_checked), ("B3", rel.b3_checked)] {
        r.push(vec![name.into(), c.to_string()]);
    }
    out.tables.push(r);
    Ok(out)
}

fn shifted_sum(parts: &[(SignVector, u32)], arr: &PolarizedArrangement) -> Result<HilbertSeries, CliError> {
    let mut acc = HilbertSeries::zero();
    for (g, s) in parts {
        acc = &acc + &standard_module(arr, g).map_err(fail)?.graded_dim().shift(*s as i64);
    }
    Ok(acc)
}

fn format_parts(parts: &[(SignVector, u32)]) -> String {
    let mut v: Vec<String> = parts.iter().map(|(g, s)| format!("{g}:q^{s}")).collect();
    v.sort();
    v.join(",")
}

pub fn standard(ctx: &Ctx) -> Result<Outcome, CliError> {
    let a = &ctx.arr;
    let d = a.gale_dual().map_err(fail)?;
    let (alg, alg_d) = (algebra(ctx)?, BTilde::new(&d, ctx.coeffs).map_err(fail)?);
    let mut out = Outcome::default();
    let mut t = Table::new("standard_modules", &["alpha", "basis", "dim_q", "labels", "projective_filtration"]);
    for p in p_sorted(a) {
        let v = standard_module(a, &p).map_err(fail)?;
        let parts = b_side_delta_multiplicities(a, &p).map_err(fail)?;
        if projective_graded_dim(&alg, &p).map_err(fail)? != shifted_sum(&parts, a)? {
            out.failures.push(format!("{p}: dim_q P differs from the standard filtration"));
        }
        let dual = delta_multiplicities(a, &p).map_err(fail)?;
        if projective_graded_dim(&alg_d, &p).map_err(fail)? != shifted_sum(&dual, &d)? {
            out.failures.push(format!("{p}: dim_q P over the Gale dual differs from the standard filtration"));
        }
        let mut labels: Vec<String> = v.basis.iter().map(|(g, _)| g.to_string()).collect();
        labels.sort();
        t.push(vec![p.to_string(), format_subset(v.x), v.graded_dim().to_string(), labels.join(","), format_parts(&parts)]);
    }
    out.tables.push(t);
    Ok(out)
}

pub fn resolve(ctx: &Ctx) -> Result<Outcome, CliError> {
    let alg = algebra(ctx)?;
    let mut out = Outcome::default();
    let mut t = Table::new("resolutions", &["alpha", "levels", "d_squared_zero", "exact", "torsion_free"]);
    for p in p_sorted(&ctx.arr) {
        let cx = projective_resolution(&alg, &p).map_err(fail)?;
        let rep = verify_resolution(&alg, &p, ctx.max_deg).map_err(fail)?;
        let torsion_free = rep.degrees.iter().all(|d| !d.2);
        if !rep.passed() || !torsion_free {
            out.failures.push(format!("{p}: resolution check failed"));
        }
        let levels: Vec<String> =
            cx.levels.iter().map(|l| l.iter().map(|(g, s)| format!("{g}q^{s}")).collect::<Vec<_>>().join("+")).collect();
        t.push(vec![p.to_string(), levels.join(" | "), b(rep.d_squared_zero), b(rep.passed()), b(torsion_free)]);
    }
    out.tables.push(t);
    Ok(out)
}

fn format_ranks(r: &GradedRanks) -> String {
    if r.is_empty() {
        return "0".into();
    }
    r.iter().map(|((i, d), n)| format!("({i},{d}):{n}")).collect::<Vec<_>>().join(" ")
}

pub fn ext(ctx: &Ctx, pair: Option<(SignVector, SignVector)>, oracle: bool) -> Result<Outcome, CliError> {
    let a = &ctx.arr;
    let (lo, hi) = (-(a.n() as i64), ctx.max_deg);
    let alg = algebra(ctx)?;
    let mut cols = vec!["alpha", "beta", "nonzero", "degree", "generators", "ranks"];
    if oracle {
        cols.extend(["koszul", "hom_complex", "torsion", "match"]);
    }
    let mut t = Table::new("ext", &cols);
    let mut out = Outcome::default();
    let p = p_sorted(a);
    let pairs: Vec<(SignVector, SignVector)> = match pair {
        Some(pq) => vec![pq],
        None => p.iter().flat_map(|x| p.iter().map(move |y| (*x, *y))).collect(),
    };
    for (x, y) in pairs {
        let r = ext_closed_form(a, &x, &y).map_err(fail)?;
        let closed = r.graded_ranks(lo, hi);
        let gens: Vec<String> = r.generators.iter().map(|g| format!("u{}", g + 1)).collect();
        let mut row =
            vec![x.to_string(), y.to_string(), b(r.nonzero), r.degree.to_string(), gens.join(","), format_ranks(&closed)];
        if oracle {
            let kos = ext_oracle(a, &x, &y, lo, hi).map_err(fail)?;
            let hom = ext_hom_complex(&alg, &x, &y, lo, hi).map_err(fail)?;
            let torsion = kos.torsion || hom.torsion;
            let ok = kos.ranks == closed && hom.ranks == closed && !torsion;
            if !ok {
                out.failures.push(format!("Ext({x}, {y}): routes disagree"));
            }
            row.extend([format_ranks(&kos.ranks), format_ranks(&hom.ranks), b(torsion), b(ok)]);
        }
        t.push(row);
    }
    out.tables.push(t);
    Ok(out)
}

pub fn cyclic(ctx: &Ctx) -> Result<Outcome, CliError> {
    let side = ctx.side.ok_or_else(|| CliError::Usage("cyclic needs --side (or --n/--k)".into()))?;
    let a = &ctx.arr;
    let rep = verify_cyclic_combinatorics(a, side);
    let mut out = Outcome { failures: rep.failures.clone(), ..Default::default() };
    let mut t = Table::new("checks", &["check", "pass"]);
    for (name, ok) in &rep.checks {
        t.push(vec![name.clone(), b(*ok)]);
    }
    out.tables.push(t);
    let mut d = Table::new("dots", &["alpha", "var", "dots", "basis"]);
    let mut rows = Vec::new();
    for p in p_sorted(a) {
        let dots = kappa(&p, side, a.k()).map_err(fail)?;
        rows.push(vec![
            p.to_string(),
            var_side(&p, side, a.k()).to_string(),
            dots.to_string(),
            format_subset(a.x_of(&p).map_err(fail)?),
        ]);
    }
    rows.sort_by(|x, y| x[2].cmp(&y[2]));
    d.rows = rows;
    out.tables.push(d);
    Ok(out)
}

pub fn osz(ctx: &Ctx) -> Result<Outcome, CliError> {
    if !ctx.left_cyclic {
        return Err(CliError::Usage("osz-verify needs a left cyclic arrangement (--n, --k, --side left)".into()));
    }
    let rep = osz_verify(&ctx.arr, ctx.max_deg).map_err(|e| CliError::Validation(3, e.to_string()))?;
    let mut t = Table::new("osz", &["check", "count"]);
    for (i, c) in rep.relation_checks.iter().enumerate() {
        t.push(vec![format!("relation ({})", i + 1), c.to_string()]);
    }
    t.push(vec!["psi on generators".into(), rep.psi_checks.to_string()]);
    t.push(vec!["graded dims".into(), rep.dim_checks.to_string()]);
    t.push(vec!["other R/L reading passes".into(), b(rep.alternative_passes)]);
    Ok(Outcome { tables: vec![t], failures: rep.failures })
}

fn format_dims(d: &BTreeMap<i64, usize>) -> String {
    if d.is_empty() {
        return "0".into();
    }
    d.iter().map(|(g, n)| format!("{g}:{n}")).collect::<Vec<_>>().join(",")
}

pub fn strands(n: usize, max_deg: i64) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let mut t = Table::new("strands_homology", &["k", "S", "T", "h", "wrapped", "dims"]);
    for k in 0..=n {
        if !d_squared_zero(n, k, (max_deg.max(0) / 2) as u32) {
            out.failures.push(format!("k={k}: d^2 != 0"));
        }
        for s in subsets_of_size(n, k) {
            for tt in subsets_of_size(n, k) {
                let hb = homology_block(n, s, tt, max_deg);
                if !hb.closed_form_ok || !hb.representatives_ok {
                    out.failures.push(format!("k={k} {}->{}: homology check failed", format_subset(s), format_subset(tt)));
                }
                let h: Vec<String> = hb.h.iter().map(i64::to_string).collect();
                t.push(vec![
                    k.to_string(),
                    format_subset(s),
                    format_subset(tt),
                    h.join(","),
                    format_subset(hb.wrapped),
                    format_dims(&hb.dims),
                ]);
            }
        }
    }
    out.tables.push(t);
    Ok(out)
}

pub fn ext_strands(n: usize, max_deg: i64) -> Result<Outcome, CliError> {
    let rep = verify_ext_strands(n, max_deg).map_err(fail)?;
    let mut t = Table::new("ext_strands", &["k", "blocks"]);
    for (k, c) in &rep.blocks {
        t.push(vec![k.to_string(), c.to_string()]);
    }
    t.push(vec!["nonzero".into(), rep.nonzero_blocks.to_string()]);
    Ok(Outcome { tables: vec![t], failures: rep.failures })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum K0Basis {
    /// `[P̃_α]` in the basis `[Ṽ_β]`
    Projective,
    /// `[Ṽ_α]` in the basis `[P̃_β]`
    Standard,
    /// the gl(1|1) expansion of the canonical elements
    CanonicalChange,
}

fn matrix_table(name: &str, labels: &[SignVector], m: &LMatrix) -> Table {
    // rows and columns in string order
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by_key(|&i| labels[i].to_string());
    let head: Vec<String> = std::iter::once("alpha".to_string()).chain(order.iter().map(|&j| labels[j].to_string())).collect();
    let mut t = Table { name: name.into(), columns: head, rows: Vec::new() };
    for &i in &order {
        let mut row = vec![labels[i].to_string()];
        row.extend(order.iter().map(|&j| m[i][j].to_string()));
        t.push(row);
    }
    t
}

pub fn k0(ctx: &Ctx, basis: K0Basis) -> Result<Outcome, CliError> {
    let a = &ctx.arr;
    let mut out = Outcome::default();
    match basis {
        K0Basis::CanonicalChange => {
            if !ctx.left_cyclic {
                return Err(CliError::Usage("canonical-change needs --n and --k of a left cyclic arrangement".into()));
            }
            let g = gl11_change_of_basis(a.n(), a.k()).map_err(fail)?;
            if !g.unitriangular() || !gl11_matches_delta(a.n(), a.k()).map_err(fail)? {
                out.failures.push("gl(1|1) expansion differs from the standard filtration multiplicities".into());
            }
            // dot states in lexicographic order, as produced
            let head: Vec<String> = std::iter::once("alpha".to_string()).chain(g.labels.iter().map(|l| l.to_string())).collect();
            let mut t = Table { name: "canonical_change".into(), columns: head, rows: Vec::new() };
            for (i, l) in g.labels.iter().enumerate() {
                let mut row = vec![l.to_string()];
                row.extend(g.entries[i].iter().map(LaurentPoly::to_string));
                t.push(row);
            }
            out.tables.push(t);
        }
        K0Basis::Projective | K0Basis::Standard => {
            let data = K0Data::new(a).map_err(fail)?;
            let rep = verify_canonical_axioms(a).map_err(fail)?;
            out.failures.extend(rep.failures().into_iter().map(String::from));
            let (name, m) = match basis {
                K0Basis::Projective => ("projective_in_standard", &data.delta),
                _ => ("standard_in_projective", &data.delta_inv),
            };
            out.tables.push(matrix_table(name, &data.labels, m));
        }
    }
    Ok(out)
}
