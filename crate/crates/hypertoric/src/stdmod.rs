//! Projective and standard modules over `B̃(𝒱)` and the linear projective
//! resolution of each standard module.
//!
//! `P̃_α = B̃ e_α` has basis `u^m f_{γ,α}` over `γ ∈ 𝒫`. The standard module
//! `Ṽ_α` keeps the summands `γ ∈ ℱ_{𝕩_α} ∩ ℬ` and kills `u_i` for `i ∉ 𝕩_α`,
//! leaving a free `ℤ[u_{𝕩_α}]`-module.

use std::collections::BTreeMap;
use std::fmt;

use foundations::snf::{homology, SparseIntMatrix};
use foundations::{HilbertSeries, LaurentPoly};
use rayon::prelude::*;

use crate::arrangement::{members, PolarizedArrangement, SignVector, Subset};
use crate::convolution::{monomials_of_degree, AlgebraElement, AlgebraError, BTilde, Coefficients, Monomial};

/// `Ṽ_α` as a free `ℤ[u_{𝕩_α}]`-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardModule {
    pub alpha: SignVector,
    /// `𝕩_α`
    pub x: Subset,
    /// `ℱ_{𝕩_α} ∩ ℬ` with the degree `d_{β,α}` of each generator
    pub basis: Vec<(SignVector, u32)>,
}

/// Element of `Ṽ_α`: coefficients on `u^m f_{β,α}` with `m` supported in `𝕩_α`.
pub type ModuleElement = BTreeMap<(SignVector, Monomial), i64>;

impl StandardModule {
    pub fn contains_label(&self, b: &SignVector) -> bool {
        self.basis.iter().any(|(g, _)| g == b)
    }

    /// The generator `f_{β,α}` as an element.
    pub fn generator(&self, b: SignVector) -> ModuleElement {
        let mut m = ModuleElement::new();
        if self.contains_label(&b) {
            m.insert((b, Monomial::one()), 1);
        }
        m
    }

    /// `dim_q Ṽ_α`.
    pub fn graded_dim(&self) -> HilbertSeries {
        let num = LaurentPoly::from_terms(self.basis.iter().map(|(_, d)| (*d as i64, 1)));
        HilbertSeries::new(num, self.x.count_ones())
    }

    /// Basis of the degree-`d` piece.
    pub fn basis_in_degree(&self, d: i64) -> Vec<(SignVector, Monomial)> {
        let mut out = Vec::new();
        for (b, s) in &self.basis {
            let rest = d - *s as i64;
            if rest >= 0 && rest % 2 == 0 {
                for m in monomials_of_degree(self.x, (rest / 2) as u32) {
                    out.push((*b, m));
                }
            }
        }
        out
    }

    /// The proper standard module `V̄_α`: one generator per basis label.
    pub fn proper_graded_dim(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.basis.iter().map(|(_, d)| (*d as i64, 1)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0} is not bounded feasible")]
    NotInP(SignVector),
    #[error("End of the standard module at {0} is not polynomial in degree {1}")]
    EndRingMismatch(SignVector, i64),
}

/// Builds `Ṽ_α`.
pub fn standard_module(arr: &PolarizedArrangement, alpha: &SignVector) -> Result<StandardModule, ModuleError> {
    let x = arr.x_of(alpha).map_err(|_| ModuleError::NotInP(*alpha))?;
    let full: Subset = (1 << arr.n()) - 1;
    let basis = arr
        .regions()
        .bounded
        .iter()
        .filter(|b| b.agrees_on(alpha, full & !x))
        .map(|b| (*b, b.diff(alpha).count_ones()))
        .collect();
    Ok(StandardModule { alpha: *alpha, x, basis })
}

/// Left action of `a ∈ B̃` on an element of `Ṽ_α`.
pub fn act(alg: &BTilde, v: &StandardModule, a: &AlgebraElement, m: &ModuleElement) -> ModuleElement {
    let mut out = ModuleElement::new();
    let coeffs = alg.coefficients();
    for (g, b, ma, ca) in a.iter() {
        for ((b2, mm), cm) in m.iter() {
            if b2 != b || !v.contains_label(g) {
                continue;
            }
            let prod = alg.multiply(&alg.term(*g, *b, *ma, 1), &alg.term(*b, v.alpha, *mm, 1));
            for (g2, _, mono, c) in prod.iter() {
                if mono.support() & !v.x != 0 {
                    continue;
                }
                let e = out.entry((*g2, *mono)).or_insert(0);
                *e = coeffs.reduce(*e + ca * cm * c);
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Generators of `End(Ṽ_α)` as a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndRing {
    /// variables `u_i`, `i ∈ 𝕩_α`, each of degree 2
    pub generators: Vec<usize>,
}

impl fmt::Display for EndRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.generators.iter().map(|i| format!("u{}", i + 1)).collect();
        if v.is_empty() {
            write!(f, "Z")
        } else {
            write!(f, "Z[{}]", v.join(","))
        }
    }
}

/// `End(Ṽ_α) = ℤ[u_{𝕩_α}]`, checked up to degree `max_deg`.
///
/// An endomorphism is fixed by the image `m` of the cyclic generator
/// `e_α`; it is well defined when every `b` with `b·e_α = 0` also has
/// `b·m = 0`. The check runs over monomial bases of `e_γ B̃ e_α` in each
/// degree, which suffices because both maps send monomials to monomials.
pub fn end_ring(alg: &BTilde, alpha: &SignVector, max_deg: i64) -> Result<EndRing, ModuleError> {
    let arr = alg.arrangement();
    let v = standard_module(arr, alpha)?;
    let gens: Vec<usize> = members(v.x).collect();
    for j in (0..=max_deg).step_by(2) {
        let candidates: Vec<ModuleElement> =
            v.basis_in_degree(j).into_iter().filter(|(b, _)| b == alpha).map(|k| BTreeMap::from([(k, 1)])).collect();
        let mut good = 0;
        for m in &candidates {
            let mut ok = true;
            'outer: for g in alg.labels() {
                let h = alg.hom_space(g, alpha)?;
                for d in 0..=max_deg - j {
                    for mono in h.basis_in_degree(d) {
                        let b = alg.term(*g, *alpha, mono, 1);
                        let on_gen = act(alg, &v, &b, &v.generator(*alpha));
                        if on_gen.is_empty() && !act(alg, &v, &b, m).is_empty() {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                good += 1;
            }
        }
        if good != monomials_of_degree(v.x, (j / 2) as u32).len() {
            return Err(ModuleError::EndRingMismatch(*alpha, j));
        }
    }
    Ok(EndRing { generators: gens })
}

/// The `Δ`-multiplicities `{(μ(𝕩), q^{d_{α,μ(𝕩)}}) : α ∈ ℬ_𝕩}`.
///
/// These are the standard subquotients of the projective `P̃_α` over the
/// algebra `Ã(𝒱) = B̃(𝒱^∨)`. For projectives over `B̃(𝒱)` itself see
/// [`b_side_delta_multiplicities`].
pub fn delta_multiplicities(arr: &PolarizedArrangement, alpha: &SignVector) -> Result<Vec<(SignVector, u32)>, ModuleError> {
    if !arr.in_p(alpha) {
        return Err(ModuleError::NotInP(*alpha));
    }
    let mut out: Vec<(SignVector, u32)> = arr
        .bases()
        .iter()
        .filter(|b| arr.in_bounded_cone(b.subset, alpha))
        .map(|b| (b.mu, alpha.diff(&b.mu).count_ones()))
        .collect();
    out.sort_by_key(|(b, d)| (*d, *b));
    Ok(out)
}

/// Subquotients of `P̃_α` over `B̃(𝒱)`: `{(μ(𝕩), q^{d}) : α ∈ ℱ_𝕩}`.
pub fn b_side_delta_multiplicities(
    arr: &PolarizedArrangement,
    alpha: &SignVector,
) -> Result<Vec<(SignVector, u32)>, ModuleError> {
    if !arr.in_p(alpha) {
        return Err(ModuleError::NotInP(*alpha));
    }
    let mut out: Vec<(SignVector, u32)> = arr
        .bases()
        .iter()
        .filter(|b| arr.in_feasible_cone(b.subset, alpha))
        .map(|b| (b.mu, alpha.diff(&b.mu).count_ones()))
        .collect();
    out.sort_by_key(|(b, d)| (*d, *b));
    Ok(out)
}

/// `dim_q P̃_α = Σ_γ dim_q e_γ B̃ e_α`.
pub fn projective_graded_dim(alg: &BTilde, alpha: &SignVector) -> Result<HilbertSeries, ModuleError> {
    let mut acc = HilbertSeries::zero();
    for g in alg.labels() {
        acc = &acc + &alg.graded_dim(g, alpha)?;
    }
    Ok(acc)
}

/// A bounded complex of shifted projectives `q^s P̃_γ`, level `h` mapping
/// to level `h − 1` by right multiplication.
#[derive(Clone, Debug)]
pub struct ProjectiveComplex {
    /// `levels[h]` lists the summands `(γ, s)`
    pub levels: Vec<Vec<(SignVector, i64)>>,
    /// `differentials[h]`: entries `(target in level h, source in level h+1, element)`
    pub differentials: Vec<Vec<(usize, usize, AlgebraElement)>>,
    /// index subsets labelling the summands, when built from a resolution
    pub labels: Vec<Vec<Subset>>,
}

impl ProjectiveComplex {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Degree-`d` basis of level `h`: `(summand, γ, m)` for `u^m f_{γ,β}`.
    pub fn graded_piece(&self, alg: &BTilde, h: usize, d: i64) -> Vec<(usize, SignVector, Monomial)> {
        let mut out = Vec::new();
        let Some(level) = self.levels.get(h) else { return out };
        for (idx, (b, s)) in level.iter().enumerate() {
            for g in alg.labels() {
                let hs = alg.hom_space(g, b).expect("labels in P");
                for m in hs.basis_in_degree(d - s) {
                    out.push((idx, *g, m));
                }
            }
        }
        out
    }

    /// Matrix of `C_{h+1}(d) → C_h(d)` in the bases of [`Self::graded_piece`].
    pub fn differential_matrix(&self, alg: &BTilde, h: usize, d: i64) -> SparseIntMatrix {
        let src = self.graded_piece(alg, h + 1, d);
        let tgt = self.graded_piece(alg, h, d);
        let index: BTreeMap<(usize, SignVector, Monomial), usize> = tgt.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut mat = SparseIntMatrix::new(tgt.len(), src.len());
        let entries = &self.differentials[h];
        for (col, (sidx, g, m)) in src.iter().enumerate() {
            let b = self.levels[h + 1][*sidx].0;
            let x = alg.term(*g, b, *m, 1);
            for (t, s, e) in entries {
                if s != sidx {
                    continue;
                }
                for (g2, _, m2, c) in alg.multiply(&x, e).iter() {
                    let row = index[&(*t, *g2, *m2)];
                    mat.add(row, col, c);
                }
            }
        }
        mat
    }

    /// `d ∘ d = 0` on the nose, checked entrywise in the algebra.
    pub fn d_squared_is_zero(&self, alg: &BTilde) -> bool {
        for h in 0..self.differentials.len().saturating_sub(1) {
            let upper = &self.differentials[h + 1];
            let lower = &self.differentials[h];
            let mut acc: BTreeMap<(usize, usize), AlgebraElement> = BTreeMap::new();
            for (mid, src, e1) in upper {
                for (tgt, mid2, e2) in lower {
                    if mid == mid2 {
                        let slot = acc.entry((*tgt, *src)).or_default();
                        *slot = alg.add(slot, &alg.multiply(e1, e2));
                    }
                }
            }
            if acc.values().any(|e| !e.is_zero()) {
                return false;
            }
        }
        true
    }

    /// Whether every differential entry is homogeneous of degree
    /// `s_source − s_target`.
    pub fn is_homogeneous(&self, alg: &BTilde) -> bool {
        self.differentials
            .iter()
            .enumerate()
            .all(|(h, es)| es.iter().all(|(t, s, e)| alg.is_homogeneous(e, self.levels[h + 1][*s].1 - self.levels[h][*t].1)))
    }

    pub fn format(&self) -> String {
        let mut out = String::new();
        for (h, level) in self.levels.iter().enumerate() {
            let parts: Vec<String> = level.iter().map(|(b, s)| format!("({b}, q^{s})")).collect();
            out.push_str(&format!("{h}: [ {} ]\n", parts.join(", ")));
        }
        for (h, es) in self.differentials.iter().enumerate() {
            for (t, s, e) in es {
                out.push_str(&format!("d{}[{t},{s}] = {e}\n", h + 1));
            }
        }
        out
    }
}

/// `(−1)^{#{j ∈ S : j < i}}`.
pub fn koszul_sign(s: Subset, i: usize) -> i64 {
    if (s & ((1 << i) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The linear resolution `⊕_{S ⊆ 𝕩_α^c} q^{|S|} P̃_{α^S}` of `Ṽ_α`.
pub fn projective_resolution(alg: &BTilde, alpha: &SignVector) -> Result<ProjectiveComplex, ModuleError> {
    let arr = alg.arrangement();
    let x = arr.x_of(alpha).map_err(|_| ModuleError::NotInP(*alpha))?;
    let n = arr.n();
    let comp = ((1u32 << n) - 1) & !x;
    let mut labels: Vec<Vec<Subset>> = vec![Vec::new(); comp.count_ones() as usize + 1];
    for s in 0..=comp {
        if s & comp == s && arr.in_p(&alpha.flip_set(s)) {
            labels[s.count_ones() as usize].push(s);
        }
    }
    while labels.len() > 1 && labels.last().is_some_and(|l| l.is_empty()) {
        labels.pop();
    }
    let levels: Vec<Vec<(SignVector, i64)>> =
        labels.iter().enumerate().map(|(h, ls)| ls.iter().map(|s| (alpha.flip_set(*s), h as i64)).collect()).collect();
    let mut differentials = Vec::new();
    for h in 0..labels.len().saturating_sub(1) {
        let mut es = Vec::new();
        for (si, s) in labels[h + 1].iter().enumerate() {
            for i in members(*s) {
                let t = s & !(1 << i);
                if let Some(ti) = labels[h].iter().position(|u| *u == t) {
                    let e = alg.scale(&alg.f(alpha.flip_set(*s), alpha.flip_set(t)), koszul_sign(*s, i));
                    es.push((ti, si, e));
                }
            }
        }
        differentials.push(es);
    }
    Ok(ProjectiveComplex { levels, differentials, labels })
}

/// Outcome of [`verify_resolution`].
#[derive(Clone, Debug, Default)]
pub struct ResolutionReport {
    pub d_squared_zero: bool,
    pub homogeneous: bool,
    /// per internal degree: `(betti numbers per level, torsion present, dim Ṽ_α(d))`
    pub degrees: Vec<(i64, Vec<usize>, bool, usize)>,
    /// the augmentation `P̃_α → Ṽ_α` is onto and kills boundaries in every degree
    pub augmentation_ok: bool,
}

impl ResolutionReport {
    pub fn passed(&self) -> bool {
        self.d_squared_zero
            && self.homogeneous
            && self.augmentation_ok
            && self.degrees.iter().all(|(_, betti, tors, dim)| {
                !tors && betti.first().copied().unwrap_or(0) == *dim && betti.iter().skip(1).all(|b| *b == 0)
            })
    }
}

/// Matrix of the augmentation `C_0(d) → Ṽ_α(d)`.
fn augmentation(alg: &BTilde, cx: &ProjectiveComplex, v: &StandardModule, d: i64) -> SparseIntMatrix {
    let src = cx.graded_piece(alg, 0, d);
    let tgt = v.basis_in_degree(d);
    let index: BTreeMap<(SignVector, Monomial), usize> = tgt.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut mat = SparseIntMatrix::new(tgt.len(), src.len());
    for (col, (_, g, m)) in src.iter().enumerate() {
        if v.contains_label(g) && m.support() & !v.x == 0 {
            mat.add(index[&(*g, *m)], col, 1);
        }
    }
    mat
}

/// Checks that `projective_resolution(α)` resolves `Ṽ_α` in internal
/// degrees `0..=max_deg`, with ranks and torsion from Smith normal forms.
pub fn verify_resolution(alg: &BTilde, alpha: &SignVector, max_deg: i64) -> Result<ResolutionReport, ModuleError> {
    let cx = projective_resolution(alg, alpha)?;
    let v = standard_module(alg.arrangement(), alpha)?;
    let mut rep = ResolutionReport {
        d_squared_zero: cx.d_squared_is_zero(alg),
        homogeneous: cx.is_homogeneous(alg),
        augmentation_ok: true,
        ..Default::default()
    };
    let per_degree: Vec<_> = (0..=max_deg)
        .into_par_iter()
        .map(|d| {
            let dims: Vec<usize> = (0..cx.len()).map(|h| cx.graded_piece(alg, h, d).len()).collect();
            let diffs: Vec<SparseIntMatrix> = (0..cx.len() - 1).map(|h| cx.differential_matrix(alg, h, d)).collect();
            let hom = homology(&dims, &diffs);
            let betti: Vec<usize> = hom.iter().map(|(b, _)| *b).collect();
            let tors = hom.iter().any(|(_, t)| !t.is_empty());
            let eps = augmentation(alg, &cx, &v, d);
            let onto = (0..eps.rows()).all(|r| eps.nonzeros().any(|((rr, _), _)| rr == r));
            let kills = diffs.first().map_or(true, |d1| eps.mul(d1).is_zero());
            ((d, betti, tors, v.basis_in_degree(d).len()), onto && kills)
        })
        .collect();
    for (row, ok) in per_degree {
        rep.degrees.push(row);
        rep.augmentation_ok &= ok;
    }
    Ok(rep)
}

/// Truncated Euler characteristic `Σ_h (−1)^h dim C_h(d)` for `d ≤ max_deg`.
pub fn euler_characteristic(alg: &BTilde, cx: &ProjectiveComplex, max_deg: i64) -> Vec<i64> {
    (0..=max_deg)
        .map(|d| {
            (0..cx.len())
                .map(|h| {
                    let s = if h % 2 == 0 { 1 } else { -1 };
                    s * cx.graded_piece(alg, h, d).len() as i64
                })
                .sum()
        })
        .collect()
}

/// `e_β Ṽ_α`, read off the Stanley–Reisner hom space: monomials of
/// `R̃_{βα}` supported in `𝕩_α`, or nothing when `β ∉ ℱ_{𝕩_α}`.
pub fn hom_projective_standard(alg: &BTilde, beta: &SignVector, alpha: &SignVector, d: i64) -> Result<usize, ModuleError> {
    let v = standard_module(alg.arrangement(), alpha)?;
    if !v.contains_label(beta) {
        return Ok(0);
    }
    let h = alg.hom_space(beta, alpha)?;
    Ok(h.basis_in_degree(d).into_iter().filter(|m| m.support() & !v.x == 0).count())
}

/// Algebra over the requested coefficients, for callers without one.
pub fn algebra(arr: &PolarizedArrangement, c: Coefficients) -> Result<BTilde<'_>, ModuleError> {
    Ok(BTilde::new(arr, c)?)
}
