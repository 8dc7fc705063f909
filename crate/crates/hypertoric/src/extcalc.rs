//! Ext groups between standard modules of `B̃(𝒱)`.
//!
//! Three routes: the closed form, the Koszul-type multicomplex obtained by
//! resolving only the source, and the full Hom complex between two
//! projective resolutions. Gradings are recorded as the degree of the
//! underlying module map.

use std::collections::BTreeMap;

use foundations::f2::{BitVec, Echelon};
use foundations::snf::{homology, SparseIntMatrix};
use rayon::prelude::*;

use crate::arrangement::{members, PolarizedArrangement, SignVector, Subset};
use crate::convolution::{monomials_of_degree, AlgebraElement, BTilde, Coefficients, Monomial};
use crate::stdmod::{koszul_sign, projective_resolution, standard_module, ModuleError, ProjectiveComplex};

/// Index sets attached to a pair `(α, β)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtIndexSets {
    pub x_alpha: Subset,
    pub x_beta: Subset,
    /// `{i ∈ 𝕩_α^c ∩ 𝕩_β^c : α(i) ≠ β(i)}`
    pub s_min: Subset,
    /// `𝕩_α^c ∩ 𝕩_β`
    pub j: Subset,
    /// `{i ∈ 𝕩_α^c ∩ 𝕩_β^c : α(i) = β(i)}`
    pub free: Subset,
    /// `𝕩_α ∩ 𝕩_β`
    pub common: Subset,
    /// `{i ∈ 𝕩_α ∩ 𝕩_β : α(i) ≠ β(i)}`
    pub common_diff: Subset,
}

impl ExtIndexSets {
    pub fn new(alpha: &SignVector, beta: &SignVector, x_alpha: Subset, x_beta: Subset) -> Self {
        let n = alpha.len();
        let full: Subset = (1 << n) - 1;
        let d = alpha.diff(beta);
        let outside = full & !x_alpha & !x_beta;
        Self {
            x_alpha,
            x_beta,
            s_min: outside & d,
            j: full & !x_alpha & x_beta,
            free: outside & !d,
            common: x_alpha & x_beta,
            common_diff: x_alpha & x_beta & d,
        }
    }

    /// `S_min ∪ (𝕩_α^c ∩ 𝕩_β)`.
    pub fn s_top(&self) -> Subset {
        self.s_min | self.j
    }
}

/// Closed-form answer for `Ext(Ṽ_α, Ṽ_β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtResult {
    pub nonzero: bool,
    /// homological degree `i`
    pub degree: usize,
    /// the exponent `i` of the stated shift `q^i`
    pub stated_shift: i64,
    /// degree of the generating map, `e − i` with `e = |{j ∈ 𝕩_α∩𝕩_β : α(j) ≠ β(j)}|`
    pub generator_degree: i64,
    /// variables `u_j`, `j ∈ 𝕩_α ∩ 𝕩_β`
    pub generators: Vec<usize>,
}

/// Graded ranks keyed by `(homological degree, map degree)`.
pub type GradedRanks = BTreeMap<(usize, i64), usize>;

impl ExtResult {
    /// Ranks in map degrees `lo..=hi`.
    pub fn graded_ranks(&self, lo: i64, hi: i64) -> GradedRanks {
        let mut out = GradedRanks::new();
        if !self.nonzero {
            return out;
        }
        let vars = self.generators.iter().fold(0u32, |s, i| s | 1 << i);
        for d in lo..=hi {
            let rest = d - self.generator_degree;
            if rest >= 0 && rest % 2 == 0 {
                let r = monomials_of_degree(vars, (rest / 2) as u32).len();
                if r > 0 {
                    out.insert((self.degree, d), r);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("Ext vanishes for {0}, {1}")]
    Vanishes(SignVector, SignVector),
    #[error("monomial {0} uses variables outside the common basis")]
    BadMonomial(String),
    #[error("taut class {0} -> {1} is zero")]
    ZeroTautClass(SignVector, SignVector),
    #[error("chain maps need F2 coefficients")]
    NeedsF2,
}

fn index_sets(arr: &PolarizedArrangement, a: &SignVector, b: &SignVector) -> Result<ExtIndexSets, ExtError> {
    let xa = arr.x_of(a).map_err(|_| ModuleError::NotInP(*a))?;
    let xb = arr.x_of(b).map_err(|_| ModuleError::NotInP(*b))?;
    Ok(ExtIndexSets::new(a, b, xa, xb))
}

/// `ℬ_{𝕩_α} ∩ ℱ_{𝕩_β}` as sign vectors.
pub fn bf_intersection(arr: &PolarizedArrangement, a: &SignVector, b: &SignVector) -> Result<Vec<SignVector>, ExtError> {
    let ix = index_sets(arr, a, b)?;
    let full: Subset = (1 << arr.n()) - 1;
    Ok(SignVector::all(arr.n()).into_iter().filter(|g| g.agrees_on(a, ix.x_alpha) && g.agrees_on(b, full & !ix.x_beta)).collect())
}

/// The closed form: nonzero only when `ℬ_{𝕩_α} ∩ ℱ_{𝕩_β} ≠ ∅` and `α`, `β`
/// differ on all of `𝕩_α^c ∩ 𝕩_β`; then it is a free `ℤ[u_{𝕩_α∩𝕩_β}]`-module in
/// the single degree `i = |S_min| + |𝕩_α^c ∩ 𝕩_β|`.
pub fn ext_closed_form(arr: &PolarizedArrangement, a: &SignVector, b: &SignVector) -> Result<ExtResult, ExtError> {
    let ix = index_sets(arr, a, b)?;
    let d = a.diff(b);
    // ℬ_{𝕩_α} ∩ ℱ_{𝕩_β} ≠ ∅ iff α = β on 𝕩_α ∖ 𝕩_β
    let cond1 = d & ix.x_alpha & !ix.x_beta == 0;
    let cond2 = ix.j & !d == 0;
    let i = (ix.s_min.count_ones() + ix.j.count_ones()) as usize;
    let e = ix.common_diff.count_ones() as i64;
    Ok(ExtResult {
        nonzero: cond1 && cond2,
        degree: i,
        stated_shift: i as i64,
        generator_degree: e - i as i64,
        generators: members(ix.common).collect(),
    })
}

/// Result of a homology computation over ℤ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleResult {
    pub ranks: GradedRanks,
    pub torsion: bool,
}

/// Homology of a cochain complex given per degree: `dims[h]` and
/// `maps[h]: C^h → C^{h+1}`.
fn cochain_homology(dims: &[usize], maps: &[SparseIntMatrix]) -> Vec<(usize, bool)> {
    // reverse into a chain complex C_0 ← C_1 ← … with C_c = C^{top − c}
    let top = dims.len();
    let rdims: Vec<usize> = dims.iter().rev().copied().collect();
    let rmaps: Vec<SparseIntMatrix> = (0..top.saturating_sub(1)).map(|c| maps[top - 2 - c].clone()).collect();
    let mut out: Vec<(usize, bool)> = homology(&rdims, &rmaps).into_iter().map(|(b, t)| (b, !t.is_empty())).collect();
    out.reverse();
    out
}

fn cochain_homology_f2(dims: &[usize], maps: &[SparseIntMatrix]) -> Vec<usize> {
    let ranks: Vec<usize> = maps
        .iter()
        .map(|m| {
            let mut e = Echelon::new(m.rows());
            let mut cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for ((r, c), v) in m.nonzeros() {
                if v.rem_euclid(2) == 1 {
                    cols.entry(c).or_default().push(r);
                }
            }
            for (_, rows) in cols {
                e.insert(BitVec::from_indices(m.rows(), rows));
            }
            e.rank()
        })
        .collect();
    (0..dims.len())
        .map(|h| {
            let out = ranks.get(h).copied().unwrap_or(0);
            let inn = if h == 0 { 0 } else { ranks[h - 1] };
            dims[h] - out - inn
        })
        .collect()
}

/// The multicomplex `𝔛_α` of rank-one `ℤ[u_{𝕩_β}]` summands, built from the
/// index sets alone and totalized with Koszul signs.
pub fn ext_oracle(
    arr: &PolarizedArrangement,
    a: &SignVector,
    b: &SignVector,
    lo: i64,
    hi: i64,
) -> Result<OracleResult, ExtError> {
    let ix = index_sets(arr, a, b)?;
    let cond1 = a.diff(b) & ix.x_alpha & !ix.x_beta == 0;
    if !cond1 {
        // no γ ∈ ℬ_{𝕩_α} ∩ ℱ_{𝕩_β}: every Hom(P̃_{α^S}, Ṽ_β) vanishes
        return Ok(OracleResult::default());
    }
    let subsets: Vec<Subset> = (0..=ix.j).filter(|s| s & ix.j == *s).map(|s| s | ix.s_min).collect();
    let gen_deg = |s: Subset| a.flip_set(s).diff(b).count_ones() as i64 - s.count_ones() as i64;
    let levels: Vec<Vec<Subset>> =
        (0..=ix.j.count_ones()).map(|h| subsets.iter().copied().filter(|s| (s & ix.j).count_ones() == h).collect()).collect();
    let base = ix.s_min.count_ones() as usize;
    let basis = |lvl: &[Subset], d: i64| -> Vec<(Subset, Monomial)> {
        let mut out = Vec::new();
        for s in lvl {
            let rest = d - gen_deg(*s);
            if rest >= 0 && rest % 2 == 0 {
                for m in monomials_of_degree(ix.x_beta, (rest / 2) as u32) {
                    out.push((*s, m));
                }
            }
        }
        out
    };
    let per: Vec<(i64, Vec<(usize, bool)>)> = (lo..=hi)
        .into_par_iter()
        .map(|d| {
            let bases: Vec<Vec<(Subset, Monomial)>> = levels.iter().map(|l| basis(l, d)).collect();
            let dims: Vec<usize> = bases.iter().map(|v| v.len()).collect();
            let mut maps = Vec::new();
            for h in 0..levels.len().saturating_sub(1) {
                let tgt: BTreeMap<(Subset, Monomial), usize> = bases[h + 1].iter().enumerate().map(|(i, k)| (*k, i)).collect();
                let mut m = SparseIntMatrix::new(dims[h + 1], dims[h]);
                for (col, (s, mono)) in bases[h].iter().enumerate() {
                    for jj in members(ix.j & !s) {
                        let t = s | 1 << jj;
                        let edge = if a.get(jj) != b.get(jj) { mono.mul(&Monomial::var(jj)) } else { *mono };
                        m.add(tgt[&(t, edge)], col, koszul_sign(t, jj));
                    }
                }
                maps.push(m);
            }
            (d, cochain_homology(&dims, &maps))
        })
        .collect();
    let mut res = OracleResult::default();
    for (d, hs) in per {
        for (h, (r, t)) in hs.into_iter().enumerate() {
            if r > 0 {
                res.ranks.insert((h + base, d), r);
            }
            res.torsion |= t;
        }
    }
    Ok(res)
}

/// A map of complexes `Res_α → Res_β` of fixed homological shift
/// `h = level(source) − level(target)`, given by right multiplication.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainMap {
    pub shift: i64,
    /// `((source level, index), (target level, index)) ↦ image of the generator`
    pub entries: BTreeMap<((usize, usize), (usize, usize)), AlgebraElement>,
}

impl ChainMap {
    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|e| e.is_zero())
    }

    /// `self += other`, entry by entry.
    pub fn add_assign(&mut self, alg: &BTilde, other: &ChainMap) {
        for (k, e) in &other.entries {
            self.add_entry(alg, *k, e);
        }
    }

    fn add_entry(&mut self, alg: &BTilde, key: ((usize, usize), (usize, usize)), e: &AlgebraElement) {
        let slot = self.entries.entry(key).or_default();
        *slot = alg.add(slot, e);
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }
}

/// The Hom complex between two projective complexes.
pub struct HomComplex<'a> {
    pub alg: &'a BTilde<'a>,
    pub src: ProjectiveComplex,
    pub tgt: ProjectiveComplex,
}

impl<'a> HomComplex<'a> {
    pub fn between(alg: &'a BTilde<'a>, a: &SignVector, b: &SignVector) -> Result<Self, ExtError> {
        Ok(Self { alg, src: projective_resolution(alg, a)?, tgt: projective_resolution(alg, b)? })
    }

    fn sign(&self, h: i64) -> i64 {
        if h % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `D φ = d ∘ φ − (−1)^h φ ∘ d`, composing right multiplications.
    pub fn differential(&self, phi: &ChainMap) -> ChainMap {
        let alg = self.alg;
        let mut out = ChainMap { shift: phi.shift + 1, entries: BTreeMap::new() };
        let sg = self.sign(phi.shift);
        for (&((ls, s), (lt, t)), e) in &phi.entries {
            // d ∘ φ: follow with the target differential t → t'
            if lt >= 1 {
                for (t2, src, de) in &self.tgt.differentials[lt - 1] {
                    if *src == t {
                        out.add_entry(alg, ((ls, s), (lt - 1, *t2)), &alg.multiply(e, de));
                    }
                }
            }
            // φ ∘ d: precede with the source differential s'' → s
            if let Some(ds) = self.src.differentials.get(ls) {
                for (tgt_idx, s2, de) in ds {
                    if *tgt_idx == s {
                        out.add_entry(alg, ((ls + 1, *s2), (lt, t)), &alg.scale(&alg.multiply(de, e), -sg));
                    }
                }
            }
        }
        out
    }

    /// Whether `φ` commutes with the differentials up to the Hom sign.
    pub fn is_cycle(&self, phi: &ChainMap) -> bool {
        self.differential(phi).is_zero()
    }

    fn pairs(&self, h: i64) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for (ls, lvl) in self.src.levels.iter().enumerate() {
            let lt = ls as i64 - h;
            if lt < 0 || lt as usize >= self.tgt.levels.len() {
                continue;
            }
            for s in 0..lvl.len() {
                for t in 0..self.tgt.levels[lt as usize].len() {
                    out.push(((ls, s), (lt as usize, t)));
                }
            }
        }
        out
    }

    /// Basis of `Hom^h` in map degree `d`.
    pub fn basis(&self, h: i64, d: i64) -> Vec<(((usize, usize), (usize, usize)), SignVector, Monomial)> {
        let mut out = Vec::new();
        for key in self.pairs(h) {
            let ((ls, s), (lt, t)) = key;
            let (gs, _) = self.src.levels[ls][s];
            let (gt, _) = self.tgt.levels[lt][t];
            let hs = self.alg.hom_space(&gs, &gt).expect("labels in P");
            for m in hs.basis_in_degree(d + h) {
                out.push((key, gs, m));
            }
        }
        out
    }

    fn basis_element(&self, key: ((usize, usize), (usize, usize)), m: Monomial) -> ChainMap {
        let ((ls, s), (lt, t)) = key;
        let e = self.alg.term(self.src.levels[ls][s].0, self.tgt.levels[lt][t].0, m, 1);
        ChainMap { shift: ls as i64 - lt as i64, entries: BTreeMap::from([(key, e)]) }
    }

    fn h_range(&self) -> (i64, i64) {
        (-(self.tgt.len() as i64 - 1), self.src.len() as i64 - 1)
    }

    /// Matrices of `D: Hom^h(d) → Hom^{h+1}(d)` over the full range of `h`.
    fn degree_complex(&self, d: i64) -> (Vec<usize>, Vec<SparseIntMatrix>) {
        let (lo, hi) = self.h_range();
        let bases: Vec<_> = (lo..=hi).map(|h| self.basis(h, d)).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let mut maps = Vec::new();
        for (hi_idx, h) in (lo..hi).enumerate() {
            let index: BTreeMap<(((usize, usize), (usize, usize)), Monomial), usize> =
                bases[hi_idx + 1].iter().enumerate().map(|(i, (k, _, m))| ((*k, *m), i)).collect();
            let mut mat = SparseIntMatrix::new(dims[hi_idx + 1], dims[hi_idx]);
            for (col, (key, _, m)) in bases[hi_idx].iter().enumerate() {
                let dphi = self.differential(&self.basis_element(*key, *m));
                debug_assert_eq!(dphi.shift, h + 1);
                for (k2, e) in &dphi.entries {
                    for (_, _, m2, c) in e.iter() {
                        mat.add(index[&(*k2, *m2)], col, c);
                    }
                }
            }
            maps.push(mat);
        }
        (dims, maps)
    }

    /// Homology ranks per `(h, d)` for `h ≥ 0`, map degrees `lo..=hi`.
    pub fn homology(&self, lo: i64, hi: i64) -> OracleResult {
        let (hlo, _) = self.h_range();
        let f2 = self.alg.coefficients() == Coefficients::F2;
        let per: Vec<(i64, Vec<(usize, bool)>)> = (lo..=hi)
            .into_par_iter()
            .map(|d| {
                let (dims, maps) = self.degree_complex(d);
                let hs = if f2 {
                    cochain_homology_f2(&dims, &maps).into_iter().map(|r| (r, false)).collect()
                } else {
                    cochain_homology(&dims, &maps)
                };
                (d, hs)
            })
            .collect();
        let mut res = OracleResult::default();
        for (d, hs) in per {
            for (idx, (r, t)) in hs.into_iter().enumerate() {
                let h = hlo + idx as i64;
                if r > 0 {
                    assert!(h >= 0, "Hom complex has homology in negative degree {h}");
                    res.ranks.insert((h as usize, d), r);
                }
                res.torsion |= t;
            }
        }
        res
    }

    /// `D² = 0` on every basis element of map degree `d`.
    pub fn d_squared_zero(&self, d: i64) -> bool {
        let (lo, hi) = self.h_range();
        (lo..=hi).all(|h| {
            self.basis(h, d)
                .into_iter()
                .all(|(k, _, m)| self.differential(&self.differential(&self.basis_element(k, m))).is_zero())
        })
    }

    /// The identity of `Res_α` (needs source = target).
    pub fn identity(&self) -> ChainMap {
        let mut out = ChainMap::default();
        for (l, lvl) in self.src.levels.iter().enumerate() {
            for (i, (g, _)) in lvl.iter().enumerate() {
                out.add_entry(self.alg, ((l, i), (l, i)), &self.alg.idempotent(*g));
            }
        }
        out
    }
}

/// Ext ranks by the full Hom complex between resolutions.
pub fn ext_hom_complex(alg: &BTilde, a: &SignVector, b: &SignVector, lo: i64, hi: i64) -> Result<OracleResult, ExtError> {
    Ok(HomComplex::between(alg, a, b)?.homology(lo, hi))
}

/// `μ φ_{α,β}`: on `S = S_min ∪ (𝕩_α^c∩𝕩_β) ∪ S'` it sends `e_{α^S}` to
/// `μ f_{α^S, β^{S'}}` in the summand `T = S'`. Over `F₂`.
pub fn chain_map_phi<'a>(
    alg: &'a BTilde<'a>,
    a: &SignVector,
    b: &SignVector,
    mu: &Monomial,
) -> Result<(HomComplex<'a>, ChainMap), ExtError> {
    if alg.coefficients() != Coefficients::F2 {
        return Err(ExtError::NeedsF2);
    }
    let hc = HomComplex::between(alg, a, b)?;
    let phi = chain_map_phi_in(&hc, a, b, mu)?;
    Ok((hc, phi))
}

/// [`chain_map_phi`] inside an existing Hom complex between `Res_α` and `Res_β`.
pub fn chain_map_phi_in(hc: &HomComplex, a: &SignVector, b: &SignVector, mu: &Monomial) -> Result<ChainMap, ExtError> {
    let alg = hc.alg;
    if alg.coefficients() != Coefficients::F2 {
        return Err(ExtError::NeedsF2);
    }
    let arr = alg.arrangement();
    let res = ext_closed_form(arr, a, b)?;
    if !res.nonzero {
        return Err(ExtError::Vanishes(*a, *b));
    }
    let ix = index_sets(arr, a, b)?;
    if mu.support() & !ix.common != 0 {
        return Err(ExtError::BadMonomial(mu.format()));
    }
    let mut phi = ChainMap { shift: res.degree as i64, entries: BTreeMap::new() };
    for sp in 0..=ix.free {
        if sp & ix.free != sp {
            continue;
        }
        let s = ix.s_top() | sp;
        let ls = s.count_ones() as usize;
        let lt = sp.count_ones() as usize;
        let Some(si) = hc.src.labels.get(ls).and_then(|l| l.iter().position(|x| *x == s)) else { continue };
        let Some(ti) = hc.tgt.labels.get(lt).and_then(|l| l.iter().position(|x| *x == sp)) else { continue };
        let (from, to) = (a.flip_set(s), b.flip_set(sp));
        let taut = alg.f(from, to);
        if taut.is_zero() {
            return Err(ExtError::ZeroTautClass(from, to));
        }
        let e = alg.mul_monomial(&taut, mu);
        phi.add_entry(alg, ((ls, si), (lt, ti)), &e);
    }
    Ok(phi)
}

/// The class of a chain map `Res_α → Res_β` after projecting to `Ṽ_β`:
/// the polynomial on `κ_{S_top}` reduced modulo `u_j`, `j ∈ 𝕩_α^c ∩ 𝕩_β`.
///
/// Returns `None` if the projected map has a component on a summand other
/// than `S_top`, which the identification does not cover.
pub fn induced_class(
    alg: &BTilde,
    hc: &HomComplex,
    a: &SignVector,
    b: &SignVector,
    phi: &ChainMap,
) -> Result<Option<BTreeMap<Monomial, i64>>, ExtError> {
    let arr = alg.arrangement();
    let ix = index_sets(arr, a, b)?;
    let v = standard_module(arr, b)?;
    let mut poly: BTreeMap<Monomial, i64> = BTreeMap::new();
    for (&((ls, s), (lt, _)), e) in &phi.entries {
        if lt != 0 {
            continue;
        }
        let label = hc.src.labels[ls][s];
        for (g, tgt, m, c) in e.iter() {
            debug_assert_eq!(tgt, b);
            // augmentation P̃_β → Ṽ_β
            if !v.contains_label(g) || m.support() & !v.x != 0 {
                continue;
            }
            if label != ix.s_top() {
                return Ok(None);
            }
            if m.support() & ix.j != 0 {
                continue;
            }
            let slot = poly.entry(*m).or_insert(0);
            *slot = alg.coefficients().reduce(*slot + c);
        }
    }
    poly.retain(|_, c| *c != 0);
    Ok(Some(poly))
}

/// Whether `Σ p_m · m · κ_{S_top}` is a coboundary in `𝔛_α` over `F₂`,
/// checked in each map degree separately.
pub fn kappa_class_is_zero(
    arr: &PolarizedArrangement,
    a: &SignVector,
    b: &SignVector,
    poly: &BTreeMap<Monomial, i64>,
) -> Result<bool, ExtError> {
    let ix = index_sets(arr, a, b)?;
    let top = ix.s_top();
    let gen_deg = |s: Subset| a.flip_set(s).diff(b).count_ones() as i64 - s.count_ones() as i64;
    let mut by_deg: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    for (m, c) in poly {
        if c.rem_euclid(2) == 1 {
            by_deg.entry(gen_deg(top) + 2 * m.total_degree() as i64).or_default().push(*m);
        }
    }
    for (d, ms) in by_deg {
        // image of the previous level into the top summand
        let top_basis = {
            let rest = d - gen_deg(top);
            monomials_of_degree(ix.x_beta, (rest / 2) as u32)
        };
        let index: BTreeMap<Monomial, usize> = top_basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut ech = Echelon::new(top_basis.len());
        for jj in members(ix.j) {
            let s = top & !(1 << jj);
            let rest = d - gen_deg(s);
            if rest < 0 || rest % 2 != 0 {
                continue;
            }
            for mono in monomials_of_degree(ix.x_beta, (rest / 2) as u32) {
                let img = if a.get(jj) != b.get(jj) { mono.mul(&Monomial::var(jj)) } else { mono };
                ech.insert(BitVec::from_indices(top_basis.len(), [index[&img]]));
            }
        }
        let v = BitVec::from_indices(top_basis.len(), ms.iter().map(|m| index[m]));
        if !ech.contains(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The endomorphism dg-algebra of `⊕_α Res_α` over `F₂`, block by block.
pub struct EndDga<'a> {
    pub alg: &'a BTilde<'a>,
    pub blocks: BTreeMap<(SignVector, SignVector), HomComplex<'a>>,
}

impl<'a> EndDga<'a> {
    pub fn new(alg: &'a BTilde<'a>) -> Result<Self, ExtError> {
        if alg.coefficients() != Coefficients::F2 {
            return Err(ExtError::NeedsF2);
        }
        let mut blocks = BTreeMap::new();
        for a in alg.labels() {
            for b in alg.labels() {
                blocks.insert((*a, *b), HomComplex::between(alg, a, b)?);
            }
        }
        Ok(Self { alg, blocks })
    }

    pub fn block(&self, a: &SignVector, b: &SignVector) -> &HomComplex<'a> {
        &self.blocks[&(*a, *b)]
    }

    /// `ψ ∘ φ` for `φ: Res_α → Res_β`, `ψ: Res_β → Res_γ`.
    pub fn compose(&self, psi: &ChainMap, phi: &ChainMap) -> ChainMap {
        let mut out = ChainMap { shift: phi.shift + psi.shift, entries: BTreeMap::new() };
        for (&(s, m), e1) in &phi.entries {
            for (&(m2, t), e2) in &psi.entries {
                if m == m2 {
                    out.add_entry(self.alg, (s, t), &self.alg.multiply(e1, e2));
                }
            }
        }
        out
    }
}
