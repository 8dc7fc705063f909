//! The unmatched strands algebra with `U` variables, `𝒜(Z^st_n)`, over `F₂`.
//!
//! Positions are `1..=n` and subsets use bit `p − 1` for position `p`, so a
//! subset of positions is the same mask as a basis `𝕩 ⊆ {1..n}` of a left
//! arrangement. Strands move downward (see [`STRAND_DIRECTION`]), which is
//! dots moving left in the left dot picture.
//!
//! A basis element is a diagram together with a monomial in the `U_p` for
//! stationary strands `p`; every other monomial is zero in the quotient.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use foundations::f2::{BitVec, Echelon};
use rayon::prelude::*;

use crate::arrangement::{format_subset, members, subsets_of_size, PolarizedArrangement, SignVector, Subset};
use crate::convolution::{monomials_of_degree, BTilde, Coefficients, Monomial};
use crate::cyclic::{crossing_labels, kappa, kappa_inv, left_arrangement, Arrow, CyclicError, DotState, Side};
use crate::extcalc::{
    bf_intersection, chain_map_phi_in, ext_closed_form, ext_oracle, induced_class, kappa_class_is_zero, ChainMap, EndDga,
    ExtError,
};

/// Direction in which moving strands travel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrandDirection {
    /// every strand `(s, e)` has `e ≤ s`
    Down,
    Up,
}

/// The fixed convention. With it the taut classes hit by `f₁` are labeled
/// by `L` arrows only.
pub const STRAND_DIRECTION: StrandDirection = StrandDirection::Down;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrandsError {
    #[error("bad strands {0:?}: {1}")]
    Diagram(Vec<(usize, usize)>, &'static str),
    #[error("no left arrangement label with basis {0}")]
    Label(String),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error(transparent)]
    Ext(#[from] ExtError),
}

/// Strands `(start, end)`, 1-based and sorted by start.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrandsDiagram {
    n: usize,
    strands: Vec<(usize, usize)>,
}

impl StrandsDiagram {
    pub fn new(n: usize, mut strands: Vec<(usize, usize)>) -> Result<Self, StrandsError> {
        strands.sort_unstable();
        let bad = |why| Err(StrandsError::Diagram(strands.clone(), why));
        if strands.iter().any(|&(s, e)| s == 0 || e == 0 || s > n || e > n) {
            return bad("position out of range");
        }
        if strands.iter().any(|&(s, e)| e > s) {
            return bad("strands move down");
        }
        let ends: BTreeSet<usize> = strands.iter().map(|p| p.1).collect();
        if ends.len() != strands.len() || strands.windows(2).any(|w| w[0].0 == w[1].0) {
            return bad("endpoints repeat");
        }
        Ok(Self { n, strands })
    }

    /// The idempotent `I_S`.
    pub fn identity(n: usize, s: Subset) -> Self {
        Self { n, strands: members(s).map(|i| (i + 1, i + 1)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strands(&self) -> &[(usize, usize)] {
        &self.strands
    }

    pub fn source(&self) -> Subset {
        self.strands.iter().map(|p| 1 << (p.0 - 1)).sum()
    }

    pub fn target(&self) -> Subset {
        self.strands.iter().map(|p| 1 << (p.1 - 1)).sum()
    }

    /// Positions of horizontal strands.
    pub fn stationary(&self) -> Subset {
        self.strands.iter().filter(|p| p.0 == p.1).map(|p| 1 << (p.0 - 1)).sum()
    }

    /// Number of crossings.
    pub fn inversions(&self) -> usize {
        let s = &self.strands;
        (0..s.len()).map(|i| (i + 1..s.len()).filter(|&j| s[i].1 > s[j].1).count()).sum()
    }

    fn end_of(&self, start: usize) -> Option<usize> {
        self.strands.iter().find(|p| p.0 == start).map(|p| p.1)
    }
}

impl fmt::Display for StrandsDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.strands.iter().map(|(s, e)| format!("({s},{e})")).collect();
        write!(f, "{}->{}: [{}]", format_subset(self.source()), format_subset(self.target()), pairs.join(","))
    }
}

/// `U_1^{a_1}⋯` with `U_p` stored as variable `p − 1`.
pub fn format_u(m: &Monomial) -> String {
    let parts: Vec<String> =
        m.0.iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| if *e == 1 { format!("U{}", i + 1) } else { format!("U{}^{}", i + 1, e) })
            .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("")
    }
}

/// A basis element of `𝒜(Z^st_n)`.
pub type StrandsTerm = (StrandsDiagram, Monomial);

/// An `F₂` combination of basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrandsElement {
    pub terms: BTreeSet<StrandsTerm>,
}

impl StrandsElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis element, or zero when `m` uses a non-stationary position.
    pub fn basis(d: StrandsDiagram, m: Monomial) -> Self {
        let mut out = Self::zero();
        if m.support() & !d.stationary() == 0 {
            out.terms.insert((d, m));
        }
        out
    }

    pub fn idempotent(n: usize, s: Subset) -> Self {
        Self::basis(StrandsDiagram::identity(n, s), Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn toggle(&mut self, t: StrandsTerm) {
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add(&self, o: &StrandsElement) -> StrandsElement {
        let mut out = self.clone();
        for t in &o.terms {
            out.toggle(t.clone());
        }
        out
    }
}

impl fmt::Display for StrandsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(d, m)| format!("{d} * {}", format_u(m))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Product of diagrams: concatenation, zero when targets and sources differ
/// or when some pair of strands would cross twice.
pub fn multiply_diagrams(a: &StrandsDiagram, b: &StrandsDiagram) -> Option<StrandsDiagram> {
    if a.n != b.n || a.target() != b.source() {
        return None;
    }
    let strands = a.strands.iter().map(|&(s, m)| (s, b.end_of(m).expect("targets match"))).collect();
    let c = StrandsDiagram::new(a.n, strands).expect("composite of downward strands");
    (c.inversions() == a.inversions() + b.inversions()).then_some(c)
}

pub fn strands_multiply(x: &StrandsElement, y: &StrandsElement) -> StrandsElement {
    let mut out = StrandsElement::zero();
    for (a, m) in &x.terms {
        for (b, p) in &y.terms {
            if let Some(c) = multiply_diagrams(a, b) {
                for t in StrandsElement::basis(c, m.mul(p)).terms {
                    out.toggle(t);
                }
            }
        }
    }
    out
}

/// Sum of the resolutions of single crossings that lower the crossing
/// number by exactly one.
pub fn differential_term(d: &StrandsDiagram, m: &Monomial) -> StrandsElement {
    let mut out = StrandsElement::zero();
    let inv = d.inversions();
    let s = &d.strands;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if s[i].1 <= s[j].1 {
                continue;
            }
            let mut strands = s.clone();
            strands[i].1 = s[j].1;
            strands[j].1 = s[i].1;
            let r = StrandsDiagram::new(d.n, strands).expect("resolution keeps strands downward");
            if r.inversions() + 1 == inv {
                for t in StrandsElement::basis(r, *m).terms {
                    out.toggle(t);
                }
            }
        }
    }
    out
}

pub fn strands_differential(x: &StrandsElement) -> StrandsElement {
    let mut out = StrandsElement::zero();
    for (d, m) in &x.terms {
        for t in differential_term(d, m).terms {
            out.toggle(t);
        }
    }
    out
}

/// All diagrams from `s` to `t`.
pub fn diagrams(n: usize, s: Subset, t: Subset) -> Vec<StrandsDiagram> {
    fn go(src: &[usize], tgt: &[usize], used: u32, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let i = cur.len();
        if i == src.len() {
            out.push(cur.clone());
            return;
        }
        for (j, &e) in tgt.iter().enumerate() {
            if used & 1 << j == 0 && e <= src[i] {
                cur.push((src[i], e));
                go(src, tgt, used | 1 << j, cur, out);
                cur.pop();
            }
        }
    }
    if s.count_ones() != t.count_ones() {
        return Vec::new();
    }
    let src: Vec<usize> = members(s).map(|i| i + 1).collect();
    let tgt: Vec<usize> = members(t).map(|i| i + 1).collect();
    let mut out = Vec::new();
    go(&src, &tgt, 0, &mut Vec::new(), &mut out);
    out.into_iter().map(|v| StrandsDiagram::new(n, v).expect("valid by construction")).collect()
}

/// Multiplicities of `h` with `∂h = T − S` on the gaps `1..n−1`; entry
/// `j − 1` is the gap between positions `j` and `j + 1`.
pub fn h_class(n: usize, s: Subset, t: Subset) -> Vec<i64> {
    (1..n)
        .map(|j| {
            let above: Subset = !((1u32 << j) - 1);
            (s & above).count_ones() as i64 - (t & above).count_ones() as i64
        })
        .collect()
}

/// Positions both of whose adjacent gaps carry nonzero multiplicity.
pub fn interior_support(h: &[i64]) -> Subset {
    let n = h.len() + 1;
    (2..n).filter(|&p| h[p - 2] != 0 && h[p - 1] != 0).map(|p| 1 << (p - 1)).sum()
}

/// `S ∩ T ∩ int supp(h)`.
pub fn wrapped_positions(n: usize, s: Subset, t: Subset) -> Subset {
    s & t & interior_support(&h_class(n, s, t))
}

/// The crossingless diagram matching `S ∖ C` to `T ∖ C` in order, with
/// horizontal strands on `C`.
pub fn canonical_diagram(n: usize, s: Subset, t: Subset, c: Subset) -> Option<StrandsDiagram> {
    let src: Vec<usize> = members(s & !c).map(|i| i + 1).collect();
    let tgt: Vec<usize> = members(t & !c).map(|i| i + 1).collect();
    if src.len() != tgt.len() {
        return None;
    }
    let mut strands: Vec<(usize, usize)> = src.into_iter().zip(tgt).collect();
    strands.extend(members(c).map(|i| (i + 1, i + 1)));
    StrandsDiagram::new(n, strands).ok()
}

/// Basis of `I_S·𝒜·I_T` in U-degree `2·deg`, grouped by crossing number.
fn block_basis(n: usize, s: Subset, t: Subset, deg: u32) -> BTreeMap<usize, Vec<StrandsTerm>> {
    let mut out: BTreeMap<usize, Vec<StrandsTerm>> = BTreeMap::new();
    for d in diagrams(n, s, t) {
        for m in monomials_of_degree(d.stationary(), deg) {
            out.entry(d.inversions()).or_default().push((d.clone(), m));
        }
    }
    out
}

/// Graded dimension of `I_S·𝒜·I_T` per `(U-degree, crossings)`.
pub fn block_dims(n: usize, s: Subset, t: Subset, max_u: u32) -> BTreeMap<(u32, usize), usize> {
    let mut out = BTreeMap::new();
    for deg in 0..=max_u / 2 {
        for (c, v) in block_basis(n, s, t, deg) {
            out.insert((2 * deg, c), v.len());
        }
    }
    out
}

/// The same dimensions assembled from smaller blocks: for each `C ⊆ I`
/// the diagrams of `I_{S∖C}·𝒜(n−|C|)·I_{T∖C}`, monomials on `C` divisible
/// by `U_C`, and monomials on `S ∩ T ∖ I`. Crossings are not tracked.
pub fn decomposition_dims(n: usize, s: Subset, t: Subset, max_u: u32) -> BTreeMap<u32, usize> {
    let i_set = wrapped_positions(n, s, t);
    let free = s & t & !i_set;
    let mut out: BTreeMap<u32, usize> = BTreeMap::new();
    for c in (0..=i_set).filter(|c| c & i_set == *c) {
        // delete the positions in C
        let squeeze = |x: Subset| -> Subset {
            let mut out = 0;
            let mut k = 0;
            for p in 0..n {
                if c & 1 << p == 0 {
                    if x & 1 << p != 0 {
                        out |= 1 << k;
                    }
                    k += 1;
                }
            }
            out
        };
        let small = diagrams(n - c.count_ones() as usize, squeeze(s), squeeze(t)).len();
        if small == 0 {
            continue;
        }
        let a = c.count_ones();
        for dc in a..=max_u / 2 {
            let on_c = monomials_of_degree(c, dc - a).len();
            for df in 0..=(max_u / 2 - dc) {
                let on_free = monomials_of_degree(free, df).len();
                *out.entry(2 * (dc + df)).or_default() += small * on_c * on_free;
            }
        }
    }
    out.retain(|_, v| *v > 0);
    out
}

/// Homology of one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockHomology {
    pub n: usize,
    pub s: Subset,
    pub t: Subset,
    pub h: Vec<i64>,
    /// `S ∩ T ∩ int supp(h)`
    pub wrapped: Subset,
    /// dims keyed by `U-degree − |wrapped|`
    pub dims: BTreeMap<i64, usize>,
    /// `(r, U_C·μ)` for every monomial `μ` on `S ∩ T` within the cutoff
    pub representatives: Vec<StrandsTerm>,
    /// the representatives are cycles and a basis of homology in every degree
    pub representatives_ok: bool,
    /// zero unless `h ∈ {0,1}`, else free of rank one over `F₂[U_{S∩T}]`
    pub closed_form_ok: bool,
}

impl BlockHomology {
    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn h_is_01(&self) -> bool {
        self.h.iter().all(|&v| v == 0 || v == 1)
    }
}

fn index_of(v: &[StrandsTerm]) -> BTreeMap<&StrandsTerm, usize> {
    v.iter().enumerate().map(|(i, t)| (t, i)).collect()
}

fn image(idx: &BTreeMap<&StrandsTerm, usize>, len: usize, e: &StrandsElement) -> BitVec {
    BitVec::from_indices(len, e.terms.iter().map(|t| idx[t]))
}

/// `H(I_S·𝒜·I_T)` in degrees `≤ max_deg`, degree being U-degree minus
/// `|S ∩ T ∩ int supp(h)|`.
pub fn homology_block(n: usize, s: Subset, t: Subset, max_deg: i64) -> BlockHomology {
    let h = h_class(n, s, t);
    let wrapped = s & t & interior_support(&h);
    let shift = wrapped.count_ones() as i64;
    let ok01 = h.iter().all(|&v| v == 0 || v == 1);
    let r = if ok01 { canonical_diagram(n, s, t, wrapped) } else { None };
    let mut dims = BTreeMap::new();
    let mut representatives = Vec::new();
    let mut reps_ok = true;
    let max_u = max_deg + shift;
    let top = if max_u < 0 { None } else { Some((max_u / 2) as u32) };
    for deg in top.into_iter().flat_map(|t| 0..=t) {
        let basis = block_basis(n, s, t, deg);
        let empty = Vec::new();
        let mut total = 0usize;
        let mut ranks: BTreeMap<usize, usize> = BTreeMap::new();
        let mut boundaries: BTreeMap<usize, Echelon> = BTreeMap::new();
        for (&c, v) in &basis {
            if c == 0 {
                continue;
            }
            let lower = basis.get(&(c - 1)).unwrap_or(&empty);
            let idx = index_of(lower);
            let mut ech = Echelon::new(lower.len());
            for (d, m) in v {
                ech.insert(image(&idx, lower.len(), &differential_term(d, m)));
            }
            ranks.insert(c, ech.rank());
            boundaries.insert(c - 1, ech);
        }
        for (&c, v) in &basis {
            let out = ranks.get(&c).copied().unwrap_or(0);
            let inn = ranks.get(&(c + 1)).copied().unwrap_or(0);
            total += v.len() - out - inn;
        }
        if total > 0 {
            dims.insert(2 * deg as i64 - shift, total);
        }
        // representatives U_C·μ·r in this U-degree
        let mut found = 0;
        if let Some(r) = &r {
            let a = wrapped.count_ones();
            if deg >= a {
                let c0 = r.inversions();
                let level = basis.get(&c0).unwrap_or(&empty);
                let idx = index_of(level);
                let mut ech = boundaries.remove(&c0).unwrap_or_else(|| Echelon::new(level.len()));
                for mu in monomials_of_degree(s & t, deg - a) {
                    let m = mu.mul(&Monomial::squarefree(wrapped));
                    let term = (r.clone(), m);
                    reps_ok &= differential_term(&term.0, &term.1).is_zero();
                    reps_ok &= ech.insert(image(&idx, level.len(), &StrandsElement::basis(term.0.clone(), term.1)));
                    representatives.push(term);
                    found += 1;
                }
            }
        }
        reps_ok &= found == total;
    }
    let closed_form_ok = if ok01 {
        let st = s & t;
        dims.iter().all(|(&g, &dim)| {
            let rest = g - shift;
            rest >= 0 && rest % 2 == 0 && dim == monomials_of_degree(st, (rest / 2) as u32).len()
        }) && (0..=max_deg)
            .filter(|g| (g - shift) >= 0 && (g - shift) % 2 == 0)
            .all(|g| dims.contains_key(&g) || monomials_of_degree(st, ((g - shift) / 2) as u32).is_empty())
    } else {
        dims.is_empty()
    };
    BlockHomology { n, s, t, h, wrapped, dims, representatives, representatives_ok: reps_ok, closed_form_ok }
}

/// `d² = 0` on every basis element of `𝒜(n,k)` up to U-degree `2·max_deg`.
pub fn d_squared_zero(n: usize, k: usize, max_deg: u32) -> bool {
    let sets = subsets_of_size(n, k);
    sets.par_iter().all(|&s| {
        sets.iter().all(|&t| {
            (0..=max_deg).all(|deg| {
                block_basis(n, s, t, deg)
                    .values()
                    .flatten()
                    .all(|(d, m)| strands_differential(&differential_term(d, m)).is_zero())
            })
        })
    })
}

/// `S ↦ α` with `𝕩_α = S`, over the bounded feasible regions of a left arrangement.
pub fn labels_by_basis(arr: &PolarizedArrangement) -> BTreeMap<Subset, SignVector> {
    arr.bounded_feasible().iter().map(|a| (arr.x_of(a).expect("bounded feasible"), *a)).collect()
}

/// Outcome of [`verify_ext_strands`].
#[derive(Clone, Debug, Default)]
pub struct ExtStrandsReport {
    pub n: usize,
    pub max_deg: i64,
    /// blocks compared, per `k`
    pub blocks: Vec<(usize, usize)>,
    pub nonzero_blocks: usize,
    pub failures: Vec<String>,
}

impl ExtStrandsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares `H(I_S·𝒜·I_T)` with `Ext(Ṽ_α, Ṽ_β)` for every `k` and every
/// pair, where `𝕩_α = S`, `𝕩_β = T` in the left arrangement. Ext is graded by
/// homological plus map degree and must be torsion free.
pub fn verify_ext_strands(n: usize, max_deg: i64) -> Result<ExtStrandsReport, StrandsError> {
    let mut rep = ExtStrandsReport { n, max_deg, ..Default::default() };
    for k in 0..=n {
        let arr = left_arrangement(n, k)?;
        let labels = labels_by_basis(&arr);
        let sets = subsets_of_size(n, k);
        let keys: Vec<Subset> = labels.keys().copied().collect();
        if keys != sets {
            rep.failures.push(format!("k={k}: bases of P are not the {k}-subsets"));
            continue;
        }
        for (x, a) in &labels {
            if k < n && kappa(a, Side::Left, k).map(|z| z.basis()) != Ok(*x) {
                rep.failures.push(format!("k={k}: kappa({a}) does not have basis {}", format_subset(*x)));
            }
        }
        let pairs: Vec<(Subset, Subset)> = sets.iter().flat_map(|&s| sets.iter().map(move |&t| (s, t))).collect();
        let results: Vec<Result<Vec<String>, StrandsError>> = pairs
            .par_iter()
            .map(|&(s, t)| {
                let (a, b) = (labels[&s], labels[&t]);
                let mut bad = Vec::new();
                let tag = format!("k={k} {}->{}", format_subset(s), format_subset(t));
                let hb = homology_block(n, s, t, max_deg);
                if !hb.closed_form_ok {
                    bad.push(format!("{tag}: homology differs from the closed description"));
                }
                if !hb.representatives_ok {
                    bad.push(format!("{tag}: representatives are not a homology basis"));
                }
                let ext = ext_oracle(&arr, &a, &b, -(n as i64), max_deg + n as i64)?;
                if ext.torsion {
                    bad.push(format!("{tag}: Ext has torsion"));
                }
                let mut total: BTreeMap<i64, usize> = BTreeMap::new();
                for (&(i, d), &r) in &ext.ranks {
                    let g = i as i64 + d;
                    if g <= max_deg {
                        *total.entry(g).or_default() += r;
                    }
                }
                let strands: BTreeMap<i64, usize> =
                    hb.dims.iter().filter(|(g, _)| **g <= max_deg).map(|(g, d)| (*g, *d)).collect();
                if strands != total {
                    bad.push(format!("{tag}: strands {strands:?} vs Ext {total:?}"));
                }
                let bf = !bf_intersection(&arr, &a, &b)?.is_empty();
                if bf != hb.h_is_01() || bf != !ext.ranks.is_empty() {
                    bad.push(format!("{tag}: vanishing disagrees (B∩F nonempty: {bf}, h in {{0,1}}: {})", hb.h_is_01()));
                }
                Ok(bad)
            })
            .collect();
        let mut nonzero = 0;
        for (r, (s, t)) in results.into_iter().zip(&pairs) {
            rep.failures.extend(r?);
            nonzero += usize::from(h_class(n, *s, *t).iter().all(|&v| v == 0 || v == 1));
        }
        rep.blocks.push((k, pairs.len()));
        rep.nonzero_blocks += nonzero;
    }
    Ok(rep)
}

/// `f₁` on a basis element: nonzero only on `μ·U_C·r` with `C` the wrapped
/// positions and `r` the canonical diagram, where it is `φ^μ_{α,β}`.
pub fn f1_term(
    dga: &EndDga,
    labels: &BTreeMap<Subset, SignVector>,
    d: &StrandsDiagram,
    m: &Monomial,
) -> Result<Option<((SignVector, SignVector), ChainMap)>, StrandsError> {
    let (s, t) = (d.source(), d.target());
    let n = d.n();
    let lookup = |x: Subset| labels.get(&x).copied().ok_or_else(|| StrandsError::Label(format_subset(x)));
    let (a, b) = (lookup(s)?, lookup(t)?);
    let arr = dga.alg.arrangement();
    if !ext_closed_form(arr, &a, &b)?.nonzero {
        return Ok(None);
    }
    let c = wrapped_positions(n, s, t);
    if canonical_diagram(n, s, t, c).as_ref() != Some(d) {
        return Ok(None);
    }
    let Some(mu) = m.div(&Monomial::squarefree(c)) else { return Ok(None) };
    let phi = chain_map_phi_in(dga.block(&a, &b), &a, &b, &mu)?;
    Ok(Some(((a, b), phi)))
}

/// `f₁` on an element, as chain maps per block.
pub fn f1(
    dga: &EndDga,
    labels: &BTreeMap<Subset, SignVector>,
    x: &StrandsElement,
) -> Result<BTreeMap<(SignVector, SignVector), ChainMap>, StrandsError> {
    let mut out: BTreeMap<(SignVector, SignVector), ChainMap> = BTreeMap::new();
    for (d, m) in &x.terms {
        if let Some((key, phi)) = f1_term(dga, labels, d, m)? {
            match out.get_mut(&key) {
                Some(acc) => acc.add_assign(dga.alg, &phi),
                None => {
                    out.insert(key, phi);
                }
            }
        }
    }
    out.retain(|_, phi| !phi.is_zero());
    Ok(out)
}

/// Outcome of [`verify_f1`].
#[derive(Clone, Debug, Default)]
pub struct F1Report {
    pub n: usize,
    pub max_deg: i64,
    /// basis elements on which `f₁∘d = 0` was checked
    pub f1_d_checks: usize,
    /// nonzero images checked to be cycles
    pub cycle_checks: usize,
    /// homology representatives sent to a `κ`-basis element
    pub class_checks: usize,
    /// chain map entries whose taut class is labeled by `L` arrows on `C`
    pub label_checks: usize,
    /// blocks where the induced classes are distinct and as many as the
    /// closed form Ext rank through the cutoff
    pub bijection_checks: usize,
    pub failures: Vec<String>,
}

impl F1Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `f₁∘d = 0`, `d∘f₁ = 0`, that homology representatives go to the
/// `κ`-basis of each Ext block, and that each taut class used by `f₁` is a
/// product of `L` arrows on the wrapped positions.
pub fn verify_f1(n: usize, max_deg: i64) -> Result<F1Report, StrandsError> {
    let mut rep = F1Report { n, max_deg, ..Default::default() };
    for k in 0..=n {
        let arr = left_arrangement(n, k)?;
        let alg = BTilde::new(&arr, Coefficients::F2).map_err(|e| StrandsError::Label(e.to_string()))?;
        let dga = EndDga::new(&alg)?;
        let labels = labels_by_basis(&arr);
        let sets = subsets_of_size(n, k);
        for &s in &sets {
            for &t in &sets {
                let (a, b) = (labels[&s], labels[&t]);
                let tag = format!("k={k} {}->{}", format_subset(s), format_subset(t));
                let c = wrapped_positions(n, s, t);
                let max_u = (max_deg + c.count_ones() as i64).max(0) as u32;
                for deg in 0..=max_u / 2 {
                    for (d, m) in block_basis(n, s, t, deg).into_values().flatten() {
                        if !f1(&dga, &labels, &differential_term(&d, &m))?.is_empty() {
                            rep.failures.push(format!("{tag}: f1(d({d} * {})) != 0", format_u(&m)));
                        }
                        rep.f1_d_checks += 1;
                        if let Some((_, phi)) = f1_term(&dga, &labels, &d, &m)? {
                            if !dga.block(&a, &b).is_cycle(&phi) {
                                rep.failures.push(format!("{tag}: f1({d} * {}) is not a cycle", format_u(&m)));
                            }
                            rep.cycle_checks += 1;
                        }
                    }
                }
                let hb = homology_block(n, s, t, max_deg);
                let mut hit = BTreeSet::new();
                for (d, m) in &hb.representatives {
                    let Some((_, phi)) = f1_term(&dga, &labels, d, m)? else {
                        rep.failures.push(format!("{tag}: f1 kills the representative {d} * {}", format_u(m)));
                        continue;
                    };
                    let mu = m.div(&Monomial::squarefree(c)).expect("representatives are divisible by U_C");
                    let hc = dga.block(&a, &b);
                    let class = induced_class(&alg, hc, &a, &b, &phi)?;
                    let expected = BTreeMap::from([(mu, 1)]);
                    if class.as_ref() != Some(&expected) || kappa_class_is_zero(&arr, &a, &b, &expected)? {
                        rep.failures.push(format!("{tag}: representative {d} * {} induces {class:?}", format_u(m)));
                    }
                    if let Some(cl) = class {
                        hit.insert(cl.into_iter().collect::<Vec<_>>());
                    }
                    rep.class_checks += 1;
                    if m == &Monomial::squarefree(c) && k < n {
                        for &((ls, si), (lt, ti)) in phi.entries.keys() {
                            let from = a.flip_set(hc.src.labels[ls][si]);
                            let to = b.flip_set(hc.tgt.labels[lt][ti]);
                            let (x, y) = (kappa(&from, Side::Left, k)?, kappa(&to, Side::Left, k)?);
                            let want: Vec<Arrow> = members(c).map(|i| Arrow::L(i + 1)).collect();
                            if crossing_labels(&x, &y) != Some(want) {
                                rep.failures.push(format!("{tag}: taut class {from} -> {to} is not L on {}", format_subset(c)));
                            }
                            rep.label_checks += 1;
                        }
                    }
                }
                let closed = ext_closed_form(&arr, &a, &b)?.graded_ranks(-(n as i64), max_deg + n as i64);
                let rank: usize = closed.iter().filter(|((i, d), _)| *i as i64 + d <= max_deg).map(|(_, r)| r).sum();
                if hit.len() != hb.representatives.len() || hit.len() != rank {
                    rep.failures.push(format!(
                        "{tag}: {} representatives give {} classes, Ext rank {rank}",
                        hb.representatives.len(),
                        hit.len()
                    ));
                }
                rep.bijection_checks += 1;
            }
        }
    }
    Ok(rep)
}

/// The `n = 2` element `λ` (one strand from 2 down to 1) and the failure of
/// `f₁` to be multiplicative on `λ·U₁`.
#[derive(Clone, Debug)]
pub struct LambdaWitness {
    pub lambda: StrandsElement,
    pub lambda_u1: StrandsElement,
    /// `(α, β)` of the block hit by `f₁(λ)`
    pub block: (SignVector, SignVector),
    /// summand labels `(α^S, β^{S′})` of the single entry of `f₁(λ)`
    pub entry: (SignVector, SignVector),
    /// `f₁(U₁)∘f₁(λ)`, nonzero
    pub composite: ChainMap,
}

pub fn lambda_witness() -> Result<LambdaWitness, StrandsError> {
    let arr = left_arrangement(2, 1)?;
    let alg = BTilde::new(&arr, Coefficients::F2).map_err(|e| StrandsError::Label(e.to_string()))?;
    let dga = EndDga::new(&alg)?;
    let labels = labels_by_basis(&arr);
    let d = StrandsDiagram::new(2, vec![(2, 1)])?;
    let lambda = StrandsElement::basis(d, Monomial::one());
    let u1 = StrandsElement::basis(StrandsDiagram::identity(2, 0b01), Monomial::var(0));
    let lambda_u1 = strands_multiply(&lambda, &u1);
    let fl = f1(&dga, &labels, &lambda)?;
    let fu = f1(&dga, &labels, &u1)?;
    let (&block, phi) = fl.iter().next().ok_or_else(|| StrandsError::Label("f1(lambda) = 0".into()))?;
    let psi = fu.values().next().ok_or_else(|| StrandsError::Label("f1(U1) = 0".into()))?;
    let hc = dga.block(&block.0, &block.1);
    let &((ls, si), (lt, ti)) = phi.entries.keys().next().expect("nonzero chain map");
    let entry = (block.0.flip_set(hc.src.labels[ls][si]), block.1.flip_set(hc.tgt.labels[lt][ti]));
    let composite = dga.compose(psi, phi);
    Ok(LambdaWitness { lambda, lambda_u1, block, entry, composite })
}

/// The dot picture of `S` in `V_l(n, k)`.
pub fn dots_of(n: usize, s: Subset) -> DotState {
    DotState::from_basis(Side::Left, n, s)
}

/// `α` with `κ_l(α)` the dots of `S`.
pub fn sign_vector_of(n: usize, s: Subset) -> SignVector {
    kappa_inv(&dots_of(n, s))
}
