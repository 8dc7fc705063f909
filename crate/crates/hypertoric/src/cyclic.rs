//! Left and right cyclic arrangements built from Vandermonde data, sign
//! variation, the dots-in-regions bijections and the comparison with the
//! Ozsváth–Szabó algebra `B(n,k)`.
//!
//! A [`DotState`] stores regions as a bitmask, bit `r` for region `r`, so a
//! left state lives in bits `0..n-1` and a right state in bits `1..n`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use foundations::rational::{self, rat, RatMatrix};
use foundations::Rational;
use num_traits::{One, Signed, Zero};
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::arrangement::{subsets_of_size, ArrangementError, PolarizedArrangement, SignVector, Subset};
use crate::convolution::{monomials_of_degree, AlgebraElement, BTilde, Coefficients, Monomial};
use crate::stdmod::standard_module;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = CyclicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            _ => Err(CyclicError::Nodes(format!("unknown side {s:?}"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error("invalid nodes: {0}")]
    Nodes(String),
    #[error("{matrix}: minor on rows {rows:?} is {value}, sign differs from the first minor")]
    Positivity { matrix: &'static str, rows: Vec<usize>, value: String },
    #[error("eta is not positively oriented: first coordinate of its projection to V^perp is {0}")]
    Orientation(String),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("{alpha} has variation {var}, expected {k}")]
    Variation { alpha: String, var: usize, k: usize },
    #[error("bad dot state: {0}")]
    State(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
}

/// Number of sign changes reading left to right.
pub fn var(signs: &[i32]) -> usize {
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `var(+α)`.
pub fn var_l(a: &SignVector) -> usize {
    let mut s = vec![1];
    s.extend(a.signs());
    var(&s)
}

/// `var(α(−1)^k)`.
pub fn var_r(a: &SignVector, k: usize) -> usize {
    let mut s = a.signs();
    s.push(parity_sign(k));
    var(&s)
}

pub fn var_side(a: &SignVector, side: Side, k: usize) -> usize {
    match side {
        Side::Left => var_l(a),
        Side::Right => var_r(a, k),
    }
}

fn parity_sign(k: usize) -> i32 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `k` dots in the regions between `n` lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DotState {
    pub side: Side,
    pub n: usize,
    /// bit `r` set when region `r` holds a dot
    pub regions: u32,
}

impl DotState {
    pub fn new(side: Side, n: usize, regions: &[usize]) -> Result<Self, CyclicError> {
        let mut mask = 0u32;
        for &r in regions {
            let ok = match side {
                Side::Left => r < n,
                Side::Right => (1..=n).contains(&r),
            };
            if !ok || mask >> r & 1 == 1 {
                return Err(CyclicError::State(format!("region {r} invalid for {side} side with n = {n}")));
            }
            mask |= 1 << r;
        }
        Ok(Self { side, n, regions: mask })
    }

    pub fn k(&self) -> usize {
        self.regions.count_ones() as usize
    }

    pub fn dots(&self) -> Vec<usize> {
        (0..=self.n).filter(|r| self.regions >> r & 1 == 1).collect()
    }

    pub fn has(&self, r: usize) -> bool {
        self.regions >> r & 1 == 1
    }

    /// The matroid basis `𝕩` as a 0-based hyperplane mask.
    pub fn basis(&self) -> Subset {
        match self.side {
            Side::Left => self.regions,
            Side::Right => self.regions >> 1,
        }
    }

    pub fn from_basis(side: Side, n: usize, x: Subset) -> Self {
        let regions = match side {
            Side::Left => x,
            Side::Right => x << 1,
        };
        Self { side, n, regions }
    }

    /// All states with `k` dots on this side.
    pub fn all(side: Side, n: usize, k: usize) -> Vec<DotState> {
        subsets_of_size(n, k).into_iter().map(|x| Self::from_basis(side, n, x)).collect()
    }

    fn lowest(&self) -> usize {
        match self.side {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    fn highest(&self) -> usize {
        self.lowest() + self.n - 1
    }

    fn with_dots(&self, dots: &[usize]) -> Option<Self> {
        let mut mask = 0u32;
        for &d in dots {
            if d < self.lowest() || d > self.highest() || mask >> d & 1 == 1 {
                return None;
            }
            mask |= 1 << d;
        }
        Some(Self { regions: mask, ..*self })
    }

    /// Covers in the dot order: one dot one step right (left side) or
    /// one step left (right side).
    pub fn up_moves(&self) -> Vec<DotState> {
        let mut out = Vec::new();
        for r in self.dots() {
            let t = match self.side {
                Side::Left => r + 1,
                Side::Right => r.wrapping_sub(1),
            };
            if t >= self.lowest() && t <= self.highest() && !self.has(t) {
                out.push(Self { regions: self.regions ^ (1 << r) ^ (1 << t), ..*self });
            }
        }
        out
    }

    /// Reflexive-transitive closure of [`Self::up_moves`].
    pub fn dot_leq(&self, other: &DotState) -> bool {
        let mut seen = BTreeSet::from([*self]);
        let mut queue = VecDeque::from([*self]);
        while let Some(s) = queue.pop_front() {
            if s == *other {
                return true;
            }
            for t in s.up_moves() {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        false
    }

    /// Dot-motion description of `ℬ_𝕩 ∩ 𝒫`: on the left each dot slides
    /// left without reaching its left neighbour's start, on the right each
    /// dot slides right without reaching its right neighbour's start.
    pub fn bounded_cone_states(&self) -> Vec<DotState> {
        let d = self.dots();
        let k = d.len();
        let ranges: Vec<Vec<usize>> = (0..k)
            .map(|j| match self.side {
                Side::Left => {
                    let lo = if j == 0 { 0 } else { d[j - 1] + 1 };
                    (lo..=d[j]).collect()
                }
                Side::Right => {
                    let hi = if j + 1 == k { self.n + 1 } else { d[j + 1] };
                    (d[j]..hi).collect()
                }
            })
            .collect();
        self.product(&ranges)
    }

    /// Dot-motion description of `ℱ_𝕩 ∩ 𝒫`: each dot moves at most one
    /// step, right on the left side and left on the right side.
    pub fn feasible_cone_states(&self) -> Vec<DotState> {
        let ranges: Vec<Vec<usize>> = self
            .dots()
            .into_iter()
            .map(|r| match self.side {
                Side::Left => vec![r, r + 1],
                Side::Right => vec![r - 1, r],
            })
            .collect();
        self.product(&ranges)
    }

    fn product(&self, ranges: &[Vec<usize>]) -> Vec<DotState> {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        for r in ranges {
            acc = acc
                .into_iter()
                .flat_map(|p| {
                    r.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        let mut out: Vec<DotState> = acc.iter().filter_map(|p| self.with_dots(p)).collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for DotState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.dots().iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", v.join(","))
    }
}

/// `κ_l` or `κ_r`.
pub fn kappa(a: &SignVector, side: Side, k: usize) -> Result<DotState, CyclicError> {
    let n = a.len();
    let v = var_side(a, side, k);
    if v != k {
        return Err(CyclicError::Variation { alpha: a.to_string(), var: v, k });
    }
    let mut regions = 0u32;
    match side {
        Side::Left => {
            // s_0 = +, s_i = α_i; i ∈ 𝕫 when s_i ≠ s_{i+1}
            let mut prev = 1;
            for i in 0..n {
                if a.get(i) != prev {
                    regions |= 1 << i;
                }
                prev = a.get(i);
            }
        }
        Side::Right => {
            let mut s = a.signs();
            s.push(parity_sign(k));
            for i in 1..=n {
                if s[i - 1] != s[i] {
                    regions |= 1 << i;
                }
            }
        }
    }
    Ok(DotState { side, n, regions })
}

/// Inverse of [`kappa`].
pub fn kappa_inv(x: &DotState) -> SignVector {
    let n = x.n;
    let mut signs = vec![0; n];
    match x.side {
        Side::Left => {
            let mut s = 1;
            for (i, slot) in signs.iter_mut().enumerate() {
                if x.has(i) {
                    s = -s;
                }
                *slot = s;
            }
        }
        Side::Right => {
            let mut s = parity_sign(x.k());
            for step in 1..=n {
                if x.has(n - step + 1) {
                    s = -s;
                }
                signs[n - step] = s;
            }
        }
    }
    SignVector::from_signs(&signs)
}

/// Nodes and side of a cyclic arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSpec {
    pub n: usize,
    pub k: usize,
    pub side: Side,
    /// `t_1 < … < t_n`
    pub nodes: Vec<Rational>,
    /// `t_0` on the left, `t_{n+1}` on the right
    pub eval_node: Rational,
}

impl CyclicSpec {
    /// `t_i = i`, with `t_0 = 1/2` or `t_{n+1} = n+1`.
    pub fn with_default_nodes(n: usize, k: usize, side: Side) -> Self {
        let nodes = (1..=n as i64).map(rat).collect();
        let eval_node = match side {
            Side::Left => rational::ratio(1, 2),
            Side::Right => rat(n as i64 + 1),
        };
        Self { n, k, side, nodes, eval_node }
    }

    fn validate(&self) -> Result<(), CyclicError> {
        if self.n == 0 || self.k >= self.n {
            return Err(CyclicError::Nodes(format!("need 0 <= k < n, got n = {}, k = {}", self.n, self.k)));
        }
        if self.nodes.len() != self.n {
            return Err(CyclicError::Nodes(format!("expected {} nodes, got {}", self.n, self.nodes.len())));
        }
        if !self.nodes.iter().all(|t| t.is_positive()) || !self.eval_node.is_positive() {
            return Err(CyclicError::Nodes("nodes must be positive".into()));
        }
        if self.nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CyclicError::Nodes("nodes must be strictly increasing".into()));
        }
        Ok(())
    }

    /// `V` as an `n × k` Vandermonde matrix, powers `0..k-1`.
    pub fn v_matrix(&self) -> RatMatrix {
        self.nodes.iter().map(|t| powers(t, self.k)).collect()
    }

    /// `η = (−1)^k (t_i^k)`; the sign makes `η` positively oriented.
    pub fn eta(&self) -> Vec<Rational> {
        let s = rat(parity_sign(self.k) as i64);
        self.nodes.iter().map(|t| &s * pow(t, self.k)).collect()
    }

    /// Values of `ξ` on the basis columns of `V`.
    pub fn xi_on_v(&self) -> Vec<Rational> {
        let vals = powers(&self.eval_node, self.k);
        match self.side {
            Side::Left => vals,
            Side::Right => {
                let s = rat(parity_sign(self.k) as i64);
                vals.into_iter().map(|v| &s * v).collect()
            }
        }
    }
}

fn pow(t: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * t)
}

fn powers(t: &Rational, k: usize) -> Vec<Rational> {
    (0..k).map(|j| pow(t, j)).collect()
}

/// Checks that every maximal minor of `m` (rows chosen, all columns) is
/// nonzero with a common sign.
fn check_same_sign(matrix: &'static str, m: &RatMatrix, cols: usize) -> Result<(), CyclicError> {
    let mut first = 0;
    for rows in subsets_of_size(m.len(), cols) {
        let idx: Vec<usize> = (0..m.len()).filter(|i| rows >> i & 1 == 1).collect();
        let sub: RatMatrix = idx.iter().map(|&i| m[i].clone()).collect();
        let d = rational::determinant(&sub);
        let s = rational::sign(&d);
        if first == 0 {
            first = s;
        }
        if s == 0 || s != first {
            return Err(CyclicError::Positivity { matrix, rows: idx, value: rational::format_rational(&d) });
        }
    }
    Ok(())
}

/// Verifies the three cyclicity conditions by exact minors and the
/// orientation of `η`.
pub fn check_cyclic_conditions(spec: &CyclicSpec) -> Result<(), CyclicError> {
    spec.validate()?;
    let v = spec.v_matrix();
    let eta = spec.eta();
    let ve: RatMatrix = v.iter().zip(&eta).map(|(r, e)| r.iter().cloned().chain([e.clone()]).collect()).collect();
    check_same_sign("V + <eta>", &ve, spec.k + 1)?;
    let xi = spec.xi_on_v();
    let ext: RatMatrix = match spec.side {
        Side::Left => std::iter::once(xi).chain(v.iter().cloned()).collect(),
        Side::Right => {
            let s = rat(parity_sign(spec.k) as i64);
            let row = xi.into_iter().map(|x| &s * x).collect();
            v.iter().cloned().chain(std::iter::once(row)).collect()
        }
    };
    check_same_sign(if spec.side == Side::Left { "(xi, id)(V)" } else { "(id, (-1)^k xi)(V)" }, &ext, spec.k)?;
    let first = projection_first_coordinate(&v, &eta);
    if !first.is_positive() {
        return Err(CyclicError::Orientation(rational::format_rational(&first)));
    }
    Ok(())
}

/// First coordinate of the orthogonal projection of `w` onto `V^⊥`.
fn projection_first_coordinate(v: &RatMatrix, w: &[Rational]) -> Rational {
    let k = v.first().map_or(0, |r| r.len());
    if k == 0 {
        return w[0].clone();
    }
    let vt = rational::transpose(v);
    let gram = rational::mat_mul(&vt, v);
    let inv = rational::inverse(&gram).expect("V has full rank");
    let vtw: Vec<Rational> = vt.iter().map(|row| rational::dot(row, w)).collect();
    let c: Vec<Rational> = inv.iter().map(|row| rational::dot(row, &vtw)).collect();
    &w[0] - rational::dot(&v[0], &c)
}

/// Builds the cyclic arrangement of `spec` after verifying cyclicity.
pub fn make_cyclic(spec: &CyclicSpec) -> Result<PolarizedArrangement, CyclicError> {
    check_cyclic_conditions(spec)?;
    let (n, k) = (spec.n, spec.k);
    let v = spec.v_matrix();
    let cols: Vec<Vec<Rational>> = (0..k).map(|j| v.iter().map(|r| r[j].clone()).collect()).collect();
    // lift ξ supported on the first k coordinates
    let mut xi = vec![Rational::zero(); n];
    if k > 0 {
        let a: RatMatrix = (0..k).map(|j| (0..k).map(|i| v[i][j].clone()).collect()).collect();
        let sol = rational::solve(&a, &spec.xi_on_v()).expect("Vandermonde block is invertible");
        xi[..k].clone_from_slice(&sol);
    }
    Ok(PolarizedArrangement::new(n, k, cols, spec.eta(), xi)?)
}

/// The left arrangement with `k` dots on `n` lines: the left cyclic one with
/// default nodes for `k < n`, and for `k = n` the coordinate arrangement in
/// `ℝ^n` whose one bounded feasible region is the alternating `−+−⋯`.
pub fn left_arrangement(n: usize, k: usize) -> Result<PolarizedArrangement, CyclicError> {
    if k < n {
        return make_cyclic(&CyclicSpec::with_default_nodes(n, k, Side::Left));
    }
    if k > n {
        return Err(CyclicError::Nodes(format!("k = {k} exceeds n = {n}")));
    }
    let cols: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| i64::from(i == j)).collect()).collect();
    let xi: Vec<i64> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    Ok(PolarizedArrangement::from_ints(&cols, &vec![0; n], &xi)?)
}

/// Outcome of [`verify_cyclic_combinatorics`]: named checks and an
/// itemized list of failures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CyclicReport {
    pub checks: Vec<(String, bool)>,
    pub failures: Vec<String>,
}

impl CyclicReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, name: &str, failures: Vec<String>) {
        self.checks.push((name.to_string(), failures.is_empty()));
        self.failures.extend(failures.into_iter().map(|f| format!("{name}: {f}")));
    }
}

/// Compares the LP-derived data of a cyclic arrangement with the sign
/// variation and dot-motion rules.
pub fn verify_cyclic_combinatorics(arr: &PolarizedArrangement, side: Side) -> CyclicReport {
    let (n, k) = (arr.n(), arr.k());
    let mut rep = CyclicReport::default();

    let mut f = Vec::new();
    for a in SignVector::all(n) {
        let v = var_side(&a, side, k);
        if arr.is_feasible(&a) != (v <= k) {
            f.push(format!("{a} feasible = {}, var = {v}", arr.is_feasible(&a)));
        }
        if arr.is_bounded(&a) != (v >= k) {
            f.push(format!("{a} bounded = {}, var = {v}", arr.is_bounded(&a)));
        }
    }
    rep.record("variation classifies regions", f);

    let states = DotState::all(side, n, k);
    let mut f = Vec::new();
    let mut alpha = BTreeMap::new();
    for x in &states {
        let a = kappa_inv(x);
        match kappa(&a, side, k) {
            Ok(y) if y == *x => {}
            other => f.push(format!("{x} -> {a} -> {other:?}")),
        }
        if !arr.in_p(&a) {
            f.push(format!("{x} -> {a} not in P"));
        } else if arr.x_of(&a).ok() != Some(x.basis()) {
            f.push(format!("{x}: basis of {a} differs from the dot state"));
        }
        alpha.insert(*x, a);
    }
    if arr.bounded_feasible().len() != states.len() {
        f.push(format!("|P| = {} but there are {} dot states", arr.bounded_feasible().len(), states.len()));
    }
    rep.record("kappa is a bijection onto P", f);

    let mut f = Vec::new();
    for x in &states {
        for y in &states {
            if x.dot_leq(y) != arr.leq(&alpha[x], &alpha[y]) {
                f.push(format!("{x} <= {y}: dots {} vs xi {}", x.dot_leq(y), arr.leq(&alpha[x], &alpha[y])));
            }
        }
    }
    rep.record("xi order is the dot order", f);

    let mut f = Vec::new();
    for x in &states {
        let Ok((bc, fc)) = arr.cones(x.basis()) else {
            f.push(format!("{x}: no basis"));
            continue;
        };
        let in_p = |c: Vec<SignVector>| -> BTreeSet<SignVector> { c.into_iter().filter(|a| arr.in_p(a)).collect() };
        let rule = |v: Vec<DotState>| -> BTreeSet<SignVector> { v.iter().map(kappa_inv).collect() };
        if in_p(bc) != rule(x.bounded_cone_states()) {
            f.push(format!("{x}: bounded cone"));
        }
        if in_p(fc) != rule(x.feasible_cone_states()) {
            f.push(format!("{x}: feasible cone"));
        }
    }
    rep.record("cones follow dot motions", f);

    let mut f = Vec::new();
    let compact: BTreeSet<SignVector> = arr.regions().compact.iter().copied().collect();
    let interior: BTreeSet<SignVector> = states.iter().filter(|x| !x.has(0) && !x.has(n)).map(kappa_inv).collect();
    if compact != interior {
        f.push(format!("K has {} elements, interior states {}", compact.len(), interior.len()));
    }
    rep.record("K is dots in 1..n-1", f);
    rep
}

/// A generator of `B(n,k)` other than the `U_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    /// moves a dot from region `i-1` to `i`
    R(usize),
    /// moves a dot from region `i` to `i-1`
    L(usize),
}

impl Arrow {
    /// Target of the arrow from `x` in `V(n,k)`, if it applies.
    pub fn apply(&self, x: u32, n: usize) -> Option<u32> {
        let (i, from, to) = match *self {
            Arrow::R(i) => (i, i - 1, i),
            Arrow::L(i) => (i, i, i - 1),
        };
        (i >= 1 && i <= n && x >> from & 1 == 1 && x >> to & 1 == 0).then(|| x ^ (1 << from) ^ (1 << to))
    }

    pub fn index(&self) -> usize {
        match *self {
            Arrow::R(i) | Arrow::L(i) => i,
        }
    }

    fn swap(&self) -> Arrow {
        match *self {
            Arrow::R(i) => Arrow::L(i),
            Arrow::L(i) => Arrow::R(i),
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arrow::R(i) => write!(f, "R{i}"),
            Arrow::L(i) => write!(f, "L{i}"),
        }
    }
}

/// How `R_i`, `L_i` are sent into `B̃(𝒱)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RlConvention {
    /// `R_i: 𝕩 → 𝕪` goes to `f_{α_𝕩 α_𝕪}`, paths multiply left to right
    Forward,
    /// `R_i: 𝕩 → 𝕪` goes to `f_{α_𝕪 α_𝕩}`, paths multiply right to left
    Reversed,
}

/// The convention used by [`osz_verify`].
pub const RL_CONVENTION: RlConvention = RlConvention::Forward;

/// Result of comparing `B̃(𝒱)` with `B_l(n,k)`.
#[derive(Clone, Debug, Default)]
pub struct OszReport {
    /// relation instances checked, per family 1..=5
    pub relation_checks: [usize; 5],
    pub failures: Vec<String>,
    pub psi_checks: usize,
    pub dim_checks: usize,
    pub max_deg: i64,
    /// whether the other [`RlConvention`] also passes the relations
    pub alternative_passes: bool,
}

impl OszReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Realization<'a> {
    alg: &'a BTilde<'a>,
    conv: RlConvention,
    n: usize,
}

impl Realization<'_> {
    fn arrow(&self, a: Arrow, x: u32) -> Option<AlgebraElement> {
        let y = a.apply(x, self.n)?;
        let (ax, ay) = (left_alpha(self.n, x), left_alpha(self.n, y));
        Some(match self.conv {
            RlConvention::Forward => self.alg.f(ax, ay),
            RlConvention::Reversed => self.alg.f(ay, ax),
        })
    }

    /// The path `word` starting at `x`, or `None` if it leaves `V_l(n,k)`.
    fn path(&self, x: u32, word: &[Arrow]) -> Option<AlgebraElement> {
        let mut cur = x;
        let mut acc = self.alg.idempotent(left_alpha(self.n, x));
        for a in word {
            let y = a.apply(cur, self.n)?;
            if y >> self.n & 1 == 1 {
                return None;
            }
            let e = self.arrow(*a, cur)?;
            acc = match self.conv {
                RlConvention::Forward => self.alg.multiply(&acc, &e),
                RlConvention::Reversed => self.alg.multiply(&e, &acc),
            };
            cur = y;
        }
        Some(acc)
    }

    fn u(&self, i: usize, x: u32) -> AlgebraElement {
        self.alg.u(i - 1, left_alpha(self.n, x))
    }
}

fn left_alpha(n: usize, x: u32) -> SignVector {
    kappa_inv(&DotState { side: Side::Left, n, regions: x })
}

/// Checks relations (1)–(5) of `B(n,k)` on all paths inside `V_l(n,k)`.
fn check_relations(r: &Realization, k: usize, counts: &mut [usize; 5]) -> Vec<String> {
    let n = r.n;
    let mut fails = Vec::new();
    let arrows: Vec<Arrow> = (1..=n).flat_map(|i| [Arrow::R(i), Arrow::L(i)]).collect();
    let states = subsets_of_size(n, k);
    let mut expect = |fam: usize, ok: bool, what: String| {
        counts[fam - 1] += 1;
        if !ok {
            fails.push(format!("({fam}) {what}"));
        }
    };
    for &x in &states {
        let sx = DotState { side: Side::Left, n, regions: x };
        // (1) U_j commutes with arrows and with U_i
        for &a in &arrows {
            if let Some(p) = r.path(x, &[a]) {
                let y = a.apply(x, n).unwrap();
                for j in 1..=n {
                    let lhs = r.alg.multiply(&p, &r.u(j, y));
                    let rhs = r.alg.multiply(&r.u(j, x), &p);
                    expect(1, lhs == rhs, format!("{a} U{j} at {sx}"));
                }
            }
        }
        for i in 1..=n {
            for j in 1..=n {
                let lhs = r.alg.multiply(&r.u(i, x), &r.u(j, x));
                let rhs = r.alg.multiply(&r.u(j, x), &r.u(i, x));
                expect(1, lhs == rhs, format!("U{i} U{j} at {sx}"));
            }
        }
        for i in 1..=n {
            // (2)
            for w in [[Arrow::R(i), Arrow::L(i)], [Arrow::L(i), Arrow::R(i)]] {
                if let Some(p) = r.path(x, &w) {
                    expect(2, p == r.u(i, x), format!("{}{} at {sx}", w[0], w[1]));
                }
            }
            // (4)
            if i >= 2 {
                for w in [[Arrow::R(i - 1), Arrow::R(i)], [Arrow::L(i), Arrow::L(i - 1)]] {
                    if let Some(p) = r.path(x, &w) {
                        expect(4, p.is_zero(), format!("{}{} at {sx}", w[0], w[1]));
                    }
                }
            }
            // (5), with the converse
            let empty = x >> (i - 1) & 1 == 0 && x >> i & 1 == 0;
            expect(5, r.u(i, x).is_zero() == empty, format!("U{i} at {sx}"));
        }
        // (3)
        for &a in &arrows {
            for &b in &arrows {
                let (i, j) = (a.index(), b.index());
                if i.abs_diff(j) <= 1 {
                    continue;
                }
                let lhs = r.path(x, &[a, b]);
                let rhs = r.path(x, &[b, a]);
                if lhs.is_some() || rhs.is_some() {
                    expect(3, lhs.is_some() && lhs == rhs, format!("{a}{b} at {sx}"));
                }
            }
        }
    }
    fails
}

/// Compares `B̃(𝒱)` of a left cyclic arrangement with `B_l(n,k)`:
/// relations, `ψ`, and graded dimensions up to `max_deg`.
pub fn osz_verify(arr: &PolarizedArrangement, max_deg: i64) -> Result<OszReport, CyclicError> {
    let (n, k) = (arr.n(), arr.k());
    for a in arr.bounded_feasible() {
        if var_l(a) != k {
            return Err(CyclicError::Variation { alpha: a.to_string(), var: var_l(a), k });
        }
    }
    let alg = BTilde::new(arr, Coefficients::Integers).map_err(|e| CyclicError::Mismatch(e.to_string()))?;
    let mut rep = OszReport { max_deg, ..Default::default() };
    let fwd = Realization { alg: &alg, conv: RL_CONVENTION, n };
    rep.failures = check_relations(&fwd, k, &mut rep.relation_checks);

    // arrows are degree one and nonzero
    let states = subsets_of_size(n, k);
    for &x in &states {
        for i in 1..n {
            for a in [Arrow::R(i), Arrow::L(i)] {
                if let Some(e) = fwd.path(x, &[a]) {
                    let (ax, ay) = (left_alpha(n, x), left_alpha(n, a.apply(x, n).unwrap()));
                    if e.is_zero() || !alg.is_homogeneous(&e, 1) {
                        rep.failures.push(format!("{a} at {ax}: not a degree one generator"));
                    }
                    // ψ_OSz swaps R_i and L_i
                    rep.psi_checks += 1;
                    let back = fwd.path(a.apply(x, n).unwrap(), &[a.swap()]).unwrap();
                    if alg.psi(&e) != back {
                        rep.failures.push(format!("psi({a}) at {ax} -> {ay}"));
                    }
                }
            }
        }
        for i in 1..=n {
            rep.psi_checks += 1;
            if alg.psi(&fwd.u(i, x)) != fwd.u(i, x) {
                rep.failures.push(format!("psi(U{i})"));
            }
        }
    }

    // graded dimensions against the quiver presentation
    for &x in &states {
        let dims = osz_graded_dims(n, x, max_deg);
        for &y in &states {
            let series =
                alg.graded_dim(&left_alpha(n, x), &left_alpha(n, y)).map_err(|e| CyclicError::Mismatch(e.to_string()))?;
            for d in 0..=max_deg {
                rep.dim_checks += 1;
                let q = dims.get(&(y, d)).copied().unwrap_or(0);
                if q as i64 != series.coefficient(d) {
                    rep.failures.push(format!(
                        "dim I_x B I_y in degree {d} for x = {}, y = {}: quiver {q}, B~ {}",
                        DotState { side: Side::Left, n, regions: x },
                        DotState { side: Side::Left, n, regions: y },
                        series.coefficient(d)
                    ));
                }
            }
        }
    }

    let alt = Realization { alg: &alg, conv: other(RL_CONVENTION), n };
    let mut scratch = [0; 5];
    rep.alternative_passes = check_relations(&alt, k, &mut scratch).is_empty();
    Ok(rep)
}

fn other(c: RlConvention) -> RlConvention {
    match c {
        RlConvention::Forward => RlConvention::Reversed,
        RlConvention::Reversed => RlConvention::Forward,
    }
}

/// `dim I_𝕩 B(n,k) I_𝕪` in degrees `0..=max_deg` for every `𝕪 ∈ V(n,k)`,
/// computed from the quiver presentation.
///
/// Relation (1) is built in by writing paths as (U-monomial, R/L word).
/// Relations (2) and (3) identify two such forms and (4), (5) kill one, so
/// each graded piece is spanned by the classes of the generated equivalence
/// relation, minus the classes holding a killed form.
pub fn osz_graded_dims(n: usize, x: u32, max_deg: i64) -> BTreeMap<(u32, i64), usize> {
    let arrows: Vec<Arrow> = (1..=n).flat_map(|i| [Arrow::R(i), Arrow::L(i)]).collect();
    // (word, endpoint, positions i with an empty neighbourhood somewhere on the path)
    let empty_at = |v: u32| -> u32 { (1..=n).filter(|&i| v >> (i - 1) & 1 == 0 && v >> i & 1 == 0).map(|i| 1 << (i - 1)).sum() };
    let mut words: Vec<(Vec<Arrow>, u32, u32)> = vec![(Vec::new(), x, empty_at(x))];
    let mut frontier = 0..1;
    for _ in 0..max_deg.max(0) {
        let start = words.len();
        for idx in frontier.clone() {
            let (w, cur, mask) = words[idx].clone();
            for &a in &arrows {
                if let Some(y) = a.apply(cur, n) {
                    let mut w2 = w.clone();
                    w2.push(a);
                    words.push((w2, y, mask | empty_at(y)));
                }
            }
        }
        frontier = start..words.len();
    }
    let word_id: HashMap<&[Arrow], usize> = words.iter().enumerate().map(|(i, (w, _, _))| (w.as_slice(), i)).collect();
    let all_vars: Subset = (1u32 << n) - 1;
    let mut groups: HashMap<(u32, i64), Vec<(Monomial, usize)>> = HashMap::new();
    for (id, (w, end, _)) in words.iter().enumerate() {
        let l = w.len() as i64;
        let mut j = 0;
        while l + 2 * j <= max_deg {
            for m in monomials_of_degree(all_vars, j as u32) {
                groups.entry((*end, l + 2 * j)).or_default().push((m, id));
            }
            j += 1;
        }
    }
    let mut out = BTreeMap::new();
    for (key, forms) in groups {
        let index: HashMap<(Monomial, usize), usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut classes = UnionFind::<usize>::new(forms.len());
        let mut killed = Vec::new();
        for (me, &(m, id)) in forms.iter().enumerate() {
            let (w, _, mask) = &words[id];
            for p in 0..w.len().saturating_sub(1) {
                let (a, b) = (w[p], w[p + 1]);
                let (i, j) = (a.index(), b.index());
                if i == j && a != b {
                    // (2) R_i L_i = U_i = L_i R_i
                    let mut w2 = w.clone();
                    w2.drain(p..p + 2);
                    classes.union(me, index[&(m.mul(&Monomial::var(i - 1)), word_id[w2.as_slice()])]);
                } else if i.abs_diff(j) > 1 {
                    // (3)
                    let mut w2 = w.clone();
                    w2.swap(p, p + 1);
                    if let Some(&id2) = word_id.get(w2.as_slice()) {
                        classes.union(me, index[&(m, id2)]);
                    }
                } else if (a, b) == (Arrow::R(i), Arrow::R(i + 1)) || (a, b) == (Arrow::L(i), Arrow::L(i.wrapping_sub(1))) {
                    // (4)
                    killed.push(me);
                }
            }
            // (5)
            if (1..=n).any(|i| m.0[i - 1] > 0 && mask >> (i - 1) & 1 == 1) {
                killed.push(me);
            }
        }
        let dead: HashSet<usize> = killed.into_iter().map(|f| classes.find(f)).collect();
        let live: HashSet<usize> = (0..forms.len()).map(|f| classes.find(f)).filter(|r| !dead.contains(r)).collect();
        out.insert(key, live.len());
    }
    out
}

/// The standard module `Ṽ_α` in the dots language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OszStandard {
    pub state: DotState,
    /// `ℛ_𝕩`, listed along a linear extension of the dot order
    pub right_slides: Vec<DotState>,
    /// indices `i+1` with `i ∉ 𝕩`; the variables `U_{i+1}` act by zero
    pub killed: Vec<usize>,
}

/// `ℛ_𝕩` and the killed variables, checked against [`standard_module`].
pub fn osz_standard(arr: &PolarizedArrangement, x: &DotState) -> Result<OszStandard, CyclicError> {
    if x.side != Side::Left || x.n != arr.n() || x.k() != arr.k() {
        return Err(CyclicError::State(format!("{x} is not a left state for this arrangement")));
    }
    let mut right_slides = x.feasible_cone_states();
    // a dot move to the right raises the sum of positions
    right_slides.sort_by_key(|s| (s.dots().iter().sum::<usize>(), *s));
    let killed: Vec<usize> = (0..x.n).filter(|i| !x.has(*i)).map(|i| i + 1).collect();
    let alpha = kappa_inv(x);
    let v = standard_module(arr, &alpha).map_err(|e| CyclicError::Mismatch(e.to_string()))?;
    let got: BTreeSet<SignVector> = v.basis.iter().map(|(b, _)| *b).collect();
    let want: BTreeSet<SignVector> = right_slides.iter().map(kappa_inv).collect();
    if got != want {
        return Err(CyclicError::Mismatch(format!("standard module basis at {x} differs from the right slides")));
    }
    let alive: Vec<usize> = (0..x.n).filter(|i| v.x >> i & 1 == 1).map(|i| i + 1).collect();
    if alive.iter().any(|i| killed.contains(i)) || alive.len() + killed.len() != x.n {
        return Err(CyclicError::Mismatch(format!("killed variables at {x}")));
    }
    Ok(OszStandard { state: *x, right_slides, killed })
}

/// Arrows crossed on a taut path between two states on the same side:
/// `R_i` where a dot crosses line `i` to the right, `L_i` to the left.
/// `None` when some line would be crossed more than once.
pub fn crossing_labels(x: &DotState, y: &DotState) -> Option<Vec<Arrow>> {
    if x.side != y.side || x.n != y.n || x.k() != y.k() {
        return None;
    }
    let left_of = |s: &DotState, i: usize| (s.regions & ((1u32 << i) - 1)).count_ones() as i64;
    let mut out = Vec::new();
    for i in 1..=x.n {
        match left_of(x, i) - left_of(y, i) {
            0 => {}
            1 => out.push(Arrow::R(i)),
            -1 => out.push(Arrow::L(i)),
            _ => return None,
        }
    }
    Some(out)
}
