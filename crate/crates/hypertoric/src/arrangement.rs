//! Polarized hyperplane arrangements: validation, region classification,
//! matroid bases with the bijection `μ`, the partial order, cones and Gale
//! duality.
//!
//! Points of `V_η` are written `x = η + B·y` with `B` the `n×k` basis matrix.
//! Positions are 0-based internally and 1-based in every printed form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use foundations::fm::{fm_feasible, LinearSystem};
use foundations::rational::{self, format_rational, parse_rational, RatMatrix, Rational};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

/// Subsets of `{0..n-1}` as bitmasks.
pub type Subset = u32;

/// Iterates the members of a subset in increasing order.
pub fn members(s: Subset) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| s >> i & 1 == 1)
}

/// Prints a subset 1-based, as `{1,3}`.
pub fn format_subset(s: Subset) -> String {
    let v: Vec<String> = members(s).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

/// All `r`-element subsets of `{0..n-1}` in colex order.
pub fn subsets_of_size(n: usize, r: usize) -> Vec<Subset> {
    (0..1u32 << n).filter(|s| s.count_ones() as usize == r).collect()
}

/// An element of `{+,−}^n`. Bit `i` of `minus` is set when position `i` is `−`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    n: u8,
    minus: u32,
}

impl SignVector {
    pub fn new(n: usize, minus: u32) -> Self {
        assert!(n <= 31, "sign vectors longer than 31 are unsupported");
        Self { n: n as u8, minus: minus & ((1u32 << n) - 1) }
    }

    pub fn all_plus(n: usize) -> Self {
        Self::new(n, 0)
    }

    /// Every sign vector of length `n`, in the printed order.
    pub fn all(n: usize) -> Vec<SignVector> {
        let mut v: Vec<_> = (0..1u32 << n).map(|m| Self::new(n, m)).collect();
        v.sort();
        v
    }

    pub fn from_signs(signs: &[i32]) -> Self {
        let mut m = 0;
        for (i, &s) in signs.iter().enumerate() {
            assert!(s == 1 || s == -1);
            if s < 0 {
                m |= 1 << i;
            }
        }
        Self::new(signs.len(), m)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn minus_mask(&self) -> u32 {
        self.minus
    }

    /// `+1` or `−1` at 0-based position `i`.
    pub fn get(&self, i: usize) -> i32 {
        if self.minus >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn flip(&self, i: usize) -> Self {
        Self::new(self.len(), self.minus ^ 1 << i)
    }

    /// `α^S`: flips every position in `s`.
    pub fn flip_set(&self, s: Subset) -> Self {
        Self::new(self.len(), self.minus ^ s)
    }

    /// Positions where the two vectors differ.
    pub fn diff(&self, other: &SignVector) -> Subset {
        assert_eq!(self.n, other.n, "sign vector length mismatch");
        self.minus ^ other.minus
    }

    /// True when the two vectors agree on every position of `s`.
    pub fn agrees_on(&self, other: &SignVector, s: Subset) -> bool {
        self.diff(other) & s == 0
    }

    pub fn signs(&self) -> Vec<i32> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    fn key(&self) -> u32 {
        if self.n == 0 {
            0
        } else {
            self.minus.reverse_bits() >> (32 - self.n as u32)
        }
    }
}

impl Ord for SignVector {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.n, self.key()).cmp(&(o.n, o.key()))
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed sign vector {0:?}")]
pub struct ParseSignError(pub String);

impl FromStr for SignVector {
    type Err = ParseSignError;

    /// Accepts `+`, `-` and the Unicode minus, optionally in parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut signs = Vec::new();
        for c in t.chars() {
            match c {
                '+' => signs.push(1),
                '-' | '−' => signs.push(-1),
                ',' | ' ' => {}
                _ => return Err(ParseSignError(s.to_string())),
            }
        }
        if signs.len() > 31 {
            return Err(ParseSignError(s.to_string()));
        }
        Ok(Self::from_signs(&signs))
    }
}

/// Hamming distance `d_{α,β}`.
pub fn sign_distance(a: &SignVector, b: &SignVector) -> Result<u32, ArrangementError> {
    if a.len() != b.len() {
        return Err(ArrangementError::Dimension(format!("sign vectors of lengths {} and {}", a.len(), b.len())));
    }
    Ok(a.diff(b).count_ones())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("rank error: basis of V has rank {got}, expected {expected}")]
    Rank { expected: usize, got: usize },
    #[error("genericity error: {0}")]
    Genericity(String),
    #[error("{0} is not a basis of the matroid")]
    NotABasis(String),
    #[error("{0} is not bounded feasible")]
    NotBoundedFeasible(String),
}

impl ArrangementError {
    /// Distinct numeric code per failure family.
    pub fn code(&self) -> u8 {
        match self {
            Self::Parse(_) => 10,
            Self::Dimension(_) => 11,
            Self::Rank { .. } => 12,
            Self::Genericity(_) => 13,
            Self::NotABasis(_) => 14,
            Self::NotBoundedFeasible(_) => 15,
        }
    }
}

/// A matroid basis `𝕩` with its vertex `H_𝕩` and `μ(𝕩)`.
#[derive(Clone, Debug)]
pub struct BasisPoint {
    pub subset: Subset,
    /// the vertex in ambient coordinates `x = η + B·y`
    pub vertex: Vec<Rational>,
    pub xi_value: Rational,
    pub mu: SignVector,
}

/// Sign vectors sorted by the `+ < −` string order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionClassification {
    pub feasible: BTreeSet<SignVector>,
    pub bounded: BTreeSet<SignVector>,
    pub bounded_feasible: BTreeSet<SignVector>,
    pub compact: BTreeSet<SignVector>,
}

/// A validated polarized arrangement together with its derived combinatorics.
#[derive(Clone, Debug)]
pub struct PolarizedArrangement {
    n: usize,
    k: usize,
    basis: RatMatrix,
    eta: Vec<Rational>,
    xi: Vec<Rational>,
    /// `ξ` restricted to `V` in the coordinates `y`
    xi_v: Vec<Rational>,
    regions: RegionClassification,
    bases: Vec<BasisPoint>,
    /// bounded feasible sign vectors in printed order
    p: Vec<SignVector>,
    p_index: BTreeMap<SignVector, usize>,
    /// `x_of[i]` is the basis with `μ(x) = p[i]`
    x_of: Vec<Subset>,
    /// `leq[i][j]` iff `p[i] ≤ p[j]`
    leq: Vec<Vec<bool>>,
}

fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

impl PolarizedArrangement {
    /// Builds and validates. `basis_cols` holds `k` columns of length `n`.
    pub fn new(
        n: usize,
        k: usize,
        basis_cols: Vec<Vec<Rational>>,
        eta: Vec<Rational>,
        xi: Vec<Rational>,
    ) -> Result<Self, ArrangementError> {
        if n == 0 || n > 24 {
            return Err(ArrangementError::Dimension(format!("n = {n} outside 1..=24")));
        }
        if k > n {
            return Err(ArrangementError::Dimension(format!("k = {k} exceeds n = {n}")));
        }
        if basis_cols.len() != k || basis_cols.iter().any(|c| c.len() != n) {
            return Err(ArrangementError::Dimension(format!("V_basis must be {k} columns of length {n}")));
        }
        if eta.len() != n || xi.len() != n {
            return Err(ArrangementError::Dimension(format!("eta and xi must have length {n}")));
        }
        let basis: RatMatrix = (0..n).map(|i| (0..k).map(|j| basis_cols[j][i].clone()).collect()).collect();
        let got = if k == 0 { 0 } else { rational::rank(&basis) };
        if got != k {
            return Err(ArrangementError::Rank { expected: k, got });
        }
        let xi_v: Vec<Rational> = (0..k).map(|j| (0..n).map(|i| &xi[i] * &basis[i][j]).sum()).collect();
        let mut arr = Self {
            n,
            k,
            basis,
            eta,
            xi,
            xi_v,
            regions: RegionClassification {
                feasible: BTreeSet::new(),
                bounded: BTreeSet::new(),
                bounded_feasible: BTreeSet::new(),
                compact: BTreeSet::new(),
            },
            bases: Vec::new(),
            p: Vec::new(),
            p_index: BTreeMap::new(),
            x_of: Vec::new(),
            leq: Vec::new(),
        };
        arr.validate_genericity()?;
        arr.bases = arr.compute_bases()?;
        arr.regions = arr.compute_regions();
        arr.index_bounded_feasible()?;
        arr.leq = arr.compute_order()?;
        Ok(arr)
    }

    /// Integer convenience constructor.
    pub fn from_ints(basis_cols: &[Vec<i64>], eta: &[i64], xi: &[i64]) -> Result<Self, ArrangementError> {
        let n = eta.len();
        let cols = basis_cols.iter().map(|c| c.iter().map(|&v| rational::rat(v)).collect()).collect();
        let r = |v: &[i64]| v.iter().map(|&x| rational::rat(x)).collect();
        Self::new(n, basis_cols.len(), cols, r(eta), r(xi))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Columns of the basis of `V`.
    pub fn basis_columns(&self) -> Vec<Vec<Rational>> {
        (0..self.k).map(|j| (0..self.n).map(|i| self.basis[i][j].clone()).collect()).collect()
    }

    pub fn eta(&self) -> &[Rational] {
        &self.eta
    }

    pub fn xi(&self) -> &[Rational] {
        &self.xi
    }

    fn rows(&self, s: Subset) -> RatMatrix {
        members(s).map(|i| self.basis[i].clone()).collect()
    }

    fn point(&self, y: &[Rational]) -> Vec<Rational> {
        (0..self.n).map(|i| &self.eta[i] + rational::dot(&self.basis[i], y)).collect()
    }

    fn validate_genericity(&self) -> Result<(), ArrangementError> {
        let (n, k) = (self.n, self.k);
        if k > 0 {
            if let Some(i) = (0..n).find(|&i| self.basis[i].iter().all(|x| x.is_zero())) {
                return Err(ArrangementError::Genericity(format!(
                    "hyperplane H_{} is empty or everything (coordinate constant on V)",
                    i + 1
                )));
            }
        }
        // (a): no k+1 hyperplanes share a point
        for s in subsets_of_size(n, k + 1) {
            let a = self.rows(s);
            let b: Vec<Rational> = members(s).map(|i| -self.eta[i].clone()).collect();
            if rational::solve(&a, &b).is_some() {
                return Err(ArrangementError::Genericity(format!("eta is not generic: hyperplanes {} meet", format_subset(s))));
            }
        }
        // (b): ξ is nonconstant along every line flat
        if k > 0 {
            for t in subsets_of_size(n, k - 1) {
                let a = self.rows(t);
                if k > 1 && rational::rank(&a) != k - 1 {
                    continue;
                }
                let dir = rational::nullspace(&a, k);
                debug_assert_eq!(dir.len(), 1);
                if rational::dot(&self.xi_v, &dir[0]).is_zero() {
                    return Err(ArrangementError::Genericity(format!("xi is constant on the flat H_{}", format_subset(t))));
                }
            }
        }
        Ok(())
    }

    fn compute_bases(&self) -> Result<Vec<BasisPoint>, ArrangementError> {
        let mut out = Vec::new();
        for s in subsets_of_size(self.n, self.k) {
            let a = self.rows(s);
            let Some(inv) = (if self.k == 0 { Some(Vec::new()) } else { rational::inverse(&a) }) else {
                continue;
            };
            let rhs: Vec<Rational> = members(s).map(|i| -self.eta[i].clone()).collect();
            let y: Vec<Rational> = (0..self.k).map(|r| (0..self.k).map(|c| &inv[r][c] * &rhs[c]).sum()).collect();
            let vertex = self.point(&y);
            let xi_value = rational::dot(&self.xi_v, &y);
            // c = ξ_V · B_x^{-1}: the rate of change of ξ as x_j (j ∈ 𝕩) grows
            let c: Vec<Rational> = (0..self.k).map(|col| (0..self.k).map(|r| &self.xi_v[r] * &inv[r][col]).sum()).collect();
            let mut minus = 0u32;
            for i in 0..self.n {
                if s >> i & 1 == 0 {
                    if vertex[i].is_negative() {
                        minus |= 1 << i;
                    }
                }
            }
            for (pos, i) in members(s).enumerate() {
                if c[pos].is_zero() {
                    return Err(ArrangementError::Genericity(format!(
                        "xi is constant on the flat H_{}",
                        format_subset(s & !(1 << i))
                    )));
                }
                if c[pos].is_positive() {
                    minus |= 1 << i;
                }
            }
            out.push(BasisPoint { subset: s, vertex, xi_value, mu: SignVector::new(self.n, minus) });
        }
        Ok(out)
    }

    /// System for `Δ_α ∩ H_Z` in variables `(y, t)` with `t = 1`.
    pub fn chamber_system(&self, alpha: &SignVector, zero: Subset) -> LinearSystem {
        let mut sys = LinearSystem::new(self.k + 1);
        for i in 0..self.n {
            let mut row: Vec<Rational> = self.basis[i].clone();
            row.push(self.eta[i].clone());
            if zero >> i & 1 == 1 {
                sys.eq0(row);
            } else {
                if alpha.get(i) < 0 {
                    row = row.into_iter().map(|x| -x).collect();
                }
                sys.ge0(row);
            }
        }
        let mut t = zeros(self.k + 1);
        t[self.k] = Rational::one();
        sys.eq1(t);
        sys
    }

    fn cone_rows(&self, alpha: &SignVector) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| if alpha.get(i) < 0 { self.basis[i].iter().map(|x| -x.clone()).collect() } else { self.basis[i].clone() })
            .collect()
    }

    /// LP test for `Δ_α ≠ ∅`.
    pub fn is_feasible_lp(&self, alpha: &SignVector) -> bool {
        fm_feasible(&self.chamber_system(alpha, 0)).expect("well-formed system")
    }

    /// LP test: `ξ` bounded above on the cone `Σ_α`.
    pub fn is_bounded_lp(&self, alpha: &SignVector) -> bool {
        let mut sys = LinearSystem::new(self.k);
        for r in self.cone_rows(alpha) {
            sys.ge0(r);
        }
        sys.eq1(self.xi_v.clone());
        !fm_feasible(&sys).expect("well-formed system")
    }

    /// LP test: the recession cone of `Δ_α` is trivial.
    pub fn has_trivial_recession_lp(&self, alpha: &SignVector) -> bool {
        let rows = self.cone_rows(alpha);
        let mut sum = zeros(self.k);
        for r in &rows {
            for (a, b) in sum.iter_mut().zip(r) {
                *a += b;
            }
        }
        let mut sys = LinearSystem::new(self.k);
        for r in rows {
            sys.ge0(r);
        }
        sys.eq1(sum);
        !fm_feasible(&sys).expect("well-formed system")
    }

    fn compute_regions(&self) -> RegionClassification {
        let all = SignVector::all(self.n);
        let flags: Vec<(SignVector, bool, bool, bool)> = all
            .par_iter()
            .map(|a| {
                let f = self.is_feasible_lp(a);
                let b = self.is_bounded_lp(a);
                let c = f && b && self.has_trivial_recession_lp(a);
                (*a, f, b, c)
            })
            .collect();
        let pick = |g: fn(&(SignVector, bool, bool, bool)) -> bool| -> BTreeSet<SignVector> {
            flags.iter().filter(|t| g(t)).map(|t| t.0).collect()
        };
        RegionClassification {
            feasible: pick(|t| t.1),
            bounded: pick(|t| t.2),
            bounded_feasible: pick(|t| t.1 && t.2),
            compact: pick(|t| t.3),
        }
    }

    fn index_bounded_feasible(&mut self) -> Result<(), ArrangementError> {
        self.p = self.regions.bounded_feasible.iter().copied().collect();
        self.p_index = self.p.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let mut x_of = vec![None; self.p.len()];
        for b in &self.bases {
            let Some(&i) = self.p_index.get(&b.mu) else {
                return Err(ArrangementError::Genericity(format!(
                    "mu({}) = {} is not bounded feasible",
                    format_subset(b.subset),
                    b.mu
                )));
            };
            if x_of[i].replace(b.subset).is_some() {
                return Err(ArrangementError::Genericity(format!("mu is not injective at {}", b.mu)));
            }
        }
        if let Some(i) = x_of.iter().position(|x| x.is_none()) {
            return Err(ArrangementError::Genericity(format!("{} is not in the image of mu", self.p[i])));
        }
        self.x_of = x_of.into_iter().map(Option::unwrap).collect();
        Ok(())
    }

    fn compute_order(&self) -> Result<Vec<Vec<bool>>, ArrangementError> {
        let m = self.p.len();
        let mut leq = vec![vec![false; m]; m];
        for i in 0..m {
            leq[i][i] = true;
        }
        for a in &self.bases {
            for b in &self.bases {
                if a.subset >= b.subset || (a.subset & b.subset).count_ones() as usize + 1 != self.k {
                    continue;
                }
                let (ia, ib) = (self.p_index[&a.mu], self.p_index[&b.mu]);
                match a.xi_value.cmp(&b.xi_value) {
                    std::cmp::Ordering::Less => leq[ia][ib] = true,
                    std::cmp::Ordering::Greater => leq[ib][ia] = true,
                    std::cmp::Ordering::Equal => {
                        return Err(ArrangementError::Genericity(format!(
                            "xi takes equal values at adjacent vertices {} and {}",
                            format_subset(a.subset),
                            format_subset(b.subset)
                        )))
                    }
                }
            }
        }
        for t in 0..m {
            for i in 0..m {
                if leq[i][t] {
                    for j in 0..m {
                        if leq[t][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(leq)
    }

    pub fn regions(&self) -> &RegionClassification {
        &self.regions
    }

    pub fn bases(&self) -> &[BasisPoint] {
        &self.bases
    }

    /// Bounded feasible sign vectors in printed order.
    pub fn bounded_feasible(&self) -> &[SignVector] {
        &self.p
    }

    pub fn index_of(&self, a: &SignVector) -> Option<usize> {
        self.p_index.get(a).copied()
    }

    pub fn is_feasible(&self, a: &SignVector) -> bool {
        self.regions.feasible.contains(a)
    }

    pub fn is_bounded(&self, a: &SignVector) -> bool {
        self.regions.bounded.contains(a)
    }

    pub fn in_p(&self, a: &SignVector) -> bool {
        self.p_index.contains_key(a)
    }

    /// `𝕩_α`, the basis with `μ(𝕩_α) = α`.
    pub fn x_of(&self, a: &SignVector) -> Result<Subset, ArrangementError> {
        self.index_of(a).map(|i| self.x_of[i]).ok_or_else(|| ArrangementError::NotBoundedFeasible(a.to_string()))
    }

    pub fn basis(&self, x: Subset) -> Result<&BasisPoint, ArrangementError> {
        self.bases.iter().find(|b| b.subset == x).ok_or_else(|| ArrangementError::NotABasis(format_subset(x)))
    }

    pub fn mu(&self, x: Subset) -> Result<SignVector, ArrangementError> {
        self.basis(x).map(|b| b.mu)
    }

    /// `α ≤ β` in the partial order on `𝒫`.
    pub fn leq(&self, a: &SignVector, b: &SignVector) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.leq[i][j],
            _ => false,
        }
    }

    pub fn lt(&self, a: &SignVector, b: &SignVector) -> bool {
        a != b && self.leq(a, b)
    }

    /// Comparability matrix indexed like [`Self::bounded_feasible`].
    pub fn order_matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    /// Covering relations `(a, b)` with `a < b`, as bases.
    pub fn hasse_edges(&self) -> Vec<(Subset, Subset)> {
        let m = self.p.len();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j && self.leq[i][j] && !(0..m).any(|t| t != i && t != j && self.leq[i][t] && self.leq[t][j]) {
                    out.push((self.x_of[i], self.x_of[j]));
                }
            }
        }
        out.sort();
        out
    }

    /// `(ℬ_𝕩, ℱ_𝕩)` as full sets of sign vectors.
    pub fn cones(&self, x: Subset) -> Result<(Vec<SignVector>, Vec<SignVector>), ArrangementError> {
        let mu = self.mu(x)?;
        let all = SignVector::all(self.n);
        let full = (1u32 << self.n) - 1;
        let bc = all.iter().filter(|a| a.agrees_on(&mu, x)).copied().collect();
        let fc = all.iter().filter(|a| a.agrees_on(&mu, full & !x)).copied().collect();
        Ok((bc, fc))
    }

    pub fn in_bounded_cone(&self, x: Subset, a: &SignVector) -> bool {
        self.mu(x).is_ok_and(|mu| a.agrees_on(&mu, x))
    }

    pub fn in_feasible_cone(&self, x: Subset, a: &SignVector) -> bool {
        let full = (1u32 << self.n) - 1;
        self.mu(x).is_ok_and(|mu| a.agrees_on(&mu, full & !x))
    }

    /// `Δ_α ∩ H_Z ≠ ∅` where `α` matters only off `Z`.
    ///
    /// Every nonempty region of a flat is pointed, so it contains a vertex
    /// `H_𝕩` with `𝕩 ⊇ Z`; the test reads vertex signs.
    pub fn meets(&self, a: &SignVector, zero: Subset) -> bool {
        if zero.count_ones() as usize > self.k {
            return false;
        }
        self.bases.iter().any(|b| {
            b.subset & zero == zero
                && (0..self.n).all(|i| zero >> i & 1 == 1 || b.vertex[i].is_zero() || rational::sign(&b.vertex[i]) == a.get(i))
        })
    }

    /// LP version of [`Self::meets`].
    pub fn meets_lp(&self, a: &SignVector, zero: Subset) -> bool {
        fm_feasible(&self.chamber_system(a, zero)).expect("well-formed system")
    }

    /// `H_𝕩 ∩ Δ_α ≠ ∅`.
    pub fn vertex_in_chamber(&self, x: Subset, a: &SignVector) -> bool {
        self.meets(a, x)
    }

    /// The Gale dual `(V^⊥, −ξ, −η)`.
    pub fn gale_dual(&self) -> Result<Self, ArrangementError> {
        let bt = rational::transpose(&self.basis);
        let perp = if self.k == 0 {
            (0..self.n).map(|j| (0..self.n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
        } else {
            rational::nullspace(&bt, self.n)
        };
        let neg = |v: &[Rational]| v.iter().map(|x| -x.clone()).collect::<Vec<_>>();
        Self::new(self.n, self.n - self.k, perp, neg(&self.xi), neg(&self.eta))
    }

    /// Same `V` and `ξ` with a different `η`.
    pub fn with_eta(&self, eta: Vec<Rational>) -> Result<Self, ArrangementError> {
        Self::new(self.n, self.k, self.basis_columns(), eta, self.xi.clone())
    }

    /// Serializes to the JSON file format.
    pub fn to_json(&self) -> Value {
        let f = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "k": self.k,
            "V_basis": self.basis_columns().iter().map(|c| f(c)).collect::<Vec<_>>(),
            "eta": f(&self.eta),
            "xi": f(&self.xi),
        })
    }

    /// Parses the JSON file format; entries may be strings `"p/q"` or integers.
    pub fn from_json_str(text: &str) -> Result<Self, ArrangementError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ArrangementError::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self, ArrangementError> {
        let perr = |m: &str| ArrangementError::Parse(m.to_string());
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| perr("missing integer field n"))? as usize;
        let k = v.get("k").and_then(Value::as_u64).ok_or_else(|| perr("missing integer field k"))? as usize;
        let entry = |x: &Value| -> Result<Rational, ArrangementError> {
            match x {
                Value::String(s) => parse_rational(s).map_err(|e| ArrangementError::Parse(e.to_string())),
                Value::Number(num) => match num.as_i64() {
                    Some(i) => Ok(rational::rat(i)),
                    None => Err(perr(&format!("non-integer number {num}; write rationals as strings"))),
                },
                _ => Err(perr(&format!("expected a rational, found {x}"))),
            }
        };
        let vector = |x: Option<&Value>, name: &str| -> Result<Vec<Rational>, ArrangementError> {
            x.and_then(Value::as_array).ok_or_else(|| perr(&format!("missing array field {name}")))?.iter().map(entry).collect()
        };
        let cols = v
            .get("V_basis")
            .and_then(Value::as_array)
            .ok_or_else(|| perr("missing array field V_basis"))?
            .iter()
            .map(|c| vector(Some(c), "V_basis column"))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, k, cols, vector(v.get("eta"), "eta")?, vector(v.get("xi"), "xi")?)
    }
}
