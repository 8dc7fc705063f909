//! The deformed convolution algebra `B̃(𝒱)` in its Stanley–Reisner model.
//!
//! `B̃ = ⊕ R̃_{αβ} f_{α,β}` over `α, β ∈ 𝒫`, where `R̃_{αβ}` is the polynomial
//! ring in `u_1..u_n` modulo the squarefree monomials `u_S` with
//! `Δ_α ∩ Δ_β ∩ H_S = ∅`, and `f_{α,β}·f_{β,γ} = u_{S(αβγ)} f_{α,γ}`.
//! The `A`-side algebra of `𝒱` is this construction on the Gale dual.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use foundations::{stanley_reisner_hilbert, HilbertSeries};
use rayon::prelude::*;

use crate::arrangement::{members, PolarizedArrangement, SignVector, Subset};

/// Largest number of hyperplanes the algebra engine accepts.
pub const MAX_N: usize = 12;

/// Exponent vector of a monomial in `u_1..u_n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub [u8; MAX_N]);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::default();
        m.0[i] = 1;
        m
    }

    /// `u_S`.
    pub fn squarefree(s: Subset) -> Self {
        let mut m = Self::default();
        for i in members(s) {
            m.0[i] = 1;
        }
        m
    }

    pub fn support(&self) -> Subset {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).fold(0, |s, (i, _)| s | 1 << i)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0) {
            *a = a.checked_add(b).expect("monomial exponent overflow");
        }
        m
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0) {
            *a = a.checked_sub(b)?;
        }
        Some(m)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0).all(|(a, b)| *a <= b)
    }

    /// Text form `u1^2u3`, or `1`.
    pub fn format(&self) -> String {
        let s: String = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("u{}", i + 1) } else { format!("u{}^{}", i + 1, e) })
            .collect();
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// All monomials of total degree `deg` in the variables of `vars`, in a
/// fixed order.
pub fn monomials_of_degree(vars: Subset, deg: u32) -> Vec<Monomial> {
    let v: Vec<usize> = members(vars).collect();
    let mut out = Vec::new();
    fn rec(v: &[usize], left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        match v.split_first() {
            None => {
                if left == 0 {
                    out.push(*cur);
                }
            }
            Some((&i, rest)) => {
                for e in (0..=left).rev() {
                    cur.0[i] = e as u8;
                    rec(rest, left - e, cur, out);
                }
                cur.0[i] = 0;
            }
        }
    }
    rec(&v, deg, &mut Monomial::one(), &mut out);
    out
}

/// Coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    F2,
}

impl Coefficients {
    pub fn reduce(&self, c: i64) -> i64 {
        match self {
            Self::Integers => c,
            Self::F2 => c.rem_euclid(2),
        }
    }
}

/// The space `R̃_{αβ} f_{α,β}`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: SignVector,
    pub target: SignVector,
    /// minimal squarefree nonfaces
    pub minimal_nonfaces: Vec<Subset>,
    /// `d_{α,β}`
    pub generator_degree: u32,
    /// `faces[S]` for every subset `S ⊆ {0..n-1}`
    faces: Vec<bool>,
}

impl HomSpace {
    pub fn is_face(&self, s: Subset) -> bool {
        self.faces[s as usize]
    }

    pub fn is_zero(&self) -> bool {
        !self.faces[0]
    }

    /// Whether `u^m f_{α,β}` is nonzero.
    pub fn contains(&self, m: &Monomial) -> bool {
        self.is_face(m.support())
    }

    /// Maximal faces.
    pub fn facets(&self) -> Vec<Subset> {
        let n = self.source.len();
        (0..1u32 << n).filter(|&s| self.is_face(s) && (0..n).all(|i| s >> i & 1 == 1 || !self.is_face(s | 1 << i))).collect()
    }

    /// Basis monomials of `q`-degree `deg`.
    pub fn basis_in_degree(&self, deg: i64) -> Vec<Monomial> {
        let rest = deg - self.generator_degree as i64;
        if rest < 0 || rest % 2 != 0 || self.is_zero() {
            return Vec::new();
        }
        let n = self.source.len();
        monomials_of_degree((1 << n) - 1, (rest / 2) as u32).into_iter().filter(|m| self.contains(m)).collect()
    }
}

/// Element of `B̃(𝒱)`: a finite sum of `c · u^m · f[α→β]`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    pub terms: BTreeMap<(SignVector, SignVector, Monomial), i64>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: &SignVector, b: &SignVector, m: &Monomial) -> i64 {
        self.terms.get(&(*a, *b, *m)).copied().unwrap_or(0)
    }

    /// Adds `c·u^m f[a→b]` without any normal-form check.
    fn push(&mut self, a: SignVector, b: SignVector, m: Monomial, c: i64, coeffs: Coefficients) {
        let e = self.terms.entry((a, b, m)).or_insert(0);
        *e = coeffs.reduce(*e + c);
        if *e == 0 {
            self.terms.remove(&(a, b, m));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SignVector, &SignVector, &Monomial, i64)> {
        self.terms.iter().map(|((a, b, m), c)| (a, b, m, *c))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((a, b, m), c)| format!("{c} * {} * f[{a}->{b}]", m.format())).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `B̃(𝒱)` with every hom space precomputed.
pub struct BTilde<'a> {
    arr: &'a PolarizedArrangement,
    coeffs: Coefficients,
    homs: HashMap<(SignVector, SignVector), HomSpace>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("{0} is not bounded feasible")]
    NotInP(SignVector),
    #[error("arrangement too large for the algebra engine (n = {0})")]
    TooLarge(usize),
}

/// `S(αβγ) = {i : α(i) = γ(i) ≠ β(i)}`.
pub fn s_abg(a: &SignVector, b: &SignVector, c: &SignVector) -> Subset {
    !a.diff(c) & a.diff(b) & ((1u32 << a.len()) - 1)
}

impl<'a> BTilde<'a> {
    pub fn new(arr: &'a PolarizedArrangement, coeffs: Coefficients) -> Result<Self, AlgebraError> {
        if arr.n() > MAX_N {
            return Err(AlgebraError::TooLarge(arr.n()));
        }
        let p = arr.bounded_feasible();
        let pairs: Vec<(SignVector, SignVector)> = p.iter().flat_map(|a| p.iter().map(move |b| (*a, *b))).collect();
        let homs = pairs.par_iter().map(|&(a, b)| ((a, b), Self::compute_hom(arr, a, b))).collect();
        Ok(Self { arr, coeffs, homs })
    }

    fn compute_hom(arr: &PolarizedArrangement, a: SignVector, b: SignVector) -> HomSpace {
        let n = arr.n();
        let d = a.diff(&b);
        let faces: Vec<bool> = (0..1u32 << n).map(|s| arr.meets(&a, s | d)).collect();
        let minimal_nonfaces =
            (0..1u32 << n).filter(|&s| !faces[s as usize] && members(s).all(|i| faces[(s & !(1 << i)) as usize])).collect();
        HomSpace { source: a, target: b, minimal_nonfaces, generator_degree: d.count_ones(), faces }
    }

    pub fn arrangement(&self) -> &PolarizedArrangement {
        self.arr
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coeffs
    }

    pub fn n(&self) -> usize {
        self.arr.n()
    }

    /// Idempotent labels, in printed order.
    pub fn labels(&self) -> &[SignVector] {
        self.arr.bounded_feasible()
    }

    pub fn hom_space(&self, a: &SignVector, b: &SignVector) -> Result<&HomSpace, AlgebraError> {
        if !self.arr.in_p(a) {
            return Err(AlgebraError::NotInP(*a));
        }
        self.homs.get(&(*a, *b)).ok_or(AlgebraError::NotInP(*b))
    }

    fn hom(&self, a: &SignVector, b: &SignVector) -> Option<&HomSpace> {
        self.homs.get(&(*a, *b))
    }

    /// `c · u^m · f_{a,b}` reduced to normal form (zero when `u^m` vanishes
    /// or either label lies outside `𝒫`).
    pub fn term(&self, a: SignVector, b: SignVector, m: Monomial, c: i64) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        if let Some(h) = self.hom(&a, &b) {
            if h.contains(&m) {
                out.push(a, b, m, c, self.coeffs);
            }
        }
        out
    }

    pub fn f(&self, a: SignVector, b: SignVector) -> AlgebraElement {
        self.term(a, b, Monomial::one(), 1)
    }

    pub fn idempotent(&self, a: SignVector) -> AlgebraElement {
        self.f(a, a)
    }

    /// `u_i e_a`.
    pub fn u(&self, i: usize, a: SignVector) -> AlgebraElement {
        self.term(a, a, Monomial::var(i), 1)
    }

    /// The central element `Σ_α u^m e_α`.
    pub fn central(&self, m: Monomial) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for a in self.labels() {
            out = self.add(&out, &self.term(*a, *a, m, 1));
        }
        out
    }

    pub fn one(&self) -> AlgebraElement {
        self.central(Monomial::one())
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = x.clone();
        for (a, b, m, c) in y.iter() {
            out.push(*a, *b, *m, c, self.coeffs);
        }
        out
    }

    pub fn scale(&self, x: &AlgebraElement, c: i64) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, b, m, d) in x.iter() {
            out.push(*a, *b, *m, c * d, self.coeffs);
        }
        out
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.add(x, &self.scale(y, -1))
    }

    /// Multiplies every term by `u^m`.
    pub fn mul_monomial(&self, x: &AlgebraElement, m: &Monomial) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, b, mm, c) in x.iter() {
            let t = mm.mul(m);
            if self.hom(a, b).is_some_and(|h| h.contains(&t)) {
                out.push(*a, *b, t, c, self.coeffs);
            }
        }
        out
    }

    /// Product in `B̃(𝒱)`; non-composable pairs give zero.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        let mut by_source: HashMap<SignVector, Vec<(SignVector, Monomial, i64)>> = HashMap::new();
        for (b, c, m, k) in y.iter() {
            by_source.entry(*b).or_default().push((*c, *m, k));
        }
        for (a, b, m1, c1) in x.iter() {
            let Some(right) = by_source.get(b) else { continue };
            for (c, m2, c2) in right {
                let m = m1.mul(m2).mul(&Monomial::squarefree(s_abg(a, b, c)));
                if self.hom(a, c).is_some_and(|h| h.contains(&m)) {
                    out.push(*a, *c, m, c1 * c2, self.coeffs);
                }
            }
        }
        out
    }

    /// The anti-involution fixing idempotents and swapping `f_{α,β} ↔ f_{β,α}`.
    pub fn psi(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, b, m, c) in x.iter() {
            out.push(*b, *a, *m, c, self.coeffs);
        }
        out
    }

    /// Internal degree of each term.
    pub fn degree_of(&self, a: &SignVector, b: &SignVector, m: &Monomial) -> i64 {
        a.diff(b).count_ones() as i64 + 2 * m.total_degree() as i64
    }

    /// True when every term has degree `deg`.
    pub fn is_homogeneous(&self, x: &AlgebraElement, deg: i64) -> bool {
        x.iter().all(|(a, b, m, _)| self.degree_of(a, b, m) == deg)
    }

    /// `dim_q e_α B̃ e_β`.
    pub fn graded_dim(&self, a: &SignVector, b: &SignVector) -> Result<HilbertSeries, AlgebraError> {
        let h = self.hom_space(a, b)?;
        Ok(stanley_reisner_hilbert(self.n(), &h.minimal_nonfaces, h.generator_degree as i64))
    }

    /// Product of single-step generators along a path of sign vectors.
    pub fn path(&self, route: &[SignVector]) -> AlgebraElement {
        let Some(first) = route.first() else { return AlgebraElement::zero() };
        let mut acc = self.idempotent(*first);
        for w in route.windows(2) {
            acc = self.multiply(&acc, &self.f(w[0], w[1]));
        }
        acc
    }
}

/// `θ_i` of a path: returns to the starting side of `H_i`.
pub fn theta(route: &[SignVector], i: usize) -> u32 {
    let l = route.len();
    (1..l.saturating_sub(1)).filter(|&j| route[j].get(i) != route[j + 1].get(i) && route[j + 1].get(i) == route[0].get(i)).count()
        as u32
}

/// One relation failure found by [`verify_quiver_relations`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    pub family: &'static str,
    pub detail: String,
}

/// Counts of checked relations by family, plus failures.
#[derive(Clone, Debug, Default)]
pub struct RelationReport {
    pub b1_checked: usize,
    pub b2_checked: usize,
    pub b3_checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the quiver presentation B1–B3 against the Stanley–Reisner model.
///
/// The quiver has a vertex for every bounded sign vector; those outside `ℱ`
/// carry the zero idempotent, so every path through one must vanish.
pub fn verify_quiver_relations(alg: &BTilde) -> RelationReport {
    let arr = alg.arrangement();
    let n = arr.n();
    let full: Subset = (1 << n) - 1;
    let mut rep = RelationReport::default();
    let bounded: Vec<SignVector> = arr.regions().bounded.iter().copied().collect();
    let dead: Vec<SignVector> = bounded.iter().filter(|g| !arr.is_feasible(g)).copied().collect();
    // f-generator for a step between bounded vertices, zero through dead ones
    let step = |a: SignVector, b: SignVector| -> AlgebraElement {
        if arr.in_p(&a) && arr.in_p(&b) {
            alg.f(a, b)
        } else {
            AlgebraElement::zero()
        }
    };

    // B1: u_T f_{αβ} factoring through a dead vertex is zero
    for a in alg.labels() {
        for b in alg.labels() {
            let h = alg.hom(a, b).expect("pair in P");
            let agree = full & !a.diff(b);
            for t in 0..=full {
                for g in &dead {
                    if g.agrees_on(a, agree & !t) {
                        rep.b1_checked += 1;
                        if h.is_face(t) {
                            rep.failures.push(RelationFailure {
                                family: "B1",
                                detail: format!("u_{t:b} f[{a}->{b}] survives although it factors through {g}"),
                            });
                        }
                    }
                }
            }
        }
    }

    // B2: commuting squares among bounded vertices
    for a in &bounded {
        for i in 0..n {
            for j in i + 1..n {
                let (b, c, d) = (a.flip(i), a.flip(i).flip(j), a.flip(j));
                if !(arr.is_bounded(&b) && arr.is_bounded(&c) && arr.is_bounded(&d)) {
                    continue;
                }
                rep.b2_checked += 1;
                let lhs = alg.multiply(&step(*a, b), &step(b, c));
                let rhs = alg.multiply(&step(*a, d), &step(d, c));
                if lhs != rhs {
                    rep.failures
                        .push(RelationFailure { family: "B2", detail: format!("square {a} {b} {c} {d}: {lhs} vs {rhs}") });
                }
            }
        }
    }

    // B3: p(α,α^i,α) = u_i e_α
    for a in alg.labels() {
        for i in 0..n {
            let b = a.flip(i);
            if !arr.is_bounded(&b) {
                continue;
            }
            rep.b3_checked += 1;
            let lhs = alg.multiply(&step(*a, b), &step(b, *a));
            let rhs = alg.u(i, *a);
            if lhs != rhs {
                rep.failures.push(RelationFailure { family: "B3", detail: format!("{a} via {}: {lhs} vs {rhs}", i + 1) });
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_degree(0b111, 2).len(), 6);
        assert_eq!(monomials_of_degree(0, 0), vec![Monomial::one()]);
        assert!(monomials_of_degree(0, 1).is_empty());
        let m = Monomial::var(0).mul(&Monomial::var(2)).mul(&Monomial::var(2));
        assert_eq!(m.format(), "u1u3^2");
        assert_eq!(m.support(), 0b101);
        assert_eq!(m.div(&Monomial::var(2)).unwrap().format(), "u1u3");
        assert!(m.div(&Monomial::var(1)).is_none());
    }

    #[test]
    fn s_abg_definition() {
        let a: SignVector = "+--+".parse().unwrap();
        let b: SignVector = "+---".parse().unwrap();
        let c: SignVector = "++--".parse().unwrap();
        assert_eq!(s_abg(&a, &b, &c), 0);
        assert_eq!(s_abg(&a, &b, &a), 0b1000);
        assert_eq!(theta(&[a, b, a], 3), 1);
    }
}
