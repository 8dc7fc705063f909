//! Exact rational feasibility by Fourier–Motzkin elimination.
//!
//! Equalities are substituted away first; the remaining inequalities are
//! eliminated one variable at a time, with Chernikov's rule discarding any
//! combination built from more than `eliminated + 1` original rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::Rational;

/// Relation attached to a constraint row `a`: `a·x ≥ 0`, `a·x = 0` or `a·x = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Ge0,
    Eq0,
    Eq1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub row: Vec<Rational>,
    pub rel: Relation,
}

/// Constraints over `ℚ^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearSystem {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("constraint {index} has length {len}, expected {dim}")]
    DimensionMismatch { index: usize, len: usize, dim: usize },
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        Self { dim, constraints: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Rational>, rel: Relation) -> &mut Self {
        self.constraints.push(Constraint { row, rel });
        self
    }

    pub fn ge0(&mut self, row: Vec<Rational>) -> &mut Self {
        self.push(row, Relation::Ge0)
    }

    pub fn eq0(&mut self, row: Vec<Rational>) -> &mut Self {
        self.push(row, Relation::Eq0)
    }

    pub fn eq1(&mut self, row: Vec<Rational>) -> &mut Self {
        self.push(row, Relation::Eq1)
    }

    pub fn validate(&self) -> Result<(), SystemError> {
        for (index, c) in self.constraints.iter().enumerate() {
            if c.row.len() != self.dim {
                return Err(SystemError::DimensionMismatch { index, len: c.row.len(), dim: self.dim });
            }
        }
        Ok(())
    }
}

/// Decides whether the system has a rational solution.
pub fn fm_feasible(system: &LinearSystem) -> Result<bool, SystemError> {
    system.validate()?;
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for c in &system.constraints {
        let (a, b) = integer_row(&c.row, c.rel);
        match c.rel {
            Relation::Ge0 => ineqs.push((a, b)),
            Relation::Eq0 | Relation::Eq1 => eqs.push((a, b)),
        }
    }
    // i128 first; overflow reruns on big integers
    let small = |rows: &[(Vec<BigInt>, BigInt)]| -> Option<Vec<Row<i128>>> {
        rows.iter()
            .map(|(a, b)| {
                let coef = a.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>()?;
                Some(Row { coef, b: b.to_i128()? })
            })
            .collect()
    };
    if let (Some(e), Some(i)) = (small(&eqs), small(&ineqs)) {
        if let Some(r) = feasible::<i128>(system.dim, e, i) {
            return Ok(r);
        }
    }
    let big =
        |rows: Vec<(Vec<BigInt>, BigInt)>| -> Vec<Row<BigInt>> { rows.into_iter().map(|(coef, b)| Row { coef, b }).collect() };
    Ok(feasible::<BigInt>(system.dim, big(eqs), big(ineqs)).expect("big integers do not overflow"))
}

/// Clears denominators: returns `(a, b)` with the constraint `a·x + b {≥,=} 0`.
fn integer_row(row: &[Rational], rel: Relation) -> (Vec<BigInt>, BigInt) {
    let l = row.iter().fold(<BigInt as One>::one(), |acc, r| Integer::lcm(&acc, r.denom()));
    let a: Vec<BigInt> = row.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    let b = if rel == Relation::Eq1 { -l } else { <BigInt as Zero>::zero() };
    (a, b)
}

/// Integer arithmetic with overflow reported as `None`.
trait Num: Clone + Ord + std::hash::Hash + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
}

impl Num for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn abs(&self) -> Self {
        i128::abs(*self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Num for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

/// `a·x + b` with relation fixed by context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row<T> {
    coef: Vec<T>,
    b: T,
}

impl<T: Num> Row<T> {
    /// `p·self + q·other`.
    fn combine(&self, p: &T, other: &Row<T>, q: &T) -> Option<Row<T>> {
        let coef = self.coef.iter().zip(&other.coef).map(|(a, c)| p.mul(a)?.add(&q.mul(c)?)).collect::<Option<Vec<T>>>()?;
        let b = p.mul(&self.b)?.add(&q.mul(&other.b)?)?;
        Some(Row { coef, b })
    }

    /// Divides through by the gcd of all entries.
    fn normalize(&mut self) {
        let mut g = T::zero();
        for a in self.coef.iter().chain(std::iter::once(&self.b)) {
            if !a.is_zero() {
                g = g.gcd(a);
            }
        }
        if !g.is_zero() && g != T::one() {
            for a in self.coef.iter_mut() {
                *a = a.div(&g);
            }
            self.b = self.b.div(&g);
        }
    }

    fn is_constant(&self) -> bool {
        self.coef.iter().all(|a| a.is_zero())
    }
}

/// Inequality with the bitset of original inequalities it was derived from.
#[derive(Clone, Debug)]
struct Tracked<T> {
    row: Row<T>,
    origins: Vec<u64>,
}

fn union(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn popcount(a: &[u64]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

/// Feasibility of `{eqs = 0, ineqs ≥ 0}`; `None` on overflow.
fn feasible<T: Num>(dim: usize, mut eqs: Vec<Row<T>>, mut ineqs: Vec<Row<T>>) -> Option<bool> {
    // substitute equalities
    while let Some(mut e) = eqs.pop() {
        e.normalize();
        let Some(j) = (0..dim).filter(|&j| !e.coef[j].is_zero()).min_by(|&x, &y| e.coef[x].abs().cmp(&e.coef[y].abs())) else {
            if e.b.is_zero() {
                continue;
            }
            return Some(false);
        };
        let aj = e.coef[j].clone();
        let mag = aj.abs();
        let sgn = if aj.is_neg() { T::one().neg() } else { T::one() };
        for r in eqs.iter_mut().chain(ineqs.iter_mut()) {
            if r.coef[j].is_zero() {
                continue;
            }
            let q = sgn.mul(&r.coef[j])?.neg();
            *r = r.combine(&mag, &e, &q)?;
            r.normalize();
        }
    }

    let words = ineqs.len().div_ceil(64).max(1);
    let mut rows: Vec<Tracked<T>> = Vec::with_capacity(ineqs.len());
    for (i, mut r) in ineqs.into_iter().enumerate() {
        r.normalize();
        let mut origins = vec![0u64; words];
        origins[i / 64] |= 1 << (i % 64);
        rows.push(Tracked { row: r, origins });
    }
    let mut eliminated = 0u32;
    loop {
        rows = match prune(rows) {
            Some(r) => r,
            None => return Some(false),
        };
        if rows.is_empty() {
            return Some(true);
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for j in 0..dim {
            let pos = rows.iter().filter(|t| !t.row.coef[j].is_zero() && !t.row.coef[j].is_neg()).count();
            let neg = rows.iter().filter(|t| t.row.coef[j].is_neg()).count();
            if pos + neg == 0 {
                continue;
            }
            let cost = pos * neg;
            if best.map_or(true, |(c, _, _)| cost < c) {
                best = Some((cost, j, pos + neg));
            }
        }
        let (_, j, _) = best.expect("non-constant rows mention some variable");
        eliminated += 1;
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for t in rows {
            if t.row.coef[j].is_zero() {
                keep.push(t);
            } else if t.row.coef[j].is_neg() {
                neg.push(t);
            } else {
                pos.push(t);
            }
        }
        for p in &pos {
            for n in &neg {
                let origins = union(&p.origins, &n.origins);
                if popcount(&origins) > eliminated + 1 {
                    continue;
                }
                let cp = p.row.coef[j].clone();
                let cn = n.row.coef[j].abs();
                let mut row = p.row.combine(&cn, &n.row, &cp)?;
                row.normalize();
                keep.push(Tracked { row, origins });
            }
        }
        rows = keep;
    }
}

/// Drops satisfied constant rows and exact duplicates (keeping the shortest
/// history); `None` if a constant row is violated.
///
/// Rows that differ only in the constant are all kept: discarding the looser
/// one would lose combinations that the history bound still permits.
fn prune<T: Num>(rows: Vec<Tracked<T>>) -> Option<Vec<Tracked<T>>> {
    let mut best: std::collections::HashMap<Row<T>, Tracked<T>> = std::collections::HashMap::new();
    for t in rows {
        if t.row.is_constant() {
            if t.row.b.is_neg() {
                return None;
            }
            continue;
        }
        match best.get(&t.row) {
            Some(old) if popcount(&old.origins) <= popcount(&t.origins) => {}
            _ => {
                best.insert(t.row.clone(), t);
            }
        }
    }
    let mut out: Vec<Tracked<T>> = best.into_values().collect();
    out.sort_by(|a, b| (&a.row.coef, &a.row.b).cmp(&(&b.row.coef, &b.row.b)));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, solve};
    use proptest::prelude::*;

    fn sys(dim: usize, rows: &[(&[i64], Relation)]) -> LinearSystem {
        let mut s = LinearSystem::new(dim);
        for (r, rel) in rows {
            s.push(r.iter().map(|&x| rat(x)).collect(), *rel);
        }
        s
    }

    #[test]
    fn trivial_examples() {
        use Relation::*;
        assert!(!fm_feasible(&sys(1, &[(&[1], Ge0), (&[-1], Ge0), (&[1], Eq1)])).unwrap());
        assert!(fm_feasible(&sys(1, &[(&[1], Ge0)])).unwrap());
        assert!(fm_feasible(&sys(0, &[])).unwrap());
        let bad = LinearSystem { dim: 2, constraints: vec![Constraint { row: vec![rat(1)], rel: Ge0 }] };
        assert!(matches!(fm_feasible(&bad), Err(SystemError::DimensionMismatch { .. })));
    }

    #[test]
    fn strict_box_and_slab() {
        use Relation::*;
        // x ≥ 1, y ≥ 1, x + y ≤ 1 with homogenizing z = 1
        let s = sys(3, &[(&[1, 0, -1], Ge0), (&[0, 1, -1], Ge0), (&[-1, -1, 1], Ge0), (&[0, 0, 1], Eq1)]);
        assert!(!fm_feasible(&s).unwrap());
        let s = sys(3, &[(&[1, 0, -1], Ge0), (&[0, 1, -1], Ge0), (&[-1, -1, 2], Ge0), (&[0, 0, 1], Eq1)]);
        assert!(fm_feasible(&s).unwrap());
    }

    /// Vertex oracle: a nonempty polyhedron contains a point of some minimal
    /// face, cut out by at most `d` tight rows together with the equalities.
    fn oracle(s: &LinearSystem) -> bool {
        let eq: Vec<usize> = (0..s.constraints.len()).filter(|&i| s.constraints[i].rel != Relation::Ge0).collect();
        let ge: Vec<usize> = (0..s.constraints.len()).filter(|&i| s.constraints[i].rel == Relation::Ge0).collect();
        let rhs = |i: usize| if s.constraints[i].rel == Relation::Eq1 { rat(1) } else { rat(0) };
        for mask in 0u32..(1 << ge.len()) {
            if mask.count_ones() as usize > s.dim {
                continue;
            }
            let tight: Vec<usize> =
                eq.iter().copied().chain(ge.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i)).collect();
            let a: Vec<Vec<Rational>> = tight.iter().map(|&i| s.constraints[i].row.clone()).collect();
            let b: Vec<Rational> = tight.iter().map(|&i| rhs(i)).collect();
            let x = if a.is_empty() { Some(vec![rat(0); s.dim]) } else { solve(&a, &b) };
            let Some(x) = x else { continue };
            let ok = s.constraints.iter().all(|c| {
                let v = crate::rational::dot(&c.row, &x);
                match c.rel {
                    Relation::Ge0 => v >= rat(0),
                    Relation::Eq0 => v == rat(0),
                    Relation::Eq1 => v == rat(1),
                }
            });
            if ok {
                return true;
            }
        }
        false
    }

    fn arb_system() -> impl Strategy<Value = LinearSystem> {
        (1usize..=3).prop_flat_map(|d| {
            let row = (prop::collection::vec(-3i64..=3, d), 0u8..6);
            prop::collection::vec(row, 0..=8).prop_map(move |rows| {
                let mut s = LinearSystem::new(d);
                for (r, tag) in rows {
                    let rel = match tag {
                        0 => Relation::Eq0,
                        1 => Relation::Eq1,
                        _ => Relation::Ge0,
                    };
                    s.push(r.into_iter().map(rat).collect(), rel);
                }
                s
            })
        })
    }

    /// Affine inequalities `a·y + c ≥ 0` homogenized by a last coordinate pinned to 1.
    fn arb_affine() -> impl Strategy<Value = LinearSystem> {
        (1usize..=3).prop_flat_map(|d| {
            let row = prop::collection::vec(-5i64..=5, d + 1);
            prop::collection::vec(row, 1..=8).prop_map(move |rows| {
                let mut s = LinearSystem::new(d + 1);
                for r in rows {
                    s.ge0(r.into_iter().map(rat).collect());
                }
                let mut t = vec![rat(0); d + 1];
                t[d] = rat(1);
                s.eq1(t);
                s
            })
        })
    }

    #[test]
    fn parallel_rows_with_different_constants() {
        // x_i = y1 + i·y2 + i² with sign pattern (−,+,+,−) is empty
        let s = sys(
            3,
            &[
                (&[-1, -1, -1], Relation::Ge0),
                (&[1, 2, 4], Relation::Ge0),
                (&[1, 3, 9], Relation::Ge0),
                (&[-1, -4, -16], Relation::Ge0),
                (&[0, 0, 1], Relation::Eq1),
            ],
        );
        assert!(!fm_feasible(&s).unwrap());
        assert!(!oracle(&s));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn agrees_with_vertex_oracle(s in arb_system()) {
            prop_assert_eq!(fm_feasible(&s).unwrap(), oracle(&s));
        }

        #[test]
        fn affine_agrees_with_vertex_oracle(s in arb_affine()) {
            prop_assert_eq!(fm_feasible(&s).unwrap(), oracle(&s));
        }
    }
}
