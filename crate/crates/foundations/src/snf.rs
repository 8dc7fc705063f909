//! Integer Smith normal form, dense with transforms and sparse for ranks/torsion.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Result of [`smith_normal_form`]: `u · m · v = diag(diag)` padded with zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    /// Diagonal entries, length `min(rows, cols)`, nonnegative, each dividing the next nonzero one.
    pub diag: Vec<BigInt>,
    /// Unimodular `rows × rows` left transform.
    pub u: Vec<Vec<BigInt>>,
    /// Unimodular `cols × cols` right transform.
    pub v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Smith normal form of an `i64` matrix given as rows.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Snf {
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    smith_normal_form_big(&big, m.first().map_or(0, |r| r.len()))
}

/// Smith normal form of a `BigInt` matrix with `cols` columns.
pub fn smith_normal_form_big(m: &[Vec<BigInt>], cols: usize) -> Snf {
    let rows = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let r = rows.min(cols);
    for t in 0..r {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut changed = false;
            // clear column t
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    u.swap(t, i);
                    changed = true;
                }
            }
            // clear row t
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, t, j);
                    swap_cols(&mut v, t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let one = -BigInt::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let diag = (0..r).map(|i| a[i][i].clone()).collect();
    Snf { diag, u, v }
}

/// `rows[i] -= q * rows[t]`.
fn row_axpy(a: &mut [Vec<BigInt>], i: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = a[t].clone();
    for (x, y) in a[i].iter_mut().zip(&src) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// `col j -= q * col t`.
fn col_axpy(a: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[t].is_zero() {
            let d = q * &row[t];
            row[j] -= d;
        }
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// Sparse integer matrix used for homology ranks and torsion.
#[derive(Debug, Clone, Default)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        if v == 0 {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert(0);
        *e = e.checked_add(v).expect("matrix entry overflow");
        if *e == 0 {
            self.entries.remove(&(r, c));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries.get(&(r, c)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0i64; self.cols]; self.rows];
        for (&(r, c), &v) in &self.entries {
            d[r][c] = v;
        }
        d
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_row: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
        for (&(r, c), &v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = SparseIntMatrix::new(self.rows, other.cols);
        for (&(r, k), &a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    out.add(r, c, a.checked_mul(b).expect("matrix entry overflow"));
                }
            }
        }
        out
    }

    /// Nonzero invariant factors in increasing divisibility order.
    ///
    /// Eliminates on unit pivots sparsely, then finishes the remaining block
    /// with the dense big-integer algorithm. Overflow restarts densely.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        match self.unit_elimination() {
            Some((units, rest, cols)) => {
                let mut out = vec![BigInt::one(); units];
                if !rest.is_empty() {
                    out.extend(dense_factors(&rest, cols));
                }
                out
            }
            None => {
                let big: Vec<Vec<BigInt>> =
                    self.to_dense().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
                dense_factors(&big, self.cols)
            }
        }
    }

    /// Rank over ℚ.
    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors().into_iter().filter(|d| !d.is_one()).collect()
    }

    /// Markowitz-ordered elimination on ±1 pivots. Returns the count of unit
    /// pivots and the leftover block as dense rows, or `None` on overflow.
    fn unit_elimination(&self) -> Option<(usize, Vec<Vec<BigInt>>, usize)> {
        let mut rows: BTreeMap<usize, BTreeMap<usize, i64>> = BTreeMap::new();
        let mut col_rows: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (&(r, c), &v) in &self.entries {
            rows.entry(r).or_default().insert(c, v);
            col_rows.entry(c).or_default().insert(r);
        }
        let mut units = 0usize;
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (&r, row) in &rows {
                for (&c, &v) in row {
                    if v.abs() != 1 {
                        continue;
                    }
                    let cost = (row.len() - 1) * (col_rows[&c].len() - 1);
                    if best.map_or(true, |(b, _, _)| cost < b) {
                        best = Some((cost, r, c));
                        if cost == 0 {
                            break;
                        }
                    }
                }
                if best.map_or(false, |(b, _, _)| b == 0) {
                    break;
                }
            }
            let Some((_, pr, pc)) = best else { break };
            let prow = rows.remove(&pr).expect("pivot row");
            let pv = prow[&pc];
            for &c in prow.keys() {
                col_rows.get_mut(&c).expect("column").remove(&pr);
            }
            let others: Vec<usize> = col_rows[&pc].iter().copied().collect();
            for r in others {
                let row = rows.get_mut(&r).expect("row");
                let f = row[&pc] * pv; // pv = ±1 so row -= f * prow clears the pivot column
                for (&c, &x) in &prow {
                    let cur = row.get(&c).copied().unwrap_or(0);
                    let nv = cur.checked_sub(f.checked_mul(x)?)?;
                    if nv == 0 {
                        row.remove(&c);
                        col_rows.get_mut(&c).expect("column").remove(&r);
                    } else {
                        if cur == 0 {
                            col_rows.entry(c).or_default().insert(r);
                        }
                        row.insert(c, nv);
                    }
                }
                if row.is_empty() {
                    rows.remove(&r);
                }
            }
            col_rows.remove(&pc);
            units += 1;
        }
        let live_cols: Vec<usize> = col_rows.iter().filter(|(_, s)| !s.is_empty()).map(|(&c, _)| c).collect();
        let index: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let rest: Vec<Vec<BigInt>> = rows
            .values()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut d = vec![BigInt::zero(); live_cols.len()];
                for (c, &v) in r {
                    d[index[c]] = BigInt::from(v);
                }
                d
            })
            .collect();
        Some((units, rest, live_cols.len()))
    }
}

fn dense_factors(m: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    smith_normal_form_big(m, cols).diag.into_iter().filter(|d| !d.is_zero()).collect()
}

/// Ranks and torsion of the homology of a chain complex `C_0 ← C_1 ← …`.
///
/// `dims[h] = rank C_h`, `diffs[h]` is `d_{h+1}: C_{h+1} → C_h` as a
/// `dims[h] × dims[h+1]` matrix. Returns `(betti, torsion)` per level.
pub fn homology(dims: &[usize], diffs: &[SparseIntMatrix]) -> Vec<(usize, Vec<BigInt>)> {
    let facts: Vec<Vec<BigInt>> = diffs.iter().map(|d| d.invariant_factors()).collect();
    (0..dims.len())
        .map(|h| {
            let out_rank = if h == 0 { 0 } else { facts.get(h - 1).map_or(0, |f| f.len()) };
            let (in_rank, tors) = match facts.get(h) {
                Some(f) => (f.len(), f.iter().filter(|d| !d.is_one()).cloned().collect()),
                None => (0, Vec::new()),
            };
            (dims[h] - out_rank - in_rank, tors)
        })
        .collect()
}

/// Small helper: a `BigInt` that fits in `i64`.
pub fn to_i64(b: &BigInt) -> Option<i64> {
    b.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &[Vec<i64>]) -> Vec<BigInt> {
        let s = smith_normal_form(m);
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let um: Vec<Vec<BigInt>> =
            (0..rows).map(|i| (0..cols).map(|j| (0..rows).map(|k| &s.u[i][k] * &big[k][j]).sum()).collect()).collect();
        let umv: Vec<Vec<BigInt>> =
            (0..rows).map(|i| (0..cols).map(|j| (0..cols).map(|k| &um[i][k] * &s.v[k][j]).sum()).collect()).collect();
        for i in 0..rows {
            for j in 0..cols {
                let want = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(umv[i][j], want);
            }
        }
        s.diag
    }

    #[test]
    fn spec_examples() {
        assert_eq!(check(&[vec![2, 0], vec![0, 3]]), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(check(&[vec![0, 0], vec![0, 0]]), vec![BigInt::zero(), BigInt::zero()]);
        assert_eq!(check(&[vec![1, 1], vec![1, 1]]), vec![BigInt::one(), BigInt::zero()]);
    }

    #[test]
    fn sparse_matches_dense() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let mut s = SparseIntMatrix::new(3, 3);
        for (i, r) in m.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                s.add(i, j, v);
            }
        }
        let dense: Vec<BigInt> = check(&m).into_iter().filter(|d| !d.is_zero()).collect();
        assert_eq!(s.invariant_factors(), dense);
        assert_eq!(dense, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn homology_of_circle_and_rp2() {
        // RP^2 cellular: C2 -2-> C1 -0-> C0
        let mut d1 = SparseIntMatrix::new(1, 1);
        d1.add(0, 0, 0);
        let mut d2 = SparseIntMatrix::new(1, 1);
        d2.add(0, 0, 2);
        let h = homology(&[1, 1, 1], &[d1, d2]);
        assert_eq!(h[0], (1, vec![]));
        assert_eq!(h[1], (0, vec![BigInt::from(2)]));
        assert_eq!(h[2], (0, vec![]));
    }
}
