//! Hilbert series of the form `N(q) / (1 - q^2)^m`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::laurent::LaurentPoly;

/// A rational function `num / (1 - q^2)^m`, kept in canonical form: the
/// numerator is not divisible by `1 - q^2` unless `m = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HilbertSeries {
    num: LaurentPoly,
    m: u32,
}

impl HilbertSeries {
    /// Builds and cancels `(1 - q^2)` factors greedily.
    pub fn new(num: LaurentPoly, m: u32) -> Self {
        let mut s = Self { num, m };
        s.canonicalize();
        s
    }

    pub fn zero() -> Self {
        Self::new(LaurentPoly::zero(), 0)
    }

    pub fn one() -> Self {
        Self::new(LaurentPoly::one(), 0)
    }

    /// `1 / (1 - q^2)^m`, the series of a polynomial ring on `m` degree-2 generators.
    pub fn free(m: u32) -> Self {
        Self::new(LaurentPoly::one(), m)
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn pole_order(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.m = 0;
            return;
        }
        while self.m > 0 {
            match self.num.div_one_minus_q2() {
                Some(r) => {
                    self.num = r;
                    self.m -= 1;
                }
                None => break,
            }
        }
    }

    /// Numerator rewritten over `(1 - q^2)^m` for `m ≥ pole_order`.
    pub fn numerator_over(&self, m: u32) -> LaurentPoly {
        assert!(m >= self.m, "cannot lower the pole order");
        &self.num * &LaurentPoly::one_minus_q2_pow(m - self.m)
    }

    /// Multiplies by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self { num: self.num.shift(s), m: self.m }
    }

    /// Leading coefficient at the pole of order `m`: the rank over a
    /// polynomial ring on `m` degree-2 generators. Zero if the pole is lower.
    pub fn rank_over(&self, m: u32) -> i64 {
        if self.m < m {
            0
        } else if self.m == m {
            self.num.eval_one()
        } else {
            panic!("pole order {} exceeds {}", self.m, m)
        }
    }

    /// Power-series coefficients for degrees `lo..=hi`.
    pub fn coefficients(&self, lo: i64, hi: i64) -> Vec<i64> {
        let mut out = vec![0i64; (hi - lo + 1).max(0) as usize];
        let m = self.m as i64;
        for (e, c) in self.num.terms() {
            // 1/(1-q^2)^m = Σ_j C(m-1+j, j) q^{2j}
            let mut j = 0i64;
            loop {
                let d = e + 2 * j;
                if d > hi {
                    break;
                }
                let binom = if m == 0 {
                    if j == 0 {
                        1
                    } else {
                        0
                    }
                } else {
                    binomial(m - 1 + j, j)
                };
                if d >= lo {
                    out[(d - lo) as usize] += c * binom;
                }
                if m == 0 {
                    break;
                }
                j += 1;
            }
        }
        out
    }

    /// Coefficient of `q^d` in the power-series expansion.
    pub fn coefficient(&self, d: i64) -> i64 {
        self.coefficients(d, d)[0]
    }

    /// The bar involution on the numerator only; meaningful when `m = 0`.
    pub fn bar_polynomial(&self) -> Option<LaurentPoly> {
        (self.m == 0).then(|| self.num.bar())
    }

    /// The numerator when `m = 0`.
    pub fn as_polynomial(&self) -> Option<&LaurentPoly> {
        (self.m == 0).then_some(&self.num)
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    i64::try_from(r).expect("binomial overflow")
}

impl From<LaurentPoly> for HilbertSeries {
    fn from(p: LaurentPoly) -> Self {
        Self::new(p, 0)
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / (1-q^2)^{}", self.num, self.m)
    }
}

impl fmt::Debug for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &HilbertSeries {
    type Output = HilbertSeries;
    fn add(self, rhs: &HilbertSeries) -> HilbertSeries {
        let m = self.m.max(rhs.m);
        HilbertSeries::new(&self.numerator_over(m) + &rhs.numerator_over(m), m)
    }
}

impl Add for HilbertSeries {
    type Output = HilbertSeries;
    fn add(self, rhs: HilbertSeries) -> HilbertSeries {
        &self + &rhs
    }
}

impl Neg for &HilbertSeries {
    type Output = HilbertSeries;
    fn neg(self) -> HilbertSeries {
        HilbertSeries { num: -&self.num, m: self.m }
    }
}

impl Sub for &HilbertSeries {
    type Output = HilbertSeries;
    fn sub(self, rhs: &HilbertSeries) -> HilbertSeries {
        self + &(-rhs)
    }
}

impl Mul for &HilbertSeries {
    type Output = HilbertSeries;
    fn mul(self, rhs: &HilbertSeries) -> HilbertSeries {
        HilbertSeries::new(&self.num * &rhs.num, self.m + rhs.m)
    }
}

impl Mul<&LaurentPoly> for &HilbertSeries {
    type Output = HilbertSeries;
    fn mul(self, rhs: &LaurentPoly) -> HilbertSeries {
        HilbertSeries::new(&self.num * rhs, self.m)
    }
}

impl std::iter::Sum for HilbertSeries {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(HilbertSeries::zero(), |a, b| &a + &b)
    }
}

/// Hilbert series of `ℤ[u_1..u_n] / (u_S : S nonface)` with `deg u_i = 2`,
/// shifted by `q^gen_degree`.
///
/// Nonfaces are bitmasks (bit `i-1` for `u_i`). The series is
/// `q^gen · Σ_F (q^2/(1-q^2))^{|F|}` over faces `F` (subsets containing no nonface).
pub fn stanley_reisner_hilbert(n: usize, nonfaces: &[u32], gen_degree: i64) -> HilbertSeries {
    assert!(n <= 24, "too many variables for face enumeration");
    let mut by_size = vec![0i64; n + 1];
    for f in 0u32..(1u32 << n) {
        if nonfaces.iter().all(|&s| s & f != s) {
            by_size[f.count_ones() as usize] += 1;
        }
    }
    let m = by_size.iter().rposition(|&c| c != 0).unwrap_or(0) as u32;
    let mut num = LaurentPoly::zero();
    for (size, &count) in by_size.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let term = LaurentPoly::one_minus_q2_pow(m - size as u32).shift(2 * size as i64);
        num += &term.scale(count);
    }
    HilbertSeries::new(num.shift(gen_degree), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_cancels() {
        let s = HilbertSeries::new(LaurentPoly::from_terms([(0, 1), (2, -1)]), 3);
        assert_eq!(s.pole_order(), 2);
        assert_eq!(s, HilbertSeries::free(2));
        assert_eq!(HilbertSeries::new(LaurentPoly::zero(), 4).pole_order(), 0);
    }

    #[test]
    fn expansion_of_free_series() {
        assert_eq!(HilbertSeries::free(2).coefficients(0, 6), vec![1, 0, 2, 0, 3, 0, 4]);
        assert_eq!(HilbertSeries::free(0).coefficients(-1, 1), vec![0, 1, 0]);
    }

    #[test]
    fn stanley_reisner_examples() {
        assert_eq!(stanley_reisner_hilbert(1, &[0b1], 0), HilbertSeries::one());
        assert_eq!(stanley_reisner_hilbert(1, &[], 0), HilbertSeries::free(1));
        let s = stanley_reisner_hilbert(4, &[0b0011, 0b0100], 1);
        let expected = HilbertSeries::new(LaurentPoly::from_terms([(1, 1), (3, 1)]), 2);
        assert_eq!(s, expected);
    }

    #[test]
    fn display_format() {
        let s = HilbertSeries::new(LaurentPoly::from_terms([(1, 1), (3, 1)]), 2);
        assert_eq!(s.to_string(), "1*q^1 + 1*q^3 / (1-q^2)^2");
    }
}
