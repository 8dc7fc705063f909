//! Laurent polynomials in `q` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Finite sum `Σ c_e q^e` with `c_e ∈ ℤ`; zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c q^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    /// Builds from `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c q^e` in place.
    pub fn add_term(&mut self, e: i64, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot = slot.checked_add(c).expect("Laurent coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    /// Iterator over `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self { terms: self.terms.iter().map(|(&e, &c)| (e + s, c)).collect() }
    }

    /// The bar involution `q ↦ q^{-1}`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect() }
    }

    /// Value at `q = 1`.
    pub fn eval_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, x)| (e, x * c)))
    }

    /// True if every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// `(1 - q^2)^m`.
    pub fn one_minus_q2_pow(m: u32) -> Self {
        let mut p = Self::one();
        let f = Self::from_terms([(0, 1), (2, -1)]);
        for _ in 0..m {
            p = &p * &f;
        }
        p
    }

    /// Exact division by `1 - q^2`, `None` if it does not divide.
    pub fn div_one_minus_q2(&self) -> Option<Self> {
        let (Some(lo), Some(hi)) = (self.min_degree(), self.max_degree()) else {
            return Some(Self::zero());
        };
        if hi - lo < 2 {
            return None;
        }
        // p = (1 - q^2) r  ⇒  r_e = p_e + r_{e-2}
        let mut r = BTreeMap::new();
        for e in lo..=hi - 2 {
            let v = self.coeff(e) + r.get(&(e - 2)).copied().unwrap_or(0);
            if v != 0 {
                r.insert(e, v);
            }
        }
        let r = Self { terms: r };
        let back = &r * &Self::from_terms([(0, 1), (2, -1)]);
        (back == *self).then_some(r)
    }
}

impl fmt::Display for LaurentPoly {
    /// Sorted `c*q^e` terms joined by ` + `; the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(e, c)| format!("{c}*q^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in rhs.terms() {
            self.add_term(e, c);
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1.checked_mul(c2).expect("Laurent coefficient overflow"));
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let a = LaurentPoly::from_terms([(0, 1), (2, 1)]);
        let b = LaurentPoly::from_terms([(0, 1), (2, -1)]);
        let p = &a * &b;
        assert_eq!(p, LaurentPoly::from_terms([(0, 1), (4, -1)]));
        assert_eq!(p.to_string(), "1*q^0 + -1*q^4");
        assert!((&a - &a).is_zero());
        assert_eq!(a.shift(-3).bar(), LaurentPoly::from_terms([(3, 1), (1, 1)]));
        assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn division_by_one_minus_q2() {
        let p = LaurentPoly::from_terms([(1, 1), (5, -1)]);
        let r = p.div_one_minus_q2().unwrap();
        assert_eq!(r, LaurentPoly::from_terms([(1, 1), (3, 1)]));
        assert!(LaurentPoly::from_terms([(0, 1), (1, 1)]).div_one_minus_q2().is_none());
    }
}
