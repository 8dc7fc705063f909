use foundations::snf::{smith_normal_form, SparseIntMatrix};
use foundations::{stanley_reisner_hilbert, HilbertSeries, LaurentPoly};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Counts monomials `u^a` with `q`-degree `2|a|` avoiding every nonface support.
fn monomial_counts(n: usize, nonfaces: &[u32], gen: i64, max_deg: i64) -> Vec<i64> {
    let mut counts = vec![0i64; (max_deg + 1) as usize];
    let max_total = ((max_deg - gen) / 2).max(-1);
    fn rec(i: usize, n: usize, left: i64, used: i64, supp: u32, nonfaces: &[u32], gen: i64, counts: &mut [i64]) {
        if i == n {
            if nonfaces.iter().all(|&s| s & supp != s) {
                counts[(gen + 2 * used) as usize] += 1;
            }
            return;
        }
        for e in 0..=left {
            let s = if e > 0 { supp | 1 << i } else { supp };
            rec(i + 1, n, left - e, used + e, s, nonfaces, gen, counts);
        }
    }
    if max_total >= 0 {
        rec(0, n, max_total, 0, 0, nonfaces, gen, &mut counts);
    }
    counts
}

#[test]
fn hilbert_example_against_monomial_enumeration() {
    let nonfaces = [0b0011, 0b0100];
    let series = stanley_reisner_hilbert(4, &nonfaces, 1);
    let expected = HilbertSeries::new(LaurentPoly::from_terms([(1, 1), (3, 1)]), 2);
    assert_eq!(series, expected);
    assert_eq!(series.coefficients(0, 20), monomial_counts(4, &nonfaces, 1, 20));
}

fn arb_nonfaces() -> impl Strategy<Value = (usize, Vec<u32>)> {
    (1usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(1u32..(1 << n), 0..4)))
}

proptest! {
    #[test]
    fn stanley_reisner_matches_enumeration((n, nonfaces) in arb_nonfaces(), gen in 0i64..3) {
        let s = stanley_reisner_hilbert(n, &nonfaces, gen);
        prop_assert_eq!(s.coefficients(0, 14), monomial_counts(n, &nonfaces, gen, 14));
    }

    #[test]
    fn hilbert_numerator_identity((n, nonfaces) in arb_nonfaces(), extra in 0u32..3) {
        let s = stanley_reisner_hilbert(n, &nonfaces, 0);
        let m = s.pole_order() + extra;
        // (1-q^2)^m · series is the numerator over that power
        let back = HilbertSeries::new(s.numerator_over(m), m);
        prop_assert_eq!(&back, &s);
        let sum = &s + &s;
        prop_assert_eq!(sum.coefficients(0, 10), s.coefficients(0, 10).iter().map(|c| 2 * c).collect::<Vec<_>>());
    }

    #[test]
    fn snf_reconstructs(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-6i64..=6, 25)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
        let s = smith_normal_form(&m);
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = BigInt::zero();
                for a in 0..rows {
                    for b in 0..cols {
                        acc += &s.u[i][a] * &big[a][b] * &s.v[b][j];
                    }
                }
                let want = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                prop_assert_eq!(acc, want);
            }
        }
        let nz: Vec<&BigInt> = s.diag.iter().filter(|d| !d.is_zero()).collect();
        for w in nz.windows(2) {
            prop_assert!((w[1] % w[0]).is_zero());
        }
        let mut sp = SparseIntMatrix::new(rows, cols);
        for (i, r) in m.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                sp.add(i, j, v);
            }
        }
        let dense: Vec<BigInt> = nz.into_iter().cloned().collect();
        let mut sparse = sp.invariant_factors();
        sparse.sort();
        let mut d2 = dense.clone();
        d2.sort();
        prop_assert_eq!(sparse, d2);
        prop_assert!(dense.iter().all(|d| d >= &BigInt::one()));
    }
}
