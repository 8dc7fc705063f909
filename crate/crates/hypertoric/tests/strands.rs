use std::collections::BTreeMap;

use hypertoric::arrangement::subsets_of_size;
use hypertoric::convolution::{BTilde, Coefficients, Monomial};
use hypertoric::cyclic::left_arrangement;
use hypertoric::extcalc::EndDga;
use hypertoric::strands::{
    block_dims, d_squared_zero, decomposition_dims, diagrams, f1, h_class, homology_block, interior_support, labels_by_basis,
    lambda_witness, multiply_diagrams, strands_differential, strands_multiply, verify_ext_strands, verify_f1, wrapped_positions,
    StrandDirection, StrandsDiagram, StrandsElement, STRAND_DIRECTION,
};
use proptest::prelude::*;

mod common;
use common::{sv, x};

fn positions(ps: &[usize]) -> u32 {
    ps.iter().map(|p| 1 << (p - 1)).sum()
}

#[test]
fn eleven_position_h_class() {
    let (s, t) = (positions(&[2, 3, 4, 7, 10, 11]), positions(&[1, 2, 3, 5, 9, 10]));
    let h = h_class(11, s, t);
    assert_eq!(h, vec![1, 1, 1, 0, 1, 1, 0, 0, 1, 1]);
    assert_eq!(interior_support(&h), positions(&[2, 3, 6, 10]));
    assert_eq!(wrapped_positions(11, s, t), positions(&[2, 3, 10]));
}

#[test]
fn diagram_format_and_validation() {
    let d = StrandsDiagram::new(3, vec![(3, 1), (2, 2)]).unwrap();
    assert_eq!(d.to_string(), "{2,3}->{1,2}: [(2,2),(3,1)]");
    assert_eq!(d.inversions(), 1);
    assert_eq!(d.stationary(), x("2"));
    let e = StrandsElement::basis(d.clone(), Monomial::var(1).mul(&Monomial::var(1)));
    assert_eq!(e.to_string(), "{2,3}->{1,2}: [(2,2),(3,1)] * U2^2");
    // U_3 sits on a moving strand
    assert!(StrandsElement::basis(d, Monomial::var(2)).is_zero());
    assert!(StrandsDiagram::new(3, vec![(1, 2)]).is_err());
    assert!(StrandsDiagram::new(3, vec![(3, 1), (2, 1)]).is_err());
    assert_eq!(STRAND_DIRECTION, StrandDirection::Down);
}

#[test]
fn products_of_small_elements() {
    for n in 1..=4 {
        for k in 0..=n {
            for s in subsets_of_size(n, k) {
                let i = StrandsElement::idempotent(n, s);
                assert_eq!(strands_multiply(&i, &i), i);
                assert!(strands_differential(&i).is_zero());
            }
        }
    }
    // F₂[U₁] for n = k = 1
    let u = |e: u8| StrandsElement::basis(StrandsDiagram::identity(1, 1), Monomial([e, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]));
    assert_eq!(strands_multiply(&u(2), &u(3)), u(5));
    let a = StrandsDiagram::new(3, vec![(3, 2), (2, 1)]).unwrap();
    assert!(StrandsDiagram::new(3, vec![(2, 1), (1, 1)]).is_err());
    assert!(StrandsDiagram::new(3, vec![(3, 2), (2, 2)]).is_err());
    let p = StrandsDiagram::new(3, vec![(3, 1), (2, 2)]).unwrap();
    assert_eq!(multiply_diagrams(&p, &StrandsDiagram::identity(3, x("12"))), Some(p.clone()));
    assert_eq!(multiply_diagrams(&p, &a), None);
    assert_eq!(multiply_diagrams(&a, &StrandsDiagram::identity(3, x("12"))), Some(a));
}

#[test]
fn lambda_times_u1_vanishes_but_f1_composite_does_not() {
    let w = lambda_witness().unwrap();
    assert_eq!(w.lambda.to_string(), "{2}->{1}: [(2,1)] * 1");
    assert!(w.lambda_u1.is_zero());
    assert_eq!(w.block, (sv("+-"), sv("--")));
    assert_eq!(w.entry, (sv("--"), sv("--")));
    assert!(!w.composite.is_zero());
}

#[test]
fn d_squared_vanishes_exhaustively() {
    for n in 1..=5 {
        for k in 0..=n {
            assert!(d_squared_zero(n, k, 2), "n={n} k={k}");
        }
    }
}

#[test]
fn one_position() {
    let h0 = homology_block(1, 0, 0, 6);
    assert_eq!(h0.dims, BTreeMap::from([(0, 1)]));
    let h1 = homology_block(1, 1, 1, 6);
    assert_eq!(h1.dims, BTreeMap::from([(0, 1), (2, 1), (4, 1), (6, 1)]));
    let rep = verify_ext_strands(1, 6).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
}

#[test]
fn diagonal_blocks_are_polynomial_rings() {
    for n in 1..=5 {
        for k in 0..=n {
            for s in subsets_of_size(n, k) {
                let hb = homology_block(n, s, s, 4);
                assert!(hb.closed_form_ok && hb.representatives_ok);
                assert_eq!(hb.dims.get(&0), Some(&1));
                assert_eq!(hb.dims.get(&2).copied().unwrap_or(0), k);
            }
        }
    }
}

#[test]
fn decomposition_identity() {
    for n in 1..=5 {
        for k in 0..=n {
            let sets = subsets_of_size(n, k);
            for &s in &sets {
                for &t in &sets {
                    let mut direct: BTreeMap<u32, usize> = BTreeMap::new();
                    for ((u, _), d) in block_dims(n, s, t, 6) {
                        *direct.entry(u).or_default() += d;
                    }
                    assert_eq!(direct, decomposition_dims(n, s, t, 6), "n={n} {s:b} {t:b}");
                }
            }
        }
    }
}

#[test]
fn ext_matches_strands_homology() {
    let rep = verify_ext_strands(4, 6).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    assert_eq!(rep.blocks, vec![(0, 1), (1, 16), (2, 36), (3, 16), (4, 1)]);
    assert_eq!(rep.nonzero_blocks, 41);
    let rep = verify_ext_strands(5, 6).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    assert_eq!(rep.nonzero_blocks, 122);
}

#[test]
fn f1_is_a_chain_map_hitting_the_kappa_basis() {
    let rep = verify_f1(3, 4).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    assert!(rep.f1_d_checks > 0 && rep.cycle_checks > 0 && rep.class_checks > 0 && rep.label_checks > 0);
    assert_eq!(rep.bijection_checks, 1 + 9 + 9 + 1);
}

#[test]
fn f1_of_idempotents_is_the_identity() {
    let arr = left_arrangement(3, 1).unwrap();
    let alg = BTilde::new(&arr, Coefficients::F2).unwrap();
    let dga = EndDga::new(&alg).unwrap();
    let labels = labels_by_basis(&arr);
    for (s, a) in &labels {
        let img = f1(&dga, &labels, &StrandsElement::idempotent(3, *s)).unwrap();
        assert_eq!(img.len(), 1);
        assert_eq!(img[&(*a, *a)], dga.block(a, a).identity());
    }
}

/// `len` elements, the `i`-th a sum of basis elements of the block
/// `(S_i, S_{i+1})`, so that consecutive ones compose.
fn arb_chain(len: usize) -> impl Strategy<Value = Vec<StrandsElement>> {
    (2usize..=5)
        .prop_flat_map(move |n| (Just(n), 0..=n))
        .prop_flat_map(move |(n, k)| {
            let count = subsets_of_size(n, k).len();
            (
                Just((n, k)),
                prop::collection::vec(0..count, len + 1),
                prop::collection::vec(prop::collection::vec((any::<u32>(), prop::collection::vec(0u8..3, n)), 1..4), len),
            )
        })
        .prop_map(|((n, k), idx, picks)| {
            let sets = subsets_of_size(n, k);
            picks
                .iter()
                .enumerate()
                .map(|(i, terms)| {
                    let ds = diagrams(n, sets[idx[i]], sets[idx[i + 1]]);
                    let mut out = StrandsElement::zero();
                    for (di, exps) in terms {
                        if ds.is_empty() {
                            break;
                        }
                        let d = ds[*di as usize % ds.len()].clone();
                        let mut m = Monomial::one();
                        for (p, e) in exps.iter().enumerate() {
                            // only exponents on stationary strands survive
                            if d.stationary() & 1 << p != 0 {
                                m.0[p] = *e;
                            }
                        }
                        out = out.add(&StrandsElement::basis(d, m));
                    }
                    out
                })
                .collect()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]
    #[test]
    fn leibniz_rule(v in arb_chain(2)) {
        let (a, b) = (&v[0], &v[1]);
        let lhs = strands_differential(&strands_multiply(a, b));
        let rhs = strands_multiply(&strands_differential(a), b).add(&strands_multiply(a, &strands_differential(b)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn associativity(v in arb_chain(3)) {
        prop_assert_eq!(
            strands_multiply(&strands_multiply(&v[0], &v[1]), &v[2]),
            strands_multiply(&v[0], &strands_multiply(&v[1], &v[2]))
        );
    }

    /// Downward strands never cross twice, so crossings add.
    #[test]
    fn crossings_add_under_composition(n in 2usize..=6, k in 0usize..=6, si in any::<u32>(), ti in any::<u32>(), ui in any::<u32>(), di in any::<u32>()) {
        prop_assume!(k <= n);
        let sets = subsets_of_size(n, k);
        let pick = |i: u32| sets[i as usize % sets.len()];
        let (d1, d2) = (diagrams(n, pick(si), pick(ti)), diagrams(n, pick(ti), pick(ui)));
        prop_assume!(!d1.is_empty() && !d2.is_empty());
        let (a, b) = (&d1[di as usize % d1.len()], &d2[(di / 7) as usize % d2.len()]);
        let c = multiply_diagrams(a, b).unwrap();
        prop_assert_eq!(c.inversions(), a.inversions() + b.inversions());
    }

    #[test]
    fn d_squared_on_sums(v in arb_chain(1)) {
        let a = &v[0];
        prop_assert!(strands_differential(&strands_differential(a)).is_zero());
    }
}
