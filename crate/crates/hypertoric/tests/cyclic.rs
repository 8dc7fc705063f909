use std::collections::BTreeSet;

use foundations::rational::{rat, ratio};
use hypertoric::convolution::{BTilde, Coefficients};
use hypertoric::cyclic::{
    check_cyclic_conditions, crossing_labels, kappa, kappa_inv, make_cyclic, osz_graded_dims, osz_standard, osz_verify, var,
    var_l, var_r, verify_cyclic_combinatorics, Arrow, CyclicError, CyclicSpec, DotState, RlConvention, Side, RL_CONVENTION,
};
use hypertoric::extcalc::ExtIndexSets;
use hypertoric::{PolarizedArrangement, SignVector};
use proptest::prelude::*;

mod common;
use common::{n4k2, sv, x};

fn cyclic(n: usize, k: usize, side: Side) -> PolarizedArrangement {
    make_cyclic(&CyclicSpec::with_default_nodes(n, k, side)).unwrap()
}

#[test]
fn sign_variation_examples() {
    assert_eq!(var(&[1, 1, -1, 1]), 2);
    assert_eq!(var_r(&sv("+--+"), 2), 2);
    assert_eq!(var_l(&sv("++++")), 0);
    assert_eq!(var_l(&sv("-+")), 2);
    assert_eq!(var_r(&sv("-+"), 1), 2);
}

#[test]
fn kappa_examples() {
    let z = kappa(&sv("+--+"), Side::Right, 2).unwrap();
    assert_eq!(z.to_string(), "[1,3]");
    assert_eq!(z.basis(), x("13"));
    assert_eq!(kappa_inv(&z), sv("+--+"));
    // three dots in regions {0,1,4} of {0..6}
    let s = DotState::new(Side::Left, 7, &[0, 1, 4]).unwrap();
    let a = kappa_inv(&s);
    assert_eq!(a, sv("-+++---"));
    assert_eq!(kappa(&a, Side::Left, 3).unwrap(), s);
    assert!(matches!(kappa(&sv("-+-+"), Side::Left, 2), Err(CyclicError::Variation { .. })));
    assert!(DotState::new(Side::Left, 4, &[4]).is_err());
    assert!(DotState::new(Side::Right, 4, &[0]).is_err());
}

#[test]
fn right_n4k2_reproduces_the_worked_example() {
    let a = cyclic(4, 2, Side::Right);
    let b = n4k2();
    assert_eq!(a.regions(), b.regions());
    assert_eq!(a.bounded_feasible(), b.bounded_feasible());
    assert_eq!(a.order_matrix(), b.order_matrix());
    for p in a.bounded_feasible() {
        assert_eq!(a.x_of(p).unwrap(), b.x_of(p).unwrap());
    }
    let rep = verify_cyclic_combinatorics(&a, Side::Right);
    assert!(rep.passed(), "{:?}", rep.failures);
    assert_eq!(rep.checks.len(), 5);
    assert!(verify_cyclic_combinatorics(&b, Side::Right).passed());
}

#[test]
fn trivial_and_small_cases() {
    let a = cyclic(1, 0, Side::Left);
    assert_eq!(a.bounded_feasible().len(), 1);
    assert!(verify_cyclic_combinatorics(&a, Side::Left).passed());
    let a = cyclic(1, 0, Side::Right);
    assert_eq!(a.bounded_feasible(), &[sv("+")]);
    let spec = CyclicSpec::with_default_nodes(3, 1, Side::Left);
    assert_eq!(spec.eval_node, ratio(1, 2));
    check_cyclic_conditions(&spec).unwrap();
}

#[test]
fn positivity_failures_are_reported() {
    let mut spec = CyclicSpec::with_default_nodes(3, 1, Side::Left);
    // t_0 between t_1 and t_2 makes minors of (xi, id)(V) change sign
    spec.k = 2;
    spec.eval_node = ratio(5, 2);
    match check_cyclic_conditions(&spec) {
        Err(CyclicError::Positivity { matrix, rows, .. }) => {
            assert_eq!(matrix, "(xi, id)(V)");
            assert_eq!(rows.len(), 2);
        }
        other => panic!("{other:?}"),
    }
    let mut spec = CyclicSpec::with_default_nodes(4, 2, Side::Right);
    spec.nodes[1] = rat(1);
    assert!(matches!(check_cyclic_conditions(&spec), Err(CyclicError::Nodes(_))));
    assert!(matches!(check_cyclic_conditions(&CyclicSpec::with_default_nodes(3, 3, Side::Left)), Err(CyclicError::Nodes(_))));
}

#[test]
fn batch_combinatorics_default_nodes() {
    for n in 1..=6 {
        for k in 0..n.min(4) {
            for side in [Side::Left, Side::Right] {
                let a = cyclic(n, k, side);
                let rep = verify_cyclic_combinatorics(&a, side);
                assert!(rep.passed(), "n={n} k={k} {side}: {:?}", rep.failures);
            }
        }
    }
}

/// Two node choices for the same `(n, k, side)` give the same combinatorics.
#[test]
fn node_choice_does_not_matter() {
    for (n, k) in [(4, 2), (5, 2), (5, 3)] {
        for side in [Side::Left, Side::Right] {
            let a = cyclic(n, k, side);
            let mut spec = CyclicSpec::with_default_nodes(n, k, side);
            spec.nodes = (1..=n as i64).map(|i| rat(i * i + 1)).collect();
            spec.eval_node = match side {
                Side::Left => ratio(1, 3),
                Side::Right => rat(n as i64 * n as i64 + 7),
            };
            let b = make_cyclic(&spec).unwrap();
            assert_eq!(a.regions(), b.regions());
            assert_eq!(a.bounded_feasible(), b.bounded_feasible());
            assert_eq!(a.order_matrix(), b.order_matrix());
            let (ha, hb) = (BTilde::new(&a, Coefficients::Integers).unwrap(), BTilde::new(&b, Coefficients::Integers).unwrap());
            for p in a.bounded_feasible() {
                for q in a.bounded_feasible() {
                    assert_eq!(ha.hom_space(p, q).unwrap().minimal_nonfaces, hb.hom_space(p, q).unwrap().minimal_nonfaces);
                }
            }
        }
    }
}

#[test]
fn osz_relations_n4k2_left() {
    let a = cyclic(4, 2, Side::Left);
    let rep = osz_verify(&a, 6).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    assert!(rep.relation_checks.iter().all(|&c| c > 0), "{:?}", rep.relation_checks);
    assert!(rep.psi_checks > 0 && rep.dim_checks > 0);
    assert_eq!(RL_CONVENTION, RlConvention::Forward);
    // ψ makes the reversed reading pass as well
    assert!(rep.alternative_passes);
}

#[test]
fn osz_relations_small_cases() {
    for (n, k) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (5, 2)] {
        let a = cyclic(n, k, Side::Left);
        let rep = osz_verify(&a, if n <= 4 { 6 } else { 4 }).unwrap();
        assert!(rep.passed(), "n={n} k={k}: {:?}", rep.failures);
    }
    assert!(osz_verify(&cyclic(4, 2, Side::Right), 2).is_err());
}

#[test]
fn u_vanishing_on_empty_neighbourhoods() {
    // U_1 I_x = 0 for x = {2,3} in B(4,2); U_3 I_x ≠ 0
    let dims = osz_graded_dims(4, 0b1100, 2);
    assert_eq!(dims[&(0b1100, 0)], 1);
    let a = cyclic(4, 2, Side::Left);
    let alg = BTilde::new(&a, Coefficients::Integers).unwrap();
    let alpha = kappa_inv(&DotState::new(Side::Left, 4, &[2, 3]).unwrap());
    assert!(alg.u(0, alpha).is_zero());
    assert!(!alg.u(2, alpha).is_zero());
}

#[test]
fn psi_fixes_idempotents_and_swaps_taut_elements() {
    let a = cyclic(4, 2, Side::Left);
    let alg = BTilde::new(&a, Coefficients::Integers).unwrap();
    for p in a.bounded_feasible() {
        assert_eq!(alg.psi(&alg.idempotent(*p)), alg.idempotent(*p));
        for q in a.bounded_feasible() {
            assert_eq!(alg.psi(&alg.f(*p, *q)), alg.f(*q, *p));
        }
    }
}

#[test]
fn osz_standard_modules() {
    for n in 1..=6 {
        for k in 0..n.min(4) {
            let a = cyclic(n, k, Side::Left);
            for s in DotState::all(Side::Left, n, k) {
                let st = osz_standard(&a, &s).unwrap();
                assert_eq!(st.right_slides[0], s);
                assert!(st.right_slides.iter().all(|y| s.dot_leq(y)));
                for (i, y) in st.right_slides.iter().enumerate() {
                    assert!(st.right_slides[..i].iter().all(|z| !y.dot_leq(z) || y == z));
                }
                assert_eq!(st.killed.len(), n - k);
                if s.up_moves().is_empty() {
                    assert_eq!(st.right_slides, vec![s]);
                }
            }
        }
    }
}

/// The eleven-line example with six dots: index sets and the labels of the
/// taut class between `α^S` and `β^{S′}`.
#[test]
fn eleven_line_domain_data() {
    let (a, b) = (sv("+-+---+++-+"), sv("-+--++++-++"));
    let (za, zb) = (kappa(&a, Side::Left, 6).unwrap(), kappa(&b, Side::Left, 6).unwrap());
    assert_eq!(za.basis(), x("234") | 1 << 6 | 1 << 9 | 1 << 10);
    assert_eq!(zb.basis(), x("12359") | 1 << 9);
    let ix = ExtIndexSets::new(&a, &b, za.basis(), zb.basis());
    assert_eq!(ix.s_min, x("6"));
    assert_eq!(ix.free, x("8"));
    assert_eq!(ix.j, x("159"));
    let s = ix.s_min | ix.j | ix.free;
    assert_eq!(s, x("15689"));
    let (a_s, b_s) = (a.flip_set(s), b.flip_set(ix.free));
    assert_eq!((a_s, b_s), (sv("--+-+++---+"), sv("-+--+++--++")));
    let (xs, ys) = (kappa(&a_s, Side::Left, 6).unwrap(), kappa(&b_s, Side::Left, 6).unwrap());
    assert_eq!(xs.basis(), x("13458") | 1 << 10);
    assert_eq!(ys.basis(), x("12358") | 1 << 9);
    assert_eq!(crossing_labels(&xs, &ys).unwrap(), vec![Arrow::L(2), Arrow::L(3), Arrow::L(10)]);
}

fn sign_vector(n: usize, bits: u32) -> SignVector {
    SignVector::new(n, bits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn kappa_round_trips(n in 1usize..=10, bits in any::<u32>(), right in any::<bool>()) {
        let a = sign_vector(n, bits);
        let side = if right { Side::Right } else { Side::Left };
        for k in 0..=n {
            if let Ok(z) = kappa(&a, side, k) {
                prop_assert_eq!(z.k(), k);
                prop_assert_eq!(kappa_inv(&z), a);
            }
        }
        let k = var_l(&a);
        prop_assert!(k <= n);
        let z = kappa(&a, Side::Left, k).unwrap();
        prop_assert_eq!(z.dots().iter().copied().collect::<BTreeSet<_>>().len(), k);
    }

    #[test]
    fn crossing_labels_track_sign_changes(n in 2usize..=8, k in 1usize..=4, s in any::<u32>(), t in any::<u32>()) {
        prop_assume!(k < n);
        let states = DotState::all(Side::Left, n, k);
        let (x0, y0) = (states[s as usize % states.len()], states[t as usize % states.len()]);
        if let Some(labels) = crossing_labels(&x0, &y0) {
            let lines: u32 = labels.iter().map(|a| 1 << (a.index() - 1)).sum();
            prop_assert_eq!(lines, kappa_inv(&x0).diff(&kappa_inv(&y0)));
        }
    }
}
