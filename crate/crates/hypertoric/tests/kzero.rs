use foundations::hilbert::HilbertSeries;
use foundations::laurent::LaurentPoly;
use hypertoric::cyclic::left_arrangement;
use hypertoric::kzero::{
    gl11_change_of_basis, gl11_matches_delta, unitriangular_inverse, verify_canonical_axioms, K0Data, ModuleKind, Triangularity,
};
use proptest::prelude::*;

mod common;
use common::{n4k2, random_arrangement, sv};

#[test]
fn n4k2_projective_expansion() {
    let a = n4k2();
    let data = K0Data::new(&a).unwrap();
    // frozen: ++-- = μ{2,4} sits one wall away and below μ{1,4} = +---
    assert_eq!(data.projective_expansion(&sv("+---")).unwrap(), "(1*q^1)[V_++--] + (1*q^0)[V_+---]");
    // order-minimal labels have [P̃] = [Ṽ]; the order has the unique minimum μ{3,4}
    let minimal: Vec<_> = a.bounded_feasible().iter().filter(|p| a.bounded_feasible().iter().all(|q| !a.lt(q, p))).collect();
    assert_eq!(minimal, vec![&sv("+++-")]);
    for p in a.bounded_feasible() {
        if minimal.contains(&p) {
            let i = data.index(p).unwrap();
            let row = &data.delta[i];
            assert!(row.iter().enumerate().all(|(j, c)| (j == i) == !c.is_zero()), "{p}");
        }
    }
}

#[test]
fn n4k2_axioms() {
    let rep = verify_canonical_axioms(&n4k2()).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures());
    assert_eq!(rep.standard_order, Triangularity::Below);
    assert_eq!(rep.dual_order, Triangularity::Above);
}

#[test]
fn pairing_examples() {
    let a = n4k2();
    let data = K0Data::new(&a).unwrap();
    for p in a.bounded_feasible() {
        for q in a.bounded_feasible() {
            let want = if p == q { HilbertSeries::one() } else { HilbertSeries::zero() };
            assert_eq!(data.pairing(ModuleKind::Projective, p, ModuleKind::Simple, q).unwrap(), want);
            assert_eq!(data.pairing(ModuleKind::Standard, p, ModuleKind::ProperStandard, q).unwrap(), want);
        }
        let pp = data.pairing(ModuleKind::Projective, p, ModuleKind::Projective, p).unwrap();
        assert_eq!(pp.coefficient(0), 1);
        assert!(pp.coefficient(1) >= 0 && pp.coefficient(2) > 0);
        // [Ṽ] = (1 − q²)^k [V̄] in K₀
        let v = data.class_of(ModuleKind::Standard, p).unwrap();
        let vb = data.class_of(ModuleKind::ProperStandard, p).unwrap();
        for (x, y) in v.coords.iter().zip(&vb.coords) {
            assert_eq!(*x, y * &HilbertSeries::free(2));
        }
    }
    assert!(data.class_of(ModuleKind::Simple, &sv("++++")).is_err());
}

#[test]
fn gl11_n4k2() {
    let g = gl11_change_of_basis(4, 2).unwrap();
    assert_eq!(g.labels.len(), 6);
    assert!(g.unitriangular());
    for row in &g.entries {
        for p in row {
            assert!(p.terms().count() <= 1 && p.terms().all(|(_, c)| c == 1));
        }
    }
    assert!(gl11_matches_delta(4, 2).unwrap());
    let tsv = g.to_tsv();
    assert_eq!(tsv.lines().count(), 7);
    assert!(tsv.starts_with("alpha\t"));
}

#[test]
fn gl11_small_cases() {
    for n in 1..=5 {
        for k in 0..n {
            let g = gl11_change_of_basis(n, k).unwrap();
            assert!(g.unitriangular(), "n={n} k={k}");
            assert!(gl11_matches_delta(n, k).unwrap(), "n={n} k={k}");
            // minimal dot configuration: the canonical element is the standard one
            let row = &g.entries[0];
            assert!(row.iter().skip(1).all(|p| p.is_zero()) || g.entries.iter().skip(1).all(|r| r[0].is_zero()));
        }
    }
}

#[test]
fn left_cyclic_axioms() {
    for n in 2..=5 {
        for k in 1..n {
            let rep = verify_canonical_axioms(&left_arrangement(n, k).unwrap()).unwrap();
            assert!(rep.passed(), "n={n} k={k}: {:?}", rep.failures());
        }
    }
}

#[test]
fn unitriangular_inverse_of_a_shear() {
    let q = LaurentPoly::q_pow(1);
    let m = vec![vec![LaurentPoly::one(), q.clone()], vec![LaurentPoly::zero(), LaurentPoly::one()]];
    let inv = unitriangular_inverse(&m).unwrap();
    assert_eq!(inv[0][1], -q);
    let bad = vec![vec![LaurentPoly::one(), LaurentPoly::one()], vec![LaurentPoly::one(), LaurentPoly::one()]];
    assert!(unitriangular_inverse(&bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn random_arrangement_axioms(seed in any::<u64>(), n in 2usize..=5, k in 1usize..=3) {
        prop_assume!(k < n);
        let a = random_arrangement(n, k, seed);
        let rep = verify_canonical_axioms(&a).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures());
    }
}
