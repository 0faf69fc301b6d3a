use proptest::prelude::*;
use singmod::arith::primes_up_to;
use singmod::corpus;
use singmod::qseries::theta_series;
use singmod::quaternion::{gross_lattice_for_prime, maximal_order};
use singmod::ternary_forms::{count_primitive, minimal_binary_sublattice, PrimitiveMethod};
use singmod::TernaryQF;

fn unimodular(ops: &[(usize, usize, i64)], swaps: &[(usize, usize)]) -> [[i64; 3]; 3] {
    let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for &(i, j, k) in ops {
        if i != j {
            // column_j += k column_i
            for row in &mut m {
                row[j] += k * row[i];
            }
        }
    }
    for &(i, j) in swaps {
        for row in &mut m {
            row.swap(i, j);
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representation_numbers_are_basis_independent(
        index in 0usize..40,
        ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
        swaps in prop::collection::vec((0usize..3, 0usize..3), 0..3),
    ) {
        let q = &corpus::ternary_forms(corpus::DEFAULT_SEED, 40)[index];
        let m = unimodular(&ops, &swaps);
        let moved = q.transform(&m).unwrap();
        prop_assert_eq!(moved.hessian_det(), q.hessian_det());
        prop_assert_eq!(moved.level(), q.level());
        prop_assert_eq!(moved.representation_counts(50), q.representation_counts(50));
    }
}

#[test]
fn primitive_counting_methods_agree_on_the_corpus() {
    for q in corpus::ternary_forms(corpus::DEFAULT_SEED, 200) {
        for n in 1..=120 {
            let a = count_primitive(&q, n, PrimitiveMethod::Moebius).unwrap();
            let b = count_primitive(&q, n, PrimitiveMethod::GcdFilter).unwrap();
            assert_eq!(a, b, "{q}, n = {n}");
        }
    }
}

#[test]
fn sublattices_satisfy_hermite_rankin_and_slices_have_its_discriminant() {
    let mut forms = corpus::ternary_forms(corpus::DEFAULT_SEED, 200);
    forms.extend(primes_up_to(200).into_iter().map(|p| gross_lattice_for_prime(p).unwrap().hessian));
    for q in forms {
        let dec = minimal_binary_sublattice(&q);
        assert!(dec.satisfies_hermite_rankin(), "{q}");
        let r = dec.restricted_hessian_det as i64;
        assert_eq!(dec.restricted_form.discriminant(), -r, "{q}");
        for t in -3..=3 {
            assert_eq!(dec.slice_polynomial(&q, t).discriminant(), -r, "{q}, t = {t}");
        }
    }
}

#[test]
fn gross_lattices_up_to_200() {
    for p in primes_up_to(200) {
        let order = maximal_order(p).unwrap();
        assert_eq!(order.reduced_discriminant().unwrap(), p);
        let g = gross_lattice_for_prime(p).unwrap();
        assert_eq!(g.hessian.hessian_det(), 32 * p * p, "p = {p}");
        assert_eq!(g.hessian.level(), 4 * p, "p = {p}");
        // Z + 2R has no vector of norm 1 or 2, and every norm is 0 or 3 mod 4
        let theta = theta_series(&g.hessian, 40);
        assert_eq!(theta.coefficient(0), Some(1));
        for (m, &c) in theta.coefficients().iter().enumerate().skip(1) {
            if m % 4 == 1 || m % 4 == 2 {
                assert_eq!(c, 0, "p = {p}, m = {m}");
            }
        }
    }
}

#[test]
fn theta_series_agree_with_counting() {
    for q in corpus::ternary_forms(3, 20).into_iter().chain([TernaryQF::sum_of_three_squares()]) {
        let theta = theta_series(&q, 3000);
        let counts = q.representation_counts(3000);
        assert!(theta.coefficients().iter().zip(&counts).all(|(a, &b)| *a as u64 == b), "{q}");
        let u4 = theta.u_operator(4);
        assert_eq!(u4.coefficients(), theta.u_operator(2).u_operator(2).coefficients());
        for (m, &c) in u4.coefficients().iter().enumerate() {
            assert_eq!(c as u64, counts[4 * m]);
        }
    }
}
