use singmod::arith::{discriminants_in, gcd, primes_up_to, Discriminant};
use singmod::binary_forms::class_number;
use singmod::cm_reduction::{
    genus_identity_check, phenomenon_check, reduce_and_count, ss_count, ss_count_legendre, Classification,
    ClassPolynomialStore, ONE_CLASS_PRIMES,
};

fn disc(d: i64) -> Discriminant {
    Discriminant::new(d).unwrap()
}

#[test]
fn supersingular_counts_match_the_legendre_family() {
    for p in primes_up_to(100) {
        assert_eq!(ss_count(p), ss_count_legendre(p).unwrap(), "p = {p}");
    }
    assert_eq!(ss_count_legendre(101).unwrap(), 9);
}

#[test]
fn reductions_are_consistent() {
    let store = ClassPolynomialStore::in_memory();
    let primes = primes_up_to(50);
    for d in discriminants_in(3, 2000) {
        let disc = disc(d);
        let h = class_number(&disc);
        for &p in &primes {
            let r = reduce_and_count(&store, &disc, p).unwrap();
            assert_eq!(r.class_number, h);
            assert_ne!(r.classification, Classification::MixedInvalid, "D = {d}, p = {p}");
            if r.classification == Classification::Supersingular {
                assert_eq!(r.roots_in_fp2, r.distinct_roots, "D = {d}, p = {p}");
                assert!(r.distinct_roots <= ss_count(p), "D = {d}, p = {p}");
            }
        }
    }
}

#[test]
fn phenomenon_for_small_lifts() {
    let store = ClassPolynomialStore::in_memory();
    for p in primes_up_to(20) {
        for d in discriminants_in(3, 5000 / (p * p)) {
            let disc = disc(d);
            if disc.is_p_fundamental(p) {
                let r = phenomenon_check(&store, &disc, p).unwrap();
                assert!(r.equal, "D = {d}, p = {p}");
            }
        }
    }
}

#[test]
fn genus_identity_on_the_asserted_range() {
    for p in ONE_CLASS_PRIMES {
        for d in discriminants_in(3, 400) {
            let disc = disc(d);
            let g = genus_identity_check(p, &disc).unwrap();
            assert_eq!(g.asserted, disc.is_p_fundamental(p) && gcd(disc.abs(), 2 * p) == 1);
            if g.asserted {
                assert!(g.equal, "p = {p}, D = {d}: {} vs {:?}", g.lhs, g.rhs);
            }
        }
    }
}
