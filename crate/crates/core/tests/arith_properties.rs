use proptest::prelude::*;
use singmod::arith::{
    discriminants_in, is_discriminant, kronecker, moebius, primes_up_to, sigma0, sigma0_tilde, Discriminant,
};

#[test]
fn sigma0_tilde_is_the_running_maximum() {
    let mut best = 0;
    for n in 1..=10_000 {
        best = best.max(sigma0(n).unwrap());
        assert_eq!(sigma0_tilde(n).unwrap(), best, "n = {n}");
    }
}

#[test]
fn sigma0_stays_under_the_envelope() {
    // Nicolas-Robin: log sigma0(n) <= 1.5379 log 2 log n / log log n for n >= 3
    for n in 3..=10_000u64 {
        let x = n as f64;
        let envelope = (1.5379 * 2f64.ln() * x.ln() / x.ln().ln()).exp();
        assert!((sigma0(n).unwrap() as f64) <= envelope, "n = {n}");
    }
}

#[test]
fn decomposition_recomposes() {
    for d in discriminants_in(3, 100_000) {
        let disc = Discriminant::new(d).unwrap();
        let f = disc.conductor() as i64;
        assert_eq!(disc.fundamental() * f * f, d);
        assert!(Discriminant::new(disc.fundamental()).unwrap().is_fundamental());
        // no larger square leaves a discriminant
        for g in 2..=(100_000f64 / f as f64).sqrt() as i64 {
            let fg = f * g;
            if d % (fg * fg) == 0 {
                assert!(!is_discriminant(d / (fg * fg)), "D = {d}, f = {f}, g = {g}");
            }
        }
    }
}

#[test]
fn p_fundamental_part_is_idempotent() {
    for p in primes_up_to(30) {
        for d in discriminants_in(3, 5000) {
            let part = Discriminant::new(d).unwrap().p_fundamental_part(p).unwrap();
            assert_ne!(part.conductor() % p, 0, "D = {d}, p = {p}");
            assert_eq!(part.p_fundamental_part(p).unwrap(), part);
            assert_eq!(part.fundamental(), Discriminant::new(d).unwrap().fundamental());
        }
    }
}

#[test]
fn moebius_inverts_the_constant_function() {
    for n in 2..=2000u64 {
        let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| moebius(d).unwrap() as i64).sum();
        assert_eq!(s, 0, "n = {n}");
    }
}

proptest! {
    #[test]
    fn kronecker_is_multiplicative_in_the_top(a in -500i64..500, b in -500i64..500, n in 1i64..500) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    }

    #[test]
    fn kronecker_is_multiplicative_in_the_bottom(a in -500i64..500, m in 1i64..300, n in 1i64..300) {
        prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
    }
}
