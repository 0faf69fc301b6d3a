//! Seeded random corpora for property checks. The same seed always yields the
//! same forms in the same order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quad_poly::IntegerValuedQP;
use crate::ternary_forms::TernaryQF;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Largest absolute value of a Hessian entry in [`ternary_forms`].
pub const TERNARY_ENTRY_BOUND: i64 = 12;

/// Largest absolute value of the encoded integers `2a, b, 2c, 2d, 2e, f`
/// in [`quadratic_polynomials`].
pub const POLY_COEFF_BOUND: i64 = 20;

/// `count` positive definite ternary forms with Hessian entries in
/// `[-12, 12]` (even positive diagonal), drawn by rejection.
pub fn ternary_forms(seed: u64, count: usize) -> Vec<TernaryQF> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = TERNARY_ENTRY_BOUND;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut e = [0i64; 6];
        for d in &mut e[..3] {
            *d = 2 * rng.gen_range(1..=b / 2);
        }
        for o in &mut e[3..] {
            *o = rng.gen_range(-b..=b);
        }
        if let Ok(q) = TernaryQF::from_entries(e) {
            out.push(q);
        }
    }
    out
}

/// `count` polynomials accepted by [`IntegerValuedQP::new`].
///
/// Integer valued polynomials are exactly the integer combinations of
/// `1, x, C(x,2), y, C(y,2), xy`, so the draw happens in that basis and
/// candidates with large coefficients, indefinite quadratic part or a
/// negative minimum are rejected.
pub fn quadratic_polynomials(seed: u64, count: usize) -> Vec<IntegerValuedQP> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = POLY_COEFF_BOUND;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let cx2 = rng.gen_range(1..=b);
        let cy2 = rng.gen_range(1..=b);
        let xy = rng.gen_range(-b..=b);
        let x = rng.gen_range(-b..=b);
        let y = rng.gen_range(-b..=b);
        let one = rng.gen_range(0..=b);
        // C(x,2) = (x^2 - x) / 2
        let (two_d, two_e) = (2 * x - cx2, 2 * y - cy2);
        if two_d.abs() > b || two_e.abs() > b {
            continue;
        }
        if let Ok(p) = IntegerValuedQP::new(cx2, xy, cy2, two_d, two_e, one) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let a = ternary_forms(7, 20);
        assert_eq!(a, ternary_forms(7, 20));
        assert_ne!(a, ternary_forms(8, 20));
        for q in &a {
            assert!(q.entries().iter().all(|e| e.abs() <= TERNARY_ENTRY_BOUND));
        }
        let p = quadratic_polynomials(7, 50);
        assert_eq!(p, quadratic_polynomials(7, 50));
        for p in &p {
            let c = [p.two_a, p.b, p.two_c, p.two_d, p.two_e, p.f];
            assert!(c.iter().all(|x| x.abs() <= POLY_COEFF_BOUND));
        }
    }
}
