//! Reduction of singular moduli modulo `p`: class polynomials, counts of
//! distinct reductions, ordinary/supersingular classification, the
//! phenomenon `red_p S(D) = red_p S(D p^2)`, supersingular counts and the
//! genus identity on the Gross lattices of the one-class primes.

pub mod cache;
pub mod class_poly;
pub mod fp_poly;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, is_prime, kronecker, Discriminant};
use crate::binary_forms::class_number;
use crate::error::{Error, Result};
use crate::quaternion::gross_lattice_for_prime;
use crate::ternary_forms::{count_primitive, PrimitiveMethod};

pub use cache::ClassPolynomialStore;
pub use class_poly::{compute_class_polynomial, ClassPolynomial};
pub use fp_poly::FpPoly;

/// Primes whose Gross lattice is alone in its genus.
pub const ONE_CLASS_PRIMES: [u64; 5] = [2, 3, 5, 7, 13];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Ordinary,
    Supersingular,
    /// The Kronecker symbol says supersingular but some root lies outside `F_{p^2}`.
    MixedInvalid,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Ordinary => "ordinary",
            Classification::Supersingular => "supersingular",
            Classification::MixedInvalid => "mixed-invalid",
        })
    }
}

/// Deuring: the reductions are supersingular iff `p` does not split in the
/// CM field, read off the fundamental discriminant.
pub fn is_supersingular_pair(disc: &Discriminant, p: u64) -> bool {
    kronecker(disc.fundamental(), p as i64) != 1
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub p: u64,
    pub delta: i64,
    pub class_number: u64,
    pub kronecker: i8,
    pub classification: Classification,
    /// `#red_p S(D)`: distinct roots of `H_D mod p`.
    pub distinct_roots: u64,
    pub supersingular_roots: u64,
    /// Distinct roots lying in `F_{p^2}`.
    pub roots_in_fp2: u64,
    pub multiplicity_max: u32,
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Counting and classification for an already computed class polynomial.
pub fn report_for_polynomial(poly: &ClassPolynomial, disc: &Discriminant, p: u64) -> ReductionReport {
    let reduced = poly.reduce_mod(p);
    let factors = reduced.squarefree_factorization();
    let distinct: u64 = factors.iter().map(|(f, _)| f.degree() as u64).sum();
    let multiplicity_max = factors.iter().map(|(_, m)| *m).max().unwrap_or(0);
    let in_fp2 = fp_poly::roots_in_fp2(&reduced) as u64;
    let (classification, ss) = if !is_supersingular_pair(disc, p) {
        (Classification::Ordinary, 0)
    } else if in_fp2 == distinct {
        (Classification::Supersingular, distinct)
    } else {
        (Classification::MixedInvalid, in_fp2)
    };
    ReductionReport {
        p,
        delta: disc.value(),
        class_number: poly.degree() as u64,
        kronecker: kronecker(disc.value(), p as i64),
        classification,
        distinct_roots: distinct,
        supersingular_roots: ss,
        roots_in_fp2: in_fp2,
        multiplicity_max,
    }
}

pub fn reduce_and_count(store: &ClassPolynomialStore, disc: &Discriminant, p: u64) -> Result<ReductionReport> {
    check_prime(p)?;
    Ok(report_for_polynomial(&store.get(disc)?, disc, p))
}

#[derive(Debug, Clone, Serialize)]
pub struct PhenomenonReport {
    pub delta: i64,
    pub p: u64,
    pub lifted: i64,
    pub distinct_roots: u64,
    pub lifted_distinct_roots: u64,
    /// Equality of the root sets, i.e. of the monic radicals mod `p`.
    pub equal: bool,
}

/// Compares the roots of `H_D` and `H_{D p^2}` modulo `p` as sets.
pub fn phenomenon_check(store: &ClassPolynomialStore, disc: &Discriminant, p: u64) -> Result<PhenomenonReport> {
    check_prime(p)?;
    let lifted_value = disc
        .value()
        .checked_mul((p * p) as i64)
        .ok_or(Error::DiscriminantTooLarge { value: disc.value(), bound: store.bound() })?;
    let lifted = Discriminant::new(lifted_value)?;
    let r0 = store.get(disc)?.reduce_mod(p).radical();
    let r1 = store.get(&lifted)?.reduce_mod(p).radical();
    Ok(PhenomenonReport {
        delta: disc.value(),
        p,
        lifted: lifted_value,
        distinct_roots: r0.degree() as u64,
        lifted_distinct_roots: r1.degree() as u64,
        equal: r0 == r1,
    })
}

/// Number of supersingular `j`-invariants in characteristic `p`.
pub fn ss_count(p: u64) -> u64 {
    match p {
        2 | 3 => 1,
        _ => p / 12 + [0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2][(p % 12) as usize],
    }
}

/// Supersingular count from the Legendre family: the roots of the Hasse
/// polynomial `sum_i C(m, i)^2 L^i`, `m = (p-1)/2`, are the supersingular
/// `L`, and `L -> j` is 6-to-1 except above `j = 0` (2 preimages, the roots of
/// `L^2 - L + 1`) and `j = 1728` (3 preimages, among them `L = -1`).
pub fn ss_count_legendre(p: u64) -> Result<u64> {
    check_prime(p)?;
    if p < 5 {
        return Ok(1);
    }
    let m = (p - 1) / 2;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    let mut binom = 1u64;
    for i in 0..=m {
        coeffs.push(crate::arith::mul_mod(binom, binom, p));
        // C(m, i+1) = C(m, i) (m - i) / (i + 1)
        let next = crate::arith::mul_mod(binom, (m - i) % p, p);
        binom = crate::arith::mul_mod(next, crate::arith::pow_mod(i + 1, p - 2, p), p);
    }
    let hasse = FpPoly::new(p, coeffs);
    assert_eq!(fp_poly::distinct_root_count(&hasse) as u64, m, "the Hasse polynomial is separable");
    let at_1728 = u64::from(hasse.eval(p - 1) == 0);
    let at_0 = u64::from(hasse.gcd(&FpPoly::from_signed(p, &[1, -1, 1])).degree() == 2);
    let generic = m - 2 * at_0 - 3 * at_1728;
    assert_eq!(generic % 6, 0, "generic supersingular L come in orbits of six");
    Ok(at_0 + at_1728 + generic / 6)
}

#[derive(Debug, Clone, Serialize)]
pub struct GenusReport {
    pub p: u64,
    pub delta: i64,
    pub epsilon: u64,
    pub class_number: u64,
    /// `|O^x / Z^x|` of the order of discriminant `delta`: 1, 2 or 3.
    pub unit_index: u64,
    /// `r'(|delta|, S_p)`.
    pub lhs: u64,
    /// `epsilon * 12 / (p - 1) * h / unit_index`, as `(numerator, denominator)`.
    pub rhs: (u64, u64),
    pub equal: bool,
    /// Whether the case lies in the range where equality is expected
    /// (`delta` p-fundamental and prime to `2p`).
    pub asserted: bool,
}

/// `epsilon = 0` if `p` splits, `1` if `p` divides `delta` exactly once, `2` otherwise.
pub fn genus_epsilon(disc: &Discriminant, p: u64) -> u64 {
    let d = disc.value();
    let pi = p as i64;
    if kronecker(d, pi) == 1 {
        0
    } else if d % pi == 0 && d % (pi * pi) != 0 {
        1
    } else {
        2
    }
}

pub fn genus_identity_check(p: u64, disc: &Discriminant) -> Result<GenusReport> {
    if !ONE_CLASS_PRIMES.contains(&p) {
        return Err(Error::UnsupportedPrime(p));
    }
    let lattice = gross_lattice_for_prime(p)?;
    let lhs = count_primitive(&lattice.hessian, disc.abs(), PrimitiveMethod::Moebius)?;
    let epsilon = genus_epsilon(disc, p);
    let h = class_number(disc);
    let u = disc.unit_index();
    let rhs = Ratio::new(epsilon * 12 * h, (p - 1) * u);
    Ok(GenusReport {
        p,
        delta: disc.value(),
        epsilon,
        class_number: h,
        unit_index: u,
        lhs,
        rhs: (*rhs.numer(), *rhs.denom()),
        equal: Ratio::from(lhs) == rhs,
        asserted: disc.is_p_fundamental(p) && gcd(disc.abs(), 2 * p) == 1,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityReport {
    pub delta: i64,
    pub p: u64,
    pub classification: Classification,
    pub class_number: u64,
    /// `(degree of the squarefree factor, multiplicity)` pairs.
    pub factors: Vec<(u64, u32)>,
    pub multiplicity_sum: u64,
    pub multiplicity_max: u32,
    /// `r'(|delta|, S_p)` when `p` is a one-class prime, `delta` is
    /// p-fundamental and the reduction is supersingular.
    pub lattice_bound: Option<u64>,
    pub sum_matches: bool,
    pub bound_holds: Option<bool>,
}

pub fn multiplicity_report(store: &ClassPolynomialStore, disc: &Discriminant, p: u64) -> Result<MultiplicityReport> {
    check_prime(p)?;
    let poly = store.get(disc)?;
    let report = report_for_polynomial(&poly, disc, p);
    let factors: Vec<(u64, u32)> = poly
        .reduce_mod(p)
        .squarefree_factorization()
        .iter()
        .map(|(f, m)| (f.degree() as u64, *m))
        .collect();
    let sum: u64 = factors.iter().map(|(d, m)| d * *m as u64).sum();
    // the lattice bound concerns S(D) for p-fundamental D only
    let lattice_bound = if ONE_CLASS_PRIMES.contains(&p)
        && disc.is_p_fundamental(p)
        && report.classification != Classification::Ordinary
    {
        let lattice = gross_lattice_for_prime(p)?;
        Some(count_primitive(&lattice.hessian, disc.abs(), PrimitiveMethod::Moebius)?)
    } else {
        None
    };
    Ok(MultiplicityReport {
        delta: disc.value(),
        p,
        classification: report.classification,
        class_number: poly.degree() as u64,
        multiplicity_sum: sum,
        multiplicity_max: report.multiplicity_max,
        sum_matches: sum == poly.degree() as u64,
        bound_holds: lattice_bound.map(|b| report.multiplicity_max as u64 <= b),
        lattice_bound,
        factors,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SweepFilter {
    pub fundamental_only: bool,
    pub supersingular_only: bool,
    pub p_fundamental_only: bool,
}

impl SweepFilter {
    fn admits(&self, disc: &Discriminant, p: u64) -> bool {
        (!self.fundamental_only || disc.is_fundamental())
            && (!self.supersingular_only || is_supersingular_pair(disc, p))
            && (!self.p_fundamental_only || disc.is_p_fundamental(p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub delta: i64,
    pub p: u64,
    pub p_fundamental: bool,
    pub classification: Classification,
    pub class_number: u64,
    pub distinct_roots: u64,
    pub ss_count: u64,
    pub multiplicity_max: u32,
}

pub const SWEEP_TSV_HEADER: &str =
    "delta\tp\tp_fundamental\tclassification\tclass_number\tdistinct_roots\tss_count\tmultiplicity_max";

impl SweepRow {
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.delta,
            self.p,
            self.p_fundamental,
            self.classification,
            self.class_number,
            self.distinct_roots,
            self.ss_count,
            self.multiplicity_max
        )
    }
}

/// One row per admitted `(delta, p)`, ordered by `deltas` then `primes`.
/// Class polynomials are computed in parallel across `delta`.
pub fn sweep(
    store: &ClassPolynomialStore,
    deltas: &[i64],
    primes: &[u64],
    filter: SweepFilter,
) -> Result<Vec<SweepRow>> {
    for &p in primes {
        check_prime(p)?;
    }
    let per_delta: Vec<Result<Vec<SweepRow>>> = deltas
        .par_iter()
        .map(|&d| {
            let disc = Discriminant::new(d)?;
            let admitted: Vec<u64> = primes.iter().copied().filter(|&p| filter.admits(&disc, p)).collect();
            if admitted.is_empty() {
                return Ok(Vec::new());
            }
            let poly = store.get(&disc)?;
            Ok(admitted
                .into_iter()
                .map(|p| {
                    let r = report_for_polynomial(&poly, &disc, p);
                    SweepRow {
                        delta: d,
                        p,
                        p_fundamental: disc.is_p_fundamental(p),
                        classification: r.classification,
                        class_number: r.class_number,
                        distinct_roots: r.distinct_roots,
                        ss_count: ss_count(p),
                        multiplicity_max: r.multiplicity_max,
                    }
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_delta {
        rows.extend(r?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    fn store() -> ClassPolynomialStore {
        ClassPolynomialStore::in_memory()
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_and_count(&store(), &disc(-3), 101).unwrap();
        assert_eq!(r.distinct_roots, 1);
        assert_eq!(r.classification, Classification::Supersingular);
        let a = reduce_and_count(&store(), &disc(-75), 5).unwrap();
        let b = reduce_and_count(&store(), &disc(-3), 5).unwrap();
        assert_eq!((a.distinct_roots, b.distinct_roots), (1, 1));
        let c = reduce_and_count(&store(), &disc(-23), 2).unwrap();
        assert_eq!(c.classification, Classification::Ordinary);
        assert!(c.distinct_roots <= 3);
        assert!(reduce_and_count(&store(), &disc(-23), 9).is_err());
    }

    #[test]
    fn phenomenon_examples() {
        for (d, p) in [(-3, 5), (-4, 3), (-3, 7)] {
            assert!(phenomenon_check(&store(), &disc(d), p).unwrap().equal, "({d}, {p})");
        }
    }

    #[test]
    fn ss_count_examples() {
        assert_eq!(ss_count(2), 1);
        assert_eq!(ss_count(3), 1);
        assert_eq!(ss_count(11), 2);
        assert_eq!(ss_count(13), 1);
        assert_eq!(ss_count(101), 9);
    }

    #[test]
    fn ss_count_matches_legendre_family() {
        for p in crate::arith::primes_up_to(100) {
            assert_eq!(ss_count(p), ss_count_legendre(p).unwrap(), "p={p}");
        }
    }

    #[test]
    fn genus_examples() {
        let r = genus_identity_check(2, &disc(-3)).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equal), (8, (8, 1), true));
        let r = genus_identity_check(3, &disc(-3)).unwrap();
        assert_eq!(r.epsilon, 1);
        assert_eq!(r.rhs, (2, 1));
        assert_eq!(genus_identity_check(11, &disc(-3)).unwrap_err(), Error::UnsupportedPrime(11));
    }

    #[test]
    fn multiplicity_examples() {
        let m = multiplicity_report(&store(), &disc(-3), 2).unwrap();
        assert_eq!((m.multiplicity_max, m.lattice_bound, m.bound_holds), (1, Some(8), Some(true)));
        let m = multiplicity_report(&store(), &disc(-75), 5).unwrap();
        assert_eq!(m.factors, vec![(1, 2)]);
        assert!(m.sum_matches);
        assert_eq!(m.lattice_bound, None, "-75 is not 5-fundamental");
        let m = multiplicity_report(&store(), &disc(-4), 101).unwrap();
        assert_eq!(m.classification, Classification::Ordinary);
        assert_eq!(m.multiplicity_max, 1);
    }

    #[test]
    fn lattice_bound_on_p_fundamental_supersingular() {
        let store = store();
        for p in ONE_CLASS_PRIMES {
            for d in crate::arith::discriminants_in(3, 300) {
                let m = multiplicity_report(&store, &disc(d), p).unwrap();
                if let Some(holds) = m.bound_holds {
                    assert!(holds, "D={d}, p={p}: {} > {:?}", m.multiplicity_max, m.lattice_bound);
                }
            }
        }
    }

    #[test]
    fn sweep_examples() {
        let deltas: Vec<i64> = crate::arith::discriminants_in(3, 200).collect();
        let rows = sweep(&store(), &deltas, &[11], SweepFilter::default()).unwrap();
        assert_eq!(rows.len(), deltas.len());
        for r in rows.iter().filter(|r| r.classification == Classification::Supersingular) {
            assert!(r.distinct_roots <= 2, "{r:?}");
        }
        assert!(sweep(&store(), &[], &[11], SweepFilter::default()).unwrap().is_empty());
        // D = -3 p^2 reduces to the single point j = 0
        for p in [5u64, 7, 11] {
            let d = -3 * (p * p) as i64;
            let rows = sweep(&store(), &[d], &[p], SweepFilter::default()).unwrap();
            assert_eq!(rows[0].distinct_roots, 1);
            let poly = store().get(&disc(d)).unwrap().reduce_mod(p).radical();
            assert_eq!(poly, FpPoly::x(p));
        }
    }
}
