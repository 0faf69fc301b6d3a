//! The acceptance suite: ten checks over lattices, bounds and class
//! polynomials, each with a wall-clock budget. A criterion passes when every
//! instance it covers holds and it finishes within its budget.
//!
//! The suite is shared by `singmod verify` and the `acceptance` test target.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{discriminants_in, gcd, primes_up_to, Discriminant};
use crate::binary_forms::{dirichlet_bound_holds, reduced_forms};
use crate::cm_reduction::{
    genus_identity_check, multiplicity_report, phenomenon_check, ss_count, sweep, Classification,
    ClassPolynomialStore, SweepFilter, ONE_CLASS_PRIMES,
};
use crate::corpus;
use crate::error::Result;
use crate::quad_poly::qp_bound_holds;
use crate::quaternion::gross_lattice_for_prime;
use crate::ternary_forms::{
    automorph_group_order, hermite_dirichlet_bound_for, minimal_binary_sublattice, slices_count_with, TernaryQF,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub budget_secs: u64,
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, name: "gross-lattice-invariants", budget_secs: 60 },
    Criterion { id: 2, name: "gross-automorphs", budget_secs: 1 },
    Criterion { id: 3, name: "slices-method", budget_secs: 600 },
    Criterion { id: 4, name: "hermite-dirichlet-bound", budget_secs: 600 },
    Criterion { id: 5, name: "dirichlet-bound", budget_secs: 300 },
    Criterion { id: 6, name: "quadratic-polynomial-bound", budget_secs: 300 },
    Criterion { id: 7, name: "genus-identity", budget_secs: 120 },
    Criterion { id: 8, name: "phenomenon", budget_secs: 600 },
    Criterion { id: 9, name: "multiplicity-accounting", budget_secs: 300 },
    Criterion { id: 10, name: "limit-trend", budget_secs: 900 },
];

pub const TERNARY_CORPUS_SIZE: usize = 200;
pub const POLY_CORPUS_SIZE: usize = 500;

#[derive(Debug, Clone)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub store: ClassPolynomialStore,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig { seed: corpus::DEFAULT_SEED, store: ClassPolynomialStore::from_env() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    /// Number of individual instances checked.
    pub checked: u64,
    /// Instances that did not hold, or a computation error.
    pub failures: Vec<String>,
    pub elapsed_secs: f64,
    pub budget_secs: u64,
    pub within_budget: bool,
    pub passed: bool,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} checked={:<9} failures={:<4} time={:.1}s/{}s",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked,
            self.failures.len(),
            self.elapsed_secs,
            self.budget_secs
        )?;
        if let Some(first) = self.failures.first() {
            write!(f, " first: {first}")?;
        }
        Ok(())
    }
}

/// Running tally of one criterion. Failure messages beyond the first few are
/// only counted.
#[derive(Default)]
struct Tally {
    checked: u64,
    failures: Vec<String>,
    suppressed: u64,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        if self.failures.len() < 20 {
            self.failures.push(what);
        } else {
            self.suppressed += 1;
        }
    }

    fn absorb<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checked += 1;
                self.fail(format!("{}: {e}", e.code()));
                None
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.suppressed += other.suppressed;
        for f in other.failures {
            self.fail(f);
        }
    }
}

pub fn run_criterion(id: u8, config: &AcceptanceConfig) -> CriterionResult {
    let criterion = CRITERIA.iter().find(|c| c.id == id).copied().expect("criterion ids are 1..=10");
    let start = Instant::now();
    let mut tally = match id {
        1 => gross_invariants(),
        2 => gross_automorphs(),
        3 => slices_method(config.seed),
        4 => hermite_dirichlet(config.seed),
        5 => dirichlet(),
        6 => quadratic_polynomial(config.seed),
        7 => genus_identity(),
        8 => phenomenon(&config.store),
        9 => multiplicity(&config.store),
        10 => limit_trend(&config.store),
        _ => unreachable!(),
    };
    let elapsed = start.elapsed().as_secs_f64();
    if tally.suppressed > 0 {
        let more = tally.suppressed;
        tally.failures.push(format!("... and {more} more"));
    }
    let within_budget = elapsed <= criterion.budget_secs as f64;
    CriterionResult {
        id,
        name: criterion.name,
        checked: tally.checked,
        passed: tally.failures.is_empty() && within_budget,
        failures: tally.failures,
        elapsed_secs: elapsed,
        budget_secs: criterion.budget_secs,
        within_budget,
    }
}

/// Runs every criterion in order, calling `report` as each one finishes.
pub fn run_all(config: &AcceptanceConfig, mut report: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|c| {
            let r = run_criterion(c.id, config);
            report(&r);
            r
        })
        .collect()
}

fn gross_invariants() -> Tally {
    let mut t = Tally::default();
    for p in primes_up_to(200) {
        let Some(g) = t.absorb(gross_lattice_for_prime(p)) else { continue };
        let (det, level) = (g.hessian.hessian_det(), g.hessian.level());
        t.check(det == 32 * p * p, || format!("p={p}: det {det} != {}", 32 * p * p));
        t.check(level == 4 * p, || format!("p={p}: level {level} != {}", 4 * p));
        if p == 2 {
            let golden = [[8, 0, 4], [0, 8, 4], [4, 4, 6]];
            t.check(*g.hessian.hessian() == golden, || format!("p=2: Hessian {:?}", g.hessian.hessian()));
            t.check(det == 128 && level == 8, || format!("p=2: det {det}, level {level}"));
        }
        if p == 163 {
            t.check(det == (1 << 5) * 163 * 163 && level == 4 * 163, || format!("p=163: det {det}, level {level}"));
        }
    }
    t
}

fn gross_automorphs() -> Tally {
    let mut t = Tally::default();
    if let Some(g) = t.absorb(gross_lattice_for_prime(2)) {
        let n = automorph_group_order(&g.hessian);
        t.check(n == 48, || format!("|O(S_2)| = {n}"));
    }
    t
}

fn gross_lattices_up_to(bound: u64, t: &mut Tally) -> Vec<TernaryQF> {
    primes_up_to(bound).into_iter().filter_map(|p| t.absorb(gross_lattice_for_prime(p)).map(|g| g.hessian)).collect()
}

fn slices_method(seed: u64) -> Tally {
    const N: u64 = 300;
    let forms = corpus::ternary_forms(seed, TERNARY_CORPUS_SIZE);
    let tallies: Vec<Tally> = forms
        .par_iter()
        .map(|q| {
            let mut t = Tally::default();
            let brute = q.representation_counts(N);
            let dec = minimal_binary_sublattice(q);
            t.check(dec.satisfies_hermite_rankin(), || format!("{q}: Hermite-Rankin fails"));
            for n in 1..=N {
                let s = slices_count_with(q, &dec, n).total;
                t.check(s == brute[n as usize], || format!("{q}, n={n}: slices {s} != {}", brute[n as usize]));
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

fn hermite_dirichlet(seed: u64) -> Tally {
    const N: u64 = 2000;
    let mut t = Tally::default();
    let mut forms = corpus::ternary_forms(seed, TERNARY_CORPUS_SIZE);
    forms.extend(gross_lattices_up_to(200, &mut t));
    let tallies: Vec<Tally> = forms
        .par_iter()
        .map(|q| {
            let mut t = Tally::default();
            let counts = q.representation_counts(N);
            for n in 1..=N {
                let Some(rep) = t.absorb(hermite_dirichlet_bound_for(q.hessian_det(), n, counts[n as usize])) else {
                    continue;
                };
                t.check(rep.holds, || format!("{q}, n={n}: r={} > {}", rep.representations, rep.bound));
            }
            t
        })
        .collect();
    for x in tallies {
        t.merge(x);
    }
    t
}

fn dirichlet() -> Tally {
    const N: u64 = 5000;
    let forms: Vec<_> = discriminants_in(3, 200)
        .flat_map(|d| reduced_forms(&Discriminant::new(d).expect("enumerated discriminant")))
        .collect();
    let tallies: Vec<Tally> = forms
        .par_iter()
        .map(|f| {
            let mut t = Tally::default();
            for n in 1..=N {
                if let Some(rep) = t.absorb(dirichlet_bound_holds(f, n)) {
                    t.check(rep.holds, || format!("{f:?}, n={n}: r={} > {}", rep.representations, rep.bound));
                }
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

fn quadratic_polynomial(seed: u64) -> Tally {
    const N: u64 = 500;
    let polys = corpus::quadratic_polynomials(seed, POLY_CORPUS_SIZE);
    let tallies: Vec<Tally> = polys
        .par_iter()
        .map(|p| {
            let mut t = Tally::default();
            for n in 1..=N {
                if let Some(rep) = t.absorb(qp_bound_holds(p, n)) {
                    t.check(rep.holds, || format!("{p:?}, n={n}: r={} > {}", rep.representations, rep.bound));
                }
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

fn genus_identity() -> Tally {
    let mut t = Tally::default();
    if let Some(g) = t.absorb(genus_identity_check(2, &Discriminant::new(-3).expect("-3"))) {
        t.check(g.lhs == 8 && g.rhs == (8, 1), || format!("p=2, D=-3: lhs {} rhs {:?}", g.lhs, g.rhs));
    }
    for p in ONE_CLASS_PRIMES {
        for d in discriminants_in(3, 400) {
            let disc = Discriminant::new(d).expect("enumerated discriminant");
            if !disc.is_p_fundamental(p) || gcd(disc.abs(), 2 * p) != 1 {
                continue;
            }
            if let Some(g) = t.absorb(genus_identity_check(p, &disc)) {
                t.check(g.equal, || format!("p={p}, D={d}: lhs {} rhs {}/{}", g.lhs, g.rhs.0, g.rhs.1));
            }
        }
    }
    t
}

/// `(D, p)` with `|D| p^2 <= bound` and `p` prime to the conductor of `D`.
pub fn phenomenon_pairs(bound: u64) -> Vec<(i64, u64)> {
    let mut pairs = Vec::new();
    for p in primes_up_to(((bound / 3) as f64).sqrt() as u64 + 1) {
        if 3 * p * p > bound {
            break;
        }
        for d in discriminants_in(3, bound / (p * p)) {
            if Discriminant::new(d).expect("enumerated discriminant").is_p_fundamental(p) {
                pairs.push((d, p));
            }
        }
    }
    pairs
}

fn phenomenon(store: &ClassPolynomialStore) -> Tally {
    let pairs = phenomenon_pairs(100_000);
    // the largest polynomials first, so the pool stays busy to the end
    let mut order = pairs.clone();
    order.sort_by_key(|&(d, p)| std::cmp::Reverse(d.unsigned_abs() * p * p));
    let tallies: Vec<Tally> = order
        .par_iter()
        .map(|&(d, p)| {
            let mut t = Tally::default();
            let disc = Discriminant::new(d).expect("enumerated discriminant");
            if let Some(r) = t.absorb(phenomenon_check(store, &disc, p)) {
                t.check(r.equal, || {
                    format!("D={d}, p={p}: {} vs {} distinct roots", r.distinct_roots, r.lifted_distinct_roots)
                });
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

fn multiplicity(store: &ClassPolynomialStore) -> Tally {
    let primes = primes_up_to(50);
    let deltas: Vec<i64> = discriminants_in(3, 2000).collect();
    let tallies: Vec<Tally> = deltas
        .par_iter()
        .map(|&d| {
            let mut t = Tally::default();
            let disc = Discriminant::new(d).expect("enumerated discriminant");
            for &p in &primes {
                let Some(r) = t.absorb(multiplicity_report(store, &disc, p)) else { continue };
                t.check(r.sum_matches, || format!("D={d}, p={p}: sum {} != h {}", r.multiplicity_sum, r.class_number));
                let unramified_ordinary =
                    r.classification == Classification::Ordinary && disc.is_p_fundamental(p) && disc.abs() % p != 0;
                if unramified_ordinary {
                    t.check(r.multiplicity_max == 1, || format!("D={d}, p={p}: multiplicity {}", r.multiplicity_max));
                }
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

fn limit_trend(store: &ClassPolynomialStore) -> Tally {
    let mut t = Tally::default();
    let primes = [11, 23, 47];
    let deltas: Vec<i64> = discriminants_in(3, 5000).collect();
    let filter = SweepFilter { fundamental_only: true, supersingular_only: true, p_fundamental_only: false };
    let Some(rows) = t.absorb(sweep(store, &deltas, &primes, filter)) else { return t };
    for row in &rows {
        t.check(row.distinct_roots <= row.ss_count, || {
            format!("D={}, p={}: {} > #SS = {}", row.delta, row.p, row.distinct_roots, row.ss_count)
        });
    }
    for p in primes {
        let attained = rows.iter().any(|r| r.p == p && r.distinct_roots == ss_count(p));
        t.check(attained, || format!("p={p}: #red_p never reaches #SS = {}", ss_count(p)));
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_respect_the_bound() {
        let pairs = phenomenon_pairs(1000);
        assert!(pairs.contains(&(-3, 5)) && pairs.contains(&(-4, 3)));
        assert!(!pairs.contains(&(-12, 2)), "2 divides the conductor of -12");
        assert!(pairs.iter().all(|&(d, p)| d.unsigned_abs() * p * p <= 1000));
    }

    #[test]
    fn quick_criteria() {
        let config = AcceptanceConfig { seed: 1, store: ClassPolynomialStore::in_memory() };
        for id in [1, 2, 7] {
            let r = run_criterion(id, &config);
            assert!(r.passed, "{r}");
        }
    }
}
