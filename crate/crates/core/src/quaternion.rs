//! Rational quaternion algebras `(a, b)`, explicit maximal orders of the
//! definite algebra ramified at `{p, oo}`, and the Gross lattice: the
//! trace-zero part of `Z + 2R` with its reduced norm form.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{is_prime, is_square, kronecker};
use crate::error::{Error, Result};
use crate::quad_poly::Rational;
use crate::ternary_forms::{det3, level_of_hessian, Mat3, TernaryQF};

/// `i^2 = a`, `j^2 = b`, `k = ij = -ji`, `k^2 = -ab`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuaternionAlgebra {
    pub a: i64,
    pub b: i64,
}

impl QuaternionAlgebra {
    pub fn new(a: i64, b: i64) -> Self {
        assert!(a != 0 && b != 0, "structure constants must be nonzero");
        QuaternionAlgebra { a, b }
    }

    pub fn is_definite(&self) -> bool {
        self.a < 0 && self.b < 0
    }

    pub fn mul(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let a = Rational::from(self.a as i128);
        let b = Rational::from(self.b as i128);
        let [x0, x1, x2, x3] = x.0;
        let [y0, y1, y2, y3] = y.0;
        Quaternion([
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }

    pub fn norm(&self, x: &Quaternion) -> Rational {
        let a = Rational::from(self.a as i128);
        let b = Rational::from(self.b as i128);
        let [x0, x1, x2, x3] = x.0;
        x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3
    }

    /// `Tr(x conj(y))`, the bilinear form attached to twice the norm.
    pub fn trace_pairing(&self, x: &Quaternion, y: &Quaternion) -> Rational {
        self.mul(x, &y.conjugate()).trace()
    }
}

/// Coordinates in the basis `1, i, j, k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Quaternion(pub [Rational; 4]);

impl Quaternion {
    pub fn from_ints(c: [i64; 4]) -> Self {
        Quaternion(c.map(|x| Rational::from(x as i128)))
    }

    /// `(c0 + c1 i + c2 j + c3 k) / den`
    pub fn scaled(c: [i64; 4], den: i64) -> Self {
        Quaternion(c.map(|x| Rational::new(x as i128, den as i128)))
    }

    pub fn one() -> Self {
        Quaternion::from_ints([1, 0, 0, 0])
    }

    pub fn conjugate(&self) -> Self {
        let [x0, x1, x2, x3] = self.0;
        Quaternion([x0, -x1, -x2, -x3])
    }

    pub fn trace(&self) -> Rational {
        self.0[0] * Rational::from(2)
    }
}

/// Reduced trace and reduced norm of `x`.
pub fn reduced_norm_trace(algebra: &QuaternionAlgebra, x: &Quaternion) -> (Rational, Rational) {
    (x.trace(), algebra.norm(x))
}

/// Upper Hermite normal form of the row span: pivots positive, entries above
/// a pivot reduced into `[0, pivot)`, zero rows dropped.
pub fn hnf_rows(mut rows: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..ncols {
        loop {
            let candidate = (pivot_row..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].abs());
            let Some(best) = candidate else { break };
            rows.swap(pivot_row, best);
            let pivot = rows[pivot_row].clone();
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col] != 0 {
                    let k = rows[r][col].div_euclid(pivot[col]);
                    for c in 0..ncols {
                        rows[r][c] -= k * pivot[c];
                    }
                    done &= rows[r][col] == 0;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row == rows.len() || rows[pivot_row][col] == 0 {
            continue;
        }
        if rows[pivot_row][col] < 0 {
            rows[pivot_row].iter_mut().for_each(|x| *x = -*x);
        }
        let pivot = rows[pivot_row].clone();
        for r in 0..pivot_row {
            let k = rows[r][col].div_euclid(pivot[col]);
            for c in 0..ncols {
                rows[r][c] -= k * pivot[c];
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// Coefficients of `target` in a full-rank upper HNF basis, if integral.
fn solve_in_hnf(hnf: &[Vec<i128>], target: &[i128]) -> Option<Vec<i128>> {
    let mut rest = target.to_vec();
    let mut coeffs = Vec::with_capacity(hnf.len());
    for row in hnf {
        let col = row.iter().position(|&x| x != 0)?;
        if rest[col] % row[col] != 0 {
            return None;
        }
        let k = rest[col] / row[col];
        for (r, &x) in rest.iter_mut().zip(row) {
            *r -= k * x;
        }
        coeffs.push(k);
    }
    rest.iter().all(|&x| x == 0).then_some(coeffs)
}

/// A full-rank lattice in the algebra, stored as integer numerators over a
/// common denominator and kept in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuaternionOrder {
    pub algebra: QuaternionAlgebra,
    pub denominator: i128,
    pub numerators: Vec<Vec<i128>>,
}

impl QuaternionOrder {
    /// Validates `1 in O`, rank 4 and closure under multiplication; the
    /// basis is replaced by its Hermite normal form.
    pub fn new(algebra: QuaternionAlgebra, basis: &[Quaternion]) -> Result<Self> {
        let den = basis
            .iter()
            .flat_map(|q| q.0.iter().map(|c| *c.denom()))
            .fold(1i128, |acc, d| acc.lcm(&d));
        let rows: Vec<Vec<i128>> = basis
            .iter()
            .map(|q| q.0.iter().map(|c| (c * Rational::from(den)).to_integer()).collect())
            .collect();
        let numerators = hnf_rows(rows);
        if numerators.len() < 4 {
            return Err(Error::RankDeficient);
        }
        let order = QuaternionOrder { algebra, denominator: den, numerators };
        if !order.contains(&Quaternion::one()) {
            return Err(Error::MissingUnit);
        }
        // closure is checked on the caller's basis, so indices refer to it
        for (s, x) in basis.iter().enumerate() {
            for (t, y) in basis.iter().enumerate() {
                if !order.contains(&algebra.mul(x, y)) {
                    return Err(Error::NotClosed(s, t));
                }
            }
        }
        Ok(order)
    }

    pub fn basis(&self) -> Vec<Quaternion> {
        self.numerators
            .iter()
            .map(|r| Quaternion([0, 1, 2, 3].map(|c| Rational::new(r[c], self.denominator))))
            .collect()
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        let scaled: Vec<Rational> = x.0.iter().map(|c| c * Rational::from(self.denominator)).collect();
        if scaled.iter().any(|c| !c.is_integer()) {
            return false;
        }
        let target: Vec<i128> = scaled.iter().map(|c| c.to_integer()).collect();
        solve_in_hnf(&self.numerators, &target).is_some()
    }

    /// `sqrt |det (Tr(b_i conj b_j))|`.
    pub fn reduced_discriminant(&self) -> Result<u64> {
        let basis = self.basis();
        let gram: Vec<Vec<Rational>> = basis
            .iter()
            .map(|x| basis.iter().map(|y| self.algebra.trace_pairing(x, y)).collect())
            .collect();
        let det = rational_det(gram).abs();
        if !det.is_integer() {
            return Err(Error::NonSquareDiscriminant(det.to_string()));
        }
        match is_square(det.to_integer()) {
            Some(root) => Ok(root as u64),
            None => Err(Error::NonSquareDiscriminant(det.to_string())),
        }
    }
}

pub fn verify_order(algebra: QuaternionAlgebra, basis: &[Quaternion]) -> Result<QuaternionOrder> {
    QuaternionOrder::new(algebra, basis)
}

pub fn reduced_discriminant(order: &QuaternionOrder) -> Result<u64> {
    order.reduced_discriminant()
}

fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            let factor = m[r][col] / p;
            if !factor.is_zero() {
                for c in col..n {
                    let sub = factor * m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    det
}

/// The Hurwitz order `Z<1, i, j, (1+i+j+k)/2>` in `(-1, -1)`.
pub fn hurwitz_order() -> QuaternionOrder {
    let alg = QuaternionAlgebra::new(-1, -1);
    let basis = [
        Quaternion::from_ints([1, 0, 0, 0]),
        Quaternion::from_ints([0, 1, 0, 0]),
        Quaternion::from_ints([0, 0, 1, 0]),
        Quaternion::scaled([1, 1, 1, 1], 2),
    ];
    QuaternionOrder::new(alg, &basis).expect("the Hurwitz order is an order")
}

/// The Lipschitz order `Z<1, i, j, k>` in `(-1, -1)`.
pub fn lipschitz_order() -> QuaternionOrder {
    let basis = [0, 1, 2, 3].map(|c| {
        let mut e = [0; 4];
        e[c] = 1;
        Quaternion::from_ints(e)
    });
    QuaternionOrder::new(QuaternionAlgebra::new(-1, -1), &basis).expect("the Lipschitz order is an order")
}

/// `End(Z^2)` inside `(1, 1)`, where `i = diag(1, -1)` and `j` swaps the
/// coordinates: `e11 = (1+i)/2`, `e22 = (1-i)/2`, `e12 = (j+k)/2`, `e21 = (j-k)/2`.
pub fn matrix_order() -> QuaternionOrder {
    let basis = [
        Quaternion::scaled([1, 1, 0, 0], 2),
        Quaternion::scaled([1, -1, 0, 0], 2),
        Quaternion::scaled([0, 0, 1, 1], 2),
        Quaternion::scaled([0, 0, 1, -1], 2),
    ];
    QuaternionOrder::new(QuaternionAlgebra::new(1, 1), &basis).expect("End(Z^2) is an order")
}

pub const AUXILIARY_PRIME_BOUND: u64 = 1000;

/// Orders for `p = 1 (mod 8)` in `(-p, -q)`, one per admissible auxiliary
/// prime `q = 3 (mod 4)` with `(p|q) = -1`.
fn candidates_one_mod_eight(p: u64) -> impl Iterator<Item = Result<QuaternionOrder>> {
    (3..=AUXILIARY_PRIME_BOUND)
        .filter(move |&q| q % 4 == 3 && is_prime(q) && kronecker(p as i64, q as i64) == -1)
        .map(move |q| {
            // -p is a square modulo q, so q | c^2 p + 1 for some c
            let c = (0..q).find(|&c| (c * c % q * (p % q) + 1) % q == 0).expect("-1/p is a square mod q");
            let (p, q, c) = (p as i64, q as i64, c as i64);
            let alg = QuaternionAlgebra::new(-p, -q);
            let basis = [
                Quaternion::scaled([1, 0, 1, 0], 2),
                Quaternion::scaled([0, 1, 0, 1], 2),
                Quaternion::scaled([0, 0, 1, c], q),
                Quaternion::from_ints([0, 0, 0, 1]),
            ];
            QuaternionOrder::new(alg, &basis)
        })
}

/// An explicit maximal order of the definite algebra ramified at `{p, oo}`,
/// checked through its reduced discriminant.
pub fn maximal_order(p: u64) -> Result<QuaternionOrder> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pi = p as i64;
    let order = match p {
        2 => hurwitz_order(),
        _ if p % 4 == 3 => QuaternionOrder::new(
            QuaternionAlgebra::new(-1, -pi),
            &[
                Quaternion::from_ints([1, 0, 0, 0]),
                Quaternion::from_ints([0, 1, 0, 0]),
                Quaternion::scaled([1, 0, 1, 0], 2),
                Quaternion::scaled([0, 1, 0, 1], 2),
            ],
        )?,
        _ if p % 8 == 5 => QuaternionOrder::new(
            QuaternionAlgebra::new(-2, -pi),
            &[
                Quaternion::scaled([1, 0, 1, 1], 2),
                Quaternion::scaled([0, 1, 2, 1], 4),
                Quaternion::from_ints([0, 0, 1, 0]),
                Quaternion::from_ints([0, 0, 0, 1]),
            ],
        )?,
        _ => {
            let mut last = Error::AuxiliaryPrimeNotFound { p, bound: AUXILIARY_PRIME_BOUND };
            for candidate in candidates_one_mod_eight(p) {
                match candidate.and_then(|o| check_maximal(o, p)) {
                    Ok(o) => return Ok(o),
                    Err(e) => last = e,
                }
            }
            return Err(last);
        }
    };
    check_maximal(order, p)
}

fn check_maximal(order: QuaternionOrder, p: u64) -> Result<QuaternionOrder> {
    match order.reduced_discriminant() {
        Ok(d) if d == p => Ok(order),
        Ok(d) => Err(Error::MaximalityCheckFailed { p, found: d.to_string() }),
        Err(e) => Err(Error::MaximalityCheckFailed { p, found: e.to_string() }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrossLattice {
    pub hessian: TernaryQF,
    pub source_prime: u64,
    /// Three trace-zero elements of `Z + 2R` spanning the lattice.
    pub basis_in_order: Vec<Quaternion>,
}

/// Trace-zero part of `Z + 2O` as a lower-triangular integer basis in the
/// coordinates `i, j, k` (over the order's denominator).
fn trace_zero_basis(order: &QuaternionOrder) -> Vec<Vec<i128>> {
    let den = order.denominator;
    let mut rows = vec![vec![den, 0, 0, 0]];
    rows.extend(order.numerators.iter().map(|r| r.iter().map(|x| 2 * x).collect()));
    let hnf = hnf_rows(rows);
    // Row 0 carries the only nonzero real part; the rest span the trace-zero part.
    let trace_zero: Vec<Vec<i128>> = hnf[1..].iter().map(|r| vec![r[3], r[2], r[1]]).collect();
    let mut lower: Vec<Vec<i128>> = hnf_rows(trace_zero).into_iter().map(|r| vec![r[2], r[1], r[0]]).collect();
    lower.reverse();
    lower
}

/// The lattice `{b in Z + 2O : Tr b = 0}` with its reduced norm form; the
/// identities `H = 32 p^2` and `N = 4 p` are checked.
pub fn gross_lattice(order: &QuaternionOrder, p: u64) -> Result<GrossLattice> {
    let den = order.denominator;
    let basis: Vec<Quaternion> = trace_zero_basis(order)
        .into_iter()
        .map(|r| Quaternion([Rational::zero(), Rational::new(r[0], den), Rational::new(r[1], den), Rational::new(r[2], den)]))
        .collect();
    let mismatch = |what: String| Error::InvariantMismatch { p, what };
    let mut h: Mat3 = [[0; 3]; 3];
    for s in 0..3 {
        for t in 0..3 {
            let v = order.algebra.trace_pairing(&basis[s], &basis[t]);
            if !v.is_integer() {
                return Err(mismatch(format!("non-integral pairing {v}")));
            }
            h[s][t] = v.to_integer() as i64;
        }
    }
    let hessian = TernaryQF::from_hessian(h).map_err(|e| mismatch(e.to_string()))?;
    let expected_det = 32 * p * p;
    if hessian.hessian_det() != expected_det {
        return Err(mismatch(format!("Hessian determinant {} != {expected_det}", hessian.hessian_det())));
    }
    if hessian.level() != 4 * p {
        return Err(mismatch(format!("level {} != {}", hessian.level(), 4 * p)));
    }
    Ok(GrossLattice { hessian, source_prime: p, basis_in_order: basis })
}

/// `gross_lattice(maximal_order(p), p)`.
pub fn gross_lattice_for_prime(p: u64) -> Result<GrossLattice> {
    gross_lattice(&maximal_order(p)?, p)
}

/// The split case `End(Z^2)`: the trace-zero part of `Z + 2 M_2(Z)` has basis
/// `[[0,2],[0,0]], [[1,0],[0,-1]], [[0,0],[2,0]]`. With the form `-det` this
/// is `y^2 + 4xz`, equivalent to `y^2 - 4xz`; it is indefinite, so only the
/// Hessian, its determinant and its level are produced.
pub fn split_gross_hessian() -> (Mat3, i128, u64) {
    let basis: [[[i64; 2]; 2]; 3] = [[[0, 2], [0, 0]], [[1, 0], [0, -1]], [[0, 0], [2, 0]]];
    let det2 = |m: &[[i64; 2]; 2]| m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let add = |x: &[[i64; 2]; 2], y: &[[i64; 2]; 2]| [[x[0][0] + y[0][0], x[0][1] + y[0][1]], [x[1][0] + y[1][0], x[1][1] + y[1][1]]];
    let mut h: Mat3 = [[0; 3]; 3];
    for s in 0..3 {
        for t in 0..3 {
            let sum = add(&basis[s], &basis[t]);
            h[s][t] = -(det2(&sum) - det2(&basis[s]) - det2(&basis[t]));
        }
    }
    let det = det3(&h);
    (h, det, level_of_hessian(&h))
}
