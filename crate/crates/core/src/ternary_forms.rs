//! Positive definite integral ternary quadratic forms `Q(v) = v^T A v / 2`,
//! carried by their Hessian matrix `A` (symmetric, integral, even diagonal).
//!
//! All counting is exact: the enumeration bounds come from completing the
//! square over the rationals and are evaluated with integer square roots.

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{gcd, icbrt, isqrt, moebius, quadratic_le_zero_interval, sigma0, sigma0_tilde};
use crate::binary_forms::BinaryQF;
use crate::error::{Error, Result};
use crate::quad_poly::{count_representations_poly, IntegerValuedQP};

pub type Mat3 = [[i64; 3]; 3];
pub type Vec3 = [i64; 3];

pub fn det3(m: &Mat3) -> i128 {
    let m = m.map(|r| r.map(|x| x as i128));
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Adjugate (transposed cofactor matrix), so `A * adj(A) = det(A) * I`.
pub fn adjugate3(m: &Mat3) -> [[i128; 3]; 3] {
    let m = m.map(|r| r.map(|x| x as i128));
    let mut adj = [[0i128; 3]; 3];
    for (i, row) in adj.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            *entry = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    }
    adj
}

/// Smallest `N > 0` with `N A^{-1}` integral and of even diagonal. Also valid
/// for nondegenerate indefinite Hessians.
pub fn level_of_hessian(a: &Mat3) -> u64 {
    let det = det3(a);
    assert!(det != 0, "degenerate Hessian");
    let adj = adjugate3(a);
    let d = det.unsigned_abs();
    let mut level: u128 = 1;
    for (i, row) in adj.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            // N x / det integral (off diagonal) or even (diagonal)
            let modulus = if i == j { 2 * d } else { d };
            let need = modulus / gcd_u128(modulus, x.unsigned_abs());
            level = level.lcm(&need);
        }
    }
    level as u64
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

pub fn dot(a: &Vec3, b: &Vec3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn content(v: &Vec3) -> u64 {
    gcd(gcd(v[0].unsigned_abs(), v[1].unsigned_abs()), v[2].unsigned_abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TernaryQF {
    hessian: Mat3,
}

impl TernaryQF {
    /// From the Hessian entries `a11, a22, a33, a12, a13, a23`.
    pub fn from_entries(e: [i64; 6]) -> Result<Self> {
        let [a11, a22, a33, a12, a13, a23] = e;
        Self::from_hessian([[a11, a12, a13], [a12, a22, a23], [a13, a23, a33]])
    }

    pub fn from_hessian(a: Mat3) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                if a[i][j] != a[j][i] {
                    return Err(Error::InvalidTernaryForm("Hessian is not symmetric".into()));
                }
            }
            if a[i][i] % 2 != 0 {
                return Err(Error::InvalidTernaryForm("Hessian diagonal must be even".into()));
            }
        }
        let m1 = a[0][0] as i128;
        let m2 = a[0][0] as i128 * a[1][1] as i128 - a[0][1] as i128 * a[1][0] as i128;
        if m1 <= 0 || m2 <= 0 || det3(&a) <= 0 {
            return Err(Error::InvalidTernaryForm("Hessian is not positive definite".into()));
        }
        Ok(TernaryQF { hessian: a })
    }

    /// `x^2 + y^2 + z^2`.
    pub fn sum_of_three_squares() -> Self {
        TernaryQF { hessian: [[2, 0, 0], [0, 2, 0], [0, 0, 2]] }
    }

    pub fn hessian(&self) -> &Mat3 {
        &self.hessian
    }

    /// The six entries `a11, a22, a33, a12, a13, a23`.
    pub fn entries(&self) -> [i64; 6] {
        let a = &self.hessian;
        [a[0][0], a[1][1], a[2][2], a[0][1], a[0][2], a[1][2]]
    }

    pub fn hessian_det(&self) -> u64 {
        det3(&self.hessian) as u64
    }

    pub fn level(&self) -> u64 {
        level_of_hessian(&self.hessian)
    }

    /// `covol(Q)^2 = H(Q) / 8` as a reduced fraction `(num, den)`.
    pub fn covol_squared(&self) -> (u64, u64) {
        let h = self.hessian_det();
        let g = gcd(h, 8);
        (h / g, 8 / g)
    }

    /// `u^T A v`, so that `Q(u + v) = Q(u) + Q(v) + bilinear(u, v)`.
    pub fn bilinear(&self, u: &Vec3, v: &Vec3) -> i64 {
        let a = &self.hessian;
        (0..3).map(|i| (0..3).map(|j| u[i] * a[i][j] * v[j]).sum::<i64>()).sum()
    }

    pub fn eval(&self, v: &Vec3) -> i64 {
        self.bilinear(v, v) / 2
    }

    /// The form `v -> Q(M v)`, i.e. Hessian `M^T A M`.
    pub fn transform(&self, m: &Mat3) -> Result<Self> {
        let cols: [Vec3; 3] = [0, 1, 2].map(|j| [m[0][j], m[1][j], m[2][j]]);
        let mut h = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = self.bilinear(&cols[i], &cols[j]);
            }
        }
        TernaryQF::from_hessian(h)
    }

    /// Visits every `v` with `Q(v) <= bound` together with `Q(v)`.
    pub fn for_each_vector_up_to(&self, bound: u64, mut visit: impl FnMut(&Vec3, u64)) {
        let a = self.hessian.map(|r| r.map(|x| x as i128));
        let n = bound as i128;
        let det = det3(&self.hessian);
        let minor = a[0][0] * a[1][1] - a[0][1] * a[0][1];
        // min over (x, y) of Q(x, y, z) is z^2 det / (2 minor)
        let z_max = isqrt((2 * n * minor / det) as u128) as i128;
        for z in -z_max..=z_max {
            // 2 a11 min_x Q(x, y, z) = minor y^2 + by y + cz, must be <= 2 a11 n
            let by = 2 * z * (a[0][0] * a[1][2] - a[0][1] * a[0][2]);
            let cz = z * z * (a[0][0] * a[2][2] - a[0][2] * a[0][2]);
            let Some((ylo, yhi)) = quadratic_le_zero_interval(minor, by, cz - 2 * a[0][0] * n) else {
                continue;
            };
            for y in ylo..=yhi {
                // a11 x^2 + 2 lin x + 2 q0 <= 2 n
                let lin = a[0][1] * y + a[0][2] * z;
                let q0 = (a[1][1] * y * y + a[2][2] * z * z) / 2 + a[1][2] * y * z;
                let Some((xlo, xhi)) = quadratic_le_zero_interval(a[0][0], 2 * lin, 2 * q0 - 2 * n) else {
                    continue;
                };
                for x in xlo..=xhi {
                    let value = a[0][0] * x * x / 2 + lin * x + q0;
                    debug_assert!(value >= 0 && value <= n);
                    visit(&[x as i64, y as i64, z as i64], value as u64);
                }
            }
        }
    }

    /// Visits every `v` with `Q(v) = n`.
    pub fn for_each_solution(&self, n: u64, mut visit: impl FnMut(&Vec3)) {
        let a = self.hessian.map(|r| r.map(|x| x as i128));
        let n_i = n as i128;
        let det = det3(&self.hessian);
        let minor = a[0][0] * a[1][1] - a[0][1] * a[0][1];
        let z_max = isqrt((2 * n_i * minor / det) as u128) as i128;
        for z in -z_max..=z_max {
            let by = 2 * z * (a[0][0] * a[1][2] - a[0][1] * a[0][2]);
            let cz = z * z * (a[0][0] * a[2][2] - a[0][2] * a[0][2]);
            let Some((ylo, yhi)) = quadratic_le_zero_interval(minor, by, cz - 2 * a[0][0] * n_i) else {
                continue;
            };
            for y in ylo..=yhi {
                let lin = a[0][1] * y + a[0][2] * z;
                let q0 = (a[1][1] * y * y + a[2][2] * z * z) / 2 + a[1][2] * y * z;
                // a11 x^2 + 2 lin x + 2 (q0 - n) = 0
                let disc = lin * lin - 2 * a[0][0] * (q0 - n_i);
                if disc < 0 {
                    continue;
                }
                let s = isqrt(disc as u128) as i128;
                if s * s != disc {
                    continue;
                }
                for num in [-lin - s, -lin + s] {
                    if num % a[0][0] == 0 {
                        visit(&[(num / a[0][0]) as i64, y as i64, z as i64]);
                    }
                    if s == 0 {
                        break;
                    }
                }
            }
        }
    }

    /// `r(n, Q)`, with `r(0, Q) = 1`.
    pub fn count_representations(&self, n: u64) -> u64 {
        let mut count = 0;
        self.for_each_solution(n, |_| count += 1);
        count
    }

    /// `[r(0), r(1), ..., r(max)]`.
    pub fn representation_counts(&self, max: u64) -> Vec<u64> {
        let mut counts = vec![0u64; max as usize + 1];
        self.for_each_vector_up_to(max, |_, value| counts[value as usize] += 1);
        counts
    }

    /// Vectors of `Q(v) = n`, in enumeration order.
    pub fn vectors_of_norm(&self, n: u64) -> Vec<Vec3> {
        let mut out = Vec::new();
        self.for_each_solution(n, |v| out.push(*v));
        out
    }
}

impl std::fmt::Display for TernaryQF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let e = self.entries();
        write!(f, "{},{},{},{},{},{}", e[0], e[1], e[2], e[3], e[4], e[5])
    }
}

pub fn hessian_det(q: &TernaryQF) -> u64 {
    q.hessian_det()
}

pub fn level(q: &TernaryQF) -> u64 {
    q.level()
}

pub fn count_representations(q: &TernaryQF, n: u64) -> u64 {
    q.count_representations(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimitiveMethod {
    Moebius,
    GcdFilter,
}

/// Number of `v` with `Q(v) = n` and coprime coordinates.
pub fn count_primitive(q: &TernaryQF, n: u64, method: PrimitiveMethod) -> Result<u64> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    Ok(match method {
        PrimitiveMethod::GcdFilter => {
            let mut count = 0;
            q.for_each_solution(n, |v| {
                if content(v) == 1 {
                    count += 1
                }
            });
            count
        }
        PrimitiveMethod::Moebius => {
            let mut total: i64 = 0;
            let mut f = 1u64;
            while f * f <= n {
                if n % (f * f) == 0 {
                    let mu = moebius(f)? as i64;
                    if mu != 0 {
                        total += mu * q.count_representations(n / (f * f)) as i64;
                    }
                }
                f += 1;
            }
            u64::try_from(total).expect("primitive count is nonnegative")
        }
    })
}

/// A primitive rank-2 sublattice `plane` of `Z^3` with a transversal vector,
/// such that `Z^3 = plane + Z transversal`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceDecomposition {
    pub plane_basis: [Vec3; 2],
    pub transversal: Vec3,
    /// Primitive dual vector whose kernel is the plane.
    pub dual_vector: Vec3,
    /// `R = Q` restricted to the plane, in the basis `plane_basis`.
    pub restricted_form: BinaryQF,
    /// Hessian determinant `r = 4 covol(R)^2 = -disc(R)`.
    pub restricted_hessian_det: u64,
    /// Hessian determinant `H(Q)`.
    pub hessian_det: u64,
}

impl SliceDecomposition {
    /// `covol(S)^2 = covol(Q)^2 / covol(R)^2 = H / (2 r)` as `(num, den)`.
    pub fn quotient_covol_squared(&self) -> (u64, u64) {
        let (num, den) = (self.hessian_det, 2 * self.restricted_hessian_det);
        let g = gcd(num, den);
        (num / g, den / g)
    }

    /// `covol(R) <= 2^(1/3) covol(Q)^(2/3)`, compared exactly as
    /// `covol(R)^6 <= 4 covol(Q)^4`, i.e. `r^3 <= 4 H^2`.
    pub fn satisfies_hermite_rankin(&self) -> bool {
        let r = self.restricted_hessian_det as u128;
        let h = self.hessian_det as u128;
        r * r * r <= 4 * h * h
    }

    /// Largest `t` with slice `t` possibly meeting `Q = n`: `t^2 H <= 2 n r`.
    pub fn max_slice_index(&self, n: u64) -> u64 {
        let bound = 2 * n as u128 * self.restricted_hessian_det as u128;
        isqrt(bound / self.hessian_det as u128) as u64
    }
}

/// Column-reduces `w` to `(1, 0, 0)`; returns the unimodular `M` with `w M = (1, 0, 0)`.
fn unimodular_completion(w: &Vec3) -> Mat3 {
    let mut r = *w;
    let mut cols: [Vec3; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    loop {
        let nonzero: Vec<usize> = (0..3).filter(|&i| r[i] != 0).collect();
        if nonzero.len() == 1 {
            let i = nonzero[0];
            if i != 0 {
                r.swap(0, i);
                cols.swap(0, i);
            }
            if r[0] < 0 {
                r[0] = -r[0];
                cols[0] = cols[0].map(|x| -x);
            }
            break;
        }
        let piv = *nonzero.iter().min_by_key(|&&i| r[i].abs()).unwrap();
        for &i in &nonzero {
            if i != piv {
                let k = r[i].div_euclid(r[piv]);
                r[i] -= k * r[piv];
                let pc = cols[piv];
                for (c, p) in cols[i].iter_mut().zip(pc) {
                    *c -= k * p;
                }
            }
        }
    }
    assert_eq!(r[0], 1, "dual vector must be primitive");
    [0, 1, 2].map(|i| [cols[0][i], cols[1][i], cols[2][i]])
}

/// Lagrange–Gauss reduction of a plane basis with respect to `q`.
fn reduce_plane_basis(q: &TernaryQF, mut b1: Vec3, mut b2: Vec3) -> (Vec3, Vec3) {
    loop {
        if q.eval(&b2) < q.eval(&b1) {
            std::mem::swap(&mut b1, &mut b2);
        }
        let n1 = q.eval(&b1);
        let bl = q.bilinear(&b1, &b2);
        // round(bl / (2 n1))
        let k = (2 * bl + 2 * n1).div_euclid(4 * n1);
        if k == 0 {
            break;
        }
        for i in 0..3 {
            b2[i] -= k * b1[i];
        }
        if q.eval(&b2) >= q.eval(&b1) {
            break;
        }
    }
    if q.bilinear(&b1, &b2) < 0 {
        b2 = b2.map(|x| -x);
    }
    (b1, b2)
}

fn sign_normalized(v: &Vec3) -> Vec3 {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.map(|c| -c),
        _ => *v,
    }
}

/// Rank-2 primitive sublattice of minimal co-volume, found as the kernel of a
/// shortest primitive vector of the adjugate form `w -> w^T adj(A) w`.
pub fn minimal_binary_sublattice(q: &TernaryQF) -> SliceDecomposition {
    let adj = adjugate3(q.hessian());
    let doubled: Mat3 = adj.map(|r| r.map(|x| i64::try_from(2 * x).expect("adjugate fits in i64")));
    let dual = TernaryQF::from_hessian(doubled).expect("adjugate of a definite form is definite");
    let bound = (0..3).map(|i| adj[i][i]).min().unwrap() as u64;
    let mut best: Option<(u64, Vec3)> = None;
    dual.for_each_vector_up_to(bound, |w, value| {
        if value == 0 || content(w) != 1 {
            return;
        }
        let w = sign_normalized(w);
        let better = match &best {
            None => true,
            Some((bv, bw)) => value < *bv || (value == *bv && w < *bw),
        };
        if better {
            best = Some((value, w));
        }
    });
    let (r_det, w) = best.expect("the coordinate vectors are within the bound");
    let m = unimodular_completion(&w);
    let col = |j: usize| [m[0][j], m[1][j], m[2][j]];
    let (b1, b2) = reduce_plane_basis(q, col(1), col(2));
    let mut u = col(0);
    // shift the transversal towards the plane; keeps w.u = 1
    let n1 = q.eval(&b1) as i128;
    let k1 = (q.bilinear(&b1, &u) as i128 + n1).div_euclid(2 * n1) as i64;
    for i in 0..3 {
        u[i] -= k1 * b1[i];
    }
    let restricted = BinaryQF::raw(q.eval(&b1), q.bilinear(&b1, &b2), q.eval(&b2))
        .expect("restriction of a definite form is definite");
    debug_assert_eq!((-restricted.discriminant()) as u64, r_det);
    debug_assert_eq!(dot(&w, &u), 1);
    SliceDecomposition {
        plane_basis: [b1, b2],
        transversal: u,
        dual_vector: w,
        restricted_form: restricted,
        restricted_hessian_det: r_det,
        hessian_det: q.hessian_det(),
    }
}

impl SliceDecomposition {
    /// `P_t(s1, s2) = Q(s1 b1 + s2 b2 + t u)`.
    pub fn slice_polynomial(&self, q: &TernaryQF, t: i64) -> IntegerValuedQP {
        let [b1, b2] = &self.plane_basis;
        let u = &self.transversal;
        IntegerValuedQP::new(
            q.bilinear(b1, b1),
            q.bilinear(b1, b2),
            q.bilinear(b2, b2),
            2 * t * q.bilinear(b1, u),
            2 * t * q.bilinear(b2, u),
            t * t * q.eval(u),
        )
        .expect("slices of a definite form are valid polynomials")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SlicesReport {
    pub n: u64,
    pub total: u64,
    pub max_slice_index: u64,
    /// `(t, r(P_t, n))` for every slice index considered.
    pub slices: Vec<(i64, u64)>,
}

/// `r(Q, n)` as the sum over slices of `r(P_t, n)`.
pub fn slices_count(q: &TernaryQF, n: u64) -> SlicesReport {
    let dec = minimal_binary_sublattice(q);
    slices_count_with(q, &dec, n)
}

pub fn slices_count_with(q: &TernaryQF, dec: &SliceDecomposition, n: u64) -> SlicesReport {
    if n == 0 {
        return SlicesReport { n, total: 1, max_slice_index: 0, slices: vec![(0, 1)] };
    }
    let t_max = dec.max_slice_index(n) as i64;
    let slices: Vec<(i64, u64)> = (-t_max..=t_max)
        .map(|t| (t, count_representations_poly(&dec.slice_polynomial(q, t), n as i64)))
        .collect();
    SlicesReport {
        n,
        total: slices.iter().map(|s| s.1).sum(),
        max_slice_index: t_max as u64,
        slices,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HermiteReport {
    pub n: u64,
    pub hessian_det: u64,
    pub representations: u64,
    pub sigma0: u64,
    /// `floor(n^(1/2) (q/2)^(-1/6))`
    pub slice_term: u64,
    /// `floor((2q)^(2/3))`
    pub disc_bound: u64,
    pub sigma0_tilde_argument: u128,
    pub sigma0_tilde: u64,
    pub bound: u128,
    pub holds: bool,
}

pub const HERMITE_CONSTANT_C: u64 = 6;

/// Largest `f >= 0` with `f <= n^(1/2) (q/2)^(-1/6)`, i.e. `f^6 q <= 2 n^3`.
fn slice_term(n: u64, q: u64) -> u64 {
    let rhs = 2 * (n as u128).pow(3);
    let fits = |f: u128| f.pow(6).saturating_mul(q as u128) <= rhs;
    let mut f = ((rhs as f64 / q as f64).powf(1.0 / 6.0)) as u128 + 1;
    while f > 0 && !fits(f) {
        f -= 1;
    }
    while fits(f + 1) {
        f += 1;
    }
    f as u64
}

/// Checks `r(n, Q) <= 6 (sigma0(n) + 2 floor(n^(1/2) (q/2)^(-1/6)) sigma0_tilde(floor((2q)^(2/3))^2 n))`.
pub fn hermite_dirichlet_bound(q: &TernaryQF, n: u64) -> Result<HermiteReport> {
    let r = q.count_representations(n);
    hermite_dirichlet_bound_for(q.hessian_det(), n, r)
}

/// Same as [`hermite_dirichlet_bound`] with `r(n, Q)` already known.
pub fn hermite_dirichlet_bound_for(hdet: u64, n: u64, representations: u64) -> Result<HermiteReport> {
    let s0 = sigma0(n)?;
    let f = slice_term(n, hdet);
    let two_q = 2 * hdet as u128;
    let g = icbrt(two_q * two_q) as u64;
    let arg = (g as u128) * (g as u128) * n as u128;
    let st = sigma0_tilde(u64::try_from(arg).expect("sigma0_tilde argument fits in u64"))?;
    let bound = HERMITE_CONSTANT_C as u128 * (s0 as u128 + 2 * f as u128 * st as u128);
    Ok(HermiteReport {
        n,
        hessian_det: hdet,
        representations,
        sigma0: s0,
        slice_term: f,
        disc_bound: g,
        sigma0_tilde_argument: arg,
        sigma0_tilde: st,
        bound,
        holds: representations as u128 <= bound,
    })
}

/// `|O(Q)|`: integer matrices `M` with `M^T A M = A`, found by matching the
/// columns against the vectors of norms `Q(e_1), Q(e_2), Q(e_3)`.
pub fn automorph_group_order(q: &TernaryQF) -> u64 {
    let a = q.hessian();
    let lists: Vec<Vec<Vec3>> = (0..3).map(|i| q.vectors_of_norm((a[i][i] / 2) as u64)).collect();
    let mut count = 0u64;
    for m1 in &lists[0] {
        for m2 in &lists[1] {
            if q.bilinear(m1, m2) != a[0][1] {
                continue;
            }
            for m3 in &lists[2] {
                if q.bilinear(m1, m3) == a[0][2] && q.bilinear(m2, m3) == a[1][2] {
                    let m = [0, 1, 2].map(|i| [m1[i], m2[i], m3[i]]);
                    if det3(&m).abs() == 1 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gross2() -> TernaryQF {
        TernaryQF::from_hessian([[8, 0, 4], [0, 8, 4], [4, 4, 6]]).unwrap()
    }

    fn brute(q: &TernaryQF, n: u64, r: i64) -> (u64, u64) {
        let (mut all, mut prim) = (0, 0);
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    let v = [x, y, z];
                    if q.eval(&v) == n as i64 {
                        all += 1;
                        if content(&v) == 1 {
                            prim += 1;
                        }
                    }
                }
            }
        }
        (all, prim)
    }

    #[test]
    fn invariants_examples() {
        let s3 = TernaryQF::sum_of_three_squares();
        assert_eq!(s3.hessian_det(), 8);
        assert_eq!(s3.level(), 4);
        assert_eq!(gross2().hessian_det(), 128);
        assert_eq!(gross2().level(), 8);
        let d = TernaryQF::from_entries([2, 4, 6, 0, 0, 0]).unwrap();
        assert_eq!(d.hessian_det(), 48);
        assert_eq!(d.level(), 24);
    }

    #[test]
    fn level_of_indefinite_golden_vector() {
        // y^2 - 4xz
        let h = [[0, 0, -4], [0, 2, 0], [-4, 0, 0]];
        assert_eq!(det3(&h), -32);
        assert_eq!(level_of_hessian(&h), 4);
    }

    #[test]
    fn rejects_invalid() {
        assert!(TernaryQF::from_entries([1, 2, 2, 0, 0, 0]).is_err());
        assert!(TernaryQF::from_entries([2, 2, 2, 3, 0, 0]).is_err());
        assert!(TernaryQF::from_hessian([[2, 1, 0], [0, 2, 0], [0, 0, 2]]).is_err());
    }

    #[test]
    fn counting_examples() {
        let s3 = TernaryQF::sum_of_three_squares();
        assert_eq!(s3.count_representations(0), 1);
        assert_eq!(s3.count_representations(1), 6);
        assert_eq!(s3.count_representations(5), 24);
        assert_eq!(brute(&s3, 5, 3).0, 24);
        assert_eq!(gross2().count_representations(3), 8);
        assert_eq!(brute(&gross2(), 3, 4), (8, 8));
        // (2x+z)^2 + (2y+z)^2 + z^2 = 4 forces all three terms even: 6 vectors
        assert_eq!(brute(&gross2(), 4, 4), (6, 6));
        assert_eq!(gross2().count_representations(4), 6);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let forms = [
            TernaryQF::from_entries([2, 4, 6, 1, 0, 1]).unwrap(),
            TernaryQF::from_entries([4, 6, 10, -3, 2, 1]).unwrap(),
            gross2(),
            TernaryQF::from_entries([2, 2, 100, 0, 0, 0]).unwrap(),
        ];
        for q in &forms {
            let counts = q.representation_counts(40);
            for n in 0..=40 {
                let (all, prim) = brute(q, n, 12);
                assert_eq!(counts[n as usize], all, "{q} n={n}");
                assert_eq!(q.count_representations(n), all);
                if n > 0 {
                    assert_eq!(count_primitive(q, n, PrimitiveMethod::GcdFilter).unwrap(), prim);
                    assert_eq!(count_primitive(q, n, PrimitiveMethod::Moebius).unwrap(), prim);
                }
            }
        }
    }

    #[test]
    fn primitive_examples() {
        let s3 = TernaryQF::sum_of_three_squares();
        for m in [PrimitiveMethod::Moebius, PrimitiveMethod::GcdFilter] {
            assert_eq!(count_primitive(&s3, 4, m).unwrap(), 0);
            assert_eq!(count_primitive(&gross2(), 3, m).unwrap(), 8);
            assert_eq!(count_primitive(&gross2(), 4, m).unwrap(), 6);
        }
        assert!(count_primitive(&s3, 0, PrimitiveMethod::Moebius).is_err());
    }

    #[test]
    fn minimal_sublattice_examples() {
        let s3 = TernaryQF::sum_of_three_squares();
        let dec = minimal_binary_sublattice(&s3);
        assert_eq!(dec.dual_vector, [0, 0, 1]);
        assert_eq!(dec.restricted_hessian_det, 4); // covol(R) = 1
        assert_eq!(dec.restricted_form, BinaryQF { a: 1, b: 0, c: 1 });
        assert!(dec.satisfies_hermite_rankin());

        let g = minimal_binary_sublattice(&gross2());
        assert!(g.satisfies_hermite_rankin());
        // exhaustive check of the minimum over primitive dual vectors
        let adj = adjugate3(gross2().hessian());
        let mut min = i128::MAX;
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                for z in -6i64..=6 {
                    let w = [x, y, z];
                    if content(&w) == 1 {
                        let v: i128 = (0..3)
                            .map(|i| (0..3).map(|j| w[i] as i128 * adj[i][j] * w[j] as i128).sum::<i128>())
                            .sum();
                        min = min.min(v);
                    }
                }
            }
        }
        assert_eq!(g.restricted_hessian_det as i128, min);

        let d = TernaryQF::from_entries([2, 2, 100, 0, 0, 0]).unwrap();
        let dd = minimal_binary_sublattice(&d);
        assert_eq!(dd.dual_vector, [0, 0, 1]);
        assert_eq!(dd.restricted_hessian_det, 4);
        assert!(dd.satisfies_hermite_rankin());
    }

    #[test]
    fn slices_examples() {
        let s3 = TernaryQF::sum_of_three_squares();
        let rep = slices_count(&s3, 5);
        assert_eq!(rep.total, 24);
        assert_eq!(rep.max_slice_index, 2);
        assert_eq!(rep.slices.iter().map(|s| s.0).collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(slices_count(&gross2(), 3).total, 8);
        assert_eq!(slices_count(&s3, 0).total, 1);
    }

    #[test]
    fn slice_polynomials_have_the_restricted_discriminant() {
        for q in [gross2(), TernaryQF::from_entries([4, 6, 10, -3, 2, 1]).unwrap()] {
            let dec = minimal_binary_sublattice(&q);
            for t in -3..=3 {
                let p = dec.slice_polynomial(&q, t);
                assert_eq!(p.discriminant(), dec.restricted_form.discriminant());
                assert_eq!(-p.discriminant() as u64, dec.restricted_hessian_det);
            }
        }
    }

    #[test]
    fn hermite_examples() {
        let s3 = TernaryQF::sum_of_three_squares();
        let rep = hermite_dirichlet_bound(&s3, 5).unwrap();
        assert_eq!(rep.representations, 24);
        assert_eq!(rep.slice_term, 1); // floor(sqrt5 / 4^(1/6)) = floor(1.77)
        assert_eq!(rep.disc_bound, 6); // floor(16^(2/3)) = floor(6.35)
        assert_eq!(rep.sigma0_tilde_argument, 180);
        assert_eq!(rep.sigma0_tilde, 18);
        assert_eq!(rep.bound, 6 * (2 + 2 * 18));
        assert!(rep.holds);

        let rep = hermite_dirichlet_bound(&gross2(), 3).unwrap();
        assert_eq!(rep.representations, 8);
        assert!(rep.holds);
    }

    #[test]
    fn slice_term_is_exact() {
        for (n, q) in [(5u64, 8u64), (1, 2), (64, 2), (1000, 1_000_000), (2000, 32 * 199 * 199)] {
            let f = slice_term(n, q) as f64;
            let real = (n as f64).sqrt() * (q as f64 / 2.0).powf(-1.0 / 6.0);
            assert!(f <= real + 1e-9 && real < f + 1.0, "n={n} q={q}");
        }
        // exact boundary: n = 1, q = 2 gives exactly 1
        assert_eq!(slice_term(1, 2), 1);
    }

    #[test]
    fn automorph_examples() {
        assert_eq!(automorph_group_order(&TernaryQF::sum_of_three_squares()), 48);
        assert_eq!(automorph_group_order(&gross2()), 48);
        assert_eq!(automorph_group_order(&TernaryQF::from_entries([2, 4, 6, 0, 0, 0]).unwrap()), 8);
    }
}
