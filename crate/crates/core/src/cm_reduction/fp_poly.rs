//! Dense polynomials over `F_p`, coefficients from the constant term up.
//! Everything is kept trimmed: no trailing zero coefficients.

use crate::arith::{mul_mod, pow_mod};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = FpPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        f.trim();
        f
    }

    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        FpPoly::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    /// `X`
    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, with `deg 0 = -1`.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "division by zero in F_p");
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let li = self.inv(self.leading());
        FpPoly::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, li, self.p)).collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |f: &Self, i: usize| f.coeffs.get(i).copied().unwrap_or(0);
        FpPoly::new(self.p, (0..n).map(|i| (get(self, i) + get(other, i)) % self.p).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |f: &Self, i: usize| f.coeffs.get(i).copied().unwrap_or(0);
        FpPoly::new(self.p, (0..n).map(|i| (get(self, i) + self.p - get(other, i)) % self.p).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        FpPoly::new(self.p, acc.into_iter().map(|c| c as u64).collect())
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let p = self.p;
        if self.degree() < divisor.degree() {
            return (FpPoly::zero(p), self.clone());
        }
        let dl = self.inv(divisor.leading());
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], dl, p);
            quot[k] = c;
            if c != 0 {
                for (i, &d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = (rem[k + i] + p - mul_mod(c, d, p)) % p;
                }
            }
        }
        rem.truncate(dd);
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact division; panics on a nonzero remainder.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        FpPoly::new(
            p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect(),
        )
    }

    /// Monic greatest common divisor (zero only if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = FpPoly::one(self.p).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// `g` with `g(X)^p = self`, assuming only exponents divisible by `p` occur.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        // Frobenius is the identity on F_p, so coefficients carry over unchanged.
        FpPoly::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    /// Squarefree decomposition `self = lc * prod f_i^{m_i}` with monic,
    /// squarefree, pairwise coprime `f_i`; sorted by multiplicity.
    pub fn squarefree_factorization(&self) -> Vec<(FpPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() > 0 {
            squarefree_into(&self.monic(), 1, &mut out);
        }
        out.sort_by_key(|(_, m)| *m);
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> FpPoly {
        self.squarefree_factorization()
            .iter()
            .fold(FpPoly::one(self.p), |acc, (f, _)| acc.mul(f))
    }
}

fn squarefree_into(f: &FpPoly, scale: u32, out: &mut Vec<(FpPoly, u32)>) {
    let p = f.p as u32;
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let factor = w.div_exact(&y);
        if factor.degree() > 0 {
            out.push((factor, i * scale));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if c.degree() > 0 {
        squarefree_into(&c.pth_root(), scale * p, out);
    }
}

/// Number of distinct roots of `f` in an algebraic closure of `F_p`.
pub fn distinct_root_count(f: &FpPoly) -> usize {
    f.radical().degree().max(0) as usize
}

/// Number of distinct roots of `f` lying in `F_{p^2}`.
pub fn roots_in_fp2(f: &FpPoly) -> usize {
    let rad = f.radical();
    if rad.degree() <= 0 {
        return 0;
    }
    let p = f.modulus() as u128;
    let frob = FpPoly::x(f.modulus()).pow_mod(p * p, &rad);
    rad.gcd(&frob.sub(&FpPoly::x(f.modulus()))).degree() as usize
}
