//! Exact integer arithmetic: factorization, divisor counts, Möbius, the
//! Kronecker symbol and the conductor decomposition of discriminants.
//!
//! Everything works on machine integers. Factorization is trial division by
//! small primes followed by Miller–Rabin and Pollard–Brent, which is exact for
//! all of `u64`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Floor of the square root.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Floor of the cube root.
pub fn icbrt(n: u128) -> u128 {
    let mut x = (n as f64).cbrt() as u128;
    while x > 0 && x * x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Integers `y` with `a y^2 + b y + c <= 0`, for `a > 0`, as an inclusive range.
pub fn quadratic_le_zero_interval(a: i128, b: i128, c: i128) -> Option<(i128, i128)> {
    debug_assert!(a > 0);
    let disc = b * b - 4 * a * c;
    if disc < 0 {
        return None;
    }
    let s = isqrt(disc as u128) as i128;
    // roots (-b -+ sqrt(disc)) / 2a; the floor/ceil with the integer sqrt are exact
    let lo = num_integer::Integer::div_ceil(&(-b - s), &(2 * a));
    let hi = num_integer::Integer::div_floor(&(-b + s), &(2 * a));
    (lo <= hi).then_some((lo, hi))
}

pub fn is_square(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u128) as i128;
    (r * r == n).then_some(r)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d <= 1000 && d * d <= m {
        while m % d == 0 {
            primes.push(d);
            m /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            primes.push(x);
        } else {
            let f = pollard_brent(x);
            stack.push(f);
            stack.push(x / f);
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn positive(n: u64) -> Result<u64> {
    if n == 0 {
        Err(Error::NonPositive(0))
    } else {
        Ok(n)
    }
}

/// Number of positive divisors of `n`.
pub fn sigma0(n: u64) -> Result<u64> {
    let n = positive(n)?;
    Ok(factorize(n).iter().map(|&(_, e)| e as u64 + 1).product())
}

const PREFIX_LIMIT: usize = 1 << 20;

fn prefix_max_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut d = vec![0u32; PREFIX_LIMIT + 1];
        for i in 1..=PREFIX_LIMIT {
            let mut j = i;
            while j <= PREFIX_LIMIT {
                d[j] += 1;
                j += i;
            }
        }
        let mut best = 0;
        for v in d.iter_mut().skip(1) {
            best = best.max(*v);
            *v = best;
        }
        d
    })
}

/// `max_{1 <= m <= n} sigma0(m)`.
///
/// Small arguments read a prefix-maximum table built once. Larger arguments
/// search the numbers `2^e1 3^e2 5^e3 ...` with non-increasing exponents,
/// which is where the maximum of `sigma0` on `[1, n]` is always attained.
pub fn sigma0_tilde(n: u64) -> Result<u64> {
    let n = positive(n)?;
    if (n as usize) <= PREFIX_LIMIT {
        return Ok(prefix_max_table()[n as usize] as u64);
    }
    Ok(sigma0_tilde_search(n))
}

fn sigma0_tilde_search(n: u64) -> u64 {
    const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    fn go(idx: usize, m: u64, max_exp: u32, divisors: u64, n: u64, best: &mut u64) {
        *best = (*best).max(divisors);
        if idx == PRIMES.len() {
            return;
        }
        let p = PRIMES[idx];
        let mut m = m;
        for e in 1..=max_exp {
            match m.checked_mul(p) {
                Some(next) if next <= n => m = next,
                _ => break,
            }
            go(idx + 1, m, e, divisors * (e as u64 + 1), n, best);
        }
    }
    let mut best = 1;
    go(0, 1, 64, 1, n, &mut best);
    best
}

pub fn moebius(n: u64) -> Result<i8> {
    let n = positive(n)?;
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Kronecker symbol `(a | n)`, with `(a | 2)` equal to 0, 1, -1 for `a` even,
/// `a = ±1 (mod 8)`, `a = ±3 (mod 8)`, and `(a | -1)` the sign of `a`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    n >>= v;
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // n is odd and positive: Jacobi symbol (a | n)
    let mut a = a.rem_euclid(n);
    let mut n = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A negative discriminant `value = fundamental * conductor^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Discriminant {
    value: i64,
    conductor: u64,
    fundamental: i64,
}

pub fn is_discriminant(d: i64) -> bool {
    d < 0 && matches!(d.rem_euclid(4), 0 | 1)
}

pub fn decompose_discriminant(d: i64) -> Result<Discriminant> {
    Discriminant::new(d)
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if !is_discriminant(d) {
            return Err(Error::NotADiscriminant(d));
        }
        let mut conductor = 1u64;
        for (l, e) in factorize(d.unsigned_abs()) {
            if l != 2 {
                conductor *= l.pow(e / 2);
            }
        }
        let mut core = d / (conductor * conductor) as i64;
        while core % 4 == 0 && matches!((core / 4).rem_euclid(4), 0 | 1) {
            core /= 4;
            conductor *= 2;
        }
        Ok(Discriminant {
            value: d,
            conductor,
            fundamental: core,
        })
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn abs(&self) -> u64 {
        self.value.unsigned_abs()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn fundamental(&self) -> i64 {
        self.fundamental
    }

    pub fn is_fundamental(&self) -> bool {
        self.conductor == 1
    }

    pub fn is_p_fundamental(&self, p: u64) -> bool {
        self.conductor % p != 0
    }

    /// `fundamental * f^2` with `f` the prime-to-`p` part of the conductor.
    pub fn p_fundamental_part(&self, p: u64) -> Result<Discriminant> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut f = self.conductor;
        while f % p == 0 {
            f /= p;
        }
        Ok(Discriminant {
            value: self.fundamental * (f * f) as i64,
            conductor: f,
            fundamental: self.fundamental,
        })
    }

    /// Number of automorphs `u` of a primitive form of this discriminant:
    /// 6, 4 or 2.
    pub fn automorph_count(&self) -> u64 {
        match self.value {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    /// `|O^x / Z^x|`, i.e. half of [`Self::automorph_count`].
    pub fn unit_index(&self) -> u64 {
        self.automorph_count() / 2
    }
}

impl std::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Negative discriminants `d` with `lo <= |d| <= hi`, in order of increasing `|d|`.
pub fn discriminants_in(lo: u64, hi: u64) -> impl Iterator<Item = i64> {
    (lo.max(3)..=hi).map(|n| -(n as i64)).filter(|&d| is_discriminant(d))
}
