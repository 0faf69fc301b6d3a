//! Hilbert class polynomials `H_D(X) = prod (X - j(tau_R))` over the reduced
//! forms `R = (a, b, c)` of discriminant `D`, with `tau_R = (-b + sqrt D) / (2a)`.
//!
//! `j` is evaluated from Jacobi theta constants in the nome `q = exp(i pi tau)`:
//!
//! ```text
//! j = 32 (t2^8 + t3^8 + t4^8)^3 / (t2 t3 t4)^8,
//! t3 = sum q^{n^2},  t4 = sum (-1)^n q^{n^2},  t2^4 = t3^4 - t4^4.
//! ```
//!
//! Conjugate pairs `(a, +-b, c)` are multiplied into real quadratics first, so
//! the whole product runs over the reals, in exact fixed-point integer
//! arithmetic (Kronecker substitution). Coefficients are rounded to integers
//! and the rounding residual is checked.

use rug::float::Constant;
use rug::ops::RemRounding;
use rug::{Float, Integer};
use serde::{Serialize, Serializer};

use crate::arith::Discriminant;
use crate::binary_forms::{reduced_forms, BinaryQF};
use crate::error::{Error, Result};

use super::fp_poly::FpPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPolynomial {
    pub discriminant: i64,
    /// From the constant term up to the leading `1`.
    pub coefficients: Vec<Integer>,
}

impl Serialize for ClassPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ClassPolynomial", 3)?;
        st.serialize_field("discriminant", &self.discriminant)?;
        st.serialize_field("degree", &self.degree())?;
        let coeffs: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coefficients", &coeffs)?;
        st.end()
    }
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn reduce_mod(&self, p: u64) -> FpPoly {
        let coeffs = self
            .coefficients
            .iter()
            .map(|c| {
                let r = c.clone().rem_euc(Integer::from(p));
                r.to_u64().expect("residue fits in u64")
            })
            .collect();
        FpPoly::new(p, coeffs)
    }
}

#[derive(Clone, Debug)]
struct Complex {
    re: Float,
    im: Float,
}

impl Complex {
    fn real(prec: u32, x: impl Into<f64>) -> Self {
        Complex { re: Float::with_val(prec, x.into()), im: Float::new(prec) }
    }

    fn set_prec(&mut self, prec: u32) {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
    }

    fn add(&self, o: &Complex) -> Complex {
        let p = self.re.prec();
        Complex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    fn sub(&self, o: &Complex) -> Complex {
        let p = self.re.prec();
        Complex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    /// Three real multiplications.
    fn mul(&self, o: &Complex, prec: u32) -> Complex {
        let k1 = Float::with_val(prec, &o.re * Float::with_val(prec, &self.re + &self.im));
        let k2 = Float::with_val(prec, &self.re * Float::with_val(prec, &o.im - &o.re));
        let k3 = Float::with_val(prec, &self.im * Float::with_val(prec, &o.re + &o.im));
        Complex { re: Float::with_val(prec, &k1 - &k3), im: k1 + k2 }
    }

    fn square(&self, prec: u32) -> Complex {
        let sum = Float::with_val(prec, &self.re + &self.im);
        let diff = Float::with_val(prec, &self.re - &self.im);
        let cross = Float::with_val(prec, &self.re * &self.im);
        Complex { re: sum * diff, im: cross * 2u32 }
    }

    fn pow(&self, mut e: u64, prec: u32) -> Complex {
        let mut acc = Complex::real(prec, 1.0);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.square(prec);
            }
        }
        acc
    }

    fn scale(&self, k: i64) -> Complex {
        let p = self.re.prec();
        Complex { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    fn norm_sqr(&self) -> Float {
        let p = self.re.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    fn div(&self, o: &Complex, prec: u32) -> Complex {
        let den = o.norm_sqr();
        let conj = Complex { re: o.re.clone(), im: Float::with_val(prec, -&o.im) };
        let num = self.mul(&conj, prec);
        Complex { re: Float::with_val(prec, &num.re / &den), im: Float::with_val(prec, &num.im / &den) }
    }
}

/// `(t3, t4)` at nome `q` with `|q| = 2^-decay`. The `n`-th term has size
/// `2^(-n^2 decay)`, so it is carried with only the bits it contributes.
fn theta_constants(q: &Complex, decay: f64, prec: u32) -> (Complex, Complex) {
    const GUARD: u32 = 32;
    let bits_for = |n: u64| -> Option<u32> {
        let lost = (n * n) as f64 * decay;
        (lost <= prec as f64 + 8.0).then(|| (prec as f64 - lost).max(0.0) as u32 + GUARD)
    };
    let mut even = Complex::real(prec, 0.0);
    let mut odd = Complex::real(prec, 0.0);
    let mut q2 = q.square(prec);
    let mut power = q.clone(); // q^{n^2}
    let mut step = q.mul(&q2, prec); // q^{2n+1}
    let mut n = 1u64;
    while bits_for(n).is_some() {
        if n % 2 == 0 {
            even = even.add(&power);
        } else {
            odd = odd.add(&power);
        }
        let Some(next) = bits_for(n + 1) else { break };
        power.set_prec(next);
        step.set_prec(next);
        q2.set_prec(next);
        power = power.mul(&step, next);
        step = step.mul(&q2, next);
        n += 1;
    }
    let one = Complex::real(prec, 1.0);
    let t3 = one.add(&even.add(&odd).scale(2));
    let t4 = one.add(&even.sub(&odd).scale(2));
    (t3, t4)
}

/// `j` from `A = t3^4`, `B = t4^4` and `C = A - B = t2^4`:
/// `j = 32 (A^2 + B^2 + C^2)^3 / (A B C)^2`.
fn j_from_nome(q: &Complex, decay: f64, prec: u32) -> Complex {
    let (t3, t4) = theta_constants(q, decay, prec);
    let a = t3.square(prec).square(prec);
    let b = t4.square(prec).square(prec);
    let c = a.sub(&b);
    let sum = a.square(prec).add(&b.square(prec)).add(&c.square(prec));
    let num = sum.square(prec).mul(&sum, prec).scale(32);
    let den = a.mul(&b, prec).mul(&c, prec).square(prec);
    num.div(&den, prec)
}

/// `log2(1 / |q|)` for forms with leading coefficient `a`.
fn nome_decay(abs_disc: u64, a: i64) -> f64 {
    std::f64::consts::PI * (abs_disc as f64).sqrt() / (2.0 * a as f64) / std::f64::consts::LN_2
}

/// `j(tau_R)` for forms sharing the leading coefficient `a`. The nome is
/// `exp(-pi sqrt|D| / 2a) * zeta^b` with `zeta = exp(-i pi / 2a)`, so the
/// transcendental functions are evaluated once per `a`.
fn j_values_same_a(a: i64, bs: &[i64], abs_disc: u64, prec: u32) -> Vec<Complex> {
    let decay = nome_decay(abs_disc, a);
    // C = A - B cancels about `decay` leading bits
    let wprec = prec + decay.ceil() as u32 + 16;
    let pi = Float::with_val(wprec, Constant::Pi);
    let sqrt_d = Float::with_val(wprec, abs_disc).sqrt();
    let modulus = (-Float::with_val(wprec, &pi * &sqrt_d) / (2 * a)).exp();
    let angle = Float::with_val(wprec, &pi / (2 * a));
    let (sin, cos) = angle.sin_cos(Float::new(wprec));
    let zeta = Complex { re: cos, im: -sin };
    bs.iter()
        .map(|&b| {
            let mut rot = zeta.pow(b.unsigned_abs(), wprec);
            if b < 0 {
                rot.im = -rot.im;
            }
            let q = Complex {
                re: Float::with_val(wprec, &rot.re * &modulus),
                im: Float::with_val(wprec, &rot.im * &modulus),
            };
            j_from_nome(&q, decay, wprec)
        })
        .collect()
}

fn j_of_form(form: &BinaryQF, abs_disc: u64, prec: u32) -> Complex {
    j_values_same_a(form.a, &[form.b], abs_disc, prec).pop().unwrap()
}

/// Bits needed to carry every coefficient plus a safety margin.
pub fn working_precision(disc: &Discriminant, forms: &[BinaryQF]) -> u32 {
    let s: f64 = forms.iter().map(|f| 1.0 / f.a as f64).sum();
    let height = std::f64::consts::PI * (disc.abs() as f64).sqrt() * s / std::f64::consts::LN_2;
    height.ceil() as u32 + 10 * forms.len() as u32 + 64
}

/// Polynomial with coefficients `coeffs[i] * 2^exp`.
#[derive(Debug, Clone)]
struct FixedPoly {
    coeffs: Vec<Integer>,
    exp: i64,
}

fn max_bits(coeffs: &[Integer]) -> u32 {
    coeffs.iter().map(|c| c.significant_bits()).max().unwrap_or(0)
}

impl FixedPoly {
    fn from_floats(c: &[Float], prec: u32) -> FixedPoly {
        let top = c.iter().filter_map(|x| x.get_exp()).max().unwrap_or(0) as i64;
        let exp = top - prec as i64 - 8;
        let coeffs = c
            .iter()
            .map(|x| {
                let scaled = Float::with_val(x.prec(), x) >> exp as i32;
                scaled.to_integer().expect("finite coefficient")
            })
            .collect();
        FixedPoly { coeffs, exp }
    }

    /// Drops low bits so the largest coefficient keeps `prec + 8` bits.
    fn truncate(&mut self, prec: u32) {
        let excess = max_bits(&self.coeffs) as i64 - prec as i64 - 8;
        if excess > 0 {
            let s = excess as u32;
            let half = Integer::from(1) << (s - 1);
            for c in &mut self.coeffs {
                *c += &half;
                *c >>= s;
            }
            self.exp += excess;
        }
    }

    /// Exact product by Kronecker substitution, then truncation.
    fn mul(&self, other: &FixedPoly, prec: u32) -> FixedPoly {
        let n = self.coeffs.len().min(other.coeffs.len()) as u32;
        let w = max_bits(&self.coeffs) + max_bits(&other.coeffs) + (32 - n.leading_zeros()) + 2;
        let product = pack(&self.coeffs, w) * pack(&other.coeffs, w);
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = FixedPoly { coeffs: unpack(product, len, w), exp: self.exp + other.exp };
        out.truncate(prec);
        out
    }
}

fn pack(coeffs: &[Integer], w: u32) -> Integer {
    if coeffs.len() == 1 {
        return coeffs[0].clone();
    }
    let mid = coeffs.len() / 2;
    pack(&coeffs[..mid], w) + (pack(&coeffs[mid..], w) << (w * mid as u32))
}

/// Inverse of [`pack`] for coefficients of absolute value below `2^(w-2)`.
fn unpack(value: Integer, len: usize, w: u32) -> Vec<Integer> {
    if len == 1 {
        return vec![value];
    }
    let mid = len / 2;
    let bits = w * mid as u32;
    let mut low = Integer::from(value.keep_bits_ref(bits));
    if low.get_bit(bits - 1) {
        low -= Integer::from(1) << bits;
    }
    let high = (value - &low) >> bits;
    let mut out = unpack(low, mid, w);
    out.extend(unpack(high, len - mid, w));
    out
}

fn product_tree(mut factors: Vec<FixedPoly>, prec: u32) -> FixedPoly {
    if factors.is_empty() {
        return FixedPoly { coeffs: vec![Integer::from(1)], exp: 0 };
    }
    while factors.len() > 1 {
        let mut next = Vec::with_capacity(factors.len().div_ceil(2));
        let mut it = factors.into_iter();
        while let Some(f) = it.next() {
            match it.next() {
                Some(g) => next.push(f.mul(&g, prec)),
                None => next.push(f),
            }
        }
        factors = next;
    }
    factors.pop().unwrap()
}

/// One factor per `j` value: `X - j` for ambiguous forms, `X^2 - 2 Re j X + |j|^2`
/// for a pair `(a, b, c), (a, -b, c)` with `b > 0`.
fn real_factors(disc: &Discriminant, forms: &[BinaryQF], prec: u32) -> Vec<FixedPoly> {
    let mut by_a: Vec<(i64, Vec<(i64, bool)>)> = Vec::new();
    for f in forms {
        let ambiguous = f.b == 0 || f.b == f.a || f.a == f.c;
        if !ambiguous && f.b < 0 {
            continue;
        }
        match by_a.last_mut() {
            Some((a, list)) if *a == f.a => list.push((f.b, ambiguous)),
            _ => by_a.push((f.a, vec![(f.b, ambiguous)])),
        }
    }
    let mut factors = Vec::with_capacity(forms.len());
    for (a, list) in by_a {
        let bs: Vec<i64> = list.iter().map(|x| x.0).collect();
        let js = j_values_same_a(a, &bs, disc.abs(), prec);
        for (j, (_, ambiguous)) in js.into_iter().zip(list) {
            let floats = if ambiguous {
                vec![Float::with_val(prec, -&j.re), Float::with_val(prec, 1)]
            } else {
                vec![j.norm_sqr(), Float::with_val(prec, &j.re * -2i32), Float::with_val(prec, 1)]
            };
            factors.push(FixedPoly::from_floats(&floats, prec));
        }
    }
    factors
}

fn round_coefficients(poly: &FixedPoly) -> Option<Vec<Integer>> {
    if poly.exp >= 0 {
        return Some(poly.coeffs.iter().map(|c| Integer::from(c << poly.exp as u32)).collect())
            .filter(|c: &Vec<Integer>| c.last() == Some(&Integer::from(1)));
    }
    // the residual only means something if fractions are resolved
    if poly.exp > -16 {
        return None;
    }
    let s = (-poly.exp) as u32;
    let half = Integer::from(1) << (s - 1);
    let quarter = Integer::from(1) << (s - 2);
    let mut out = Vec::with_capacity(poly.coeffs.len());
    for c in &poly.coeffs {
        let rounded = Integer::from(c + &half) >> s;
        let residual = Integer::from(c - Integer::from(&rounded << s)).abs();
        if residual >= quarter {
            return None;
        }
        out.push(rounded);
    }
    (out.last() == Some(&Integer::from(1))).then_some(out)
}

pub const DEFAULT_DISCRIMINANT_BOUND: u64 = 100_000;

/// Computes `H_D` from scratch, doubling the precision at most twice.
pub fn compute_class_polynomial(disc: &Discriminant, precision_override: Option<u32>) -> Result<ClassPolynomial> {
    let forms = reduced_forms(disc);
    let mut prec = precision_override.unwrap_or_else(|| working_precision(disc, &forms));
    for _ in 0..3 {
        let factors = real_factors(disc, &forms, prec);
        let poly = product_tree(factors, prec);
        if let Some(coefficients) = round_coefficients(&poly) {
            debug_assert_eq!(coefficients.len(), forms.len() + 1);
            return Ok(ClassPolynomial { discriminant: disc.value(), coefficients });
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted(disc.value()))
}

/// `prod_R (x - j(tau_R))` evaluated numerically at an integer point, from the
/// individual `j` values (no product tree, no rounding).
pub fn evaluate_from_roots(disc: &Discriminant, x: i64, prec: u32) -> (Float, Float) {
    let mut acc = Complex::real(prec, 1.0);
    for f in reduced_forms(disc) {
        let j = j_of_form(&f, disc.abs(), prec);
        let diff = Complex { re: Float::with_val(prec, x) - j.re, im: Float::with_val(prec, -j.im) };
        acc = acc.mul(&diff, prec);
    }
    (acc.re, acc.im)
}

pub fn j_invariant_of_form(form: &BinaryQF, prec: u32) -> (Float, Float) {
    let j = j_of_form(form, form.discriminant().unsigned_abs(), prec);
    (j.re, j.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hcp(d: i64) -> Vec<Integer> {
        compute_class_polynomial(&Discriminant::new(d).unwrap(), None).unwrap().coefficients
    }

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(hcp(-3), ints(&[0, 1]));
        assert_eq!(hcp(-4), ints(&[-1728, 1]));
        assert_eq!(hcp(-7), ints(&[3375, 1]));
        assert_eq!(hcp(-8), ints(&[-8000, 1]));
    }

    #[test]
    fn heegner_163() {
        // j((1 + sqrt -163) / 2) = -640320^3
        let c = Integer::from(640320u64 * 640320 * 640320);
        assert_eq!(hcp(-163), vec![c, Integer::from(1)]);
    }

    #[test]
    fn j_at_i() {
        let (re, im) = j_invariant_of_form(&BinaryQF::new(1, 0, 1).unwrap(), 200);
        assert!((re - 1728.0f64).abs() < 1e-40);
        assert!(im.abs() < 1e-40);
    }

    #[test]
    fn degree_is_class_number() {
        for d in [-15i64, -20, -23, -39, -47, -56, -71, -75, -84, -99] {
            let disc = Discriminant::new(d).unwrap();
            let h = reduced_forms(&disc).len();
            assert_eq!(hcp(d).len(), h + 1, "D={d}");
        }
    }

    #[test]
    fn root_product_oracle() {
        for d in [-23i64, -47, -71, -140] {
            let disc = Discriminant::new(d).unwrap();
            let poly = hcp(d);
            for x in [0i64, 1] {
                let (re, im) = evaluate_from_roots(&disc, x, 1200);
                let value: Integer = poly.iter().rev().fold(Integer::new(), |acc, c| acc * x + c);
                let diff = Float::with_val(1200, &re - &value).abs();
                assert!(diff < 0.25, "D={d} x={x}");
                assert!(im.abs() < 0.25);
            }
        }
    }

    #[test]
    fn too_little_precision_is_retried() {
        let disc = Discriminant::new(-71).unwrap();
        // 80 bits cannot hold the coefficients; the doubled runs can
        let low = compute_class_polynomial(&disc, Some(80)).unwrap();
        assert_eq!(low.coefficients, hcp(-71));
        assert!(compute_class_polynomial(&disc, Some(4)).is_err());
    }
}
