//! Integer-valued binary quadratic polynomials
//! `P(x, y) = a x^2 + b xy + c y^2 + d x + e y + f`.
//!
//! Such a polynomial has `a, c, d, e` in `Z/2` and `b, f` in `Z`, so it is
//! stored through the integers `2a, b, 2c, 2d, 2e, f`. Whether it really is
//! integer valued is decided by its values on the six points
//! `(0,0), (1,0), (2,0), (0,1), (0,2), (1,1)`: those determine its
//! coordinates in the binomial basis `1, x, C(x,2), y, C(y,2), xy`.

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{isqrt, quadratic_le_zero_interval, sigma0_tilde};
use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

const BASIS_POINTS: [(i64, i64); 6] = [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (1, 1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IntegerValuedQP {
    pub two_a: i64,
    pub b: i64,
    pub two_c: i64,
    pub two_d: i64,
    pub two_e: i64,
    pub f: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimumPoint {
    pub lambda: Rational,
    pub mu: Rational,
    /// `min P = f - Q(lambda, mu)`, attained at `(-lambda, -mu)`.
    pub m: Rational,
}

/// Automorph count of the quadratic part: 6, 4 or 2.
pub fn automorphs_of(disc: i64) -> u64 {
    match disc {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

fn half_integer(name: &'static str, v: Ratio<i64>) -> Result<i64> {
    if *v.denom() == 1 {
        Ok(2 * v.numer())
    } else if *v.denom() == 2 {
        Ok(*v.numer())
    } else {
        Err(Error::HalfIntegerViolation {
            name,
            value: v.to_string(),
            reason: "not in Z/2",
        })
    }
}

fn integer(name: &'static str, v: Ratio<i64>) -> Result<i64> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::HalfIntegerViolation {
            name,
            value: v.to_string(),
            reason: "must be an integer",
        })
    }
}

/// Strict validation: integer valued, positive definite, and `P >= 0` on `R^2`.
pub fn validate_integer_valued(coeffs: [Ratio<i64>; 6]) -> Result<IntegerValuedQP> {
    IntegerValuedQP::from_rationals(coeffs, true)
}

impl IntegerValuedQP {
    /// Strict constructor from the encoded integers `2a, b, 2c, 2d, 2e, f`.
    pub fn new(two_a: i64, b: i64, two_c: i64, two_d: i64, two_e: i64, f: i64) -> Result<Self> {
        Self::check(IntegerValuedQP { two_a, b, two_c, two_d, two_e, f }, true)
    }

    /// Like [`Self::new`] but accepts a negative minimum; usable for counting only.
    pub fn relaxed(two_a: i64, b: i64, two_c: i64, two_d: i64, two_e: i64, f: i64) -> Result<Self> {
        Self::check(IntegerValuedQP { two_a, b, two_c, two_d, two_e, f }, false)
    }

    pub fn from_rationals(coeffs: [Ratio<i64>; 6], strict: bool) -> Result<Self> {
        let [a, b, c, d, e, f] = coeffs;
        let p = IntegerValuedQP {
            two_a: half_integer("a", a)?,
            b: integer("b", b)?,
            two_c: half_integer("c", c)?,
            two_d: half_integer("d", d)?,
            two_e: half_integer("e", e)?,
            f: integer("f", f)?,
        };
        Self::check(p, strict)
    }

    fn check(p: Self, strict: bool) -> Result<Self> {
        for (x, y) in BASIS_POINTS {
            let v = p.eval_twice(x, y);
            if v % 2 != 0 {
                return Err(Error::NotIntegerValued {
                    point: (x, y),
                    value: Ratio::new(v, 2).to_string(),
                });
            }
        }
        if p.two_a <= 0 || p.discriminant() >= 0 {
            return Err(Error::NotPositiveDefinite);
        }
        if strict {
            let m = p.minimum_point().m;
            if m < Rational::zero() {
                return Err(Error::NegativeMinimum(m.to_string()));
            }
        }
        Ok(p)
    }

    /// `b^2 - 4ac`, an integer.
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - self.two_a * self.two_c
    }

    /// `2 P(x, y)`.
    pub fn eval_twice(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.two_a as i128 * x * x
            + 2 * self.b as i128 * x * y
            + self.two_c as i128 * y * y
            + self.two_d as i128 * x
            + self.two_e as i128 * y
            + 2 * self.f as i128
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        self.eval_twice(x, y) / 2
    }

    /// `Q(x, y)` of the quadratic part at rational arguments.
    pub fn quadratic_part_at(&self, x: Rational, y: Rational) -> Rational {
        (Rational::from(self.two_a as i128) * x * x
            + Rational::from(2 * self.b as i128) * x * y
            + Rational::from(self.two_c as i128) * y * y)
            / 2
    }

    pub fn minimum_point(&self) -> MinimumPoint {
        let disc = self.discriminant() as i128;
        let (two_a, b, two_c) = (self.two_a as i128, self.b as i128, self.two_c as i128);
        let (two_d, two_e) = (self.two_d as i128, self.two_e as i128);
        let lambda = Rational::new(b * two_e - two_c * two_d, 2 * disc);
        let mu = Rational::new(b * two_d - two_a * two_e, 2 * disc);
        let m = Rational::from(self.f as i128) - self.quadratic_part_at(lambda, mu);
        MinimumPoint { lambda, mu, m }
    }
}

impl std::fmt::Display for IntegerValuedQP {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{}",
            self.two_a, self.b, self.two_c, self.two_d, self.two_e, self.f
        )
    }
}

pub fn minimum_point(p: &IntegerValuedQP) -> MinimumPoint {
    p.minimum_point()
}

/// Number of `(x, y)` in `Z^2` with `P(x, y) = n`.
pub fn count_representations_poly(p: &IntegerValuedQP, n: i64) -> u64 {
    let mut count = 0;
    for_each_solution(p, n, |_, _| count += 1);
    count
}

/// Calls `visit(x, y)` for every integer solution of `P(x, y) = n`.
pub fn for_each_solution(p: &IntegerValuedQP, n: i64, mut visit: impl FnMut(i64, i64)) {
    let (two_a, b) = (p.two_a as i128, p.b as i128);
    let (two_d, two_e, f, n) = (p.two_d as i128, p.two_e as i128, p.f as i128, n as i128);
    let disc = p.discriminant() as i128;
    // two_a x^2 + (2b y + two_d) x + (two_c y^2 + two_e y + 2f - 2n) = 0 is solvable
    // over R iff its x-discriminant D(y) = alpha y^2 + beta y + gamma is >= 0.
    let alpha = 4 * disc;
    let beta = 4 * (b * two_d - two_a * two_e);
    let gamma = two_d * two_d - 8 * two_a * (f - n);
    let Some((lo, hi)) = quadratic_le_zero_interval(-alpha, -beta, -gamma) else {
        return;
    };
    for y in lo..=hi {
        let dy = alpha * y * y + beta * y + gamma;
        if dy < 0 {
            continue;
        }
        let s = isqrt(dy as u128) as i128;
        if s * s != dy {
            continue;
        }
        let lin = 2 * b * y + two_d;
        for num in [-lin - s, -lin + s] {
            if num % (2 * two_a) == 0 {
                visit((num / (2 * two_a)) as i64, y as i64);
            }
            if s == 0 {
                break;
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QpBoundReport {
    pub polynomial: IntegerValuedQP,
    pub n: u64,
    pub discriminant: i64,
    pub representations: u64,
    pub automorphs: u64,
    pub sigma0_tilde_argument: u128,
    pub sigma0_tilde: u64,
    pub bound: u64,
    pub holds: bool,
}

/// Checks `r(P, n) <= u(disc) * sigma0_tilde(disc^2 n)`.
pub fn qp_bound_holds(p: &IntegerValuedQP, n: u64) -> Result<QpBoundReport> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    let checked = IntegerValuedQP::check(*p, true)?;
    let disc = checked.discriminant();
    let arg = (disc as i128 * disc as i128) as u128 * n as u128;
    let st = sigma0_tilde(u64::try_from(arg).expect("disc^2 n fits in u64"))?;
    let u = automorphs_of(disc);
    let r = count_representations_poly(&checked, n as i64);
    Ok(QpBoundReport {
        polynomial: checked,
        n,
        discriminant: disc,
        representations: r,
        automorphs: u,
        sigma0_tilde_argument: arg,
        sigma0_tilde: st,
        bound: u * st,
        holds: r <= u * st,
    })
}

/// Reduced denominators of `(lambda, mu)` as a pair.
pub fn minimum_denominators(p: &IntegerValuedQP) -> (i128, i128) {
    let mp = p.minimum_point();
    (*mp.lambda.denom(), *mp.mu.denom())
}

impl MinimumPoint {
    pub fn is_origin(&self) -> bool {
        self.lambda.is_zero() && self.mu.is_zero()
    }

    pub fn common_denominator(&self) -> i128 {
        num_integer::lcm(*self.lambda.denom(), *self.mu.denom())
    }
}
