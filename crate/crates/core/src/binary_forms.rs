//! Positive definite integral binary quadratic forms `a x^2 + b xy + c y^2`.

use serde::Serialize;

use crate::arith::{gcd, isqrt, sigma0, Discriminant};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BinaryQF {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryQF {
    /// Builds the reduced representative of the class of `(a, b, c)`.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        Ok(Self::raw(a, b, c)?.reduced())
    }

    /// Keeps the coefficients as given; only positive definiteness is checked.
    pub fn raw(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = BinaryQF { a, b, c };
        if a <= 0 || f.discriminant() >= 0 {
            return Err(Error::InvalidBinaryForm(format!(
                "({a},{b},{c}) is not positive definite"
            )));
        }
        Ok(f)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a.unsigned_abs(), self.b.unsigned_abs()), self.c.unsigned_abs()) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let BinaryQF { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn reduced(&self) -> BinaryQF {
        let BinaryQF { mut a, mut b, .. } = *self;
        let disc = self.discriminant();
        let c = loop {
            // bring b into (-a, a]
            let two_a = 2 * a;
            b += (a - b).div_euclid(two_a) * two_a;
            let c = (b * b - disc) / (4 * a);
            if c >= a {
                break c;
            }
            a = c;
            b = -b;
        };
        if a == c && b < 0 {
            b = -b;
        }
        BinaryQF { a, b, c }
    }

    /// Form obtained by the substitution `(x, y) -> (p x + q y, r x + s y)`.
    pub fn transform(&self, [p, q, r, s]: [i64; 4]) -> BinaryQF {
        BinaryQF {
            a: self.eval(p, r),
            b: 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
            c: self.eval(q, s),
        }
    }
}

impl std::fmt::Display for BinaryQF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// All primitive reduced forms of discriminant `disc`, sorted by `(a, b)`.
pub fn reduced_forms(disc: &Discriminant) -> Vec<BinaryQF> {
    let d = disc.value();
    let n = disc.abs() as u128;
    let a_max = isqrt(n / 3) as i64;
    let mut forms = Vec::new();
    for a in 1..=a_max {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = BinaryQF { a, b, c };
            if c >= a && f.is_reduced() && f.is_primitive() {
                forms.push(f);
            }
        }
    }
    forms
}

pub fn class_number(disc: &Discriminant) -> u64 {
    reduced_forms(disc).len() as u64
}

pub fn automorph_count_u(disc: &Discriminant) -> u64 {
    disc.automorph_count()
}

/// Number of `(x, y)` in `Z^2` with `R(x, y) = n`.
pub fn count_representations_binary(form: &BinaryQF, n: i64) -> Result<u64> {
    if n < 0 {
        return Err(Error::NonPositive(n as i128));
    }
    let (a, b, c) = (form.a as i128, form.b as i128, form.c as i128);
    let n = n as i128;
    let neg_disc = 4 * a * c - b * b;
    let y_max = isqrt((4 * a * n / neg_disc) as u128) as i128;
    let mut count = 0u64;
    for y in -y_max..=y_max {
        // a x^2 + (b y) x + (c y^2 - n) = 0
        let disc = b * b * y * y - 4 * a * (c * y * y - n);
        if disc < 0 {
            continue;
        }
        let s = isqrt(disc as u128) as i128;
        if s * s != disc {
            continue;
        }
        for num in [-b * y + s, -b * y - s] {
            if num % (2 * a) == 0 {
                count += 1;
            }
            if s == 0 {
                break;
            }
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, Serialize)]
pub struct DirichletReport {
    pub form: BinaryQF,
    pub n: u64,
    pub representations: u64,
    pub automorphs: u64,
    pub sigma0: u64,
    pub bound: u64,
    pub holds: bool,
}

/// Checks `r(R, n) <= u(disc(R)) * sigma0(n)`.
pub fn dirichlet_bound_holds(form: &BinaryQF, n: u64) -> Result<DirichletReport> {
    let s0 = sigma0(n)?;
    let u = Discriminant::new(form.discriminant())?.automorph_count();
    let r = count_representations_binary(form, n as i64)?;
    Ok(DirichletReport {
        form: *form,
        n,
        representations: r,
        automorphs: u,
        sigma0: s0,
        bound: u * s0,
        holds: r <= u * s0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    /// Brute force over a box that certainly contains the ellipse.
    fn count_box(f: &BinaryQF, n: i64) -> u64 {
        let m = 2 * (n + 1);
        let mut k = 0;
        for x in -m..=m {
            for y in -m..=m {
                if f.eval(x, y) == n {
                    k += 1;
                }
            }
        }
        k
    }

    #[test]
    fn reduced_form_examples() {
        let f = |a, b, c| BinaryQF { a, b, c };
        assert_eq!(reduced_forms(&disc(-3)), vec![f(1, 1, 1)]);
        assert_eq!(reduced_forms(&disc(-4)), vec![f(1, 0, 1)]);
        assert_eq!(
            reduced_forms(&disc(-23)),
            vec![f(1, 1, 6), f(2, -1, 3), f(2, 1, 3)]
        );
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(&disc(-3)), 1);
        assert_eq!(class_number(&disc(-75)), 2);
        assert_eq!(class_number(&disc(-163)), 1);
        assert_eq!(class_number(&disc(-23)), 3);
    }

    #[test]
    fn automorphs() {
        assert_eq!(automorph_count_u(&disc(-3)), 6);
        assert_eq!(automorph_count_u(&disc(-4)), 4);
        assert_eq!(automorph_count_u(&disc(-20)), 2);
    }

    #[test]
    fn representation_examples() {
        let sq = BinaryQF::new(1, 0, 1).unwrap();
        let hex = BinaryQF::new(1, 1, 1).unwrap();
        assert_eq!(count_representations_binary(&sq, 0).unwrap(), 1);
        assert_eq!(count_representations_binary(&sq, 2).unwrap(), 4);
        assert_eq!(count_box(&hex, 3), 6);
        assert_eq!(count_representations_binary(&hex, 3).unwrap(), 6);
        assert!(count_representations_binary(&sq, -1).is_err());
    }

    #[test]
    fn enumeration_matches_box() {
        for f in [(1, 0, 1), (1, 1, 1), (2, 1, 3), (3, 2, 7), (5, -3, 4)] {
            let form = BinaryQF::raw(f.0, f.1, f.2).unwrap();
            for n in 0..60 {
                assert_eq!(count_representations_binary(&form, n).unwrap(), count_box(&form, n));
            }
        }
    }

    #[test]
    fn dirichlet_examples() {
        let rep = dirichlet_bound_holds(&BinaryQF::new(1, 0, 1).unwrap(), 2).unwrap();
        assert_eq!((rep.representations, rep.bound, rep.holds), (4, 8, true));
        let rep = dirichlet_bound_holds(&BinaryQF::new(1, 1, 1).unwrap(), 3).unwrap();
        assert_eq!((rep.representations, rep.bound, rep.holds), (6, 12, true));
        let rep = dirichlet_bound_holds(&BinaryQF::new(1, 0, 5).unwrap(), 1).unwrap();
        assert_eq!((rep.representations, rep.bound, rep.holds), (2, 2, true));
    }

    #[test]
    fn reduction_is_idempotent_and_reduced() {
        let f = BinaryQF::raw(1, 0, 1).unwrap().transform([2, 1, 1, 1]);
        assert_eq!(f.discriminant(), -4);
        assert_eq!(f.reduced(), BinaryQF { a: 1, b: 0, c: 1 });
        let g = BinaryQF::raw(11, 49, 55).unwrap();
        assert!(g.reduced().is_reduced());
        assert_eq!(g.reduced().reduced(), g.reduced());
        assert!(BinaryQF::new(-1, 0, 1).is_err());
        assert!(BinaryQF::new(1, 3, 1).is_err());
    }
}
