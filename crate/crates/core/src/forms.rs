//! Positive definite binary quadratic forms `a x^2 + b x y + c y^2` of negative
//! discriminant: reduction and Gaussian composition.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::ext_gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    /// Builds `(a, b, (b^2 - D)/(4a))`; `4a` must divide `b^2 - D`.
    pub fn from_ab(a: i64, b: i64, discriminant: i64) -> Self {
        let num = b as i128 * b as i128 - discriminant as i128;
        debug_assert_eq!(num % (4 * a as i128), 0);
        QuadraticForm {
            a,
            b,
            c: (num / (4 * a as i128)) as i64,
        }
    }

    /// The principal form of discriminant `D`; `(1, 0, 0)` stands for the trivial class of `Q`.
    pub fn principal(discriminant: i64) -> Self {
        if discriminant == 0 {
            return QuadraticForm { a: 1, b: 0, c: 0 };
        }
        let b = discriminant.rem_euclid(2);
        Self::from_ab(1, b, discriminant)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let QuadraticForm { a, b, c } = *self;
        if self.discriminant() == 0 {
            return *self == Self::principal(0);
        }
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The unique reduced form equivalent to `self` (`-a < b <= a`, `a <= c`,
    /// `b >= 0` when `a == c`).
    pub fn reduce(&self) -> Self {
        let d = self.discriminant();
        if d == 0 {
            return *self;
        }
        let (mut a, mut b) = (self.a as i128, self.b as i128);
        let dd = d as i128;
        let normalize = |a: i128, b: i128| -> i128 {
            // b into (-a, a]
            let two_a = 2 * a;
            let mut r = b.rem_euclid(two_a);
            if r > a {
                r -= two_a;
            }
            r
        };
        b = normalize(a, b);
        let mut c = (b * b - dd) / (4 * a);
        while a > c {
            let (na, nb) = (c, -b);
            a = na;
            b = normalize(a, nb);
            c = (b * b - dd) / (4 * a);
        }
        if a == c && b < 0 {
            b = -b;
        }
        QuadraticForm {
            a: a as i64,
            b: b as i64,
            c: c as i64,
        }
    }

    /// The inverse class `(a, -b, c)`, reduced.
    pub fn inverse(&self) -> Self {
        QuadraticForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
        .reduce()
    }

    /// Gaussian composition followed by reduction.
    pub fn compose(&self, other: &Self) -> Self {
        let disc = self.discriminant();
        debug_assert_eq!(disc, other.discriminant(), "composition needs equal discriminants");
        if disc == 0 {
            return *self;
        }
        let (mut f1, mut f2) = (*self, *other);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let (g, u, _) = ext_gcd(a2, a1);
            (u, g)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let (g, u, v) = ext_gcd(s, d);
            (u, -v, g)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc as i128) / (4 * a3);
        debug_assert_eq!(b3 * b3 - 4 * a3 * c3, disc as i128);
        QuadraticForm {
            a: a3 as i64,
            b: b3 as i64,
            c: c3 as i64,
        }
        .reduce()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::principal(self.discriminant());
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All reduced primitive forms of discriminant `D < 0`, sorted.
pub fn reduced_forms(discriminant: i64) -> Vec<QuadraticForm> {
    assert!(discriminant < 0);
    let d = discriminant;
    let mut out = Vec::new();
    // a <= sqrt(|D|/3)
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b), c) != 1 {
                continue;
            }
            out.push(QuadraticForm { a, b, c });
        }
        a += 1;
    }
    out.sort();
    out
}
