#![allow(dead_code)]

use orderembed::extension::RelativeExtension;
use orderembed::{BaseField, OkElem};

/// A pair `(k, K)` with `K = k[x]/(f)`.
pub struct Case {
    pub name: &'static str,
    pub discriminant: i64,
    /// `(a, b)` for `a + b w`, constant term first.
    pub coeffs: &'static [(i64, i64)],
    /// `(genus class count, embeddable class count)` for maximal orders of `M_n(k)`.
    pub expected: (u64, u64),
}

impl Case {
    pub fn field(&self) -> BaseField {
        BaseField::new(self.discriminant).unwrap()
    }

    pub fn extension(&self) -> RelativeExtension {
        let f = self.coeffs.iter().map(|&(a, b)| OkElem::new(a, b)).collect();
        RelativeExtension::new(self.field(), f).unwrap()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }
}

pub const CORPUS: &[Case] = &[
    Case {
        name: "d23_cubic",
        discriminant: -23,
        coeffs: &[(-1, 0), (-1, 0), (0, 0), (1, 0)],
        expected: (3, 1),
    },
    Case {
        name: "d23_cubic_monogenic",
        discriminant: -23,
        coeffs: &[(1, 0), (-2, 1), (-1, -1), (1, 0)],
        expected: (3, 1),
    },
    Case {
        name: "d20_quartic",
        discriminant: -20,
        coeffs: &[(9, 0), (0, 0), (-2, 0), (0, 0), (1, 0)],
        expected: (2, 1),
    },
    Case {
        name: "d31_cubic",
        discriminant: -31,
        coeffs: &[(1, 0), (1, 0), (0, 0), (1, 0)],
        expected: (3, 1),
    },
    Case {
        name: "d15_quartic",
        discriminant: -15,
        coeffs: &[(9, 0), (0, 0), (-14, 0), (0, 0), (1, 0)],
        expected: (2, 1),
    },
    Case {
        name: "d47_quintic",
        discriminant: -47,
        coeffs: &[(1, 0), (0, 0), (-1, 0), (2, 0), (-2, 0), (1, 0)],
        expected: (5, 1),
    },
    Case {
        name: "d47_cubic",
        discriminant: -47,
        coeffs: &[(-1, 0), (-1, 0), (0, 0), (1, 0)],
        expected: (1, 1),
    },
    Case {
        name: "d4_cubic",
        discriminant: -4,
        coeffs: &[(-2, 0), (0, 0), (0, 0), (1, 0)],
        expected: (1, 1),
    },
    Case {
        name: "rational_cubic",
        discriminant: 0,
        coeffs: &[(-2, 0), (0, 0), (0, 0), (1, 0)],
        expected: (1, 1),
    },
];
