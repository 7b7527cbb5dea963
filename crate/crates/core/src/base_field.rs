//! The base field `k`: either the rationals or an imaginary quadratic field of
//! fundamental discriminant `D < 0`.
//!
//! The ring of integers is `Z[w]` with `w = (1 + sqrt D)/2` when `D = 1 mod 4`
//! and `w = sqrt(D/4)` when `D = 0 mod 4`, so `w^2 = tr * w - nm` with
//! `(tr, nm) = (1, (1 - D)/4)` or `(0, -D/4)`. Integral elements are pairs
//! `a + b w`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, big_mod, inv_mod, is_prime, kronecker, mul_mod};
use crate::error::{Error, Result};
use crate::finite_field::{Fe, Fq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BaseField {
    discriminant: i64,
}

/// Largest accepted `|D|`; the class group is found by enumerating reduced forms.
pub const MAX_ABS_DISCRIMINANT: i64 = 1 << 40;

impl BaseField {
    pub fn rational() -> Self {
        BaseField { discriminant: 0 }
    }

    /// `0` selects the rationals; otherwise a negative fundamental discriminant.
    pub fn new(discriminant: i64) -> Result<Self> {
        if discriminant == 0 {
            return Ok(Self::rational());
        }
        let fail = |reason: &str| {
            Err(Error::InvalidDiscriminant {
                discriminant,
                reason: reason.to_string(),
            })
        };
        if discriminant > 0 {
            return fail("real quadratic base fields are not supported (D must be negative)");
        }
        if discriminant < -MAX_ABS_DISCRIMINANT {
            return fail("|D| exceeds the supported range");
        }
        let d = -discriminant;
        match discriminant.rem_euclid(4) {
            1 => {
                if !arith::is_squarefree(d as u64) {
                    return fail("D = 1 mod 4 but D is not squarefree (non-maximal order)");
                }
            }
            0 => {
                let m = discriminant / 4;
                if !matches!(m.rem_euclid(4), 2 | 3) {
                    return fail("D = 0 mod 4 but D/4 is not 2 or 3 mod 4 (non-maximal order)");
                }
                if !arith::is_squarefree((d / 4) as u64) {
                    return fail("D/4 is not squarefree (non-maximal order)");
                }
            }
            _ => return fail("D must be 0 or 1 mod 4"),
        }
        Ok(BaseField { discriminant })
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn is_rational(&self) -> bool {
        self.discriminant == 0
    }

    /// `[k : Q]`.
    pub fn degree(&self) -> u32 {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    /// Trace of the integral generator `w`.
    pub fn omega_trace(&self) -> i64 {
        if self.is_rational() {
            0
        } else {
            self.discriminant.rem_euclid(4)
        }
    }

    /// Norm of the integral generator `w`.
    pub fn omega_norm(&self) -> i64 {
        let d = self.discriminant;
        if self.is_rational() {
            0
        } else if d.rem_euclid(4) == 1 {
            (1 - d) / 4
        } else {
            -d / 4
        }
    }

    pub fn mul(&self, x: &OkElem, y: &OkElem) -> OkElem {
        // (a + b w)(c + d w) = ac - bd nm + (ad + bc + bd tr) w
        let bd = &x.b * &y.b;
        OkElem {
            a: &x.a * &y.a - &bd * self.omega_norm(),
            b: &x.a * &y.b + &x.b * &y.a + &bd * self.omega_trace(),
        }
    }

    pub fn conj(&self, x: &OkElem) -> OkElem {
        if self.is_rational() {
            return x.clone();
        }
        // conj(w) = tr - w
        OkElem {
            a: &x.a + &x.b * self.omega_trace(),
            b: -&x.b,
        }
    }

    /// Absolute norm `N_{k/Q}`.
    pub fn norm(&self, x: &OkElem) -> BigInt {
        if self.is_rational() {
            return x.a.clone();
        }
        &x.a * &x.a + &x.a * &x.b * self.omega_trace() + &x.b * &x.b * self.omega_norm()
    }

    /// `x / y` when the quotient is integral.
    pub fn div_exact(&self, x: &OkElem, y: &OkElem) -> Option<OkElem> {
        if y.is_zero() {
            return None;
        }
        if self.is_rational() {
            let (q, r) = x.a.div_rem(&y.a);
            return r.is_zero().then(|| OkElem::int(q));
        }
        let n = self.norm(y);
        let num = self.mul(x, &self.conj(y));
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(OkElem { a: qa, b: qb })
        } else {
            None
        }
    }

    /// Roots of the minimal polynomial of `w` modulo `p`, ascending.
    fn omega_roots_mod(&self, p: u64) -> Vec<u64> {
        let tr = self.omega_trace().rem_euclid(p as i64) as u64;
        let nm = self.omega_norm().rem_euclid(p as i64) as u64;
        let eval = |x: u64| (mul_mod(x, x, p) + p - mul_mod(tr, x, p) + nm) % p;
        if p < 64 {
            return (0..p).filter(|x| eval(*x) == 0).collect();
        }
        // odd p: roots (tr +- sqrt D)/2
        let dm = self.discriminant.rem_euclid(p as i64) as u64;
        let Some(s) = arith::sqrt_mod(dm, p) else {
            return Vec::new();
        };
        let half = inv_mod(2, p);
        let mut roots = vec![mul_mod((tr + s) % p, half, p), mul_mod((tr + p - s) % p, half, p)];
        roots.sort_unstable();
        roots.dedup();
        debug_assert!(roots.iter().all(|r| eval(*r) == 0));
        roots
    }

    /// The primes of `k` above the rational prime `p`, split primes ordered by root.
    pub fn prime_ideals_above(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime {
                p,
                reason: "not a rational prime".into(),
            });
        }
        if self.is_rational() {
            return Ok(vec![PrimeIdeal {
                p,
                root: None,
                kind: PrimeKind::Rational,
            }]);
        }
        let primes = match kronecker(self.discriminant, p) {
            1 => self
                .omega_roots_mod(p)
                .into_iter()
                .map(|r| PrimeIdeal {
                    p,
                    root: Some(r),
                    kind: PrimeKind::Split,
                })
                .collect(),
            -1 => vec![PrimeIdeal {
                p,
                root: None,
                kind: PrimeKind::Inert,
            }],
            _ => {
                let roots = self.omega_roots_mod(p);
                debug_assert_eq!(roots.len(), 1);
                vec![PrimeIdeal {
                    p,
                    root: Some(roots[0]),
                    kind: PrimeKind::Ramified,
                }]
            }
        };
        Ok(primes)
    }

    /// Resolves a prime given by rational prime and optional root selector.
    pub fn resolve_prime(&self, p: u64, root: Option<u64>) -> Result<PrimeIdeal> {
        let primes = self.prime_ideals_above(p)?;
        match root {
            None if primes.len() == 1 => Ok(primes[0].clone()),
            None => Err(Error::InvalidPrime {
                p,
                reason: format!("{p} splits in k; a root selector is required"),
            }),
            Some(r) => primes
                .into_iter()
                .find(|q| q.root == Some(r % p))
                .ok_or_else(|| Error::InvalidPrime {
                    p,
                    reason: format!("no prime above {p} with root {r}"),
                }),
        }
    }

    /// Whether `prime` is a prime ideal of this field.
    pub fn owns(&self, prime: &PrimeIdeal) -> bool {
        self.prime_ideals_above(prime.p)
            .map(|ps| ps.contains(prime))
            .unwrap_or(false)
    }

    /// Reduction data for `prime`.
    pub fn residue(&self, prime: &PrimeIdeal) -> Residue {
        Residue::new(*self, prime.clone())
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "Q")
        } else {
            let d = self.discriminant;
            write!(f, "Q(sqrt({}))", if d % 4 == 0 { d / 4 } else { d })
        }
    }
}

/// Integral element `a + b w` of the base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OkElem {
    pub a: BigInt,
    pub b: BigInt,
}

impl OkElem {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        OkElem {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn int(a: impl Into<BigInt>) -> Self {
        OkElem {
            a: a.into(),
            b: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn add(&self, o: &OkElem) -> OkElem {
        OkElem {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn sub(&self, o: &OkElem) -> OkElem {
        OkElem {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    pub fn neg(&self) -> OkElem {
        OkElem {
            a: -&self.a,
            b: -&self.b,
        }
    }

    pub fn scale(&self, c: &BigInt) -> OkElem {
        OkElem {
            a: &self.a * c,
            b: &self.b * c,
        }
    }

    /// An upper bound for the complex absolute value under either embedding.
    pub fn abs_bound(&self, field: &BaseField) -> BigInt {
        if field.is_rational() {
            return self.a.abs();
        }
        let n = field.norm(self);
        n.sqrt() + 1
    }
}

impl fmt::Display for OkElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match &self.b {
            b if b.is_one() => "w".to_string(),
            b if (-b).is_one() => "-w".to_string(),
            b => format!("{b}w"),
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{w}"),
            (false, false) if self.b.is_negative() => write!(f, "{}{w}", self.a),
            (false, false) => write!(f, "{}+{w}", self.a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeKind {
    /// A rational prime, base field `Q`.
    Rational,
    Split,
    Inert,
    Ramified,
}

/// A nonzero prime of the base field.
///
/// Split and ramified primes are `(p, w - root)`; inert primes are `(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub root: Option<u64>,
    pub kind: PrimeKind,
}

impl PrimeIdeal {
    /// Ramification index over `Q`.
    pub fn ramification(&self) -> u32 {
        if self.kind == PrimeKind::Ramified {
            2
        } else {
            1
        }
    }

    /// Residue degree over `Q`.
    pub fn residue_degree(&self) -> u32 {
        if self.kind == PrimeKind::Inert {
            2
        } else {
            1
        }
    }

    pub fn norm(&self) -> u64 {
        self.p.pow(self.residue_degree())
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.root) {
            (PrimeKind::Rational, _) | (PrimeKind::Inert, _) => write!(f, "({})", self.p),
            (_, Some(r)) => write!(f, "({}, w-{})", self.p, r),
            (_, None) => write!(f, "({})", self.p),
        }
    }
}

/// Reduction modulo a prime `P` of `o_k`, together with the map `x -> x/pi mod P`
/// for a fixed uniformizer `pi`.
#[derive(Clone, Debug)]
pub struct Residue {
    field: BaseField,
    prime: PrimeIdeal,
    fq: Fq,
    // split primes: root of the minimal polynomial of w modulo p^2 lifting `root`
    lifted_root: u64,
    // ramified primes: inverse of N(w - root)/p modulo p
    ramified_unit_inv: u64,
}

impl Residue {
    fn new(field: BaseField, prime: PrimeIdeal) -> Self {
        let p = prime.p;
        let fq = if prime.kind == PrimeKind::Inert {
            Fq::quadratic(
                p,
                field.omega_trace().rem_euclid(p as i64) as u64,
                field.omega_norm().rem_euclid(p as i64) as u64,
            )
        } else {
            Fq::prime(p)
        };
        let mut lifted_root = 0;
        let mut ramified_unit_inv = 0;
        let r = prime.root.unwrap_or(0);
        match prime.kind {
            PrimeKind::Split => {
                // Newton step modulo p^2 on m(x) = x^2 - tr x + nm
                let p2 = (p as i128) * (p as i128);
                let (tr, nm) = (field.omega_trace() as i128, field.omega_norm() as i128);
                let ri = r as i128;
                let m = (ri * ri - tr * ri + nm).rem_euclid(p2);
                let dm = (2 * ri - tr).rem_euclid(p as i128) as u64;
                let step = (m / p as i128) as u64 % p;
                let corr = mul_mod(step, inv_mod(dm, p), p) as i128;
                lifted_root = (ri - corr * p as i128).rem_euclid(p2) as u64;
            }
            PrimeKind::Ramified => {
                let pi = OkElem::new(-(r as i64), 1);
                let n = field.norm(&pi);
                let unit = n / BigInt::from(p);
                ramified_unit_inv = inv_mod(big_mod(&unit, p), p);
            }
            _ => {}
        }
        Residue {
            field,
            prime,
            fq,
            lifted_root,
            ramified_unit_inv,
        }
    }

    pub fn prime(&self) -> &PrimeIdeal {
        &self.prime
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn reduce(&self, x: &OkElem) -> Fe {
        let p = self.prime.p;
        match self.prime.kind {
            PrimeKind::Rational => [big_mod(&x.a, p), 0],
            PrimeKind::Inert => [big_mod(&x.a, p), big_mod(&x.b, p)],
            PrimeKind::Split | PrimeKind::Ramified => {
                let r = self.prime.root.unwrap_or(0);
                [(big_mod(&x.a, p) + mul_mod(big_mod(&x.b, p), r, p)) % p, 0]
            }
        }
    }

    pub fn contains(&self, x: &OkElem) -> bool {
        self.fq.is_zero(self.reduce(x))
    }

    /// A lift of a residue class to `o_k`, compatible with [`Residue::reduce`].
    pub fn lift(&self, c: Fe) -> OkElem {
        if self.prime.kind == PrimeKind::Inert {
            OkElem::new(c[0], c[1])
        } else {
            OkElem::int(c[0])
        }
    }

    /// `x / pi mod P` for `x` in `P`.
    pub fn reduce_div_uniformizer(&self, x: &OkElem) -> Fe {
        debug_assert!(self.contains(x), "element not in the prime");
        let p = self.prime.p;
        let bp = BigInt::from(p);
        match self.prime.kind {
            PrimeKind::Rational => [big_mod(&(&x.a / &bp), p), 0],
            PrimeKind::Inert => [big_mod(&(&x.a / &bp), p), big_mod(&(&x.b / &bp), p)],
            PrimeKind::Split => {
                // the completion is Z_p with w -> lifted_root; pi = p
                let p2 = (p as u128 * p as u128) as u64;
                let a = big_mod(&x.a, p2) as u128;
                let b = big_mod(&x.b, p2) as u128;
                let v = ((a + b * self.lifted_root as u128) % p2 as u128) as u64;
                debug_assert_eq!(v % p, 0);
                [(v / p) % p, 0]
            }
            PrimeKind::Ramified => {
                // pi = w - r; x / pi = x conj(pi) / N(pi) and x conj(pi) lies in P^2 = (p)
                let r = self.prime.root.unwrap_or(0) as i64;
                let pi_bar = self.field.conj(&OkElem::new(-r, 1));
                let y = self.field.mul(x, &pi_bar);
                debug_assert!((&y.a % &bp).is_zero() && (&y.b % &bp).is_zero());
                let z = OkElem {
                    a: &y.a / &bp,
                    b: &y.b / &bp,
                };
                let red = self.reduce(&z);
                [mul_mod(red[0], self.ramified_unit_inv, p), 0]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_validation() {
        for d in [-3, -4, -7, -8, -11, -15, -20, -23, -24, -31, -47, -84] {
            assert!(BaseField::new(d).is_ok(), "{d}");
        }
        for d in [-1, -12, -16, -27, -28, -9, 5, -2, -5, -36] {
            assert!(BaseField::new(d).is_err(), "{d}");
        }
        assert!(BaseField::new(0).unwrap().is_rational());
    }

    #[test]
    fn splitting_of_two_in_minus_23() {
        let k = BaseField::new(-23).unwrap();
        let ps = k.prime_ideals_above(2).unwrap();
        assert_eq!(ps.len(), 2);
        for p in &ps {
            assert_eq!((p.ramification(), p.residue_degree()), (1, 1));
        }
        // x^2 - x + 6 = x (x - 1) mod 2
        assert_eq!(ps[0].root, Some(0));
        assert_eq!(ps[1].root, Some(1));

        let r = k.prime_ideals_above(23).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].ramification(), r[0].residue_degree()), (2, 1));

        let q = BaseField::rational().prime_ideals_above(5).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!((q[0].ramification(), q[0].residue_degree()), (1, 1));
    }

    #[test]
    fn product_of_local_degrees_is_field_degree() {
        for d in [0, -3, -4, -20, -23, -47] {
            let k = BaseField::new(d).unwrap();
            for p in arith::primes_up_to(200) {
                let ps = k.prime_ideals_above(p).unwrap();
                let total: u32 = ps.iter().map(|q| q.ramification() * q.residue_degree()).sum();
                assert_eq!(total, k.degree(), "d = {d}, p = {p}");
            }
        }
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let k = BaseField::new(-23).unwrap();
        for p in [2u64, 3, 5, 23, 59, 101] {
            for prime in k.prime_ideals_above(p).unwrap() {
                let res = k.residue(&prime);
                let fq = *res.field();
                for (a, b, c, d) in [(3, 4, -7, 2), (1, 1, 1, -1), (10, -3, 5, 5)] {
                    let x = OkElem::new(a, b);
                    let y = OkElem::new(c, d);
                    assert_eq!(res.reduce(&k.mul(&x, &y)), fq.mul(res.reduce(&x), res.reduce(&y)));
                    assert_eq!(res.reduce(&x.add(&y)), fq.add(res.reduce(&x), res.reduce(&y)));
                }
            }
        }
    }

    #[test]
    fn division_by_uniformizer() {
        for d in [-23i64, -20, -4, -3] {
            let k = BaseField::new(d).unwrap();
            for p in [2u64, 3, 5, 7, 23] {
                for prime in k.prime_ideals_above(p).unwrap() {
                    let res = k.residue(&prime);
                    let fq = *res.field();
                    // pi * y / pi == y mod P for a fixed uniformizer pi
                    let pi = match prime.kind {
                        PrimeKind::Ramified => OkElem::new(-(prime.root.unwrap() as i64), 1),
                        _ => OkElem::int(p),
                    };
                    for (a, b) in [(1, 0), (2, 5), (-3, 7), (11, -13)] {
                        let y = OkElem::new(a, b);
                        let x = k.mul(&pi, &y);
                        assert_eq!(res.reduce_div_uniformizer(&x), res.reduce(&y), "d={d} p={prime}");
                        let _ = fq;
                    }
                }
            }
        }
    }
}
