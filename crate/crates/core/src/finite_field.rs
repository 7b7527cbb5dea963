//! Residue fields `F_q` with `q = p` or `q = p^2`, and factorization of
//! polynomials over them (square-free, distinct-degree and Cantor-Zassenhaus
//! equal-degree splitting).
//!
//! `F_{p^2}` is presented as `F_p[w]/(w^2 - t w + s)`, where the quadratic is
//! the reduction of the minimal polynomial of the base field generator at an
//! inert prime. Elements are coordinate pairs `[c0, c1] = c0 + c1 w`.

use rand::Rng;

use crate::arith::{inv_mod, mul_mod};

pub type Fe = [u64; 2];

/// Polynomial over `F_q`, coefficients in ascending degree, no trailing zeros.
pub type FqPoly = Vec<Fe>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u64,
    degree: u32,
    // w^2 = t w - s
    t: u64,
    s: u64,
}

impl Fq {
    pub fn prime(p: u64) -> Self {
        Fq {
            p,
            degree: 1,
            t: 0,
            s: 0,
        }
    }

    /// `F_p[w]/(w^2 - t w + s)`; the quadratic must be irreducible mod `p`.
    pub fn quadratic(p: u64, t: u64, s: u64) -> Self {
        let f = Fq {
            p,
            degree: 2,
            t: t % p,
            s: s % p,
        };
        debug_assert!((0..p.min(64)).all(|x| { !(mul_mod(x, x, p) + p - mul_mod(f.t, x, p) + f.s).is_multiple_of(p) }));
        f
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree)
    }

    pub fn zero(&self) -> Fe {
        [0, 0]
    }

    pub fn one(&self) -> Fe {
        [1, 0]
    }

    pub fn from_int(&self, x: u64) -> Fe {
        [x % self.p, 0]
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        [(a[0] + b[0]) % self.p, (a[1] + b[1]) % self.p]
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        [(a[0] + self.p - b[0]) % self.p, (a[1] + self.p - b[1]) % self.p]
    }

    pub fn neg(&self, a: Fe) -> Fe {
        self.sub([0, 0], a)
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p;
        if self.degree == 1 {
            return [mul_mod(a[0], b[0], p), 0];
        }
        // (a0 + a1 w)(b0 + b1 w) = a0 b0 + (a0 b1 + a1 b0) w + a1 b1 (t w - s)
        let hi = mul_mod(a[1], b[1], p);
        let c0 = (mul_mod(a[0], b[0], p) + p - mul_mod(hi, self.s, p)) % p;
        let c1 = (mul_mod(a[0], b[1], p) + mul_mod(a[1], b[0], p) + mul_mod(hi, self.t, p)) % p;
        [c0, c1]
    }

    pub fn pow(&self, mut a: Fe, mut e: u64) -> Fe {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!self.is_zero(a), "inverse of zero in F_q");
        if self.degree == 1 {
            return [inv_mod(a[0], self.p), 0];
        }
        // a^{-1} = conj(a) / N(a), conj(w) = t - w
        let p = self.p;
        let conj = [(a[0] + mul_mod(a[1], self.t, p)) % p, (p - a[1]) % p];
        let n = self.mul(a, conj);
        debug_assert_eq!(n[1], 0);
        let ni = inv_mod(n[0], p);
        [mul_mod(conj[0], ni, p), mul_mod(conj[1], ni, p)]
    }

    pub fn is_zero(&self, a: Fe) -> bool {
        a[0] == 0 && a[1] == 0
    }

    /// The unique `p`-th root (inverse Frobenius).
    pub fn pth_root(&self, a: Fe) -> Fe {
        if self.degree == 1 {
            a
        } else {
            self.pow(a, self.p)
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        let c0 = rng.gen_range(0..self.p);
        let c1 = if self.degree == 2 { rng.gen_range(0..self.p) } else { 0 };
        [c0, c1]
    }

    // ---- polynomials ----

    pub fn trim(&self, mut a: FqPoly) -> FqPoly {
        while a.last().is_some_and(|c| self.is_zero(*c)) {
            a.pop();
        }
        a
    }

    pub fn poly_degree(&self, a: &FqPoly) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn poly_add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or([0, 0]);
                let y = b.get(i).copied().unwrap_or([0, 0]);
                self.add(x, y)
            })
            .collect();
        self.trim(out)
    }

    pub fn poly_sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or([0, 0]);
                let y = b.get(i).copied().unwrap_or([0, 0]);
                self.sub(x, y)
            })
            .collect();
        self.trim(out)
    }

    pub fn poly_mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![[0, 0]; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(*x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(*x, *y));
            }
        }
        self.trim(out)
    }

    pub fn poly_scale(&self, a: &FqPoly, c: Fe) -> FqPoly {
        self.trim(a.iter().map(|x| self.mul(*x, c)).collect())
    }

    pub fn poly_divrem(&self, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut rem = a.clone();
        if a.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead_inv = self.inv(*b.last().unwrap());
        let mut quot = vec![[0, 0]; a.len() - b.len() + 1];
        for i in (0..quot.len()).rev() {
            let c = self.mul(rem[i + b.len() - 1], lead_inv);
            quot[i] = c;
            if self.is_zero(c) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                rem[i + j] = self.sub(rem[i + j], self.mul(c, *y));
            }
        }
        rem.truncate(b.len() - 1);
        (self.trim(quot), self.trim(rem))
    }

    pub fn poly_rem(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.poly_divrem(a, b).1
    }

    pub fn monic(&self, a: &FqPoly) -> FqPoly {
        match a.last() {
            None => Vec::new(),
            Some(l) => self.poly_scale(a, self.inv(*l)),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn poly_gcd(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Extended gcd: `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn poly_ext_gcd(&self, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly, FqPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![self.one()], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![self.one()]);
        while !r1.is_empty() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t2 = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        match r0.last() {
            None => (Vec::new(), s0, t0),
            Some(l) => {
                let li = self.inv(*l);
                (
                    self.poly_scale(&r0, li),
                    self.poly_scale(&s0, li),
                    self.poly_scale(&t0, li),
                )
            }
        }
    }

    pub fn derivative(&self, a: &FqPoly) -> FqPoly {
        let out = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.mul(*c, self.from_int(i as u64)))
            .collect();
        self.trim(out)
    }

    pub fn poly_powmod(&self, base: &FqPoly, mut e: u64, modulus: &FqPoly) -> FqPoly {
        let mut acc = self.poly_rem(&vec![self.one()], modulus);
        let mut b = self.poly_rem(base, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_rem(&self.poly_mul(&acc, &b), modulus);
            }
            b = self.poly_rem(&self.poly_mul(&b, &b), modulus);
            e >>= 1;
        }
        acc
    }

    fn is_one(&self, a: &FqPoly) -> bool {
        a.len() == 1 && a[0] == self.one()
    }

    /// Square-free decomposition of a monic polynomial: pairs `(g, i)` with
    /// `f = prod g^i`, each `g` square-free and monic, pairwise coprime.
    pub fn squarefree_decomposition(&self, f: &FqPoly) -> Vec<(FqPoly, u32)> {
        let f = self.monic(f);
        let mut out = Vec::new();
        if self.poly_degree(&f).unwrap_or(0) == 0 {
            return out;
        }
        let df = self.derivative(&f);
        let mut c = self.poly_gcd(&f, &df);
        let mut w = self.poly_divrem(&f, &c).0;
        let mut i = 1;
        while !self.is_one(&w) {
            let y = self.poly_gcd(&w, &c);
            let fac = self.poly_divrem(&w, &y).0;
            if !self.is_one(&fac) {
                out.push((fac, i));
            }
            w = y;
            c = self.poly_divrem(&c, &w).0;
            i += 1;
        }
        if !self.is_one(&c) {
            // c is a polynomial in x^p
            let p = self.p as usize;
            let root: FqPoly = c.iter().step_by(p).map(|x| self.pth_root(*x)).collect();
            for (g, e) in self.squarefree_decomposition(&root) {
                out.push((g, e * self.p as u32));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic square-free polynomial:
    /// pairs `(g, d)` where `g` is the product of all irreducible factors of degree `d`.
    pub fn distinct_degree(&self, f: &FqPoly) -> Vec<(FqPoly, usize)> {
        let q = self.order();
        let x: FqPoly = vec![[0, 0], self.one()];
        let mut rest = self.monic(f);
        let mut out = Vec::new();
        let mut h = self.poly_rem(&x, &rest);
        let mut d = 1;
        while self.poly_degree(&rest).unwrap_or(0) >= 2 * d {
            h = self.poly_powmod(&h, q, &rest);
            let g = self.poly_gcd(&rest, &self.poly_sub(&h, &x));
            if !self.is_one(&g) {
                rest = self.poly_divrem(&rest, &g).0;
                h = self.poly_rem(&h, &rest);
                out.push((g, d));
            }
            d += 1;
        }
        if let Some(deg) = self.poly_degree(&rest) {
            if deg > 0 {
                out.push((rest, deg));
            }
        }
        out
    }

    /// Splits a monic square-free product of irreducibles of degree `d`.
    pub fn equal_degree<R: Rng + ?Sized>(&self, f: &FqPoly, d: usize, rng: &mut R) -> Vec<FqPoly> {
        let n = self.poly_degree(f).unwrap_or(0);
        if n == d {
            return vec![self.monic(f)];
        }
        loop {
            let a: FqPoly = self.trim((0..n).map(|_| self.random(rng)).collect());
            if self.poly_degree(&a).unwrap_or(0) == 0 {
                continue;
            }
            let g0 = self.poly_gcd(f, &a);
            let g = if !self.is_one(&g0) {
                g0
            } else {
                let b = self.splitting_map(&a, d, f);
                self.poly_gcd(f, &b)
            };
            let gd = self.poly_degree(&g).unwrap_or(0);
            if gd > 0 && gd < n {
                let other = self.poly_divrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&other, d, rng));
                return out;
            }
        }
    }

    // a^{(q^d - 1)/2} - 1 in odd characteristic, the absolute trace in characteristic 2
    fn splitting_map(&self, a: &FqPoly, d: usize, f: &FqPoly) -> FqPoly {
        let q = self.order();
        if self.p == 2 {
            let bits = self.degree as usize * d;
            let mut term = self.poly_rem(a, f);
            let mut acc = term.clone();
            for _ in 1..bits {
                term = self.poly_rem(&self.poly_mul(&term, &term), f);
                acc = self.poly_add(&acc, &term);
            }
            acc
        } else {
            // (q^d - 1)/2 = (1 + q + ... + q^{d-1}) (q - 1)/2
            let mut frob = self.poly_rem(a, f);
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = self.poly_powmod(&frob, q, f);
                norm = self.poly_rem(&self.poly_mul(&norm, &frob), f);
            }
            let b = self.poly_powmod(&norm, (q - 1) / 2, f);
            self.poly_sub(&b, &vec![self.one()])
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by degree and then coefficients so the result does not depend on
    /// the random choices made while splitting.
    pub fn factor<R: Rng + ?Sized>(&self, f: &FqPoly, rng: &mut R) -> Vec<(FqPoly, u32)> {
        let mut out = Vec::new();
        for (g, e) in self.squarefree_decomposition(f) {
            for (h, d) in self.distinct_degree(&g) {
                for irr in self.equal_degree(&h, d, rng) {
                    out.push((irr, e));
                }
            }
        }
        out.sort_by(|(a, ea), (b, eb)| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.iter().rev().cmp(b.iter().rev()))
                .then(ea.cmp(eb))
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(f: &Fq, c: &[u64]) -> FqPoly {
        f.trim(c.iter().map(|x| f.from_int(*x)).collect())
    }

    fn expand(f: &Fq, factors: &[(FqPoly, u32)]) -> FqPoly {
        let mut acc = vec![f.one()];
        for (g, e) in factors {
            for _ in 0..*e {
                acc = f.poly_mul(&acc, g);
            }
        }
        acc
    }

    fn is_irreducible_bruteforce(f: &Fq, g: &FqPoly) -> bool {
        // only for tiny fields: trial division by every monic polynomial of degree <= deg/2
        let n = g.len() - 1;
        let q = f.order();
        let elems: Vec<Fe> = (0..q).map(|i| [i % f.p, i / f.p]).collect();
        for d in 1..=n / 2 {
            let count = q.pow(d as u32);
            for idx in 0..count {
                let mut c = Vec::new();
                let mut k = idx;
                for _ in 0..d {
                    c.push(elems[(k % q) as usize]);
                    k /= q;
                }
                c.push(f.one());
                if f.poly_rem(g, &c).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn cubic_irreducible_mod_two() {
        let f = Fq::prime(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // x^3 - x - 1 = x^3 + x + 1 mod 2
        let g = poly(&f, &[1, 1, 0, 1]);
        let fac = f.factor(&g, &mut rng);
        assert_eq!(fac.len(), 1);
        assert_eq!(fac[0].0.len(), 4);
    }

    #[test]
    fn factorization_reconstructs_over_prime_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5, 7, 13] {
            let f = Fq::prime(p);
            for seed in 0..40u64 {
                let mut r2 = ChaCha8Rng::seed_from_u64(seed * 31 + p);
                let deg = 1 + (seed % 7) as usize;
                let mut c: FqPoly = (0..deg).map(|_| f.random(&mut r2)).collect();
                c.push(f.one());
                // introduce repeated factors sometimes
                let g = if seed % 3 == 0 { f.poly_mul(&c, &c) } else { c };
                let fac = f.factor(&g, &mut rng);
                assert_eq!(expand(&f, &fac), g);
                for (h, _) in &fac {
                    assert!(is_irreducible_bruteforce(&f, h));
                }
            }
        }
    }

    #[test]
    fn factorization_over_quadratic_extensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // F_4 = F_2[w]/(w^2 + w + 1), F_9 = F_3[w]/(w^2 + 1), F_25 = F_5[w]/(w^2 - w + 2)
        for (p, t, s) in [(2u64, 1u64, 1u64), (3, 0, 1), (5, 1, 2)] {
            let f = Fq::quadratic(p, t, s);
            for seed in 0..25u64 {
                let mut r2 = ChaCha8Rng::seed_from_u64(seed + 100 * p);
                let deg = 1 + (seed % 5) as usize;
                let mut c: FqPoly = (0..deg).map(|_| f.random(&mut r2)).collect();
                c.push(f.one());
                let g = if seed % 4 == 1 {
                    f.poly_mul(&c, &f.poly_mul(&c, &c))
                } else {
                    c
                };
                let fac = f.factor(&g, &mut rng);
                assert_eq!(expand(&f, &fac), g);
                for (h, _) in &fac {
                    assert!(is_irreducible_bruteforce(&f, h), "p = {p}");
                }
            }
        }
    }

    #[test]
    fn field_inverse_and_pth_root() {
        let f = Fq::quadratic(7, 1, 6);
        for c0 in 0..7 {
            for c1 in 0..7 {
                let a = [c0, c1];
                if !f.is_zero(a) {
                    assert_eq!(f.mul(a, f.inv(a)), f.one());
                }
                assert_eq!(f.pow(f.pth_root(a), 7), a);
            }
        }
    }

    #[test]
    fn factor_is_seed_independent() {
        let f = Fq::prime(101);
        let g = poly(&f, &[6, 11, 6, 1, 0, 1, 3, 1]);
        let a = f.factor(&g, &mut ChaCha8Rng::seed_from_u64(1));
        let b = f.factor(&g, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a, b);
    }
}
