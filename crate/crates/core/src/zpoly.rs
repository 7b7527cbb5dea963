//! Irreducibility of monic integer polynomials by Hensel lifting and factor
//! recombination (Zassenhaus).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{big_mod, primes_up_to};
use crate::finite_field::{Fq, FqPoly};

type ZPoly = Vec<BigInt>;

fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn to_fp(f: &[BigInt], p: u64) -> FqPoly {
    Fq::prime(p).trim(f.iter().map(|c| [big_mod(c, p), 0]).collect())
}

fn from_fp(f: &FqPoly) -> ZPoly {
    f.iter().map(|c| BigInt::from(c[0])).collect()
}

fn mul_mod(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out.into_iter().map(|c| c.mod_floor(m)).collect())
}

fn sub_mod(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

/// Exact division by a monic divisor; `None` when the remainder is nonzero.
fn div_exact_monic(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let mut rem = a.clone();
    let db = b.len() - 1;
    if a.len() < b.len() {
        return None;
    }
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                rem[i + j] -= &c * y;
            }
        }
        quot[i] = c;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(trim(quot))
    } else {
        None
    }
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Lifts `f = g h mod p` (with `g` monic, coprime to `h`) to a monic `g` mod `p^k`.
fn hensel_lift_factor(f: &ZPoly, g: &FqPoly, h: &FqPoly, p: u64, k: u32) -> ZPoly {
    let fp = Fq::prime(p);
    let (one, s, t) = fp.poly_ext_gcd(g, h);
    debug_assert_eq!(one, vec![fp.one()]);
    let bp = BigInt::from(p);
    let (mut gz, mut hz) = (from_fp(g), from_fp(h));
    let mut pk = bp.clone();
    for _ in 1..k {
        let next = &pk * &bp;
        // e = (f - g h) / p^j mod p
        let diff = sub_mod(f, &mul_mod(&gz, &hz, &next), &next);
        let e: ZPoly = diff.iter().map(|c| c / &pk).collect();
        let e = to_fp(&e, p);
        // dg = (e t) mod g, dh = e s + q h where e t = q g + dg
        let (q, dg) = fp.poly_divrem(&fp.poly_mul(&e, &t), g);
        let dh = fp.poly_add(&fp.poly_mul(&e, &s), &fp.poly_mul(&q, h));
        let lift = |base: &ZPoly, d: &FqPoly| -> ZPoly {
            let n = base.len().max(d.len());
            let z = BigInt::zero();
            trim(
                (0..n)
                    .map(|i| {
                        let di = d.get(i).map(|c| BigInt::from(c[0])).unwrap_or_default();
                        (base.get(i).unwrap_or(&z) + &pk * di).mod_floor(&next)
                    })
                    .collect(),
            )
        };
        gz = lift(&gz, &dg);
        hz = lift(&hz, &dh);
        pk = next;
    }
    gz
}

/// Returns `None` when the monic square-free integer polynomial `f` is
/// irreducible over `Q`, otherwise a proper monic factor.
pub fn find_factor(f: &[BigInt]) -> Option<Vec<BigInt>> {
    let f: ZPoly = trim(f.to_vec());
    let n = f.len() - 1;
    assert!(f.last().is_some_and(|c| c.is_one()), "monic input expected");
    if n <= 1 {
        return None;
    }
    if f[0].is_zero() {
        return Some(vec![BigInt::zero(), BigInt::one()]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // collect factorizations at a few good primes
    let mut best: Option<(u64, Vec<FqPoly>)> = None;
    let mut achievable: Option<Vec<bool>> = None;
    let mut good = 0;
    for p in primes_up_to(20_000).into_iter().skip(1) {
        let fp = Fq::prime(p);
        let fb = to_fp(&f, p);
        if fp.poly_degree(&fp.poly_gcd(&fb, &fp.derivative(&fb))) != Some(0) {
            continue;
        }
        let factors: Vec<FqPoly> = fp.factor(&fb, &mut rng).into_iter().map(|(g, _)| g).collect();
        if factors.len() == 1 {
            return None;
        }
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for g in &factors {
            let d = g.len() - 1;
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        let acc = match achievable {
            None => sums,
            Some(prev) => prev.iter().zip(&sums).map(|(a, b)| *a && *b).collect(),
        };
        if !(1..n).any(|d| acc[d]) {
            return None;
        }
        achievable = Some(acc);
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
        good += 1;
        if good >= 6 {
            break;
        }
    }
    let (p, factors) = best.expect("a prime not dividing the discriminant exists");

    // any factor has coefficients bounded by 2^n |f|_2 (Mignotte)
    let norm2: BigInt = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = (BigInt::one() << n) * norm2 * 2 + 1;
    let bp = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = bp.clone();
    while pk <= bound {
        pk *= &bp;
        k += 1;
    }
    let fp = Fq::prime(p);
    let fb = to_fp(&f, p);
    let lifted: Vec<ZPoly> = factors
        .iter()
        .map(|g| {
            let h = fp.poly_divrem(&fb, g).0;
            hensel_lift_factor(&f, g, &h, p, k)
        })
        .collect();

    // recombination over subsets up to half the number of factors
    let r = lifted.len();
    let mut subset_size = 1;
    while 2 * subset_size <= r {
        let mut idx: Vec<usize> = (0..subset_size).collect();
        loop {
            let deg: usize = idx.iter().map(|i| lifted[*i].len() - 1).sum();
            if deg < n && achievable.as_ref().is_none_or(|a| a[deg]) {
                let mut prod: ZPoly = vec![BigInt::one()];
                for i in &idx {
                    prod = mul_mod(&prod, &lifted[*i], &pk);
                }
                let cand: ZPoly = prod.iter().map(|c| symmetric(c, &pk)).collect();
                if div_exact_monic(&f, &cand).is_some() {
                    return Some(cand);
                }
            }
            // next combination in lexicographic order
            let mut advanced = false;
            let mut i = subset_size;
            while i > 0 {
                i -= 1;
                if idx[i] < r - subset_size + i {
                    idx[i] += 1;
                    for j in i + 1..subset_size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        subset_size += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        v.iter().map(|c| BigInt::from(*c)).collect()
    }

    #[test]
    fn irreducible_examples() {
        assert!(find_factor(&z(&[-1, -1, 0, 1])).is_none());
        // x^4 - 2x^2 + 9 is irreducible over Q but reducible mod every prime
        assert!(find_factor(&z(&[9, 0, -2, 0, 1])).is_none());
        // x^4 + 1
        assert!(find_factor(&z(&[1, 0, 0, 0, 1])).is_none());
        // Swinnerton-Dyer polynomial for sqrt 2, sqrt 3
        assert!(find_factor(&z(&[1, 0, -10, 0, 1])).is_none());
    }

    #[test]
    fn reducible_examples() {
        // (x^2 + 1)(x^2 - 2)
        let f = z(&[-2, 0, -1, 0, 1]);
        let g = find_factor(&f).unwrap();
        assert!(div_exact_monic(&f, &g).is_some());
        assert!(g.len() == 3);
        // (x^3 - x - 1)(x^3 + x + 1)
        let f = z(&[-1, -2, -1, 0, 0, 0, 1]);
        let g = find_factor(&f).unwrap();
        assert!(div_exact_monic(&f, &g).is_some());
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        assert!(find_factor(&z(&[4, 0, 0, 0, 1])).is_some());
    }
}
