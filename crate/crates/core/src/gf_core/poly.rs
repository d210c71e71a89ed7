//! Dense univariate polynomials over a field, stored low to high with no
//! trailing zeros (the zero polynomial is the empty vector).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{Field, FiniteField, Ring};

/// Seed for the randomized splitting steps; fixed so factorizations replay.
pub const SPLIT_SEED: u64 = 0x5eed_f00d;

pub fn trimmed<F: Ring>(f: &F, mut a: Vec<F::E>) -> Vec<F::E> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn deg<E>(a: &[E]) -> i64 {
    a.len() as i64 - 1
}

pub fn constant<F: Ring>(f: &F, c: F::E) -> Vec<F::E> {
    trimmed(f, vec![c])
}

pub fn x<F: Ring>(f: &F) -> Vec<F::E> {
    vec![f.zero(), f.one()]
}

pub fn add<F: Ring>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trimmed(f, out)
}

pub fn sub<F: Ring>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trimmed(f, out)
}

pub fn neg<F: Ring>(f: &F, a: &[F::E]) -> Vec<F::E> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub fn scale<F: Ring>(f: &F, a: &[F::E], c: &F::E) -> Vec<F::E> {
    trimmed(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Ring>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trimmed(f, out)
}

pub fn shift<F: Ring>(f: &F, a: &[F::E], n: usize) -> Vec<F::E> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); n];
    out.extend_from_slice(a);
    out
}

pub fn eval<F: Ring>(f: &F, a: &[F::E], x: &F::E) -> F::E {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn deriv<F: Ring>(f: &F, a: &[F::E]) -> Vec<F::E> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul_int(i as i64, c))
        .collect();
    trimmed(f, out)
}

pub fn lead<F: Ring>(f: &F, a: &[F::E]) -> F::E {
    a.last().cloned().unwrap_or_else(|| f.zero())
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> (Vec<F::E>, Vec<F::E>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let li = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let shiftn = r.len() - 1 - db;
        let c = f.mul(r.last().unwrap(), &li);
        for (j, bj) in b.iter().enumerate() {
            r[shiftn + j] = f.sub(&r[shiftn + j], &f.mul(&c, bj));
        }
        q[shiftn] = c;
        r.pop();
        r = trimmed(f, r);
    }
    (trimmed(f, q), r)
}

pub fn rem<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    if a.len() < b.len() {
        return trimmed(f, a.to_vec());
    }
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: &F, a: &[F::E]) -> Vec<F::E> {
    if a.is_empty() {
        return Vec::new();
    }
    let li = f.inv(a.last().unwrap()).unwrap();
    scale(f, a, &li)
}

pub fn gcd<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let (mut a, mut b) = (trimmed(f, a.to_vec()), trimmed(f, b.to_vec()));
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// Returns (g, s, t) with s·a + t·b = g (g not normalized).
pub fn xgcd<F: Field>(
    f: &F,
    a: &[F::E],
    b: &[F::E],
) -> (Vec<F::E>, Vec<F::E>, Vec<F::E>) {
    let (mut r0, mut r1) = (trimmed(f, a.to_vec()), trimmed(f, b.to_vec()));
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    (r0, s0, t0)
}

pub fn mulmod<F: Field>(f: &F, a: &[F::E], b: &[F::E], m: &[F::E]) -> Vec<F::E> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: Field>(f: &F, a: &[F::E], mut e: u128, m: &[F::E]) -> Vec<F::E> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[f.one()], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(f, &base, &base, m);
        }
    }
    acc
}

/// Composition a(b(x)).
pub fn compose<F: Ring>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut acc: Vec<F::E> = Vec::new();
    for c in a.iter().rev() {
        acc = add(f, &mul(f, &acc, b), &constant(f, c.clone()));
    }
    acc
}

fn x_pow_q_mod<F: FiniteField>(f: &F, times: u32, m: &[F::E]) -> Vec<F::E> {
    let mut h = rem(f, &x(f), m);
    for _ in 0..times {
        h = powmod(f, &h, f.order(), m);
    }
    h
}

/// Rabin test for irreducibility over the field.
pub fn is_irreducible<F: FiniteField>(f: &F, a: &[F::E]) -> bool {
    let n = a.len() as i64 - 1;
    if n < 1 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let a = monic(f, a);
    let n = n as u32;
    let xq_n = x_pow_q_mod(f, n, &a);
    if rem(f, &sub(f, &xq_n, &x(f)), &a).iter().any(|c| !f.is_zero(c)) {
        return false;
    }
    let mut primes = Vec::new();
    let mut r = n;
    let mut d = 2;
    while r > 1 {
        if r % d == 0 {
            primes.push(d);
            while r % d == 0 {
                r /= d;
            }
        }
        d += 1;
    }
    for l in primes {
        let h = x_pow_q_mod(f, n / l, &a);
        let g = gcd(f, &sub(f, &h, &x(f)), &a);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Square-free decomposition of a monic polynomial: pairs (g_i, i) with
/// a = Π g_i^i, each g_i square-free, pairwise coprime.
pub fn squarefree<F: FiniteField>(f: &F, a: &[F::E]) -> Vec<(Vec<F::E>, u32)> {
    let p = f.characteristic() as u32;
    let mut out = Vec::new();
    let a = monic(f, a);
    if a.len() <= 1 {
        return out;
    }
    let d = deriv(f, &a);
    if d.is_empty() {
        // a = b(x^p).
        let b: Vec<F::E> = a.iter().step_by(p as usize).map(|c| f.p_root(c)).collect();
        for (g, m) in squarefree(f, &b) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = gcd(f, &a, &d);
    let mut w = divrem(f, &a, &c).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = gcd(f, &w, &c);
        let z = divrem(f, &w, &y).0;
        if z.len() > 1 {
            out.push((monic(f, &z), i));
        }
        i += 1;
        w = y;
        c = divrem(f, &c, &w).0;
    }
    if c.len() > 1 {
        let b: Vec<F::E> = c.iter().step_by(p as usize).map(|x| f.p_root(x)).collect();
        for (g, m) in squarefree(f, &b) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
pub fn distinct_degree<F: FiniteField>(f: &F, a: &[F::E]) -> Vec<(Vec<F::E>, u32)> {
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let mut h = rem(f, &x(f), &rest);
    let mut d = 0u32;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > (rest.len() - 1) as u32 {
            let dd = (rest.len() - 1) as u32;
            out.push((rest.clone(), dd));
            break;
        }
        h = powmod(f, &h, f.order(), &rest);
        let g = gcd(f, &sub(f, &h, &x(f)), &rest);
        if g.len() > 1 {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
    }
    out
}

/// Equal-degree splitting of a monic square-free product of degree-d irreducibles.
pub fn equal_degree<F: FiniteField>(f: &F, a: &[F::E], d: u32, rng: &mut ChaCha8Rng) -> Vec<Vec<F::E>> {
    let n = (a.len() - 1) as u32;
    if n == d {
        return vec![monic(f, a)];
    }
    let p = f.characteristic();
    loop {
        let r: Vec<F::E> = trimmed(f, (0..n).map(|_| f.random(rng)).collect());
        if r.len() < 2 {
            continue;
        }
        let h = if p == 2 {
            // Absolute trace map x ↦ Σ x^{2^i}, i < abs_degree·d.
            let m = f.abs_degree() * d;
            let mut acc = Vec::new();
            let mut cur = rem(f, &r, a);
            for _ in 0..m {
                acc = add(f, &acc, &cur);
                cur = mulmod(f, &cur, &cur, a);
            }
            acc
        } else {
            let e = (f.order().pow(d) - 1) / 2;
            sub(f, &powmod(f, &r, e, a), &[f.one()])
        };
        let g = gcd(f, &h, a);
        if g.len() > 1 && g.len() < a.len() {
            let other = divrem(f, a, &g).0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &monic(f, &other), d, rng));
            return out;
        }
    }
}

/// Factorization into monic irreducibles with multiplicities, sorted canonically.
/// Returns None for the zero polynomial.
pub fn factor<F: FiniteField>(f: &F, a: &[F::E]) -> Option<Vec<(Vec<F::E>, u32)>> {
    let a = trimmed(f, a.to_vec());
    if a.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out = Vec::new();
    for (g, mult) in squarefree(f, &a) {
        for (h, d) in distinct_degree(f, &g) {
            for irr in equal_degree(f, &h, d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|x, y| poly_cmp(f, &x.0, &y.0));
    Some(out)
}

/// Canonical ordering: by degree, then coefficients from the top down.
pub fn poly_cmp<F: FiniteField>(f: &F, a: &[F::E], b: &[F::E]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            let c = f.index(x).cmp(&f.index(y));
            if c.is_ne() {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Distinct roots in the field.
pub fn roots<F: FiniteField>(f: &F, a: &[F::E]) -> Vec<F::E> {
    let a = trimmed(f, a.to_vec());
    if a.len() <= 1 {
        return Vec::new();
    }
    let a = monic(f, &a);
    let xq = powmod(f, &x(f), f.order(), &a);
    let g = gcd(f, &sub(f, &xq, &x(f)), &a);
    if g.len() <= 1 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out: Vec<F::E> = equal_degree(f, &g, 1, &mut rng)
        .into_iter()
        .map(|l| f.neg(&l[0]))
        .collect();
    out.sort_by_key(|r| f.index(r));
    out
}

/// Monic polynomial from an index: digits base q give coefficients below the leading 1.
pub fn monic_from_index<F: FiniteField>(f: &F, d: usize, mut idx: u128) -> Vec<F::E> {
    let q = f.order();
    let mut v = Vec::with_capacity(d + 1);
    for _ in 0..d {
        v.push(f.element(idx % q));
        idx /= q;
    }
    v.push(f.one());
    v
}

/// All monic irreducibles of degree d, in canonical order.
pub fn monic_irreducibles<F: FiniteField>(f: &F, d: usize) -> Vec<Vec<F::E>> {
    let count = f.order().pow(d as u32);
    let mut out: Vec<Vec<F::E>> = (0..count)
        .map(|i| monic_from_index(f, d, i))
        .filter(|m| is_irreducible(f, m))
        .collect();
    out.sort_by(|a, b| poly_cmp(f, a, b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::field::make_field;
    use rand::Rng;

    fn prod_factors<F: FiniteField>(f: &F, fs: &[(Vec<F::E>, u32)]) -> Vec<F::E> {
        let mut acc = vec![f.one()];
        for (g, m) in fs {
            for _ in 0..*m {
                acc = mul(f, &acc, g);
            }
        }
        acc
    }

    #[test]
    fn factor_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(
            factor(&f2, &[0, 1, 1]).unwrap(),
            vec![(vec![0, 1], 1), (vec![1, 1], 1)]
        );
        assert_eq!(factor(&f2, &[1, 0, 1]).unwrap(), vec![(vec![1, 1], 2)]);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(factor(&f3, &[1, 0, 1]).unwrap(), vec![(vec![1, 0, 1], 1)]);
        assert!(factor(&f3, &[]).is_none());
    }

    #[test]
    fn no_root_oracle_for_t2_plus_1_mod_3() {
        let f3 = make_field(3, 1).unwrap();
        assert!((0..3u32).all(|c| eval(&f3, &[1, 0, 1], &c) != 0));
        assert!(roots(&f3, &[1, 0, 1]).is_empty());
    }

    #[test]
    fn factor_random_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let f = make_field(p, k).unwrap();
            for _ in 0..200 {
                let d = rng.gen_range(1..=12);
                let mut a: Vec<u32> = (0..=d).map(|_| f.random(&mut rng)).collect();
                if a[d] == 0 {
                    a[d] = 1;
                }
                let fs = factor(&f, &a).unwrap();
                for (g, _) in &fs {
                    assert!(is_irreducible(&f, g));
                    assert_eq!(*g.last().unwrap(), 1);
                }
                for i in 0..fs.len() {
                    for j in 0..i {
                        assert_ne!(fs[i].0, fs[j].0);
                    }
                }
                assert_eq!(prod_factors(&f, &fs), monic(&f, &a));
            }
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // Number of monic irreducibles of degree d over F_q: (1/d) Σ_{e|d} μ(e) q^{d/e}.
        let f = make_field(2, 1).unwrap();
        let counts: Vec<usize> = (1..=6).map(|d| monic_irreducibles(&f, d).len()).collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(monic_irreducibles(&f4, 2).len(), 6);
    }

    #[test]
    fn roots_of_split_polynomial() {
        let f = make_field(5, 1).unwrap();
        // (x-1)(x-2)(x-2)(x^2+2)
        let a = mul(&f, &mul(&f, &[4, 1], &mul(&f, &[3, 1], &[3, 1])), &[2, 0, 1]);
        assert_eq!(roots(&f, &a), vec![1, 2]);
    }
}
