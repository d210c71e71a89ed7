//! Rings and finite fields.
//!
//! Everything downstream is generic over [`Ring`]: the function field
//! F_q(t), residue fields F_v, and the constant field F_q share the same
//! interface so that invariant formulas and formal-group expansions are
//! written once.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rand::Rng;

use super::GfError;

/// A commutative ring with explicit context.
pub trait Ring: Clone + Debug + Send + Sync {
    type E: Clone + PartialEq + Eq + Hash + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Image of an integer.
    fn from_i64(&self, n: i64) -> Self::E;
    fn characteristic(&self) -> u64;

    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }

    fn mul_int(&self, n: i64, a: &Self::E) -> Self::E {
        self.mul(&self.from_i64(n), a)
    }

    fn sqr(&self, a: &Self::E) -> Self::E {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::E, mut e: u128) -> Self::E {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::E) -> Option<Self::E>;

    fn div(&self, a: &Self::E, b: &Self::E) -> Option<Self::E> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// A finite field with an enumeration of its elements.
pub trait FiniteField: Field {
    fn order(&self) -> u128;
    /// Degree over the prime field.
    fn abs_degree(&self) -> u32;
    fn element(&self, idx: u128) -> Self::E;
    fn index(&self, a: &Self::E) -> u128;

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::E {
        let q = self.order();
        self.element(rng.gen_range(0..q))
    }

    fn frobenius(&self, a: &Self::E) -> Self::E {
        self.pow(a, self.characteristic() as u128)
    }

    /// The unique p-th root.
    fn p_root(&self, a: &Self::E) -> Self::E {
        self.pow(a, self.order() / self.characteristic() as u128)
    }

    fn is_square(&self, a: &Self::E) -> bool {
        if self.is_zero(a) || self.characteristic() == 2 {
            return true;
        }
        self.is_one(&self.pow(a, (self.order() - 1) / 2))
    }

    /// Absolute trace to F_p, returned as an element of this field.
    fn abs_trace(&self, a: &Self::E) -> Self::E {
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.abs_degree() {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        acc
    }
}

/// Default bound on the constant field order.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 20;

#[derive(Debug)]
struct GfData {
    p: u32,
    k: u32,
    q: u32,
    /// Canonical modulus over F_p, low to high, monic, length k+1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The field F_{p^k}, elements encoded as integers Σ c_i p^i.
#[derive(Clone)]
pub struct Gf(Arc<GfData>);

impl Debug for Gf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q && self.0.modulus == other.0.modulus
    }
}
impl Eq for Gf {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power q = p^k.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut r = q;
    let mut k = 0;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn fp_poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let k = m.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let idx = d - k + j;
                prod[idx] = (prod[idx] + (p as u64 - c) * mj as u64) % p as u64;
            }
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod.into_iter().map(|x| x as u32).collect()
}

fn mul_by_u(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let k = a.len();
    let top = a[k - 1];
    let mut out = vec![0u32; k];
    for i in (1..k).rev() {
        out[i] = a[i - 1];
    }
    if top != 0 {
        for (i, o) in out.iter_mut().enumerate() {
            *o = (*o + (p - top) * m[i]) % p;
        }
    }
    out
}

fn fp_poly_is_irreducible(m: &[u32], p: u32) -> bool {
    // Brute force: no monic factor of degree <= k/2.
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut r = idx;
            for _ in 0..d {
                g.push((r % p as u64) as u32);
                r /= p as u64;
            }
            g.push(1);
            if fp_poly_rem(m, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn fp_poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm] as u64, p as u64);
    while r.len() > dm {
        let c = r[r.len() - 1] * lead_inv % p as u64;
        let shift = r.len() - 1 - dm;
        for (j, &mj) in m.iter().enumerate() {
            r[shift + j] = (r[shift + j] + (p as u64 - c) * mj as u64) % p as u64;
        }
        r.pop();
    }
    r.into_iter().map(|x| x as u32).collect()
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut nt) = (0i64, 1i64);
    let (mut r, mut nr) = (p as i64, (a % p) as i64);
    while nr != 0 {
        let qt = r / nr;
        (t, nt) = (nt, t - qt * nt);
        (r, nr) = (nr, r - qt * nr);
    }
    t.rem_euclid(p as i64) as u64
}

/// Lexicographically least monic irreducible of degree k over F_p: the
/// coefficient vector (c_{k-1}, ..., c_0) read as a base-p integer is minimal.
pub fn canonical_modulus(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for idx in 0..count {
        let mut m = Vec::with_capacity(k as usize + 1);
        let mut r = idx;
        for _ in 0..k {
            m.push((r % p as u64) as u32);
            r /= p as u64;
        }
        m.push(1);
        if k > 1 && m[0] == 0 {
            continue;
        }
        if fp_poly_is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Constructs F_{p^k} with the canonical modulus.
pub fn make_field(p: u64, k: u32) -> Result<Gf, GfError> {
    make_field_bounded(p, k, DEFAULT_FIELD_BOUND)
}

pub fn make_field_bounded(p: u64, k: u32, bound: u64) -> Result<Gf, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if k == 0 {
        return Err(GfError::SizeBound { p, k });
    }
    let q = (p as u128).checked_pow(k).filter(|&q| q <= bound as u128);
    let Some(q) = q else {
        return Err(GfError::SizeBound { p, k });
    };
    let (p, q) = (p as u32, q as u32);
    let modulus = canonical_modulus(p, k);
    let to_vec = |mut idx: u32| -> Vec<u32> {
        let mut v = Vec::with_capacity(k as usize);
        for _ in 0..k {
            v.push(idx % p);
            idx /= p;
        }
        v
    };
    let to_idx = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
    // Find a primitive element via the prime factors of q − 1, then tabulate.
    let powmod = |g: &[u32], mut e: u64| -> Vec<u32> {
        let mut acc = vec![0u32; k as usize];
        acc[0] = 1;
        let mut b = g.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_poly_mulmod(&acc, &b, &modulus, p);
            }
            b = fp_poly_mulmod(&b, &b, &modulus, p);
            e >>= 1;
        }
        acc
    };
    let mut primes = Vec::new();
    let (mut r, mut d) = (q as u64 - 1, 2u64);
    while r > 1 {
        if r % d == 0 {
            primes.push(d);
            while r % d == 0 {
                r /= d;
            }
        }
        d += 1;
    }
    let gen = (1..q)
        .map(to_vec)
        .find(|g| primes.iter().all(|&l| to_idx(&powmod(g, (q as u64 - 1) / l)) != 1))
        .expect("multiplicative group is cyclic");
    let gen_is_u = k > 1 && to_idx(&gen) == p;
    let mut exp = vec![0u32; 2 * (q as usize - 1)];
    let mut log = vec![0u32; q as usize];
    log[0] = u32::MAX;
    let mut cur = vec![0u32; k as usize];
    cur[0] = 1;
    for e in 0..(q - 1) {
        let ci = to_idx(&cur);
        exp[e as usize] = ci;
        log[ci as usize] = e;
        cur = if gen_is_u {
            mul_by_u(&cur, &modulus, p)
        } else {
            fp_poly_mulmod(&cur, &gen, &modulus, p)
        };
    }
    for e in (q - 1)..(2 * (q - 1)) {
        exp[e as usize] = exp[(e - (q - 1)) as usize];
    }
    Ok(Gf(Arc::new(GfData {
        p,
        k,
        q,
        modulus,
        exp,
        log,
    })))
}

/// Constructs F_q from its order.
pub fn field_of_order(q: u64) -> Result<Gf, GfError> {
    let (p, k) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
    make_field(p, k)
}

impl Gf {
    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Coefficient vector over F_p, low to high.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.0.k as usize);
        let mut r = a;
        for _ in 0..self.0.k {
            v.push(r % self.0.p);
            r /= self.0.p;
        }
        v
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.0.p + c % self.0.p)
    }

    /// The generator u of F_q over F_p (only meaningful for k > 1).
    pub fn generator(&self) -> u32 {
        if self.0.k == 1 {
            // Any primitive root stands in for u in prime fields.
            self.0.exp[1]
        } else {
            self.0.p
        }
    }

    /// Canonical text: decimal integer for prime fields, polynomial in u otherwise.
    pub fn render(&self, a: u32) -> String {
        if self.0.k == 1 {
            return a.to_string();
        }
        let d = self.digits(a);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}u"),
                _ => format!("{coef}u^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl Ring for Gf {
    type E = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let g = &self.0;
        if g.p == 2 {
            return a ^ b;
        }
        if g.k == 1 {
            let s = a + b;
            return if s >= g.p { s - g.p } else { s };
        }
        let (mut x, mut y, mut out, mut pw) = (*a, *b, 0u32, 1u32);
        while x > 0 || y > 0 {
            let s = (x % g.p + y % g.p) % g.p;
            out += s * pw;
            pw *= g.p;
            x /= g.p;
            y /= g.p;
        }
        out
    }
    fn neg(&self, a: &u32) -> u32 {
        let g = &self.0;
        if g.p == 2 {
            return *a;
        }
        if g.k == 1 {
            return if *a == 0 { 0 } else { g.p - a };
        }
        let (mut x, mut out, mut pw) = (*a, 0u32, 1u32);
        while x > 0 {
            let c = x % g.p;
            out += ((g.p - c) % g.p) * pw;
            pw *= g.p;
            x /= g.p;
        }
        out
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let g = &self.0;
        g.exp[(g.log[*a as usize] + g.log[*b as usize]) as usize]
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }
    fn characteristic(&self) -> u64 {
        self.0.p as u64
    }
    fn pow(&self, a: &u32, e: u128) -> u32 {
        if e == 0 {
            return 1;
        }
        if *a == 0 {
            return 0;
        }
        let g = &self.0;
        let l = (g.log[*a as usize] as u128 * (e % (g.q as u128 - 1))) % (g.q as u128 - 1);
        g.exp[l as usize]
    }
}

impl Field for Gf {
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let g = &self.0;
        let l = g.log[*a as usize];
        Some(g.exp[((g.q - 1 - l) % (g.q - 1)) as usize])
    }
}

impl FiniteField for Gf {
    fn order(&self) -> u128 {
        self.0.q as u128
    }
    fn abs_degree(&self) -> u32 {
        self.0.k
    }
    fn element(&self, idx: u128) -> u32 {
        idx as u32
    }
    fn index(&self, a: &u32) -> u128 {
        *a as u128
    }
}

#[derive(Debug)]
struct ExtData<B: FiniteField> {
    base: B,
    /// Monic irreducible modulus over the base, low to high.
    modulus: Vec<B::E>,
    order: u128,
}

/// A finite extension B[θ]/(m(θ)); elements are coefficient vectors of length deg m.
#[derive(Debug)]
pub struct ExtField<B: FiniteField>(Arc<ExtData<B>>);

impl<B: FiniteField> Clone for ExtField<B> {
    fn clone(&self) -> Self {
        ExtField(self.0.clone())
    }
}

impl<B: FiniteField> ExtField<B> {
    /// `modulus` must be monic irreducible over `base`; this is not rechecked.
    pub fn new(base: B, modulus: Vec<B::E>) -> Self {
        let d = modulus.len() as u32 - 1;
        let order = base.order().pow(d);
        ExtField(Arc::new(ExtData {
            base,
            modulus,
            order,
        }))
    }

    pub fn base(&self) -> &B {
        &self.0.base
    }
    pub fn modulus(&self) -> &[B::E] {
        &self.0.modulus
    }
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    /// Embeds a base-field element.
    pub fn embed(&self, c: &B::E) -> Vec<B::E> {
        let mut v = vec![self.0.base.zero(); self.degree()];
        v[0] = c.clone();
        v
    }

    /// The class of θ.
    pub fn theta(&self) -> Vec<B::E> {
        self.from_poly(&[self.0.base.zero(), self.0.base.one()])
    }

    /// Reduces a base polynomial (low to high) modulo the modulus.
    pub fn from_poly(&self, f: &[B::E]) -> Vec<B::E> {
        let b = &self.0.base;
        let mut r = super::poly::rem(b, f, &self.0.modulus);
        r.resize(self.degree(), b.zero());
        r
    }

    /// Base-field coefficient vector, trailing zeros trimmed.
    pub fn to_poly(&self, a: &[B::E]) -> Vec<B::E> {
        super::poly::trimmed(&self.0.base, a.to_vec())
    }
}

impl<B: FiniteField> Ring for ExtField<B> {
    type E = Vec<B::E>;

    fn zero(&self) -> Self::E {
        vec![self.0.base.zero(); self.degree()]
    }
    fn one(&self) -> Self::E {
        self.embed(&self.0.base.one())
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let f = &self.0.base;
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let f = &self.0.base;
        a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        let f = &self.0.base;
        a.iter().map(|x| f.neg(x)).collect()
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let f = &self.0.base;
        let prod = super::poly::mul(f, a, b);
        self.from_poly(&prod)
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        let f = &self.0.base;
        a.iter().all(|x| f.is_zero(x))
    }
    fn from_i64(&self, n: i64) -> Self::E {
        self.embed(&self.0.base.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.0.base.characteristic()
    }
}

impl<B: FiniteField> Field for ExtField<B> {
    fn inv(&self, a: &Self::E) -> Option<Self::E> {
        if self.is_zero(a) {
            return None;
        }
        let f = &self.0.base;
        let ap = self.to_poly(a);
        let (g, s, _) = super::poly::xgcd(f, &ap, &self.0.modulus);
        // g is a nonzero constant since the modulus is irreducible.
        let gi = f.inv(&g[0])?;
        Some(self.from_poly(&super::poly::scale(f, &s, &gi)))
    }
}

impl<B: FiniteField> FiniteField for ExtField<B> {
    fn order(&self) -> u128 {
        self.0.order
    }
    fn abs_degree(&self) -> u32 {
        self.0.base.abs_degree() * self.degree() as u32
    }
    fn element(&self, mut idx: u128) -> Self::E {
        let f = &self.0.base;
        let bq = f.order();
        (0..self.degree())
            .map(|_| {
                let c = f.element(idx % bq);
                idx /= bq;
                c
            })
            .collect()
    }
    fn index(&self, a: &Self::E) -> u128 {
        let f = &self.0.base;
        let bq = f.order();
        a.iter().rev().fold(0u128, |acc, c| acc * bq + f.index(c))
    }
}
