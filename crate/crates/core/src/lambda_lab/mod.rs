//! Elementary modules over Z_p[[x]] and Z_p[[x, y]]: quotient counting by
//! 𝒥_{ν,n} = (p^ν, (1+x)^{p^n} − 1), μ-invariant recovery and specialization.

pub mod parse;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf_core::field::is_prime;

pub use parse::{parse_generator, render_generator};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("ν = {nu} exceeds working precision {precision}")]
    PrecisionBound { nu: u32, precision: u32 },
    #[error("enumeration of {0} ring elements exceeds the budget")]
    EnumerationBound(u128),
    #[error("generator {generator} maps into pΛ under the chosen direction")]
    BadDirection { generator: usize },
    #[error("direction ({0}, {1}) is divisible by p")]
    InvalidDirection(u32, u32),
    #[error("parse error: {0}")]
    Parse(String),
}

pub const DEFAULT_PRECISION: u32 = 8;

/// c[i][j] is the coefficient of x^i y^j, reduced modulo p^B.
pub type Poly2 = Vec<Vec<u64>>;

/// Λ/(p^{α_1}) ⊕ ... ⊕ Λ/(p^{α_m}) ⊕ Λ/(η_1) ⊕ ... ⊕ Λ/(η_r).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaModule {
    pub p: u32,
    pub d: u8,
    /// Non-increasing.
    pub alphas: Vec<u32>,
    pub gens: Vec<Poly2>,
    pub precision: u32,
}

fn trim2(mut g: Poly2) -> Poly2 {
    for row in g.iter_mut() {
        while row.last() == Some(&0) {
            row.pop();
        }
    }
    while g.last().is_some_and(|r| r.is_empty()) {
        g.pop();
    }
    g
}

impl LambdaModule {
    pub fn new(p: u32, d: u8, mut alphas: Vec<u32>, gens: Vec<Poly2>, precision: u32) -> Result<Self, LambdaError> {
        if !is_prime(p as u64) {
            return Err(LambdaError::InvalidModule(format!("{p} is not prime")));
        }
        if !(1..=2).contains(&d) {
            return Err(LambdaError::InvalidModule(format!("{d} variables")));
        }
        let modulus = (p as u64)
            .checked_pow(precision)
            .filter(|&m| m < 1 << 31 && precision > 0)
            .ok_or_else(|| LambdaError::InvalidModule(format!("precision {precision}")))?;
        if alphas.contains(&0) {
            return Err(LambdaError::InvalidModule("exponents must be positive".into()));
        }
        alphas.sort_unstable_by(|a, b| b.cmp(a));
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            let g = trim2(g.into_iter().map(|r| r.into_iter().map(|c| c % modulus).collect()).collect());
            if d == 1 && g.iter().any(|r| r.len() > 1) {
                return Err(LambdaError::InvalidModule("y in a one-variable generator".into()));
            }
            if !g.iter().flatten().any(|&c| c % p as u64 != 0) {
                return Err(LambdaError::InvalidModule("generator divisible by p".into()));
            }
            out.push(g);
        }
        Ok(LambdaModule {
            p,
            d,
            alphas,
            gens: out,
            precision,
        })
    }

    pub fn modulus(&self) -> u64 {
        (self.p as u64).pow(self.precision)
    }

    pub fn mu_rank(&self) -> usize {
        self.alphas.len()
    }

    /// η_j as a polynomial in x (d = 1).
    pub fn univariate(&self, j: usize) -> Vec<u64> {
        self.gens[j].iter().map(|r| r.first().copied().unwrap_or(0)).collect()
    }

    /// Index of the first unit coefficient of η_j (d = 1).
    pub fn weierstrass_degree(&self, j: usize) -> usize {
        let p = self.p as u64;
        self.univariate(j).iter().position(|&c| c % p != 0).expect("unit coefficient")
    }

    /// ν·Σλ_j bounds the non-p contribution to every quotient at level ν.
    pub fn non_p_bound(&self, nu: u32) -> u64 {
        (0..self.gens.len()).map(|j| nu as u64 * self.weierstrass_degree(j) as u64).sum()
    }
}

/// Arithmetic in Z/p^ν.
#[derive(Clone, Copy, Debug)]
struct Zmod {
    p: u64,
    nu: u32,
    m: u64,
}

impl Zmod {
    fn new(p: u32, nu: u32) -> Self {
        Zmod {
            p: p as u64,
            nu,
            m: (p as u64).pow(nu),
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.m
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.m - b % self.m) % self.m
    }
    fn val(&self, a: u64) -> u32 {
        if a % self.m == 0 {
            return self.nu;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }
    fn inv_unit(&self, a: u64) -> u64 {
        let (mut t, mut nt) = (0i128, 1i128);
        let (mut r, mut nr) = (self.m as i128, (a % self.m) as i128);
        while nr != 0 {
            let q = r / nr;
            (t, nt) = (nt, t - q * nt);
            (r, nr) = (nr, r - q * nr);
        }
        debug_assert_eq!(r, 1);
        t.rem_euclid(self.m as i128) as u64
    }
}

/// ω_n = (1+x)^{p^n} − 1 over Z/p^ν, as a monic polynomial of degree p^n.
fn omega(z: &Zmod, n: u32) -> Vec<u64> {
    let big_n = (z.p as usize).pow(n);
    let mut c = vec![0u64; big_n + 1];
    c[0] = 1;
    // Row-by-row Pascal keeps the binomials exact modulo p^ν.
    for k in 1..=big_n {
        for i in (1..=k).rev() {
            c[i] = z.add(c[i], c[i - 1]);
        }
    }
    c[0] = 0;
    c
}

/// a mod the monic polynomial w.
fn rem_monic(z: &Zmod, mut a: Vec<u64>, w: &[u64]) -> Vec<u64> {
    let d = w.len() - 1;
    while a.len() > d {
        let top = a.pop().unwrap();
        if top == 0 {
            continue;
        }
        let off = a.len() - d;
        for (i, &wi) in w.iter().enumerate().take(d) {
            a[off + i] = z.sub(a[off + i], z.mul(top, wi));
        }
    }
    a.resize(d, 0);
    a
}

fn mul_poly(z: &Zmod, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = z.add(out[i + j], z.mul(x, y));
        }
    }
    out
}

/// log_p |(Z/p^ν)[x]/(η, ω_n)| by Smith normal form of multiplication by η.
pub fn cyclic_quotient_log(p: u32, eta: &[u64], nu: u32, n: u32) -> u64 {
    let z = Zmod::new(p, nu);
    let w = omega(&z, n);
    let big_n = w.len() - 1;
    let mut row = rem_monic(&z, eta.iter().map(|&c| c % z.m).collect(), &w);
    let mut mat = Vec::with_capacity(big_n);
    for _ in 0..big_n {
        mat.push(row.clone());
        let mut shifted = vec![0];
        shifted.extend_from_slice(&row);
        row = rem_monic(&z, shifted, &w);
    }
    snf_log(&z, mat)
}

/// Σ min(v_p(d_i), ν) over the Smith diagonal of a square matrix over Z/p^ν.
fn snf_log(z: &Zmod, mut a: Vec<Vec<u64>>) -> u64 {
    let n = a.len();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut total = 0u64;
    while !rows.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                let v = z.val(a[r][c]);
                if best.is_none_or(|b| v < b.0) {
                    best = Some((v, ri, ci));
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let (v, ri, ci) = best.unwrap();
        if v == z.nu {
            total += rows.len() as u64 * z.nu as u64;
            break;
        }
        let (pr, pc) = (rows[ri], cols[ci]);
        let unit_inv = z.inv_unit(a[pr][pc] / z.p.pow(v));
        let pv = z.p.pow(v);
        for &r in &rows {
            if r == pr || a[r][pc] == 0 {
                continue;
            }
            let f = z.mul(a[r][pc] / pv, unit_inv);
            for &c in &cols {
                let x = z.mul(f, a[pr][c]);
                a[r][c] = z.sub(a[r][c], x);
            }
        }
        // Column clearing leaves the remaining block unchanged once the pivot
        // column is zero outside the pivot row.
        total += v as u64;
        rows.remove(ri);
        cols.remove(ci);
    }
    total
}

fn check_level(z: &LambdaModule, nu: u32) -> Result<(), LambdaError> {
    if z.d != 1 {
        return Err(LambdaError::InvalidModule("quotients need one variable".into()));
    }
    if nu > z.precision {
        return Err(LambdaError::PrecisionBound {
            nu,
            precision: z.precision,
        });
    }
    Ok(())
}

/// log_p |Z/𝒥_{ν,n}Z|.
pub fn quotient_log_size(z: &LambdaModule, nu: u32, n: u32) -> Result<u64, LambdaError> {
    check_level(z, nu)?;
    let pn = (z.p as u64).pow(n);
    let ppart: u64 = z.alphas.iter().map(|&a| a.min(nu) as u64 * pn).sum();
    let rest: u64 = (0..z.gens.len()).map(|j| cyclic_quotient_log(z.p, &z.univariate(j), nu, n)).sum();
    Ok(ppart + rest)
}

/// The same count by enumerating R = (Z/p^ν)[x]/(ω_n) and counting the
/// kernel of multiplication by each generator (|R/gR| = |ker g|).
pub fn quotient_log_size_brute(z: &LambdaModule, nu: u32, n: u32, budget: u128) -> Result<u64, LambdaError> {
    check_level(z, nu)?;
    let zm = Zmod::new(z.p, nu);
    let w = omega(&zm, n);
    let big_n = w.len() - 1;
    let size = (zm.m as u128)
        .checked_pow(big_n as u32)
        .ok_or(LambdaError::EnumerationBound(u128::MAX))?;
    if size > budget {
        return Err(LambdaError::EnumerationBound(size));
    }
    let mut pieces: Vec<Vec<u64>> = z.alphas.iter().map(|&a| vec![(z.p as u64).pow(a) % zm.m]).collect();
    pieces.extend((0..z.gens.len()).map(|j| z.univariate(j).iter().map(|&c| c % zm.m).collect()));
    let mut total = 0u64;
    let mut r = vec![0u64; big_n];
    for g in &pieces {
        let mut kernel = 0u128;
        r.iter_mut().for_each(|c| *c = 0);
        loop {
            if rem_monic(&zm, mul_poly(&zm, g, &r), &w).iter().all(|&c| c == 0) {
                kernel += 1;
            }
            // Odometer step.
            let mut i = 0;
            while i < big_n {
                r[i] += 1;
                if r[i] < zm.m {
                    break;
                }
                r[i] = 0;
                i += 1;
            }
            if i == big_n {
                break;
            }
        }
        let mut k = kernel;
        let mut e = 0;
        while k > 1 {
            debug_assert_eq!(k % z.p as u128, 0);
            k /= z.p as u128;
            e += 1;
        }
        total += e;
    }
    Ok(total)
}

/// Recovers {α_i} from s(ν) = lim_n (coefficient of p^n in log_p |Z/𝒥_{ν,n}Z|),
/// via #{i : α_i ≥ ν} = s(ν) − s(ν−1). The layer n starts at `n_min` and is
/// raised until the non-p part cannot move the leading coefficient.
pub fn recover_mu(z: &LambdaModule, n_min: u32) -> Result<Vec<u32>, LambdaError> {
    if z.d != 1 {
        return Err(LambdaError::InvalidModule("recovery needs one variable".into()));
    }
    let p = z.p as u64;
    let mut s_prev = 0u64;
    let mut counts = Vec::new();
    for nu in 1..=z.precision {
        let bound = z.non_p_bound(nu);
        let mut n = n_min.max(1);
        while (p - 1) * p.pow(n - 1) <= bound {
            n += 1;
        }
        let hi = quotient_log_size(z, nu, n)?;
        let lo = quotient_log_size(z, nu, n - 1)?;
        let s = (hi - lo) / ((p - 1) * p.pow(n - 1));
        if s < s_prev {
            return Err(LambdaError::InvalidModule("non-monotone level counts".into()));
        }
        counts.push(s - s_prev);
        if s == s_prev {
            break;
        }
        s_prev = s;
    }
    // counts[ν−1] = #{i : α_i ≥ ν}.
    let mut alphas = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        let next = counts.get(i + 1).copied().unwrap_or(0);
        for _ in 0..c.saturating_sub(next) {
            alphas.push(i as u32 + 1);
        }
    }
    alphas.sort_unstable_by(|a, b| b.cmp(a));
    Ok(alphas)
}

/// (1+X)^c − 1 modulo p^B.
fn exp_direction(zm: &Zmod, c: u32) -> Vec<u64> {
    let mut acc = vec![1u64];
    for _ in 0..c {
        acc = mul_poly(zm, &acc, &[1, 1]);
    }
    acc[0] = zm.sub(acc[0], 1);
    acc
}

/// Pulls Z back along x ↦ (1+X)^{c1} − 1, y ↦ (1+X)^{c2} − 1.
pub fn specialize(z: &LambdaModule, dir: (u32, u32)) -> Result<LambdaModule, LambdaError> {
    if z.d != 2 {
        return Err(LambdaError::InvalidModule("specialization needs two variables".into()));
    }
    let (c1, c2) = dir;
    if c1 % z.p == 0 && c2 % z.p == 0 {
        return Err(LambdaError::InvalidDirection(c1, c2));
    }
    let zm = Zmod::new(z.p, z.precision);
    let ex = exp_direction(&zm, c1);
    let ey = exp_direction(&zm, c2);
    let mut gens = Vec::with_capacity(z.gens.len());
    for (j, g) in z.gens.iter().enumerate() {
        let mut img: Vec<u64> = Vec::new();
        let mut xp = vec![1u64];
        for row in g {
            let mut yp = vec![1u64];
            for &c in row {
                if c != 0 {
                    let term: Vec<u64> = mul_poly(&zm, &xp, &yp).iter().map(|&t| zm.mul(t, c)).collect();
                    if img.len() < term.len() {
                        img.resize(term.len(), 0);
                    }
                    for (i, t) in term.into_iter().enumerate() {
                        img[i] = zm.add(img[i], t);
                    }
                }
                yp = mul_poly(&zm, &yp, &ey);
            }
            xp = mul_poly(&zm, &xp, &ex);
        }
        if img.iter().all(|&c| c % zm.p == 0) {
            return Err(LambdaError::BadDirection { generator: j });
        }
        gens.push(img.into_iter().map(|c| vec![c]).collect());
    }
    LambdaModule::new(z.p, 1, z.alphas.clone(), gens, z.precision)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_var(p: u32, alphas: Vec<u32>, gens: Vec<Vec<u64>>) -> LambdaModule {
        let gens = gens.into_iter().map(|g| g.into_iter().map(|c| vec![c]).collect()).collect();
        LambdaModule::new(p, 1, alphas, gens, DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn closed_forms() {
        let z = one_var(2, vec![2], vec![]);
        assert_eq!(quotient_log_size(&z, 1, 3).unwrap(), 8);
        let x = one_var(3, vec![], vec![vec![0, 1]]);
        for nu in 1..4 {
            for n in 0..3 {
                assert_eq!(quotient_log_size(&x, nu, n).unwrap(), nu as u64);
            }
        }
        let m = one_var(3, vec![], vec![vec![3u64.pow(8) - 3, 1]]);
        assert_eq!(quotient_log_size(&m, 2, 1).unwrap(), 2);
    }

    #[test]
    fn binomial_valuation() {
        // v_p((1+p)^{p^n} − 1) = n + 1 for odd p.
        for p in [3u64, 5] {
            for n in 0..=3u32 {
                let m = p.pow(n + 4);
                let mut acc = 1u64;
                for _ in 0..p.pow(n) {
                    acc = acc * (1 + p) % m;
                }
                let mut x = (acc + m - 1) % m;
                let mut v = 0;
                while x % p == 0 && v < n + 4 {
                    x /= p;
                    v += 1;
                }
                assert_eq!(v, n + 1);
                let z = one_var(p as u32, vec![], vec![vec![p.pow(8) - p, 1]]);
                for nu in 1..=3 {
                    assert_eq!(quotient_log_size(&z, nu, n).unwrap(), nu.min(n + 1) as u64);
                }
            }
        }
    }

    #[test]
    fn brute_force_agrees() {
        let z = one_var(2, vec![3, 1], vec![vec![2, 1, 1], vec![1]]);
        for nu in 1..=3 {
            for n in 0..=2 {
                assert_eq!(
                    quotient_log_size(&z, nu, n).unwrap(),
                    quotient_log_size_brute(&z, nu, n, 1 << 20).unwrap()
                );
            }
        }
    }

    #[test]
    fn recovery_examples() {
        assert_eq!(recover_mu(&one_var(2, vec![1, 3], vec![]), 1).unwrap(), vec![3, 1]);
        assert_eq!(recover_mu(&one_var(3, vec![2, 2], vec![vec![3, 1]]), 1).unwrap(), vec![2, 2]);
        assert!(recover_mu(&one_var(2, vec![], vec![vec![0, 1]]), 1).unwrap().is_empty());
    }

    #[test]
    fn specialization_examples() {
        let y: Poly2 = vec![vec![0, 1]];
        let z = LambdaModule::new(3, 2, vec![3], vec![y], DEFAULT_PRECISION).unwrap();
        assert_eq!(specialize(&z, (1, 0)), Err(LambdaError::BadDirection { generator: 0 }));
        let s = specialize(&z, (0, 1)).unwrap();
        assert_eq!(s.alphas, vec![3]);
        let m = 3u64.pow(8);
        let x_minus_y: Poly2 = vec![vec![0, m - 1], vec![1]];
        let z = LambdaModule::new(3, 2, vec![], vec![x_minus_y], DEFAULT_PRECISION).unwrap();
        let s = specialize(&z, (1, 0)).unwrap();
        assert_eq!(s.univariate(0), vec![0, 1]);
        assert_eq!(quotient_log_size(&s, 2, 2).unwrap(), 2);
        assert_eq!(specialize(&z, (3, 6)), Err(LambdaError::InvalidDirection(3, 6)));
    }
}
