//! The formal group law of a Weierstrass model in the parameter z = −x/y.

use crate::gf_core::Ring;

use super::series::{uni_add, uni_compose, uni_inv_pm1, uni_mul, uni_scale, uni_sub, BiSeries};

/// Coefficients A_0..=A_n of w(z) = −1/y, the solution of
/// w = z³ + a1zw + a2z²w + a3w² + a4zw² + a6w³.
pub fn w_series<R: Ring>(r: &R, a: &[R::E; 5], n: usize) -> Vec<R::E> {
    let [a1, a2, a3, a4, a6] = a;
    let mut w = vec![r.zero(); n + 1];
    let mut w2 = vec![r.zero(); n + 1];
    let mut w3 = vec![r.zero(); n + 1];
    for m in 3..=n {
        // w², w³ at degree m only involve A_i with i ≤ m − 3.
        let mut s2 = r.zero();
        for i in 3..=m.saturating_sub(3) {
            s2 = r.add(&s2, &r.mul(&w[i], &w[m - i]));
        }
        w2[m] = s2;
        let mut s3 = r.zero();
        for i in 6..=m.saturating_sub(3) {
            s3 = r.add(&s3, &r.mul(&w2[i], &w[m - i]));
        }
        w3[m] = s3;
        w[m] = if m == 3 {
            r.one()
        } else {
            let mut acc = r.mul(a1, &w[m - 1]);
            acc = r.add(&acc, &r.mul(a2, &w[m - 2]));
            acc = r.add(&acc, &r.mul(a3, &w2[m]));
            acc = r.add(&acc, &r.mul(a4, &w2[m - 1]));
            r.add(&acc, &r.mul(a6, &w3[m]))
        };
    }
    w
}

/// F(X, Y) modulo total degree n + 1.
pub fn group_law<R: Ring>(r: &R, a: &[R::E; 5], n: usize) -> BiSeries<R::E> {
    let [a1, a2, a3, a4, a6] = a;
    let w = w_series(r, a, n + 1);
    let x = BiSeries::x(r, n);
    let y = BiSeries::y(r, n);
    let w1 = BiSeries::from_x(r, &w, n);
    // λ = (w(X) − w(Y))/(X − Y) = Σ A_m h_{m−1}(X, Y).
    let mut lam = BiSeries::zero(r, n);
    for d in 0..=n {
        for i in 0..=d {
            lam.c[d][i] = w[d + 1].clone();
        }
    }
    let nu = w1.sub(r, &lam.mul(r, &x));
    let lam2 = lam.mul(r, &lam);
    let lamnu = lam.mul(r, &nu);
    let num = lam
        .scale(r, a1)
        .add(r, &nu.scale(r, a2))
        .add(r, &lam2.scale(r, a3))
        .add(r, &lamnu.scale(r, &r.mul_int(2, a4)))
        .add(r, &lam2.mul(r, &nu).scale(r, &r.mul_int(3, a6)));
    let den = BiSeries::constant(r, r.one(), n)
        .add(r, &lam.scale(r, a2))
        .add(r, &lam2.scale(r, a4))
        .add(r, &lam2.mul(r, &lam).scale(r, a6));
    let z3 = x.add(r, &y).add(r, &num.mul(r, &den.inv_pm1(r))).neg(r);
    let w3 = lam.mul(r, &z3).add(r, &nu);
    let d = z3
        .scale(r, a1)
        .add(r, &w3.scale(r, a3))
        .sub(r, &BiSeries::constant(r, r.one(), n));
    z3.mul(r, &d.inv_pm1(r))
}

/// F(g(T), h(T)) computed directly on univariate series.
pub fn add_series<R: Ring>(r: &R, a: &[R::E; 5], w: &[R::E], g: &[R::E], h: &[R::E], n: usize) -> Vec<R::E> {
    let [a1, a2, a3, a4, a6] = a;
    let m = |x: &[R::E], y: &[R::E]| uni_mul(r, x, y, n);
    let w1 = uni_compose(r, w, g, n);
    // λ = Σ A_k h_{k−1}(g, h) with h_j = g·h_{j−1} + h^j.
    let mut lam = vec![r.zero(); n + 1];
    let mut hk = vec![r.zero(); n + 1];
    hk[0] = r.one();
    let mut hpow = hk.clone();
    for k in 1..=n + 1 {
        if k >= 2 {
            hpow = m(&hpow, h);
            hk = uni_add(r, &m(g, &hk), &hpow);
        }
        if k < w.len() && !r.is_zero(&w[k]) {
            lam = uni_add(r, &lam, &uni_scale(r, &hk, &w[k]));
        }
    }
    let nu = uni_sub(r, &w1, &m(&lam, g));
    let lam2 = m(&lam, &lam);
    let mut num = uni_scale(r, &lam, a1);
    num = uni_add(r, &num, &uni_scale(r, &nu, a2));
    num = uni_add(r, &num, &uni_scale(r, &lam2, a3));
    num = uni_add(r, &num, &uni_scale(r, &m(&lam, &nu), &r.mul_int(2, a4)));
    num = uni_add(r, &num, &uni_scale(r, &m(&lam2, &nu), &r.mul_int(3, a6)));
    let mut den = vec![r.zero(); n + 1];
    den[0] = r.one();
    den = uni_add(r, &den, &uni_scale(r, &lam, a2));
    den = uni_add(r, &den, &uni_scale(r, &lam2, a4));
    den = uni_add(r, &den, &uni_scale(r, &m(&lam2, &lam), a6));
    let q = m(&num, &uni_inv_pm1(r, &den, n));
    let z3: Vec<R::E> = uni_add(r, &uni_add(r, g, h), &q).iter().map(|c| r.neg(c)).collect();
    let w3 = uni_add(r, &m(&lam, &z3), &nu);
    let mut d = uni_add(r, &uni_scale(r, &z3, a1), &uni_scale(r, &w3, a3));
    d[0] = r.sub(&d[0], &r.one());
    m(&z3, &uni_inv_pm1(r, &d, n))
}

/// [m](T) modulo T^{n+1}, by [k](T) = F([k−1](T), T).
pub fn mult_series_univariate<R: Ring>(r: &R, a: &[R::E; 5], mult: u64, n: usize) -> Vec<R::E> {
    let w = w_series(r, a, n + 1);
    let mut t = vec![r.zero(); n + 1];
    if n >= 1 {
        t[1] = r.one();
    }
    let mut acc = vec![r.zero(); n + 1];
    for k in 1..=mult {
        acc = if k == 1 { t.clone() } else { add_series(r, a, &w, &acc, &t, n) };
    }
    acc
}

/// [m](T) by substituting into a precomputed bivariate law.
pub fn mult_series_from_law<R: Ring>(r: &R, law: &BiSeries<R::E>, mult: u64) -> Vec<R::E> {
    let n = law.n;
    let mut t = vec![r.zero(); n + 1];
    if n >= 1 {
        t[1] = r.one();
    }
    let mut acc = vec![r.zero(); n + 1];
    for k in 1..=mult {
        acc = if k == 1 { t.clone() } else { law.substitute(r, &acc, &t) };
    }
    acc
}

/// F(F(X,Y),Z) and F(X,F(Y,Z)) as maps (i,j,k) ↦ coefficient, both truncated at degree n.
pub fn associativity_sides<R: Ring>(r: &R, law: &BiSeries<R::E>) -> (Trivariate<R::E>, Trivariate<R::E>) {
    let n = law.n;
    // Left: Σ c_ij G^i Z^j with G = F(X,Y) bivariate in (X,Y).
    let mut gp = vec![BiSeries::constant(r, r.one(), n)];
    for i in 1..=n {
        gp.push(gp[i - 1].mul(r, law));
    }
    let mut left = Trivariate::zero(n);
    for j in 0..=n {
        let mut acc = BiSeries::zero(r, n - j);
        for i in 0..=(n - j) {
            let c = law.get(r, i, j);
            if r.is_zero(&c) {
                continue;
            }
            acc = acc.add(r, &truncate(r, &gp[i], n - j).scale(r, &c));
        }
        for (d, row) in acc.c.iter().enumerate() {
            for (a, v) in row.iter().enumerate() {
                if !r.is_zero(v) {
                    left.put(a, d - a, j, v.clone());
                }
            }
        }
    }
    // Right: Σ c_ij X^i H^j with H = F(Y,Z) bivariate in (Y,Z).
    let mut right = Trivariate::zero(n);
    for i in 0..=n {
        let mut acc = BiSeries::zero(r, n - i);
        for j in 0..=(n - i) {
            let c = law.get(r, i, j);
            if r.is_zero(&c) {
                continue;
            }
            acc = acc.add(r, &truncate(r, &gp[j], n - i).scale(r, &c));
        }
        for (d, row) in acc.c.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if !r.is_zero(v) {
                    right.put(i, b, d - b, v.clone());
                }
            }
        }
    }
    (left, right)
}

fn truncate<R: Ring>(_r: &R, s: &BiSeries<R::E>, n: usize) -> BiSeries<R::E> {
    BiSeries {
        n,
        c: s.c.iter().take(n + 1).cloned().collect(),
    }
}

/// Sparse trivariate coefficients X^i Y^j Z^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trivariate<E> {
    pub n: usize,
    pub terms: std::collections::BTreeMap<(usize, usize, usize), E>,
}

impl<E> Trivariate<E> {
    fn zero(n: usize) -> Self {
        Trivariate {
            n,
            terms: Default::default(),
        }
    }
    fn put(&mut self, i: usize, j: usize, k: usize, v: E) {
        self.terms.insert((i, j, k), v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::{make_field, Field, RatField};

    #[test]
    fn w_leading_terms() {
        // w = z³ + a1z⁴ + (a1² + a2)z⁵ + ...
        let f = make_field(7, 1).unwrap();
        let a = [2, 3, 0, 0, 0];
        let w = w_series(&f, &a, 6);
        assert_eq!(w[3], 1);
        assert_eq!(w[4], 2);
        assert_eq!(w[5], (4 + 3) % 7);
    }

    #[test]
    fn law_low_degree() {
        let k = RatField::new(make_field(3, 1).unwrap());
        let t = k.t();
        let a = [t.clone(), k.one(), k.zero(), k.from_poly(vec![1, 1]), t.clone()];
        let f = group_law(&k, &a, 6);
        assert_eq!(f.get(&k, 1, 0), k.one());
        assert_eq!(f.get(&k, 0, 1), k.one());
        assert_eq!(f.get(&k, 1, 1), k.neg(&t));
        assert_eq!(f.get(&k, 2, 0), k.zero());
        // Second-order terms: −a2(X²Y + XY²).
        assert_eq!(f.get(&k, 2, 1), k.neg(&a[1]));
        assert_eq!(f, f.swap());
    }

    #[test]
    fn univariate_and_bivariate_routes_agree() {
        let k = RatField::new(make_field(2, 1).unwrap());
        let t = k.t();
        let a = [t.clone(), k.zero(), k.one(), k.zero(), k.zero()];
        let law = group_law(&k, &a, 10);
        for m in 0..4u64 {
            assert_eq!(mult_series_univariate(&k, &a, m, 10), mult_series_from_law(&k, &law, m));
        }
        let two = mult_series_univariate(&k, &a, 2, 10);
        for (i, c) in two.iter().enumerate() {
            if i % 2 == 1 {
                assert!(k.is_zero(c), "odd coefficient at {i}");
            }
        }
        // [2](T) = a1 T² + ... in characteristic 2.
        assert_eq!(two[2], t);
        let _ = k.inv(&t);
    }
}
