//! Truncated power series in one and two variables over an arbitrary ring.

use crate::gf_core::Ring;

/// Coefficients 0..=n of a univariate series.
pub fn uni_mul<R: Ring>(r: &R, a: &[R::E], b: &[R::E], n: usize) -> Vec<R::E> {
    let mut out = vec![r.zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !r.is_zero(y) {
                out[i + j] = r.add(&out[i + j], &r.mul(x, y));
            }
        }
    }
    out
}

pub fn uni_add<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => r.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            _ => unreachable!(),
        })
        .collect()
}

pub fn uni_sub<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    uni_add(r, a, &b.iter().map(|x| r.neg(x)).collect::<Vec<_>>())
}

pub fn uni_scale<R: Ring>(r: &R, a: &[R::E], c: &R::E) -> Vec<R::E> {
    a.iter().map(|x| r.mul(x, c)).collect()
}

/// Inverse of a series whose constant term is ±1.
pub fn uni_inv_pm1<R: Ring>(r: &R, a: &[R::E], n: usize) -> Vec<R::E> {
    let c0 = &a[0];
    let sign = if r.is_one(c0) {
        r.one()
    } else {
        assert!(r.is_one(&r.neg(c0)), "constant term must be ±1");
        r.neg(&r.one())
    };
    let mut out = vec![r.zero(); n + 1];
    out[0] = sign.clone();
    for m in 1..=n {
        let mut s = r.zero();
        for i in 1..=m.min(a.len() - 1) {
            s = r.add(&s, &r.mul(&a[i], &out[m - i]));
        }
        out[m] = r.neg(&r.mul(&s, &sign));
    }
    out
}

/// Σ c_i g^i truncated at degree n, for g with zero constant term.
pub fn uni_compose<R: Ring>(r: &R, c: &[R::E], g: &[R::E], n: usize) -> Vec<R::E> {
    let mut out = vec![r.zero(); n + 1];
    let mut pw = vec![r.zero(); n + 1];
    pw[0] = r.one();
    for (i, ci) in c.iter().enumerate().take(n + 1) {
        if i > 0 {
            pw = uni_mul(r, &pw, g, n);
        }
        if !r.is_zero(ci) {
            out = uni_add(r, &out, &uni_scale(r, &pw, ci));
        }
    }
    out
}

/// Bivariate series: c[d][i] is the coefficient of X^i Y^{d−i}, for d ≤ n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries<E> {
    pub n: usize,
    pub c: Vec<Vec<E>>,
}

impl<E: Clone> BiSeries<E> {
    pub fn zero<R: Ring<E = E>>(r: &R, n: usize) -> Self {
        BiSeries {
            n,
            c: (0..=n).map(|d| vec![r.zero(); d + 1]).collect(),
        }
    }

    /// Coefficient of X^i Y^j (zero beyond the truncation).
    pub fn get<R: Ring<E = E>>(&self, r: &R, i: usize, j: usize) -> E {
        if i + j > self.n {
            return r.zero();
        }
        self.c[i + j][i].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        if i + j <= self.n {
            self.c[i + j][i] = v;
        }
    }

    pub fn x<R: Ring<E = E>>(r: &R, n: usize) -> Self {
        let mut s = Self::zero(r, n);
        s.set(1, 0, r.one());
        s
    }

    pub fn y<R: Ring<E = E>>(r: &R, n: usize) -> Self {
        let mut s = Self::zero(r, n);
        s.set(0, 1, r.one());
        s
    }

    pub fn constant<R: Ring<E = E>>(r: &R, c: E, n: usize) -> Self {
        let mut s = Self::zero(r, n);
        s.set(0, 0, c);
        s
    }

    /// f(X) as a bivariate series.
    pub fn from_x<R: Ring<E = E>>(r: &R, f: &[E], n: usize) -> Self {
        let mut s = Self::zero(r, n);
        for (i, c) in f.iter().enumerate().take(n + 1) {
            s.set(i, 0, c.clone());
        }
        s
    }

    /// f(Y) as a bivariate series.
    pub fn from_y<R: Ring<E = E>>(r: &R, f: &[E], n: usize) -> Self {
        let mut s = Self::zero(r, n);
        for (j, c) in f.iter().enumerate().take(n + 1) {
            s.set(0, j, c.clone());
        }
        s
    }

    pub fn add<R: Ring<E = E>>(&self, r: &R, o: &Self) -> Self {
        BiSeries {
            n: self.n,
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| r.add(x, y)).collect())
                .collect(),
        }
    }

    pub fn neg<R: Ring<E = E>>(&self, r: &R) -> Self {
        BiSeries {
            n: self.n,
            c: self.c.iter().map(|a| a.iter().map(|x| r.neg(x)).collect()).collect(),
        }
    }

    pub fn sub<R: Ring<E = E>>(&self, r: &R, o: &Self) -> Self {
        self.add(r, &o.neg(r))
    }

    pub fn scale<R: Ring<E = E>>(&self, r: &R, k: &E) -> Self {
        BiSeries {
            n: self.n,
            c: self.c.iter().map(|a| a.iter().map(|x| r.mul(x, k)).collect()).collect(),
        }
    }

    pub fn mul<R: Ring<E = E>>(&self, r: &R, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(r, n);
        for d1 in 0..=n {
            for (i1, x) in self.c[d1].iter().enumerate() {
                if r.is_zero(x) {
                    continue;
                }
                for d2 in 0..=(n - d1) {
                    let row = &mut out.c[d1 + d2];
                    for (i2, y) in o.c[d2].iter().enumerate() {
                        if !r.is_zero(y) {
                            row[i1 + i2] = r.add(&row[i1 + i2], &r.mul(x, y));
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse of a series with constant term ±1.
    pub fn inv_pm1<R: Ring<E = E>>(&self, r: &R) -> Self {
        let n = self.n;
        let c0 = &self.c[0][0];
        let sign = if r.is_one(c0) {
            r.one()
        } else {
            assert!(r.is_one(&r.neg(c0)), "constant term must be ±1");
            r.neg(&r.one())
        };
        let mut out = Self::zero(r, n);
        out.c[0][0] = sign.clone();
        for d in 1..=n {
            let mut acc = vec![r.zero(); d + 1];
            for k in 1..=d {
                for (i1, x) in self.c[k].iter().enumerate() {
                    if r.is_zero(x) {
                        continue;
                    }
                    for (i2, y) in out.c[d - k].iter().enumerate() {
                        acc[i1 + i2] = r.add(&acc[i1 + i2], &r.mul(x, y));
                    }
                }
            }
            out.c[d] = acc.iter().map(|a| r.neg(&r.mul(a, &sign))).collect();
        }
        out
    }

    /// Swaps X and Y.
    pub fn swap(&self) -> Self {
        BiSeries {
            n: self.n,
            c: self.c.iter().map(|a| a.iter().rev().cloned().collect()).collect(),
        }
    }

    /// f(X, 0).
    pub fn at_y0(&self) -> Vec<E> {
        self.c.iter().map(|a| a[a.len() - 1].clone()).collect()
    }

    /// f(0, Y).
    pub fn at_x0(&self) -> Vec<E> {
        self.c.iter().map(|a| a[0].clone()).collect()
    }

    /// f(g(T), h(T)) for univariate g, h without constant term.
    pub fn substitute<R: Ring<E = E>>(&self, r: &R, g: &[E], h: &[E]) -> Vec<E> {
        let n = self.n;
        let mut gp = vec![vec![r.zero(); n + 1]];
        gp[0][0] = r.one();
        let mut hp = gp.clone();
        for i in 1..=n {
            gp.push(uni_mul(r, &gp[i - 1], g, n));
            hp.push(uni_mul(r, &hp[i - 1], h, n));
        }
        let mut out = vec![r.zero(); n + 1];
        for d in 0..=n {
            for (i, c) in self.c[d].iter().enumerate() {
                if r.is_zero(c) {
                    continue;
                }
                let term = uni_mul(r, &gp[i], &hp[d - i], n);
                out = uni_add(r, &out, &uni_scale(r, &term, c));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::make_field;

    #[test]
    fn geometric_inverse() {
        let f = make_field(5, 1).unwrap();
        // 1/(1 − X − Y) has coefficient C(d, i) at X^i Y^{d−i}.
        let one = BiSeries::constant(&f, 1, 4);
        let s = one.sub(&f, &BiSeries::x(&f, 4)).sub(&f, &BiSeries::y(&f, 4));
        let inv = s.inv_pm1(&f);
        assert_eq!(inv.c[4], vec![1, 4, 6 % 5, 4, 1]);
        assert_eq!(s.mul(&f, &inv), one);
    }

    #[test]
    fn uni_inverse() {
        let f = make_field(3, 1).unwrap();
        let a = vec![2, 1];
        let b = uni_inv_pm1(&f, &a, 5);
        assert_eq!(uni_mul(&f, &a, &b, 5), vec![1, 0, 0, 0, 0, 0]);
    }
}
