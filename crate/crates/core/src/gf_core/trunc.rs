//! The finite ring F[[ϖ]]/(ϖ^L) over a finite field F.

use super::field::{FiniteField, Ring};
use super::series::LocalSeries;
use super::GfError;

#[derive(Clone, Debug)]
pub struct TruncRing<F: FiniteField> {
    pub f: F,
    pub prec: usize,
}

impl<F: FiniteField> TruncRing<F> {
    pub fn new(f: F, prec: usize) -> Self {
        assert!(prec >= 1);
        TruncRing { f, prec }
    }

    pub fn uniformizer(&self) -> Vec<F::E> {
        self.monomial(self.f.one(), 1)
    }

    /// c·ϖ^n.
    pub fn monomial(&self, c: F::E, n: usize) -> Vec<F::E> {
        let mut out = vec![self.f.zero(); self.prec];
        if n < self.prec {
            out[n] = c;
        }
        out
    }

    pub fn embed(&self, c: &F::E) -> Vec<F::E> {
        self.monomial(c.clone(), 0)
    }

    pub fn from_coeffs(&self, mut c: Vec<F::E>) -> Vec<F::E> {
        c.resize(self.prec, self.f.zero());
        c.truncate(self.prec);
        c
    }

    /// None for 0 (valuation ≥ prec).
    pub fn valuation(&self, a: &[F::E]) -> Option<usize> {
        a.iter().position(|c| !self.f.is_zero(c))
    }

    pub fn valuation_or_prec(&self, a: &[F::E]) -> usize {
        self.valuation(a).unwrap_or(self.prec)
    }

    pub fn residue(&self, a: &[F::E]) -> F::E {
        a[0].clone()
    }

    pub fn inv_unit(&self, a: &[F::E]) -> Option<Vec<F::E>> {
        let f = &self.f;
        let a0i = f.inv(&a[0])?;
        let mut out = vec![f.zero(); self.prec];
        for n in 0..self.prec {
            let mut s = if n == 0 { f.one() } else { f.zero() };
            for i in 1..=n {
                s = f.sub(&s, &f.mul(&a[i], &out[n - i]));
            }
            out[n] = f.mul(&s, &a0i);
        }
        Some(out)
    }

    /// a / ϖ^n; None unless ϖ^n divides a (with the quotient known only to prec − n).
    pub fn shift_down(&self, a: &[F::E], n: usize) -> Option<Vec<F::E>> {
        if a.iter().take(n).any(|c| !self.f.is_zero(c)) {
            return None;
        }
        Some(self.from_coeffs(a.iter().skip(n).cloned().collect()))
    }

    pub fn shift_up(&self, a: &[F::E], n: usize) -> Vec<F::E> {
        let mut out = vec![self.f.zero(); n.min(self.prec)];
        out.extend(a.iter().cloned());
        self.from_coeffs(out)
    }

    pub fn map_coeffs<G: FiniteField>(&self, target: &TruncRing<G>, a: &[F::E], h: impl Fn(&F::E) -> G::E) -> Vec<G::E> {
        target.from_coeffs(a.iter().map(h).collect())
    }
}

impl<F: FiniteField<E = Vec<u32>>> TruncRing<F> {
    /// Image of an integral local expansion.
    pub fn from_local(&self, s: &LocalSeries) -> Result<Vec<F::E>, GfError> {
        if s.val < 0 {
            return Err(GfError::PrecisionBound {
                requested: s.val,
                available: 0,
            });
        }
        (0..self.prec as i64).map(|n| s.coeff(n)).collect()
    }
}

impl<F: FiniteField> Ring for TruncRing<F> {
    type E = Vec<F::E>;

    fn zero(&self) -> Self::E {
        vec![self.f.zero(); self.prec]
    }
    fn one(&self) -> Self::E {
        self.embed(&self.f.one())
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.iter().zip(b).map(|(x, y)| self.f.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.iter().zip(b).map(|(x, y)| self.f.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        a.iter().map(|x| self.f.neg(x)).collect()
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let f = &self.f;
        let m = self.prec;
        let mut out = vec![f.zero(); m];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(m - i) {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        out
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        a.iter().all(|c| self.f.is_zero(c))
    }
    fn from_i64(&self, n: i64) -> Self::E {
        self.embed(&self.f.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.f.characteristic()
    }
    fn mul_int(&self, n: i64, a: &Self::E) -> Self::E {
        let c = self.f.from_i64(n);
        a.iter().map(|x| self.f.mul(&c, x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::field::make_field;

    #[test]
    fn inverse_of_one_minus_pi() {
        let f = make_field(3, 1).unwrap();
        let r = TruncRing::new(f, 5);
        let x = r.sub(&r.one(), &r.uniformizer());
        let xi = r.inv_unit(&x).unwrap();
        assert_eq!(xi, vec![1; 5]);
        assert_eq!(r.mul(&x, &xi), r.one());
        assert_eq!(r.valuation(&r.pow(&r.uniformizer(), 3)), Some(3));
        assert!(r.is_zero(&r.pow(&r.uniformizer(), 5)));
    }
}
