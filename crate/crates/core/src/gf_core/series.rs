//! Truncated Laurent expansions in the completion K_v = F_v((π_v)).

use super::field::{ExtField, Field, Gf, Ring};
use super::place::{poly_ord, LocalCtx, Place, ResElem};
use super::poly;
use super::ratfunc::RatFunc;
use super::GfError;

/// Largest relative precision `local_expand` will produce.
pub const MAX_LOCAL_PRECISION: usize = 4096;

/// Σ_{i} coeffs[i]·π^{val+i} + O(π^{val+len}).
#[derive(Clone, Debug)]
pub struct LocalSeries {
    pub place: Place,
    pub res: ExtField<Gf>,
    pub val: i64,
    pub coeffs: Vec<ResElem>,
}

/// Raw product of two coefficient arrays modulo π^m.
pub fn trunc_mul(f: &ExtField<Gf>, a: &[ResElem], b: &[ResElem], m: usize) -> Vec<ResElem> {
    let mut out = vec![f.zero(); m];
    for (i, x) in a.iter().enumerate().take(m) {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(m - i) {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

/// Inverse of a unit array modulo π^m.
pub fn trunc_inv(f: &ExtField<Gf>, a: &[ResElem], m: usize) -> Option<Vec<ResElem>> {
    let a0i = f.inv(a.first()?)?;
    let mut out = vec![f.zero(); m];
    for n in 0..m {
        let mut s = if n == 0 { f.one() } else { f.zero() };
        for i in 1..=n.min(a.len().saturating_sub(1)) {
            s = f.sub(&s, &f.mul(&a[i], &out[n - i]));
        }
        out[n] = f.mul(&s, &a0i);
    }
    Some(out)
}

fn eval_poly_series(
    f: &ExtField<Gf>,
    coeffs: &[u32],
    t: &[ResElem],
    m: usize,
) -> Vec<ResElem> {
    let mut acc = vec![f.zero(); m];
    for c in coeffs.iter().rev() {
        acc = trunc_mul(f, &acc, t, m);
        acc[0] = f.add(&acc[0], &f.embed(c));
    }
    acc
}

/// The expansion t = T(π) at a finite place: the root of π_v(T) = π lifting θ.
pub fn t_expansion(ctx: &LocalCtx, m: usize) -> Vec<ResElem> {
    let f = &ctx.res;
    let Place::Finite(pi) = &ctx.place else {
        panic!("t_expansion at infinity");
    };
    let dpi = poly::deriv(ctx.k.fq(), pi);
    let mut t = vec![f.zero(); m];
    t[0] = f.theta();
    let mut target = vec![f.zero(); m];
    if m > 1 {
        target[1] = f.one();
    }
    let mut prec = 1usize;
    while prec < m {
        prec = (2 * prec).min(m);
        let val = eval_poly_series(f, pi, &t, m);
        let resid: Vec<ResElem> = val.iter().zip(&target).map(|(a, b)| f.sub(a, b)).collect();
        let d = eval_poly_series(f, &dpi, &t, m);
        let di = trunc_inv(f, &d, m).expect("separable modulus");
        let corr = trunc_mul(f, &resid, &di, m);
        for (ti, ci) in t.iter_mut().zip(&corr) {
            *ti = f.sub(ti, ci);
        }
    }
    t
}

impl LocalSeries {
    /// Absolute precision: the series is known modulo π^prec.
    pub fn prec(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn zero(ctx: &LocalCtx, prec: i64) -> LocalSeries {
        LocalSeries {
            place: ctx.place.clone(),
            res: ctx.res.clone(),
            val: prec,
            coeffs: Vec::new(),
        }
    }

    /// Coefficient of π^n; errors if n is beyond the known precision.
    pub fn coeff(&self, n: i64) -> Result<ResElem, GfError> {
        if n >= self.prec() {
            return Err(GfError::PrecisionBound {
                requested: n,
                available: self.prec(),
            });
        }
        if n < self.val {
            return Ok(self.res.zero());
        }
        Ok(self.coeffs[(n - self.val) as usize].clone())
    }

    /// Drops leading zeros so that coeffs[0] ≠ 0 (or the series is an O-term).
    pub fn normalized(mut self) -> LocalSeries {
        let lead_zeros = self.coeffs.iter().take_while(|c| self.res.is_zero(c)).count();
        self.coeffs.drain(..lead_zeros);
        self.val += lead_zeros as i64;
        self
    }

    /// Valuation if determined by the known coefficients.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !self.res.is_zero(c))
            .map(|i| self.val + i as i64)
    }

    pub fn truncate_to(mut self, prec: i64) -> LocalSeries {
        if prec < self.prec() {
            let keep = (prec - self.val).max(0) as usize;
            self.coeffs.truncate(keep);
            if keep == 0 {
                self.val = prec;
            }
        }
        self
    }

    pub fn add(&self, o: &LocalSeries) -> LocalSeries {
        let f = &self.res;
        let val = self.val.min(o.val);
        let prec = self.prec().min(o.prec());
        let coeffs = (val..prec)
            .map(|n| f.add(&self.coeff(n).unwrap(), &o.coeff(n).unwrap()))
            .collect();
        LocalSeries {
            place: self.place.clone(),
            res: f.clone(),
            val,
            coeffs,
        }
    }

    pub fn neg(&self) -> LocalSeries {
        LocalSeries {
            coeffs: self.coeffs.iter().map(|c| self.res.neg(c)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, o: &LocalSeries) -> LocalSeries {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LocalSeries) -> LocalSeries {
        let a = self.clone().normalized();
        let b = o.clone().normalized();
        let rel = a.coeffs.len().min(b.coeffs.len());
        let val = a.val + b.val;
        // An O-term factor leaves only O(π^{...}).
        if rel == 0 {
            let prec = (a.val + b.prec()).min(b.val + a.prec());
            return LocalSeries {
                place: a.place,
                res: a.res,
                val: prec,
                coeffs: Vec::new(),
            };
        }
        LocalSeries {
            coeffs: trunc_mul(&a.res, &a.coeffs, &b.coeffs, rel),
            val,
            ..a
        }
    }

    pub fn inv(&self) -> Option<LocalSeries> {
        let a = self.clone().normalized();
        let c = trunc_inv(&a.res, &a.coeffs, a.coeffs.len())?;
        Some(LocalSeries {
            coeffs: c,
            val: -a.val,
            ..a
        })
    }

    pub fn pow(&self, e: u64) -> LocalSeries {
        let mut acc = LocalSeries {
            place: self.place.clone(),
            res: self.res.clone(),
            val: 0,
            coeffs: vec![self.res.one(); 1],
        };
        // Precision of the unit 1 is unbounded; emulate with the base's relative length.
        let n = self.clone().normalized().coeffs.len().max(1);
        acc.coeffs.resize(n, self.res.zero());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &ResElem) -> LocalSeries {
        LocalSeries {
            coeffs: self.coeffs.iter().map(|x| self.res.mul(x, c)).collect(),
            ..self.clone()
        }
    }

    /// Multiplication by π^n.
    pub fn shift(&self, n: i64) -> LocalSeries {
        LocalSeries {
            val: self.val + n,
            ..self.clone()
        }
    }
}

/// Expansion of x at v with coefficients for exponents ord_v(x) ..= ord_v(x)+n.
pub fn local_expand(ctx: &LocalCtx, x: &RatFunc, n: usize) -> Result<LocalSeries, GfError> {
    if n >= MAX_LOCAL_PRECISION {
        return Err(GfError::PrecisionBound {
            requested: n as i64,
            available: MAX_LOCAL_PRECISION as i64,
        });
    }
    let m = n + 1;
    let f = &ctx.res;
    let fq = ctx.k.fq();
    if x.num.is_empty() {
        return Ok(LocalSeries {
            place: ctx.place.clone(),
            res: f.clone(),
            val: 0,
            coeffs: vec![f.zero(); m],
        });
    }
    let (val, num_s, den_s) = match &ctx.place {
        Place::Finite(pi) => {
            let (a, n1) = poly_ord(fq, &x.num, pi);
            let (b, d1) = poly_ord(fq, &x.den, pi);
            let t = t_expansion(ctx, m);
            (a - b, eval_poly_series(f, &n1, &t, m), eval_poly_series(f, &d1, &t, m))
        }
        Place::Infinity => {
            let rev = |a: &[u32]| -> Vec<ResElem> {
                let mut v: Vec<ResElem> = a.iter().rev().map(|c| f.embed(c)).collect();
                v.resize(m.max(v.len()), f.zero());
                v.truncate(m);
                v
            };
            let val = poly::deg(&x.den) - poly::deg(&x.num);
            (val, rev(&x.num), rev(&x.den))
        }
    };
    let di = trunc_inv(f, &den_s, m).expect("unit denominator");
    Ok(LocalSeries {
        place: ctx.place.clone(),
        res: f.clone(),
        val,
        coeffs: trunc_mul(f, &num_s, &di, m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::field::make_field;
    use crate::gf_core::ratfunc::RatField;

    #[test]
    fn geometric_series() {
        let k = RatField::new(make_field(5, 1).unwrap());
        let v = LocalCtx::new(&k, &Place::Finite(vec![0, 1]));
        let x = k.frac(&[1], &[1, 4]).unwrap();
        let s = local_expand(&v, &x, 3).unwrap();
        assert_eq!(s.val, 0);
        assert_eq!(s.coeffs, vec![vec![1], vec![1], vec![1], vec![1]]);
        assert!(s.coeff(4).is_err());
    }

    #[test]
    fn t_at_infinity() {
        let k = RatField::new(make_field(2, 1).unwrap());
        let v = LocalCtx::new(&k, &Place::Infinity);
        let s = local_expand(&v, &k.t(), 2).unwrap();
        assert_eq!(s.val, -1);
        assert_eq!(s.coeffs, vec![vec![1], vec![0], vec![0]]);
    }

    #[test]
    fn pole_at_t_plus_1() {
        let k = RatField::new(make_field(3, 1).unwrap());
        let v = LocalCtx::new(&k, &Place::Finite(vec![1, 1]));
        let x = k.frac(&[0, 1], &[1, 1]).unwrap();
        let s = local_expand(&v, &x, 1).unwrap();
        assert_eq!(s.val, -1);
        // Division oracle: t/(t+1) = (π − 1)/π = π^{-1}·(−1) + 1.
        assert_eq!(s.coeffs, vec![vec![2], vec![1]]);
    }

    #[test]
    fn t_expansion_solves_modulus() {
        let k = RatField::new(make_field(2, 1).unwrap());
        let pi = vec![1, 1, 1];
        let v = LocalCtx::new(&k, &Place::Finite(pi.clone()));
        let t = t_expansion(&v, 12);
        let val = eval_poly_series(&v.res, &pi, &t, 12);
        let mut want = vec![v.res.zero(); 12];
        want[1] = v.res.one();
        assert_eq!(val, want);
    }

    #[test]
    fn expansion_is_multiplicative() {
        let k = RatField::new(make_field(3, 1).unwrap());
        let v = LocalCtx::new(&k, &Place::Finite(vec![1, 0, 1]));
        let x = k.frac(&[2, 1, 0, 1], &[1, 0, 1]).unwrap();
        let y = k.frac(&[1, 2, 2], &[0, 1]).unwrap();
        let sx = local_expand(&v, &x, 8).unwrap();
        let sy = local_expand(&v, &y, 8).unwrap();
        let sxy = local_expand(&v, &k.mul(&x, &y), 8).unwrap();
        let prod = sx.mul(&sy);
        assert_eq!(prod.val, sxy.val);
        assert_eq!(prod.coeffs, sxy.coeffs);
    }
}
