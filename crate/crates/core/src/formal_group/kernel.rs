//! Kernel points of Verschiebung in truncated local rings: valuation
//! transport through 𝒫 and spacing of the roots of P(t).

use rand::Rng;

use crate::gf_core::{poly, ExtField, FiniteField, Gf, LocalCtx, RatFunc, ResElem, Ring, TruncRing};

use super::{local_script_p, prep::weierstrass_prepare, trunc_ring, FormalError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransportSample {
    pub ord_a: usize,
    /// ord_v 𝒫(a); None if 𝒫(a) vanishes to the working precision.
    pub ord_b: Option<usize>,
}

/// Evaluates 𝒫 at random a with ord(a) > n/(p−1) in O_v/π^L.
pub fn transport_samples<G: Rng>(
    ctx: &LocalCtx,
    minimal: &[RatFunc; 5],
    n_v: usize,
    count: usize,
    rng: &mut G,
) -> Result<Vec<TransportSample>, FormalError> {
    let p = ctx.k.p() as usize;
    let kmin = n_v / (p - 1) + 1;
    let kmax = kmin + 2;
    let l = kmax + n_v + 1;
    // Terms of degree > m have valuation ≥ (m+1)·kmin ≥ l.
    let m = l.div_ceil(kmin).max(p);
    let r = trunc_ring(ctx, l);
    let g = local_script_p(ctx, minimal, l, m)?;
    let f = &ctx.res;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let k = rng.gen_range(kmin..=kmax);
        let mut unit: Vec<ResElem> = (0..l).map(|_| f.random(rng)).collect();
        while f.is_zero(&unit[0]) {
            unit[0] = f.random(rng);
        }
        let a = r.shift_up(&unit, k);
        let mut b = r.zero();
        let mut pw = r.one();
        for gi in g.iter().skip(1) {
            pw = r.mul(&pw, &a);
            b = r.add(&b, &r.mul(gi, &pw));
        }
        out.push(TransportSample {
            ord_a: k,
            ord_b: r.valuation(&b),
        });
    }
    Ok(out)
}

/// Valuations ord_v(a_u − a_u′) of pairwise differences of the nonzero roots
/// of P(t), computed from explicit roots in a ramified truncated extension.
/// Returned as reduced fractions (numerator, denominator). Only p ∈ {2, 3}.
pub fn root_spacing(ctx: &LocalCtx, minimal: &[RatFunc; 5], n_v: usize) -> Result<Vec<(i64, i64)>, FormalError> {
    let p = ctx.k.p() as usize;
    match p {
        2 => return Ok(Vec::new()),
        3 => {}
        _ => return Err(FormalError::Internal("root spacing implemented for p = 2, 3".into())),
    }
    let l = n_v + 4;
    let r = trunc_ring(ctx, l);
    let mut m = 12;
    let dp = loop {
        let g = local_script_p(ctx, minimal, l, m)?;
        let dp = weierstrass_prepare(&r, &g, p).ok_or_else(|| FormalError::Internal("preparation".into()))?;
        if dp.prec[1] >= l.min(n_v + 3) && dp.prec[2] >= l.min(n_v + 3) || m >= super::MAX_PREP_DEGREE {
            break dp;
        }
        m *= 2;
    };
    let lmin = dp.prec[1].min(dp.prec[2]);
    if lmin <= n_v {
        return Err(FormalError::Precision(crate::gf_core::GfError::PrecisionBound {
            requested: n_v as i64 + 1,
            available: lmin as i64,
        }));
    }
    let (c1, c2) = (&dp.coeffs[1], &dp.coeffs[2]);
    let res = &ctx.res;
    let e2 = if n_v % 2 == 1 { 2 } else { 1 };
    let np = n_v * e2 / 2;
    // Residual σ² + ρ2σ + ρ1 over F_v.
    let rho1 = c1[n_v].clone();
    let rho2 = if np % e2 == 0 { c2[np / e2].clone() } else { res.zero() };
    let gv = vec![rho1, rho2, res.one()];
    let split = poly::roots(res, &gv).len() == 2;
    let fp: ExtField<ExtField<Gf>> = if split {
        ExtField::new(res.clone(), vec![res.zero(), res.one()])
    } else {
        ExtField::new(res.clone(), gv.clone())
    };
    let lw = e2 * lmin;
    let big = TruncRing::new(fp.clone(), lw);
    let lift = |c: &[ResElem]| -> Vec<Vec<ResElem>> {
        let mut out = big.zero();
        for (j, x) in c.iter().enumerate().take(lmin) {
            if j * e2 < lw {
                out[j * e2] = fp.embed(x);
            }
        }
        out
    };
    let s1 = big.shift_down(&lift(c1), 2 * np).ok_or_else(|| FormalError::Internal("slope".into()))?;
    let s2 = big.shift_down(&lift(c2), np).ok_or_else(|| FormalError::Internal("slope".into()))?;
    let wprec = lw - 2 * np;
    let w = TruncRing::new(fp.clone(), wprec);
    let s1 = w.from_coeffs(s1);
    let s2 = w.from_coeffs(s2);
    let h = |x: &Vec<Vec<ResElem>>| w.add(&w.add(&w.mul(x, x), &w.mul(&s2, x)), &s1);
    let dh = |x: &Vec<Vec<ResElem>>| w.add(&w.mul_int(2, x), &s2);
    let g_res = vec![s1[0].clone(), s2[0].clone(), fp.one()];
    let roots0 = poly::roots(&fp, &g_res);
    if roots0.len() != 2 {
        return Err(FormalError::Internal("residual polynomial is not separable".into()));
    }
    let mut roots = Vec::new();
    for r0 in roots0 {
        let mut x = w.embed(&r0);
        for _ in 0..=wprec {
            let d = w.inv_unit(&dh(&x)).ok_or_else(|| FormalError::Internal("repeated root".into()))?;
            x = w.sub(&x, &w.mul(&h(&x), &d));
        }
        if !w.is_zero(&h(&x)) {
            return Err(FormalError::Internal("Newton iteration did not converge".into()));
        }
        roots.push(x);
    }
    let diff = w.sub(&roots[0], &roots[1]);
    let v = w.valuation(&diff).ok_or_else(|| FormalError::Internal("coincident roots".into()))?;
    let num = (np + v) as i64;
    let den = e2 as i64;
    let g = gcd(num, den);
    Ok(vec![(num / g, den / g)])
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs().max(1)
    } else {
        gcd(b, a % b)
    }
}
