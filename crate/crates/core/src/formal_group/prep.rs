//! Weierstrass preparation over F[[π]]/(π^L) with certified coefficient
//! precision, and the rationality of the nonzero roots of P(t).

use serde::{Deserialize, Serialize};

use crate::gf_core::{poly, FiniteField, Ring, TruncRing};

/// P(s) = s^d + c_{d−1}s^{d−1} + ... + c_0, each c_i known modulo π^{prec[i]}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinguished<E> {
    pub coeffs: Vec<Vec<E>>,
    pub prec: Vec<usize>,
}

impl<E: Clone> Distinguished<E> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Splits g(s) = Σ g_i s^i (known for i ≤ M, integral beyond) as P·U with P
/// distinguished of degree d, where g_d is the first unit coefficient.
pub fn weierstrass_prepare<F: FiniteField>(r: &TruncRing<F>, g: &[Vec<F::E>], d: usize) -> Option<Distinguished<F::E>> {
    let l = r.prec;
    let big_m = g.len().checked_sub(1)?;
    if big_m + 1 < 2 * d || r.inv_unit(&g[d]).is_none() {
        return None;
    }
    if g[..d].iter().any(|c| r.valuation(c) == Some(0)) {
        return None;
    }
    let t_len = big_m - d + 1;
    let a = &g[..d];
    let b: Vec<Vec<F::E>> = g[d..=big_m].to_vec();
    let binv = inv_series(r, &b, t_len);
    // Q = B^{-1}(1 − τ(AQ)); τ drops the terms below s^d and divides by s^d.
    let mut q = binv.clone();
    let mut iters = 0usize;
    loop {
        let mut rhs = vec![r.zero(); t_len];
        rhs[0] = r.one();
        for (j, slot) in rhs.iter_mut().enumerate() {
            for (i, ai) in a.iter().enumerate() {
                let idx = j + d - i;
                if idx < t_len {
                    *slot = r.sub(slot, &r.mul(ai, &q[idx]));
                }
            }
        }
        let next = mul_series(r, &binv, &rhs, t_len);
        iters += 1;
        if next == q {
            break;
        }
        q = next;
        // The map is a contraction in the π-adic topology, so exact stabilization
        // happens within L·t_len rounds.
        assert!(iters <= l * t_len + 2, "preparation failed to stabilize");
    }
    // Error valuations of Q_j: 0 past the truncation, then the recursion.
    let ord_a: Vec<usize> = a.iter().map(|c| r.valuation_or_prec(c)).collect();
    let mut ev = vec![0usize; t_len + d];
    loop {
        let mut changed = false;
        for j in 0..t_len {
            let mut best = l;
            for lidx in 0..=j {
                for (i, &oa) in ord_a.iter().enumerate() {
                    let idx = lidx + d - i;
                    let e = if idx < t_len { ev[idx] } else { 0 };
                    best = best.min(oa + e);
                }
            }
            let best = best.min(l);
            if best > ev[j] {
                ev[j] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut prec = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut c = r.zero();
        let mut pr = l;
        for k in 0..=i {
            c = r.add(&c, &r.mul(&g[k], &q[i - k]));
            pr = pr.min(r.valuation_or_prec(&g[k]) + ev[i - k]);
        }
        // Coefficients beyond their certified precision are zeroed.
        let c: Vec<F::E> = c
            .into_iter()
            .enumerate()
            .map(|(n, x)| if n < pr { x } else { r.f.zero() })
            .collect();
        coeffs.push(c);
        prec.push(pr.min(l));
    }
    coeffs.push(r.one());
    prec.push(l);
    Some(Distinguished { coeffs, prec })
}

fn mul_series<F: FiniteField>(r: &TruncRing<F>, a: &[Vec<F::E>], b: &[Vec<F::E>], n: usize) -> Vec<Vec<F::E>> {
    let mut out = vec![r.zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    out
}

fn inv_series<F: FiniteField>(r: &TruncRing<F>, b: &[Vec<F::E>], n: usize) -> Vec<Vec<F::E>> {
    let b0i = r.inv_unit(&b[0]).expect("unit");
    let mut out = vec![r.zero(); n];
    for m in 0..n {
        let mut s = if m == 0 { r.one() } else { r.zero() };
        for i in 1..=m.min(b.len() - 1) {
            s = r.sub(&s, &r.mul(&b[i], &out[m - i]));
        }
        out[m] = r.mul(&s, &b0i);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Epsilon {
    Zero,
    One,
    /// Precision or residual data did not settle the question.
    Indeterminate,
}

impl Epsilon {
    pub fn value(&self) -> Option<i64> {
        match self {
            Epsilon::Zero => Some(0),
            Epsilon::One => Some(1),
            Epsilon::Indeterminate => None,
        }
    }
}

/// Outcome of the root-rationality test for P(t)/t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootTest<E> {
    pub epsilon: Epsilon,
    /// Whether every coefficient of P(t)/t lies on or above the line of slope n/(d−1).
    pub single_slope: bool,
    /// Residual polynomial of the slope part, when the slope is integral.
    pub residual: Option<Vec<E>>,
    pub certified: bool,
}

/// Decides whether P(t)/t splits over K_v, where ord(c_1) = n.
pub fn root_test<F: FiniteField>(r: &TruncRing<F>, dp: &Distinguished<F::E>, n: usize) -> RootTest<F::E> {
    let d = dp.degree();
    let f = &r.f;
    if d <= 1 {
        return RootTest {
            epsilon: Epsilon::One,
            single_slope: true,
            residual: None,
            certified: true,
        };
    }
    let deg = d - 1;
    // c_1 must be determined exactly to valuation n.
    let c1_ok = dp.prec[1] > n && r.valuation(&dp.coeffs[1]) == Some(n);
    let mut single_slope = c1_ok;
    for i in 1..d {
        // (d−1)·ord(c_i) ≥ n·(d − i), using ord ≥ prec when the known part vanishes.
        let o = r.valuation(&dp.coeffs[i]).filter(|&o| o < dp.prec[i]).unwrap_or(dp.prec[i]);
        if deg * o < n * (d - i) {
            single_slope = false;
        }
    }
    if n % deg != 0 {
        return RootTest {
            epsilon: Epsilon::Zero,
            single_slope,
            residual: None,
            certified: c1_ok,
        };
    }
    let e = n / deg;
    let mut certified = c1_ok;
    let mut residual = Vec::with_capacity(d);
    for i in 1..=d {
        let shift = n - e * (i - 1);
        if i < d && dp.prec[i] <= shift {
            certified = false;
        }
        let c = &dp.coeffs[i];
        residual.push(if shift < c.len() { c[shift].clone() } else { f.zero() });
    }
    if !certified || !single_slope {
        return RootTest {
            epsilon: Epsilon::Indeterminate,
            single_slope,
            residual: Some(residual),
            certified,
        };
    }
    let g = poly::trimmed(f, residual.clone());
    let roots = poly::roots(f, &g);
    let sqf = poly::gcd(f, &g, &poly::deriv(f, &g)).len() == 1;
    let epsilon = if roots.is_empty() {
        Epsilon::Zero
    } else if roots.len() == deg && sqf {
        Epsilon::One
    } else {
        Epsilon::Indeterminate
    };
    RootTest {
        epsilon,
        single_slope,
        residual: Some(residual),
        certified,
    }
}
