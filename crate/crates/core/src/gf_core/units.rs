//! |D_m / D_m^p| for D_m = O^*/(1 + π^m O), O = F_q[[π]].

use std::collections::HashSet;

use super::field::{field_of_order, Gf, Ring};
use super::GfError;

/// Largest |F_q[π]/(π^m)| the enumeration path accepts.
pub const UNIT_ENUMERATION_BOUND: u128 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitQuotient {
    pub q: u64,
    pub m: u32,
    pub formula: u128,
    /// None when q^m exceeds the enumeration bound.
    pub brute: Option<u128>,
}

fn check(q: u64, m: u32) -> Result<Gf, GfError> {
    let f = field_of_order(q)?;
    let p = f.p();
    if m == 0 || m % p != 0 {
        return Err(GfError::DivisibilityViolation { p: p as u64, m });
    }
    Ok(f)
}

/// Closed form q^{m − m/p}.
pub fn unit_quotient_formula(q: u64, m: u32) -> Result<u128, GfError> {
    let f = check(q, m)?;
    Ok((q as u128).pow(m - m / f.p()))
}

/// Enumerates the image of x ↦ x^p on D_m by multiplying truncated series.
pub fn unit_quotient_brute(q: u64, m: u32) -> Result<u128, GfError> {
    let f = check(q, m)?;
    let size = (q as u128).checked_pow(m).unwrap_or(u128::MAX);
    if size > UNIT_ENUMERATION_BOUND {
        return Err(GfError::EnumerationBound {
            size,
            bound: UNIT_ENUMERATION_BOUND,
        });
    }
    let p = f.p() as u64;
    let m = m as usize;
    let qq = q as u128;
    let encode = |s: &[u32]| -> u64 { s.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64) };
    let mut images: HashSet<u64> = HashSet::new();
    let mut x = vec![0u32; m];
    let units = (qq - 1) * qq.pow(m as u32 - 1);
    for idx in 0..units {
        let mut r = idx;
        x[0] = (r % (qq - 1)) as u32 + 1;
        r /= qq - 1;
        for c in x.iter_mut().skip(1) {
            *c = (r % qq) as u32;
            r /= qq;
        }
        let mut acc = x.clone();
        for _ in 1..p {
            acc = mul_trunc(&f, &acc, &x, m);
        }
        images.insert(encode(&acc));
    }
    Ok(units / images.len() as u128)
}

fn mul_trunc(f: &Gf, a: &[u32], b: &[u32], m: usize) -> Vec<u32> {
    let mut out = vec![0u32; m];
    for i in 0..m {
        if a[i] == 0 {
            continue;
        }
        for j in 0..(m - i) {
            out[i + j] = f.add(&out[i + j], &f.mul(&a[i], &b[j]));
        }
    }
    out
}

/// Both paths; the enumeration is skipped past the bound.
pub fn unit_quotient_card(q: u64, m: u32) -> Result<UnitQuotient, GfError> {
    let formula = unit_quotient_formula(q, m)?;
    let brute = match unit_quotient_brute(q, m) {
        Ok(b) => Some(b),
        Err(GfError::EnumerationBound { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(b) = brute {
        if b != formula {
            return Err(GfError::Disagreement(format!(
                "unit quotient q={q} m={m}: formula {formula}, enumeration {b}"
            )));
        }
    }
    Ok(UnitQuotient { q, m, formula, brute })
}
