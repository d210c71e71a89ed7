//! Formal groups of minimal models, the [p]-series and its Verschiebung
//! factor 𝒫, the defect n_v, distinguished polynomials, ε_v, and local
//! kernel orders.

pub mod kernel;
pub mod law;
pub mod prep;
pub mod series;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf_core::{
    local_expand, ExtField, Gf, GfError, LocalCtx, Place, RatField, RatFunc, ResElem, Ring, TruncRing,
};
use crate::tate_local::{LocalReductionData, ReductionType};

pub use kernel::{root_spacing, transport_samples, TransportSample};
pub use law::{group_law, mult_series_from_law, mult_series_univariate, w_series};
pub use prep::{root_test, weierstrass_prepare, Distinguished, Epsilon};
pub use series::BiSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormalError {
    #[error("model is not v-minimal at {0}")]
    NotMinimal(String),
    #[error("additive reduction at {0}")]
    Additive(String),
    #[error("the coefficient of t^p in [p] vanishes identically: generic fiber is not ordinary")]
    NonOrdinaryCurve,
    #[error("supersingular place without Verschiebung data")]
    MissingVerschiebungData,
    #[error(transparent)]
    Precision(#[from] GfError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Default series degree bound 2p² + 2.
pub fn default_series_degree(p: u32) -> usize {
    2 * (p as usize).pow(2) + 2
}

/// F(X, Y) of a v-integral model to total degree n.
#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    pub place: Place,
    pub n: usize,
    pub a: [RatFunc; 5],
    pub law: BiSeries<RatFunc>,
}

/// Builds the law of the minimal model in `data`.
pub fn formal_group_law(k: &RatField, data: &LocalReductionData, n: usize) -> Result<FormalGroupLaw, FormalError> {
    let p = k.p() as usize;
    if n < p + 1 {
        return Err(GfError::PrecisionBound {
            requested: (p + 1) as i64,
            available: n as i64,
        }
        .into());
    }
    let ctx = LocalCtx::new(k, &data.place);
    if !data.minimal.iter().all(|x| ctx.is_integral(x)) {
        return Err(FormalError::NotMinimal(data.place.render(k.fq())));
    }
    Ok(FormalGroupLaw {
        place: data.place.clone(),
        n,
        a: data.minimal.clone(),
        law: group_law(k, &data.minimal, n),
    })
}

/// [m](t) of a formal group law.
pub fn mult_series(k: &RatField, f: &FormalGroupLaw, m: u64) -> Vec<RatFunc> {
    mult_series_from_law(k, &f.law, m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerschiebungData {
    pub place: Place,
    pub series_degree: usize,
    /// [p](t) modulo t^{N+1}; empty at multiplicative places.
    pub p_series: Vec<RatFunc>,
    /// 𝒫_i = coefficient of t^{pi} in [p](t), i ≤ N/p.
    pub script_p: Vec<RatFunc>,
    pub n_v: i64,
    /// ord_v of d𝒫/ds at s = 0, taken from the 𝒫 series.
    pub n_v_derivative: i64,
    /// Whether [p](t) is supported on exponents divisible by p.
    pub support_ok: bool,
    /// Coefficients of P(t) as elements of F_v[[π]]/(π^L), constant term first.
    pub distinguished: Vec<Vec<ResElem>>,
    pub distinguished_prec: Vec<usize>,
    pub epsilon: Epsilon,
    pub certified: bool,
}

impl VerschiebungData {
    pub fn p_degree(&self) -> usize {
        self.distinguished.len().saturating_sub(1)
    }
}

/// Local ring O_v/π^L over the residue field.
pub fn trunc_ring(ctx: &LocalCtx, l: usize) -> TruncRing<ExtField<Gf>> {
    TruncRing::new(ctx.res.clone(), l)
}

/// Image of v-integral coefficients in O_v/π^L.
pub fn local_coeffs(ctx: &LocalCtx, a: &[RatFunc; 5], l: usize) -> Result<[Vec<ResElem>; 5], GfError> {
    let r = trunc_ring(ctx, l);
    let mut out: Vec<Vec<ResElem>> = Vec::with_capacity(5);
    for x in a {
        let s = local_expand(ctx, x, l)?;
        out.push(r.from_local(&s)?);
    }
    Ok(out.try_into().unwrap())
}

/// 𝒫 over O_v/π^L through s-degree m.
pub fn local_script_p(ctx: &LocalCtx, a: &[RatFunc; 5], l: usize, m: usize) -> Result<Vec<Vec<ResElem>>, GfError> {
    let r = trunc_ring(ctx, l);
    let la = local_coeffs(ctx, a, l)?;
    let p = ctx.k.p() as usize;
    let ps = mult_series_univariate(&r, &la, p as u64, p * m);
    Ok((0..=m).map(|i| ps[p * i].clone()).collect())
}

/// Largest 𝒫-degree used when certifying P(t).
pub const MAX_PREP_DEGREE: usize = 96;

/// Verschiebung data at a semistable place of the minimal model.
pub fn verschiebung_data(
    k: &RatField,
    data: &LocalReductionData,
    series_degree: usize,
) -> Result<VerschiebungData, FormalError> {
    let fq = k.fq();
    let p = k.p() as usize;
    match data.kind {
        ReductionType::Additive(_) => return Err(FormalError::Additive(data.place.render(fq))),
        ReductionType::MultiplicativeSplit | ReductionType::MultiplicativeNonSplit => {
            // V_* is an isomorphism on formal groups at multiplicative places.
            return Ok(VerschiebungData {
                place: data.place.clone(),
                series_degree,
                p_series: Vec::new(),
                script_p: Vec::new(),
                n_v: 0,
                n_v_derivative: 0,
                support_ok: true,
                distinguished: vec![vec![], vec![]],
                distinguished_prec: vec![usize::MAX, usize::MAX],
                epsilon: Epsilon::One,
                certified: true,
            });
        }
        ReductionType::Good => {}
    }
    let n = series_degree.max(p * p);
    let ctx = LocalCtx::new(k, &data.place);
    if !data.minimal.iter().all(|x| ctx.is_integral(x)) {
        return Err(FormalError::NotMinimal(data.place.render(fq)));
    }
    let ps = mult_series_univariate(k, &data.minimal, p as u64, n);
    let support_ok = ps.iter().enumerate().all(|(i, c)| i % p == 0 || k.is_zero(c));
    let script_p: Vec<RatFunc> = (0..=n / p).map(|i| ps[p * i].clone()).collect();
    let z1 = &script_p[1];
    let Some(n_v) = ctx.ord(z1) else {
        return Err(FormalError::NonOrdinaryCurve);
    };
    // d𝒫/ds at 0 from the polynomial 𝒫(s) directly.
    let deriv = crate::gf_core::poly::deriv(k, &script_p);
    let n_v_derivative = deriv.first().and_then(|c| ctx.ord(c)).unwrap_or(i64::MAX);
    if n_v < 0 {
        return Err(FormalError::NotMinimal(data.place.render(fq)));
    }
    if let Some(g) = data.good {
        if g.ordinary != (n_v == 0) {
            return Err(FormalError::Internal(format!(
                "a_v = {} but n_v = {} at {}",
                g.a_v,
                n_v,
                data.place.render(fq)
            )));
        }
    }
    if n_v == 0 {
        let one = vec![ctx.res.one()];
        return Ok(VerschiebungData {
            place: data.place.clone(),
            series_degree: n,
            p_series: ps,
            script_p,
            n_v,
            n_v_derivative,
            support_ok,
            distinguished: vec![vec![], one],
            distinguished_prec: vec![usize::MAX, usize::MAX],
            epsilon: Epsilon::One,
            certified: true,
        });
    }
    // Height 2: 𝒫_p must be a unit.
    if ctx.ord(&script_p[p]) != Some(0) {
        return Err(FormalError::Internal(format!(
            "supersingular place {} with non-unit 𝒫_p",
            data.place.render(fq)
        )));
    }
    let l = n_v as usize + 1;
    let r = trunc_ring(&ctx, l);
    let mut m = (2 * p).max(n / p);
    let (dp, test) = loop {
        let g = local_script_p(&ctx, &data.minimal, l, m)?;
        let dp = weierstrass_prepare(&r, &g, p).ok_or_else(|| FormalError::Internal("preparation".into()))?;
        let test = root_test(&r, &dp, n_v as usize);
        if test.certified || m >= MAX_PREP_DEGREE {
            break (dp, test);
        }
        m = (2 * m).min(MAX_PREP_DEGREE);
    };
    Ok(VerschiebungData {
        place: data.place.clone(),
        series_degree: n,
        p_series: ps,
        script_p,
        n_v,
        n_v_derivative,
        support_ok,
        distinguished: dp.coeffs,
        distinguished_prec: dp.prec,
        epsilon: if test.certified { test.epsilon } else { Epsilon::Indeterminate },
        certified: test.certified,
    })
}

/// Coefficient of t^p in [p](t) for a model, to degree p only.
pub fn hasse_coefficient<R: Ring>(r: &R, a: &[R::E; 5], p: u32) -> R::E {
    mult_series_univariate(r, a, p as u64, p as usize)[p as usize].clone()
}

/// log_p |ker j_v| as an integer (q is a power of p).
pub fn ker_jv_log(
    k: &RatField,
    data: &LocalReductionData,
    vd: Option<&VerschiebungData>,
) -> Result<Option<i64>, FormalError> {
    let p = k.p() as i64;
    let log_q = k.fq().k() as i64;
    Ok(Some(match data.kind {
        ReductionType::MultiplicativeSplit => 0,
        ReductionType::MultiplicativeNonSplit => {
            if p == 2 && data.components_even == Some(true) {
                1
            } else {
                0
            }
        }
        ReductionType::Additive(_) => return Err(FormalError::Additive(data.place.render(k.fq()))),
        ReductionType::Good => {
            let g = data.good.ok_or_else(|| FormalError::Internal("missing a_v".into()))?;
            if g.ordinary {
                if p == 2 || g.a_v.rem_euclid(p) == 1 {
                    1
                } else {
                    0
                }
            } else {
                let vd = vd.ok_or(FormalError::MissingVerschiebungData)?;
                let Some(eps) = vd.epsilon.value() else {
                    return Ok(None);
                };
                eps + vd.n_v * data.place.degree() as i64 * log_q
            }
        }
    }))
}
