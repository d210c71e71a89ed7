//! Global reduction survey: bad places, deg Δ_{A/K}, the supersingular scan
//! and the semistable-ordinary guard.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formal_group::{default_series_degree, hasse_coefficient, verschiebung_data, FormalError, VerschiebungData};
use crate::gf_core::{places_of_degree, poly, LocalCtx, Place, RatFunc, Ring};
use crate::weierstrass::count::POINT_COUNT_BOUND;
use crate::weierstrass::WeierstrassModel;

use super::{reduction_type, LocalReductionData, ReductionType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurveyError {
    #[error("supersingular scan reached degree {bound} with Σ n_v·deg v = {found} < {target}")]
    IncompleteScan { found: i64, target: i64, bound: u32 },
    #[error(transparent)]
    Formal(#[from] FormalError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyOptions {
    pub scan_degree_bound: u32,
    pub series_degree: Option<usize>,
    /// Skip the supersingular scan (the guard does not need it).
    pub scan: bool,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            scan_degree_bound: 8,
            series_degree: None,
            scan: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsPlace {
    pub data: LocalReductionData,
    pub vd: VerschiebungData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    /// (p−1)·deg Δ/12, when an integer.
    pub target: Option<i64>,
    /// Σ_{v ∈ S_ss} n_v·deg v over the places found.
    pub found: i64,
    /// Every place of degree ≤ this bound (and ∞) was examined.
    pub max_degree: u32,
    /// max_degree reaches the target, so no place can have been missed.
    pub exhaustive: bool,
    /// exhaustive, or the places found already account for the target.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSurvey {
    pub p: u32,
    pub q: u64,
    /// Candidate places (divisors of Δ, c4 and coefficient denominators, and ∞).
    pub places: Vec<LocalReductionData>,
    pub deg_disc: i64,
    pub bad: Vec<Place>,
    /// ð′: p = 2, non-split multiplicative with even component group.
    pub eth_prime: Vec<Place>,
    /// ð = S_b ∖ ð′.
    pub eth: Vec<Place>,
    pub additive: Vec<Place>,
    pub semistable: bool,
    pub j_constant: bool,
    /// Coefficient of t^p in [p](t) is nonzero.
    pub generically_ordinary: bool,
    pub ordinary_witness: Option<Place>,
    pub supersingular: Vec<SsPlace>,
    /// Good ordinary places examined by the scan, with n_v from the [p]-series.
    pub ordinary_scanned: Vec<(Place, i64)>,
    pub scan: Option<ScanSummary>,
}

impl ReductionSurvey {
    pub fn local(&self, v: &Place) -> Option<&LocalReductionData> {
        self.places.iter().find(|d| &d.place == v)
    }

    /// Σ_{v ∈ S_ss} n_v·deg v.
    pub fn ss_sum(&self) -> i64 {
        self.supersingular
            .iter()
            .map(|s| s.vd.n_v * s.data.place.degree() as i64)
            .sum()
    }

    /// ord_v(Δ_min) for every place with positive order.
    pub fn disc_divisor(&self) -> BTreeMap<Place, i64> {
        self.places
            .iter()
            .filter(|d| d.ord_disc != 0)
            .map(|d| (d.place.clone(), d.ord_disc))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GuardViolation {
    Additive(Place),
    NonOrdinary,
    NoGoodOrdinaryPlace,
}

/// Passes iff there is no additive place and the generic fiber is ordinary.
pub fn semistable_ordinary_guard(s: &ReductionSurvey) -> Result<(), Vec<GuardViolation>> {
    let mut v: Vec<GuardViolation> = s.additive.iter().cloned().map(GuardViolation::Additive).collect();
    if !s.generically_ordinary {
        v.push(GuardViolation::NonOrdinary);
    } else if s.ordinary_witness.is_none() {
        v.push(GuardViolation::NoGoodOrdinaryPlace);
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

fn candidate_places(m: &WeierstrassModel) -> Vec<Place> {
    let k = &m.k;
    let f = k.fq();
    let inv = m.b_c_invariants();
    let mut polys: Vec<Vec<u32>> = vec![inv.disc.num.clone(), inv.disc.den.clone(), inv.c4.num.clone(), inv.c4.den.clone()];
    polys.extend(m.a.iter().map(|x| x.den.clone()));
    let mut out: Vec<Place> = polys
        .iter()
        .filter(|g| poly::deg(g) > 0)
        .flat_map(|g| poly::factor(f, g).unwrap_or_default())
        .map(|(g, _)| Place::Finite(g))
        .collect();
    out.push(Place::Infinity);
    out.sort();
    out.dedup();
    out
}

/// Per-place persistence for the expensive local computations.
pub trait PlaceStore: Sync {
    fn reduction(&self, m: &WeierstrassModel, v: &Place) -> Option<LocalReductionData>;
    fn put_reduction(&self, m: &WeierstrassModel, d: &LocalReductionData);
    fn verschiebung(&self, m: &WeierstrassModel, v: &Place, n: usize) -> Option<VerschiebungData>;
    fn put_verschiebung(&self, m: &WeierstrassModel, vd: &VerschiebungData);
}

fn local_at(m: &WeierstrassModel, v: &Place, store: Option<&dyn PlaceStore>) -> LocalReductionData {
    if let Some(d) = store.and_then(|s| s.reduction(m, v)) {
        return d;
    }
    let d = reduction_type(m, v);
    if let Some(s) = store {
        s.put_reduction(m, &d);
    }
    d
}

fn verschiebung_at(
    m: &WeierstrassModel,
    d: &LocalReductionData,
    n: usize,
    store: Option<&dyn PlaceStore>,
) -> Result<VerschiebungData, FormalError> {
    if let Some(vd) = store.and_then(|s| s.verschiebung(m, &d.place, n)) {
        return Ok(vd);
    }
    let vd = verschiebung_data(&m.k, d, n)?;
    if let Some(s) = store {
        s.put_verschiebung(m, &vd);
    }
    Ok(vd)
}

/// Full survey with default options.
pub fn survey(m: &WeierstrassModel) -> Result<ReductionSurvey, SurveyError> {
    survey_with(m, &SurveyOptions::default())
}

/// Largest degree searched for a good ordinary witness place.
const WITNESS_DEGREE_BOUND: u32 = 8;

pub fn survey_with(m: &WeierstrassModel, opts: &SurveyOptions) -> Result<ReductionSurvey, SurveyError> {
    survey_cached(m, opts, None)
}

pub fn survey_cached(
    m: &WeierstrassModel,
    opts: &SurveyOptions,
    store: Option<&dyn PlaceStore>,
) -> Result<ReductionSurvey, SurveyError> {
    let k = &m.k;
    let fq = k.fq();
    let p = m.p();
    let q = fq.q() as u64;
    let cands = candidate_places(m);
    let places: Vec<LocalReductionData> = cands.par_iter().map(|v| local_at(m, v, store)).collect();
    let deg_disc: i64 = places.iter().map(|d| d.ord_disc * d.place.degree() as i64).sum();
    let bad: Vec<Place> = places.iter().filter(|d| d.ord_disc > 0).map(|d| d.place.clone()).collect();
    let additive: Vec<Place> = places
        .iter()
        .filter(|d| matches!(d.kind, ReductionType::Additive(_)))
        .map(|d| d.place.clone())
        .collect();
    let eth_prime: Vec<Place> = places
        .iter()
        .filter(|d| p == 2 && d.kind == ReductionType::MultiplicativeNonSplit && d.components_even == Some(true))
        .map(|d| d.place.clone())
        .collect();
    let eth: Vec<Place> = bad.iter().filter(|v| !eth_prime.contains(v)).cloned().collect();
    let semistable = additive.is_empty();
    let j_constant = m.is_isotrivial();
    let generically_ordinary = !k.is_zero(&hasse_coefficient(k, &m.a, p));

    let mut ordinary_witness = places.iter().find(|d| d.is_good_ordinary()).map(|d| d.place.clone());
    if ordinary_witness.is_none() && generically_ordinary {
        'outer: for d in 1..=WITNESS_DEGREE_BOUND {
            if (q as u128).pow(d) > POINT_COUNT_BOUND {
                break;
            }
            let mut list = places_of_degree(fq, d);
            if d == 1 {
                list.push(Place::Infinity);
            }
            for v in list {
                if cands.contains(&v) {
                    continue;
                }
                if local_at(m, &v, store).is_good_ordinary() {
                    ordinary_witness = Some(v);
                    break 'outer;
                }
            }
        }
    }

    let mut s = ReductionSurvey {
        p,
        q,
        places,
        deg_disc,
        bad,
        eth_prime,
        eth,
        additive,
        semistable,
        j_constant,
        generically_ordinary,
        ordinary_witness,
        supersingular: Vec::new(),
        ordinary_scanned: Vec::new(),
        scan: None,
    };
    if opts.scan && semistable && generically_ordinary {
        scan_supersingular(m, &mut s, opts, store)?;
    }
    Ok(s)
}

fn scan_supersingular(
    m: &WeierstrassModel,
    s: &mut ReductionSurvey,
    opts: &SurveyOptions,
    store: Option<&dyn PlaceStore>,
) -> Result<(), SurveyError> {
    let k = &m.k;
    let fq = k.fq();
    let p = s.p;
    let n = opts.series_degree.unwrap_or(default_series_degree(p));
    let num = (p as i64 - 1) * s.deg_disc;
    let target = (num % 12 == 0).then_some(num / 12);
    // Places with n_v ≥ 1 contribute at least deg v, so degree ≤ target suffices.
    let reach = target.unwrap_or(num / 12 + 1).max(1) as u32;
    let mut max_degree = 0;
    let mut to_check: Vec<LocalReductionData> = s.places.iter().filter(|d| d.is_good()).cloned().collect();
    for d in 1..=reach.min(opts.scan_degree_bound) {
        if (s.q as u128).pow(d) > POINT_COUNT_BOUND {
            break;
        }
        let mut list = places_of_degree(fq, d);
        if d == 1 {
            list.push(Place::Infinity);
        }
        let fresh: Vec<Place> = list.into_iter().filter(|v| s.local(v).is_none()).collect();
        let mut datas: Vec<LocalReductionData> = fresh.par_iter().map(|v| local_at(m, v, store)).collect();
        to_check.append(&mut datas);
        max_degree = d;
    }
    to_check.sort_by(|a, b| a.place.cmp(&b.place));
    type Row = Result<(LocalReductionData, Option<VerschiebungData>, Option<i64>), FormalError>;
    let rows: Vec<Row> = to_check
        .into_par_iter()
        .map(|d| -> Row {
            if !d.is_good() {
                return Ok((d, None, None));
            }
            if d.is_supersingular() {
                let vd = verschiebung_at(m, &d, n, store)?;
                Ok((d, Some(vd), None))
            } else if d.is_good_ordinary() {
                let ctx = LocalCtx::new(k, &d.place);
                let h: RatFunc = hasse_coefficient(k, &d.minimal, p);
                let nv = ctx.ord(&h).unwrap_or(i64::MAX);
                Ok((d, None, Some(nv)))
            } else {
                Ok((d, None, None))
            }
        })
        .collect();
    for row in rows {
        let (d, vd, nv) = row?;
        if let Some(vd) = vd {
            s.supersingular.push(SsPlace { data: d, vd });
        } else if let Some(nv) = nv {
            s.ordinary_scanned.push((d.place.clone(), nv));
        }
    }
    let found = s.ss_sum();
    let exhaustive = target.is_some_and(|t| max_degree as i64 >= t);
    let complete = exhaustive || target == Some(found);
    s.scan = Some(ScanSummary {
        target,
        found,
        max_degree,
        exhaustive,
        complete,
    });
    if let Some(t) = target {
        if found < t && (max_degree as i64) < t {
            return Err(SurveyError::IncompleteScan {
                found,
                target: t,
                bound: max_degree,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::{make_field, RatField};

    #[test]
    fn char2_example_survey() {
        let k = RatField::new(make_field(2, 1).unwrap());
        let m = WeierstrassModel::from_polys(&k, [vec![0, 1], vec![], vec![1], vec![], vec![]]).unwrap();
        let s = survey(&m).unwrap();
        assert_eq!(s.deg_disc % 12, 0);
        assert!(s.semistable);
        assert!(semistable_ordinary_guard(&s).is_ok());
        let scan = s.scan.clone().unwrap();
        assert_eq!(scan.target, Some(s.deg_disc / 12));
        assert_eq!(scan.found, scan.target.unwrap());
    }

    #[test]
    fn constant_supersingular_violation() {
        let k = RatField::new(make_field(3, 1).unwrap());
        let m = WeierstrassModel::from_polys(&k, [vec![], vec![], vec![], vec![1], vec![]]).unwrap();
        let s = survey(&m).unwrap();
        assert_eq!(s.deg_disc, 0);
        assert!(s.bad.is_empty());
        assert_eq!(semistable_ordinary_guard(&s), Err(vec![GuardViolation::NonOrdinary]));
    }

    #[test]
    fn additive_violation() {
        let k = RatField::new(make_field(5, 1).unwrap());
        let m = WeierstrassModel::from_polys(&k, [vec![], vec![], vec![], vec![], vec![0, 1]]).unwrap();
        let s = survey(&m).unwrap();
        let g = semistable_ordinary_guard(&s).unwrap_err();
        assert!(g.contains(&GuardViolation::Additive(Place::Finite(vec![0, 1]))));
    }
}
