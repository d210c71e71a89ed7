//! Exhaustive search for semistable, ordinary, non-isotrivial models with
//! polynomial coefficients of bounded degree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gf_core::{FiniteField, RatField};
use crate::tate_local::{semistable_ordinary_guard, survey_with, SurveyOptions};

use super::{WeierError, WeierstrassModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub curves: Vec<String>,
    /// Index of the last candidate examined, plus one.
    pub examined: u64,
    /// True if the budget ran out before the space or the limit did.
    pub exhausted: bool,
}

const BLOCK: u64 = 256;

/// Candidates are indexed in base q^(D+1) per coefficient, a1 least significant;
/// within a coefficient, the constant term is least significant.
pub fn candidate(k: &RatField, max_degree: usize, mut idx: u64) -> [Vec<u32>; 5] {
    let f = k.fq();
    let q = f.q() as u64;
    let mut out: [Vec<u32>; 5] = Default::default();
    for c in out.iter_mut() {
        let mut v = Vec::with_capacity(max_degree + 1);
        for _ in 0..=max_degree {
            v.push(f.element((idx % q) as u128));
            idx /= q;
        }
        *c = v;
    }
    out
}

/// Models passing the semistable-ordinary guard with j non-constant, in
/// candidate order. Stops after `limit` hits or `budget` candidates.
pub fn find_semistable_ordinary_examples(
    k: &RatField,
    max_degree: usize,
    limit: usize,
    budget: u64,
) -> Result<SearchResult, WeierError> {
    let q = k.fq().q() as u128;
    let space = q
        .checked_pow(5 * (max_degree as u32 + 1))
        .filter(|&s| s <= u64::MAX as u128)
        .ok_or(WeierError::SizeBound(q))? as u64;
    let end = space.min(budget);
    let opts = SurveyOptions {
        scan: false,
        ..SurveyOptions::default()
    };
    let mut curves = Vec::new();
    let mut start = 0u64;
    let chunk = BLOCK * rayon::current_num_threads().max(1) as u64;
    while start < end && curves.len() < limit {
        let stop = (start + chunk).min(end);
        let hits: Vec<(u64, String)> = (start..stop)
            .into_par_iter()
            .filter_map(|i| {
                let m = WeierstrassModel::from_polys(k, candidate(k, max_degree, i)).ok()?;
                if m.is_isotrivial() {
                    return None;
                }
                let s = survey_with(&m, &opts).ok()?;
                semistable_ordinary_guard(&s).ok()?;
                Some((i, m.render()))
            })
            .collect();
        for (i, c) in hits {
            if curves.len() == limit {
                return Ok(SearchResult {
                    curves,
                    examined: i,
                    exhausted: false,
                });
            }
            curves.push(c);
        }
        start = stop;
    }
    Ok(SearchResult {
        curves,
        examined: start,
        exhausted: start == budget && budget < space && start < space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::make_field;

    #[test]
    fn search_is_deterministic_and_filters() {
        let k = RatField::new(make_field(2, 1).unwrap());
        let a = find_semistable_ordinary_examples(&k, 1, 3, 1 << 10).unwrap();
        let b = find_semistable_ordinary_examples(&k, 1, 3, 1 << 10).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.curves.len(), 3);
        let small = find_semistable_ordinary_examples(&k, 1, 100, 16).unwrap();
        assert!(small.exhausted);
        assert_eq!(small.examined, 16);
    }
}
