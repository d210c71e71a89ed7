//! Global identities and main-term calculators: the twist and discrepancy
//! identities, the ð-sets, ℏ over rational k, and the Selmer and μ bounds.

pub mod division;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf_core::Place;
use crate::tate_local::{
    semistable_ordinary_guard, survey_with, GuardViolation, ReductionSurvey, ReductionType, SurveyError, SurveyOptions,
};
use crate::weierstrass::WeierstrassModel;

pub use division::{kernel_field_is_base, oracle_rows, twist_torsion_discriminant, CriterionKind, OracleRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelmerError {
    #[error("guard violation: {0:?}")]
    Guard(Vec<GuardViolation>),
    #[error(transparent)]
    Survey(#[from] SurveyError),
}

fn guarded(s: &ReductionSurvey) -> Result<(), SelmerError> {
    semistable_ordinary_guard(s).map_err(SelmerError::Guard)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    /// Σ_{v ∈ S_ss} n_v·deg v from the formal-group scan.
    pub lhs: i64,
    /// (p−1)·deg Δ_{A/K}, from the Tate survey.
    pub rhs_times_12: i64,
    pub rhs: Option<i64>,
    pub equal: bool,
}

pub fn discrepancy_from_survey(s: &ReductionSurvey) -> Result<Discrepancy, SelmerError> {
    guarded(s)?;
    let lhs = s.ss_sum();
    let rhs_times_12 = (s.p as i64 - 1) * s.deg_disc;
    let rhs = (rhs_times_12 % 12 == 0).then_some(rhs_times_12 / 12);
    Ok(Discrepancy {
        lhs,
        rhs_times_12,
        rhs,
        equal: rhs == Some(lhs),
    })
}

/// Σ_{v∈S_ss} n_v·deg v against (p−1)·deg Δ/12.
pub fn discrepancy_check(m: &WeierstrassModel, opts: &SurveyOptions) -> Result<Discrepancy, SelmerError> {
    let opts = SurveyOptions {
        scan: true,
        ..opts.clone()
    };
    discrepancy_from_survey(&survey_with(m, &opts)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRow {
    pub place: Place,
    pub ord: i64,
    pub ord_twist: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistCheck {
    pub rows: Vec<TwistRow>,
    pub deg: i64,
    pub deg_twist: i64,
    pub pass: bool,
}

/// ord_v(Δ_min) of A^{(p)} against p·ord_v(Δ_min) of A, place by place.
pub fn twist_check(m: &WeierstrassModel, opts: &SurveyOptions) -> Result<TwistCheck, SelmerError> {
    let opts = SurveyOptions {
        scan: false,
        ..opts.clone()
    };
    let s = survey_with(m, &opts)?;
    guarded(&s)?;
    let st = survey_with(&m.frobenius_twist(), &opts)?;
    Ok(twist_from_surveys(&s, &st))
}

pub fn twist_from_surveys(s: &ReductionSurvey, st: &ReductionSurvey) -> TwistCheck {
    let p = s.p as i64;
    let d = s.disc_divisor();
    let dt = st.disc_divisor();
    let mut places: Vec<Place> = d.keys().chain(dt.keys()).cloned().collect();
    places.sort();
    places.dedup();
    let rows: Vec<TwistRow> = places
        .into_iter()
        .map(|v| TwistRow {
            ord: d.get(&v).copied().unwrap_or(0),
            ord_twist: dt.get(&v).copied().unwrap_or(0),
            place: v,
        })
        .collect();
    let pass = rows.iter().all(|r| r.ord_twist == p * r.ord) && st.deg_disc == p * s.deg_disc;
    TwistCheck {
        rows,
        deg: s.deg_disc,
        deg_twist: st.deg_disc,
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceFact {
    pub place: Place,
    pub degree: u32,
    pub split: bool,
    pub components_even: Option<bool>,
    pub in_eth0: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriterionStatus {
    /// p = 2: k = K, so ð₀ = ð.
    Exact,
    /// Local rule agrees with the division-polynomial oracle at every tested place.
    Validated,
    /// No oracle available (p ≥ 5) or no place to test.
    Unvalidated,
    /// The oracle disagrees somewhere; ð₀ should not be trusted.
    Disagreement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EthClassification {
    pub s_b: Vec<Place>,
    pub eth_prime: Vec<Place>,
    pub eth: Vec<Place>,
    pub eth0: Vec<Place>,
    /// Always ∅ for L ⊇ the constant Z_p-extension.
    pub eth1: Vec<Place>,
    pub facts: Vec<PlaceFact>,
    /// Whether k = K (None: undecided).
    pub kernel_field_is_base: Option<bool>,
    pub criterion: CriterionStatus,
    pub oracle: Vec<OracleRow>,
}

/// ð′, ð, ð₀ and ð₁. At p = 3 the local ð₀ rule is checked against the
/// 3-division polynomial at every multiplicative and scanned good place.
pub fn classify_eth(m: &WeierstrassModel, s: &ReductionSurvey) -> Result<EthClassification, SelmerError> {
    guarded(s)?;
    let p = s.p;
    let mut facts = Vec::new();
    let mut eth0 = Vec::new();
    for v in &s.eth {
        let d = s.local(v).expect("bad place in survey");
        let split = d.kind == ReductionType::MultiplicativeSplit;
        let in_eth0 = split || p == 2;
        if in_eth0 {
            eth0.push(v.clone());
        }
        facts.push(PlaceFact {
            place: v.clone(),
            degree: v.degree(),
            split,
            components_even: d.components_even,
            in_eth0,
        });
    }
    let mut tested: Vec<_> = s.places.clone();
    for ss in &s.supersingular {
        if !tested.iter().any(|d| d.place == ss.data.place) {
            tested.push(ss.data.clone());
        }
    }
    let eps: Vec<(Place, Option<bool>)> = s
        .supersingular
        .iter()
        .map(|x| (x.data.place.clone(), x.vd.epsilon.value().map(|e| e == 1)))
        .collect();
    let mut ordinary_extra: Vec<_> = Vec::new();
    for (v, _) in &s.ordinary_scanned {
        if !tested.iter().any(|d| &d.place == v) {
            ordinary_extra.push(crate::tate_local::reduction_type(m, v));
        }
    }
    tested.extend(ordinary_extra);
    tested.sort_by(|a, b| a.place.cmp(&b.place));
    let oracle = oracle_rows(m, &tested, &eps);
    let criterion = match p {
        2 => CriterionStatus::Exact,
        3 if oracle.iter().any(|r| !r.agrees()) => CriterionStatus::Disagreement,
        3 if !oracle.is_empty() => CriterionStatus::Validated,
        _ => CriterionStatus::Unvalidated,
    };
    Ok(EthClassification {
        s_b: s.bad.clone(),
        eth_prime: s.eth_prime.clone(),
        eth: s.eth.clone(),
        eth0,
        eth1: Vec::new(),
        facts,
        kernel_field_is_base: kernel_field_is_base(m),
        criterion,
        oracle,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hbar {
    Exact(i64),
    Override { value: i64, justification: String },
    Unknown,
}

impl Hbar {
    pub fn value(&self) -> Option<i64> {
        match self {
            Hbar::Exact(h) | Hbar::Override { value: h, .. } => Some(*h),
            Hbar::Unknown => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HbarOverride {
    pub value: i64,
    pub justification: String,
}

/// ℏ when k = K: unramified Z/p-extensions of F_q(t) are constant, and the
/// constant one is trivial at v iff p | deg v.
pub fn hbar(cls: &EthClassification, p: u32, over: Option<&HbarOverride>) -> Hbar {
    if let Some(o) = over {
        return Hbar::Override {
            value: o.value,
            justification: o.justification.clone(),
        };
    }
    if cls.kernel_field_is_base != Some(true) {
        return Hbar::Unknown;
    }
    let all = cls.eth.iter().all(|v| v.degree() % p == 0);
    Hbar::Exact(i64::from(all))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerReport {
    pub p: u32,
    pub q: u64,
    pub log_p_q: i64,
    pub deg_disc: i64,
    /// (p−1)·deg Δ/12·log_p q; None if 12 ∤ (p−1)·deg Δ.
    pub main_term: Option<i64>,
    pub isotrivial: bool,
    pub hbar: Hbar,
    pub eth0_size: usize,
    pub eth1_size: usize,
    /// Range of log_p |Sel_p(A^{(p)}/K)|.
    pub selmer_interval: Interval,
    /// Range of log_p|Sel_{p^{ν+1}}(A^{(p)}/K)| − log_p|Sel_{p^ν}(A/K)|.
    pub growth_interval: Interval,
    /// Lower bound for the μ-rank of X^{(p)}.
    pub mu_rank_lower: Option<i64>,
    /// μ-rank of X^{(p)} when L contains the constant Z_p-extension.
    pub mu_rank_constant: Option<i64>,
    pub criterion: CriterionStatus,
}

pub fn selmer_report(s: &ReductionSurvey, cls: &EthClassification, h: Hbar) -> Result<SelmerReport, SelmerError> {
    guarded(s)?;
    let p = s.p as i64;
    let log_p_q = (s.q as f64).log(p as f64).round() as i64;
    let num = (p - 1) * s.deg_disc;
    let main_term = (num % 12 == 0).then_some(num / 12 * log_p_q);
    let e0 = cls.eth0.len() as i64;
    let e1 = cls.eth1.len() as i64;
    let hv = h.value();
    let selmer_interval = Interval {
        // A group order; the correction term can push the estimate below 0.
        lower: main_term.map(|m| (m - e0).max(0)),
        upper: main_term.zip(hv).map(|(m, h)| m + 2 * h + 1 + e0),
    };
    let growth_interval = Interval {
        lower: main_term.zip(hv).map(|(m, h)| m - 2 * h - 3 * e0),
        upper: selmer_interval.upper,
    };
    Ok(SelmerReport {
        p: s.p,
        q: s.q,
        log_p_q,
        deg_disc: s.deg_disc,
        main_term,
        isotrivial: s.j_constant,
        hbar: h,
        eth0_size: cls.eth0.len(),
        eth1_size: cls.eth1.len(),
        selmer_interval,
        growth_interval,
        mu_rank_lower: main_term.map(|m| m - e1),
        mu_rank_constant: main_term,
        criterion: cls.criterion,
    })
}

/// Elementary μ-invariants of X from those of X^{(p)}: (α_i) ↦ (α_i − 1) for α_i > 1.
pub fn mu_shift(alphas: &[u32]) -> Vec<u32> {
    let mut a = alphas.to_vec();
    a.sort_unstable_by(|x, y| y.cmp(x));
    a.into_iter().filter(|&x| x > 1).map(|x| x - 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::{make_field, RatField};

    #[test]
    fn mu_shift_drops_ones() {
        assert_eq!(mu_shift(&[3, 2, 1, 1]), vec![2, 1]);
        assert_eq!(mu_shift(&[1, 3, 1, 2]), vec![2, 1]);
        assert!(mu_shift(&[]).is_empty());
    }

    #[test]
    fn constant_ordinary_curve() {
        let k = RatField::new(make_field(3, 1).unwrap());
        let m = WeierstrassModel::from_polys(&k, [vec![], vec![1], vec![], vec![], vec![1]]).unwrap();
        let s = survey_with(&m, &SurveyOptions::default()).unwrap();
        let d = discrepancy_from_survey(&s).unwrap();
        assert_eq!((d.lhs, d.rhs), (0, Some(0)));
        let cls = classify_eth(&m, &s).unwrap();
        assert!(cls.eth.is_empty());
        let r = selmer_report(&s, &cls, hbar(&cls, 3, None)).unwrap();
        assert_eq!(r.main_term, Some(0));
        assert!(r.isotrivial);
        let t = twist_check(&m, &SurveyOptions::default()).unwrap();
        assert!(t.pass && t.rows.is_empty());
    }

    #[test]
    fn hbar_rules() {
        let base = EthClassification {
            s_b: vec![Place::Finite(vec![0, 1])],
            eth_prime: vec![],
            eth: vec![Place::Finite(vec![0, 1])],
            eth0: vec![Place::Finite(vec![0, 1])],
            eth1: vec![],
            facts: vec![],
            kernel_field_is_base: Some(true),
            criterion: CriterionStatus::Exact,
            oracle: vec![],
        };
        assert_eq!(hbar(&base, 2, None), Hbar::Exact(0));
        let mut c = base.clone();
        c.eth = vec![Place::Finite(vec![1, 1, 1])];
        assert_eq!(hbar(&c, 2, None), Hbar::Exact(1));
        c.eth.clear();
        assert_eq!(hbar(&c, 2, None), Hbar::Exact(1));
        c.kernel_field_is_base = Some(false);
        assert_eq!(hbar(&c, 3, None), Hbar::Unknown);
        let o = HbarOverride {
            value: 2,
            justification: "class number computation".into(),
        };
        assert_eq!(hbar(&c, 3, Some(&o)).value(), Some(2));
    }
}
