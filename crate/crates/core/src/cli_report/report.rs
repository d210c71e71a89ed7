//! Report assembly. Every field is deterministic in the input; the optional
//! timestamp is the only exception and is off by default.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formal_group::{ker_jv_log, FormalError};
use crate::gf_core::ratfunc::render_poly;
use crate::gf_core::{Place, RatField};
use crate::lambda_lab::{
    quotient_log_size, quotient_log_size_brute, recover_mu, render_generator, specialize, LambdaModule,
};
use crate::selmer_global::{
    classify_eth, discrepancy_from_survey, hbar, selmer_report, twist_from_surveys, CriterionStatus, Hbar,
    HbarOverride, Interval,
};
use crate::tate_local::{
    semistable_ordinary_guard, survey_cached, GuardViolation, PlaceStore, ReductionSurvey, SurveyError, SurveyOptions,
};

use super::input::{CurveBlock, CurveFile, LambdaBlock};
use super::TOOL_VERSION;

pub const SCHEMA_VERSION: u32 = 1;

/// Ring size up to which lambda rows are cross-checked by enumeration.
pub const BRUTE_BUDGET: u128 = 1 << 16;

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub series_degree: Option<usize>,
    pub scan_degree_bound: Option<u32>,
    pub timestamp: Option<u64>,
    pub hbar_override: Option<HbarOverride>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Violation,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub q: u64,
    pub modulus: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceRow {
    pub place: String,
    pub deg: u32,
    pub ord_disc: i64,
    pub kind: String,
    pub kodaira: String,
    pub c_v: u32,
    pub a_v: Option<i64>,
    pub ordinary: Option<bool>,
    pub n_v: Option<i64>,
    pub epsilon: Option<i64>,
    pub ker_log: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyInfo {
    pub deg_disc: i64,
    pub isotrivial: bool,
    pub semistable: bool,
    pub generically_ordinary: bool,
    pub ordinary_witness: Option<String>,
    pub scan_max_degree: Option<u32>,
    pub ordinary_scanned: usize,
    pub rows: Vec<PlaceRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identities {
    pub twist: Check,
    pub twist_rows: Vec<(String, i64, i64)>,
    pub discrepancy: Check,
    pub ordinary_trivial: Check,
    pub series_support: Check,
    pub main_term: Check,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EthInfo {
    pub s_b: Vec<String>,
    pub eth_prime: Vec<String>,
    pub eth: Vec<String>,
    pub eth0: Vec<String>,
    pub eth1: Vec<String>,
    pub kernel_field_is_base: Option<bool>,
    pub criterion: CriterionStatus,
    pub oracle_places: usize,
    pub oracle_disagreements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerInfo {
    pub main_term: Option<i64>,
    pub main_term_twist: Option<i64>,
    pub hbar: Hbar,
    pub eth0_size: usize,
    pub eth1_size: usize,
    pub selmer_interval: Interval,
    pub growth_interval: Interval,
    pub mu_rank_lower: Option<i64>,
    pub mu_rank_constant: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub name: String,
    pub model: String,
    pub status: Status,
    pub violations: Vec<String>,
    pub error: Option<String>,
    pub survey: Option<SurveyInfo>,
    pub identities: Option<Identities>,
    pub eth: Option<EthInfo>,
    pub selmer: Option<SelmerInfo>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub nu: u32,
    pub n: u32,
    pub log_size: u64,
    pub p_part: u64,
    pub deviation: u64,
    pub bound: u64,
    pub brute: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub name: String,
    pub d: u8,
    pub exponents: Vec<u32>,
    pub generators: Vec<String>,
    pub direction: Option<(u32, u32)>,
    pub specialized_generators: Option<Vec<String>>,
    pub rows: Vec<LambdaRow>,
    pub recovered: Vec<u32>,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub input_sha256: String,
    pub generated_at: Option<u64>,
    pub field: FieldInfo,
    pub series_degree: Option<usize>,
    pub scan_degree_bound: u32,
    pub curves: Vec<CurveReport>,
    pub lambdas: Vec<LambdaReport>,
}

impl Report {
    /// Human-readable failures, empty when everything passes.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.curves {
            match c.status {
                Status::Pass => {}
                Status::Violation => out.push(format!("curve {}: guard violation: {}", c.name, c.violations.join(", "))),
                Status::Fail | Status::Error => {
                    let mut why: Vec<String> = c.error.iter().cloned().collect();
                    if let Some(i) = &c.identities {
                        for (label, ch) in [
                            ("twist", &i.twist),
                            ("discrepancy", &i.discrepancy),
                            ("ordinary n_v", &i.ordinary_trivial),
                            ("[p]-series support", &i.series_support),
                            ("main term", &i.main_term),
                        ] {
                            if !ch.pass {
                                why.push(format!("{label}: {}", ch.detail));
                            }
                        }
                    }
                    if let Some(e) = &c.eth {
                        if e.criterion == CriterionStatus::Disagreement {
                            why.push(format!("ð₀ criterion disagrees at {}", e.oracle_disagreements.join(", ")));
                        }
                    }
                    out.push(format!("curve {}: {}", c.name, why.join("; ")));
                }
            }
        }
        for l in &self.lambdas {
            if !l.pass {
                out.push(format!(
                    "lambda {}: {}",
                    l.name,
                    l.error.clone().unwrap_or_else(|| "counting or recovery mismatch".into())
                ));
            }
        }
        out
    }

    pub fn has_internal_error(&self) -> bool {
        self.curves.iter().any(|c| c.status == Status::Error)
    }
}

fn survey_opts(o: &AnalyzeOptions, scan: bool) -> SurveyOptions {
    let d = SurveyOptions::default();
    SurveyOptions {
        scan_degree_bound: o.scan_degree_bound.unwrap_or(d.scan_degree_bound),
        series_degree: o.series_degree,
        scan,
    }
}

fn render_places(k: &RatField, v: &[Place]) -> Vec<String> {
    v.iter().map(|x| x.render(k.fq())).collect()
}

fn violation_text(k: &RatField, v: &GuardViolation) -> String {
    match v {
        GuardViolation::Additive(x) => format!("additive reduction at {}", x.render(k.fq())),
        GuardViolation::NonOrdinary => "generic fiber is not ordinary".into(),
        GuardViolation::NoGoodOrdinaryPlace => "no good ordinary place found".into(),
    }
}

fn survey_info(k: &RatField, s: &ReductionSurvey) -> Result<SurveyInfo, FormalError> {
    let mut rows = Vec::new();
    let mut push = |d: &crate::tate_local::LocalReductionData, vd: Option<&crate::formal_group::VerschiebungData>| {
        let ker_log = if d.kind.is_multiplicative() || vd.is_some() {
            ker_jv_log(k, d, vd)?
        } else {
            None
        };
        rows.push(PlaceRow {
            place: d.place.render(k.fq()),
            deg: d.place.degree(),
            ord_disc: d.ord_disc,
            kind: d.kind.label().to_string(),
            kodaira: d.kodaira.to_string(),
            c_v: d.c_v,
            a_v: d.good.map(|g| g.a_v),
            ordinary: d.good.map(|g| g.ordinary),
            n_v: vd.map(|x| x.n_v),
            epsilon: vd.and_then(|x| x.epsilon.value()),
            ker_log,
        });
        Ok::<(), FormalError>(())
    };
    for v in &s.bad {
        push(s.local(v).expect("bad place surveyed"), None)?;
    }
    for x in &s.supersingular {
        push(&x.data, Some(&x.vd))?;
    }
    Ok(SurveyInfo {
        deg_disc: s.deg_disc,
        isotrivial: s.j_constant,
        semistable: s.semistable,
        generically_ordinary: s.generically_ordinary,
        ordinary_witness: s.ordinary_witness.as_ref().map(|v| v.render(k.fq())),
        scan_max_degree: s.scan.as_ref().map(|x| x.max_degree),
        ordinary_scanned: s.ordinary_scanned.len(),
        rows,
    })
}

fn places(n: usize) -> String {
    if n == 1 {
        "1 place".into()
    } else {
        format!("{n} places")
    }
}

fn error_report(b: &CurveBlock, status: Status, e: String) -> CurveReport {
    CurveReport {
        name: b.name.clone(),
        model: b.model.render(),
        status,
        violations: Vec::new(),
        error: Some(e),
        survey: None,
        identities: None,
        eth: None,
        selmer: None,
    }
}

fn survey_error(b: &CurveBlock, e: SurveyError) -> CurveReport {
    let status = match &e {
        SurveyError::IncompleteScan { .. } => Status::Fail,
        SurveyError::Formal(FormalError::Internal(_)) => Status::Error,
        SurveyError::Formal(_) => Status::Fail,
    };
    error_report(b, status, e.to_string())
}

pub fn analyze_curve(b: &CurveBlock, o: &AnalyzeOptions, store: Option<&dyn PlaceStore>) -> CurveReport {
    let m = &b.model;
    let k = &m.k;
    let p = m.p() as i64;
    let s = match survey_cached(m, &survey_opts(o, true), store) {
        Ok(s) => s,
        Err(e) => return survey_error(b, e),
    };
    let survey = match survey_info(k, &s) {
        Ok(x) => x,
        Err(e) => return error_report(b, Status::Error, e.to_string()),
    };
    if let Err(v) = semistable_ordinary_guard(&s) {
        return CurveReport {
            name: b.name.clone(),
            model: m.render(),
            status: Status::Violation,
            violations: v.iter().map(|x| violation_text(k, x)).collect(),
            error: None,
            survey: Some(survey),
            identities: None,
            eth: None,
            selmer: None,
        };
    }
    let st = match survey_cached(&m.frobenius_twist(), &survey_opts(o, false), store) {
        Ok(s) => s,
        Err(e) => return survey_error(b, e),
    };
    let tw = twist_from_surveys(&s, &st);
    let dis = discrepancy_from_survey(&s).expect("guard checked");
    let nonzero_ord: Vec<String> = s
        .ordinary_scanned
        .iter()
        .filter(|(_, n)| *n != 0)
        .map(|(v, n)| format!("{}:{n}", v.render(k.fq())))
        .collect();
    let bad_support: Vec<String> = s
        .supersingular
        .iter()
        .filter(|x| !x.vd.support_ok)
        .map(|x| x.data.place.render(k.fq()))
        .collect();
    let cls = classify_eth(m, &s).expect("guard checked");
    let over = b.hbar.clone().or_else(|| o.hbar_override.clone());
    let h = hbar(&cls, m.p(), over.as_ref());
    let rep = selmer_report(&s, &cls, h).expect("guard checked");
    let log_q = rep.log_p_q;
    let num_t = (p - 1) * st.deg_disc;
    let main_twist = (num_t % 12 == 0).then_some(num_t / 12 * log_q);
    let main_ok = s.deg_disc % 12 == 0 && rep.main_term.is_some() && main_twist == rep.main_term.map(|x| p * x);
    let identities = Identities {
        twist: Check {
            pass: tw.pass,
            detail: format!("deg Δ = {} → {}", tw.deg, tw.deg_twist),
        },
        twist_rows: tw.rows.iter().map(|r| (r.place.render(k.fq()), r.ord, r.ord_twist)).collect(),
        discrepancy: Check {
            pass: dis.equal,
            detail: format!("{} = {}/12", dis.lhs, dis.rhs_times_12),
        },
        ordinary_trivial: Check {
            pass: nonzero_ord.is_empty(),
            detail: if nonzero_ord.is_empty() {
                places(s.ordinary_scanned.len())
            } else {
                nonzero_ord.join(", ")
            },
        },
        series_support: Check {
            pass: bad_support.is_empty(),
            detail: if bad_support.is_empty() {
                places(s.supersingular.len())
            } else {
                bad_support.join(", ")
            },
        },
        main_term: Check {
            pass: main_ok,
            detail: format!(
                "12 | {}; M = {}, M(twist) = {}",
                s.deg_disc,
                rep.main_term.map_or("-".into(), |x| x.to_string()),
                main_twist.map_or("-".into(), |x| x.to_string())
            ),
        },
    };
    let disagreements: Vec<String> = cls
        .oracle
        .iter()
        .filter(|r| !r.agrees())
        .map(|r| r.place.render(k.fq()))
        .collect();
    let eth = EthInfo {
        s_b: render_places(k, &cls.s_b),
        eth_prime: render_places(k, &cls.eth_prime),
        eth: render_places(k, &cls.eth),
        eth0: render_places(k, &cls.eth0),
        eth1: render_places(k, &cls.eth1),
        kernel_field_is_base: cls.kernel_field_is_base,
        criterion: cls.criterion,
        oracle_places: cls.oracle.len(),
        oracle_disagreements: disagreements,
    };
    let all_pass = tw.pass
        && dis.equal
        && identities.ordinary_trivial.pass
        && identities.series_support.pass
        && main_ok
        && cls.criterion != CriterionStatus::Disagreement;
    CurveReport {
        name: b.name.clone(),
        model: m.render(),
        status: if all_pass { Status::Pass } else { Status::Fail },
        violations: Vec::new(),
        error: None,
        survey: Some(survey),
        identities: Some(identities),
        eth: Some(eth),
        selmer: Some(SelmerInfo {
            main_term: rep.main_term,
            main_term_twist: main_twist,
            hbar: rep.hbar,
            eth0_size: rep.eth0_size,
            eth1_size: rep.eth1_size,
            selmer_interval: rep.selmer_interval,
            growth_interval: rep.growth_interval,
            mu_rank_lower: rep.mu_rank_lower,
            mu_rank_constant: rep.mu_rank_constant,
        }),
    }
}

fn lambda_rows(z: &LambdaModule, levels: u32, layers: u32) -> Result<Vec<LambdaRow>, crate::lambda_lab::LambdaError> {
    let mut rows = Vec::new();
    for nu in 1..=levels {
        for n in 0..=layers {
            let log_size = quotient_log_size(z, nu, n)?;
            let pn = (z.p as u64).pow(n);
            let p_part: u64 = z.alphas.iter().map(|&a| a.min(nu) as u64 * pn).sum();
            rows.push(LambdaRow {
                nu,
                n,
                log_size,
                p_part,
                deviation: log_size - p_part,
                bound: z.non_p_bound(nu),
                brute: quotient_log_size_brute(z, nu, n, BRUTE_BUDGET).ok(),
            });
        }
    }
    Ok(rows)
}

pub fn analyze_lambda(b: &LambdaBlock) -> LambdaReport {
    let z = &b.module;
    let modulus = z.modulus();
    let mut r = LambdaReport {
        name: b.name.clone(),
        d: z.d,
        exponents: z.alphas.clone(),
        generators: z.gens.iter().map(|g| render_generator(g, modulus)).collect(),
        direction: b.direction,
        specialized_generators: None,
        rows: Vec::new(),
        recovered: Vec::new(),
        error: None,
        pass: false,
    };
    let one = if z.d == 2 {
        match specialize(z, b.direction.expect("parser requires a direction")) {
            Ok(s) => {
                r.specialized_generators = Some(s.gens.iter().map(|g| render_generator(g, modulus)).collect());
                s
            }
            Err(e) => {
                r.error = Some(e.to_string());
                return r;
            }
        }
    } else {
        z.clone()
    };
    match lambda_rows(&one, b.levels.min(one.precision), b.layers) {
        Ok(rows) => r.rows = rows,
        Err(e) => {
            r.error = Some(e.to_string());
            return r;
        }
    }
    match recover_mu(&one, b.layers.max(1)) {
        Ok(a) => r.recovered = a,
        Err(e) => {
            r.error = Some(e.to_string());
            return r;
        }
    }
    let counts_ok = r
        .rows
        .iter()
        .all(|x| x.brute.is_none_or(|b| b == x.log_size) && x.deviation <= x.bound);
    r.pass = counts_ok && r.recovered == z.alphas && one.alphas == z.alphas;
    if !counts_ok {
        r.error = Some("quotient counts disagree with enumeration or exceed the non-p bound".into());
    } else if r.recovered != z.alphas {
        r.error = Some(format!("recovered {:?}, expected {:?}", r.recovered, z.alphas));
    }
    r
}

pub fn analyze(file: &CurveFile, input: &[u8], o: &AnalyzeOptions, store: Option<&dyn PlaceStore>) -> Report {
    let k = file.field.as_ref().expect("parsed file has a field");
    let f = k.fq();
    let curves: Vec<CurveReport> = file.curves.par_iter().map(|b| analyze_curve(b, o, store)).collect();
    let lambdas: Vec<LambdaReport> = file.lambdas.par_iter().map(analyze_lambda).collect();
    Report {
        schema: SCHEMA_VERSION,
        tool: format!("ftwist {TOOL_VERSION}"),
        input_sha256: super::cache::sha256_hex(input),
        generated_at: o.timestamp,
        field: FieldInfo {
            p: f.p(),
            q: f.q() as u64,
            modulus: if f.k() > 1 {
                render_poly(&crate::gf_core::make_field(f.p() as u64, 1).expect("prime"), f.modulus(), "u")
            } else {
                "-".into()
            },
        },
        series_degree: o.series_degree,
        scan_degree_bound: survey_opts(o, true).scan_degree_bound,
        curves,
        lambdas,
    }
}
