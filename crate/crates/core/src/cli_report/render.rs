//! Plain-text rendering of a [`Report`].

use std::fmt::Write;

use crate::selmer_global::{CriterionStatus, Hbar, Interval};

use super::report::{Check, CurveReport, LambdaReport, PlaceRow, Report, Status};

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".into(), |v| v.to_string())
}

fn interval(i: &Interval) -> String {
    format!("[{}, {}]", opt(&i.lower), opt(&i.upper))
}

fn set(v: &[String]) -> String {
    if v.is_empty() {
        "∅".into()
    } else {
        format!("{{{}}}", v.join(", "))
    }
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Violation => "GUARD VIOLATION",
        Status::Error => "ERROR",
    }
}

fn check(out: &mut String, label: &str, c: &Check) {
    let _ = writeln!(out, "  {:<20} {} ({})", label, if c.pass { "ok" } else { "FAILED" }, c.detail);
}

fn table(out: &mut String, rows: &[PlaceRow]) {
    let w = rows.iter().map(|r| r.place.chars().count()).max().unwrap_or(0).max(5);
    let _ = writeln!(
        out,
        "  {:<w$} {:>3} {:>5} {:<9} {:<6} {:>4} {:>4} {:>4} {:>3} {:>4}",
        "place", "deg", "ordΔ", "type", "kod", "c_v", "a_v", "n_v", "ε", "ker"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "  {:<w$} {:>3} {:>5} {:<9} {:<6} {:>4} {:>4} {:>4} {:>3} {:>4}",
            r.place,
            r.deg,
            r.ord_disc,
            r.kind,
            r.kodaira,
            r.c_v,
            opt(&r.a_v),
            opt(&r.n_v),
            opt(&r.epsilon),
            opt(&r.ker_log)
        );
    }
}

fn curve(out: &mut String, c: &CurveReport) {
    let _ = writeln!(out, "curve {}: {}", c.name, status(c.status));
    let _ = writeln!(out, "  model  {}", c.model);
    if let Some(e) = &c.error {
        let _ = writeln!(out, "  error  {e}");
    }
    for v in &c.violations {
        let _ = writeln!(out, "  guard  {v}");
    }
    if let Some(s) = &c.survey {
        let _ = writeln!(
            out,
            "  deg Δ_min = {}  semistable = {}  ordinary = {}  isotrivial = {}  witness = {}",
            s.deg_disc,
            s.semistable,
            s.generically_ordinary,
            s.isotrivial,
            opt(&s.ordinary_witness)
        );
        if let Some(d) = s.scan_max_degree {
            let _ = writeln!(out, "  scanned good places up to degree {d} ({} ordinary)", s.ordinary_scanned);
        }
        if !s.rows.is_empty() {
            table(out, &s.rows);
        }
    }
    if let Some(i) = &c.identities {
        check(out, "twist ord ×p", &i.twist);
        check(out, "Σ n_v deg v", &i.discrepancy);
        check(out, "ordinary n_v = 0", &i.ordinary_trivial);
        check(out, "[p]-series support", &i.series_support);
        check(out, "main term", &i.main_term);
    }
    if let Some(e) = &c.eth {
        let _ = writeln!(out, "  S_B = {}  ð' = {}  ð = {}", set(&e.s_b), set(&e.eth_prime), set(&e.eth));
        let _ = writeln!(out, "  ð₀ = {}  ð₁ = {}", set(&e.eth0), set(&e.eth1));
        let crit = match e.criterion {
            CriterionStatus::Exact => "exact".to_string(),
            CriterionStatus::Validated => format!("validated against division polynomial at {} places", e.oracle_places),
            CriterionStatus::Unvalidated => "derived, unvalidated".to_string(),
            CriterionStatus::Disagreement => format!("DISAGREES at {}", e.oracle_disagreements.join(", ")),
        };
        let _ = writeln!(out, "  ð₀ criterion (derived): {crit}; k = K: {}", opt(&e.kernel_field_is_base));
    }
    if let Some(s) = &c.selmer {
        let h = match &s.hbar {
            Hbar::Exact(v) => v.to_string(),
            Hbar::Override { value, justification } => format!("{value} (override: {justification})"),
            Hbar::Unknown => "unknown".into(),
        };
        let _ = writeln!(out, "  M = {}  M(twist) = {}  ℏ = {h}", opt(&s.main_term), opt(&s.main_term_twist));
        let _ = writeln!(out, "  log_p |Sel_p(twist)| ∈ {}", interval(&s.selmer_interval));
        let _ = writeln!(out, "  Selmer growth ∈ {}", interval(&s.growth_interval));
        let _ = writeln!(
            out,
            "  μ-rank ≥ {}  (constant-curve bound {})",
            opt(&s.mu_rank_lower),
            opt(&s.mu_rank_constant)
        );
    }
}

fn lambda(out: &mut String, l: &LambdaReport) {
    let _ = writeln!(out, "lambda {}: {}", l.name, if l.pass { "PASS" } else { "FAIL" });
    let _ = writeln!(out, "  d = {}  exponents = {:?}", l.d, l.exponents);
    for g in &l.generators {
        let _ = writeln!(out, "  generator {g}");
    }
    if let Some((a, b)) = l.direction {
        let _ = writeln!(out, "  direction ({a}, {b})");
    }
    if let Some(gs) = &l.specialized_generators {
        for g in gs {
            let _ = writeln!(out, "  specialized {g}");
        }
    }
    if let Some(e) = &l.error {
        let _ = writeln!(out, "  error  {e}");
    }
    if !l.rows.is_empty() {
        let _ = writeln!(out, "  {:>3} {:>3} {:>8} {:>8} {:>6} {:>6} {:>8}", "ν", "n", "log|Q|", "p-part", "dev", "bound", "brute");
        for r in &l.rows {
            let _ = writeln!(
                out,
                "  {:>3} {:>3} {:>8} {:>8} {:>6} {:>6} {:>8}",
                r.nu,
                r.n,
                r.log_size,
                r.p_part,
                r.deviation,
                r.bound,
                opt(&r.brute)
            );
        }
        let _ = writeln!(out, "  recovered exponents {:?}", l.recovered);
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} (report schema {})", r.tool, r.schema);
    let _ = writeln!(out, "input sha256 {}", r.input_sha256);
    if let Some(t) = r.generated_at {
        let _ = writeln!(out, "generated at {t}");
    }
    let _ = writeln!(out, "field F_{} (p = {}, modulus {})", r.field.q, r.field.p, r.field.modulus);
    let _ = writeln!(
        out,
        "series degree {}  scan degree bound {}",
        r.series_degree.map_or("auto".into(), |n| n.to_string()),
        r.scan_degree_bound
    );
    for c in &r.curves {
        out.push('\n');
        curve(&mut out, c);
    }
    for l in &r.lambdas {
        out.push('\n');
        lambda(&mut out, l);
    }
    out.push('\n');
    let f = r.failures();
    if f.is_empty() {
        let _ = writeln!(out, "summary: all checks passed");
    } else {
        let _ = writeln!(out, "summary: {} failing item(s)", f.len());
        for x in f {
            let _ = writeln!(out, "  {x}");
        }
    }
    out
}
