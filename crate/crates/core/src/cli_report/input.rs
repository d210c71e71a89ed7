//! Curve files: a header, `[curve NAME]` blocks and `[lambda NAME]` blocks of
//! `key = value` lines. Grammar and examples are in docs/curve-format.md.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::{parse_expr, ExprRing};
use crate::gf_core::field::{canonical_modulus, prime_power};
use crate::gf_core::ratfunc::render_poly;
use crate::gf_core::{make_field, Field, RatField, RatFunc, Ring};
use crate::lambda_lab::{parse_generator, LambdaModule, DEFAULT_PRECISION};
use crate::selmer_global::HbarOverride;
use crate::weierstrass::{WeierError, WeierstrassModel};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    FieldMismatch,
    DuplicateName,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

fn syntax(line: usize, m: impl Into<String>) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::Syntax,
        message: m.into(),
    }
}

fn mismatch(line: usize, m: impl Into<String>) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::FieldMismatch,
        message: m.into(),
    }
}

#[derive(Clone, Debug)]
pub struct CurveBlock {
    pub name: String,
    pub line: usize,
    pub coeff_text: [String; 5],
    pub model: WeierstrassModel,
    pub hbar: Option<HbarOverride>,
}

#[derive(Clone, Debug)]
pub struct LambdaBlock {
    pub name: String,
    pub line: usize,
    pub module: LambdaModule,
    /// Largest ν tabulated.
    pub levels: u32,
    /// Largest n tabulated.
    pub layers: u32,
    /// Specialization direction for two-variable modules.
    pub direction: Option<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub struct CurveFile {
    pub version: u32,
    pub p: u32,
    pub q: u64,
    pub field: Option<RatField>,
    pub curves: Vec<CurveBlock>,
    pub lambdas: Vec<LambdaBlock>,
}

/// Evaluates coefficient text in F_q(t); `u` is the generator of F_q/F_p.
pub struct RatExpr<'a>(pub &'a RatField);

impl ExprRing for RatExpr<'_> {
    type V = RatFunc;
    fn int(&self, n: i64) -> RatFunc {
        self.0.from_i64(n)
    }
    fn var(&self, c: char) -> Option<RatFunc> {
        match c {
            't' => Some(self.0.t()),
            'u' if self.0.fq().k() > 1 => Some(self.0.constant(self.0.fq().generator())),
            _ => None,
        }
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.0.add(a, b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.0.mul(a, b)
    }
    fn div(&self, a: &RatFunc, b: &RatFunc) -> Option<RatFunc> {
        self.0.div(a, b)
    }
}

/// Polynomials in u over F_p, for the modulus line.
struct FpU(u32);

impl ExprRing for FpU {
    type V = Vec<u32>;
    fn int(&self, n: i64) -> Vec<u32> {
        vec![n.rem_euclid(self.0 as i64) as u32]
    }
    fn var(&self, c: char) -> Option<Vec<u32>> {
        (c == 'u').then(|| vec![0, 1])
    }
    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.0)
            .collect()
    }
    fn sub(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let nb: Vec<u32> = b.iter().map(|&c| (self.0 - c) % self.0).collect();
        self.add(a, &nb)
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let mut out = vec![0u32; (a.len() + b.len()).saturating_sub(1)];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.0;
            }
        }
        out
    }
    fn div(&self, _: &Vec<u32>, _: &Vec<u32>) -> Option<Vec<u32>> {
        None
    }
}

enum Section {
    Header,
    Curve(usize),
    Lambda(usize),
}

#[derive(Default)]
struct RawLambda {
    d: Option<u8>,
    precision: Option<u32>,
    exponents: Vec<u32>,
    generators: Vec<(usize, String)>,
    levels: Option<u32>,
    layers: Option<u32>,
    direction: Option<(u32, u32)>,
}

fn parse_u32_list(line: usize, v: &str) -> Result<Vec<u32>, ParseError> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| syntax(line, format!("expected an integer list, got '{v}'"))))
        .collect()
}

fn parse_u32(line: usize, v: &str) -> Result<u32, ParseError> {
    v.trim().parse().map_err(|_| syntax(line, format!("expected an integer, got '{v}'")))
}

fn unquote(v: &str) -> String {
    let v = v.trim();
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v).to_string()
}

pub fn parse(text: &str) -> Result<CurveFile, ParseError> {
    let mut version = None;
    let mut p = None;
    let mut q = None;
    let mut modulus: Option<(usize, String)> = None;
    let mut field: Option<RatField> = None;
    let mut section = Section::Header;
    let mut names = BTreeSet::new();
    type RawCurve = (String, usize, [Option<String>; 5], Option<(usize, String)>, Option<String>);
    let mut raw_curves: Vec<RawCurve> = Vec::new();
    let mut raw_lambdas: Vec<(String, usize, RawLambda)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(h) = body.strip_prefix('[') {
            let h = h.strip_suffix(']').ok_or_else(|| syntax(line, "unterminated section header"))?;
            let mut it = h.split_whitespace();
            let kind = it.next().unwrap_or("");
            let name = it.next().ok_or_else(|| syntax(line, "section needs a name"))?.to_string();
            if it.next().is_some() {
                return Err(syntax(line, "section names may not contain spaces"));
            }
            if !names.insert(name.clone()) {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::DuplicateName,
                    message: format!("duplicate name '{name}'"),
                });
            }
            if field.is_none() {
                field = Some(build_field(line, version, p, q, modulus.as_ref())?);
            }
            section = match kind {
                "curve" => {
                    raw_curves.push((name, line, Default::default(), None, None));
                    Section::Curve(raw_curves.len() - 1)
                }
                "lambda" => {
                    raw_lambdas.push((name, line, RawLambda::default()));
                    Section::Lambda(raw_lambdas.len() - 1)
                }
                _ => return Err(syntax(line, format!("unknown section kind '{kind}'"))),
            };
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| syntax(line, "expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        match section {
            Section::Header => match key {
                "format" => version = Some(parse_u32(line, value)?),
                "p" => p = Some(parse_u32(line, value)?),
                "q" => q = Some(value.parse::<u64>().map_err(|_| syntax(line, "q must be an integer"))?),
                "modulus" => modulus = Some((line, value.to_string())),
                _ => return Err(syntax(line, format!("unknown header key '{key}'"))),
            },
            Section::Curve(i) => {
                let c = &mut raw_curves[i];
                let slot = match key {
                    "a1" => 0,
                    "a2" => 1,
                    "a3" => 2,
                    "a4" => 3,
                    "a6" => 4,
                    "hbar" => {
                        c.3 = Some((line, value.to_string()));
                        continue;
                    }
                    "hbar_justification" => {
                        c.4 = Some(unquote(value));
                        continue;
                    }
                    _ => return Err(syntax(line, format!("unknown curve key '{key}'"))),
                };
                if c.2[slot].is_some() {
                    return Err(syntax(line, format!("{key} given twice")));
                }
                c.2[slot] = Some(value.to_string());
                let k = field.as_ref().expect("field built at first section");
                parse_expr(&RatExpr(k), value).map_err(|e| coefficient_error(line, k, &e))?;
            }
            Section::Lambda(i) => {
                let l = &mut raw_lambdas[i].2;
                match key {
                    "d" => l.d = Some(parse_u32(line, value)? as u8),
                    "precision" => l.precision = Some(parse_u32(line, value)?),
                    "exponents" => l.exponents = parse_u32_list(line, value)?,
                    "generators" => {
                        l.generators = value
                            .split(';')
                            .map(|s| s.trim())
                            .filter(|s| !s.is_empty())
                            .map(|s| (line, s.to_string()))
                            .collect()
                    }
                    "levels" => l.levels = Some(parse_u32(line, value)?),
                    "layers" => l.layers = Some(parse_u32(line, value)?),
                    "direction" => {
                        let v = parse_u32_list(line, value)?;
                        if v.len() != 2 {
                            return Err(syntax(line, "direction takes two exponents"));
                        }
                        l.direction = Some((v[0], v[1]));
                    }
                    _ => return Err(syntax(line, format!("unknown lambda key '{key}'"))),
                }
            }
        }
    }
    let field = match field {
        Some(f) => f,
        None => build_field(1, version, p, q, modulus.as_ref())?,
    };
    let pp = field.p();
    let mut curves = Vec::new();
    for (name, line, coeffs, hbar, just) in raw_curves {
        let text: [String; 5] = coeffs.map(|c| c.unwrap_or_else(|| "0".into()));
        let a: [RatFunc; 5] = std::array::from_fn(|i| parse_expr(&RatExpr(&field), &text[i]).expect("checked"));
        let model = WeierstrassModel::new(&field, a).map_err(|e| match e {
            WeierError::Singular => mismatch(line, format!("curve '{name}' is singular over the declared field")),
            other => syntax(line, other.to_string()),
        })?;
        let hbar = match hbar {
            None => None,
            Some((hl, v)) => {
                let value = v.trim().parse::<i64>().map_err(|_| syntax(hl, "hbar must be an integer"))?;
                let justification = just.ok_or_else(|| syntax(hl, "hbar override needs hbar_justification"))?;
                Some(HbarOverride { value, justification })
            }
        };
        curves.push(CurveBlock {
            name,
            line,
            coeff_text: text,
            model,
            hbar,
        });
    }
    let mut lambdas = Vec::new();
    for (name, line, l) in raw_lambdas {
        let d = l.d.unwrap_or(1);
        let precision = l.precision.unwrap_or(DEFAULT_PRECISION);
        let mut gens = Vec::new();
        for (gl, g) in &l.generators {
            gens.push(parse_generator(g, pp, precision, d).map_err(|e| syntax(*gl, e.to_string()))?);
        }
        let module = LambdaModule::new(pp, d, l.exponents, gens, precision).map_err(|e| syntax(line, e.to_string()))?;
        if d == 2 && l.direction.is_none() {
            return Err(syntax(line, "two-variable lambda blocks need a direction"));
        }
        lambdas.push(LambdaBlock {
            name,
            line,
            module,
            levels: l.levels.unwrap_or(3),
            layers: l.layers.unwrap_or(3),
            direction: l.direction,
        });
    }
    Ok(CurveFile {
        version: version.unwrap_or(FORMAT_VERSION),
        p: pp,
        q: field.fq().q() as u64,
        field: Some(field),
        curves,
        lambdas,
    })
}

fn coefficient_error(line: usize, k: &RatField, e: &crate::expr::ExprError) -> ParseError {
    if e.message.starts_with("unknown symbol 'u'") && k.fq().k() == 1 {
        mismatch(line, format!("{e}: 'u' is only defined for non-prime fields"))
    } else {
        syntax(line, format!("{e}"))
    }
}

fn build_field(
    line: usize,
    version: Option<u32>,
    p: Option<u32>,
    q: Option<u64>,
    modulus: Option<&(usize, String)>,
) -> Result<RatField, ParseError> {
    if let Some(v) = version {
        if v != FORMAT_VERSION {
            return Err(syntax(line, format!("unsupported format version {v}")));
        }
    }
    let p = p.ok_or_else(|| syntax(line, "header must declare p"))?;
    let q = q.unwrap_or(p as u64);
    let (qp, k) = prime_power(q).ok_or_else(|| mismatch(line, format!("q = {q} is not a prime power")))?;
    if qp != p as u64 {
        return Err(mismatch(line, format!("q = {q} is not a power of p = {p}")));
    }
    if let Some((ml, text)) = modulus {
        let m = parse_expr(&FpU(p), text).map_err(|e| syntax(*ml, e.to_string()))?;
        let mut m = m;
        while m.last() == Some(&0) {
            m.pop();
        }
        if m != canonical_modulus(p, k) {
            return Err(mismatch(
                *ml,
                "modulus differs from the canonical one (lexicographically least monic irreducible)",
            ));
        }
    }
    let f = make_field(p as u64, k).map_err(|e| mismatch(line, e.to_string()))?;
    Ok(RatField::new(f))
}

/// Curve-file text for models over a common field; `parse` reads it back.
pub fn write_curve_file(k: &RatField, curves: &[(String, WeierstrassModel)]) -> String {
    let f = k.fq();
    let mut out = format!("format = {FORMAT_VERSION}\np = {}\nq = {}\n", f.p(), f.q());
    if f.k() > 1 {
        let fp = make_field(f.p() as u64, 1).expect("prime");
        out.push_str(&format!("modulus = {}\n", render_poly(&fp, f.modulus(), "u")));
    }
    for (name, m) in curves {
        out.push_str(&format!("\n[curve {name}]\n"));
        for (key, c) in ["a1", "a2", "a3", "a4", "a6"].iter().zip(&m.a) {
            if !k.is_zero(c) {
                out.push_str(&format!("{key} = {}\n", k.render(c)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let f = parse("p = 2\nq = 2\n[curve E]\na1 = 1\na6 = t\n").unwrap();
        assert_eq!(f.curves.len(), 1);
        assert_eq!(f.curves[0].model.render(), "[1,0,0,0,t]");
    }

    #[test]
    fn normalizes_and_rejects() {
        let f = parse("p = 2\n[curve E]\na1 = 1\na3 = 2t + 1\na6 = t\n").unwrap();
        assert_eq!(f.curves[0].model.render(), "[1,0,1,0,t]");
        assert_eq!(parse("p = 2\nq = 3\n[curve E]\na1 = 1\n").unwrap_err().kind, ParseErrorKind::FieldMismatch);
        let dup = parse("p = 2\n[curve E]\na1 = 1\na6 = t\n[curve E]\na1 = 1\na6 = t\n").unwrap_err();
        assert_eq!((dup.kind, dup.line), (ParseErrorKind::DuplicateName, 5));
        assert_eq!(parse("p = 3\n[curve E]\na4 = u\n").unwrap_err().kind, ParseErrorKind::FieldMismatch);
        assert_eq!(parse("p = 2\n[curve E]\na4 = t +\n").unwrap_err().line, 3);
    }

    #[test]
    fn extension_and_lambda() {
        let f = parse(
            "format = 1\np = 2\nq = 4\nmodulus = u^2 + u + 1\n[curve E]\na1 = u t\na3 = 1\n[lambda L]\nexponents = 1, 3\ngenerators = x + 2; x^2 + 1\n",
        )
        .unwrap();
        assert_eq!(f.curves[0].model.render(), "[ut,0,1,0,0]");
        assert_eq!(f.lambdas[0].module.alphas, vec![3, 1]);
        assert_eq!(f.lambdas[0].module.gens.len(), 2);
        assert!(parse("p = 2\nq = 4\nmodulus = u^2 + 1\n").is_err());
    }

    #[test]
    fn write_round_trip() {
        let f = parse("p = 2\nq = 4\n[curve E]\na1 = (u+1)t + u\na3 = t\na6 = 1\n").unwrap();
        let k = f.field.clone().unwrap();
        let text = write_curve_file(&k, &[("E".into(), f.curves[0].model.clone())]);
        let g = parse(&text).unwrap();
        assert_eq!(g.curves[0].model, f.curves[0].model);
    }
}
