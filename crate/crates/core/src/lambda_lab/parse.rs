//! Generators as text: integer polynomials in x (and y) such as "x^2 - 3xy + 1".

use crate::expr::{parse_expr, ExprRing};

use super::{LambdaError, Poly2};

struct Zpxy {
    m: u64,
    two_vars: bool,
}

fn at(g: &Poly2, i: usize, j: usize) -> u64 {
    g.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)
}

impl ExprRing for Zpxy {
    type V = Poly2;
    fn int(&self, n: i64) -> Poly2 {
        vec![vec![n.rem_euclid(self.m as i64) as u64]]
    }
    fn var(&self, c: char) -> Option<Poly2> {
        match c {
            'x' => Some(vec![vec![0], vec![1]]),
            'y' if self.two_vars => Some(vec![vec![0, 1]]),
            _ => None,
        }
    }
    fn add(&self, a: &Poly2, b: &Poly2) -> Poly2 {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| {
                let w = a.get(i).map_or(0, |r| r.len()).max(b.get(i).map_or(0, |r| r.len()));
                (0..w).map(|j| (at(a, i, j) + at(b, i, j)) % self.m).collect()
            })
            .collect()
    }
    fn sub(&self, a: &Poly2, b: &Poly2) -> Poly2 {
        let nb: Poly2 = b.iter().map(|r| r.iter().map(|&c| (self.m - c) % self.m).collect()).collect();
        self.add(a, &nb)
    }
    fn mul(&self, a: &Poly2, b: &Poly2) -> Poly2 {
        let mut out: Poly2 = vec![Vec::new(); (a.len() + b.len()).saturating_sub(1)];
        for (i, ra) in a.iter().enumerate() {
            for (j, &x) in ra.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (k, rb) in b.iter().enumerate() {
                    for (l, &y) in rb.iter().enumerate() {
                        let row = &mut out[i + k];
                        if row.len() <= j + l {
                            row.resize(j + l + 1, 0);
                        }
                        row[j + l] = ((row[j + l] as u128 + x as u128 * y as u128) % self.m as u128) as u64;
                    }
                }
            }
        }
        out
    }
    fn div(&self, _a: &Poly2, _b: &Poly2) -> Option<Poly2> {
        None
    }
}

/// Parses a generator over Z/p^B in `d` variables.
pub fn parse_generator(s: &str, p: u32, precision: u32, d: u8) -> Result<Poly2, LambdaError> {
    let r = Zpxy {
        m: (p as u64).pow(precision),
        two_vars: d == 2,
    };
    parse_expr(&r, s).map_err(|e| LambdaError::Parse(e.to_string()))
}

/// Text with coefficients as signed representatives modulo p^B.
pub fn render_generator(g: &Poly2, modulus: u64) -> String {
    let mut terms: Vec<(usize, usize, i64)> = Vec::new();
    for (i, r) in g.iter().enumerate() {
        for (j, &c) in r.iter().enumerate() {
            if c != 0 {
                let s = if c > modulus / 2 { c as i64 - modulus as i64 } else { c as i64 };
                terms.push((i, j, s));
            }
        }
    }
    terms.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
    let mut out = String::new();
    for (k, (i, j, c)) in terms.iter().enumerate() {
        let mono = [(*i, "x"), (*j, "y")]
            .iter()
            .filter(|(e, _)| *e > 0)
            .map(|(e, v)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect::<String>();
        let mag = c.unsigned_abs();
        let body = if mono.is_empty() {
            mag.to_string()
        } else if mag == 1 {
            mono
        } else {
            format!("{mag}{mono}")
        };
        match (k, *c < 0) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = 3u64.pow(8);
        let g = parse_generator("x^2 - 3xy + 1", 3, 8, 2).unwrap();
        assert_eq!(render_generator(&g, m), "x^2 - 3xy + 1");
        let h = parse_generator("x - 3", 3, 8, 1).unwrap();
        assert_eq!(h, vec![vec![m - 3], vec![1]]);
        assert!(parse_generator("y", 3, 8, 1).is_err());
    }
}
