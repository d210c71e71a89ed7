//! The rational function field K = F_q(t).

use serde::{Deserialize, Serialize};

use super::field::{Field, FiniteField, Gf, Ring};
use super::poly;

/// f/g with g monic and gcd(f, g) = 1; zero is 0/1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RatFunc {
    pub num: Vec<u32>,
    pub den: Vec<u32>,
}

impl RatFunc {
    pub fn is_poly(&self) -> bool {
        self.den.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatField {
    fq: Gf,
}

impl RatField {
    pub fn new(fq: Gf) -> Self {
        RatField { fq }
    }

    pub fn fq(&self) -> &Gf {
        &self.fq
    }

    pub fn p(&self) -> u32 {
        self.fq.p()
    }

    pub fn from_poly(&self, f: Vec<u32>) -> RatFunc {
        RatFunc {
            num: poly::trimmed(&self.fq, f),
            den: vec![1],
        }
    }

    pub fn constant(&self, c: u32) -> RatFunc {
        self.from_poly(vec![c])
    }

    pub fn t(&self) -> RatFunc {
        self.from_poly(vec![0, 1])
    }

    /// Builds num/den in normal form; None if den = 0.
    pub fn frac(&self, num: &[u32], den: &[u32]) -> Option<RatFunc> {
        let f = &self.fq;
        let den = poly::trimmed(f, den.to_vec());
        if den.is_empty() {
            return None;
        }
        let num = poly::trimmed(f, num.to_vec());
        if num.is_empty() {
            return Some(self.zero());
        }
        let g = poly::gcd(f, &num, &den);
        let (mut n, mut d) = if g.len() > 1 {
            (poly::divrem(f, &num, &g).0, poly::divrem(f, &den, &g).0)
        } else {
            (num, den)
        };
        let l = *d.last().unwrap();
        if l != 1 {
            let li = f.inv(&l).unwrap();
            n = poly::scale(f, &n, &li);
            d = poly::scale(f, &d, &li);
        }
        Some(RatFunc { num: n, den: d })
    }

    /// Degree of the numerator minus degree of the denominator (−ord_∞).
    pub fn degree(&self, x: &RatFunc) -> Option<i64> {
        (!x.num.is_empty()).then(|| poly::deg(&x.num) - poly::deg(&x.den))
    }

    /// Whether x ∈ F_q.
    pub fn is_constant(&self, x: &RatFunc) -> bool {
        x.den.len() == 1 && x.num.len() <= 1
    }

    /// Coefficientwise p-th power, i.e. the absolute Frobenius on K.
    pub fn frobenius(&self, x: &RatFunc) -> RatFunc {
        let f = &self.fq;
        let p = f.p() as usize;
        let lift = |a: &[u32]| -> Vec<u32> {
            let mut out = vec![0u32; if a.is_empty() { 0 } else { (a.len() - 1) * p + 1 }];
            for (i, c) in a.iter().enumerate() {
                out[i * p] = f.frobenius(c);
            }
            out
        };
        RatFunc {
            num: lift(&x.num),
            den: lift(&x.den),
        }
    }

    /// Substitutes t ↦ 1/t.
    pub fn invert_variable(&self, x: &RatFunc) -> RatFunc {
        if x.num.is_empty() {
            return self.zero();
        }
        let dn = x.num.len() as i64 - 1;
        let dd = x.den.len() as i64 - 1;
        let mut n: Vec<u32> = x.num.iter().rev().cloned().collect();
        let mut d: Vec<u32> = x.den.iter().rev().cloned().collect();
        if dn > dd {
            d = poly::shift(&self.fq, &d, (dn - dd) as usize);
        } else if dd > dn {
            n = poly::shift(&self.fq, &n, (dd - dn) as usize);
        }
        self.frac(&n, &d).unwrap()
    }

    /// Canonical text in the variable t.
    pub fn render(&self, x: &RatFunc) -> String {
        let n = render_poly(&self.fq, &x.num, "t");
        if x.den.len() == 1 {
            n
        } else {
            format!("({})/({})", n, render_poly(&self.fq, &x.den, "t"))
        }
    }
}

/// Canonical text of a polynomial over F_q.
pub fn render_poly(f: &Gf, a: &[u32], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let cs = f.render(c);
        let composite = cs.contains('+');
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let term = if i == 0 {
            if composite {
                format!("({cs})")
            } else {
                cs
            }
        } else if c == 1 {
            mono
        } else if composite {
            format!("({cs}){mono}")
        } else {
            format!("{cs}{mono}")
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

impl Ring for RatField {
    type E = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc {
            num: Vec::new(),
            den: vec![1],
        }
    }
    fn one(&self) -> RatFunc {
        self.constant(1)
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.fq;
        if a.num.is_empty() {
            return b.clone();
        }
        if b.num.is_empty() {
            return a.clone();
        }
        if a.den == b.den {
            if a.den.len() == 1 {
                return self.from_poly(poly::add(f, &a.num, &b.num));
            }
            return self.frac(&poly::add(f, &a.num, &b.num), &a.den).unwrap();
        }
        let n = poly::add(
            f,
            &poly::mul(f, &a.num, &b.den),
            &poly::mul(f, &b.num, &a.den),
        );
        self.frac(&n, &poly::mul(f, &a.den, &b.den)).unwrap()
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: poly::neg(&self.fq, &a.num),
            den: a.den.clone(),
        }
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.fq;
        if a.num.is_empty() || b.num.is_empty() {
            return self.zero();
        }
        if a.den.len() == 1 && b.den.len() == 1 {
            return self.from_poly(poly::mul(f, &a.num, &b.num));
        }
        // Cross-cancel before multiplying.
        let g1 = poly::gcd(f, &a.num, &b.den);
        let g2 = poly::gcd(f, &b.num, &a.den);
        let (an, bd) = (poly::divrem(f, &a.num, &g1).0, poly::divrem(f, &b.den, &g1).0);
        let (bn, ad) = (poly::divrem(f, &b.num, &g2).0, poly::divrem(f, &a.den, &g2).0);
        let n = poly::mul(f, &an, &bn);
        let d = poly::mul(f, &ad, &bd);
        let l = *d.last().unwrap();
        let li = f.inv(&l).unwrap();
        RatFunc {
            num: poly::scale(f, &n, &li),
            den: poly::scale(f, &d, &li),
        }
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_empty()
    }
    fn from_i64(&self, n: i64) -> RatFunc {
        self.constant(self.fq.from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.fq.characteristic()
    }
}

impl Field for RatField {
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        if a.num.is_empty() {
            return None;
        }
        self.frac(&a.den, &a.num)
    }
}
