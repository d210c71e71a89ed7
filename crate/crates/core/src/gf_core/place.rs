//! Places of P¹ over F_q, valuations and residue maps.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::field::{ExtField, Field, FiniteField, Gf, Ring};
use super::poly;
use super::ratfunc::{render_poly, RatField, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Place {
    /// A monic irreducible polynomial π_v ∈ F_q[t].
    Finite(Vec<u32>),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(pi) => pi.len() as u32 - 1,
            Place::Infinity => 1,
        }
    }

    /// q_v = q^{deg v}.
    pub fn residue_order(&self, q: u64) -> u128 {
        (q as u128).pow(self.degree())
    }

    pub fn render(&self, f: &Gf) -> String {
        match self {
            Place::Finite(pi) => render_poly(f, pi, "t"),
            Place::Infinity => "inf".into(),
        }
    }

    /// Validates a finite place.
    pub fn finite(f: &Gf, pi: Vec<u32>) -> Option<Place> {
        let pi = poly::trimmed(f, pi);
        (pi.last() == Some(&1) && poly::is_irreducible(f, &pi)).then_some(Place::Finite(pi))
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite places by (degree, coefficients top-down); ∞ after all finite places.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Greater,
            (_, Place::Infinity) => Ordering::Less,
            (Place::Finite(a), Place::Finite(b)) => a
                .len()
                .cmp(&b.len())
                .then_with(|| a.iter().rev().cmp(b.iter().rev())),
        }
    }
}

/// Multiplicity of π in a nonzero polynomial, and the cofactor.
pub fn poly_ord(f: &Gf, a: &[u32], pi: &[u32]) -> (i64, Vec<u32>) {
    let mut a = a.to_vec();
    let mut n = 0;
    loop {
        let (q, r) = poly::divrem(f, &a, pi);
        if !r.is_empty() {
            return (n, a);
        }
        a = q;
        n += 1;
    }
}

/// ord_v(x); None encodes +∞ (x = 0).
pub fn valuation(k: &RatField, x: &RatFunc, v: &Place) -> Option<i64> {
    if x.num.is_empty() {
        return None;
    }
    Some(match v {
        Place::Infinity => poly::deg(&x.den) - poly::deg(&x.num),
        Place::Finite(pi) => poly_ord(k.fq(), &x.num, pi).0 - poly_ord(k.fq(), &x.den, pi).0,
    })
}

/// Residue field, residue map and a section at one place.
#[derive(Clone, Debug)]
pub struct LocalCtx {
    pub place: Place,
    pub k: RatField,
    /// F_v = F_q[θ]/(π_v); at ∞ the modulus is θ and F_v = F_q.
    pub res: ExtField<Gf>,
}

pub type ResElem = Vec<u32>;

impl LocalCtx {
    pub fn new(k: &RatField, place: &Place) -> LocalCtx {
        let modulus = match place {
            Place::Finite(pi) => pi.clone(),
            Place::Infinity => vec![0, 1],
        };
        LocalCtx {
            place: place.clone(),
            k: k.clone(),
            res: ExtField::new(k.fq().clone(), modulus),
        }
    }

    pub fn deg(&self) -> u32 {
        self.place.degree()
    }

    pub fn q_v(&self) -> u128 {
        self.res.order()
    }

    pub fn ord(&self, x: &RatFunc) -> Option<i64> {
        valuation(&self.k, x, &self.place)
    }

    /// ord with +∞ clamped to i64::MAX.
    pub fn ord_or_max(&self, x: &RatFunc) -> i64 {
        self.ord(x).unwrap_or(i64::MAX)
    }

    pub fn is_integral(&self, x: &RatFunc) -> bool {
        self.ord(x).is_none_or(|o| o >= 0)
    }

    /// π_v, or 1/t at ∞.
    pub fn uniformizer(&self) -> RatFunc {
        match &self.place {
            Place::Finite(pi) => self.k.from_poly(pi.clone()),
            Place::Infinity => self.k.frac(&[1], &[0, 1]).unwrap(),
        }
    }

    pub fn uniformizer_pow(&self, n: i64) -> RatFunc {
        let pi = self.uniformizer();
        let k = &self.k;
        let base = if n >= 0 { pi } else { k.inv(&pi).unwrap() };
        k.pow(&base, n.unsigned_abs() as u128)
    }

    /// Residue of a v-integral element; None if x is not integral.
    pub fn residue(&self, x: &RatFunc) -> Option<ResElem> {
        let f = self.k.fq();
        match &self.place {
            Place::Finite(pi) => {
                let d = poly::rem(f, &x.den, pi);
                if d.is_empty() {
                    // Normal form: π | den forces ord < 0 unless x = 0.
                    return if x.num.is_empty() { Some(self.res.zero()) } else { None };
                }
                let n = self.res.from_poly(&x.num);
                let di = self.res.inv(&self.res.from_poly(&d)).unwrap();
                Some(self.res.mul(&n, &di))
            }
            Place::Infinity => {
                let Some(o) = self.ord(x) else {
                    return Some(self.res.zero());
                };
                if o < 0 {
                    None
                } else if o > 0 {
                    Some(self.res.zero())
                } else {
                    let c = f.div(x.num.last().unwrap(), x.den.last().unwrap()).unwrap();
                    Some(self.res.embed(&c))
                }
            }
        }
    }

    /// Residue of π_v^{-n}·x where n = ord_v(x): the leading coefficient.
    pub fn leading_residue(&self, x: &RatFunc) -> Option<ResElem> {
        let o = self.ord(x)?;
        let y = self.k.mul(x, &self.uniformizer_pow(-o));
        self.residue(&y)
    }

    /// Canonical lift F_v → O_v: the polynomial of degree < deg v.
    pub fn lift(&self, a: &ResElem) -> RatFunc {
        match &self.place {
            Place::Finite(_) => self.k.from_poly(self.res.to_poly(a)),
            Place::Infinity => self.k.constant(a[0]),
        }
    }

    /// Reduction of a v-integral element followed by the canonical lift.
    pub fn reduce(&self, x: &RatFunc) -> Option<RatFunc> {
        self.residue(x).map(|r| self.lift(&r))
    }

    /// Whether π^n divides x (x v-integral with ord ≥ n).
    pub fn divisible(&self, x: &RatFunc, n: i64) -> bool {
        self.ord(x).is_none_or(|o| o >= n)
    }
}

/// Places supporting the divisor of a nonzero rational function, with orders.
pub fn divisor(k: &RatField, x: &RatFunc) -> Vec<(Place, i64)> {
    let f = k.fq();
    let mut out = Vec::new();
    for (g, m) in poly::factor(f, &x.num).unwrap_or_default() {
        out.push((Place::Finite(g), m as i64));
    }
    for (g, m) in poly::factor(f, &x.den).unwrap_or_default() {
        out.push((Place::Finite(g), -(m as i64)));
    }
    let oinf = valuation(k, x, &Place::Infinity).unwrap_or(0);
    if oinf != 0 {
        out.push((Place::Infinity, oinf));
    }
    out.sort();
    out
}

/// Finite places of degree d, canonical order.
pub fn places_of_degree(f: &Gf, d: u32) -> Vec<Place> {
    poly::monic_irreducibles(f, d as usize)
        .into_iter()
        .map(Place::Finite)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::field::{make_field, Field};

    #[test]
    fn valuation_examples() {
        let k = RatField::new(make_field(2, 1).unwrap());
        let x = k.frac(&[0, 0, 0, 1], &[1, 1]).unwrap();
        assert_eq!(valuation(&k, &x, &Place::Finite(vec![0, 1])), Some(3));
        assert_eq!(valuation(&k, &x, &Place::Infinity), Some(-2));
        assert_eq!(valuation(&k, &k.zero(), &Place::Infinity), None);
    }

    #[test]
    fn residue_and_lift() {
        let k = RatField::new(make_field(3, 1).unwrap());
        let v = LocalCtx::new(&k, &Place::Finite(vec![1, 0, 1]));
        let t = k.t();
        let r = v.residue(&t).unwrap();
        // θ² = −1 in F_9.
        assert_eq!(v.res.mul(&r, &r), v.res.neg(&v.res.one()));
        let x = k.inv(&k.add(&t, &k.one())).unwrap();
        let rx = v.residue(&x).unwrap();
        assert_eq!(v.res.mul(&rx, &v.res.add(&r, &v.res.one())), v.res.one());
        assert_eq!(v.residue(&v.lift(&rx)).unwrap(), rx);
        let inf = LocalCtx::new(&k, &Place::Infinity);
        let y = k.frac(&[1, 2], &[0, 1]).unwrap();
        assert_eq!(inf.residue(&y).unwrap(), vec![2]);
    }

    #[test]
    fn product_formula_small() {
        let k = RatField::new(make_field(2, 2).unwrap());
        let x = k.frac(&[1, 2, 3, 1], &[2, 0, 1, 0, 1]).unwrap();
        let total: i64 = divisor(&k, &x).iter().map(|(v, o)| o * v.degree() as i64).sum();
        assert_eq!(total, 0);
    }
}
