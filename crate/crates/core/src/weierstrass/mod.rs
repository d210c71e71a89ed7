//! Weierstrass models over F_q(t): invariants, changes of variables, the
//! Frobenius twist, point counting on reductions, and corpus search.

pub mod count;
pub mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf_core::{Field, Gf, RatField, RatFunc, Ring};

pub use count::{point_count, point_count_x, point_count_y, PointCount};
pub use search::{find_semistable_ordinary_examples, SearchResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeierError {
    #[error("singular model (discriminant 0)")]
    Singular,
    #[error("transformation with u = 0")]
    ZeroScale,
    #[error("residue field of order {0} exceeds the point-count bound")]
    SizeBound(u128),
    #[error("search budget exhausted after {0} candidates")]
    BudgetExhausted(u64),
}

/// b2, b4, b6, b8, c4, c6, Δ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Invariants<E> {
    pub b2: E,
    pub b4: E,
    pub b6: E,
    pub b8: E,
    pub c4: E,
    pub c6: E,
    pub disc: E,
}

/// Universal formulas over any ring, in the order a1, a2, a3, a4, a6.
pub fn invariants_of<R: Ring>(r: &R, a: &[R::E; 5]) -> Invariants<R::E> {
    let [a1, a2, a3, a4, a6] = a;
    let m = |x: &R::E, y: &R::E| r.mul(x, y);
    let b2 = r.add(&m(a1, a1), &r.mul_int(4, a2));
    let b4 = r.add(&r.mul_int(2, a4), &m(a1, a3));
    let b6 = r.add(&m(a3, a3), &r.mul_int(4, a6));
    let b8 = {
        let t1 = m(&m(a1, a1), a6);
        let t2 = r.mul_int(4, &m(a2, a6));
        let t3 = m(&m(a1, a3), a4);
        let t4 = m(a2, &m(a3, a3));
        let t5 = m(a4, a4);
        r.sub(&r.add(&r.sub(&r.add(&t1, &t2), &t3), &t4), &t5)
    };
    let c4 = r.sub(&m(&b2, &b2), &r.mul_int(24, &b4));
    let c6 = {
        let t1 = r.neg(&m(&b2, &m(&b2, &b2)));
        let t2 = r.mul_int(36, &m(&b2, &b4));
        let t3 = r.mul_int(216, &b6);
        r.sub(&r.add(&t1, &t2), &t3)
    };
    let disc = {
        let t1 = r.neg(&m(&m(&b2, &b2), &b8));
        let t2 = r.mul_int(8, &m(&b4, &m(&b4, &b4)));
        let t3 = r.mul_int(27, &m(&b6, &b6));
        let t4 = r.mul_int(9, &m(&b2, &m(&b4, &b6)));
        r.add(&r.sub(&r.sub(&t1, &t2), &t3), &t4)
    };
    Invariants {
        b2,
        b4,
        b6,
        b8,
        c4,
        c6,
        disc,
    }
}

/// x = u²x' + r, y = u³y' + s·u²x' + w.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transformation<E> {
    pub u: E,
    pub r: E,
    pub s: E,
    pub w: E,
}

impl<E: Clone> Transformation<E> {
    pub fn identity<R: Ring<E = E>>(ring: &R) -> Self {
        Transformation {
            u: ring.one(),
            r: ring.zero(),
            s: ring.zero(),
            w: ring.zero(),
        }
    }

    pub fn translation<R: Ring<E = E>>(ring: &R, r: E, s: E, w: E) -> Self {
        Transformation { u: ring.one(), r, s, w }
    }

    pub fn scaling<R: Ring<E = E>>(ring: &R, u: E) -> Self {
        Transformation {
            u,
            r: ring.zero(),
            s: ring.zero(),
            w: ring.zero(),
        }
    }

    /// self followed by `next` (next acts on the coordinates produced by self).
    pub fn then<R: Ring<E = E>>(&self, ring: &R, next: &Self) -> Self {
        let m = |a: &E, b: &E| ring.mul(a, b);
        let u1sq = m(&self.u, &self.u);
        Transformation {
            u: m(&self.u, &next.u),
            r: ring.add(&self.r, &m(&u1sq, &next.r)),
            s: ring.add(&self.s, &m(&self.u, &next.s)),
            w: ring.add(
                &ring.add(&self.w, &m(&m(&u1sq, &self.u), &next.w)),
                &m(&m(&self.s, &u1sq), &next.r),
            ),
        }
    }

    pub fn inverse<R: Field<E = E>>(&self, ring: &R) -> Option<Self> {
        let ui = ring.inv(&self.u)?;
        let m = |a: &E, b: &E| ring.mul(a, b);
        let ui2 = m(&ui, &ui);
        Some(Transformation {
            u: ui.clone(),
            r: ring.neg(&m(&self.r, &ui2)),
            s: ring.neg(&m(&self.s, &ui)),
            w: m(&ring.sub(&m(&self.r, &self.s), &self.w), &m(&ui2, &ui)),
        })
    }

    pub fn map<R: Ring<E = E>>(&self, f: impl Fn(&E) -> E) -> Self {
        Transformation {
            u: f(&self.u),
            r: f(&self.r),
            s: f(&self.s),
            w: f(&self.w),
        }
    }
}

/// Transformed coefficients; None if u = 0.
pub fn transform_coeffs<R: Field>(
    ring: &R,
    a: &[R::E; 5],
    tau: &Transformation<R::E>,
) -> Option<[R::E; 5]> {
    let ui = ring.inv(&tau.u)?;
    let [a1, a2, a3, a4, a6] = a;
    let (r, s, w) = (&tau.r, &tau.s, &tau.w);
    let m = |x: &R::E, y: &R::E| ring.mul(x, y);
    let add = |x: &R::E, y: &R::E| ring.add(x, y);
    let sub = |x: &R::E, y: &R::E| ring.sub(x, y);
    let n1 = add(a1, &ring.mul_int(2, s));
    let n2 = sub(&add(&sub(a2, &m(s, a1)), &ring.mul_int(3, r)), &m(s, s));
    let n3 = add(&add(a3, &m(r, a1)), &ring.mul_int(2, w));
    let n4 = {
        let x = sub(a4, &m(s, a3));
        let x = add(&x, &ring.mul_int(2, &m(r, a2)));
        let x = sub(&x, &m(&add(w, &m(r, s)), a1));
        let x = add(&x, &ring.mul_int(3, &m(r, r)));
        sub(&x, &ring.mul_int(2, &m(s, w)))
    };
    let n6 = {
        let x = add(a6, &m(r, a4));
        let x = add(&x, &m(&m(r, r), a2));
        let x = add(&x, &m(&m(r, r), r));
        let x = sub(&x, &m(w, a3));
        let x = sub(&x, &m(w, w));
        sub(&x, &m(&m(r, w), a1))
    };
    let ui2 = m(&ui, &ui);
    let ui3 = m(&ui2, &ui);
    let ui4 = m(&ui2, &ui2);
    let ui6 = m(&ui3, &ui3);
    Some([
        m(&n1, &ui),
        m(&n2, &ui2),
        m(&n3, &ui3),
        m(&n4, &ui4),
        m(&n6, &ui6),
    ])
}

/// y² + a1xy + a3y = x³ + a2x² + a4x + a6 over F_q(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    pub k: RatField,
    pub a: [RatFunc; 5],
}

/// Invariants of a model together with j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelInvariants {
    pub inv: Invariants<RatFunc>,
    pub j: RatFunc,
}

impl WeierstrassModel {
    pub fn new(k: &RatField, a: [RatFunc; 5]) -> Result<Self, WeierError> {
        let m = WeierstrassModel { k: k.clone(), a };
        if k.is_zero(&m.disc()) {
            return Err(WeierError::Singular);
        }
        Ok(m)
    }

    /// Model from polynomial coefficient vectors over F_q.
    pub fn from_polys(k: &RatField, a: [Vec<u32>; 5]) -> Result<Self, WeierError> {
        let a = a.map(|c| k.from_poly(c));
        Self::new(k, a)
    }

    pub fn fq(&self) -> &Gf {
        self.k.fq()
    }

    pub fn p(&self) -> u32 {
        self.k.p()
    }

    pub fn b_c_invariants(&self) -> Invariants<RatFunc> {
        invariants_of(&self.k, &self.a)
    }

    pub fn disc(&self) -> RatFunc {
        self.b_c_invariants().disc
    }

    pub fn invariants(&self) -> Result<ModelInvariants, WeierError> {
        let inv = self.b_c_invariants();
        let k = &self.k;
        if k.is_zero(&inv.disc) {
            return Err(WeierError::Singular);
        }
        let c4c = k.mul(&inv.c4, &k.mul(&inv.c4, &inv.c4));
        let j = k.div(&c4c, &inv.disc).unwrap();
        Ok(ModelInvariants { inv, j })
    }

    pub fn j(&self) -> RatFunc {
        self.invariants().expect("nonsingular").j
    }

    /// j ∈ F_q.
    pub fn is_isotrivial(&self) -> bool {
        self.k.is_constant(&self.j())
    }

    pub fn transform(&self, tau: &Transformation<RatFunc>) -> Result<Self, WeierError> {
        let a = transform_coeffs(&self.k, &self.a, tau).ok_or(WeierError::ZeroScale)?;
        Ok(WeierstrassModel { k: self.k.clone(), a })
    }

    /// Coefficientwise absolute Frobenius a_i ↦ a_i^p.
    pub fn frobenius_twist(&self) -> Self {
        WeierstrassModel {
            k: self.k.clone(),
            a: self.a.clone().map(|c| self.k.frobenius(&c)),
        }
    }

    /// Whether every coefficient is a polynomial in t.
    pub fn is_polynomial(&self) -> bool {
        self.a.iter().all(|c| c.is_poly())
    }

    /// Canonical text "[a1,a2,a3,a4,a6]".
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.a.iter().map(|c| self.k.render(c)).collect();
        format!("[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::make_field;

    fn k(p: u64) -> RatField {
        RatField::new(make_field(p, 1).unwrap())
    }

    #[test]
    fn invariants_y2_x3_plus_x_mod5() {
        let k = k(5);
        let m = WeierstrassModel::from_polys(&k, [vec![], vec![], vec![], vec![1], vec![]]).unwrap();
        let inv = m.invariants().unwrap();
        assert_eq!(inv.inv.disc, k.constant(1));
        assert_eq!(inv.inv.c4, k.constant(2));
        // Hand oracle: Δ = −16(4a³ + 27b²) with a = 1, b = 0.
        assert_eq!(k.from_i64(-16 * 4), inv.inv.disc);
    }

    #[test]
    fn invariants_char2_example() {
        let k = k(2);
        let m = WeierstrassModel::from_polys(&k, [vec![1], vec![], vec![], vec![], vec![0, 1]]).unwrap();
        let inv = m.invariants().unwrap();
        assert_eq!(inv.inv.b2, k.one());
        assert!(k.is_zero(&inv.inv.b4) && k.is_zero(&inv.inv.b6));
        assert_eq!(inv.inv.b8, k.t());
        assert_eq!(inv.inv.disc, k.t());
        assert_eq!(inv.inv.c4, k.one());
        assert_eq!(inv.j, k.inv(&k.t()).unwrap());
    }

    #[test]
    fn singular_cusp() {
        let k = k(5);
        assert_eq!(
            WeierstrassModel::from_polys(&k, [vec![], vec![], vec![], vec![], vec![]]),
            Err(WeierError::Singular)
        );
    }

    #[test]
    fn scaling_weights() {
        let k = k(5);
        let m = WeierstrassModel::from_polys(&k, [vec![], vec![], vec![], vec![1], vec![]]).unwrap();
        let u = k.t();
        let m2 = m.transform(&Transformation::scaling(&k, u.clone())).unwrap();
        assert_eq!(m2.a[3], k.inv(&k.pow(&u, 4)).unwrap());
        let d2 = k.mul(&m2.disc(), &k.pow(&u, 12));
        assert_eq!(d2, m.disc());
    }

    #[test]
    fn frobenius_twist_examples() {
        let k = k(2);
        let m = WeierstrassModel::from_polys(&k, [vec![1], vec![], vec![], vec![], vec![0, 1]]).unwrap();
        let tw = m.frobenius_twist();
        assert_eq!(tw.a[4], k.from_poly(vec![0, 0, 1]));
        let c = WeierstrassModel::from_polys(&k, [vec![1], vec![1], vec![], vec![], vec![1]]).unwrap();
        assert_eq!(c.frobenius_twist(), c);
    }
}
