//! Rationality of the étale 3-torsion of A^{(3)} via the 3-division polynomial.
//!
//! In characteristic 3, ψ₃ = b2·x³ + b8. Raising coefficients to the cube,
//! the twist's ψ₃ has the single root x₀ = −b8/b2 ∈ K, and the point is
//! rational over a field F ⊇ K iff D = 4x₀³ + b2′x₀² + 2b4′x₀ + b6′ is a
//! square in F (twist invariants b_i′ = b_i³).

use serde::{Deserialize, Serialize};

use crate::gf_core::{poly, Field, FiniteField, LocalCtx, Place, RatField, RatFunc, Ring};
use crate::tate_local::{LocalReductionData, ReductionType};
use crate::weierstrass::WeierstrassModel;

/// D for the twist model, or None if b2 = 0 or p ≠ 3.
pub fn twist_torsion_discriminant(m: &WeierstrassModel) -> Option<RatFunc> {
    if m.p() != 3 {
        return None;
    }
    let k = &m.k;
    let inv = m.b_c_invariants();
    if k.is_zero(&inv.b2) {
        return None;
    }
    let x0 = k.neg(&k.div(&inv.b8, &inv.b2)?);
    let cube = |x: &RatFunc| k.pow(x, 3);
    let (b2, b4, b6) = (cube(&inv.b2), cube(&inv.b4), cube(&inv.b6));
    let d = k.add(
        &k.add(&k.mul_int(4, &k.pow(&x0, 3)), &k.mul(&b2, &k.mul(&x0, &x0))),
        &k.add(&k.mul_int(2, &k.mul(&b4, &x0)), &b6),
    );
    Some(d)
}

fn is_square_fq<F: FiniteField>(f: &F, c: &F::E) -> bool {
    if f.is_zero(c) {
        return true;
    }
    let q = f.order();
    q % 2 == 0 || f.is_one(&f.pow(c, (q - 1) / 2))
}

/// Whether x ≠ 0 is a square in K_v (odd residue characteristic).
pub fn is_square_local(ctx: &LocalCtx, x: &RatFunc) -> bool {
    let Some(o) = ctx.ord(x) else {
        return true;
    };
    o % 2 == 0 && is_square_fq(&ctx.res, &ctx.leading_residue(x).expect("nonzero"))
}

/// Whether x is a square in K = F_q(t).
pub fn is_square_global(k: &RatField, x: &RatFunc) -> bool {
    if k.is_zero(x) {
        return true;
    }
    let f = k.fq();
    let even = |g: &[u32]| poly::factor(f, g).unwrap_or_default().iter().all(|(_, e)| e % 2 == 0);
    let lc = f.div(&poly::lead(f, &x.num), &poly::lead(f, &x.den)).expect("unit");
    even(&x.num) && even(&x.den) && is_square_fq(f, &lc)
}

/// k = K(A^{(p)}_p(K^s)) equals K: always for p = 2; for p = 3 iff D is a
/// global square; None when undecided.
pub fn kernel_field_is_base(m: &WeierstrassModel) -> Option<bool> {
    match m.p() {
        2 => Some(true),
        3 => twist_torsion_discriminant(m).map(|d| is_square_global(&m.k, &d)),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriterionKind {
    /// v ∈ ð₀ predicted from split/non-split multiplicative reduction.
    Eth0,
    /// k_w = K_v predicted from a_v ≡ 1 (mod p) at a good ordinary place.
    OrdinaryTrace,
    /// k_w = K_v predicted by ε_v at a supersingular place.
    SupersingularEpsilon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub place: Place,
    pub kind: CriterionKind,
    pub predicted: bool,
    pub division_polynomial: bool,
}

impl OracleRow {
    pub fn agrees(&self) -> bool {
        self.predicted == self.division_polynomial
    }
}

/// Compares the local criteria with the division-polynomial computation at
/// every place in `places` (p = 3 only; empty otherwise).
pub fn oracle_rows(
    m: &WeierstrassModel,
    places: &[LocalReductionData],
    epsilons: &[(Place, Option<bool>)],
) -> Vec<OracleRow> {
    let Some(d) = twist_torsion_discriminant(m) else {
        return Vec::new();
    };
    let k = &m.k;
    let mut out = Vec::new();
    for data in places {
        let ctx = LocalCtx::new(k, &data.place);
        let oracle = is_square_local(&ctx, &d);
        let predicted = match data.kind {
            ReductionType::MultiplicativeSplit => Some((CriterionKind::Eth0, true)),
            ReductionType::MultiplicativeNonSplit => Some((CriterionKind::Eth0, false)),
            ReductionType::Good => match data.good {
                Some(g) if g.ordinary => Some((CriterionKind::OrdinaryTrace, g.a_v.rem_euclid(3) == 1)),
                Some(_) => epsilons
                    .iter()
                    .find(|(v, _)| v == &data.place)
                    .and_then(|(_, e)| *e)
                    .map(|e| (CriterionKind::SupersingularEpsilon, e)),
                None => None,
            },
            ReductionType::Additive(_) => None,
        };
        if let Some((kind, predicted)) = predicted {
            out.push(OracleRow {
                place: data.place.clone(),
                kind,
                predicted,
                division_polynomial: oracle,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::make_field;
    use crate::weierstrass::count::point_count;

    #[test]
    fn squares() {
        let k = RatField::new(make_field(3, 1).unwrap());
        let x = k.frac(&[1, 2, 1], &[0, 0, 0, 0, 1]).unwrap();
        assert!(is_square_global(&k, &x));
        assert!(!is_square_global(&k, &k.constant(2)));
        let v = LocalCtx::new(&k, &Place::Finite(vec![0, 1]));
        assert!(is_square_local(&v, &k.from_poly(vec![1, 1])));
        assert!(!is_square_local(&v, &k.t()));
        assert!(!is_square_local(&v, &k.constant(2)));
    }

    #[test]
    fn constant_ordinary_curve_agrees_with_point_count() {
        // Over F_3, E(F_3) has a 3-torsion point on the twist iff a ≡ 1 (mod 3).
        let f = make_field(3, 1).unwrap();
        let k = RatField::new(f.clone());
        for a in [[0, 1, 0, 0, 1], [0, 1, 0, 0, 2], [0, 2, 0, 0, 1], [0, 2, 0, 0, 2]] {
            let m = WeierstrassModel::from_polys(&k, a.map(|c| vec![c])).unwrap();
            let c = point_count(&f, &a).unwrap();
            let d = twist_torsion_discriminant(&m).unwrap();
            let v = LocalCtx::new(&k, &Place::Finite(vec![0, 1]));
            assert_eq!(is_square_local(&v, &d), c.a.rem_euclid(3) == 1, "{a:?}");
        }
    }
}
