//! Exhaustive point counts on curves over finite fields.

use crate::gf_core::{poly, FiniteField};

use super::{invariants_of, WeierError};

/// Largest residue field the counter accepts.
pub const POINT_COUNT_BOUND: u128 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointCount {
    /// Points including the one at infinity.
    pub n: u128,
    pub a: i64,
}

impl PointCount {
    pub fn ordinary(&self, p: u32) -> bool {
        self.a.rem_euclid(p as i64) != 0
    }
}

fn check<F: FiniteField>(f: &F, a: &[F::E; 5]) -> Result<(), WeierError> {
    if f.order() > POINT_COUNT_BOUND {
        return Err(WeierError::SizeBound(f.order()));
    }
    if f.is_zero(&invariants_of(f, a).disc) {
        return Err(WeierError::Singular);
    }
    Ok(())
}

/// Count by iterating over x and solving the quadratic in y.
pub fn point_count_x<F: FiniteField>(f: &F, a: &[F::E; 5]) -> Result<u128, WeierError> {
    check(f, a)?;
    let [a1, a2, a3, a4, a6] = a;
    let char2 = f.characteristic() == 2;
    let mut n: u128 = 1;
    for i in 0..f.order() {
        let x = f.element(i);
        let b = f.add(&f.mul(a1, &x), a3);
        let rhs = {
            let x2 = f.sqr(&x);
            let c = f.add(&f.mul(&x2, &x), &f.mul(a2, &x2));
            f.add(&f.add(&c, &f.mul(a4, &x)), a6)
        };
        if char2 {
            if f.is_zero(&b) {
                n += 1;
            } else {
                // y = bz turns y² + by = rhs into z² + z = rhs/b².
                let c = f.div(&rhs, &f.sqr(&b)).unwrap();
                if f.is_zero(&f.abs_trace(&c)) {
                    n += 2;
                }
            }
        } else {
            let d = f.add(&f.sqr(&b), &f.mul_int(4, &rhs));
            n += if f.is_zero(&d) {
                1
            } else if f.is_square(&d) {
                2
            } else {
                0
            };
        }
    }
    Ok(n)
}

/// Count by iterating over y and counting distinct roots of the cubic in x.
pub fn point_count_y<F: FiniteField>(f: &F, a: &[F::E; 5]) -> Result<u128, WeierError> {
    check(f, a)?;
    let [a1, a2, a3, a4, a6] = a;
    let q = f.order();
    let mut n: u128 = 1;
    for i in 0..q {
        let y = f.element(i);
        let c0 = f.sub(&f.sub(a6, &f.sqr(&y)), &f.mul(a3, &y));
        let c1 = f.sub(a4, &f.mul(a1, &y));
        let g = poly::trimmed(f, vec![c0, c1, a2.clone(), f.one()]);
        let xq = poly::powmod(f, &poly::x(f), q, &g);
        let h = poly::sub(f, &xq, &poly::x(f));
        n += poly::deg(&poly::gcd(f, &h, &g)) as u128;
    }
    Ok(n)
}

/// N and a = q + 1 − N, with the Hasse bound asserted.
pub fn point_count<F: FiniteField>(f: &F, a: &[F::E; 5]) -> Result<PointCount, WeierError> {
    let n = point_count_x(f, a)?;
    let q = f.order();
    let av = q as i64 + 1 - n as i64;
    assert!(
        (av as i128).pow(2) <= 4 * q as i128,
        "Hasse bound violated: q={q}, a={av}"
    );
    Ok(PointCount { n, a: av })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_core::{make_field, Gf, Ring};
    use rand::{Rng, SeedableRng};

    fn coeffs(f: &Gf, a: [u32; 5]) -> [u32; 5] {
        a.map(|c| f.from_i64(c as i64))
    }

    #[test]
    fn y2_x3_x_over_f3() {
        let f = make_field(3, 1).unwrap();
        let c = point_count(&f, &coeffs(&f, [0, 0, 0, 1, 0])).unwrap();
        assert_eq!(c.n, 4);
        assert_eq!(c.a, 0);
        assert!(!c.ordinary(3));
    }

    #[test]
    fn y2_xy_x3_1_over_f2() {
        let f = make_field(2, 1).unwrap();
        let c = point_count(&f, &coeffs(&f, [1, 0, 0, 0, 1])).unwrap();
        assert_eq!(c.a.rem_euclid(2), 1);
        // Points (0,1), (1,0), (1,1), ∞.
        assert_eq!(c.n, 4);
    }

    #[test]
    fn x_and_y_enumeration_agree() {
        for (p, k) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let f = make_field(p, k).unwrap();
            let q = f.order();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(p * 10 + k as u64);
            let mut done = 0;
            for _ in 0..300 {
                let a: [u32; 5] = std::array::from_fn(|_| f.element(rng.gen_range(0..q)));
                if f.is_zero(&invariants_of(&f, &a).disc) {
                    continue;
                }
                assert_eq!(point_count_x(&f, &a).unwrap(), point_count_y(&f, &a).unwrap());
                done += 1;
            }
            assert!(done > 10);
        }
    }

    #[test]
    fn singular_rejected() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(point_count(&f, &[0; 5]), Err(WeierError::Singular));
    }
}
