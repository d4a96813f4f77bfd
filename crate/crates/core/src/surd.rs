//! Exact arithmetic on quadratic surds `a + b√d` with rational `a, b` and
//! `d ≥ 0`. Only signs and comparisons are needed, never the value itself.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ambient::Rational;

fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `a + b√d`.
pub fn sign_surd(a: &Rational, b: &Rational, d: &Rational) -> i8 {
    debug_assert!(!d.is_negative());
    let sa = sign(a);
    if b.is_zero() || d.is_zero() {
        return sa;
    }
    let sb = sign(b);
    if sa == 0 || sa == sb {
        return sb;
    }
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// Sign of `a + b√d1 + c√d2`.
pub fn sign_two_surds(a: &Rational, b: &Rational, d1: &Rational, c: &Rational, d2: &Rational) -> i8 {
    debug_assert!(!d2.is_negative());
    let sp = sign_surd(a, b, d1);
    let sq = if d2.is_zero() { 0 } else { sign(c) };
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    // |P| vs |Q| through P² - Q² = (a² + b²d1 - c²d2) + 2ab√d1
    let rat_part = a * a + b * b * d1 - c * c * d2;
    let surd_part = (a * b) * Rational::from_integer(BigInt::from(2));
    match sign_surd(&rat_part, &surd_part, d1) {
        1 => sp,
        -1 => sq,
        _ => 0,
    }
}

/// `√q` rounded down to a multiple of `2^-bits` (or finer).
pub fn sqrt_lower(q: &Rational, bits: u32) -> Rational {
    debug_assert!(!q.is_negative());
    let (n, d) = (q.numer(), q.denom());
    let scale = BigInt::one() << (2 * bits as usize);
    let r = (n * d * scale).sqrt();
    Rational::new(r, d * (BigInt::one() << bits as usize))
}

/// `√q` rounded up to a multiple of `2^-bits` (or finer); exact when `q` is a
/// perfect square at that resolution.
pub fn sqrt_upper(q: &Rational, bits: u32) -> Rational {
    debug_assert!(!q.is_negative());
    let (n, d) = (q.numer(), q.denom());
    let scale = BigInt::one() << (2 * bits as usize);
    let m = n * d * scale;
    let r = m.sqrt();
    let r = if &r * &r == m { r } else { r + 1 };
    Rational::new(r, d * (BigInt::one() << bits as usize))
}

/// `a + b√d`, compared exactly.
#[derive(Clone, Debug)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub d: Rational,
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Surd {
            a,
            b: Rational::zero(),
            d: Rational::zero(),
        }
    }

    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        if b.is_zero() || d.is_zero() {
            return Surd::rational(a);
        }
        Surd { a, b, d }
    }

    pub fn sign(&self) -> i8 {
        sign_surd(&self.a, &self.b, &self.d)
    }

    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        match sign_surd(&(&self.a - q), &self.b, &self.d) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * f(&self.d).sqrt()
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Surd {}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        let neg_b = -&other.b;
        match sign_two_surds(&(&self.a - &other.a), &self.b, &self.d, &neg_b, &other.d) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn signs_of_simple_surds() {
        assert_eq!(sign_surd(&int(-1), &int(1), &int(2)), 1);
        assert_eq!(sign_surd(&int(-2), &int(1), &int(2)), -1);
        assert_eq!(sign_surd(&int(-2), &int(1), &int(4)), 0);
        assert_eq!(sign_surd(&int(0), &int(-1), &int(3)), -1);
    }

    #[test]
    fn two_surd_cancellation() {
        // √2 - √8 < 0 and 3√2 - √18 = 0
        assert_eq!(sign_two_surds(&int(0), &int(1), &int(2), &int(-1), &int(8)), -1);
        assert_eq!(sign_two_surds(&int(0), &int(3), &int(2), &int(-1), &int(18)), 0);
        // 1 + √2 - √5: 2.414 vs 2.236
        assert_eq!(sign_two_surds(&int(1), &int(1), &int(2), &int(-1), &int(5)), 1);
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let q = rat(2, 1);
        let lo = sqrt_lower(&q, 20);
        let hi = sqrt_upper(&q, 20);
        assert!(&lo * &lo < q && &hi * &hi > q);
        assert_eq!(sqrt_upper(&rat(9, 4), 3), rat(3, 2));
        assert_eq!(sqrt_lower(&rat(9, 4), 3), rat(3, 2));
    }

    fn f(q: &Rational) -> f64 {
        q.to_f64().unwrap()
    }

    proptest! {
        #[test]
        fn sign_matches_float_away_from_zero(a in -1000i64..1000, b in -1000i64..1000,
                                              d in 0i64..1000, c in -1000i64..1000, e in 0i64..1000) {
            let (a, b, d, c, e) = (int(a), int(b), int(d), int(c), int(e));
            let v = f(&a) + f(&b) * f(&d).sqrt() + f(&c) * f(&e).sqrt();
            let s = sign_two_surds(&a, &b, &d, &c, &e);
            if v.abs() > 1e-6 {
                prop_assert_eq!(s, if v > 0.0 { 1 } else { -1 });
            }
        }

        #[test]
        fn sqrt_lower_is_below(n in 0i64..100000, d in 1i64..1000, bits in 0u32..40) {
            let q = rat(n, d);
            let lo = sqrt_lower(&q, bits);
            let hi = sqrt_upper(&q, bits);
            prop_assert!(&lo * &lo <= q);
            prop_assert!(&hi * &hi >= q);
        }
    }
}
