//! Recognition of rationals from high-precision approximations by continued fractions.

use astro_float::RoundingMode;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bigcomplex::{real, BigComplex};

const RM: RoundingMode = RoundingMode::ToEven;

/// The first continued-fraction convergent `p/q` of `Re(value)` with
/// `|value - p/q| < 2^-(prec/2)`, provided `|p|, q <= max_height` and
/// `|Im(value)| < 2^-(prec/2)`. Returns `None` instead of guessing.
pub fn rational_recognition(value: &BigComplex, max_height: &BigInt) -> Option<BigRational> {
    let prec = value.prec();
    let tol = -((prec / 2) as f64);
    if real::log2_abs(&value.im) >= tol {
        return None;
    }
    let x = &value.re;
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x.clone();
    for _ in 0..4 * prec {
        let a = real::floor_to_bigint(&y);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if h2.abs() > *max_height || k2 > *max_height {
            return None;
        }
        // |x - h/k| = |x k - h| / k
        let err = x.mul(&real::from_bigint(&k2, prec), prec, RM).sub(&real::from_bigint(&h2, prec), prec, RM);
        if real::log2_abs(&err) - real::log2_abs(&real::from_bigint(&k2, prec)) < tol {
            return Some(BigRational::new(h2, k2));
        }
        let frac = y.sub(&real::from_bigint(&a, prec), prec, RM);
        if frac.is_zero() {
            return None;
        }
        y = frac.reciprocal(prec, RM);
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
    None
}
