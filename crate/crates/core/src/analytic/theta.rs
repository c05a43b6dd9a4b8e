//! Genus-2 theta constants with half-integer characteristics.
//!
//! `theta[a; b](tau) = sum_n exp(pi i (n + a/2)^T tau (n + a/2) + pi i (n + a/2)^T b)`
//! for `a, b` in `{0, 1}^2`. The series is truncated to the ellipsoid
//! `m^T Y m <= R`, `m = n + a/2`, `Y = Im(tau)`. Every dropped term satisfies
//! `|term| <= exp(-pi R/2) exp(-pi m^T Y m/2)`, and summing the second factor
//! over all `m` gives at most `(2 + sqrt(2/lambda))^2` with `lambda` the
//! smallest eigenvalue of `Y`, which bounds the tail.

use super::bigcomplex::BigComplex;
use super::riemann::RiemannMatrix;
use crate::error::{Error, Result};

/// Characteristic `[a1 a2; b1 b2]`.
pub type Characteristic = ([u8; 2], [u8; 2]);

/// The ten even characteristics, in the order `theta_0, ..., theta_9`.
pub const EVEN_CHARACTERISTICS: [Characteristic; 10] = [
    ([0, 0], [0, 0]),
    ([0, 0], [1, 1]),
    ([0, 0], [1, 0]),
    ([0, 0], [0, 1]),
    ([1, 0], [0, 0]),
    ([1, 0], [0, 1]),
    ([0, 1], [0, 0]),
    ([1, 1], [0, 0]),
    ([0, 1], [1, 0]),
    ([1, 1], [1, 1]),
];

pub const ODD_CHARACTERISTICS: [Characteristic; 6] =
    [([1, 0], [1, 0]), ([1, 0], [1, 1]), ([0, 1], [0, 1]), ([0, 1], [1, 1]), ([1, 1], [1, 0]), ([1, 1], [0, 1])];

/// Give up when the truncated series would need more terms than this.
pub const MAX_TERMS: u64 = 4_000_000;

const GUARD_BITS: usize = 32;

#[derive(Clone, Debug)]
pub struct ThetaConstants {
    pub even: [BigComplex; 10],
    pub odd: [BigComplex; 6],
    /// Number of lattice points summed per characteristic class.
    pub terms: u64,
}

impl ThetaConstants {
    /// `log2` of the largest odd theta constant.
    pub fn max_odd_log2(&self) -> f64 {
        self.odd.iter().map(BigComplex::log2_abs).fold(f64::NEG_INFINITY, f64::max)
    }

    /// The odd theta constants vanish to `2^-(prec-8)`.
    pub fn odd_vanish(&self, prec: usize) -> bool {
        self.max_odd_log2() < -((prec - 8) as f64)
    }
}

fn smallest_eigenvalue(y: &[[f64; 2]; 2]) -> f64 {
    let tr = y[0][0] + y[1][1];
    let det = y[0][0] * y[1][1] - y[0][1] * y[1][0];
    let disc = ((y[0][0] - y[1][1]).powi(2) + 4.0 * y[0][1] * y[1][0]).max(0.0).sqrt();
    // Stable form of (tr - disc)/2.
    2.0 * det / (tr + disc)
}

/// Truncation radius `R` for an absolute tail below `2^-bits`.
fn radius(lambda: f64, bits: usize) -> f64 {
    let c = 2.0 + (2.0 / lambda).sqrt();
    2.0 / std::f64::consts::PI * std::f64::consts::LN_2 * (bits as f64 + 2.0 * c.log2() + 1.0)
}

/// Integer points `u = 2m` with `u = a (mod 2)` and `m^T Y m <= r`.
fn ellipsoid_points(y: &[[f64; 2]; 2], r: f64, a: [u8; 2]) -> Vec<[i64; 2]> {
    let det = y[0][0] * y[1][1] - y[0][1] * y[1][0];
    let slack = 1.0 + 1e-9;
    let m2_max = (r * y[0][0] / det).sqrt() * slack;
    let mut out = Vec::new();
    // An integer u = bit (mod 2) with u/2 just below v.
    let start = |v: f64, bit: u8| -> i64 {
        let lo = (2.0 * v).floor() as i64 - 2;
        lo - (lo - bit as i64).rem_euclid(2)
    };
    let mut u2 = start(-m2_max, a[1]);
    while (u2 as f64) / 2.0 <= m2_max {
        let m2 = u2 as f64 / 2.0;
        let rest = r - m2 * m2 * det / y[0][0];
        if rest >= -1e-9 * r {
            let centre = -y[0][1] * m2 / y[0][0];
            let half = (rest.max(0.0) / y[0][0]).sqrt() * slack + 1e-12;
            let mut u1 = start(centre - half, a[0]);
            while (u1 as f64) / 2.0 <= centre + half {
                if (u1 as f64) / 2.0 >= centre - half {
                    out.push([u1, u2]);
                }
                u1 += 2;
            }
        }
        u2 += 2;
    }
    out
}

/// Multiply by `i^k`.
fn rotate(z: &BigComplex, k: i64) -> BigComplex {
    let p = z.prec();
    match k.rem_euclid(4) {
        0 => z.clone(),
        1 => BigComplex::new(-&z.im, z.re.clone(), p),
        2 => -z,
        _ => BigComplex::new(z.im.clone(), -&z.re, p),
    }
}

/// Sums `theta[a; b]` for every `b` at once, with absolute error below `2^-bits`.
fn theta_sums(tau: &RiemannMatrix, a: [u8; 2], bits: usize, prec: usize) -> Result<([BigComplex; 4], u64)> {
    let y = tau.imag_f64();
    let lambda = smallest_eigenvalue(&y) * 0.999;
    if !(lambda > 0.0) {
        return Err(Error::Numerical("imaginary part is not positive definite".into()));
    }
    let r = radius(lambda, bits);
    let det = y[0][0] * y[1][1] - y[0][1] * y[1][0];
    let estimate = (std::f64::consts::PI * r / det.sqrt() + 4.0 * r.sqrt() * (y[0][0] + y[1][1]) / det.sqrt() + 1.0) as u64;
    if estimate > MAX_TERMS {
        return Err(Error::PrecisionUnreachable { needed: estimate, limit: MAX_TERMS });
    }
    let pts = ellipsoid_points(&y, r, a);
    // exponent = pi i (tau11 u1^2 + 2 tau12 u1 u2 + tau22 u2^2) / 4
    let pi_i_4 = BigComplex::new(astro_float::BigFloat::from_i32(0, prec), super::bigcomplex::real::pi(prec), prec)
        .scale_real(&super::bigcomplex::real::two_pow(-2, prec));
    let t: Vec<BigComplex> = [&tau.tau[0][0], &tau.tau[0][1], &tau.tau[1][1]].iter().map(|z| &z.with_prec(prec) * &pi_i_4).collect();
    let mut sums: [BigComplex; 4] = std::array::from_fn(|_| BigComplex::zero(prec));
    for u in &pts {
        let (u1, u2) = (u[0] as i128, u[1] as i128);
        let e = &(&t[0].scale_int(u1 * u1) + &t[1].scale_int(2 * u1 * u2)) + &t[2].scale_int(u2 * u2);
        let w = e.exp();
        for (k, s) in sums.iter_mut().enumerate() {
            let b = [(k >> 1) as i64 & 1, k as i64 & 1];
            // exp(pi i m.b) = i^(u.b)
            *s = &*s + &rotate(&w, u[0] * b[0] + u[1] * b[1]);
        }
    }
    Ok((sums, pts.len() as u64))
}

fn index_of_b(b: [u8; 2]) -> usize {
    (b[0] as usize) << 1 | b[1] as usize
}

/// All sixteen theta constants at `tau`. The absolute error is below
/// `2^-prec` times the smallest even value, unless that value is itself
/// below `2^-prec`.
pub fn theta_constants(tau: &RiemannMatrix, prec: usize) -> Result<ThetaConstants> {
    let work = prec + GUARD_BITS;
    let mut bits = work;
    loop {
        let mut by_a: Vec<[BigComplex; 4]> = Vec::with_capacity(4);
        let mut terms = 0;
        for a in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let (s, n) = theta_sums(tau, a, bits, work + bits - prec)?;
            terms = terms.max(n);
            by_a.push(s);
        }
        let get = |(a, b): Characteristic| by_a[index_of_b(a)][index_of_b(b)].with_prec(prec);
        let even: [BigComplex; 10] = std::array::from_fn(|i| get(EVEN_CHARACTERISTICS[i]));
        let odd: [BigComplex; 6] = std::array::from_fn(|i| get(ODD_CHARACTERISTICS[i]));
        // Small constants need more absolute accuracy; one that is below
        // 2^-prec is left as is and counts as vanishing downstream.
        let smallest = even.iter().map(BigComplex::log2_abs).fold(f64::INFINITY, f64::min);
        let need = work + (-smallest).clamp(0.0, prec as f64).ceil() as usize;
        if need <= bits {
            return Ok(ThetaConstants { even, odd, terms });
        }
        bits = need + 16;
    }
}
