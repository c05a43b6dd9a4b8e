//! Small exact integer helpers shared by the arithmetic modules.

use crate::quad_order::Int;

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: Int) -> Int {
    assert!(n >= 0, "isqrt of negative value {n}");
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as Int;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Returns `Some(r)` when `n = r * r` for some `r >= 0`.
pub fn exact_sqrt(n: Int) -> Option<Int> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

pub fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: Int, b: Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1, 0);
    let (mut old_t, mut t) = (0, 1);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn floor_div(a: Int, b: Int) -> Int {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub fn ceil_div(a: Int, b: Int) -> Int {
    -floor_div(-a, b)
}

/// Distinct prime factors by trial division, ascending.
pub fn prime_factors(n: Int) -> Vec<Int> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_squarefree(n: Int) -> bool {
    let mut n = n.abs();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_boundaries() {
        for n in 0..2000 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        let big: Int = (1 << 62) + 12345;
        let r = isqrt(big * big + 7);
        assert_eq!(r, big);
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -30..30 {
            for b in -30..30 {
                let (g, u, v) = ext_gcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(u * a + v * b, g);
            }
        }
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(floor_div(-7, 2), -4);
        assert_eq!(floor_div(7, -2), -4);
        assert_eq!(floor_div(6, 3), 2);
        assert_eq!(ceil_div(-7, 2), -3);
        assert_eq!(ceil_div(7, 2), 4);
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_factors(5460), vec![2, 3, 5, 7, 13]);
        assert!(is_squarefree(1365));
        assert!(!is_squarefree(12));
    }
}
