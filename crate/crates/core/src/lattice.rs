//! Short-vector enumeration for small integral quadratic forms over `Z`.
//!
//! Basis changes are exact integer operations; floating point is used only to
//! steer LLL and to prune the Fincke-Pohst search, and every candidate is
//! re-evaluated exactly before it is returned.

use crate::quad_order::Int;

/// Symmetric integer matrix `G`; the form is `Q(v) = v^T G v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gram<const N: usize>(pub [[Int; N]; N]);

impl<const N: usize> Gram<N> {
    pub fn eval(&self, v: &[Int; N]) -> Int {
        let mut s = 0;
        for i in 0..N {
            for j in 0..N {
                s += v[i] * self.0[i][j] * v[j];
            }
        }
        s
    }

    /// Gram matrix on the basis whose vectors are the rows of `basis`.
    fn transformed(&self, basis: &[[Int; N]; N]) -> Gram<N> {
        let mut r = [[0; N]; N];
        for i in 0..N {
            for j in i..N {
                let mut s = 0;
                for k in 0..N {
                    for l in 0..N {
                        s += basis[i][k] * self.0[k][l] * basis[j][l];
                    }
                }
                r[i][j] = s;
                r[j][i] = s;
            }
        }
        Gram(r)
    }
}

fn gram_schmidt<const N: usize>(g: &Gram<N>) -> ([[f64; N]; N], [f64; N]) {
    let mut mu = [[0.0; N]; N];
    let mut bstar = [0.0; N];
    for i in 0..N {
        for j in 0..i {
            let mut s = g.0[i][j] as f64;
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * bstar[k];
            }
            mu[i][j] = s / bstar[j];
        }
        let mut s = g.0[i][i] as f64;
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * bstar[k];
        }
        bstar[i] = s;
    }
    (mu, bstar)
}

/// LLL-reduced basis (one row per basis vector, in the original coordinates) of a positive
/// definite form, with the Gram matrix on that basis.
pub fn lll<const N: usize>(g: &Gram<N>) -> ([[Int; N]; N], Gram<N>) {
    let mut basis = [[0; N]; N];
    for (i, row) in basis.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut cur = g.clone();
    let mut k = 1;
    let mut steps = 0;
    while k < N && steps < 10_000 {
        steps += 1;
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&cur);
            let q = mu[k][j].round();
            if q != 0.0 {
                let q = q as Int;
                for c in 0..N {
                    basis[k][c] -= q * basis[j][c];
                }
                cur = g.transformed(&basis);
            }
        }
        let (mu, bstar) = gram_schmidt(&cur);
        if bstar[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            basis.swap(k, k - 1);
            cur = g.transformed(&basis);
            k = k.max(2) - 1;
        } else {
            k += 1;
        }
    }
    (basis, cur)
}

/// All nonzero integer vectors `v` with `v^T G v <= bound`, in the original
/// coordinates, each paired with its exact value.
pub fn vectors_up_to<const N: usize>(g: &Gram<N>, bound: Int) -> Vec<(Int, [Int; N])> {
    let mut out = Vec::new();
    if bound <= 0 {
        return out;
    }
    let (basis, red) = lll(g);
    // Cholesky-style decomposition Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
    let (mu, bstar) = gram_schmidt(&red);
    let slack = 1e-9 * bound as f64 + 1e-6;
    let limit = bound as f64 + slack;
    let mut x = [0 as Int; N];
    enumerate(N, &mu, &bstar, limit, 0.0, &mut x, &mut |y| {
        if y.iter().all(|&c| c == 0) {
            return;
        }
        let val = red.eval(y);
        if val <= bound {
            let mut v = [0; N];
            for (i, c) in y.iter().enumerate() {
                for t in 0..N {
                    v[t] += c * basis[i][t];
                }
            }
            out.push((val, v));
        }
    });
    out.sort();
    out
}

/// Depth-first search over the coordinates from the last to the first, with
/// `partial` the contribution of coordinates `level..N`.
fn enumerate<const N: usize>(
    level: usize,
    mu: &[[f64; N]; N],
    bstar: &[f64; N],
    limit: f64,
    partial: f64,
    x: &mut [Int; N],
    visit: &mut impl FnMut(&[Int; N]),
) {
    if level == 0 {
        visit(x);
        return;
    }
    let i = level - 1;
    let mut center = 0.0;
    for j in level..N {
        center -= mu[j][i] * x[j] as f64;
    }
    let rem = (limit - partial).max(0.0);
    let r = (rem / bstar[i]).sqrt();
    let lo = (center - r).ceil() as Int;
    let hi = (center + r).floor() as Int;
    for c in lo..=hi {
        x[i] = c;
        let t = c as f64 - center;
        let p = partial + t * t * bstar[i];
        if p <= limit {
            enumerate(i, mu, bstar, limit, p, x, visit);
        }
    }
    x[i] = 0;
}
