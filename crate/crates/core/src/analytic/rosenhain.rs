//! Rosenhain model `y^2 = x (x - 1) (x - l1) (x - l2) (x - l3)` from theta constants.

use super::bigcomplex::BigComplex;
use super::theta::ThetaConstants;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RosenhainTriple {
    pub lambda: [BigComplex; 3],
}

/// `l1 = t0^2 t2^2 / (t1^2 t3^2)`, `l2 = t2^2 t7^2 / (t3^2 t9^2)`,
/// `l3 = t0^2 t7^2 / (t1^2 t9^2)` with `t_i = theta_i`.
///
/// A denominator below `2^-(prec/2)` means the period matrix is not that of
/// a Jacobian.
pub fn rosenhain(thetas: &ThetaConstants) -> Result<RosenhainTriple> {
    let t = &thetas.even;
    let prec = t[0].prec();
    for i in [1, 3, 9] {
        if t[i].log2_abs() < -((prec / 2) as f64) {
            return Err(Error::VanishingTheta(i));
        }
    }
    let sq: Vec<BigComplex> = t.iter().map(BigComplex::square).collect();
    let ratio = |a: usize, b: usize, c: usize, d: usize| &(&sq[a] * &sq[b]) / &(&sq[c] * &sq[d]);
    Ok(RosenhainTriple { lambda: [ratio(0, 2, 1, 3), ratio(2, 7, 3, 9), ratio(0, 7, 1, 9)] })
}

impl RosenhainTriple {
    /// The branch points are pairwise at least `2^-(prec/2)` apart, and
    /// away from `0` and `1`.
    pub fn is_nonsingular(&self) -> bool {
        let prec = self.lambda[0].prec();
        let tol = -((prec / 2) as f64);
        let zero = BigComplex::zero(prec);
        let one = BigComplex::one(prec);
        let mut pts = vec![zero, one];
        pts.extend(self.lambda.iter().cloned());
        (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| (&pts[i] - &pts[j]).log2_abs() > tol))
    }

    /// Coefficients of `x (x - 1) (x - l1) (x - l2) (x - l3)`, constant term first.
    pub fn quintic(&self) -> Vec<BigComplex> {
        let prec = self.lambda[0].prec();
        let mut roots = vec![BigComplex::zero(prec), BigComplex::one(prec)];
        roots.extend(self.lambda.iter().cloned());
        super::igusa::poly_from_roots(&roots, &BigComplex::one(prec))
    }
}
